//! Network code must multiply and divide only through the metered kernels.

use std::fs;
use std::path::Path;

use regex::Regex;

fn code_lines(source: &str) -> Vec<(usize, String)> {
    let string_lit = Regex::new(r#""([^"\\]|\\.)*""#).unwrap();
    let mut out = Vec::new();
    for (i, line) in source.lines().enumerate() {
        if line.trim_start().starts_with("#[cfg(test)]") {
            break;
        }
        let code = line.split("//").next().unwrap_or("");
        out.push((i + 1, string_lit.replace_all(code, "\"\"").into_owned()));
    }
    out
}

#[test]
fn networks_use_only_metered_arithmetic() {
    // operand, then `*` or `/` (optionally compound), then operand
    let binary = Regex::new(r"[\w\)\]]\s*[*/]=?\s*[\w\(\-\.]").unwrap();
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("src/networks");
    let mut offenders = Vec::new();
    let mut checked = 0;
    for entry in fs::read_dir(&dir).unwrap() {
        let path = entry.unwrap().path();
        if path.file_name().unwrap() == "init.rs" {
            continue;
        }
        checked += 1;
        let source = fs::read_to_string(&path).unwrap();
        for (n, line) in code_lines(&source) {
            if binary.is_match(&line) {
                offenders.push(format!("{}:{n}: {}", path.display(), line.trim()));
            }
        }
    }
    assert!(
        checked >= 6,
        "expected the network sources under {}",
        dir.display()
    );
    assert!(
        offenders.is_empty(),
        "raw arithmetic in network code:\n{}",
        offenders.join("\n")
    );
}

#[test]
fn detector_flags_raw_products() {
    let binary = Regex::new(r"[\w\)\]]\s*[*/]=?\s*[\w\(\-\.]").unwrap();
    assert!(binary.is_match("let y = a * b;"));
    assert!(binary.is_match("x /= 2.0;"));
    assert!(!binary.is_match("*gn += meter.cmul(w, e);"));
    assert!(!binary.is_match("*t = (*t + *s).max(floor);"));
}
