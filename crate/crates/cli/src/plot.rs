//! Static log-log chart of sweep rows as SVG.

use std::fmt::Write;

use cvnn_core::{ArchKind, Mode, SweepRow};

const WIDTH: f64 = 720.0;
const HEIGHT: f64 = 480.0;
const MARGIN: f64 = 64.0;
const COLORS: [&str; 6] = [
    "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b",
];

fn color(arch: ArchKind) -> &'static str {
    let k = ArchKind::ALL.iter().position(|&a| a == arch).unwrap_or(0);
    COLORS[k % COLORS.len()]
}

fn decades(lo: f64, hi: f64) -> (f64, f64) {
    let a = lo.log10().floor();
    let b = hi.log10().ceil();
    (a, if b > a { b } else { a + 1.0 })
}

/// One polyline per architecture (dashed for inference), axes in decades.
pub fn render(rows: &[SweepRow]) -> String {
    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(svg, r#"<rect width="100%" height="100%" fill="white"/>"#);

    let pts: Vec<(f64, f64)> = rows
        .iter()
        .map(|r| (r.neurons as f64, r.multiplications as f64))
        .collect();
    let (xmin, xmax) = pts
        .iter()
        .fold((f64::MAX, f64::MIN), |(a, b), p| (a.min(p.0), b.max(p.0)));
    let (ymin, ymax) = pts
        .iter()
        .fold((f64::MAX, f64::MIN), |(a, b), p| (a.min(p.1), b.max(p.1)));
    let (x0, x1) = if pts.is_empty() {
        (0.0, 1.0)
    } else {
        decades(xmin, xmax)
    };
    let (y0, y1) = if pts.is_empty() {
        (0.0, 1.0)
    } else {
        decades(ymin, ymax)
    };
    let (pw, ph) = (WIDTH - 2.0 * MARGIN, HEIGHT - 2.0 * MARGIN);
    let sx = |x: f64| MARGIN + (x.log10() - x0) / (x1 - x0) * pw;
    let sy = |y: f64| HEIGHT - MARGIN - (y.log10() - y0) / (y1 - y0) * ph;

    let _ = writeln!(
        svg,
        r#"<rect x="{MARGIN}" y="{MARGIN}" width="{pw}" height="{ph}" fill="none" stroke="black"/>"#
    );
    for e in (x0 as i32)..=(x1 as i32) {
        let x = sx(10f64.powi(e));
        let _ = writeln!(
            svg,
            r##"<line x1="{x:.1}" y1="{MARGIN}" x2="{x:.1}" y2="{:.1}" stroke="#ddd"/><text x="{x:.1}" y="{:.1}" text-anchor="middle">1e{e}</text>"##,
            HEIGHT - MARGIN,
            HEIGHT - MARGIN + 18.0
        );
    }
    for e in (y0 as i32)..=(y1 as i32) {
        let y = sy(10f64.powi(e));
        let _ = writeln!(
            svg,
            r##"<line x1="{MARGIN}" y1="{y:.1}" x2="{:.1}" y2="{y:.1}" stroke="#ddd"/><text x="{:.1}" y="{:.1}" text-anchor="end">1e{e}</text>"##,
            WIDTH - MARGIN,
            MARGIN - 6.0,
            y + 4.0
        );
    }
    let _ = writeln!(
        svg,
        r#"<text x="{:.1}" y="{:.1}" text-anchor="middle">neurons N</text>"#,
        WIDTH / 2.0,
        HEIGHT - 16.0
    );
    let _ = writeln!(
        svg,
        r#"<text x="16" y="{:.1}" text-anchor="middle" transform="rotate(-90 16 {:.1})">real multiplications</text>"#,
        HEIGHT / 2.0,
        HEIGHT / 2.0
    );

    let mut legend = 0;
    for arch in ArchKind::ALL {
        for mode in Mode::ALL {
            let series: Vec<String> = rows
                .iter()
                .filter(|r| r.arch == arch && r.mode == mode)
                .map(|r| {
                    format!(
                        "{:.1},{:.1}",
                        sx(r.neurons as f64),
                        sy(r.multiplications as f64)
                    )
                })
                .collect();
            if series.is_empty() {
                continue;
            }
            let dash = if mode == Mode::Inference {
                r#" stroke-dasharray="6 4""#
            } else {
                ""
            };
            let _ = writeln!(
                svg,
                r#"<polyline fill="none" stroke="{}" stroke-width="2"{dash} points="{}"/>"#,
                color(arch),
                series.join(" ")
            );
            let ly = MARGIN + 14.0 + 16.0 * f64::from(legend);
            let _ = writeln!(
                svg,
                r#"<line x1="{:.1}" y1="{ly:.1}" x2="{:.1}" y2="{ly:.1}" stroke="{}" stroke-width="2"{dash}/><text x="{:.1}" y="{:.1}">{} {}</text>"#,
                MARGIN + 10.0,
                MARGIN + 34.0,
                color(arch),
                MARGIN + 40.0,
                ly + 4.0,
                arch.display_name(),
                mode
            );
            legend += 1;
        }
    }
    svg.push_str("</svg>\n");
    svg
}
