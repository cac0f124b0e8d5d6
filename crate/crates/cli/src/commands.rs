use std::fs;
use std::io::Write;
use std::path::Path;

use cvnn_core::harness::{
    empirical_asymptote, geometric_series, reproduce_use_cases, verify_counts_with, CellStatus,
    SpecGenerator, SpecShape, UseCaseReport, UseCaseTable,
};
use cvnn_core::{
    asymptotic_class, cost, sweep, ArchKind, AsymptoticRegime, Mode, NRange, SweepRow,
};

use crate::error::CliError;
use crate::spec::{build_spec, ModeArg, Neurons, RunConfig};
use crate::{AsymArgs, CostArgs, ReproduceArgs, SweepArgs, VerifyArgs};

pub fn cost_cmd(args: &CostArgs, out: &mut impl Write) -> Result<(), CliError> {
    let (spec, mode) = match &args.config {
        Some(path) => {
            let cfg = RunConfig::load(path)?;
            (cfg.spec()?, args.mode.unwrap_or(cfg.mode))
        }
        None => {
            let missing =
                |flag: &str| CliError::Invalid(format!("--{flag} is required without --config"));
            let arch = args.arch.ok_or_else(|| missing("arch"))?;
            let inputs = args.inputs.ok_or_else(|| missing("inputs"))?;
            let outputs = args.outputs.ok_or_else(|| missing("outputs"))?;
            let neurons = args.neurons.as_ref().ok_or_else(|| missing("neurons"))?;
            (
                build_spec(arch, inputs, outputs, neurons, args.bottlenecks.as_deref())?,
                args.mode.unwrap_or(ModeArg::Both),
            )
        }
    };
    let modes = mode.modes();
    for m in &modes {
        let c = cost(&spec, *m)?;
        if modes.len() == 1 {
            writeln!(out, "{c}").map_err(stdout_err)?;
        } else {
            writeln!(out, "{m} {c}").map_err(stdout_err)?;
        }
    }
    Ok(())
}

fn stdout_err(e: std::io::Error) -> CliError {
    CliError::Io(format!("standard output: {e}"))
}

pub fn sweep_rows(args: &SweepArgs) -> Result<Vec<SweepRow>, CliError> {
    let range: NRange = args.n_range.parse()?;
    let archs = if args.arch.is_empty() {
        ArchKind::ALL.to_vec()
    } else {
        args.arch.clone()
    };
    Ok(sweep(
        &archs,
        &args.mode.modes(),
        args.inputs,
        args.outputs,
        range,
    )?)
}

pub fn write_csv(rows: &[SweepRow], sink: impl Write) -> Result<(), csv::Error> {
    let mut w = csv::Writer::from_writer(sink);
    w.write_record(["arch", "mode", "P", "R", "N", "multiplications"])?;
    for r in rows {
        w.write_record([
            r.arch.slug().to_string(),
            r.mode.slug().to_string(),
            r.inputs.to_string(),
            r.outputs.to_string(),
            r.neurons.to_string(),
            r.multiplications.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

pub fn sweep_cmd(args: &SweepArgs, out: &mut impl Write) -> Result<(), CliError> {
    let rows = sweep_rows(args)?;
    match &args.out {
        Some(path) => {
            let file = fs::File::create(path).map_err(|e| CliError::io(path, e))?;
            write_csv(&rows, file).map_err(|e| CliError::io(path, e))?;
            writeln!(out, "wrote {} rows to {}", rows.len(), path.display()).map_err(stdout_err)?;
        }
        None => write_csv(&rows, &mut *out).map_err(|e| CliError::Io(e.to_string()))?,
    }
    if let Some(path) = &args.plot {
        fs::write(path, crate::plot::render(&rows)).map_err(|e| CliError::io(path, e))?;
    }
    Ok(())
}

pub fn verify_cmd(args: &VerifyArgs, out: &mut impl Write) -> Result<(), CliError> {
    let mut generator = SpecGenerator::new(args.seed, SpecShape::Mixed);
    let offset = u64::from(args.perturb_formula);
    let reports = verify_counts_with(&mut generator, args.trials, |s, m| {
        cost(s, m).map(|c| c + offset)
    })?;
    // one training and one inference report per spec
    let specs = reports.len() / 2;
    let matched = reports
        .chunks(2)
        .filter(|pair| pair.iter().all(|r| r.matches))
        .count();
    for r in reports.iter().filter(|r| !r.matches) {
        writeln!(out, "{r}").map_err(stdout_err)?;
    }
    writeln!(out, "{matched}/{specs} match").map_err(stdout_err)?;
    if matched == specs {
        Ok(())
    } else {
        Err(CliError::Verification(format!(
            "{} of {specs} specs mismatched",
            specs - matched
        )))
    }
}

fn load_table(path: Option<&Path>) -> Result<UseCaseTable, CliError> {
    match path {
        None => Ok(UseCaseTable::bundled()),
        Some(p) => {
            let text = fs::read_to_string(p).map_err(|e| CliError::io(p, e))?;
            Ok(UseCaseTable::from_json(&text)?)
        }
    }
}

pub fn render_report(report: &UseCaseReport) -> String {
    let cell_text = |app: &str, arch: ArchKind, mode: Mode| -> String {
        match report.cell(app, arch, mode) {
            None => "-".into(),
            Some(c) => match (c.status, c.computed) {
                (CellStatus::Match, _) => format!("{} ✓", c.expected),
                (CellStatus::Open, _) => format!("{} open", c.expected),
                (CellStatus::Mismatch, got) => {
                    format!("{} ✗ got {}", c.expected, got.unwrap_or_default())
                }
            },
        }
    };
    let mut header = vec!["CVNN".to_string()];
    for (_, name) in &report.applications {
        let short = name.split_whitespace().next().unwrap_or(name);
        header.push(format!("{short} training"));
        header.push(format!("{short} inference"));
    }
    let mut rows = vec![header];
    for arch in ArchKind::ALL {
        let mut row = vec![arch.display_name().to_string()];
        for (slug, _) in &report.applications {
            row.push(cell_text(slug, arch, Mode::Training));
            row.push(cell_text(slug, arch, Mode::Inference));
        }
        rows.push(row);
    }
    let columns = rows[0].len();
    let widths: Vec<usize> = (0..columns)
        .map(|k| rows.iter().map(|r| r[k].chars().count()).max().unwrap_or(0))
        .collect();
    let mut text = String::new();
    for (i, row) in rows.iter().enumerate() {
        let cells: Vec<String> = row
            .iter()
            .zip(&widths)
            .map(|(c, &w)| format!("{c}{}", " ".repeat(w - c.chars().count())))
            .collect();
        text.push_str(cells.join(" | ").trim_end());
        text.push('\n');
        if i == 0 {
            let rule: Vec<String> = widths.iter().map(|&w| "-".repeat(w)).collect();
            text.push_str(&rule.join("-+-"));
            text.push('\n');
        }
    }
    for (_, name) in &report.applications {
        text.push_str(&format!(
            "\n{}: {name}",
            name.split_whitespace().next().unwrap_or(name)
        ));
    }
    text.push_str(&format!(
        "\n\n{} ✓, {} open, {} mismatched\n",
        report.matched(),
        report.open(),
        report.mismatched()
    ));
    text
}

pub fn reproduce_cmd(args: &ReproduceArgs, out: &mut impl Write) -> Result<(), CliError> {
    let table = load_table(args.table.as_deref())?;
    let report = reproduce_use_cases(&table)?;
    write!(out, "{}", render_report(&report)).map_err(stdout_err)?;
    if report.passed() {
        Ok(())
    } else {
        Err(CliError::Verification(format!(
            "{} derived cells do not reproduce",
            report.mismatched()
        )))
    }
}

pub fn asym_cmd(args: &AsymArgs, out: &mut impl Write) -> Result<(), CliError> {
    let regime: AsymptoticRegime = args.regime.parse()?;
    let class = asymptotic_class(args.arch, regime)?;
    writeln!(
        out,
        "{} {} ({}): {class}",
        args.arch.display_name(),
        regime.slug(),
        regime.coupling()
    )
    .map_err(stdout_err)?;
    if args.fit {
        let hi = if regime == AsymptoticRegime::DeepBalanced {
            8
        } else {
            14
        };
        for mode in Mode::ALL {
            let fit = empirical_asymptote(args.arch, regime, mode, &geometric_series(4, hi))?;
            writeln!(out, "{mode} slope over N=2^4..2^{hi}: {:.4}", fit.slope)
                .map_err(stdout_err)?;
        }
    }
    Ok(())
}

/// Neuron argument parser for clap.
pub fn parse_neurons(s: &str) -> Result<Neurons, String> {
    s.parse()
}
