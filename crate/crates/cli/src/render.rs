//! Text, JSON and CSV output.

use std::fmt::Write;

use clap::ValueEnum;
use perazzo_core::doubling::{Status, VerificationReport};
use perazzo_core::BettiTable;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    #[default]
    Text,
    Json,
    Csv,
}

/// Row `r` of the text layout holds `beta_{i, i+r}`; zeros print as `·`.
pub fn render_betti_table(b: &BettiTable, format: OutputFormat) -> String {
    match format {
        OutputFormat::Text => betti_text(b),
        OutputFormat::Json => serde_json::to_string_pretty(b).expect("table serializes") + "\n",
        OutputFormat::Csv => betti_csv(b),
    }
}

fn betti_csv(b: &BettiTable) -> String {
    let mut out = String::from("i,j,beta\n");
    for (i, j, v) in b.iter() {
        writeln!(out, "{i},{j},{v}").unwrap();
    }
    out
}

fn betti_text(b: &BettiTable) -> String {
    let last = b.projective_dimension().unwrap_or(b.nvars());
    let totals: Vec<u64> = (0..=last).map(|i| b.total(i)).collect();
    let width = totals
        .iter()
        .map(|t| t.to_string().len())
        .chain(std::iter::once(last.to_string().len()))
        .max()
        .unwrap_or(1);
    let Some((lo, hi)) = b.row_range() else {
        let mut out = String::from("      ");
        for i in 0..=last {
            write!(out, " {i:>width$}").unwrap();
        }
        return out + "\n";
    };
    let label = 6.max(hi.to_string().len().max(lo.to_string().len()) + 1);
    let mut out = String::new();
    write!(out, "{:label$}", "").unwrap();
    for i in 0..=last {
        write!(out, " {i:>width$}").unwrap();
    }
    out.push('\n');
    write!(out, "{:>label$}", "total:").unwrap();
    for t in &totals {
        write!(out, " {t:>width$}").unwrap();
    }
    out.push('\n');
    for r in lo..=hi {
        write!(out, "{:>label$}", format!("{r}:")).unwrap();
        for v in b.row(r, last) {
            if v == 0 {
                write!(out, " {:>width$}", "·").unwrap();
            } else {
                write!(out, " {v:>width$}").unwrap();
            }
        }
        out.push('\n');
    }
    out
}

fn status_word(s: Status) -> &'static str {
    match s {
        Status::Pass => "PASS",
        Status::Fail => "FAIL",
        Status::Skipped => "SKIP",
    }
}

pub fn render_report(rep: &VerificationReport, format: OutputFormat) -> String {
    match format {
        OutputFormat::Json | OutputFormat::Csv => {
            serde_json::to_string_pretty(rep).expect("report serializes") + "\n"
        }
        OutputFormat::Text => report_text(rep),
    }
}

fn report_text(rep: &VerificationReport) -> String {
    let mut out = String::new();
    writeln!(out, "{}", rep.subject).unwrap();
    let c = &rep.config;
    let field = if c.characteristic == 0 {
        "QQ".to_string()
    } else {
        format!("GF({})", c.characteristic)
    };
    let seed = c.seed.map_or("none".to_string(), |s| s.to_string());
    writeln!(
        out,
        "field {field}, seed {seed}, tier {:?}, oracle budget {} variables, resamples {}",
        c.tier, c.oracle_max_vars, c.resamples
    )
    .unwrap();
    if let Some(spec) = &rep.spec {
        for (i, l) in spec.linear_forms.iter().enumerate() {
            writeln!(out, "L_{i} = {l:?}").unwrap();
        }
    }
    out.push('\n');
    let w = rep.checks.iter().map(|c| c.name.len()).max().unwrap_or(0);
    for ch in &rep.checks {
        write!(
            out,
            "{} {:w$}  {}",
            status_word(ch.status),
            ch.name,
            ch.observed
        )
        .unwrap();
        if ch.status == Status::Fail {
            write!(out, "  (expected {})", ch.expected).unwrap();
        }
        out.push('\n');
    }
    for (name, table) in &rep.tables {
        writeln!(out, "\n{name}:").unwrap();
        out.push_str(&betti_text(table));
    }
    writeln!(out, "\nverdict: {}", status_word(rep.verdict)).unwrap();
    if let Some(ms) = rep.timing_ms {
        writeln!(out, "time: {ms} ms").unwrap();
    }
    out
}
