use clap::ValueEnum;
use serde::{Deserialize, Serialize};
use toyqft::fock::BasisEntry;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
    Table,
}

#[derive(Debug, Clone, Serialize)]
pub struct ModeSummary {
    pub id: usize,
    pub label: String,
    pub statistics: String,
    pub species: u32,
}

#[derive(Debug, Clone, Serialize)]
pub struct DimsReport {
    pub kind: &'static str,
    pub dimension: usize,
    pub cutoff_s: usize,
    pub modes: Vec<ModeSummary>,
    pub basis: Vec<BasisEntry>,
}

#[derive(Debug, Clone, Serialize)]
pub struct IdentityCheck {
    pub identity: String,
    pub max_violation: f64,
    pub passed: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct VerifyReport {
    pub kind: &'static str,
    pub dimension: usize,
    pub seed: u64,
    pub tolerance: f64,
    pub passed: bool,
    pub checks: Vec<IdentityCheck>,
}

#[derive(Debug, Clone, Serialize)]
pub struct EigenLine {
    pub lambda: f64,
    pub multiplicity: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct SpectrumReport {
    pub kind: &'static str,
    pub target: &'static str,
    pub dimension: usize,
    pub group_tol: f64,
    pub eigenvalues: Vec<EigenLine>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ScatterLine {
    pub out_state: String,
    pub probability: f64,
    pub amplitude: [f64; 2],
    pub conserves_p: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct ScatterReport {
    pub kind: &'static str,
    pub dimension: usize,
    pub in_state: String,
    pub coupling: f64,
    pub threshold: f64,
    pub enforce_conservation: bool,
    pub rows: Vec<ScatterLine>,
}

#[derive(Debug, Clone, Serialize)]
pub struct LatticeReport {
    pub kind: &'static str,
    pub mass: u32,
    pub max_energy: u32,
    pub points: Vec<[i64; 4]>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub x0: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub space_volume: Option<usize>,
}

#[derive(Debug, Clone, Serialize)]
#[serde(untagged)]
pub enum Report {
    Dims(DimsReport),
    Verify(VerifyReport),
    Spectrum(SpectrumReport),
    Scatter(ScatterReport),
    Lattice(LatticeReport),
}

/// Formats `x` like C's `%.{digits}g`; magnitudes below 1e-12 print as `0`.
pub fn fmt_sig(x: f64, digits: usize) -> String {
    if !x.is_finite() {
        return x.to_string();
    }
    if x.abs() < 1e-12 {
        return "0".to_string();
    }
    let digits = digits.max(1);
    let sci = format!("{:.*e}", digits - 1, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent");
    let exp: i32 = exp.parse().expect("integer exponent");
    if exp < -5 || exp >= digits as i32 {
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{}e{sign}{:02}", trim_zeros(mantissa), exp.abs())
    } else {
        let decimals = (digits as i32 - 1 - exp).max(0) as usize;
        trim_zeros(&format!("{x:.decimals$}")).to_string()
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

fn num(x: f64) -> String {
    fmt_sig(x, 12)
}

/// Header and rows shared by the CSV and table renderings.
fn tabular(report: &Report, pretty: bool) -> (Vec<&'static str>, Vec<Vec<String>>) {
    let f = |x: f64| if pretty { num(x) } else { x.to_string() };
    match report {
        Report::Dims(r) => (
            vec!["index", "ket"],
            r.basis
                .iter()
                .map(|b| vec![b.index.to_string(), b.ket.clone()])
                .collect(),
        ),
        Report::Verify(r) => (
            vec!["identity", "max_violation", "passed"],
            r.checks
                .iter()
                .map(|c| {
                    let v = if pretty {
                        format!("{:.3e}", c.max_violation)
                    } else {
                        c.max_violation.to_string()
                    };
                    vec![c.identity.clone(), v, c.passed.to_string()]
                })
                .collect(),
        ),
        Report::Spectrum(r) => (
            vec!["lambda", "multiplicity"],
            r.eigenvalues
                .iter()
                .map(|e| vec![f(e.lambda), e.multiplicity.to_string()])
                .collect(),
        ),
        Report::Scatter(r) => (
            vec!["out_state", "probability", "conserves_p"],
            r.rows
                .iter()
                .map(|l| {
                    vec![
                        l.out_state.clone(),
                        f(l.probability),
                        l.conserves_p.to_string(),
                    ]
                })
                .collect(),
        ),
        Report::Lattice(r) => (
            vec!["p0", "p1", "p2", "p3"],
            r.points
                .iter()
                .map(|p| p.iter().map(i64::to_string).collect())
                .collect(),
        ),
    }
}

fn summary(report: &Report) -> Option<String> {
    match report {
        Report::Dims(r) => Some(format!("dim = {}", r.dimension)),
        Report::Verify(r) => {
            let failed = r.checks.iter().filter(|c| !c.passed).count();
            Some(if failed == 0 {
                format!(
                    "all {} identities pass (tol {:e}, seed {})",
                    r.checks.len(),
                    r.tolerance,
                    r.seed
                )
            } else {
                format!(
                    "{failed} of {} identities FAIL (tol {:e}, seed {})",
                    r.checks.len(),
                    r.tolerance,
                    r.seed
                )
            })
        }
        Report::Spectrum(r) => Some(format!("{} spectrum, dim = {}", r.target, r.dimension)),
        Report::Scatter(r) => Some(format!("in state {}, dim = {}", r.in_state, r.dimension)),
        Report::Lattice(r) => Some(match (r.x0, r.space_volume) {
            (Some(x0), Some(v)) => format!("{} points; V({x0}) = {v}", r.points.len()),
            _ => format!("{} points", r.points.len()),
        }),
    }
}

fn render_table(header: &[&str], rows: &[Vec<String>]) -> String {
    let mut widths: Vec<usize> = header.iter().map(|h| h.len()).collect();
    for row in rows {
        for (w, cell) in widths.iter_mut().zip(row) {
            *w = (*w).max(cell.chars().count());
        }
    }
    let numeric: Vec<bool> = (0..header.len())
        .map(|k| !rows.is_empty() && rows.iter().all(|r| r[k].parse::<f64>().is_ok()))
        .collect();
    let line = |cells: Vec<&str>| {
        let parts: Vec<String> = cells
            .iter()
            .enumerate()
            .map(|(k, c)| {
                if numeric[k] {
                    format!("{c:>w$}", w = widths[k])
                } else {
                    format!("{c:<w$}", w = widths[k])
                }
            })
            .collect();
        parts.join("  ").trim_end().to_string()
    };
    let mut out = String::new();
    out.push_str(&line(header.to_vec()));
    out.push('\n');
    let rule: Vec<String> = widths.iter().map(|w| "-".repeat(*w)).collect();
    out.push_str(&rule.join("  "));
    out.push('\n');
    for row in rows {
        out.push_str(&line(row.iter().map(String::as_str).collect()));
        out.push('\n');
    }
    out
}

pub fn emit_report(report: &Report, format: Format) -> Vec<u8> {
    match format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(report).expect("reports serialize");
            s.push('\n');
            s.into_bytes()
        }
        Format::Csv => {
            let (header, rows) = tabular(report, false);
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(&header).expect("in-memory write");
            for row in rows {
                w.write_record(&row).expect("in-memory write");
            }
            w.into_inner().expect("in-memory flush")
        }
        Format::Table => {
            let (header, rows) = tabular(report, true);
            let mut out = String::new();
            if let Some(s) = summary(report) {
                out.push_str(&s);
                out.push_str("\n\n");
            }
            out.push_str(&render_table(&header, &rows));
            out.into_bytes()
        }
    }
}
