//! Grid reports in csv, json, text and LaTeX. Rows are in `(g, n)` order and
//! every fraction is written with separate numerator and denominator.

use std::fmt::Write as _;

use serde::Serialize;

use crate::certificate::{Fraction, IntervalDto};
use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::verifier::{FeasibleSet, GridCell};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, serde::Deserialize, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ReportFormat {
    Json,
    Csv,
    Latex,
    Text,
}

impl std::str::FromStr for ReportFormat {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "json" => Ok(ReportFormat::Json),
            "csv" => Ok(ReportFormat::Csv),
            "latex" => Ok(ReportFormat::Latex),
            "text" => Ok(ReportFormat::Text),
            _ => Err(Error::Parse(format!("unknown format `{s}`"))),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct GridRow {
    pub g: u32,
    pub n: u32,
    pub verdict: Option<String>,
    pub epsilon: Option<Fraction>,
    pub epsilon_interval: Option<IntervalDto>,
    pub binding_constraints: Vec<String>,
    pub error: Option<String>,
}

impl GridRow {
    pub fn from_cell<T: Scalar>(cell: &GridCell<T>) -> Self {
        match &cell.result {
            Ok(c) => GridRow {
                g: cell.g,
                n: cell.n,
                verdict: Some(c.verdict.to_string()),
                epsilon: c.epsilon.as_ref().map(Fraction::from_scalar),
                epsilon_interval: match &c.interval {
                    FeasibleSet::Empty => None,
                    FeasibleSet::Interval { lo, hi, hi_closed } => Some(IntervalDto {
                        lo: Fraction::from_scalar(lo),
                        hi: Fraction::from_scalar(hi),
                        hi_closed: *hi_closed,
                    }),
                },
                binding_constraints: c.binding_constraints.iter().map(ToString::to_string).collect(),
                error: None,
            },
            Err(e) => GridRow {
                g: cell.g,
                n: cell.n,
                verdict: None,
                epsilon: None,
                epsilon_interval: None,
                binding_constraints: Vec::new(),
                error: Some(e.to_string()),
            },
        }
    }
}

fn parts(f: Option<&Fraction>) -> (String, String) {
    match f {
        Some(f) => (f.0.numer().to_string(), f.0.denom().to_string()),
        None => (String::new(), String::new()),
    }
}

fn fraction_text(f: Option<&Fraction>) -> String {
    f.map(|f| f.0.to_string()).unwrap_or_else(|| "-".into())
}

fn interval_text(iv: Option<&IntervalDto>) -> String {
    match iv {
        None => "∅".into(),
        Some(iv) => format!("[{}, {}{}", iv.lo.0, iv.hi.0, if iv.hi_closed { "]" } else { ")" }),
    }
}

pub fn render_grid(rows: &[GridRow], format: ReportFormat) -> Result<String> {
    match format {
        ReportFormat::Json => {
            let mut s = serde_json::to_string_pretty(rows).map_err(|e| Error::Parse(e.to_string()))?;
            s.push('\n');
            Ok(s)
        }
        ReportFormat::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            let io = |e: csv::Error| Error::Parse(e.to_string());
            w.write_record([
                "g", "n", "verdict", "lo_num", "lo_den", "hi_num", "hi_den", "hi_closed", "epsilon_num",
                "epsilon_den", "binding_constraints", "error",
            ])
            .map_err(io)?;
            for r in rows {
                let iv = r.epsilon_interval.as_ref();
                let (lo_n, lo_d) = parts(iv.map(|i| &i.lo));
                let (hi_n, hi_d) = parts(iv.map(|i| &i.hi));
                let (e_n, e_d) = parts(r.epsilon.as_ref());
                w.write_record([
                    r.g.to_string(),
                    r.n.to_string(),
                    r.verdict.clone().unwrap_or_default(),
                    lo_n,
                    lo_d,
                    hi_n,
                    hi_d,
                    iv.map(|i| i.hi_closed.to_string()).unwrap_or_default(),
                    e_n,
                    e_d,
                    r.binding_constraints.join(";"),
                    r.error.clone().unwrap_or_default(),
                ])
                .map_err(io)?;
            }
            let bytes = w.into_inner().map_err(|e| Error::Parse(e.to_string()))?;
            String::from_utf8(bytes).map_err(|e| Error::Parse(e.to_string()))
        }
        ReportFormat::Text => {
            let mut out = String::new();
            for r in rows {
                let _ = match &r.error {
                    Some(e) => writeln!(out, "g={:<3} n={:<4} error: {e}", r.g, r.n),
                    None => writeln!(
                        out,
                        "g={:<3} n={:<4} {:<19} ε ∈ {:<24} chosen {:<12} binding {}",
                        r.g,
                        r.n,
                        r.verdict.as_deref().unwrap_or(""),
                        interval_text(r.epsilon_interval.as_ref()),
                        fraction_text(r.epsilon.as_ref()),
                        r.binding_constraints.join(" "),
                    ),
                };
            }
            Ok(out)
        }
        ReportFormat::Latex => {
            let frac = |f: &Fraction| {
                if f.0.is_integer() {
                    f.0.numer().to_string()
                } else {
                    format!("\\tfrac{{{}}}{{{}}}", f.0.numer(), f.0.denom())
                }
            };
            let mut out = String::from("\\begin{tabular}{rrll}\n$g$ & $n$ & verdict & $\\varepsilon$ \\\\\n\\hline\n");
            for r in rows {
                let verdict = r.verdict.as_deref().unwrap_or("error");
                let eps = match &r.epsilon_interval {
                    None => "$\\emptyset$".to_string(),
                    Some(iv) => format!(
                        "$[{}, {}{}$",
                        frac(&iv.lo),
                        frac(&iv.hi),
                        if iv.hi_closed { "]" } else { ")" }
                    ),
                };
                let _ = writeln!(out, "{} & {} & {} & {} \\\\", r.g, r.n, verdict, eps);
            }
            out.push_str("\\end{tabular}\n");
            Ok(out)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::verifier::{grid_verify, VerifyOptions};
    use num_rational::BigRational;

    fn rows() -> Vec<GridRow> {
        let cells = [(2, 13), (2, 14), (2, 15), (1, 5)];
        grid_verify::<BigRational>(&cells, &VerifyOptions::default(), 2)
            .unwrap()
            .iter()
            .map(GridRow::from_cell)
            .collect()
    }

    #[test]
    fn csv_has_exact_fraction_columns() {
        let csv = render_grid(&rows(), ReportFormat::Csv).unwrap();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines.len(), 5);
        assert!(lines[1].starts_with("2,13,Inconclusive,,,,,,,,eps0"));
        assert!(lines[2].starts_with("2,14,NonnegativeKodaira,0,1,0,1,true,0,1,eps0,"));
        assert!(lines[4].contains("genus must be at least 2"));
        assert!(!csv.contains('.'));
    }

    #[test]
    fn every_format_renders() {
        let r = rows();
        for f in [ReportFormat::Json, ReportFormat::Text, ReportFormat::Latex] {
            assert!(!render_grid(&r, f).unwrap().is_empty());
        }
    }
}
