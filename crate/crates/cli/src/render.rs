//! Text renderings of solutions and sweeps.

use h2xr_core::packing_optimizer::SweepRow;
use h2xr_core::{PackingSolution, SweepReport};
use serde::Serialize;

use crate::error::{CliError, CliResult};

/// Rounds to 6 significant digits in fixed notation with a `.` separator.
pub fn sig6(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return format!("{x}");
    }
    let decimals = |mag: i32| (5 - mag).max(0) as usize;
    let mag = x.abs().log10().floor() as i32;
    let text = format!("{:.*}", decimals(mag), x);
    // Rounding can carry into a new leading digit (9.999995 -> 10.00000).
    let rounded: f64 = text.parse().unwrap_or(x);
    let mag2 = rounded.abs().log10().floor() as i32;
    if mag2 > mag {
        format!("{:.*}", decimals(mag2), x)
    } else {
        text
    }
}

#[derive(Debug, Serialize)]
struct CsvRow {
    p0: u32,
    p1: u32,
    p2: u32,
    site: String,
    class: String,
    rho: String,
    xi: String,
    vol_ball: String,
    vol_dv: String,
    delta: String,
    status: String,
}

impl CsvRow {
    fn new(p1: u32, p2: u32, site: String, class: String, sol: Option<&PackingSolution>, status: String) -> Self {
        let f = |g: fn(&PackingSolution) -> f64| sol.map(|s| sig6(g(s))).unwrap_or_default();
        CsvRow {
            p0: 2,
            p1,
            p2,
            site,
            class,
            rho: f(|s| s.rho),
            xi: f(|s| s.xi),
            vol_ball: f(|s| s.vol_ball),
            vol_dv: f(|s| s.vol_dv),
            delta: f(|s| s.density),
            status,
        }
    }
}

fn csv_text(rows: Vec<CsvRow>) -> CliResult<String> {
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::CRLF).from_writer(Vec::new());
    for r in rows {
        w.serialize(r).map_err(|e| CliError::Usage(e.to_string()))?;
    }
    let bytes = w.into_inner().map_err(|e| CliError::Usage(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("csv output is UTF-8"))
}

fn json_text<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("plain data serializes");
    s.push('\n');
    s
}

pub fn solution_csv(sol: &PackingSolution) -> CliResult<String> {
    csv_text(vec![CsvRow::new(
        sol.p1,
        sol.p2,
        sol.site.to_string(),
        sol.class.to_string(),
        Some(sol),
        "ok".into(),
    )])
}

pub fn solution_json(sol: &PackingSolution) -> String {
    json_text(sol)
}

pub fn solution_markdown(sol: &PackingSolution) -> String {
    let (kx, ky) = sol.kernel_klein();
    let (r, alpha) = sol.kernel_polar();
    let b = &sol.kernel.base;
    let mut lines = vec![
        format!("## (2,{},{}) site {} class {}", sol.p1, sol.p2, sol.site, sol.class),
        String::new(),
        "| quantity | value |".into(),
        "|---|---|".into(),
        format!("| rho | {} |", sig6(sol.rho)),
        format!("| xi | {} |", sig6(sol.xi)),
        format!("| K (hyperboloid) | ({}, {}, {}) |", sig6(b.x1()), sig6(b.x2()), sig6(b.x3())),
        format!("| K (projective x, y) | ({}, {}) |", sig6(kx), sig6(ky)),
        format!("| K (r, alpha) | ({}, {}) |", sig6(r), sig6(alpha)),
        format!("| Vol(B) | {} |", sig6(sol.vol_ball)),
        format!("| Vol(D) | {} |", sig6(sol.vol_dv)),
        format!("| delta | {} |", sig6(sol.density)),
        format!("| stabilizer order | {} |", sol.stabilizer_order),
    ];
    if let Some(res) = sol.endpoint_residual {
        lines.push(format!("| endpoint residual | {res:.2e} |"));
    }
    lines.push(String::new());
    lines.push(format!("Active constraints ({}):", sol.active_constraints.len()));
    lines.extend(sol.active_constraints.iter().map(|w| format!("- `{w}`")));
    lines.push(String::new());
    lines.join("\n")
}

/// Rows of a sweep selected for display, with the densest one flagged.
#[derive(Debug, Serialize)]
pub struct TableView<'a> {
    pub mode: h2xr_core::Mode,
    pub p2: u32,
    pub p1_range: (u32, u32),
    pub best: Option<&'a SweepRow>,
    pub rows: Vec<&'a SweepRow>,
}

impl<'a> TableView<'a> {
    /// Per-`p1` representatives, or every row with `all`.
    pub fn new(report: &'a SweepReport, all: bool) -> Self {
        let rows = if all {
            report.rows.iter().collect()
        } else {
            report.representatives().into_iter().map(|i| &report.rows[i]).collect()
        };
        TableView {
            mode: report.mode,
            p2: report.p2,
            p1_range: report.p1_range,
            best: report.best_row(),
            rows,
        }
    }

    fn is_best(&self, row: &SweepRow) -> bool {
        self.best.is_some_and(|b| std::ptr::eq(b, row))
    }

    /// CSV status: `best` marks the densest validated row of the whole sweep.
    pub fn csv(&self) -> CliResult<String> {
        csv_text(
            self.rows
                .iter()
                .map(|r| {
                    let status = if self.is_best(r) { "best".to_string() } else { r.status.clone() };
                    CsvRow::new(r.p1, r.p2, r.site.to_string(), r.class.to_string(), r.solution.as_ref(), status)
                })
                .collect(),
        )
    }

    pub fn json(&self) -> String {
        json_text(self)
    }

    pub fn markdown(&self) -> String {
        let multiply = self.mode == h2xr_core::Mode::Multiply;
        let mut out = vec![format!(
            "## {} transitive packings, p2 = {}, p1 = {}..{}",
            self.mode, self.p2, self.p1_range.0, self.p1_range.1
        )];
        out.push(String::new());
        if multiply {
            out.push("| (p0,p1,p2) | site | class | rho | xi | Vol(B) | Vol(D) | delta | status |".into());
            out.push("|---|---|---|---|---|---|---|---|---|".into());
        } else {
            out.push("| (p0,p1,p2) | class | rho | xi | Vol(B) | delta | status |".into());
            out.push("|---|---|---|---|---|---|---|".into());
        }
        for r in &self.rows {
            let sig = format!("(2,{},{})", r.p1, r.p2);
            let num = |g: fn(&PackingSolution) -> f64| r.solution.as_ref().map(|s| sig6(g(s))).unwrap_or_default();
            let mut status = r.status.replace('|', "\\|");
            if self.is_best(r) {
                status = format!("**best** {status}");
            }
            out.push(if multiply {
                format!(
                    "| {sig} | {} | {} | {} | {} | {} | {} | {} | {status} |",
                    r.site,
                    r.class,
                    num(|s| s.rho),
                    num(|s| s.xi),
                    num(|s| s.vol_ball),
                    num(|s| s.vol_dv),
                    num(|s| s.density)
                )
            } else {
                format!(
                    "| {sig} | {} | {} | {} | {} | {} | {status} |",
                    r.class,
                    num(|s| s.rho),
                    num(|s| s.xi),
                    num(|s| s.vol_ball),
                    num(|s| s.density)
                )
            });
        }
        out.push(String::new());
        out.join("\n")
    }
}
