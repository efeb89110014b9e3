//! Recomputation of published rows and the pass/fail report.

use std::collections::BTreeSet;
use std::path::Path;

use h2xr_core::frobenius::enumerate_simply;
use h2xr_core::packing_optimizer::solve_endpoint_system;
use h2xr_core::reference::{
    check_row, compute_row, published_rows, worked_classes, worked_endpoint_state, ComputedRow, ReferenceRow, RowCheck,
    Tolerances,
};
use h2xr_core::SolverOptions;
use serde::Serialize;

use crate::error::{CliError, CliResult};
use crate::render::sig6;

/// Bound on each recovered endpoint component.
const ENDPOINT_TOL: f64 = 5e-5;
const ENDPOINT_RESIDUAL: f64 = 1e-8;

#[derive(Debug, Clone, Serialize)]
pub struct VerifyLine {
    pub id: String,
    pub passed: bool,
    /// Largest deviation over its tolerance; `None` when the computation failed.
    pub score: Option<f64>,
    pub detail: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub check: Option<RowCheck>,
}

#[derive(Debug, Clone, Serialize)]
pub struct VerifyReport {
    pub lines: Vec<VerifyLine>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.lines.iter().all(|l| l.passed)
    }

    pub fn failures(&self) -> usize {
        self.lines.iter().filter(|l| !l.passed).count()
    }

    /// Failing line with the largest score; failed computations rank first.
    pub fn worst_offender(&self) -> Option<&VerifyLine> {
        self.lines
            .iter()
            .filter(|l| !l.passed)
            .max_by(|a, b| a.score.unwrap_or(f64::INFINITY).total_cmp(&b.score.unwrap_or(f64::INFINITY)))
    }

    pub fn markdown(&self) -> String {
        let mut out = vec![
            "| id | result | score | detail |".to_string(),
            "|---|---|---|---|".to_string(),
        ];
        for l in &self.lines {
            let score = l.score.map_or("-".into(), |s| format!("{s:.3}"));
            let verdict = if l.passed { "pass" } else { "FAIL" };
            out.push(format!("| {} | {verdict} | {score} | {} |", l.id, l.detail.replace('|', "\\|")));
        }
        out.push(String::new());
        out.push(self.summary());
        out.push(String::new());
        out.join("\n")
    }

    pub fn csv(&self) -> CliResult<String> {
        let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::CRLF).from_writer(Vec::new());
        w.write_record(["id", "result", "score", "detail"]).map_err(|e| CliError::Usage(e.to_string()))?;
        for l in &self.lines {
            let score = l.score.map_or(String::new(), |s| format!("{s:.3}"));
            w.write_record([l.id.as_str(), if l.passed { "pass" } else { "fail" }, &score, &l.detail])
                .map_err(|e| CliError::Usage(e.to_string()))?;
        }
        let bytes = w.into_inner().map_err(|e| CliError::Usage(e.to_string()))?;
        Ok(String::from_utf8(bytes).expect("csv output is UTF-8"))
    }

    pub fn summary(&self) -> String {
        match self.worst_offender() {
            None => format!("{} of {} checks passed", self.lines.len(), self.lines.len()),
            Some(w) => format!(
                "{} of {} checks failed; worst offender {}: {}",
                self.failures(),
                self.lines.len(),
                w.id,
                w.detail
            ),
        }
    }
}

pub fn load_expectations(path: &Path) -> CliResult<Vec<ReferenceRow>> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    serde_json::from_str(&text).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))
}

pub fn dump_expectations(path: &Path) -> CliResult<()> {
    let mut text = serde_json::to_string_pretty(&published_rows()).expect("rows serialize");
    text.push('\n');
    std::fs::write(path, text).map_err(|e| CliError::io(path, e))
}

fn describe(check: &RowCheck) -> String {
    let e = &check.expected;
    let c = &check.computed;
    format!(
        "rho {} vs {}, Vol(B) {} vs {}, delta {} vs {} (worst: {})",
        e.rho,
        sig6(c.rho),
        e.vol_ball,
        sig6(c.vol_ball),
        e.density,
        sig6(c.density),
        check.worst_field
    )
}

pub fn row_line(row: &ReferenceRow, computed: Result<ComputedRow, String>, tol: &Tolerances) -> VerifyLine {
    match computed {
        Ok(c) => {
            let check = check_row(row, c, tol);
            let mut detail = describe(&check);
            if let Some(note) = &row.note {
                detail.push_str(&format!("; erratum: {note}"));
            }
            VerifyLine {
                id: check.id.clone(),
                passed: check.passed(),
                score: Some(check.score),
                detail,
                check: Some(check),
            }
        }
        Err(e) => VerifyLine {
            id: row.id(),
            passed: false,
            score: None,
            detail: format!("computation failed: {e}"),
            check: None,
        },
    }
}

fn worked_lines(opts: &SolverOptions) -> Vec<VerifyLine> {
    let (p1, p2, list) = worked_classes();
    let expect: BTreeSet<_> = list.into_iter().collect();
    let classes = match enumerate_simply(p1, p2) {
        Ok(got) if got == expect => VerifyLine {
            id: format!("worked/frobenius/2-{p1}-{p2}"),
            passed: true,
            score: Some(0.0),
            detail: format!("{} classes", got.len()),
            check: None,
        },
        other => VerifyLine {
            id: format!("worked/frobenius/2-{p1}-{p2}"),
            passed: false,
            score: None,
            detail: format!("enumeration differs: {other:?}"),
            check: None,
        },
    };
    let (p1, p2, class, printed) = worked_endpoint_state();
    let id = format!("worked/endpoint/2-{p1}-{p2}/{class}");
    let endpoint = match solve_endpoint_system(p1, p2, class, &printed, opts) {
        Ok((state, residual)) => {
            let got = state.to_vector();
            let want = printed.to_vector();
            let dev = (0..want.len()).map(|j| (got[j] - want[j]).abs()).fold(0.0, f64::max);
            let score = (dev / ENDPOINT_TOL).max(residual / ENDPOINT_RESIDUAL);
            VerifyLine {
                id,
                passed: score <= 1.0,
                score: Some(score),
                detail: format!("max component deviation {dev:.2e}, residual {residual:.2e}"),
                check: None,
            }
        }
        Err(e) => VerifyLine {
            id,
            passed: false,
            score: None,
            detail: format!("computation failed: {e}"),
            check: None,
        },
    };
    vec![classes, endpoint]
}

/// Recomputes every row once and scores it.
pub fn verify_rows(rows: &[ReferenceRow], opts: &SolverOptions, tol: &Tolerances) -> VerifyReport {
    let mut lines = worked_lines(opts);
    lines.extend(
        rows.iter()
            .map(|row| row_line(row, compute_row(row, opts).map_err(|e| e.to_string()), tol)),
    );
    VerifyReport { lines }
}
