//! Command implementations behind the `h2xr` binary.

pub mod config;
pub mod error;
pub mod render;
pub mod scene;
pub mod verify;

use std::path::PathBuf;

use h2xr_core::frobenius::{dedupe_equivariant, enumerate_multiply, enumerate_simply};
use h2xr_core::hyperbolic_plane::is_hyperbolic;
use h2xr_core::packing_optimizer::{global_optimum, solve_case};
use h2xr_core::reference::{published_rows, Tolerances};
use h2xr_core::{Error, KernelSite, Mode, PackingSolution, TranslationClass};

use crate::config::{Cli, Command, FileConfig, Format, RunConfig, OUTPUT_DIR_ENV};
use crate::error::{CliError, CliResult};
use crate::render::TableView;
use crate::scene::SceneExport;
use crate::verify::{dump_expectations, load_expectations, verify_rows};

/// Parses the config file, dispatches, and writes the command's output.
pub fn run(cli: Cli) -> CliResult<()> {
    let file = match &cli.config {
        Some(path) => FileConfig::load(path)?,
        None => FileConfig::default(),
    };
    match &cli.command {
        Command::Solve(flags) => {
            let cfg = RunConfig::resolve(flags, &file)?;
            let sol = cmd_solve(&cfg)?;
            let text = match cfg.format {
                Format::Csv => render::solution_csv(&sol)?,
                Format::Markdown => render::solution_markdown(&sol),
                Format::Json => render::solution_json(&sol),
            };
            emit(&cfg, &text)
        }
        Command::Table(flags) => {
            let cfg = RunConfig::resolve(flags, &file)?;
            let (text, complete) = cmd_table(&cfg)?;
            emit(&cfg, &text)?;
            if complete {
                Ok(())
            } else {
                Err(CliError::Solver(Error::InvalidInput(
                    "some rows could not be computed (see status column)".into(),
                )))
            }
        }
        Command::Verify(flags) => {
            if let Some(path) = &flags.dump_expectations {
                return dump_expectations(path);
            }
            let cfg = RunConfig::resolve_verify(flags, &file)?;
            let (text, passed, summary) = cmd_verify(&cfg)?;
            emit(&cfg, &text)?;
            if passed {
                Ok(())
            } else {
                Err(CliError::Verify(summary))
            }
        }
        Command::ExportScene(flags) => {
            let cfg = RunConfig::resolve(flags, &file)?;
            let path = cmd_export_scene(&cfg)?;
            println!("{}", path.display());
            Ok(())
        }
    }
}

fn emit(cfg: &RunConfig, text: &str) -> CliResult<()> {
    match &cfg.output {
        Some(path) => std::fs::write(path, text).map_err(|e| CliError::io(path, e)),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

/// Sites to try for a single case: explicit ones, else those implied by the mode.
fn case_sites(cfg: &RunConfig) -> CliResult<Vec<KernelSite>> {
    let sites = match (&cfg.mode, cfg.sites.is_empty()) {
        (_, false) => cfg.sites.clone(),
        (Some(Mode::Multiply), true) => KernelSite::VERTICES.to_vec(),
        _ => vec![KernelSite::Interior],
    };
    let interior = sites.contains(&KernelSite::Interior);
    match cfg.mode {
        Some(Mode::Simply) if sites.iter().any(|s| *s != KernelSite::Interior) => {
            Err(CliError::Usage("simply transitive mode takes only the interior site".into()))
        }
        Some(Mode::Multiply) if interior => {
            Err(CliError::Usage("multiply transitive mode takes vertex sites A, B, C".into()))
        }
        _ => Ok(sites),
    }
}

fn classes_at(p1: u32, p2: u32, site: KernelSite) -> CliResult<Vec<TranslationClass>> {
    let all = match site {
        KernelSite::Interior => enumerate_simply(p1, p2)?,
        _ => enumerate_multiply(p1, p2, site)?,
    };
    Ok(dedupe_equivariant(&all).into_iter().collect())
}

/// Densest validated packing over the requested sites and classes.
///
/// With one explicit site and class the solver's own error is returned, so an
/// overlap names the offending word.
pub fn cmd_solve(cfg: &RunConfig) -> CliResult<PackingSolution> {
    let p1 = cfg.require_p1()?;
    let p2 = cfg.require_p2()?;
    if !is_hyperbolic(p1, p2) {
        return Err(Error::NonHyperbolic { p1, p2 }.into());
    }
    if cfg.classes.len() > 1 {
        return Err(CliError::Usage("solve takes at most one --class".into()));
    }
    let sites = case_sites(cfg)?;
    let mut cases = Vec::new();
    for &site in &sites {
        match cfg.classes.first() {
            Some(c) => {
                let admissible = classes_at(p1, p2, site)?.contains(&c.canonical());
                if admissible || sites.len() == 1 {
                    cases.push((site, *c));
                }
            }
            None => cases.extend(classes_at(p1, p2, site)?.into_iter().map(|c| (site, c))),
        }
    }
    if cases.is_empty() {
        let class = cfg.classes.first().map(|c| c.to_string()).unwrap_or_default();
        return Err(CliError::Usage(format!("class {class} is not admissible at any requested site of (2,{p1},{p2})")));
    }
    let mut best: Option<PackingSolution> = None;
    let mut first_err = None;
    for (site, class) in cases {
        match solve_case(p1, p2, site, class, &cfg.solver) {
            Ok(s) => {
                if best.as_ref().is_none_or(|b| s.density > b.density + 1e-12) {
                    best = Some(s);
                }
            }
            Err(e) => {
                first_err.get_or_insert(e);
            }
        }
    }
    match (best, first_err) {
        (Some(s), _) => Ok(s),
        (None, Some(e)) => Err(e.into()),
        (None, None) => unreachable!("at least one case was attempted"),
    }
}

/// Renders a sweep; the flag is false when some row is neither solved nor rejected by overlap.
pub fn cmd_table(cfg: &RunConfig) -> CliResult<(String, bool)> {
    let p2 = cfg.require_p2()?;
    let range = cfg.require_range()?;
    let mode = cfg.mode.unwrap_or(if cfg.sites.iter().any(|s| *s != KernelSite::Interior) {
        Mode::Multiply
    } else {
        Mode::Simply
    });
    let cfg_sites = RunConfig { mode: Some(mode), ..cfg.clone() };
    let sites = case_sites(&cfg_sites)?;
    let mut report = global_optimum(p2, range, &sites, mode, &cfg.solver)?;
    if !cfg.classes.is_empty() {
        let keep: Vec<TranslationClass> = cfg.classes.iter().map(TranslationClass::canonical).collect();
        report.rows.retain(|r| keep.contains(&r.class.canonical()));
        report.best = report
            .rows
            .iter()
            .enumerate()
            .filter_map(|(i, r)| r.density().map(|d| (i, d)))
            .fold(None, |acc: Option<(usize, f64)>, (i, d)| match acc {
                Some((_, bd)) if d <= bd + 1e-8 => acc,
                _ => Some((i, d)),
            })
            .map(|(i, _)| i);
    }
    let complete = report
        .rows
        .iter()
        .all(|r| r.solution.is_some() || r.status.starts_with("rejected"));
    let view = TableView::new(&report, cfg.all);
    let text = match cfg.format {
        Format::Csv => view.csv()?,
        Format::Markdown => view.markdown(),
        Format::Json => view.json(),
    };
    Ok((text, complete))
}

/// Returns the rendered report, whether everything passed, and a one-line summary.
pub fn cmd_verify(cfg: &RunConfig) -> CliResult<(String, bool, String)> {
    let rows = match &cfg.expectations {
        Some(path) => load_expectations(path)?,
        None => published_rows(),
    };
    let report = verify_rows(&rows, &cfg.solver, &Tolerances::default());
    let text = match cfg.format {
        Format::Csv => report.csv()?,
        Format::Markdown => report.markdown(),
        Format::Json => {
            let mut s = serde_json::to_string_pretty(&report).expect("report serializes");
            s.push('\n');
            s
        }
    };
    Ok((text, report.passed(), report.summary()))
}

/// Default scene path: `$H2XR_OUTPUT_DIR` (or the working directory) plus a name built from the case.
fn scene_path(cfg: &RunConfig, sol: &PackingSolution) -> PathBuf {
    if let Some(p) = &cfg.output {
        return p.clone();
    }
    let dir = std::env::var_os(OUTPUT_DIR_ENV).map(PathBuf::from).unwrap_or_default();
    dir.join(format!("scene-2-{}-{}-{}.json", sol.p1, sol.p2, sol.site))
}

pub fn cmd_export_scene(cfg: &RunConfig) -> CliResult<PathBuf> {
    let sol = cmd_solve(cfg)?;
    let mut scene = SceneExport::build(&sol, &cfg.solver, cfg.mesh, cfg.reach)?;
    if let Some(conj) = &cfg.conjugate {
        scene = scene.conjugated(conj)?;
    }
    let path = scene_path(cfg, &sol);
    let mut text = serde_json::to_string_pretty(&scene).expect("scene serializes");
    text.push('\n');
    std::fs::write(&path, text).map_err(|e| CliError::io(&path, e))?;
    Ok(path)
}
