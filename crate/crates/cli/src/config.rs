//! Command line flags, the optional TOML config file, and their merge into a [`RunConfig`].

use std::ops::RangeInclusive;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use h2xr_core::{KernelSite, Mode, SolverOptions, TranslationClass};
use serde::Deserialize;

use crate::error::{CliError, CliResult};

/// Environment variable naming the default directory for exported files.
pub const OUTPUT_DIR_ENV: &str = "H2XR_OUTPUT_DIR";

#[derive(Debug, Parser)]
#[command(name = "h2xr", version, about = "Optimal geodesic ball packings of H2xR under screw motion groups")]
pub struct Cli {
    /// TOML file supplying defaults for any flag (same keys as the flags); flags win.
    #[arg(long, global = true, value_name = "FILE")]
    pub config: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Solve one signature, site and class.
    Solve(CaseFlags),
    /// Sweep p1 over a range and tabulate the optimal packings.
    Table(CaseFlags),
    /// Recompute every embedded published row and compare.
    Verify(VerifyFlags),
    /// Write the ball configuration of a solved case as a JSON scene.
    ExportScene(CaseFlags),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Markdown,
    Json,
}

#[derive(Debug, Clone, Default, Args)]
pub struct CaseFlags {
    /// p1, or a range like 5..12 (inclusive) for `table`.
    #[arg(long)]
    pub p1: Option<String>,
    #[arg(long)]
    pub p2: Option<u32>,
    /// Translation class such as 0,1/2,1/2; repeat to filter a table.
    #[arg(long = "class", allow_hyphen_values = true)]
    pub classes: Vec<String>,
    /// Kernel site(s): interior, A, B, C; comma separated.
    #[arg(long)]
    pub site: Option<String>,
    #[arg(long, value_parser = parse_mode)]
    pub mode: Option<Mode>,
    /// List every solved class instead of the densest per p1.
    #[arg(long)]
    pub all: bool,
    /// Sphere mesh resolution for scenes, as UxV.
    #[arg(long)]
    pub mesh: Option<String>,
    /// Scene reach: include orbit balls whose centres lie within this multiple of 2 rho.
    #[arg(long)]
    pub reach: Option<f64>,
    /// Conjugate the exported scene by the isometry "r,alpha,angle,t":
    /// rotate by `angle`, move the origin to polar (r, alpha), shift the fibre by t.
    #[arg(long, allow_hyphen_values = true)]
    pub conjugate: Option<String>,
    #[command(flatten)]
    pub common: CommonFlags,
}

#[derive(Debug, Clone, Default, Args)]
pub struct VerifyFlags {
    /// JSON file of expectation rows replacing the embedded set.
    #[arg(long, value_name = "FILE")]
    pub expectations: Option<PathBuf>,
    /// Write the embedded expectation rows as JSON and exit.
    #[arg(long, value_name = "FILE")]
    pub dump_expectations: Option<PathBuf>,
    #[command(flatten)]
    pub common: CommonFlags,
}

#[derive(Debug, Clone, Default, Args)]
pub struct CommonFlags {
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    #[arg(long)]
    pub quadrature_tol: Option<f64>,
    #[arg(long)]
    pub newton_tol: Option<f64>,
    /// Longest group word scanned by the overlap validator.
    #[arg(long)]
    pub word_len: Option<usize>,
    /// Write to this file instead of stdout.
    #[arg(long)]
    pub output: Option<PathBuf>,
}

fn parse_mode(s: &str) -> Result<Mode, String> {
    s.parse().map_err(|e: h2xr_core::Error| e.to_string())
}

#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
enum IntOrText {
    Int(u32),
    Text(String),
}

#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
enum OneOrMany {
    One(String),
    Many(Vec<String>),
}

/// Contents of a `--config` file.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "kebab-case")]
pub struct FileConfig {
    p1: Option<IntOrText>,
    p2: Option<u32>,
    class: Option<OneOrMany>,
    site: Option<String>,
    mode: Option<String>,
    all: Option<bool>,
    mesh: Option<String>,
    reach: Option<f64>,
    conjugate: Option<String>,
    format: Option<Format>,
    quadrature_tol: Option<f64>,
    newton_tol: Option<f64>,
    word_len: Option<usize>,
    output: Option<PathBuf>,
    expectations: Option<PathBuf>,
}

impl FileConfig {
    pub fn load(path: &Path) -> CliResult<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        toml::from_str(&text).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))
    }
}

/// Isometry applied to an exported scene.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Conjugation {
    pub r: f64,
    pub alpha: f64,
    pub angle: f64,
    pub t: f64,
}

/// Fully resolved settings of one command.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub p1: Option<RangeInclusive<u32>>,
    pub p2: Option<u32>,
    pub classes: Vec<TranslationClass>,
    pub sites: Vec<KernelSite>,
    pub mode: Option<Mode>,
    pub all: bool,
    pub mesh: (usize, usize),
    pub reach: f64,
    pub conjugate: Option<Conjugation>,
    pub format: Format,
    pub solver: SolverOptions,
    pub output: Option<PathBuf>,
    pub expectations: Option<PathBuf>,
}

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

/// Parses `7`, `5..12` or `5..=12` (both inclusive).
pub fn parse_p1_range(s: &str) -> CliResult<RangeInclusive<u32>> {
    let num = |t: &str| {
        t.trim()
            .parse::<u32>()
            .map_err(|_| usage(format!("bad p1 {s:?}: expected N or A..B")))
    };
    let range = match s.split_once("..") {
        Some((a, b)) => num(a)?..=num(b.strip_prefix('=').unwrap_or(b))?,
        None => {
            let n = num(s)?;
            n..=n
        }
    };
    if range.is_empty() {
        return Err(usage(format!("empty p1 range {s:?}")));
    }
    Ok(range)
}

pub fn parse_sites(s: &str) -> CliResult<Vec<KernelSite>> {
    s.split(',')
        .filter(|t| !t.trim().is_empty())
        .map(|t| t.parse().map_err(|e: h2xr_core::Error| usage(e.to_string())))
        .collect()
}

fn parse_mesh(s: &str) -> CliResult<(usize, usize)> {
    let bad = || usage(format!("bad mesh {s:?}: expected UxV such as 48x24"));
    let (u, v) = s.split_once(['x', 'X']).ok_or_else(bad)?;
    let (u, v) = (u.trim().parse().map_err(|_| bad())?, v.trim().parse().map_err(|_| bad())?);
    if u < 3 || v < 2 {
        return Err(bad());
    }
    Ok((u, v))
}

fn parse_conjugation(s: &str) -> CliResult<Conjugation> {
    let parts: Vec<f64> = s
        .split(',')
        .map(|t| t.trim().parse::<f64>())
        .collect::<Result<_, _>>()
        .map_err(|_| usage(format!("bad conjugation {s:?}: expected r,alpha,angle,t")))?;
    match parts[..] {
        [r, alpha, angle, t] if parts.iter().all(|x| x.is_finite()) && r >= 0.0 => {
            Ok(Conjugation { r, alpha, angle, t })
        }
        _ => Err(usage(format!("bad conjugation {s:?}: expected r,alpha,angle,t"))),
    }
}

impl RunConfig {
    /// Merges flags over the config file over built-in defaults.
    pub fn resolve(flags: &CaseFlags, file: &FileConfig) -> CliResult<Self> {
        let p1 = match (&flags.p1, &file.p1) {
            (Some(s), _) | (None, Some(IntOrText::Text(s))) => Some(parse_p1_range(s)?),
            (None, Some(IntOrText::Int(n))) => Some(*n..=*n),
            (None, None) => None,
        };
        let class_text: Vec<String> = if !flags.classes.is_empty() {
            flags.classes.clone()
        } else {
            match &file.class {
                Some(OneOrMany::One(c)) => vec![c.clone()],
                Some(OneOrMany::Many(v)) => v.clone(),
                None => Vec::new(),
            }
        };
        let classes = class_text
            .iter()
            .map(|c| c.parse().map_err(|e: h2xr_core::Error| usage(e.to_string())))
            .collect::<CliResult<Vec<TranslationClass>>>()?;
        let sites = match flags.site.as_ref().or(file.site.as_ref()) {
            Some(s) => parse_sites(s)?,
            None => Vec::new(),
        };
        let mode = match (flags.mode, &file.mode) {
            (Some(m), _) => Some(m),
            (None, Some(s)) => Some(parse_mode(s).map_err(usage)?),
            (None, None) => None,
        };
        let mesh = match flags.mesh.as_ref().or(file.mesh.as_ref()) {
            Some(s) => parse_mesh(s)?,
            None => (48, 24),
        };
        let reach = flags.reach.or(file.reach).unwrap_or(1.25);
        if !(reach >= 1.0 && reach.is_finite()) {
            return Err(usage(format!("reach {reach} must be at least 1")));
        }
        let conjugate = flags
            .conjugate
            .as_ref()
            .or(file.conjugate.as_ref())
            .map(|s| parse_conjugation(s))
            .transpose()?;
        let mut out = Self::from_common(&flags.common, file)?;
        out.p1 = p1;
        out.p2 = flags.p2.or(file.p2);
        out.classes = classes;
        out.sites = sites;
        out.mode = mode;
        out.all = flags.all || file.all.unwrap_or(false);
        out.mesh = mesh;
        out.reach = reach;
        out.conjugate = conjugate;
        Ok(out)
    }

    pub fn resolve_verify(flags: &VerifyFlags, file: &FileConfig) -> CliResult<Self> {
        let mut out = Self::from_common(&flags.common, file)?;
        out.expectations = flags.expectations.clone().or(file.expectations.clone());
        Ok(out)
    }

    fn from_common(flags: &CommonFlags, file: &FileConfig) -> CliResult<Self> {
        let mut solver = SolverOptions::default();
        if let Some(t) = flags.quadrature_tol.or(file.quadrature_tol) {
            solver.quadrature_tol = t;
        }
        if let Some(t) = flags.newton_tol.or(file.newton_tol) {
            solver.newton_tol = t;
        }
        if let Some(w) = flags.word_len.or(file.word_len) {
            solver.word_len = w;
        }
        if !(solver.quadrature_tol.is_finite() && solver.newton_tol.is_finite()) {
            return Err(usage("tolerances must be finite"));
        }
        solver.check().map_err(|e| usage(e.to_string()))?;
        Ok(RunConfig {
            p1: None,
            p2: None,
            classes: Vec::new(),
            sites: Vec::new(),
            mode: None,
            all: false,
            mesh: (48, 24),
            reach: 1.25,
            conjugate: None,
            format: flags.format.or(file.format).unwrap_or(Format::Markdown),
            solver,
            output: flags.output.clone().or(file.output.clone()),
            expectations: None,
        })
    }

    pub fn require_p2(&self) -> CliResult<u32> {
        self.p2.ok_or_else(|| usage("--p2 is required"))
    }

    pub fn require_range(&self) -> CliResult<RangeInclusive<u32>> {
        self.p1.clone().ok_or_else(|| usage("--p1 is required"))
    }

    /// A single p1; ranges are rejected.
    pub fn require_p1(&self) -> CliResult<u32> {
        let r = self.require_range()?;
        if r.start() != r.end() {
            return Err(usage("this command takes a single --p1, not a range"));
        }
        Ok(*r.start())
    }
}
