//! Command-line arguments and their validated form.

use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};

use tropical_refine::lattice::{Degree, LatticeVector};
use tropical_refine::Rational;

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
    Svg,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Subcommand)]
pub enum Command {
    /// List every tropical curve through one moment vector.
    Enumerate,
    /// Audit invariance and print N, R and BG.
    Invariant,
    /// Tabulate the local data of a quadrivalent vertex.
    Quantum,
    /// Maximal real splits and m' for every solution.
    Realize,
    /// Draw the solutions and their dual subdivisions.
    Plot,
}

#[derive(Debug, Clone, Parser)]
#[command(
    name = "tropical-refine",
    version,
    about = "Refined tropical curve counts with boundary moment constraints"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Degree as a JSON file, inline JSON, `x,y;x,y;...`, `p2:d` or `rect:a,b`.
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub degree: Option<String>,
    /// Number of weight-2 ends.
    #[arg(long, global = true, default_value_t = 0)]
    pub s: usize,
    /// Side normal that gets doubled, as `x,y`.
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub n1: Option<String>,
    /// Explicit moments `a/b,...` for ends 2..n (or all n ends).
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub moments: Option<String>,
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    #[arg(long, global = true)]
    pub trials: Option<usize>,
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// `m1` of the quadrivalent normal form.
    #[arg(long, global = true)]
    pub m1: Option<i64>,
    /// `m3 - m2` of the quadrivalent normal form.
    #[arg(long, global = true, default_value_t = 1)]
    pub delta: i64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MomentSource {
    /// As given on the command line; checked against the degree later.
    Explicit(Vec<Rational>),
    Seeded {
        seed: u64,
        trials: usize,
    },
}

#[derive(Debug, Clone)]
pub struct RunConfig {
    pub command: Command,
    pub degree: Option<Degree>,
    pub s: usize,
    pub n1: Option<LatticeVector>,
    pub moments: MomentSource,
    pub out: Option<PathBuf>,
    pub format: Format,
    pub m1: Option<i64>,
    pub delta: i64,
}

impl RunConfig {
    pub fn from_cli(cli: Cli) -> Result<Self, CliError> {
        let degree = cli.degree.as_deref().map(parse_degree).transpose()?;
        if degree.is_none() && cli.command != Command::Quantum {
            return Err(CliError::Config("--degree is required".into()));
        }
        let n1 = cli.n1.as_deref().map(parse_vector).transpose()?;
        let moments = match (cli.moments, cli.seed, cli.trials) {
            (Some(_), Some(_), _) | (Some(_), _, Some(_)) => {
                return Err(CliError::Config(
                    "give either --moments or --seed/--trials, not both".into(),
                ))
            }
            (Some(list), None, None) => MomentSource::Explicit(parse_moments(&list)?),
            (None, seed, trials) => {
                let default_trials = if cli.command == Command::Invariant {
                    20
                } else {
                    1
                };
                let trials = trials.unwrap_or(default_trials);
                if trials == 0 {
                    return Err(CliError::Config("--trials must be at least 1".into()));
                }
                MomentSource::Seeded {
                    seed: seed.unwrap_or(0),
                    trials,
                }
            }
        };
        let format = match (cli.command, cli.format) {
            (Command::Plot, None | Some(Format::Svg)) => Format::Svg,
            (Command::Plot, Some(_)) => {
                return Err(CliError::Config("plot only writes svg".into()))
            }
            (_, Some(Format::Svg)) => {
                return Err(CliError::Config(
                    "svg output is only available for plot".into(),
                ))
            }
            (_, f) => f.unwrap_or(Format::Json),
        };
        if cli.command == Command::Quantum && cli.m1.is_none() {
            return Err(CliError::Config("quantum needs --m1".into()));
        }
        Ok(Self {
            command: cli.command,
            degree,
            s: cli.s,
            n1,
            moments,
            out: cli.out,
            format,
            m1: cli.m1,
            delta: cli.delta,
        })
    }
}

fn parse_int(s: &str) -> Result<i64, CliError> {
    s.trim()
        .parse()
        .map_err(|_| CliError::Config(format!("not an integer: {s:?}")))
}

pub fn parse_vector(s: &str) -> Result<LatticeVector, CliError> {
    let parts: Vec<&str> = s
        .trim()
        .trim_start_matches('(')
        .trim_end_matches(')')
        .split(',')
        .collect();
    match parts.as_slice() {
        [x, y] => Ok(LatticeVector::new(parse_int(x)?, parse_int(y)?)),
        _ => Err(CliError::Config(format!("expected x,y but got {s:?}"))),
    }
}

pub fn parse_moments(s: &str) -> Result<Vec<Rational>, CliError> {
    s.split(',')
        .map(|part| {
            part.trim()
                .parse::<Rational>()
                .map_err(|_| CliError::Config(format!("bad moment {part:?}")))
        })
        .collect()
}

/// Accepts a JSON file, inline JSON (object or list of pairs), a preset, or
/// `x,y;x,y;...`.
pub fn parse_degree(source: &str) -> Result<Degree, CliError> {
    let source = source.trim();
    if Path::new(source).is_file() {
        let text = std::fs::read_to_string(source).map_err(|e| CliError::Io {
            path: source.into(),
            message: e.to_string(),
        })?;
        return parse_degree_json(&text);
    }
    if source.starts_with('{') || source.starts_with('[') {
        return parse_degree_json(source);
    }
    if let Some(d) = source.strip_prefix("p2:") {
        let d = parse_int(d)?;
        if d < 1 {
            return Err(CliError::Config("p2 degree must be positive".into()));
        }
        return Ok(Degree::projective_plane(d as usize));
    }
    if let Some(ab) = source.strip_prefix("rect:") {
        let v = parse_vector(ab)?;
        if v.x < 1 || v.y < 1 {
            return Err(CliError::Config("rectangle sides must be positive".into()));
        }
        return Ok(Degree::rectangle(v.x as usize, v.y as usize));
    }
    let dirs = source
        .split(';')
        .filter(|p| !p.trim().is_empty())
        .map(parse_vector)
        .collect::<Result<Vec<_>, _>>()?;
    Ok(Degree::new(dirs)?)
}

fn parse_degree_json(text: &str) -> Result<Degree, CliError> {
    let value: serde_json::Value =
        serde_json::from_str(text).map_err(|e| CliError::Config(e.to_string()))?;
    let value = if value.is_array() {
        serde_json::json!({ "entries": value })
    } else {
        value
    };
    serde_json::from_value(value).map_err(|e| CliError::Config(format!("bad degree: {e}")))
}
