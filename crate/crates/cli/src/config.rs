use std::path::{Path, PathBuf};

use bornlab::{Error, Restriction, Result, TheorySpec};
use clap::{Args, ValueEnum};
use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

/// Flags shared by every subcommand. Unset flags fall back to the config file, then to defaults.
#[derive(Args, Debug, Default)]
pub struct CommonArgs {
    /// dimension of the underlying Hilbert space
    #[arg(long, global = true)]
    pub d: Option<usize>,
    /// comma separated list of irrep labels, e.g. 1,2
    #[arg(long = "J", global = true, value_name = "LIST")]
    pub j: Option<String>,
    #[arg(long, global = true, value_name = "unrestricted|pure-state-dual")]
    pub restriction: Option<String>,
    /// orbit grid as NsxNt
    #[arg(long, global = true)]
    pub grid: Option<String>,
    #[arg(long, global = true)]
    pub samples: Option<usize>,
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// tolerance for the command's own pass/fail verdicts
    #[arg(long, global = true)]
    pub tol: Option<f64>,
    /// directory receiving <command>.<format>; stdout when absent
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// TOML file with the same keys as the flags
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct FileConfig {
    d: Option<usize>,
    #[serde(rename = "J")]
    j: Option<JList>,
    restriction: Option<String>,
    grid: Option<String>,
    samples: Option<usize>,
    seed: Option<u64>,
    tol: Option<f64>,
    out: Option<PathBuf>,
    format: Option<Format>,
}

#[derive(Debug, Deserialize)]
#[serde(untagged)]
enum JList {
    List(Vec<u32>),
    Text(String),
}

#[derive(Clone, Debug, Serialize)]
pub struct RunConfig {
    pub d: usize,
    #[serde(rename = "J")]
    pub j: Vec<u32>,
    pub restriction: Restriction,
    pub grid: (usize, usize),
    pub samples: Option<usize>,
    pub seed: u64,
    pub tol: f64,
    #[serde(skip)]
    pub out: Option<PathBuf>,
    pub format: Format,
}

pub fn parse_j(s: &str) -> Result<Vec<u32>> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    if parts.iter().any(|p| p.is_empty()) {
        return Err(Error::InvalidArgument(format!("malformed J list {s:?}")));
    }
    parts.iter().map(|p| p.parse::<u32>().map_err(|_| Error::InvalidArgument(format!("malformed J entry {p:?}")))).collect()
}

pub fn parse_grid(s: &str) -> Result<(usize, usize)> {
    let bad = || Error::InvalidArgument(format!("grid must look like 64x64, got {s:?}"));
    let (a, b) = s.split_once(['x', 'X']).ok_or_else(bad)?;
    let (a, b) = (a.trim().parse::<usize>().map_err(|_| bad())?, b.trim().parse::<usize>().map_err(|_| bad())?);
    if a < 2 || b < 2 {
        return Err(bad());
    }
    Ok((a, b))
}

fn read_file(path: &Path) -> Result<FileConfig> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::InvalidArgument(format!("cannot read {}: {e}", path.display())))?;
    toml::from_str(&text).map_err(|e| Error::InvalidArgument(format!("bad config {}: {e}", path.display())))
}

impl RunConfig {
    pub fn resolve(args: &CommonArgs) -> Result<Self> {
        let file = match &args.config {
            Some(p) => read_file(p)?,
            None => FileConfig::default(),
        };
        let j = match (&args.j, file.j) {
            (Some(s), _) => parse_j(s)?,
            (None, Some(JList::List(v))) => v,
            (None, Some(JList::Text(s))) => parse_j(&s)?,
            (None, None) => vec![1],
        };
        let restriction = args.restriction.clone().or(file.restriction).map(|s| s.parse()).transpose()?.unwrap_or(Restriction::Unrestricted);
        let grid = args.grid.clone().or(file.grid).map(|s| parse_grid(&s)).transpose()?.unwrap_or((256, 256));
        let tol = args.tol.or(file.tol).unwrap_or(1e-7);
        if !(tol > 0.0) {
            return Err(Error::InvalidArgument("tolerance must be positive".into()));
        }
        Ok(RunConfig {
            d: args.d.or(file.d).unwrap_or(2),
            j,
            restriction,
            grid,
            samples: args.samples.or(file.samples),
            seed: args.seed.or(file.seed).unwrap_or(1),
            tol,
            out: args.out.clone().or(file.out),
            format: args.format.or(file.format).unwrap_or(Format::Json),
        })
    }

    pub fn theory_spec(&self) -> Result<TheorySpec> {
        TheorySpec::new(self.d, self.j.iter().copied(), self.restriction)
    }

    pub fn single_j(&self) -> Result<u32> {
        match self.j.as_slice() {
            [j] => Ok(*j),
            _ => Err(Error::InvalidArgument("this command takes a single j".into())),
        }
    }
}
