//! Run configuration: TOML file values overridden by flags.

use std::fmt;
use std::path::Path;
use std::str::FromStr;

use rephom::exact::is_prime;
use serde::Deserialize;

use crate::error::CliError;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FieldSpec {
    Rationals,
    Prime(u64),
    Cyclotomic(u64),
}

impl FromStr for FieldSpec {
    type Err = CliError;

    /// `q`, `fq:13`, `cyclotomic:5`.
    fn from_str(s: &str) -> Result<Self, CliError> {
        let err = |reason: &str| CliError::new("config.field", format!("cannot parse field {s:?}: {reason}"));
        let t = s.trim().to_ascii_lowercase();
        if t == "q" || t == "rationals" {
            return Ok(Self::Rationals);
        }
        let (kind, n) = t.split_once(':').ok_or_else(|| err("expected q, fq:<prime> or cyclotomic:<n>"))?;
        let n: u64 = n.trim().parse().map_err(|_| err("expected a positive integer"))?;
        match kind.trim() {
            "fq" | "f" => {
                if is_prime(n) {
                    Ok(Self::Prime(n))
                } else {
                    Err(err("modulus is not prime"))
                }
            }
            "cyclotomic" | "cyc" if n >= 1 => Ok(Self::Cyclotomic(n)),
            _ => Err(err("expected q, fq:<prime> or cyclotomic:<n>")),
        }
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Rationals => write!(f, "q"),
            Self::Prime(q) => write!(f, "fq:{q}"),
            Self::Cyclotomic(n) => write!(f, "cyclotomic:{n}"),
        }
    }
}

/// Which representation to use.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RepSpec {
    Trivial,
    /// Seeded sample with the given index.
    Sample(u64),
    /// Group elements separated by `;`.
    Literal(String),
}

impl FromStr for RepSpec {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, CliError> {
        let t = s.trim();
        match t {
            "trivial" => Ok(Self::Trivial),
            "sample" => Ok(Self::Sample(0)),
            _ => match t.strip_prefix("sample:") {
                Some(i) => i
                    .trim()
                    .parse()
                    .map(Self::Sample)
                    .map_err(|_| CliError::new("config.rep", format!("bad sample index in {s:?}"))),
                None if t.is_empty() => Err(CliError::new("config.rep", "empty representation")),
                None => Ok(Self::Literal(t.to_string())),
            },
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, clap::ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Table,
    Json,
    Csv,
}

/// Keys accepted in a `--config` TOML file. Flags take precedence.
#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub space: Option<String>,
    pub group: Option<String>,
    pub field: Option<String>,
    pub rep: Option<String>,
    pub seed: Option<u64>,
    pub samples: Option<usize>,
    pub cutoff: Option<usize>,
    pub format: Option<Format>,
    pub declared_dim: Option<usize>,
    pub h: Option<String>,
    pub pmax: Option<usize>,
    pub nmax: Option<usize>,
    pub model: Option<String>,
    pub budget: Option<usize>,
    pub bounds: Option<String>,
    pub cpr: Option<usize>,
    pub exponents: Option<String>,
}

/// 1-based line and column of a byte offset.
fn line_column(src: &str, offset: usize) -> (usize, usize) {
    let before = &src[..offset.min(src.len())];
    let line = before.matches('\n').count() + 1;
    let column = before.len() - before.rfind('\n').map_or(0, |i| i + 1) + 1;
    (line, column)
}

impl FileConfig {
    pub fn parse(src: &str) -> Result<Self, CliError> {
        toml::from_str(src).map_err(|e| {
            let err = CliError::new("config.toml", e.message().to_string());
            match e.span() {
                Some(span) => {
                    let (l, c) = line_column(src, span.start);
                    err.at(l, c)
                }
                None => err,
            }
        })
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let src = std::fs::read_to_string(path)
            .map_err(|e| CliError::new("config.io", format!("cannot read {}: {e}", path.display())))?;
        Self::parse(&src)
    }
}
