//! `rephom`: cotangent complexes, certificates, `E²` pages, Koszul tables
//! and catalog lookups from the command line.

mod commands;
mod config;
mod error;
mod literal;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use config::{FileConfig, Format};
use error::CliError;

#[derive(Parser, Debug)]
#[command(name = "rephom", version, about = "Exact computations for representation homology")]
struct Cli {
    /// TOML file with default values for any flag.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Default)]
struct SpaceArgs {
    /// e.g. `surface:g=2`, `lens:p=5,q=1 2`, `link:braid=s1^3`, `bz:p=5`.
    #[arg(long)]
    space: Option<String>,
    /// e.g. `GL2`, `SL3`, `T^2`, `GL2xT^1`.
    #[arg(long)]
    group: Option<String>,
    /// `q`, `fq:<prime>` or `cyclotomic:<n>`.
    #[arg(long)]
    field: Option<String>,
    /// `trivial`, `sample[:index]`, or `;`-separated elements
    /// (`id`, `-id`, `diag:z,1`, `mat:1,1/0,1`).
    #[arg(long)]
    rep: Option<String>,
    #[arg(long)]
    seed: Option<u64>,
    /// Truncation degree for `bz` spaces.
    #[arg(long)]
    cutoff: Option<usize>,
}

impl SpaceArgs {
    fn into_config(self) -> FileConfig {
        FileConfig {
            space: self.space,
            group: self.group,
            field: self.field,
            rep: self.rep,
            seed: self.seed,
            cutoff: self.cutoff,
            ..FileConfig::default()
        }
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Homology of the cotangent complex at one representation.
    Cotangent(SpaceArgs),
    /// Vanishing certificates over seeded samples (or one given representation).
    Certify {
        #[command(flatten)]
        space: SpaceArgs,
        #[arg(long)]
        samples: Option<usize>,
        /// Expected local dimension at each sample, for the smoothness flag.
        #[arg(long)]
        declared_dim: Option<usize>,
    },
    /// The E2 page Sym(H) from graded dimensions, or from a cotangent run.
    E2 {
        #[command(flatten)]
        space: SpaceArgs,
        /// Graded dimensions, e.g. `0:2,2:2`.
        #[arg(long)]
        h: Option<String>,
        #[arg(long)]
        pmax: Option<usize>,
        #[arg(long)]
        nmax: Option<usize>,
    },
    /// Truncated Koszul homology of a commuting-variety model.
    Koszul {
        /// `torus:<group>` or `surface:<group>,g=<genus>`.
        #[arg(long)]
        model: Option<String>,
        #[arg(long)]
        field: Option<String>,
        /// Largest internal degree.
        #[arg(long)]
        cutoff: Option<usize>,
        /// Largest graded piece to build.
        #[arg(long)]
        budget: Option<usize>,
    },
    /// Closed-form bounds and CP^r series.
    Catalog {
        /// Space whose vanishing bounds to list.
        #[arg(long)]
        bounds: Option<String>,
        #[arg(long)]
        group: Option<String>,
        /// r for CP^r character homology.
        #[arg(long)]
        cpr: Option<usize>,
        /// Comma-separated exponents, overriding the group's.
        #[arg(long)]
        exponents: Option<String>,
        #[arg(long)]
        cutoff: Option<usize>,
    },
    /// Print the JSON schema for a command's output (or `error`).
    Schema { name: String },
}

/// Flag values win over file values.
fn overlay(flags: FileConfig, file: FileConfig) -> FileConfig {
    macro_rules! pick {
        ($($k:ident),*) => { FileConfig { $($k: flags.$k.or(file.$k)),* } };
    }
    pick!(
        space,
        group,
        field,
        rep,
        seed,
        samples,
        cutoff,
        format,
        declared_dim,
        h,
        pmax,
        nmax,
        model,
        budget,
        bounds,
        cpr,
        exponents
    )
}

fn schema(name: &str) -> Result<&'static str, CliError> {
    Ok(match name {
        "cotangent" => include_str!("../schemas/cotangent.json"),
        "certify" => include_str!("../schemas/certify.json"),
        "e2" => include_str!("../schemas/e2.json"),
        "koszul" => include_str!("../schemas/koszul.json"),
        "catalog" => include_str!("../schemas/catalog.json"),
        "error" => include_str!("../schemas/error.json"),
        _ => return Err(CliError::new("config.schema", format!("no schema named {name:?}"))),
    })
}

fn configure_threads() -> Result<(), CliError> {
    let Ok(v) = std::env::var("REPHOM_THREADS") else { return Ok(()) };
    let n: usize = v
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| CliError::new("config.env", format!("REPHOM_THREADS={v:?} is not a positive integer")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| CliError::new("config.env", e.to_string()))
}

fn run(cli: Cli) -> Result<(String, Format), (CliError, Format)> {
    let flag_format = cli.format;
    let fail = |e: CliError| (e, flag_format.unwrap_or_default());
    let file = match &cli.config {
        Some(p) => FileConfig::load(p).map_err(fail)?,
        None => FileConfig::default(),
    };
    let file_format = file.format;
    type Runner = fn(&FileConfig) -> Result<commands::Output, CliError>;
    let (runner, flags): (Runner, FileConfig) = match cli.command {
        Command::Cotangent(a) => (commands::cotangent, a.into_config()),
        Command::Certify {
            space,
            samples,
            declared_dim,
        } => (
            commands::certify,
            FileConfig {
                samples,
                declared_dim,
                ..space.into_config()
            },
        ),
        Command::E2 { space, h, pmax, nmax } => (
            commands::e2,
            FileConfig {
                h,
                pmax,
                nmax,
                ..space.into_config()
            },
        ),
        Command::Koszul {
            model,
            field,
            cutoff,
            budget,
        } => (
            commands::koszul,
            FileConfig {
                model,
                field,
                cutoff,
                budget,
                ..FileConfig::default()
            },
        ),
        Command::Catalog {
            bounds,
            group,
            cpr,
            exponents,
            cutoff,
        } => (
            commands::catalog,
            FileConfig {
                bounds,
                group,
                cpr,
                exponents,
                cutoff,
                ..FileConfig::default()
            },
        ),
        Command::Schema { ref name } => {
            return schema(name).map(|s| (s.to_string(), Format::Json)).map_err(fail);
        }
    };
    let format = flag_format.or(file_format).unwrap_or_default();
    let cfg = overlay(flags, file);
    configure_threads().map_err(|e| (e, format))?;
    let out = runner(&cfg).map_err(|e| (e, format))?;
    let text = match format {
        Format::Json => serde_json::to_string_pretty(&out.json).expect("output serializes"),
        Format::Table => out.table,
        Format::Csv => out.csv,
    };
    Ok((text, format))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let err = CliError::new("config.args", e.render().to_string().trim_end().to_string());
            eprintln!("{}", err.to_text());
            return ExitCode::from(err.exit_code());
        }
    };
    match run(cli) {
        Ok((text, _)) => {
            let mut stdout = std::io::stdout().lock();
            let _ = writeln!(stdout, "{}", text.trim_end());
            ExitCode::SUCCESS
        }
        Err((e, format)) => {
            match format {
                Format::Json => eprintln!("{}", e.to_json()),
                _ => eprintln!("{}", e.to_text()),
            }
            ExitCode::from(e.exit_code())
        }
    }
}
