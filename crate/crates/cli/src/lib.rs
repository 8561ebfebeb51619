//! Command-line front end for `semistable-core`: the reduction formula, `ν` sweeps,
//! Hecke relation checks, Mahler/wavelet expansions and the congruence lab.

pub mod commands;
pub mod parse;
pub mod schema;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Tsv,
}

#[derive(Debug, Parser)]
#[command(name = "semistable", version, about = "Mod-p reductions of semi-stable representations")]
pub struct Cli {
    /// Output format; `scan` defaults to tsv, everything else to json.
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Relative p-adic precision N (at least 2).
    #[arg(long, global = true, default_value_t = 8)]
    pub precision: u32,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Reduce V_{k,L} mod p.
    Reduce(ReduceArgs),
    /// Reduce along a grid of ν values.
    Scan(ScanArgs),
    /// Check the Iwahori–Hecke relations on random edge functions.
    HeckeVerify(HeckeArgs),
    /// Mahler and wavelet coefficients of a function on 0..n.
    Mahler(MahlerArgs),
    /// Congruence report for the first-derivative witness.
    Lab(LabArgs),
}

#[derive(Debug, Args)]
pub struct ReduceArgs {
    #[arg(short)]
    pub p: u64,
    #[arg(short)]
    pub k: u32,
    /// Rational part of L, as `a/b`.
    #[arg(short = 'L', default_value = "0", allow_hyphen_values = true)]
    pub l: String,
    /// Coefficient of √p in L, as `a/b`.
    #[arg(long = "L-sqrtp", default_value = "0", allow_hyphen_values = true)]
    pub l_sqrtp: String,
}

#[derive(Debug, Args)]
pub struct ScanArgs {
    #[arg(short)]
    pub p: u64,
    #[arg(short)]
    pub k: u32,
    /// Comma-separated half-integers or `inf`.
    #[arg(long, allow_hyphen_values = true, conflicts_with = "l_grid")]
    pub nu_grid: Option<String>,
    /// Comma-separated rational L values.
    #[arg(long = "L-grid", allow_hyphen_values = true)]
    pub l_grid: Option<String>,
}

#[derive(Debug, Args)]
pub struct HeckeArgs {
    #[arg(short)]
    pub p: u64,
    #[arg(short)]
    pub r: u32,
    #[arg(long, default_value_t = 100)]
    pub trials: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Args)]
pub struct MahlerArgs {
    #[arg(short)]
    pub p: u64,
    /// Comma-separated rationals g(0), g(1), ...
    #[arg(long, allow_hyphen_values = true)]
    pub values: String,
}

#[derive(Debug, Args)]
pub struct LabArgs {
    #[arg(short)]
    pub p: u64,
    #[arg(short)]
    pub r: u32,
    #[arg(short)]
    pub n: u32,
    /// Half-integer scale, as `a/b`.
    #[arg(short, allow_hyphen_values = true)]
    pub x: String,
}

/// Why a command did not succeed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CliError {
    /// Bad arguments; exit code 2.
    Usage(String),
    /// A computation failed; exit code 1.
    Failure(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Failure(_) => 1,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "usage error: {m}"),
            CliError::Failure(m) => write!(f, "error: {m}"),
        }
    }
}

/// Rendered output and whether every checked property held.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Output {
    pub text: String,
    pub ok: bool,
}

impl Output {
    pub fn exit_code(&self) -> i32 {
        if self.ok {
            0
        } else {
            1
        }
    }
}

pub fn run(cli: &Cli) -> Result<Output, CliError> {
    if cli.precision < 2 {
        return Err(CliError::Usage(format!("precision must be at least 2, got {}", cli.precision)));
    }
    let fmt = |default| cli.format.unwrap_or(default);
    match &cli.command {
        Command::Reduce(a) => commands::reduce(a, fmt(Format::Json)),
        Command::Scan(a) => commands::scan(a, fmt(Format::Tsv)),
        Command::HeckeVerify(a) => commands::hecke_verify(a, fmt(Format::Json)),
        Command::Mahler(a) => commands::mahler(a, cli.precision, fmt(Format::Json)),
        Command::Lab(a) => commands::lab(a, cli.precision, fmt(Format::Json)),
    }
}

/// Parse `args` (including the program name) and run; returns the text to print on stdout,
/// the text for stderr and the exit code.
pub fn run_args<I, T>(args: I) -> (String, String, i32)
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = e.exit_code();
            let text = e.render().to_string();
            return if code == 0 { (text, String::new(), 0) } else { (String::new(), text, 2) };
        }
    };
    match run(&cli) {
        Ok(out) => {
            let code = out.exit_code();
            (out.text, String::new(), code)
        }
        Err(e) => (String::new(), format!("{e}\n"), e.exit_code()),
    }
}
