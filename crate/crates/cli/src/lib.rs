//! Command-line front end: parses options, runs one experiment over its
//! parameter grid and writes the result as CSV.
//!
//! No step uses randomness; the same options and input files always give
//! byte-identical output.

pub mod commands;
pub mod config;
pub mod output;

use clap::{Parser, Subcommand};
use zerosum::Error;

use crate::commands::Context;
use crate::config::Options;

#[derive(Debug, Parser)]
#[command(name = "zerosum", version, about = "Explicit-formula experiments for additive prime problems")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Subcommand)]
pub enum Command {
    /// Tabulate ψ(x) and the Chebyshev check.
    BuildSieve(Options),
    /// Average Goldbach sum against its explicit formula.
    VerifyGoldbach(Options),
    /// Cesàro-weighted Goldbach average of order k.
    VerifyCesaro(Options),
    /// The k = 1 weighted Goldbach formula.
    VerifyGy(Options),
    /// Cesàro-weighted prime-plus-square average with Bessel terms.
    VerifyHl(Options),
    /// Short-interval sums against their main terms.
    VerifyShortinterval(Options),
    /// Truncated mean squares of the exponential sums.
    Meansquare(Options),
    /// Fourth moment of the squares sum.
    Fourthmoment(Options),
    /// Smoothed exponential sum against its zero-sum approximation.
    ExpsumCompare(Options),
    /// Laplace-type integrals against their closed forms.
    LaplaceCheck(Options),
    /// Theta modularity and the ℓ = 2 bridge on a fixed sample.
    ThetaCheck(Options),
    /// Bessel functions by several routes.
    BesselCheck(Options),
}

impl Command {
    pub fn options(&self) -> &Options {
        match self {
            Command::BuildSieve(o)
            | Command::VerifyGoldbach(o)
            | Command::VerifyCesaro(o)
            | Command::VerifyGy(o)
            | Command::VerifyHl(o)
            | Command::VerifyShortinterval(o)
            | Command::Meansquare(o)
            | Command::Fourthmoment(o)
            | Command::ExpsumCompare(o)
            | Command::LaplaceCheck(o)
            | Command::ThetaCheck(o)
            | Command::BesselCheck(o) => o,
        }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Validation(String),
    #[error(transparent)]
    Core(#[from] Error),
    #[error("output: {0}")]
    Output(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Validation(_) => 2,
            CliError::Core(Error::Accuracy { .. } | Error::NonFinite { .. }) => 3,
            CliError::Core(_) => 2,
            CliError::Output(_) => 4,
        }
    }
}

/// Runs one command to completion and writes its CSV.
pub fn execute(command: &Command) -> Result<(), CliError> {
    let opts = command.options().clone().resolve()?;
    if let Some(path) = &opts.output {
        output::check_writable(path)?;
    }
    if let Some(path) = &opts.zeros {
        if !path.is_file() {
            return Err(CliError::Validation(format!("zero file {} not found", path.display())));
        }
    }
    let out = opts.output.clone();
    let cx = Context::new(opts)?;
    let table = match command {
        Command::BuildSieve(_) => commands::build_sieve_cmd(&cx),
        Command::VerifyGoldbach(_) => commands::verify_goldbach(&cx),
        Command::VerifyCesaro(_) => commands::verify_cesaro(&cx),
        Command::VerifyGy(_) => commands::verify_gy(&cx),
        Command::VerifyHl(_) => commands::verify_hl(&cx),
        Command::VerifyShortinterval(_) => commands::verify_shortinterval(&cx),
        Command::Meansquare(_) => commands::meansquare(&cx),
        Command::Fourthmoment(_) => commands::fourthmoment(&cx),
        Command::ExpsumCompare(_) => commands::expsum_compare(&cx),
        Command::LaplaceCheck(_) => commands::laplace_check(&cx),
        Command::ThetaCheck(_) => commands::theta_check(&cx),
        Command::BesselCheck(_) => commands::bessel_check(&cx),
    }?;
    output::emit(&table, out.as_deref())
}

/// Parses `args` and runs; returns the process exit status.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match execute(&cli.command) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
