//! `airy-wkb`: spectra, wavefunction samples, accuracy tables and self-checks
//! for `V(r) = α r^k` in the Airy-summed WKB approximation.

mod commands;
mod levels;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use airy_wkb::{GridSpec, ProblemSetup};
use levels::IndexList;
use output::Format;

#[derive(Debug, Parser)]
#[command(name = "airy-wkb", version, about = "Airy-summed WKB bound states of V(r) = alpha r^k")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Semiclassical energies with their expectation value and discrepancy.
    Spectrum {
        #[command(flatten)]
        potential: PotentialArgs,
        #[command(flatten)]
        constants: ConstantArgs,
        /// Orbital quantum numbers, e.g. `1`, `0..2` or `0,2`.
        #[arg(long, default_value = "0")]
        l: IndexList,
        /// Radial quantum numbers, same syntax as `--l`.
        #[arg(long, default_value = "0..2")]
        n: IndexList,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Oscillator accuracy table next to the published values.
    Table1 {
        #[command(flatten)]
        constants: ConstantArgs,
        #[command(flatten)]
        reference: ReferenceArgs,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Linear-potential accuracy table next to the published values.
    Table2 {
        #[command(flatten)]
        constants: ConstantArgs,
        #[command(flatten)]
        reference: ReferenceArgs,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Sample Ψ, Ψ′ and HΨ of one level.
    Wavefunction {
        #[command(flatten)]
        potential: PotentialArgs,
        #[command(flatten)]
        constants: ConstantArgs,
        #[arg(long, default_value_t = 0)]
        n: u32,
        #[arg(long, default_value_t = 0)]
        l: u32,
        #[arg(long, default_value_t = 1000, value_parser = clap::value_parser!(u32).range(16..))]
        samples: u32,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Run the invariant suites; exits 1 if any check fails.
    Verify {
        /// Skip the Numerov cross-checks and the rescaled-table check.
        #[arg(long)]
        quick: bool,
        /// Append a check that always fails.
        #[arg(long)]
        force_fail: bool,
        #[command(flatten)]
        out: OutputArgs,
    },
}

#[derive(Debug, Args)]
struct PotentialArgs {
    /// Exponent of the potential; must be > 0.
    #[arg(long, default_value_t = 2.0, allow_negative_numbers = true)]
    k: f64,
}

#[derive(Debug, Args)]
struct ConstantArgs {
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    alpha: f64,
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    hbar: f64,
    #[arg(long, default_value_t = 0.5, allow_negative_numbers = true)]
    mass: f64,
}

impl ConstantArgs {
    fn setup(&self, k: f64) -> airy_wkb::Result<ProblemSetup> {
        ProblemSetup::new(self.hbar, self.mass, self.alpha, k)
    }
}

#[derive(Debug, Args)]
struct ReferenceArgs {
    /// Relative energy agreement required between Numerov grid halvings.
    #[arg(long, default_value_t = GridSpec::default().richardson_tol)]
    tol: f64,
}

#[derive(Debug, Args)]
struct OutputArgs {
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    /// Write here instead of stdout; replaced atomically.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
