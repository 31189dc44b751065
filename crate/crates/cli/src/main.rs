//! Command-line front end: chain I/O in the shared JSON format, figure
//! data emission, and the full verification report runner.
//!
//! Exit codes: 0 success, 1 check failure, 2 usage or schema error.

mod commands;

use clap::{Parser, Subcommand};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "cycleops", version, about = "geometric mod-p cycle operations")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Exact flat distance between two 0-chains, with certificate.
    Flatnorm {
        #[arg(long)]
        a: PathBuf,
        #[arg(long)]
        b: PathBuf,
        /// Cross-check against the exhaustive oracle (unit count <= 12).
        #[arg(long)]
        oracle: bool,
        /// Write the filling certificate here.
        #[arg(long)]
        certificate: Option<PathBuf>,
        #[arg(long, default_value_t = 60)]
        cap: usize,
    },
    /// Barycentric Bockstein representative of a 0-cycle on a sphere.
    Bockstein {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Cyclic product of a 0-cycle: (lens, disk) atoms.
    Cyc {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Diagonal-excision mass series of a polyhedral 1-cycle (p = 2).
    CycMass {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long, default_value_t = 16)]
        imax: usize,
        /// Total Monte Carlo samples (scientific notation accepted).
        #[arg(long, default_value = "1e6")]
        samples: String,
        #[arg(long, default_value_t = 7)]
        seed: u64,
        #[arg(long)]
        report: PathBuf,
    },
    /// Sample the planar Steenrod support family.
    Sq {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        i: usize,
        /// Affine subspace file {"basis":[[..],..],"offset":[..]}.
        #[arg(long)]
        plane: PathBuf,
        #[arg(long, default_value_t = 1000)]
        sample: usize,
        #[arg(long, default_value_t = 7)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Residues relating theta components to P^i and beta P^i.
    Coeff {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        n: u64,
        #[arg(long)]
        i: u64,
    },
    /// Residual report for the real DFT block structure.
    FourierCheck {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        n: usize,
    },
    /// Standard gluing of a parameter chain through a family.
    Glue {
        #[arg(long)]
        family: PathBuf,
        #[arg(long)]
        chain: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// Also verify d(glue T) = glue(dT) and report the defect.
        #[arg(long)]
        check_boundary: bool,
        /// Nudge non-transversal chains into general position.
        #[arg(long)]
        perturb_seed: Option<u64>,
    },
    /// Cellular homology oracles.
    Oracle {
        #[command(subcommand)]
        what: OracleCommand,
    },
    /// Figure-data emission (CSV).
    Figures {
        #[arg(value_parser = ["fig2", "fig3", "fig4"])]
        which: String,
        #[arg(long, default_value_t = 2)]
        p: u64,
        /// Use the inscribed-square input for fig2 (midpoint of both
        /// diagonals cancels mod 2).
        #[arg(long)]
        square: bool,
        /// Use a two-point input for fig2 (a single midpoint).
        #[arg(long)]
        pair: bool,
        #[arg(long, default_value_t = 200)]
        sample: usize,
        #[arg(long, default_value_t = 7)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Run the acceptance criteria and emit a machine-readable report.
    VerifyAll {
        #[arg(long, default_value_t = 7)]
        seed: u64,
        /// Restrict to criteria whose name (or id) matches.
        #[arg(long)]
        only: Option<String>,
        #[arg(long)]
        report: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum OracleCommand {
    /// Lens-space complex homology over Z and Z_p.
    Lens {
        #[arg(long)]
        p: u64,
        #[arg(long, default_value_t = 5)]
        dim: usize,
    },
    /// Snake Bockstein on the degree-p mapping cone, with all
    /// intermediate cochains.
    BocksteinCheck {
        #[arg(long)]
        p: u64,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(cli.command) {
        Ok(pass) => {
            if pass {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

// Re-export for the commands module.
pub(crate) use Command as CliCommand;
pub(crate) use OracleCommand as CliOracleCommand;
