// SPDX-License-Identifier: Apache-2.0

//! `quivmono`: relation checks, transforms and monodromy computations on JSON inputs.
//!
//! Exit status is 0 when every check passes, 1 on a failed check or a violated
//! precondition, and 2 on unreadable or invalid input.

mod commands;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::commands::CliError;

#[derive(Parser, Debug)]
#[command(name = "quivmono", version, about = "Monodromy correspondence for Riemann surface quivers")]
struct Cli {
    #[command(flatten)]
    global: GlobalArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone, Debug)]
pub struct GlobalArgs {
    /// Check tolerance [default: 1e-9, or 1e-6 for monodromy and hilbert21]
    #[arg(long, global = true)]
    pub tol: Option<f64>,
    /// Non-resonant eigenvalue set: `zero`, `strip` or a T file
    #[arg(long = "T", global = true, value_name = "zero|strip|FILE")]
    pub t: Option<String>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Random seed for sampling commands
    #[arg(long, global = true, default_value_t = 42)]
    pub seed: u64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Direction {
    /// Connection system to monodromy representation
    Exp,
    /// Monodromy representation to connection system
    Log,
}

#[derive(Args, Clone, Debug)]
pub struct IntegratorArgs {
    #[arg(long, default_value_t = 1e-10)]
    pub rtol: f64,
    #[arg(long, default_value_t = 1e-12)]
    pub atol: f64,
    #[arg(long, default_value_t = 200_000)]
    pub max_steps: usize,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Residue, deformed preprojective and eigenvalue checks on a connection system
    CheckAdditive { quiver: PathBuf, rep: PathBuf },
    /// Arrow, vertex and surface group relations on a monodromy representation
    CheckMultiplicative { quiver: PathBuf, mrep: PathBuf },
    /// Transform between connection systems and monodromy representations
    Transform {
        quiver: PathBuf,
        input: PathBuf,
        #[arg(long, value_enum)]
        direction: Direction,
        /// Re-check the relations on the output
        #[arg(long)]
        verify: bool,
        /// Write the output here instead of stdout
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Numerical monodromy of a Fuchsian system along a loop, or around all poles
    Monodromy {
        system: PathBuf,
        /// Loop file; without it every pole is encircled from --base
        #[arg(name = "LOOP")]
        lp: Option<PathBuf>,
        /// Base point `re,im` for the product over all poles
        #[arg(long, allow_hyphen_values = true)]
        base: Option<String>,
        /// Pole indices in composition order, comma separated
        #[arg(long)]
        order: Option<String>,
        /// Minimum distance between loop and poles
        #[arg(long)]
        clearance: Option<f64>,
        #[command(flatten)]
        integrator: IntegratorArgs,
    },
    /// Lifting criterion for a bundle decomposition
    Lift { summands: PathBuf },
    /// Sampled checks of the exponential functor on a Dynkin double quiver
    Dynkin {
        /// A<n>, D<n>, E6, E7 or E8
        #[arg(long = "type")]
        quiver_type: String,
        /// Dimension bound per vertex, comma separated; one value applies to every vertex
        #[arg(long)]
        dims: String,
        #[arg(long, default_value_t = 200)]
        samples: usize,
    },
    /// Unipotent local monodromies from a star-shaped connection system
    Hilbert21 {
        star: PathBuf,
        /// Centre point positions `re,im`, three times
        #[arg(long, num_args = 3, allow_hyphen_values = true)]
        positions: Option<Vec<String>>,
        /// Unipotency orders, comma separated
        #[arg(long)]
        orders: Option<String>,
        #[command(flatten)]
        integrator: IntegratorArgs,
    },
}

fn run(cli: Cli) -> Result<report::Report, CliError> {
    let g = &cli.global;
    if let Some(tol) = g.tol {
        if !(tol > 0.0 && tol.is_finite()) {
            return Err(CliError::input(format!("--tol must be positive, got {tol}")));
        }
    }
    match cli.command {
        Command::CheckAdditive { quiver, rep } => commands::check_additive(g, &quiver, &rep),
        Command::CheckMultiplicative { quiver, mrep } => commands::check_multiplicative(g, &quiver, &mrep),
        Command::Transform {
            quiver,
            input,
            direction,
            verify,
            output,
        } => commands::transform(g, &quiver, &input, direction, verify, output.as_deref()),
        Command::Monodromy {
            system,
            lp,
            base,
            order,
            clearance,
            integrator,
        } => commands::monodromy(g, &system, lp.as_deref(), base.as_deref(), order.as_deref(), clearance, &integrator),
        Command::Lift { summands } => commands::lift(g, &summands),
        Command::Dynkin { quiver_type, dims, samples } => commands::dynkin(g, &quiver_type, &dims, samples),
        Command::Hilbert21 {
            star,
            positions,
            orders,
            integrator,
        } => commands::hilbert21(g, &star, positions.as_deref(), orders.as_deref(), &integrator),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let format = cli.global.format;
    match run(cli) {
        Ok(report) => {
            if !report.suppressed {
                let text = match format {
                    Format::Json => report.to_json(),
                    Format::Text => report.to_text(),
                };
                print!("{text}");
            }
            ExitCode::from(if report.passed { 0 } else { 1 })
        }
        Err(e) => {
            eprintln!("error: {}", e.message);
            ExitCode::from(e.code)
        }
    }
}
