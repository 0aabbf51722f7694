//! `vps`: run variational checks on `.vps` model files.

mod commands;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use vps_core::convention::SIGN_SHEET;

pub const EXIT_USAGE: u8 = 64;

#[derive(Parser, Debug)]
#[command(name = "vps", version, about = "Exact checks on variational models")]
pub struct Cli {
    /// Model file in the .vps language.
    #[arg(short = 'm', long = "model", global = true, value_name = "FILE")]
    pub model: Option<PathBuf>,
    /// Print a JSON report instead of text.
    #[arg(long, global = true)]
    pub json: bool,
    /// Prolongation order bound for on-shell decisions.
    #[arg(long = "order-bound", global = true, value_name = "N")]
    pub order_bound: Option<u32>,
    /// Seed for the randomized suites.
    #[arg(long, global = true, value_name = "N")]
    pub seed: Option<u64>,
    /// Print the sign conventions and exit.
    #[arg(long = "sign-sheet")]
    pub sign_sheet: bool,
    #[command(subcommand)]
    pub command: Option<Command>,
}

#[derive(Args, Debug, Clone)]
pub struct LagrangianArg {
    /// Lagrangian name; may be omitted when the model declares one.
    #[arg(short = 'L', long = "lagrangian", value_name = "NAME")]
    pub lagrangian: Option<String>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Euler-Lagrange expressions.
    El(LagrangianArg),
    /// Linearization of the Euler-Lagrange operator.
    Linearize(LagrangianArg),
    /// Formal adjoint of a declared operator, or of the linearized equations.
    Adjoint {
        #[command(flatten)]
        l: LagrangianArg,
        #[arg(long, value_name = "NAME")]
        operator: Option<String>,
    },
    /// Legendre form theta.
    Legendre(LagrangianArg),
    /// Presymplectic current omega.
    Omega(LagrangianArg),
    /// Self-adjointness of the linearized equations.
    Helmholtz(LagrangianArg),
    /// Noether symmetry, current, conservation certificate and the first
    /// Noether theorem check.
    Noether {
        #[command(flatten)]
        l: LagrangianArg,
        #[arg(long, value_name = "NAME")]
        symmetry: String,
    },
    /// Noether identity G^+(E(L)) = 0.
    Identity {
        #[command(flatten)]
        l: LagrangianArg,
        #[arg(long, value_name = "NAME")]
        operator: String,
    },
    /// Gauge checks for an operator G.
    Gauge {
        #[command(flatten)]
        l: LagrangianArg,
        #[arg(long, value_name = "NAME")]
        operator: String,
    },
    /// Whether a direction lies in the kernel of omega on shell.
    Kernel {
        #[command(flatten)]
        l: LagrangianArg,
        #[arg(long, value_name = "NAME", conflicts_with = "operator")]
        symmetry: Option<String>,
        #[arg(long, value_name = "NAME", requires = "param")]
        operator: Option<String>,
        /// Parameter expression, one per operator input.
        #[arg(long, value_name = "EXPR")]
        param: Vec<String>,
    },
    /// Bracket of two Noether charges.
    Bracket {
        #[command(flatten)]
        l: LagrangianArg,
        /// Give twice: `--symmetry A --symmetry B`.
        #[arg(long, value_name = "NAME", required = true)]
        symmetry: Vec<String>,
    },
    /// Run the acceptance suite.
    Selftest {
        /// Run a single criterion.
        #[arg(long, value_name = "N")]
        criterion: Option<u8>,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    if cli.sign_sheet {
        print!("{SIGN_SHEET}");
        return ExitCode::SUCCESS;
    }
    if cli.command.is_none() {
        eprintln!("error: a subcommand is required (try `vps --help`)");
        return ExitCode::from(EXIT_USAGE);
    }
    match commands::run(&cli) {
        Ok(report) => {
            if cli.json {
                println!("{}", report.to_json());
            } else {
                print!("{}", report.to_text());
            }
            ExitCode::from(report.status.exit_code() as u8)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
