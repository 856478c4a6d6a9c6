use std::io::Write;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use jetforms::dsl::Format;
use jetforms::msympl::{DEFAULT_SAMPLES, DEFAULT_SEED};
use jetforms::Error;

mod commands;
mod input;
mod output;

/// Exact exterior calculus on the first jet space.
///
/// Arguments that take a form accept DSL text such as `d[1,2;1,2] - beta`,
/// a JSON document as `@file.json`, or a catalog form as `catalog:NAME`
/// (representing form) or `catalog:NAME:effective`.
#[derive(Parser, Debug)]
#[command(name = "jetforms", version)]
struct Cli {
    /// Base dimension; defaults to the dimension of a catalog or file
    /// argument, else 4.
    #[arg(long, global = true)]
    n: Option<usize>,

    /// Constant parameters, comma separated.
    #[arg(long = "param", global = true, value_delimiter = ',')]
    params: Vec<String>,

    #[arg(long, global = true, default_value = "text")]
    format: String,

    /// Seed for sampled nondegeneracy checks.
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    seed: u64,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Effective part of the projection of a form.
    Effective {
        #[arg(allow_hyphen_values = true)]
        form: String,
    },
    /// Euler operator of an n-form, or of `L beta` for a polynomial `L`.
    Euler {
        #[arg(allow_hyphen_values = true)]
        input: String,
    },
    /// Monge–Ampère operator: pullback along a prolonged section.
    Extract {
        #[arg(allow_hyphen_values = true)]
        form: String,
    },
    /// A representing form for a second-order equation.
    Represent {
        #[arg(allow_hyphen_values = true)]
        pde: String,
        #[arg(long, default_value_t = 2)]
        degree: u32,
    },
    /// First-order variationality test with Lagrangian reconstruction.
    CheckVariational {
        #[arg(allow_hyphen_values = true)]
        form: String,
        #[arg(long, default_value_t = 2)]
        degree: u32,
    },
    /// Harrivel's criteria and a direct check of `de^beta + contact^w`.
    CheckMultisymplectic {
        #[arg(allow_hyphen_values = true)]
        form: String,
        #[arg(long, default_value_t = DEFAULT_SAMPLES)]
        samples: usize,
    },
    /// Built-in equations.
    Catalog {
        #[command(subcommand)]
        action: CatalogAction,
    },
    /// Euler–Lagrange expressions of a jet-polynomial Lagrangian.
    El {
        #[arg(long, value_delimiter = ',', required = true)]
        fields: Vec<String>,
        #[arg(long, allow_hyphen_values = true)]
        lagrangian: String,
    },
}

#[derive(Subcommand, Debug)]
enum CatalogAction {
    List,
    Show {
        name: String,
        #[arg(long)]
        validate: bool,
    },
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Invariant(_) => 2,
        _ => 1,
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let format: Format = match cli.format.parse() {
        Ok(f) => f,
        Err(e) => {
            eprintln!("error: --format: {e}");
            return ExitCode::from(1);
        }
    };
    match commands::run(&cli, format) {
        Ok(text) => {
            // A closed pipe (e.g. `| head`) is not an error.
            let _ = writeln!(std::io::stdout(), "{text}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
