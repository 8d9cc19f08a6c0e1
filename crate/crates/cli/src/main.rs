use std::io::IsTerminal;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use hamcheck::{
    cmd_check_compat, cmd_check_operator, cmd_corpus, cmd_list_examples, cmd_oracle, Style,
};

/// Decides compatibility of quasilinear systems with first-order Hamiltonian
/// operators of hydrodynamic type.
///
/// Exit codes: 0 pass, 1 conditions failed, 2 input error, 3 the geometric
/// conditions and the covering oracle disagree (or an internal failure).
#[derive(Parser)]
#[command(name = "hamcheck", version)]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Check that the operator is Hamiltonian.
    CheckOperator {
        /// Problem file path or bundled example name.
        input: String,
    },
    /// Check compatibility of the system with the operator.
    CheckCompat {
        /// Problem file path or bundled example name.
        input: String,
        /// Also run the covering oracle and compare verdicts.
        #[arg(long)]
        oracle: bool,
    },
    /// Run the covering oracle alone and print the residual coefficients.
    Oracle {
        /// Problem file path or bundled example name.
        input: String,
    },
    /// Run every bundled example against its recorded expectations.
    Corpus,
    /// List the bundled examples.
    ListExamples,
}

fn color_enabled() -> bool {
    match std::env::var("HAMCHECK_COLOR").as_deref() {
        Ok("0") => false,
        Ok(_) => true,
        Err(_) => std::io::stdout().is_terminal(),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let report = match &cli.command {
        Command::CheckOperator { input } => cmd_check_operator(input),
        Command::CheckCompat { input, oracle } => cmd_check_compat(input, *oracle),
        Command::Oracle { input } => cmd_oracle(input),
        Command::Corpus => cmd_corpus(),
        Command::ListExamples => cmd_list_examples(),
    };
    match cli.format {
        Format::Text => print!(
            "{}",
            report.to_text(Style {
                color: color_enabled()
            })
        ),
        Format::Json => println!("{}", report.to_json()),
    }
    ExitCode::from(report.exit_code())
}
