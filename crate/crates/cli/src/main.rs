use std::io::Write;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

mod run;

use run::Outcome;

/// Exact computations on Bratteli diagrams, supernatural numbers and ordered
/// groups with order unit.
///
/// Sources are diagram or group JSON files, or `catalog:NAME`. Boolean
/// queries exit with 0 (yes), 1 (no) or 2 (input error).
#[derive(Parser, Debug)]
#[command(name = "brat", version)]
struct Cli {
    /// Levels to inspect; defaults to 16, or the last level of a finite diagram.
    #[arg(long, global = true)]
    depth: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, Default, ValueEnum)]
enum Format {
    #[default]
    Json,
    Dot,
}

#[derive(Args, Debug)]
struct Source {
    /// Diagram file or catalog:NAME.
    source: String,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Check the structural rules of a diagram or group descriptor.
    Validate(Source),
    /// Tower heights, their gcds and the ratios r_n.
    Towers(Source),
    /// The odometer with multiplicities r_n.
    Odometer {
        #[command(flatten)]
        src: Source,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
    },
    /// The diagram itself as a DOT graph.
    Dot(Source),
    /// Supernatural number of the maximal UHF subalgebra.
    Mu(Source),
    /// The canonical premorphism from the odometer, or verify one.
    Premorphism {
        #[command(flatten)]
        src: Source,
        /// Check the commutativity conditions instead of printing.
        #[arg(long)]
        verify: bool,
        /// Premorphism file to verify instead of the canonical one.
        #[arg(long, value_name = "FILE")]
        map: Option<String>,
        /// Source diagram of the premorphism; defaults to the odometer.
        #[arg(long, value_name = "SOURCE")]
        from: Option<String>,
    },
    /// Whether the UHF algebra of a supernatural number embeds unitally.
    Embed {
        #[command(flatten)]
        src: Source,
        #[arg(long, value_name = "SN")]
        uhf: String,
    },
    /// Whether n divides the order unit of K_0.
    K0Divides {
        #[command(flatten)]
        src: Source,
        #[arg(long)]
        n: u64,
    },
    /// Whether a vector at a level lies in the rational subgroup.
    Rsub {
        #[command(flatten)]
        src: Source,
        #[arg(long)]
        stage: usize,
        #[arg(long, allow_hyphen_values = true)]
        vector: String,
    },
    /// theta(x) for a rational x.
    Theta {
        #[command(flatten)]
        src: Source,
        #[arg(long, allow_hyphen_values = true)]
        x: String,
    },
    /// Whether m divides a vector at a level.
    Divide {
        #[command(flatten)]
        src: Source,
        #[arg(long)]
        stage: usize,
        #[arg(long, allow_hyphen_values = true)]
        vector: String,
        #[arg(long)]
        m: u64,
    },
    /// Compose the matrices between cut points.
    Telescope {
        #[command(flatten)]
        src: Source,
        #[arg(long)]
        cuts: String,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
    },
    /// Supernatural number arithmetic.
    #[command(subcommand)]
    Sn(SnCommand),
    /// Queries on ordered groups with order unit.
    #[command(subcommand)]
    Group(GroupCommand),
    /// List the built-in examples, or show one with its expected outputs.
    Catalog { name: Option<String> },
}

#[derive(Subcommand, Debug)]
enum SnCommand {
    Divides {
        a: String,
        b: String,
    },
    Mul {
        a: String,
        b: String,
    },
    #[command(arg_required_else_help = true)]
    Sup {
        values: Vec<String>,
    },
    #[command(arg_required_else_help = true)]
    Inf {
        values: Vec<String>,
    },
    /// The j-th natural number of the standard increasing sequence.
    Ell {
        n: String,
        j: u64,
    },
    /// Whether a rational lies in Q(N).
    Contains {
        n: String,
        #[arg(allow_hyphen_values = true)]
        x: String,
    },
}

#[derive(Subcommand, Debug)]
enum GroupCommand {
    Propd(Source),
    Maxsn(Source),
    Divides {
        #[command(flatten)]
        src: Source,
        #[arg(long)]
        n: u64,
    },
    Rsub {
        #[command(flatten)]
        src: Source,
        /// An integer, or "q,z" for q + z·alpha.
        #[arg(long, allow_hyphen_values = true)]
        element: String,
    },
    Theta {
        #[command(flatten)]
        src: Source,
        #[arg(long, allow_hyphen_values = true)]
        x: String,
    },
}

fn emit(outcome: Outcome) -> ExitCode {
    match outcome {
        Outcome::Answer { stdout, status } => {
            let mut out = std::io::stdout().lock();
            let _ = out.write_all(stdout.as_bytes());
            let _ = out.flush();
            ExitCode::from(status)
        }
        Outcome::Error(e) => {
            let _ = writeln!(std::io::stderr(), "{}", e.to_json());
            ExitCode::from(2)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let message = e.render().to_string();
            let message = message
                .lines()
                .next()
                .unwrap_or("")
                .trim_start_matches("error: ");
            return emit(Outcome::Error(run::CliError::new("usage", message)));
        }
    };
    emit(run::run(cli))
}
