mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use commands::{CliError, Output};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
}

#[derive(Debug, Parser)]
#[command(name = "nikulin", version, about = "Elliptic K3 surfaces with a 2-torsion section: fibers, quotients, lattices")]
struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value = "json")]
    format: Format,
    /// Mordell-Weil rank assumed for Picard number and determinant.
    #[arg(long, global = true, default_value_t = 0)]
    mw_rank: u32,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Classify the singular fibers of a surface given as {"a": [...], "b": [...]}.
    Classify { input: PathBuf },
    /// Build the quotient surface and cross-check its fibers against the table.
    Quotient { input: PathBuf },
    /// Discriminant group and form of a Gram matrix given as a JSON array of arrays.
    Lattice {
        input: PathBuf,
        /// Also list the forms obtained by reducing along isotropic elements of order 2.
        #[arg(long)]
        reductions: bool,
    },
    /// Search fiber configurations for the admissible d.
    TheoremSearch {
        /// Print the degeneration bookkeeping for this d.
        #[arg(long)]
        degeneration: Option<u64>,
    },
    /// Verify that the dual isogeny after the isogeny is doubling on fibers.
    IsogenyCheck {
        input: PathBuf,
        /// Base points t0 (rationals such as 2 or -1/3); repeat the flag or separate with commas.
        #[arg(long = "t0", required = true, num_args = 1, allow_hyphen_values = true, value_delimiter = ',')]
        t0: Vec<String>,
        /// Search bound for numerators and denominators of x.
        #[arg(long, default_value_t = 40)]
        height: i64,
        /// Points tested per fiber.
        #[arg(long, default_value_t = 4)]
        points: usize,
    },
    /// Build a member of one of the example families and classify it.
    Family {
        #[command(subcommand)]
        which: FamilyCommand,
    },
    /// Regenerate the fiber, determinant and Gamma tables.
    PaperTables {
        /// Cubic P as comma-separated ascending coefficients.
        #[arg(long, default_value = "1,1,0,1")]
        p: String,
    },
}

#[derive(Debug, Subcommand)]
pub enum FamilyCommand {
    /// y^2 = x(x^2 + P x + t^d) with P cubic.
    Xd {
        #[arg(long)]
        d: u32,
        #[arg(long, default_value = "1,1,0,1")]
        p: String,
    },
    /// y^2 = x(x^2 + P x + t^n (t-1)^(8-n)) with P = 2t^4 - (8-n)t^3 + a1 t^2 + a2 t + a3.
    Xprime {
        #[arg(long)]
        n: u32,
        #[arg(long, default_value = "0", allow_hyphen_values = true)]
        a1: String,
        #[arg(long, default_value = "1", allow_hyphen_values = true)]
        a2: String,
        #[arg(long, default_value = "1", allow_hyphen_values = true)]
        a3: String,
    },
    /// Seeded random surfaces with coefficients in -3..=3.
    Random {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 10)]
        count: usize,
    },
}

fn emit(out: &Output, format: Format) {
    match format {
        Format::Json => println!("{}", serde_json::to_string_pretty(&out.json).expect("serializable")),
        Format::Text => print!("{}", out.text),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Classify { input } => commands::classify(input, cli.mw_rank),
        Command::Quotient { input } => commands::quotient(input, cli.mw_rank),
        Command::Lattice { input, reductions } => commands::lattice(input, *reductions),
        Command::TheoremSearch { degeneration } => commands::theorem_search(cli.mw_rank, *degeneration),
        Command::IsogenyCheck { input, t0, height, points } => commands::isogeny_check(input, t0, *height, *points),
        Command::Family { which } => commands::family(which, cli.mw_rank),
        Command::PaperTables { p } => commands::paper_tables(p),
    };
    match result {
        Ok(out) => {
            emit(&out, cli.format);
            ExitCode::SUCCESS
        }
        Err(CliError::Domain { kind, message, place }) => {
            let obj = json!({ "error": kind, "message": message, "place": place });
            println!("{}", serde_json::to_string_pretty(&obj).expect("serializable"));
            eprintln!("error: {message}");
            ExitCode::from(2)
        }
        Err(CliError::Input(message)) => {
            eprintln!("error: {message}");
            ExitCode::from(1)
        }
    }
}
