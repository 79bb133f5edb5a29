mod cache;
mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

#[derive(Parser, Debug)]
#[command(name = "slicing", version, about = "Obstructions to slicing knots by signed crossing changes")]
struct Cli {
    #[command(flatten)]
    global: GlobalOpts,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct GlobalOpts {
    /// Directory for the content-addressed result cache.
    #[arg(long, global = true)]
    cache_dir: Option<PathBuf>,
    /// Print the full JSON report instead of a summary.
    #[arg(long, global = true)]
    json: bool,
    /// Worker threads (defaults to the number of cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Also examine forms with |det Q| = det K / t².
    #[arg(long, global = true)]
    experimental_square_quotient: bool,
    /// Require matchings to commute with conjugation.
    #[arg(long, global = true)]
    require_conjugation_symmetry: bool,
    /// Write the JSON report to this file.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Can the knot be sliced by changing p positive and n negative crossings?
    SliceCheck(commands::SliceCheckArgs),
    /// Half-integer forms of a given rank, determinant and even count.
    EnumForms(commands::EnumFormsArgs),
    /// d-invariants of a lens space.
    Dinv(commands::DinvArgs),
    /// Embeddings of a linear plumbing lattice into Zᵐ.
    Embed(commands::EmbedArgs),
    /// The K_n family: [4, …, 4] two-bridge knots.
    Kn(commands::KnArgs),
    /// Validate a CSV knot table.
    Ingest(commands::IngestArgs),
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    if let Some(t) = cli.global.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(t).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    let outcome = match cli.command {
        Command::SliceCheck(a) => commands::slice_check(&cli.global, &a),
        Command::EnumForms(a) => commands::enum_forms(&cli.global, &a),
        Command::Dinv(a) => commands::dinv(&cli.global, &a),
        Command::Embed(a) => commands::embed(&cli.global, &a),
        Command::Kn(a) => commands::kn(&cli.global, &a),
        Command::Ingest(a) => commands::ingest(&cli.global, &a),
    };
    match outcome {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
