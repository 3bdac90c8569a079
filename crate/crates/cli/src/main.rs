use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use lrkit_cli::{run, threads_from_env, Command, Options};

/// Exact checks for L∞[1]-algebroids, their Chevalley–Eilenberg algebras
/// and formal neighbourhoods of embeddings.
///
/// Exit codes: 0 when every check passes, 1 when a residual is found,
/// 2 on malformed input. `LRKIT_THREADS` sets the worker count.
#[derive(Parser)]
#[command(name = "lrkit", version)]
struct Cli {
    #[command(subcommand)]
    command: Sub,
}

#[derive(clap::Args)]
struct Common {
    /// Model file in the lrkit-model/1 JSON format.
    model: PathBuf,
    /// Override the weight cap of the file.
    #[arg(long)]
    weight: Option<usize>,
    /// Override the arity cap of the file.
    #[arg(long = "arity-cap")]
    arity_cap: Option<usize>,
    /// Print the report as JSON.
    #[arg(long)]
    json: bool,
    /// Omit timings, for byte-stable reports.
    #[arg(long)]
    no_timing: bool,
    /// Write the built object as a model file.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Sub {
    /// Validate the model against its structural invariants.
    Validate(Common),
    /// Higher Jacobi identities of the algebroid.
    Jacobi {
        #[command(flatten)]
        common: Common,
        /// Check a single arity instead of all up to the cap.
        #[arg(long)]
        arity: Option<usize>,
    },
    /// Build the Chevalley–Eilenberg differential.
    CeBuild(Common),
    /// Extract an algebroid from a degree-one derivation.
    CeExtract(Common),
    /// File and CE round trips.
    Roundtrip(Common),
    /// Leibniz rule and derivation property of the anchors.
    Leibniz(Common),
    /// The anchor as an L∞[1] morphism to derivations.
    Anchor(Common),
    /// Build 𝔇 on the normal symmetric algebra.
    FrakdBuild(Common),
    /// Report the weight components of 𝔇².
    FrakdSquare(Common),
    /// Kapranov differential of the normal curvature.
    Kapranov(Common),
    /// Retraction, commutator and transport identities.
    Lemmas(Common),
    /// Maurer–Cartan check for random unipotent conjugations of D₀.
    Mc {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 5)]
        samples: usize,
    },
    /// CE differential of the algebroid versus the direct construction.
    Duality(Common),
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (command, common) = match cli.command {
        Sub::Validate(c) => (Command::Validate, c),
        Sub::Jacobi { common, arity } => (Command::Jacobi { arity }, common),
        Sub::CeBuild(c) => (Command::CeBuild, c),
        Sub::CeExtract(c) => (Command::CeExtract, c),
        Sub::Roundtrip(c) => (Command::Roundtrip, c),
        Sub::Leibniz(c) => (Command::Leibniz, c),
        Sub::Anchor(c) => (Command::Anchor, c),
        Sub::FrakdBuild(c) => (Command::FrakdBuild, c),
        Sub::FrakdSquare(c) => (Command::FrakdSquare, c),
        Sub::Kapranov(c) => (Command::Kapranov, c),
        Sub::Lemmas(c) => (Command::Lemmas, c),
        Sub::Mc { common, seed, samples } => (Command::Mc { seed, samples }, common),
        Sub::Duality(c) => (Command::Duality, c),
    };
    let opts = Options { weight: common.weight, arity: common.arity_cap, threads: threads_from_env(), out: common.out.clone() };
    match run(&command, &common.model, &opts) {
        Ok(mut report) => {
            if common.no_timing {
                report.strip_timing();
            }
            print!("{}", if common.json { report.to_json() } else { report.to_text() });
            ExitCode::from(report.exit_code() as u8)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
