use std::io::Write;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use wavesym::commands::{self, Outcome};
use wavesym::{Format, RunConfig};

#[derive(Parser)]
#[command(name = "wavesym", version, about = "Symmetry and transform verification for relativistic wave equations")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Json,
    Md,
}

#[derive(Args)]
struct Global {
    /// Seed for sampled momenta.
    #[arg(long, global = true, default_value_t = 42)]
    seed: u64,
    /// Number of sampled momenta (fit samples for classification).
    #[arg(long, global = true, default_value_t = 12)]
    samples: usize,
    /// Holdout momenta for classification.
    #[arg(long, global = true, default_value_t = 4)]
    holdout: usize,
    /// Pass threshold for transform, projector and position residuals.
    #[arg(long, global = true, default_value_t = 1e-9)]
    tol: f64,
    #[arg(long, global = true, value_enum, default_value = "md")]
    format: FormatArg,
    #[arg(long, global = true, default_value_t = 1.0)]
    mass: f64,
    #[arg(long, global = true, default_value_t = 1.0)]
    kappa: f64,
    /// Swap σ₁ and σ₂ in the two-component chi equation (negative control).
    #[arg(long, global = true)]
    corrupt_chi: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Classify an equation under every discrete symmetry element.
    Report {
        #[arg(long)]
        equation: String,
    },
    /// Run every verification and summarize.
    VerifyAll,
    /// Check closure of a generator set under the calibrated algebra.
    Algebra {
        #[arg(long)]
        generators: String,
    },
    /// Check a catalog transform.
    Transform {
        #[arg(long)]
        name: String,
    },
    /// Compare a position operator's closed form with its conjugation construction.
    Position {
        #[arg(long)]
        name: String,
    },
    /// Energy-sign/helicity content of an equation.
    Content {
        #[arg(long)]
        equation: String,
        #[arg(long)]
        generators: Option<String>,
    },
}

fn run(cli: Cli) -> Outcome {
    let g = cli.global;
    let cfg = RunConfig {
        seed: g.seed,
        samples: g.samples,
        holdout: g.holdout,
        tol: g.tol,
        format: match g.format {
            FormatArg::Json => Format::Json,
            FormatArg::Md => Format::Md,
        },
        mass: g.mass,
        kappa: g.kappa,
        corrupt_chi: g.corrupt_chi,
    };
    if let Err(msg) = cfg.validate() {
        return Outcome::usage(format!("error: {msg}"));
    }
    match &cli.command {
        Command::Report { equation } => commands::report(&cfg, equation),
        Command::VerifyAll => commands::verify_all(&cfg),
        Command::Algebra { generators } => commands::algebra(&cfg, generators),
        Command::Transform { name } => commands::transform(&cfg, name),
        Command::Position { name } => commands::position(&cfg, name),
        Command::Content { equation, generators } => commands::content(&cfg, equation, generators.as_deref()),
    }
}

fn main() -> ExitCode {
    let out = run(Cli::parse());
    if !out.stdout.is_empty() {
        let mut so = std::io::stdout().lock();
        let _ = writeln!(so, "{}", out.stdout.trim_end());
    }
    if !out.stderr.is_empty() {
        eprintln!("{}", out.stderr);
    }
    ExitCode::from(out.status.code())
}
