use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use nearly_kahler::commands::{self, Options, ScalarMode};
use nearly_kahler::report::Report;
use nearly_kahler::spec_io::SpaceSpec;
use nearly_kahler::{Error, DEFAULT_TOLERANCE};

#[derive(Parser)]
#[command(name = "nearly-kahler", version, about = "Verify homogeneous nearly Kähler structures in dimension six")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    global: Global,
}

#[derive(Args)]
struct Global {
    /// Tolerance for floating point verdicts.
    #[arg(long, global = true, default_value_t = DEFAULT_TOLERANCE)]
    tolerance: f64,
    /// Arithmetic: exact where possible, or floating point throughout.
    #[arg(long, global = true, value_enum, default_value_t = Scalar::Exact)]
    scalar: Scalar,
    /// Print the JSON report instead of the text summary.
    #[arg(long, global = true)]
    json: bool,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Flag manifold grid side n for {1..n}³.
    #[arg(long, global = true, default_value_t = 4)]
    grid: i64,
    /// Random samples for pointwise and (∇_X J)X = 0 checks.
    #[arg(long, global = true, default_value_t = 100)]
    samples: usize,
    /// Worker threads for sweeps and scans (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Denominator of the S³×S³ rational sweep.
    #[arg(long, global = true, default_value_t = 4)]
    sweep_denominator: i64,
    /// Largest numerator of the S³×S³ rational sweep.
    #[arg(long, global = true, default_value_t = 20)]
    sweep_max: i64,
}

#[derive(Clone, Copy, ValueEnum)]
enum Scalar {
    Exact,
    Float,
}

#[derive(Subcommand)]
enum Command {
    /// Run a catalog verification end to end.
    Verify {
        /// s3xs3, flag, cp3, s6, ledger-obata or cone
        space: String,
    },
    /// Solve the nearly Kähler system on the diagonal invariant forms of S³×S³.
    SolveS3xs3,
    /// Check a space document (see `emit`).
    Check {
        file: PathBuf,
        /// Also check torsion-freeness of the cone.
        #[arg(long)]
        cone: bool,
    },
    /// Dimension table of isotropy and transitive algebras.
    Table,
    /// Metric and form oracles on every catalog structure.
    CrossOracle,
    /// Print the space document of a catalog model.
    Emit {
        /// s3xs3, s3xs3-112, flag, cp3 or ledger-obata
        model: String,
    },
}

fn options(g: &Global) -> Options {
    Options {
        tolerance: g.tolerance,
        scalar: match g.scalar {
            Scalar::Exact => ScalarMode::Exact,
            Scalar::Float => ScalarMode::Float,
        },
        seed: g.seed,
        grid: g.grid,
        samples: g.samples,
        sweep_denominator: g.sweep_denominator,
        sweep_max_numerator: g.sweep_max,
    }
}

fn run(cli: &Cli) -> Result<Option<Report>, Error> {
    let o = options(&cli.global);
    Ok(Some(match &cli.command {
        Command::Verify { space } => commands::verify(space, &o)?,
        Command::SolveS3xs3 => commands::solve_s3xs3(&o)?,
        Command::Check { file, cone } => {
            let text = std::fs::read_to_string(file).map_err(|e| Error::Parse(format!("{}: {e}", file.display())))?;
            let spec = SpaceSpec::from_json(&text).map_err(|e| match e {
                Error::Parse(m) => Error::Parse(format!("{}: {m}", file.display())),
                e => e,
            })?;
            commands::check_spec(&spec, &o, *cone)?
        }
        Command::Table => commands::table(&o)?,
        Command::CrossOracle => commands::cross_oracle_report(&o)?,
        Command::Emit { model } => {
            println!("{}", commands::emit(model)?.to_json());
            return Ok(None);
        }
    }))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.global.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    match run(&cli) {
        Ok(None) => ExitCode::SUCCESS,
        Ok(Some(report)) => {
            if cli.global.json {
                println!("{}", report.to_json());
            } else {
                print!("{}", report.render());
            }
            ExitCode::from(report.exit_code() as u8)
        }
        Err(e @ (Error::Parse(_) | Error::Dimension(_))) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
        Err(e) => {
            eprintln!("error: {e} (violates {})", e.condition());
            ExitCode::from(1)
        }
    }
}
