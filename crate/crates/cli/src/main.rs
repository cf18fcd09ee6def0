use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

mod commands;
mod report;

use report::Format;

/// Analyses of finite and sampled test spaces.
#[derive(Debug, Parser)]
#[command(name = "tsp", version)]
struct Cli {
    /// Report layout.
    #[arg(long, global = true, value_enum, default_value = "plain")]
    format: Format,
    /// Exit with status 1 when an analysis comes out negative.
    #[arg(long, global = true)]
    strict: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Size, rank, event count and structural flags of a test space.
    Info { file: PathBuf },
    /// Build the logic of an algebraic test space.
    Logic {
        file: PathBuf,
        /// Also print the orthoalgebra table.
        #[arg(long)]
        print: bool,
    },
    /// Find a state, enumerate dispersion-free states or decide UDF.
    States(StatesArgs),
    /// Finite orthoalgebras.
    #[command(subcommand)]
    Oa(OaCommand),
    /// Sampled frame spaces.
    #[command(subcommand)]
    Metric(MetricCommand),
    /// Sample random frames of ℝᵈ into a `.tsp` file and a `.coords` sidecar.
    SampleFrames {
        #[arg(short = 'd', default_value_t = 3)]
        dim: usize,
        #[arg(short = 'n', default_value_t = 1000)]
        count: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(short = 'o', long)]
        output: PathBuf,
    },
    /// Extract a pairwise disjoint family of tests from a frame sample.
    Extract(ExtractArgs),
    /// Print a corpus instance.
    Gen {
        /// classical-N, two-disjoint, glued-pair, triangle, mo2 or stateless-grid.
        name: String,
    },
}

#[derive(Debug, Args)]
struct StatesArgs {
    file: PathBuf,
    /// List every dispersion-free state.
    #[arg(long)]
    dispersion_free: bool,
    /// Decide whether dispersion-free states cover every outcome.
    #[arg(long)]
    udf: bool,
    /// Check `state ...` lines from this file instead of solving.
    #[arg(long, value_name = "FILE")]
    verify: Option<PathBuf>,
    /// Largest outcome count for dispersion-free search.
    #[arg(long, default_value_t = testspace::states::DEFAULT_OUTCOME_CAP)]
    cap: usize,
}

#[derive(Debug, Subcommand)]
enum OaCommand {
    /// Print `boolean-N` or `mo-N`.
    Gen { name: String },
    /// Rebuild an orthoalgebra from its test space and look for an isomorphism.
    Roundtrip { file: PathBuf },
    /// Print the test space of an orthoalgebra.
    Space { file: PathBuf },
}

#[derive(Debug, Subcommand)]
enum MetricCommand {
    /// Check sample invariants, orthogonal subsets and cap bounds.
    Check {
        file: PathBuf,
        /// Coordinate sidecar; defaults to the `.coords` file next to FILE.
        #[arg(long)]
        coords: Option<PathBuf>,
        /// Orthogonality tolerance in radians.
        #[arg(long, default_value_t = testspace::metric::DEFAULT_ORTHO_TOL)]
        ortho_tol: f64,
        /// Angular cap radius in degrees for the rank bound.
        #[arg(long, default_value_t = 30.0)]
        cap_degrees: f64,
    },
}

#[derive(Debug, Args)]
struct ExtractArgs {
    file: PathBuf,
    #[arg(long)]
    coords: Option<PathBuf>,
    /// `auto:N` or `file:PATH`.
    #[arg(long, default_value = "auto:50")]
    basis: String,
    /// Coverage radius target.
    #[arg(long, default_value_t = 0.3)]
    delta: f64,
    /// Seed for the hidden-variable choice.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Minimum point distance between selected tests.
    #[arg(long, default_value_t = testspace::semiclassical::DEFAULT_MARGIN)]
    margin: f64,
    /// Ball radius of `auto:N` basic opens.
    #[arg(long, default_value_t = testspace::semiclassical::DEFAULT_BASIS_RADIUS)]
    basis_radius: f64,
    /// On failures, regenerate the sample with this many times more frames.
    #[arg(long)]
    resample_factor: Option<usize>,
    #[arg(long, default_value_t = testspace::metric::DEFAULT_ORTHO_TOL)]
    ortho_tol: f64,
    /// Write the extracted sub-test-space here (with a `.coords` sidecar).
    #[arg(short = 'o', long)]
    output: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(&cli) {
        Ok((report, negative)) => {
            print!("{}", report.render(cli.format));
            if negative && cli.strict {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
