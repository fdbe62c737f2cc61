//! `sig-lab`: exact signatures, cohomology and Hodge checks for triangulated manifolds.

mod commands;
mod report;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use siglab::hodge::MetricSpec;

use commands::{FlatScope, Generated};

#[derive(Parser)]
#[command(
    name = "sig-lab",
    version,
    about = "Exact signature, cohomology and Hodge checks for triangulated manifolds"
)]
struct Cli {
    /// Emit the report as JSON instead of text.
    #[arg(long, global = true)]
    json: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
enum Orientation {
    /// The file's signs, or the propagated orientation when it has none.
    #[default]
    Given,
    Reverse,
}

#[derive(Subcommand)]
enum Command {
    /// Full pipeline: validation, orientation, Betti numbers, χ, Q, σ and Hodge checks.
    Report {
        path: PathBuf,
        #[arg(long, default_value = "identity", value_parser = parse_metric)]
        metric: MetricSpec,
        #[arg(long, value_enum, default_value_t)]
        orientation: Orientation,
        /// Random cochains decomposed per degree.
        #[arg(long, default_value_t = 2)]
        samples: usize,
    },
    /// f-vector, Betti numbers and Euler characteristic.
    Betti { path: PathBuf },
    /// Intersection form, inertia and signature.
    Signature {
        path: PathBuf,
        #[arg(long, value_enum, default_value_t)]
        orientation: Orientation,
    },
    /// Harmonic spaces, Hodge decompositions and Poisson solvability.
    HodgeCheck {
        path: PathBuf,
        #[arg(long, default_value = "identity", value_parser = parse_metric)]
        metric: MetricSpec,
        #[arg(long, default_value_t = 2)]
        samples: usize,
    },
    /// Sign identities and the signature operator on the flat torus.
    Flatmodel {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 1)]
        cutoff: u32,
    },
    /// Exterior-algebra identities of `*` and `J`; JSON by default.
    StarCheck {
        #[arg(long)]
        n: usize,
    },
    /// Index of the signature operator on a Fourier truncation; JSON by default.
    Index {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 1)]
        cutoff: u32,
    },
    /// Checks a map document, or the prism over a complex document.
    MapsCheck {
        path: PathBuf,
        #[arg(long, default_value_t = 5)]
        samples: usize,
    },
    /// Writes a named, product or prism complex; `all` writes the bundled data files.
    Generate {
        /// A built-in name (s4, cp2_9, s2xs2, t4, t2, rp2_6, circle, s2, point), `product`, `prism` or `all`.
        what: String,
        /// Input complex files for `product` (two) and `prism` (one).
        inputs: Vec<PathBuf>,
        #[arg(short, long)]
        out: Option<PathBuf>,
        /// Target directory for `all`.
        #[arg(long, default_value = "data")]
        dir: PathBuf,
    },
}

fn parse_metric(s: &str) -> Result<MetricSpec, String> {
    s.parse().map_err(|e: siglab::Error| e.to_string())
}

/// Writes to stdout; a closed pipe is not an error worth reporting.
fn emit(text: &str) {
    let _ = writeln!(std::io::stdout().lock(), "{text}");
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut json = cli.json;
    let report = match cli.command {
        Command::Report {
            path,
            metric,
            orientation,
            samples,
        } => commands::report(&path, metric, orientation == Orientation::Reverse, samples),
        Command::Betti { path } => commands::betti(&path),
        Command::Signature { path, orientation } => {
            commands::signature(&path, orientation == Orientation::Reverse)
        }
        Command::HodgeCheck {
            path,
            metric,
            samples,
        } => commands::hodge_check(&path, metric, samples),
        Command::Flatmodel { n, cutoff } => commands::flat(n, cutoff, FlatScope::All),
        Command::StarCheck { n } => {
            json = true;
            commands::flat(n, 0, FlatScope::Star)
        }
        Command::Index { n, cutoff } => {
            json = true;
            commands::flat(n, cutoff, FlatScope::Index)
        }
        Command::MapsCheck { path, samples } => commands::maps_check(&path, samples),
        Command::Generate {
            what,
            inputs,
            out,
            dir,
        } => match commands::generate(&what, &inputs, out.as_deref(), &dir) {
            Generated::Document(text) => {
                emit(&text);
                return ExitCode::SUCCESS;
            }
            Generated::Report(r) => r,
        },
    };
    emit(&if json {
        report.to_json()
    } else {
        report.to_string()
    });
    ExitCode::from(report.exit_code as u8)
}
