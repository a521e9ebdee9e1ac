//! Command-line front end.

use std::collections::HashMap;
use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use readorder_core::{AugmentParams, Axis, ShiftDistribution};

use crate::bench::bench;
use crate::error::{Error, Result};
use crate::eval::{evaluate, DocumentEval, EvalReport};
use crate::io::{artifact_path, ingest, read_reference, write_file, InputFormat, OrderOutput};
use crate::strategy::{run_all, OrderStrategy, StrategyName};
use crate::svg::render_profile;
use crate::tensor::{run_dcpe, DcpeRequest};

#[derive(Debug, Parser)]
#[command(name = "readorder", version, about = "Reading orders for OCR token boxes")]
#[command(args_conflicts_with_subcommands = true)]
pub struct Cli {
    #[command(subcommand)]
    command: Option<Command>,
    #[command(flatten)]
    order: OrderArgs,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run the dilated position encoder on a JSON tensor file.
    Dcpe {
        #[arg(long)]
        input: PathBuf,
        /// Defaults to stdout.
        #[arg(long)]
        output: Option<PathBuf>,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum AxisArg {
    H,
    V,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum DistributionArg {
    Uniform,
    ClampedNormal,
}

#[derive(Debug, Args)]
struct OrderArgs {
    /// Annotation files to order.
    #[arg(long, num_args = 1..)]
    input: Vec<PathBuf>,
    #[arg(long, value_enum, default_value = "boxes-json")]
    format: InputFormat,
    #[arg(long, value_enum, default_value = "xycut")]
    order: StrategyName,
    #[arg(long, default_value_t = 0.5)]
    lambda_x: f64,
    #[arg(long, default_value_t = 0.5)]
    lambda_y: f64,
    #[arg(long, default_value_t = 5.0)]
    theta: f64,
    /// Base seed for augmented strategies; generated and reported when absent.
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, value_enum, default_value = "uniform")]
    distribution: DistributionArg,
    /// Reference order files; enables evaluation.
    #[arg(long = "ref", num_args = 1..)]
    reference: Vec<PathBuf>,
    /// Write the evaluation report as JSON.
    #[arg(long, requires = "reference")]
    report: Option<PathBuf>,
    /// Write the XY tree as JSON (xycut strategies only).
    #[arg(long)]
    dump_tree: Option<PathBuf>,
    /// Write an SVG plot of the projection profile.
    #[arg(long)]
    profile_svg: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "h")]
    axis: AxisArg,
    /// Time the ordering step over N repetitions per document.
    #[arg(long, value_name = "N")]
    bench: Option<usize>,
    /// Order output; a directory when several documents are processed.
    /// Defaults to JSON Lines on stdout.
    #[arg(long)]
    output: Option<PathBuf>,
    /// Worker threads.
    #[arg(long, default_value_t = 1)]
    jobs: usize,
}

/// Parses `args` and runs the tool, returning the process exit code.
pub fn main_with(args: impl IntoIterator<Item = OsString>, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = write!(err, "{}", e.render());
            return code;
        }
    };
    match run(cli, out, err) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}

fn run(cli: Cli, out: &mut dyn Write, err: &mut dyn Write) -> Result<()> {
    match cli.command {
        Some(Command::Dcpe { input, output }) => run_dcpe_command(&input, output.as_deref(), out),
        None => run_order_command(cli.order, out, err),
    }
}

fn run_dcpe_command(input: &std::path::Path, output: Option<&std::path::Path>, out: &mut dyn Write) -> Result<()> {
    let text = std::fs::read_to_string(input).map_err(|e| Error::io(input, e))?;
    let request: DcpeRequest = serde_json::from_str(&text).map_err(|e| Error::parse(input, &e))?;
    let json = serde_json::to_string(&run_dcpe(request)?).expect("plain data serialises");
    match output {
        Some(path) => write_file(path, &json),
        None => writeln!(out, "{json}").map_err(|e| Error::io("<stdout>", e)),
    }
}

fn generated_seed() -> u64 {
    use std::time::{SystemTime, UNIX_EPOCH};
    SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_nanos() as u64).unwrap_or(0)
}

fn run_order_command(args: OrderArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<()> {
    if args.input.is_empty() {
        return Err(Error::Usage("--input is required".into()));
    }
    let stdio = |e| Error::io("<stdio>", e);
    let mut docs = Vec::new();
    for path in &args.input {
        docs.extend(ingest(path, args.format)?);
    }
    let many = docs.len() > 1;

    let params =
        AugmentParams::new(args.lambda_x, args.lambda_y, args.theta)?.with_distribution(match args.distribution {
            DistributionArg::Uniform => ShiftDistribution::Uniform,
            DistributionArg::ClampedNormal => ShiftDistribution::ClampedNormal,
        });
    let augmented = matches!(args.order, StrategyName::AugXycut | StrategyName::AugYx);
    let seed = match (augmented, args.seed) {
        (true, None) => {
            let s = generated_seed();
            writeln!(err, "seed: {s}").map_err(stdio)?;
            Some(s)
        }
        (_, s) => s,
    };
    let strategy = OrderStrategy::from_name(args.order, params, seed)?;
    if args.dump_tree.is_some() && !strategy.produces_tree() {
        return Err(Error::Usage("--dump-tree needs --order xycut or aug-xycut".into()));
    }

    if let Some(reps) = args.bench {
        for s in bench(&docs, &strategy, reps)? {
            writeln!(
                out,
                "{}\ttokens={}\tmean={:.3} ms\tstddev={:.3} ms\tmin={:.3} ms\truns={}",
                s.id,
                s.tokens,
                s.mean * 1e3,
                s.stddev * 1e3,
                s.min * 1e3,
                s.samples
            )
            .map_err(stdio)?;
        }
    }

    let outcomes = run_all(&docs, &strategy, args.jobs)?;

    if args.output.is_some() || args.bench.is_none() {
        for (doc, outcome) in docs.iter().zip(&outcomes) {
            let json = OrderOutput::new(doc, strategy.name(), strategy.seed(), &outcome.order).to_json();
            match &args.output {
                Some(path) => write_file(&artifact_path(path, doc.id(), ".json", many), &json)?,
                None => writeln!(out, "{json}").map_err(stdio)?,
            }
        }
    }

    if let Some(path) = &args.dump_tree {
        for (doc, outcome) in docs.iter().zip(&outcomes) {
            let tree = outcome.tree.as_ref().ok_or_else(|| Error::Invariant("missing xy tree".into()))?;
            let json = serde_json::to_string_pretty(tree).expect("plain data serialises");
            write_file(&artifact_path(path, doc.id(), ".tree.json", many), &json)?;
        }
    }

    if let Some(path) = &args.profile_svg {
        let axis = match args.axis {
            AxisArg::H => Axis::Horizontal,
            AxisArg::V => Axis::Vertical,
        };
        for doc in &docs {
            render_profile(doc, axis, &artifact_path(path, doc.id(), ".svg", many))?;
        }
    }

    if !args.reference.is_empty() {
        let mut refs = HashMap::new();
        for path in &args.reference {
            refs.extend(read_reference(path)?);
        }
        let mut evals = Vec::new();
        for (doc, outcome) in docs.iter().zip(&outcomes) {
            let Some(reference) = refs.get(doc.id()) else {
                writeln!(err, "{}: no reference order, skipped", doc.id()).map_err(stdio)?;
                continue;
            };
            let entry = evaluate(&outcome.order, reference).map_err(|e| Error::Usage(format!("{}: {e}", doc.id())))?;
            evals.push(DocumentEval { id: doc.id().to_owned(), entry });
        }
        let report = EvalReport::new(evals);
        for d in &report.documents {
            writeln!(
                err,
                "{}\ttau={:.4}\tinversions={}\texact={}",
                d.id, d.entry.tau, d.entry.inversions, d.entry.exact_match
            )
            .map_err(stdio)?;
        }
        writeln!(err, "mean tau={:.4} exact={}/{}", report.mean_tau, report.exact_matches, report.documents.len())
            .map_err(stdio)?;
        if let Some(path) = &args.report {
            write_file(path, &serde_json::to_string_pretty(&report).expect("plain data serialises"))?;
        }
    }
    Ok(())
}
