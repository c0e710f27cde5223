//! `incmeter`: compute inconsistency measures from the command line.
//!
//! Exit codes: 0 success, 1 usage or input error, 2 backend failure or
//! method disagreement, 3 timeout.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Duration;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use incmeter_core::bench::{self, generate_corpus, load_kb_dir, write_corpus, SrsParams};
use incmeter_core::sat_encodings::{encode_with, maxsat_contension};
use incmeter_core::solver::emit_dimacs;
use incmeter_core::{
    compute, emit_asp, parse_kb, BackendConfig, BackendKind, CardinalityMethod, ComputeOptions, Error,
    KnowledgeBase, Measure, Method,
};

#[derive(Parser)]
#[command(name = "incmeter", version, about = "Inconsistency measures for propositional knowledge bases")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute a measure; prints the value on stdout and statistics as JSON on stderr.
    Measure(MeasureArgs),
    /// Write the CNF deciding `measure <= u` (or the MaxSAT instance with --wcnf).
    Encode(EncodeArgs),
    /// Write the answer set program for a measure.
    EmitAsp(EmitAspArgs),
    /// Write a corpus of random knowledge bases.
    Generate(GenerateArgs),
    /// Run a method matrix over knowledge bases and write CSV reports.
    Bench(BenchArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum MethodFlag {
    Sat,
    Maxsat,
    Naive,
    Asp,
}

#[derive(Clone, Copy, ValueEnum)]
enum SearchFlag {
    Binary,
    Linear,
}

#[derive(Args)]
struct BackendArgs {
    /// Wall-clock budget in seconds.
    #[arg(long)]
    timeout: Option<f64>,
    /// Seed for the internal SAT solver.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// External DIMACS SAT solver (default: $INCMETER_SAT_SOLVER, else internal).
    #[arg(long)]
    sat_solver: Option<PathBuf>,
    /// External ASP solver (default: $INCMETER_ASP_SOLVER).
    #[arg(long)]
    asp_solver: Option<PathBuf>,
    #[arg(long, default_value_t = CardinalityMethod::Sequential)]
    cardinality: CardinalityMethod,
}

impl BackendArgs {
    fn options(&self) -> anyhow::Result<ComputeOptions> {
        let timeout = match self.timeout {
            Some(t) if !(t.is_finite() && t > 0.0) => bail!(Error::InvalidParams(format!("timeout {t} must be positive"))),
            t => t.map(Duration::from_secs_f64),
        };
        let kind = match &self.sat_solver {
            Some(path) => BackendKind::External {
                path: path.clone(),
                args: Vec::new(),
            },
            None => BackendConfig::from_env().map(|c| c.kind).unwrap_or_default(),
        };
        Ok(ComputeOptions {
            backend: BackendConfig {
                kind,
                timeout,
                seed: self.seed,
            },
            cardinality: self.cardinality,
            asp_solver: self.asp_solver.clone(),
        })
    }
}

#[derive(Args)]
struct MeasureArgs {
    #[arg(long)]
    measure: Measure,
    #[arg(long, value_enum, default_value_t = MethodFlag::Sat)]
    method: MethodFlag,
    /// Search strategy for --method sat.
    #[arg(long, value_enum, default_value_t = SearchFlag::Binary)]
    search: SearchFlag,
    #[command(flatten)]
    backend: BackendArgs,
    /// Knowledge base file, one formula per line.
    input: PathBuf,
}

#[derive(Args)]
struct EncodeArgs {
    #[arg(long)]
    measure: Measure,
    /// Upper bound to decide; the number of interpretation blocks for hitting-set.
    #[arg(short = 'u', long = "bound", required_unless_present = "wcnf")]
    u: Option<u64>,
    /// Write the contension MaxSAT instance as WCNF instead.
    #[arg(long, conflicts_with = "u")]
    wcnf: bool,
    #[arg(long, default_value_t = CardinalityMethod::Sequential)]
    cardinality: CardinalityMethod,
    input: PathBuf,
    /// Output file (default: stdout).
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct EmitAspArgs {
    #[arg(long)]
    measure: Measure,
    input: PathBuf,
    /// Output file (default: stdout).
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct GenerateArgs {
    /// Number of knowledge bases.
    #[arg(long, default_value_t = 100)]
    count: usize,
    /// Signature size.
    #[arg(long, default_value_t = 3)]
    atoms: usize,
    #[arg(long, default_value_t = 5)]
    min_formulas: usize,
    #[arg(long, default_value_t = 15)]
    max_formulas: usize,
    #[arg(long, default_value_t = 0.3)]
    pd: f64,
    #[arg(long, default_value_t = 0.3)]
    pc: f64,
    #[arg(long, default_value_t = 0.3)]
    pn: f64,
    /// Factor applied to the connective probabilities per level.
    #[arg(long, default_value_t = 0.5)]
    discount: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output directory.
    #[arg(short, long)]
    output: PathBuf,
}

#[derive(Args)]
struct BenchArgs {
    /// Knowledge base files or directories of `.kb` files.
    #[arg(required = true)]
    inputs: Vec<PathBuf>,
    /// Comma-separated measures (default: all).
    #[arg(long, value_delimiter = ',')]
    measures: Vec<Measure>,
    /// Comma-separated methods among sat-binary, sat-linear, maxsat, naive, asp.
    #[arg(long, value_delimiter = ',', default_value = "sat-binary,sat-linear,maxsat,naive")]
    methods: Vec<Method>,
    #[arg(long, default_value_t = 1)]
    workers: usize,
    #[command(flatten)]
    backend: BackendArgs,
    /// Directory for the CSV reports.
    #[arg(short, long)]
    output: PathBuf,
}

fn read_kb(path: &Path) -> anyhow::Result<KnowledgeBase> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    parse_kb(&text).with_context(|| format!("parsing {}", path.display()))
}

fn write_output(path: Option<&Path>, text: &str) -> anyhow::Result<()> {
    match path {
        Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => Ok(std::io::stdout().lock().write_all(text.as_bytes())?),
    }
}

fn measure(args: &MeasureArgs) -> anyhow::Result<()> {
    let kb = read_kb(&args.input)?;
    let method = match (args.method, args.search) {
        (MethodFlag::Sat, SearchFlag::Binary) => Method::SatBinary,
        (MethodFlag::Sat, SearchFlag::Linear) => Method::SatLinear,
        (MethodFlag::Maxsat, _) => Method::MaxSat,
        (MethodFlag::Naive, _) => Method::Naive,
        (MethodFlag::Asp, _) => Method::Asp,
    };
    if !method.supports(args.measure) {
        bail!(Error::UnsupportedMethod {
            method: method.to_string(),
            measure: args.measure,
        });
    }
    let out = compute(&kb, args.measure, method, &args.backend.options()?)?;
    println!("{}", out.value);
    eprintln!("{}", serde_json::to_string_pretty(&out)?);
    Ok(())
}

fn encode(args: &EncodeArgs) -> anyhow::Result<()> {
    let kb = read_kb(&args.input)?;
    let text = if args.wcnf {
        if args.measure != Measure::Contension {
            bail!(Error::UnsupportedMethod {
                method: "maxsat".into(),
                measure: args.measure,
            });
        }
        maxsat_contension(&kb).to_wcnf()
    } else {
        let u = args.u.expect("clap requires -u without --wcnf");
        emit_dimacs(&encode_with(args.measure, &kb, u, args.cardinality).cnf)
    };
    write_output(args.output.as_deref(), &text)
}

fn emit(args: &EmitAspArgs) -> anyhow::Result<()> {
    let kb = read_kb(&args.input)?;
    write_output(args.output.as_deref(), &emit_asp(args.measure, &kb).text())
}

fn generate(args: &GenerateArgs) -> anyhow::Result<()> {
    let params = SrsParams {
        pd: args.pd,
        pc: args.pc,
        pn: args.pn,
        discount: args.discount,
        signature_size: args.atoms,
        min_formulas: args.min_formulas,
        max_formulas: args.max_formulas,
        seed: args.seed,
    };
    let corpus = generate_corpus(&params, args.count)?;
    write_corpus(&args.output, &params, &corpus)?;
    println!("wrote {} knowledge bases to {}", corpus.len(), args.output.display());
    Ok(())
}

fn run_bench(args: &BenchArgs) -> anyhow::Result<()> {
    let mut kbs = Vec::new();
    for input in &args.inputs {
        if input.is_dir() {
            kbs.extend(load_kb_dir(input).with_context(|| format!("loading {}", input.display()))?);
        } else {
            let id = input.file_stem().unwrap_or_default().to_string_lossy().into_owned();
            kbs.push((id, read_kb(input)?));
        }
    }
    let measures = if args.measures.is_empty() {
        Measure::ALL.to_vec()
    } else {
        args.measures.clone()
    };
    let options = args.backend.options()?;
    let records = bench::run_matrix(&kbs, &measures, &args.methods, &options, args.workers)?;
    let timeout = options.backend.timeout.unwrap_or(Duration::ZERO);
    let files = bench::emit_reports(&records, &args.output, timeout)?;
    let timeouts = records.iter().filter(|r| r.is_timeout()).count();
    println!(
        "{} runs on {} knowledge bases, {timeouts} timeouts; wrote {} files to {}",
        records.len(),
        kbs.len(),
        files.len(),
        args.output.display()
    );
    Ok(())
}

fn exit_code(err: &anyhow::Error) -> u8 {
    match err.downcast_ref::<Error>() {
        Some(Error::Timeout { .. }) => 3,
        Some(
            Error::BackendUnavailable(_)
            | Error::Backend(_)
            | Error::MalformedOutput(_)
            | Error::HardUnsat
            | Error::Disagreement { .. },
        ) => 2,
        _ => 1,
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if e.use_stderr() => {
            let _ = e.print();
            return ExitCode::from(1);
        }
        Err(e) => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
    };
    let result = match &cli.command {
        Command::Measure(a) => measure(a),
        Command::Encode(a) => encode(a),
        Command::EmitAsp(a) => emit(a),
        Command::Generate(a) => generate(a),
        Command::Bench(a) => run_bench(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}
