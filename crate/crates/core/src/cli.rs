//! Command-line front end: `generate`, `run`, `compare` and `sweep`.

use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::mpsc;
use std::thread;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::algo::{Algorithm, ChhAlgorithm};
use crate::csschh::{ChhParams, ChhSketch};
use crate::datagen::{gen_stream, PairModel, PairStream, StreamSpec, DEFAULT_UNIVERSE};
use crate::error::{ChhError, Result};
use crate::eval::{equal_space_config, score, throughput, EvalResult};
use crate::io::{open_pairs, write_atomically, write_pairs, PairFormat, PairIter};
use crate::mgchh::{MgchhSketch, DEFAULT_SEED};
use crate::oracle::{ExactCounts, DEFAULT_PAIR_CAP};
use crate::report::ChhReport;
use crate::Item;

/// Default budget for `compare`/`sweep`: the smallest reference
/// equal-space configuration (k1 = s1 = 4200, k2 = 63000, s2 = 20).
pub const DEFAULT_SPACE_BYTES: u64 = 1_058_400;

#[derive(Debug, Parser)]
#[command(
    name = "chh",
    version,
    about = "Correlated heavy hitters over two-dimensional streams"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Write a synthetic Zipf pair stream.
    Generate(GenerateArgs),
    /// Run one algorithm over a pair file and print its report.
    Run(RunArgs),
    /// Score algorithms against the exact answer on one input.
    Compare(CompareArgs),
    /// Sweep one experimental axis over generated streams; emits CSV.
    Sweep(SweepArgs),
}

#[derive(Debug, Clone, Copy, ValueEnum, Default)]
pub enum FormatArg {
    #[default]
    Binary,
    Csv,
}

impl From<FormatArg> for PairFormat {
    fn from(f: FormatArg) -> Self {
        match f {
            FormatArg::Binary => PairFormat::Binary,
            FormatArg::Csv => PairFormat::Csv,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum, Default, PartialEq, Eq)]
pub enum OutputArg {
    #[default]
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, ValueEnum, Default)]
pub enum ModelArg {
    #[default]
    Permuted,
    Plain,
}

#[derive(Debug, Clone, Args)]
pub struct StreamArgs {
    /// Stream length.
    #[arg(long, default_value_t = 1_000_000)]
    pub n: u64,
    /// Zipf skew.
    #[arg(long, default_value_t = 1.4)]
    pub rho: f64,
    #[arg(long, default_value_t = DEFAULT_UNIVERSE)]
    pub m1: u64,
    #[arg(long, default_value_t = DEFAULT_UNIVERSE)]
    pub m2: u64,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    #[arg(long, value_enum, default_value_t)]
    pub model: ModelArg,
}

impl StreamArgs {
    fn spec(&self) -> StreamSpec {
        StreamSpec {
            n: self.n,
            rho: self.rho,
            m1: self.m1,
            m2: self.m2,
            seed: self.seed,
            model: match self.model {
                ModelArg::Permuted => PairModel::Permuted,
                ModelArg::Plain => PairModel::Plain,
            },
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct GenerateArgs {
    #[command(flatten)]
    pub stream: StreamArgs,
    #[arg(long, value_enum, default_value_t)]
    pub format: FormatArg,
    /// Destination; stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Default, Args)]
pub struct SizingArgs {
    #[arg(long)]
    pub eps1: Option<f64>,
    #[arg(long)]
    pub eps2: Option<f64>,
    #[arg(long)]
    pub k1: Option<usize>,
    #[arg(long)]
    pub k2: Option<usize>,
    #[arg(long)]
    pub s1: Option<usize>,
    #[arg(long)]
    pub s2: Option<usize>,
    /// Equal-space budget shared by both algorithms.
    #[arg(long)]
    pub space_bytes: Option<u64>,
}

#[derive(Debug, Clone, Args)]
pub struct InputArgs {
    /// Pair file, or `-` for stdin.
    #[arg(long, default_value = "-")]
    pub input: PathBuf,
    #[arg(long, value_enum, default_value_t)]
    pub format: FormatArg,
}

#[derive(Debug, Clone, Args)]
pub struct RunArgs {
    #[arg(long)]
    pub algo: Algorithm,
    #[command(flatten)]
    pub input: InputArgs,
    #[arg(long)]
    pub phi1: f64,
    #[arg(long)]
    pub phi2: f64,
    #[command(flatten)]
    pub sizing: SizingArgs,
    /// Seed of the baseline's random secondary selection.
    #[arg(long, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    #[arg(long, value_enum, default_value_t)]
    pub output: OutputArg,
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Overlap file reading with updates through a bounded queue.
    #[arg(long)]
    pub pipelined: bool,
    /// Warn when the exact oracle holds more distinct tuples than this.
    #[arg(long, default_value_t = DEFAULT_PAIR_CAP)]
    pub oracle_cap: usize,
    /// Print the number of pairs read to stderr.
    #[arg(long, short)]
    pub verbose: bool,
}

#[derive(Debug, Clone, Args)]
pub struct CompareArgs {
    /// Comma-separated algorithms to score.
    #[arg(long, value_delimiter = ',', default_value = "csschh,mgchh")]
    pub algo: Vec<Algorithm>,
    #[command(flatten)]
    pub input: InputArgs,
    #[arg(long)]
    pub phi1: f64,
    #[arg(long)]
    pub phi2: f64,
    #[command(flatten)]
    pub sizing: SizingArgs,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    /// Timing repetitions per algorithm (median reported); 0 skips timing.
    #[arg(long, default_value_t = 3)]
    pub timing_runs: usize,
    #[arg(long, value_enum, default_value_t)]
    pub output: OutputArg,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, default_value_t = DEFAULT_PAIR_CAP)]
    pub oracle_cap: usize,
}

#[derive(Debug, Clone, Copy, ValueEnum, PartialEq, Eq)]
pub enum SweepAxis {
    N,
    Rho,
    Space,
    Phi1,
    Phi2,
}

#[derive(Debug, Clone, Args)]
pub struct SweepArgs {
    #[arg(long, value_enum)]
    pub axis: SweepAxis,
    /// Comma-separated axis values (space in bytes).
    #[arg(long, value_delimiter = ',', required = true)]
    pub values: Vec<f64>,
    #[command(flatten)]
    pub stream: StreamArgs,
    #[arg(long, default_value_t = 0.01)]
    pub phi1: f64,
    #[arg(long, default_value_t = 0.1)]
    pub phi2: f64,
    #[command(flatten)]
    pub sizing: SizingArgs,
    /// Seeds per point: seed, seed+1, ...
    #[arg(long, default_value_t = 10)]
    pub trials: u64,
    #[arg(long, value_delimiter = ',', default_value = "csschh,mgchh")]
    pub algo: Vec<Algorithm>,
    #[arg(long, default_value_t = 3)]
    pub timing_runs: usize,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// How counters are chosen for a run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Sizing {
    /// From the error tolerances.
    Params { eps1: f64, eps2: f64 },
    /// Explicit counters; each algorithm needs its own pair.
    Counters {
        k: Option<(usize, usize)>,
        s: Option<(usize, usize)>,
    },
    /// Equal modeled memory for both algorithms.
    Space(u64),
    /// Only valid for the exact oracle.
    Unsized,
}

fn pair_of(a: Option<usize>, b: Option<usize>, names: &str) -> Result<Option<(usize, usize)>> {
    match (a, b) {
        (Some(a), Some(b)) => Ok(Some((a, b))),
        (None, None) => Ok(None),
        _ => Err(ChhError::Usage(format!("{names} must be given together"))),
    }
}

impl SizingArgs {
    /// Exactly one mode may be supplied.
    pub fn resolve(&self) -> Result<Sizing> {
        let params = match (self.eps1, self.eps2) {
            (Some(eps1), Some(eps2)) => Some(Sizing::Params { eps1, eps2 }),
            (None, None) => None,
            _ => {
                return Err(ChhError::Usage(
                    "--eps1 and --eps2 must be given together".into(),
                ))
            }
        };
        let k = pair_of(self.k1, self.k2, "--k1 and --k2")?;
        let s = pair_of(self.s1, self.s2, "--s1 and --s2")?;
        let counters = (k.is_some() || s.is_some()).then_some(Sizing::Counters { k, s });
        let space = self.space_bytes.map(Sizing::Space);
        let modes: Vec<Sizing> = [params, counters, space].into_iter().flatten().collect();
        match modes.as_slice() {
            [] => Ok(Sizing::Unsized),
            [one] => Ok(*one),
            _ => Err(ChhError::Usage(
                "give exactly one sizing mode: --eps1/--eps2, explicit counters, or --space-bytes"
                    .into(),
            )),
        }
    }
}

/// Fully resolved configuration of a single run.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub algorithm: Algorithm,
    pub phi1: f64,
    pub phi2: f64,
    pub sizing: Sizing,
    pub seed: u64,
}

/// A constructed algorithm plus the counters it was given.
pub enum Built {
    Csschh(Box<ChhSketch>),
    Mgchh(MgchhSketch),
    Exact(ExactCounts),
}

impl Built {
    fn as_algo(&mut self) -> &mut dyn ChhAlgorithm {
        match self {
            Built::Csschh(s) => &mut **s,
            Built::Mgchh(s) => s,
            Built::Exact(s) => s,
        }
    }

    fn as_ref(&self) -> &dyn ChhAlgorithm {
        match self {
            Built::Csschh(s) => &**s,
            Built::Mgchh(s) => s,
            Built::Exact(s) => s,
        }
    }

    /// `(a, b)` = `(k1, k2)` or `(s1, s2)`.
    fn counters(&self) -> Option<(usize, usize)> {
        match self {
            Built::Csschh(s) => Some((s.k1(), s.k2())),
            Built::Mgchh(s) => Some((s.s1(), s.s2())),
            Built::Exact(_) => None,
        }
    }
}

impl RunConfig {
    pub fn build(&self) -> Result<Built> {
        let missing = |what: &str| ChhError::Usage(format!("{} needs {what}", self.algorithm));
        match self.algorithm {
            Algorithm::Exact => Ok(Built::Exact(ExactCounts::new())),
            Algorithm::Csschh => {
                let sketch = match self.sizing {
                    Sizing::Params { eps1, eps2 } => {
                        ChhSketch::new(ChhParams::new(self.phi1, self.phi2, eps1, eps2)?)?
                    }
                    Sizing::Counters {
                        k: Some((k1, k2)), ..
                    } => ChhSketch::with_counters(k1, k2)?,
                    Sizing::Counters { k: None, .. } => return Err(missing("--k1 and --k2")),
                    Sizing::Space(bytes) => {
                        let c = equal_space_config(bytes)?;
                        ChhSketch::with_counters(c.k1 as usize, c.k2 as usize)?
                    }
                    Sizing::Unsized => return Err(missing("a sizing mode")),
                };
                Ok(Built::Csschh(Box::new(sketch)))
            }
            Algorithm::Mgchh => {
                let sketch = match self.sizing {
                    Sizing::Params { eps1, eps2 } => MgchhSketch::from_params(
                        &ChhParams::new(self.phi1, self.phi2, eps1, eps2)?,
                        self.seed,
                    )?,
                    Sizing::Counters {
                        s: Some((s1, s2)), ..
                    } => MgchhSketch::new(s1, s2, self.seed)?,
                    Sizing::Counters { s: None, .. } => return Err(missing("--s1 and --s2")),
                    Sizing::Space(bytes) => {
                        let c = equal_space_config(bytes)?;
                        MgchhSketch::new(c.s1 as usize, c.s2 as usize, self.seed)?
                    }
                    Sizing::Unsized => return Err(missing("a sizing mode")),
                };
                Ok(Built::Mgchh(sketch))
            }
        }
    }
}

fn emit<F>(out: Option<&Path>, body: F) -> Result<()>
where
    F: FnOnce(&mut dyn Write) -> Result<()>,
{
    match out {
        Some(path) => write_atomically(path, body),
        None => {
            let stdout = io::stdout();
            let mut lock = stdout.lock();
            body(&mut lock)?;
            lock.flush()?;
            Ok(())
        }
    }
}

struct CapWatch {
    cap: usize,
    warned: bool,
}

impl CapWatch {
    fn check(&mut self, oracle: &ExactCounts) {
        if !self.warned && oracle.distinct_pairs() > self.cap {
            self.warned = true;
            eprintln!(
                "warning: exact oracle holds more than {} distinct tuples; memory is unbounded",
                self.cap
            );
        }
    }
}

const PIPE_CHUNK: usize = 1 << 14;

/// Feeds every pair into `alg`; returns the count. With `pipelined`, a
/// reader thread hands chunks over a bounded channel (order preserved).
fn feed(pairs: PairIter, built: &mut Built, pipelined: bool, cap: &mut CapWatch) -> Result<u64> {
    let mut n = 0u64;
    let mut step = |built: &mut Built, x: u32, y: u32| {
        built.as_algo().update(x as Item, y as Item);
        n += 1;
        if n.is_multiple_of(1 << 16) {
            if let Built::Exact(o) = built {
                cap.check(o);
            }
        }
    };
    if !pipelined {
        for pair in pairs {
            let (x, y) = pair?;
            step(built, x, y);
        }
    } else {
        let (tx, rx) = mpsc::sync_channel::<Result<Vec<(u32, u32)>>>(4);
        thread::scope(|scope| -> Result<()> {
            scope.spawn(move || {
                let mut it = pairs;
                loop {
                    let mut chunk = Vec::with_capacity(PIPE_CHUNK);
                    for pair in it.by_ref().take(PIPE_CHUNK) {
                        match pair {
                            Ok(p) => chunk.push(p),
                            Err(e) => {
                                let _ = tx.send(Err(e));
                                return;
                            }
                        }
                    }
                    let last = chunk.len() < PIPE_CHUNK;
                    if tx.send(Ok(chunk)).is_err() || last {
                        return;
                    }
                }
            });
            for chunk in rx {
                for (x, y) in chunk? {
                    step(built, x, y);
                }
            }
            Ok(())
        })?;
    }
    if let Built::Exact(o) = built {
        cap.check(o);
    }
    Ok(n)
}

pub fn cmd_generate(args: &GenerateArgs) -> Result<u64> {
    let spec = args.stream.spec();
    let stream = PairStream::new(&spec)?;
    let format = args.format.into();
    let mut written = 0;
    emit(args.out.as_deref(), |w| {
        written = write_pairs(w, stream, format)?;
        Ok(())
    })?;
    Ok(written)
}

fn write_report(report: &ChhReport, output: OutputArg, out: Option<&Path>) -> Result<()> {
    emit(out, |w| match output {
        OutputArg::Json => report.write_json_lines(w, None),
        OutputArg::Csv => report.write_csv(w, None),
    })
}

pub fn cmd_run(args: &RunArgs) -> Result<ChhReport> {
    let cfg = RunConfig {
        algorithm: args.algo,
        phi1: args.phi1,
        phi2: args.phi2,
        sizing: args.sizing.resolve()?,
        seed: args.seed,
    };
    check_thresholds(cfg.phi1, cfg.phi2)?;
    let mut built = cfg.build()?;
    let pairs = open_pairs(&args.input.input, args.input.format.into())?;
    let mut cap = CapWatch {
        cap: args.oracle_cap,
        warned: false,
    };
    let n = feed(pairs, &mut built, args.pipelined, &mut cap)?;
    if args.verbose {
        eprintln!("{}: {n} pairs", cfg.algorithm);
    }
    let report = built.as_ref().query(cfg.phi1, cfg.phi2);
    write_report(&report, args.output, args.out.as_deref())?;
    Ok(report)
}

fn check_thresholds(phi1: f64, phi2: f64) -> Result<()> {
    for (name, v) in [("phi1", phi1), ("phi2", phi2)] {
        if !(v > 0.0 && v < 1.0) {
            return Err(ChhError::Usage(format!(
                "{name} must be in (0, 1), got {v}"
            )));
        }
    }
    Ok(())
}

/// One scored algorithm.
#[derive(Debug, Clone, Serialize)]
pub struct CompareRow {
    pub algorithm: String,
    pub counters: Option<(usize, usize)>,
    pub reported: usize,
    #[serde(flatten)]
    pub result: EvalResult,
}

/// Scores `algos` on an in-memory stream. The oracle runs once.
pub fn compare_stream(
    stream: &[(u32, u32)],
    algos: &[Algorithm],
    phi1: f64,
    phi2: f64,
    sizing: Sizing,
    seed: u64,
    timing_runs: usize,
) -> Result<Vec<CompareRow>> {
    if stream.is_empty() {
        return Err(ChhError::EmptyStream);
    }
    let oracle = ExactCounts::from_pairs(stream.iter().map(|&(x, y)| (x as Item, y as Item)));
    let truth = oracle.echh(phi1, phi2);
    let mut rows = Vec::with_capacity(algos.len());
    for &algorithm in algos {
        let cfg = RunConfig {
            algorithm,
            phi1,
            phi2,
            sizing,
            seed,
        };
        let mut built = cfg.build()?;
        for &(x, y) in stream {
            built.as_algo().update(x as Item, y as Item);
        }
        let report = built.as_ref().query(phi1, phi2);
        let mut result = score(&report, &truth);
        result.space_bytes_model = built.as_ref().space_bytes_model();
        if timing_runs > 0 {
            let t = match algorithm {
                Algorithm::Csschh => throughput(|| expect_cs(cfg.build()?), stream, timing_runs)?,
                Algorithm::Mgchh => throughput(|| expect_mg(cfg.build()?), stream, timing_runs)?,
                Algorithm::Exact => throughput(|| Ok(ExactCounts::new()), stream, timing_runs)?,
            };
            result.updates_per_ms = Some(t.median);
        }
        rows.push(CompareRow {
            algorithm: algorithm.to_string(),
            counters: built.counters(),
            reported: report.chhs.len(),
            result,
        });
    }
    Ok(rows)
}

fn expect_cs(b: Built) -> Result<ChhSketch> {
    match b {
        Built::Csschh(s) => Ok(*s),
        _ => unreachable!("csschh config built another algorithm"),
    }
}

fn expect_mg(b: Built) -> Result<MgchhSketch> {
    match b {
        Built::Mgchh(s) => Ok(s),
        _ => unreachable!("mgchh config built another algorithm"),
    }
}

const METRIC_COLUMNS: [&str; 8] = [
    "recall",
    "precision",
    "abs_err_max",
    "abs_err_mean",
    "rel_err_max",
    "rel_err_mean",
    "updates_per_ms",
    "space_bytes_model",
];

fn metric_cells(r: &EvalResult) -> Vec<String> {
    let opt = |v: Option<String>| v.unwrap_or_default();
    vec![
        r.recall.to_string(),
        r.precision.to_string(),
        r.abs_err_max.to_string(),
        r.abs_err_mean.to_string(),
        r.rel_err_max.to_string(),
        r.rel_err_mean.to_string(),
        opt(r.updates_per_ms.map(|v| format!("{v:.3}"))),
        opt(r.space_bytes_model.map(|v| v.to_string())),
    ]
}

pub fn cmd_compare(args: &CompareArgs) -> Result<Vec<CompareRow>> {
    check_thresholds(args.phi1, args.phi2)?;
    let sizing = match args.sizing.resolve()? {
        Sizing::Unsized => Sizing::Space(DEFAULT_SPACE_BYTES),
        s => s,
    };
    let stream: Vec<(u32, u32)> =
        open_pairs(&args.input.input, args.input.format.into())?.collect::<Result<_>>()?;
    let mut cap = CapWatch {
        cap: args.oracle_cap,
        warned: false,
    };
    if stream.len() > args.oracle_cap {
        cap.check(&ExactCounts::from_pairs(
            stream.iter().map(|&(x, y)| (x as Item, y as Item)),
        ));
    }
    let rows = compare_stream(
        &stream,
        &args.algo,
        args.phi1,
        args.phi2,
        sizing,
        args.seed,
        args.timing_runs,
    )?;
    emit(args.out.as_deref(), |w| match args.output {
        OutputArg::Json => {
            for row in &rows {
                serde_json::to_writer(&mut *w, row)?;
                w.write_all(b"\n")?;
            }
            Ok(())
        }
        OutputArg::Csv => {
            let mut out = csv::Writer::from_writer(w);
            let mut header = vec!["algorithm", "a", "b", "reported"];
            header.extend(METRIC_COLUMNS);
            out.write_record(&header)?;
            for row in &rows {
                let (a, b) = row
                    .counters
                    .map_or((String::new(), String::new()), |(a, b)| {
                        (a.to_string(), b.to_string())
                    });
                let mut rec = vec![row.algorithm.clone(), a, b, row.reported.to_string()];
                rec.extend(metric_cells(&row.result));
                out.write_record(&rec)?;
            }
            out.flush()?;
            Ok(())
        }
    })?;
    Ok(rows)
}

/// One sweep point for one seed and algorithm.
#[derive(Debug, Clone)]
pub struct SweepRow {
    pub value: f64,
    pub trial: u64,
    pub seed: u64,
    pub row: CompareRow,
}

pub fn sweep(args: &SweepArgs) -> Result<Vec<SweepRow>> {
    let base_sizing = match args.sizing.resolve()? {
        Sizing::Unsized => Sizing::Space(DEFAULT_SPACE_BYTES),
        s => s,
    };
    let mut rows = Vec::new();
    for &value in &args.values {
        let mut spec = args.stream.spec();
        let (mut phi1, mut phi2, mut sizing) = (args.phi1, args.phi2, base_sizing);
        match args.axis {
            SweepAxis::N => spec.n = value as u64,
            SweepAxis::Rho => spec.rho = value,
            SweepAxis::Space => sizing = Sizing::Space(value as u64),
            SweepAxis::Phi1 => phi1 = value,
            SweepAxis::Phi2 => phi2 = value,
        }
        check_thresholds(phi1, phi2)?;
        for trial in 0..args.trials {
            spec.seed = args.stream.seed.wrapping_add(trial);
            let stream = gen_stream(&spec)?;
            let scored = compare_stream(
                &stream,
                &args.algo,
                phi1,
                phi2,
                sizing,
                spec.seed,
                args.timing_runs,
            )?;
            rows.extend(scored.into_iter().map(|row| SweepRow {
                value,
                trial,
                seed: spec.seed,
                row,
            }));
        }
    }
    Ok(rows)
}

pub fn cmd_sweep(args: &SweepArgs) -> Result<Vec<SweepRow>> {
    let rows = sweep(args)?;
    let axis = format!("{:?}", args.axis).to_ascii_lowercase();
    emit(args.out.as_deref(), |w| {
        let mut out = csv::Writer::from_writer(w);
        let mut header = vec![
            "axis",
            "value",
            "trial",
            "seed",
            "algorithm",
            "a",
            "b",
            "reported",
        ];
        header.extend(METRIC_COLUMNS);
        out.write_record(&header)?;
        for r in &rows {
            let (a, b) = r
                .row
                .counters
                .map_or((String::new(), String::new()), |(a, b)| {
                    (a.to_string(), b.to_string())
                });
            let mut rec = vec![
                axis.clone(),
                r.value.to_string(),
                r.trial.to_string(),
                r.seed.to_string(),
                r.row.algorithm.clone(),
                a,
                b,
                r.row.reported.to_string(),
            ];
            rec.extend(metric_cells(&r.row.result));
            out.write_record(&rec)?;
        }
        out.flush()?;
        Ok(())
    })?;
    Ok(rows)
}

pub fn run(cli: &Cli) -> Result<()> {
    match &cli.command {
        Command::Generate(a) => cmd_generate(a).map(drop),
        Command::Run(a) => cmd_run(a).map(drop),
        Command::Compare(a) => cmd_compare(a).map(drop),
        Command::Sweep(a) => cmd_sweep(a).map(drop),
    }
}

/// Entry point for the `chh` binary. Exit code 2 for usage errors, 1 for
/// everything else.
pub fn main_with_args<I, T>(args: I) -> ExitCode
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(2)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                ChhError::Usage(_) => ExitCode::from(2),
                _ => ExitCode::FAILURE,
            }
        }
    }
}
