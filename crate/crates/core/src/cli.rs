//! Command-line front end.
//!
//! Every randomized subcommand takes a mandatory `--seed`; nothing reads the
//! clock. Every file written starts with a `#` line echoing the parsed
//! configuration. Exit codes: 0 on success, 2 on usage errors, 1 on data or
//! shape errors (with the error name on stderr).

use std::ffi::OsString;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use crate::analysis::{
    self, coverage_experiment, empirical_ris_probabilities, empirical_sampling_probabilities,
    estimate_region_areas, kmeans_balance_experiment, lemma2_bound, lemma2_empirical,
    lemma3_bound, lemma3_empirical, lemma4_bound, rank_curve, samples_to_reach, BoundParams,
    ExperimentReport, LogBase, TrialTag,
};
use crate::embedding::{apply_embedding, build_embedding, EmbeddingKind, EmbeddingSpec, DEFAULT_SPARSE_DENSITY};
use crate::error::{Error, Result};
use crate::io;
use crate::matrix::{approximation_error, normalize_columns, numerical_rank, DataMatrix};
use crate::rng_from_seed;
use crate::sampling::{Method, NormConvention, SamplerSpec};
use crate::synth::{gen_arc_clusters, gen_union_subspaces, presets, ArcSpec, SubspaceSpec};

#[derive(Debug, Parser)]
#[command(name = "srs", version, about = "Spatial random sampling and column-sketching experiments")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generate synthetic data with ground-truth labels.
    #[command(subcommand)]
    Gen(GenCommand),
    /// Sample columns from a data matrix.
    Sketch(SketchArgs),
    /// Evaluate a matrix or a sketch.
    #[command(subcommand)]
    Eval(EvalCommand),
    /// Run a multi-trial experiment and write a report.
    #[command(subcommand)]
    Exp(ExpCommand),
}

#[derive(Debug, Args)]
pub struct DataOut {
    /// Matrix output path.
    #[arg(long, default_value = "data.csv")]
    pub out: PathBuf,
    /// Labels output path.
    #[arg(long, default_value = "labels.csv")]
    pub labels_out: PathBuf,
}

#[derive(Debug, Subcommand)]
pub enum GenCommand {
    /// Two clusters on arcs of the unit circle.
    Arcs {
        #[arg(long)]
        tau1: f64,
        #[arg(long)]
        tau2: f64,
        #[arg(long, default_value_t = 0.0)]
        center1: f64,
        #[arg(long, default_value_t = std::f64::consts::FRAC_PI_2)]
        center2: f64,
        #[arg(long)]
        n1: usize,
        #[arg(long)]
        n2: usize,
        #[arg(long)]
        seed: u64,
        #[command(flatten)]
        output: DataOut,
    },
    /// Points on a union of random linear subspaces.
    Subspaces {
        /// Ambient dimension.
        #[arg(long)]
        ambient: usize,
        /// Named configuration; overrides dims and populations.
        #[arg(long, value_enum)]
        preset: Option<Preset>,
        /// Per-subspace dimensions, comma separated.
        #[arg(long, value_delimiter = ',')]
        dims: Vec<usize>,
        /// Per-subspace point counts, comma separated.
        #[arg(long, value_delimiter = ',')]
        populations: Vec<usize>,
        #[arg(long)]
        seed: u64,
        #[command(flatten)]
        output: DataOut,
    },
}

#[derive(Debug, Clone, Copy, clap::ValueEnum)]
pub enum Preset {
    /// 50 planes with 20 or 500 points each.
    RankCapture,
    /// 20 planes with 30 or 700 points each.
    BalancedCoverage,
    /// Ten crowded planes and ten sparse 4-dimensional subspaces.
    DimensionSeeking,
}

#[derive(Debug, Args)]
pub struct EmbedArgs {
    /// Reduce the row dimension before sampling.
    #[arg(long, value_enum)]
    pub embed: Option<EmbeddingKind>,
    /// Target dimension of the embedding.
    #[arg(long, requires = "embed")]
    pub embed_dim: Option<usize>,
    /// Nonzero probability of the sparse embedding.
    #[arg(long, default_value_t = DEFAULT_SPARSE_DENSITY)]
    pub embed_density: f64,
    /// Seed of the embedding matrix (defaults to --seed).
    #[arg(long)]
    pub embed_seed: Option<u64>,
}

#[derive(Debug, Args)]
pub struct InputArgs {
    #[arg(long, default_value = "data.csv")]
    pub data: PathBuf,
    /// Drop exactly-zero columns instead of failing on them.
    #[arg(long)]
    pub drop_zero_columns: bool,
}

#[derive(Debug, Args)]
pub struct SamplerArgs {
    #[arg(long, value_enum, default_value = "srs")]
    pub method: Method,
    /// Right singular vectors used by leverage sampling (default: numerical rank).
    #[arg(long)]
    pub leverage_k: Option<usize>,
    /// Norm sampling with plain instead of squared column norms.
    #[arg(long)]
    pub norm_plain: bool,
}

impl SamplerArgs {
    fn spec(&self, n: usize, seed: u64) -> SamplerSpec {
        SamplerSpec {
            leverage_k: self.leverage_k,
            norm_convention: if self.norm_plain {
                NormConvention::Plain
            } else {
                NormConvention::Squared
            },
            ..SamplerSpec::new(self.method, n, seed)
        }
    }
}

#[derive(Debug, Args)]
pub struct SketchArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[command(flatten)]
    pub sampler: SamplerArgs,
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub seed: u64,
    #[command(flatten)]
    pub embed: EmbedArgs,
    #[arg(long, default_value = "indices.csv")]
    pub out_indices: PathBuf,
    /// Sampled columns of the input matrix, in selection order.
    #[arg(long, default_value = "sketch.csv")]
    pub out_columns: PathBuf,
}

#[derive(Debug, Subcommand)]
pub enum EvalCommand {
    /// Numerical rank of a matrix.
    Rank {
        #[arg(long, default_value = "data.csv")]
        data: PathBuf,
        #[arg(long, default_value_t = crate::DEFAULT_RANK_TOL)]
        rel_tol: f64,
    },
    /// Relative error of projecting the data onto the span of a sketch.
    Error {
        #[arg(long, default_value = "data.csv")]
        data: PathBuf,
        #[arg(long, default_value = "indices.csv")]
        indices: PathBuf,
    },
    /// Per-cluster counts of a sketch.
    Coverage {
        #[arg(long, default_value = "labels.csv")]
        labels: PathBuf,
        #[arg(long, default_value = "indices.csv")]
        indices: PathBuf,
        /// Write a CSV instead of printing.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Args)]
pub struct ReportOut {
    #[arg(long, default_value = "report.csv")]
    pub out: PathBuf,
    /// Also render an SVG plot.
    #[arg(long)]
    pub svg: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum ExpCommand {
    /// Rank of growing sketches.
    RankCurve {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        sampler: SamplerArgs,
        /// Sketch sizes, comma separated and ascending.
        #[arg(long, value_delimiter = ',', required = true)]
        grid: Vec<usize>,
        #[arg(long, default_value_t = 10)]
        trials: usize,
        #[arg(long)]
        seed: u64,
        #[command(flatten)]
        embed: EmbedArgs,
        #[command(flatten)]
        report: ReportOut,
    },
    /// Mean per-cluster sample counts for several methods.
    Coverage {
        #[command(flatten)]
        input: InputArgs,
        #[arg(long, default_value = "labels.csv")]
        labels: PathBuf,
        #[arg(long, value_enum, value_delimiter = ',', default_value = "srs,ris")]
        methods: Vec<Method>,
        #[arg(long)]
        leverage_k: Option<usize>,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long)]
        seed: u64,
        #[command(flatten)]
        embed: EmbedArgs,
        #[command(flatten)]
        report: ReportOut,
    },
    /// Per-cluster sampling frequencies and sphere-region areas.
    Probability {
        #[command(flatten)]
        input: InputArgs,
        #[arg(long, default_value = "labels.csv")]
        labels: PathBuf,
        #[arg(long, default_value_t = 10_000)]
        draws: usize,
        #[arg(long)]
        seed: u64,
        #[command(flatten)]
        report: ReportOut,
    },
    /// Sample-size bounds, optionally checked against arc data.
    Bounds {
        #[arg(long, default_value_t = 5)]
        m: usize,
        #[arg(long, default_value_t = 0.1)]
        delta: f64,
        #[arg(long)]
        beta: Option<f64>,
        #[arg(long, value_delimiter = ',')]
        populations: Vec<usize>,
        #[arg(long)]
        tau1: Option<f64>,
        #[arg(long)]
        tau2: Option<f64>,
        #[arg(long)]
        r: Option<usize>,
        #[arg(long)]
        s: Option<usize>,
        #[arg(long, default_value_t = 1.0)]
        c: f64,
        /// Smallest per-cluster sampling probability (default 1/s).
        #[arg(long)]
        min_prob: Option<f64>,
        #[arg(long, value_enum, default_value = "natural")]
        log: LogBase,
        /// Data and labels for empirical checks at the bounds.
        #[arg(long, requires = "labels")]
        data: Option<PathBuf>,
        #[arg(long, requires = "data")]
        labels: Option<PathBuf>,
        #[arg(long, default_value_t = 500)]
        trials: usize,
        #[arg(long)]
        seed: u64,
        #[command(flatten)]
        report: ReportOut,
    },
    /// k-means on unbalanced arc data versus on an SRS sketch.
    Kmeans {
        #[arg(long, default_value_t = 1.0)]
        tau: f64,
        #[arg(long, default_value_t = 5000)]
        n1: usize,
        #[arg(long, default_value_t = 50)]
        n2: usize,
        #[arg(long, default_value_t = 200)]
        sketch_n: usize,
        #[arg(long, default_value_t = 50)]
        seeds: usize,
        #[arg(long)]
        seed: u64,
        #[command(flatten)]
        report: ReportOut,
    },
}

/// Parses `argv` (including the program name), runs the command, and
/// returns the process exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match execute(&cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {}: {e}", e.name());
            1
        }
    }
}

pub fn execute(cli: &Cli) -> Result<()> {
    let echo = format!("srs {:?}", cli.command);
    match &cli.command {
        Command::Gen(cmd) => gen(cmd, &echo),
        Command::Sketch(args) => sketch(args, &echo),
        Command::Eval(cmd) => eval(cmd, &echo),
        Command::Exp(cmd) => exp(cmd, &echo),
    }
}

fn gen(cmd: &GenCommand, echo: &str) -> Result<()> {
    let (data, labels, output) = match cmd {
        GenCommand::Arcs {
            tau1,
            tau2,
            center1,
            center2,
            n1,
            n2,
            seed,
            output,
        } => {
            let spec = ArcSpec {
                tau1: *tau1,
                tau2: *tau2,
                center1: *center1,
                center2: *center2,
                n1: *n1,
                n2: *n2,
            };
            let (d, l) = gen_arc_clusters(&spec, &mut rng_from_seed(*seed))?;
            (d, l, output)
        }
        GenCommand::Subspaces {
            ambient,
            preset,
            dims,
            populations,
            seed,
            output,
        } => {
            let spec = match preset {
                Some(Preset::RankCapture) => presets::rank_capture(*ambient),
                Some(Preset::BalancedCoverage) => presets::balanced_coverage(*ambient),
                Some(Preset::DimensionSeeking) => presets::dimension_seeking(*ambient),
                None => SubspaceSpec {
                    ambient: *ambient,
                    dims: dims.clone(),
                    populations: populations.clone(),
                },
            };
            let (d, l) = gen_union_subspaces(&spec, &mut rng_from_seed(*seed))?;
            (d, l, output)
        }
    };
    io::save_csv_with_comment(&data, &output.out, Some(echo))?;
    io::save_labels(&labels, &output.labels_out, Some(echo))?;
    println!(
        "wrote {}x{} matrix to {} and labels to {}",
        data.rows(),
        data.cols(),
        output.out.display(),
        output.labels_out.display()
    );
    Ok(())
}

fn load_input(input: &InputArgs) -> Result<DataMatrix> {
    let data = io::load_csv(&input.data)?;
    if input.drop_zero_columns {
        let (kept, _) = data.drop_zero_columns()?;
        return Ok(kept);
    }
    if let Some(&j) = data.zero_columns().first() {
        return Err(Error::ZeroColumn(j));
    }
    Ok(data)
}

fn embed(data: &DataMatrix, args: &EmbedArgs, seed: u64) -> Result<DataMatrix> {
    let Some(kind) = args.embed else {
        return Ok(data.clone());
    };
    let p = args
        .embed_dim
        .ok_or_else(|| Error::BadParams("--embed requires --embed-dim".into()))?;
    let spec = EmbeddingSpec {
        density: args.embed_density,
        ..EmbeddingSpec::new(kind, p)
    };
    let s = build_embedding(&spec, data.rows(), &mut rng_from_seed(args.embed_seed.unwrap_or(seed)))?;
    apply_embedding(&s, data)
}

fn sketch(args: &SketchArgs, echo: &str) -> Result<()> {
    let data = load_input(&args.input)?;
    let work = embed(&data, &args.embed, args.seed)?;
    let spec = args.sampler.spec(args.n, args.seed);
    let work = if spec.method.needs_unit_columns() {
        normalize_columns(&work)?
    } else {
        work
    };
    let result = spec.sample(&work)?;
    let columns = data.select_columns(&result.indices)?;
    io::save_indices(&result, &args.out_indices, Some(echo))?;
    io::save_csv_with_comment(&columns, &args.out_columns, Some(echo))?;
    println!(
        "sampled {} columns with {}; wrote {} and {}",
        result.len(),
        result.method,
        args.out_indices.display(),
        args.out_columns.display()
    );
    Ok(())
}

fn eval(cmd: &EvalCommand, echo: &str) -> Result<()> {
    match cmd {
        EvalCommand::Rank { data, rel_tol } => {
            let d = io::load_csv(data)?;
            println!("{}", numerical_rank(&d, *rel_tol));
        }
        EvalCommand::Error { data, indices } => {
            let d = io::load_csv(data)?;
            let idx = io::load_indices(indices)?;
            if idx.is_empty() {
                return Err(Error::EmptySketch);
            }
            let c = d.select_columns(&idx)?;
            println!("{}", io::format_f64(approximation_error(&d, &c)?));
        }
        EvalCommand::Coverage {
            labels,
            indices,
            out,
        } => {
            let labels = io::load_labels(labels, None)?;
            let idx = io::load_indices(indices)?;
            if let Some(&bad) = idx.iter().find(|&&j| j >= labels.len()) {
                return Err(Error::Shape(format!(
                    "index {bad} out of range for {} labels",
                    labels.len()
                )));
            }
            let counts = labels.count_indices(&idx);
            let mut text = String::from("cluster,count\n");
            for (c, n) in counts.iter().enumerate() {
                text.push_str(&format!("{c},{n}\n"));
            }
            match out {
                Some(path) => {
                    let mut w = create(path)?;
                    writeln!(w, "# {echo}")?;
                    w.write_all(text.as_bytes())?;
                    w.flush()?;
                }
                None => print!("{text}"),
            }
        }
    }
    Ok(())
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    Ok(BufWriter::new(File::create(path)?))
}

fn write_report(report: &ExperimentReport, out: &ReportOut, echo: &str) -> Result<()> {
    let mut w = create(&out.out)?;
    writeln!(w, "# {echo}")?;
    report.write_csv(&mut w)?;
    w.flush()?;
    if let Some(svg) = &out.svg {
        let mut w = create(svg)?;
        writeln!(w, "<!-- {} -->", echo.replace("--", "- -"))?;
        w.write_all(analysis::svg::render_svg(report).as_bytes())?;
        w.flush()?;
    }
    Ok(())
}

fn fmt_list(values: &[f64]) -> String {
    values
        .iter()
        .map(|v| format!("{v:.4}"))
        .collect::<Vec<_>>()
        .join(", ")
}

fn exp(cmd: &ExpCommand, echo: &str) -> Result<()> {
    match cmd {
        ExpCommand::RankCurve {
            input,
            sampler,
            grid,
            trials,
            seed,
            embed: embed_args,
            report: out,
        } => {
            let data = embed(&load_input(input)?, embed_args, *seed)?;
            let spec = sampler.spec(1, *seed);
            let report = rank_curve(&data, &spec, grid, *trials, *seed)?;
            for (n, rank) in report.series(TrialTag::Median, spec.method.name()) {
                println!("n={n} median_rank={rank}");
            }
            write_report(&report, out, echo)
        }
        ExpCommand::Coverage {
            input,
            labels,
            methods,
            leverage_k,
            n,
            trials,
            seed,
            embed: embed_args,
            report: out,
        } => {
            let data = embed(&load_input(input)?, embed_args, *seed)?;
            let labels = io::load_labels(labels, None)?;
            let specs: Vec<SamplerSpec> = methods
                .iter()
                .map(|&m| SamplerSpec {
                    leverage_k: *leverage_k,
                    ..SamplerSpec::new(m, *n, *seed)
                })
                .collect();
            let report = coverage_experiment(&data, &labels, &specs, *n, *trials, *seed)?;
            for m in methods {
                println!("{m}: {}", fmt_list(&report.by_cluster(TrialTag::Mean, m.name())));
            }
            write_report(&report, out, echo)
        }
        ExpCommand::Probability {
            input,
            labels,
            draws,
            seed,
            report: out,
        } => {
            let data = load_input(input)?;
            let labels = io::load_labels(labels, None)?;
            let x = normalize_columns(&data)?;
            let srs = empirical_sampling_probabilities(&x, &labels, *draws, *seed)?;
            let areas = estimate_region_areas(&x, &labels, *draws, crate::child_seed(*seed, 1))?;
            let ris = empirical_ris_probabilities(&data, &labels, *draws, crate::child_seed(*seed, 2))?;
            let mut report = ExperimentReport::new();
            report
                .meta("experiment", "probability")
                .meta("draws", draws)
                .meta("master_seed", seed);
            for (name, values) in [("srs_repl", &srs), ("regions", &areas), ("ris_repl", &ris)] {
                for (c, &v) in values.iter().enumerate() {
                    report.push(TrialTag::Mean, name, *draws as f64, Some(c), v);
                }
                println!("{name}: {}", fmt_list(values));
            }
            write_report(&report, out, echo)
        }
        ExpCommand::Bounds {
            m,
            delta,
            beta,
            populations,
            tau1,
            tau2,
            r,
            s,
            c,
            min_prob,
            log,
            data,
            labels,
            trials,
            seed,
            report: out,
        } => {
            let mut params = BoundParams {
                m: *m,
                delta: *delta,
                beta: *beta,
                populations: populations.clone(),
                tau1: tau1.unwrap_or(0.0),
                tau2: tau2.unwrap_or(0.0),
                r: r.unwrap_or(1),
                s: s.unwrap_or(1),
                c: *c,
                min_prob: 1.0,
                log: *log,
            };
            params.min_prob = min_prob.unwrap_or(1.0 / params.s as f64);
            let loaded = match (data, labels) {
                (Some(d), Some(l)) => {
                    let d = io::load_csv(d)?;
                    let l = io::load_labels(l, None)?;
                    l.check_matches(&d)?;
                    if params.populations.is_empty() {
                        params.populations = l.populations();
                    }
                    Some((d, l))
                }
                _ => None,
            };
            let mut report = ExperimentReport::new();
            report
                .meta("experiment", "bounds")
                .meta("min_beta", params.min_beta())
                .meta("master_seed", seed);
            if !params.populations.is_empty() {
                let b = lemma2_bound(&params)?;
                println!("lemma2 (index sampling) bound: {b}");
                report.push(TrialTag::Mean, "lemma2_bound", 0.0, None, b);
            }
            if tau1.is_some() && tau2.is_some() {
                let b = lemma3_bound(&params)?;
                println!("lemma3 (spatial sampling on arcs) bound: {b}");
                report.push(TrialTag::Mean, "lemma3_bound", 0.0, None, b);
            }
            if r.is_some() && s.is_some() && !params.populations.is_empty() {
                let b = lemma4_bound(&params)?;
                println!("lemma4 (span capture) bound: {b}");
                report.push(TrialTag::Mean, "lemma4_bound", 0.0, None, b);
            }
            if let Some((d, l)) = &loaded {
                let check = lemma2_empirical(d, l, &params, *trials, *seed)?;
                println!(
                    "lemma2 empirical: n={} success={} guarantee={}",
                    check.n, check.success_rate, check.guarantee
                );
                report.push(TrialTag::Mean, "lemma2_empirical", check.n as f64, None, check.success_rate);
                if tau1.is_some() && tau2.is_some() {
                    let check = lemma3_empirical(d, l, &params, *trials, *seed)?;
                    println!(
                        "lemma3 empirical: n={} success={} guarantee={}",
                        check.n, check.success_rate, check.guarantee
                    );
                    report.push(TrialTag::Mean, "lemma3_empirical", check.n as f64, None, check.success_rate);
                }
            }
            if report.rows.is_empty() {
                return Err(Error::BadParams(
                    "nothing to compute: give --populations, --tau1/--tau2, or --r/--s".into(),
                ));
            }
            write_report(&report, out, echo)
        }
        ExpCommand::Kmeans {
            tau,
            n1,
            n2,
            sketch_n,
            seeds,
            seed,
            report: out,
        } => {
            let spec = ArcSpec::new(*tau, *tau, *n1, *n2);
            let report = kmeans_balance_experiment(&spec, *sketch_n, *seeds, *seed)?;
            for name in ["full", "srs_sketch"] {
                let rate = report.series(TrialTag::Mean, name)[0].1;
                println!("{name}: balanced-centre rate {rate}");
            }
            write_report(&report, out, echo)
        }
    }
}

/// Smallest median sketch size reaching `target` rank in a rank-curve report.
pub fn median_samples_to_rank(report: &ExperimentReport, method: Method, target: usize) -> Option<usize> {
    samples_to_reach(report, method.name(), TrialTag::Median, target as f64)
}
