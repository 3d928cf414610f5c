//! `motifnet` command-line front end.
//!
//! Exit codes: 0 on success, 2 for configuration or input errors, 3 for
//! numerical or initialization failures.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use motifnet::clustering::{capacity, equivalence_classes, network_dendrogram, treegram};
use motifnet::exact::{exact_chd_profile, exact_conditional_density, exact_macc, exact_motif_transform, hom_density};
use motifnet::generators::{GenSpec, SbmTemplate, WanNormalization};
use motifnet::graphon::{cut_dist, filtration_dist, p_norm_dist, verify_stability, StabilityKind, StepKernel};
use motifnet::io::{format_matrix_csv, format_network, parse_motif_spec, read_frequency_matrix, read_network};
use motifnet::mcmc::{default_burn_in, run_chain, ChainConfig, ChainKind};
use motifnet::observables::{uniform_grid, ChdEstimator, MaccEstimator, ProfileEstimator, TransformEstimator};
use motifnet::pipeline::{
    attribute_fixed, attribute_splits, macc_pipeline, profile_pipeline, profiles_csv, sqrt_display, AttributionConfig,
    AttributionItem, AttributionMethod, MaccPipelineConfig, ProfileMode, ProfilePipelineConfig,
};
use motifnet::spectral::{path_hom_density, path_transform, transitive_closure, SpectralDecomposition};
use motifnet::{Motif64, Network64};

#[derive(Parser)]
#[command(name = "motifnet", version, about = "Motif sampling and network fingerprints")]
struct Cli {
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Worker threads; 0 lets rayon decide.
    #[arg(long, global = true, default_value_t = 0)]
    threads: usize,
    /// Directory for output files; without it results go to stdout.
    #[arg(long, global = true)]
    out_dir: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a synthetic network as an edge list.
    Gen(GenArgs),
    /// Exact observables by enumeration.
    Exact(ObservableArgs),
    /// Observables estimated from one chain run.
    Sample(SampleArgs),
    /// Path transforms and transitive closure of a symmetric network.
    Spectral(SpectralArgs),
    /// Dendrograms, capacity and equivalence classes.
    Cluster(ClusterArgs),
    /// Stability inequalities and distances between two networks.
    Verify(VerifyArgs),
    /// MACC fingerprints, distances, dendrogram and k-means.
    MaccPipeline(MaccArgs),
    /// CHD profiles and L1 distance matrices.
    ProfilePipeline(ProfileArgs),
    /// Nearest-neighbor attribution of frequency matrices.
    Attribute(AttributeArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum Family {
    Torus,
    TorusLongRange,
    SbmGamma,
    ErdosRenyi,
    Complete,
    WanMatrix,
}

#[derive(Clone, Copy, ValueEnum)]
enum Template {
    A1,
    A2,
}

#[derive(Args)]
struct GenArgs {
    #[arg(long, value_enum, required_unless_present = "spec")]
    family: Option<Family>,
    /// JSON generator spec (needed for barbells).
    #[arg(long, conflicts_with = "family")]
    spec: Option<PathBuf>,
    #[arg(long, default_value_t = 10)]
    n: usize,
    #[arg(long, default_value_t = 0.0)]
    p: f64,
    #[arg(long, default_value_t = 0.0)]
    alpha_exp: f64,
    #[arg(long, value_enum, default_value_t = Template::A1)]
    template: Template,
    #[arg(long, default_value_t = 10)]
    r: usize,
    #[arg(long, default_value_t = 1.0)]
    sigma: f64,
    /// Frequency matrix for `wan-matrix`.
    #[arg(long)]
    matrix: Option<PathBuf>,
    #[arg(long, default_value = "global_max")]
    normalization: String,
}

#[derive(Clone, Copy, ValueEnum)]
enum Observable {
    Density,
    Conditional,
    Profile,
    Macc,
    Transform,
}

#[derive(Args)]
struct ObservableArgs {
    #[arg(long)]
    network: PathBuf,
    /// Motif name (`P_3`, `F_1_1`, ...) or motif file; the sampled motif `F`.
    #[arg(long)]
    motif: String,
    /// The motif `H` for conditional densities and profiles.
    #[arg(long)]
    h: Option<String>,
    #[arg(long, value_enum, default_value_t = Observable::Density)]
    observable: Observable,
    #[arg(long, default_value_t = 101)]
    grid: usize,
}

#[derive(Args)]
struct SampleArgs {
    #[command(flatten)]
    obs: ObservableArgs,
    #[arg(long, default_value = "pivot")]
    chain: String,
    #[arg(long, default_value_t = 100_000)]
    steps: u64,
    /// Defaults to `ceil(2 n ln n)`.
    #[arg(long)]
    burn_in: Option<u64>,
    #[arg(long, default_value_t = 1)]
    thinning: u64,
}

#[derive(Clone, Copy, ValueEnum)]
enum SpectralOp {
    PathTransform,
    PathDensity,
    Closure,
    Eigen,
}

#[derive(Args)]
struct SpectralArgs {
    #[arg(long)]
    network: PathBuf,
    #[arg(long, value_enum, default_value_t = SpectralOp::Eigen)]
    op: SpectralOp,
    #[arg(long, default_value_t = 2)]
    k: usize,
}

#[derive(Clone, Copy, ValueEnum)]
enum ClusterMethod {
    Dendrogram,
    Treegram,
    Capacity,
    Classes,
}

#[derive(Args)]
struct ClusterArgs {
    #[arg(long)]
    network: PathBuf,
    #[arg(long, value_enum, default_value_t = ClusterMethod::Dendrogram)]
    method: ClusterMethod,
    /// Threshold for `classes`.
    #[arg(long, default_value_t = 0.5)]
    threshold: f64,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long)]
    u: PathBuf,
    #[arg(long)]
    w: PathBuf,
    /// counting, conditional, transform, profile, or metrics.
    #[arg(long, default_value = "metrics")]
    kind: String,
    #[arg(long, default_value = "P_3")]
    f: String,
    #[arg(long, default_value = "H_1_1")]
    h: String,
    /// Compare block-by-block instead of minimizing over relabelings.
    #[arg(long)]
    labeled: bool,
}

#[derive(Args)]
struct MaccArgs {
    #[arg(long, num_args = 2.., required = true)]
    networks: Vec<PathBuf>,
    #[arg(long, default_value = "P_3")]
    motif: String,
    #[arg(long, default_value = "pivot")]
    chain: String,
    /// Defaults to `ceil(2 n ln n)` per network.
    #[arg(long)]
    steps: Option<u64>,
    #[arg(long)]
    burn_in: Option<u64>,
    #[arg(long, default_value_t = 2)]
    clusters: usize,
}

#[derive(Args)]
struct ProfileArgs {
    #[arg(long, num_args = 1.., required = true)]
    networks: Vec<PathBuf>,
    /// Motif pair `H,F`; repeatable.
    #[arg(long = "pair", required = true)]
    pairs: Vec<String>,
    #[arg(long, default_value = "pivot")]
    chain: String,
    #[arg(long, default_value_t = 5000)]
    steps: u64,
    #[arg(long)]
    burn_in: Option<u64>,
    #[arg(long, default_value_t = 101)]
    grid: usize,
    /// auto, exact, or sample.
    #[arg(long, default_value = "auto")]
    mode: String,
}

#[derive(Args)]
struct AttributeArgs {
    /// `label=path` frequency matrices for random reference/validation splits.
    #[arg(long = "item")]
    items: Vec<String>,
    /// `label=path` known items for a fixed split.
    #[arg(long = "reference")]
    reference: Vec<String>,
    /// `label=path` unknown items for a fixed split.
    #[arg(long = "validation")]
    validation: Vec<String>,
    /// chd00, kl, or frobenius.
    #[arg(long, default_value = "chd00")]
    method: String,
    #[arg(long, default_value_t = 1)]
    known_per_label: usize,
    #[arg(long, default_value_t = 1000)]
    splits: usize,
}

/// Where command output goes: files under `--out-dir`, or stdout.
struct Sink {
    dir: Option<PathBuf>,
    format: Format,
}

impl Sink {
    fn file(&self, name: &str, contents: &str) -> anyhow::Result<()> {
        match &self.dir {
            Some(d) => fs::write(d.join(name), contents).with_context(|| format!("writing {name}")),
            None => Ok(()),
        }
    }

    /// Writes the primary result: JSON, or CSV when requested and available.
    fn primary(&self, name: &str, value: &Value, csv: Option<String>) -> anyhow::Result<()> {
        let (text, ext) = match (self.format, csv) {
            (Format::Csv, Some(c)) => (c, "csv"),
            _ => (serde_json::to_string_pretty(value)? + "\n", "json"),
        };
        match &self.dir {
            Some(_) => self.file(&format!("{name}.{ext}"), &text),
            None => {
                print!("{text}");
                Ok(())
            }
        }
    }
}

fn load(path: &Path) -> anyhow::Result<Network64> {
    read_network(path).with_context(|| format!("reading network {}", path.display()))
}

fn motif(spec: &str) -> anyhow::Result<Motif64> {
    Ok(parse_motif_spec(spec)?)
}

fn labeled_path(s: &str) -> anyhow::Result<(String, PathBuf)> {
    let (l, p) = s.split_once('=').ok_or_else(|| motifnet::Error::InvalidArgument(format!("expected label=path, got `{s}`")))?;
    Ok((l.to_string(), PathBuf::from(p)))
}

fn network_csv(net: &Network64) -> String {
    format_matrix_csv(net.n(), &net.to_dense())
}

fn cmd_gen(args: GenArgs, seed: u64, sink: &Sink) -> anyhow::Result<()> {
    let spec = match (&args.spec, args.family) {
        (Some(path), _) => serde_json::from_str::<GenSpec>(&fs::read_to_string(path)?)
            .map_err(|e| motifnet::Error::InvalidArgument(format!("bad generator spec: {e}")))?,
        (None, Some(family)) => match family {
            Family::Torus => GenSpec::Torus { n: args.n },
            Family::TorusLongRange => GenSpec::TorusLongRange { n: args.n, p: args.p, alpha_exp: args.alpha_exp, seed },
            Family::SbmGamma => {
                let template = match args.template {
                    Template::A1 => SbmTemplate::A1,
                    Template::A2 => SbmTemplate::A2,
                };
                GenSpec::SbmGamma { template, r: args.r, sigma: args.sigma, seed }
            }
            Family::ErdosRenyi => GenSpec::ErdosRenyi { n: args.n, p: args.p, seed },
            Family::Complete => GenSpec::Complete { n: args.n },
            Family::WanMatrix => GenSpec::WanMatrix {
                path: args.matrix.clone().ok_or_else(|| motifnet::Error::InvalidArgument("--matrix is required".into()))?,
                normalization: args.normalization.parse::<WanNormalization>()?,
            },
        },
        (None, None) => unreachable!("clap requires one of them"),
    };
    let net: Network64 = spec.generate()?;
    let text = match sink.format {
        Format::Csv => network_csv(&net),
        Format::Json => format_network(&net),
    };
    match &sink.dir {
        Some(_) => {
            sink.file("network.txt", &format_network(&net))?;
            sink.file("spec.json", &serde_json::to_string_pretty(&spec)?)
        }
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn cmd_exact(args: ObservableArgs, sink: &Sink) -> anyhow::Result<()> {
    let net = load(&args.network)?;
    let f = motif(&args.motif)?;
    let h = args.h.as_deref().map(motif).transpose()?;
    let need_h = || h.clone().ok_or_else(|| motifnet::Error::InvalidArgument("--h is required for this observable".into()));
    let (value, csv) = match args.observable {
        Observable::Density => (json!({ "density": hom_density(&f, &net)? }), None),
        Observable::Conditional => (json!({ "conditional_density": exact_conditional_density(&need_h()?, &f, &net)? }), None),
        Observable::Profile => {
            let p = exact_chd_profile(&need_h()?, &f, &net, &uniform_grid(args.grid))?;
            let csv = profiles_csv(p.ts(), &[p.values().to_vec()]);
            (json!({ "profile": p }), Some(csv))
        }
        Observable::Macc => {
            let m = exact_macc(&f, &net)?;
            let csv = format_matrix_csv(m.k(), m.values());
            (json!({ "macc": m }), Some(csv))
        }
        Observable::Transform => {
            let t = exact_motif_transform(&f, &net)?;
            (json!({ "transform": format_network(&t) }), Some(network_csv(&t)))
        }
    };
    sink.primary("exact", &value, csv)
}

fn cmd_sample(args: SampleArgs, seed: u64, sink: &Sink) -> anyhow::Result<()> {
    let net = load(&args.obs.network)?;
    let f = motif(&args.obs.motif)?;
    let h = args.obs.h.as_deref().map(motif).transpose()?;
    let need_h = || h.clone().ok_or_else(|| motifnet::Error::InvalidArgument("--h is required for this observable".into()));
    let kind: ChainKind = args.chain.parse()?;
    let mut config = ChainConfig::new(kind, seed, args.burn_in.unwrap_or_else(|| default_burn_in(net.n())), args.steps);
    config.thinning = args.thinning;
    let (value, csv) = match args.obs.observable {
        Observable::Density => return Err(motifnet::Error::InvalidArgument("density has no time-average estimator; use exact".into()).into()),
        Observable::Conditional => {
            let mut est = ChdEstimator::new(need_h()?);
            let run = run_chain(&config, &f, &net, &mut [&mut est])?;
            (json!({ "conditional_density": est.estimate(), "run": run }), None)
        }
        Observable::Profile => {
            let mut est = ProfileEstimator::new(need_h()?, uniform_grid(args.obs.grid))?;
            let run = run_chain(&config, &f, &net, &mut [&mut est])?;
            let p = est.estimate();
            let csv = profiles_csv(p.ts(), &[p.values().to_vec()]);
            (json!({ "profile": p, "run": run }), Some(csv))
        }
        Observable::Macc => {
            let mut est = MaccEstimator::new(f.clone());
            let run = run_chain(&config, &f, &net, &mut [&mut est])?;
            let m = est.estimate();
            let csv = format_matrix_csv(m.k(), m.values());
            (json!({ "macc": m, "run": run }), Some(csv))
        }
        Observable::Transform => {
            let mut est = TransformEstimator::new(f.clone())?;
            let run = run_chain(&config, &f, &net, &mut [&mut est])?;
            let t = est.estimate(&net)?;
            (json!({ "transform": format_network(&t), "run": run }), Some(network_csv(&t)))
        }
    };
    sink.primary("sample", &value, csv)
}

fn cmd_spectral(args: SpectralArgs, sink: &Sink) -> anyhow::Result<()> {
    let net = load(&args.network)?;
    let (value, csv) = match args.op {
        SpectralOp::PathTransform => {
            let t = path_transform(&net, args.k)?;
            (json!({ "k": args.k, "transform": format_network(&t) }), Some(network_csv(&t)))
        }
        SpectralOp::PathDensity => (json!({ "k": args.k, "density": path_hom_density(&net, args.k)? }), None),
        SpectralOp::Closure => {
            let t = transitive_closure(&net)?;
            (json!({ "closure": format_network(&t) }), Some(network_csv(&t)))
        }
        SpectralOp::Eigen => {
            let d = SpectralDecomposition::new(&net)?;
            (json!({ "eigenvalues": d.eigenvalues, "top_multiplicity": d.top_multiplicity }), None)
        }
    };
    sink.primary("spectral", &value, csv)
}

fn cmd_cluster(args: ClusterArgs, sink: &Sink) -> anyhow::Result<()> {
    let net = load(&args.network)?;
    match args.method {
        ClusterMethod::Dendrogram | ClusterMethod::Treegram => {
            let d = match args.method {
                ClusterMethod::Treegram => treegram(&net),
                _ => network_dendrogram(&net),
            };
            sink.file("dendrogram.newick", &(d.newick() + "\n"))?;
            let value = json!({ "newick": d.newick(), "merges": d.merges, "appearance": d.appearance });
            sink.primary("dendrogram", &value, Some(d.merge_csv()))
        }
        ClusterMethod::Capacity => {
            let c = capacity(&net);
            sink.primary("capacity", &json!({ "n": net.n(), "capacity": c }), Some(format_matrix_csv(net.n(), &c)))
        }
        ClusterMethod::Classes => {
            let classes = equivalence_classes(&net, args.threshold);
            sink.primary("classes", &json!({ "threshold": args.threshold, "classes": classes }), None)
        }
    }
}

fn cmd_verify(args: VerifyArgs, sink: &Sink) -> anyhow::Result<()> {
    let u = StepKernel::from_network(&load(&args.u)?);
    let w = StepKernel::from_network(&load(&args.w)?);
    let value = if args.kind == "metrics" {
        json!({
            "labeled": args.labeled,
            "cut": cut_dist(&u, &w, args.labeled)?,
            "filtration": filtration_dist(&u, &w, args.labeled)?,
            "l1": p_norm_dist(&u, &w, 1.0, args.labeled)?,
        })
    } else {
        let kind: StabilityKind = args.kind.parse()?;
        let report = verify_stability(kind, &u, &w, &motif(&args.h)?, &motif(&args.f)?)?;
        serde_json::to_value(report)?
    };
    sink.primary("verify", &value, None)
}

fn cmd_macc(args: MaccArgs, seed: u64, sink: &Sink) -> anyhow::Result<()> {
    let nets = args.networks.iter().map(|p| load(p)).collect::<anyhow::Result<Vec<_>>>()?;
    let f = motif(&args.motif)?;
    let mut config = MaccPipelineConfig::new(args.chain.parse()?, seed, args.clusters);
    config.steps = args.steps;
    config.burn_in = args.burn_in;
    let out = macc_pipeline(&nets, &f, &config)?;
    for run in &out.runs {
        if let Some(m) = &run.macc {
            sink.file(&format!("macc_{}.csv", run.index), &format_matrix_csv(out.k, m))?;
            sink.file(&format!("macc_{}_sqrt.csv", run.index), &format_matrix_csv(out.k, &sqrt_display(m)))?;
        } else {
            log::warn!("network {} failed: {}", run.index, run.error.as_deref().unwrap_or(""));
        }
    }
    let m = out.included.len();
    sink.file("distances.csv", &format_matrix_csv(m, &out.distances))?;
    sink.file("dendrogram.newick", &(out.dendrogram.newick() + "\n"))?;
    sink.file("merges.csv", &out.dendrogram.merge_csv())?;
    let labels: String = out.included.iter().zip(&out.kmeans.labels).map(|(i, l)| format!("{i},{l}\n")).collect();
    sink.file("labels.csv", &format!("network,cluster\n{labels}"))?;
    let value = serde_json::to_value(&out)?;
    sink.primary("report", &value, Some(format_matrix_csv(m, &out.distances)))
}

fn cmd_profile(args: ProfileArgs, seed: u64, sink: &Sink) -> anyhow::Result<()> {
    let nets = args.networks.iter().map(|p| load(p)).collect::<anyhow::Result<Vec<_>>>()?;
    let pairs = args
        .pairs
        .iter()
        .map(|s| {
            let (h, f) = s.split_once(',').ok_or_else(|| motifnet::Error::InvalidArgument(format!("expected H,F, got `{s}`")))?;
            Ok((motif(h)?, motif(f)?))
        })
        .collect::<anyhow::Result<Vec<_>>>()?;
    let mut config = ProfilePipelineConfig::new(args.chain.parse()?, seed, args.steps);
    config.burn_in = args.burn_in;
    config.grid_points = args.grid;
    config.mode = match args.mode.as_str() {
        "auto" => ProfileMode::Auto,
        "exact" => ProfileMode::Exact,
        "sample" => ProfileMode::Sample,
        other => return Err(motifnet::Error::InvalidArgument(format!("unknown profile mode `{other}`")).into()),
    };
    let out = profile_pipeline(&nets, &pairs, &config)?;
    for p in &out.pairs {
        sink.file(&format!("profiles_{}.csv", p.pair), &profiles_csv(&out.grid, &p.profiles))?;
        sink.file(&format!("distances_{}.csv", p.pair), &format_matrix_csv(nets.len(), &p.distances))?;
    }
    let csv = out.pairs.first().map(|p| format_matrix_csv(nets.len(), &p.distances));
    sink.primary("report", &serde_json::to_value(&out)?, csv)
}

fn cmd_attribute(args: AttributeArgs, seed: u64, sink: &Sink) -> anyhow::Result<()> {
    let method: AttributionMethod = args.method.parse()?;
    let load_items = |specs: &[String]| -> anyhow::Result<Vec<AttributionItem>> {
        specs
            .iter()
            .map(|s| {
                let (label, path) = labeled_path(s)?;
                let (n, m) = read_frequency_matrix(&path).with_context(|| format!("reading {}", path.display()))?;
                Ok(AttributionItem::new(label, n, &m, method)?)
            })
            .collect()
    };
    let report = if !args.items.is_empty() {
        let mut config = AttributionConfig::new(method, args.known_per_label, seed);
        config.splits = args.splits;
        attribute_splits(&load_items(&args.items)?, &config)?
    } else if !args.reference.is_empty() && !args.validation.is_empty() {
        attribute_fixed(&load_items(&args.reference)?, &load_items(&args.validation)?, method)?
    } else {
        return Err(motifnet::Error::InvalidArgument("give --item, or both --reference and --validation".into()).into());
    };
    let csv: String = std::iter::once("label,trials,correct,accuracy\n".to_string())
        .chain(report.per_class.iter().map(|c| format!("{},{},{},{}\n", c.label, c.trials, c.correct, c.accuracy)))
        .collect();
    sink.primary("attribution", &serde_json::to_value(&report)?, Some(csv))
}

fn run(cli: Cli) -> anyhow::Result<()> {
    if cli.threads > 0 {
        rayon::ThreadPoolBuilder::new().num_threads(cli.threads).build_global().map_err(|e| anyhow!(e))?;
    }
    if let Some(d) = &cli.out_dir {
        fs::create_dir_all(d).with_context(|| format!("creating {}", d.display()))?;
    }
    let sink = Sink { dir: cli.out_dir.clone(), format: cli.format };
    let seed = cli.seed;
    match cli.command {
        Command::Gen(a) => cmd_gen(a, seed, &sink),
        Command::Exact(a) => cmd_exact(a, &sink),
        Command::Sample(a) => cmd_sample(a, seed, &sink),
        Command::Spectral(a) => cmd_spectral(a, &sink),
        Command::Cluster(a) => cmd_cluster(a, &sink),
        Command::Verify(a) => cmd_verify(a, &sink),
        Command::MaccPipeline(a) => cmd_macc(a, seed, &sink),
        Command::ProfilePipeline(a) => cmd_profile(a, seed, &sink),
        Command::Attribute(a) => cmd_attribute(a, seed, &sink),
    }
}

fn exit_code(err: &anyhow::Error) -> u8 {
    match err.chain().find_map(|e| e.downcast_ref::<motifnet::Error>()) {
        Some(e) if !e.is_config_error() => 3,
        _ => 2,
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}
