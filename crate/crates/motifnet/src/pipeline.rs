//! End-to-end pipelines over collections of networks: MACC fingerprints
//! with clustering, CHD-profile distance matrices, and nearest-neighbor
//! attribution of frequency matrices.
//!
//! Every output carries the schema version and a SHA-256 hash of the
//! configuration and inputs; rerunning with the same hash reproduces all
//! numbers bit for bit.

use itertools::Itertools;
use rand::seq::SliceRandom;
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::clustering::{single_linkage, Dendrogram};
use crate::error::{Error, Result};
use crate::exact::{exact_chd_profile_with, ExactOptions};
use crate::generators::{normalize_frequency, WanNormalization};
use crate::mcmc::{default_burn_in, run_chain, seeded_rng, ChainConfig, ChainKind};
use crate::motif::Motif;
use crate::network::Network;
use crate::observables::{profile_l1_distance, uniform_grid, MaccEstimator, ProfileEstimator, ProfileGrid};
use crate::scalar::Real;

pub const REPORT_SCHEMA_VERSION: u32 = 1;

/// Profiles are enumerated exactly when `n^k` is at most this.
pub const EXACT_PROFILE_MAX_STATES: f64 = 1e6;

/// Seed for item `i` of a run seeded with `seed`.
pub fn item_seed(seed: u64, i: usize) -> u64 {
    seed.wrapping_add((i as u64 + 1).wrapping_mul(0x9E37_79B9_7F4A_7C15))
}

/// Incremental SHA-256 over configuration and inputs.
pub struct ConfigHasher(Sha256);

impl Default for ConfigHasher {
    fn default() -> Self {
        Self(Sha256::new())
    }
}

impl ConfigHasher {
    pub fn json<S: Serialize>(&mut self, value: &S) -> &mut Self {
        let bytes = serde_json::to_vec(value).expect("configuration serializes");
        self.bytes(&bytes)
    }

    pub fn network<T: Real>(&mut self, net: &Network<T>) -> &mut Self {
        self.bytes(crate::io::format_network(net).as_bytes())
    }

    pub fn motif<T: Real>(&mut self, motif: &Motif<T>) -> &mut Self {
        let m: Vec<f64> = motif.matrix().iter().map(|v| v.to_f64_lossy()).collect();
        self.json(&(motif.k(), m))
    }

    pub fn bytes(&mut self, b: &[u8]) -> &mut Self {
        self.0.update((b.len() as u64).to_le_bytes());
        self.0.update(b);
        self
    }

    pub fn finish(&self) -> String {
        self.0.clone().finalize().iter().map(|b| format!("{b:02x}")).collect()
    }
}

/// Row-major pairwise distance matrix.
pub fn pairwise<X: Sync>(items: &[X], dist: impl Fn(&X, &X) -> Result<f64> + Sync) -> Result<Vec<f64>> {
    let m = items.len();
    let upper: Vec<((usize, usize), f64)> = (0..m)
        .tuple_combinations()
        .collect::<Vec<_>>()
        .into_par_iter()
        .map(|(i, j)| dist(&items[i], &items[j]).map(|d| ((i, j), d)))
        .collect::<Result<_>>()?;
    let mut d = vec![0.0; m * m];
    for ((i, j), v) in upper {
        d[i * m + j] = v;
        d[j * m + i] = v;
    }
    Ok(d)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct KMeans {
    pub labels: Vec<usize>,
    pub centers: Vec<Vec<f64>>,
    pub inertia: f64,
}

fn sq_dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

fn nearest(p: &[f64], centers: &[Vec<f64>]) -> (usize, f64) {
    centers
        .iter()
        .enumerate()
        .map(|(c, z)| (c, sq_dist(p, z)))
        .fold((0, f64::INFINITY), |best, cur| if cur.1 < best.1 { cur } else { best })
}

/// Lloyd's algorithm from k-means++ seeds, best inertia over `restarts`.
pub fn kmeans(points: &[Vec<f64>], k: usize, iterations: usize, restarts: usize, seed: u64) -> Result<KMeans> {
    if k == 0 || k > points.len() {
        return Err(Error::InvalidArgument(format!("k = {k} needs 1 <= k <= {} points", points.len())));
    }
    let dim = points[0].len();
    if points.iter().any(|p| p.len() != dim) {
        return Err(Error::DimensionMismatch("k-means points have different lengths".into()));
    }
    let mut rng = seeded_rng(seed);
    let mut best: Option<KMeans> = None;
    for _ in 0..restarts.max(1) {
        let mut centers = vec![points[rng.random_range(0..points.len())].clone()];
        while centers.len() < k {
            let d2: Vec<f64> = points.iter().map(|p| nearest(p, &centers).1).collect();
            let total: f64 = d2.iter().sum();
            let next = if total > 0.0 {
                let mut u = rng.random::<f64>() * total;
                let mut pick = points.len() - 1;
                for (i, &w) in d2.iter().enumerate() {
                    if u < w {
                        pick = i;
                        break;
                    }
                    u -= w;
                }
                pick
            } else {
                rng.random_range(0..points.len())
            };
            centers.push(points[next].clone());
        }
        let mut labels = vec![usize::MAX; points.len()];
        for _ in 0..iterations {
            let new: Vec<usize> = points.iter().map(|p| nearest(p, &centers).0).collect();
            if new == labels {
                break;
            }
            labels = new;
            for (c, center) in centers.iter_mut().enumerate() {
                let members: Vec<&Vec<f64>> = points.iter().zip(&labels).filter(|(_, &l)| l == c).map(|(p, _)| p).collect();
                // an emptied cluster keeps its previous center
                if !members.is_empty() {
                    let inv = 1.0 / members.len() as f64;
                    *center = (0..dim).map(|d| members.iter().map(|p| p[d]).sum::<f64>() * inv).collect();
                }
            }
        }
        let inertia = points.iter().zip(&labels).map(|(p, &l)| sq_dist(p, &centers[l])).sum();
        if best.as_ref().is_none_or(|b| inertia < b.inertia) {
            best = Some(KMeans { labels, centers, inertia });
        }
    }
    Ok(best.unwrap())
}

/// Fraction of items on which two labelings agree, maximized over
/// relabelings of `found` (up to 8 distinct labels).
pub fn label_agreement(truth: &[usize], found: &[usize]) -> Result<f64> {
    if truth.len() != found.len() || truth.is_empty() {
        return Err(Error::DimensionMismatch("labelings must be nonempty and of equal length".into()));
    }
    let k = truth.iter().chain(found).max().unwrap() + 1;
    if k > 8 {
        return Err(Error::InvalidArgument("label agreement supports at most 8 labels".into()));
    }
    let best = (0..k)
        .permutations(k)
        .map(|perm| truth.iter().zip(found).filter(|(&t, &f)| perm[f] == t).count())
        .max()
        .unwrap();
    Ok(best as f64 / truth.len() as f64)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MaccPipelineConfig {
    pub chain: ChainKind,
    pub seed: u64,
    /// Sampled steps per network; `None` uses `ceil(2 n ln n)`.
    pub steps: Option<u64>,
    /// Burn-in per network; `None` uses `ceil(2 n ln n)`.
    pub burn_in: Option<u64>,
    pub clusters: usize,
    pub kmeans_iterations: usize,
    pub kmeans_restarts: usize,
}

impl MaccPipelineConfig {
    pub fn new(chain: ChainKind, seed: u64, clusters: usize) -> Self {
        Self { chain, seed, steps: None, burn_in: None, clusters, kmeans_iterations: 100, kmeans_restarts: 10 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MaccRun {
    pub index: usize,
    pub seed: u64,
    pub burn_in: u64,
    pub steps: u64,
    pub macc: Option<Vec<f64>>,
    pub error: Option<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct MaccPipelineOutput {
    pub schema_version: u32,
    pub config_hash: String,
    pub config: MaccPipelineConfig,
    pub k: usize,
    pub runs: Vec<MaccRun>,
    /// Set when some network failed; the matrices below cover `included`.
    pub partial: bool,
    pub included: Vec<usize>,
    pub distances: Vec<f64>,
    pub dendrogram: Dendrogram<f64>,
    pub kmeans: KMeans,
}

/// Entrywise square root, for display files only.
pub fn sqrt_display(values: &[f64]) -> Vec<f64> {
    values.iter().map(|v| v.sqrt()).collect()
}

/// MACC of every network, pairwise Frobenius distances, single-linkage
/// dendrogram and k-means labels of the flattened MACCs.
pub fn macc_pipeline<T: Real>(
    nets: &[Network<T>],
    motif: &Motif<T>,
    config: &MaccPipelineConfig,
) -> Result<MaccPipelineOutput> {
    if nets.len() < 2 {
        return Err(Error::InvalidArgument("MACC pipeline needs at least two networks".into()));
    }
    if let Some(i) = nets.iter().position(|g| g.max_weight() > T::one()) {
        return Err(Error::InvalidNetwork(format!("network {i} has weights above 1; normalize it first")));
    }
    let mut hasher = ConfigHasher::default();
    hasher.json(&"macc").json(config).motif(motif);
    nets.iter().for_each(|g| {
        hasher.network(g);
    });
    let runs: Vec<MaccRun> = nets
        .par_iter()
        .enumerate()
        .map(|(index, net)| {
            let burn_in = config.burn_in.unwrap_or_else(|| default_burn_in(net.n()));
            let steps = config.steps.unwrap_or_else(|| default_burn_in(net.n()).max(1));
            let seed = item_seed(config.seed, index);
            let chain = ChainConfig::new(config.chain, seed, burn_in, steps);
            let mut est = MaccEstimator::new(motif.clone());
            let (macc, error) = match run_chain(&chain, motif, net, &mut [&mut est]) {
                Ok(_) => (Some(est.estimate().values().iter().map(|v| v.to_f64_lossy()).collect()), None),
                Err(e) => (None, Some(e.to_string())),
            };
            MaccRun { index, seed, burn_in, steps, macc, error }
        })
        .collect();
    let included: Vec<usize> = runs.iter().filter(|r| r.macc.is_some()).map(|r| r.index).collect();
    if included.len() < 2 {
        let msg = runs.iter().filter_map(|r| r.error.clone()).next().unwrap_or_default();
        return Err(Error::Numerical(format!("fewer than two networks produced a MACC: {msg}")));
    }
    let points: Vec<Vec<f64>> = included.iter().map(|&i| runs[i].macc.clone().unwrap()).collect();
    let distances = pairwise(&points, |a, b| Ok(sq_dist(a, b).sqrt()))?;
    let dendrogram = single_linkage(&distances, points.len());
    let kmeans = kmeans(&points, config.clusters, config.kmeans_iterations, config.kmeans_restarts, config.seed)?;
    Ok(MaccPipelineOutput {
        schema_version: REPORT_SCHEMA_VERSION,
        config_hash: hasher.finish(),
        config: config.clone(),
        k: motif.k(),
        partial: included.len() < nets.len(),
        runs,
        included,
        distances,
        dendrogram,
        kmeans,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ProfileMode {
    /// Exact when `n^k <= EXACT_PROFILE_MAX_STATES`, sampled otherwise.
    Auto,
    Exact,
    Sample,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProfilePipelineConfig {
    pub chain: ChainKind,
    pub seed: u64,
    pub steps: u64,
    /// `None` uses `ceil(2 n ln n)`.
    pub burn_in: Option<u64>,
    pub grid_points: usize,
    pub mode: ProfileMode,
}

impl ProfilePipelineConfig {
    pub fn new(chain: ChainKind, seed: u64, steps: u64) -> Self {
        Self { chain, seed, steps, burn_in: None, grid_points: crate::observables::DEFAULT_GRID_POINTS, mode: ProfileMode::Auto }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct PairProfiles {
    pub pair: usize,
    /// Per network: whether the profile was enumerated exactly.
    pub exact: Vec<bool>,
    pub seeds: Vec<u64>,
    pub profiles: Vec<Vec<f64>>,
    pub distances: Vec<f64>,
}

#[derive(Clone, Debug, Serialize)]
pub struct ProfilePipelineOutput {
    pub schema_version: u32,
    pub config_hash: String,
    pub config: ProfilePipelineConfig,
    pub grid: Vec<f64>,
    pub pairs: Vec<PairProfiles>,
}

fn wants_exact<T: Real>(mode: ProfileMode, net: &Network<T>, k: usize) -> bool {
    match mode {
        ProfileMode::Exact => true,
        ProfileMode::Sample => false,
        ProfileMode::Auto => (net.n() as f64).powi(k as i32) <= EXACT_PROFILE_MAX_STATES,
    }
}

/// CHD profile of `(h, f)` on one network, exactly or from one chain run.
pub fn network_profile<T: Real>(
    h: &Motif<T>,
    f: &Motif<T>,
    net: &Network<T>,
    grid: &[T],
    exact: bool,
    chain: ChainConfig,
) -> Result<ProfileGrid<T>> {
    if exact {
        let opts = ExactOptions { cap: EXACT_PROFILE_MAX_STATES.max(ExactOptions::default().cap) };
        exact_chd_profile_with(h, f, net, grid, opts)
    } else {
        let mut est = ProfileEstimator::new(h.clone(), grid.to_vec())?;
        run_chain(&chain, f, net, &mut [&mut est])?;
        Ok(est.estimate())
    }
}

/// CHD profiles of every network for every motif pair `(H, F)`, and the
/// pairwise L1 distance matrix per pair.
pub fn profile_pipeline<T: Real>(
    nets: &[Network<T>],
    pairs: &[(Motif<T>, Motif<T>)],
    config: &ProfilePipelineConfig,
) -> Result<ProfilePipelineOutput> {
    if config.grid_points < 2 {
        return Err(Error::InvalidArgument("profile grid needs at least two points".into()));
    }
    for (h, f) in pairs {
        if h.k() != f.k() {
            return Err(Error::DimensionMismatch(format!("motif pair has k = {} and k = {}", h.k(), f.k())));
        }
    }
    let mut hasher = ConfigHasher::default();
    hasher.json(&"profile").json(config);
    for (h, f) in pairs {
        hasher.motif(h).motif(f);
    }
    nets.iter().for_each(|g| {
        hasher.network(g);
    });
    let grid: Vec<T> = uniform_grid(config.grid_points);
    let mut out_pairs = Vec::with_capacity(pairs.len());
    for (p, (h, f)) in pairs.iter().enumerate() {
        let runs: Vec<(bool, u64, ProfileGrid<T>)> = nets
            .par_iter()
            .enumerate()
            .map(|(i, net)| {
                let seed = item_seed(item_seed(config.seed, p), i);
                let burn_in = config.burn_in.unwrap_or_else(|| default_burn_in(net.n()));
                let exact = wants_exact(config.mode, net, f.k());
                let chain = ChainConfig::new(config.chain, seed, burn_in, config.steps);
                network_profile(h, f, net, &grid, exact, chain).map(|g| (exact, seed, g))
            })
            .collect::<Result<_>>()?;
        let profiles: Vec<&ProfileGrid<T>> = runs.iter().map(|r| &r.2).collect();
        let distances = pairwise(&profiles, |a, b| profile_l1_distance(a, b).map(|d| d.to_f64_lossy()))?;
        out_pairs.push(PairProfiles {
            pair: p,
            exact: runs.iter().map(|r| r.0).collect(),
            seeds: runs.iter().map(|r| r.1).collect(),
            profiles: runs.iter().map(|r| r.2.values().iter().map(|v| v.to_f64_lossy()).collect()).collect(),
            distances,
        });
    }
    Ok(ProfilePipelineOutput {
        schema_version: REPORT_SCHEMA_VERSION,
        config_hash: hasher.finish(),
        config: config.clone(),
        grid: grid.iter().map(|v| v.to_f64_lossy()).collect(),
        pairs: out_pairs,
    })
}

/// Profiles as CSV: a `t` column followed by one column per network;
/// exactly one row per grid point.
pub fn profiles_csv(grid: &[f64], profiles: &[Vec<f64>]) -> String {
    let mut out = String::from("t");
    for i in 0..profiles.len() {
        out.push_str(&format!(",net{i}"));
    }
    out.push('\n');
    for (g, t) in grid.iter().enumerate() {
        out.push_str(&t.to_string());
        for p in profiles {
            out.push_str(&format!(",{}", p[g]));
        }
        out.push('\n');
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AttributionMethod {
    /// L1 distance between self-loop CHD profiles `f(H_{0,0}, G | H_{0,0})`.
    Chd00,
    /// Mean row-wise Kullback-Leibler divergence.
    Kl,
    Frobenius,
}

impl std::str::FromStr for AttributionMethod {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "chd00" => Ok(Self::Chd00),
            "kl" => Ok(Self::Kl),
            "frobenius" => Ok(Self::Frobenius),
            _ => Err(Error::InvalidArgument(format!("unknown attribution method `{s}`"))),
        }
    }
}

/// A row-Markov frequency matrix prepared for one attribution method.
#[derive(Clone, Debug)]
pub struct AttributionItem {
    pub label: String,
    n: usize,
    kernel: Vec<f64>,
    profile: Option<ProfileGrid<f64>>,
}

impl AttributionItem {
    pub fn new(label: impl Into<String>, n: usize, frequencies: &[f64], method: AttributionMethod) -> Result<Self> {
        let net: Network<f64> = normalize_frequency(n, frequencies, WanNormalization::RowMarkov)?;
        let profile = match method {
            AttributionMethod::Chd00 => {
                let h = Motif::arm_ends_edge(0, 0);
                let grid = uniform_grid(crate::observables::DEFAULT_GRID_POINTS);
                Some(exact_chd_profile_with(&h, &h, &net, &grid, ExactOptions::default())?)
            }
            _ => None,
        };
        Ok(Self { label: label.into(), n, kernel: net.to_dense(), profile })
    }
}

/// `KL(p || q)` in nats with the convention `0 ln 0 = 0`; infinite when `q`
/// misses mass of `p`.
fn kl_row(p: &[f64], q: &[f64]) -> f64 {
    p.iter()
        .zip(q)
        .filter(|(&a, _)| a > 0.0)
        .map(|(&a, &b)| if b > 0.0 { a * (a / b).ln() } else { f64::INFINITY })
        .sum()
}

/// Mean over rows of row-wise KL divergence between row-Markov kernels.
/// Rows that are zero in both are skipped; a row that is zero in only one
/// kernel is replaced by the uniform distribution.
pub fn kernel_kl(p: &[f64], q: &[f64], n: usize) -> f64 {
    let uniform = vec![1.0 / n as f64; n];
    let mut total = 0.0;
    let mut rows = 0usize;
    for (rp, rq) in p.chunks(n).zip(q.chunks(n)) {
        let (zp, zq) = (rp.iter().all(|&v| v == 0.0), rq.iter().all(|&v| v == 0.0));
        if zp && zq {
            continue;
        }
        let rp = if zp { &uniform[..] } else { rp };
        let rq = if zq { &uniform[..] } else { rq };
        total += kl_row(rp, rq);
        rows += 1;
    }
    if rows == 0 {
        0.0
    } else {
        total / rows as f64
    }
}

/// Distance from an unknown item to a known one (KL is taken from the
/// unknown toward the known).
pub fn attribution_distance(unknown: &AttributionItem, known: &AttributionItem, method: AttributionMethod) -> Result<f64> {
    if unknown.n != known.n {
        return Err(Error::DimensionMismatch(format!("frequency matrices of size {} and {}", unknown.n, known.n)));
    }
    match method {
        AttributionMethod::Chd00 => match (&unknown.profile, &known.profile) {
            (Some(a), Some(b)) => profile_l1_distance(a, b),
            _ => Err(Error::InvalidArgument("items were not prepared for chd00".into())),
        },
        AttributionMethod::Kl => Ok(kernel_kl(&unknown.kernel, &known.kernel, unknown.n)),
        AttributionMethod::Frobenius => Ok(sq_dist(&unknown.kernel, &known.kernel).sqrt()),
    }
}

/// Label of the nearest known item; ties go to the earliest label in
/// `labels`.
pub fn attribute_one(
    unknown: &AttributionItem,
    known: &[&AttributionItem],
    labels: &[String],
    method: AttributionMethod,
) -> Result<String> {
    let mut best: Option<(f64, usize)> = None;
    for item in known {
        let d = attribution_distance(unknown, item, method)?;
        let rank = labels
            .iter()
            .position(|l| *l == item.label)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown label `{}`", item.label)))?;
        let better = match best {
            None => true,
            Some((bd, br)) => d < bd || (d == bd && rank < br),
        };
        if better {
            best = Some((d, rank));
        }
    }
    let (_, rank) = best.ok_or_else(|| Error::InvalidArgument("no known items".into()))?;
    Ok(labels[rank].clone())
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AttributionConfig {
    pub method: AttributionMethod,
    /// Known items drawn per label in each split.
    pub known_per_label: usize,
    pub splits: usize,
    pub seed: u64,
}

impl AttributionConfig {
    pub fn new(method: AttributionMethod, known_per_label: usize, seed: u64) -> Self {
        Self { method, known_per_label, splits: 1000, seed }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ClassAccuracy {
    pub label: String,
    pub trials: usize,
    pub correct: usize,
    pub accuracy: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AttributionReport {
    pub schema_version: u32,
    pub config_hash: String,
    pub method: AttributionMethod,
    pub splits: usize,
    pub per_class: Vec<ClassAccuracy>,
    pub overall: f64,
}

fn labels_in_order(items: &[AttributionItem]) -> Vec<String> {
    items.iter().map(|i| i.label.clone()).unique().collect()
}

fn report(
    config_hash: String,
    method: AttributionMethod,
    splits: usize,
    labels: &[String],
    tallies: &[(usize, usize)],
) -> AttributionReport {
    let per_class: Vec<ClassAccuracy> = labels
        .iter()
        .zip(tallies)
        .map(|(l, &(trials, correct))| ClassAccuracy {
            label: l.clone(),
            trials,
            correct,
            accuracy: if trials == 0 { 0.0 } else { correct as f64 / trials as f64 },
        })
        .collect();
    let (t, c) = tallies.iter().fold((0, 0), |a, b| (a.0 + b.0, a.1 + b.1));
    AttributionReport {
        schema_version: REPORT_SCHEMA_VERSION,
        config_hash,
        method,
        splits,
        per_class,
        overall: if t == 0 { 0.0 } else { c as f64 / t as f64 },
    }
}

/// Attributes each validation item to the label of its nearest reference
/// item.
pub fn attribute_fixed(
    reference: &[AttributionItem],
    validation: &[AttributionItem],
    method: AttributionMethod,
) -> Result<AttributionReport> {
    let labels = labels_in_order(reference);
    if let Some(v) = validation.iter().find(|v| !labels.contains(&v.label)) {
        return Err(Error::InvalidArgument(format!("validation label `{}` has no reference items", v.label)));
    }
    let known: Vec<&AttributionItem> = reference.iter().collect();
    let mut tallies = vec![(0usize, 0usize); labels.len()];
    let mut hasher = ConfigHasher::default();
    hasher.json(&("attribute_fixed", method));
    for item in reference.iter().chain(validation) {
        hasher.json(&(&item.label, &item.kernel));
    }
    for v in validation {
        let guess = attribute_one(v, &known, &labels, method)?;
        let c = labels.iter().position(|l| *l == v.label).unwrap();
        tallies[c].0 += 1;
        tallies[c].1 += usize::from(guess == v.label);
    }
    Ok(report(hasher.finish(), method, 1, &labels, &tallies))
}

/// Repeated random splits: in each split every label contributes one
/// unknown item and `known_per_label` known items, drawn without
/// replacement, and every unknown item is attributed to its nearest known
/// item among all labels.
pub fn attribute_splits(items: &[AttributionItem], config: &AttributionConfig) -> Result<AttributionReport> {
    let labels = labels_in_order(items);
    let by_label: Vec<Vec<&AttributionItem>> =
        labels.iter().map(|l| items.iter().filter(|i| i.label == *l).collect()).collect();
    if config.known_per_label == 0 {
        return Err(Error::InvalidArgument("known_per_label must be at least 1".into()));
    }
    if let Some((l, g)) = labels.iter().zip(&by_label).find(|(_, g)| g.len() < config.known_per_label + 1) {
        return Err(Error::InvalidArgument(format!(
            "label `{l}` has {} items, need {}",
            g.len(),
            config.known_per_label + 1
        )));
    }
    let mut hasher = ConfigHasher::default();
    hasher.json(&"attribute_splits").json(config);
    for item in items {
        hasher.json(&(&item.label, &item.kernel));
    }
    let split_tallies: Vec<Vec<(usize, usize)>> = (0..config.splits)
        .into_par_iter()
        .map(|s| {
            let mut rng = seeded_rng(item_seed(config.seed, s));
            let mut unknown = Vec::with_capacity(labels.len());
            let mut known = Vec::new();
            for group in &by_label {
                let mut picks: Vec<&AttributionItem> = group.clone();
                picks.shuffle(&mut rng);
                unknown.push(picks[0]);
                known.extend_from_slice(&picks[1..=config.known_per_label]);
            }
            unknown
                .iter()
                .map(|u| attribute_one(u, &known, &labels, config.method).map(|g| (1, usize::from(g == u.label))))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<_>>()?;
    let mut tallies = vec![(0usize, 0usize); labels.len()];
    for split in split_tallies {
        for (acc, (t, c)) in tallies.iter_mut().zip(split) {
            acc.0 += t;
            acc.1 += c;
        }
    }
    Ok(report(hasher.finish(), config.method, config.splits, &labels, &tallies))
}
