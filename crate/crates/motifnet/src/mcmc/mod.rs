//! Glauber and pivot chains over homomorphisms `F -> G`.

mod diagnostics;
mod glauber;
mod init;
mod pivot;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::motif::Motif;
use crate::network::Network;
use crate::observables::Observer;
use crate::scalar::Real;

pub use diagnostics::{
    coloring_mixing_steps, concentration_ci, cubic_meeting_bound, empirical_mixing, exact_mixing_time,
    glauber_contraction_constant, glauber_transition_prob, pivot_root_kernel, spectral_gap_bounds,
    spectral_gap_bounds_for, vector_concentration_delta, ConcentrationReport, GlauberContraction, MixingCurve,
    MixingOptions, SpectralGapBounds,
};
pub use glauber::{glauber_conditional, GlauberChain};
pub use init::{initial_hom, DEFAULT_MAX_TRIES};
pub use pivot::{pivot_tables, PivotChain, PivotTables};

/// Seeded generator used for every stochastic routine.
pub type ChainRng = ChaCha8Rng;

pub fn seeded_rng(seed: u64) -> ChainRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Independent stream `stream` for replica runs under one seed.
pub fn replica_rng(seed: u64, stream: u64) -> ChainRng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ChainKind {
    Glauber,
    Pivot,
}

impl std::str::FromStr for ChainKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "glauber" => Ok(Self::Glauber),
            "pivot" => Ok(Self::Pivot),
            _ => Err(Error::InvalidArgument(format!("unknown chain `{s}`, expected glauber or pivot"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChainConfig {
    pub kind: ChainKind,
    pub seed: u64,
    pub burn_in: u64,
    pub steps: u64,
    pub thinning: u64,
}

impl ChainConfig {
    pub fn new(kind: ChainKind, seed: u64, burn_in: u64, steps: u64) -> Self {
        Self { kind, seed, burn_in, steps, thinning: 1 }
    }
}

/// `ceil(2 n ln n)`.
pub fn default_burn_in(n: usize) -> u64 {
    if n < 2 {
        return 0;
    }
    let n = n as f64;
    (2.0 * n * n.ln()).ceil() as u64
}

/// A vertex map with positive `pi_{F->G}` mass.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Homomorphism(Vec<usize>);

impl Homomorphism {
    pub fn new<T: Real>(motif: &Motif<T>, net: &Network<T>, x: Vec<usize>) -> Result<Self> {
        if x.len() != motif.k() {
            return Err(Error::DimensionMismatch(format!("map has {} entries, motif has {}", x.len(), motif.k())));
        }
        if x.iter().any(|&v| v >= net.n()) {
            return Err(Error::InvalidArgument("map sends a node outside the network".into()));
        }
        if !is_homomorphism(motif, net, &x) {
            return Err(Error::InvalidArgument("map has zero mass under pi_{F->G}".into()));
        }
        Ok(Self(x))
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<usize> {
        self.0
    }
}

pub fn is_homomorphism<T: Real>(motif: &Motif<T>, net: &Network<T>, x: &[usize]) -> bool {
    motif.edges().iter().all(|&(i, j, _)| net.weight(x[i], x[j]) > T::zero())
}

/// Either chain behind one interface.
pub enum Chain<'a, T: Real> {
    Glauber(GlauberChain<'a, T>),
    Pivot(PivotChain<'a, T>),
}

impl<'a, T: Real> Chain<'a, T> {
    pub fn step<R: Rng + ?Sized>(&mut self, rng: &mut R) {
        match self {
            Chain::Glauber(c) => c.step(rng),
            Chain::Pivot(c) => c.step(rng),
        }
    }

    pub fn state(&self) -> &[usize] {
        match self {
            Chain::Glauber(c) => c.state(),
            Chain::Pivot(c) => c.state(),
        }
    }

    pub fn acceptance_rate(&self) -> Option<f64> {
        match self {
            Chain::Glauber(_) => None,
            Chain::Pivot(c) => Some(c.acceptance_rate()),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RunReport {
    pub kind: ChainKind,
    pub seed: u64,
    pub burn_in: u64,
    pub steps: u64,
    pub thinning: u64,
    pub observed: u64,
    pub acceptance_rate: Option<f64>,
    pub initial_state: Vec<usize>,
    pub final_state: Vec<usize>,
}

/// Runs burn-in, then `steps` steps, handing every `thinning`-th state to
/// each observer.
pub fn run_chain<T: Real>(
    config: &ChainConfig,
    motif: &Motif<T>,
    net: &Network<T>,
    observers: &mut [&mut dyn Observer<T>],
) -> Result<RunReport> {
    let tables = match config.kind {
        ChainKind::Pivot => Some(pivot_tables(motif, net)?),
        ChainKind::Glauber => None,
    };
    run_chain_with(config, motif, net, tables.as_ref(), observers)
}

/// As [`run_chain`], reusing prebuilt pivot tables.
pub fn run_chain_with<T: Real>(
    config: &ChainConfig,
    motif: &Motif<T>,
    net: &Network<T>,
    tables: Option<&PivotTables<T>>,
    observers: &mut [&mut dyn Observer<T>],
) -> Result<RunReport> {
    if config.steps == 0 {
        return Err(Error::InvalidArgument("steps must be at least 1".into()));
    }
    if config.thinning == 0 {
        return Err(Error::InvalidArgument("thinning must be at least 1".into()));
    }
    let mut rng = seeded_rng(config.seed);
    let x0 = initial_hom(motif, net, &mut rng, DEFAULT_MAX_TRIES)?.into_vec();
    let owned;
    let mut chain = match config.kind {
        ChainKind::Glauber => Chain::Glauber(GlauberChain::new(motif, net, x0.clone())?),
        ChainKind::Pivot => {
            let t = match tables {
                Some(t) => t,
                None => {
                    owned = pivot_tables(motif, net)?;
                    &owned
                }
            };
            Chain::Pivot(PivotChain::new(motif, net, t, x0.clone())?)
        }
    };
    for _ in 0..config.burn_in {
        chain.step(&mut rng);
    }
    let mut observed = 0;
    for s in 0..config.steps {
        chain.step(&mut rng);
        if (s + 1) % config.thinning == 0 {
            for obs in observers.iter_mut() {
                obs.observe(net, chain.state());
            }
            observed += 1;
        }
    }
    Ok(RunReport {
        kind: config.kind,
        seed: config.seed,
        burn_in: config.burn_in,
        steps: config.steps,
        thinning: config.thinning,
        observed,
        acceptance_rate: chain.acceptance_rate(),
        initial_state: x0,
        final_state: chain.state().to_vec(),
    })
}

/// Observer that stores every state it sees.
#[derive(Clone, Debug, Default)]
pub struct TrajectoryRecorder {
    pub states: Vec<Vec<usize>>,
}

impl<T: Real> Observer<T> for TrajectoryRecorder {
    fn observe(&mut self, _net: &Network<T>, x: &[usize]) {
        self.states.push(x.to_vec());
    }
}

/// Index drawn with probability proportional to `weights`, by inversion of
/// the cumulative sum with a strict comparison; zero weights are never
/// chosen.
pub(crate) fn sample_index<T: Real, R: Rng + ?Sized>(weights: &[T], total: T, rng: &mut R) -> usize {
    let u = T::from_f64(rng.random::<f64>()).unwrap() * total;
    let mut acc = T::zero();
    let mut last_positive = 0;
    for (i, &w) in weights.iter().enumerate() {
        if w > T::zero() {
            acc += w;
            last_positive = i;
            if acc > u {
                return i;
            }
        }
    }
    last_positive
}
