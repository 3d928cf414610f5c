use rand::Rng;

use super::{is_homomorphism, sample_index};
use crate::error::{Error, Result};
use crate::motif::Motif;
use crate::network::Network;
use crate::scalar::{pow_weight, Real};

/// Proposal kernel, root marginal and subtree messages for the pivot chain.
#[derive(Clone, Debug)]
pub struct PivotTables<T: Real> {
    n: usize,
    psi_cols: Vec<Vec<usize>>,
    psi_probs: Vec<Vec<T>>,
    pi1: Vec<T>,
    messages: Vec<Vec<T>>,
    parent: Vec<usize>,
    edge_weight: Vec<T>,
}

impl<T: Real> PivotTables<T> {
    pub fn n(&self) -> usize {
        self.n
    }

    /// Marginal law of the root under `pi_{F->G}`.
    pub fn pi1(&self) -> &[T] {
        &self.pi1
    }

    /// Proposal probability `Psi(a, b)`.
    pub fn psi(&self, a: usize, b: usize) -> T {
        match self.psi_cols[a].binary_search(&b) {
            Ok(pos) => self.psi_probs[a][pos],
            Err(_) => T::zero(),
        }
    }

    /// Support and probabilities of `Psi(a, .)`.
    pub fn psi_row(&self, a: usize) -> (&[usize], &[T]) {
        (&self.psi_cols[a], &self.psi_probs[a])
    }

    /// Message of motif node `j`, the subtree weight seen from each host
    /// node, scaled to maximum 1.
    pub fn message(&self, j: usize) -> &[T] {
        &self.messages[j]
    }

    /// Metropolis acceptance probability of the root move `a -> b`.
    pub fn acceptance(&self, a: usize, b: usize) -> T {
        let num = self.pi1[b] * self.psi(b, a);
        let den = self.pi1[a] * self.psi(a, b);
        if den == T::zero() {
            T::one()
        } else {
            (num / den).min(T::one())
        }
    }
}

/// Builds the pivot tables. The motif must be a rooted tree and every
/// network node needs positive out-mass.
pub fn pivot_tables<T: Real>(motif: &Motif<T>, net: &Network<T>) -> Result<PivotTables<T>> {
    let tree = motif.tree().ok_or(Error::NotRootedTree)?;
    let n = net.n();
    let k = motif.k();
    if let Some(i) = (0..n).find(|&i| net.out_mass(i) == T::zero()) {
        return Err(Error::ZeroOutMass(i));
    }
    let alpha = net.alpha();
    let mut psi_cols = Vec::with_capacity(n);
    let mut psi_probs = Vec::with_capacity(n);
    for a in 0..n {
        let mut cols: Vec<usize> =
            net.out_neighbors(a).iter().chain(net.in_neighbors(a)).map(|&(b, _)| b).collect();
        cols.sort_unstable();
        cols.dedup();
        let mut probs: Vec<T> =
            cols.iter().map(|&b| net.weight(a, b).max(net.weight(b, a)) * alpha[b]).collect();
        let total: T = probs.iter().copied().sum();
        probs.iter_mut().for_each(|p| *p /= total);
        psi_cols.push(cols);
        psi_probs.push(probs);
    }
    let mut parent = vec![0; k];
    let mut edge_weight = vec![T::zero(); k];
    for i in 1..k {
        let p = tree.parent(i).unwrap();
        parent[i] = p;
        edge_weight[i] = motif.weight(p, i);
    }
    let mut messages = vec![vec![T::one(); n]; k];
    for j in (0..k).rev() {
        let mut m = vec![T::one(); n];
        for &u in tree.children(j) {
            let mu = &messages[u];
            for (c, slot) in m.iter_mut().enumerate() {
                let s: T = net
                    .out_neighbors(c)
                    .iter()
                    .map(|&(b, a)| pow_weight(a, edge_weight[u]) * alpha[b] * mu[b])
                    .sum();
                *slot *= s;
            }
        }
        let max = m.iter().copied().fold(T::zero(), T::max);
        if max > T::zero() {
            m.iter_mut().for_each(|v| *v /= max);
        }
        messages[j] = m;
    }
    let mut pi1: Vec<T> = (0..n).map(|c| alpha[c] * messages[0][c]).collect();
    let total: T = pi1.iter().copied().sum();
    if total == T::zero() {
        return Err(Error::NoHomomorphism);
    }
    pi1.iter_mut().for_each(|p| *p /= total);
    Ok(PivotTables { n, psi_cols, psi_probs, pi1, messages, parent, edge_weight })
}

/// Pivot chain: a Metropolis random walk of the root targeting its exact
/// marginal, followed by fresh draws of every other node, in index order,
/// from its exact conditional given its parent.
pub struct PivotChain<'a, T: Real> {
    net: &'a Network<T>,
    tables: &'a PivotTables<T>,
    x: Vec<usize>,
    proposed: u64,
    accepted: u64,
    weights: Vec<T>,
}

impl<'a, T: Real> PivotChain<'a, T> {
    pub fn new(motif: &Motif<T>, net: &'a Network<T>, tables: &'a PivotTables<T>, x0: Vec<usize>) -> Result<Self> {
        if tables.n != net.n() || tables.parent.len() != motif.k() {
            return Err(Error::DimensionMismatch("pivot tables were built for another instance".into()));
        }
        if x0.len() != motif.k() || x0.iter().any(|&v| v >= net.n()) || !is_homomorphism(motif, net, &x0) {
            return Err(Error::InvalidArgument("initial state is not a homomorphism".into()));
        }
        Ok(Self { net, tables, x: x0, proposed: 0, accepted: 0, weights: Vec::new() })
    }

    pub fn state(&self) -> &[usize] {
        &self.x
    }

    pub fn acceptance_rate(&self) -> f64 {
        if self.proposed == 0 {
            1.0
        } else {
            self.accepted as f64 / self.proposed as f64
        }
    }

    pub fn step<R: Rng + ?Sized>(&mut self, rng: &mut R) {
        let t = self.tables;
        let a = self.x[0];
        let (cols, probs) = t.psi_row(a);
        let b = cols[sample_index(probs, T::one(), rng)];
        self.proposed += 1;
        let lambda = t.acceptance(a, b);
        if lambda >= T::one() || T::from_f64(rng.random::<f64>()).unwrap() < lambda {
            self.x[0] = b;
            self.accepted += 1;
        }
        self.resample_children(rng);
    }

    fn resample_children<R: Rng + ?Sized>(&mut self, rng: &mut R) {
        let t = self.tables;
        let alpha = self.net.alpha();
        for i in 1..self.x.len() {
            let host = self.x[t.parent[i]];
            let list = self.net.out_neighbors(host);
            self.weights.clear();
            let mut total = T::zero();
            for &(c, a) in list {
                let w = pow_weight(a, t.edge_weight[i]) * alpha[c] * t.messages[i][c];
                self.weights.push(w);
                total += w;
            }
            assert!(total > T::zero(), "child conditional vanished at a valid state");
            self.x[i] = list[sample_index(&self.weights, total, rng)].0;
        }
    }
}
