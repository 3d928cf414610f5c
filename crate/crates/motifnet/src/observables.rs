//! Streaming time-average estimators fed by chain trajectories.

use std::collections::HashMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::{motif_min_factor, motif_product};
use crate::motif::Motif;
use crate::network::Network;
use crate::scalar::Real;

pub const DEFAULT_GRID_POINTS: usize = 101;

/// Per-step consumer of chain states.
pub trait Observer<T: Real> {
    fn observe(&mut self, net: &Network<T>, x: &[usize]);
}

/// A function on a sorted grid of thresholds in `[0,1]`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ProfileGrid<T: Real> {
    ts: Vec<T>,
    values: Vec<T>,
}

impl<T: Real> ProfileGrid<T> {
    pub fn new(ts: Vec<T>, values: Vec<T>) -> Result<Self> {
        validate_grid(&ts)?;
        if ts.len() != values.len() {
            return Err(Error::DimensionMismatch(format!(
                "grid has {} points but {} values",
                ts.len(),
                values.len()
            )));
        }
        Ok(Self { ts, values })
    }

    pub fn ts(&self) -> &[T] {
        &self.ts
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }
}

/// `points` equispaced thresholds `0, 1/(points-1), ..., 1`.
pub fn uniform_grid<T: Real>(points: usize) -> Vec<T> {
    match points {
        0 => Vec::new(),
        1 => vec![T::zero()],
        _ => {
            let d = T::from_usize(points - 1).unwrap();
            (0..points).map(|i| T::from_usize(i).unwrap() / d).collect()
        }
    }
}

fn validate_grid<T: Real>(ts: &[T]) -> Result<()> {
    if ts.iter().any(|&t| !(t >= T::zero() && t <= T::one())) {
        return Err(Error::InvalidArgument("grid points must lie in [0,1]".into()));
    }
    if ts.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidArgument("grid points must be strictly increasing".into()));
    }
    Ok(())
}

/// Trapezoidal `L^1` distance between two profiles on the same grid.
pub fn profile_l1_distance<T: Real>(p: &ProfileGrid<T>, q: &ProfileGrid<T>) -> Result<T> {
    if p.ts != q.ts {
        return Err(Error::DimensionMismatch("profiles use different grids".into()));
    }
    let d: Vec<T> = p.values.iter().zip(&q.values).map(|(&a, &b)| (a - b).abs()).collect();
    let half = T::lit(0.5);
    Ok(p.ts
        .windows(2)
        .zip(d.windows(2))
        .map(|(t, v)| (t[1] - t[0]) * (v[0] + v[1]) * half)
        .sum())
}

/// `k x k` matrix of average clustering coefficients.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MaccMatrix<T: Real> {
    k: usize,
    values: Vec<T>,
}

impl<T: Real> MaccMatrix<T> {
    pub fn new(k: usize, values: Vec<T>) -> Self {
        assert_eq!(values.len(), k * k);
        Self { k, values }
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn get(&self, i: usize, j: usize) -> T {
        self.values[i * self.k + j]
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    pub fn frobenius_distance(&self, other: &Self) -> Result<T> {
        if self.k != other.k {
            return Err(Error::DimensionMismatch(format!("MACC sizes {} and {}", self.k, other.k)));
        }
        let s: T = self.values.iter().zip(&other.values).map(|(&a, &b)| (a - b) * (a - b)).sum();
        Ok(s.sqrt())
    }
}

fn check_k<T: Real>(a: &Motif<T>, b: &Motif<T>) -> Result<()> {
    if a.k() != b.k() || a.matrix() != b.matrix() {
        return Err(Error::InvalidArgument("cannot merge accumulators built for different motifs".into()));
    }
    Ok(())
}

/// Running mean of `prod A(x(i),x(j))^{A_H(i,j)}`; estimates `t(H,G|F)`.
#[derive(Clone, Debug)]
pub struct ChdEstimator<T: Real> {
    h: Motif<T>,
    sum: T,
    count: u64,
}

impl<T: Real> ChdEstimator<T> {
    pub fn new(h: Motif<T>) -> Self {
        Self { h, sum: T::zero(), count: 0 }
    }

    pub fn count(&self) -> u64 {
        self.count
    }

    pub fn estimate(&self) -> T {
        if self.count == 0 {
            T::zero()
        } else {
            self.sum / T::from_u64(self.count).unwrap()
        }
    }

    pub fn merge(&mut self, other: &Self) -> Result<()> {
        check_k(&self.h, &other.h)?;
        self.sum += other.sum;
        self.count += other.count;
        Ok(())
    }
}

impl<T: Real> Observer<T> for ChdEstimator<T> {
    fn observe(&mut self, net: &Network<T>, x: &[usize]) {
        self.sum += motif_product(&self.h, net, x);
        self.count += 1;
    }
}

/// Running CHD profile: fraction of steps whose smallest `H`-factor is at
/// least `t`, for each grid point `t`.
#[derive(Clone, Debug)]
pub struct ProfileEstimator<T: Real> {
    h: Motif<T>,
    ts: Vec<T>,
    /// `cuts[c]` counts steps where exactly the first `c` grid points pass.
    cuts: Vec<u64>,
    count: u64,
}

impl<T: Real> ProfileEstimator<T> {
    pub fn new(h: Motif<T>, ts: Vec<T>) -> Result<Self> {
        validate_grid(&ts)?;
        let g = ts.len();
        Ok(Self { h, ts, cuts: vec![0; g + 1], count: 0 })
    }

    pub fn count(&self) -> u64 {
        self.count
    }

    pub fn estimate(&self) -> ProfileGrid<T> {
        let g = self.ts.len();
        let mut values = vec![T::zero(); g];
        if self.count > 0 {
            let total = T::from_u64(self.count).unwrap();
            let mut above = 0u64;
            for i in (0..g).rev() {
                above += self.cuts[i + 1];
                values[i] = T::from_u64(above).unwrap() / total;
            }
        }
        ProfileGrid { ts: self.ts.clone(), values }
    }

    pub fn merge(&mut self, other: &Self) -> Result<()> {
        check_k(&self.h, &other.h)?;
        if self.ts != other.ts {
            return Err(Error::DimensionMismatch("profile accumulators use different grids".into()));
        }
        self.cuts.iter_mut().zip(&other.cuts).for_each(|(a, b)| *a += b);
        self.count += other.count;
        Ok(())
    }
}

impl<T: Real> Observer<T> for ProfileEstimator<T> {
    fn observe(&mut self, net: &Network<T>, x: &[usize]) {
        let m = motif_min_factor(&self.h, net, x);
        let passed = self.ts.partition_point(|&t| t <= m);
        self.cuts[passed] += 1;
        self.count += 1;
    }
}

/// Running MACC. Entries on motif edges are fixed at 1.
#[derive(Clone, Debug)]
pub struct MaccEstimator<T: Real> {
    f: Motif<T>,
    sums: Vec<T>,
    count: u64,
}

impl<T: Real> MaccEstimator<T> {
    pub fn new(f: Motif<T>) -> Self {
        let k = f.k();
        Self { f, sums: vec![T::zero(); k * k], count: 0 }
    }

    pub fn count(&self) -> u64 {
        self.count
    }

    pub fn estimate(&self) -> MaccMatrix<T> {
        let k = self.f.k();
        let mut values = vec![T::zero(); k * k];
        if self.count > 0 {
            let total = T::from_u64(self.count).unwrap();
            for i in 0..k {
                for j in 0..k {
                    values[i * k + j] =
                        if self.f.weight(i, j) > T::zero() { T::one() } else { self.sums[i * k + j] / total };
                }
            }
        }
        MaccMatrix { k, values }
    }

    pub fn merge(&mut self, other: &Self) -> Result<()> {
        check_k(&self.f, &other.f)?;
        self.sums.iter_mut().zip(&other.sums).for_each(|(a, &b)| *a += b);
        self.count += other.count;
        Ok(())
    }
}

impl<T: Real> Observer<T> for MaccEstimator<T> {
    fn observe(&mut self, net: &Network<T>, x: &[usize]) {
        let k = self.f.k();
        for i in 0..k {
            for j in 0..k {
                if self.f.weight(i, j) == T::zero() {
                    self.sums[i * k + j] += net.weight(x[i], x[j]);
                }
            }
        }
        self.count += 1;
    }
}

/// Accumulates `prod A^{A_H}` at the endpoint pair `(x(first), x(last))`;
/// normalized to total mass 1 on output.
#[derive(Clone, Debug)]
pub struct TransformEstimator<T: Real> {
    h: Motif<T>,
    mass: HashMap<(usize, usize), T>,
    count: u64,
}

impl<T: Real> TransformEstimator<T> {
    pub fn new(h: Motif<T>) -> Result<Self> {
        if h.k() < 2 {
            return Err(Error::InvalidMotif("motif transform needs k >= 2".into()));
        }
        Ok(Self { h, mass: HashMap::new(), count: 0 })
    }

    pub fn count(&self) -> u64 {
        self.count
    }

    /// Normalized endpoint matrix as a network carrying the node weights of `net`.
    pub fn estimate(&self, net: &Network<T>) -> Result<Network<T>> {
        let mut entries: Vec<_> = self.mass.iter().map(|(&(x, y), &w)| (x, y, w)).collect();
        entries.sort_by_key(|&(x, y, _)| (x, y));
        let total: T = entries.iter().map(|e| e.2).sum();
        if total == T::zero() {
            return Err(Error::Numerical("transform estimator accumulated no mass".into()));
        }
        let entries = entries.into_iter().map(|(x, y, w)| (x, y, w / total));
        Network::from_entries(net.n(), entries, Some(net.alpha().to_vec()))
    }

    pub fn merge(&mut self, other: &Self) -> Result<()> {
        check_k(&self.h, &other.h)?;
        for (&key, &w) in &other.mass {
            *self.mass.entry(key).or_insert(T::zero()) += w;
        }
        self.count += other.count;
        Ok(())
    }
}

impl<T: Real> Observer<T> for TransformEstimator<T> {
    fn observe(&mut self, net: &Network<T>, x: &[usize]) {
        let w = motif_product(&self.h, net, x);
        if w > T::zero() {
            *self.mass.entry((x[0], x[x.len() - 1])).or_insert(T::zero()) += w;
        }
        self.count += 1;
    }
}
