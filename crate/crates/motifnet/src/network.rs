use std::collections::VecDeque;

use log::warn;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Networks with at most this many nodes also keep a dense weight matrix.
pub const DENSE_LIMIT: usize = 4096;

const ALPHA_SUM_TOLERANCE: f64 = 1e-9;

/// Weighted network `([n], A, alpha)`.
///
/// Immutable after construction. Positive entries are always available as
/// adjacency lists; a dense copy is kept for small networks so that
/// `weight` is O(1) there and a binary search otherwise.
#[derive(Clone, Debug)]
pub struct Network<T: Real> {
    n: usize,
    alpha: Vec<T>,
    dense: Option<Vec<T>>,
    out_adj: Vec<Vec<(usize, T)>>,
    in_adj: Vec<Vec<(usize, T)>>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct StructuralPredicates {
    pub irreducible: bool,
    pub bidirectional: bool,
    pub skeleton_has_odd_cycle: bool,
}

/// Symmetric 0-1 graph of pairs with positive weight in both directions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Skeleton {
    n: usize,
    adj: Vec<Vec<usize>>,
}

impl Skeleton {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn neighbors(&self, i: usize) -> &[usize] {
        &self.adj[i]
    }

    pub fn has_edge(&self, i: usize, j: usize) -> bool {
        self.adj[i].binary_search(&j).is_ok()
    }

    /// A loop counts as an odd cycle.
    pub fn has_odd_cycle(&self) -> bool {
        let mut color: Vec<Option<bool>> = vec![None; self.n];
        let mut queue = VecDeque::new();
        for s in 0..self.n {
            if color[s].is_some() {
                continue;
            }
            color[s] = Some(false);
            queue.push_back(s);
            while let Some(u) = queue.pop_front() {
                let cu = color[u].unwrap();
                for &v in &self.adj[u] {
                    match color[v] {
                        None => {
                            color[v] = Some(!cu);
                            queue.push_back(v);
                        }
                        Some(cv) if cv == cu => return true,
                        _ => {}
                    }
                }
            }
        }
        false
    }
}

fn validate_weight<T: Real>(i: usize, j: usize, w: T) -> Result<()> {
    if !w.is_finite() || w < T::zero() {
        return Err(Error::InvalidNetwork(format!(
            "weight A({i},{j}) = {w} must be finite and nonnegative"
        )));
    }
    Ok(())
}

fn normalize_alpha<T: Real>(n: usize, alpha: Option<Vec<T>>) -> Result<Vec<T>> {
    let mut alpha = match alpha {
        None => return Ok(vec![T::one() / T::from_usize(n).unwrap(); n]),
        Some(a) => a,
    };
    if alpha.len() != n {
        return Err(Error::DimensionMismatch(format!(
            "alpha has length {} but the network has {n} nodes",
            alpha.len()
        )));
    }
    for (i, &a) in alpha.iter().enumerate() {
        if !a.is_finite() || a <= T::zero() {
            return Err(Error::InvalidNetwork(format!(
                "node weight alpha({i}) = {a} must be strictly positive"
            )));
        }
    }
    let total: T = alpha.iter().copied().sum();
    if (total.to_f64_lossy() - 1.0).abs() > ALPHA_SUM_TOLERANCE {
        warn!("node weights sum to {total}; renormalizing");
    }
    // already normalized up to rounding: keep the exact values
    let rounding = T::epsilon() * T::from_usize(4 * n).unwrap();
    if (total - T::one()).abs() > rounding {
        for a in alpha.iter_mut() {
            *a /= total;
        }
    }
    Ok(alpha)
}

impl<T: Real> Network<T> {
    /// Builds a network from a row-major `n x n` weight matrix.
    pub fn from_dense(n: usize, a: Vec<T>, alpha: Option<Vec<T>>) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidNetwork("network needs at least one node".into()));
        }
        if a.len() != n * n {
            return Err(Error::DimensionMismatch(format!(
                "weight matrix has {} entries, expected {}",
                a.len(),
                n * n
            )));
        }
        let entries = a
            .iter()
            .enumerate()
            .filter(|(_, &w)| w != T::zero())
            .map(|(idx, &w)| (idx / n, idx % n, w))
            .collect::<Vec<_>>();
        for (idx, &w) in a.iter().enumerate() {
            validate_weight(idx / n, idx % n, w)?;
        }
        Self::from_entries(n, entries, alpha)
    }

    /// Builds a network from nested rows.
    pub fn from_rows(rows: &[Vec<T>], alpha: Option<Vec<T>>) -> Result<Self> {
        let n = rows.len();
        let mut a = Vec::with_capacity(n * n);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(Error::DimensionMismatch(format!(
                    "row {i} has {} entries, expected {n}",
                    row.len()
                )));
            }
            a.extend_from_slice(row);
        }
        Self::from_dense(n, a, alpha)
    }

    /// Builds a network from `(row, col, weight)` triples. Repeated pairs
    /// are summed and zero weights are dropped.
    pub fn from_entries<I>(n: usize, entries: I, alpha: Option<Vec<T>>) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize, T)>,
    {
        if n == 0 {
            return Err(Error::InvalidNetwork("network needs at least one node".into()));
        }
        let alpha = normalize_alpha(n, alpha)?;
        let mut out_adj: Vec<Vec<(usize, T)>> = vec![Vec::new(); n];
        for (i, j, w) in entries {
            if i >= n || j >= n {
                return Err(Error::InvalidNetwork(format!(
                    "entry ({i},{j}) out of range for {n} nodes"
                )));
            }
            validate_weight(i, j, w)?;
            if w > T::zero() {
                out_adj[i].push((j, w));
            }
        }
        for row in out_adj.iter_mut() {
            row.sort_by_key(|&(j, _)| j);
            let mut merged: Vec<(usize, T)> = Vec::with_capacity(row.len());
            for &(j, w) in row.iter() {
                match merged.last_mut() {
                    Some(last) if last.0 == j => last.1 += w,
                    _ => merged.push((j, w)),
                }
            }
            *row = merged;
        }
        let mut in_adj: Vec<Vec<(usize, T)>> = vec![Vec::new(); n];
        for (i, row) in out_adj.iter().enumerate() {
            for &(j, w) in row {
                in_adj[j].push((i, w));
            }
        }
        let dense = (n <= DENSE_LIMIT).then(|| {
            let mut d = vec![T::zero(); n * n];
            for (i, row) in out_adj.iter().enumerate() {
                for &(j, w) in row {
                    d[i * n + j] = w;
                }
            }
            d
        });
        Ok(Self { n, alpha, dense, out_adj, in_adj })
    }

    /// Same node weights, new edge weights.
    pub fn with_weights(&self, a: Vec<T>) -> Result<Self> {
        Self::from_dense(self.n, a, Some(self.alpha.clone()))
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn alpha(&self) -> &[T] {
        &self.alpha
    }

    pub fn is_dense(&self) -> bool {
        self.dense.is_some()
    }

    #[inline]
    pub fn weight(&self, i: usize, j: usize) -> T {
        match &self.dense {
            Some(d) => d[i * self.n + j],
            None => {
                let row = &self.out_adj[i];
                match row.binary_search_by_key(&j, |&(c, _)| c) {
                    Ok(pos) => row[pos].1,
                    Err(_) => T::zero(),
                }
            }
        }
    }

    /// Positive entries `A(i, j)` of row `i`, sorted by `j`.
    pub fn out_neighbors(&self, i: usize) -> &[(usize, T)] {
        &self.out_adj[i]
    }

    /// Positive entries `A(j, i)` of column `i`, sorted by `j`.
    pub fn in_neighbors(&self, i: usize) -> &[(usize, T)] {
        &self.in_adj[i]
    }

    pub fn out_mass(&self, i: usize) -> T {
        self.out_adj[i].iter().map(|&(_, w)| w).sum()
    }

    /// All positive entries in row-major order.
    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, T)> + '_ {
        self.out_adj
            .iter()
            .enumerate()
            .flat_map(|(i, row)| row.iter().map(move |&(j, w)| (i, j, w)))
    }

    pub fn nnz(&self) -> usize {
        self.out_adj.iter().map(Vec::len).sum()
    }

    /// Row-major dense copy of the weight matrix.
    pub fn to_dense(&self) -> Vec<T> {
        match &self.dense {
            Some(d) => d.clone(),
            None => {
                let mut d = vec![T::zero(); self.n * self.n];
                for (i, j, w) in self.entries() {
                    d[i * self.n + j] = w;
                }
                d
            }
        }
    }

    pub fn max_weight(&self) -> T {
        self.entries().map(|(_, _, w)| w).fold(T::zero(), T::max)
    }

    pub fn is_symmetric(&self) -> bool {
        self.entries().all(|(i, j, w)| self.weight(j, i) == w)
    }

    /// Number of `b` with `A(a,b) + A(b,a) > 0`, maximized over `a`.
    /// A loop counts once.
    pub fn max_degree(&self) -> usize {
        (0..self.n).map(|a| self.undirected_neighbors(a).len()).max().unwrap_or(0)
    }

    fn undirected_neighbors(&self, a: usize) -> Vec<usize> {
        let mut nb: Vec<usize> = self.out_adj[a]
            .iter()
            .chain(self.in_adj[a].iter())
            .map(|&(b, _)| b)
            .collect();
        nb.sort_unstable();
        nb.dedup();
        nb
    }

    /// Longest shortest directed path over positive entries; `None` when
    /// some ordered pair is unreachable.
    pub fn diameter(&self) -> Option<usize> {
        let mut diam = 0;
        let mut dist = vec![usize::MAX; self.n];
        let mut queue = VecDeque::new();
        for s in 0..self.n {
            dist.iter_mut().for_each(|d| *d = usize::MAX);
            dist[s] = 0;
            queue.push_back(s);
            let mut reached = 1;
            while let Some(u) = queue.pop_front() {
                for &(v, _) in &self.out_adj[u] {
                    if dist[v] == usize::MAX {
                        dist[v] = dist[u] + 1;
                        diam = diam.max(dist[v]);
                        reached += 1;
                        queue.push_back(v);
                    }
                }
            }
            if reached < self.n {
                return None;
            }
        }
        Some(diam)
    }

    pub fn skeleton(&self) -> Skeleton {
        let adj = (0..self.n)
            .map(|i| {
                self.out_adj[i]
                    .iter()
                    .filter(|&&(j, _)| self.weight(j, i) > T::zero())
                    .map(|&(j, _)| j)
                    .collect()
            })
            .collect();
        Skeleton { n: self.n, adj }
    }

    /// Connectivity of the symmetric support, which is the support of the
    /// pivot proposal kernel.
    pub fn is_irreducible(&self) -> bool {
        let mut seen = vec![false; self.n];
        let mut stack = vec![0];
        seen[0] = true;
        let mut count = 1;
        while let Some(u) = stack.pop() {
            for &(v, _) in self.out_adj[u].iter().chain(self.in_adj[u].iter()) {
                if !seen[v] {
                    seen[v] = true;
                    count += 1;
                    stack.push(v);
                }
            }
        }
        count == self.n
    }

    pub fn is_bidirectional(&self) -> bool {
        self.entries().all(|(i, j, _)| self.weight(j, i) > T::zero())
    }

    pub fn structural_predicates(&self) -> StructuralPredicates {
        StructuralPredicates {
            irreducible: self.is_irreducible(),
            bidirectional: self.is_bidirectional(),
            skeleton_has_odd_cycle: self.skeleton().has_odd_cycle(),
        }
    }

    /// Converts weights and node weights to another scalar type.
    pub fn cast<U: Real>(&self) -> Network<U> {
        let conv = |w: T| U::from_f64(w.to_f64_lossy()).unwrap();
        let alpha = self.alpha.iter().map(|&a| conv(a)).collect();
        let entries: Vec<_> = self.entries().map(|(i, j, w)| (i, j, conv(w))).collect();
        Network::from_entries(self.n, entries, Some(alpha)).expect("valid network casts to a valid network")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn complete(n: usize) -> Network<f64> {
        let mut a = vec![1.0; n * n];
        for i in 0..n {
            a[i * n + i] = 0.0;
        }
        Network::from_dense(n, a, None).unwrap()
    }

    fn torus(m: usize) -> Network<f64> {
        let n = m * m;
        let mut e = Vec::new();
        for r in 0..m {
            for c in 0..m {
                let u = r * m + c;
                for (dr, dc) in [(1, 0), (m - 1, 0), (0, 1), (0, m - 1)] {
                    e.push((u, ((r + dr) % m) * m + (c + dc) % m, 1.0));
                }
            }
        }
        Network::from_entries(n, e, None).unwrap()
    }

    #[test]
    fn degrees() {
        assert_eq!(complete(3).max_degree(), 2);
        let empty = Network::<f64>::from_dense(4, vec![0.0; 16], None).unwrap();
        assert_eq!(empty.max_degree(), 0);
        assert_eq!(torus(9).max_degree(), 4);
        let looped = Network::<f64>::from_dense(2, vec![1.0, 1.0, 1.0, 0.0], None).unwrap();
        assert_eq!(looped.max_degree(), 2);
    }

    #[test]
    fn diameters() {
        assert_eq!(complete(4).diameter(), Some(1));
        let two = Network::<f64>::from_dense(2, vec![0.0; 4], None).unwrap();
        assert_eq!(two.diameter(), None);
        assert_eq!(torus(5).diameter(), Some(4));
    }

    #[test]
    fn predicates() {
        let k3 = complete(3).structural_predicates();
        assert_eq!(
            k3,
            StructuralPredicates { irreducible: true, bidirectional: true, skeleton_has_odd_cycle: true }
        );
        let mut c4 = vec![0.0; 16];
        for i in 0..4 {
            c4[i * 4 + (i + 1) % 4] = 1.0;
            c4[((i + 1) % 4) * 4 + i] = 1.0;
        }
        let c4 = Network::from_dense(4, c4, None).unwrap().structural_predicates();
        assert_eq!((c4.irreducible, c4.bidirectional, c4.skeleton_has_odd_cycle), (true, true, false));
        let d = Network::<f64>::from_dense(2, vec![0.0, 1.0, 0.0, 0.0], None)
            .unwrap()
            .structural_predicates();
        assert_eq!((d.irreducible, d.bidirectional, d.skeleton_has_odd_cycle), (true, false, false));
    }

    #[test]
    fn alpha_validation() {
        assert!(Network::<f64>::from_dense(2, vec![0.0; 4], Some(vec![0.5, 0.0])).is_err());
        assert!(Network::<f64>::from_dense(2, vec![0.0; 4], Some(vec![0.5, -0.5])).is_err());
        let net = Network::<f64>::from_dense(2, vec![0.0; 4], Some(vec![1.0, 3.0])).unwrap();
        assert_eq!(net.alpha(), &[0.25, 0.75]);
        assert!(Network::<f64>::from_dense(2, vec![0.0, -1.0, 0.0, 0.0], None).is_err());
    }

    #[test]
    fn skeleton_is_symmetric_and_zero_preserving() {
        let net = Network::<f64>::from_dense(3, vec![0.0, 1.0, 2.0, 0.5, 0.0, 0.0, 1.0, 0.0, 1.0], None)
            .unwrap();
        let sk = net.skeleton();
        for i in 0..3 {
            for j in 0..3 {
                assert_eq!(sk.has_edge(i, j), sk.has_edge(j, i));
                if sk.has_edge(i, j) {
                    assert!(net.weight(i, j) > 0.0 && net.weight(j, i) > 0.0);
                }
            }
        }
        assert!(sk.has_edge(0, 1) && sk.has_edge(0, 2) && sk.has_edge(2, 2));
        assert!(sk.has_odd_cycle());
    }

    #[test]
    fn sparse_and_dense_agree() {
        let n = DENSE_LIMIT + 3;
        let e: Vec<_> = (0..n).map(|i| (i, (i + 1) % n, 1.0 + i as f64)).collect();
        let net = Network::<f64>::from_entries(n, e, None).unwrap();
        assert!(!net.is_dense());
        assert_eq!(net.weight(5, 6), 6.0);
        assert_eq!(net.weight(6, 5), 0.0);
        assert_eq!(net.max_degree(), 2);
        assert!(net.is_irreducible());
    }
}
