//! Brute-force enumeration of `pi_{F->G}` and of every observable.
//!
//! Enumeration assigns motif nodes in index order, pruning as soon as a
//! partial product vanishes. The leading coordinate is split across rayon
//! workers; partial results are reduced in index order so the output does
//! not depend on scheduling.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::motif::Motif;
use crate::network::Network;
use crate::observables::{MaccMatrix, ProfileGrid};
use crate::scalar::{pow_weight, Real};

pub const DEFAULT_ENUMERATION_CAP: f64 = 1e8;

#[derive(Clone, Copy, Debug)]
pub struct ExactOptions {
    /// Largest admissible `n^k`.
    pub cap: f64,
}

impl Default for ExactOptions {
    fn default() -> Self {
        Self { cap: DEFAULT_ENUMERATION_CAP }
    }
}

struct Plan<T> {
    k: usize,
    /// Factors `(i, j, w)` whose later endpoint is the given position.
    closing: Vec<Vec<(usize, usize, T)>>,
    /// Earlier node whose adjacency list supplies candidates, and whether
    /// the edge points from it (`true`) or into it (`false`).
    anchor: Vec<Option<(usize, bool)>>,
}

impl<T: Real> Plan<T> {
    fn new(motif: &Motif<T>) -> Self {
        let k = motif.k();
        let mut closing = vec![Vec::new(); k];
        let mut anchor = vec![None; k];
        for &(i, j, w) in motif.edges() {
            let p = i.max(j);
            closing[p].push((i, j, w));
            if i != j && anchor[p].is_none() {
                anchor[p] = Some(if i < j { (i, true) } else { (j, false) });
            }
        }
        Self { k, closing, anchor }
    }
}

fn check_cap(n: usize, k: usize, cap: f64) -> Result<()> {
    let required = (n as f64).powi(k as i32);
    if required > cap {
        return Err(Error::CapExceeded { required, cap });
    }
    Ok(())
}

/// Calls `visit(acc, x, w)` for every vertex map `x` with positive weight
/// `w = prod A(x_i,x_j)^{A_F(i,j)} prod alpha(x_i)`.
pub(crate) fn enumerate<T, A, I, V, M>(
    motif: &Motif<T>,
    net: &Network<T>,
    opts: ExactOptions,
    init: I,
    visit: V,
    merge: M,
) -> Result<A>
where
    T: Real,
    A: Send,
    I: Fn() -> A + Sync,
    V: Fn(&mut A, &[usize], T) + Sync,
    M: Fn(A, A) -> A,
{
    check_cap(net.n(), motif.k(), opts.cap)?;
    let plan = Plan::new(motif);
    let parts: Vec<A> = (0..net.n())
        .into_par_iter()
        .map(|root| {
            let mut acc = init();
            let mut x = vec![0usize; plan.k];
            x[0] = root;
            if let Some(w) = closing_weight(&plan, net, &x, 0, net.alpha()[root]) {
                descend(&plan, net, &mut x, 1, w, &mut acc, &visit);
            }
            acc
        })
        .collect();
    let mut it = parts.into_iter();
    let first = it.next().unwrap_or_else(&init);
    Ok(it.fold(first, merge))
}

#[inline]
fn closing_weight<T: Real>(plan: &Plan<T>, net: &Network<T>, x: &[usize], p: usize, mut w: T) -> Option<T> {
    for &(i, j, e) in &plan.closing[p] {
        let a = net.weight(x[i], x[j]);
        if a == T::zero() {
            return None;
        }
        w *= pow_weight(a, e);
    }
    (w > T::zero()).then_some(w)
}

fn descend<T, A, V>(plan: &Plan<T>, net: &Network<T>, x: &mut [usize], p: usize, w: T, acc: &mut A, visit: &V)
where
    T: Real,
    V: Fn(&mut A, &[usize], T),
{
    if p == plan.k {
        visit(acc, x, w);
        return;
    }
    let alpha = net.alpha();
    match plan.anchor[p] {
        Some((q, forward)) => {
            let list = if forward { net.out_neighbors(x[q]) } else { net.in_neighbors(x[q]) };
            for &(b, _) in list {
                x[p] = b;
                if let Some(w2) = closing_weight(plan, net, x, p, w * alpha[b]) {
                    descend(plan, net, x, p + 1, w2, acc, visit);
                }
            }
        }
        None => {
            for b in 0..net.n() {
                x[p] = b;
                if let Some(w2) = closing_weight(plan, net, x, p, w * alpha[b]) {
                    descend(plan, net, x, p + 1, w2, acc, visit);
                }
            }
        }
    }
}

/// `prod A(x_i,x_j)^{A_H(i,j)}` for a vertex map `x`.
#[inline]
pub fn motif_product<T: Real>(motif: &Motif<T>, net: &Network<T>, x: &[usize]) -> T {
    let mut w = T::one();
    for &(i, j, e) in motif.edges() {
        w *= pow_weight(net.weight(x[i], x[j]), e);
    }
    w
}

/// Homomorphism density `t(F,G)`.
pub fn hom_density<T: Real>(motif: &Motif<T>, net: &Network<T>) -> Result<T> {
    hom_density_with(motif, net, ExactOptions::default())
}

pub fn hom_density_with<T: Real>(motif: &Motif<T>, net: &Network<T>, opts: ExactOptions) -> Result<T> {
    enumerate(motif, net, opts, T::zero, |acc, _, w| *acc += w, |a, b| a + b)
}

/// Normalized `pi_{F->G}` over the vertex maps with positive mass, sorted
/// lexicographically.
#[derive(Clone, Debug)]
pub struct ExactDistribution<T: Real> {
    k: usize,
    n: usize,
    states: Vec<usize>,
    probs: Vec<T>,
    z: T,
}

impl<T: Real> ExactDistribution<T> {
    /// Normalizer `t(F,G)`.
    pub fn z(&self) -> T {
        self.z
    }

    pub fn len(&self) -> usize {
        self.probs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probs.is_empty()
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn state(&self, idx: usize) -> &[usize] {
        &self.states[idx * self.k..(idx + 1) * self.k]
    }

    pub fn probs(&self) -> &[T] {
        &self.probs
    }

    pub fn iter(&self) -> impl Iterator<Item = (&[usize], T)> + '_ {
        self.states.chunks(self.k).zip(self.probs.iter().copied())
    }

    /// Position of `x` in the state list, if it has positive mass.
    pub fn index_of(&self, x: &[usize]) -> Option<usize> {
        let (mut lo, mut hi) = (0, self.len());
        while lo < hi {
            let mid = (lo + hi) / 2;
            match self.state(mid).cmp(x) {
                std::cmp::Ordering::Less => lo = mid + 1,
                std::cmp::Ordering::Greater => hi = mid,
                std::cmp::Ordering::Equal => return Some(mid),
            }
        }
        None
    }

    pub fn prob(&self, x: &[usize]) -> T {
        self.index_of(x).map_or(T::zero(), |i| self.probs[i])
    }

    /// Distribution of coordinate `i`.
    pub fn marginal(&self, i: usize) -> Vec<T> {
        let mut m = vec![T::zero(); self.n];
        for (x, p) in self.iter() {
            m[x[i]] += p;
        }
        m
    }

    /// Index of the least likely state, a convenient worst start.
    pub fn argmin(&self) -> usize {
        let mut best = 0;
        for (i, &p) in self.probs.iter().enumerate() {
            if p < self.probs[best] {
                best = i;
            }
        }
        best
    }
}

/// Full distribution `pi_{F->G}`.
pub fn exact_pi<T: Real>(motif: &Motif<T>, net: &Network<T>) -> Result<ExactDistribution<T>> {
    exact_pi_with(motif, net, ExactOptions::default())
}

pub fn exact_pi_with<T: Real>(motif: &Motif<T>, net: &Network<T>, opts: ExactOptions) -> Result<ExactDistribution<T>> {
    let (states, weights) = enumerate(
        motif,
        net,
        opts,
        || (Vec::new(), Vec::new()),
        |acc: &mut (Vec<usize>, Vec<T>), x, w| {
            acc.0.extend_from_slice(x);
            acc.1.push(w);
        },
        |mut a, b| {
            a.0.extend(b.0);
            a.1.extend(b.1);
            a
        },
    )?;
    let z: T = weights.iter().copied().sum();
    if z == T::zero() {
        return Err(Error::NoHomomorphism);
    }
    let probs = weights.into_iter().map(|w| w / z).collect();
    Ok(ExactDistribution { k: motif.k(), n: net.n(), states, probs, z })
}

fn check_same_k<T: Real>(h: &Motif<T>, f: &Motif<T>) -> Result<()> {
    if h.k() != f.k() {
        return Err(Error::DimensionMismatch(format!(
            "motif H has {} nodes but F has {}",
            h.k(),
            f.k()
        )));
    }
    Ok(())
}

/// `t(H,G|F) = t(H+F,G) / t(F,G)`, zero when `t(F,G) = 0`.
pub fn exact_conditional_density<T: Real>(h: &Motif<T>, f: &Motif<T>, net: &Network<T>) -> Result<T> {
    exact_conditional_density_with(h, f, net, ExactOptions::default())
}

pub fn exact_conditional_density_with<T: Real>(
    h: &Motif<T>,
    f: &Motif<T>,
    net: &Network<T>,
    opts: ExactOptions,
) -> Result<T> {
    check_same_k(h, f)?;
    let (z, zh) = enumerate(
        f,
        net,
        opts,
        || (T::zero(), T::zero()),
        |acc: &mut (T, T), x, w| {
            acc.0 += w;
            acc.1 += w * motif_product(h, net, x);
        },
        |a, b| (a.0 + b.0, a.1 + b.1),
    )?;
    Ok(if z == T::zero() { T::zero() } else { zh / z })
}

/// Smallest `A(x_i,x_j)^{A_H(i,j)}` over the edges of `H`; infinity when
/// `H` has no edges.
#[inline]
pub fn motif_min_factor<T: Real>(h: &Motif<T>, net: &Network<T>, x: &[usize]) -> T {
    let mut m = T::infinity();
    for &(i, j, e) in h.edges() {
        m = m.min(pow_weight(net.weight(x[i], x[j]), e));
    }
    m
}

/// CHD profile `t -> P_{F->G}(min A(x_i,x_j)^{A_H(i,j)} >= t)` on `ts`.
pub fn exact_chd_profile<T: Real>(h: &Motif<T>, f: &Motif<T>, net: &Network<T>, ts: &[T]) -> Result<ProfileGrid<T>> {
    exact_chd_profile_with(h, f, net, ts, ExactOptions::default())
}

pub fn exact_chd_profile_with<T: Real>(
    h: &Motif<T>,
    f: &Motif<T>,
    net: &Network<T>,
    ts: &[T],
    opts: ExactOptions,
) -> Result<ProfileGrid<T>> {
    check_same_k(h, f)?;
    let g = ts.len();
    let (z, mass) = enumerate(
        f,
        net,
        opts,
        || (T::zero(), vec![T::zero(); g]),
        |acc: &mut (T, Vec<T>), x, w| {
            acc.0 += w;
            let m = motif_min_factor(h, net, x);
            for (slot, &t) in acc.1.iter_mut().zip(ts) {
                if m >= t {
                    *slot += w;
                }
            }
        },
        |mut a, b| {
            a.0 += b.0;
            a.1.iter_mut().zip(b.1).for_each(|(s, v)| *s += v);
            a
        },
    )?;
    let values = if z == T::zero() {
        vec![T::zero(); g]
    } else {
        mass.into_iter().map(|v| v / z).collect()
    };
    ProfileGrid::new(ts.to_vec(), values)
}

/// MACC: entry `(i,j)` is `t(F + 1_{(i,j)}, G) / t(F,G)` when
/// `A_F(i,j) = 0` and 1 otherwise; the zero matrix when `t(F,G) = 0`.
pub fn exact_macc<T: Real>(f: &Motif<T>, net: &Network<T>) -> Result<MaccMatrix<T>> {
    exact_macc_with(f, net, ExactOptions::default())
}

pub fn exact_macc_with<T: Real>(f: &Motif<T>, net: &Network<T>, opts: ExactOptions) -> Result<MaccMatrix<T>> {
    let k = f.k();
    let (z, mass) = enumerate(
        f,
        net,
        opts,
        || (T::zero(), vec![T::zero(); k * k]),
        |acc: &mut (T, Vec<T>), x, w| {
            acc.0 += w;
            for i in 0..k {
                for j in 0..k {
                    if f.weight(i, j) == T::zero() {
                        acc.1[i * k + j] += w * net.weight(x[i], x[j]);
                    }
                }
            }
        },
        |mut a, b| {
            a.0 += b.0;
            a.1.iter_mut().zip(b.1).for_each(|(s, v)| *s += v);
            a
        },
    )?;
    let mut values = vec![T::zero(); k * k];
    if z > T::zero() {
        for i in 0..k {
            for j in 0..k {
                values[i * k + j] = if f.weight(i, j) > T::zero() { T::one() } else { mass[i * k + j] / z };
            }
        }
    }
    Ok(MaccMatrix::new(k, values))
}

/// Motif transform: `A^F(x,y) = P_{F->G}(x(first) = x, x(last) = y)`.
pub fn exact_motif_transform<T: Real>(f: &Motif<T>, net: &Network<T>) -> Result<Network<T>> {
    let k = f.k();
    exact_weighted_transform(&Motif::zero(k)?, f, net)
}

/// Joint law of the endpoints under `pi_{F->G}` reweighted by
/// `prod A^{A_H}`; this is the motif transform by `H + F`.
pub fn exact_weighted_transform<T: Real>(h: &Motif<T>, f: &Motif<T>, net: &Network<T>) -> Result<Network<T>> {
    exact_weighted_transform_with(h, f, net, ExactOptions::default())
}

pub fn exact_weighted_transform_with<T: Real>(
    h: &Motif<T>,
    f: &Motif<T>,
    net: &Network<T>,
    opts: ExactOptions,
) -> Result<Network<T>> {
    check_same_k(h, f)?;
    let k = f.k();
    if k < 2 {
        return Err(Error::InvalidMotif("motif transform needs k >= 2".into()));
    }
    let n = net.n();
    check_cap(n, 2, opts.cap)?;
    let mass = enumerate(
        f,
        net,
        opts,
        || vec![T::zero(); n * n],
        |acc: &mut Vec<T>, x, w| {
            acc[x[0] * n + x[k - 1]] += w * motif_product(h, net, x);
        },
        |mut a, b| {
            a.iter_mut().zip(b).for_each(|(s, v)| *s += v);
            a
        },
    )?;
    let total: T = mass.iter().copied().sum();
    if total == T::zero() {
        return Err(Error::NoHomomorphism);
    }
    net.with_weights(mass.into_iter().map(|v| v / total).collect())
}

/// Total variation distance `1/2 sum |p - q|` over a common index set.
pub fn tv_distance<T: Real>(p: &[T], q: &[T]) -> Result<T> {
    if p.len() != q.len() {
        return Err(Error::DimensionMismatch(format!(
            "distributions have {} and {} entries",
            p.len(),
            q.len()
        )));
    }
    let s: T = p.iter().zip(q).map(|(&a, &b)| (a - b).abs()).sum();
    Ok(s / T::lit(2.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::observables::ProfileGrid;

    type M = Motif<f64>;
    type N = Network<f64>;

    fn complete(n: usize) -> N {
        let mut a = vec![1.0; n * n];
        for i in 0..n {
            a[i * n + i] = 0.0;
        }
        N::from_dense(n, a, None).unwrap()
    }

    /// Naive oracle over all `n^k` maps, no pruning.
    fn naive_density(f: &M, net: &N) -> f64 {
        let (n, k) = (net.n(), f.k());
        let mut total = 0.0;
        let mut x = vec![0usize; k];
        for code in 0..n.pow(k as u32) {
            let mut c = code;
            for xi in x.iter_mut() {
                *xi = c % n;
                c /= n;
            }
            let mut w: f64 = x.iter().map(|&v| net.alpha()[v]).product();
            for i in 0..k {
                for j in 0..k {
                    let e = f.weight(i, j);
                    if e > 0.0 {
                        w *= net.weight(x[i], x[j]).powf(e);
                    }
                }
            }
            total += w;
        }
        total
    }

    fn torus(m: usize) -> N {
        let mut e = Vec::new();
        for r in 0..m {
            for c in 0..m {
                let u = r * m + c;
                for (dr, dc) in [(1, 0), (m - 1, 0), (0, 1), (0, m - 1)] {
                    e.push((u, ((r + dr) % m) * m + (c + dc) % m, 1.0));
                }
            }
        }
        N::from_entries(m * m, e, None).unwrap()
    }

    #[test]
    fn densities() {
        let net = N::from_dense(3, vec![0.2, 0.5, 0.0, 0.1, 0.7, 1.0, 0.3, 0.0, 0.9], Some(vec![0.2, 0.3, 0.5]))
            .unwrap();
        assert!((hom_density(&M::singleton(), &net).unwrap() - 1.0).abs() < 1e-15);
        let loops = N::from_dense(3, vec![0.4, 1.0, 0.0, 0.0, 0.4, 1.0, 1.0, 0.0, 0.4], None).unwrap();
        assert!((hom_density(&M::self_loop(), &loops).unwrap() - 0.4).abs() < 1e-15);
        assert!((hom_density(&M::path(2).unwrap(), &complete(3)).unwrap() - 2.0 / 3.0).abs() < 1e-15);
        for f in [
            M::path(3).unwrap(),
            M::cycle(3).unwrap(),
            M::star(3).unwrap(),
            M::self_loop(),
            M::from_dense(2, vec![0.5, 2.0, 1.0, 0.0]).unwrap(),
        ] {
            let a = hom_density(&f, &net).unwrap();
            let b = naive_density(&f, &net);
            assert!((a - b).abs() < 1e-14, "{a} vs {b}");
        }
    }

    #[test]
    fn cap_is_enforced() {
        let opts = ExactOptions { cap: 10.0 };
        assert!(matches!(
            hom_density_with(&M::path(3).unwrap(), &complete(3), opts),
            Err(Error::CapExceeded { .. })
        ));
    }

    #[test]
    fn pi_edge_into_k3_is_uniform() {
        let pi = exact_pi(&M::path(2).unwrap(), &complete(3)).unwrap();
        assert_eq!(pi.len(), 6);
        for (x, p) in pi.iter() {
            assert_ne!(x[0], x[1]);
            assert!((p - 1.0 / 6.0).abs() < 1e-15);
        }
        let total: f64 = pi.probs().iter().sum();
        assert!((total - 1.0).abs() < 1e-12);
    }

    #[test]
    fn pi_weighted_pair() {
        let w = 0.3;
        let net = N::from_dense(2, vec![0.0, 2.0 * w, w, 0.0], None).unwrap();
        let pi = exact_pi(&M::path(2).unwrap(), &net).unwrap();
        assert!((pi.prob(&[0, 1]) - 2.0 / 3.0).abs() < 1e-15);
        assert!((pi.prob(&[1, 0]) - 1.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn pi_path_into_path_graph() {
        let net = N::from_dense(3, vec![0.0, 1.0, 0.0, 1.0, 0.0, 1.0, 0.0, 1.0, 0.0], None).unwrap();
        let pi = exact_pi(&M::path(3).unwrap(), &net).unwrap();
        // walks of length 2 in the path 0-1-2: (0,1,0),(0,1,2),(1,0,1),(1,2,1),(2,1,0),(2,1,2)
        assert_eq!(pi.len(), 6);
        assert!((pi.z() - 6.0 / 27.0).abs() < 1e-15);
        assert!((pi.prob(&[1, 0, 1]) - 1.0 / 6.0).abs() < 1e-15);
        assert_eq!(pi.prob(&[0, 0, 0]), 0.0);
    }

    #[test]
    fn no_homomorphism() {
        let mut c4 = vec![0.0; 16];
        for i in 0..4 {
            c4[i * 4 + (i + 1) % 4] = 1.0;
            c4[((i + 1) % 4) * 4 + i] = 1.0;
        }
        let c4 = N::from_dense(4, c4, None).unwrap();
        assert!(matches!(exact_pi(&M::cycle(3).unwrap(), &c4), Err(Error::NoHomomorphism)));
        let h = M::arm_ends_edge(1, 1);
        let tri = M::cycle(3).unwrap();
        assert_eq!(exact_conditional_density(&h, &tri, &c4).unwrap(), 0.0);
        let macc = exact_macc(&tri, &c4).unwrap();
        assert!(macc.values().iter().all(|&v| v == 0.0));
    }

    #[test]
    fn conditional_densities() {
        let k3 = complete(3);
        let h = M::from_edges(3, &[(1, 2)]).unwrap();
        assert!((exact_conditional_density(&h, &M::wedge(), &k3).unwrap() - 0.5).abs() < 1e-15);
        let h_sym = M::from_edges(3, &[(1, 2)]).unwrap();
        let wedge_f = M::two_armed_path(1, 1);
        let c = exact_conditional_density(&h_sym, &wedge_f, &k3).unwrap();
        assert!((c - 0.5).abs() < 1e-15);
        assert!(
            (exact_conditional_density(&M::arm_ends_edge(3, 0), &M::two_armed_path(3, 0), &torus(6)).unwrap()
                - 9.0 / 16.0)
                .abs()
                < 1e-12
        );
    }

    #[test]
    fn conditional_density_matches_ratio() {
        let net = N::from_dense(3, vec![0.2, 0.5, 0.0, 0.1, 0.7, 1.0, 0.3, 0.6, 0.9], Some(vec![0.2, 0.3, 0.5]))
            .unwrap();
        let f = M::path(3).unwrap();
        let h = M::from_edges(3, &[(2, 0)]).unwrap();
        let ratio = hom_density(&h.plus(&f).unwrap(), &net).unwrap() / hom_density(&f, &net).unwrap();
        assert!((exact_conditional_density(&h, &f, &net).unwrap() - ratio).abs() < 1e-14);
    }

    #[test]
    fn profiles() {
        let net = N::from_dense(2, vec![0.2, 1.0, 1.0, 0.8], None).unwrap();
        let ts: Vec<f64> = (0..=10).map(|i| i as f64 / 10.0).collect();
        let p = exact_chd_profile(&M::self_loop(), &M::singleton(), &net, &ts).unwrap();
        for (&t, &v) in ts.iter().zip(p.values()) {
            let expect = 0.5 * ((0.2 >= t) as u8 as f64) + 0.5 * ((0.8 >= t) as u8 as f64);
            assert!((v - expect).abs() < 1e-15);
        }
        let p = exact_chd_profile(&M::self_loop(), &M::self_loop(), &net, &[0.5]).unwrap();
        assert!((p.values()[0] - 0.8).abs() < 1e-15);
        let k3 = complete(3);
        let p = exact_chd_profile(&M::from_edges(3, &[(1, 2)]).unwrap(), &M::wedge(), &k3, &ts).unwrap();
        assert_eq!(p.values()[0], 1.0);
        for &v in &p.values()[1..] {
            assert!((v - 0.5).abs() < 1e-15);
        }
        assert!(ProfileGrid::new(ts.clone(), p.values().to_vec()).is_ok());
    }

    #[test]
    fn macc_on_k3() {
        let m = exact_macc(&M::path(3).unwrap(), &complete(3)).unwrap();
        // homomorphisms need not be injective, so the wedge ends coincide half the time
        let expected = [0.0, 1.0, 0.5, 1.0, 0.0, 1.0, 0.5, 1.0, 0.0];
        for (a, b) in m.values().iter().zip(expected) {
            assert!((a - b).abs() < 1e-15, "{:?}", m.values());
        }
    }

    #[test]
    fn transforms() {
        let net = N::from_dense(3, vec![0.0, 0.5, 1.0, 0.5, 0.0, 0.3, 1.0, 0.3, 0.2], Some(vec![0.2, 0.3, 0.5]))
            .unwrap();
        let t = exact_motif_transform(&M::path(2).unwrap(), &net).unwrap();
        let a = net.alpha();
        let z: f64 = (0..3).flat_map(|x| (0..3).map(move |y| (x, y))).map(|(x, y)| a[x] * net.weight(x, y) * a[y]).sum();
        let mut total = 0.0;
        for x in 0..3 {
            for y in 0..3 {
                let e = a[x] * net.weight(x, y) * a[y] / z;
                assert!((t.weight(x, y) - e).abs() < 1e-15);
                total += t.weight(x, y);
            }
        }
        assert!((total - 1.0).abs() < 1e-12);
        assert_eq!(t.alpha(), net.alpha());
        assert!(exact_motif_transform(&M::singleton(), &net).is_err());
    }

    #[test]
    fn tv() {
        assert_eq!(tv_distance(&[0.5, 0.5], &[0.5, 0.5]).unwrap(), 0.0);
        assert_eq!(tv_distance(&[1.0, 0.0], &[0.0, 1.0]).unwrap(), 1.0);
        assert_eq!(tv_distance(&[0.5, 0.5], &[1.0, 0.0]).unwrap(), 0.5);
        assert!(tv_distance(&[1.0], &[0.5, 0.5]).is_err());
    }

    #[test]
    fn colorings_of_k_q_are_uniform() {
        let pi = exact_pi(&M::cycle(3).unwrap(), &complete(4)).unwrap();
        assert_eq!(pi.len(), 24);
        for (_, p) in pi.iter() {
            assert!((p - 1.0 / 24.0).abs() < 1e-15);
        }
    }

    #[test]
    fn enumeration_is_deterministic() {
        let net = N::from_dense(4, (0..16).map(|i| ((i * 7) % 5) as f64 / 5.0).collect(), None).unwrap();
        let f = M::star(3).unwrap();
        let a = hom_density(&f, &net).unwrap();
        for _ in 0..5 {
            assert_eq!(hom_density(&f, &net).unwrap().to_bits(), a.to_bits());
        }
    }
}
