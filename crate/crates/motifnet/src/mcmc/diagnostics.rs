//! Mixing and concentration diagnostics on enumerable instances.

use std::collections::HashMap;

use rayon::prelude::*;
use serde::Serialize;

use super::{glauber_conditional, pivot_tables, replica_rng, ChainKind, GlauberChain, PivotChain, PivotTables};
use crate::error::{Error, Result};
use crate::exact::{exact_pi, tv_distance};
use crate::linalg::symmetric_eigen;
use crate::motif::Motif;
use crate::network::Network;
use crate::scalar::Real;

/// One-step Glauber transition probability `P(x, y)`.
pub fn glauber_transition_prob<T: Real>(motif: &Motif<T>, net: &Network<T>, x: &[usize], y: &[usize]) -> T {
    let k = motif.k();
    let inv_k = T::one() / T::from_usize(k).unwrap();
    let diff: Vec<usize> = (0..k).filter(|&i| x[i] != y[i]).collect();
    let prob_of = |i: usize, b: usize| {
        glauber_conditional(motif, net, x, i).into_iter().find(|&(c, _)| c == b).map_or(T::zero(), |(_, p)| p)
    };
    match diff.as_slice() {
        [] => (0..k).map(|i| prob_of(i, x[i])).sum::<T>() * inv_k,
        [i] => prob_of(*i, y[*i]) * inv_k,
        _ => T::zero(),
    }
}

#[derive(Clone, Debug)]
pub struct MixingOptions {
    pub horizon: usize,
    pub replicas: usize,
    /// Replicas are split into this many batches; the spread of per-batch
    /// curves gives the standard errors.
    pub batches: usize,
    pub seed: u64,
    /// Common start of all replicas; the least likely state when `None`.
    pub start: Option<Vec<usize>>,
}

impl MixingOptions {
    pub fn new(horizon: usize, replicas: usize, seed: u64) -> Self {
        Self { horizon, replicas, batches: 20, seed, start: None }
    }
}

/// TV distance to stationarity of the empirical `t`-step law over replicas.
#[derive(Clone, Debug, Serialize)]
pub struct MixingCurve {
    pub start: Vec<usize>,
    pub replicas: usize,
    pub tv: Vec<f64>,
    pub tv_se: Vec<f64>,
    /// Pivot only: the same for the root coordinate against its marginal.
    pub marginal_tv: Option<Vec<f64>>,
    pub marginal_tv_se: Option<Vec<f64>>,
}

struct BatchCounts {
    full: Vec<u32>,
    root: Vec<u32>,
    replicas: usize,
}

/// Runs `replicas` independent chains from a common start for `horizon`
/// steps and compares their empirical laws with the exact stationary law.
pub fn empirical_mixing<T: Real>(
    motif: &Motif<T>,
    net: &Network<T>,
    kind: ChainKind,
    opts: &MixingOptions,
) -> Result<MixingCurve> {
    if opts.replicas == 0 || opts.batches == 0 || opts.batches > opts.replicas {
        return Err(Error::InvalidArgument("need 1 <= batches <= replicas".into()));
    }
    let pi = exact_pi(motif, net)?;
    let s = pi.len();
    let n = net.n();
    let h = opts.horizon;
    let start = match &opts.start {
        Some(x) => {
            if pi.index_of(x).is_none() {
                return Err(Error::InvalidArgument("start state has zero mass".into()));
            }
            x.clone()
        }
        None => pi.state(pi.argmin()).to_vec(),
    };
    let tables = match kind {
        ChainKind::Pivot => Some(pivot_tables(motif, net)?),
        ChainKind::Glauber => None,
    };
    let glauber_template = match kind {
        ChainKind::Glauber => Some(GlauberChain::new(motif, net, start.clone())?),
        ChainKind::Pivot => None,
    };
    let per_batch = opts.replicas / opts.batches;
    let extra = opts.replicas % opts.batches;
    let batches: Vec<BatchCounts> = (0..opts.batches)
        .into_par_iter()
        .map(|b| {
            let lo = b * per_batch + b.min(extra);
            let hi = lo + per_batch + usize::from(b < extra);
            let mut full = vec![0u32; (h + 1) * s];
            let mut root = vec![0u32; (h + 1) * n];
            let mut record = |t: usize, x: &[usize]| {
                full[t * s + pi.index_of(x).expect("chain left the support")] += 1;
                root[t * n + x[0]] += 1;
            };
            for r in lo..hi {
                let mut rng = replica_rng(opts.seed, r as u64);
                match (&glauber_template, &tables) {
                    (Some(template), _) => {
                        let mut chain = template.clone();
                        record(0, chain.state());
                        for t in 1..=h {
                            chain.step(&mut rng);
                            record(t, chain.state());
                        }
                    }
                    (None, Some(tab)) => {
                        let mut chain = PivotChain::new(motif, net, tab, start.clone()).expect("valid start");
                        record(0, chain.state());
                        for t in 1..=h {
                            chain.step(&mut rng);
                            record(t, chain.state());
                        }
                    }
                    (None, None) => unreachable!(),
                }
            }
            BatchCounts { full, root, replicas: hi - lo }
        })
        .collect();
    let target: Vec<f64> = pi.probs().iter().map(|p| p.to_f64_lossy()).collect();
    let root_target: Vec<f64> = pi.marginal(0).iter().map(|p| p.to_f64_lossy()).collect();
    let (tv, tv_se) = curve(&batches, h, s, &target, |b| &b.full);
    let (marginal_tv, marginal_tv_se) = match kind {
        ChainKind::Pivot => {
            let (m, se) = curve(&batches, h, n, &root_target, |b| &b.root);
            (Some(m), Some(se))
        }
        ChainKind::Glauber => (None, None),
    };
    Ok(MixingCurve { start, replicas: opts.replicas, tv, tv_se, marginal_tv, marginal_tv_se })
}

fn curve<F>(batches: &[BatchCounts], h: usize, s: usize, target: &[f64], pick: F) -> (Vec<f64>, Vec<f64>)
where
    F: Fn(&BatchCounts) -> &Vec<u32>,
{
    let total: usize = batches.iter().map(|b| b.replicas).sum();
    let nb = batches.len() as f64;
    let mut tv = Vec::with_capacity(h + 1);
    let mut se = Vec::with_capacity(h + 1);
    for t in 0..=h {
        let mut pooled = vec![0.0; s];
        let mut batch_tvs = Vec::with_capacity(batches.len());
        for b in batches {
            let counts = &pick(b)[t * s..(t + 1) * s];
            let emp: Vec<f64> = counts.iter().map(|&c| c as f64 / b.replicas as f64).collect();
            batch_tvs.push(tv_distance(&emp, target).unwrap());
            for (p, &c) in pooled.iter_mut().zip(counts) {
                *p += c as f64;
            }
        }
        pooled.iter_mut().for_each(|p| *p /= total as f64);
        tv.push(tv_distance(&pooled, target).unwrap());
        let mean = batch_tvs.iter().sum::<f64>() / nb;
        let var = if batches.len() > 1 {
            batch_tvs.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (nb - 1.0)
        } else {
            0.0
        };
        se.push((var / nb).sqrt());
    }
    (tv, se)
}

/// Row-major Metropolis kernel of the pivot root walk.
pub fn pivot_root_kernel<T: Real>(tables: &PivotTables<T>) -> Vec<T> {
    let n = tables.n();
    let mut p = vec![T::zero(); n * n];
    for a in 0..n {
        let (cols, probs) = tables.psi_row(a);
        let mut off = T::zero();
        for (&b, &q) in cols.iter().zip(probs) {
            if b != a {
                let v = q * tables.acceptance(a, b);
                p[a * n + b] = v;
                off += v;
            }
        }
        p[a * n + a] = T::one() - off;
    }
    p
}

/// Smallest `t <= max_t` with `max_x TV(P^t(x, .), pi) <= eps`.
pub fn exact_mixing_time(kernel: &[f64], stationary: &[f64], eps: f64, max_t: usize) -> Option<usize> {
    let n = stationary.len();
    let mut power: Vec<f64> = (0..n * n).map(|i| if i / n == i % n { 1.0 } else { 0.0 }).collect();
    for t in 0..=max_t {
        let worst = (0..n)
            .map(|x| tv_distance(&power[x * n..(x + 1) * n], stationary).unwrap())
            .fold(0.0, f64::max);
        if worst <= eps {
            return Some(t);
        }
        power = crate::linalg::matmul(&power, kernel, n);
    }
    None
}

#[derive(Clone, Debug, Serialize)]
pub struct SpectralGapBounds {
    pub eigenvalues: Vec<f64>,
    pub lambda_star: f64,
    pub eps: f64,
    pub t_mix_lower: f64,
    pub t_mix_upper: f64,
    /// Cubic bound for simple graphs with degree-proportional node weights
    /// and at least 13 nodes.
    pub cubic_upper: Option<f64>,
}

/// Eigenvalue bounds on the mixing time of the pivot root walk of the
/// singleton motif, whose stationary law is `alpha`.
pub fn spectral_gap_bounds<T: Real>(net: &Network<T>, eps: f64) -> Result<SpectralGapBounds> {
    if !net.is_irreducible() {
        return Err(Error::Reducible);
    }
    let tables = pivot_tables(&Motif::singleton(), net)?;
    let mut bounds = spectral_gap_bounds_for(&tables, eps)?;
    if is_simple_graph(net) && alpha_proportional_to_degree(net) {
        bounds.cubic_upper = cubic_meeting_bound(net.n(), eps);
    }
    Ok(bounds)
}

/// As [`spectral_gap_bounds`] for the root walk of any pivot tables.
pub fn spectral_gap_bounds_for<T: Real>(tables: &PivotTables<T>, eps: f64) -> Result<SpectralGapBounds> {
    if !(eps > 0.0 && eps < 0.5) {
        return Err(Error::InvalidArgument("eps must lie in (0, 1/2)".into()));
    }
    let n = tables.n();
    let pi: Vec<f64> = tables.pi1().iter().map(|p| p.to_f64_lossy()).collect();
    let support: Vec<usize> = (0..n).filter(|&a| pi[a] > 0.0).collect();
    let m = support.len();
    let p = pivot_root_kernel(tables);
    let mut sym = vec![0.0; m * m];
    for (r, &a) in support.iter().enumerate() {
        for (c, &b) in support.iter().enumerate() {
            sym[r * m + c] = pi[a].sqrt() * p[a * n + b].to_f64_lossy() / pi[b].sqrt();
        }
    }
    let eig = symmetric_eigen(&sym, m)?;
    let lambda_star = eig.values.iter().skip(1).map(|v| v.abs()).fold(0.0, f64::max);
    if lambda_star >= 1.0 - 1e-12 {
        return Err(Error::Numerical("root walk is periodic or reducible, spectral gap is 0".into()));
    }
    let gap = 1.0 - lambda_star;
    let pi_min = support.iter().map(|&a| pi[a]).fold(f64::INFINITY, f64::min);
    Ok(SpectralGapBounds {
        eigenvalues: eig.values,
        lambda_star,
        eps,
        t_mix_lower: lambda_star * (1.0 / (2.0 * eps)).ln() / gap,
        t_mix_upper: (1.0 / (pi_min * eps)).ln() / gap,
        cubic_upper: None,
    })
}

fn is_simple_graph<T: Real>(net: &Network<T>) -> bool {
    net.is_symmetric() && net.entries().all(|(i, j, w)| i != j && w == T::one())
}

fn alpha_proportional_to_degree<T: Real>(net: &Network<T>) -> bool {
    let edges = net.nnz() as f64;
    (0..net.n()).all(|i| {
        let d = net.out_neighbors(i).len() as f64;
        (net.alpha()[i].to_f64_lossy() - d / edges).abs() < 1e-9
    })
}

/// `log2(1/eps) (4/27 n^3 + 4/3 n^2 + 2/9 n - 296/27)` for `n >= 13`.
pub fn cubic_meeting_bound(n: usize, eps: f64) -> Option<f64> {
    if n < 13 {
        return None;
    }
    let n = n as f64;
    let poly = 4.0 / 27.0 * n.powi(3) + 4.0 / 3.0 * n * n + 2.0 / 9.0 * n - 296.0 / 27.0;
    Some((1.0 / eps).log2() * poly)
}

/// Glauber step count after which a proper coloring chain into `K_q` is
/// within `eps` of uniform, `ceil((q - d)/(q - 2d) k ln(k/eps))`; `None`
/// unless `q > 2d`.
pub fn coloring_mixing_steps(q: usize, max_degree: usize, k: usize, eps: f64) -> Option<u64> {
    if q <= 2 * max_degree {
        return None;
    }
    let (q, d, k) = (q as f64, max_degree as f64, k as f64);
    Some(((q - d) / (q - 2.0 * d) * k * (k / eps).ln()).ceil() as u64)
}

#[derive(Clone, Debug, Serialize)]
pub struct ConcentrationReport {
    pub samples: usize,
    pub mean: f64,
    pub t_mix_quarter: f64,
    pub failure_probability: f64,
    pub delta: f64,
    pub lower: f64,
    pub upper: f64,
}

impl ConcentrationReport {
    /// `2 exp(-2 delta^2 N / (9 t_mix(1/4)))`.
    pub fn failure_bound(&self, delta: f64) -> f64 {
        2.0 * (-2.0 * delta * delta * self.samples as f64 / (9.0 * self.t_mix_quarter)).exp()
    }
}

/// Confidence interval for the time average of a functional bounded by 1,
/// from the scalar McDiarmid-type bound.
pub fn concentration_ci(samples: &[f64], t_mix_quarter: f64, failure_probability: f64) -> Result<ConcentrationReport> {
    if samples.is_empty() {
        return Err(Error::InvalidArgument("no samples".into()));
    }
    if samples.iter().any(|g| !(g.abs() <= 1.0)) {
        return Err(Error::InvalidArgument("functional must be scaled into [-1, 1]".into()));
    }
    if !(failure_probability > 0.0 && failure_probability < 1.0) || !(t_mix_quarter > 0.0) {
        return Err(Error::InvalidArgument("need 0 < failure probability < 1 and t_mix > 0".into()));
    }
    let n = samples.len();
    let mean = samples.iter().sum::<f64>() / n as f64;
    let delta = (9.0 * t_mix_quarter * (2.0 / failure_probability).ln() / (2.0 * n as f64)).sqrt();
    Ok(ConcentrationReport {
        samples: n,
        mean,
        t_mix_quarter,
        failure_probability,
        delta,
        lower: mean - delta,
        upper: mean + delta,
    })
}

/// Uniform deviation `delta` for function-valued averages with
/// `2 e^2 exp(-delta^2 N / 2) + eps = failure_probability`; `None` unless
/// `failure_probability > eps`.
pub fn vector_concentration_delta(samples: usize, failure_probability: f64, eps: f64) -> Option<f64> {
    if samples == 0 || failure_probability <= eps {
        return None;
    }
    let e2 = std::f64::consts::E.powi(2);
    let ratio = 2.0 * e2 / (failure_probability - eps);
    Some((2.0 * ratio.ln().max(0.0) / samples as f64).sqrt())
}

#[derive(Clone, Debug, Serialize)]
pub struct GlauberContraction {
    pub max_degree: usize,
    /// Largest `TV(mu_x, mu_x')` over star homomorphisms that share the
    /// center and differ in one leaf.
    pub max_tv: f64,
    pub pairs: usize,
}

impl GlauberContraction {
    /// `1 - 2 d max_tv`.
    pub fn constant(&self) -> f64 {
        1.0 - 2.0 * self.max_degree as f64 * self.max_tv
    }
}

/// Worst-case contraction of the center conditional of the star
/// `S_d`, `d` the motif's maximum degree, over pairs of star homomorphisms
/// with a common center that differ in exactly one leaf.
pub fn glauber_contraction_constant<T: Real>(motif: &Motif<T>, net: &Network<T>, cap: f64) -> Result<GlauberContraction> {
    let d = motif.max_degree();
    if d == 0 {
        return Ok(GlauberContraction { max_degree: 0, max_tv: 0.0, pairs: 0 });
    }
    let n = net.n();
    let work: f64 = (0..n).map(|c| (net.out_neighbors(c).len() as f64).powi(d as i32)).sum();
    if work > cap {
        return Err(Error::CapExceeded { required: work, cap });
    }
    let mut cache: HashMap<Vec<usize>, Vec<f64>> = HashMap::new();
    let mut center_law = |leaves: &[usize]| -> Vec<f64> {
        let mut key = leaves.to_vec();
        key.sort_unstable();
        cache
            .entry(key)
            .or_insert_with(|| {
                let mut w: Vec<f64> = (0..n)
                    .map(|b| {
                        leaves.iter().fold(net.alpha()[b].to_f64_lossy(), |acc, &l| acc * net.weight(b, l).to_f64_lossy())
                    })
                    .collect();
                let total: f64 = w.iter().sum();
                w.iter_mut().for_each(|v| *v /= total);
                w
            })
            .clone()
    };
    let mut max_tv = 0.0f64;
    let mut pairs = 0;
    for c in 0..n {
        let nb: Vec<usize> = net.out_neighbors(c).iter().map(|e| e.0).collect();
        if nb.is_empty() {
            continue;
        }
        let mut idx = vec![0usize; d];
        loop {
            let leaves: Vec<usize> = idx.iter().map(|&i| nb[i]).collect();
            let mu = center_law(&leaves);
            for pos in 0..d {
                for alt in idx[pos] + 1..nb.len() {
                    let mut other = leaves.clone();
                    other[pos] = nb[alt];
                    let nu = center_law(&other);
                    max_tv = max_tv.max(tv_distance(&mu, &nu).unwrap());
                    pairs += 1;
                }
            }
            let mut p = 0;
            while p < d {
                idx[p] += 1;
                if idx[p] < nb.len() {
                    break;
                }
                idx[p] = 0;
                p += 1;
            }
            if p == d {
                break;
            }
        }
    }
    Ok(GlauberContraction { max_degree: d, max_tv, pairs })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::exact_pi;
    use crate::mcmc::{run_chain, ChainConfig};
    use crate::observables::{ChdEstimator, Observer};

    type M = Motif<f64>;
    type N = Network<f64>;

    fn complete(n: usize) -> N {
        let mut a = vec![1.0; n * n];
        for i in 0..n {
            a[i * n + i] = 0.0;
        }
        N::from_dense(n, a, None).unwrap()
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

    fn small_net() -> N {
        N::from_dense(
            5,
            vec![
                0.0, 0.8, 0.3, 0.0, 0.0, 0.8, 0.0, 0.5, 0.2, 0.0, 0.3, 0.5, 0.4, 0.0, 0.6, 0.0, 0.2, 0.0, 0.0,
                0.9, 0.0, 0.0, 0.6, 0.9, 0.0,
            ],
            Some(vec![0.1, 0.3, 0.2, 0.25, 0.15]),
        )
        .unwrap()
    }

    #[test]
    fn glauber_detailed_balance() {
        let net = small_net();
        let f = M::path(3).unwrap();
        let pi = exact_pi(&f, &net).unwrap();
        for (x, px) in pi.iter() {
            for i in 0..3 {
                for b in 0..5 {
                    let mut y = x.to_vec();
                    y[i] = b;
                    let py = pi.prob(&y);
                    let lhs = px * glauber_transition_prob(&f, &net, x, &y);
                    let rhs = py * glauber_transition_prob(&f, &net, &y, x);
                    assert!((lhs - rhs).abs() <= 1e-12 * lhs.max(rhs).max(1e-300));
                }
            }
        }
    }

    #[test]
    fn glauber_rows_sum_to_one() {
        let net = small_net();
        let f = M::star(2).unwrap();
        let pi = exact_pi(&f, &net).unwrap();
        for (x, _) in pi.iter() {
            let total: f64 = pi.iter().map(|(y, _)| glauber_transition_prob(&f, &net, x, y)).sum();
            assert!((total - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn mixing_curve_starts_at_point_mass_distance() {
        let net = small_net();
        let f = M::path(2).unwrap();
        let pi = exact_pi(&f, &net).unwrap();
        let opts = MixingOptions::new(0, 100, 1);
        let c = empirical_mixing(&f, &net, ChainKind::Glauber, &opts).unwrap();
        let p0 = pi.prob(&c.start);
        assert!((c.tv[0] - (1.0 - p0)).abs() < 1e-12);
    }

    #[test]
    fn pivot_kernel_is_reversible_and_stochastic() {
        let net = small_net();
        let tables = pivot_tables(&M::path(3).unwrap(), &net).unwrap();
        let p = pivot_root_kernel(&tables);
        let pi = tables.pi1();
        for a in 0..5 {
            let row: f64 = p[a * 5..(a + 1) * 5].iter().sum();
            assert!((row - 1.0).abs() < 1e-12);
            for b in 0..5 {
                assert!((pi[a] * p[a * 5 + b] - pi[b] * p[b * 5 + a]).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn two_node_bounds_closed_form() {
        let flip = N::from_dense(2, vec![0.0, 1.0, 1.0, 0.0], None).unwrap();
        // the walk always jumps, eigenvalue -1
        assert!(matches!(spectral_gap_bounds(&flip, 0.25), Err(Error::Numerical(_))));
        let lazy = N::from_dense(2, vec![1.0, 1.0, 1.0, 1.0], None).unwrap();
        let b = spectral_gap_bounds(&lazy, 0.25).unwrap();
        // P = [[1/2, 1/2], [1/2, 1/2]] has eigenvalues 1 and 0
        assert!(b.lambda_star.abs() < 1e-12);
        assert_eq!(b.t_mix_lower, 0.0);
        assert!((b.t_mix_upper - (1.0f64 / (0.5 * 0.25)).ln()).abs() < 1e-12);
        let weighted = N::from_dense(2, vec![1.0, 0.5, 0.5, 1.0], None).unwrap();
        let b = spectral_gap_bounds(&weighted, 0.25).unwrap();
        // P = [[2/3, 1/3], [1/3, 2/3]], second eigenvalue 1/3
        let ls = 1.0 / 3.0;
        assert!((b.lambda_star - ls).abs() < 1e-12);
        assert!((b.t_mix_lower - ls * 2f64.ln() / (1.0 - ls)).abs() < 1e-12);
        assert!((b.t_mix_upper - 8f64.ln() / (1.0 - ls)).abs() < 1e-12);
    }

    #[test]
    fn bounds_bracket_exact_mixing_time_on_complete_graph() {
        for n in [4, 6, 9] {
            let net = complete(n);
            let eps = 0.25;
            let b = spectral_gap_bounds(&net, eps).unwrap();
            let tables = pivot_tables(&M::singleton(), &net).unwrap();
            let p = pivot_root_kernel(&tables);
            let pi: Vec<f64> = tables.pi1().to_vec();
            let t = exact_mixing_time(&p, &pi, eps, 1000).unwrap() as f64;
            assert!(b.t_mix_lower <= t && t <= b.t_mix_upper, "{} <= {t} <= {}", b.t_mix_lower, b.t_mix_upper);
        }
    }

    #[test]
    fn reducible_net_is_rejected() {
        let net = N::from_dense(2, vec![1.0, 0.0, 0.0, 1.0], None).unwrap();
        assert!(matches!(spectral_gap_bounds(&net, 0.25), Err(Error::Reducible)));
    }

    #[test]
    fn cubic_bound_value() {
        let v = cubic_meeting_bound(13, 0.25).unwrap();
        let expect = 2.0 * (4.0 / 27.0 * 2197.0 + 4.0 / 3.0 * 169.0 + 2.0 / 9.0 * 13.0 - 296.0 / 27.0);
        assert!((v - expect).abs() < 1e-9);
        assert!(cubic_meeting_bound(12, 0.25).is_none());
        let ring = {
            let n = 13;
            let mut a = vec![0.0; n * n];
            for i in 0..n {
                a[i * n + (i + 1) % n] = 1.0;
                a[((i + 1) % n) * n + i] = 1.0;
            }
            N::from_dense(n, a, None).unwrap()
        };
        assert!(spectral_gap_bounds(&ring, 0.25).unwrap().cubic_upper.is_some());
    }

    #[test]
    fn coloring_steps() {
        assert_eq!(coloring_mixing_steps(7, 2, 4, 0.1), Some(25));
        assert_eq!(coloring_mixing_steps(4, 2, 4, 0.1), None);
    }

    #[test]
    fn concentration_shapes() {
        let s = vec![0.5; 100];
        let r = concentration_ci(&s, 3.0, 0.05).unwrap();
        let big = concentration_ci(&vec![0.5; 10_000], 3.0, 0.05).unwrap();
        assert!(big.delta < r.delta);
        assert!((r.failure_bound(r.delta) - 0.05).abs() < 1e-12);
        // choosing N = 9 t ln(2/p) / (2 delta^2) returns delta
        let (t, p, delta) = (4.0, 0.1, 0.2);
        let n = (9.0 * t * (2.0f64 / p).ln() / (2.0 * delta * delta)).round() as usize;
        let r = concentration_ci(&vec![0.0; n], t, p).unwrap();
        assert!((r.delta - delta).abs() < 1e-3);
        assert!(concentration_ci(&[], 1.0, 0.1).is_err());
        assert!(concentration_ci(&[1.5], 1.0, 0.1).is_err());
        assert!(vector_concentration_delta(100, 0.05, 0.1).is_none());
        let d1 = vector_concentration_delta(100, 0.2, 0.1).unwrap();
        let d2 = vector_concentration_delta(10_000, 0.2, 0.1).unwrap();
        assert!(d2 < d1);
    }

    #[test]
    fn concentration_coverage() {
        let net = small_net();
        let f = M::path(2).unwrap();
        let h = M::from_edges(2, &[(1, 0)]).unwrap();
        let truth = crate::exact::exact_conditional_density(&h, &f, &net).unwrap();
        let tables = pivot_tables(&f, &net).unwrap();
        let p = pivot_root_kernel(&tables);
        let t_quarter = exact_mixing_time(&p, tables.pi1(), 0.25, 1000).unwrap().max(1) as f64;
        let runs = 200;
        let mut covered = 0;
        for seed in 0..runs {
            struct Collect<'h>(&'h M, Vec<f64>);
            impl Observer<f64> for Collect<'_> {
                fn observe(&mut self, net: &N, x: &[usize]) {
                    self.1.push(crate::exact::motif_product(self.0, net, x));
                }
            }
            let mut col = Collect(&h, Vec::new());
            let mut est = ChdEstimator::new(h.clone());
            let cfg = ChainConfig::new(ChainKind::Pivot, seed, 50, 2000);
            run_chain(&cfg, &f, &net, &mut [&mut col, &mut est]).unwrap();
            let r = concentration_ci(&col.1, t_quarter, 0.05).unwrap();
            if r.lower <= truth && truth <= r.upper {
                covered += 1;
            }
        }
        assert!(covered as f64 / runs as f64 >= 0.95);
    }

    #[test]
    fn contraction_on_complete_graph() {
        for (q, d) in [(7usize, 2usize), (9, 2), (10, 3)] {
            let c = glauber_contraction_constant(&M::star(d).unwrap(), &complete(q), 1e7).unwrap();
            assert_eq!(c.max_degree, d);
            assert!((c.max_tv - 1.0 / (q - d) as f64).abs() < 1e-12);
            let single = 1.0 - d as f64 * c.max_tv;
            assert!((single - (q - 2 * d) as f64 / (q - d) as f64).abs() < 1e-12);
        }
        let c = glauber_contraction_constant(&M::star(2).unwrap(), &complete(7), 1e7).unwrap();
        assert!(c.constant() > 0.0);
        let c = glauber_contraction_constant(&M::star(2).unwrap(), &complete(5), 1e7).unwrap();
        assert!(c.constant() <= 0.0);
    }

    #[test]
    fn contraction_trivial_and_vacuous() {
        let c = glauber_contraction_constant(&M::singleton(), &complete(4), 1e7).unwrap();
        assert_eq!(c.constant(), 1.0);
        let c = glauber_contraction_constant(&M::path(3).unwrap(), &torus(4), 1e7).unwrap();
        assert_eq!(c.max_degree, 2);
        assert!(c.constant() <= 0.0);
    }
}
