//! Networks as step kernels on `[0,1]^2`: p-distances, cut norm and cut
//! distance, the level-set distance `d_■`, and exact checks of the
//! stability inequalities on small block kernels.

use itertools::Itertools;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::{exact_chd_profile, exact_conditional_density, exact_motif_transform, hom_density};
use crate::motif::Motif;
use crate::network::Network;
use crate::scalar::Real;

/// Largest block count for subset enumeration in the cut norm.
pub const CUT_NORM_MAX_BLOCKS: usize = 20;
/// Largest block count for minimizing over relabelings.
pub const RELABEL_MAX_BLOCKS: usize = 9;

/// Kernel constant on `I_i x I_j`, where `I_1, ..., I_m` are consecutive
/// intervals of lengths `measures`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct StepKernel<T> {
    m: usize,
    values: Vec<T>,
    measures: Vec<T>,
}

impl<T: Real> StepKernel<T> {
    /// `values` is row-major `m x m` and nonnegative; `measures` must be
    /// positive and is rescaled to sum 1.
    pub fn new(m: usize, values: Vec<T>, measures: Vec<T>) -> Result<Self> {
        if m == 0 || values.len() != m * m || measures.len() != m {
            return Err(Error::DimensionMismatch(format!("{m} blocks need {} values and {m} measures", m * m)));
        }
        if values.iter().any(|v| !v.is_finite() || *v < T::zero()) {
            return Err(Error::InvalidArgument("kernel values must be finite and nonnegative".into()));
        }
        Self::new_signed(m, values, measures)
    }

    fn new_signed(m: usize, values: Vec<T>, mut measures: Vec<T>) -> Result<Self> {
        if measures.iter().any(|w| !(*w > T::zero()) || !w.is_finite()) {
            return Err(Error::InvalidArgument("block measures must be positive".into()));
        }
        let total: T = measures.iter().copied().sum();
        measures.iter_mut().for_each(|w| *w /= total);
        Ok(Self { m, values, measures })
    }

    /// Block kernel of a network: values `A`, measures `alpha`.
    pub fn from_network(net: &Network<T>) -> Self {
        Self { m: net.n(), values: net.to_dense(), measures: net.alpha().to_vec() }
    }

    /// Kernel of a network whose weights are a joint law on node pairs
    /// (a motif transform or transitive closure): the density
    /// `A(i,j) / (alpha_i alpha_j)` with respect to the node weights.
    pub fn from_joint_law(net: &Network<T>) -> Self {
        let n = net.n();
        let alpha = net.alpha();
        let mut values = net.to_dense();
        for i in 0..n {
            for j in 0..n {
                values[i * n + j] /= alpha[i] * alpha[j];
            }
        }
        Self { m: n, values, measures: alpha.to_vec() }
    }

    pub fn to_network(&self) -> Result<Network<T>> {
        Network::from_dense(self.m, self.values.clone(), Some(self.measures.clone()))
    }

    pub fn blocks(&self) -> usize {
        self.m
    }

    pub fn value(&self, i: usize, j: usize) -> T {
        self.values[i * self.m + j]
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    pub fn measures(&self) -> &[T] {
        &self.measures
    }

    /// Values in `[0, 1]`.
    pub fn is_graphon(&self) -> bool {
        self.values.iter().all(|v| *v >= T::zero() && *v <= T::one())
    }

    /// Blocks reordered so that new block `i` is old block `perm[i]`.
    pub fn relabeled(&self, perm: &[usize]) -> Self {
        let m = self.m;
        let mut values = vec![T::zero(); m * m];
        for i in 0..m {
            for j in 0..m {
                values[i * m + j] = self.values[perm[i] * m + perm[j]];
            }
        }
        Self { m, values, measures: perm.iter().map(|&p| self.measures[p]).collect() }
    }

    /// `t(F, U)` as the integral over block assignments.
    pub fn hom_density(&self, motif: &Motif<T>) -> T {
        let k = motif.k();
        let mut x = vec![0usize; k];
        let mut total = T::zero();
        loop {
            let mut w = x.iter().fold(T::one(), |acc, &b| acc * self.measures[b]);
            for &(i, j, e) in motif.edges() {
                w *= crate::scalar::pow_weight(self.value(x[i], x[j]), e);
            }
            total += w;
            let mut p = 0;
            while p < k {
                x[p] += 1;
                if x[p] < self.m {
                    break;
                }
                x[p] = 0;
                p += 1;
            }
            if p == k {
                return total;
            }
        }
    }

    /// `U^F` as a kernel: the transform's joint law divided by the block
    /// measures.
    pub fn motif_transform(&self, motif: &Motif<T>) -> Result<Self> {
        let joint = exact_motif_transform(motif, &self.to_network()?)?.to_dense();
        let m = self.m;
        let mut values = joint;
        for i in 0..m {
            for j in 0..m {
                values[i * m + j] /= self.measures[i] * self.measures[j];
            }
        }
        Self::new(m, values, self.measures.clone())
    }
}

/// Common refinement of two interval partitions: block measures and, for
/// each refined block, its block in `u` and in `w`.
struct Refinement<T> {
    measures: Vec<T>,
    iu: Vec<usize>,
    iw: Vec<usize>,
}

fn refine<T: Real>(u: &StepKernel<T>, w: &StepKernel<T>) -> Refinement<T> {
    let cuts = |k: &StepKernel<T>| -> Vec<T> {
        let mut acc = T::zero();
        let mut c: Vec<T> = k
            .measures
            .iter()
            .map(|&m| {
                acc += m;
                acc
            })
            .collect();
        *c.last_mut().unwrap() = T::one();
        c
    };
    let (cu, cw) = (cuts(u), cuts(w));
    let mut all: Vec<T> = cu.iter().chain(&cw).copied().collect();
    all.sort_by(|a, b| a.partial_cmp(b).unwrap());
    all.dedup();
    let mut out = Refinement { measures: Vec::new(), iu: Vec::new(), iw: Vec::new() };
    let mut prev = T::zero();
    for c in all {
        if c > prev {
            out.measures.push(c - prev);
            out.iu.push(cu.partition_point(|&x| x <= prev).min(u.m - 1));
            out.iw.push(cw.partition_point(|&x| x <= prev).min(w.m - 1));
            prev = c;
        }
    }
    out
}

/// Difference `u - w` on the common refinement, with its block measures.
fn difference<T: Real, F: Fn(T, T) -> T>(u: &StepKernel<T>, w: &StepKernel<T>, op: F) -> (Vec<T>, Vec<T>) {
    let r = refine(u, w);
    let m = r.measures.len();
    let mut d = vec![T::zero(); m * m];
    for i in 0..m {
        for j in 0..m {
            d[i * m + j] = op(u.value(r.iu[i], r.iu[j]), w.value(r.iw[i], r.iw[j]));
        }
    }
    (d, r.measures)
}

/// `||u - w||_p` without relabeling; `p = inf` gives the essential sup.
pub fn p_norm_dist_labeled<T: Real>(u: &StepKernel<T>, w: &StepKernel<T>, p: f64) -> Result<T> {
    if !(p >= 1.0) {
        return Err(Error::InvalidArgument("p must be at least 1".into()));
    }
    let (d, mu) = difference(u, w, |a, b| a - b);
    let m = mu.len();
    if p.is_infinite() {
        return Ok(d.iter().fold(T::zero(), |acc, v| acc.max(v.abs())));
    }
    let pp = T::lit(p);
    let mut s = T::zero();
    for i in 0..m {
        for j in 0..m {
            s += mu[i] * mu[j] * d[i * m + j].abs().powf(pp);
        }
    }
    Ok(s.powf(T::one() / pp))
}

/// Cut norm of a signed step kernel by enumerating row-block subsets in
/// Gray-code order; for each row set the best column set takes all
/// positive or all negative column sums.
pub fn signed_cut_norm<T: Real>(values: &[T], measures: &[T]) -> Result<T> {
    let m = measures.len();
    if m > CUT_NORM_MAX_BLOCKS {
        return Err(Error::CapExceeded { required: (m as f64).exp2(), cap: (CUT_NORM_MAX_BLOCKS as f64).exp2() });
    }
    let weighted: Vec<T> = (0..m * m).map(|idx| values[idx] * measures[idx / m] * measures[idx % m]).collect();
    let mut col = vec![T::zero(); m];
    let mut inside = vec![false; m];
    let mut best = T::zero();
    for step in 1u64..(1u64 << m) {
        let i = step.trailing_zeros() as usize;
        inside[i] = !inside[i];
        let row = &weighted[i * m..(i + 1) * m];
        if inside[i] {
            col.iter_mut().zip(row).for_each(|(c, v)| *c += *v);
        } else {
            col.iter_mut().zip(row).for_each(|(c, v)| *c -= *v);
        }
        let (mut pos, mut neg) = (T::zero(), T::zero());
        for &c in &col {
            if c > T::zero() {
                pos += c;
            } else {
                neg -= c;
            }
        }
        best = best.max(pos).max(neg);
    }
    Ok(best)
}

pub fn cut_norm<T: Real>(u: &StepKernel<T>) -> Result<T> {
    signed_cut_norm(&u.values, &u.measures)
}

/// `||u - w||_□` without relabeling.
pub fn cut_dist_labeled<T: Real>(u: &StepKernel<T>, w: &StepKernel<T>) -> Result<T> {
    let (d, mu) = difference(u, w, |a, b| a - b);
    signed_cut_norm(&d, &mu)
}

/// `d_■(u, w) = int_0^inf ||1(u >= t) - 1(w >= t)||_□ dt`, a finite sum
/// over the gaps between consecutive kernel values.
pub fn filtration_dist_labeled<T: Real>(u: &StepKernel<T>, w: &StepKernel<T>) -> Result<T> {
    let r = refine(u, w);
    let m = r.measures.len();
    let mut levels: Vec<T> = u.values.iter().chain(&w.values).copied().filter(|v| *v > T::zero()).collect();
    levels.push(T::zero());
    levels.sort_by(|a, b| a.partial_cmp(b).unwrap());
    levels.dedup();
    let mut total = T::zero();
    let mut d = vec![T::zero(); m * m];
    for pair in levels.windows(2) {
        let (lo, hi) = (pair[0], pair[1]);
        // constant on (lo, hi]; evaluate at t = hi
        for i in 0..m {
            for j in 0..m {
                let a = u.value(r.iu[i], r.iu[j]) >= hi;
                let b = w.value(r.iw[i], r.iw[j]) >= hi;
                d[i * m + j] = T::from_i8(a as i8 - b as i8).unwrap();
            }
        }
        total += (hi - lo) * signed_cut_norm(&d, &r.measures)?;
    }
    Ok(total)
}

/// Minimum of a labeled distance over relabelings of `w`'s blocks, or the
/// labeled distance itself.
pub fn minimize_over_relabelings<T, F>(u: &StepKernel<T>, w: &StepKernel<T>, labeled: bool, dist: F) -> Result<T>
where
    T: Real,
    F: Fn(&StepKernel<T>, &StepKernel<T>) -> Result<T>,
{
    if labeled {
        return dist(u, w);
    }
    if u.m != w.m {
        return Err(Error::DimensionMismatch("unlabeled distances need equal block counts".into()));
    }
    if w.m > RELABEL_MAX_BLOCKS {
        let fact: f64 = (1..=w.m).map(|i| i as f64).product();
        let cap: f64 = (1..=RELABEL_MAX_BLOCKS).map(|i| i as f64).product();
        return Err(Error::CapExceeded { required: fact, cap });
    }
    let mut best = T::infinity();
    for perm in (0..w.m).permutations(w.m) {
        best = best.min(dist(u, &w.relabeled(&perm))?);
    }
    Ok(best)
}

pub fn p_norm_dist<T: Real>(u: &StepKernel<T>, w: &StepKernel<T>, p: f64, labeled: bool) -> Result<T> {
    minimize_over_relabelings(u, w, labeled, |a, b| p_norm_dist_labeled(a, b, p))
}

pub fn cut_dist<T: Real>(u: &StepKernel<T>, w: &StepKernel<T>, labeled: bool) -> Result<T> {
    minimize_over_relabelings(u, w, labeled, cut_dist_labeled)
}

pub fn filtration_dist<T: Real>(u: &StepKernel<T>, w: &StepKernel<T>, labeled: bool) -> Result<T> {
    minimize_over_relabelings(u, w, labeled, filtration_dist_labeled)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum StabilityKind {
    Counting,
    Conditional,
    Transform,
    Profile,
}

impl std::str::FromStr for StabilityKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "counting" => Ok(Self::Counting),
            "conditional" => Ok(Self::Conditional),
            "transform" => Ok(Self::Transform),
            "profile" => Ok(Self::Profile),
            _ => Err(Error::InvalidArgument(format!("unknown inequality `{s}`"))),
        }
    }
}

/// Both sides of one stability inequality, computed exactly.
#[derive(Clone, Debug, Serialize)]
pub struct StabilityReport {
    pub kind: StabilityKind,
    pub lhs: f64,
    pub rhs: f64,
    pub holds: bool,
    /// Cut distance (unlabeled) between the two kernels.
    pub cut_distance: f64,
}

/// Relative slack for rounding when comparing exact sides.
const STABILITY_ROUNDING: f64 = 1e-12;

/// Evaluates one stability inequality on two graphon-valued step kernels
/// with equal block counts. `h` is ignored for the counting lemma and the
/// transform. Distances are minimized over block relabelings.
///
/// * counting: `|t(F,U) - t(F,W)| <= |E_F| d`
/// * conditional: `|t(H,U|F) - t(H,W|F)| <= 2 |E_{H+F}| d / max t(F,.)`
/// * transform: `d(U^F, W^F) <= (1 + 1/max t(F,.)) |E_F| d`
/// * profile: `||f(H,U|F) - f(H,W|F)||_1 <= (2 |E_F| d + |E_H| d_1) / max t(F,.)`
///
/// with `d` the cut distance and `d_1` the 1-distance.
pub fn verify_stability<T: Real>(
    kind: StabilityKind,
    u: &StepKernel<T>,
    w: &StepKernel<T>,
    h: &Motif<T>,
    f: &Motif<T>,
) -> Result<StabilityReport> {
    if !u.is_graphon() || !w.is_graphon() {
        return Err(Error::InvalidArgument("stability inequalities need values in [0, 1]".into()));
    }
    let sum = || h.plus(f);
    match kind {
        StabilityKind::Counting => {}
        StabilityKind::Conditional => {
            if !sum()?.is_simple() {
                return Err(Error::InvalidMotif("H+F must be simple".into()));
            }
        }
        StabilityKind::Transform => {
            if !f.is_simple() || f.k() < 2 {
                return Err(Error::InvalidMotif("F must be simple with at least 2 nodes".into()));
            }
        }
        StabilityKind::Profile => {
            if !h.is_simple() || !f.is_simple() || !sum()?.is_simple() {
                return Err(Error::InvalidMotif("H, F and H+F must be simple".into()));
            }
        }
    }
    let cut = cut_dist(u, w, false)?;
    let (nu, nw) = (u.to_network()?, w.to_network()?);
    let tf_u = hom_density(f, &nu)?;
    let tf_w = hom_density(f, &nw)?;
    let tmax = tf_u.max(tf_w);
    let ef = f.l1_norm();
    let ratio = |num: T| if tmax > T::zero() { num / tmax } else { T::infinity() };
    let (lhs, rhs) = match kind {
        StabilityKind::Counting => ((tf_u - tf_w).abs(), ef * cut),
        StabilityKind::Conditional => {
            let a = exact_conditional_density(h, f, &nu)?;
            let b = exact_conditional_density(h, f, &nw)?;
            ((a - b).abs(), ratio(T::lit(2.0) * sum()?.l1_norm() * cut))
        }
        StabilityKind::Transform => {
            if tf_u == T::zero() || tf_w == T::zero() {
                return Err(Error::NoHomomorphism);
            }
            let lhs = cut_dist(&u.motif_transform(f)?, &w.motif_transform(f)?, false)?;
            (lhs, (T::one() + T::one() / tmax) * ef * cut)
        }
        StabilityKind::Profile => {
            let l1 = p_norm_dist(u, w, 1.0, false)?;
            let lhs = profile_l1_between(h, f, &nu, &nw)?;
            (lhs, ratio(T::lit(2.0) * ef * cut + h.l1_norm() * l1))
        }
    };
    let (lhs, rhs) = (lhs.to_f64_lossy(), rhs.to_f64_lossy());
    Ok(StabilityReport {
        kind,
        lhs,
        rhs,
        holds: lhs <= rhs + STABILITY_ROUNDING * rhs.abs().max(1.0),
        cut_distance: cut.to_f64_lossy(),
    })
}

/// Exact `L^1([0,1])` distance between two CHD profiles. Both are step
/// functions that only change at edge values, so evaluating at the right
/// end of every gap between consecutive values integrates them exactly.
pub fn profile_l1_between<T: Real>(h: &Motif<T>, f: &Motif<T>, a: &Network<T>, b: &Network<T>) -> Result<T> {
    let mut levels: Vec<T> = a
        .entries()
        .chain(b.entries())
        .map(|e| e.2)
        .filter(|v| *v > T::zero() && *v < T::one())
        .collect();
    levels.push(T::zero());
    levels.push(T::one());
    levels.sort_by(|x, y| x.partial_cmp(y).unwrap());
    levels.dedup();
    let ts: Vec<T> = levels[1..].to_vec();
    let pa = exact_chd_profile(h, f, a, &ts)?;
    let pb = exact_chd_profile(h, f, b, &ts)?;
    let mut total = T::zero();
    for (idx, pair) in levels.windows(2).enumerate() {
        total += (pair[1] - pair[0]) * (pa.values()[idx] - pb.values()[idx]).abs();
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};

    type K = StepKernel<f64>;

    #[test]
    fn joint_law_becomes_density() {
        let net = Network::<f64>::from_dense(2, vec![0.1, 0.2, 0.3, 0.4], Some(vec![0.25, 0.75])).unwrap();
        let k = K::from_joint_law(&net);
        assert_eq!(k.value(0, 0), 0.1 / (0.25 * 0.25));
        assert_eq!(k.value(1, 0), 0.3 / (0.75 * 0.25));
        let mass: f64 = (0..2)
            .flat_map(|i| (0..2).map(move |j| (i, j)))
            .map(|(i, j)| k.value(i, j) * k.measures()[i] * k.measures()[j])
            .sum();
        assert!((mass - 1.0).abs() < 1e-15);
    }

    fn random_kernel(m: usize, rng: &mut impl Rng) -> K {
        let mut v = vec![0.0; m * m];
        for i in 0..m {
            for j in i..m {
                let x: f64 = rng.random();
                v[i * m + j] = x;
                v[j * m + i] = x;
            }
        }
        let mu: Vec<f64> = (0..m).map(|_| rng.random::<f64>() + 0.2).collect();
        K::new(m, v, mu).unwrap()
    }

    fn brute_cut_norm(values: &[f64], mu: &[f64]) -> f64 {
        let m = mu.len();
        let mut best = 0.0f64;
        for s in 0u32..(1 << m) {
            for t in 0u32..(1 << m) {
                let mut acc = 0.0;
                for i in 0..m {
                    for j in 0..m {
                        if s >> i & 1 == 1 && t >> j & 1 == 1 {
                            acc += values[i * m + j] * mu[i] * mu[j];
                        }
                    }
                }
                best = best.max(acc.abs());
            }
        }
        best
    }

    #[test]
    fn refinement_covers_unit_interval() {
        let u = K::new(2, vec![0.0; 4], vec![0.3, 0.7]).unwrap();
        let w = K::new(3, vec![0.0; 9], vec![0.5, 0.25, 0.25]).unwrap();
        let r = refine(&u, &w);
        let expect = [0.3, 0.2, 0.25, 0.25];
        assert_eq!(r.measures.len(), 4);
        for (a, b) in r.measures.iter().zip(expect) {
            assert!((a - b).abs() < 1e-15);
        }
        assert_eq!(r.iu, vec![0, 1, 1, 1]);
        assert_eq!(r.iw, vec![0, 0, 1, 2]);
        let same = refine(&u, &u);
        assert_eq!(same.measures.len(), 2);
    }

    #[test]
    fn cut_norm_cases() {
        let c = K::new(2, vec![0.7; 4], vec![0.4, 0.6]).unwrap();
        assert!((cut_norm(&c).unwrap() - 0.7).abs() < 1e-15);
        let checker = [1.0, -1.0, -1.0, 1.0];
        let v: f64 = signed_cut_norm(&checker, &[0.5, 0.5]).unwrap();
        assert!((v - 0.25).abs() < 1e-15);
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(4);
        for m in 1..=5 {
            let vals: Vec<f64> = (0..m * m).map(|_| rng.random::<f64>() * 2.0 - 1.0).collect();
            let mu: Vec<f64> = (0..m).map(|_| rng.random::<f64>() + 0.1).collect();
            let z: f64 = mu.iter().sum();
            let mu: Vec<f64> = mu.iter().map(|x| x / z).collect();
            assert!((signed_cut_norm(&vals, &mu).unwrap() - brute_cut_norm(&vals, &mu)).abs() < 1e-14);
        }
    }

    #[test]
    fn cut_norm_is_below_l1() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(8);
        for _ in 0..20 {
            let u = random_kernel(4, &mut rng);
            let zero = K::new(1, vec![0.0], vec![1.0]).unwrap();
            let l1 = p_norm_dist_labeled(&u, &zero, 1.0).unwrap();
            assert!(cut_norm(&u).unwrap() <= l1 + 1e-15);
        }
    }

    #[test]
    fn relabeling_distance_is_zero() {
        let u = K::new(2, vec![0.9, 0.1, 0.1, 0.3], vec![0.4, 0.6]).unwrap();
        let w = u.relabeled(&[1, 0]);
        assert!(p_norm_dist(&u, &w, 1.0, true).unwrap() > 0.1);
        assert!(p_norm_dist(&u, &w, 1.0, false).unwrap() < 1e-15);
        assert!(cut_dist(&u, &w, false).unwrap() < 1e-15);
        assert!(filtration_dist(&u, &w, false).unwrap() < 1e-15);
        assert_eq!(cut_dist(&u, &u, true).unwrap(), 0.0);
    }

    #[test]
    fn sandwich_and_unlabeled_below_labeled() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(12);
        for _ in 0..30 {
            let u = random_kernel(4, &mut rng);
            let w = random_kernel(4, &mut rng);
            let c = cut_dist(&u, &w, false).unwrap();
            let f = filtration_dist(&u, &w, false).unwrap();
            let l = p_norm_dist(&u, &w, 1.0, false).unwrap();
            assert!(c <= f + 1e-12 && f <= l + 1e-12, "{c} {f} {l}");
            assert!(l <= p_norm_dist(&u, &w, 1.0, true).unwrap() + 1e-15);
        }
    }

    #[test]
    fn filtration_of_indicators_is_cut_norm() {
        let u = K::new(2, vec![1.0, 0.0, 0.0, 1.0], vec![0.5, 0.5]).unwrap();
        let w = K::new(2, vec![1.0, 1.0, 1.0, 0.0], vec![0.5, 0.5]).unwrap();
        let f = filtration_dist_labeled(&u, &w).unwrap();
        assert!((f - cut_dist_labeled(&u, &w).unwrap()).abs() < 1e-15);
    }

    #[test]
    fn kernel_integral_matches_network_density() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(21);
        let u = random_kernel(4, &mut rng);
        for f in [Motif::path(3).unwrap(), Motif::cycle(3).unwrap(), Motif::star(3).unwrap()] {
            let a = u.hom_density(&f);
            let b = hom_density(&f, &u.to_network().unwrap()).unwrap();
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn stability_identity_pair() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(30);
        let u = random_kernel(3, &mut rng);
        let h = Motif::arm_ends_edge(1, 1);
        let f = Motif::two_armed_path(1, 1);
        for kind in [StabilityKind::Counting, StabilityKind::Conditional, StabilityKind::Transform, StabilityKind::Profile] {
            let r = verify_stability(kind, &u, &u, &h, &f).unwrap();
            assert_eq!(r.lhs, 0.0);
            assert!(r.holds);
        }
    }

    #[test]
    fn stability_rejects_non_simple_sum() {
        let u = K::new(1, vec![0.5], vec![1.0]).unwrap();
        let f = Motif::path(2).unwrap();
        assert!(verify_stability(StabilityKind::Conditional, &u, &u, &f, &f).is_err());
    }

    #[test]
    fn profile_distance_matches_dense_grid() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(31);
        let a = random_kernel(3, &mut rng).to_network().unwrap();
        let b = random_kernel(3, &mut rng).to_network().unwrap();
        let h = Motif::arm_ends_edge(1, 1);
        let f = Motif::two_armed_path(1, 1);
        let exact = profile_l1_between(&h, &f, &a, &b).unwrap();
        let pts = 20_001;
        let ts: Vec<f64> = (0..pts).map(|i| i as f64 / (pts - 1) as f64).collect();
        let pa = exact_chd_profile(&h, &f, &a, &ts).unwrap();
        let pb = exact_chd_profile(&h, &f, &b, &ts).unwrap();
        let approx: f64 = pa.values().iter().zip(pb.values()).map(|(x, y)| (x - y).abs()).sum::<f64>() / pts as f64;
        assert!((exact - approx).abs() < 1e-3);
    }
}
