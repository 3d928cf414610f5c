use rand::Rng;

use super::{is_homomorphism, sample_index};
use crate::error::{Error, Result};
use crate::motif::Motif;
use crate::network::Network;
use crate::scalar::{pow_weight, Real};

const LOG_SPACE_MIN_WEIGHT: f64 = 1e-8;
const LOG_SPACE_MIN_K: usize = 16;

/// Motif factors touching one node.
#[derive(Clone, Debug, Default)]
struct Incident<T> {
    /// `(j, A_F(j,i))`, contributing `A(x_j, b)`.
    incoming: Vec<(usize, T)>,
    /// `(j, A_F(i,j))`, contributing `A(b, x_j)`.
    outgoing: Vec<(usize, T)>,
    self_loop: T,
}

impl<T: Real> Incident<T> {
    fn is_free(&self) -> bool {
        self.incoming.is_empty() && self.outgoing.is_empty() && self.self_loop == T::zero()
    }
}

/// Precomputed single-site heat-bath conditionals.
#[derive(Clone, Debug)]
struct Kernel<'a, T: Real> {
    net: &'a Network<T>,
    incident: Vec<Incident<T>>,
    alpha_cum: Vec<T>,
    log_space: bool,
}

impl<'a, T: Real> Kernel<'a, T> {
    fn new(motif: &Motif<T>, net: &'a Network<T>) -> Self {
        let k = motif.k();
        let mut incident: Vec<Incident<T>> = (0..k)
            .map(|_| Incident { incoming: Vec::new(), outgoing: Vec::new(), self_loop: T::zero() })
            .collect();
        for &(i, j, w) in motif.edges() {
            if i == j {
                incident[i].self_loop = w;
            } else {
                incident[j].incoming.push((i, w));
                incident[i].outgoing.push((j, w));
            }
        }
        let mut alpha_cum = Vec::with_capacity(net.n());
        let mut acc = T::zero();
        for &a in net.alpha() {
            acc += a;
            alpha_cum.push(acc);
        }
        let tiny = T::lit(LOG_SPACE_MIN_WEIGHT);
        let min_weight = net.entries().map(|e| e.2).chain(net.alpha().iter().copied()).fold(T::infinity(), T::min);
        let log_space = k > LOG_SPACE_MIN_K || min_weight < tiny;
        Self { net, incident, alpha_cum, log_space }
    }

    /// Writes candidates and unnormalized weights for resampling node `i`;
    /// returns their total. An empty candidate list means "draw from alpha".
    fn fill(&self, x: &[usize], i: usize, cand: &mut Vec<usize>, weights: &mut Vec<T>) -> T {
        cand.clear();
        weights.clear();
        let inc = &self.incident[i];
        let net = self.net;
        let mut best: Option<&[(usize, T)]> = None;
        for &(j, _) in &inc.incoming {
            let list = net.out_neighbors(x[j]);
            if best.is_none_or(|b| list.len() < b.len()) {
                best = Some(list);
            }
        }
        for &(j, _) in &inc.outgoing {
            let list = net.in_neighbors(x[j]);
            if best.is_none_or(|b| list.len() < b.len()) {
                best = Some(list);
            }
        }
        match best {
            Some(list) => cand.extend(list.iter().map(|&(b, _)| b)),
            None if inc.self_loop > T::zero() => cand.extend(0..net.n()),
            None => return T::zero(),
        }
        if self.log_space {
            let mut max_log = T::neg_infinity();
            for &b in cand.iter() {
                let lw = self.log_weight(x, inc, b);
                max_log = max_log.max(lw);
                weights.push(lw);
            }
            if max_log == T::neg_infinity() {
                weights.iter_mut().for_each(|w| *w = T::zero());
                return T::zero();
            }
            let mut total = T::zero();
            for w in weights.iter_mut() {
                *w = (*w - max_log).exp();
                total += *w;
            }
            total
        } else {
            let mut total = T::zero();
            for &b in cand.iter() {
                let w = self.weight(x, inc, b);
                weights.push(w);
                total += w;
            }
            total
        }
    }

    #[inline]
    fn weight(&self, x: &[usize], inc: &Incident<T>, b: usize) -> T {
        let net = self.net;
        let mut w = net.alpha()[b];
        for &(j, e) in &inc.incoming {
            w *= pow_weight(net.weight(x[j], b), e);
        }
        for &(j, e) in &inc.outgoing {
            w *= pow_weight(net.weight(b, x[j]), e);
        }
        if inc.self_loop > T::zero() {
            w *= pow_weight(net.weight(b, b), inc.self_loop);
        }
        w
    }

    fn log_weight(&self, x: &[usize], inc: &Incident<T>, b: usize) -> T {
        let net = self.net;
        let mut lw = net.alpha()[b].ln();
        for &(j, e) in &inc.incoming {
            lw += e * net.weight(x[j], b).ln();
        }
        for &(j, e) in &inc.outgoing {
            lw += e * net.weight(b, x[j]).ln();
        }
        if inc.self_loop > T::zero() {
            lw += inc.self_loop * net.weight(b, b).ln();
        }
        lw
    }

    fn sample_alpha<R: Rng + ?Sized>(&self, rng: &mut R) -> usize {
        let u = T::from_f64(rng.random::<f64>()).unwrap();
        self.alpha_cum.partition_point(|&c| c <= u).min(self.alpha_cum.len() - 1)
    }
}

/// Normalized conditional law `mu_{x,i}` of node `i` given the others, as
/// `(node, probability)` pairs with positive probability.
pub fn glauber_conditional<T: Real>(motif: &Motif<T>, net: &Network<T>, x: &[usize], i: usize) -> Vec<(usize, T)> {
    let kernel = Kernel::new(motif, net);
    let (mut cand, mut weights) = (Vec::new(), Vec::new());
    let total = kernel.fill(x, i, &mut cand, &mut weights);
    if kernel.incident[i].is_free() {
        return net.alpha().iter().copied().enumerate().collect();
    }
    cand.into_iter()
        .zip(weights)
        .filter(|&(_, w)| w > T::zero())
        .map(|(b, w)| (b, w / total))
        .collect()
}

/// Single-site heat-bath chain: pick a motif node uniformly and resample
/// it from its conditional given the rest.
#[derive(Clone)]
pub struct GlauberChain<'a, T: Real> {
    kernel: Kernel<'a, T>,
    k: usize,
    x: Vec<usize>,
    cand: Vec<usize>,
    weights: Vec<T>,
}

impl<'a, T: Real> GlauberChain<'a, T> {
    pub fn new(motif: &Motif<T>, net: &'a Network<T>, x0: Vec<usize>) -> Result<Self> {
        if x0.len() != motif.k() || x0.iter().any(|&v| v >= net.n()) || !is_homomorphism(motif, net, &x0) {
            return Err(Error::InvalidArgument("initial state is not a homomorphism".into()));
        }
        Ok(Self { kernel: Kernel::new(motif, net), k: motif.k(), x: x0, cand: Vec::new(), weights: Vec::new() })
    }

    pub fn state(&self) -> &[usize] {
        &self.x
    }

    pub fn step<R: Rng + ?Sized>(&mut self, rng: &mut R) {
        let i = rng.random_range(0..self.k);
        let total = self.kernel.fill(&self.x, i, &mut self.cand, &mut self.weights);
        if self.kernel.incident[i].is_free() {
            self.x[i] = self.kernel.sample_alpha(rng);
            return;
        }
        assert!(total > T::zero(), "conditional weights vanished at a valid state");
        let idx = sample_index(&self.weights, total, rng);
        self.x[i] = self.cand[idx];
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mcmc::seeded_rng;

    type M = Motif<f64>;
    type N = Network<f64>;

    fn complete(n: usize) -> N {
        let mut a = vec![1.0; n * n];
        for i in 0..n {
            a[i * n + i] = 0.0;
        }
        N::from_dense(n, a, None).unwrap()
    }

    #[test]
    fn singleton_resamples_from_alpha() {
        let net = N::from_dense(3, vec![0.0; 9], Some(vec![0.2, 0.3, 0.5])).unwrap();
        let f = M::singleton();
        let cond = glauber_conditional(&f, &net, &[0], 0);
        assert_eq!(cond.len(), 3);
        assert!((cond[2].1 - 0.5).abs() < 1e-15);
        let mut chain = GlauberChain::new(&f, &net, vec![0]).unwrap();
        let mut rng = seeded_rng(3);
        let mut counts = [0usize; 3];
        for _ in 0..100_000 {
            chain.step(&mut rng);
            counts[chain.state()[0]] += 1;
        }
        assert!((counts[2] as f64 / 1e5 - 0.5).abs() < 0.01);
    }

    #[test]
    fn edge_into_k3_avoids_neighbor() {
        let net = complete(3);
        let f = M::path(2).unwrap();
        let cond = glauber_conditional(&f, &net, &[0, 1], 1);
        assert_eq!(cond, vec![(1, 0.5), (2, 0.5)]);
    }

    #[test]
    fn states_stay_homomorphisms() {
        let net = N::from_dense(4, vec![0.0, 0.5, 0.0, 0.9, 0.5, 0.3, 0.7, 0.0, 0.0, 0.7, 0.0, 0.4, 0.9, 0.0, 0.4, 0.0], None)
            .unwrap();
        let f = M::cycle(3).unwrap();
        let x0 = vec![1, 1, 1];
        let mut chain = GlauberChain::new(&f, &net, x0).unwrap();
        let mut rng = seeded_rng(9);
        for _ in 0..10_000 {
            chain.step(&mut rng);
            assert!(is_homomorphism(&f, &net, chain.state()));
        }
    }

    #[test]
    fn log_space_matches_direct() {
        let tiny = N::from_dense(3, vec![0.0, 1e-9, 0.5, 1e-9, 0.0, 0.2, 0.5, 0.2, 0.0], None).unwrap();
        let f = M::path(3).unwrap();
        let cond = glauber_conditional(&f, &tiny, &[0, 2, 1], 1);
        let raw: Vec<f64> = (0..3).map(|b| tiny.weight(0, b) * tiny.weight(b, 1)).collect();
        let total: f64 = raw.iter().sum();
        for (b, p) in cond {
            assert!((p - raw[b] / total).abs() < 1e-12);
        }
    }

    #[test]
    fn rejects_invalid_start() {
        let f = M::path(2).unwrap();
        assert!(GlauberChain::new(&f, &complete(3), vec![0, 0]).is_err());
    }
}
