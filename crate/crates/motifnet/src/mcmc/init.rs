use rand::Rng;

use super::{sample_index, Homomorphism};
use crate::error::{Error, Result};
use crate::motif::Motif;
use crate::network::Network;
use crate::scalar::{pow_weight, Real};

pub const DEFAULT_MAX_TRIES: usize = 10_000;

/// Random homomorphism found by placing motif nodes in index order, each
/// drawn with probability proportional to `alpha` times the factors that
/// close at it, and backtracking on dead ends. For rooted trees in a network
/// where every node has out-mass no dead end can occur. Fails after
/// `max_tries` dead ends.
pub fn initial_hom<T: Real, R: Rng + ?Sized>(
    motif: &Motif<T>,
    net: &Network<T>,
    rng: &mut R,
    max_tries: usize,
) -> Result<Homomorphism> {
    let k = motif.k();
    let mut closing: Vec<Vec<(usize, usize, T)>> = vec![Vec::new(); k];
    let mut anchor: Vec<Option<(usize, bool)>> = vec![None; k];
    for &(i, j, w) in motif.edges() {
        let p = i.max(j);
        closing[p].push((i, j, w));
        if i != j && anchor[p].is_none() {
            anchor[p] = Some(if i < j { (i, true) } else { (j, false) });
        }
    }
    let mut search = Search { net, closing, anchor, x: vec![0; k], dead_ends: 0, max_tries };
    if search.place(0, rng) {
        Homomorphism::new(motif, net, search.x)
    } else {
        Err(Error::InitializationFailed(search.dead_ends.min(max_tries)))
    }
}

struct Search<'a, T: Real> {
    net: &'a Network<T>,
    closing: Vec<Vec<(usize, usize, T)>>,
    anchor: Vec<Option<(usize, bool)>>,
    x: Vec<usize>,
    dead_ends: usize,
    max_tries: usize,
}

impl<T: Real> Search<'_, T> {
    fn place<R: Rng + ?Sized>(&mut self, p: usize, rng: &mut R) -> bool {
        if p == self.x.len() {
            return true;
        }
        let net = self.net;
        let cand: Vec<usize> = match self.anchor[p] {
            Some((q, true)) => net.out_neighbors(self.x[q]).iter().map(|e| e.0).collect(),
            Some((q, false)) => net.in_neighbors(self.x[q]).iter().map(|e| e.0).collect(),
            None => (0..net.n()).collect(),
        };
        let mut weights: Vec<T> = Vec::with_capacity(cand.len());
        for &b in &cand {
            self.x[p] = b;
            let mut w = net.alpha()[b];
            for &(i, j, e) in &self.closing[p] {
                w *= pow_weight(net.weight(self.x[i], self.x[j]), e);
            }
            weights.push(w);
        }
        let mut total: T = weights.iter().copied().sum();
        while total > T::zero() {
            let idx = sample_index(&weights, total, rng);
            self.x[p] = cand[idx];
            if self.place(p + 1, rng) {
                return true;
            }
            if self.dead_ends >= self.max_tries {
                return false;
            }
            total -= weights[idx];
            weights[idx] = T::zero();
            if weights.iter().all(|&w| w == T::zero()) {
                break;
            }
        }
        self.dead_ends += 1;
        false
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
    fn trees_succeed_without_dead_ends() {
        let net = complete(5);
        let mut rng = seeded_rng(0);
        for f in [M::path(6).unwrap(), M::star(4).unwrap(), M::two_armed_path(3, 2)] {
            let x = initial_hom(&f, &net, &mut rng, 1).unwrap();
            assert_eq!(x.as_slice().len(), f.k());
        }
    }

    #[test]
    fn triangle_into_bipartite_fails() {
        let mut c4 = vec![0.0; 16];
        for i in 0..4 {
            c4[i * 4 + (i + 1) % 4] = 1.0;
            c4[((i + 1) % 4) * 4 + i] = 1.0;
        }
        let net = N::from_dense(4, c4, None).unwrap();
        let mut rng = seeded_rng(0);
        let err = initial_hom(&M::cycle(3).unwrap(), &net, &mut rng, 1000).unwrap_err();
        assert!(matches!(err, Error::InitializationFailed(_)));
        assert!(err.to_string().contains("t(F,G) may be 0"));
    }

    #[test]
    fn triangle_into_k3_is_a_labeling() {
        let net = complete(3);
        let mut seen = std::collections::BTreeSet::new();
        for seed in 0..200 {
            let mut rng = seeded_rng(seed);
            let x = initial_hom(&M::cycle(3).unwrap(), &net, &mut rng, 100).unwrap().into_vec();
            let mut s = x.clone();
            s.sort();
            assert_eq!(s, vec![0, 1, 2]);
            seen.insert(x);
        }
        assert_eq!(seen.len(), 6);
    }
}
