//! Single-linkage hierarchical clustering of networks.
//!
//! Weights become dissimilarities `max(A) - A(x, y)` on the support of the
//! max-symmetrized matrix and `inf` off it. Shortest paths close them to a
//! metric, and merge heights are minimax path costs. Infinite distances are
//! stored as IEEE infinity, which Floyd-Warshall handles without overflow.

use std::fmt::Write as _;

use petgraph::unionfind::UnionFind;
use serde::Serialize;

use crate::network::Network;
use crate::scalar::Real;

/// `max(A, A^T)`, row-major.
pub fn symmetrized<T: Real>(net: &Network<T>) -> Vec<T> {
    let n = net.n();
    let a = net.to_dense();
    let mut s = a.clone();
    for i in 0..n {
        for j in 0..n {
            s[i * n + j] = a[i * n + j].max(a[j * n + i]);
        }
    }
    s
}

/// Dissimilarity matrix: zero diagonal, `inf` on non-edges,
/// `max(A) - A(x, y)` elsewhere.
pub fn dissimilarity<T: Real>(net: &Network<T>) -> Vec<T> {
    let n = net.n();
    let s = symmetrized(net);
    let top = net.max_weight();
    let mut d = vec![T::infinity(); n * n];
    for i in 0..n {
        for j in 0..n {
            let w = s[i * n + j];
            d[i * n + j] = if i == j {
                T::zero()
            } else if w > T::zero() {
                top - w
            } else {
                T::infinity()
            };
        }
    }
    d
}

/// All-pairs shortest paths (Floyd-Warshall).
pub fn apsp<T: Real>(d: &[T], n: usize) -> Vec<T> {
    let mut m = d.to_vec();
    for k in 0..n {
        for i in 0..n {
            let dik = m[i * n + k];
            if dik == T::infinity() {
                continue;
            }
            for j in 0..n {
                let via = dik + m[k * n + j];
                if via < m[i * n + j] {
                    m[i * n + j] = via;
                }
            }
        }
    }
    m
}

/// Widest-path capacity on the max-symmetrized support. The diagonal
/// holds `A(x, x)`.
pub fn capacity<T: Real>(net: &Network<T>) -> Vec<T> {
    let n = net.n();
    let mut c = symmetrized(net);
    for k in 0..n {
        for i in 0..n {
            if i == k {
                continue;
            }
            let cik = c[i * n + k];
            if cik == T::zero() {
                continue;
            }
            for j in 0..n {
                if j == k || j == i {
                    continue;
                }
                let via = cik.min(c[k * n + j]);
                if via > c[i * n + j] {
                    c[i * n + j] = via;
                }
            }
        }
    }
    for i in 0..n {
        c[i * n + i] = net.weight(i, i);
    }
    c
}

/// One binary merge; cluster ids below `n` are leaves, merge `m` creates
/// cluster `n + m`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Merge<T> {
    pub height: T,
    pub left: usize,
    pub right: usize,
}

/// Merges at one height, coalesced.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MergeEvent<T> {
    pub height: T,
    /// Children ordered by smallest leaf.
    pub children: Vec<usize>,
    pub id: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct Dendrogram<T> {
    pub n: usize,
    /// Nondecreasing heights; components that never connect are joined at
    /// `inf` so there are always `n - 1` merges.
    pub merges: Vec<Merge<T>>,
    /// Treegram leaf appearance heights.
    pub appearance: Option<Vec<T>>,
}

impl<T: Real> Dendrogram<T> {
    fn min_leaf(&self) -> Vec<usize> {
        let mut out: Vec<usize> = (0..self.n).collect();
        for m in &self.merges {
            out.push(out[m.left].min(out[m.right]));
        }
        out
    }

    fn leaves_of(&self, id: usize) -> Vec<usize> {
        if id < self.n {
            return vec![id];
        }
        let m = &self.merges[id - self.n];
        let mut v = self.leaves_of(m.left);
        v.extend(self.leaves_of(m.right));
        v.sort_unstable();
        v
    }

    /// Cophenetic matrix: height at which each pair first shares a cluster.
    pub fn cophenetic(&self) -> Vec<T> {
        let n = self.n;
        let mut h = vec![T::zero(); n * n];
        for m in &self.merges {
            let a = self.leaves_of(m.left);
            let b = self.leaves_of(m.right);
            for &x in &a {
                for &y in &b {
                    h[x * n + y] = m.height;
                    h[y * n + x] = m.height;
                }
            }
        }
        h
    }

    /// Clusters formed by merges at height `<= t`, as sorted leaf lists
    /// ordered by smallest leaf.
    pub fn clusters_at(&self, t: T) -> Vec<Vec<usize>> {
        let mut uf = UnionFind::<usize>::new(self.n);
        let mut rep: Vec<usize> = (0..self.n).collect();
        for m in &self.merges {
            let leaf = rep[m.left];
            if m.height <= t {
                uf.union(leaf, rep[m.right]);
            }
            rep.push(leaf);
        }
        partition(&mut uf, self.n)
    }

    /// Same-height merges joined into multi-way events, in merge order.
    pub fn events(&self) -> Vec<MergeEvent<T>> {
        let n = self.n;
        let mut parent = vec![None; n + self.merges.len()];
        for (m, mg) in self.merges.iter().enumerate() {
            parent[mg.left] = Some(n + m);
            parent[mg.right] = Some(n + m);
        }
        let height = |id: usize| self.merges[id - n].height;
        let min_leaf = self.min_leaf();
        let mut out = Vec::new();
        for (m, mg) in self.merges.iter().enumerate() {
            let id = n + m;
            if parent[id].is_some_and(|p| height(p) == mg.height) {
                continue;
            }
            let mut children = Vec::new();
            let mut stack = vec![mg.right, mg.left];
            while let Some(c) = stack.pop() {
                if c >= n && height(c) == mg.height {
                    stack.push(self.merges[c - n].right);
                    stack.push(self.merges[c - n].left);
                } else {
                    children.push(c);
                }
            }
            children.sort_by_key(|&c| min_leaf[c]);
            out.push(MergeEvent { height: mg.height, children, id });
        }
        out
    }

    /// Newick text with 1-based leaf labels and branch lengths as height
    /// differences; `inf` heights are written as `inf`.
    pub fn newick(&self) -> String {
        let events = self.events();
        let by_id: std::collections::HashMap<usize, &MergeEvent<T>> = events.iter().map(|e| (e.id, e)).collect();
        let heights: std::collections::HashMap<usize, T> = events.iter().map(|e| (e.id, e.height)).collect();
        let root = events.last().map(|e| e.id);
        let mut out = String::new();
        fn rec<T: Real>(
            id: usize,
            parent_h: Option<T>,
            n: usize,
            by_id: &std::collections::HashMap<usize, &MergeEvent<T>>,
            heights: &std::collections::HashMap<usize, T>,
            appearance: Option<&Vec<T>>,
            out: &mut String,
        ) {
            let own_h = if id < n { appearance.map_or(T::zero(), |a| a[id]) } else { heights[&id] };
            if id < n {
                write!(out, "{}", id + 1).unwrap();
            } else {
                out.push('(');
                for (i, &c) in by_id[&id].children.iter().enumerate() {
                    if i > 0 {
                        out.push(',');
                    }
                    rec(c, Some(own_h), n, by_id, heights, appearance, out);
                }
                out.push(')');
            }
            if let Some(p) = parent_h {
                out.push(':');
                out.push_str(&format_height(p - own_h));
            }
        }
        match root {
            Some(r) => rec(r, None, self.n, &by_id, &heights, self.appearance.as_ref(), &mut out),
            None => out.push('1'),
        }
        out.push(';');
        out
    }

    /// `height,left,right` rows with 1-based cluster labels: leaves are
    /// `1..=n`, merge `m` creates label `n + m + 1`.
    pub fn merge_csv(&self) -> String {
        let mut out = String::from("height,left,right\n");
        for m in &self.merges {
            writeln!(out, "{},{},{}", format_height(m.height), m.left + 1, m.right + 1).unwrap();
        }
        out
    }
}

pub(crate) fn format_height<T: Real>(h: T) -> String {
    if h == T::infinity() {
        "inf".into()
    } else {
        format!("{}", h.to_f64_lossy())
    }
}

fn partition(uf: &mut UnionFind<usize>, n: usize) -> Vec<Vec<usize>> {
    let mut groups: std::collections::BTreeMap<usize, Vec<usize>> = std::collections::BTreeMap::new();
    for x in 0..n {
        groups.entry(uf.find_mut(x)).or_default().push(x);
    }
    let mut out: Vec<Vec<usize>> = groups.into_values().collect();
    out.sort_by_key(|g| g[0]);
    out
}

/// Single linkage on a symmetric zero-diagonal dissimilarity. Pairs are
/// processed by `(distance, i, j)`, so ties resolve deterministically.
pub fn single_linkage<T: Real>(metric: &[T], n: usize) -> Dendrogram<T> {
    let mut pairs: Vec<(T, usize, usize)> = Vec::with_capacity(n * n.saturating_sub(1) / 2);
    for i in 0..n {
        for j in i + 1..n {
            pairs.push((metric[i * n + j].min(metric[j * n + i]), i, j));
        }
    }
    pairs.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap().then(a.1.cmp(&b.1)).then(a.2.cmp(&b.2)));
    let mut uf = UnionFind::<usize>::new(n);
    let mut cluster_of_root: Vec<usize> = (0..n).collect();
    let mut merges = Vec::with_capacity(n.saturating_sub(1));
    for (d, i, j) in pairs {
        let (ri, rj) = (uf.find_mut(i), uf.find_mut(j));
        if ri == rj {
            continue;
        }
        let (ci, cj) = (cluster_of_root[ri], cluster_of_root[rj]);
        uf.union(ri, rj);
        let root = uf.find_mut(ri);
        cluster_of_root[root] = n + merges.len();
        merges.push(Merge { height: d, left: ci.min(cj), right: ci.max(cj) });
        if merges.len() + 1 == n {
            break;
        }
    }
    Dendrogram { n, merges, appearance: None }
}

/// Single-linkage dendrogram of a network. Single linkage gives the same
/// tree on the dissimilarity and on its shortest-path closure, so the
/// dissimilarity is used directly and no path sums are rounded.
pub fn network_dendrogram<T: Real>(net: &Network<T>) -> Dendrogram<T> {
    single_linkage(&dissimilarity(net), net.n())
}

/// Dendrogram with leaf `x` appearing at `max(A) - A(x, x)`.
pub fn treegram<T: Real>(net: &Network<T>) -> Dendrogram<T> {
    let mut d = network_dendrogram(net);
    let top = net.max_weight();
    d.appearance = Some((0..net.n()).map(|x| top - net.weight(x, x)).collect());
    d
}

/// Classes of `x ~_t y`: joined by a walk of max-symmetrized edges with
/// dissimilarity `<= t`.
pub fn equivalence_classes<T: Real>(net: &Network<T>, t: T) -> Vec<Vec<usize>> {
    let n = net.n();
    let d = dissimilarity(net);
    let mut uf = UnionFind::<usize>::new(n);
    for i in 0..n {
        for j in i + 1..n {
            if d[i * n + j] <= t {
                uf.union(i, j);
            }
        }
    }
    partition(&mut uf, n)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};

    type N = Network<f64>;

    fn random_net(n: usize, density: f64, seed: u64) -> N {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let a: Vec<f64> = (0..n * n)
            .map(|_| if rng.random::<f64>() < density { (rng.random::<f64>() * 8.0).round() / 8.0 } else { 0.0 })
            .collect();
        N::from_dense(n, a, None).unwrap()
    }

    fn brute_minimax(d: &[f64], n: usize, x: usize, y: usize) -> f64 {
        fn go(d: &[f64], n: usize, cur: usize, y: usize, seen: &mut Vec<bool>, worst: f64, best: &mut f64) {
            if cur == y {
                *best = best.min(worst);
                return;
            }
            for next in 0..n {
                if !seen[next] && d[cur * n + next] < f64::INFINITY {
                    seen[next] = true;
                    go(d, n, next, y, seen, worst.max(d[cur * n + next]), best);
                    seen[next] = false;
                }
            }
        }
        let mut seen = vec![false; n];
        seen[x] = true;
        let mut best = f64::INFINITY;
        go(d, n, x, y, &mut seen, 0.0, &mut best);
        best
    }

    #[test]
    fn dissimilarity_cases() {
        let g = N::from_dense(3, vec![0.0, 1.0, 0.0, 1.0, 0.0, 1.0, 0.0, 1.0, 0.0], None).unwrap();
        let d = dissimilarity(&g);
        assert_eq!(d[1], 0.0);
        assert_eq!(d[2], f64::INFINITY);
        assert_eq!(d[0], 0.0);
        let one = N::from_dense(2, vec![0.0, 0.3, 0.0, 0.0], None).unwrap();
        assert_eq!(dissimilarity(&one)[1], 0.0);
        assert_eq!(dissimilarity(&one)[2], 0.0);
    }

    #[test]
    fn apsp_chain_and_metric_input() {
        let inf = f64::INFINITY;
        let d = vec![0.0, 1.0, inf, 1.0, 0.0, 1.0, inf, 1.0, 0.0];
        let m = apsp(&d, 3);
        assert_eq!(m[2], 2.0);
        assert_eq!(apsp(&m, 3), m);
    }

    #[test]
    fn apsp_matches_brute_force_paths() {
        let net = random_net(6, 0.5, 11);
        let d = dissimilarity(&net);
        let m = apsp(&d, 6);
        fn shortest(d: &[f64], n: usize, cur: usize, y: usize, seen: &mut Vec<bool>, acc: f64) -> f64 {
            if cur == y {
                return acc;
            }
            let mut best = f64::INFINITY;
            for nx in 0..n {
                if !seen[nx] && d[cur * n + nx] < f64::INFINITY {
                    seen[nx] = true;
                    best = best.min(shortest(d, n, nx, y, seen, acc + d[cur * n + nx]));
                    seen[nx] = false;
                }
            }
            best
        }
        for x in 0..6 {
            for y in 0..6 {
                let mut seen = vec![false; 6];
                seen[x] = true;
                assert_eq!(m[x * 6 + y], shortest(&d, 6, x, y, &mut seen, 0.0));
            }
        }
    }

    #[test]
    fn merge_heights_are_minimax() {
        for seed in 0..20 {
            let net = random_net(7, 0.4, seed);
            let d = dissimilarity(&net);
            let coph = network_dendrogram(&net).cophenetic();
            for x in 0..7 {
                for y in 0..7 {
                    if x != y {
                        assert_eq!(coph[x * 7 + y], brute_minimax(&d, 7, x, y));
                    }
                }
            }
        }
    }

    #[test]
    fn clusters_match_equivalence_classes() {
        for seed in 0..10 {
            let net = random_net(8, 0.3, 50 + seed);
            let dend = network_dendrogram(&net);
            for t in [0.0, 0.125, 0.25, 0.5, 0.75, 1.0, f64::INFINITY] {
                assert_eq!(dend.clusters_at(t), equivalence_classes(&net, t));
            }
        }
    }

    #[test]
    fn equal_distances_merge_in_one_event() {
        let d = vec![0.0, 2.0, 2.0, 2.0, 0.0, 2.0, 2.0, 2.0, 0.0];
        let dend = single_linkage(&d, 3);
        let ev = dend.events();
        assert_eq!(ev.len(), 1);
        assert_eq!(ev[0].children, vec![0, 1, 2]);
        assert_eq!(dend.newick(), "(1:2,2:2,3:2);");
    }

    #[test]
    fn connected_simple_graph_merges_at_zero() {
        let g = N::from_dense(4, vec![0.0, 1.0, 0.0, 0.0, 1.0, 0.0, 1.0, 0.0, 0.0, 1.0, 0.0, 1.0, 0.0, 0.0, 1.0, 0.0], None)
            .unwrap();
        let dend = network_dendrogram(&g);
        assert!(dend.merges.iter().all(|m| m.height == 0.0));
        assert_eq!(dend.events().len(), 1);
    }

    #[test]
    fn disconnected_components_join_at_infinity() {
        let g = N::from_dense(4, vec![0.0, 1.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.5, 0.0, 0.0, 0.5, 0.0], None)
            .unwrap();
        let dend = network_dendrogram(&g);
        assert_eq!(dend.merges.len(), 3);
        assert_eq!(dend.merges[2].height, f64::INFINITY);
        assert!(dend.merge_csv().ends_with("inf,5,6\n"));
        assert_eq!(dend.clusters_at(1.0), vec![vec![0, 1], vec![2, 3]]);
    }

    #[test]
    fn treegram_appearance() {
        let g = N::from_dense(3, vec![1.0, 0.5, 0.0, 0.5, 0.2, 0.3, 0.0, 0.3, 0.0], None).unwrap();
        let t = treegram(&g);
        let app = t.appearance.clone().unwrap();
        assert_eq!(app, vec![0.0, 0.8, 1.0]);
        let simple = N::from_dense(2, vec![0.0, 1.0, 1.0, 0.0], None).unwrap();
        assert_eq!(treegram(&simple).appearance.unwrap(), vec![1.0, 1.0]);
    }

    #[test]
    fn capacity_bottleneck_and_ultrametric() {
        let chain = N::from_dense(
            4,
            vec![0.0, 3.0, 0.0, 0.0, 3.0, 0.0, 1.0, 0.0, 0.0, 1.0, 0.0, 3.0, 0.0, 0.0, 3.0, 0.0],
            None,
        )
        .unwrap();
        let c = capacity(&chain);
        assert_eq!(c[3], 1.0);
        assert_eq!(c[1], 3.0);
        for seed in 0..10 {
            let net = random_net(6, 0.5, 200 + seed);
            let mut c = capacity(&net);
            let n = 6;
            for x in 0..n {
                for y in 0..n {
                    for z in 0..n {
                        if x != y {
                            assert!(c[x * n + y] >= c[x * n + z].min(c[z * n + y]));
                        }
                    }
                }
            }
            let top = net.max_weight();
            for x in 0..n {
                c[x * n + x] = top;
            }
            for x in 0..n {
                for y in 0..n {
                    for z in 0..n {
                        assert!(c[x * n + y] >= c[x * n + z].min(c[z * n + y]));
                    }
                }
            }
        }
    }

    #[test]
    fn newick_orders_children_by_smallest_leaf() {
        let inf = f64::INFINITY;
        let d = vec![0.0, 5.0, 1.0, inf, 5.0, 0.0, 5.0, inf, 1.0, 5.0, 0.0, inf, inf, inf, inf, 0.0];
        let dend = single_linkage(&apsp(&d, 4), 4);
        assert_eq!(dend.newick(), "(((1:1,3:1):4,2:5):inf,4:inf);");
    }
}
