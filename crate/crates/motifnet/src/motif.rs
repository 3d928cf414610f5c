use serde::Serialize;

use crate::error::{Error, Result};
use crate::scalar::Real;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum MotifKind {
    General,
    Simple,
    RootedTree,
}

/// Parent/children structure of a rooted tree motif with root 0.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TreeShape {
    parent: Vec<Option<usize>>,
    children: Vec<Vec<usize>>,
}

impl TreeShape {
    pub fn parent(&self, i: usize) -> Option<usize> {
        self.parent[i]
    }

    pub fn children(&self, i: usize) -> &[usize] {
        &self.children[i]
    }
}

/// Motif `([k], A_F)` with nonnegative weights.
#[derive(Clone, Debug)]
pub struct Motif<T: Real> {
    k: usize,
    af: Vec<T>,
    edges: Vec<(usize, usize, T)>,
    simple: bool,
    tree: Option<TreeShape>,
}

impl<T: Real> PartialEq for Motif<T> {
    fn eq(&self, other: &Self) -> bool {
        self.k == other.k && self.af == other.af
    }
}

impl<T: Real> Motif<T> {
    pub fn from_dense(k: usize, af: Vec<T>) -> Result<Self> {
        if k == 0 {
            return Err(Error::InvalidMotif("motif needs at least one node".into()));
        }
        if af.len() != k * k {
            return Err(Error::InvalidMotif(format!(
                "motif matrix has {} entries, expected {}",
                af.len(),
                k * k
            )));
        }
        let mut edges = Vec::new();
        for (idx, &w) in af.iter().enumerate() {
            if !w.is_finite() || w < T::zero() {
                return Err(Error::InvalidMotif(format!(
                    "motif weight ({},{}) = {w} must be finite and nonnegative",
                    idx / k,
                    idx % k
                )));
            }
            if w > T::zero() {
                edges.push((idx / k, idx % k, w));
            }
        }
        let simple = classify_simple(k, &af);
        let tree = classify_tree(k, &edges);
        Ok(Self { k, af, edges, simple, tree })
    }

    /// Motif with unit weight on each listed ordered pair.
    pub fn from_edges(k: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut af = vec![T::zero(); k * k];
        for &(i, j) in edges {
            if i >= k || j >= k {
                return Err(Error::InvalidMotif(format!("edge ({i},{j}) out of range for k = {k}")));
            }
            af[i * k + j] = T::one();
        }
        Self::from_dense(k, af)
    }

    pub fn zero(k: usize) -> Result<Self> {
        Self::from_dense(k, vec![T::zero(); k * k])
    }

    /// `F_{0,0}`: one node, no edges.
    pub fn singleton() -> Self {
        Self::zero(1).unwrap()
    }

    /// `H_{0,0}`: one node with a loop.
    pub fn self_loop() -> Self {
        Self::from_edges(1, &[(0, 0)]).unwrap()
    }

    /// Directed path `0 -> 1 -> ... -> k-1`.
    pub fn path(k: usize) -> Result<Self> {
        let edges: Vec<_> = (1..k).map(|i| (i - 1, i)).collect();
        Self::from_edges(k, &edges)
    }

    /// Path on `k` nodes closed by the edge `k-1 -> 0`.
    pub fn cycle(k: usize) -> Result<Self> {
        if k < 3 {
            return Err(Error::InvalidMotif(format!("cycle needs k >= 3, got {k}")));
        }
        let mut edges: Vec<_> = (1..k).map(|i| (i - 1, i)).collect();
        edges.push((k - 1, 0));
        Self::from_edges(k, &edges)
    }

    /// Star with center 0 and leaves `1..=d`.
    pub fn star(d: usize) -> Result<Self> {
        let edges: Vec<_> = (1..=d).map(|j| (0, j)).collect();
        Self::from_edges(d + 1, &edges)
    }

    /// Wedge: center 0 with leaves 1 and 2.
    pub fn wedge() -> Self {
        Self::star(2).unwrap()
    }

    /// Complete simple motif with edges `i -> j` for `i < j`.
    pub fn complete(q: usize) -> Result<Self> {
        let mut edges = Vec::new();
        for i in 0..q {
            for j in i + 1..q {
                edges.push((i, j));
            }
        }
        Self::from_edges(q, &edges)
    }

    /// `F_{k1,k2}`: two directed arms of lengths `k1` and `k2` leaving root 0.
    pub fn two_armed_path(k1: usize, k2: usize) -> Self {
        let k = k1 + k2 + 1;
        let mut edges = Vec::new();
        for i in 1..=k1 {
            edges.push((i - 1, i));
        }
        for i in 1..=k2 {
            let prev = if i == 1 { 0 } else { k1 + i - 1 };
            edges.push((prev, k1 + i));
        }
        Self::from_edges(k, &edges).unwrap()
    }

    /// `H_{k1,k2}`: the single edge joining the two arm ends of `F_{k1,k2}`.
    /// An arm of length 0 ends at the root.
    pub fn arm_ends_edge(k1: usize, k2: usize) -> Self {
        let k = k1 + k2 + 1;
        let end1 = k1;
        let end2 = if k2 == 0 { 0 } else { k1 + k2 };
        Self::from_edges(k, &[(end1, end2)]).unwrap()
    }

    /// Parses a named family: `P_5`, `C_3`, `S_20`, `W_3`, `K_7`, `F_3_4`,
    /// `H_0_0`, also accepting the braced forms `F_{3,4}` and `H_{0,0}`.
    pub fn named(token: &str) -> Result<Self> {
        let bad = || Error::InvalidMotif(format!("unrecognized motif name `{token}`"));
        let t = token.trim();
        let (family, rest) = t.split_once('_').ok_or_else(bad)?;
        let rest = rest.trim_start_matches('{').trim_end_matches('}');
        let nums: Vec<usize> = rest
            .split(['_', ','])
            .map(|s| s.trim().parse::<usize>())
            .collect::<std::result::Result<_, _>>()
            .map_err(|_| bad())?;
        match (family, nums.as_slice()) {
            ("P", [k]) if *k >= 1 => Self::path(*k),
            ("C", [k]) => Self::cycle(*k),
            ("S", [d]) => Self::star(*d),
            ("W", [3]) => Ok(Self::wedge()),
            ("K", [q]) if *q >= 1 => Self::complete(*q),
            ("F", [a, b]) => Ok(Self::two_armed_path(*a, *b)),
            ("H", [a, b]) => Ok(Self::arm_ends_edge(*a, *b)),
            _ => Err(bad()),
        }
    }

    pub fn k(&self) -> usize {
        self.k
    }

    #[inline]
    pub fn weight(&self, i: usize, j: usize) -> T {
        self.af[i * self.k + j]
    }

    pub fn matrix(&self) -> &[T] {
        &self.af
    }

    /// Positive entries `(i, j, A_F(i,j))` in row-major order.
    pub fn edges(&self) -> &[(usize, usize, T)] {
        &self.edges
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn l1_norm(&self) -> T {
        self.edges.iter().map(|&(_, _, w)| w).sum()
    }

    pub fn is_simple(&self) -> bool {
        self.simple
    }

    pub fn is_rooted_tree(&self) -> bool {
        self.tree.is_some()
    }

    pub fn tree(&self) -> Option<&TreeShape> {
        self.tree.as_ref()
    }

    pub fn kind(&self) -> MotifKind {
        if self.tree.is_some() {
            MotifKind::RootedTree
        } else if self.simple {
            MotifKind::Simple
        } else {
            MotifKind::General
        }
    }

    /// `max_i #{j != i : A_F(i,j) + A_F(j,i) > 0}`.
    pub fn max_degree(&self) -> usize {
        (0..self.k)
            .map(|i| {
                (0..self.k)
                    .filter(|&j| j != i && self.weight(i, j) + self.weight(j, i) > T::zero())
                    .count()
            })
            .max()
            .unwrap_or(0)
    }

    /// Entrywise sum `H + F`.
    pub fn plus(&self, other: &Self) -> Result<Self> {
        if self.k != other.k {
            return Err(Error::DimensionMismatch(format!(
                "motifs have {} and {} nodes",
                self.k, other.k
            )));
        }
        let af = self.af.iter().zip(&other.af).map(|(&a, &b)| a + b).collect();
        Self::from_dense(self.k, af)
    }

    /// Copy with `A_F(i,j)` set to `w`.
    pub fn with_edge(&self, i: usize, j: usize, w: T) -> Result<Self> {
        if i >= self.k || j >= self.k {
            return Err(Error::InvalidMotif(format!("edge ({i},{j}) out of range for k = {}", self.k)));
        }
        let mut af = self.af.clone();
        af[i * self.k + j] = w;
        Self::from_dense(self.k, af)
    }
}

fn classify_simple<T: Real>(k: usize, af: &[T]) -> bool {
    let zero_one = af.iter().all(|&w| w == T::zero() || w == T::one());
    let no_loops = (0..k).all(|i| af[i * k + i] == T::zero());
    let one_direction = (0..k).all(|i| (i + 1..k).all(|j| af[i * k + j] + af[j * k + i] <= T::one()));
    zero_one && no_loops && one_direction
}

fn classify_tree<T: Real>(k: usize, edges: &[(usize, usize, T)]) -> Option<TreeShape> {
    let mut parent = vec![None; k];
    for &(i, j, _) in edges {
        if j == 0 || i >= j || parent[j].is_some() {
            return None;
        }
        parent[j] = Some(i);
    }
    if (1..k).any(|j| parent[j].is_none()) {
        return None;
    }
    let mut children = vec![Vec::new(); k];
    for j in 1..k {
        children[parent[j].unwrap()].push(j);
    }
    Some(TreeShape { parent, children })
}
