//! Path-motif transforms, path homomorphism densities and transitive
//! closures of symmetric networks from the eigendecomposition of
//! `B = diag(sqrt(alpha)) A diag(sqrt(alpha))`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{matmul, symmetric_eigen};
use crate::network::Network;
use crate::scalar::Real;

/// Relative tolerance for counting eigenvalues tied with the top one.
pub const DEFAULT_TOP_TOLERANCE: f64 = 1e-9;

#[derive(Clone, Debug, Serialize)]
pub struct SpectralDecomposition<T> {
    pub n: usize,
    /// Row-major `B`.
    pub b: Vec<T>,
    /// Descending.
    pub eigenvalues: Vec<T>,
    /// Column `l` is the eigenvector of `eigenvalues[l]`, at `[i * n + l]`.
    pub eigenvectors: Vec<T>,
    /// `sqrt(alpha)`.
    pub sqrt_alpha: Vec<T>,
    pub top_multiplicity: usize,
    pub tolerance: f64,
}

impl<T: Real> SpectralDecomposition<T> {
    pub fn new(net: &Network<T>) -> Result<Self> {
        Self::with_tolerance(net, DEFAULT_TOP_TOLERANCE)
    }

    pub fn with_tolerance(net: &Network<T>, tolerance: f64) -> Result<Self> {
        if !net.is_symmetric() {
            return Err(Error::Asymmetric);
        }
        let n = net.n();
        let sqrt_alpha: Vec<T> = net.alpha().iter().map(|a| a.sqrt()).collect();
        let a = net.to_dense();
        let mut b = vec![T::zero(); n * n];
        for i in 0..n {
            for j in 0..n {
                b[i * n + j] = sqrt_alpha[i] * a[i * n + j] * sqrt_alpha[j];
            }
        }
        let eig = symmetric_eigen(&b, n)?;
        let mut vectors = eig.vectors;
        // orientation: <sqrt(alpha), v> >= 0, else first nonzero entry positive
        let tiny = T::epsilon() * T::from_usize(n * 16).unwrap();
        for l in 0..n {
            let dot: T = (0..n).map(|i| sqrt_alpha[i] * vectors[i * n + l]).sum();
            let flip = if dot.abs() > tiny {
                dot < T::zero()
            } else {
                (0..n).map(|i| vectors[i * n + l]).find(|v| v.abs() > tiny).is_some_and(|v| v < T::zero())
            };
            if flip {
                for i in 0..n {
                    vectors[i * n + l] = -vectors[i * n + l];
                }
            }
        }
        let top = eig.values[0];
        let scale = top.abs().max(T::one()) * T::lit(tolerance);
        let top_multiplicity = eig.values.iter().take_while(|&&v| top - v <= scale).count();
        Ok(Self { n, b, eigenvalues: eig.values, eigenvectors: vectors, sqrt_alpha, top_multiplicity, tolerance })
    }

    fn coefficient(&self, l: usize) -> T {
        (0..self.n).map(|i| self.sqrt_alpha[i] * self.eigenvectors[i * self.n + l]).sum()
    }

    /// `t(P_k, G) = sum_l lambda_l^(k-1) <sqrt(alpha), v_l>^2`.
    pub fn path_hom_density(&self, k: usize) -> T {
        assert!(k >= 1);
        (0..self.n).map(|l| self.eigenvalues[l].powi(k as i32 - 1) * self.coefficient(l).powi(2)).sum()
    }

    /// Joint law of the path ends, row-major.
    pub fn path_transform_matrix(&self, k: usize) -> Result<Vec<T>> {
        if k < 2 {
            return Err(Error::InvalidArgument("path transform needs k >= 2".into()));
        }
        let weights: Vec<T> = self.eigenvalues.iter().map(|l| l.powi(k as i32 - 1)).collect();
        let z = self.path_hom_density(k);
        if !(z > T::zero()) {
            return Err(Error::NoHomomorphism);
        }
        snap_to_zero(self.projection(|l| weights[l], z))
    }

    /// Limit of the path transforms: normalized projection onto the top
    /// eigenspace.
    pub fn closure_matrix(&self) -> Result<Vec<T>> {
        let r = self.top_multiplicity;
        let z: T = (0..r).map(|l| self.coefficient(l).powi(2)).sum();
        if !(z > T::zero()) {
            return Err(Error::Numerical("top eigenspace is orthogonal to sqrt(alpha)".into()));
        }
        snap_to_zero(self.projection(|l| if l < r { T::one() } else { T::zero() }, z))
    }

    fn projection<F: Fn(usize) -> T>(&self, weight: F, z: T) -> Vec<T> {
        let n = self.n;
        let mut out = vec![T::zero(); n * n];
        for l in 0..n {
            let w = weight(l);
            if w == T::zero() {
                continue;
            }
            for i in 0..n {
                let vi = self.sqrt_alpha[i] * self.eigenvectors[i * n + l] * w;
                for j in 0..n {
                    out[i * n + j] += vi * self.sqrt_alpha[j] * self.eigenvectors[j * n + l];
                }
            }
        }
        out.iter_mut().for_each(|v| *v /= z);
        out
    }
}

/// Entries within `SNAP * max` of zero are rounding residue of the spectral
/// sum and are set to exactly zero; larger negative entries are an error.
const SNAP: f64 = 1e-12;

fn snap_to_zero<T: Real>(mut m: Vec<T>) -> Result<Vec<T>> {
    let top = m.iter().fold(T::zero(), |acc, v| acc.max(v.abs()));
    let tol = top * T::lit(SNAP);
    for v in m.iter_mut() {
        if v.abs() <= tol {
            *v = T::zero();
        } else if *v < T::zero() {
            return Err(Error::Numerical(format!("spectral sum produced negative entry {}", v.to_f64_lossy())));
        }
    }
    Ok(m)
}

/// `A^{P_k}` as a network with the same node weights. Symmetric networks go
/// through the eigendecomposition, others through matrix powers.
pub fn path_transform<T: Real>(net: &Network<T>, k: usize) -> Result<Network<T>> {
    if k < 2 {
        return Err(Error::InvalidArgument("path transform needs k >= 2".into()));
    }
    let m = if net.is_symmetric() {
        SpectralDecomposition::new(net)?.path_transform_matrix(k)?
    } else {
        direct_path_transform(net, k)?
    };
    Network::from_dense(net.n(), m, Some(net.alpha().to_vec()))
}

/// Path transform by repeated multiplication, `diag(alpha) (A diag(alpha))^(k-2) A diag(alpha)`
/// normalized to sum 1.
pub fn direct_path_transform<T: Real>(net: &Network<T>, k: usize) -> Result<Vec<T>> {
    let n = net.n();
    let alpha = net.alpha();
    let a = net.to_dense();
    let mut ad = a.clone();
    for i in 0..n {
        for j in 0..n {
            ad[i * n + j] *= alpha[j];
        }
    }
    let mut c = ad.clone();
    for _ in 2..k {
        c = matmul(&c, &ad, n);
    }
    for i in 0..n {
        for j in 0..n {
            c[i * n + j] *= alpha[i];
        }
    }
    let z: T = c.iter().copied().sum();
    if !(z > T::zero()) {
        return Err(Error::NoHomomorphism);
    }
    c.iter_mut().for_each(|v| *v /= z);
    Ok(c)
}

/// `t(P_k, G)` from the spectrum; requires a symmetric network.
pub fn path_hom_density<T: Real>(net: &Network<T>, k: usize) -> Result<T> {
    if k == 0 {
        return Err(Error::InvalidArgument("path needs at least one node".into()));
    }
    Ok(SpectralDecomposition::new(net)?.path_hom_density(k))
}

/// Transitive closure `lim_k A^{P_k}` of a symmetric network, with ties at
/// the top eigenvalue detected at [`DEFAULT_TOP_TOLERANCE`].
pub fn transitive_closure<T: Real>(net: &Network<T>) -> Result<Network<T>> {
    transitive_closure_with(net, DEFAULT_TOP_TOLERANCE)
}

pub fn transitive_closure_with<T: Real>(net: &Network<T>, tolerance: f64) -> Result<Network<T>> {
    let dec = SpectralDecomposition::with_tolerance(net, tolerance)?;
    Network::from_dense(net.n(), dec.closure_matrix()?, Some(net.alpha().to_vec()))
}

/// The three-node network with `A = [[1,s,0],[s,1,s],[0,s,1]]` and
/// `alpha = ((1-eps)/2, eps, (1-eps)/2)`.
pub fn bridged_pair_network<T: Real>(eps: T, s: T) -> Result<Network<T>> {
    let (o, z) = (T::one(), T::zero());
    let half = T::lit(0.5);
    Network::from_dense(3, vec![o, s, z, s, o, s, z, s, o], Some(vec![(o - eps) * half, eps, (o - eps) * half]))
}

/// Closed-form spectrum of `B` for [`bridged_pair_network`], descending:
/// `(1+eps)/4 + r/4`, `(1-eps)/2`, `(1+eps)/4 - r/4` with
/// `r = sqrt((3 eps - 1)^2 + 16 s^2 eps (1 - eps))`, sorted.
pub fn bridged_pair_eigenvalues(eps: f64, s: f64) -> [f64; 3] {
    let r = ((3.0 * eps - 1.0).powi(2) + 16.0 * s * s * eps * (1.0 - eps)).sqrt();
    let mut v = [(1.0 - eps) / 2.0, 0.25 * ((eps + 1.0) - r), 0.25 * ((eps + 1.0) + r)];
    v.sort_by(|a, b| b.total_cmp(a));
    v
}
