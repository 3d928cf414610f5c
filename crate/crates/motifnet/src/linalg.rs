//! Small dense helpers: row-major matrices and a cyclic Jacobi
//! eigensolver for real symmetric matrices.

use crate::error::{Error, Result};
use crate::scalar::Real;

const MAX_SWEEPS: usize = 100;

/// Eigenpairs sorted by decreasing eigenvalue. Column `l` of `vectors`
/// (entries `vectors[i * n + l]`) is the unit eigenvector of `values[l]`.
#[derive(Clone, Debug)]
pub struct SymmetricEigen<T: Real> {
    pub n: usize,
    pub values: Vec<T>,
    pub vectors: Vec<T>,
}

impl<T: Real> SymmetricEigen<T> {
    pub fn vector(&self, l: usize) -> Vec<T> {
        (0..self.n).map(|i| self.vectors[i * self.n + l]).collect()
    }
}

/// Eigendecomposition of the symmetric row-major `n x n` matrix `a`.
/// Only the upper triangle is trusted; the input is symmetrized first.
pub fn symmetric_eigen<T: Real>(a: &[T], n: usize) -> Result<SymmetricEigen<T>> {
    if a.len() != n * n {
        return Err(Error::DimensionMismatch(format!("expected {} entries, got {}", n * n, a.len())));
    }
    let mut m = a.to_vec();
    let half = T::lit(0.5);
    for i in 0..n {
        for j in i + 1..n {
            let s = (m[i * n + j] + m[j * n + i]) * half;
            m[i * n + j] = s;
            m[j * n + i] = s;
        }
    }
    let mut v = vec![T::zero(); n * n];
    for i in 0..n {
        v[i * n + i] = T::one();
    }
    let frob2: T = m.iter().map(|&x| x * x).sum();
    let tol2 = frob2 * T::epsilon() * T::epsilon();
    let mut converged = false;
    for _ in 0..MAX_SWEEPS {
        let off2: T = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| m[i * n + j] * m[i * n + j])
            .sum();
        if off2 <= tol2 {
            converged = true;
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                rotate(&mut m, &mut v, n, p, q);
            }
        }
    }
    if !converged {
        return Err(Error::Numerical("Jacobi eigensolver did not converge".into()));
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&x, &y| m[y * n + y].partial_cmp(&m[x * n + x]).unwrap_or(std::cmp::Ordering::Equal));
    let values = order.iter().map(|&l| m[l * n + l]).collect();
    let mut vectors = vec![T::zero(); n * n];
    for (new_l, &l) in order.iter().enumerate() {
        for i in 0..n {
            vectors[i * n + new_l] = v[i * n + l];
        }
    }
    Ok(SymmetricEigen { n, values, vectors })
}

fn rotate<T: Real>(m: &mut [T], v: &mut [T], n: usize, p: usize, q: usize) {
    let apq = m[p * n + q];
    if apq == T::zero() {
        return;
    }
    let app = m[p * n + p];
    let aqq = m[q * n + q];
    let theta = (aqq - app) / (T::lit(2.0) * apq);
    let t = if theta.abs() > T::lit(1e150) {
        T::one() / (T::lit(2.0) * theta)
    } else {
        let sign = if theta >= T::zero() { T::one() } else { -T::one() };
        sign / (theta.abs() + (theta * theta + T::one()).sqrt())
    };
    let c = T::one() / (t * t + T::one()).sqrt();
    let s = t * c;
    for r in 0..n {
        let (arp, arq) = (m[r * n + p], m[r * n + q]);
        m[r * n + p] = c * arp - s * arq;
        m[r * n + q] = s * arp + c * arq;
    }
    for r in 0..n {
        let (apr, aqr) = (m[p * n + r], m[q * n + r]);
        m[p * n + r] = c * apr - s * aqr;
        m[q * n + r] = s * apr + c * aqr;
    }
    m[p * n + q] = T::zero();
    m[q * n + p] = T::zero();
    for r in 0..n {
        let (vrp, vrq) = (v[r * n + p], v[r * n + q]);
        v[r * n + p] = c * vrp - s * vrq;
        v[r * n + q] = s * vrp + c * vrq;
    }
}

/// Row-major product of `n x n` matrices.
pub fn matmul<T: Real>(a: &[T], b: &[T], n: usize) -> Vec<T> {
    let mut c = vec![T::zero(); n * n];
    for i in 0..n {
        for l in 0..n {
            let ail = a[i * n + l];
            if ail == T::zero() {
                continue;
            }
            for j in 0..n {
                c[i * n + j] += ail * b[l * n + j];
            }
        }
    }
    c
}

/// Row vector times matrix.
pub fn vecmat<T: Real>(x: &[T], a: &[T], n: usize) -> Vec<T> {
    let mut y = vec![T::zero(); n];
    for (i, &xi) in x.iter().enumerate() {
        if xi == T::zero() {
            continue;
        }
        for j in 0..n {
            y[j] += xi * a[i * n + j];
        }
    }
    y
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn diagonalizes_small_matrix() {
        let a = [2.0, 1.0, 0.0, 1.0, 2.0, 1.0, 0.0, 1.0, 2.0];
        let e = symmetric_eigen(&a, 3).unwrap();
        let r2 = 2f64.sqrt();
        let expect = [2.0 + r2, 2.0, 2.0 - r2];
        for (x, y) in e.values.iter().zip(expect) {
            assert!((x - y).abs() < 1e-14);
        }
        for l in 0..3 {
            let v = e.vector(l);
            for i in 0..3 {
                let av: f64 = (0..3).map(|j| a[i * 3 + j] * v[j]).sum();
                assert!((av - e.values[l] * v[i]).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn handles_identity_and_one_by_one() {
        let e = symmetric_eigen(&[1.0, 0.0, 0.0, 1.0], 2).unwrap();
        assert_eq!(e.values, vec![1.0, 1.0]);
        let e = symmetric_eigen(&[3.5f32], 1).unwrap();
        assert_eq!(e.values, vec![3.5]);
    }

    #[test]
    fn products() {
        let a = [1.0, 2.0, 3.0, 4.0];
        assert_eq!(matmul(&a, &a, 2), vec![7.0, 10.0, 15.0, 22.0]);
        assert_eq!(vecmat(&[1.0, 1.0], &a, 2), vec![4.0, 6.0]);
    }
}
