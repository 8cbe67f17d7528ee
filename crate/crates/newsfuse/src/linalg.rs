//! Dense symmetric eigendecomposition and spectral pseudo-inversion for the
//! small covariance matrices that arise from a handful of auxiliary sources.
//!
//! Matrices here have dimension equal to the number of sources (a few, at
//! most 64), so a cyclic Jacobi sweep is simple, robust, and fast enough.

#![allow(clippy::needless_range_loop)]

use crate::num::{c, Real};
use crate::{Error, Result};

const MAX_DIM: usize = 64;
const MAX_SWEEPS: usize = 100;

/// Symmetric real matrix, symmetrized on construction.
#[derive(Debug, Clone, PartialEq)]
pub struct SymMatrix<R: Real = f64> {
    dim: usize,
    data: Vec<R>, // row-major dim×dim
}

impl<R: Real> SymMatrix<R> {
    /// Builds a matrix from rows, averaging `a` with its transpose.
    pub fn from_rows(rows: &[Vec<R>]) -> Result<Self> {
        let dim = rows.len();
        if dim == 0 {
            return Err(Error::InvalidInput("matrix needs dimension >= 1".into()));
        }
        if rows.iter().any(|r| r.len() != dim) {
            return Err(Error::InvalidInput(
                "matrix rows must all have length dim".into(),
            ));
        }
        Self::from_fn(dim, |i, j| rows[i][j])
    }

    /// Builds a matrix entry by entry, symmetrizing (a+aᵀ)/2.
    pub fn from_fn(dim: usize, f: impl Fn(usize, usize) -> R) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidInput("matrix needs dimension >= 1".into()));
        }
        let half = c::<R>(0.5);
        let mut data = vec![R::zero(); dim * dim];
        for i in 0..dim {
            for j in i..dim {
                let v = if i == j {
                    f(i, j)
                } else {
                    half * (f(i, j) + f(j, i))
                };
                if !v.is_finite() {
                    return Err(Error::InvalidInput(format!(
                        "non-finite matrix entry at ({i}, {j})"
                    )));
                }
                data[i * dim + j] = v;
                data[j * dim + i] = v;
            }
        }
        Ok(Self { dim, data })
    }

    pub fn identity(dim: usize) -> Self {
        Self::from_fn(dim, |i, j| if i == j { R::one() } else { R::zero() })
            .expect("identity is well-formed")
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, i: usize, j: usize) -> R {
        self.data[i * self.dim + j]
    }

    /// x · A · y.
    pub fn bilinear(&self, x: &[R], y: &[R]) -> Result<R> {
        if x.len() != self.dim || y.len() != self.dim {
            return Err(Error::InvalidInput(format!(
                "bilinear form needs vectors of length {}, got {} and {}",
                self.dim,
                x.len(),
                y.len()
            )));
        }
        let mut total = R::zero();
        for i in 0..self.dim {
            let mut row = R::zero();
            for j in 0..self.dim {
                row += self.get(i, j) * y[j];
            }
            total += x[i] * row;
        }
        Ok(total)
    }

    pub fn mul_vec(&self, x: &[R]) -> Result<Vec<R>> {
        if x.len() != self.dim {
            return Err(Error::InvalidInput(format!(
                "matrix-vector product needs length {}, got {}",
                self.dim,
                x.len()
            )));
        }
        Ok((0..self.dim)
            .map(|i| {
                let mut sum = R::zero();
                for j in 0..self.dim {
                    sum += self.get(i, j) * x[j];
                }
                sum
            })
            .collect())
    }

    pub fn max_abs(&self) -> R {
        self.data.iter().fold(R::zero(), |acc, v| acc.max(v.abs()))
    }

    fn frobenius(&self) -> R {
        let mut sum = R::zero();
        for v in &self.data {
            sum += *v * *v;
        }
        sum.sqrt()
    }
}

/// Eigenvalues (descending) and matching orthonormal eigenvectors of a
/// symmetric matrix, plus the count of eigenvalues retained by the
/// spectrum-mass cutoff.
#[derive(Debug, Clone)]
pub struct SpectralDecomposition<R: Real = f64> {
    eigenvalues: Vec<R>,
    eigenvectors: Vec<Vec<R>>, // eigenvectors[k] pairs with eigenvalues[k]
    retained: usize,
}

impl<R: Real> SpectralDecomposition<R> {
    pub fn eigenvalues(&self) -> &[R] {
        &self.eigenvalues
    }

    pub fn eigenvector(&self, k: usize) -> &[R] {
        &self.eigenvectors[k]
    }

    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    /// Number of leading eigenvalues the cutoff kept.
    pub fn retained(&self) -> usize {
        self.retained
    }

    /// Applies the retention rule for `eig_cutoff` in (0, 1]: negative
    /// eigenvalues are clamped to zero, then the smallest prefix of the
    /// descending spectrum whose mass reaches `eig_cutoff` of the clamped
    /// total is kept, and retained eigenvalues at or below 1e-12·λ₁ are
    /// dropped again.
    pub fn retain(mut self, eig_cutoff: R) -> Result<Self> {
        if !(eig_cutoff > R::zero() && eig_cutoff <= R::one()) {
            return Err(Error::InvalidInput(format!(
                "eig_cutoff must lie in (0, 1], got {eig_cutoff}"
            )));
        }
        let leading = self.eigenvalues[0];
        if !(leading > R::zero()) {
            return Err(Error::NoPositiveSpectrum);
        }
        let mut total = R::zero();
        for &ev in &self.eigenvalues {
            if ev > R::zero() {
                total += ev;
            }
        }
        let target = eig_cutoff * total;
        let mut cum = R::zero();
        let mut k = 0usize;
        while k < self.eigenvalues.len() && cum < target && self.eigenvalues[k] > R::zero() {
            cum += self.eigenvalues[k];
            k += 1;
        }
        let floor = c::<R>(1e-12) * leading;
        while k > 1 && self.eigenvalues[k - 1] <= floor {
            k -= 1;
        }
        self.retained = k;
        Ok(self)
    }

    /// V_k diag(1/λᵢ) V_kᵀ over the retained subspace.
    pub fn pseudo_inverse(&self) -> SymMatrix<R> {
        let dim = self.dim();
        let mut data = vec![R::zero(); dim * dim];
        for k in 0..self.retained {
            let inv = self.eigenvalues[k].recip();
            let v = &self.eigenvectors[k];
            for i in 0..dim {
                let w = inv * v[i];
                for j in 0..dim {
                    data[i * dim + j] += w * v[j];
                }
            }
        }
        SymMatrix { dim, data }
    }

    /// V Λ Vᵀ over the full spectrum (reconstruction of the input).
    pub fn reconstruct(&self) -> SymMatrix<R> {
        let dim = self.dim();
        let mut data = vec![R::zero(); dim * dim];
        for k in 0..dim {
            let ev = self.eigenvalues[k];
            let v = &self.eigenvectors[k];
            for i in 0..dim {
                let w = ev * v[i];
                for j in 0..dim {
                    data[i * dim + j] += w * v[j];
                }
            }
        }
        SymMatrix { dim, data }
    }
}

/// Full eigendecomposition by cyclic Jacobi rotations. `retained` starts at
/// the full dimension; apply [`SpectralDecomposition::retain`] for a cutoff.
pub fn sym_eigen<R: Real>(a: &SymMatrix<R>) -> Result<SpectralDecomposition<R>> {
    let m = a.dim;
    if m > MAX_DIM {
        return Err(Error::InvalidInput(format!(
            "eigendecomposition supports dimension <= {MAX_DIM}, got {m}"
        )));
    }
    let mut work: Vec<Vec<R>> = (0..m)
        .map(|i| (0..m).map(|j| a.get(i, j)).collect())
        .collect();
    let mut vecs: Vec<Vec<R>> = (0..m)
        .map(|i| {
            (0..m)
                .map(|j| if i == j { R::one() } else { R::zero() })
                .collect()
        })
        .collect();

    let tol = c::<R>(1e-12) * a.frobenius();
    let mut converged = false;
    for _ in 0..MAX_SWEEPS {
        if off_diagonal_norm(&work) <= tol {
            converged = true;
            break;
        }
        for p in 0..m {
            for q in (p + 1)..m {
                jacobi_rotate(&mut work, &mut vecs, p, q);
            }
        }
    }
    if !converged && off_diagonal_norm(&work) > tol {
        return Err(Error::NoConvergence(MAX_SWEEPS));
    }

    // vecs as stored holds eigenvectors in its columns; pull them out and
    // sort pairs by descending eigenvalue.
    let mut pairs: Vec<(R, Vec<R>)> = (0..m)
        .map(|k| {
            let column: Vec<R> = (0..m).map(|i| vecs[i][k]).collect();
            (work[k][k], column)
        })
        .collect();
    pairs.sort_by(|a, b| b.0.partial_cmp(&a.0).expect("finite eigenvalues"));

    let (eigenvalues, eigenvectors) = pairs.into_iter().unzip();
    Ok(SpectralDecomposition {
        eigenvalues,
        eigenvectors,
        retained: m,
    })
}

/// Pseudo-inverse of a symmetric matrix under the eigenvalue-proportion
/// cutoff. See [`SpectralDecomposition::retain`] for the retention rule.
pub fn spectral_pseudo_inverse<R: Real>(a: &SymMatrix<R>, eig_cutoff: R) -> Result<SymMatrix<R>> {
    Ok(sym_eigen(a)?.retain(eig_cutoff)?.pseudo_inverse())
}

fn off_diagonal_norm<R: Real>(a: &[Vec<R>]) -> R {
    let m = a.len();
    let mut sum = R::zero();
    for i in 0..m {
        for j in (i + 1)..m {
            sum += a[i][j] * a[i][j];
        }
    }
    (sum + sum).sqrt()
}

fn jacobi_rotate<R: Real>(a: &mut [Vec<R>], v: &mut [Vec<R>], p: usize, q: usize) {
    let m = a.len();
    let apq = a[p][q];
    if apq == R::zero() {
        return;
    }
    let theta = (a[q][q] - a[p][p]) / (c::<R>(2.0) * apq);
    // t = sign(θ)/(|θ| + sqrt(θ²+1)), with a large-θ fallback that avoids
    // overflow in θ².
    let t = if theta.abs() > c(1e150) {
        (c::<R>(2.0) * theta).recip()
    } else {
        let s = (theta * theta + R::one()).sqrt();
        if theta >= R::zero() {
            (theta + s).recip()
        } else {
            -((-theta + s).recip())
        }
    };
    let cos = (t * t + R::one()).sqrt().recip();
    let sin = t * cos;
    let tau = sin / (R::one() + cos);

    let app = a[p][p];
    let aqq = a[q][q];
    a[p][p] = app - t * apq;
    a[q][q] = aqq + t * apq;
    a[p][q] = R::zero();
    a[q][p] = R::zero();
    for i in 0..m {
        if i == p || i == q {
            continue;
        }
        let aip = a[i][p];
        let aiq = a[i][q];
        a[i][p] = aip - sin * (aiq + tau * aip);
        a[p][i] = a[i][p];
        a[i][q] = aiq + sin * (aip - tau * aiq);
        a[q][i] = a[i][q];
    }
    for row in v.iter_mut() {
        let vip = row[p];
        let viq = row[q];
        row[p] = vip - sin * (viq + tau * vip);
        row[q] = viq + sin * (vip - tau * viq);
    }
}
