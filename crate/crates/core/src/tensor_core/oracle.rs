//! Block-circulant and block-diagonal reference oracles.
//!
//! These materialize the `(n1*n3) x (n2*n3)` matrices that define the
//! t-product algebra. They are quadratic in `n3` and exist to anchor
//! correctness tests; hot paths work slicewise in the Fourier domain instead.

use super::{DenseTensor, Shape3, SpectralTensor};
use crate::error::{Error, Result};
use nalgebra::DMatrix;
use num_complex::Complex64;

/// Block-circulant matrix of the frontal slices: block `(p, q)` is slice
/// `(p - q) mod n3`.
pub fn bcirc(t: &DenseTensor) -> DMatrix<f64> {
    let (n1, n2, n3) = (t.shape().n1(), t.shape().n2(), t.shape().n3());
    let mut m = DMatrix::zeros(n1 * n3, n2 * n3);
    for p in 0..n3 {
        for q in 0..n3 {
            let k = (p + n3 - q) % n3;
            for i in 0..n1 {
                for j in 0..n2 {
                    m[(p * n1 + i, q * n2 + j)] = t.get(i, j, k);
                }
            }
        }
    }
    m
}

/// Stacks the Fourier slices on the diagonal of an `(n1*n3) x (n2*n3)`
/// complex matrix.
pub fn bdiag_unfold(t: &SpectralTensor) -> DMatrix<Complex64> {
    let (n1, n2, n3) = (t.shape().n1(), t.shape().n2(), t.shape().n3());
    let mut m = DMatrix::zeros(n1 * n3, n2 * n3);
    for k in 0..n3 {
        for i in 0..n1 {
            for j in 0..n2 {
                m[(k * n1 + i, k * n2 + j)] = t.get(i, j, k);
            }
        }
    }
    m
}

/// Exact left inverse of [`bdiag_unfold`] on block-diagonal matrices.
/// Rejects inputs whose off-block-diagonal Frobenius mass exceeds `tol`.
pub fn bdiag_fold(m: &DMatrix<Complex64>, shape: Shape3, tol: f64) -> Result<SpectralTensor> {
    let (n1, n2, n3) = (shape.n1(), shape.n2(), shape.n3());
    if m.nrows() != n1 * n3 || m.ncols() != n2 * n3 {
        return Err(Error::ShapeMismatch {
            expected: format!("{}x{} matrix", n1 * n3, n2 * n3),
            found: format!("{}x{} matrix", m.nrows(), m.ncols()),
        });
    }
    let mut out = SpectralTensor::zeros(shape);
    let mut off_mass_sq = 0.0;
    for r in 0..m.nrows() {
        for c in 0..m.ncols() {
            let (p, i) = (r / n1, r % n1);
            let (q, j) = (c / n2, c % n2);
            if p == q {
                out.set(i, j, p, m[(r, c)]);
            } else {
                off_mass_sq += m[(r, c)].norm_sqr();
            }
        }
    }
    let mass = off_mass_sq.sqrt();
    if mass > tol {
        return Err(Error::OffBlockDiagonal {
            mass,
            tolerance: tol,
        });
    }
    Ok(out)
}
