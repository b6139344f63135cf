//! One-sided Jacobi SVD for dense complex matrices.
//!
//! The Fourier slices factored by the t-SVD are small (desk scale tops out
//! around 64x64), frequently rank-deficient, and need singular values with
//! high relative accuracy. One-sided Jacobi delivers all three: it rotates
//! column pairs of the working matrix until they are mutually orthogonal,
//! at which point the column norms are the singular values and the
//! normalized columns are the left singular vectors.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

/// Relative off-diagonal threshold at which a column pair counts as
/// orthogonal.
const ORTHO_EPS: f64 = 1e-14;

/// Sweeps are quadratically convergent; this bound is never reached in
/// practice for the slice sizes the crate works with.
const MAX_SWEEPS: usize = 60;

/// Full SVD `m = u * diag(sigma) * v^H` with `u: m x k`, `v: n x k`,
/// `k = min(m, n)`, singular values sorted in nonincreasing order, and
/// orthonormal `u`, `v` (null-space columns included). `None` on the
/// (practically unreachable) sweep-limit overrun.
pub(crate) fn jacobi_svd(
    m: &DMatrix<Complex64>,
) -> Option<(DMatrix<Complex64>, DVector<f64>, DMatrix<Complex64>)> {
    if m.nrows() < m.ncols() {
        let (u, s, v) = jacobi_svd_tall(&m.adjoint())?;
        return Some((v, s, u));
    }
    jacobi_svd_tall(m)
}

/// Singular values only, sorted in nonincreasing order.
pub(crate) fn jacobi_singular_values(m: &DMatrix<Complex64>) -> Option<Vec<f64>> {
    let work = if m.nrows() < m.ncols() {
        m.adjoint()
    } else {
        m.clone()
    };
    let (work, scale) = prescale(work);
    let (g, _, converged) = orthogonalize_columns(work, false);
    if !converged {
        return None;
    }
    let mut sigma: Vec<f64> = (0..g.ncols()).map(|j| g.column(j).norm() * scale).collect();
    sigma.sort_by(|a, b| b.partial_cmp(a).unwrap());
    Some(sigma)
}

/// Normalizes by the largest entry magnitude so the sweeps never operate in
/// the denormal range, where rotation angles degenerate. The factor is
/// multiplied back into the singular values.
fn prescale(m: DMatrix<Complex64>) -> (DMatrix<Complex64>, f64) {
    let scale = m.iter().fold(0.0f64, |a, z| a.max(z.norm()));
    if scale == 0.0 || !scale.is_finite() {
        return (m, 1.0_f64.max(scale)); // zero matrix sweeps are no-ops
    }
    (m.map(|z| z / scale), scale)
}

fn jacobi_svd_tall(
    m: &DMatrix<Complex64>,
) -> Option<(DMatrix<Complex64>, DVector<f64>, DMatrix<Complex64>)> {
    let n = m.ncols();
    let (work, scale) = prescale(m.clone());
    let (g, v, converged) = orthogonalize_columns(work, true);
    if !converged {
        return None;
    }
    let v = v.expect("accumulated rotations");

    let mut order: Vec<usize> = (0..n).collect();
    let raw_norms: Vec<f64> = (0..n).map(|j| g.column(j).norm()).collect();
    order.sort_by(|&a, &b| raw_norms[b].partial_cmp(&raw_norms[a]).unwrap());

    let mut sigma = DVector::zeros(n);
    let mut u = DMatrix::zeros(m.nrows(), n);
    let mut v_sorted = DMatrix::zeros(n, n);
    // anything at or below the sweep deflation floor carries no usable
    // direction; its left vector is rebuilt by basis completion
    let largest = raw_norms.iter().cloned().fold(0.0f64, f64::max);
    let tiny = largest * 1e-13;
    let mut null_columns = Vec::new();
    for (dst, &src) in order.iter().enumerate() {
        sigma[dst] = raw_norms[src] * scale;
        v_sorted.set_column(dst, &v.column(src));
        if raw_norms[src] > tiny && raw_norms[src] > 0.0 {
            u.set_column(dst, &(g.column(src) / Complex64::new(raw_norms[src], 0.0)));
        } else {
            null_columns.push(dst); // tiny sigma kept; basis column fixed below
        }
    }
    complete_basis(&mut u, &null_columns);
    Some((u, sigma, v_sorted))
}

/// Rotates column pairs of `g` until orthogonal, optionally accumulating the
/// right rotations into a unitary `v` with `g_in * v = g_out`. The final
/// flag reports whether a fully quiet sweep was reached.
fn orthogonalize_columns(
    mut g: DMatrix<Complex64>,
    accumulate: bool,
) -> (DMatrix<Complex64>, Option<DMatrix<Complex64>>, bool) {
    let n = g.ncols();
    let mut v = accumulate.then(|| DMatrix::<Complex64>::identity(n, n));
    let mut converged = false;
    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        // columns this far below the dominant one are cancellation residue;
        // rotating them against full-size columns can never push the
        // correlation below a threshold relative to their own norm
        let max_sq = (0..n)
            .map(|j| g.column(j).norm_squared())
            .fold(0.0f64, f64::max);
        let deflation_floor = max_sq * 1e-28;
        for p in 0..n {
            for q in (p + 1)..n {
                let alpha: f64 = g.column(p).norm_squared();
                let beta: f64 = g.column(q).norm_squared();
                if alpha <= deflation_floor || beta <= deflation_floor {
                    continue;
                }
                let gamma: Complex64 = g.column(p).dotc(&g.column(q));
                let mag = gamma.norm();
                if mag <= ORTHO_EPS * (alpha * beta).sqrt() || mag == 0.0 {
                    continue;
                }
                // phase-align the pair, then apply the classic real rotation
                let phase = gamma / mag;
                let tau = (beta - alpha) / (2.0 * mag);
                let t = if tau.is_finite() {
                    tau.signum() / (tau.abs() + (1.0 + tau * tau).sqrt())
                } else {
                    0.5 / tau // first-order angle when the gap dwarfs gamma
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                if s == 0.0 {
                    continue; // numerically a no-op; do not block convergence
                }
                rotated = true;
                rotate_pair(&mut g, p, q, c, s, phase);
                if let Some(v) = v.as_mut() {
                    rotate_pair(v, p, q, c, s, phase);
                }
            }
        }
        if !rotated {
            converged = true;
            break;
        }
    }
    (g, v, converged)
}

/// Right-multiplies columns (p, q) by the unitary
/// `[[c, s*phase], [-s*conj(phase), c]]`.
fn rotate_pair(m: &mut DMatrix<Complex64>, p: usize, q: usize, c: f64, s: f64, phase: Complex64) {
    let c = Complex64::new(c, 0.0);
    let s = Complex64::new(s, 0.0);
    for i in 0..m.nrows() {
        let gp = m[(i, p)];
        let gq = m[(i, q)];
        m[(i, p)] = c * gp - s * phase.conj() * gq;
        m[(i, q)] = s * phase * gp + c * gq;
    }
}

/// Replaces the listed columns with vectors orthonormal to every other
/// column, extending the left factor to a full orthonormal set. Among the
/// canonical basis vectors the one with the largest residual after
/// projecting out the filled columns is always usable: with k < m columns
/// filled, some residual has norm at least sqrt((m - k) / m).
fn complete_basis(u: &mut DMatrix<Complex64>, null_columns: &[usize]) {
    let m = u.nrows();
    let mut filled: Vec<usize> = (0..u.ncols())
        .filter(|c| !null_columns.contains(c))
        .collect();
    for &col in null_columns {
        let mut best: Option<DVector<Complex64>> = None;
        let mut best_norm = 0.0;
        for basis in 0..m {
            let mut candidate = DVector::<Complex64>::zeros(m);
            candidate[basis] = Complex64::new(1.0, 0.0);
            for &f in &filled {
                let proj = u.column(f).dotc(&candidate);
                let column = u.column(f).into_owned();
                candidate -= column * proj;
            }
            let norm = candidate.norm();
            if norm > best_norm {
                best_norm = norm;
                best = Some(candidate);
            }
        }
        let mut winner = best.expect("nonempty basis");
        assert!(best_norm > 1e-8, "orthonormal completion failed");
        // a second projection pass tightens orthogonality lost to rounding
        for &f in &filled {
            let proj = u.column(f).dotc(&winner);
            let column = u.column(f).into_owned();
            winner -= column * proj;
        }
        winner /= Complex64::new(winner.norm(), 0.0);
        u.set_column(col, &winner);
        filled.push(col);
    }
}
