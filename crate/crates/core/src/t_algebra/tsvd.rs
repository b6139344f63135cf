//! t-SVD, tensor norms and ranks, and singular value thresholding.
//!
//! Everything here reduces to dense complex SVDs of the Fourier slices.
//! Only slices `0..=n3/2` are factored; the rest follow by conjugate
//! symmetry, which keeps the assembled factors exactly real.

use super::jacobi_svd::{jacobi_singular_values, jacobi_svd};
use crate::error::{Error, Result};
use crate::tensor_core::dft::{half_slices, idft_mode3_unchecked, set_conjugate_pair};
use crate::tensor_core::{dft_mode3, DenseTensor, Shape3, SpectralTensor};
use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

/// Skinny t-SVD factors `A = U * S * V^*`.
///
/// `U` is `n1 x r x n3`, `S` is `r x r x n3` and f-diagonal, `V` is
/// `n2 x r x n3`, where `r = max(tubal_rank, 1)` in skinny mode and
/// `min(n1, n2)` in full mode.
#[derive(Clone, Debug)]
pub struct TSvdFactors {
    pub u: DenseTensor,
    pub s: DenseTensor,
    pub v: DenseTensor,
    pub tubal_rank: usize,
}

impl TSvdFactors {
    /// Reconstructs `U * S * V^*`.
    pub fn reconstruct(&self) -> DenseTensor {
        super::tprod3(&self.u, &self.s, &super::ttranspose(&self.v))
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum TsvdMode {
    /// Keep `min(n1, n2)` singular tubes.
    Full,
    /// Keep only the nonzero singular tubes (at least one column).
    Skinny,
}

fn complex_svd(
    m: &DMatrix<Complex64>,
    slice: usize,
) -> Result<(DMatrix<Complex64>, DVector<f64>, DMatrix<Complex64>)> {
    jacobi_svd(m).ok_or(Error::SvdFailed { slice })
}

/// Fixes the per-column phase ambiguity: the largest-magnitude entry of each
/// left singular vector is made real and positive, with the matching phase
/// applied to the right singular vector so the product is unchanged.
fn canonicalize_phases(u: &mut DMatrix<Complex64>, v: &mut DMatrix<Complex64>) {
    for c in 0..u.ncols() {
        let mut best = 0usize;
        let mut best_mag = 0.0;
        for i in 0..u.nrows() {
            let mag = u[(i, c)].norm();
            if mag > best_mag {
                best_mag = mag;
                best = i;
            }
        }
        if best_mag > 0.0 {
            let phase = u[(best, c)] / best_mag;
            let factor = phase.conj();
            for i in 0..u.nrows() {
                u[(i, c)] *= factor;
            }
            for i in 0..v.nrows() {
                v[(i, c)] *= factor;
            }
        }
    }
}

/// Singular values of every Fourier slice, in nonincreasing order per slice.
/// Row `k` of the result holds the singular values of slice `k`.
pub fn singular_values_per_slice(a: &DenseTensor) -> Result<Vec<Vec<f64>>> {
    let shape = a.shape();
    let fa = dft_mode3(a);
    let mut out = vec![Vec::new(); shape.n3()];
    for (k, mirror) in half_slices(shape.n3()) {
        let vals =
            jacobi_singular_values(&fa.fourier_slice(k)).ok_or(Error::SvdFailed { slice: k })?;
        if let Some(mirror) = mirror {
            out[mirror] = vals.clone();
        }
        out[k] = vals;
    }
    Ok(out)
}

/// Relative threshold below which a singular value counts as zero, scaled by
/// the conditioning of the slicewise problems.
pub(crate) fn rank_threshold(shape: Shape3, sigma_max: f64) -> f64 {
    1e-10 * shape.n_max().max(shape.n3()) as f64 * sigma_max
}

fn ranks_from_singular_values(shape: Shape3, sigmas: &[Vec<f64>]) -> (usize, f64) {
    let sigma_max = sigmas
        .iter()
        .flat_map(|s| s.iter().copied())
        .fold(0.0f64, f64::max);
    if sigma_max == 0.0 {
        return (0, 0.0);
    }
    let thr = rank_threshold(shape, sigma_max);
    let mut tubal = 0usize;
    let mut total = 0usize;
    for slice in sigmas {
        let rank_k = slice.iter().filter(|&&s| s > thr).count();
        tubal = tubal.max(rank_k);
        total += rank_k;
    }
    (tubal, total as f64 / shape.n3() as f64)
}

/// Number of nonzero singular tubes.
pub fn tubal_rank(a: &DenseTensor) -> usize {
    let sigmas = singular_values_per_slice(a).expect("slicewise SVD");
    ranks_from_singular_values(a.shape(), &sigmas).0
}

/// Average of the Fourier-slice matrix ranks, equal to
/// `rank(bcirc(A)) / n3`.
pub fn average_rank(a: &DenseTensor) -> f64 {
    let sigmas = singular_values_per_slice(a).expect("slicewise SVD");
    ranks_from_singular_values(a.shape(), &sigmas).1
}

/// Tensor nuclear norm: the sum of all Fourier-slice singular values divided
/// by `n3`; equals the matrix nuclear norm of `bcirc(A) / n3`.
pub fn tnn(a: &DenseTensor) -> f64 {
    let sigmas = singular_values_per_slice(a).expect("slicewise SVD");
    sigmas.iter().flatten().sum::<f64>() / a.shape().n3() as f64
}

/// Tensor spectral norm: the largest Fourier-slice singular value; equals the
/// matrix spectral norm of `bcirc(A)`.
pub fn spectral_norm(a: &DenseTensor) -> f64 {
    let sigmas = singular_values_per_slice(a).expect("slicewise SVD");
    sigmas
        .iter()
        .flat_map(|s| s.iter().copied())
        .fold(0.0, f64::max)
}

/// t-SVD via slicewise SVD in the Fourier domain.
pub fn tsvd(a: &DenseTensor, mode: TsvdMode) -> Result<TSvdFactors> {
    let shape = a.shape();
    let (n1, n2, n3) = (shape.n1(), shape.n2(), shape.n3());
    let fa = dft_mode3(a);

    let mut factors = Vec::with_capacity(n3 / 2 + 1);
    let mut sigma_max = 0.0f64;
    for (k, _) in half_slices(n3) {
        let (mut u, s, mut v) = complex_svd(&fa.fourier_slice(k), k)?;
        canonicalize_phases(&mut u, &mut v);
        sigma_max = s.iter().fold(sigma_max, |m, &x| m.max(x));
        factors.push((u, s, v));
    }

    // tubal rank across all slices (mirrored slices share singular values)
    let thr = rank_threshold(shape, sigma_max);
    let tubal = if sigma_max == 0.0 {
        0
    } else {
        factors
            .iter()
            .map(|(_, s, _)| s.iter().filter(|&&x| x > thr).count())
            .max()
            .unwrap_or(0)
    };
    let r = match mode {
        TsvdMode::Full => n1.min(n2),
        TsvdMode::Skinny => tubal.max(1).min(n1.min(n2)),
    };

    let u_shape = Shape3::new(n1, r, n3)?;
    let s_shape = Shape3::new(r, r, n3)?;
    let v_shape = Shape3::new(n2, r, n3)?;
    let mut fu = SpectralTensor::zeros(u_shape);
    let mut fs = SpectralTensor::zeros(s_shape);
    let mut fv = SpectralTensor::zeros(v_shape);
    for (idx, (k, mirror)) in half_slices(n3).enumerate() {
        let (u, s, v) = &factors[idx];
        let uk = u.columns(0, r).into_owned();
        let vk = v.columns(0, r).into_owned();
        let mut sk = DMatrix::zeros(r, r);
        for c in 0..r {
            sk[(c, c)] = Complex64::new(s[c], 0.0);
        }
        set_conjugate_pair(&mut fu, u_shape, k, mirror, &uk);
        set_conjugate_pair(&mut fs, s_shape, k, mirror, &sk);
        set_conjugate_pair(&mut fv, v_shape, k, mirror, &vk);
    }
    Ok(TSvdFactors {
        u: idft_mode3_unchecked(&fu).0,
        s: idft_mode3_unchecked(&fs).0,
        v: idft_mode3_unchecked(&fv).0,
        tubal_rank: tubal,
    })
}

/// Proximal operator of `tau * tnn`: shrinks every Fourier-slice singular
/// value by `tau`.
///
/// Because the nuclear norm carries the `1/n3` factor while the squared
/// Frobenius distance satisfies `||X||_F^2 = ||X_bar||_F^2 / n3`, the two
/// factors cancel and the slicewise shrinkage amount is exactly `tau`.
pub fn tsvt(a: &DenseTensor, tau: f64) -> DenseTensor {
    tsvt_with_tnn(a, tau).0
}

/// [`tsvt`] also returning the nuclear norm of the thresholded result, which
/// falls out of the same slicewise SVDs.
pub(crate) fn tsvt_with_tnn(a: &DenseTensor, tau: f64) -> (DenseTensor, f64) {
    assert!(tau >= 0.0, "tsvt: tau must be nonnegative");
    let shape = a.shape();
    let fa = dft_mode3(a);
    let mut out = SpectralTensor::zeros(shape);
    let mut shrunk_sum = 0.0;
    for (k, mirror) in half_slices(shape.n3()) {
        let (u, s, v) = complex_svd(&fa.fourier_slice(k), k).expect("slicewise SVD");
        let shrunk: Vec<f64> = s.iter().map(|&x| (x - tau).max(0.0)).collect();
        let weight = if mirror.is_some() { 2.0 } else { 1.0 };
        shrunk_sum += weight * shrunk.iter().sum::<f64>();
        let mut slice = DMatrix::zeros(shape.n1(), shape.n2());
        for (c, &sc) in shrunk.iter().enumerate() {
            if sc > 0.0 {
                let uc = u.column(c);
                let vc = v.column(c);
                for i in 0..shape.n1() {
                    for j in 0..shape.n2() {
                        slice[(i, j)] += uc[i] * sc * vc[j].conj();
                    }
                }
            }
        }
        set_conjugate_pair(&mut out, shape, k, mirror, &slice);
    }
    (idft_mode3_unchecked(&out).0, shrunk_sum / shape.n3() as f64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::t_algebra::{identity_tensor, tprod, ttranspose};
    use crate::tensor_core::bcirc;
    use rand::Rng;
    use rand_chacha::{rand_core::SeedableRng, ChaCha8Rng};

    fn random_tensor(n1: usize, n2: usize, n3: usize, seed: u64) -> DenseTensor {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        DenseTensor::from_fn(Shape3::new(n1, n2, n3).unwrap(), |_, _, _| {
            rng.gen::<f64>() * 2.0 - 1.0
        })
    }

    fn assert_factor_invariants(f: &TSvdFactors, a: &DenseTensor) {
        let r = f.u.shape().n2();
        let id_r = identity_tensor(r, a.shape().n3());
        let utu = tprod(&ttranspose(&f.u), &f.u).unwrap();
        let vtv = tprod(&ttranspose(&f.v), &f.v).unwrap();
        assert!((&utu - &id_r).infinity_norm() < 1e-8, "U not orthonormal");
        assert!((&vtv - &id_r).infinity_norm() < 1e-8, "V not orthonormal");
        let recon = f.reconstruct();
        let scale = a.frobenius_norm().max(1.0);
        assert!(
            (&recon - a).frobenius_norm() < 1e-8 * scale,
            "reconstruction residual too large"
        );
        // f-diagonal S with nonnegative, nonincreasing Fourier diagonals
        let fs = dft_mode3(&f.s);
        for k in 0..a.shape().n3() {
            let m = fs.fourier_slice(k);
            let mut prev = f64::INFINITY;
            for i in 0..r {
                for j in 0..r {
                    if i != j {
                        assert!(m[(i, j)].norm() < 1e-8, "S not f-diagonal");
                    }
                }
                let d = m[(i, i)];
                assert!(d.im.abs() < 1e-8 && d.re > -1e-8, "S diagonal not real+");
                assert!(d.re <= prev + 1e-8, "S diagonal not sorted");
                prev = d.re;
            }
        }
    }

    #[test]
    fn identity_factors() {
        let id = identity_tensor(4, 3);
        let f = tsvd(&id, TsvdMode::Skinny).unwrap();
        assert_eq!(f.tubal_rank, 4);
        assert!((&f.s - &id).infinity_norm() < 1e-10);
        assert_factor_invariants(&f, &id);
    }

    #[test]
    fn rank_one_outer_product() {
        let u = random_tensor(5, 1, 4, 1);
        let v = random_tensor(3, 1, 4, 2);
        let a = tprod(&u, &ttranspose(&v)).unwrap();
        let f = tsvd(&a, TsvdMode::Skinny).unwrap();
        assert_eq!(f.tubal_rank, 1);
        assert!((&f.reconstruct() - &a).frobenius_norm() < 1e-10 * a.frobenius_norm());
        assert_factor_invariants(&f, &a);
    }

    #[test]
    fn bcirc_singular_values_match_slicewise() {
        let a = random_tensor(4, 3, 5, 3);
        let mut ours: Vec<f64> = singular_values_per_slice(&a)
            .unwrap()
            .into_iter()
            .flatten()
            .collect();
        let mut oracle: Vec<f64> = bcirc(&a)
            .svd(false, false)
            .singular_values
            .iter()
            .copied()
            .collect();
        ours.sort_by(|x, y| y.partial_cmp(x).unwrap());
        oracle.sort_by(|x, y| y.partial_cmp(x).unwrap());
        assert_eq!(ours.len(), oracle.len());
        for (x, y) in ours.iter().zip(&oracle) {
            assert!((x - y).abs() < 1e-8, "{x} vs {y}");
        }
    }

    #[test]
    fn full_mode_factors_random_tensor() {
        let a = random_tensor(4, 6, 3, 17);
        let f = tsvd(&a, TsvdMode::Full).unwrap();
        assert_eq!(f.u.shape().n2(), 4);
        assert_factor_invariants(&f, &a);
    }

    #[test]
    fn ranks_of_identity_and_zero() {
        let id = identity_tensor(3, 4);
        assert_eq!(tubal_rank(&id), 3);
        assert!((average_rank(&id) - 3.0).abs() < 1e-12);
        let z = DenseTensor::zeros(Shape3::new(3, 3, 4).unwrap());
        assert_eq!(tubal_rank(&z), 0);
        assert_eq!(average_rank(&z), 0.0);
        let fz = tsvd(&z, TsvdMode::Skinny).unwrap();
        assert_eq!(fz.tubal_rank, 0);
        assert!(fz.reconstruct().frobenius_norm() < 1e-12);
    }

    #[test]
    fn rank_one_has_average_rank_at_most_one() {
        let u = random_tensor(4, 1, 3, 5);
        let v = random_tensor(4, 1, 3, 6);
        let a = tprod(&u, &ttranspose(&v)).unwrap();
        assert_eq!(tubal_rank(&a), 1);
        assert!(average_rank(&a) <= 1.0 + 1e-12);
    }

    #[test]
    fn norms_of_identity_and_zero() {
        let id = identity_tensor(5, 3);
        assert!((tnn(&id) - 5.0).abs() < 1e-10);
        assert!((spectral_norm(&id) - 1.0).abs() < 1e-12);
        let z = DenseTensor::zeros(Shape3::new(2, 3, 2).unwrap());
        assert_eq!(tnn(&z), 0.0);
        assert_eq!(spectral_norm(&z), 0.0);
    }

    #[test]
    fn norms_match_bcirc_oracle() {
        let a = random_tensor(4, 4, 3, 7);
        let c = bcirc(&a);
        let sv = c.svd(false, false).singular_values;
        let nuclear: f64 = sv.iter().sum();
        let spectral = sv.iter().fold(0.0f64, |m, &x| m.max(x));
        assert!((tnn(&a) - nuclear / 3.0).abs() < 1e-8);
        assert!((spectral_norm(&a) - spectral).abs() < 1e-8);
    }

    #[test]
    fn tsvt_with_zero_threshold_is_identity() {
        let a = random_tensor(3, 4, 4, 8);
        assert!((&tsvt(&a, 0.0) - &a).infinity_norm() < 1e-10);
    }

    #[test]
    fn tsvt_shrinks_identity() {
        let id = identity_tensor(4, 3);
        for &tau in &[0.25, 1.0, 2.0] {
            let shrunk = tsvt(&id, tau);
            let expected = id.scale((1.0 - tau).max(0.0));
            assert!((&shrunk - &expected).infinity_norm() < 1e-12);
        }
    }

    #[test]
    fn tsvt_returns_tnn_of_result() {
        let a = random_tensor(4, 4, 3, 9);
        let (x, reported) = tsvt_with_tnn(&a, 0.3);
        assert!((reported - tnn(&x)).abs() < 1e-8);
    }
}
