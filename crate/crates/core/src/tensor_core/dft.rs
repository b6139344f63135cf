//! Mode-3 discrete Fourier transform of tubes.
//!
//! The forward transform is unnormalized; the inverse carries the `1/n3`
//! factor. With this convention `<A, B> = Re <A_bar, B_bar> / n3`.

use super::{DenseTensor, Shape3, SpectralTensor};
use crate::error::{Error, Result};
use num_complex::Complex64;
use rustfft::FftPlanner;

/// Relative conjugate-symmetry tolerance used by [`idft_mode3`]: the inverse
/// transform rejects inputs whose imaginary residual exceeds this fraction of
/// the input's Frobenius norm.
pub const DEFAULT_IDFT_TOL: f64 = 1e-8;

/// Transforms every tube `A(i, j, :)` by the unnormalized DFT.
pub fn dft_mode3(t: &DenseTensor) -> SpectralTensor {
    let shape = t.shape();
    let n3 = shape.n3();
    let fft = FftPlanner::new().plan_fft_forward(n3);
    let mut out = SpectralTensor::zeros(shape);
    let mut buf = vec![Complex64::new(0.0, 0.0); n3];
    for i in 0..shape.n1() {
        for j in 0..shape.n2() {
            let tube = t.tube(i, j);
            for (b, &x) in buf.iter_mut().zip(tube) {
                *b = Complex64::new(x, 0.0);
            }
            fft.process(&mut buf);
            let base = shape.offset(i, j, 0);
            out.data_mut()[base..base + n3].copy_from_slice(&buf);
        }
    }
    out
}

/// Inverse of [`dft_mode3`] with the default conjugate-symmetry tolerance.
///
/// Returns an error carrying the max imaginary residual when the input is not
/// the transform of a real tensor.
pub fn idft_mode3(t: &SpectralTensor) -> Result<DenseTensor> {
    idft_mode3_with_tol(t, DEFAULT_IDFT_TOL * t.frobenius_norm())
}

/// Inverse of [`dft_mode3`] rejecting imaginary residuals above `tol`
/// (absolute).
pub fn idft_mode3_with_tol(t: &SpectralTensor, tol: f64) -> Result<DenseTensor> {
    let (real, residual) = idft_mode3_unchecked(t);
    if residual > tol {
        return Err(Error::NotConjugateSymmetric {
            residual,
            tolerance: tol,
        });
    }
    Ok(real)
}

/// Inverse transform discarding imaginary parts; returns the largest
/// discarded magnitude. Used internally where conjugate symmetry holds by
/// construction.
pub(crate) fn idft_mode3_unchecked(t: &SpectralTensor) -> (DenseTensor, f64) {
    let shape = t.shape();
    let n3 = shape.n3();
    let ifft = FftPlanner::new().plan_fft_inverse(n3);
    let scale = 1.0 / n3 as f64;
    let mut out = DenseTensor::zeros(shape);
    let mut buf = vec![Complex64::new(0.0, 0.0); n3];
    let mut residual = 0.0f64;
    for i in 0..shape.n1() {
        for j in 0..shape.n2() {
            let base = shape.offset(i, j, 0);
            buf.copy_from_slice(&t.data()[base..base + n3]);
            ifft.process(&mut buf);
            for (k, z) in buf.iter().enumerate() {
                out.data_mut()[base + k] = z.re * scale;
                residual = residual.max((z.im * scale).abs());
            }
        }
    }
    (out, residual)
}

/// Iterates the Fourier slice indices `0..=n3/2` that determine a
/// conjugate-symmetric spectral tensor, together with the mirror index each
/// one fills.
pub(crate) fn half_slices(n3: usize) -> impl Iterator<Item = (usize, Option<usize>)> {
    (0..=n3 / 2).map(move |k| {
        let mirror = (n3 - k) % n3;
        (k, (mirror != k).then_some(mirror))
    })
}

/// Writes `slice` at Fourier index `k` and its conjugate at the mirror index,
/// preserving conjugate symmetry. `shape` must match `out`.
pub(crate) fn set_conjugate_pair(
    out: &mut SpectralTensor,
    shape: Shape3,
    k: usize,
    mirror: Option<usize>,
    slice: &nalgebra::DMatrix<Complex64>,
) {
    debug_assert_eq!(out.shape(), shape);
    out.set_fourier_slice(k, slice);
    if let Some(m) = mirror {
        out.set_fourier_slice(m, &slice.map(|z| z.conj()));
    }
}
