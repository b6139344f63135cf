//! The t-product algebra: products, transposes, identities, basis tensors,
//! t-SVD, tensor norms and ranks, and the proximal operator of the tensor
//! nuclear norm.
//!
//! All products are computed slicewise in the mode-3 Fourier domain, which is
//! equivalent to multiplying the block-circulant expansions.

mod jacobi_svd;
mod subgradient;
mod tsvd;

pub use subgradient::{tnn_subgradient, Subgradient};
pub(crate) use tsvd::tsvt_with_tnn;
pub use tsvd::{
    average_rank, singular_values_per_slice, spectral_norm, tnn, tsvd, tsvt, tubal_rank,
    TSvdFactors, TsvdMode,
};

use crate::error::{Error, Result};
use crate::tensor_core::{dft_mode3, DenseTensor, Shape3};

/// t-product of an `n1 x m x n3` tensor with an `m x n2 x n3` tensor,
/// computed as complex matrix products per Fourier slice.
pub fn tprod(a: &DenseTensor, b: &DenseTensor) -> Result<DenseTensor> {
    let (sa, sb) = (a.shape(), b.shape());
    if sa.n2() != sb.n1() || sa.n3() != sb.n3() {
        return Err(Error::DimensionMismatch {
            op: "tprod",
            detail: format!("{sa} * {sb}"),
        });
    }
    let out_shape = Shape3::new(sa.n1(), sb.n2(), sa.n3())?;
    let fa = dft_mode3(a);
    let fb = dft_mode3(b);
    let mut out = crate::tensor_core::SpectralTensor::zeros(out_shape);
    for (k, mirror) in crate::tensor_core::dft::half_slices(sa.n3()) {
        let product = fa.fourier_slice(k) * fb.fourier_slice(k);
        crate::tensor_core::dft::set_conjugate_pair(&mut out, out_shape, k, mirror, &product);
    }
    let (real, _) = crate::tensor_core::dft::idft_mode3_unchecked(&out);
    Ok(real)
}

/// t-product chain helper for shapes guaranteed compatible by construction.
pub(crate) fn tprod3(a: &DenseTensor, b: &DenseTensor, c: &DenseTensor) -> DenseTensor {
    let ab = tprod(a, b).expect("tprod3: inner shapes");
    tprod(&ab, c).expect("tprod3: outer shapes")
}

/// Conjugate transpose under the t-product: transposes every frontal slice
/// and reverses the order of slices 2..n3.
pub fn ttranspose(a: &DenseTensor) -> DenseTensor {
    let s = a.shape();
    let out_shape = Shape3::new(s.n2(), s.n1(), s.n3()).expect("transposed shape");
    DenseTensor::from_fn(out_shape, |i, j, k| {
        let src_k = if k == 0 { 0 } else { s.n3() - k };
        a.get(j, i, src_k)
    })
}

/// The `n x n x n3` identity tensor: first frontal slice is the identity
/// matrix, the rest are zero.
pub fn identity_tensor(n: usize, n3: usize) -> DenseTensor {
    let shape = Shape3::new(n, n, n3).expect("identity shape");
    DenseTensor::from_fn(shape, |i, j, k| if i == j && k == 0 { 1.0 } else { 0.0 })
}

/// Column basis tensor of shape `n x 1 x n3` with a single 1 at `(i, 0, 0)`.
pub fn basis_e_ring(n: usize, n3: usize, i: usize) -> Result<DenseTensor> {
    let shape = Shape3::new(n, 1, n3)?;
    if i >= n {
        return Err(Error::IndexOutOfRange {
            i,
            j: 0,
            k: 0,
            shape: shape.to_string(),
        });
    }
    let mut t = DenseTensor::zeros(shape);
    t.set(i, 0, 0, 1.0);
    Ok(t)
}

/// Tube basis tensor of shape `1 x 1 x n3` with a single 1 at slice `k`.
pub fn basis_e_dot(n3: usize, k: usize) -> Result<DenseTensor> {
    let shape = Shape3::new(1, 1, n3)?;
    if k >= n3 {
        return Err(Error::IndexOutOfRange {
            i: 0,
            j: 0,
            k,
            shape: shape.to_string(),
        });
    }
    let mut t = DenseTensor::zeros(shape);
    t.set(0, 0, k, 1.0);
    Ok(t)
}

/// One-hot basis tensor e_ijk, equal to the t-product
/// `e_ring(i) * e_dot(k) * e_ring(j)^*`.
pub fn basis_e(shape: Shape3, i: usize, j: usize, k: usize) -> Result<DenseTensor> {
    if !shape.contains(i, j, k) {
        return Err(Error::IndexOutOfRange {
            i,
            j,
            k,
            shape: shape.to_string(),
        });
    }
    let mut t = DenseTensor::zeros(shape);
    t.set(i, j, k, 1.0);
    Ok(t)
}
