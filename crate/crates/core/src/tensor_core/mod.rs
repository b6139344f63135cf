//! Dense 3-way tensor storage, mode-3 transforms, reference oracles, and file I/O.
//!
//! Tensors are stored tube-contiguously: the entry `(i, j, k)` lives at linear
//! offset `((i * n2) + j) * n3 + k`, so each tube `A(i, j, :)` is a contiguous
//! slice and mode-3 transforms are stride-1.

pub(crate) mod dft;
mod io;
mod oracle;

pub use dft::{dft_mode3, idft_mode3, idft_mode3_with_tol};
pub use io::{read_tensor, read_tensor_from, write_tensor, write_tensor_to};
pub use oracle::{bcirc, bdiag_fold, bdiag_unfold};

use crate::error::{Error, Result};
use nalgebra::DMatrix;
use num_complex::Complex64;

/// Dimensions of a 3-way tensor. All dimensions are at least 1.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Hash)]
pub struct Shape3 {
    n1: usize,
    n2: usize,
    n3: usize,
}

impl Shape3 {
    pub fn new(n1: usize, n2: usize, n3: usize) -> Result<Self> {
        let ok = n1 >= 1
            && n2 >= 1
            && n3 >= 1
            && n1.checked_mul(n2).and_then(|p| p.checked_mul(n3)).is_some();
        if !ok {
            return Err(Error::InvalidShape { n1, n2, n3 });
        }
        Ok(Self { n1, n2, n3 })
    }

    pub fn n1(&self) -> usize {
        self.n1
    }

    pub fn n2(&self) -> usize {
        self.n2
    }

    pub fn n3(&self) -> usize {
        self.n3
    }

    /// Number of entries `n1 * n2 * n3`.
    pub fn numel(&self) -> usize {
        self.n1 * self.n2 * self.n3
    }

    /// The larger frontal-slice dimension, written n_(1).
    pub fn n_max(&self) -> usize {
        self.n1.max(self.n2)
    }

    /// The smaller frontal-slice dimension, written n_(2).
    pub fn n_min(&self) -> usize {
        self.n1.min(self.n2)
    }

    /// Linear offset of entry `(i, j, k)`; tube index `k` varies fastest.
    #[inline]
    pub fn offset(&self, i: usize, j: usize, k: usize) -> usize {
        debug_assert!(i < self.n1 && j < self.n2 && k < self.n3);
        (i * self.n2 + j) * self.n3 + k
    }

    pub fn contains(&self, i: usize, j: usize, k: usize) -> bool {
        i < self.n1 && j < self.n2 && k < self.n3
    }
}

impl std::fmt::Display for Shape3 {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}x{}x{}", self.n1, self.n2, self.n3)
    }
}

/// Real `n1 x n2 x n3` tensor, the universal carrier for data, low-rank and
/// sparse components, and all intermediate iterates.
#[derive(Clone, PartialEq, Debug)]
pub struct DenseTensor {
    shape: Shape3,
    data: Vec<f64>,
}

impl DenseTensor {
    pub fn zeros(shape: Shape3) -> Self {
        Self {
            shape,
            data: vec![0.0; shape.numel()],
        }
    }

    /// Builds a tensor from tube-major data (`k` fastest, then `j`, then `i`).
    /// Rejects length mismatches and non-finite entries.
    pub fn from_vec(shape: Shape3, data: Vec<f64>) -> Result<Self> {
        if data.len() != shape.numel() {
            return Err(Error::ShapeMismatch {
                expected: format!("{} values for shape {shape}", shape.numel()),
                found: format!("{} values", data.len()),
            });
        }
        if let Some(pos) = data.iter().position(|x| !x.is_finite()) {
            return Err(Error::NonFinite(pos));
        }
        Ok(Self { shape, data })
    }

    pub fn from_fn(shape: Shape3, mut f: impl FnMut(usize, usize, usize) -> f64) -> Self {
        let mut t = Self::zeros(shape);
        for i in 0..shape.n1() {
            for j in 0..shape.n2() {
                for k in 0..shape.n3() {
                    t.data[shape.offset(i, j, k)] = f(i, j, k);
                }
            }
        }
        t
    }

    pub fn shape(&self) -> Shape3 {
        self.shape
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize, k: usize) -> f64 {
        self.data[self.shape.offset(i, j, k)]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, k: usize, value: f64) {
        self.data[self.shape.offset(i, j, k)] = value;
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub fn data_mut(&mut self) -> &mut [f64] {
        &mut self.data
    }

    /// The tube `A(i, j, :)` as a contiguous slice.
    pub fn tube(&self, i: usize, j: usize) -> &[f64] {
        let base = self.shape.offset(i, j, 0);
        &self.data[base..base + self.shape.n3()]
    }

    /// The frontal slice `A(:, :, k)` as a dense matrix.
    pub fn frontal_slice(&self, k: usize) -> DMatrix<f64> {
        DMatrix::from_fn(self.shape.n1(), self.shape.n2(), |i, j| self.get(i, j, k))
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> Self {
        Self {
            shape: self.shape,
            data: self.data.iter().map(|&x| f(x)).collect(),
        }
    }

    pub fn scale(&self, c: f64) -> Self {
        self.map(|x| c * x)
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|x| x * x).sum::<f64>().sqrt()
    }

    /// Largest absolute entry.
    pub fn infinity_norm(&self) -> f64 {
        self.data.iter().fold(0.0, |m, x| m.max(x.abs()))
    }

    /// Sum of absolute entries.
    pub fn l1_norm(&self) -> f64 {
        self.data.iter().map(|x| x.abs()).sum()
    }

    /// Euclidean inner product; satisfies `<A, B> = Re <A_bar, B_bar> / n3`.
    pub fn inner_product(&self, other: &Self) -> Result<f64> {
        if self.shape != other.shape {
            return Err(Error::ShapeMismatch {
                expected: self.shape.to_string(),
                found: other.shape.to_string(),
            });
        }
        Ok(self.data.iter().zip(&other.data).map(|(a, b)| a * b).sum())
    }

    pub(crate) fn assert_same_shape(&self, other: &Self, op: &str) {
        assert_eq!(
            self.shape, other.shape,
            "{op}: shape mismatch {} vs {}",
            self.shape, other.shape
        );
    }
}

impl std::ops::Add for &DenseTensor {
    type Output = DenseTensor;
    fn add(self, rhs: &DenseTensor) -> DenseTensor {
        self.assert_same_shape(rhs, "add");
        DenseTensor {
            shape: self.shape,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }
}

impl std::ops::Sub for &DenseTensor {
    type Output = DenseTensor;
    fn sub(self, rhs: &DenseTensor) -> DenseTensor {
        self.assert_same_shape(rhs, "sub");
        DenseTensor {
            shape: self.shape,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }
}

impl std::ops::Neg for &DenseTensor {
    type Output = DenseTensor;
    fn neg(self) -> DenseTensor {
        self.scale(-1.0)
    }
}

/// Complex tensor in the mode-3 Fourier domain; slice `k` holds the k-th
/// Fourier coefficient of every tube.
#[derive(Clone, PartialEq, Debug)]
pub struct SpectralTensor {
    shape: Shape3,
    data: Vec<Complex64>,
}

impl SpectralTensor {
    pub fn zeros(shape: Shape3) -> Self {
        Self {
            shape,
            data: vec![Complex64::new(0.0, 0.0); shape.numel()],
        }
    }

    pub fn shape(&self) -> Shape3 {
        self.shape
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize, k: usize) -> Complex64 {
        self.data[self.shape.offset(i, j, k)]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, k: usize, value: Complex64) {
        self.data[self.shape.offset(i, j, k)] = value;
    }

    pub fn data(&self) -> &[Complex64] {
        &self.data
    }

    pub fn data_mut(&mut self) -> &mut [Complex64] {
        &mut self.data
    }

    /// The Fourier slice `A_bar(:, :, k)` as a dense complex matrix.
    pub fn fourier_slice(&self, k: usize) -> DMatrix<Complex64> {
        DMatrix::from_fn(self.shape.n1(), self.shape.n2(), |i, j| self.get(i, j, k))
    }

    pub fn set_fourier_slice(&mut self, k: usize, slice: &DMatrix<Complex64>) {
        assert_eq!(slice.nrows(), self.shape.n1());
        assert_eq!(slice.ncols(), self.shape.n2());
        for i in 0..self.shape.n1() {
            for j in 0..self.shape.n2() {
                self.set(i, j, k, slice[(i, j)]);
            }
        }
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Complex inner product `sum conj(a) * b`.
    pub fn inner_product(&self, other: &Self) -> Result<Complex64> {
        if self.shape != other.shape {
            return Err(Error::ShapeMismatch {
                expected: self.shape.to_string(),
                found: other.shape.to_string(),
            });
        }
        Ok(self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    /// Largest deviation from the conjugate symmetry a real tensor's transform
    /// must satisfy: slice k versus the conjugate of slice `(n3 - k) mod n3`.
    pub fn conjugate_symmetry_residual(&self) -> f64 {
        let n3 = self.shape.n3();
        let mut worst = 0.0f64;
        for i in 0..self.shape.n1() {
            for j in 0..self.shape.n2() {
                for k in 0..n3 {
                    let mirror = (n3 - k) % n3;
                    let d = self.get(i, j, k) - self.get(i, j, mirror).conj();
                    worst = worst.max(d.norm());
                }
            }
        }
        worst
    }
}

/// Standard Frobenius norm of a dense tensor.
pub fn frobenius_norm(t: &DenseTensor) -> f64 {
    t.frobenius_norm()
}

/// Largest absolute entry of a dense tensor.
pub fn infinity_norm(t: &DenseTensor) -> f64 {
    t.infinity_norm()
}

/// Euclidean inner product of two same-shaped tensors.
pub fn inner_product(a: &DenseTensor, b: &DenseTensor) -> Result<f64> {
    a.inner_product(b)
}
