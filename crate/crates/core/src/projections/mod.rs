//! Support projections, tangent-space projections, incoherence measurement,
//! and operator-norm estimation.

mod operator_norm;

pub use operator_norm::{operator_norm, OperatorNormEstimate};

use crate::error::{Error, Result};
use crate::t_algebra::{tprod, tprod3, ttranspose};
use crate::tensor_core::{DenseTensor, Shape3};

/// The index set of a sparse corruption pattern, stored as a boolean mask
/// over all `(i, j, k)` triples of a fixed shape.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SupportSet {
    shape: Shape3,
    mask: Vec<bool>,
    count: usize,
}

impl SupportSet {
    pub fn empty(shape: Shape3) -> Self {
        Self {
            shape,
            mask: vec![false; shape.numel()],
            count: 0,
        }
    }

    pub fn full(shape: Shape3) -> Self {
        Self {
            shape,
            mask: vec![true; shape.numel()],
            count: shape.numel(),
        }
    }

    /// Builds a support from explicit triples, rejecting out-of-range and
    /// duplicate indices.
    pub fn from_indices(shape: Shape3, indices: &[(usize, usize, usize)]) -> Result<Self> {
        let mut s = Self::empty(shape);
        for &(i, j, k) in indices {
            if !shape.contains(i, j, k) {
                return Err(Error::IndexOutOfRange {
                    i,
                    j,
                    k,
                    shape: shape.to_string(),
                });
            }
            let off = shape.offset(i, j, k);
            if s.mask[off] {
                return Err(Error::DuplicateIndex(i, j, k));
            }
            s.mask[off] = true;
            s.count += 1;
        }
        Ok(s)
    }

    pub fn from_mask(shape: Shape3, mask: Vec<bool>) -> Result<Self> {
        if mask.len() != shape.numel() {
            return Err(Error::ShapeMismatch {
                expected: format!("{} mask entries", shape.numel()),
                found: format!("{}", mask.len()),
            });
        }
        let count = mask.iter().filter(|&&b| b).count();
        Ok(Self { shape, mask, count })
    }

    pub fn shape(&self) -> Shape3 {
        self.shape
    }

    pub fn len(&self) -> usize {
        self.count
    }

    pub fn is_empty(&self) -> bool {
        self.count == 0
    }

    /// Fraction of entries in the support.
    pub fn density(&self) -> f64 {
        self.count as f64 / self.shape.numel() as f64
    }

    #[inline]
    pub fn contains(&self, i: usize, j: usize, k: usize) -> bool {
        self.mask[self.shape.offset(i, j, k)]
    }

    pub fn mask(&self) -> &[bool] {
        &self.mask
    }

    /// The complement support; an involution.
    pub fn complement(&self) -> Self {
        Self {
            shape: self.shape,
            mask: self.mask.iter().map(|b| !b).collect(),
            count: self.shape.numel() - self.count,
        }
    }

    pub fn union(&self, other: &Self) -> Result<Self> {
        if self.shape != other.shape {
            return Err(Error::ShapeMismatch {
                expected: self.shape.to_string(),
                found: other.shape.to_string(),
            });
        }
        let mask: Vec<bool> = self
            .mask
            .iter()
            .zip(&other.mask)
            .map(|(a, b)| *a || *b)
            .collect();
        Self::from_mask(self.shape, mask)
    }

    pub fn indices(&self) -> impl Iterator<Item = (usize, usize, usize)> + '_ {
        let shape = self.shape;
        self.mask
            .iter()
            .enumerate()
            .filter(|(_, &b)| b)
            .map(move |(off, _)| {
                let k = off % shape.n3();
                let j = (off / shape.n3()) % shape.n2();
                let i = off / (shape.n3() * shape.n2());
                (i, j, k)
            })
    }
}

fn check_shape(z: &DenseTensor, shape: Shape3) -> Result<()> {
    if z.shape() != shape {
        return Err(Error::ShapeMismatch {
            expected: shape.to_string(),
            found: z.shape().to_string(),
        });
    }
    Ok(())
}

/// Zeroes the entries outside the support.
pub fn project_omega(z: &DenseTensor, omega: &SupportSet) -> Result<DenseTensor> {
    check_shape(z, omega.shape)?;
    let mut out = z.clone();
    for (x, &keep) in out.data_mut().iter_mut().zip(&omega.mask) {
        if !keep {
            *x = 0.0;
        }
    }
    Ok(out)
}

/// Zeroes the entries inside the support.
pub fn project_omega_complement(z: &DenseTensor, omega: &SupportSet) -> Result<DenseTensor> {
    check_shape(z, omega.shape)?;
    let mut out = z.clone();
    for (x, &drop) in out.data_mut().iter_mut().zip(&omega.mask) {
        if drop {
            *x = 0.0;
        }
    }
    Ok(out)
}

/// The tangent space `T = { U * Y^* + W * V^* }` of a low-tubal-rank tensor,
/// carried by its t-orthonormal factors. Rank zero is legal and means
/// `T = {0}`.
#[derive(Clone, Debug)]
pub struct TangentSpace {
    shape: Shape3,
    factors: Option<(DenseTensor, DenseTensor)>,
}

impl TangentSpace {
    /// Validates that `u` (`n1 x r x n3`) and `v` (`n2 x r x n3`) are
    /// t-orthonormal and wraps them.
    pub fn new(u: DenseTensor, v: DenseTensor) -> Result<Self> {
        let (su, sv) = (u.shape(), v.shape());
        if su.n2() != sv.n2() || su.n3() != sv.n3() {
            return Err(Error::DimensionMismatch {
                op: "TangentSpace::new",
                detail: format!("U {su} vs V {sv}"),
            });
        }
        let r = su.n2();
        let id = crate::t_algebra::identity_tensor(r, su.n3());
        for factor in [&u, &v] {
            let gram = tprod(&ttranspose(factor), factor)?;
            let residual = (&gram - &id).infinity_norm();
            if residual > 1e-8 {
                return Err(Error::NotOrthonormal { residual });
            }
        }
        let shape = Shape3::new(su.n1(), sv.n1(), su.n3())?;
        Ok(Self {
            shape,
            factors: Some((u, v)),
        })
    }

    /// The zero tangent space of ambient shape `n1 x n2 x n3`.
    pub fn empty(shape: Shape3) -> Self {
        Self {
            shape,
            factors: None,
        }
    }

    /// Ambient tensor shape the projections act on.
    pub fn shape(&self) -> Shape3 {
        self.shape
    }

    pub fn rank(&self) -> usize {
        self.factors.as_ref().map_or(0, |(u, _)| u.shape().n2())
    }

    pub fn u(&self) -> Option<&DenseTensor> {
        self.factors.as_ref().map(|(u, _)| u)
    }

    pub fn v(&self) -> Option<&DenseTensor> {
        self.factors.as_ref().map(|(_, v)| v)
    }

    /// `U * V^*`, the zero tensor when the rank is zero.
    pub fn uv_transpose(&self) -> DenseTensor {
        match &self.factors {
            Some((u, v)) => tprod(u, &ttranspose(v)).expect("factor shapes"),
            None => DenseTensor::zeros(self.shape),
        }
    }
}

/// Orthogonal projection onto `T`:
/// `U*U^**Z + Z*V*V^* - U*U^**Z*V*V^*`. Idempotent and self-adjoint.
pub fn project_t(z: &DenseTensor, t: &TangentSpace) -> Result<DenseTensor> {
    check_shape(z, t.shape)?;
    let Some((u, v)) = &t.factors else {
        return Ok(DenseTensor::zeros(t.shape));
    };
    let ut = ttranspose(u);
    let vt = ttranspose(v);
    let uutz = tprod3(u, &ut, z);
    let zvvt = tprod3(z, v, &vt);
    let uutzvvt = tprod3(u, &ut, &zvvt);
    Ok(&(&uutz + &zvvt) - &uutzvvt)
}

/// Orthogonal projection onto the complement of `T`:
/// `(I - U*U^*) * Z * (I - V*V^*)`.
pub fn project_t_complement(z: &DenseTensor, t: &TangentSpace) -> Result<DenseTensor> {
    Ok(&z.clone() - &project_t(z, t)?)
}

/// `||P_T(e_ijk)||_F^2` computed from the closed form
/// `||U^* * e_ring(i)||_F^2 + ||V^* * e_ring(j)||_F^2
///  - ||U^* * e_ring(i) * e_dot(k) * e_ring(j)^* * V||_F^2`.
pub fn pt_basis_norm_sq(t: &TangentSpace, i: usize, j: usize, k: usize) -> Result<f64> {
    let shape = t.shape;
    if !shape.contains(i, j, k) {
        return Err(Error::IndexOutOfRange {
            i,
            j,
            k,
            shape: shape.to_string(),
        });
    }
    let Some((u, v)) = &t.factors else {
        return Ok(0.0);
    };
    let ei = crate::t_algebra::basis_e_ring(shape.n1(), shape.n3(), i)?;
    let ej = crate::t_algebra::basis_e_ring(shape.n2(), shape.n3(), j)?;
    let ek = crate::t_algebra::basis_e_dot(shape.n3(), k)?;
    let ut_ei = tprod(&ttranspose(u), &ei)?;
    let vt_ej = tprod(&ttranspose(v), &ej)?;
    let cross = tprod3(&tprod(&ut_ei, &ek)?, &ttranspose(&ej), v);
    let a = ut_ei.frobenius_norm();
    let b = vt_ej.frobenius_norm();
    let c = cross.frobenius_norm();
    Ok(a * a + b * b - c * c)
}

/// Measured incoherence of a tangent space, reporting the three components
/// separately along with their maximum.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct IncoherenceReport {
    /// `(n1 n3 / r) * max_i ||U^* * e_ring(i)||_F^2`
    pub mu_u: f64,
    /// `(n2 n3 / r) * max_j ||V^* * e_ring(j)||_F^2`
    pub mu_v: f64,
    /// `(n1 n2 n3^2 / r) * ||U * V^*||_inf^2`
    pub mu_uv: f64,
    /// Max of the three components.
    pub mu: f64,
    pub r: usize,
}

/// Measures the incoherence parameters of t-orthonormal factors.
pub fn incoherence_mu(t: &TangentSpace) -> Result<IncoherenceReport> {
    let Some((u, v)) = &t.factors else {
        return Err(Error::RankZero("incoherence is undefined for rank zero"));
    };
    let shape = t.shape;
    let r = t.rank() as f64;
    let (n1, n2, n3) = (shape.n1() as f64, shape.n2() as f64, shape.n3() as f64);

    let max_row_energy = |factor: &DenseTensor, n: usize| -> Result<f64> {
        let ft = ttranspose(factor);
        let mut worst = 0.0f64;
        for i in 0..n {
            let ei = crate::t_algebra::basis_e_ring(n, shape.n3(), i)?;
            let row = tprod(&ft, &ei)?;
            let e = row.frobenius_norm();
            worst = worst.max(e * e);
        }
        Ok(worst)
    };

    let mu_u = n1 * n3 / r * max_row_energy(u, shape.n1())?;
    let mu_v = n2 * n3 / r * max_row_energy(v, shape.n2())?;
    let uvt = t.uv_transpose();
    let inf = uvt.infinity_norm();
    let mu_uv = n1 * n2 * n3 * n3 / r * inf * inf;
    Ok(IncoherenceReport {
        mu_u,
        mu_v,
        mu_uv,
        mu: mu_u.max(mu_v).max(mu_uv),
        r: t.rank(),
    })
}
