//! Subgradients of the tensor nuclear norm.
//!
//! Every subgradient at `A` has the form `G = U * V^* + W` with
//! `U^* * W = 0`, `W * V = 0`, and `||W|| <= 1`, where `U, V` come from a
//! skinny t-SVD of `A`. Such a `G` satisfies `<G, A> = ||A||_*` and
//! `||G|| <= 1`.

use super::{spectral_norm, tprod, tsvd, ttranspose, TsvdMode};
use crate::error::Result;
use crate::tensor_core::{DenseTensor, Shape3};
use rand::Rng;
use rand_distr::StandardNormal;

/// A subgradient `G = U * V^* + W` together with its `T`-orthogonal part `W`.
#[derive(Clone, Debug)]
pub struct Subgradient {
    pub g: DenseTensor,
    pub w: DenseTensor,
}

/// Constructs a subgradient of the tensor nuclear norm at `a` whose
/// orthogonal part has spectral norm `w_scale`.
///
/// For the zero tensor the subdifferential is the unit spectral-norm ball,
/// so the result is the `W`-only element `G = W`.
pub fn tnn_subgradient(a: &DenseTensor, w_scale: f64, rng: &mut impl Rng) -> Result<Subgradient> {
    assert!((0.0..=1.0).contains(&w_scale), "w_scale must lie in [0, 1]");
    let shape = a.shape();
    let gaussian = random_gaussian(shape, rng);
    let reference = spectral_norm(&gaussian);

    if spectral_norm(a) == 0.0 {
        let w = rescale_to_spectral(&gaussian, w_scale, reference);
        return Ok(Subgradient { g: w.clone(), w });
    }

    let f = tsvd(a, TsvdMode::Skinny)?;
    let uvt = tprod(&f.u, &ttranspose(&f.v))?;

    // Project a random direction onto T-perp:
    // (I - U U^*) * Z * (I - V V^*), then rescale its spectral norm.
    let uutz = super::tprod3(&f.u, &ttranspose(&f.u), &gaussian);
    let head = &gaussian - &uutz;
    let headv = super::tprod3(&head, &f.v, &ttranspose(&f.v));
    let w_raw = &head - &headv;
    let w = rescale_to_spectral(&w_raw, w_scale, reference);

    Ok(Subgradient { g: &uvt + &w, w })
}

fn random_gaussian(shape: Shape3, rng: &mut impl Rng) -> DenseTensor {
    DenseTensor::from_fn(shape, |_, _, _| rng.sample(StandardNormal))
}

/// Rescales to the requested spectral norm, collapsing to zero when `t` is
/// projection residue rather than a genuine direction: a projection with any
/// nonzero range keeps a dimension-scale fraction of a generic input's norm,
/// so anything below `1e-10 * reference` is roundoff.
fn rescale_to_spectral(t: &DenseTensor, target: f64, reference: f64) -> DenseTensor {
    let norm = spectral_norm(t);
    if norm <= 1e-10 * reference || target == 0.0 {
        return DenseTensor::zeros(t.shape());
    }
    t.scale(target / norm)
}
