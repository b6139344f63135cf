//! Power iteration for self-adjoint positive semidefinite tensor operators.

use crate::tensor_core::{DenseTensor, Shape3};
use rand::Rng;
use rand_chacha::{rand_core::SeedableRng, ChaCha8Rng};

/// Fixed seed for the random starting tensor, so estimates are reproducible.
const START_SEED: u64 = 0x9E37_79B9_7F4A_7C15;

/// Result of a power-iteration run.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct OperatorNormEstimate {
    /// Square root of the largest-eigenvalue estimate.
    pub value: f64,
    pub converged: bool,
    pub iterations: usize,
}

/// Estimates the square root of the largest eigenvalue of a self-adjoint
/// positive semidefinite operator on tensors of the given shape.
///
/// To estimate `||B||` for a general operator `B`, pass the composition
/// `A -> B^T(B(A))`; for a projection `P` (where `P^T P = P`) passing `P`
/// itself returns `||P||` directly. Convergence uses the Rayleigh-quotient
/// test `|lambda_t - lambda_{t-1}| <= tol * lambda_t`; non-convergence
/// returns the best estimate with `converged = false`.
pub fn operator_norm<F>(mut op: F, shape: Shape3, tol: f64, max_iter: usize) -> OperatorNormEstimate
where
    F: FnMut(&DenseTensor) -> DenseTensor,
{
    assert!(tol > 0.0, "operator_norm: tol must be positive");
    let mut rng = ChaCha8Rng::seed_from_u64(START_SEED);
    let mut x = DenseTensor::from_fn(shape, |_, _, _| rng.gen::<f64>() * 2.0 - 1.0);
    let norm = x.frobenius_norm();
    x = x.scale(1.0 / norm);

    let mut lambda_prev = f64::INFINITY;
    for it in 1..=max_iter {
        let y = op(&x);
        // Rayleigh quotient <x, op(x)> with ||x||_F = 1
        let lambda = x
            .inner_product(&y)
            .expect("operator changed shape")
            .max(0.0);
        let y_norm = y.frobenius_norm();
        if y_norm == 0.0 {
            // operator annihilates the start direction: spectrum seen is 0
            return OperatorNormEstimate {
                value: 0.0,
                converged: true,
                iterations: it,
            };
        }
        if (lambda - lambda_prev).abs() <= tol * lambda.max(f64::MIN_POSITIVE) {
            return OperatorNormEstimate {
                value: lambda.sqrt(),
                converged: true,
                iterations: it,
            };
        }
        lambda_prev = lambda;
        x = y.scale(1.0 / y_norm);
    }
    OperatorNormEstimate {
        value: lambda_prev.max(0.0).sqrt(),
        converged: false,
        iterations: max_iter,
    }
}
