//! ADMM solver for `min ||L||_* + lambda ||S||_1  s.t.  L + S = X`,
//! plus recovery diagnostics against planted ground truth.

use crate::certificate::default_lambda;
use crate::error::{Error, Result};
use crate::t_algebra::{tsvt_with_tnn, tubal_rank};
use crate::tensor_core::{DenseTensor, Shape3};

/// ADMM schedule. The defaults follow the standard adaptive-penalty recipe
/// for nuclear-norm problems: `mu` grows geometrically from `mu0` by
/// `rho_mu` per iteration up to `mu_max`.
#[derive(Clone, Copy, Debug)]
pub struct SolverConfig {
    pub lambda: f64,
    pub mu0: f64,
    pub mu_max: f64,
    pub rho_mu: f64,
    pub tol: f64,
    pub max_iter: usize,
}

impl SolverConfig {
    /// Defaults with an explicit regularizer.
    pub fn with_lambda(lambda: f64) -> Self {
        Self {
            lambda,
            mu0: 1e-3,
            mu_max: 1e10,
            rho_mu: 1.1,
            tol: 1e-8,
            max_iter: 1000,
        }
    }

    /// Defaults with `lambda = 1 / sqrt(n_(1) * n3)`.
    pub fn for_shape(shape: Shape3) -> Self {
        Self::with_lambda(default_lambda(shape))
    }

    fn validate(&self) -> Result<()> {
        let ok = self.lambda > 0.0
            && self.mu0 > 0.0
            && self.mu0 <= self.mu_max
            && self.rho_mu >= 1.0
            && self.tol > 0.0
            && self.max_iter >= 1;
        if !ok {
            return Err(Error::InvalidParameter(format!("{self:?}")));
        }
        Ok(())
    }
}

/// Solver output. When `converged` is set, the final relative feasibility
/// residual `||X - L - S||_F / max(1, ||X||_F)` is at most `tol`.
#[derive(Clone, Debug)]
pub struct TrpcaSolution {
    pub l: DenseTensor,
    pub s: DenseTensor,
    pub iterations: usize,
    pub primal_residuals: Vec<f64>,
    pub objective_trace: Vec<f64>,
    pub converged: bool,
}

/// Entrywise shrinkage `sgn(x) * max(|x| - tau, 0)`, the proximal operator
/// of `tau * ||.||_1`.
pub fn soft_threshold(t: &DenseTensor, tau: f64) -> DenseTensor {
    assert!(tau >= 0.0, "soft_threshold: tau must be nonnegative");
    t.map(|x| x.signum() * (x.abs() - tau).max(0.0))
}

/// Alternating-direction solver. Each sweep updates
/// `L <- tsvt(X - S + Y/mu, 1/mu)`, `S <- soft_threshold(X - L + Y/mu,
/// lambda/mu)`, `Y <- Y + mu (X - L - S)`, then grows `mu`. Stops when both
/// the feasibility residual and the relative change of `(L, S)` drop below
/// `tol`; hitting `max_iter` returns the best iterate with
/// `converged = false`.
pub fn solve(x: &DenseTensor, cfg: &SolverConfig) -> Result<TrpcaSolution> {
    cfg.validate()?;
    let shape = x.shape();
    let norm_x = x.frobenius_norm().max(1.0);
    let mut l = DenseTensor::zeros(shape);
    let mut s = DenseTensor::zeros(shape);
    let mut y = DenseTensor::zeros(shape);
    let mut mu = cfg.mu0;
    let mut primal_residuals = Vec::new();
    let mut objective_trace = Vec::new();

    for iteration in 1..=cfg.max_iter {
        let l_prev = l.clone();
        let s_prev = s.clone();

        let (l_new, l_tnn) = tsvt_with_tnn(&(&(x - &s) + &y.scale(1.0 / mu)), 1.0 / mu);
        l = l_new;
        s = soft_threshold(&(&(x - &l) + &y.scale(1.0 / mu)), cfg.lambda / mu);
        let residual = &(x - &l) - &s;
        y = &y + &residual.scale(mu);
        mu = (cfg.rho_mu * mu).min(cfg.mu_max);

        let feasibility = residual.frobenius_norm() / norm_x;
        primal_residuals.push(feasibility);
        objective_trace.push(l_tnn + cfg.lambda * s.l1_norm());

        let change_l = (&l - &l_prev).frobenius_norm() / l_prev.frobenius_norm().max(1.0);
        let change_s = (&s - &s_prev).frobenius_norm() / s_prev.frobenius_norm().max(1.0);
        if feasibility <= cfg.tol && change_l.max(change_s) <= cfg.tol {
            return Ok(TrpcaSolution {
                l,
                s,
                iterations: iteration,
                primal_residuals,
                objective_trace,
                converged: true,
            });
        }
    }
    Ok(TrpcaSolution {
        l,
        s,
        iterations: cfg.max_iter,
        primal_residuals,
        objective_trace,
        converged: false,
    })
}

/// Recovery diagnostics against planted ground truth.
#[derive(Clone, Copy, Debug)]
pub struct RecoveryReport {
    pub rel_err_l: f64,
    pub rel_err_s: f64,
    /// Fraction of reported support entries that are genuine.
    pub support_precision: f64,
    /// Fraction of genuine support entries that are reported.
    pub support_recall: f64,
    pub tubal_rank_l: usize,
}

fn relative_error(estimate: &DenseTensor, truth: &DenseTensor) -> f64 {
    let denom = truth.frobenius_norm();
    let diff = (estimate - truth).frobenius_norm();
    if denom > 0.0 {
        diff / denom
    } else {
        diff
    }
}

/// Entries above `1e-6 * ||t||_inf` count as support.
fn detected_support(t: &DenseTensor) -> Vec<bool> {
    let thr = 1e-6 * t.infinity_norm();
    t.data()
        .iter()
        .map(|&x| x.abs() > thr && x != 0.0)
        .collect()
}

/// Compares a solution against the planted `(L0, S0)`.
pub fn recovery_report(
    sol: &TrpcaSolution,
    l0: &DenseTensor,
    s0: &DenseTensor,
) -> Result<RecoveryReport> {
    if sol.l.shape() != l0.shape() || sol.s.shape() != s0.shape() {
        return Err(Error::ShapeMismatch {
            expected: l0.shape().to_string(),
            found: sol.l.shape().to_string(),
        });
    }
    let est = detected_support(&sol.s);
    let truth = detected_support(s0);
    let true_pos = est.iter().zip(&truth).filter(|&(&e, &t)| e && t).count() as f64;
    let est_count = est.iter().filter(|&&e| e).count() as f64;
    let truth_count = truth.iter().filter(|&&t| t).count() as f64;
    let support_precision = if est_count > 0.0 {
        true_pos / est_count
    } else {
        1.0
    };
    let support_recall = if truth_count > 0.0 {
        true_pos / truth_count
    } else {
        1.0
    };
    Ok(RecoveryReport {
        rel_err_l: relative_error(&sol.l, l0),
        rel_err_s: relative_error(&sol.s, s0),
        support_precision,
        support_recall,
        tubal_rank_l: tubal_rank(&sol.l),
    })
}
