//! Dual-certificate construction and verification.
//!
//! The certificate `W = W^L + W^S` pairs a golfing-scheme component built on
//! the complement of the corruption support with a least-squares component
//! solving `P_Omega(W^S) = lambda * sgn(S0)` through a Neumann series. A
//! candidate pair `(L0, S0)` is certified as the unique optimum when
//!
//! * `W` lies in the complement of the tangent space,
//! * `||W|| < 1/2`,
//! * `||P_Omega(U*V^* + W - lambda*sgn(S0))||_F <= lambda / 4`,
//! * `||P_Omega_perp(U*V^* + W)||_inf < lambda / 2`.

use crate::error::{Error, Result};
use crate::projections::{
    project_omega, project_omega_complement, project_t, project_t_complement, SupportSet,
    TangentSpace,
};
use crate::random_models::{partition_complement, GolfingConfig, Seed};
use crate::t_algebra::spectral_norm;
use crate::tensor_core::DenseTensor;
use crate::tensor_core::Shape3;

/// Default regularizer `lambda = 1 / sqrt(n_(1) * n3)`.
pub fn default_lambda(shape: Shape3) -> f64 {
    1.0 / ((shape.n_max() * shape.n3()) as f64).sqrt()
}

/// Frobenius and infinity norms of the golfing residual `Z_j` after each
/// round, with `Z_0 = U * V^*` first.
#[derive(Clone, Debug, Default)]
pub struct GolfingTrace {
    pub frobenius: Vec<f64>,
    pub infinity: Vec<f64>,
}

impl GolfingTrace {
    /// Per-round contraction ratios `||Z_j||_F / ||Z_{j-1}||_F`.
    pub fn frobenius_ratios(&self) -> Vec<f64> {
        self.frobenius
            .windows(2)
            .map(|w| if w[0] > 0.0 { w[1] / w[0] } else { 0.0 })
            .collect()
    }
}

/// Runs the golfing iteration
/// `Y_j = Y_{j-1} + q^{-1} P_{Omega_j} P_T (U*V^* - Y_{j-1})`, `Y_0 = 0`,
/// and returns `W^L = P_T_perp(Y_{j0})` with the residual trace.
///
/// Every round of the partition is contained in the complement of the
/// corruption support, so `P_Omega(Y_{j0}) = 0` exactly.
pub fn golfing_wl(
    t: &TangentSpace,
    partition: &[SupportSet],
    q: f64,
) -> Result<(DenseTensor, GolfingTrace)> {
    if partition.is_empty() {
        return Err(Error::InvalidParameter(
            "golfing partition must have at least one round".into(),
        ));
    }
    if !(q > 0.0 && q <= 1.0) {
        return Err(Error::InvalidParameter(format!(
            "golfing q must lie in (0, 1], got {q}"
        )));
    }
    let shape = t.shape();
    let uvt = t.uv_transpose();
    let mut y = DenseTensor::zeros(shape);
    // the residual Z_j = U*V^* - P_T(Y_j) equals P_T(U*V^* - Y_j), so each
    // round reuses the previous round's residual as its input
    let mut z = uvt.clone();
    let mut trace = GolfingTrace::default();
    trace.frobenius.push(z.frobenius_norm());
    trace.infinity.push(z.infinity_norm());
    for omega_j in partition {
        let update = project_omega(&z, omega_j)?.scale(1.0 / q);
        y = &y + &update;
        z = &uvt - &project_t(&y, t)?;
        trace.frobenius.push(z.frobenius_norm());
        trace.infinity.push(z.infinity_norm());
    }
    let w_l = project_t_complement(&y, t)?;
    Ok((w_l, trace))
}

/// Applies `(P_Omega - P_Omega P_T P_Omega)^{-1}` to `rhs` through the
/// Neumann series `sum_k (P_Omega P_T P_Omega)^k P_Omega(rhs)`, truncated
/// once a term's Frobenius norm drops below `tol * ||P_Omega(rhs)||_F`.
///
/// Returns the sum and the number of terms used. Divergence (term norms
/// non-decreasing over five consecutive terms) signals
/// `||P_Omega P_T|| >= 1` and is reported as an error.
pub fn neumann_apply(
    omega: &SupportSet,
    t: &TangentSpace,
    rhs: &DenseTensor,
    tol: f64,
    max_terms: usize,
) -> Result<(DenseTensor, usize)> {
    let mut term = project_omega(rhs, omega)?;
    let scale = term.frobenius_norm();
    let mut sum = term.clone();
    if scale == 0.0 {
        return Ok((sum, 1));
    }
    let mut prev_norm = scale;
    let mut non_decreasing = 0usize;
    for terms in 2..=max_terms.max(2) {
        term = project_omega(&project_t(&term, t)?, omega)?;
        let norm = term.frobenius_norm();
        if norm == 0.0 {
            // exact annihilation (e.g. a zero tangent space): the series is
            // finite and the zero term is not counted
            return Ok((sum, terms - 1));
        }
        if norm >= prev_norm {
            non_decreasing += 1;
            if non_decreasing >= 5 {
                return Err(Error::NeumannDiverged { terms });
            }
        } else {
            non_decreasing = 0;
        }
        prev_norm = norm;
        sum = &sum + &term;
        if norm <= tol * scale {
            return Ok((sum, terms));
        }
    }
    Err(Error::NeumannDiverged {
        terms: max_terms.max(2),
    })
}

/// Builds `W^S = lambda * P_T_perp (P_Omega - P_Omega P_T P_Omega)^{-1}
/// sgn(S0)`, which satisfies `P_Omega(W^S) = lambda * sgn(S0)` up to the
/// Neumann truncation. `sign_tensor` must be supported on `omega`.
pub fn build_ws(
    omega: &SupportSet,
    t: &TangentSpace,
    sign_tensor: &DenseTensor,
    lambda: f64,
    tol: f64,
) -> Result<(DenseTensor, usize)> {
    let off_support = project_omega_complement(sign_tensor, omega)?;
    if off_support.infinity_norm() > 0.0 {
        return Err(Error::InvalidParameter(
            "sign tensor has entries outside the support".into(),
        ));
    }
    let (series, terms) = neumann_apply(omega, t, sign_tensor, tol, NEUMANN_MAX_TERMS)?;
    let w_s = project_t_complement(&series, t)?.scale(lambda);
    Ok((w_s, terms))
}

/// Neumann truncation defaults: stop below `1e-10` relative or at 200 terms.
pub const NEUMANN_DEFAULT_TOL: f64 = 1e-10;
pub const NEUMANN_MAX_TERMS: usize = 200;

/// A constructed dual certificate with its construction diagnostics.
#[derive(Clone, Debug)]
pub struct DualCertificate {
    pub w_l: DenseTensor,
    pub w_s: DenseTensor,
    pub golfing_residuals: GolfingTrace,
    pub neumann_terms: usize,
    pub config: GolfingConfig,
}

/// Full pipeline: partition the support complement, run the golfing scheme,
/// and solve the least-squares component.
pub fn build_certificate(
    t: &TangentSpace,
    omega: &SupportSet,
    sign_tensor: &DenseTensor,
    lambda: f64,
    config: &GolfingConfig,
    seed: Seed,
) -> Result<DualCertificate> {
    let partition = partition_complement(omega, config, seed)?;
    let (w_l, golfing_residuals) = golfing_wl(t, &partition, config.q())?;
    let (w_s, neumann_terms) = build_ws(omega, t, sign_tensor, lambda, NEUMANN_DEFAULT_TOL)?;
    Ok(DualCertificate {
        w_l,
        w_s,
        golfing_residuals,
        neumann_terms,
        config: *config,
    })
}

/// Evaluation of the four certificate conditions plus the per-component
/// lemma thresholds.
#[derive(Clone, Copy, Debug)]
pub struct CertificateReport {
    /// `||P_T(W)||_F / max(||W||_F, eps)`; membership requires <= 1e-6.
    pub tperp_residual: f64,
    /// `||W^L||`
    pub spectral_wl: f64,
    /// `||W^S||`
    pub spectral_ws: f64,
    /// `||W^L + W^S||`
    pub spectral_sum: f64,
    /// `||P_Omega(U*V^* + W - lambda*sgn(S0))||_F`
    pub omega_residual_f: f64,
    /// `||P_Omega_perp(U*V^* + W)||_inf`
    pub omega_comp_infty: f64,
    /// `||P_Omega(W^S) - lambda*sgn(S0)||_F / (lambda * ||sgn(S0)||_F)`
    pub ws_support_residual: f64,
    pub lambda: f64,
    /// `||W^L|| < 1/4`, `||P_Omega(U*V^*+W^L)||_F < lambda/4`,
    /// `||P_Omega_perp(U*V^*+W^L)||_inf < lambda/4`
    pub lemma32_checks: (bool, bool, bool),
    /// `||W^S|| < 1/4`, `||P_Omega_perp(W^S)||_inf < lambda/4`
    pub lemma33_checks: (bool, bool),
    /// All four certificate conditions hold.
    pub passed: bool,
}

/// Membership tolerance for `W in T_perp`, relative to `||W||_F`.
pub const TPERP_MEMBERSHIP_TOL: f64 = 1e-6;

/// Evaluates every certificate condition numerically. Always produces a
/// report; `passed` reflects the four conditions above.
pub fn verify_certificate(
    w_l: &DenseTensor,
    w_s: &DenseTensor,
    t: &TangentSpace,
    omega: &SupportSet,
    sign_tensor: &DenseTensor,
    lambda: f64,
) -> Result<CertificateReport> {
    let w = w_l + w_s;
    let uvt = t.uv_transpose();

    // floor the denominator so a certificate that is numerically zero
    // (golfing converged exactly) still counts as a member of T_perp
    let w_norm_f = w.frobenius_norm().max(1e-10 * (1.0 + uvt.frobenius_norm()));
    let tperp_residual = project_t(&w, t)?.frobenius_norm() / w_norm_f;

    let spectral_wl = spectral_norm(w_l);
    let spectral_ws = spectral_norm(w_s);
    let spectral_sum = spectral_norm(&w);

    let lam_sgn = sign_tensor.scale(lambda);
    let g = &uvt + &w;
    let omega_residual_f = project_omega(&(&g - &lam_sgn), omega)?.frobenius_norm();
    let omega_comp_infty = project_omega_complement(&g, omega)?.infinity_norm();

    let sgn_norm = sign_tensor.frobenius_norm();
    let ws_support_residual = if sgn_norm > 0.0 {
        project_omega(&(w_s - &lam_sgn), omega)?.frobenius_norm() / (lambda * sgn_norm)
    } else {
        project_omega(w_s, omega)?.frobenius_norm()
    };

    let wl_plus = &uvt + w_l;
    let lemma32_checks = (
        spectral_wl < 0.25,
        project_omega(&wl_plus, omega)?.frobenius_norm() < lambda / 4.0,
        project_omega_complement(&wl_plus, omega)?.infinity_norm() < lambda / 4.0,
    );
    let lemma33_checks = (
        spectral_ws < 0.25,
        project_omega_complement(w_s, omega)?.infinity_norm() < lambda / 4.0,
    );

    let passed = tperp_residual <= TPERP_MEMBERSHIP_TOL
        && spectral_sum < 0.5
        && omega_residual_f <= lambda / 4.0
        && omega_comp_infty < lambda / 2.0;

    Ok(CertificateReport {
        tperp_residual,
        spectral_wl,
        spectral_ws,
        spectral_sum,
        omega_residual_f,
        omega_comp_infty,
        ws_support_residual,
        lambda,
        lemma32_checks,
        lemma33_checks,
        passed,
    })
}

/// First-order optimality residuals for a candidate decomposition.
#[derive(Clone, Copy, Debug)]
pub struct OptimalityReport {
    /// `||W||` for the extracted `T_perp` component; bound 1/2.
    pub spectral_w: f64,
    /// `||F||_inf` for the off-support dual residual; bound 1/2.
    pub infty_f: f64,
    /// `||P_Omega(D)||_F` for the on-support residual; bound 1/4.
    pub omega_d_frobenius: f64,
    pub passed: bool,
}

/// Checks the first-order optimality system at a candidate `(L_hat, S_hat)`
/// for the observation `x`: constructs `G = U*V^* + W` with a dual
/// certificate `W`, then splits `G/lambda - sgn(S_hat)` into the off-support
/// part `F` and the on-support part `P_Omega(D)`, so that
/// `U*V^* + W = lambda (sgn(S_hat) + F + P_Omega(D))` holds exactly.
pub fn check_optimality(
    x: &DenseTensor,
    l_hat: &DenseTensor,
    s_hat: &DenseTensor,
    t: &TangentSpace,
    omega: &SupportSet,
    lambda: f64,
    seed: Seed,
) -> Result<OptimalityReport> {
    if !(lambda > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "lambda must be positive, got {lambda}"
        )));
    }
    let feas = (&(l_hat + s_hat) - x).frobenius_norm() / x.frobenius_norm().max(1.0);
    if feas > 1e-8 {
        return Err(Error::InfeasiblePair { residual: feas });
    }
    let shape = x.shape();
    let sgn = project_omega(&s_hat.map(f64::signum), omega)?;

    // an empty complement leaves nothing for the golfing rounds to sample
    let numel = shape.numel() as f64;
    let rho_emp = (omega.len() as f64 / numel).min(1.0 - 0.5 / numel);
    let config = GolfingConfig::for_target_rho(shape, rho_emp)?;
    let cert = build_certificate(t, omega, &sgn, lambda, &config, seed)?;

    let g = &t.uv_transpose() + &(&cert.w_l + &cert.w_s);
    let w = project_t_complement(&g, t)?;
    let dual_residual = &g.scale(1.0 / lambda) - &sgn;
    let f = project_omega_complement(&dual_residual, omega)?;
    let d = project_omega(&dual_residual, omega)?;

    let spectral_w = spectral_norm(&w);
    let infty_f = f.infinity_norm();
    let omega_d_frobenius = d.frobenius_norm();
    Ok(OptimalityReport {
        spectral_w,
        infty_f,
        omega_d_frobenius,
        passed: spectral_w <= 0.5 && infty_f <= 0.5 && omega_d_frobenius <= 0.25,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random_models::{
        sample_bernoulli_support, sample_low_tubal_rank, sample_sign_tensor,
    };
    use crate::tensor_core::Shape3;

    #[test]
    fn default_lambda_values() {
        assert!((default_lambda(Shape3::new(40, 40, 10).unwrap()) - 0.05).abs() < 1e-15);
        assert_eq!(default_lambda(Shape3::new(1, 1, 1).unwrap()), 1.0);
        let rect = default_lambda(Shape3::new(30, 50, 4).unwrap());
        assert!((rect - 1.0 / 200f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn golfing_converges_in_one_round_without_corruption() {
        // empty Omega with q = 1: each round covers everything, so
        // Z_1 = (P_T - P_T P_T)(Z_0) = 0
        let shape = Shape3::new(8, 8, 3).unwrap();
        let (_, t) = sample_low_tubal_rank(shape, 2, Seed(1)).unwrap();
        let omega = SupportSet::empty(shape);
        let cfg = GolfingConfig::for_target_rho(shape, 0.0).unwrap();
        assert_eq!(cfg.q(), 1.0);
        let parts = partition_complement(&omega, &cfg, Seed(2)).unwrap();
        let (w_l, trace) = golfing_wl(&t, &parts, cfg.q()).unwrap();
        assert!(trace.frobenius[1] < 1e-10, "Z_1 = {}", trace.frobenius[1]);
        assert!(w_l.frobenius_norm() < 1e-10);
    }

    #[test]
    fn golfing_with_rank_zero_returns_zero() {
        let shape = Shape3::new(6, 6, 2).unwrap();
        let t = TangentSpace::empty(shape);
        let omega = sample_bernoulli_support(shape, 0.2, Seed(3)).unwrap();
        let cfg = GolfingConfig::for_target_rho(shape, 0.2).unwrap();
        let parts = partition_complement(&omega, &cfg, Seed(4)).unwrap();
        let (w_l, _) = golfing_wl(&t, &parts, cfg.q()).unwrap();
        assert_eq!(w_l.frobenius_norm(), 0.0);
    }

    #[test]
    fn golfing_output_vanishes_on_support() {
        let shape = Shape3::new(10, 10, 3).unwrap();
        let (_, t) = sample_low_tubal_rank(shape, 1, Seed(5)).unwrap();
        let omega = sample_bernoulli_support(shape, 0.1, Seed(6)).unwrap();
        let cfg = GolfingConfig::for_target_rho(shape, 0.1).unwrap();
        let parts = partition_complement(&omega, &cfg, Seed(7)).unwrap();
        let (w_l, trace) = golfing_wl(&t, &parts, cfg.q()).unwrap();
        // U*V^* + W^L = Z_j0 + Y_j0 with Y_j0 supported on the complement,
        // so on the support only the residual Z_j0 remains
        let on_support = project_omega(&(&t.uv_transpose() + &w_l), &omega).unwrap();
        let z_j0_norm = *trace.frobenius.last().unwrap();
        assert!(
            on_support.frobenius_norm() <= z_j0_norm + 1e-10,
            "support leakage {} exceeds residual {z_j0_norm}",
            on_support.frobenius_norm()
        );
        // W^L lives in T_perp
        let resid = project_t(&w_l, &t).unwrap().frobenius_norm();
        assert!(resid <= 1e-8 * w_l.frobenius_norm());
    }

    #[test]
    fn golfing_contracts_at_moderate_sizes() {
        // sampling a 5% support at n = 32 leaves the per-round deviation
        // operator well below 1, so the residual collapses geometrically
        let shape = Shape3::new(32, 32, 4).unwrap();
        let (_, t) = sample_low_tubal_rank(shape, 1, Seed(50)).unwrap();
        let omega = sample_bernoulli_support(shape, 0.05, Seed(51)).unwrap();
        let cfg = GolfingConfig::for_target_rho(shape, 0.05).unwrap();
        let parts = partition_complement(&omega, &cfg, Seed(52)).unwrap();
        let (_, trace) = golfing_wl(&t, &parts, cfg.q()).unwrap();
        let z_j0 = *trace.frobenius.last().unwrap();
        assert!(
            z_j0 < 0.1 * trace.frobenius[0],
            "final residual {z_j0} did not contract: {:?}",
            trace.frobenius
        );
    }

    #[test]
    fn neumann_edge_cases() {
        let shape = Shape3::new(6, 6, 2).unwrap();
        let rhs = sample_sign_tensor(shape, 0.3, Seed(8)).unwrap();
        // rank zero: P_T = 0, series has exactly the first term
        let t0 = TangentSpace::empty(shape);
        let omega = sample_bernoulli_support(shape, 0.3, Seed(9)).unwrap();
        let (x, terms) = neumann_apply(&omega, &t0, &rhs, 1e-10, 50).unwrap();
        assert_eq!(terms, 1);
        assert_eq!(x, project_omega(&rhs, &omega).unwrap());
        // empty support: zero
        let empty = SupportSet::empty(shape);
        let (_, t) = sample_low_tubal_rank(shape, 1, Seed(10)).unwrap();
        let (x, terms) = neumann_apply(&empty, &t, &rhs, 1e-10, 50).unwrap();
        assert_eq!(x.frobenius_norm(), 0.0);
        assert_eq!(terms, 1);
    }

    #[test]
    fn neumann_solves_the_defining_equation() {
        use crate::projections::operator_norm;
        let shape = Shape3::new(8, 8, 4).unwrap();
        let (_, t) = sample_low_tubal_rank(shape, 2, Seed(11)).unwrap();
        let omega = sample_bernoulli_support(shape, 0.3, Seed(12)).unwrap();
        // series precondition ||P_Omega P_T|| < 1, estimated through the
        // self-adjoint composition P_T P_Omega P_T
        let gram = operator_norm(
            |z| {
                let a = project_t(z, &t).unwrap();
                let b = project_omega(&a, &omega).unwrap();
                project_t(&b, &t).unwrap()
            },
            shape,
            1e-10,
            5000,
        );
        assert!(
            gram.converged && gram.value < 1.0,
            "instance violates the contraction precondition: {gram:?}"
        );
        let rhs = sample_sign_tensor(shape, 1.0, Seed(13)).unwrap();
        let tol = 1e-10;
        let (x, _) = neumann_apply(&omega, &t, &rhs, tol, 500).unwrap();
        // (P_Omega - P_Omega P_T P_Omega)(x) = P_Omega(rhs)
        let px = project_omega(&x, &omega).unwrap();
        let ptpx = project_omega(&project_t(&px, &t).unwrap(), &omega).unwrap();
        let residual = (&(&px - &ptpx) - &project_omega(&rhs, &omega).unwrap()).frobenius_norm();
        assert!(
            residual <= 100.0 * tol * rhs.frobenius_norm(),
            "residual {residual}"
        );

        // dense oracle: materialize the restricted operator over the support
        // coordinates and solve directly
        let omega_offsets: Vec<usize> = omega
            .indices()
            .map(|(i, j, k)| shape.offset(i, j, k))
            .collect();
        let dim = omega_offsets.len();
        let mut matrix = nalgebra::DMatrix::<f64>::zeros(dim, dim);
        for (col, &off) in omega_offsets.iter().enumerate() {
            let mut e = DenseTensor::zeros(shape);
            e.data_mut()[off] = 1.0;
            let image = &e - &project_omega(&project_t(&e, &t).unwrap(), &omega).unwrap();
            for (row, &roff) in omega_offsets.iter().enumerate() {
                matrix[(row, col)] = image.data()[roff];
            }
        }
        let rhs_restricted =
            nalgebra::DVector::from_iterator(dim, omega_offsets.iter().map(|&off| rhs.data()[off]));
        let dense = matrix.lu().solve(&rhs_restricted).expect("dense solve");
        let mut worst = 0.0f64;
        for (row, &off) in omega_offsets.iter().enumerate() {
            worst = worst.max((dense[row] - x.data()[off]).abs());
        }
        let rel = worst / x.infinity_norm();
        assert!(rel <= 1e-6, "dense-solve disagreement {rel}");
    }

    #[test]
    fn ws_edge_cases_and_support_identity() {
        let shape = Shape3::new(12, 12, 4).unwrap();
        let lambda = default_lambda(shape);
        let omega = sample_bernoulli_support(shape, 0.1, Seed(14)).unwrap();
        let (_, t) = sample_low_tubal_rank(shape, 1, Seed(15)).unwrap();

        // zero sign tensor
        let zero = DenseTensor::zeros(shape);
        let (ws, _) = build_ws(&omega, &t, &zero, lambda, 1e-10).unwrap();
        assert_eq!(ws.frobenius_norm(), 0.0);

        // rank zero: W^S = lambda * sgn exactly
        let sgn =
            project_omega(&sample_sign_tensor(shape, 1.0, Seed(16)).unwrap(), &omega).unwrap();
        let t0 = TangentSpace::empty(shape);
        let (ws, _) = build_ws(&omega, &t0, &sgn, lambda, 1e-10).unwrap();
        assert!((&ws - &sgn.scale(lambda)).infinity_norm() < 1e-14);

        // random instance: support identity to 1e-6 relative
        let (ws, _) = build_ws(&omega, &t, &sgn, lambda, 1e-10).unwrap();
        let residual = project_omega(&(&ws - &sgn.scale(lambda)), &omega)
            .unwrap()
            .frobenius_norm()
            / (lambda * sgn.frobenius_norm());
        assert!(residual < 1e-6, "support identity residual {residual}");
        // and W^S in T_perp
        let tres = project_t(&ws, &t).unwrap().frobenius_norm();
        assert!(tres <= 1e-8 * ws.frobenius_norm());
    }

    #[test]
    fn ws_rejects_signs_off_support() {
        let shape = Shape3::new(4, 4, 2).unwrap();
        let omega = SupportSet::empty(shape);
        let sgn = sample_sign_tensor(shape, 1.0, Seed(17)).unwrap();
        let (_, t) = sample_low_tubal_rank(shape, 1, Seed(18)).unwrap();
        assert!(build_ws(&omega, &t, &sgn, 0.1, 1e-10).is_err());
    }

    #[test]
    fn verify_passes_vacuously_without_corruption_or_rank() {
        let shape = Shape3::new(6, 6, 2).unwrap();
        let t = TangentSpace::empty(shape);
        let omega = SupportSet::empty(shape);
        let zero = DenseTensor::zeros(shape);
        let report = verify_certificate(&zero, &zero, &t, &omega, &zero, 0.1).unwrap();
        assert!(report.passed);
        assert_eq!(report.spectral_sum, 0.0);
    }

    #[test]
    fn verify_flags_scaled_certificate() {
        let shape = Shape3::new(10, 10, 3).unwrap();
        let lambda = default_lambda(shape);
        let (_, t) = sample_low_tubal_rank(shape, 1, Seed(19)).unwrap();
        let omega = sample_bernoulli_support(shape, 0.05, Seed(20)).unwrap();
        let sgn =
            project_omega(&sample_sign_tensor(shape, 1.0, Seed(21)).unwrap(), &omega).unwrap();
        let cfg = GolfingConfig::for_target_rho(shape, 0.05).unwrap();
        let cert = build_certificate(&t, &omega, &sgn, lambda, &cfg, Seed(22)).unwrap();
        let scaled = cert.w_l.scale(10.0);
        let report = verify_certificate(&scaled, &cert.w_s, &t, &omega, &sgn, lambda).unwrap();
        assert!(!report.passed);
        assert!(report.spectral_sum >= 0.5 || report.omega_comp_infty >= lambda / 2.0);
    }

    #[test]
    fn optimality_accepts_uncorrupted_candidate() {
        // huge lambda regime: S_hat = 0 is optimal and the system passes
        let shape = Shape3::new(10, 10, 3).unwrap();
        let (l0, t) = sample_low_tubal_rank(shape, 1, Seed(23)).unwrap();
        let omega = SupportSet::empty(shape);
        let s0 = DenseTensor::zeros(shape);
        let x = &l0 + &s0;
        let report = check_optimality(&x, &l0, &s0, &t, &omega, 10.0, Seed(24)).unwrap();
        assert!(report.passed, "{report:?}");
        assert_eq!(report.omega_d_frobenius, 0.0);
    }

    #[test]
    fn optimality_rejects_claiming_corrupted_data_is_low_rank() {
        use crate::t_algebra::{tsvd, TsvdMode};
        let shape = Shape3::new(10, 10, 3).unwrap();
        let lambda = default_lambda(shape);
        let (l0, _) = sample_low_tubal_rank(shape, 1, Seed(25)).unwrap();
        let sgn = sample_sign_tensor(shape, 0.2, Seed(26)).unwrap();
        let x = &l0 + &sgn;
        // candidate L_hat = X, S_hat = 0: derive T and Omega from the candidate
        let f = tsvd(&x, TsvdMode::Skinny).unwrap();
        let t = TangentSpace::new(f.u, f.v).unwrap();
        let omega = SupportSet::empty(shape);
        let zero = DenseTensor::zeros(shape);
        let report = check_optimality(&x, &x, &zero, &t, &omega, lambda, Seed(27)).unwrap();
        assert!(!report.passed, "{report:?}");
    }

    #[test]
    fn optimality_rejects_infeasible_pair() {
        let shape = Shape3::new(4, 4, 2).unwrap();
        let (l0, t) = sample_low_tubal_rank(shape, 1, Seed(28)).unwrap();
        let x = l0.scale(2.0);
        let zero = DenseTensor::zeros(shape);
        let omega = SupportSet::empty(shape);
        assert!(matches!(
            check_optimality(&x, &l0, &zero, &t, &omega, 0.1, Seed(29)),
            Err(Error::InfeasiblePair { .. })
        ));
    }

    #[test]
    fn optimality_equation_holds_exactly_by_construction() {
        // on a corrupted planted instance the desk-scale bounds need not
        // hold, but the extracted (W, F, D) must reconstruct G exactly
        let shape = Shape3::new(12, 12, 4).unwrap();
        let lambda = default_lambda(shape);
        let (l0, t) = sample_low_tubal_rank(shape, 1, Seed(30)).unwrap();
        let omega = sample_bernoulli_support(shape, 0.05, Seed(31)).unwrap();
        let sgn =
            project_omega(&sample_sign_tensor(shape, 1.0, Seed(32)).unwrap(), &omega).unwrap();
        let s0 = sgn.clone();
        let x = &l0 + &s0;
        // reproduce the internal split and check the reconstruction identity
        let cfg = GolfingConfig::for_target_rho(shape, omega.density()).unwrap();
        let cert = build_certificate(&t, &omega, &sgn, lambda, &cfg, Seed(33)).unwrap();
        let g = &t.uv_transpose() + &(&cert.w_l + &cert.w_s);
        let dual_residual = &g.scale(1.0 / lambda) - &sgn;
        let f = project_omega_complement(&dual_residual, &omega).unwrap();
        let d = project_omega(&dual_residual, &omega).unwrap();
        let rebuilt = (&(&sgn + &f) + &d).scale(lambda);
        assert!((&rebuilt - &g).infinity_norm() < 1e-12);
        // and the report is produced without error
        let report = check_optimality(&x, &l0, &s0, &t, &omega, lambda, Seed(34)).unwrap();
        assert!(report.omega_d_frobenius <= 0.25 + 1e-9, "{report:?}");
    }
}
