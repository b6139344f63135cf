//! The Monte-Carlo experiments.
//!
//! Every trial derives its own random stream from the base seed and the
//! `(parameter index, trial index, purpose)` triple, so results do not
//! depend on scheduling. Each record carries its wall-clock time as the
//! final CSV column, the only nondeterministic output.

use crate::csv::Field;
use crate::runner::run_indexed;
use std::time::Instant;
use trpca_core::certificate::{
    build_certificate, default_lambda, verify_certificate, NEUMANN_MAX_TERMS,
};
use trpca_core::projections::{operator_norm, project_omega, project_t};
use trpca_core::random_models::{
    sample_bernoulli_support, sample_gaussian, sample_low_tubal_rank, sample_sign_tensor,
    GolfingConfig, Seed,
};
use trpca_core::t_algebra::{spectral_norm, tprod, ttranspose};
use trpca_core::trpca::{recovery_report, solve, SolverConfig};
use trpca_core::{DenseTensor, Error, Shape3};

/// Power-iteration settings shared by the operator-norm experiments.
const POWER_TOL: f64 = 1e-6;
const POWER_MAX_ITER: usize = 5000;

/// Recovery success threshold for the phase grid.
pub const PHASE_SUCCESS_REL_ERR: f64 = 1e-5;

fn square_shape(n: usize, n3: usize) -> Result<Shape3, Error> {
    Shape3::new(n, n, n3)
}

// stream purposes
const P_FACTORS: u64 = 0;
const P_SUPPORT: u64 = 1;
const P_SIGNS: u64 = 2;
const P_PARTITION: u64 = 3;
const P_DIRECTION: u64 = 4;

/// Spectral norm of a symmetric Bernoulli sign tensor relative to
/// `sqrt(n * n3)`.
#[derive(Clone, Debug)]
pub struct SignRecord {
    pub n: usize,
    pub n3: usize,
    pub rho: f64,
    pub trial: usize,
    pub spectral_ratio: f64,
    pub runtime_ms: f64,
}

impl SignRecord {
    pub const HEADER: &'static [&'static str] = &[
        "experiment",
        "n",
        "n3",
        "rho",
        "trial",
        "spectral_ratio",
        "runtime_ms",
    ];

    pub fn csv_row(&self) -> Vec<Field> {
        vec![
            Field::Str("sign".into()),
            Field::UInt(self.n as u64),
            Field::UInt(self.n3 as u64),
            Field::Float(self.rho),
            Field::UInt(self.trial as u64),
            Field::Float(self.spectral_ratio),
            Field::Float(self.runtime_ms),
        ]
    }
}

pub fn exp_sign_spectral(
    n_grid: &[usize],
    n3: usize,
    rho_grid: &[f64],
    trials: usize,
    seed: Seed,
    threads: usize,
) -> Result<Vec<SignRecord>, Error> {
    let mut params = Vec::new();
    for &n in n_grid {
        for &rho in rho_grid {
            params.push((n, rho));
        }
    }
    let tasks = params.len() * trials;
    let records = run_indexed(tasks, threads, |task| {
        let (pi, trial) = (task / trials, task % trials);
        let (n, rho) = params[pi];
        let started = Instant::now();
        let run = || -> Result<f64, Error> {
            let shape = square_shape(n, n3)?;
            let m =
                sample_sign_tensor(shape, rho, seed.derive(&[pi as u64, trial as u64, P_SIGNS]))?;
            Ok(spectral_norm(&m) / ((n * n3) as f64).sqrt())
        };
        run().map(|spectral_ratio| SignRecord {
            n,
            n3,
            rho,
            trial,
            spectral_ratio,
            runtime_ms: started.elapsed().as_secs_f64() * 1e3,
        })
    });
    records.into_iter().collect()
}

/// Norm of the sampling deviation `P_T - rho^{-1} P_T P_Omega P_T`.
#[derive(Clone, Debug)]
pub struct PtRecord {
    pub n: usize,
    pub n3: usize,
    pub r: usize,
    pub rho: f64,
    pub trial: usize,
    pub epsilon: f64,
    pub converged: bool,
    pub runtime_ms: f64,
}

impl PtRecord {
    pub const HEADER: &'static [&'static str] = &[
        "experiment",
        "n",
        "n3",
        "r",
        "rho",
        "trial",
        "epsilon",
        "converged",
        "runtime_ms",
    ];

    pub fn csv_row(&self) -> Vec<Field> {
        vec![
            Field::Str("pt".into()),
            Field::UInt(self.n as u64),
            Field::UInt(self.n3 as u64),
            Field::UInt(self.r as u64),
            Field::Float(self.rho),
            Field::UInt(self.trial as u64),
            Field::Float(self.epsilon),
            Field::Bool(self.converged),
            Field::Float(self.runtime_ms),
        ]
    }
}

pub fn exp_pt_concentration(
    n: usize,
    n3: usize,
    r: usize,
    rho_grid: &[f64],
    trials: usize,
    seed: Seed,
    threads: usize,
) -> Result<Vec<PtRecord>, Error> {
    let tasks = rho_grid.len() * trials;
    let records = run_indexed(tasks, threads, |task| {
        let (pi, trial) = (task / trials, task % trials);
        let rho = rho_grid[pi];
        let started = Instant::now();
        let run = || -> Result<(f64, bool), Error> {
            let shape = square_shape(n, n3)?;
            let (_, t) = sample_low_tubal_rank(
                shape,
                r,
                seed.derive(&[pi as u64, trial as u64, P_FACTORS]),
            )?;
            let omega = sample_bernoulli_support(
                shape,
                rho,
                seed.derive(&[pi as u64, trial as u64, P_SUPPORT]),
            )?;
            // deviation D is self-adjoint but indefinite; power-iterate D^2
            let deviation = |z: &DenseTensor| -> DenseTensor {
                let pt = project_t(z, &t).expect("shape");
                let sampled =
                    project_t(&project_omega(&pt, &omega).expect("shape"), &t).expect("shape");
                &pt - &sampled.scale(1.0 / rho)
            };
            let est = operator_norm(
                |z| deviation(&deviation(z)),
                shape,
                POWER_TOL,
                POWER_MAX_ITER,
            );
            Ok((est.value, est.converged))
        };
        run().map(|(epsilon, converged)| PtRecord {
            n,
            n3,
            r,
            rho,
            trial,
            epsilon,
            converged,
            runtime_ms: started.elapsed().as_secs_f64() * 1e3,
        })
    });
    records.into_iter().collect()
}

/// `||P_Omega P_T||^2` and its excess over the sampling density.
#[derive(Clone, Debug)]
pub struct PtOmegaRecord {
    pub n: usize,
    pub n3: usize,
    pub r: usize,
    pub rho: f64,
    pub trial: usize,
    pub pt_omega_sq: f64,
    pub excess: f64,
    pub converged: bool,
    pub runtime_ms: f64,
}

impl PtOmegaRecord {
    pub const HEADER: &'static [&'static str] = &[
        "experiment",
        "n",
        "n3",
        "r",
        "rho",
        "trial",
        "pt_omega_sq",
        "excess",
        "converged",
        "runtime_ms",
    ];

    pub fn csv_row(&self) -> Vec<Field> {
        vec![
            Field::Str("ptomega".into()),
            Field::UInt(self.n as u64),
            Field::UInt(self.n3 as u64),
            Field::UInt(self.r as u64),
            Field::Float(self.rho),
            Field::UInt(self.trial as u64),
            Field::Float(self.pt_omega_sq),
            Field::Float(self.excess),
            Field::Bool(self.converged),
            Field::Float(self.runtime_ms),
        ]
    }
}

pub fn exp_pt_omega_norm(
    n_grid: &[usize],
    n3: usize,
    r: usize,
    rho_grid: &[f64],
    trials: usize,
    seed: Seed,
    threads: usize,
) -> Result<Vec<PtOmegaRecord>, Error> {
    let mut params = Vec::new();
    for &n in n_grid {
        for &rho in rho_grid {
            params.push((n, rho));
        }
    }
    let tasks = params.len() * trials;
    let records = run_indexed(tasks, threads, |task| {
        let (pi, trial) = (task / trials, task % trials);
        let (n, rho) = params[pi];
        let started = Instant::now();
        let run = || -> Result<(f64, bool), Error> {
            let shape = square_shape(n, n3)?;
            let (_, t) = sample_low_tubal_rank(
                shape,
                r,
                seed.derive(&[pi as u64, trial as u64, P_FACTORS]),
            )?;
            let omega = sample_bernoulli_support(
                shape,
                rho,
                seed.derive(&[pi as u64, trial as u64, P_SUPPORT]),
            )?;
            // gram of P_Omega P_T, so the estimate is ||P_Omega P_T|| itself
            let est = operator_norm(
                |z| {
                    let a = project_t(z, &t).expect("shape");
                    let b = project_omega(&a, &omega).expect("shape");
                    project_t(&b, &t).expect("shape")
                },
                shape,
                POWER_TOL,
                POWER_MAX_ITER,
            );
            Ok((est.value * est.value, est.converged))
        };
        run().map(|(sq, converged)| PtOmegaRecord {
            n,
            n3,
            r,
            rho,
            trial,
            pt_omega_sq: sq,
            excess: sq - rho,
            converged,
            runtime_ms: started.elapsed().as_secs_f64() * 1e3,
        })
    });
    records.into_iter().collect()
}

/// Entrywise contraction ratio for a fixed tensor in `T`.
#[derive(Clone, Debug)]
pub struct InftyRecord {
    pub n: usize,
    pub n3: usize,
    pub r: usize,
    pub rho: f64,
    pub trial: usize,
    pub infty_ratio: f64,
    pub runtime_ms: f64,
}

impl InftyRecord {
    pub const HEADER: &'static [&'static str] = &[
        "experiment",
        "n",
        "n3",
        "r",
        "rho",
        "trial",
        "infty_ratio",
        "runtime_ms",
    ];

    pub fn csv_row(&self) -> Vec<Field> {
        vec![
            Field::Str("infty".into()),
            Field::UInt(self.n as u64),
            Field::UInt(self.n3 as u64),
            Field::UInt(self.r as u64),
            Field::Float(self.rho),
            Field::UInt(self.trial as u64),
            Field::Float(self.infty_ratio),
            Field::Float(self.runtime_ms),
        ]
    }
}

pub fn exp_infty_contraction(
    n: usize,
    n3: usize,
    r: usize,
    rho_grid: &[f64],
    trials: usize,
    seed: Seed,
    threads: usize,
) -> Result<Vec<InftyRecord>, Error> {
    let tasks = rho_grid.len() * trials;
    let records = run_indexed(tasks, threads, |task| {
        let (pi, trial) = (task / trials, task % trials);
        let rho = rho_grid[pi];
        let started = Instant::now();
        let run = || -> Result<f64, Error> {
            let shape = square_shape(n, n3)?;
            let (_, t) = sample_low_tubal_rank(
                shape,
                r,
                seed.derive(&[pi as u64, trial as u64, P_FACTORS]),
            )?;
            let omega = sample_bernoulli_support(
                shape,
                rho,
                seed.derive(&[pi as u64, trial as u64, P_SUPPORT]),
            )?;
            // a fresh member of T: U * Y^* + W * V^*
            let dir = seed.derive(&[pi as u64, trial as u64, P_DIRECTION]);
            let u = t.u().ok_or(Error::RankZero("contraction needs r >= 1"))?;
            let v = t.v().ok_or(Error::RankZero("contraction needs r >= 1"))?;
            let y = sample_gaussian(Shape3::new(n, r, n3)?, dir.derive(&[0]));
            let w = sample_gaussian(Shape3::new(n, r, n3)?, dir.derive(&[1]));
            let z = &tprod(u, &ttranspose(&y))? + &tprod(&w, &ttranspose(v))?;
            let sampled = project_t(&project_omega(&z, &omega)?, &t)?;
            let deviation = &z - &sampled.scale(1.0 / rho);
            Ok(deviation.infinity_norm() / z.infinity_norm())
        };
        run().map(|infty_ratio| InftyRecord {
            n,
            n3,
            r,
            rho,
            trial,
            infty_ratio,
            runtime_ms: started.elapsed().as_secs_f64() * 1e3,
        })
    });
    records.into_iter().collect()
}

/// Spectral norm of `(I - rho^{-1} P_Omega) Z` for a fixed `Z` with unit
/// infinity norm, normalized by `sqrt(n n3 log(n n3) / rho)`.
#[derive(Clone, Debug)]
pub struct DeviationRecord {
    pub n: usize,
    pub n3: usize,
    pub rho: f64,
    pub trial: usize,
    pub deviation: f64,
    pub c0_sqrt: f64,
    pub runtime_ms: f64,
}

impl DeviationRecord {
    pub const HEADER: &'static [&'static str] = &[
        "experiment",
        "n",
        "n3",
        "rho",
        "trial",
        "deviation",
        "c0_sqrt",
        "runtime_ms",
    ];

    pub fn csv_row(&self) -> Vec<Field> {
        vec![
            Field::Str("dev".into()),
            Field::UInt(self.n as u64),
            Field::UInt(self.n3 as u64),
            Field::Float(self.rho),
            Field::UInt(self.trial as u64),
            Field::Float(self.deviation),
            Field::Float(self.c0_sqrt),
            Field::Float(self.runtime_ms),
        ]
    }
}

pub fn exp_spectral_deviation(
    n_grid: &[usize],
    n3: usize,
    rho: f64,
    trials: usize,
    seed: Seed,
    threads: usize,
) -> Result<Vec<DeviationRecord>, Error> {
    let tasks = n_grid.len() * trials;
    let records = run_indexed(tasks, threads, |task| {
        let (pi, trial) = (task / trials, task % trials);
        let n = n_grid[pi];
        let started = Instant::now();
        let run = || -> Result<(f64, f64), Error> {
            let shape = square_shape(n, n3)?;
            let raw = sample_gaussian(shape, seed.derive(&[pi as u64, trial as u64, P_DIRECTION]));
            let z = raw.scale(1.0 / raw.infinity_norm());
            let omega = sample_bernoulli_support(
                shape,
                rho,
                seed.derive(&[pi as u64, trial as u64, P_SUPPORT]),
            )?;
            let deviation = spectral_norm(&(&z - &project_omega(&z, &omega)?.scale(1.0 / rho)));
            let nn3 = (n * n3) as f64;
            let scale = (nn3 * nn3.ln() / rho).sqrt();
            Ok((deviation, deviation / scale))
        };
        run().map(|(deviation, c0_sqrt)| DeviationRecord {
            n,
            n3,
            rho,
            trial,
            deviation,
            c0_sqrt,
            runtime_ms: started.elapsed().as_secs_f64() * 1e3,
        })
    });
    records.into_iter().collect()
}

/// One full certificate construction and verification.
#[derive(Clone, Debug)]
pub struct CertificateRecord {
    pub n: usize,
    pub n3: usize,
    pub r: usize,
    pub rho: f64,
    pub trial: usize,
    pub passed: bool,
    pub tperp_residual: f64,
    pub spectral_wl: f64,
    pub spectral_ws: f64,
    pub spectral_sum: f64,
    pub omega_residual_f: f64,
    pub omega_comp_infty: f64,
    pub support_residual: f64,
    pub neumann_terms: usize,
    pub neumann_diverged: bool,
    pub lemma32: (bool, bool, bool),
    pub lemma33: (bool, bool),
    pub runtime_ms: f64,
}

impl CertificateRecord {
    pub const HEADER: &'static [&'static str] = &[
        "experiment",
        "n",
        "n3",
        "r",
        "rho",
        "trial",
        "passed",
        "tperp_residual",
        "spectral_wl",
        "spectral_ws",
        "spectral_sum",
        "omega_residual_f",
        "omega_comp_infty",
        "support_residual",
        "neumann_terms",
        "neumann_diverged",
        "lemma32a",
        "lemma32b",
        "lemma32c",
        "lemma33a",
        "lemma33b",
        "runtime_ms",
    ];

    pub fn csv_row(&self) -> Vec<Field> {
        vec![
            Field::Str("certify".into()),
            Field::UInt(self.n as u64),
            Field::UInt(self.n3 as u64),
            Field::UInt(self.r as u64),
            Field::Float(self.rho),
            Field::UInt(self.trial as u64),
            Field::Bool(self.passed),
            Field::Float(self.tperp_residual),
            Field::Float(self.spectral_wl),
            Field::Float(self.spectral_ws),
            Field::Float(self.spectral_sum),
            Field::Float(self.omega_residual_f),
            Field::Float(self.omega_comp_infty),
            Field::Float(self.support_residual),
            Field::UInt(self.neumann_terms as u64),
            Field::Bool(self.neumann_diverged),
            Field::Bool(self.lemma32.0),
            Field::Bool(self.lemma32.1),
            Field::Bool(self.lemma32.2),
            Field::Bool(self.lemma33.0),
            Field::Bool(self.lemma33.1),
            Field::Float(self.runtime_ms),
        ]
    }
}

pub fn exp_certificate(
    n: usize,
    n3: usize,
    r: usize,
    rho: f64,
    trials: usize,
    seed: Seed,
    threads: usize,
) -> Result<Vec<CertificateRecord>, Error> {
    let records = run_indexed(trials, threads, |trial| {
        let started = Instant::now();
        let run = || -> Result<CertificateRecord, Error> {
            let shape = square_shape(n, n3)?;
            let lambda = default_lambda(shape);
            let (_, t) = sample_low_tubal_rank(shape, r, seed.derive(&[trial as u64, P_FACTORS]))?;
            let omega =
                sample_bernoulli_support(shape, rho, seed.derive(&[trial as u64, P_SUPPORT]))?;
            let signs = project_omega(
                &sample_sign_tensor(shape, 1.0, seed.derive(&[trial as u64, P_SIGNS]))?,
                &omega,
            )?;
            let config = GolfingConfig::for_target_rho(shape, rho)?;
            let built = build_certificate(
                &t,
                &omega,
                &signs,
                lambda,
                &config,
                seed.derive(&[trial as u64, P_PARTITION]),
            );
            match built {
                Ok(cert) => {
                    let report =
                        verify_certificate(&cert.w_l, &cert.w_s, &t, &omega, &signs, lambda)?;
                    Ok(CertificateRecord {
                        n,
                        n3,
                        r,
                        rho,
                        trial,
                        passed: report.passed,
                        tperp_residual: report.tperp_residual,
                        spectral_wl: report.spectral_wl,
                        spectral_ws: report.spectral_ws,
                        spectral_sum: report.spectral_sum,
                        omega_residual_f: report.omega_residual_f,
                        omega_comp_infty: report.omega_comp_infty,
                        support_residual: report.ws_support_residual,
                        neumann_terms: cert.neumann_terms,
                        neumann_diverged: false,
                        lemma32: report.lemma32_checks,
                        lemma33: report.lemma33_checks,
                        runtime_ms: 0.0,
                    })
                }
                Err(Error::NeumannDiverged { terms }) => Ok(CertificateRecord {
                    n,
                    n3,
                    r,
                    rho,
                    trial,
                    passed: false,
                    tperp_residual: f64::NAN,
                    spectral_wl: f64::NAN,
                    spectral_ws: f64::NAN,
                    spectral_sum: f64::NAN,
                    omega_residual_f: f64::NAN,
                    omega_comp_infty: f64::NAN,
                    support_residual: f64::NAN,
                    neumann_terms: terms.min(NEUMANN_MAX_TERMS),
                    neumann_diverged: true,
                    lemma32: (false, false, false),
                    lemma33: (false, false),
                    runtime_ms: 0.0,
                }),
                Err(e) => Err(e),
            }
        };
        run().map(|mut rec| {
            rec.runtime_ms = started.elapsed().as_secs_f64() * 1e3;
            rec
        })
    });
    records.into_iter().collect()
}

/// One planted-recovery trial on the phase grid.
#[derive(Clone, Debug)]
pub struct PhaseRecord {
    pub n: usize,
    pub n3: usize,
    pub r: usize,
    pub rho: f64,
    pub trial: usize,
    pub success: bool,
    pub rel_err_l: f64,
    pub rel_err_s: f64,
    pub iterations: usize,
    pub converged: bool,
    pub runtime_ms: f64,
}

impl PhaseRecord {
    pub const HEADER: &'static [&'static str] = &[
        "experiment",
        "n",
        "n3",
        "r",
        "rho",
        "trial",
        "success",
        "rel_err_l",
        "rel_err_s",
        "iterations",
        "converged",
        "runtime_ms",
    ];

    pub fn csv_row(&self) -> Vec<Field> {
        vec![
            Field::Str("phase".into()),
            Field::UInt(self.n as u64),
            Field::UInt(self.n3 as u64),
            Field::UInt(self.r as u64),
            Field::Float(self.rho),
            Field::UInt(self.trial as u64),
            Field::Bool(self.success),
            Field::Float(self.rel_err_l),
            Field::Float(self.rel_err_s),
            Field::UInt(self.iterations as u64),
            Field::Bool(self.converged),
            Field::Float(self.runtime_ms),
        ]
    }
}

pub fn exp_phase_grid(
    n: usize,
    n3: usize,
    r_grid: &[usize],
    rho_grid: &[f64],
    trials: usize,
    seed: Seed,
    threads: usize,
) -> Result<Vec<PhaseRecord>, Error> {
    let mut params = Vec::new();
    for &r in r_grid {
        for &rho in rho_grid {
            params.push((r, rho));
        }
    }
    let tasks = params.len() * trials;
    let records = run_indexed(tasks, threads, |task| {
        let (pi, trial) = (task / trials, task % trials);
        let (r, rho) = params[pi];
        let started = Instant::now();
        let run = || -> Result<PhaseRecord, Error> {
            let shape = square_shape(n, n3)?;
            let (l0, _) = sample_low_tubal_rank(
                shape,
                r,
                seed.derive(&[pi as u64, trial as u64, P_FACTORS]),
            )?;
            let omega = sample_bernoulli_support(
                shape,
                rho,
                seed.derive(&[pi as u64, trial as u64, P_SUPPORT]),
            )?;
            let s0 = project_omega(
                &sample_sign_tensor(shape, 1.0, seed.derive(&[pi as u64, trial as u64, P_SIGNS]))?,
                &omega,
            )?;
            let x = &l0 + &s0;
            let sol = solve(&x, &SolverConfig::for_shape(shape))?;
            let report = recovery_report(&sol, &l0, &s0)?;
            Ok(PhaseRecord {
                n,
                n3,
                r,
                rho,
                trial,
                success: sol.converged && report.rel_err_l < PHASE_SUCCESS_REL_ERR,
                rel_err_l: report.rel_err_l,
                rel_err_s: report.rel_err_s,
                iterations: sol.iterations,
                converged: sol.converged,
                runtime_ms: 0.0,
            })
        };
        run().map(|mut rec| {
            rec.runtime_ms = started.elapsed().as_secs_f64() * 1e3;
            rec
        })
    });
    records.into_iter().collect()
}
