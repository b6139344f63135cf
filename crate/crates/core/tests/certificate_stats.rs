//! Statistical behavior of the certificate construction over seeded trials.

use trpca_core::certificate::golfing_wl;
use trpca_core::projections::incoherence_mu;
use trpca_core::random_models::{
    partition_complement, sample_bernoulli_support, sample_low_tubal_rank, GolfingConfig, Seed,
};
use trpca_core::Shape3;

fn median(mut v: Vec<f64>) -> f64 {
    v.sort_by(|a, b| a.partial_cmp(b).unwrap());
    v[v.len() / 2]
}

#[test]
fn golfing_median_contraction_ratio_is_below_half() {
    // 50 seeded trials in the sparse regime (rho = 0.05, r = 1, n = 64): the
    // per-round Frobenius ratio ||Z_j|| / ||Z_{j-1}|| has median below 1/2
    let shape = Shape3::new(64, 64, 4).unwrap();
    let cfg = GolfingConfig::for_target_rho(shape, 0.05).unwrap();
    let mut ratios = Vec::new();
    for trial in 0..50u64 {
        let (_, t) = sample_low_tubal_rank(shape, 1, Seed(trial).derive(&[1])).unwrap();
        let omega = sample_bernoulli_support(shape, 0.05, Seed(trial).derive(&[2])).unwrap();
        let parts = partition_complement(&omega, &cfg, Seed(trial).derive(&[3])).unwrap();
        let (_, trace) = golfing_wl(&t, &parts, cfg.q()).unwrap();
        ratios.extend(trace.frobenius_ratios());
    }
    let med = median(ratios.clone());
    let frac_contracting = ratios.iter().filter(|&&r| r < 1.0).count() as f64 / ratios.len() as f64;
    assert!(med < 0.5, "median ratio {med}");
    assert!(
        frac_contracting >= 0.9,
        "only {frac_contracting:.2} of rounds contract"
    );
}

#[test]
fn gaussian_factor_incoherence_is_measured_and_finite() {
    // measurement only: gaussian factors at a moderate size have incoherence
    // far below the worst case n*n3/r, but no particular constant is pinned
    let shape = Shape3::new(40, 40, 10).unwrap();
    let (_, t) = sample_low_tubal_rank(shape, 3, Seed(99)).unwrap();
    let report = incoherence_mu(&t).unwrap();
    println!(
        "measured incoherence at 40x40x10, r=3: mu_u={:.2} mu_v={:.2} mu_uv={:.2}",
        report.mu_u, report.mu_v, report.mu_uv
    );
    let worst_case = (40.0 * 10.0) / 3.0;
    assert!(report.mu_u >= 1.0 - 1e-9 && report.mu_u < worst_case);
    assert!(report.mu_v >= 1.0 - 1e-9 && report.mu_v < worst_case);
    assert!(report.mu_uv.is_finite() && report.mu_uv > 0.0);
    assert_eq!(report.r, 3);
}
