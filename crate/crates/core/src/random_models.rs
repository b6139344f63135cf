//! Seeded samplers for the probabilistic models: Bernoulli supports,
//! symmetric sign tensors, random low-tubal-rank tensors, and the coupled
//! support partition used by the golfing scheme.
//!
//! All samplers are driven by [`Seed`], a 64-bit value feeding a ChaCha8
//! counter-based generator. Identical `(seed, parameters)` produce identical
//! outputs byte for byte; parallel trials split streams with
//! [`Seed::derive`].

use crate::error::{Error, Result};
use crate::projections::{SupportSet, TangentSpace};
use crate::t_algebra::{tprod, tsvd, ttranspose, TsvdMode};
use crate::tensor_core::{DenseTensor, Shape3};
use rand::Rng;
use rand_chacha::{rand_core::SeedableRng, ChaCha8Rng};
use rand_distr::StandardNormal;

/// Seed for the counter-based generator behind every sampler.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Hash)]
pub struct Seed(pub u64);

impl Seed {
    /// Fresh generator for this seed.
    pub fn rng(self) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.0)
    }

    /// Derives a statistically independent child seed from `parts`, e.g.
    /// `(trial index, purpose tag)`. Mixing is splitmix64, so derived streams
    /// never overlap for distinct part lists.
    pub fn derive(self, parts: &[u64]) -> Seed {
        let mut state = self.0;
        for &p in parts {
            state = splitmix64(state ^ splitmix64(p));
        }
        Seed(state)
    }
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

fn check_probability(rho: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&rho) || !rho.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "probability must lie in [0, 1], got {rho}"
        )));
    }
    Ok(())
}

/// Samples a support where each index is included independently with
/// probability `rho`.
pub fn sample_bernoulli_support(shape: Shape3, rho: f64, seed: Seed) -> Result<SupportSet> {
    check_probability(rho)?;
    let mut rng = seed.rng();
    let mask = (0..shape.numel()).map(|_| rng.gen::<f64>() < rho).collect();
    SupportSet::from_mask(shape, mask)
}

/// Samples the symmetric Bernoulli sign tensor: each entry is `1` with
/// probability `rho/2`, `0` with probability `1 - rho`, and `-1` with
/// probability `rho/2`. Support membership and the sign are drawn
/// independently.
pub fn sample_sign_tensor(shape: Shape3, rho: f64, seed: Seed) -> Result<DenseTensor> {
    check_probability(rho)?;
    let mut rng = seed.rng();
    let data = (0..shape.numel())
        .map(|_| {
            let included = rng.gen::<f64>() < rho;
            let sign = if rng.gen::<f64>() < 0.5 { 1.0 } else { -1.0 };
            if included {
                sign
            } else {
                0.0
            }
        })
        .collect();
    DenseTensor::from_vec(shape, data)
}

/// Samples a tensor with independent standard normal entries.
pub fn sample_gaussian(shape: Shape3, seed: Seed) -> DenseTensor {
    let mut rng = seed.rng();
    DenseTensor::from_fn(shape, |_, _, _| rng.sample(StandardNormal))
}

/// Samples `P * Q^*` with i.i.d. standard normal factor entries, which has
/// tubal rank `r` almost surely, and returns it with the orthonormalized
/// tangent factors of its t-SVD.
pub fn sample_low_tubal_rank(
    shape: Shape3,
    r: usize,
    seed: Seed,
) -> Result<(DenseTensor, TangentSpace)> {
    if r > shape.n_min() {
        return Err(Error::InvalidParameter(format!(
            "rank {r} exceeds min(n1, n2) = {}",
            shape.n_min()
        )));
    }
    if r == 0 {
        return Ok((DenseTensor::zeros(shape), TangentSpace::empty(shape)));
    }
    let p = sample_gaussian(
        Shape3::new(shape.n1(), r, shape.n3())?,
        seed.derive(&[0, 1]),
    );
    let q = sample_gaussian(
        Shape3::new(shape.n2(), r, shape.n3())?,
        seed.derive(&[0, 2]),
    );
    let l = tprod(&p, &ttranspose(&q))?;
    let f = tsvd(&l, TsvdMode::Skinny)?;
    let t = TangentSpace::new(f.u, f.v)?;
    Ok((l, t))
}

/// Parameters tying the single-support Bernoulli model `Ber(rho)` to the
/// golfing scheme's `j0` rounds of `Ber(q)` supports through
/// `(1 - q)^j0 = rho`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GolfingConfig {
    j0: usize,
    q: f64,
    rho: f64,
}

impl GolfingConfig {
    /// Default round count `j0 = 2 * ceil(ln(n_(1) * n3))` (natural log,
    /// at least 1) with `q` solving `(1 - q)^j0 = rho`.
    pub fn for_target_rho(shape: Shape3, rho: f64) -> Result<Self> {
        let nn3 = (shape.n_max() * shape.n3()) as f64;
        let j0 = (2.0 * nn3.ln().ceil()).max(1.0) as usize;
        Self::with_rounds(rho, j0)
    }

    /// Explicit round count with `q` solving `(1 - q)^j0 = rho`.
    pub fn with_rounds(rho: f64, j0: usize) -> Result<Self> {
        if j0 == 0 {
            return Err(Error::InvalidParameter("j0 must be at least 1".into()));
        }
        if !(0.0..1.0).contains(&rho) {
            return Err(Error::InvalidParameter(format!(
                "target rho must lie in [0, 1), got {rho}"
            )));
        }
        let q = 1.0 - rho.powf(1.0 / j0 as f64);
        Ok(Self { j0, q, rho })
    }

    pub fn j0(&self) -> usize {
        self.j0
    }

    pub fn q(&self) -> f64 {
        self.q
    }

    pub fn rho(&self) -> f64 {
        self.rho
    }

    fn validate(&self) -> Result<()> {
        let implied = (1.0 - self.q).powi(self.j0 as i32);
        if (implied - self.rho).abs() > 1e-12 {
            return Err(Error::InvalidParameter(format!(
                "inconsistent golfing config: (1 - q)^j0 = {implied} but rho = {}",
                self.rho
            )));
        }
        Ok(())
    }
}

/// Partitions the complement of `omega` into `j0` overlapping rounds whose
/// union is exactly that complement.
///
/// Marginally each round is `Ber(q)`; the rounds are coupled to `omega` by
/// conditioning every index's membership pattern on "no inclusion" inside
/// `omega` and "at least one inclusion" outside it. This realizes the
/// equality in distribution between the two sampling models while
/// guaranteeing that the golfing iteration only ever touches the complement.
pub fn partition_complement(
    omega: &SupportSet,
    config: &GolfingConfig,
    seed: Seed,
) -> Result<Vec<SupportSet>> {
    config.validate()?;
    let shape = omega.shape();
    let j0 = config.j0;
    let q = config.q;
    let mut rng = seed.rng();
    let mut masks = vec![vec![false; shape.numel()]; j0];
    for off in 0..shape.numel() {
        if omega.mask()[off] {
            continue; // conditioned on zero inclusions
        }
        // rejection-sample the j0 membership bits conditioned on >= 1 set
        loop {
            let mut any = false;
            for mask in masks.iter_mut() {
                let bit = rng.gen::<f64>() < q;
                mask[off] = bit;
                any |= bit;
            }
            if any {
                break;
            }
        }
    }
    masks
        .into_iter()
        .map(|m| SupportSet::from_mask(shape, m))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::t_algebra::singular_values_per_slice;

    #[test]
    fn samplers_are_deterministic() {
        let shape = Shape3::new(6, 5, 3).unwrap();
        let seed = Seed(99);
        assert_eq!(
            sample_bernoulli_support(shape, 0.3, seed).unwrap(),
            sample_bernoulli_support(shape, 0.3, seed).unwrap()
        );
        assert_eq!(
            sample_sign_tensor(shape, 0.3, seed).unwrap(),
            sample_sign_tensor(shape, 0.3, seed).unwrap()
        );
        assert_eq!(sample_gaussian(shape, seed), sample_gaussian(shape, seed));
        assert_ne!(
            sample_gaussian(shape, seed),
            sample_gaussian(shape, seed.derive(&[1]))
        );
    }

    #[test]
    fn bernoulli_support_edge_probabilities() {
        let shape = Shape3::new(4, 4, 2).unwrap();
        assert!(sample_bernoulli_support(shape, 0.0, Seed(1))
            .unwrap()
            .is_empty());
        assert_eq!(
            sample_bernoulli_support(shape, 1.0, Seed(1)).unwrap().len(),
            shape.numel()
        );
        assert!(sample_bernoulli_support(shape, 1.5, Seed(1)).is_err());
    }

    #[test]
    fn bernoulli_density_within_binomial_band() {
        let shape = Shape3::new(20, 20, 10).unwrap();
        let rho = 0.3;
        let trials = 500;
        let mut total = 0usize;
        for s in 0..trials {
            total += sample_bernoulli_support(shape, rho, Seed(s)).unwrap().len();
        }
        let n = (shape.numel() * trials as usize) as f64;
        let mean = total as f64 / n;
        let sigma = (rho * (1.0 - rho) / n).sqrt();
        assert!(
            (mean - rho).abs() < 3.0 * sigma + 1e-12,
            "mean density {mean} outside band around {rho}"
        );
    }

    #[test]
    fn sign_tensor_edge_cases_and_law() {
        let shape = Shape3::new(4, 4, 2).unwrap();
        assert_eq!(
            sample_sign_tensor(shape, 0.0, Seed(5))
                .unwrap()
                .frobenius_norm(),
            0.0
        );
        let full = sample_sign_tensor(shape, 1.0, Seed(5)).unwrap();
        assert!(full.data().iter().all(|&x| x == 1.0 || x == -1.0));

        // P(+1) over ~1e6 draws at rho = 0.2 stays in the 3-sigma band
        let big = Shape3::new(100, 100, 100).unwrap();
        let t = sample_sign_tensor(big, 0.2, Seed(6)).unwrap();
        let plus = t.data().iter().filter(|&&x| x == 1.0).count() as f64;
        let n = big.numel() as f64;
        let p_hat = plus / n;
        let sigma = (0.1f64 * 0.9 / n).sqrt();
        assert!((p_hat - 0.1).abs() < 3.0 * sigma);
        // sign mean within 3 sigma of zero
        let mean = t.data().iter().sum::<f64>() / n;
        let sigma_mean = (0.2f64 / n).sqrt();
        assert!(mean.abs() < 3.0 * sigma_mean);
    }

    #[test]
    fn low_tubal_rank_sampler() {
        let shape = Shape3::new(12, 10, 4).unwrap();
        let (z, t) = sample_low_tubal_rank(shape, 0, Seed(7)).unwrap();
        assert_eq!(z.frobenius_norm(), 0.0);
        assert_eq!(t.rank(), 0);
        assert!(sample_low_tubal_rank(shape, 11, Seed(9)).is_err());

        let big = Shape3::new(40, 40, 10).unwrap();
        let (l, t) = sample_low_tubal_rank(big, 3, Seed(8)).unwrap();
        assert_eq!(t.rank(), 3);
        let sigmas = singular_values_per_slice(&l).unwrap();
        for slice in &sigmas {
            assert!(
                slice[3] / slice[0] < 1e-10,
                "rank overflow: {:?}",
                &slice[..5]
            );
        }
    }

    #[test]
    fn full_rank_matrix_case() {
        let shape = Shape3::new(4, 4, 1).unwrap();
        let (l, t) = sample_low_tubal_rank(shape, 4, Seed(10)).unwrap();
        assert_eq!(t.rank(), 4);
        let sigmas = singular_values_per_slice(&l).unwrap();
        assert!(sigmas[0][3] > 1e-8 * sigmas[0][0]);
    }

    #[test]
    fn golfing_config_arithmetic() {
        let cfg = GolfingConfig::with_rounds(0.25, 12).unwrap();
        let expected_q = 1.0 - 0.25f64.powf(1.0 / 12.0);
        assert!((cfg.q() - expected_q).abs() < 1e-15);
        assert!((cfg.q() - 0.1091).abs() < 1e-4);
        assert!(cfg.q() >= (1.0 - 0.25) / 12.0); // overlap lower bound
        assert!(((1.0 - cfg.q()).powi(12) - 0.25).abs() < 1e-12);

        let shape = Shape3::new(20, 20, 4).unwrap();
        let cfg = GolfingConfig::for_target_rho(shape, 0.05).unwrap();
        assert_eq!(cfg.j0(), 10); // 2 * ceil(ln 80)
        assert!(((1.0 - cfg.q()).powi(10) - 0.05).abs() < 1e-12);
        assert!(cfg.q() * cfg.j0() as f64 >= 1.0 - cfg.rho());
    }

    #[test]
    fn partition_covers_complement_exactly() {
        let shape = Shape3::new(6, 6, 3).unwrap();
        for s in 0..100 {
            let omega = sample_bernoulli_support(shape, 0.3, Seed(1000 + s)).unwrap();
            let cfg = GolfingConfig::for_target_rho(shape, 0.3).unwrap();
            let parts = partition_complement(&omega, &cfg, Seed(2000 + s)).unwrap();
            assert_eq!(parts.len(), cfg.j0());
            let mut union = SupportSet::empty(shape);
            for p in &parts {
                // rounds never touch omega
                assert!(p.indices().all(|(i, j, k)| !omega.contains(i, j, k)));
                union = union.union(p).unwrap();
            }
            assert_eq!(union, omega.complement());
        }
    }

    #[test]
    fn single_round_partition_is_the_complement() {
        let shape = Shape3::new(5, 4, 2).unwrap();
        let omega = sample_bernoulli_support(shape, 0.4, Seed(31)).unwrap();
        let cfg = GolfingConfig::with_rounds(0.4, 1).unwrap();
        let parts = partition_complement(&omega, &cfg, Seed(32)).unwrap();
        assert_eq!(parts.len(), 1);
        assert_eq!(parts[0], omega.complement());
    }

    #[test]
    fn partition_is_deterministic() {
        let shape = Shape3::new(5, 5, 3).unwrap();
        let omega = sample_bernoulli_support(shape, 0.2, Seed(41)).unwrap();
        let cfg = GolfingConfig::for_target_rho(shape, 0.2).unwrap();
        let a = partition_complement(&omega, &cfg, Seed(42)).unwrap();
        let b = partition_complement(&omega, &cfg, Seed(42)).unwrap();
        assert_eq!(a, b);
    }
}
