//! Small statistics kit for the trend assertions: quantiles and one-sided
//! sign tests.

/// Empirical quantile by linear interpolation; `p` in [0, 1].
pub fn quantile(values: &[f64], p: f64) -> f64 {
    assert!(!values.is_empty(), "quantile of empty sample");
    let mut sorted = values.to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let pos = p.clamp(0.0, 1.0) * (sorted.len() - 1) as f64;
    let lo = pos.floor() as usize;
    let hi = pos.ceil() as usize;
    let frac = pos - lo as f64;
    sorted[lo] * (1.0 - frac) + sorted[hi] * frac
}

pub fn median(values: &[f64]) -> f64 {
    quantile(values, 0.5)
}

/// One-sided sign test for "second > first" over paired samples: the p-value
/// of seeing at least the observed number of positive differences under a
/// fair coin. Ties are dropped.
pub fn sign_test_p_greater(pairs: &[(f64, f64)]) -> f64 {
    let mut n = 0u32;
    let mut wins = 0u32;
    for &(a, b) in pairs {
        if b > a {
            wins += 1;
            n += 1;
        } else if b < a {
            n += 1;
        }
    }
    if n == 0 {
        return 1.0;
    }
    binomial_upper_tail(n, wins)
}

/// P(Bin(n, 1/2) >= k), computed in log space.
fn binomial_upper_tail(n: u32, k: u32) -> f64 {
    let ln_fact: Vec<f64> = {
        let mut v = vec![0.0f64; n as usize + 1];
        for i in 1..=n as usize {
            v[i] = v[i - 1] + (i as f64).ln();
        }
        v
    };
    let ln_half_n = n as f64 * 0.5f64.ln();
    let mut total = 0.0;
    for j in k..=n {
        let ln_c = ln_fact[n as usize] - ln_fact[j as usize] - ln_fact[(n - j) as usize];
        total += (ln_c + ln_half_n).exp();
    }
    total.min(1.0)
}
