//! Normal distribution, zeta sums and binomial coefficients.

use num_bigint::BigUint;
use statrs::function::erf::erfc_inv;
use std::f64::consts::{PI, SQRT_2};

pub use statrs::function::gamma::ln_gamma;

/// Standard normal CDF, `½ erfc(−x/√2)` with the musl `erfc`, relative
/// accuracy of a few ulp over the whole line.
pub fn phi(x: f64) -> f64 {
    0.5 * libm::erfc(-x / SQRT_2)
}

/// Standard normal quantile: statrs' `erfc_inv` as a start, polished by two
/// Newton steps against [`phi`].
pub fn phi_inv(p: f64) -> f64 {
    if p <= 0.0 {
        return f64::NEG_INFINITY;
    }
    if p >= 1.0 {
        return f64::INFINITY;
    }
    let mut x = -SQRT_2 * erfc_inv(2.0 * p);
    for _ in 0..2 {
        let pdf = normal_pdf(x);
        if pdf <= 0.0 {
            break;
        }
        x -= (phi(x) - p) / pdf;
    }
    x
}

pub fn normal_pdf(x: f64) -> f64 {
    (-0.5 * x * x).exp() / (2.0 * PI).sqrt()
}

/// `Σ_{k ≥ n0} k^{−s}` for `s > 1`, `n0 ≥ 1`: 128 explicit terms, then the
/// Euler–Maclaurin remainder (absolute error far below 1e-12 for s ≤ 20).
pub fn zeta_from(s: f64, n0: u64) -> f64 {
    assert!(s > 1.0 && n0 >= 1);
    let big_n = n0 + 128;
    let mut sum = 0.0;
    for k in (n0..big_n).rev() {
        sum += (k as f64).powf(-s);
    }
    let n = big_n as f64;
    let tail = n.powf(1.0 - s) / (s - 1.0) + 0.5 * n.powf(-s) + s * n.powf(-s - 1.0) / 12.0
        - s * (s + 1.0) * (s + 2.0) * n.powf(-s - 3.0) / 720.0
        + s * (s + 1.0) * (s + 2.0) * (s + 3.0) * (s + 4.0) * n.powf(-s - 5.0) / 30240.0;
    sum + tail
}

pub fn zeta(s: f64) -> f64 {
    zeta_from(s, 1)
}

pub fn binom_big(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::from(0u32);
    }
    let k = k.min(n - k);
    let mut acc = BigUint::from(1u32);
    for i in 0..k {
        acc *= n - i;
        acc /= i + 1;
    }
    acc
}

/// Binomial coefficient as `f64` (exact while it fits in 53 bits).
pub fn binom(n: u64, k: u64) -> f64 {
    if k > n {
        return 0.0;
    }
    let k = k.min(n - k);
    let mut acc = 1.0f64;
    for i in 0..k {
        acc = acc * (n - i) as f64 / (i + 1) as f64;
    }
    acc.round_if_small()
}

trait RoundSmall {
    fn round_if_small(self) -> f64;
}

impl RoundSmall for f64 {
    fn round_if_small(self) -> f64 {
        if self < 9.0e15 {
            self.round()
        } else {
            self
        }
    }
}

pub fn ln_binom(n: u64, k: u64) -> f64 {
    if k > n {
        return f64::NEG_INFINITY;
    }
    ln_gamma(n as f64 + 1.0) - ln_gamma(k as f64 + 1.0) - ln_gamma((n - k) as f64 + 1.0)
}

/// Big integer to `f64` via its decimal string (exact to rounding).
pub fn big_to_f64(x: &BigUint) -> f64 {
    x.to_string().parse().unwrap_or(f64::INFINITY)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn phi_reference_values() {
        // scipy.stats.norm.cdf
        assert!((phi(0.0) - 0.5).abs() < 1e-16);
        assert!((phi(1.0) - 0.841_344_746_068_542_9).abs() < 1e-15);
        assert!((phi(-2.5) - 0.006_209_665_325_776_132).abs() < 1e-16);
        assert!((phi(0.46332) - 0.678_432_493_951_053_1).abs() < 1e-14);
    }

    #[test]
    fn phi_inv_roundtrip() {
        for &p in &[1e-8, 0.01, 0.3, 0.5, 0.9, 1.0 - 1e-6] {
            assert!((phi(phi_inv(p)) - p).abs() < 1e-12 * p.max(1e-3));
        }
    }

    #[test]
    fn zeta_closed_forms() {
        assert!((zeta(2.0) - PI * PI / 6.0).abs() < 1e-13);
        assert!((zeta(4.0) - PI.powi(4) / 90.0).abs() < 1e-13);
        // mpmath.zeta(3), zeta(1.5)
        assert!((zeta(3.0) - 1.202_056_903_159_594_2).abs() < 1e-13);
        assert!((zeta(1.5) - 2.612_375_348_685_488).abs() < 1e-12);
        assert!((zeta_from(2.0, 3) - (PI * PI / 6.0 - 1.25)).abs() < 1e-13);
    }

    #[test]
    fn binomials() {
        assert_eq!(binom(10, 3), 120.0);
        assert_eq!(binom_big(60, 30).to_string(), "118264581564861424");
        assert!((ln_binom(200, 100) - big_to_f64(&binom_big(200, 100)).ln()).abs() < 1e-9);
    }
}
