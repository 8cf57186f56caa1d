//! Log-domain factorials and compensated summation.
//!
//! Series terms such as `s^{2n} / (2n)!` are evaluated as `exp(ln(...))`
//! so that neither the factorial nor the power overflows for the photon
//! numbers reached by slowly converging families (`n` in the tens of
//! thousands for strongly squeezed vacua).

use std::f64::consts::{LN_2, PI};
use std::sync::OnceLock;

/// Largest `n` whose factorial is finite in `f64`.
const FACTORIAL_TABLE_LEN: usize = 171;

/// Below this argument `ln n!` comes from the exact product table.
const STIRLING_THRESHOLD: u64 = 30;

fn factorial_table() -> &'static [f64; FACTORIAL_TABLE_LEN] {
    static TABLE: OnceLock<[f64; FACTORIAL_TABLE_LEN]> = OnceLock::new();
    TABLE.get_or_init(|| {
        let mut table = [1.0; FACTORIAL_TABLE_LEN];
        for n in 1..FACTORIAL_TABLE_LEN {
            table[n] = table[n - 1] * n as f64;
        }
        table
    })
}

/// Remainder of Stirling's series, `ln Γ(x+1) - [x ln x - x + ½ ln(2πx)]`.
///
/// Five terms keep the truncation error below 1e-17 for `x >= 30`.
fn stirling_remainder(x: f64) -> f64 {
    let inv = 1.0 / x;
    let inv2 = inv * inv;
    inv * (1.0 / 12.0
        - inv2 * (1.0 / 360.0 - inv2 * (1.0 / 1260.0 - inv2 * (1.0 / 1680.0 - inv2 / 1188.0))))
}

/// `ln(n!)`, exact to rounding for `n < 30` and via Stirling's series above.
pub fn ln_factorial(n: u64) -> f64 {
    if n < STIRLING_THRESHOLD {
        return factorial_table()[n as usize].ln();
    }
    let x = n as f64;
    x * x.ln() - x + 0.5 * (2.0 * PI * x).ln() + stirling_remainder(x)
}

/// `ln(C(2n, n) / 4^n)`, the log of the central binomial coefficient with
/// its leading exponential growth removed.
///
/// Computing `ln C(2n,n)` and `2n ln 2` separately cancels catastrophically
/// once `n` is large; the scaled form stays O(ln n).
pub fn ln_central_binomial_scaled(n: u64) -> f64 {
    if n == 0 {
        return 0.0;
    }
    if n < STIRLING_THRESHOLD {
        let table = factorial_table();
        let ratio = table[2 * n as usize] / (table[n as usize] * table[n as usize]);
        return ratio.ln() - 2.0 * n as f64 * LN_2;
    }
    let x = n as f64;
    -0.5 * (PI * x).ln() + stirling_remainder(2.0 * x) - 2.0 * stirling_remainder(x)
}

/// `n * ln(x)` with the convention `0 * ln(0) = 0`, so that `0^0 = 1`.
pub fn n_ln(n: u64, x: f64) -> f64 {
    if n == 0 {
        0.0
    } else {
        n as f64 * x.ln()
    }
}

/// `ln cosh(s)` for `s >= 0` without overflow.
pub fn ln_cosh(s: f64) -> f64 {
    if s < 1.0 {
        s.cosh().ln()
    } else {
        s + (-2.0 * s).exp().ln_1p() - LN_2
    }
}

/// `ln sinh(s)` for `s > 0` without overflow.
pub fn ln_sinh(s: f64) -> f64 {
    if s < 1.0 {
        s.sinh().ln()
    } else {
        s + (-(-2.0 * s).exp()).ln_1p() - LN_2
    }
}

/// `x log2 x` with `0 log2 0 = 0`.
pub fn xlog2x(x: f64) -> f64 {
    if x <= 0.0 {
        0.0
    } else {
        x * x.log2()
    }
}

/// Neumaier's variant of Kahan summation.
#[derive(Debug, Clone, Copy, Default)]
pub struct CompensatedSum {
    sum: f64,
    compensation: f64,
}

impl CompensatedSum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, value: f64) {
        let t = self.sum + value;
        if self.sum.abs() >= value.abs() {
            self.compensation += (self.sum - t) + value;
        } else {
            self.compensation += (value - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.compensation
    }
}

impl FromIterator<f64> for CompensatedSum {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut acc = Self::new();
        for v in iter {
            acc.add(v);
        }
        acc
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ln_factorial_by_sum(n: u64) -> f64 {
        (1..=n).map(|k| (k as f64).ln()).sum()
    }

    #[test]
    fn factorial_table_matches_log_sum() {
        for n in [0, 1, 2, 5, 10, 29] {
            assert!((ln_factorial(n) - ln_factorial_by_sum(n)).abs() < 1e-12, "n = {n}");
        }
    }

    #[test]
    fn stirling_branch_is_continuous_with_table() {
        // 170! is still finite, so the table value is an independent check.
        for n in [30u64, 31, 50, 100, 170] {
            let exact = factorial_table()[n as usize].ln();
            let rel = (ln_factorial(n) - exact).abs() / exact;
            assert!(rel < 1e-15, "n = {n}: rel {rel:e}");
        }
    }

    #[test]
    fn scaled_central_binomial_crosses_threshold_smoothly() {
        for n in [1u64, 2, 10, 29, 30, 31, 80] {
            let direct = ln_factorial(2 * n) - 2.0 * ln_factorial(n) - 2.0 * n as f64 * LN_2;
            assert!((ln_central_binomial_scaled(n) - direct).abs() < 1e-12, "n = {n}");
        }
        // C(2,1)/4 = 1/2
        assert!((ln_central_binomial_scaled(1) + LN_2).abs() < 1e-15);
    }

    #[test]
    fn hyperbolic_logs_agree_with_direct_evaluation() {
        for s in [0.0, 0.3, 1.0, 2.5, 10.0] {
            assert!((ln_cosh(s) - s.cosh().ln()).abs() < 1e-14);
        }
        for s in [0.1, 0.9, 1.0, 3.0, 20.0] {
            assert!((ln_sinh(s) - s.sinh().ln()).abs() < 1e-14);
        }
        assert!(ln_cosh(2000.0).is_finite());
        assert!(ln_sinh(2000.0).is_finite());
    }

    #[test]
    fn compensated_sum_recovers_small_terms() {
        let mut acc = CompensatedSum::new();
        acc.add(1.0);
        for _ in 0..10 {
            acc.add(1e-17);
        }
        acc.add(-1.0);
        assert!((acc.value() - 1e-16).abs() < 1e-30);
    }

    #[test]
    fn zero_power_convention() {
        assert_eq!(n_ln(0, 0.0), 0.0);
        assert_eq!(n_ln(3, 0.0), f64::NEG_INFINITY);
        assert_eq!(xlog2x(0.0), 0.0);
    }
}
