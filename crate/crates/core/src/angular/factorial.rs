//! Precomputed log-factorial table backing the Racah sum.

use std::sync::OnceLock;

/// Largest n! the table covers; 3j symbols need (j1+j2+j3+1)! so this
/// supports j values far beyond the accuracy guarantee (j ≤ 20).
const MAX_N: usize = 300;

static LN_FACTORIAL: OnceLock<Vec<f64>> = OnceLock::new();

/// ln(n!) from the table. Negative arguments panic: every factorial in the
/// Racah sum is nonnegative once the summation bounds are respected.
pub(super) fn ln_factorial(n: i64) -> f64 {
    debug_assert!(n >= 0, "ln_factorial of negative argument {}", n);
    let table = LN_FACTORIAL.get_or_init(|| {
        let mut t = Vec::with_capacity(MAX_N + 1);
        // Kahan-compensated running sum of ln(k) keeps the absolute error
        // of each entry near one ulp of the entry itself.
        let mut sum = 0.0f64;
        let mut comp = 0.0f64;
        t.push(0.0);
        for k in 1..=MAX_N {
            let y = (k as f64).ln() - comp;
            let s = sum + y;
            comp = (s - sum) - y;
            sum = s;
            t.push(sum);
        }
        t
    });
    table[n as usize]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_factorials_exact() {
        // n! is exactly representable up to 18!, so ln comparisons are tight
        let mut f = 1.0f64;
        for n in 1..=18i64 {
            f *= n as f64;
            assert!((ln_factorial(n) - f.ln()).abs() <= 1e-13 * f.ln().max(1.0));
        }
    }
}
