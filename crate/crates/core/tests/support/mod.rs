//! Independent oracles and helpers shared by the integration tests.
//!
//! Nothing here touches the library's evaluation paths: the 3j oracle runs
//! the Racah sum in exact big-integer rational arithmetic, and the D-matrix
//! oracle integrates explicit Wigner functions by quadrature.

#![allow(dead_code)]

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{Signed, ToPrimitive, Zero};
use num_complex::Complex64;

// ---------------------------------------------------------------------------
// exact-rational Racah oracle
// ---------------------------------------------------------------------------

fn big_factorial(n: i64) -> BigInt {
    assert!(n >= 0);
    let mut f = BigInt::from(1);
    for k in 2..=n {
        f *= k;
    }
    f
}

fn big_ratio(n: BigInt) -> BigRational {
    BigRational::from_integer(n)
}

/// Exact 3j value as (sign, value²) with value = sign·√(value²).
pub fn rational_3j_squared(
    j1: i64,
    j2: i64,
    j3: i64,
    m1: i64,
    m2: i64,
    m3: i64,
) -> (i32, BigRational) {
    assert!(m1.abs() <= j1 && m2.abs() <= j2 && m3.abs() <= j3);
    if m1 + m2 + m3 != 0 || j3 < (j1 - j2).abs() || j3 > j1 + j2 {
        return (0, BigRational::zero());
    }
    let k_min = 0.max(j2 - j3 - m1).max(j1 - j3 + m2);
    let k_max = (j1 + j2 - j3).min(j1 - m1).min(j2 + m2);
    if k_min > k_max {
        return (0, BigRational::zero());
    }

    let mut series = BigRational::zero();
    for k in k_min..=k_max {
        let denom = big_factorial(k)
            * big_factorial(j1 + j2 - j3 - k)
            * big_factorial(j1 - m1 - k)
            * big_factorial(j2 + m2 - k)
            * big_factorial(j3 - j2 + m1 + k)
            * big_factorial(j3 - j1 - m2 + k);
        let term = BigRational::new(BigInt::from(if k % 2 == 0 { 1 } else { -1 }), denom);
        series += term;
    }
    if series.is_zero() {
        return (0, BigRational::zero());
    }

    let triangle = BigRational::new(
        big_factorial(j1 + j2 - j3) * big_factorial(j1 - j2 + j3) * big_factorial(-j1 + j2 + j3),
        big_factorial(j1 + j2 + j3 + 1),
    );
    let ms = big_ratio(
        big_factorial(j1 + m1)
            * big_factorial(j1 - m1)
            * big_factorial(j2 + m2)
            * big_factorial(j2 - m2)
            * big_factorial(j3 + m3)
            * big_factorial(j3 - m3),
    );
    let square = triangle * ms * &series * &series;
    let mut sign = if series.is_negative() { -1 } else { 1 };
    if (j1 - j2 - m3).rem_euclid(2) == 1 {
        sign = -sign;
    }
    (sign, square)
}

/// BigRational to f64 without overflowing intermediate conversions: shift
/// the quotient to ~96 bits, convert, and unscale by a power of two.
pub fn ratio_to_f64(r: &BigRational) -> f64 {
    if r.is_zero() {
        return 0.0;
    }
    let negative = r.is_negative();
    let num = r.numer().abs();
    let den = r.denom().abs();
    let shift = 96 - (num.bits() as i64 - den.bits() as i64);
    let scaled = if shift >= 0 {
        (num << shift as usize) / den
    } else {
        num / (den << (-shift) as usize)
    };
    let v = scaled.to_f64().expect("96-bit integer fits f64 range") * 2f64.powi(-shift as i32);
    if negative {
        -v
    } else {
        v
    }
}

/// Exact-rational Racah oracle evaluated to f64.
pub fn oracle_3j(j1: i64, j2: i64, j3: i64, m1: i64, m2: i64, m3: i64) -> f64 {
    let (sign, square) = rational_3j_squared(j1, j2, j3, m1, m2, m3);
    f64::from(sign) * ratio_to_f64(&square).sqrt()
}

/// Agreement check used throughout: relative to the oracle where it is
/// meaningfully nonzero, absolute (1e-14) at its exact zeros.
pub fn agrees_to(production: f64, oracle: f64, rel_tol: f64) -> bool {
    let diff = (production - oracle).abs();
    diff <= rel_tol * oracle.abs() || diff <= 1e-14
}

// ---------------------------------------------------------------------------
// explicit Wigner functions and quadrature
// ---------------------------------------------------------------------------

fn ln_fact(n: i64) -> f64 {
    (2..=n).map(|k| (k as f64).ln()).sum()
}

/// Wigner little-d matrix element d^j_{mp m}(β) from the explicit sum.
pub fn little_d(j: i64, mp: i64, m: i64, beta: f64) -> f64 {
    assert!(mp.abs() <= j && m.abs() <= j);
    let (c, s) = ((beta / 2.0).cos(), (beta / 2.0).sin());
    let pref = 0.5 * (ln_fact(j + mp) + ln_fact(j - mp) + ln_fact(j + m) + ln_fact(j - m));
    let lo = 0.max(m - mp);
    let hi = (j + m).min(j - mp);
    let mut sum = 0.0;
    for k in lo..=hi {
        let ln_den = ln_fact(j + m - k) + ln_fact(k) + ln_fact(mp - m + k) + ln_fact(j - mp - k);
        let sign = if (mp - m + k).rem_euclid(2) == 0 {
            1.0
        } else {
            -1.0
        };
        let power = c.powi((2 * j + m - mp - 2 * k) as i32) * s.powi((mp - m + 2 * k) as i32);
        sum += sign * (pref - ln_den).exp() * power;
    }
    sum
}

/// Rotation-matrix element in the convention used by the rotor
/// eigenfunctions: D^(j)_{K M}(α,β,γ) = e^{iγK} d^j_{M K}(β) e^{iαM},
/// where K is the body-frame index and M the space-frame index.
pub fn rotor_d(j: i64, k: i64, m: i64, alpha: f64, beta: f64, gamma: f64) -> Complex64 {
    let phase = Complex64::new(0.0, gamma * k as f64).exp() * Complex64::new(0.0, alpha * m as f64).exp();
    phase * little_d(j, m, k, beta)
}

/// Gauss–Legendre nodes and weights on [-1, 1].
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..n {
        // Newton iteration from the Chebyshev initial guess
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0f64, x);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            let dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-15 {
                break;
            }
        }
        let (mut p0, mut p1) = (1.0f64, x);
        for k in 2..=n {
            let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
            p0 = p1;
            p1 = p2;
        }
        let dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
        nodes[i] = x;
        weights[i] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
    (nodes, weights)
}

/// 3D Euler-angle quadrature of ⟨J′ m′ k′| D^(1)_{a b} |J m k⟩ with the
/// normalized rotor eigenfunctions:
///
/// √((2J′+1)(2J+1)) ∫ dω/(8π²) D^(J′)*_{k′ m′} D^(1)_{a b} D^(J)_{k m}
pub fn quadrature_d1(
    jp: i64,
    mp: i64,
    kp: i64,
    a: i64,
    b: i64,
    j: i64,
    m: i64,
    k: i64,
) -> Complex64 {
    let n_angle = 20usize; // exact for the phase degrees this problem reaches
    let n_beta = 64usize;
    let (xs, ws) = gauss_legendre(n_beta);
    let two_pi = 2.0 * std::f64::consts::PI;
    let mut total = Complex64::new(0.0, 0.0);
    for ia in 0..n_angle {
        let alpha = two_pi * ia as f64 / n_angle as f64;
        for ig in 0..n_angle {
            let gamma = two_pi * ig as f64 / n_angle as f64;
            for ib in 0..n_beta {
                // substitution x = cos β absorbs the sin β measure
                let beta = xs[ib].acos();
                let f = rotor_d(jp, kp, mp, alpha, beta, gamma).conj()
                    * rotor_d(1, a, b, alpha, beta, gamma)
                    * rotor_d(j, k, m, alpha, beta, gamma);
                total += f * ws[ib];
            }
        }
    }
    // uniform angle sums carry 2π/n each; measure divides by 8π²
    let norm = (two_pi / n_angle as f64).powi(2) / (8.0 * std::f64::consts::PI * std::f64::consts::PI);
    let scale = ((2 * jp + 1) as f64 * (2 * j + 1) as f64).sqrt();
    total * norm * scale
}

/// Direction cosines ê′ᵢ·e₃ and eᵢ·ê′₃ as functions of the Euler angles.
pub fn body_axis_cosines(_alpha: f64, beta: f64, gamma: f64) -> [f64; 3] {
    [-gamma.cos() * beta.sin(), gamma.sin() * beta.sin(), beta.cos()]
}

pub fn space_axis_cosines(alpha: f64, beta: f64, _gamma: f64) -> [f64; 3] {
    [alpha.cos() * beta.sin(), alpha.sin() * beta.sin(), beta.cos()]
}
