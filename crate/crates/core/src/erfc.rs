//! Complementary error function accurate deep into the tail.
//!
//! The two-sided Gaussian p-values this crate reports live as far out as
//! ~9σ, i.e. erfc arguments near 6.5 and values near 1e-20, where a naive
//! `1 − erf` evaluation is pure cancellation. Below x = 2 we sum the
//! Maclaurin series of erf; at and above x = 2 we evaluate the Legendre
//! continued fraction
//!
//!   erfc(x) = e^{−x²}/√π · 1/(x + (1/2)/(x + 1/(x + (3/2)/(x + …))))
//!
//! by backward recurrence. Both branches are validated in the tests against
//! 40-digit reference values.

use std::f64::consts::PI;

/// Error function.
pub fn erf(x: f64) -> f64 {
    if x.is_nan() {
        return f64::NAN;
    }
    let ax = x.abs();
    if ax < 2.0 {
        erf_series(x)
    } else {
        let tail = 1.0 - erfc_cf(ax);
        if x < 0.0 {
            -tail
        } else {
            tail
        }
    }
}

/// Complementary error function, `erfc(x) = 1 − erf(x)`.
pub fn erfc(x: f64) -> f64 {
    if x.is_nan() {
        return f64::NAN;
    }
    if x < 0.0 {
        return 2.0 - erfc(-x);
    }
    if x < 2.0 {
        1.0 - erf_series(x)
    } else if x > 26.7 {
        // e^{−x²} underflows f64 beyond here; the true value is < 1e-311.
        0.0
    } else {
        erfc_cf(x)
    }
}

/// Maclaurin series, `erf(x) = (2/√π) Σ (−1)^n x^{2n+1} / (n! (2n+1))`;
/// used for |x| < 2 where the alternating terms stay benign.
fn erf_series(x: f64) -> f64 {
    let x2 = x * x;
    let mut term = x;
    let mut sum = 0.0;
    let mut n = 0u32;
    loop {
        sum += term / (2 * n + 1) as f64;
        n += 1;
        term *= -x2 / n as f64;
        if term.abs() < f64::EPSILON * sum.abs() * 0.25 || n > 200 {
            break;
        }
    }
    sum * 2.0 / PI.sqrt()
}

/// Legendre continued fraction by backward recurrence, for x ≥ 2.
fn erfc_cf(x: f64) -> f64 {
    const DEPTH: u32 = 160;
    let mut tail = 0.0f64;
    for k in (1..=DEPTH).rev() {
        tail = (k as f64 / 2.0) / (x + tail);
    }
    (-x * x).exp() / PI.sqrt() / (x + tail)
}
