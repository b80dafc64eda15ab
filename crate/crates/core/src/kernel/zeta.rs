//! Scaled tails of `Σ k^{-σ}` and `Σ (-1)^k k^{-σ}` beyond a head index.
//!
//! Both are returned multiplied by `(K+1)^σ`, so values stay of order one for
//! any exponent. The far part is summed with the Euler–Maclaurin formula. For
//! `x^{-σ}` every even derivative is positive and decreasing, so the
//! remainder after the last correction is bounded by the first omitted
//! correction; we report twice that.

use crate::value::UNIT_ROUNDOFF;

/// `B_2, B_4, …, B_20`.
const BERNOULLI_EVEN: [f64; 10] = [
    1.0 / 6.0,
    -1.0 / 30.0,
    1.0 / 42.0,
    -1.0 / 30.0,
    5.0 / 66.0,
    -691.0 / 2730.0,
    7.0 / 6.0,
    -3617.0 / 510.0,
    43867.0 / 798.0,
    -174611.0 / 330.0,
];

/// Number of Euler–Maclaurin corrections applied; the next one bounds the
/// remainder.
const CORRECTIONS: usize = 8;

/// A tail value with its absolute error bound.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct Tail {
    pub value: f64,
    pub error: f64,
}

/// `Σ_{k>K} ((K+1)/k)^σ`, requires `σ > 1`.
pub(crate) fn scaled_zeta_tail(sigma: f64, head: u64) -> Tail {
    debug_assert!(sigma > 1.0);
    let k0 = (head + 1) as f64;
    let far = far_start(sigma, head + 1, 24);

    let mut direct = 0.0;
    let mut count = 0usize;
    for k in (head + 1)..far {
        direct += (k0 / k as f64).powf(sigma);
        count += 1;
    }

    let m = far as f64;
    let f_m = (k0 / m).powf(sigma);
    let integral = m * f_m / (sigma - 1.0);
    let mut corrections = 0.0;
    let mut remainder = 0.0;
    // (σ)_{2j-1} M^{-(2j-1)}, advanced two factors per step.
    let mut poch = sigma / m;
    let mut factorial = 2.0;
    for j in 1..=CORRECTIONS + 1 {
        let term = BERNOULLI_EVEN[j - 1] / factorial * poch * f_m;
        if j <= CORRECTIONS {
            corrections += term;
        } else {
            remainder = 2.0 * term.abs();
        }
        let s = 2.0 * j as f64;
        poch *= (sigma + s - 1.0) / m * (sigma + s) / m;
        factorial *= (s + 1.0) * (s + 2.0);
    }

    let value = direct + integral + 0.5 * f_m + corrections;
    let rounding = UNIT_ROUNDOFF * (count as f64 + 16.0) * value.abs();
    Tail {
        value,
        error: remainder + rounding,
    }
}

/// `Σ_{k>K} (-1)^k ((K+1)/k)^σ`, requires `σ > 0`.
///
/// Consecutive terms are paired, `h(i) = f(u) - f(u+1)` with `u = K+1+2i`,
/// and Euler–Maclaurin is applied to `h`.
pub(crate) fn scaled_eta_tail(sigma: f64, head: u64) -> Tail {
    debug_assert!(sigma > 0.0);
    let k0f = (head + 1) as f64;
    let f = |y: f64| (k0f / y).powf(sigma);
    let far = far_start(2.0 * sigma, head + 1, 48);

    let mut direct = 0.0;
    let mut count = 0usize;
    let mut u = head + 1;
    while u < far {
        direct += f(u as f64) - f(u as f64 + 1.0);
        u += 2;
        count += 2;
    }

    let uf = u as f64;
    let f_u = f(uf);
    let f_u1 = f(uf + 1.0);
    // (1/2) ∫_u^{u+1} f
    let l = (1.0 / uf).ln_1p();
    let x = 1.0 - sigma;
    let shape = if x == 0.0 { l } else { (x * l).exp_m1() / x };
    let integral = 0.5 * uf * f_u * shape;

    let mut corrections = 0.0;
    let mut remainder = 0.0;
    let mut poch_u = sigma / uf;
    let mut poch_u1 = sigma / (uf + 1.0);
    let mut factorial = 2.0;
    let mut two_pow = 4.0;
    for j in 1..=CORRECTIONS + 1 {
        let diff = f_u * poch_u - f_u1 * poch_u1;
        let term = BERNOULLI_EVEN[j - 1] / factorial * 0.5 * two_pow * diff;
        if j <= CORRECTIONS {
            corrections += term;
        } else {
            remainder = 2.0 * term.abs();
        }
        let s = 2.0 * j as f64;
        poch_u *= (sigma + s - 1.0) / uf * (sigma + s) / uf;
        poch_u1 *= (sigma + s - 1.0) / (uf + 1.0) * (sigma + s) / (uf + 1.0);
        factorial *= (s + 1.0) * (s + 2.0);
        two_pow *= 4.0;
    }

    let sign = if (head + 1) % 2 == 0 { 1.0 } else { -1.0 };
    let body = direct + integral + 0.5 * (f_u - f_u1) + corrections;
    let rounding = UNIT_ROUNDOFF * (count as f64 + 16.0) * (body.abs() + f(k0f));
    Tail {
        value: sign * body,
        error: remainder + rounding,
    }
}

fn far_start(sigma: f64, first: u64, pad: u64) -> u64 {
    let needed = sigma.ceil() as u64 + pad;
    first.max(needed)
}
