//! Taylor coefficients at the origin and logarithmic-derivative
//! coefficients by the convolution recurrence.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::kernel::{KernelModel, TruncationPolicy, Weights};
use crate::value::{ValueWithError, UNIT_ROUNDOFF};

/// Largest supported Taylor order.
pub const N_MAX_CAP: usize = 64;

/// Safety factor applied to first-order error propagation.
const SAFETY: f64 = 4.0;

/// `a_n ≈ f^{(n)}(0) / n!`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TaylorCoeffs {
    pub coeffs: Vec<ValueWithError>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum LogDerivKind {
    /// `f′/f`.
    FPrimeOverF,
    /// `f″/f′`.
    FSecondOverFPrime,
    /// `f″/f′ − 2 f′/f`.
    Combined,
}

/// `b_N ≈ (1/N!) h^{(N)}(0)` for the logarithmic derivative `h` named by
/// `which`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LogDerivCoeffs {
    pub coeffs: Vec<ValueWithError>,
    pub which: LogDerivKind,
}

/// `a_0 … a_{n_max}` from weighted power sums of the poles:
/// `a_n = (−1)^n C(m+n−1, n) Σ c_k (0 − t_k)^{-(m+n)}`, which is `−M_{n+1}`
/// for `m = 1` and `(n+1) M_{n+2}` for `m = 2`.
pub fn taylor_coeffs(model: &KernelModel, n_max: usize, policy: &TruncationPolicy) -> Result<TaylorCoeffs> {
    if n_max > N_MAX_CAP {
        return Err(Error::InvalidSpec(format!("n_max = {n_max} exceeds the cap {N_MAX_CAP}")));
    }
    let m = model.kernel_order();
    let origin = Complex64::new(0.0, 0.0);
    let mut coeffs = Vec::with_capacity(n_max + 1);
    for n in 0..=n_max {
        let pol = policy.with_target(policy.target_tail * 0.5f64.powi(n as i32));
        let sum = model.kernel_sum(origin, m + n as u32, Weights::Coefficients, &pol)?;
        let binom = if m == 1 { 1.0 } else { (n + 1) as f64 };
        let factor = if n % 2 == 0 { binom } else { -binom };
        let value = sum.value * factor;
        coeffs.push(ValueWithError::new(
            value,
            sum.error * binom + UNIT_ROUNDOFF * value.norm(),
        ));
    }
    Ok(TaylorCoeffs { coeffs })
}

/// Solves `(n+1) a_{n+1} = Σ_{j≤n} b_j a_{n−j}` for `b_0 … b_{n_max}`.
///
/// Needs `a_0 … a_{n_max+1}` and `|a_0|` above its error bound.
pub fn logderiv_coeffs(a: &TaylorCoeffs, n_max: usize) -> Result<LogDerivCoeffs> {
    let coeffs = recurrence(&a.coeffs, n_max)?;
    Ok(LogDerivCoeffs {
        coeffs,
        which: LogDerivKind::FPrimeOverF,
    })
}

fn recurrence(a: &[ValueWithError], n_max: usize) -> Result<Vec<ValueWithError>> {
    if a.len() < n_max + 2 {
        return Err(Error::IndexOverflow {
            requested: n_max + 2,
            available: a.len(),
        });
    }
    let a0 = a[0];
    if !a0.is_certainly_nonzero() {
        return Err(Error::ZeroConstantTerm {
            value: a0.value.norm(),
            bound: a0.error_bound,
        });
    }
    let a0n = a0.value.norm();
    let mut b: Vec<Complex64> = Vec::with_capacity(n_max + 1);
    // first-order perturbation bounds, before the safety factor
    let mut db: Vec<f64> = Vec::with_capacity(n_max + 1);
    for n in 0..=n_max {
        let lead = a[n + 1].value * (n + 1) as f64;
        let mut acc = lead;
        let mut magnitude = lead.norm();
        let mut err = (n + 1) as f64 * a[n + 1].error_bound;
        for j in 0..n {
            let term = b[j] * a[n - j].value;
            acc -= term;
            magnitude += term.norm();
            err += b[j].norm() * a[n - j].error_bound + db[j] * a[n - j].value.norm();
        }
        let bn = acc / a0.value;
        err += bn.norm() * a0.error_bound;
        err += UNIT_ROUNDOFF * (n as f64 + 3.0) * magnitude;
        b.push(bn);
        db.push(err / a0n);
    }
    Ok(b.into_iter()
        .zip(db)
        .map(|(v, e)| ValueWithError::new(v, SAFETY * e))
        .collect())
}

/// Inverse of the recurrence: `a_1 … a_{n+1}` from `a_0` and `b`.
pub fn taylor_from_logderiv(a0: Complex64, b: &[Complex64]) -> Vec<Complex64> {
    let mut a = vec![a0];
    for n in 0..b.len() {
        let s: Complex64 = (0..=n).map(|j| b[j] * a[n - j]).sum();
        a.push(s / (n + 1) as f64);
    }
    a
}

/// Coefficients of `f″/f′` or `f″/f′ − 2 f′/f` up to `n_max`.
pub fn second_logderiv_coeffs(
    model: &KernelModel,
    n_max: usize,
    policy: &TruncationPolicy,
    which: LogDerivKind,
) -> Result<LogDerivCoeffs> {
    let a = taylor_coeffs(model, n_max + 2, policy)?;
    second_logderiv_from(&a, n_max, which)
}

/// As [`second_logderiv_coeffs`] from precomputed `a_0 … a_{n_max+2}`.
pub fn second_logderiv_from(a: &TaylorCoeffs, n_max: usize, which: LogDerivKind) -> Result<LogDerivCoeffs> {
    if a.coeffs.len() < n_max + 3 {
        return Err(Error::IndexOverflow {
            requested: n_max + 3,
            available: a.coeffs.len(),
        });
    }
    // Taylor coefficients of f′: (n+1) a_{n+1}
    let derivative: Vec<ValueWithError> = a.coeffs[1..]
        .iter()
        .enumerate()
        .map(|(n, c)| c.scale(Complex64::new((n + 1) as f64, 0.0)))
        .collect();
    let second = recurrence(&derivative, n_max)?;
    let coeffs = match which {
        LogDerivKind::FSecondOverFPrime => second,
        LogDerivKind::Combined => {
            let first = recurrence(&a.coeffs, n_max)?;
            second
                .iter()
                .zip(&first)
                .map(|(s, f)| s.sub(&f.scale(Complex64::new(2.0, 0.0))))
                .collect()
        }
        LogDerivKind::FPrimeOverF => recurrence(&a.coeffs, n_max)?,
    };
    Ok(LogDerivCoeffs { coeffs, which })
}
