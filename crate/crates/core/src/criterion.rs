//! The zero-free criterion, the finite moments lemma, classification of
//! zero-free sums, and the `M_l`/`T_l` relations.

use num_bigint::BigInt;
use num_complex::{Complex, Complex64};
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::kernel::{KernelModel, PoleSequence, TruncationPolicy};
use crate::power_sums::{first_admissible, main_formula_values, pole_power_sum, weighted_power_sum, ZeroPowerSumEntry};
use crate::value::{ValueWithError, UNIT_ROUNDOFF};

/// Default largest `N` checked by [`residuals`].
pub const DEFAULT_N_MAX: u32 = 16;

/// A residual is inconclusive when its error bound exceeds this fraction of
/// the magnitudes it was computed from.
pub const INCONCLUSIVE_RELATIVE: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Decision {
    /// Some residual is certainly nonzero, so `f` has zeros.
    HasZerosCertified,
    /// Every residual vanishes within tight bounds; evidence only.
    CandidateZeroFree,
    /// No residual is certainly nonzero, but some bound is too loose.
    Inconclusive,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Residual {
    pub n: u32,
    pub value: ValueWithError,
    pub conditional: bool,
}

/// `r_N = m T_{N+1} − b_N` over a range of `N`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResidualReport {
    pub residuals: Vec<Residual>,
    pub n_range: (u32, u32),
    pub decision: Decision,
    pub witness: Option<u32>,
}

/// Residuals for every `N` with `ρ − 1 < N ≤ n_max`.
pub fn residuals(model: &KernelModel, n_max: u32, rho: f64, policy: &TruncationPolicy) -> Result<ResidualReport> {
    let n_min = first_admissible(rho);
    if n_min > n_max {
        return Err(Error::HypothesisViolated(format!(
            "no N with ρ − 1 < N ≤ {n_max} for ρ = {rho}"
        )));
    }
    residuals_in_range(model, n_min, n_max, policy)
}

/// Residuals for `n_min ≤ N ≤ n_max` without checking `N > ρ − 1`.
pub fn residuals_in_range(
    model: &KernelModel,
    n_min: u32,
    n_max: u32,
    policy: &TruncationPolicy,
) -> Result<ResidualReport> {
    let entries = main_formula_values(model, n_min, n_max, policy)?;
    Ok(decide(&entries, (n_min, n_max)))
}

fn decide(entries: &[ZeroPowerSumEntry], n_range: (u32, u32)) -> ResidualReport {
    let witness = entries.iter().find(|e| e.value.is_certainly_nonzero()).map(|e| e.n);
    let loose = entries
        .iter()
        .any(|e| e.value.error_bound > INCONCLUSIVE_RELATIVE * e.scale.max(1e-300));
    let decision = match (witness, loose) {
        (Some(_), _) => Decision::HasZerosCertified,
        (None, true) => Decision::Inconclusive,
        (None, false) => Decision::CandidateZeroFree,
    };
    ResidualReport {
        residuals: entries
            .iter()
            .map(|e| Residual {
                n: e.n,
                value: e.value,
                conditional: e.conditional,
            })
            .collect(),
        n_range,
        decision,
        witness,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "outcome")]
pub enum MomentOutcome {
    /// All power sums `p_1 … p_n` vanish; every value lies within
    /// `radius_bound` of the origin.
    AllZero { radius_bound: f64 },
    /// `p_n` is the first power sum that does not vanish.
    Witness { n: usize },
}

/// Largest list accepted by the moment checks.
pub const MOMENT_MAX_LEN: usize = 10_000;

/// Power sums `p_N = Σ a_k^N`, `N = 1 … n`, in floating point.
///
/// `p_N` counts as zero when `|p_N| ≤ n·tol^N` or when it is below its
/// rounding error. When all vanish, Newton's identities give the elementary
/// symmetric functions `e_k`, and `2 max |e_k|^{1/k}` bounds every `|a_k|`.
/// A tolerance of zero runs the exact check on the binary values.
pub fn newton_moment_check(a: &[Complex64], tolerance: f64) -> Result<MomentOutcome> {
    if a.len() > MOMENT_MAX_LEN {
        return Err(Error::InvalidSpec(format!(
            "moment check accepts at most {MOMENT_MAX_LEN} values, got {}",
            a.len()
        )));
    }
    if !(tolerance >= 0.0) || a.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(Error::InvalidSpec("moment check needs finite values and tolerance ≥ 0".into()));
    }
    if tolerance == 0.0 {
        let exact: Vec<Complex<BigRational>> = a
            .iter()
            .map(|z| {
                Complex::new(
                    BigRational::from_float(z.re).expect("finite"),
                    BigRational::from_float(z.im).expect("finite"),
                )
            })
            .collect();
        return newton_moment_check_exact(&exact);
    }

    let n = a.len();
    let scale = a.iter().map(|z| z.norm()).fold(0.0, f64::max);
    if scale == 0.0 {
        return Ok(MomentOutcome::AllZero { radius_bound: 0.0 });
    }
    // normalized values keep p_N within range; the test compares in logs
    let unit: Vec<Complex64> = a.iter().map(|z| z / scale).collect();
    let mut powers = unit.clone();
    let mut p = Vec::with_capacity(n);
    let ln_n = (n as f64).ln();
    let (ln_tol, ln_scale) = (tolerance.ln(), scale.ln());
    for big_n in 1..=n {
        if big_n > 1 {
            for (w, u) in powers.iter_mut().zip(&unit) {
                *w *= u;
            }
        }
        let pn: Complex64 = powers.iter().sum();
        let rounding = 4.0 * UNIT_ROUNDOFF * (n * big_n) as f64;
        let small_by_tol = pn.norm().ln() + big_n as f64 * ln_scale <= ln_n + big_n as f64 * ln_tol;
        if !(small_by_tol || pn.norm() <= rounding) {
            return Ok(MomentOutcome::Witness { n: big_n });
        }
        p.push(pn);
    }
    // k e_k = Σ_{i=1}^k (−1)^{i−1} e_{k−i} p_i
    let mut e = vec![Complex64::new(1.0, 0.0)];
    let mut radius: f64 = 0.0;
    for k in 1..=n {
        let mut acc = Complex64::new(0.0, 0.0);
        for i in 1..=k {
            let sign = if i % 2 == 1 { 1.0 } else { -1.0 };
            acc += e[k - i] * p[i - 1] * sign;
        }
        let ek = acc / k as f64;
        radius = radius.max(ek.norm().powf(1.0 / k as f64));
        e.push(ek);
    }
    Ok(MomentOutcome::AllZero {
        radius_bound: 2.0 * radius * scale,
    })
}

/// Exact check over Gaussian rationals: all-zero holds exactly when every
/// value is zero.
pub fn newton_moment_check_exact(a: &[Complex<BigRational>]) -> Result<MomentOutcome> {
    if a.len() > MOMENT_MAX_LEN {
        return Err(Error::InvalidSpec(format!(
            "moment check accepts at most {MOMENT_MAX_LEN} values, got {}",
            a.len()
        )));
    }
    let n = a.len();
    let zero = Complex::<BigRational>::zero();
    let mut powers: Vec<Complex<BigRational>> = a.to_vec();
    let mut p = Vec::with_capacity(n);
    for big_n in 1..=n {
        if big_n > 1 {
            for (w, u) in powers.iter_mut().zip(a) {
                *w = &*w * u;
            }
        }
        let pn = powers.iter().fold(zero.clone(), |acc, w| acc + w);
        if !pn.is_zero() {
            return Ok(MomentOutcome::Witness { n: big_n });
        }
        p.push(pn);
    }
    let mut e = vec![Complex::<BigRational>::one()];
    for k in 1..=n {
        let mut acc = zero.clone();
        for i in 1..=k {
            let term = &e[k - i] * &p[i - 1];
            acc = if i % 2 == 1 { acc + term } else { acc - term };
        }
        let k_big = BigRational::from_integer(BigInt::from(k));
        let ek = Complex::new(acc.re / &k_big, acc.im / &k_big);
        debug_assert!(ek.is_zero());
        e.push(ek);
    }
    Ok(MomentOutcome::AllZero { radius_bound: 0.0 })
}

/// Outcome of a classification.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "kind")]
pub enum ClassOutcome {
    /// `f(z) = 1/(z − C)`.
    UnitPole { c: Complex64 },
    /// `f(z) = π² / sin²(π(z + b))`.
    SineSquared { b: Complex64 },
    /// `f(z) = 1/(z − C)²`.
    PoleSquared { c: Complex64 },
    /// The residual certificate found zeros.
    NotZeroFree { witness: u32 },
    Inconclusive,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Classification {
    pub kernel_order: u32,
    pub outcome: ClassOutcome,
    /// Largest ODE residual relative to its allowance; `≤ 1` passes.
    pub max_residual: f64,
    pub samples: usize,
}

const SAMPLES: usize = 16;
const RETRIES: usize = 3;

/// Classifies a zero-free unit-weight simple-kernel sum via the residual of
/// `f + f′/f = 0` on `|z| = min|t_k| / 2`.
pub fn classify_unit_weight(model: &KernelModel, policy: &TruncationPolicy) -> Result<Classification> {
    check_classifiable(model, 1)?;
    let rho = model.convergence_index();
    let report = residuals(model, 8, rho, policy)?;
    if let Some(n) = report.witness {
        return Ok(Classification {
            kernel_order: 1,
            outcome: ClassOutcome::NotZeroFree { witness: n },
            max_residual: f64::NAN,
            samples: 0,
        });
    }
    let worst = ode_residual(model, policy, |z| {
        let f = model.derivative_sum(z, 0, policy)?;
        let d1 = model.derivative_sum(z, 1, policy)?;
        if f.value.norm() <= f.error {
            return Ok(None);
        }
        let fv = f.value;
        let r = fv + d1.value / fv;
        let fn_ = fv.norm();
        let bound = f.error + d1.error / fn_ + d1.value.norm() * f.error / (fn_ * fn_);
        let size = fn_ + d1.value.norm() / fn_;
        Ok(Some((r, bound, size)))
    })?;
    let outcome = if worst <= 1.0 {
        let f0 = model.evaluate(Complex64::new(0.0, 0.0), policy)?;
        ClassOutcome::UnitPole { c: -f0.value.inv() }
    } else {
        ClassOutcome::Inconclusive
    };
    Ok(Classification {
        kernel_order: 1,
        outcome,
        max_residual: worst,
        samples: SAMPLES,
    })
}

/// Classifies a zero-free unit-weight squared-kernel sum via the residual of
/// `2f − (f′/f)′ = 0`, with `(f′/f)′ = f″/f − (f′/f)²`.
pub fn classify_squared(model: &KernelModel, policy: &TruncationPolicy) -> Result<Classification> {
    check_classifiable(model, 2)?;
    let rho = model.convergence_index();
    let report = residuals(model, 8, rho, policy)?;
    if let Some(n) = report.witness {
        return Ok(Classification {
            kernel_order: 2,
            outcome: ClassOutcome::NotZeroFree { witness: n },
            max_residual: f64::NAN,
            samples: 0,
        });
    }
    let worst = ode_residual(model, policy, |z| {
        let f = model.derivative_sum(z, 0, policy)?;
        let d1 = model.derivative_sum(z, 1, policy)?;
        let d2 = model.derivative_sum(z, 2, policy)?;
        if f.value.norm() <= f.error {
            return Ok(None);
        }
        let fv = f.value;
        let q = d1.value / fv;
        let r = fv * 2.0 - (d2.value / fv - q * q);
        let fn_ = fv.norm();
        let qn = q.norm();
        let rel_f = f.error / fn_;
        let bound = 2.0 * f.error
            + d2.error / fn_
            + d2.value.norm() / fn_ * rel_f
            + 2.0 * qn * (d1.error / fn_ + qn * rel_f);
        let size = 2.0 * fn_ + d2.value.norm() / fn_ + qn * qn;
        Ok(Some((r, bound, size)))
    })?;
    let outcome = if worst > 1.0 {
        ClassOutcome::Inconclusive
    } else {
        match (&model.spec().poles, model.is_finite(), model.explicit_terms()) {
            (PoleSequence::Lattice { offset }, _, _) => {
                let b = -*offset;
                ClassOutcome::SineSquared {
                    b: Complex64::new(b.re.rem_euclid(1.0), b.im),
                }
            }
            (_, true, [only]) => ClassOutcome::PoleSquared { c: only.pole },
            _ => ClassOutcome::Inconclusive,
        }
    };
    Ok(Classification {
        kernel_order: 2,
        outcome,
        max_residual: worst,
        samples: SAMPLES,
    })
}

fn check_classifiable(model: &KernelModel, order: u32) -> Result<()> {
    if model.kernel_order() != order {
        return Err(Error::InvalidSpec(format!(
            "classification needs kernel_order {order}, the spec has {}",
            model.kernel_order()
        )));
    }
    if !model.has_unit_weights() {
        return Err(Error::HypothesisViolated("classification needs c_k = 1 for every k".into()));
    }
    // Σ 1/|t_k|^{m−ε} < ∞ for some ε > 0
    if model.convergence_index() >= order as f64 {
        return Err(Error::HypothesisViolated(format!(
            "Σ 1/|t_k|^({order}−ε) < ∞ is required, but the convergence index is {}",
            model.convergence_index()
        )));
    }
    Ok(())
}

/// Largest `|R(z)| / allowance` over the sample circle. `eval` returns the
/// residual, its propagated bound and the magnitude of its parts, or `None`
/// when `f(z)` cannot be told apart from zero.
fn ode_residual<F>(model: &KernelModel, _policy: &TruncationPolicy, eval: F) -> Result<f64>
where
    F: Fn(Complex64) -> Result<Option<(Complex64, f64, f64)>>,
{
    let r0 = model.min_pole_modulus() / 2.0;
    let mut worst: f64 = 0.0;
    for i in 0..SAMPLES {
        let mut accepted = false;
        for attempt in 0..RETRIES {
            // shift the angle a little on each retry
            let theta = 2.0 * std::f64::consts::PI * (i as f64 + 0.137 + 0.291 * attempt as f64) / SAMPLES as f64;
            let z = Complex64::from_polar(r0, theta);
            if let Some((r, bound, size)) = eval(z)? {
                let allowance = 4.0 * bound + 64.0 * UNIT_ROUNDOFF * size;
                worst = worst.max(r.norm() / allowance);
                accepted = true;
                break;
            }
        }
        if !accepted {
            return Err(Error::SampleCollision(format!(
                "sample {i} on |z| = {r0} stays on a zero of f after {RETRIES} attempts"
            )));
        }
    }
    Ok(worst)
}

/// `LHS − T_{N+1}` for the four relations expressing `b_N` through
/// `M_1 … M_{N+2}` (simple kernels, where `a_n = −M_{n+1}`):
///
/// ```text
/// N=0: M_2/M_1
/// N=1: (2 M_1 M_3 − M_2²) / M_1²
/// N=2: (3 M_1² M_4 − 3 M_1 M_2 M_3 + M_2³) / M_1³
/// N=3: (4 M_1³ M_5 − 4 M_1² M_2 M_4 − 2 M_1² M_3² + 4 M_1 M_2² M_3 − M_2⁴) / M_1⁴
/// ```
///
/// Each equals `−r_N`.
pub fn mt_relation_residuals(model: &KernelModel, policy: &TruncationPolicy) -> Result<Vec<ValueWithError>> {
    if model.kernel_order() != 1 {
        return Err(Error::InvalidSpec("the M/T relations are stated for kernel_order 1".into()));
    }
    let m: Vec<ValueWithError> = (1..=5)
        .map(|l| weighted_power_sum(model, l, policy))
        .collect::<Result<_>>()?;
    if !m[0].is_certainly_nonzero() {
        return Err(Error::M1Zero {
            value: m[0].value.norm(),
            bound: m[0].error_bound,
        });
    }
    let mv: Vec<Complex64> = m.iter().map(|v| v.value).collect();
    let mut out = Vec::with_capacity(4);
    for n in 0..4 {
        let t = pole_power_sum(model, n as u32 + 1, policy)?;
        let lhs = relation_display(n, &mv);
        // first-order propagation with central-difference partials
        let mut err = 0.0;
        for i in 0..(n + 2) {
            let h = 1e-6 * mv[i].norm().max(1e-300);
            let mut up = mv.clone();
            let mut down = mv.clone();
            up[i] += h;
            down[i] -= h;
            let partial = (relation_display(n, &up) - relation_display(n, &down)) / (2.0 * h);
            err += 2.0 * partial.norm() * m[i].error_bound;
        }
        err += 64.0 * UNIT_ROUNDOFF * relation_magnitude(n, &mv);
        out.push(ValueWithError::new(lhs, err).sub(&t));
    }
    Ok(out)
}

fn relation_display(n: usize, m: &[Complex64]) -> Complex64 {
    let (m1, m2) = (m[0], m[1]);
    match n {
        0 => m2 / m1,
        1 => (m1 * m[2] * 2.0 - m2 * m2) / (m1 * m1),
        2 => (m1 * m1 * m[3] * 3.0 - m1 * m2 * m[2] * 3.0 + m2.powu(3)) / m1.powu(3),
        3 => {
            let (m3, m4, m5) = (m[2], m[3], m[4]);
            (m1.powu(3) * m5 * 4.0 - m1 * m1 * m2 * m4 * 4.0 - m1 * m1 * m3 * m3 * 2.0 + m1 * m2 * m2 * m3 * 4.0
                - m2.powu(4))
                / m1.powu(4)
        }
        _ => unreachable!("four relations"),
    }
}

/// Sum of term magnitudes of the relation, for the rounding allowance.
fn relation_magnitude(n: usize, m: &[Complex64]) -> f64 {
    let a: Vec<f64> = m.iter().map(|z| z.norm()).collect();
    let (m1, m2) = (a[0], a[1]);
    match n {
        0 => m2 / m1,
        1 => (2.0 * m1 * a[2] + m2 * m2) / (m1 * m1),
        2 => (3.0 * m1 * m1 * a[3] + 3.0 * m1 * m2 * a[2] + m2.powi(3)) / m1.powi(3),
        _ => {
            (4.0 * m1.powi(3) * a[4] + 4.0 * m1 * m1 * m2 * a[3] + 2.0 * m1 * m1 * a[2] * a[2]
                + 4.0 * m1 * m2 * m2 * a[2]
                + m2.powi(4))
                / m1.powi(4)
        }
    }
}

/// Residuals of `dM_l = Σ_{j=1}^{l−1} M_{l−j} dT_j / j` (with `dT_1 = dM_2`)
/// at interior samples.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VariationResiduals {
    /// Sample indices at which residuals are reported.
    pub points: Vec<usize>,
    /// `residuals[p][l − 2]` for `l = 2 … L`.
    pub residuals: Vec<Vec<Complex64>>,
}

impl VariationResiduals {
    pub fn max_norm(&self) -> f64 {
        self.residuals.iter().flatten().map(|z| z.norm()).fold(0.0, f64::max)
    }
}

/// Checks the differential relation on sampled families.
///
/// `m[i]` holds `M_1 … M_L` at `delta[i]` with `M_1 = 1`, and `t[i]` holds
/// `T_2 … T_{L−1}`. Derivatives are central differences, so the residual of
/// a family satisfying the criterion equations is `O(h²)`.
pub fn family_variation_residual(delta: &[f64], m: &[Vec<Complex64>], t: &[Vec<Complex64>]) -> Result<VariationResiduals> {
    let count = delta.len();
    if count < 5 {
        return Err(Error::InsufficientSamples { got: count, need: 5 });
    }
    if m.len() != count || t.len() != count {
        return Err(Error::InvalidSpec("one M and one T row per δ sample".into()));
    }
    let l_max = m[0].len();
    if !(3..=12).contains(&l_max) {
        return Err(Error::InvalidSpec(format!("need 3 ≤ L ≤ 12, got {l_max}")));
    }
    if m.iter().any(|row| row.len() != l_max) || t.iter().any(|row| row.len() != l_max - 2) {
        return Err(Error::InvalidSpec("rows must hold M_1..M_L and T_2..T_(L−1)".into()));
    }
    let h = delta[1] - delta[0];
    if !(h > 0.0) || delta.windows(2).any(|w| ((w[1] - w[0]) - h).abs() > 1e-9 * h.abs().max(1e-300) * count as f64) {
        return Err(Error::InvalidSpec("δ samples must be increasing and equally spaced".into()));
    }
    let d = |row_of: &dyn Fn(usize) -> Complex64, i: usize| (row_of(i + 1) - row_of(i - 1)) / (2.0 * h);

    let mut points = Vec::new();
    let mut residuals = Vec::new();
    for i in 1..count - 1 {
        // dT_j for j = 1 … L−1, with dT_1 = dM_2
        let mut dt = vec![Complex64::new(0.0, 0.0); l_max];
        dt[1] = d(&|k| m[k][1], i);
        for j in 2..l_max {
            dt[j] = d(&|k| t[k][j - 2], i);
        }
        let mut row = Vec::with_capacity(l_max - 1);
        for l in 2..=l_max {
            let lhs = d(&|k| m[k][l - 1], i);
            let rhs: Complex64 = (1..l).map(|j| m[i][l - j - 1] * dt[j] / j as f64).sum();
            row.push(lhs - rhs);
        }
        points.push(i);
        residuals.push(row);
    }
    Ok(VariationResiduals { points, residuals })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::KernelSpec;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn single_pole_is_candidate_zero_free() {
        let pol = TruncationPolicy::default();
        let m = KernelModel::new(KernelSpec::explicit(1, &[(c(2.0), c(1.0))]), &pol).unwrap();
        let r = residuals(&m, 6, 0.0, &pol).unwrap();
        assert_eq!(r.decision, Decision::CandidateZeroFree);
        assert_eq!(r.residuals.len(), 7);
        assert_eq!(r.n_range, (0, 6));
    }

    #[test]
    fn two_poles_have_zeros() {
        let pol = TruncationPolicy::default();
        let m = KernelModel::new(KernelSpec::explicit(1, &[(c(1.0), c(1.0)), (c(2.0), c(1.0))]), &pol).unwrap();
        let r = residuals(&m, 3, 0.0, &pol).unwrap();
        assert_eq!(r.decision, Decision::HasZerosCertified);
        assert_eq!(r.witness, Some(0));
        let cls = classify_unit_weight(&m, &pol).unwrap();
        assert_eq!(cls.outcome, ClassOutcome::NotZeroFree { witness: 0 });
    }

    #[test]
    fn moments_small_cases() {
        assert_eq!(newton_moment_check(&[c(1.0), c(-1.0)], 1e-9).unwrap(), MomentOutcome::Witness { n: 2 });
        assert_eq!(newton_moment_check(&[c(1.0), c(-1.0)], 0.0).unwrap(), MomentOutcome::Witness { n: 2 });
        assert_eq!(
            newton_moment_check(&[c(0.0); 3], 1e-9).unwrap(),
            MomentOutcome::AllZero { radius_bound: 0.0 }
        );
        assert_eq!(
            newton_moment_check(&[c(0.0); 3], 0.0).unwrap(),
            MomentOutcome::AllZero { radius_bound: 0.0 }
        );
        // cube roots of unity: p_1 = p_2 = 0, p_3 = 3
        let w: Vec<Complex64> = (0..3)
            .map(|k| Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * k as f64 / 3.0))
            .collect();
        assert_eq!(newton_moment_check(&w, 1e-12).unwrap(), MomentOutcome::Witness { n: 3 });
    }

    #[test]
    fn tiny_values_count_as_zero_with_a_radius_bound() {
        let a = [c(1e-8), Complex64::new(0.0, -2e-8), c(3e-9)];
        match newton_moment_check(&a, 1e-6).unwrap() {
            MomentOutcome::AllZero { radius_bound } => assert!(radius_bound >= 2e-8 && radius_bound < 1e-6),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn single_pole_relations_vanish() {
        let pol = TruncationPolicy::default();
        let m = KernelModel::new(KernelSpec::explicit(1, &[(Complex64::new(3.0, 1.0), c(2.5))]), &pol).unwrap();
        let r = mt_relation_residuals(&m, &pol).unwrap();
        assert_eq!(r.len(), 4);
        for v in r {
            assert!(v.value.norm() <= v.error_bound, "{} > {}", v.value.norm(), v.error_bound);
        }
    }

    #[test]
    fn relations_match_residuals_on_three_poles() {
        let pol = TruncationPolicy::default();
        let spec = KernelSpec::explicit(
            1,
            &[
                (Complex64::new(1.5, 0.5), c(1.0)),
                (c(-2.0), Complex64::new(0.5, 1.0)),
                (Complex64::new(0.3, -2.2), c(-0.7)),
            ],
        );
        let m = KernelModel::new(spec, &pol).unwrap();
        let rel = mt_relation_residuals(&m, &pol).unwrap();
        let res = residuals(&m, 3, 0.0, &pol).unwrap();
        for (a, b) in rel.iter().zip(&res.residuals) {
            let tol = a.error_bound + b.value.error_bound;
            assert!((a.value + b.value.value).norm() <= tol, "N={}", b.n);
        }
    }

    #[test]
    fn constant_family_has_zero_variation() {
        let delta: Vec<f64> = (0..5).map(|i| i as f64 * 0.1).collect();
        let m = vec![vec![c(1.0), c(0.5), c(0.2), c(0.1)]; 5];
        let t = vec![vec![c(0.3), c(0.4)]; 5];
        let r = family_variation_residual(&delta, &m, &t).unwrap();
        assert_eq!(r.points, vec![1, 2, 3]);
        assert_eq!(r.max_norm(), 0.0);
        assert!(matches!(
            family_variation_residual(&delta[..4], &m[..4], &t[..4]),
            Err(Error::InsufficientSamples { got: 4, need: 5 })
        ));
    }
}
