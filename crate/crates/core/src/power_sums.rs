//! Pole power sums `T_l`, weighted sums `M_l`, and power sums of the zeros
//! of `f` and `f′` obtained from them.
//!
//! For a kernel sum of order `m` whose poles have multiplicity `m`,
//!
//! ```text
//! Σ_k s_k^{-(N+1)} = m T_{N+1} − b_N,   b_N = (1/N!) (f′/f)^{(N)}(0),
//! ```
//!
//! valid for `N > ρ − 1` where `ρ` is the order of `f`.

use std::collections::BTreeMap;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::kernel::{KernelModel, KernelSum, TruncationPolicy, Weights};
use crate::series::{logderiv_coeffs, second_logderiv_from, taylor_coeffs, LogDerivKind};
use crate::value::{ValueWithError, UNIT_ROUNDOFF};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Flavor {
    /// `T_l = Σ t_k^{-l}`.
    T,
    /// `M_l = Σ c_k t_k^{-l}`.
    M,
}

/// One power sum; `conditional` marks sums that converge only in the
/// canonical enumeration order.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PowerSumEntry {
    pub value: ValueWithError,
    pub conditional: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PowerSumTable {
    pub flavor: Flavor,
    pub entries: BTreeMap<u32, PowerSumEntry>,
}

impl PowerSumTable {
    /// Power sums for every exponent in `exponents`, computed in parallel.
    pub fn build(
        model: &KernelModel,
        flavor: Flavor,
        exponents: impl IntoIterator<Item = u32>,
        policy: &TruncationPolicy,
    ) -> Result<Self> {
        let ls: Vec<u32> = exponents.into_iter().collect();
        let entries = ls
            .par_iter()
            .map(|&l| power_sum(model, l, flavor, policy).map(|e| (l, e)))
            .collect::<Result<BTreeMap<_, _>>>()?;
        Ok(PowerSumTable { flavor, entries })
    }

    pub fn get(&self, l: u32) -> Option<ValueWithError> {
        self.entries.get(&l).map(|e| e.value)
    }
}

fn power_sum(model: &KernelModel, l: u32, flavor: Flavor, policy: &TruncationPolicy) -> Result<PowerSumEntry> {
    if l == 0 {
        return Err(Error::InvalidSpec("power sums need l ≥ 1".into()));
    }
    let weights = match flavor {
        Flavor::T => Weights::Unit,
        Flavor::M => Weights::Coefficients,
    };
    // Σ w t^{-l} = (−1)^l Σ w (0 − t)^{-l}
    let sum: KernelSum = model.kernel_sum(Complex64::new(0.0, 0.0), l, weights, policy)?;
    let sign = if l % 2 == 0 { 1.0 } else { -1.0 };
    Ok(PowerSumEntry {
        value: ValueWithError::new(sum.value * sign, sum.error),
        conditional: sum.conditional,
    })
}

/// `T_l = Σ t_k^{-l}` over the poles.
///
/// Fails with `ExponentBelowConvergenceIndex` when the series diverges; a
/// lattice `T_1` converges only in the canonical order and is returned
/// with that caveat by [`PowerSumTable`].
pub fn pole_power_sum(model: &KernelModel, l: u32, policy: &TruncationPolicy) -> Result<ValueWithError> {
    power_sum(model, l, Flavor::T, policy).map(|e| e.value)
}

/// `M_l = Σ c_k t_k^{-l}`.
pub fn weighted_power_sum(model: &KernelModel, l: u32, policy: &TruncationPolicy) -> Result<ValueWithError> {
    power_sum(model, l, Flavor::M, policy).map(|e| e.value)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ZeroTarget {
    ZerosOfF,
    ZerosOfFPrime,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Route {
    /// `2 T_{N+1} − b(f″/f′)_N`.
    ViaPoles,
    /// `2 Σ s^{-(N+1)} − b(f″/f′ − 2 f′/f)_N`.
    ViaZeros,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ZeroPowerSumEntry {
    pub n: u32,
    pub value: ValueWithError,
    /// The pole sum entering this value converges only in canonical order.
    pub conditional: bool,
    /// Magnitude of the two terms whose difference is `value`.
    pub scale: f64,
}

/// `Σ_k s_k^{-(N+1)}` for a range of `N`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ZeroPowerSums {
    pub target: ZeroTarget,
    pub rho: f64,
    pub entries: Vec<ZeroPowerSumEntry>,
}

impl ZeroPowerSums {
    pub fn get(&self, n: u32) -> Option<ValueWithError> {
        self.entries.iter().find(|e| e.n == n).map(|e| e.value)
    }
}

/// Smallest integer `N ≥ 0` with `N > ρ − 1`.
pub fn first_admissible(rho: f64) -> u32 {
    if rho < 1.0 {
        0
    } else {
        (rho - 1.0).floor() as u32 + 1
    }
}

fn check_admissible(n: u32, rho: f64) -> Result<()> {
    if !((n as f64) > rho - 1.0) {
        return Err(Error::HypothesisViolated(format!(
            "N > ρ − 1 is required, but N = {n} and ρ = {rho}"
        )));
    }
    Ok(())
}

/// `m T_{N+1} − b_N` for `n_min ≤ N ≤ n_max`, with no check of `N > ρ − 1`.
///
/// Outside that range the identity need not hold; this exists for audits
/// such as residual checks at `N = ρ − 1` on a lattice.
pub fn main_formula_values(
    model: &KernelModel,
    n_min: u32,
    n_max: u32,
    policy: &TruncationPolicy,
) -> Result<Vec<ZeroPowerSumEntry>> {
    let m = model.kernel_order() as f64;
    let a = taylor_coeffs(model, n_max as usize + 1, policy)?;
    let b = logderiv_coeffs(&a, n_max as usize)?;
    let t = PowerSumTable::build(model, Flavor::T, n_min + 1..=n_max + 1, policy)?;
    Ok((n_min..=n_max)
        .map(|n| {
            let tn = t.entries[&(n + 1)];
            let scaled = tn.value.scale(Complex64::new(m, 0.0));
            let bn = b.coeffs[n as usize];
            ZeroPowerSumEntry {
                n,
                value: scaled.sub(&bn),
                conditional: tn.conditional,
                scale: scaled.value.norm() + bn.value.norm(),
            }
        })
        .collect())
}

/// Power sums of the zeros of `f` for every admissible `N ≤ n_max`.
///
/// For `m = 1` this is `T_{N+1} − b_N`; for `m = 2` every pole is double
/// and it is `2 T_{N+1} − b_N`.
pub fn zero_power_sums(model: &KernelModel, n_max: u32, rho: f64, policy: &TruncationPolicy) -> Result<ZeroPowerSums> {
    let n_min = first_admissible(rho);
    let entries = if n_min > n_max {
        Vec::new()
    } else {
        main_formula_values(model, n_min, n_max, policy)?
    };
    Ok(ZeroPowerSums {
        target: ZeroTarget::ZerosOfF,
        rho,
        entries,
    })
}

/// `Σ s_k^{-(N+1)} = T_{N+1} − b_N` for a simple-kernel sum.
pub fn zero_power_sum(model: &KernelModel, n: u32, rho: f64, policy: &TruncationPolicy) -> Result<ValueWithError> {
    require_order(model, 1)?;
    check_admissible(n, rho)?;
    Ok(main_formula_values(model, n, n, policy)?[0].value)
}

/// `Σ u_k^{-(N+1)} = 2 T_{N+1} − b_N(g)` for a squared-kernel sum `g`.
pub fn zero_power_sum_squared(
    model: &KernelModel,
    n: u32,
    rho: f64,
    policy: &TruncationPolicy,
) -> Result<ValueWithError> {
    require_order(model, 2)?;
    check_admissible(n, rho)?;
    Ok(main_formula_values(model, n, n, policy)?[0].value)
}

fn require_order(model: &KernelModel, order: u32) -> Result<()> {
    if model.kernel_order() != order {
        return Err(Error::InvalidSpec(format!(
            "this operation needs kernel_order {order}, the spec has {}",
            model.kernel_order()
        )));
    }
    Ok(())
}

/// Power sums of the zeros of `f′` for a simple-kernel sum, by either route.
pub fn fprime_zero_power_sums(
    model: &KernelModel,
    n_max: u32,
    rho: f64,
    policy: &TruncationPolicy,
    route: Route,
) -> Result<ZeroPowerSums> {
    require_order(model, 1)?;
    let n_min = first_admissible(rho);
    let mut entries = Vec::new();
    if n_min <= n_max {
        let a = taylor_coeffs(model, n_max as usize + 2, policy)?;
        let two = Complex64::new(2.0, 0.0);
        match route {
            Route::ViaPoles => {
                let b2 = second_logderiv_from(&a, n_max as usize, LogDerivKind::FSecondOverFPrime)?;
                let t = PowerSumTable::build(model, Flavor::T, n_min + 1..=n_max + 1, policy)?;
                for n in n_min..=n_max {
                    let tn = t.entries[&(n + 1)];
                    let lhs = tn.value.scale(two);
                    let bn = b2.coeffs[n as usize];
                    entries.push(ZeroPowerSumEntry {
                        n,
                        value: lhs.sub(&bn),
                        conditional: tn.conditional,
                        scale: lhs.value.norm() + bn.value.norm(),
                    });
                }
            }
            Route::ViaZeros => {
                let zeros = zero_power_sums(model, n_max, rho, policy)?;
                let comb = second_logderiv_from(&a, n_max as usize, LogDerivKind::Combined)?;
                for e in zeros.entries {
                    let lhs = e.value.scale(two);
                    let cn = comb.coeffs[e.n as usize];
                    entries.push(ZeroPowerSumEntry {
                        n: e.n,
                        value: lhs.sub(&cn),
                        conditional: e.conditional,
                        scale: 2.0 * e.scale + cn.value.norm(),
                    });
                }
            }
        }
    }
    Ok(ZeroPowerSums {
        target: ZeroTarget::ZerosOfFPrime,
        rho,
        entries,
    })
}

/// `Σ u_k^{-(N+1)}` over the zeros of `f′` for one `N`.
pub fn fprime_zero_power_sum(
    model: &KernelModel,
    n: u32,
    rho: f64,
    policy: &TruncationPolicy,
    route: Route,
) -> Result<ValueWithError> {
    check_admissible(n, rho)?;
    let table = fprime_zero_power_sums(model, n, rho, policy, route)?;
    Ok(table.get(n).expect("admissible entry present"))
}

/// Relative disagreement of the two routes, scaled by their error bounds:
/// values ≤ 1 mean agreement.
pub fn route_discrepancy(via_poles: &ValueWithError, via_zeros: &ValueWithError) -> f64 {
    let diff = (via_poles.value - via_zeros.value).norm();
    let allowed = via_poles.error_bound
        + via_zeros.error_bound
        + UNIT_ROUNDOFF * (via_poles.value.norm() + via_zeros.value.norm());
    if allowed == 0.0 {
        if diff == 0.0 {
            0.0
        } else {
            f64::INFINITY
        }
    } else {
        diff / allowed
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::{CoefficientSequence, KernelSpec, PoleSequence};
    use std::f64::consts::PI;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn two_poles(pol: &TruncationPolicy) -> KernelModel {
        KernelModel::new(KernelSpec::explicit(1, &[(c(1.0), c(1.0)), (c(2.0), c(1.0))]), pol).unwrap()
    }

    #[test]
    fn explicit_power_sums() {
        let pol = TruncationPolicy::default();
        let m = two_poles(&pol);
        assert_eq!(pole_power_sum(&m, 2, &pol).unwrap().value, c(1.25));
        assert_eq!(weighted_power_sum(&m, 2, &pol).unwrap().value, c(1.25));
    }

    #[test]
    fn squares_t1_is_zeta_two() {
        let pol = TruncationPolicy::default();
        let m = KernelModel::new(KernelSpec::power(1, 1.0, 2.0, 0.0, KernelSpec::unit_constant()), &pol).unwrap();
        let t1 = pole_power_sum(&m, 1, &pol).unwrap();
        assert!((t1.value - c(PI * PI / 6.0)).norm() < 1e-13);
    }

    #[test]
    fn rational_zero_sum() {
        let pol = TruncationPolicy::default();
        let m = two_poles(&pol);
        let s = zero_power_sum(&m, 0, 0.0, &pol).unwrap();
        assert!((s.value - c(2.0 / 3.0)).norm() <= s.error_bound + 1e-15);
        let via_poles = fprime_zero_power_sum(&m, 0, 0.0, &pol, Route::ViaPoles).unwrap();
        let via_zeros = fprime_zero_power_sum(&m, 0, 0.0, &pol, Route::ViaZeros).unwrap();
        assert!((via_poles.value - c(1.2)).norm() < 1e-14);
        assert!((via_zeros.value - c(1.2)).norm() < 1e-14);
        assert!(route_discrepancy(&via_poles, &via_zeros) <= 1.0);
    }

    #[test]
    fn single_pole_fprime_has_no_zeros() {
        let pol = TruncationPolicy::default();
        let m = KernelModel::new(KernelSpec::explicit(1, &[(c(2.0), c(1.0))]), &pol).unwrap();
        let v = fprime_zero_power_sum(&m, 0, 0.0, &pol, Route::ViaPoles).unwrap();
        assert!(v.value.norm() <= v.error_bound);
    }

    #[test]
    fn squared_single_pole_is_zero_free() {
        let pol = TruncationPolicy::default();
        let m = KernelModel::new(KernelSpec::explicit(2, &[(c(1.0), c(1.0))]), &pol).unwrap();
        let v = zero_power_sum_squared(&m, 0, 0.0, &pol).unwrap();
        assert!(v.value.norm() <= v.error_bound.max(1e-15));
    }

    #[test]
    fn hypothesis_and_order_checks() {
        let pol = TruncationPolicy::default();
        let m = two_poles(&pol);
        assert!(matches!(zero_power_sum(&m, 0, 1.0, &pol), Err(Error::HypothesisViolated(_))));
        assert!(matches!(zero_power_sum_squared(&m, 0, 0.0, &pol), Err(Error::InvalidSpec(_))));
        assert_eq!(first_admissible(0.5), 0);
        assert_eq!(first_admissible(1.0), 1);
        assert_eq!(first_admissible(2.3), 2);
    }

    #[test]
    fn lattice_t1_is_flagged_conditional() {
        let pol = TruncationPolicy::default();
        let spec = KernelSpec {
            kernel_order: 2,
            poles: PoleSequence::Lattice { offset: c(0.5) },
            coeffs: CoefficientSequence::Constant { value: c(1.0) },
            prefix: vec![],
        };
        let m = KernelModel::new(spec, &pol).unwrap();
        let t = PowerSumTable::build(&m, Flavor::T, 1..=2, &pol).unwrap();
        assert!(t.entries[&1].conditional);
        assert!(t.entries[&1].value.value.norm() <= t.entries[&1].value.error_bound + 1e-15);
        assert!(!t.entries[&2].conditional);
        assert!((t.get(2).unwrap().value - c(PI * PI)).norm() < 1e-12);
    }
}
