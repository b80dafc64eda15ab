//! Nevanlinna characteristics sampled on circles: counting functions,
//! proximity function, characteristic, order, lower order, sequence order,
//! convergence index and the defect at zero.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::kernel::{unit_family, KernelModel, PoleSequence};
use crate::oracle::{Meromorphic, ZeroList, JITTER};

/// Which `ln⁺` is integrated.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum LogPlus {
    /// `max(0, ln a)`.
    #[default]
    Standard,
    /// `max(1, ln a)`, kept for comparison only: it makes `m ≥ 1`.
    FloorOne,
}

impl LogPlus {
    pub fn apply(self, a: f64) -> f64 {
        let l = a.ln();
        match self {
            LogPlus::Standard => l.max(0.0),
            LogPlus::FloorOne => l.max(1.0),
        }
    }
}

/// One radius of the characteristic. `T = N + m` as stored.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NevanlinnaSample {
    pub r: f64,
    pub n: u64,
    #[serde(rename = "N")]
    pub counting: f64,
    pub m: f64,
    #[serde(rename = "T")]
    pub characteristic: f64,
}

impl NevanlinnaSample {
    fn new(r: f64, n: u64, counting: f64, m: f64) -> Self {
        NevanlinnaSample {
            r,
            n,
            counting,
            m,
            characteristic: counting + m,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OrderEstimate {
    pub rho: f64,
    pub lambda: f64,
    /// The top-decade window the order was fitted on.
    pub fit_window: (f64, f64),
    /// RMS residual of that fit in `ln⁺` units.
    pub regression_residual: f64,
    /// Set when growth over the top decade is linear in `ln r`; `rho` and
    /// `lambda` are then 0.
    pub logarithmic: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SequenceOrder {
    pub order: OrderEstimate,
    /// Bisection estimate of `inf{α : Σ |t_k|^{-α} < ∞}`.
    pub convergence_index: f64,
    /// Whether the two estimates are within 0.1.
    pub agrees: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DefectEstimate {
    /// `min m(r, 1/f) / T(r, f)` over the grid, clamped to `[0, 1]`.
    pub value: f64,
    pub attained_at: f64,
    /// Always set: a minimum over finitely many radii is not a liminf.
    pub finite_radius_caveat: bool,
}

/// `T(r, f)` and `T(r, 1/f)` on the same circle.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CharacteristicPair {
    pub direct: NevanlinnaSample,
    pub reciprocal: NevanlinnaSample,
}

impl CharacteristicPair {
    pub fn difference(&self) -> f64 {
        self.reciprocal.characteristic - self.direct.characteristic
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProximityOptions {
    /// Uniform nodes the adaptive rule starts from.
    pub quadrature_points: usize,
    pub log_plus: LogPlus,
    /// Integrate `ln⁺|1/f|` instead of `ln⁺|f|`.
    pub reciprocal: bool,
}

impl Default for ProximityOptions {
    fn default() -> Self {
        ProximityOptions {
            quadrature_points: 256,
            log_plus: LogPlus::Standard,
            reciprocal: false,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Proximity {
    pub value: f64,
    /// Radius actually used, after any jitter.
    pub radius: f64,
    pub evaluations: usize,
}

const MAX_EVALUATIONS: usize = 1 << 20;
const RELATIVE_TARGET: f64 = 1e-6;
const MAX_DEPTH: u32 = 48;

/// `(n(r), N(r))` of the poles of a kernel sum, with multiplicity.
pub fn counting_function(model: &KernelModel, r: f64) -> (u64, f64) {
    model.counting(r)
}

/// `(n(r), N(r))` over located zeros.
pub fn zero_counting(zeros: &ZeroList, r: f64) -> (u64, f64) {
    zeros
        .zeros
        .iter()
        .filter(|z| z.location.norm() <= r)
        .fold((0, 0.0), |(n, big), z| {
            let mult = z.multiplicity as f64;
            (n + z.multiplicity as u64, big + mult * (r / z.location.norm()).ln())
        })
}

fn pole_counting<F: Meromorphic + ?Sized>(f: &F, r: f64) -> (u64, f64) {
    f.poles_within(Complex64::new(0.0, 0.0), r)
        .into_iter()
        .fold((0, 0.0), |(n, big), (t, mult)| {
            (n + mult as u64, big + mult as f64 * (r / t.norm()).ln())
        })
}

/// `m(r, f)` with the standard `ln⁺`.
pub fn proximity_function<F: Meromorphic + ?Sized>(f: &F, r: f64, quadrature_points: usize) -> Result<Proximity> {
    let options = ProximityOptions {
        quadrature_points,
        ..ProximityOptions::default()
    };
    proximity_with(f, r, &options, &[])
}

/// `m(r, f)` or `m(r, 1/f)`, moving the circle by the jitter factors when it
/// runs into a pole, a zero from `hints`, or fails to converge.
pub fn proximity_with<F: Meromorphic + ?Sized>(
    f: &F,
    r: f64,
    options: &ProximityOptions,
    hints: &[Complex64],
) -> Result<Proximity> {
    if !(r > 0.0) || !r.is_finite() {
        return Err(Error::InvalidSpec(format!("radius must be positive, got {r}")));
    }
    let mut last = None;
    for factor in std::iter::once(1.0).chain(JITTER) {
        let radius = r * factor;
        if crowded(f, radius, hints) {
            continue;
        }
        match proximity_on_circle(f, radius, options, hints) {
            Ok(p) => return Ok(p),
            Err(e @ (Error::QuadratureNotConverged { .. } | Error::PoleProximity { .. } | Error::Collision { .. })) => {
                last = Some(e)
            }
            Err(e) => return Err(e),
        }
    }
    Err(last.unwrap_or(Error::QuadratureNotConverged {
        points: 0,
        detail: format!("every jittered circle near r = {r} passes through a pole or zero"),
    }))
}

fn crowded<F: Meromorphic + ?Sized>(f: &F, radius: f64, hints: &[Complex64]) -> bool {
    let gap = 1e-9 * radius;
    let near = |t: Complex64| (t.norm() - radius).abs() <= gap;
    f.poles_within(Complex64::new(0.0, 0.0), radius + gap)
        .into_iter()
        .any(|(t, _)| near(t))
        || hints.iter().any(|&s| near(s))
}

/// As [`proximity_with`] on exactly the circle `|z| = radius`.
///
/// Adaptive trapezoid rule in the angle: uniform nodes plus the arguments
/// of poles and hints near the circle, each panel halved until the halving
/// changes it by less than its share of `10⁻⁶ (1 + m)`.
pub fn proximity_on_circle<F: Meromorphic + ?Sized>(
    f: &F,
    radius: f64,
    options: &ProximityOptions,
    hints: &[Complex64],
) -> Result<Proximity> {
    let two_pi = 2.0 * std::f64::consts::PI;
    let integrand = |theta: f64| -> Result<f64> {
        let z = Complex64::from_polar(radius, theta);
        let (v, err) = f.value(z)?;
        let a = v.norm();
        if options.reciprocal {
            if a <= err {
                return Err(Error::Collision { z });
            }
            Ok(options.log_plus.apply(1.0 / a))
        } else {
            Ok(options.log_plus.apply(a))
        }
    };

    let mut nodes: Vec<f64> = (0..options.quadrature_points.max(8))
        .map(|k| two_pi * k as f64 / options.quadrature_points.max(8) as f64)
        .collect();
    let window = 0.05 * radius + 1.0;
    let origin = Complex64::new(0.0, 0.0);
    let near_circle = f
        .poles_within(origin, radius + window)
        .into_iter()
        .map(|(t, _)| t)
        .chain(hints.iter().copied())
        .filter(|t| (t.norm() - radius).abs() <= window && t.norm() > 0.0);
    nodes.extend(near_circle.map(|t| t.arg().rem_euclid(two_pi)));
    nodes.sort_by(f64::total_cmp);
    nodes.dedup_by(|a, b| (*a - *b).abs() <= 1e-13);
    if let Some(&last) = nodes.last() {
        if two_pi - last <= 1e-13 {
            nodes.pop();
        }
    }
    nodes.push(two_pi);

    let values: Vec<f64> = nodes[..nodes.len() - 1]
        .par_iter()
        .map(|&t| integrand(t))
        .collect::<Result<_>>()?;
    let mut evaluations = values.len();
    let value_at = |i: usize| if i + 1 == nodes.len() { values[0] } else { values[i] };

    let coarse: f64 = (0..nodes.len() - 1)
        .map(|i| 0.5 * (nodes[i + 1] - nodes[i]) * (value_at(i) + value_at(i + 1)))
        .sum::<f64>()
        / two_pi;
    let tolerance = 0.1 * RELATIVE_TARGET * (1.0 + coarse.abs());

    let mut total = 0.0;
    for i in 0..nodes.len() - 1 {
        let mut stack = vec![(nodes[i], nodes[i + 1], value_at(i), value_at(i + 1), 0u32)];
        while let Some((a, b, fa, fb, depth)) = stack.pop() {
            let mid = 0.5 * (a + b);
            let fm = integrand(mid)?;
            evaluations += 1;
            if evaluations > MAX_EVALUATIONS {
                return Err(Error::QuadratureNotConverged {
                    points: evaluations,
                    detail: format!("proximity function on radius {radius}"),
                });
            }
            let h = b - a;
            let rough = 0.5 * h * (fa + fb);
            let fine = 0.25 * h * (fa + 2.0 * fm + fb);
            let share = tolerance * h;
            if (fine - rough).abs() <= 3.0 * share || depth >= MAX_DEPTH {
                total += fine;
            } else {
                stack.push((a, mid, fa, fm, depth + 1));
                stack.push((mid, b, fm, fb, depth + 1));
            }
        }
    }
    Ok(Proximity {
        value: total / two_pi,
        radius,
        evaluations,
    })
}

/// `n, N, m, T` of `f` at (a jitter of) `r`.
pub fn characteristic<F: Meromorphic + ?Sized>(f: &F, r: f64, log_plus: LogPlus) -> Result<NevanlinnaSample> {
    let options = ProximityOptions {
        log_plus,
        ..ProximityOptions::default()
    };
    let p = proximity_with(f, r, &options, &[])?;
    let (n, counting) = pole_counting(f, p.radius);
    Ok(NevanlinnaSample::new(p.radius, n, counting, p.value))
}

/// `T(r, f)` and `T(r, 1/f)` on one circle, the zero side from a zero list
/// exhaustive on a disk containing the circle.
pub fn characteristic_pair<F: Meromorphic + ?Sized>(
    f: &F,
    zeros: &ZeroList,
    r: f64,
    log_plus: LogPlus,
) -> Result<CharacteristicPair> {
    let hints: Vec<Complex64> = zeros.zeros.iter().map(|z| z.location).collect();
    let options = ProximityOptions {
        log_plus,
        reciprocal: true,
        ..ProximityOptions::default()
    };
    let inverse = proximity_with(f, r, &options, &hints)?;
    let radius = inverse.radius;
    let covered = zeros
        .exhaustive_in
        .is_some_and(|c| c.center.norm() == 0.0 && c.radius >= radius)
        && zeros.unresolved == 0;
    if !covered {
        return Err(Error::InvalidSpec(format!(
            "zero list is not exhaustive on |z| ≤ {radius}"
        )));
    }
    let direct_options = ProximityOptions {
        reciprocal: false,
        ..options
    };
    let direct = proximity_on_circle(f, radius, &direct_options, &hints)?;
    let (n, counting) = pole_counting(f, radius);
    let (zn, zcounting) = zero_counting(zeros, radius);
    Ok(CharacteristicPair {
        direct: NevanlinnaSample::new(radius, n, counting, direct.value),
        reciprocal: NevanlinnaSample::new(radius, zn, zcounting, inverse.value),
    })
}

/// Max minus min of `T(r, 1/f) − T(r, f)` over the pairs.
pub fn first_theorem_spread(pairs: &[CharacteristicPair]) -> f64 {
    let d = pairs.iter().map(CharacteristicPair::difference);
    let (lo, hi) = d.fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), x| (lo.min(x), hi.max(x)));
    if pairs.is_empty() {
        0.0
    } else {
        hi - lo
    }
}

/// `count` radii per decade from `r_min` to `r_max`, both included.
pub fn geometric_grid(r_min: f64, r_max: f64, per_decade: usize) -> Vec<f64> {
    let decades = (r_max / r_min).log10();
    let steps = ((decades * per_decade as f64).round() as usize).max(1);
    (0..=steps)
        .map(|i| r_min * 10f64.powf(decades * i as f64 / steps as f64))
        .collect()
}

fn validate_grid(grid: &[f64]) -> Result<Vec<f64>> {
    let mut g: Vec<f64> = grid.to_vec();
    if g.iter().any(|r| !(*r > 0.0) || !r.is_finite()) {
        return Err(Error::InsufficientGrid("radii must be positive and finite".into()));
    }
    g.sort_by(f64::total_cmp);
    g.dedup();
    match (g.first(), g.last()) {
        (Some(lo), Some(hi)) if hi / lo >= 1e3 * (1.0 - 1e-9) => Ok(g),
        _ => Err(Error::InsufficientGrid(format!(
            "grid must span three decades, got {} radii",
            g.len()
        ))),
    }
}

/// Characteristic at every grid radius, in order of `r`.
pub fn characteristic_samples<F: Meromorphic + ?Sized>(
    f: &F,
    grid: &[f64],
    log_plus: LogPlus,
) -> Result<Vec<NevanlinnaSample>> {
    let mut samples: Vec<NevanlinnaSample> = grid
        .par_iter()
        .map(|&r| characteristic(f, r, log_plus))
        .collect::<Result<_>>()?;
    samples.sort_by(|a, b| a.r.total_cmp(&b.r));
    Ok(samples)
}

/// Order and lower order from `T(r, f)` sampled on a grid spanning at
/// least three decades.
pub fn order_estimate<F: Meromorphic + ?Sized>(f: &F, grid: &[f64]) -> Result<OrderEstimate> {
    let grid = validate_grid(grid)?;
    let samples = characteristic_samples(f, &grid, LogPlus::Standard)?;
    fit_order(&samples.iter().map(|s| (s.r, s.characteristic)).collect::<Vec<_>>())
}

/// Fits `ln⁺ v` against `ln r`: `rho` is the least-squares slope over the
/// top decade and `lambda` the smallest such slope over any one-decade
/// window.
pub fn fit_order(points: &[(f64, f64)]) -> Result<OrderEstimate> {
    let mut pts = points.to_vec();
    pts.sort_by(|a, b| a.0.total_cmp(&b.0));
    let r_max = pts.last().map_or(0.0, |p| p.0);
    // jitter moves radii by under 1%
    let decade = |lo: f64| -> Vec<(f64, f64)> {
        pts.iter().copied().filter(|p| p.0 >= lo / 1.01 && p.0 <= lo * 10.0 * 1.01).collect()
    };
    let top = decade(r_max / 10.0);
    if top.len() < 3 {
        return Err(Error::InsufficientGrid(format!(
            "need 3 radii in the top decade, got {}",
            top.len()
        )));
    }
    let fit_window = (top[0].0, r_max);

    let lnp = |v: f64| if v > 1.0 { v.ln() } else { 0.0 };
    let xy = |w: &[(f64, f64)]| -> Vec<(f64, f64)> { w.iter().map(|p| (p.0.ln(), lnp(p.1))).collect() };
    let (rho_fit, residual) = least_squares(&xy(&top));

    let linear: Vec<(f64, f64)> = top.iter().map(|p| (p.0.ln(), p.1)).collect();
    let half = linear.len() / 2;
    let (lo_slope, _) = least_squares(&linear[..=half]);
    let (hi_slope, _) = least_squares(&linear[half..]);
    let logarithmic = hi_slope <= 1.02 * lo_slope.max(0.0) || hi_slope <= 0.0;
    if logarithmic {
        return Ok(OrderEstimate {
            rho: 0.0,
            lambda: 0.0,
            fit_window,
            regression_residual: residual,
            logarithmic,
        });
    }
    let rho = rho_fit.max(0.0);
    let lambda = pts
        .iter()
        .map(|p| decade(p.0))
        .filter(|w| w.len() >= 3 && w.last().unwrap().0 >= w[0].0 * 9.0)
        .map(|w| least_squares(&xy(&w)).0)
        .fold(rho, f64::min)
        .clamp(0.0, rho);
    Ok(OrderEstimate {
        rho,
        lambda,
        fit_window,
        regression_residual: residual,
        logarithmic,
    })
}

/// Slope and RMS residual of the least-squares line through the points.
fn least_squares(points: &[(f64, f64)]) -> (f64, f64) {
    let n = points.len() as f64;
    let (mx, my) = points.iter().fold((0.0, 0.0), |(a, b), p| (a + p.0 / n, b + p.1 / n));
    let (sxx, sxy) = points
        .iter()
        .fold((0.0, 0.0), |(a, b), p| (a + (p.0 - mx).powi(2), b + (p.0 - mx) * (p.1 - my)));
    if sxx == 0.0 {
        return (0.0, 0.0);
    }
    let slope = sxy / sxx;
    let ss: f64 = points.iter().map(|p| (p.1 - my - slope * (p.0 - mx)).powi(2)).sum();
    (slope, (ss / n).sqrt())
}

fn sequence_moduli(seq: &PoleSequence, r_max: f64) -> Result<Vec<f64>> {
    let mut moduli: Vec<f64> = match seq {
        PoleSequence::List { values } => values.iter().map(|t| t.norm()).collect(),
        _ => unit_family(seq)?
            .poles_within(Complex64::new(0.0, 0.0), r_max)
            .into_iter()
            .map(|t| t.norm())
            .collect(),
    };
    moduli.retain(|&m| m > 0.0 && m <= r_max);
    moduli.sort_by(f64::total_cmp);
    Ok(moduli)
}

/// Order of a pole sequence from `n(r)` on the grid, and its convergence
/// index by bisection on the decay of `Σ |t|^{-α}` across the top two
/// decades.
pub fn sequence_order(seq: &PoleSequence, grid: &[f64]) -> Result<SequenceOrder> {
    let grid = validate_grid(grid)?;
    let r_max = *grid.last().expect("validated");
    let moduli = sequence_moduli(seq, r_max)?;
    let points: Vec<(f64, f64)> = grid
        .iter()
        .map(|&r| (r, moduli.partition_point(|&m| m <= r) as f64))
        .collect();
    let order = fit_order(&points)?;

    let shell = |lo: f64, hi: f64| -> &[f64] {
        let a = moduli.partition_point(|&m| m <= lo);
        let b = moduli.partition_point(|&m| m <= hi);
        &moduli[a..b]
    };
    let lower = shell(r_max / 100.0, r_max / 10.0);
    let upper = shell(r_max / 10.0, r_max);
    let sum = |s: &[f64], alpha: f64| -> f64 { s.iter().map(|m| m.powf(-alpha)).sum() };
    let converges = |alpha: f64| {
        let u = sum(upper, alpha);
        u == 0.0 || u < sum(lower, alpha)
    };
    let (mut lo, mut hi) = (0.0, 16.0);
    let convergence_index = if converges(lo) {
        0.0
    } else if !converges(hi) {
        hi
    } else {
        for _ in 0..60 {
            let mid = 0.5 * (lo + hi);
            if converges(mid) {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        hi
    };
    Ok(SequenceOrder {
        order,
        convergence_index,
        agrees: (convergence_index - order.rho).abs() <= 0.1,
    })
}

/// `min m(r, 1/f) / T(r, f)` over the grid.
pub fn defect_estimate<F: Meromorphic + ?Sized>(f: &F, grid: &[f64]) -> Result<DefectEstimate> {
    let rows: Vec<(f64, f64, f64)> = grid
        .par_iter()
        .map(|&r| -> Result<(f64, f64, f64)> {
            let options = ProximityOptions {
                reciprocal: true,
                ..ProximityOptions::default()
            };
            let inverse = proximity_with(f, r, &options, &[])?;
            let direct = proximity_on_circle(f, inverse.radius, &ProximityOptions::default(), &[])?;
            let (_, counting) = pole_counting(f, inverse.radius);
            Ok((inverse.radius, inverse.value, counting + direct.value))
        })
        .collect::<Result<_>>()?;
    rows.iter()
        .filter(|row| row.2 > 1e-12)
        .map(|&(r, m_inv, t)| ((m_inv / t).clamp(0.0, 1.0), r))
        .min_by(|a, b| a.0.total_cmp(&b.0).then(a.1.total_cmp(&b.1)))
        .map(|(value, attained_at)| DefectEstimate {
            value,
            attained_at,
            finite_radius_caveat: true,
        })
        .ok_or_else(|| Error::InsufficientGrid("T(r, f) vanishes at every radius".into()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::{KernelSpec, TruncationPolicy};
    use crate::oracle::KernelFunction;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn squares() -> PoleSequence {
        PoleSequence::Power {
            a: c(1.0),
            p: 2.0,
            b: c(0.0),
        }
    }

    #[test]
    fn log_plus_variants() {
        assert_eq!(LogPlus::Standard.apply(0.5), 0.0);
        assert!((LogPlus::Standard.apply(std::f64::consts::E) - 1.0).abs() < 1e-15);
        assert_eq!(LogPlus::FloorOne.apply(0.5), 1.0);
    }

    #[test]
    fn counting_squares() {
        let pol = TruncationPolicy::default();
        let m = KernelModel::new(KernelSpec::power(1, 1.0, 2.0, 0.0, KernelSpec::unit_constant()), &pol).unwrap();
        let (n, big) = counting_function(&m, 10.0);
        assert_eq!(n, 3);
        assert!((big - (1000.0f64 / 36.0).ln()).abs() < 1e-13);
        assert_eq!(counting_function(&m, 0.5), (0, 0.0));
        assert_eq!(counting_function(&m, 1e6).0, 1000);
    }

    #[test]
    fn single_pole_far_circle_has_no_proximity() {
        let pol = TruncationPolicy::default();
        let m = KernelModel::new(KernelSpec::explicit(1, &[(Complex64::new(1.0, 1.0), c(1.0))]), &pol).unwrap();
        let f = KernelFunction::new(&m, pol);
        let p = proximity_function(&f, 5.0, 256).unwrap();
        assert_eq!(p.value, 0.0);
        // inside, m(r, f) = mean of ln⁺ 1/|z − C| over |z| = r
        let s = characteristic(&f, 3.0, LogPlus::Standard).unwrap();
        assert_eq!(s.n, 1);
        assert!((s.characteristic - s.counting - s.m).abs() == 0.0);
    }

    #[test]
    fn jensen_for_a_linear_factor() {
        // f = z − 2: m(r, f) = ln r for r ≥ 3
        let f = crate::oracle::ClosureFunction {
            eval: |z: Complex64| (z - 2.0, c(1.0)),
            poles: vec![],
        };
        let p = proximity_function(&f, 3.0, 256).unwrap();
        assert!((p.value - 3f64.ln()).abs() < 1e-6, "{}", p.value);
    }

    #[test]
    fn proximity_is_stable_under_more_nodes() {
        let pol = TruncationPolicy::default();
        let m = KernelModel::new(KernelSpec::power(1, 1.0, 2.0, 0.0, KernelSpec::unit_constant()), &pol).unwrap();
        let f = KernelFunction::new(&m, pol);
        let a = proximity_function(&f, 100.5, 256).unwrap();
        let b = proximity_function(&f, 100.5, 512).unwrap();
        assert!(a.value > 0.0 && a.value.is_finite());
        assert!((a.value - b.value).abs() < 1e-6 * (1.0 + a.value), "{} {}", a.value, b.value);
    }

    #[test]
    fn grid_must_span_three_decades() {
        assert!(matches!(
            sequence_order(&squares(), &geometric_grid(10.0, 1000.0, 5)),
            Err(Error::InsufficientGrid(_))
        ));
    }

    #[test]
    fn sequence_orders() {
        let grid = geometric_grid(10.0, 1e5, 10);
        let sq = sequence_order(&squares(), &grid).unwrap();
        assert!((sq.order.rho - 0.5).abs() < 0.05, "{sq:?}");
        assert!(sq.agrees, "{sq:?}");
        let lattice = sequence_order(&PoleSequence::Lattice { offset: c(0.5) }, &grid).unwrap();
        assert!((lattice.order.rho - 1.0).abs() < 0.05, "{lattice:?}");
        assert!(lattice.agrees);
        let finite = sequence_order(&PoleSequence::List { values: vec![c(1.0), c(3.0)] }, &grid).unwrap();
        assert_eq!(finite.order.rho, 0.0);
        assert_eq!(finite.convergence_index, 0.0);
        assert!(finite.agrees);
    }

    #[test]
    fn fit_recovers_power_law() {
        let pts: Vec<(f64, f64)> = geometric_grid(1.0, 1e4, 8).into_iter().map(|r| (r, 3.0 * r.powf(0.7))).collect();
        let o = fit_order(&pts).unwrap();
        assert!((o.rho - 0.7).abs() < 1e-3, "{o:?}");
        assert!(o.lambda <= o.rho && o.lambda > 0.6);
        let logs: Vec<(f64, f64)> = geometric_grid(10.0, 1e4, 8).into_iter().map(|r| (r, 2.0 * r.ln() + 1.0)).collect();
        let o = fit_order(&logs).unwrap();
        assert!(o.logarithmic && o.rho == 0.0);
    }
}
