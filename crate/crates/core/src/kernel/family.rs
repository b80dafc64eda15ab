//! Infinite pole families and their kernel sums `Σ c_k (α − t_k)^{-s}`.
//!
//! Beyond a head of `K` explicit terms, each term is expanded as
//!
//! ```text
//! (β − a k^p)^{-s} = (−a)^{-s} k^{-ps} Σ_j C(s+j−1, j) (β / (a k^p))^j,   β = α − b,
//! ```
//!
//! which converges geometrically once `|a|(K+1)^p ≥ 4|β|`. Summing over `k`
//! turns every power of `k` into a Hurwitz-type tail computed by
//! [`zeta`](super::zeta). Lattices `n + offset`, `n ∈ ℤ`, pair `n` with `−n`,
//! which cancels every other expansion term.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex};

use num_complex::Complex64;

use super::zeta::{scaled_eta_tail, scaled_zeta_tail, Tail};
use super::{TailMethod, TruncationPolicy};
use crate::error::{Error, Result};
use crate::value::UNIT_ROUNDOFF;

pub(crate) const J_MAX: usize = 96;
const HEAD_MIN: u64 = 16;

#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) enum Shape {
    /// `t_k = a k^p + b`, `k ≥ 1`.
    Power { a: Complex64, p: f64, b: Complex64 },
    /// `t = n + offset`, `n ∈ ℤ`, enumerated `0, 1, −1, 2, −2, …`.
    Lattice { offset: Complex64 },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) enum CoeffLaw {
    /// `κ (±1)^k k^{-q}`.
    Signed {
        kappa: Complex64,
        alternating: bool,
        q: f64,
    },
    /// `κ σ^k k^{-q}` with `|σ| ≤ 1`, `σ ≠ ±1`.
    Geometric {
        kappa: Complex64,
        sigma: Complex64,
        q: f64,
    },
}

impl CoeffLaw {
    pub(crate) const UNIT: CoeffLaw = CoeffLaw::Signed {
        kappa: Complex64::new(1.0, 0.0),
        alternating: false,
        q: 0.0,
    };

    fn at(&self, k: u64) -> Complex64 {
        let decay = |q: f64| if q == 0.0 { 1.0 } else { (k as f64).powf(-q) };
        match *self {
            CoeffLaw::Signed {
                kappa,
                alternating,
                q,
            } => {
                let sign = if alternating && k % 2 == 1 { -1.0 } else { 1.0 };
                kappa * sign * decay(q)
            }
            CoeffLaw::Geometric { kappa, sigma, q } => kappa * sigma.powu(k as u32) * decay(q),
        }
    }

    fn kappa(&self) -> Complex64 {
        match *self {
            CoeffLaw::Signed { kappa, .. } | CoeffLaw::Geometric { kappa, .. } => kappa,
        }
    }

    fn q(&self) -> f64 {
        match *self {
            CoeffLaw::Signed { q, .. } | CoeffLaw::Geometric { q, .. } => q,
        }
    }
}

/// Which weights multiply the kernels.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Weights {
    /// The coefficients `c_k` of the spec.
    Coefficients,
    /// Weight one per pole, as in the pole power sums `T_l`.
    Unit,
}

/// A kernel sum over part of the poles, with its error bound and the sum of
/// term magnitudes (the rounding scale).
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct PartialSum {
    pub value: Complex64,
    pub error: f64,
    pub scale: f64,
    pub conditional: bool,
}

impl PartialSum {
    pub(crate) fn merge(self, other: PartialSum) -> PartialSum {
        PartialSum {
            value: self.value + other.value,
            error: self.error + other.error + UNIT_ROUNDOFF * (self.value.norm() + other.value.norm()),
            scale: self.scale + other.scale,
            conditional: self.conditional || other.conditional,
        }
    }
}

type TableKey = (u32, u64, Weights);

pub(crate) struct Family {
    pub shape: Shape,
    pub law: CoeffLaw,
    tables: Mutex<HashMap<TableKey, Arc<Vec<Option<Tail>>>>>,
}

impl Clone for Family {
    fn clone(&self) -> Self {
        Family::new(self.shape, self.law)
    }
}

impl fmt::Debug for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Family")
            .field("shape", &self.shape)
            .field("law", &self.law)
            .finish()
    }
}

impl PartialEq for Family {
    fn eq(&self, other: &Self) -> bool {
        self.shape == other.shape && self.law == other.law
    }
}

pub(crate) fn lattice_integer(idx: u64) -> i64 {
    debug_assert!(idx >= 1);
    let half = (idx / 2) as i64;
    if idx % 2 == 0 {
        half
    } else {
        -half
    }
}

impl Family {
    pub(crate) fn new(shape: Shape, law: CoeffLaw) -> Self {
        Family {
            shape,
            law,
            tables: Mutex::new(HashMap::new()),
        }
    }

    fn law_for(&self, weights: Weights) -> CoeffLaw {
        match weights {
            Weights::Coefficients => self.law,
            Weights::Unit => CoeffLaw::UNIT,
        }
    }

    /// Pole at canonical index `idx ≥ 1`.
    pub(crate) fn pole(&self, idx: u64) -> Complex64 {
        match self.shape {
            Shape::Power { a, p, b } => a * power(idx, p) + b,
            Shape::Lattice { offset } => offset + lattice_integer(idx) as f64,
        }
    }

    pub(crate) fn coeff(&self, idx: u64, weights: Weights) -> Complex64 {
        let law = self.law_for(weights);
        match self.shape {
            Shape::Power { .. } => law.at(idx),
            Shape::Lattice { .. } => law.at(lattice_integer(idx).unsigned_abs()),
        }
    }

    /// Number of canonical indices covered by a head of size `head`.
    fn head_len(&self, head: u64) -> u64 {
        match self.shape {
            Shape::Power { .. } => head,
            Shape::Lattice { .. } => 2 * head + 1,
        }
    }

    pub(crate) fn convergence_index(&self) -> f64 {
        match self.shape {
            Shape::Power { p, .. } => 1.0 / p,
            Shape::Lattice { .. } => 1.0,
        }
    }

    /// Lower bound on `|t|` for every pole beyond the head, given a modulus
    /// the head must clear.
    fn growth(&self) -> (f64, f64, f64) {
        match self.shape {
            Shape::Power { a, p, b } => (a.norm(), p, b.norm()),
            Shape::Lattice { offset } => (1.0, 1.0, offset.norm()),
        }
    }

    fn shift(&self, alpha: Complex64) -> Complex64 {
        match self.shape {
            Shape::Power { b, .. } => alpha - b,
            Shape::Lattice { offset } => alpha - offset,
        }
    }

    /// Smallest head `K ≥ HEAD_MIN` with `|a| (K+1)^p ≥ |β| / ratio`.
    fn geometric_head(&self, beta: f64, ratio: f64) -> u64 {
        let (a, p, _) = self.growth();
        let needed = (beta / (ratio * a)).powf(1.0 / p);
        let k = if needed.is_finite() {
            (needed.ceil() as u64).max(HEAD_MIN)
        } else {
            u64::MAX / 4
        };
        k.max(HEAD_MIN).checked_next_power_of_two().unwrap_or(u64::MAX / 4)
    }

    /// Whether the kernel sum with exponent `s` converges only in the
    /// canonical order. `Err` when it does not converge at all.
    fn convergence(&self, s: u32, law: CoeffLaw) -> Result<bool> {
        let q = law.q();
        match self.shape {
            Shape::Power { p, .. } => {
                let sigma0 = p * s as f64 + q;
                match law {
                    CoeffLaw::Signed { alternating, .. } => {
                        if sigma0 > 1.0 {
                            Ok(false)
                        } else if alternating && sigma0 > 0.0 {
                            Ok(true)
                        } else {
                            Err(Error::ExponentBelowConvergenceIndex {
                                exponent: s,
                                index: (1.0 - q) / p,
                            })
                        }
                    }
                    CoeffLaw::Geometric { sigma, .. } => {
                        if sigma.norm() < 1.0 || sigma0 > 1.0 {
                            Ok(false)
                        } else {
                            Err(Error::ExponentBelowConvergenceIndex {
                                exponent: s,
                                index: (1.0 - q) / p,
                            })
                        }
                    }
                }
            }
            Shape::Lattice { .. } => Ok(s <= 1),
        }
    }

    /// `Σ_k w_k (α − t_k)^{-s}` over the whole family.
    pub(crate) fn sum(
        &self,
        alpha: Complex64,
        s: u32,
        weights: Weights,
        policy: &TruncationPolicy,
    ) -> Result<PartialSum> {
        let law = self.law_for(weights);
        let conditional = self.convergence(s, law)?;
        let beta = self.shift(alpha).norm();
        let asymptotic = policy.method == TailMethod::Asymptotic && matches!(law, CoeffLaw::Signed { .. });

        if asymptotic {
            let ratio = if s > 16 { 0.15 } else { 0.25 };
            let head = self.geometric_head(beta, ratio);
            if head > policy.max_terms {
                return Err(Error::TailNotConvergent {
                    bound: f64::INFINITY,
                    target: policy.target_tail,
                    max_terms: policy.max_terms as usize,
                });
            }
            let head_sum = self.head_sum(alpha, s, law, head)?;
            let tail = self.asymptotic_tail(alpha, s, weights, law, head)?;
            let mut total = head_sum.merge(tail);
            total.conditional = conditional;
            return Ok(total);
        }

        let prefer_geometric = policy.method != TailMethod::IntegralBound;
        let mut head = self.geometric_head(beta, 0.5);
        loop {
            let bound = self.drop_bound(alpha, s, law, head, prefer_geometric)?;
            if bound <= policy.target_tail {
                let mut total = self.head_sum(alpha, s, law, head)?;
                total.error += bound;
                total.conditional = conditional;
                return Ok(total);
            }
            if head.saturating_mul(2) > policy.max_terms {
                return Err(Error::TailNotConvergent {
                    bound,
                    target: policy.target_tail,
                    max_terms: policy.max_terms as usize,
                });
            }
            head *= 2;
        }
    }

    fn head_sum(&self, alpha: Complex64, s: u32, law: CoeffLaw, head: u64) -> Result<PartialSum> {
        let mut acc = NeumaierSum::default();
        let mut error = 0.0;
        let mut scale = 0.0;
        let lattice = matches!(self.shape, Shape::Lattice { .. });
        for idx in 1..=self.head_len(head) {
            let t = self.pole(idx);
            let c = if lattice {
                law.at(lattice_integer(idx).unsigned_abs())
            } else {
                law.at(idx)
            };
            let term = kernel_term(alpha, t, c, s)?;
            let magnitude = term.value.norm();
            acc.add(term.value);
            scale += magnitude;
            error += term.error;
        }
        Ok(PartialSum {
            value: acc.total(),
            error: error + 3.0 * UNIT_ROUNDOFF * scale,
            scale,
            conditional: false,
        })
    }

    fn table(&self, s: u32, head: u64, weights: Weights, law: CoeffLaw) -> Result<Arc<Vec<Option<Tail>>>> {
        let key = (s, head, weights);
        if let Some(t) = self.tables.lock().expect("tail table lock").get(&key) {
            return Ok(Arc::clone(t));
        }
        let alternating = matches!(law, CoeffLaw::Signed { alternating: true, .. });
        let mut table = Vec::with_capacity(J_MAX + 1);
        for j in 0..=J_MAX {
            let entry = match self.shape {
                Shape::Power { p, .. } => {
                    let sigma = p * (s as f64 + j as f64) + law.q();
                    if alternating {
                        Some(scaled_eta_tail(sigma, head))
                    } else if sigma > 1.0 {
                        Some(scaled_zeta_tail(sigma, head))
                    } else {
                        return Err(Error::ExponentBelowConvergenceIndex {
                            exponent: s,
                            index: self.convergence_index(),
                        });
                    }
                }
                Shape::Lattice { .. } => {
                    // only exponents s + j with s + j even survive the pairing
                    if (s as usize + j) % 2 == 0 {
                        let sigma = (s as usize + j) as f64;
                        Some(if alternating {
                            scaled_eta_tail(sigma, head)
                        } else {
                            scaled_zeta_tail(sigma, head)
                        })
                    } else {
                        None
                    }
                }
            };
            table.push(entry);
        }
        let table = Arc::new(table);
        self.tables
            .lock()
            .expect("tail table lock")
            .insert(key, Arc::clone(&table));
        Ok(table)
    }

    /// Tail beyond the head, summed through the binomial expansion.
    fn asymptotic_tail(
        &self,
        alpha: Complex64,
        s: u32,
        weights: Weights,
        law: CoeffLaw,
        head: u64,
    ) -> Result<PartialSum> {
        let table = self.table(s, head, weights, law)?;
        let k1 = (head + 1) as f64;
        let beta = self.shift(alpha);
        let kappa = law.kappa();
        let alternating = matches!(law, CoeffLaw::Signed { alternating: true, .. });
        let (prefactor, x, pair_factor) = match self.shape {
            Shape::Power { a, p, .. } => {
                let scale = k1.powf(-(p * s as f64 + law.q()));
                let lead = (-a).inv().powu(s);
                (kappa * lead * scale, beta / (a * k1.powf(p)), 1.0)
            }
            Shape::Lattice { .. } => (kappa * k1.powi(-(s as i32)), beta / k1, 2.0),
        };
        let xn = x.norm();
        let s_f = s as f64;

        let mut acc = Complex64::new(0.0, 0.0);
        let mut abs_sum = 0.0;
        let mut tail_err = 0.0;
        let mut binom = 1.0;
        let mut xp = Complex64::new(1.0, 0.0);
        let mut remainder = f64::INFINITY;
        let mut used = 0;
        for (j, entry) in table.iter().enumerate() {
            if let Some(z) = entry {
                let factor = match self.shape {
                    Shape::Power { .. } => 1.0,
                    Shape::Lattice { .. } => {
                        if (s as usize) % 2 == 0 {
                            2.0
                        } else {
                            -2.0
                        }
                    }
                };
                let term = xp * (binom * factor * z.value);
                acc += term;
                abs_sum += term.norm();
                tail_err += binom * factor.abs() * xp.norm() * z.error;
            }
            used = j;
            // bound on everything after index j
            let jf = j as f64;
            let next_binom = binom * (s_f + jf) / (jf + 1.0);
            let ratio = xn * (s_f + jf + 1.0) / (jf + 2.0);
            if ratio < 1.0 {
                let z_bound = if alternating {
                    1.0
                } else {
                    table[..=j]
                        .iter()
                        .rev()
                        .flatten()
                        .next()
                        .map_or(1.0, |t| t.value)
                };
                remainder = pair_factor * next_binom * xn.powi(j as i32 + 1) * z_bound / (1.0 - ratio);
                if remainder <= 0.5 * UNIT_ROUNDOFF * abs_sum.max(f64::MIN_POSITIVE) {
                    break;
                }
            }
            binom = next_binom;
            xp *= x;
        }
        if !remainder.is_finite() {
            return Err(Error::TailNotConvergent {
                bound: remainder,
                target: 0.0,
                max_terms: head as usize,
            });
        }
        let p_norm = prefactor.norm();
        let rounding = UNIT_ROUNDOFF * (used as f64 + 8.0) * abs_sum;
        Ok(PartialSum {
            value: prefactor * acc,
            error: p_norm * (tail_err + remainder + rounding),
            scale: p_norm * abs_sum,
            conditional: false,
        })
    }

    /// Bound on the dropped tail beyond `head`, or an error when the
    /// comparison integral diverges.
    fn drop_bound(&self, alpha: Complex64, s: u32, law: CoeffLaw, head: u64, prefer_geometric: bool) -> Result<f64> {
        let beta = self.shift(alpha).norm();
        let k = head as f64;
        let k1 = k + 1.0;
        let kappa = law.kappa().norm();
        let divergent = || Error::ExponentBelowConvergenceIndex {
            exponent: s,
            index: self.convergence_index(),
        };
        match self.shape {
            Shape::Power { a, p, .. } => {
                let an = a.norm();
                debug_assert!(an * k1.powf(p) >= 2.0 * beta);
                if let (CoeffLaw::Geometric { sigma, q, .. }, true) = (law, prefer_geometric) {
                    let r = sigma.norm();
                    if r < 1.0 {
                        return Ok(kappa * r.powf(k1) / (1.0 - r) * k1.powf(-q) * (an * k1.powf(p) / 2.0).powi(-(s as i32)));
                    }
                }
                let e = law.q() + p * s as f64;
                if e <= 1.0 {
                    return Err(divergent());
                }
                Ok(kappa * (2.0 / an).powi(s as i32) * k.powf(1.0 - e) / (e - 1.0))
            }
            Shape::Lattice { .. } => {
                if s <= 1 {
                    return Err(divergent());
                }
                let sf = s as f64;
                Ok(2.0 * kappa * 2f64.powi(s as i32) * k.powf(1.0 - sf) / (sf - 1.0))
            }
        }
    }

    /// Poles within `radius` of `center`, in canonical order.
    pub(crate) fn poles_within(&self, center: Complex64, radius: f64) -> Vec<Complex64> {
        let (a, p, b) = self.growth();
        let reach = radius + center.norm() + b;
        let mut out = Vec::new();
        let mut idx = 1u64;
        loop {
            let k = match self.shape {
                Shape::Power { .. } => idx as f64,
                Shape::Lattice { .. } => lattice_integer(idx).unsigned_abs() as f64,
            };
            if a * k.powf(p) > reach {
                break;
            }
            let t = self.pole(idx);
            if (t - center).norm() <= radius {
                out.push(t);
            }
            idx += 1;
        }
        out
    }

    /// Smallest pole modulus.
    pub(crate) fn min_modulus(&self) -> f64 {
        let (a, p, b) = self.growth();
        let mut best = f64::INFINITY;
        let mut idx = 1u64;
        loop {
            let k = match self.shape {
                Shape::Power { .. } => idx as f64,
                Shape::Lattice { .. } => lattice_integer(idx).unsigned_abs() as f64,
            };
            if a * k.powf(p) - b > best {
                break;
            }
            best = best.min(self.pole(idx).norm());
            idx += 1;
        }
        best
    }

    /// Whether `t` coincides with one of the family's poles.
    pub(crate) fn contains(&self, t: Complex64) -> bool {
        let tol = |u: Complex64| 8.0 * f64::EPSILON * u.norm().max(1.0);
        match self.shape {
            Shape::Lattice { offset } => {
                let d = t - offset;
                (d.re - d.re.round()).abs() <= tol(t) && d.im.abs() <= tol(t)
            }
            Shape::Power { .. } => self
                .poles_within(Complex64::new(0.0, 0.0), t.norm() + 1.0)
                .iter()
                .any(|&u| (u - t).norm() <= tol(t)),
        }
    }

    /// Tail beyond head `K` of `Σ t_k^{-l}` with unit weights, for the
    /// convergence-factor sums of the Hadamard product. Requires
    /// `l > convergence index`.
    pub(crate) fn power_tail(&self, l: u32, head: u64) -> Result<PartialSum> {
        let law = CoeffLaw::UNIT;
        self.convergence(l, law)?;
        // Σ t^{-l} = (−1)^l Σ (0 − t)^{-l}
        let tail = self.asymptotic_tail(Complex64::new(0.0, 0.0), l, Weights::Unit, law, head)?;
        let sign = if l % 2 == 0 { 1.0 } else { -1.0 };
        Ok(PartialSum {
            value: tail.value * sign,
            ..tail
        })
    }

    /// Head size for which every pole beyond it has modulus at least
    /// `4 |z|` and the expansion about the origin converges.
    pub(crate) fn head_clearing(&self, modulus: f64) -> u64 {
        let (_, _, b) = self.growth();
        self.geometric_head(4.0 * modulus + 4.0 * b, 1.0)
    }

    /// Lower bound on `|t_k|` for `k` beyond `head`.
    pub(crate) fn tail_min_modulus(&self, head: u64) -> f64 {
        let (a, p, b) = self.growth();
        a * ((head + 1) as f64).powf(p) - b
    }

    /// Poles of the head of size `head`, canonical order.
    pub(crate) fn head_poles(&self, head: u64) -> impl Iterator<Item = Complex64> + '_ {
        (1..=self.head_len(head)).map(move |idx| self.pole(idx))
    }
}

fn power(k: u64, p: f64) -> f64 {
    let kf = k as f64;
    if p.fract() == 0.0 && p.abs() <= 64.0 {
        kf.powi(p as i32)
    } else {
        kf.powf(p)
    }
}

pub(crate) struct Term {
    pub value: Complex64,
    pub error: f64,
}

/// `c (α − t)^{-s}` with its rounding error, rejecting points too close to
/// the pole.
pub(crate) fn kernel_term(alpha: Complex64, t: Complex64, c: Complex64, s: u32) -> Result<Term> {
    let d = alpha - t;
    let dn = d.norm();
    let guard = 10.0 * f64::EPSILON * t.norm().max(1.0);
    if dn <= guard {
        return Err(Error::PoleProximity {
            z: alpha,
            pole: t,
            distance: dn,
        });
    }
    let value = c * d.inv().powu(s);
    let rel = UNIT_ROUNDOFF * (s as f64 + 4.0) * (1.0 + 4.0 * t.norm() / dn);
    Ok(Term {
        value,
        error: value.norm() * rel,
    })
}

/// Compensated (Neumaier) summation of complex terms.
#[derive(Debug, Default, Clone, Copy)]
pub(crate) struct NeumaierSum {
    sum_re: f64,
    comp_re: f64,
    sum_im: f64,
    comp_im: f64,
}

impl NeumaierSum {
    pub(crate) fn add(&mut self, z: Complex64) {
        fn step(sum: &mut f64, comp: &mut f64, x: f64) {
            let t = *sum + x;
            if sum.abs() >= x.abs() {
                *comp += (*sum - t) + x;
            } else {
                *comp += (x - t) + *sum;
            }
            *sum = t;
        }
        step(&mut self.sum_re, &mut self.comp_re, z.re);
        step(&mut self.sum_im, &mut self.comp_im, z.im);
    }

    pub(crate) fn total(&self) -> Complex64 {
        Complex64::new(self.sum_re + self.comp_re, self.sum_im + self.comp_im)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn policy() -> TruncationPolicy {
        TruncationPolicy::default()
    }

    fn squares() -> Family {
        Family::new(
            Shape::Power {
                a: Complex64::new(1.0, 0.0),
                p: 2.0,
                b: Complex64::new(0.0, 0.0),
            },
            CoeffLaw::UNIT,
        )
    }

    #[test]
    fn lattice_enumeration_order() {
        let n: Vec<i64> = (1..=7).map(lattice_integer).collect();
        assert_eq!(n, vec![0, 1, -1, 2, -2, 3, -3]);
    }

    #[test]
    fn squares_at_origin_give_minus_zeta_two() {
        let f = squares();
        let s = f.sum(Complex64::new(0.0, 0.0), 1, Weights::Coefficients, &policy()).unwrap();
        let exact = -std::f64::consts::PI.powi(2) / 6.0;
        assert!((s.value.re - exact).abs() <= s.error + 1e-15);
        assert!(s.error < 1e-13);
    }

    #[test]
    fn squares_far_from_origin_match_closed_form() {
        // Σ 1/(z − k²) at z = −w², = −(π w coth(π w) − 1)/(2 w²)
        let f = squares();
        let w: f64 = 40.0;
        let z = Complex64::new(-w * w, 0.0);
        let s = f.sum(z, 1, Weights::Coefficients, &policy()).unwrap();
        let pw = std::f64::consts::PI * w;
        let exact = -(pw / pw.tanh() - 1.0) / (2.0 * w * w);
        assert!((s.value.re - exact).abs() <= s.error.max(1e-16) * 4.0, "{} vs {exact}", s.value.re);
    }

    #[test]
    fn integral_bound_policy_drops_tail_within_bound() {
        let f = squares();
        let pol = TruncationPolicy {
            method: TailMethod::IntegralBound,
            target_tail: 1e-4,
            ..policy()
        };
        let s = f.sum(Complex64::new(0.0, 0.0), 1, Weights::Coefficients, &pol).unwrap();
        let exact = -std::f64::consts::PI.powi(2) / 6.0;
        assert!((s.value.re - exact).abs() <= s.error);
        assert!(s.error <= 1.1e-4);
    }

    #[test]
    fn lattice_pairing_gives_cotangent_square() {
        // Σ_n 1/(z − n − 1/2)² = π² / cos²(π z)
        let f = Family::new(
            Shape::Lattice {
                offset: Complex64::new(0.5, 0.0),
            },
            CoeffLaw::UNIT,
        );
        let z = Complex64::new(0.3, 0.7);
        let s = f.sum(z, 2, Weights::Coefficients, &policy()).unwrap();
        let pi = std::f64::consts::PI;
        let exact = pi * pi / (z * pi).cos().powu(2);
        assert!((s.value - exact).norm() <= s.error.max(1e-15) * 4.0, "{} vs {exact}", s.value);
    }

    #[test]
    fn alternating_power_family_weighted_sum() {
        // Σ 2(−1)^k / (k² − 1/9)
        let f = Family::new(
            Shape::Power {
                a: Complex64::new(1.0, 0.0),
                p: 2.0,
                b: Complex64::new(-1.0 / 9.0, 0.0),
            },
            CoeffLaw::Signed {
                kappa: Complex64::new(2.0, 0.0),
                alternating: true,
                q: 0.0,
            },
        );
        let s = f.sum(Complex64::new(0.0, 0.0), 1, Weights::Coefficients, &policy()).unwrap();
        // value at 0 of Σ 2(−1)^k/(z − t_k) is −Σ 2(−1)^k/t_k
        let mut brute = 0.0;
        for k in (1..2_000_000u64).rev() {
            let kf = k as f64;
            let sign = if k % 2 == 1 { -1.0 } else { 1.0 };
            brute += 2.0 * sign / (kf * kf - 1.0 / 9.0);
        }
        assert!((s.value.re + brute).abs() < 1e-12, "{} vs {}", s.value.re, -brute);
    }

    #[test]
    fn power_tail_matches_direct_remainder() {
        let f = squares();
        let tail = f.power_tail(2, 32).unwrap();
        let head: f64 = (1..=32).map(|k| (k as f64).powi(-4)).sum();
        let exact = std::f64::consts::PI.powi(4) / 90.0 - head;
        assert!((tail.value.re - exact).abs() < 1e-15);
    }
}
