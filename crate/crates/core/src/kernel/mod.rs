//! Kernel sums `f(z) = Σ c_k / (z − t_k)^m` with certified truncation.

mod family;
mod spec;
mod zeta;

use num_complex::Complex64;

pub(crate) use family::NeumaierSum;
pub(crate) use family::Family;

use family::{kernel_term, CoeffLaw, PartialSum, Shape};
pub use family::Weights;
pub use spec::{CoefficientSequence, KernelSpec, PoleSequence, PrefixTerm};

use crate::error::{Error, Result};
use crate::value::{ValueWithError, UNIT_ROUNDOFF};

/// How the infinite tail of a family is handled.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TailMethod {
    /// Sum the tail through its expansion in Hurwitz-type zeta tails; the
    /// error is the expansion remainder, so targets far below `ε` are met
    /// with a short head.
    Asymptotic,
    /// Drop the tail and bound it by the comparison integral.
    IntegralBound,
    /// Drop the tail and bound it geometrically when coefficients decay
    /// geometrically, by the integral otherwise.
    GeometricBound,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TruncationPolicy {
    pub max_terms: u64,
    pub target_tail: f64,
    pub method: TailMethod,
    /// Ceiling on derivative orders.
    pub max_derivative: u32,
}

impl Default for TruncationPolicy {
    fn default() -> Self {
        TruncationPolicy {
            max_terms: 1 << 22,
            target_tail: 1e-12,
            method: TailMethod::Asymptotic,
            max_derivative: 12,
        }
    }
}

impl TruncationPolicy {
    pub fn with_target(self, target_tail: f64) -> Self {
        TruncationPolicy { target_tail, ..self }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.target_tail > 0.0) || self.max_terms == 0 {
            return Err(Error::InvalidSpec(
                "truncation policy needs target_tail > 0 and max_terms ≥ 1".into(),
            ));
        }
        Ok(())
    }
}

/// One expanded term of the sum.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PoleTerm {
    pub pole: Complex64,
    pub coeff: Complex64,
}

/// A kernel sum `Σ w_k (α − t_k)^{-s}` with its error bound and the sum of
/// term magnitudes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KernelSum {
    pub value: Complex64,
    pub error: f64,
    pub scale: f64,
    /// Set when the series converges only in the canonical order.
    pub conditional: bool,
}

impl From<PartialSum> for KernelSum {
    fn from(p: PartialSum) -> Self {
        KernelSum {
            value: p.value,
            error: p.error,
            scale: p.scale,
            conditional: p.conditional,
        }
    }
}

impl KernelSum {
    pub fn with_error(&self) -> ValueWithError {
        ValueWithError::new(self.value, self.error)
    }
}

/// A validated [`KernelSpec`].
#[derive(Debug, Clone, PartialEq)]
pub struct KernelModel {
    spec: KernelSpec,
    order: u32,
    explicit: Vec<PoleTerm>,
    /// Position of each explicit term in the spec's prefix-then-list order.
    sources: Vec<Vec<usize>>,
    family: Option<Family>,
}

impl KernelModel {
    /// Validates `spec`, including `f(0) ≠ 0` under `policy`.
    pub fn new(spec: KernelSpec, policy: &TruncationPolicy) -> Result<Self> {
        let model = Self::build(spec)?;
        let f0 = model.evaluate(Complex64::new(0.0, 0.0), policy)?;
        if !f0.is_certainly_nonzero() {
            return Err(Error::HypothesisViolated(format!(
                "f(0) ≠ 0 is required, but |f(0)| = {:.3e} does not exceed its error bound {:.3e}",
                f0.value.norm(),
                f0.error_bound
            )));
        }
        Ok(model)
    }

    pub fn from_json(text: &str, policy: &TruncationPolicy) -> Result<Self> {
        Self::new(KernelSpec::from_json(text)?, policy)
    }

    /// Validates structure and convergence but not `f(0) ≠ 0`.
    pub fn build(spec: KernelSpec) -> Result<Self> {
        spec.finite_check()?;
        let order = spec.kernel_order;
        if order != 1 && order != 2 {
            return Err(Error::InvalidSpec(format!("kernel_order must be 1 or 2, got {order}")));
        }

        let mut raw: Vec<PoleTerm> = spec.prefix.iter().map(|t| PoleTerm { pole: t.pole, coeff: t.coeff }).collect();
        let mut family = None;
        match &spec.poles {
            PoleSequence::List { values } => {
                let coeffs: Vec<Complex64> = match &spec.coeffs {
                    CoefficientSequence::List { values: c } => {
                        if c.len() != values.len() {
                            return Err(Error::InvalidSpec(format!(
                                "{} poles but {} coefficients",
                                values.len(),
                                c.len()
                            )));
                        }
                        c.clone()
                    }
                    other => {
                        let law = coeff_law(other)?;
                        (1..=values.len() as u64).map(|k| Family::new(UNIT_SHAPE, law).coeff(k, Weights::Coefficients)).collect()
                    }
                };
                raw.extend(values.iter().zip(coeffs).map(|(&pole, coeff)| PoleTerm { pole, coeff }));
            }
            PoleSequence::Power { a, p, b } => {
                if !(*p > 0.0) {
                    return Err(Error::InvalidSpec(format!("power exponent p must be positive, got {p}")));
                }
                if a.norm() == 0.0 {
                    return Err(Error::InvalidSpec("power family needs a ≠ 0".into()));
                }
                let law = coeff_law(&spec.coeffs)?;
                family = Some(Family::new(Shape::Power { a: *a, p: *p, b: *b }, law));
            }
            PoleSequence::Lattice { offset } => {
                let law = coeff_law(&spec.coeffs)?;
                match law {
                    CoeffLaw::Signed { q, .. } if q == 0.0 => {}
                    _ => {
                        return Err(Error::InvalidSpec(
                            "lattice families take constant or alternating coefficients".into(),
                        ))
                    }
                }
                family = Some(Family::new(Shape::Lattice { offset: *offset }, law));
            }
        }

        // merge repeated poles, drop vanishing coefficients
        let mut explicit: Vec<PoleTerm> = Vec::new();
        let mut sources: Vec<Vec<usize>> = Vec::new();
        for (i, term) in raw.into_iter().enumerate() {
            if let Some(j) = explicit.iter().position(|e| e.pole == term.pole) {
                explicit[j].coeff += term.coeff;
                sources[j].push(i);
            } else {
                explicit.push(term);
                sources.push(vec![i]);
            }
        }
        let keep: Vec<bool> = explicit.iter().map(|t| t.coeff != Complex64::new(0.0, 0.0)).collect();
        let mut it = keep.iter();
        explicit.retain(|_| *it.next().unwrap());
        let mut it = keep.iter();
        sources.retain(|_| *it.next().unwrap());

        for t in &explicit {
            if t.pole.norm() == 0.0 {
                return Err(Error::InvalidSpec("pole at the origin: t_k ≠ 0 is required".into()));
            }
        }

        if let Some(f) = &family {
            let (CoeffLaw::Signed { kappa, .. } | CoeffLaw::Geometric { kappa, .. }) = f.law;
            if kappa.norm() == 0.0 {
                family = None;
            }
        }
        if let Some(f) = &family {
            check_family(f, order)?;
            for t in &explicit {
                if f.contains(t.pole) {
                    return Err(Error::InvalidSpec(format!(
                        "prefix pole {} coincides with a family pole",
                        t.pole
                    )));
                }
            }
        }
        if explicit.is_empty() && family.is_none() {
            return Err(Error::InvalidSpec("the spec has no poles with nonzero coefficient".into()));
        }

        Ok(KernelModel {
            spec,
            order,
            explicit,
            sources,
            family,
        })
    }

    pub fn spec(&self) -> &KernelSpec {
        &self.spec
    }

    pub fn kernel_order(&self) -> u32 {
        self.order
    }

    pub fn is_finite(&self) -> bool {
        self.family.is_none()
    }

    /// Explicit terms after merging repeated poles.
    pub fn explicit_terms(&self) -> &[PoleTerm] {
        &self.explicit
    }

    /// Spec positions (prefix first, then list) merged into each explicit term.
    pub fn explicit_sources(&self) -> &[Vec<usize>] {
        &self.sources
    }

    /// `inf{α > 0 : Σ |t_k|^{-α} < ∞}`: `1/p` for power families, `1` for
    /// lattices, `0` for finite lists.
    pub fn convergence_index(&self) -> f64 {
        self.family.as_ref().map_or(0.0, |f| f.convergence_index())
    }

    /// Whether all coefficients are exactly one.
    pub fn has_unit_weights(&self) -> bool {
        let one = Complex64::new(1.0, 0.0);
        self.explicit.iter().all(|t| t.coeff == one)
            && self.family.as_ref().map_or(true, |f| f.law == CoeffLaw::UNIT)
    }

    /// The first `count` terms in canonical order: explicit terms, then the
    /// family.
    pub fn expand_poles(&self, count: usize) -> Result<Vec<PoleTerm>> {
        match &self.family {
            None if count > self.explicit.len() => Err(Error::IndexOverflow {
                requested: count,
                available: self.explicit.len(),
            }),
            None => Ok(self.explicit[..count].to_vec()),
            Some(f) => {
                let mut out: Vec<PoleTerm> = self.explicit.iter().take(count).copied().collect();
                let rest = count - out.len();
                out.extend((1..=rest as u64).map(|idx| PoleTerm {
                    pole: f.pole(idx),
                    coeff: f.coeff(idx, Weights::Coefficients),
                }));
                Ok(out)
            }
        }
    }

    /// `Σ w_k (α − t_k)^{-s}` over all poles.
    pub fn kernel_sum(
        &self,
        alpha: Complex64,
        s: u32,
        weights: Weights,
        policy: &TruncationPolicy,
    ) -> Result<KernelSum> {
        let mut head = NeumaierSum::default();
        let mut error = 0.0;
        let mut scale = 0.0;
        let one = Complex64::new(1.0, 0.0);
        for t in &self.explicit {
            let c = match weights {
                Weights::Coefficients => t.coeff,
                Weights::Unit => one,
            };
            let term = kernel_term(alpha, t.pole, c, s)?;
            head.add(term.value);
            error += term.error;
            scale += term.value.norm();
        }
        let explicit = PartialSum {
            value: head.total(),
            error: error + 2.0 * UNIT_ROUNDOFF * scale,
            scale,
            conditional: false,
        };
        let total = match &self.family {
            Some(f) => explicit.merge(f.sum(alpha, s, weights, policy)?),
            None => explicit,
        };
        Ok(total.into())
    }

    /// `f(z)`.
    pub fn evaluate(&self, z: Complex64, policy: &TruncationPolicy) -> Result<ValueWithError> {
        self.evaluate_derivative(z, 0, policy)
    }

    /// `f^{(d)}(z) = (−1)^d (m)_d Σ c_k (z − t_k)^{-(m+d)}`, term by term.
    pub fn evaluate_derivative(&self, z: Complex64, d: u32, policy: &TruncationPolicy) -> Result<ValueWithError> {
        Ok(self.derivative_sum(z, d, policy)?.with_error())
    }

    /// As [`evaluate_derivative`](Self::evaluate_derivative), keeping the
    /// magnitude scale.
    pub fn derivative_sum(&self, z: Complex64, d: u32, policy: &TruncationPolicy) -> Result<KernelSum> {
        if d > policy.max_derivative {
            return Err(Error::DerivativeOrder {
                requested: d,
                ceiling: policy.max_derivative,
            });
        }
        let factor = derivative_factor(self.order, d);
        let sum = self.kernel_sum(z, self.order + d, Weights::Coefficients, policy)?;
        Ok(KernelSum {
            value: sum.value * factor,
            error: sum.error * factor.abs() + UNIT_ROUNDOFF * (d as f64 + 1.0) * (sum.value * factor).norm(),
            scale: sum.scale * factor.abs(),
            conditional: sum.conditional,
        })
    }

    /// Distinct poles within `radius` of `center`; each has multiplicity
    /// equal to the kernel order.
    pub fn poles_within(&self, center: Complex64, radius: f64) -> Vec<Complex64> {
        let mut out: Vec<Complex64> = self
            .explicit
            .iter()
            .map(|t| t.pole)
            .filter(|t| (t - center).norm() <= radius)
            .collect();
        if let Some(f) = &self.family {
            out.extend(f.poles_within(center, radius));
        }
        out
    }

    /// `(n(r), N(r))`: the number of poles in `|z| ≤ r` with multiplicity,
    /// and `Σ m ln(r / |t|)` over them.
    pub fn counting(&self, r: f64) -> (u64, f64) {
        let m = self.order as f64;
        let poles = self.poles_within(Complex64::new(0.0, 0.0), r);
        let integrated: f64 = poles.iter().map(|t| m * (r / t.norm()).ln()).sum();
        (poles.len() as u64 * self.order as u64, integrated)
    }

    /// Number of distinct poles in `|z| ≤ r`.
    pub fn distinct_poles_within(&self, r: f64) -> u64 {
        self.poles_within(Complex64::new(0.0, 0.0), r).len() as u64
    }

    pub fn min_pole_modulus(&self) -> f64 {
        let explicit = self.explicit.iter().map(|t| t.pole.norm()).fold(f64::INFINITY, f64::min);
        let family = self.family.as_ref().map_or(f64::INFINITY, |f| f.min_modulus());
        explicit.min(family)
    }

    /// Modulus of the `k`-th pole in order of increasing modulus, among the
    /// canonical first terms; used for default radii.
    pub fn pole_modulus_rank(&self, k: usize) -> f64 {
        let terms = match &self.family {
            Some(_) => self.expand_poles(self.explicit.len() + 4 * k + 8).unwrap_or_default(),
            None => self.explicit.clone(),
        };
        let mut moduli: Vec<f64> = terms.iter().map(|t| t.pole.norm()).collect();
        moduli.sort_by(f64::total_cmp);
        let idx = k.saturating_sub(1).min(moduli.len().saturating_sub(1));
        moduli.get(idx).copied().unwrap_or(1.0)
    }
}

/// The poles of an infinite sequence as a family with unit weights, for
/// sums over zero or pole sets outside a kernel model.
pub(crate) fn unit_family(seq: &PoleSequence) -> Result<Family> {
    let shape = match *seq {
        PoleSequence::List { .. } => return Err(Error::InvalidSpec("expected an infinite sequence".into())),
        PoleSequence::Power { a, p, b } => {
            if !(p > 0.0) || a.norm() == 0.0 {
                return Err(Error::InvalidSpec("power family needs p > 0 and a ≠ 0".into()));
            }
            Shape::Power { a, p, b }
        }
        PoleSequence::Lattice { offset } => Shape::Lattice { offset },
    };
    let f = Family::new(shape, CoeffLaw::UNIT);
    if let Shape::Lattice { offset } = shape {
        if offset.im == 0.0 && offset.re == offset.re.round() {
            return Err(Error::InvalidSpec("lattice contains the origin".into()));
        }
    }
    Ok(f)
}

const UNIT_SHAPE: Shape = Shape::Power {
    a: Complex64::new(1.0, 0.0),
    p: 1.0,
    b: Complex64::new(0.0, 0.0),
};

fn coeff_law(coeffs: &CoefficientSequence) -> Result<CoeffLaw> {
    Ok(match coeffs {
        CoefficientSequence::List { .. } => {
            return Err(Error::InvalidSpec("list coefficients require list poles".into()))
        }
        CoefficientSequence::Constant { value } => CoeffLaw::Signed {
            kappa: *value,
            alternating: false,
            q: 0.0,
        },
        CoefficientSequence::Alternating { value } => CoeffLaw::Signed {
            kappa: *value,
            alternating: true,
            q: 0.0,
        },
        CoefficientSequence::Decaying { value, sigma, q } => {
            if *q < 0.0 {
                return Err(Error::InvalidSpec(format!("decay exponent q must be ≥ 0, got {q}")));
            }
            let r = sigma.norm();
            if r > 1.0 {
                return Err(Error::InvalidSpec(format!("|sigma| must be ≤ 1, got {r}")));
            }
            if *sigma == Complex64::new(1.0, 0.0) || *sigma == Complex64::new(-1.0, 0.0) {
                CoeffLaw::Signed {
                    kappa: *value,
                    alternating: sigma.re < 0.0,
                    q: *q,
                }
            } else if r == 0.0 {
                return Err(Error::InvalidSpec("sigma = 0 makes every coefficient vanish".into()));
            } else {
                CoeffLaw::Geometric {
                    kappa: *value,
                    sigma: *sigma,
                    q: *q,
                }
            }
        }
    })
}

fn check_family(f: &Family, order: u32) -> Result<()> {
    match f.shape {
        Shape::Power { a, p, b } => {
            let absolute = match f.law {
                CoeffLaw::Signed { q, .. } => p * order as f64 + q > 1.0,
                CoeffLaw::Geometric { sigma, q, .. } => sigma.norm() < 1.0 || p * order as f64 + q > 1.0,
            };
            if !absolute {
                return Err(Error::InvalidSpec(format!(
                    "Σ |c_k| / |t_k|^{order} diverges for this family"
                )));
            }
            // zero poles can only occur while |a| k^p ≤ |b|
            let tol = |t: Complex64, k: f64| 4.0 * f64::EPSILON * (a.norm() * k.powf(p) + b.norm()).max(t.norm());
            let mut idx = 1u64;
            while a.norm() * (idx as f64).powf(p) <= 2.0 * b.norm() + 1.0 {
                let t = f.pole(idx);
                if t.norm() <= tol(t, idx as f64) {
                    return Err(Error::InvalidSpec(format!("family pole t_{idx} is zero: t_k ≠ 0 is required")));
                }
                idx += 1;
            }
        }
        Shape::Lattice { offset } => {
            if order != 2 {
                return Err(Error::InvalidSpec(
                    "Σ |c_k| / |t_k| diverges on a lattice: use kernel_order 2".into(),
                ));
            }
            if offset.im == 0.0 && offset.re == offset.re.round() {
                return Err(Error::InvalidSpec(
                    "lattice with integer offset contains the origin: t_k ≠ 0 is required".into(),
                ));
            }
        }
    }
    Ok(())
}

/// `(−1)^d (m)_d` with `(m)_d` the rising factorial.
fn derivative_factor(order: u32, d: u32) -> f64 {
    let rising: f64 = (0..d).map(|i| (order + i) as f64).product();
    if d % 2 == 0 {
        rising
    } else {
        -rising
    }
}
