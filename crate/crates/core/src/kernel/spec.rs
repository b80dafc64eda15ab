use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Ordered poles `t_k`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum PoleSequence {
    /// Explicit finite list.
    List { values: Vec<Complex64> },
    /// `t_k = a k^p + b`, `k = 1, 2, …`.
    Power { a: Complex64, p: f64, b: Complex64 },
    /// `n + offset` over `n ∈ ℤ`, enumerated `0, 1, −1, 2, −2, …`.
    Lattice { offset: Complex64 },
}

/// Coefficients `c_k`. For lattices the index is `|n|`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum CoefficientSequence {
    List { values: Vec<Complex64> },
    Constant { value: Complex64 },
    /// `κ (−1)^k`.
    Alternating { value: Complex64 },
    /// `κ σ^k k^{-q}`.
    Decaying { value: Complex64, sigma: Complex64, q: f64 },
}

/// An extra explicit term `coeff / (z − pole)^m` placed before the family.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PrefixTerm {
    pub pole: Complex64,
    pub coeff: Complex64,
}

/// `f(z) = Σ c_k / (z − t_k)^m`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct KernelSpec {
    pub kernel_order: u32,
    pub poles: PoleSequence,
    pub coeffs: CoefficientSequence,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub prefix: Vec<PrefixTerm>,
}

impl KernelSpec {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::InvalidSpec(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("spec serializes")
    }

    /// Finite poles with explicit coefficients, in order.
    pub fn explicit(order: u32, terms: &[(Complex64, Complex64)]) -> Self {
        KernelSpec {
            kernel_order: order,
            poles: PoleSequence::List {
                values: terms.iter().map(|t| t.0).collect(),
            },
            coeffs: CoefficientSequence::List {
                values: terms.iter().map(|t| t.1).collect(),
            },
            prefix: Vec::new(),
        }
    }

    /// Poles `t_k = a k^p + b` with constant coefficient `value`.
    pub fn power(order: u32, a: f64, p: f64, b: f64, coeffs: CoefficientSequence) -> Self {
        KernelSpec {
            kernel_order: order,
            poles: PoleSequence::Power {
                a: Complex64::new(a, 0.0),
                p,
                b: Complex64::new(b, 0.0),
            },
            coeffs,
            prefix: Vec::new(),
        }
    }

    pub fn unit_constant() -> CoefficientSequence {
        CoefficientSequence::Constant {
            value: Complex64::new(1.0, 0.0),
        }
    }

    pub(crate) fn finite_check(&self) -> Result<()> {
        let bad = |what: &str| Err(Error::InvalidSpec(format!("{what} must be finite")));
        let finite = |z: &Complex64| z.re.is_finite() && z.im.is_finite();
        match &self.poles {
            PoleSequence::List { values } => {
                if !values.iter().all(finite) {
                    return bad("pole values");
                }
            }
            PoleSequence::Power { a, p, b } => {
                if !(finite(a) && finite(b) && p.is_finite()) {
                    return bad("power family parameters");
                }
            }
            PoleSequence::Lattice { offset } => {
                if !finite(offset) {
                    return bad("lattice offset");
                }
            }
        }
        let coeff_ok = match &self.coeffs {
            CoefficientSequence::List { values } => values.iter().all(finite),
            CoefficientSequence::Constant { value } | CoefficientSequence::Alternating { value } => finite(value),
            CoefficientSequence::Decaying { value, sigma, q } => finite(value) && finite(sigma) && q.is_finite(),
        };
        if !coeff_ok {
            return bad("coefficients");
        }
        if !self.prefix.iter().all(|t| finite(&t.pole) && finite(&t.coeff)) {
            return bad("prefix terms");
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_power_family() {
        let text = r#"{"kernel_order": 1,
            "poles": {"kind": "power", "a": [1, 0], "p": 2, "b": [0, 0]},
            "coeffs": {"kind": "constant", "value": [1, 0]}}"#;
        let spec = KernelSpec::from_json(text).unwrap();
        assert_eq!(spec.kernel_order, 1);
        assert!(matches!(spec.poles, PoleSequence::Power { p, .. } if p == 2.0));
        let again = KernelSpec::from_json(&spec.to_json()).unwrap();
        assert_eq!(again, spec);
    }

    #[test]
    fn rejects_unknown_fields() {
        let text = r#"{"kernel_order": 1,
            "poles": {"kind": "power", "a": [1, 0], "p": 2, "b": [0, 0], "c": 3},
            "coeffs": {"kind": "constant", "value": [1, 0]}}"#;
        assert!(matches!(KernelSpec::from_json(text), Err(Error::InvalidSpec(_))));
        let text = r#"{"kernel_order": 1, "extra": true,
            "poles": {"kind": "list", "values": [[1, 0]]},
            "coeffs": {"kind": "constant", "value": [1, 0]}}"#;
        assert!(KernelSpec::from_json(text).is_err());
    }
}
