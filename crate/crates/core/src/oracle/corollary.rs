use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::kernel::{unit_family, Family, NeumaierSum, PoleSequence};
use crate::value::{ValueWithError, UNIT_ROUNDOFF};

/// A set of points with multiplicity: finitely many explicit points plus
/// infinite sequences, each point of a sequence counted once.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct PointSet {
    pub points: Vec<(Complex64, u32)>,
    pub sequences: Vec<PoleSequence>,
}

impl PointSet {
    pub fn finite(points: Vec<(Complex64, u32)>) -> Self {
        PointSet {
            points,
            sequences: Vec::new(),
        }
    }
}

/// `E(z, p) = (1 − z) exp(z + z²/2 + ⋯ + z^p/p)`.
pub fn weierstrass_factor(z: Complex64, p: u32) -> Complex64 {
    let exponent: Complex64 = (1..=p).map(|j| z.powu(j) / j as f64).sum();
    (Complex64::new(1.0, 0.0) - z) * exponent.exp()
}

/// `F′/F = P′(z) + z^p Σ 1/(s^p (z − s)) − z^p Σ 1/(t^p (z − t))` for
/// `F = e^P Π E(z/s, p) / Π E(z/t, p)`.
///
/// `p_prime` holds the coefficients of `P′`, constant term first. Infinite
/// sequences need `p + 1` above their convergence index; their terms beyond
/// a head are summed as `−Σ_{j≥p} z^j Σ_{k>K} t_k^{-(j+1)}`.
pub fn corollary1_logderiv(
    zeros: &PointSet,
    poles: &PointSet,
    p_prime: &[Complex64],
    p: u32,
    z: Complex64,
) -> Result<ValueWithError> {
    let mut poly = Complex64::new(0.0, 0.0);
    for c in p_prime.iter().rev() {
        poly = poly * z + c;
    }
    let poly_scale: f64 = p_prime
        .iter()
        .enumerate()
        .map(|(j, c)| c.norm() * z.norm().powi(j as i32))
        .sum();
    let (s_val, s_err) = set_sum(zeros, p, z)?;
    let (t_val, t_err) = set_sum(poles, p, z)?;
    let value = poly + s_val - t_val;
    let rounding = UNIT_ROUNDOFF * (2.0 * poly_scale + s_val.norm() + t_val.norm() + value.norm());
    Ok(ValueWithError::new(value, s_err + t_err + rounding))
}

/// `z^p Σ m/(s^p (z − s))` over the set.
fn set_sum(set: &PointSet, p: u32, z: Complex64) -> Result<(Complex64, f64)> {
    let zp = z.powu(p);
    let mut acc = NeumaierSum::default();
    let mut err = 0.0;
    let add_point = |s: Complex64, mult: f64, acc: &mut NeumaierSum| -> Result<f64> {
        let d = z - s;
        if d.norm() <= 10.0 * f64::EPSILON * s.norm().max(1.0) {
            return Err(Error::Collision { z });
        }
        if s.norm() == 0.0 {
            return Err(Error::ZeroAtOrigin);
        }
        let term = zp / (s.powu(p) * d) * mult;
        acc.add(term);
        Ok(UNIT_ROUNDOFF * (p as f64 + 4.0) * (1.0 + 4.0 * s.norm() / d.norm()) * term.norm())
    };
    for &(s, mult) in &set.points {
        err += add_point(s, mult as f64, &mut acc)?;
    }
    for seq in &set.sequences {
        let family = unit_family(seq)?;
        let head = family.head_clearing(z.norm());
        for s in family.head_poles(head) {
            err += add_point(s, 1.0, &mut acc)?;
        }
        let (tail, tail_err) = sequence_tail(&family, head, p, z)?;
        acc.add(tail);
        err += tail_err;
    }
    Ok((acc.total(), err))
}

/// `−Σ_{j≥p} z^j Σ_{k>K} t_k^{-(j+1)}`; every tail pole has `|t| ≥ 4|z|`,
/// so the terms shrink at least fourfold.
fn sequence_tail(family: &Family, head: u64, p: u32, z: Complex64) -> Result<(Complex64, f64)> {
    let mut acc = Complex64::new(0.0, 0.0);
    let mut err = 0.0;
    let mut zj = z.powu(p);
    let ratio = z.norm() / family.tail_min_modulus(head);
    for j in p..p + 200 {
        let tail = family.power_tail(j + 1, head)?;
        let term = -zj * tail.value;
        acc += term;
        err += zj.norm() * tail.error + UNIT_ROUNDOFF * term.norm();
        // remaining terms: |z|^i Σ|t|^{-(i+1)} ≤ |term-size| (ratio/(1−ratio)) geometrically
        let remaining = zj.norm() * tail.value.norm().max(tail.error) * ratio / (1.0 - ratio);
        if remaining <= UNIT_ROUNDOFF * acc.norm() || zj.norm() == 0.0 {
            err += remaining;
            return Ok((acc, err));
        }
        zj *= z;
    }
    Err(Error::TailNotConvergent {
        bound: f64::INFINITY,
        target: UNIT_ROUNDOFF,
        max_terms: head as usize,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn integers() -> PointSet {
        let pos = PoleSequence::Power { a: c(1.0), p: 1.0, b: c(0.0) };
        let neg = PoleSequence::Power { a: c(-1.0), p: 1.0, b: c(0.0) };
        PointSet {
            points: vec![],
            sequences: vec![pos, neg],
        }
    }

    #[test]
    fn weierstrass_factors() {
        assert_eq!(weierstrass_factor(c(0.3), 0), c(0.7));
        let e = weierstrass_factor(c(0.5), 2);
        assert!((e - c(0.5 * (0.625f64).exp())).norm() < 1e-15);
    }

    #[test]
    fn sinc_log_derivative_at_half() {
        let v = corollary1_logderiv(&integers(), &PointSet::default(), &[], 1, c(0.5)).unwrap();
        assert!((v.value - c(-2.0)).norm() < 1e-12, "{}", v.value);
    }

    #[test]
    fn sinc_log_derivative_off_axis() {
        let z = Complex64::new(0.3, 1.7);
        let v = corollary1_logderiv(&integers(), &PointSet::default(), &[], 1, z).unwrap();
        let want = (z * PI).cos() / (z * PI).sin() * PI - z.inv();
        assert!((v.value - want).norm() < 1e-12 * want.norm(), "{} vs {want}", v.value);
    }

    #[test]
    fn single_pole_without_convergence_factors() {
        let cc = Complex64::new(2.0, -1.0);
        let z = c(0.4);
        let v = corollary1_logderiv(&PointSet::default(), &PointSet::finite(vec![(cc, 1)]), &[], 0, z).unwrap();
        assert!((v.value + (z - cc).inv()).norm() < 1e-15);
    }

    #[test]
    fn collision_is_reported() {
        let r = corollary1_logderiv(&PointSet::finite(vec![(c(1.0), 1)]), &PointSet::default(), &[], 0, c(1.0));
        assert!(matches!(r, Err(Error::Collision { .. })));
    }
}
