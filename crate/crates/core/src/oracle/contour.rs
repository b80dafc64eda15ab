use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::Meromorphic;
use crate::error::{Error, Result};

/// Radius factors tried in turn when a circle passes too close to a zero or
/// pole. They avoid round values on purpose: zeros and poles of the golden
/// fixtures sit near round radii.
pub const JITTER: [f64; 3] = [1.00731, 0.99083, 1.00613];

const START_POINTS: usize = 64;
const MAX_POINTS: usize = 1 << 16;

/// A circle and the number of trapezoid nodes used on it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ContourSpec {
    pub center: Complex64,
    pub radius: f64,
    pub quadrature_points: usize,
}

/// Zeros minus poles inside a circle.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CountResult {
    pub count: i64,
    /// `|raw − count|` for the accepted quadrature.
    pub error_margin: f64,
    /// The circle actually used, after any jitter.
    pub contour: ContourSpec,
}

/// `(1/2πi) ∮ f′/f dz` on the circle by the trapezoid rule, doubling the
/// nodes (and reusing the old ones) until the result is within 0.25 of an
/// integer and stable; perturbs the radius when the circle runs into a zero
/// or pole.
pub fn count_zeros_minus_poles<F: Meromorphic + ?Sized>(f: &F, contour: ContourSpec) -> Result<CountResult> {
    let mut last = None;
    for factor in std::iter::once(1.0).chain(JITTER) {
        let circle = ContourSpec {
            radius: contour.radius * factor,
            ..contour
        };
        match count_on_circle(f, circle) {
            Ok(r) => return Ok(r),
            Err(e @ (Error::QuadratureNotConverged { .. } | Error::PoleProximity { .. } | Error::Collision { .. })) => {
                last = Some(e)
            }
            Err(e) => return Err(e),
        }
    }
    Err(last.expect("at least one attempt"))
}

/// As [`count_zeros_minus_poles`] on exactly the given circle.
pub fn count_on_circle<F: Meromorphic + ?Sized>(f: &F, contour: ContourSpec) -> Result<CountResult> {
    if !(contour.radius > 0.0) {
        return Err(Error::InvalidSpec(format!("contour radius must be positive, got {}", contour.radius)));
    }
    let node = |k: usize, n: usize| {
        let theta = 2.0 * std::f64::consts::PI * k as f64 / n as f64;
        Complex64::from_polar(contour.radius, theta)
    };
    let term = |w: Complex64| -> Result<Complex64> {
        let s = f.sample(contour.center + w)?;
        if s.f.norm() <= s.f_error {
            return Err(Error::Collision { z: contour.center + w });
        }
        Ok(s.df / s.f * w)
    };

    let start = contour.quadrature_points.clamp(START_POINTS, MAX_POINTS).next_power_of_two();
    let mut n = start;
    let mut sum = Complex64::new(0.0, 0.0);
    for k in 0..n {
        sum += term(node(k, n))?;
    }
    let mut prev = sum / n as f64;
    loop {
        let next = 2 * n;
        if next > MAX_POINTS {
            return Err(Error::QuadratureNotConverged {
                points: n,
                detail: format!("winding estimate {:.6} on radius {}", prev.re, contour.radius),
            });
        }
        for k in 0..n {
            sum += term(node(2 * k + 1, next))?;
        }
        n = next;
        let raw = sum / n as f64;
        let rounded = raw.re.round();
        let margin = (raw.re - rounded).abs().max(raw.im.abs());
        if margin < 0.25 && (raw - prev).norm() < 0.05 && prev.re.round() == rounded {
            return Ok(CountResult {
                count: rounded as i64,
                error_margin: margin,
                contour: ContourSpec {
                    quadrature_points: n,
                    ..contour
                },
            });
        }
        prev = raw;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::{KernelModel, KernelSpec, TruncationPolicy};
    use crate::oracle::{KernelFunction, SincFixture};

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn circle(center: Complex64, radius: f64) -> ContourSpec {
        ContourSpec {
            center,
            radius,
            quadrature_points: 64,
        }
    }

    #[test]
    fn single_pole_counts_minus_one() {
        let pol = TruncationPolicy::default();
        let m = KernelModel::new(KernelSpec::explicit(1, &[(Complex64::new(3.0, 1.0), c(1.0))]), &pol).unwrap();
        let f = KernelFunction::new(&m, pol);
        let r = count_zeros_minus_poles(&f, circle(Complex64::new(3.0, 1.0), 0.5)).unwrap();
        assert_eq!(r.count, -1);
    }

    #[test]
    fn two_poles_one_zero() {
        let pol = TruncationPolicy::default();
        let m = KernelModel::new(KernelSpec::explicit(1, &[(c(1.0), c(1.0)), (c(2.0), c(1.0))]), &pol).unwrap();
        let f = KernelFunction::new(&m, pol);
        let r = count_zeros_minus_poles(&f, circle(c(0.0), 4.0)).unwrap();
        assert_eq!(r.count, -1);
        assert!(r.error_margin < 0.25);
    }

    #[test]
    fn sinc_zeros_inside() {
        let r = count_zeros_minus_poles(&SincFixture, circle(c(0.0), 2.5)).unwrap();
        assert_eq!(r.count, 4);
    }

    #[test]
    fn circle_through_a_pole_is_jittered() {
        let pol = TruncationPolicy::default();
        let m = KernelModel::new(KernelSpec::explicit(1, &[(c(1.0), c(1.0)), (c(2.0), c(1.0))]), &pol).unwrap();
        let f = KernelFunction::new(&m, pol);
        let r = count_zeros_minus_poles(&f, circle(c(0.0), 2.0)).unwrap();
        assert_ne!(r.contour.radius, 2.0);
        assert_eq!(r.count, if r.contour.radius > 2.0 { -1 } else { 0 });
    }
}
