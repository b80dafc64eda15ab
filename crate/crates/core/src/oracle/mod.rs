//! Independent checks by the argument principle: zero counts on circles,
//! zero location by quadrisection, direct power sums over located zeros,
//! and the partial-fraction form of `F′/F`.

mod contour;
mod corollary;
mod zeros;

use num_complex::Complex64;

pub use contour::{count_zeros_minus_poles, count_on_circle, ContourSpec, CountResult, JITTER};
pub use corollary::{corollary1_logderiv, weierstrass_factor, PointSet};
pub use zeros::{direct_zero_power_sum, find_zeros_in_disk, DirectSum, LocatedZero, ZeroList, ZeroSearch};

use crate::error::Result;
use crate::kernel::{KernelModel, TruncationPolicy};
use crate::value::UNIT_ROUNDOFF;

/// `f` and `f′` at a point with absolute error bounds, and the magnitude of
/// the parts `f` was summed from.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Sample {
    pub f: Complex64,
    pub df: Complex64,
    pub f_error: f64,
    pub df_error: f64,
    pub scale: f64,
}

/// A function the oracle can interrogate.
pub trait Meromorphic: Sync {
    fn sample(&self, z: Complex64) -> Result<Sample>;

    /// Distinct poles within `radius` of `center`, with multiplicity.
    fn poles_within(&self, center: Complex64, radius: f64) -> Vec<(Complex64, u32)>;

    /// `f(z)` alone, with its error bound.
    fn value(&self, z: Complex64) -> Result<(Complex64, f64)> {
        self.sample(z).map(|s| (s.f, s.f_error))
    }
}

/// A kernel sum under a fixed truncation policy.
#[derive(Debug, Clone, Copy)]
pub struct KernelFunction<'a> {
    pub model: &'a KernelModel,
    pub policy: TruncationPolicy,
}

impl<'a> KernelFunction<'a> {
    pub fn new(model: &'a KernelModel, policy: TruncationPolicy) -> Self {
        KernelFunction { model, policy }
    }
}

impl Meromorphic for KernelFunction<'_> {
    fn sample(&self, z: Complex64) -> Result<Sample> {
        let f = self.model.derivative_sum(z, 0, &self.policy)?;
        let df = self.model.derivative_sum(z, 1, &self.policy)?;
        Ok(Sample {
            f: f.value,
            df: df.value,
            f_error: f.error,
            df_error: df.error,
            scale: f.scale,
        })
    }

    fn value(&self, z: Complex64) -> Result<(Complex64, f64)> {
        let f = self.model.derivative_sum(z, 0, &self.policy)?;
        Ok((f.value, f.error))
    }

    fn poles_within(&self, center: Complex64, radius: f64) -> Vec<(Complex64, u32)> {
        let m = self.model.kernel_order();
        self.model.poles_within(center, radius).into_iter().map(|t| (t, m)).collect()
    }
}

/// `sin(πz)/(πz)`: entire, zeros at the nonzero integers.
#[derive(Debug, Clone, Copy, Default)]
pub struct SincFixture;

impl Meromorphic for SincFixture {
    fn sample(&self, z: Complex64) -> Result<Sample> {
        let pi = std::f64::consts::PI;
        let w = z * pi;
        let (f, df) = if w.norm() < 1e-4 {
            let w2 = w * w;
            (
                Complex64::new(1.0, 0.0) - w2 / 6.0 + w2 * w2 / 120.0,
                -z * (pi * pi / 3.0) + z * w2 * (pi * pi / 30.0),
            )
        } else {
            let (s, c) = (w.sin(), w.cos());
            (s / w, (w * c - s) / (w * z))
        };
        let scale = f.norm().max(1.0) * (1.0 + w.im.abs().exp() / w.norm().max(1.0));
        Ok(Sample {
            f,
            df,
            f_error: 8.0 * UNIT_ROUNDOFF * scale,
            df_error: 8.0 * UNIT_ROUNDOFF * scale * pi,
            scale,
        })
    }

    fn poles_within(&self, _center: Complex64, _radius: f64) -> Vec<(Complex64, u32)> {
        Vec::new()
    }
}

/// Any closure pair `z ↦ (f, f′)` with a finite pole list; used for test
/// fixtures such as polynomials.
pub struct ClosureFunction<F> {
    pub eval: F,
    pub poles: Vec<(Complex64, u32)>,
}

impl<F> Meromorphic for ClosureFunction<F>
where
    F: Fn(Complex64) -> (Complex64, Complex64) + Sync,
{
    fn sample(&self, z: Complex64) -> Result<Sample> {
        let (f, df) = (self.eval)(z);
        let scale = f.norm().max(f64::MIN_POSITIVE);
        Ok(Sample {
            f,
            df,
            f_error: 16.0 * UNIT_ROUNDOFF * scale,
            df_error: 16.0 * UNIT_ROUNDOFF * df.norm(),
            scale,
        })
    }

    fn poles_within(&self, center: Complex64, radius: f64) -> Vec<(Complex64, u32)> {
        self.poles
            .iter()
            .copied()
            .filter(|(t, _)| (t - center).norm() <= radius)
            .collect()
    }
}
