use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::contour::{count_zeros_minus_poles, ContourSpec};
use super::Meromorphic;
use crate::error::{Error, Result};
use crate::value::UNIT_ROUNDOFF;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LocatedZero {
    pub location: Complex64,
    pub multiplicity: u32,
    /// Size of the last Newton step.
    pub refinement_error: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ZeroList {
    /// Sorted by `(re, im)`.
    pub zeros: Vec<LocatedZero>,
    /// Set when the multiplicities add up to the argument-principle count
    /// on this circle.
    pub exhaustive_in: Option<ContourSpec>,
    /// Zeros (with multiplicity) the circle count says lie inside.
    pub expected: i64,
    /// Cells in which no zero could be refined.
    pub unresolved: usize,
}

impl ZeroList {
    pub fn total_multiplicity(&self) -> i64 {
        self.zeros.iter().map(|z| z.multiplicity as i64).sum()
    }
}

/// Tuning of the quadrisection search, as fractions of the disk radius.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ZeroSearch {
    /// Cells holding several zeros are refined as one multiple zero once
    /// their diameter is below this.
    pub cluster_diameter: f64,
    /// Cells below this diameter are given up as unresolved.
    pub floor_diameter: f64,
    /// Accepted residual `|f(s)|` relative to the summand scale.
    pub residual: f64,
}

impl Default for ZeroSearch {
    fn default() -> Self {
        ZeroSearch {
            cluster_diameter: 1e-3,
            floor_diameter: 1e-10,
            residual: 1e-12,
        }
    }
}

const SIDE_SAMPLES: usize = 16;
const MAX_SIDE_DEPTH: u32 = 48;
const SPLITS: [f64; 3] = [0.5037, 0.4961, 0.5113];
const NEWTON_STEPS: usize = 80;

#[derive(Debug, Clone, Copy)]
struct Cell {
    lo: Complex64,
    hi: Complex64,
    count: u32,
}

impl Cell {
    fn diameter(&self) -> f64 {
        (self.hi - self.lo).norm()
    }

    fn center(&self) -> Complex64 {
        (self.lo + self.hi) * 0.5
    }

    fn contains(&self, z: Complex64) -> bool {
        z.re >= self.lo.re && z.re <= self.hi.re && z.im >= self.lo.im && z.im <= self.hi.im
    }

    fn distance_from_origin(&self) -> f64 {
        let dx = self.lo.re.max(-self.hi.re).max(0.0);
        let dy = self.lo.im.max(-self.hi.im).max(0.0);
        dx.hypot(dy)
    }
}

enum Outcome {
    Zero(LocatedZero),
    Split(Vec<Cell>),
    Unresolved,
}

/// All zeros of `f` in `|z| ≤ radius` with default tuning.
pub fn find_zeros_in_disk<F: Meromorphic + ?Sized>(f: &F, radius: f64) -> Result<ZeroList> {
    find_zeros_with(f, radius, &ZeroSearch::default())
}

/// Counts zeros on the (possibly jittered) circle, then quadrisects an
/// enclosing square, counting each cell by its boundary winding plus the
/// poles it holds, and refines single-zero cells by Newton's method.
pub fn find_zeros_with<F: Meromorphic + ?Sized>(f: &F, radius: f64, search: &ZeroSearch) -> Result<ZeroList> {
    let origin = Complex64::new(0.0, 0.0);
    let circle = count_zeros_minus_poles(
        f,
        ContourSpec {
            center: origin,
            radius,
            quadrature_points: 64,
        },
    )?;
    let r = circle.contour.radius;
    let pole_weight: i64 = f.poles_within(origin, r).iter().map(|p| p.1 as i64).sum();
    let expected = circle.count + pole_weight;
    if expected < 0 {
        return Err(Error::QuadratureNotConverged {
            points: circle.contour.quadrature_points,
            detail: format!("negative zero count {expected} on radius {r}"),
        });
    }

    let half = r * 1.0031;
    let shift = Complex64::new(7.3e-4 * r, 4.1e-4 * r);
    let lo = shift - Complex64::new(half, half);
    let hi = shift + Complex64::new(half, half);
    let cluster = search.cluster_diameter * r;
    let floor = search.floor_diameter * r;

    let top = cell_count(f, lo, hi)?;
    let mut frontier = if top > 0 {
        vec![Cell { lo, hi, count: top as u32 }]
    } else {
        Vec::new()
    };
    let mut zeros = Vec::new();
    let mut unresolved = 0usize;
    while !frontier.is_empty() {
        let outcomes: Vec<Outcome> = frontier
            .par_iter()
            .map(|cell| process(f, cell, cluster, floor, search.residual))
            .collect::<Result<_>>()?;
        frontier = Vec::new();
        for o in outcomes {
            match o {
                Outcome::Zero(z) => zeros.push(z),
                Outcome::Split(children) => frontier.extend(children.into_iter().filter(|c| c.distance_from_origin() <= r)),
                Outcome::Unresolved => unresolved += 1,
            }
        }
    }

    zeros.retain(|z: &LocatedZero| z.location.norm() <= r);
    zeros.sort_by(|a, b| {
        a.location
            .re
            .total_cmp(&b.location.re)
            .then(a.location.im.total_cmp(&b.location.im))
    });
    let found: i64 = zeros.iter().map(|z| z.multiplicity as i64).sum();
    let exhaustive = unresolved == 0 && found == expected;
    Ok(ZeroList {
        zeros,
        exhaustive_in: exhaustive.then_some(circle.contour),
        expected,
        unresolved,
    })
}

fn process<F: Meromorphic + ?Sized>(f: &F, cell: &Cell, cluster: f64, floor: f64, residual: f64) -> Result<Outcome> {
    let diam = cell.diameter();
    if cell.count == 1 || diam <= cluster {
        if let Some(z) = newton(f, cell, residual) {
            return Ok(Outcome::Zero(z));
        }
    }
    if diam <= floor {
        return Ok(Outcome::Unresolved);
    }
    for &frac in &SPLITS {
        if let Ok(children) = split(f, cell, frac) {
            return Ok(Outcome::Split(children.into_iter().filter(|c| c.count > 0).collect()));
        }
    }
    Ok(Outcome::Unresolved)
}

fn split<F: Meromorphic + ?Sized>(f: &F, cell: &Cell, frac: f64) -> Result<Vec<Cell>> {
    let mid = Complex64::new(
        cell.lo.re + frac * (cell.hi.re - cell.lo.re),
        cell.lo.im + (1.0 - frac) * (cell.hi.im - cell.lo.im),
    );
    let boxes = [
        (cell.lo, mid),
        (Complex64::new(mid.re, cell.lo.im), Complex64::new(cell.hi.re, mid.im)),
        (Complex64::new(cell.lo.re, mid.im), Complex64::new(mid.re, cell.hi.im)),
        (mid, cell.hi),
    ];
    let mut children = Vec::with_capacity(4);
    let mut total = 0i64;
    for (lo, hi) in boxes {
        let count = cell_count(f, lo, hi)?;
        if count < 0 {
            return Err(Error::QuadratureNotConverged {
                points: 0,
                detail: "negative cell count".into(),
            });
        }
        total += count;
        children.push(Cell {
            lo,
            hi,
            count: count as u32,
        });
    }
    if total != cell.count as i64 {
        return Err(Error::QuadratureNotConverged {
            points: 0,
            detail: format!("children hold {total} zeros, parent {}", cell.count),
        });
    }
    Ok(children)
}

/// Zeros inside the rectangle: boundary winding plus the multiplicity of
/// enclosed poles.
fn cell_count<F: Meromorphic + ?Sized>(f: &F, lo: Complex64, hi: Complex64) -> Result<i64> {
    let corners = [
        lo,
        Complex64::new(hi.re, lo.im),
        hi,
        Complex64::new(lo.re, hi.im),
    ];
    let mut total = 0.0;
    for i in 0..4 {
        total += side_argument(f, corners[i], corners[(i + 1) % 4])?;
    }
    let raw = total / (2.0 * std::f64::consts::PI);
    let winding = raw.round();
    if (raw - winding).abs() > 0.1 {
        return Err(Error::QuadratureNotConverged {
            points: 0,
            detail: format!("cell winding {raw:.4} is not near an integer"),
        });
    }
    let center = (lo + hi) * 0.5;
    let reach = (hi - lo).norm() * 0.5;
    let inside: i64 = f
        .poles_within(center, reach)
        .into_iter()
        .filter(|(t, _)| t.re > lo.re && t.re < hi.re && t.im > lo.im && t.im < hi.im)
        .map(|(_, m)| m as i64)
        .sum();
    Ok(winding as i64 + inside)
}

fn nonzero_value<F: Meromorphic + ?Sized>(f: &F, z: Complex64) -> Result<Complex64> {
    let s = f.sample(z)?;
    if s.f.norm() <= s.f_error {
        return Err(Error::Collision { z });
    }
    Ok(s.f)
}

/// Change of `arg f` along the segment from `a` to `b`.
fn side_argument<F: Meromorphic + ?Sized>(f: &F, a: Complex64, b: Complex64) -> Result<f64> {
    let mut total = 0.0;
    let mut za = a;
    let mut fa = nonzero_value(f, a)?;
    for i in 1..=SIDE_SAMPLES {
        let zb = a + (b - a) * (i as f64 / SIDE_SAMPLES as f64);
        let fb = nonzero_value(f, zb)?;
        total += segment_argument(f, za, fa, zb, fb, 0)?;
        za = zb;
        fa = fb;
    }
    Ok(total)
}

fn segment_argument<F: Meromorphic + ?Sized>(
    f: &F,
    za: Complex64,
    fa: Complex64,
    zb: Complex64,
    fb: Complex64,
    depth: u32,
) -> Result<f64> {
    let d = (fb / fa).arg();
    let ratio = fb.norm() / fa.norm();
    let smooth = d.abs() <= std::f64::consts::FRAC_PI_4 && (0.25..=4.0).contains(&ratio);
    if smooth {
        return Ok(d);
    }
    if depth >= MAX_SIDE_DEPTH {
        if d.abs() <= std::f64::consts::FRAC_PI_2 {
            return Ok(d);
        }
        return Err(Error::Collision { z: (za + zb) * 0.5 });
    }
    let zm = (za + zb) * 0.5;
    let fm = nonzero_value(f, zm)?;
    Ok(segment_argument(f, za, fa, zm, fm, depth + 1)? + segment_argument(f, zm, fm, zb, fb, depth + 1)?)
}

/// Newton's method with multiplicity from the cell center; the iterate must
/// stay in the cell.
fn newton<F: Meromorphic + ?Sized>(f: &F, cell: &Cell, residual: f64) -> Option<LocatedZero> {
    let mult = cell.count as f64;
    let mut z = cell.center();
    let mut last_step = f64::INFINITY;
    for _ in 0..NEWTON_STEPS {
        let s = f.sample(z).ok()?;
        if s.f.norm() <= s.f_error {
            last_step = last_step.min(s.f_error / s.df.norm().max(f64::MIN_POSITIVE) * mult);
            break;
        }
        if s.df.norm() == 0.0 {
            return None;
        }
        let step = s.f / s.df * mult;
        z -= step;
        if !cell.contains(z) {
            return None;
        }
        let prev = last_step;
        last_step = step.norm();
        let tiny = 4.0 * UNIT_ROUNDOFF * z.norm().max(f64::MIN_POSITIVE);
        if last_step <= tiny || (last_step <= 1e-9 * cell.diameter() && last_step >= 0.5 * prev) {
            break;
        }
    }
    if !cell.contains(z) || !last_step.is_finite() {
        return None;
    }
    let s = f.sample(z).ok()?;
    if s.f.norm() > residual * s.scale.max(s.f_error) && s.f.norm() > s.f_error {
        return None;
    }
    Some(LocatedZero {
        location: z,
        multiplicity: cell.count,
        refinement_error: last_step,
    })
}

/// `Σ mult · s^{-(N+1)}` over located zeros.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DirectSum {
    pub value: Complex64,
    /// Caller-supplied bound for zeros outside the search disk.
    pub tail_bound: Option<f64>,
    /// Set unless the list is exhaustive and a tail bound was supplied.
    pub incomplete: bool,
}

pub fn direct_zero_power_sum(zeros: &ZeroList, n: u32, tail_bound: Option<f64>) -> Result<DirectSum> {
    let mut acc = crate::kernel::NeumaierSum::default();
    for z in &zeros.zeros {
        if z.location.norm() == 0.0 {
            return Err(Error::ZeroAtOrigin);
        }
        acc.add(z.location.inv().powu(n + 1) * z.multiplicity as f64);
    }
    Ok(DirectSum {
        value: acc.total(),
        tail_bound,
        incomplete: zeros.exhaustive_in.is_none() || tail_bound.is_none(),
    })
}
