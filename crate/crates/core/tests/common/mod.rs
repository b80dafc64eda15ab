//! Helpers shared by the integration tests: polynomial algebra, an
//! independent root solver and random rational kernel sums.
#![allow(dead_code)]

use num_complex::Complex64;
use rand::Rng;

pub fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

/// Polynomials as coefficient vectors, constant term first.
pub fn poly_mul(a: &[Complex64], b: &[Complex64]) -> Vec<Complex64> {
    let mut out = vec![c(0.0); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

pub fn poly_add(a: &[Complex64], b: &[Complex64]) -> Vec<Complex64> {
    let mut out = vec![c(0.0); a.len().max(b.len())];
    for (i, x) in a.iter().enumerate() {
        out[i] += x;
    }
    for (i, y) in b.iter().enumerate() {
        out[i] += y;
    }
    out
}

pub fn poly_deriv(a: &[Complex64]) -> Vec<Complex64> {
    a.iter().enumerate().skip(1).map(|(i, x)| x * i as f64).collect()
}

pub fn poly_eval(a: &[Complex64], z: Complex64) -> Complex64 {
    a.iter().rev().fold(c(0.0), |acc, x| acc * z + x)
}

/// Numerator `P` and denominator `Q` of `Σ c_k / (z − t_k)`.
pub fn rational_parts(poles: &[Complex64], coeffs: &[Complex64]) -> (Vec<Complex64>, Vec<Complex64>) {
    let linear = |t: Complex64| vec![-t, c(1.0)];
    let q = poles.iter().fold(vec![c(1.0)], |acc, &t| poly_mul(&acc, &linear(t)));
    let mut p = vec![c(0.0)];
    for (k, (&_, &ck)) in poles.iter().zip(coeffs).enumerate() {
        let others = poles
            .iter()
            .enumerate()
            .filter(|&(j, _)| j != k)
            .fold(vec![ck], |acc, (_, &t)| poly_mul(&acc, &linear(t)));
        p = poly_add(&p, &others);
    }
    (p, q)
}

/// All roots by the Aberth–Ehrlich iteration.
pub fn roots(poly: &[Complex64]) -> Vec<Complex64> {
    let mut a = poly.to_vec();
    while a.len() > 1 && a.last().unwrap().norm() == 0.0 {
        a.pop();
    }
    let n = a.len() - 1;
    if n == 0 {
        return Vec::new();
    }
    let lead = a[n];
    let bound = 1.0 + a[..n].iter().map(|x| (x / lead).norm()).fold(0.0, f64::max);
    let d = poly_deriv(&a);
    let mut z: Vec<Complex64> = (0..n)
        .map(|k| Complex64::from_polar(0.5 * bound, 0.4 + 2.0 * std::f64::consts::PI * k as f64 / n as f64))
        .collect();
    for _ in 0..500 {
        let mut moved = 0.0f64;
        for i in 0..n {
            let ratio = poly_eval(&a, z[i]) / poly_eval(&d, z[i]);
            let repulsion: Complex64 = (0..n).filter(|&j| j != i).map(|j| (z[i] - z[j]).inv()).sum();
            let step = ratio / (c(1.0) - ratio * repulsion);
            z[i] -= step;
            moved = moved.max(step.norm() / z[i].norm().max(1e-300));
        }
        if moved < 1e-15 {
            break;
        }
    }
    z
}

/// Newton polish of a root of `g` given `g` and `g′`.
pub fn polish(mut z: Complex64, g: impl Fn(Complex64) -> (Complex64, Complex64)) -> Complex64 {
    for _ in 0..8 {
        let (v, dv) = g(z);
        if dv.norm() == 0.0 {
            break;
        }
        let step = v / dv;
        z -= step;
        if step.norm() <= 1e-17 * z.norm() {
            break;
        }
    }
    z
}

/// `Σ c / (z − t)^s` with its order.
pub fn kernel(poles: &[Complex64], coeffs: &[Complex64], z: Complex64, s: i32) -> Complex64 {
    poles.iter().zip(coeffs).map(|(&t, &ck)| ck * (z - t).powi(-s)).sum()
}

/// Zeros of `f` and of `f′` for `f = Σ c_k/(z − t_k)`, from polynomial
/// roots polished by Newton on the partial fractions.
pub fn rational_zeros(poles: &[Complex64], coeffs: &[Complex64]) -> (Vec<Complex64>, Vec<Complex64>) {
    let (p, q) = rational_parts(poles, coeffs);
    let f_zeros = roots(&p)
        .into_iter()
        .map(|z| polish(z, |w| (kernel(poles, coeffs, w, 1), -kernel(poles, coeffs, w, 2))))
        .collect();
    let r = poly_add(
        &poly_mul(&poly_deriv(&p), &q),
        &poly_mul(&p, &poly_deriv(&q)).iter().map(|x| -x).collect::<Vec<_>>(),
    );
    let fp_zeros = roots(&r)
        .into_iter()
        .map(|z| polish(z, |w| (-kernel(poles, coeffs, w, 2), kernel(poles, coeffs, w, 3) * 2.0)))
        .collect();
    (f_zeros, fp_zeros)
}

/// `Σ s^{-(N+1)}` and `Σ |s|^{-(N+1)}`.
pub fn direct_sum(zeros: &[Complex64], n: u32) -> (Complex64, f64) {
    let v = zeros.iter().map(|s| s.inv().powu(n + 1)).sum();
    let a = zeros.iter().map(|s| s.norm().powi(-(n as i32 + 1))).sum();
    (v, a)
}

/// A random rational sum with 2–6 simple poles, kept away from `f(0) = 0`,
/// `f′(0) = 0`, clustered poles and a vanishing leading coefficient.
pub fn random_rational(rng: &mut impl Rng) -> (Vec<Complex64>, Vec<Complex64>) {
    loop {
        let n = rng.gen_range(2..=6);
        let polar = |rng: &mut dyn rand::RngCore, lo: f64, hi: f64| {
            Complex64::from_polar(rng.gen_range(lo..hi), rng.gen_range(0.0..std::f64::consts::TAU))
        };
        let poles: Vec<Complex64> = (0..n).map(|_| polar(rng, 0.5, 3.0)).collect();
        let coeffs: Vec<Complex64> = (0..n).map(|_| polar(rng, 0.5, 2.0)).collect();
        let separated = poles
            .iter()
            .enumerate()
            .all(|(i, a)| poles[i + 1..].iter().all(|b| (a - b).norm() > 0.3));
        let f0 = kernel(&poles, &coeffs, c(0.0), 1).norm();
        let fp0 = kernel(&poles, &coeffs, c(0.0), 2).norm();
        let lead = coeffs.iter().sum::<Complex64>().norm();
        if separated && f0 > 0.05 && fp0 > 0.05 && lead > 0.1 {
            return (poles, coeffs);
        }
    }
}
