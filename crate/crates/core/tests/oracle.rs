mod common;

use common::{random_rational, rational_zeros};
use merozero::kernel::{KernelModel, KernelSpec, TruncationPolicy};
use merozero::oracle::{count_zeros_minus_poles, direct_zero_power_sum, find_zeros_in_disk, ContourSpec, KernelFunction};
use merozero::power_sums::zero_power_sum;
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const EXAMPLE1: &str = include_str!("../../../fixtures/example1.json");

fn squares() -> KernelModel {
    KernelModel::from_json(EXAMPLE1, &TruncationPolicy::default()).unwrap()
}

/// `Σ 1/(x − k²)` on the real line, directly; only sign changes matter here.
fn real_f(x: f64) -> f64 {
    (1..=20_000u64).rev().map(|k| 1.0 / (x - (k * k) as f64)).sum::<f64>() - 1.0 / 20_000.0
}

/// The zero in `(k², (k+1)²)` by bisection; `f` runs from +∞ down to −∞ there.
fn interval_zero(k: u64) -> f64 {
    let (mut lo, mut hi) = ((k * k) as f64 + 1e-9, ((k + 1) * (k + 1)) as f64 - 1e-9);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if real_f(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo < 1e-13 * hi {
            break;
        }
    }
    0.5 * (lo + hi)
}

fn circle(radius: f64) -> ContourSpec {
    ContourSpec {
        center: Complex64::new(0.0, 0.0),
        radius,
        quadrature_points: 64,
    }
}

#[test]
fn four_zeros_of_the_squares_sum_inside_thirty() {
    let model = squares();
    let f = KernelFunction::new(&model, TruncationPolicy::default());
    let bisected: Vec<f64> = (1..=5).map(interval_zero).collect();
    assert!(bisected[4] > 30.0, "fifth zero {}", bisected[4]);
    let zl = find_zeros_in_disk(&f, 30.0).unwrap();
    assert!(zl.exhaustive_in.is_some());
    assert_eq!(zl.total_multiplicity(), 4);
    for (z, want) in zl.zeros.iter().zip(&bisected) {
        assert!((z.location.re - want).abs() < 1e-8 * want && z.location.im.abs() < 1e-8, "{} vs {want}", z.location);
    }
    // five poles (1, 4, 9, 16, 25) inside
    assert_eq!(count_zeros_minus_poles(&f, circle(30.0)).unwrap().count, -1);
}

#[test]
fn disk_counts_follow_interlacing() {
    let model = squares();
    let f = KernelFunction::new(&model, TruncationPolicy::default());
    for r in [3.0f64, 10.5, 50.5, 140.0, 420.0] {
        let k_max = (r.sqrt().floor() as u64).max(1);
        let poles = (1..=k_max).filter(|k| ((k * k) as f64) < r).count() as i64;
        // zeros in every full interval below r, plus possibly the one containing r
        let zeros = (1..=k_max).filter(|&k| interval_zero(k) < r).count() as i64;
        let got = count_zeros_minus_poles(&f, circle(r)).unwrap();
        assert_eq!(got.count, zeros - poles, "r = {r}");
    }
}

#[test]
fn located_zeros_of_rationals_match_polynomial_roots() {
    let pol = TruncationPolicy::default();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..10 {
        let (poles, coeffs) = random_rational(&mut rng);
        let terms: Vec<_> = poles.iter().copied().zip(coeffs.iter().copied()).collect();
        let model = KernelModel::new(KernelSpec::explicit(1, &terms), &pol).unwrap();
        let (want, _) = rational_zeros(&poles, &coeffs);
        let radius = 1.5 * want.iter().map(|s| s.norm()).fold(0.0, f64::max) + 1.0;
        let zl = find_zeros_in_disk(&KernelFunction::new(&model, pol), radius).unwrap();
        assert_eq!(zl.total_multiplicity() as usize, want.len());
        for s in &want {
            let nearest = zl.zeros.iter().map(|z| (z.location - s).norm()).fold(f64::INFINITY, f64::min);
            assert!(nearest < 1e-8 * (1.0 + s.norm()), "{s} missing from {:?}", zl.zeros);
        }
        for n in 0..4 {
            let direct = direct_zero_power_sum(&zl, n, Some(0.0)).unwrap();
            assert!(!direct.incomplete);
            let formula = zero_power_sum(&model, n, 0.0, &pol).unwrap();
            let size: f64 = want.iter().map(|s| s.norm().powi(-(n as i32 + 1))).sum();
            assert!((direct.value - formula.value).norm() <= formula.error_bound + 1e-8 * size);
        }
    }
}
