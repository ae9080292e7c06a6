//! Special functions against independent references on seeded random grids.

use super::integrate;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use secrecy_core::specfun::{gamma, gauss_2f1, ln_gamma, lower_inc_gamma, reg_lower_gamma, reg_upper_gamma, tricomi_u};

const GRID: usize = 50;

fn rel_err(x: f64, reference: f64) -> f64 {
    (x - reference).abs() / reference.abs().max(f64::MIN_POSITIVE)
}

pub fn gamma_family_matches_statrs() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..GRID {
        let x: f64 = rng.random_range(0.05..60.0);
        assert!(rel_err(ln_gamma(x).exp(), statrs::function::gamma::ln_gamma(x).exp()) < 1e-12, "ln_gamma({x})");
        if x < 30.0 {
            assert!(rel_err(gamma(x), statrs::function::gamma::gamma(x)) < 1e-12, "gamma({x})");
        }
    }
}

pub fn lower_incomplete_gamma_matches_references() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for _ in 0..GRID {
        let s: f64 = rng.random_range(0.2..25.0);
        let x: f64 = rng.random_range(0.0..60.0);
        let reference = statrs::function::gamma::gamma_li(s, x);
        assert!(rel_err(lower_inc_gamma(s, x).unwrap(), reference) < 1e-10, "γ({s}, {x})");
        let p = statrs::function::gamma::gamma_lr(s, x);
        assert!((reg_lower_gamma(s, x).unwrap() - p).abs() < 1e-12, "P({s}, {x})");
        assert!((reg_upper_gamma(s, x).unwrap() - (1.0 - p)).abs() < 1e-12, "Q({s}, {x})");
    }
    // Direct quadrature of the defining integral.
    let reference = integrate(|t| t * t * (-t).exp(), 0.0, 2.5, 1e-15, 4);
    assert!(rel_err(lower_inc_gamma(3.0, 2.5).unwrap(), reference) < 1e-12);
    assert_eq!(lower_inc_gamma(2.0, 0.0).unwrap(), 0.0);
    for x in [0.1, 1.0, 7.0] {
        assert!(rel_err(lower_inc_gamma(1.0, x).unwrap(), -(-x).exp_m1()) < 1e-13);
    }
    assert!(lower_inc_gamma(0.0, 1.0).is_err());
}

pub fn lower_incomplete_gamma_is_nondecreasing() {
    for s in [0.5, 1.0, 2.5, 7.0] {
        let mut prev = 0.0;
        for i in 0..200 {
            let v = lower_inc_gamma(s, i as f64 * 0.1).unwrap();
            assert!(v >= prev);
            prev = v;
        }
    }
}

/// Euler's integral with the unit parameter in the role of `b`:
/// `₂F₁(β, 1; γ; z) = (γ − 1) ∫₀¹ (1 − t)^{γ−2} (1 − zt)^{−β} dt`, `γ ≥ 2`.
fn hyp2f1_unit_euler(beta: f64, gam: f64, z: f64) -> f64 {
    (gam - 1.0) * integrate(|t| (1.0 - t).powf(gam - 2.0) * (1.0 - z * t).powf(-beta), 0.0, 1.0, 1e-15, 8)
}

/// Euler's integral for general `c − 1 ≥ b ≥ 1`.
fn hyp2f1_euler(a: f64, b: f64, c: f64, z: f64) -> f64 {
    let norm = (statrs::function::gamma::ln_gamma(c)
        - statrs::function::gamma::ln_gamma(b)
        - statrs::function::gamma::ln_gamma(c - b))
    .exp();
    norm * integrate(
        |t| t.powf(b - 1.0) * (1.0 - t).powf(c - b - 1.0) * (1.0 - z * t).powf(-a),
        0.0,
        1.0,
        1e-15,
        8,
    )
}

pub fn gauss_2f1_pattern_matches_euler_integral() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    for _ in 0..GRID {
        let v = rng.random_range(1..=6) as f64;
        let b: f64 = rng.random_range(0.5..8.0);
        let z: f64 = rng.random_range(-0.95..0.95);
        let value = gauss_2f1(1.0, b + v, v + 1.0, z).unwrap();
        let reference = hyp2f1_unit_euler(b + v, v + 1.0, z);
        assert!(rel_err(value, reference) < 1e-9, "2F1(1, {}; {}; {z}) = {value} vs {reference}", b + v, v + 1.0);
    }
}

pub fn gauss_2f1_general_matches_euler_integral() {
    let mut rng = ChaCha8Rng::seed_from_u64(14);
    for _ in 0..GRID {
        let a: f64 = rng.random_range(-2.0..4.0);
        let b: f64 = rng.random_range(1.0..4.0);
        let c: f64 = b + rng.random_range(1.0..4.0);
        let z: f64 = rng.random_range(-0.95..0.95);
        let value = gauss_2f1(a, b, c, z).unwrap();
        let reference = hyp2f1_euler(a, b, c, z);
        assert!(rel_err(value, reference) < 1e-9, "2F1({a}, {b}; {c}; {z}) = {value} vs {reference}");
    }
}

pub fn gauss_2f1_identities() {
    assert_eq!(gauss_2f1(1.3, 2.1, 0.7, 0.0).unwrap(), 1.0);
    for z in [-0.9, -0.4, 0.2, 0.6, 0.95] {
        let v = gauss_2f1(1.0, 1.0, 2.0, z).unwrap();
        assert!(rel_err(v, -(-z).ln_1p() / z) < 1e-12, "z = {z}");
    }
    // Terminating series summed term by term.
    let mut term = 1.0;
    let mut sum = 1.0;
    for k in 0..200 {
        let k = k as f64;
        term *= (1.0 + k) * (3.5 + k) / ((4.5 + k) * (k + 1.0)) * 0.3;
        sum += term;
    }
    assert!(rel_err(gauss_2f1(1.0, 3.5, 4.5, 0.3).unwrap(), sum) < 1e-12);
    assert!(gauss_2f1(1.0, 1.0, -2.0, 0.3).is_err());
    assert!(gauss_2f1(1.0, 1.0, 2.0, 1.0).is_err());
}

/// `U(a, b, z)` from its Laplace-type integral. A zero absolute tolerance
/// leaves only the integrator's relative-precision stopping rule.
fn tricomi_integral(a: f64, b: f64, z: f64) -> f64 {
    let upper = (a + 60.0 + (b - a).abs() * 4.0) / z;
    let ln_norm = -statrs::function::gamma::ln_gamma(a);
    integrate(
        |t| (ln_norm - z * t + (a - 1.0) * t.ln() + (b - a - 1.0) * t.ln_1p()).exp(),
        0.0,
        upper,
        0.0,
        32,
    )
}

/// Kummer's `M(a, b, z)` by its power series.
fn kummer_m(a: f64, b: f64, z: f64) -> f64 {
    let mut term = 1.0;
    let mut sum = 1.0;
    for k in 0..500 {
        let k = k as f64;
        term *= (a + k) / ((b + k) * (k + 1.0)) * z;
        sum += term;
        if term.abs() < 1e-18 * sum.abs() {
            break;
        }
    }
    sum
}

/// `U` through its connection with `M`, valid for non-integer `b`, together
/// with the size of the two terms that cancel in it.
fn tricomi_via_kummer(a: f64, b: f64, z: f64) -> (f64, f64) {
    use statrs::function::gamma::gamma as g;
    let t1 = g(1.0 - b) / g(a - b + 1.0) * kummer_m(a, b, z);
    let t2 = g(b - 1.0) / g(a) * z.powf(1.0 - b) * kummer_m(a - b + 1.0, 2.0 - b, z);
    (t1 + t2, t1.abs() + t2.abs())
}

pub fn tricomi_u_matches_integral_representation() {
    let mut rng = ChaCha8Rng::seed_from_u64(15);
    for _ in 0..GRID {
        let a: f64 = rng.random_range(1.0..8.0);
        let b: f64 = rng.random_range(-6.0..4.0);
        let z: f64 = 10f64.powf(rng.random_range(-2.0..2.0));
        let value = tricomi_u(a, b, z).unwrap();
        let reference = tricomi_integral(a, b, z);
        assert!(rel_err(value, reference) < 1e-8, "U({a}, {b}, {z}) = {value} vs {reference}");
    }
    let reference = tricomi_integral(2.0, 0.5, 1.3);
    assert!(rel_err(tricomi_u(2.0, 0.5, 1.3).unwrap(), reference) < 1e-8);
}

pub fn tricomi_u_matches_kummer_connection() {
    let mut rng = ChaCha8Rng::seed_from_u64(16);
    for _ in 0..GRID {
        let a: f64 = rng.random_range(1.0..4.0);
        let b = rng.random_range(-2..2) as f64 + rng.random_range(0.15..0.85);
        let z: f64 = rng.random_range(0.2..3.0);
        let value = tricomi_u(a, b, z).unwrap();
        let (reference, scale) = tricomi_via_kummer(a, b, z);
        let bound = 1e-8 * reference.abs() + 1e-13 * scale;
        assert!((value - reference).abs() < bound, "U({a}, {b}, {z}) = {value} vs {reference}");
    }
}

pub fn tricomi_u_identities_and_monotonicity() {
    for (a, z) in [(1.0, 0.3), (2.5, 1.7), (4.0, 12.0)] {
        assert!(rel_err(tricomi_u(a, a + 1.0, z).unwrap(), z.powf(-a)) < 1e-10);
    }
    let (a, b) = (2.0, -1.5);
    let z = 1e4;
    assert!((tricomi_u(a, b, z).unwrap() * z.powf(a) - 1.0).abs() < 1e-3);
    for (a, b) in [(1.0, 0.5), (3.0, -2.0), (2.0, 3.5)] {
        let mut prev = f64::INFINITY;
        for i in 1..100 {
            let v = tricomi_u(a, b, i as f64 * 0.2).unwrap();
            assert!(v <= prev);
            prev = v;
        }
    }
    assert!(tricomi_u(0.0, 1.0, 1.0).is_err());
}

/// Every check in this suite, by name.
pub const CHECKS: &[(&str, fn())] = &[
    ("gamma_family_matches_statrs", gamma_family_matches_statrs),
    ("lower_incomplete_gamma_matches_references", lower_incomplete_gamma_matches_references),
    ("lower_incomplete_gamma_is_nondecreasing", lower_incomplete_gamma_is_nondecreasing),
    ("gauss_2f1_pattern_matches_euler_integral", gauss_2f1_pattern_matches_euler_integral),
    ("gauss_2f1_general_matches_euler_integral", gauss_2f1_general_matches_euler_integral),
    ("gauss_2f1_identities", gauss_2f1_identities),
    ("tricomi_u_matches_integral_representation", tricomi_u_matches_integral_representation),
    ("tricomi_u_matches_kummer_connection", tricomi_u_matches_kummer_connection),
    ("tricomi_u_identities_and_monotonicity", tricomi_u_identities_and_monotonicity),
];
