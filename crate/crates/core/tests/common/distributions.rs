//! Densities integrate to one, CDFs are monotone and consistent with their
//! densities, and the samplers follow the laws they claim.

use super::{gamma_cdf, integrate, ks_critical, ks_statistic, tas_cdf};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use secrecy_core::erlang::ErlangMix;
use secrecy_core::fading::{cdf_mrc, cdf_tas_mrc, pdf_mrc, pdf_tas_mrc, sample_mrc, sample_tas_mrc};
use secrecy_core::sop_an::{sir_cdf_eve, sir_pdf_eve};
use secrecy_core::sop_csidf::{cdf_eve_sum, coop_mix, eve_mix, f_coop};
use secrecy_core::{AntennaConfig, SnrSet};

const NORM_TOL: f64 = 1e-6;

/// `∫₀^∞ f` through `x = s t/(1 − t)`, which handles both light and
/// algebraic tails.
fn total_mass<F: Fn(f64) -> f64>(f: F, scale: f64) -> f64 {
    integrate(
        |t| {
            if t >= 1.0 {
                return 0.0;
            }
            let x = scale * t / (1.0 - t);
            f(x) * scale / ((1.0 - t) * (1.0 - t))
        },
        0.0,
        1.0,
        1e-12,
        64,
    )
}

fn snr_cases() -> Vec<SnrSet> {
    vec![
        SnrSet::new(72.3, 578.0, 578.0, 2.6, 9.2).unwrap(),
        SnrSet::new(1.0, 2.0, 0.5, 0.7, 0.7).unwrap(),
        SnrSet::new(10.0, 10.0, 10.0, 3.0, 0.2).unwrap(),
    ]
}

fn antenna_cases() -> Vec<AntennaConfig> {
    vec![
        AntennaConfig::new(1, 1, 2, 1).unwrap(),
        AntennaConfig::new(2, 2, 3, 2).unwrap(),
        AntennaConfig::new(3, 1, 3, 3).unwrap(),
        AntennaConfig::new(4, 2, 5, 4).unwrap(),
    ]
}

pub fn fading_densities_are_normalized() {
    for g in [0.3, 1.0, 25.0, 600.0] {
        for n_rx in 1..=4 {
            let m = total_mass(|x| pdf_mrc(x, n_rx, g), g * n_rx as f64);
            assert!((m - 1.0).abs() < NORM_TOL, "mrc n={n_rx} g={g}: {m}");
            for n_tx in 1..=4 {
                let m = total_mass(|x| pdf_tas_mrc(x, n_tx, n_rx, g), g * n_rx as f64);
                assert!((m - 1.0).abs() < NORM_TOL, "tas n_tx={n_tx} n_rx={n_rx} g={g}: {m}");
            }
        }
    }
}

pub fn composite_densities_are_normalized() {
    for snr in snr_cases() {
        for ant in antenna_cases() {
            let m = total_mass(|x| f_coop(x, &snr, &ant), snr.ab + snr.rb);
            assert!((m - 1.0).abs() < NORM_TOL, "f_coop {ant:?} {snr:?}: {m}");
            let m = total_mass(|x| sir_pdf_eve(x, &snr, &ant), snr.ae / snr.re);
            assert!((m - 1.0).abs() < NORM_TOL, "sir pdf {ant:?} {snr:?}: {m}");
            for mix in [coop_mix(&snr, &ant), eve_mix(&snr, &ant)] {
                let m = total_mass(|x| mix.pdf(x), snr.ab + snr.rb + snr.ae + snr.re);
                assert!((m - 1.0).abs() < NORM_TOL, "mixture {ant:?} {snr:?}: {m}");
                assert!((mix.total_weight() - 1.0).abs() < 1e-9);
            }
        }
    }
}

fn assert_cdf<F: Fn(f64) -> f64>(cdf: F, scale: f64, label: &str) {
    let mut prev = 0.0;
    assert_eq!(cdf(0.0), 0.0, "{label}: F(0)");
    for i in 1..=400 {
        let x = scale * (i as f64 / 40.0).powi(2);
        let v = cdf(x);
        assert!((-1e-12..=1.0 + 1e-12).contains(&v), "{label}: F({x}) = {v}");
        assert!(v + 1e-12 >= prev, "{label}: decreasing at {x} ({prev} -> {v})");
        prev = v;
    }
    assert!(cdf(scale * 1e6) > 1.0 - 1e-6, "{label}: F(∞)");
}

pub fn cdfs_are_monotone_with_correct_limits() {
    for g in [0.5, 20.0] {
        for n in 1..=4 {
            assert_cdf(|x| cdf_mrc(x, n, g), g, "cdf_mrc");
            assert_cdf(|x| cdf_tas_mrc(x, 3, n, g), g, "cdf_tas_mrc");
        }
    }
    for snr in snr_cases() {
        for ant in antenna_cases() {
            assert_cdf(|x| cdf_eve_sum(x, &snr, &ant), snr.ae + snr.re, "cdf_eve_sum");
            assert_cdf(|x| sir_cdf_eve(x, &snr, &ant), snr.ae / snr.re, "sir_cdf_eve");
            let coop = coop_mix(&snr, &ant);
            assert_cdf(|x| coop.cdf(x), snr.ab + snr.rb, "coop cdf");
        }
    }
}

pub fn cdfs_agree_with_their_densities() {
    let snr = SnrSet::new(5.0, 8.0, 3.0, 1.5, 2.5).unwrap();
    let ant = AntennaConfig::new(2, 2, 3, 2).unwrap();
    for x in [0.3, 2.0, 9.0] {
        let from_pdf = integrate(|t| sir_pdf_eve(t, &snr, &ant), 0.0, x, 1e-13, 16);
        assert!((from_pdf - sir_cdf_eve(x, &snr, &ant)).abs() < 1e-9);
        let mix = ErlangMix::tas_mrc(2, 3, 4.0);
        let from_pdf = integrate(|t| mix.pdf(t), 0.0, x, 1e-13, 16);
        assert!((from_pdf - mix.cdf(x)).abs() < 1e-9);
        assert!((mix.cdf(x) + mix.survival(x) - 1.0).abs() < 1e-12);
        assert!((cdf_tas_mrc(x, 2, 3, 4.0) - tas_cdf(x, 2, 3, 4.0)).abs() < 1e-12);
        assert!((cdf_mrc(x, 3, 4.0) - gamma_cdf(x, 3, 4.0)).abs() < 1e-12);
    }
}

pub fn samplers_pass_kolmogorov_smirnov() {
    const N: usize = 20_000;
    let critical = ks_critical(N, 1e-3);
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for (n_tx, n_rx, g) in [(1, 1, 1.0), (1, 3, 7.5), (2, 2, 0.4), (4, 1, 30.0), (3, 3, 2.0)] {
        let mrc: Vec<f64> = (0..N).map(|_| sample_mrc(&mut rng, n_rx, g)).collect();
        let d = ks_statistic(mrc, |x| gamma_cdf(x, n_rx, g));
        assert!(d < critical, "mrc n={n_rx} g={g}: D={d} > {critical}");
        let tas: Vec<f64> = (0..N).map(|_| sample_tas_mrc(&mut rng, n_tx, n_rx, g)).collect();
        let d = ks_statistic(tas, |x| tas_cdf(x, n_tx, n_rx, g));
        assert!(d < critical, "tas {n_tx}x{n_rx} g={g}: D={d} > {critical}");
    }
}

pub fn sums_of_samples_follow_composite_laws() {
    const N: usize = 20_000;
    let critical = ks_critical(N, 1e-3);
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    let snr = SnrSet::new(6.0, 20.0, 4.0, 1.2, 3.3).unwrap();
    let ant = AntennaConfig::new(2, 2, 3, 2).unwrap();
    let coop: Vec<f64> = (0..N)
        .map(|_| sample_tas_mrc(&mut rng, ant.n_a, ant.n_b, snr.ab) + sample_tas_mrc(&mut rng, ant.n_r, ant.n_b, snr.rb))
        .collect();
    let mix = coop_mix(&snr, &ant);
    let d = ks_statistic(coop, |x| mix.cdf(x));
    assert!(d < critical, "coop sum: D={d}");
    let eve: Vec<f64> = (0..N)
        .map(|_| sample_mrc(&mut rng, ant.n_e, snr.ae) + sample_mrc(&mut rng, ant.n_e, snr.re))
        .collect();
    let d = ks_statistic(eve, |x| cdf_eve_sum(x, &snr, &ant));
    assert!(d < critical, "eve sum: D={d}");
    let sir: Vec<f64> = (0..N)
        .map(|_| {
            let jam: f64 = (0..ant.n_r).map(|_| sample_mrc(&mut rng, 1, snr.re / ant.n_r as f64)).sum();
            sample_mrc(&mut rng, ant.n_e, snr.ae) / jam
        })
        .collect();
    let d = ks_statistic(sir, |x| sir_cdf_eve(x, &snr, &ant));
    assert!(d < critical, "eve SIR: D={d}");
}

/// Every check in this suite, by name.
pub const CHECKS: &[(&str, fn())] = &[
    ("fading_densities_are_normalized", fading_densities_are_normalized),
    ("composite_densities_are_normalized", composite_densities_are_normalized),
    ("cdfs_are_monotone_with_correct_limits", cdfs_are_monotone_with_correct_limits),
    ("cdfs_agree_with_their_densities", cdfs_agree_with_their_densities),
    ("samplers_pass_kolmogorov_smirnov", samplers_pass_kolmogorov_smirnov),
    ("sums_of_samples_follow_composite_laws", sums_of_samples_follow_composite_laws),
];
