//! Closed-form outage terms against brute-force integration of their
//! defining probabilities on randomized parameter grids.

use super::Case;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use secrecy_core::sop_an::sop_an_with;
use secrecy_core::sop_csidf::{o_abe, o_are, o_be};
use secrecy_core::{AntennaConfig, JammingModel, SecrecyParams, SnrSet};

const POINTS: usize = 30;
const TOL: f64 = 1e-5;

fn log_uniform(rng: &mut ChaCha8Rng, lo_db: f64, hi_db: f64) -> f64 {
    10f64.powf(rng.random_range(lo_db..hi_db) / 10.0)
}

fn random_case(rng: &mut ChaCha8Rng, jamming: bool) -> Case {
    let (n_b, n_r) = if jamming {
        let n_r = rng.random_range(2..=3);
        (rng.random_range(1..n_r), n_r)
    } else {
        (rng.random_range(1..=3), rng.random_range(1..=3))
    };
    Case {
        n_a: rng.random_range(1..=3),
        n_b,
        n_r,
        n_e: rng.random_range(1..=3),
        ab: log_uniform(rng, -5.0, 20.0),
        ar: log_uniform(rng, -5.0, 20.0),
        rb: log_uniform(rng, -5.0, 20.0),
        ae: log_uniform(rng, -10.0, 15.0),
        re: log_uniform(rng, -10.0, 15.0),
        rate: rng.random_range(0.05..2.0),
    }
}

fn inputs(c: &Case) -> (SnrSet, AntennaConfig, SecrecyParams) {
    (
        SnrSet::new(c.ab, c.ar, c.rb, c.ae, c.re).unwrap(),
        AntennaConfig::new(c.n_a, c.n_b, c.n_r, c.n_e).unwrap(),
        SecrecyParams::with_rate(c.rate),
    )
}

pub fn csidf_terms_match_their_integrals() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0001);
    let mut worst = 0f64;
    for _ in 0..POINTS {
        let c = random_case(&mut rng, false);
        let (snr, ant, sp) = inputs(&c);
        let pairs = [
            ("o_abe", o_abe(&snr, &ant, &sp).unwrap(), c.o_abe()),
            ("o_are", o_are(&snr, &ant, &sp).unwrap(), c.o_are()),
            ("o_be", o_be(&snr, &ant, &sp).unwrap(), c.o_be()),
        ];
        for (name, closed, reference) in pairs {
            worst = worst.max((closed - reference).abs());
            assert!(
                (closed - reference).abs() <= TOL,
                "{name}: closed {closed} vs integral {reference} at {c:?}"
            );
        }
    }
    println!("largest CSI-DF term deviation: {worst:.2e}");
}

pub fn an_sop_matches_its_integral() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0002);
    let mut worst = 0f64;
    for i in 0..POINTS {
        let c = random_case(&mut rng, true);
        let (snr, ant, sp) = inputs(&c);
        let model = if i % 2 == 0 { JammingModel::Split } else { JammingModel::PerAntenna };
        let theta = model.branch_snr(c.re, c.n_r);
        let closed = sop_an_with(&snr, &ant, &sp, model).unwrap();
        let reference = c.an(theta);
        worst = worst.max((closed - reference).abs());
        assert!(
            (closed - reference).abs() <= TOL,
            "an ({model:?}): closed {closed} vs integral {reference} at {c:?}"
        );
    }
    println!("largest AN deviation: {worst:.2e}");
}

/// Every check in this suite, by name.
pub const CHECKS: &[(&str, fn())] = &[
    ("csidf_terms_match_their_integrals", csidf_terms_match_their_integrals),
    ("an_sop_matches_its_integral", an_sop_matches_its_integral),
];
