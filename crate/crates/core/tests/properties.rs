//! Monotonicity and consistency properties of the outage and efficiency
//! models over random inputs.

use proptest::prelude::*;
use secrecy_core::see::{power_total_an, power_total_csidf, SeeResult};
use secrecy_core::sop_an::sop_an;
use secrecy_core::sop_csidf::{sop_csidf, CsidfTerms};
use secrecy_core::{AntennaConfig, Scheme, SecrecyParams, SnrSet, SystemParams};

const SLACK: f64 = 1e-10;

fn snr_db() -> impl Strategy<Value = f64> {
    (-10.0f64..30.0).prop_map(|db| 10f64.powf(db / 10.0))
}

fn snrs() -> impl Strategy<Value = [f64; 5]> {
    [snr_db(), snr_db(), snr_db(), snr_db(), snr_db()]
}

fn csidf_antennas() -> impl Strategy<Value = AntennaConfig> {
    (1u32..=3, 1u32..=3, 1u32..=3, 1u32..=3).prop_map(|(a, b, r, e)| AntennaConfig::new(a, b, r, e).unwrap())
}

fn an_antennas() -> impl Strategy<Value = AntennaConfig> {
    (1u32..=3, 2u32..=4, 1u32..=3)
        .prop_flat_map(|(a, r, e)| (Just(a), 1..r, Just(r), Just(e)))
        .prop_map(|(a, b, r, e)| AntennaConfig::new(a, b, r, e).unwrap())
}

fn set(s: [f64; 5]) -> SnrSet {
    SnrSet::new(s[0], s[1], s[2], s[3], s[4]).unwrap()
}

fn csidf(s: [f64; 5], ant: &AntennaConfig, rate: f64) -> f64 {
    sop_csidf(&set(s), ant, &SecrecyParams::with_rate(rate)).unwrap().sop
}

fn an(s: [f64; 5], ant: &AntennaConfig, rate: f64) -> f64 {
    sop_an(&set(s), ant, &SecrecyParams::with_rate(rate)).unwrap()
}

fn scaled(mut s: [f64; 5], i: usize, k: f64) -> [f64; 5] {
    s[i] *= k;
    s
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn csidf_sop_is_a_probability_and_composes(s in snrs(), ant in csidf_antennas(), rate in 0.0f64..4.0) {
        let t = sop_csidf(&set(s), &ant, &SecrecyParams::with_rate(rate)).unwrap();
        for p in [t.o_abe, t.o_are, t.o_be, t.sop] {
            prop_assert!((0.0..=1.0).contains(&p));
        }
        prop_assert!(t.sop <= t.o_abe + SLACK);
        let again = CsidfTerms::compose(t.o_abe, t.o_are, t.o_be);
        prop_assert!((again.sop - t.o_abe * (t.o_are + (1.0 - t.o_are) * t.o_be)).abs() < 1e-15);
        prop_assert_eq!(again.sop, t.sop);
    }

    #[test]
    fn csidf_sop_is_monotone(s in snrs(), ant in csidf_antennas(), rate in 0.05f64..3.0, k in 1.05f64..10.0) {
        let base = csidf(s, &ant, rate);
        // Stronger legitimate links help.
        for i in [0, 1, 2] {
            prop_assert!(csidf(scaled(s, i, k), &ant, rate) <= base + SLACK, "link {}", i);
        }
        // Stronger eavesdropper links hurt.
        for i in [3, 4] {
            prop_assert!(csidf(scaled(s, i, k), &ant, rate) + SLACK >= base, "link {}", i);
        }
        prop_assert!(csidf(s, &ant, rate * k) + SLACK >= base);
    }

    #[test]
    fn an_sop_is_monotone(s in snrs(), ant in an_antennas(), rate in 0.05f64..3.0, k in 1.05f64..10.0) {
        let base = an(s, &ant, rate);
        prop_assert!((0.0..=1.0).contains(&base));
        prop_assert!(an(scaled(s, 0, k), &ant, rate) <= base + SLACK);
        // More jamming power at Eve only hurts her.
        prop_assert!(an(scaled(s, 4, k), &ant, rate) <= base + SLACK);
        prop_assert!(an(scaled(s, 3, k), &ant, rate) + SLACK >= base);
        prop_assert!(an(s, &ant, rate * k) + SLACK >= base);
        // The relay-to-Bob and Alice-to-relay links play no role.
        prop_assert_eq!(an(scaled(scaled(s, 1, k), 2, k), &ant, rate), base);
    }

    #[test]
    fn see_is_nonnegative_and_bounded(rate in 0.0f64..5.0, sop in 0.0f64..=1.0, p_total in 0.1f64..10.0) {
        for scheme in Scheme::ALL {
            let r = SeeResult::new(scheme, rate, sop, p_total);
            prop_assert!(r.see >= 0.0);
            prop_assert!(r.see <= rate / p_total + 1e-15);
        }
        prop_assert_eq!(SeeResult::new(Scheme::Csidf, rate, 1.0, p_total).see, 0.0);
    }

    #[test]
    fn total_power_increases_with_every_input(
        p_a in 0.01f64..0.9,
        p_r in 0.01f64..0.9,
        dp in 0.001f64..0.09,
        pcoop in 0.0f64..=1.0,
        n_b in 1u32..4,
        n_r in 1u32..4,
    ) {
        let params = SystemParams::default();
        let ant = AntennaConfig::new(2, n_b, n_r, 2).unwrap();
        let more_b = AntennaConfig::new(2, n_b + 1, n_r, 2).unwrap();
        let more_r = AntennaConfig::new(2, n_b, n_r + 1, 2).unwrap();

        let c = |pa, pr, ant: &AntennaConfig| power_total_csidf(&params, pa, pr, ant, pcoop).unwrap();
        let base = c(p_a, p_r, &ant);
        prop_assert!(base > 0.0);
        prop_assert!(c(p_a + dp, p_r, &ant) > base);
        prop_assert!(c(p_a, p_r, &more_b) > base);
        if pcoop > 0.0 {
            prop_assert!(c(p_a, p_r + dp, &ant) > base);
            prop_assert!(c(p_a, p_r, &more_r) > base);
        }

        let a = |pa, pr, ant: &AntennaConfig| power_total_an(&params, pa, pr, ant).unwrap();
        let base = a(p_a, p_r, &ant);
        prop_assert!(base > 0.0);
        prop_assert!(a(p_a + dp, p_r, &ant) > base);
        prop_assert!(a(p_a, p_r + dp, &ant) > base);
        prop_assert!(a(p_a, p_r, &more_b) > base);
        prop_assert!(a(p_a, p_r, &more_r) > base);
    }
}
