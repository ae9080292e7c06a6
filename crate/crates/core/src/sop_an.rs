//! Secrecy outage of the artificial-noise scheme.
//!
//! Alice transmits to Bob over TAS/MRC while the relay beamforms jamming
//! into Bob's null space, so only Eve is disturbed. Eve's signal-to-
//! interference ratio `Υ = γ_AE / γ_I` then follows a scaled beta-prime law,
//! and the outage probability
//!
//! `SOP = E[F_AB(x₀ + 2^{2R} Υ)]`, `x₀ = 2^{2R} − 1`
//!
//! reduces, after expanding the TAS/MRC CDF, to a finite sum of Tricomi
//! confluent hypergeometric functions.

#[allow(unused_imports)] // unused when std is linked into the build graph
use num_traits::Float;

use crate::erlang::truncated_exp_power;
use crate::error::{domain, Error, Result};
use crate::fading::{cdf_tas_mrc, AntennaConfig};
use crate::linkbudget::SnrSet;
use crate::math::{binomial, clamp_prob, Sum};
use crate::quad::{integrate, QuadConfig};
use crate::sop_csidf::{SecrecyParams, CLOSED_FORM_MAX_ANTENNAS};
use crate::specfun::{gauss_2f1, ln_gamma, tricomi_u_scaled};

/// How the relay's jamming power is shared among its antennas.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum JammingModel {
    /// The relay power is split evenly over `n_r` jamming branches, each of
    /// mean SNR `γ̄_RE / n_r` at Eve.
    #[default]
    Split,
    /// Each of the `n_r` branches reaches Eve with the full mean `γ̄_RE`.
    PerAntenna,
}

impl JammingModel {
    /// Mean interference SNR of one jamming branch.
    pub fn branch_snr(self, snr_re: f64, n_r: u32) -> f64 {
        match self {
            Self::Split => snr_re / n_r as f64,
            Self::PerAntenna => snr_re,
        }
    }
}

/// `ρ = θ_I / γ̄_AE`: Eve's SIR times `ρ` is beta-prime(n_e, n_r).
fn rho(snr: &SnrSet, ant: &AntennaConfig, model: JammingModel) -> f64 {
    model.branch_snr(snr.re, ant.n_r) / snr.ae
}

fn ln_beta(a: f64, b: f64) -> f64 {
    ln_gamma(a) + ln_gamma(b) - ln_gamma(a + b)
}

/// Density of Eve's SIR `Υ = γ_AE / γ_I`.
pub fn sir_pdf_eve(x: f64, snr: &SnrSet, ant: &AntennaConfig) -> f64 {
    sir_pdf_eve_with(x, snr, ant, JammingModel::default())
}

pub fn sir_pdf_eve_with(x: f64, snr: &SnrSet, ant: &AntennaConfig, model: JammingModel) -> f64 {
    if x < 0.0 {
        return 0.0;
    }
    let r = rho(snr, ant, model);
    let (ne, nr) = (ant.n_e as f64, ant.n_r as f64);
    if x == 0.0 {
        return if ant.n_e == 1 { r * nr } else { 0.0 };
    }
    let ln = ne * r.ln() + (ne - 1.0) * x.ln() - (ne + nr) * (r * x).ln_1p() - ln_beta(ne, nr);
    ln.exp()
}

/// CDF of Eve's SIR: the regularized incomplete beta
/// `I_z(n_e, n_r) = z^{n_e} ₂F₁(n_e, 1−n_r; n_e+1; z) / (n_e B(n_e, n_r))`
/// at `z = ρx / (1 + ρx)`.
pub fn sir_cdf_eve(x: f64, snr: &SnrSet, ant: &AntennaConfig) -> f64 {
    sir_cdf_eve_with(x, snr, ant, JammingModel::default())
}

pub fn sir_cdf_eve_with(x: f64, snr: &SnrSet, ant: &AntennaConfig, model: JammingModel) -> f64 {
    if x <= 0.0 {
        return 0.0;
    }
    let r = rho(snr, ant, model);
    let (ne, nr) = (ant.n_e as f64, ant.n_r as f64);
    let z = r * x / (1.0 + r * x);
    if z >= 1.0 {
        return 1.0;
    }
    let f = gauss_2f1(ne, 1.0 - nr, ne + 1.0, z).unwrap_or(f64::NAN);
    clamp_prob((ne * z.ln() - ne.ln() - ln_beta(ne, nr)).exp() * f)
}

fn check(snr: &SnrSet, ant: &AntennaConfig, sp: &SecrecyParams) -> Result<()> {
    snr.validate()?;
    ant.check_jamming()?;
    sp.validate()
}

/// Secrecy outage probability of the artificial-noise scheme.
///
/// Fails with [`Error::Antennas`] unless `n_b ≤ n_r − 1`.
pub fn sop_an(snr: &SnrSet, ant: &AntennaConfig, sp: &SecrecyParams) -> Result<f64> {
    sop_an_with(snr, ant, sp, JammingModel::default())
}

pub fn sop_an_with(snr: &SnrSet, ant: &AntennaConfig, sp: &SecrecyParams, model: JammingModel) -> Result<f64> {
    check(snr, ant, sp)?;
    if ant.max_count() > CLOSED_FORM_MAX_ANTENNAS {
        return sop_an_quadrature(snr, ant, sp, model);
    }
    match sop_an_closed(snr, ant, sp, model) {
        Ok(p) if p.is_finite() => Ok(clamp_prob(p)),
        _ => sop_an_quadrature(snr, ant, sp, model),
    }
}

/// `E[Υ̃^p e^{−λΥ}]`-type moment scaled so that it stays O(1):
/// `k^{−p} z^{−n_e} Γ(p+n_e) Γ(n_e+n_r)/(Γ(n_e)Γ(n_r)) · z^a U(a, p+1−n_r, z)`
/// with `a = p + n_e`.
fn scaled_moment(p: u32, k: u32, z: f64, ne: f64, nr: f64) -> Result<f64> {
    let a = p as f64 + ne;
    let u = tricomi_u_scaled(a, p as f64 + 1.0 - nr, z)?;
    let ln = -(p as f64) * (k as f64).ln() - ne * z.ln() + ln_gamma(a) - ln_beta(ne, nr);
    Ok(ln.exp() * u)
}

fn sop_an_closed(snr: &SnrSet, ant: &AntennaConfig, sp: &SecrecyParams, model: JammingModel) -> Result<f64> {
    let b = (2.0 * sp.rate * core::f64::consts::LN_2).exp();
    let x0 = b - 1.0;
    let g = snr.ab;
    let r = rho(snr, ant, model);
    let (ne, nr) = (ant.n_e as f64, ant.n_r as f64);
    let t = x0 / g;
    let mut total = Sum::new();
    total.add(1.0);
    for k in 1..=ant.n_a {
        let coeffs = truncated_exp_power(ant.n_b, k);
        let z = k as f64 * b / (g * r);
        let moments = (0..coeffs.len() as u32)
            .map(|p| scaled_moment(p, k, z, ne, nr))
            .collect::<Result<alloc::vec::Vec<f64>>>()?;
        let mut inner = Sum::new();
        for (j, &c) in coeffs.iter().enumerate() {
            for (p, &m) in moments.iter().enumerate().take(j + 1) {
                inner.add(c * binomial(j as u32, p as u32) * t.powi((j - p) as i32) * m);
            }
        }
        let sign = if k % 2 == 1 { -1.0 } else { 1.0 };
        total.add(sign * binomial(ant.n_a, k) * (-(k as f64) * t).exp() * inner.value());
    }
    let p = total.value();
    if !p.is_finite() {
        return Err(Error::Param(alloc::format!("closed form not finite at rate {}", sp.rate)));
    }
    Ok(p)
}

/// `E[F_AB(x₀ + 2^{2R} Υ)]` integrated over the beta variable
/// `z = ρΥ / (1 + ρΥ)` on `[0, 1)`.
pub fn sop_an_quadrature(snr: &SnrSet, ant: &AntennaConfig, sp: &SecrecyParams, model: JammingModel) -> Result<f64> {
    check(snr, ant, sp)?;
    let b = (2.0 * sp.rate * core::f64::consts::LN_2).exp();
    let x0 = b - 1.0;
    let r = rho(snr, ant, model);
    let (ne, nr) = (ant.n_e as f64, ant.n_r as f64);
    let lb = ln_beta(ne, nr);
    let est = integrate(
        |z| {
            if z <= 0.0 || z >= 1.0 {
                return 0.0;
            }
            let dens = ((ne - 1.0) * z.ln() + (nr - 1.0) * (-z).ln_1p() - lb).exp();
            let upsilon = z / (r * (1.0 - z));
            dens * cdf_tas_mrc(x0 + b * upsilon, ant.n_a, ant.n_b, snr.ab)
        },
        0.0,
        1.0,
        &QuadConfig::with_tol(1e-13, 1e-11),
    );
    if !est.value.is_finite() {
        return Err(domain("sop_an", est.value));
    }
    Ok(clamp_prob(est.value))
}
