//! Secrecy outage of the CSI-aided decode-and-forward scheme.
//!
//! Bob compares the direct Alice→Bob link with the relayed path and uses
//! the better one. Eve is credited with the sum of what she hears from
//! Alice and from the relay. The outage probability factorizes as
//!
//! `SOP = O_ABE · (O_ARE + (1 − O_ARE) · O_BE)`
//!
//! where each factor has the form `Pr{γ_E > 2^{−2R}(1 + X) − 1}`:
//! `X` is the direct TAS/MRC SNR for `O_ABE`, the relay's MRC SNR for
//! `O_ARE` and the combined SNR `γ_AB + γ_RB` for `O_BE`.
//!
//! All three are evaluated exactly through [`crate::erlang`]. Configurations
//! beyond [`CLOSED_FORM_MAX_ANTENNAS`] antennas per node, or whose mixture
//! weights would cancel too heavily, are integrated numerically instead.

#[allow(unused_imports)] // unused when std is linked into the build graph
use num_traits::Float;

use crate::erlang::{outage, ErlangMix};
use crate::error::{domain, Result};
use crate::fading::{pdf_mrc, pdf_tas_mrc, AntennaConfig};
use crate::linkbudget::SnrSet;
use crate::math::{binomial, clamp_prob, ln_factorial, Sum};
use crate::quad::{integrate, integrate_to_infinity, QuadConfig};
use crate::specfun::lower_inc_gamma;

/// Largest per-node antenna count handled by the closed forms.
pub const CLOSED_FORM_MAX_ANTENNAS: u32 = 8;

/// Mixtures whose absolute weight exceeds this are integrated numerically.
const MAX_ABS_WEIGHT: f64 = 1e9;

/// Target rates and the outage constraint.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SecrecyParams {
    /// Target secrecy rate in bps/Hz.
    pub rate: f64,
    /// Rate reserved for equivocation at Eve, in bps/Hz.
    pub rate_e: f64,
    /// Largest acceptable outage probability.
    pub sop_target: f64,
}

impl SecrecyParams {
    pub fn new(rate: f64, rate_e: f64, sop_target: f64) -> Result<Self> {
        let sp = Self {
            rate,
            rate_e,
            sop_target,
        };
        sp.validate()?;
        Ok(sp)
    }

    /// Only the rate matters for outage evaluation.
    pub fn with_rate(rate: f64) -> Self {
        Self {
            rate,
            rate_e: 0.0,
            sop_target: 1.0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.rate >= 0.0) || !self.rate.is_finite() {
            return Err(domain("rate", self.rate));
        }
        if !(self.rate_e >= 0.0) || !self.rate_e.is_finite() {
            return Err(domain("rate_e", self.rate_e));
        }
        if !(self.sop_target > 0.0 && self.sop_target <= 1.0) {
            return Err(domain("sop_target", self.sop_target));
        }
        Ok(())
    }
}

/// The three outage factors and their composition.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CsidfTerms {
    pub o_abe: f64,
    pub o_are: f64,
    pub o_be: f64,
    pub sop: f64,
}

impl CsidfTerms {
    pub fn compose(o_abe: f64, o_are: f64, o_be: f64) -> Self {
        let (o_abe, o_are, o_be) = (clamp_prob(o_abe), clamp_prob(o_are), clamp_prob(o_be));
        Self {
            o_abe,
            o_are,
            o_be,
            sop: o_abe * (o_are + (1.0 - o_are) * o_be),
        }
    }
}

/// How a term was evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    ClosedForm,
    Quadrature,
}

fn direct_mix(snr: &SnrSet, ant: &AntennaConfig) -> ErlangMix {
    ErlangMix::tas_mrc(ant.n_a, ant.n_b, snr.ab)
}

fn relay_bob_mix(snr: &SnrSet, ant: &AntennaConfig) -> ErlangMix {
    ErlangMix::tas_mrc(ant.n_r, ant.n_b, snr.rb)
}

/// Law of Eve's combined SNR `γ_AE + γ_RE`.
pub fn eve_mix(snr: &SnrSet, ant: &AntennaConfig) -> ErlangMix {
    ErlangMix::mrc(ant.n_e, snr.ae).convolve(&ErlangMix::mrc(ant.n_e, snr.re))
}

/// Law of the cooperative SNR `γ_AB + γ_RB`.
pub fn coop_mix(snr: &SnrSet, ant: &AntennaConfig) -> ErlangMix {
    direct_mix(snr, ant).convolve(&relay_bob_mix(snr, ant))
}

fn closed_form_ok(ant: &AntennaConfig) -> bool {
    ant.max_count() <= CLOSED_FORM_MAX_ANTENNAS
}

fn well_conditioned(mix: &ErlangMix) -> bool {
    mix.abs_weight() <= MAX_ABS_WEIGHT
}

fn check(snr: &SnrSet, ant: &AntennaConfig, sp: &SecrecyParams) -> Result<()> {
    snr.validate()?;
    ant.validate()?;
    sp.validate()
}

/// `∫₀ˣ t^{s−1} e^{−αt} dt` for `α ≥ 0`.
fn scaled_lower_gamma(s: u32, alpha: f64, x: f64) -> f64 {
    let y = alpha * x;
    let sf = s as f64;
    if y <= 1.0 {
        // x^s Σ_k (−y)^k / (k! (s+k))
        let mut term = 1.0;
        let mut acc = 1.0 / sf;
        for k in 1..200 {
            term *= -y / k as f64;
            let add = term / (sf + k as f64);
            acc += add;
            if add.abs() < 1e-17 * acc.abs() {
                break;
            }
        }
        return x.powi(s as i32) * acc;
    }
    lower_inc_gamma(sf, y).unwrap_or(f64::NAN) / alpha.powi(s as i32)
}

/// Density of `Erlang(m, λ) ⊛ Erlang(n, ν)` at `x` by the binomial
/// expansion of `(x − t)^{n−1}` and lower incomplete gamma functions.
fn pair_density(m: u32, lambda: f64, n: u32, nu: f64, x: f64) -> f64 {
    let (m, lambda, n, nu) = if lambda >= nu { (m, lambda, n, nu) } else { (n, nu, m, lambda) };
    let alpha = lambda - nu;
    let ln_pref = -nu * x + n as f64 * nu.ln() + m as f64 * lambda.ln()
        - ln_factorial(n - 1)
        - ln_factorial(m - 1);
    let mut s = Sum::new();
    for l in 0..n {
        let g = scaled_lower_gamma(m + l, alpha, x);
        let mag = binomial(n - 1, l) * x.powi((n - 1 - l) as i32) * g;
        s.add(if l % 2 == 1 { -mag } else { mag });
    }
    s.value() * ln_pref.exp()
}

/// Density of the cooperative SNR `γ_AB + γ_RB`, both TAS/MRC.
pub fn f_coop(x: f64, snr: &SnrSet, ant: &AntennaConfig) -> f64 {
    if x <= 0.0 {
        return 0.0;
    }
    if !closed_form_ok(ant) {
        return f_coop_numeric(x, snr, ant);
    }
    let a = direct_mix(snr, ant);
    let b = relay_bob_mix(snr, ant);
    let mut s = Sum::new();
    for ga in a.groups() {
        for (i, &wa) in ga.weights.iter().enumerate() {
            if wa == 0.0 {
                continue;
            }
            for gb in b.groups() {
                for (j, &wb) in gb.weights.iter().enumerate() {
                    if wb != 0.0 {
                        s.add(wa * wb * pair_density(i as u32 + 1, ga.rate, j as u32 + 1, gb.rate, x));
                    }
                }
            }
        }
    }
    s.value().max(0.0)
}

fn quad_cfg() -> QuadConfig {
    QuadConfig::with_tol(1e-12, 1e-10)
}

fn f_coop_numeric(x: f64, snr: &SnrSet, ant: &AntennaConfig) -> f64 {
    integrate(
        |u| pdf_tas_mrc(u, ant.n_a, ant.n_b, snr.ab) * pdf_tas_mrc(x - u, ant.n_r, ant.n_b, snr.rb),
        0.0,
        x,
        &quad_cfg(),
    )
    .value
}

/// CDF of Eve's combined SNR `γ_AE + γ_RE`; zero for negative `x`.
pub fn cdf_eve_sum(x: f64, snr: &SnrSet, ant: &AntennaConfig) -> f64 {
    if x <= 0.0 {
        return 0.0;
    }
    clamp_prob(1.0 - eve_mix(snr, ant).survival(x))
}

fn thresholds(rate: f64) -> (f64, f64) {
    let b = (2.0 * rate * core::f64::consts::LN_2).exp();
    (1.0 / b, b - 1.0)
}

/// `1 − ∫_{x₀}^∞ f_X(t) F_E(a(t − x₀)) dt` by adaptive quadrature.
fn outage_numeric<F: FnMut(f64) -> f64>(mut pdf_x: F, scale: f64, eve: &ErlangMix, rate: f64) -> Result<f64> {
    let (a, x0) = thresholds(rate);
    let est = integrate_to_infinity(
        |t| {
            let f = pdf_x(t);
            if f == 0.0 {
                0.0
            } else {
                f * (1.0 - eve.survival(a * (t - x0)))
            }
        },
        x0,
        scale,
        &quad_cfg(),
    )?;
    Ok(clamp_prob(1.0 - est.value))
}

/// `Pr{γ_E > 2^{−2R}(1 + γ_AB) − 1}`, the outage of the direct link.
pub fn o_abe(snr: &SnrSet, ant: &AntennaConfig, sp: &SecrecyParams) -> Result<f64> {
    o_abe_with(snr, ant, sp).map(|(p, _)| p)
}

pub fn o_abe_with(snr: &SnrSet, ant: &AntennaConfig, sp: &SecrecyParams) -> Result<(f64, Method)> {
    check(snr, ant, sp)?;
    let eve = eve_mix(snr, ant);
    let x = direct_mix(snr, ant);
    if closed_form_ok(ant) && well_conditioned(&x) && well_conditioned(&eve) {
        return Ok((clamp_prob(outage(&x, &eve, sp.rate)), Method::ClosedForm));
    }
    let scale = ant.n_b as f64 * snr.ab;
    let p = outage_numeric(|t| pdf_tas_mrc(t, ant.n_a, ant.n_b, snr.ab), scale, &eve, sp.rate)?;
    Ok((p, Method::Quadrature))
}

/// `Pr{γ_E > 2^{−2R}(1 + γ_AR) − 1}`, the outage of the first relay hop.
pub fn o_are(snr: &SnrSet, ant: &AntennaConfig, sp: &SecrecyParams) -> Result<f64> {
    o_are_with(snr, ant, sp).map(|(p, _)| p)
}

pub fn o_are_with(snr: &SnrSet, ant: &AntennaConfig, sp: &SecrecyParams) -> Result<(f64, Method)> {
    check(snr, ant, sp)?;
    let eve = eve_mix(snr, ant);
    if closed_form_ok(ant) && well_conditioned(&eve) {
        let x = ErlangMix::mrc(ant.n_r, snr.ar);
        return Ok((clamp_prob(outage(&x, &eve, sp.rate)), Method::ClosedForm));
    }
    let scale = ant.n_r as f64 * snr.ar;
    let p = outage_numeric(|t| pdf_mrc(t, ant.n_r, snr.ar), scale, &eve, sp.rate)?;
    Ok((p, Method::Quadrature))
}

/// `Pr{γ_E > 2^{−2R}(1 + γ_AB + γ_RB) − 1}`, the outage of the combined
/// direct and relayed signal at Bob.
pub fn o_be(snr: &SnrSet, ant: &AntennaConfig, sp: &SecrecyParams) -> Result<f64> {
    o_be_with(snr, ant, sp).map(|(p, _)| p)
}

pub fn o_be_with(snr: &SnrSet, ant: &AntennaConfig, sp: &SecrecyParams) -> Result<(f64, Method)> {
    check(snr, ant, sp)?;
    let eve = eve_mix(snr, ant);
    if closed_form_ok(ant) && well_conditioned(&eve) {
        let x = coop_mix(snr, ant);
        if well_conditioned(&x) {
            return Ok((clamp_prob(outage(&x, &eve, sp.rate)), Method::ClosedForm));
        }
    }
    let scale = ant.n_b as f64 * (snr.ab + snr.rb);
    let p = outage_numeric(|t| f_coop_numeric(t, snr, ant), scale, &eve, sp.rate)?;
    Ok((p, Method::Quadrature))
}

/// Secrecy outage probability of the CSI-aided DF scheme.
pub fn sop_csidf(snr: &SnrSet, ant: &AntennaConfig, sp: &SecrecyParams) -> Result<CsidfTerms> {
    check(snr, ant, sp)?;
    let o_abe = o_abe(snr, ant, sp)?;
    if o_abe == 0.0 {
        return Ok(CsidfTerms::compose(0.0, o_are(snr, ant, sp)?, 0.0));
    }
    Ok(CsidfTerms::compose(o_abe, o_are(snr, ant, sp)?, o_be(snr, ant, sp)?))
}
