//! Receive-SNR distributions under Rayleigh fading.
//!
//! With MRC over `n` antennas the SNR is a sum of `n` i.i.d. exponentials,
//! i.e. Gamma(n, γ̄). With TAS at an `n_tx`-antenna transmitter the
//! receiver feeds back the best antenna, so the SNR is the maximum of
//! `n_tx` such sums. Nodes that do not feed back (relay and Eve as seen
//! from Alice) get no selection gain and see plain MRC.

use alloc::format;

#[allow(unused_imports)] // unused when std is linked into the build graph
use num_traits::Float;
use rand::Rng;
use rand_distr::Exp1;

use crate::error::{Error, Result};
use crate::specfun::{ln_gamma, reg_lower_gamma};

/// Largest antenna count accepted per node.
pub const MAX_ANTENNAS: u32 = 32;

/// Antenna counts at Alice, Bob, the relay and Eve.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct AntennaConfig {
    pub n_a: u32,
    pub n_b: u32,
    pub n_r: u32,
    pub n_e: u32,
}

impl AntennaConfig {
    pub fn new(n_a: u32, n_b: u32, n_r: u32, n_e: u32) -> Result<Self> {
        let ant = Self { n_a, n_b, n_r, n_e };
        ant.validate()?;
        Ok(ant)
    }

    pub fn validate(&self) -> Result<()> {
        for (name, n) in [("n_a", self.n_a), ("n_b", self.n_b), ("n_r", self.n_r), ("n_e", self.n_e)] {
            if n == 0 || n > MAX_ANTENNAS {
                return Err(Error::Antennas(format!("{name} must be in 1..={MAX_ANTENNAS}, got {n}")));
            }
        }
        Ok(())
    }

    /// The null-steering constraint of the jamming scheme, `n_b ≤ n_r − 1`.
    pub fn check_jamming(&self) -> Result<()> {
        self.validate()?;
        if self.n_b + 1 > self.n_r {
            return Err(Error::Antennas(format!(
                "artificial noise requires n_b <= n_r - 1 (got n_b={}, n_r={})",
                self.n_b, self.n_r
            )));
        }
        Ok(())
    }

    pub fn max_count(&self) -> u32 {
        self.n_a.max(self.n_b).max(self.n_r).max(self.n_e)
    }
}

/// Density of the MRC SNR: Gamma with shape `n_rx` and scale `g_bar`.
pub fn pdf_mrc(gamma: f64, n_rx: u32, g_bar: f64) -> f64 {
    if !(g_bar > 0.0) {
        return f64::NAN;
    }
    if gamma < 0.0 {
        return 0.0;
    }
    let x = gamma / g_bar;
    if x == 0.0 {
        return if n_rx == 1 { 1.0 / g_bar } else { 0.0 };
    }
    let n = n_rx as f64;
    ((n - 1.0) * x.ln() - x - ln_gamma(n)).exp() / g_bar
}

/// CDF of the MRC SNR, `1 − e^{−γ/γ̄} Σ_{w<n} (γ/γ̄)^w / w!`.
pub fn cdf_mrc(gamma: f64, n_rx: u32, g_bar: f64) -> f64 {
    if !(g_bar > 0.0) {
        return f64::NAN;
    }
    if gamma <= 0.0 {
        return 0.0;
    }
    reg_lower_gamma(n_rx as f64, gamma / g_bar).unwrap_or(f64::NAN)
}

/// Density of the TAS/MRC SNR, `n_tx F^{n_tx−1} f` with `F`, `f` the MRC
/// CDF and density.
pub fn pdf_tas_mrc(gamma: f64, n_tx: u32, n_rx: u32, g_bar: f64) -> f64 {
    let f = pdf_mrc(gamma, n_rx, g_bar);
    if n_tx == 1 || f == 0.0 || f.is_nan() {
        return f;
    }
    n_tx as f64 * cdf_mrc(gamma, n_rx, g_bar).powi(n_tx as i32 - 1) * f
}

/// CDF of the TAS/MRC SNR, the MRC CDF raised to `n_tx`.
pub fn cdf_tas_mrc(gamma: f64, n_tx: u32, n_rx: u32, g_bar: f64) -> f64 {
    cdf_mrc(gamma, n_rx, g_bar).powi(n_tx as i32)
}

/// One MRC SNR draw: sum of `n_rx` exponentials of mean `g_bar`.
pub fn sample_mrc<R: Rng + ?Sized>(rng: &mut R, n_rx: u32, g_bar: f64) -> f64 {
    let mut s = 0.0;
    for _ in 0..n_rx {
        let e: f64 = rng.sample(Exp1);
        s += e;
    }
    s * g_bar
}

/// One TAS/MRC SNR draw: the best of `n_tx` MRC draws.
pub fn sample_tas_mrc<R: Rng + ?Sized>(rng: &mut R, n_tx: u32, n_rx: u32, g_bar: f64) -> f64 {
    let mut best = 0.0;
    for _ in 0..n_tx {
        best = f64::max(best, sample_mrc(rng, n_rx, g_bar));
    }
    best
}
