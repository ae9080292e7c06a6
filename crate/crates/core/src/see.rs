//! Power consumption and secure energy efficiency.
//!
//! SEE is the secrecy rate actually delivered, `R·(1 − SOP)`, per watt of
//! total consumed power. Power counts the amplifier draw `(1 + δ)P` of each
//! transmitter plus fixed per-chain circuit costs `P_TX` and `P_RX`.

use core::fmt;
use core::str::FromStr;

use alloc::format;

use crate::error::{domain, Error, Result};
use crate::fading::AntennaConfig;
use crate::linkbudget::{build_snr_set, SnrSet, SystemParams, Topology};
use crate::sop_an::sop_an;
use crate::sop_csidf::{sop_csidf, SecrecyParams};

/// The two cooperative secrecy schemes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Scheme {
    /// CSI-aided decode-and-forward.
    Csidf,
    /// Relay artificial-noise jamming.
    An,
}

impl Scheme {
    pub const ALL: [Scheme; 2] = [Scheme::Csidf, Scheme::An];

    pub fn as_str(self) -> &'static str {
        match self {
            Scheme::Csidf => "csidf",
            Scheme::An => "an",
        }
    }

    /// Antenna rules of the scheme.
    pub fn check_antennas(self, ant: &AntennaConfig) -> Result<()> {
        match self {
            Scheme::Csidf => ant.validate(),
            Scheme::An => ant.check_jamming(),
        }
    }

    /// Exact secrecy outage probability of the scheme.
    pub fn sop(self, snr: &SnrSet, ant: &AntennaConfig, sp: &SecrecyParams) -> Result<f64> {
        match self {
            Scheme::Csidf => sop_csidf(snr, ant, sp).map(|t| t.sop),
            Scheme::An => sop_an(snr, ant, sp),
        }
    }
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Scheme {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "csidf" | "csi-df" | "csi_df" => Ok(Scheme::Csidf),
            "an" | "artificial-noise" => Ok(Scheme::An),
            other => Err(Error::Param(format!("unknown scheme '{other}' (expected csidf or an)"))),
        }
    }
}

/// SEE together with the quantities it was built from.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeeResult {
    pub scheme: Scheme,
    /// `R (1 − SOP) / P_total`, in (bps/Hz)/W.
    pub see: f64,
    pub sop: f64,
    pub p_total: f64,
}

impl SeeResult {
    pub fn new(scheme: Scheme, rate: f64, sop: f64, p_total: f64) -> Self {
        let see = (rate * (1.0 - sop) / p_total).max(0.0);
        Self {
            scheme,
            see,
            sop,
            p_total,
        }
    }
}

/// Probability that the relayed path is used, `γ̄_AR / (γ̄_AR + γ̄_AB)`.
pub fn p_coop(g_ar: f64, g_ab: f64) -> Result<f64> {
    if !(g_ar >= 0.0) || !g_ar.is_finite() {
        return Err(domain("g_ar", g_ar));
    }
    if !(g_ab > 0.0) || !g_ab.is_finite() {
        return Err(domain("g_ab", g_ab));
    }
    Ok(g_ar / (g_ar + g_ab))
}

fn check_powers(params: &SystemParams, p_a: f64, p_r: f64) -> Result<()> {
    for (name, p) in [("p_a", p_a), ("p_r", p_r)] {
        if !(p > 0.0) || p > params.p_max_w {
            return Err(domain(name, p));
        }
    }
    Ok(())
}

/// Average consumed power of CSI-DF, weighting the direct mode (Alice sends
/// twice) and the cooperative mode by how often each is used.
pub fn power_total_csidf(params: &SystemParams, p_a: f64, p_r: f64, ant: &AntennaConfig, pcoop: f64) -> Result<f64> {
    check_powers(params, p_a, p_r)?;
    if !(0.0..=1.0).contains(&pcoop) {
        return Err(domain("p_coop", pcoop));
    }
    let amp = 1.0 + params.delta;
    let (nb, nr) = (ant.n_b as f64, ant.n_r as f64);
    let direct = 2.0 * (amp * p_a + params.p_tx_w + nb * params.p_rx_w);
    let coop = amp * (p_a + p_r) + 2.0 * params.p_tx_w + (2.0 * nb + nr) * params.p_rx_w;
    Ok(direct * (1.0 - pcoop) + coop * pcoop)
}

/// Consumed power of AN: Alice and the jamming relay are active in both
/// slots.
pub fn power_total_an(params: &SystemParams, p_a: f64, p_r: f64, ant: &AntennaConfig) -> Result<f64> {
    check_powers(params, p_a, p_r)?;
    let amp = 1.0 + params.delta;
    Ok(2.0 * (amp * (p_a + p_r) + (ant.n_r as f64 + 1.0) * params.p_tx_w + ant.n_b as f64 * params.p_rx_w))
}

/// Consumed power of `scheme` at the given powers and link SNRs.
pub fn power_total(
    scheme: Scheme,
    params: &SystemParams,
    snr: &SnrSet,
    ant: &AntennaConfig,
    p_a: f64,
    p_r: f64,
) -> Result<f64> {
    match scheme {
        Scheme::Csidf => power_total_csidf(params, p_a, p_r, ant, p_coop(snr.ar, snr.ab)?),
        Scheme::An => power_total_an(params, p_a, p_r, ant),
    }
}

/// SEE of `scheme` given the link SNRs that `p_a`, `p_r` produce.
pub fn see(
    scheme: Scheme,
    snr: &SnrSet,
    ant: &AntennaConfig,
    sp: &SecrecyParams,
    params: &SystemParams,
    p_a: f64,
    p_r: f64,
) -> Result<SeeResult> {
    scheme.check_antennas(ant)?;
    let p_total = power_total(scheme, params, snr, ant, p_a, p_r)?;
    let sop = scheme.sop(snr, ant, sp)?;
    Ok(SeeResult::new(scheme, sp.rate, sop, p_total))
}

/// [`see`] with the SNRs derived from the link budget and topology.
pub fn see_at(
    scheme: Scheme,
    params: &SystemParams,
    topo: &Topology,
    ant: &AntennaConfig,
    sp: &SecrecyParams,
    p_a: f64,
    p_r: f64,
) -> Result<SeeResult> {
    let snr = build_snr_set(params, topo, p_a, p_r)?;
    see(scheme, &snr, ant, sp, params, p_a, p_r)
}
