//! Link budget: geometry, radio constants and transmit powers to average SNRs.

use core::f64::consts::PI;

#[allow(unused_imports)] // unused when std is linked into the build graph
use num_traits::Float;

use crate::error::{domain, Error, Result};

/// Speed of light in vacuum, m/s.
pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;

pub fn db_to_linear(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

pub fn linear_to_db(lin: f64) -> f64 {
    10.0 * lin.log10()
}

pub fn dbm_to_watts(dbm: f64) -> f64 {
    db_to_linear(dbm) * 1e-3
}

/// Radio, link-budget and circuit-power constants.
///
/// Values are kept in the units they are usually quoted in; [`LinkBudget`]
/// holds the linear-domain form used for computation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SystemParams {
    pub carrier_freq_hz: f64,
    pub antenna_gain_db: f64,
    pub link_margin_db: f64,
    pub noise_figure_db: f64,
    pub pathloss_exp: f64,
    pub noise_psd_dbm_hz: f64,
    pub bandwidth_hz: f64,
    /// Power amplifier efficiency loss δ.
    pub delta: f64,
    /// Transmit circuitry power, W.
    pub p_tx_w: f64,
    /// Receive circuitry power per antenna, W.
    pub p_rx_w: f64,
    /// Per-node transmit power ceiling, W.
    pub p_max_w: f64,
}

impl Default for SystemParams {
    fn default() -> Self {
        Self {
            carrier_freq_hz: 2.5e9,
            antenna_gain_db: 5.0,
            link_margin_db: 40.0,
            noise_figure_db: 10.0,
            pathloss_exp: 3.0,
            noise_psd_dbm_hz: -174.0,
            bandwidth_hz: 10e3,
            delta: 0.35,
            p_tx_w: 112.2e-3,
            p_rx_w: 97.9e-3,
            p_max_w: 1.0,
        }
    }
}

impl SystemParams {
    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("carrier_freq_hz", self.carrier_freq_hz),
            ("bandwidth_hz", self.bandwidth_hz),
            ("p_max_w", self.p_max_w),
        ];
        for (name, v) in positive {
            if !(v > 0.0) || !v.is_finite() {
                return Err(domain(name, v));
            }
        }
        let nonneg = [
            ("pathloss_exp", self.pathloss_exp),
            ("delta", self.delta),
            ("p_tx_w", self.p_tx_w),
            ("p_rx_w", self.p_rx_w),
        ];
        for (name, v) in nonneg {
            if !(v >= 0.0) || !v.is_finite() {
                return Err(domain(name, v));
            }
        }
        for (name, v) in [
            ("antenna_gain_db", self.antenna_gain_db),
            ("link_margin_db", self.link_margin_db),
            ("noise_figure_db", self.noise_figure_db),
            ("noise_psd_dbm_hz", self.noise_psd_dbm_hz),
        ] {
            if !v.is_finite() {
                return Err(domain(name, v));
            }
        }
        Ok(())
    }

    /// Validates and converts the dB quantities to linear form once.
    pub fn link_budget(&self) -> Result<LinkBudget> {
        self.validate()?;
        let wavenumber = 4.0 * PI * self.carrier_freq_hz / SPEED_OF_LIGHT;
        let gain = db_to_linear(self.antenna_gain_db)
            / (wavenumber * wavenumber
                * db_to_linear(self.link_margin_db)
                * db_to_linear(self.noise_figure_db));
        Ok(LinkBudget {
            gain,
            pathloss_exp: self.pathloss_exp,
            noise_power_w: dbm_to_watts(self.noise_psd_dbm_hz) * self.bandwidth_hz,
        })
    }
}

/// Linear-domain link budget derived from [`SystemParams`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinkBudget {
    /// Distance-independent part of the path gain, `G/((4πf_c/c)² M_l N_f)`.
    pub gain: f64,
    pub pathloss_exp: f64,
    /// Noise power `N₀B`, W.
    pub noise_power_w: f64,
}

impl LinkBudget {
    /// Path gain κ at distance `d` metres.
    pub fn path_loss(&self, d: f64) -> Result<f64> {
        if !(d > 0.0) || !d.is_finite() {
            return Err(domain("distance", d));
        }
        Ok(self.gain / d.powf(self.pathloss_exp))
    }

    /// Average SNR `κP/(N₀B)`.
    pub fn avg_snr(&self, kappa: f64, p: f64) -> Result<f64> {
        if !(kappa > 0.0) || !kappa.is_finite() {
            return Err(domain("kappa", kappa));
        }
        if !(p > 0.0) || !p.is_finite() {
            return Err(domain("power", p));
        }
        Ok(kappa * p / self.noise_power_w)
    }
}

/// Path gain κ = G / ((4π f_c/c)² d^υ M_l N_f).
pub fn path_loss(params: &SystemParams, d: f64) -> Result<f64> {
    params.link_budget()?.path_loss(d)
}

/// Average SNR γ̄ = κ P / (N₀ B).
pub fn avg_snr(params: &SystemParams, kappa: f64, p: f64) -> Result<f64> {
    params.link_budget()?.avg_snr(kappa, p)
}

/// Where Eve sits relative to the relay.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Layout {
    /// A, R and Eve on one line with Eve beyond R: `d_AE = d_AR + d_RE`.
    #[default]
    Collinear,
    /// Eve on the perpendicular through R: `d_AE = √(d_AR² + d_RE²)`.
    Perpendicular,
}

/// Node placement. Bob lies beyond the relay on the A–R line, so
/// `d_RB = d_AB − d_AR`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Topology {
    pub d_ab: f64,
    pub d_ar: f64,
    pub d_re: f64,
    pub layout: Layout,
}

impl Topology {
    pub fn new(d_ab: f64, d_ar: f64, d_re: f64, layout: Layout) -> Result<Self> {
        let topo = Self {
            d_ab,
            d_ar,
            d_re,
            layout,
        };
        topo.validate()?;
        Ok(topo)
    }

    /// Relay and Eve distances given as fractions of `d_ab`.
    pub fn from_fractions(d_ab: f64, d_ar_frac: f64, d_re_frac: f64, layout: Layout) -> Result<Self> {
        Self::new(d_ab, d_ar_frac * d_ab, d_re_frac * d_ab, layout)
    }

    pub fn validate(&self) -> Result<()> {
        for v in [self.d_ab, self.d_ar, self.d_re] {
            if !(v > 0.0) || !v.is_finite() {
                return Err(Error::Topology("distances must be positive and finite"));
            }
        }
        if self.d_ar >= self.d_ab {
            return Err(Error::Topology("relay must sit between Alice and Bob (d_ar < d_ab)"));
        }
        Ok(())
    }

    pub fn d_rb(&self) -> f64 {
        self.d_ab - self.d_ar
    }

    pub fn d_ae(&self) -> f64 {
        match self.layout {
            Layout::Collinear => self.d_ar + self.d_re,
            Layout::Perpendicular => self.d_ar.hypot(self.d_re),
        }
    }
}

/// One of the five links of the model.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Link {
    AliceBob,
    AliceRelay,
    RelayBob,
    AliceEve,
    RelayEve,
}

/// Linear average SNRs of the five links.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SnrSet {
    pub ab: f64,
    pub ar: f64,
    pub rb: f64,
    pub ae: f64,
    pub re: f64,
}

impl SnrSet {
    pub fn new(ab: f64, ar: f64, rb: f64, ae: f64, re: f64) -> Result<Self> {
        let set = Self { ab, ar, rb, ae, re };
        set.validate()?;
        Ok(set)
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("snr_ab", self.ab),
            ("snr_ar", self.ar),
            ("snr_rb", self.rb),
            ("snr_ae", self.ae),
            ("snr_re", self.re),
        ] {
            if !(v > 0.0) || !v.is_finite() {
                return Err(domain(name, v));
            }
        }
        Ok(())
    }

    pub fn get(&self, link: Link) -> f64 {
        match link {
            Link::AliceBob => self.ab,
            Link::AliceRelay => self.ar,
            Link::RelayBob => self.rb,
            Link::AliceEve => self.ae,
            Link::RelayEve => self.re,
        }
    }
}

/// Average SNRs of all links for transmit powers `p_a` (Alice) and `p_r`
/// (relay).
pub fn build_snr_set(params: &SystemParams, topo: &Topology, p_a: f64, p_r: f64) -> Result<SnrSet> {
    let budget = params.link_budget()?;
    topo.validate()?;
    for (name, p) in [("p_a", p_a), ("p_r", p_r)] {
        if !(p > 0.0) || p > params.p_max_w {
            return Err(domain(name, p));
        }
    }
    let snr = |d: f64, p: f64| budget.avg_snr(budget.path_loss(d)?, p);
    SnrSet::new(
        snr(topo.d_ab, p_a)?,
        snr(topo.d_ar, p_a)?,
        snr(topo.d_rb(), p_r)?,
        snr(topo.d_ae(), p_a)?,
        snr(topo.d_re, p_r)?,
    )
}
