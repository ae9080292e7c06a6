//! Monte Carlo estimation of secrecy outage by direct channel sampling.
//!
//! Trials are split into fixed-size blocks. Block `b` draws from a ChaCha8
//! generator seeded with the run seed and switched to stream `b`, so the
//! result depends only on `(seed, trials)` and not on how blocks are
//! scheduled. This module runs blocks sequentially; callers may run
//! [`csidf_block`] / [`an_block`] in parallel and add up the hit counts.

#[allow(unused_imports)] // unused when std is linked into the build graph
use num_traits::Float;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::Exp1;

use crate::error::{Error, Result};
use crate::fading::{sample_mrc, sample_tas_mrc, AntennaConfig};
use crate::linkbudget::{SnrSet, SystemParams};
use crate::see::{power_total, Scheme, SeeResult};
use crate::sop_an::JammingModel;
use crate::sop_csidf::SecrecyParams;

/// Trials per block.
pub const BLOCK_TRIALS: u64 = 8192;

/// An outage-probability estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McResult {
    pub estimate: f64,
    pub trials: u64,
    /// Binomial standard error `sqrt(p(1 − p)/n)`.
    pub std_err: f64,
    pub seed: u64,
}

impl McResult {
    pub fn from_hits(hits: u64, trials: u64, seed: u64) -> Self {
        let p = hits as f64 / trials as f64;
        Self {
            estimate: p,
            trials,
            std_err: (p * (1.0 - p) / trials as f64).sqrt(),
            seed,
        }
    }

    /// Whether `value` lies within `k` standard errors of the estimate.
    pub fn agrees_with(&self, value: f64, k: f64) -> bool {
        (value - self.estimate).abs() <= k * self.std_err
    }
}

/// How the direct-path SNR is formed when Alice transmits in both slots.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum DirectSlot {
    /// One TAS/MRC draw, the same one that enters the cooperative sum.
    #[default]
    SingleSlot,
    /// Two independent TAS/MRC draws added together.
    IndependentSlots,
    /// The same channel in both slots, `2 γ_AB`.
    RepeatedSlot,
}

/// What Eve collects.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum EveModel {
    /// Always `γ_AE + γ_RE`, as if the relay always transmitted.
    #[default]
    Optimistic,
    /// `γ_AE + γ_RE` when the relayed path is used; Alice's transmissions
    /// only when Bob takes the direct path.
    Protocol,
}

/// Sampling model for the CSI-DF scheme.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[derive(Default)]
pub enum CsidfMode {
    /// Each of the three outage events draws its own channels, so the
    /// estimate targets `O_ABE (O_ARE + (1 − O_ARE) O_BE)` exactly.
    #[default]
    Decoupled,
    /// One draw of every channel per trial, with Bob taking the better of
    /// the direct and relayed paths.
    Literal { direct: DirectSlot, eve: EveModel },
}


/// Generator for block `block` of a run seeded with `seed`.
pub fn block_rng(seed: u64, block: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(block);
    rng
}

/// Number of blocks for `trials` trials.
pub fn block_count(trials: u64) -> u64 {
    trials.div_ceil(BLOCK_TRIALS)
}

/// Trials in block `block`; the last block takes the remainder.
pub fn block_len(trials: u64, block: u64) -> u64 {
    let start = block * BLOCK_TRIALS;
    (trials - start).min(BLOCK_TRIALS)
}

fn check_trials(trials: u64) -> Result<()> {
    if trials == 0 {
        return Err(Error::Param("trials must be at least 1".into()));
    }
    Ok(())
}

/// `ln(1+x) − ln(1+y) < 2R ln 2`, i.e. outage at rate `R`.
#[inline]
fn outage_event(legit: f64, eve: f64, threshold: f64) -> bool {
    legit.ln_1p() - eve.ln_1p() < threshold
}

/// Outage count of one CSI-DF block.
pub fn csidf_block(
    snr: &SnrSet,
    ant: &AntennaConfig,
    sp: &SecrecyParams,
    mode: CsidfMode,
    seed: u64,
    block: u64,
    len: u64,
) -> u64 {
    let mut rng = block_rng(seed, block);
    let th = 2.0 * sp.rate * core::f64::consts::LN_2;
    let eve_sum = |rng: &mut ChaCha8Rng| sample_mrc(rng, ant.n_e, snr.ae) + sample_mrc(rng, ant.n_e, snr.re);
    let mut hits = 0;
    for _ in 0..len {
        let out = match mode {
            CsidfMode::Decoupled => {
                let direct = sample_tas_mrc(&mut rng, ant.n_a, ant.n_b, snr.ab);
                let e1 = eve_sum(&mut rng);
                if !outage_event(direct, e1, th) {
                    false
                } else {
                    let ar = sample_mrc(&mut rng, ant.n_r, snr.ar);
                    let e2 = eve_sum(&mut rng);
                    let coop = sample_tas_mrc(&mut rng, ant.n_a, ant.n_b, snr.ab)
                        + sample_tas_mrc(&mut rng, ant.n_r, ant.n_b, snr.rb);
                    let e3 = eve_sum(&mut rng);
                    outage_event(ar, e2, th) || outage_event(coop, e3, th)
                }
            }
            CsidfMode::Literal { direct, eve } => {
                let ab = sample_tas_mrc(&mut rng, ant.n_a, ant.n_b, snr.ab);
                let ar = sample_mrc(&mut rng, ant.n_r, snr.ar);
                let rb = sample_tas_mrc(&mut rng, ant.n_r, ant.n_b, snr.rb);
                let ae = sample_mrc(&mut rng, ant.n_e, snr.ae);
                let re = sample_mrc(&mut rng, ant.n_e, snr.re);
                let (g_dir, ae_dir) = match direct {
                    DirectSlot::SingleSlot => (ab, ae),
                    DirectSlot::IndependentSlots => (
                        ab + sample_tas_mrc(&mut rng, ant.n_a, ant.n_b, snr.ab),
                        ae + sample_mrc(&mut rng, ant.n_e, snr.ae),
                    ),
                    DirectSlot::RepeatedSlot => (2.0 * ab, 2.0 * ae),
                };
                let g_relay = ar.min(ab + rb);
                let relayed = g_relay > g_dir;
                let legit = g_dir.max(g_relay);
                let g_eve = match eve {
                    EveModel::Optimistic => ae + re,
                    EveModel::Protocol if relayed => ae + re,
                    EveModel::Protocol => ae_dir,
                };
                outage_event(legit, g_eve, th)
            }
        };
        hits += out as u64;
    }
    hits
}

/// Outage count of one AN block.
pub fn an_block(
    snr: &SnrSet,
    ant: &AntennaConfig,
    sp: &SecrecyParams,
    model: JammingModel,
    seed: u64,
    block: u64,
    len: u64,
) -> u64 {
    let mut rng = block_rng(seed, block);
    let th = 2.0 * sp.rate * core::f64::consts::LN_2;
    let branch = model.branch_snr(snr.re, ant.n_r);
    let mut hits = 0;
    for _ in 0..len {
        let ab = sample_tas_mrc(&mut rng, ant.n_a, ant.n_b, snr.ab);
        let ae = sample_mrc(&mut rng, ant.n_e, snr.ae);
        let mut jam = 0.0;
        for _ in 0..ant.n_r {
            let e: f64 = rng.sample(Exp1);
            jam += e;
        }
        hits += outage_event(ab, ae / (jam * branch), th) as u64;
    }
    hits
}

/// Monte Carlo SOP of CSI-DF.
pub fn mc_sop_csidf(
    snr: &SnrSet,
    ant: &AntennaConfig,
    sp: &SecrecyParams,
    trials: u64,
    seed: u64,
    mode: CsidfMode,
) -> Result<McResult> {
    check_trials(trials)?;
    snr.validate()?;
    ant.validate()?;
    sp.validate()?;
    let hits = (0..block_count(trials))
        .map(|b| csidf_block(snr, ant, sp, mode, seed, b, block_len(trials, b)))
        .sum();
    Ok(McResult::from_hits(hits, trials, seed))
}

/// Monte Carlo SOP of AN.
pub fn mc_sop_an(
    snr: &SnrSet,
    ant: &AntennaConfig,
    sp: &SecrecyParams,
    trials: u64,
    seed: u64,
    model: JammingModel,
) -> Result<McResult> {
    check_trials(trials)?;
    snr.validate()?;
    ant.check_jamming()?;
    sp.validate()?;
    let hits = (0..block_count(trials))
        .map(|b| an_block(snr, ant, sp, model, seed, b, block_len(trials, b)))
        .sum();
    Ok(McResult::from_hits(hits, trials, seed))
}

/// Simulated SOP of `scheme` with the default sampling model.
pub fn mc_sop(
    scheme: Scheme,
    snr: &SnrSet,
    ant: &AntennaConfig,
    sp: &SecrecyParams,
    trials: u64,
    seed: u64,
) -> Result<McResult> {
    match scheme {
        Scheme::Csidf => mc_sop_csidf(snr, ant, sp, trials, seed, CsidfMode::default()),
        Scheme::An => mc_sop_an(snr, ant, sp, trials, seed, JammingModel::default()),
    }
}

/// SEE with the outage probability taken from simulation.
#[allow(clippy::too_many_arguments)]
pub fn mc_see(
    scheme: Scheme,
    snr: &SnrSet,
    ant: &AntennaConfig,
    sp: &SecrecyParams,
    params: &SystemParams,
    p_a: f64,
    p_r: f64,
    trials: u64,
    seed: u64,
) -> Result<(SeeResult, McResult)> {
    let mc = mc_sop(scheme, snr, ant, sp, trials, seed)?;
    let p_total = power_total(scheme, params, snr, ant, p_a, p_r)?;
    Ok((SeeResult::new(scheme, sp.rate, mc.estimate, p_total), mc))
}
