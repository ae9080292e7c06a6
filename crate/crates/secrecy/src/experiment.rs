//! Sweep points, output rows and their evaluation.

use rayon::prelude::*;
use secrecy_core::montecarlo::{an_block, block_count, block_len, csidf_block};
use secrecy_core::optimize::{allocate_power, maximize_see_from, AllocationOrder};
use secrecy_core::{
    build_snr_set, AntennaConfig, McResult, OptConfig, OptResult, Problem, Scheme, SecrecyParams, SnrSet, Topology,
};
use serde::Serialize;

use crate::config::Settings;

/// One operating point of a sweep. Antenna counts are kept raw so that
/// invalid combinations surface as error rows.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Point {
    pub scheme: Scheme,
    pub n_a: u32,
    pub n_b: u32,
    pub n_r: u32,
    pub n_e: u32,
    pub p_a: f64,
    pub p_r: f64,
    pub rate: f64,
    pub d_ar_frac: f64,
    pub d_re_frac: f64,
    pub phi: f64,
}

impl Point {
    /// The §IV operating point for `scheme`. AN gets a single antenna at
    /// Bob so that the relay can null its jamming there.
    pub fn preset(scheme: Scheme) -> Self {
        Self {
            scheme,
            n_a: 2,
            n_b: if scheme == Scheme::An { 1 } else { 2 },
            n_r: 2,
            n_e: 2,
            p_a: 0.5,
            p_r: 0.5,
            rate: 3.0,
            d_ar_frac: 0.5,
            d_re_frac: 1.5,
            phi: 0.1,
        }
    }

    pub fn antennas(&self) -> secrecy_core::Result<AntennaConfig> {
        let ant = AntennaConfig::new(self.n_a, self.n_b, self.n_r, self.n_e)?;
        self.scheme.check_antennas(&ant)?;
        Ok(ant)
    }

    pub fn topology(&self, s: &Settings) -> secrecy_core::Result<Topology> {
        Topology::from_fractions(s.d_ab_m, self.d_ar_frac, self.d_re_frac, s.layout)
    }
}

/// Column order of every output table.
pub const COLUMNS: [&str; 23] = [
    "scheme",
    "n_a",
    "n_b",
    "n_r",
    "n_e",
    "p_a_w",
    "p_r_w",
    "rate_bpshz",
    "d_ar_frac",
    "d_re_frac",
    "phi",
    "sop",
    "sop_mc",
    "sop_mc_stderr",
    "p_total_w",
    "see",
    "feasible",
    "trials",
    "seed",
    "series",
    "iterations",
    "mc_agree",
    "error",
];

/// One output record. Fields that a command does not compute stay empty.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Row {
    #[serde(serialize_with = "scheme_name")]
    pub scheme: Scheme,
    pub n_a: u32,
    pub n_b: u32,
    pub n_r: u32,
    pub n_e: u32,
    pub p_a_w: f64,
    pub p_r_w: f64,
    pub rate_bpshz: f64,
    pub d_ar_frac: f64,
    pub d_re_frac: f64,
    pub phi: f64,
    pub sop: Option<f64>,
    pub sop_mc: Option<f64>,
    pub sop_mc_stderr: Option<f64>,
    pub p_total_w: Option<f64>,
    pub see: Option<f64>,
    pub feasible: Option<bool>,
    pub trials: Option<u64>,
    pub seed: Option<u64>,
    /// Which curve of a figure the row belongs to.
    pub series: String,
    pub iterations: Option<usize>,
    /// Whether closed form and simulation agree within three standard errors.
    pub mc_agree: Option<bool>,
    pub error: String,
}

fn scheme_name<S: serde::Serializer>(scheme: &Scheme, ser: S) -> Result<S::Ok, S::Error> {
    ser.serialize_str(scheme.as_str())
}

impl Row {
    pub fn new(p: &Point, series: &str) -> Self {
        Self {
            scheme: p.scheme,
            n_a: p.n_a,
            n_b: p.n_b,
            n_r: p.n_r,
            n_e: p.n_e,
            p_a_w: p.p_a,
            p_r_w: p.p_r,
            rate_bpshz: p.rate,
            d_ar_frac: p.d_ar_frac,
            d_re_frac: p.d_re_frac,
            phi: p.phi,
            sop: None,
            sop_mc: None,
            sop_mc_stderr: None,
            p_total_w: None,
            see: None,
            feasible: None,
            trials: None,
            seed: None,
            series: series.to_owned(),
            iterations: None,
            mc_agree: None,
            error: String::new(),
        }
    }

    pub fn failed(mut self, e: impl std::fmt::Display) -> Self {
        self.error = e.to_string();
        self
    }

    pub fn is_error(&self) -> bool {
        !self.error.is_empty()
    }

    /// SEE counted only when the outage target is met.
    pub fn feasible_see(&self) -> f64 {
        match (self.feasible, self.see) {
            (Some(true), Some(v)) => v,
            _ => 0.0,
        }
    }

    fn record_opt(&mut self, r: &OptResult) {
        self.p_a_w = r.p_a;
        self.p_r_w = r.p_r;
        self.rate_bpshz = r.rate;
        self.sop = Some(r.sop);
        self.p_total_w = Some(r.p_total);
        self.see = Some(r.see);
        self.feasible = Some(r.feasible);
        self.iterations = Some(r.outer_iterations);
    }
}

/// Every point of `points` combined with every value of one axis, the new
/// axis varying fastest.
fn along<T: Copy>(points: Vec<Point>, values: &[T], set: impl Fn(&mut Point, T)) -> Vec<Point> {
    let mut out = Vec::with_capacity(points.len() * values.len());
    for p in points {
        for &v in values {
            let mut q = p;
            set(&mut q, v);
            out.push(q);
        }
    }
    out
}

/// The Cartesian product of the sweep axes. Alice's power varies fastest.
pub fn expand(s: &Settings) -> Vec<Point> {
    let mut pts = Vec::new();
    for &scheme in &s.schemes {
        let n_b = if scheme == Scheme::An { &s.n_b_an } else { &s.n_b };
        let with_a = along(vec![Point::preset(scheme)], &s.n_a, |p, v| p.n_a = v);
        pts.extend(along(with_a, n_b, |p, v| p.n_b = v));
    }
    let pts = along(pts, &s.n_r, |p, v| p.n_r = v);
    let pts = along(pts, &s.n_e, |p, v| p.n_e = v);
    let pts = along(pts, &s.d_ar_frac, |p, v| p.d_ar_frac = v);
    let pts = along(pts, &s.d_re_frac, |p, v| p.d_re_frac = v);
    let pts = along(pts, &s.phi, |p, v| p.phi = v);
    let pts = along(pts, &s.rate, |p, v| p.rate = v);
    match &s.p_r_w {
        None => along(pts, &s.p_a_w, |p, v| {
            p.p_a = v;
            p.p_r = v;
        }),
        Some(p_r) => {
            let pts = along(pts, p_r, |p, v| p.p_r = v);
            along(pts, &s.p_a_w, |p, v| p.p_a = v)
        }
    }
}

/// What to compute at each point.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Tasks {
    pub closed_form: bool,
    pub see: bool,
    pub monte_carlo: bool,
}

/// Evaluates every point in parallel; rows come back in point order.
pub fn evaluate_all(s: &Settings, points: &[Point], tasks: Tasks, series: &str) -> Vec<Row> {
    points.par_iter().map(|p| evaluate(s, p, tasks, series)).collect()
}

pub fn evaluate(s: &Settings, p: &Point, tasks: Tasks, series: &str) -> Row {
    let row = Row::new(p, series);
    match try_evaluate(s, p, tasks, row.clone()) {
        Ok(r) => r,
        Err(e) => row.failed(e),
    }
}

fn try_evaluate(s: &Settings, p: &Point, tasks: Tasks, mut row: Row) -> secrecy_core::Result<Row> {
    let ant = p.antennas()?;
    let topo = p.topology(s)?;
    let problem = Problem::new(p.scheme, &s.system, &topo, &ant)?;
    SecrecyParams::new(p.rate, s.rate_e, p.phi)?;
    if tasks.closed_form || tasks.see {
        let e = problem.evaluate(p.p_a, p.p_r, p.rate, s.jamming)?;
        row.sop = Some(e.sop);
        row.feasible = Some(e.sop <= p.phi);
        if tasks.see {
            row.p_total_w = Some(e.p_total);
            row.see = Some(e.see);
        }
    }
    if tasks.monte_carlo {
        let snr = build_snr_set(&s.system, &topo, p.p_a, p.p_r)?;
        let mc = simulate(s, p.scheme, &snr, &ant, p.rate * s.mc_rate_scale, s.trials, s.seed)?;
        record_mc(&mut row, &mc);
    }
    Ok(row)
}

fn record_mc(row: &mut Row, mc: &McResult) {
    row.sop_mc = Some(mc.estimate);
    row.sop_mc_stderr = Some(mc.std_err);
    row.trials = Some(mc.trials);
    row.seed = Some(mc.seed);
    if let Some(cf) = row.sop {
        row.mc_agree = Some(agrees(cf, mc));
    }
}

/// `|closed − simulated| ≤ 3σ`. σ is the larger of the empirical standard
/// error and the binomial one implied by the closed form, floored at one
/// trial's worth of probability. Near 0 or 1 the empirical value rests on a
/// handful of counts and is too noisy to test against on its own.
pub fn agrees(closed: f64, mc: &McResult) -> bool {
    (closed - mc.estimate).abs() <= 3.0 * agreement_sigma(closed, mc)
}

pub fn agreement_sigma(closed: f64, mc: &McResult) -> f64 {
    let n = mc.trials as f64;
    let p = closed.clamp(0.0, 1.0);
    (p * (1.0 - p) / n).sqrt().max(mc.std_err).max(1.0 / n)
}

/// Monte Carlo SOP with the trial blocks spread over the thread pool. Each
/// block owns its generator stream, so the result does not depend on the
/// number of threads.
pub fn simulate(
    s: &Settings,
    scheme: Scheme,
    snr: &SnrSet,
    ant: &AntennaConfig,
    rate: f64,
    trials: u64,
    seed: u64,
) -> secrecy_core::Result<McResult> {
    let sp = SecrecyParams::new(rate, 0.0, 1.0)?;
    snr.validate()?;
    scheme.check_antennas(ant)?;
    if trials == 0 {
        return Err(secrecy_core::Error::Param("trials must be at least 1".into()));
    }
    let hits: u64 = (0..block_count(trials))
        .into_par_iter()
        .map(|b| match scheme {
            Scheme::Csidf => csidf_block(snr, ant, &sp, s.csidf_mode, seed, b, block_len(trials, b)),
            Scheme::An => an_block(snr, ant, &sp, s.jamming, seed, b, block_len(trials, b)),
        })
        .sum();
    Ok(McResult::from_hits(hits, trials, seed))
}

/// Optimizer settings for a point.
pub fn opt_config(s: &Settings, phi: f64) -> OptConfig {
    OptConfig {
        p_max: s.system.p_max_w,
        p_min: s.system.p_max_w * 1e-4,
        rate_max: s.rate_max,
        rate_e: s.rate_e,
        sop_target: phi,
        order: AllocationOrder::AliceFirst,
        jamming: s.jamming,
        ..OptConfig::default()
    }
}

/// Joint maximization of SEE at a point; its powers and rate are ignored.
pub fn optimize(s: &Settings, p: &Point, seeds: &[OptResult], series: &str) -> (Row, Option<OptResult>) {
    let mut row = Row::new(p, series);
    let run = || -> secrecy_core::Result<OptResult> {
        let ant = p.antennas()?;
        let topo = p.topology(s)?;
        let problem = Problem::new(p.scheme, &s.system, &topo, &ant)?;
        maximize_see_from(&problem, &opt_config(s, p.phi), seeds)
    };
    match run() {
        Ok(r) => {
            row.record_opt(&r);
            (row, Some(r))
        }
        Err(e) => (row.failed(e), None),
    }
}

/// Power allocation at the point's fixed rate.
pub fn allocate(s: &Settings, p: &Point, series: &str) -> Row {
    let row = Row::new(p, series);
    let run = || -> secrecy_core::Result<OptResult> {
        let ant = p.antennas()?;
        let topo = p.topology(s)?;
        let problem = Problem::new(p.scheme, &s.system, &topo, &ant)?;
        allocate_power(&problem, p.rate, &opt_config(s, p.phi))
    };
    match run() {
        Ok(r) => {
            let mut row = row;
            row.record_opt(&r);
            row
        }
        Err(e) => row.failed(e),
    }
}

/// Adds a simulated SOP at the row's (possibly optimized) operating point.
pub fn attach_mc(s: &Settings, row: &mut Row) {
    if row.is_error() {
        return;
    }
    let run = || -> secrecy_core::Result<McResult> {
        let ant = AntennaConfig::new(row.n_a, row.n_b, row.n_r, row.n_e)?;
        let topo = Topology::from_fractions(s.d_ab_m, row.d_ar_frac, row.d_re_frac, s.layout)?;
        let snr = build_snr_set(&s.system, &topo, row.p_a_w, row.p_r_w)?;
        simulate(s, row.scheme, &snr, &ant, row.rate_bpshz * s.mc_rate_scale, s.trials, s.seed)
    };
    match run() {
        Ok(mc) => record_mc(row, &mc),
        Err(e) => row.error = e.to_string(),
    }
}
