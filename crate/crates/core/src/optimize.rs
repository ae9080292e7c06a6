//! SEE maximization over transmit powers and secrecy rate.
//!
//! For a fixed rate the powers are allocated by alternating one-dimensional
//! Dinkelbach searches over Alice's and the relay's power. Each Dinkelbach
//! step maximizes `f₁ − λ f₂` with a coarse scan refined by Brent's
//! golden-section/parabolic search, working in log-power so that the small
//! powers favoured by circuit-dominated budgets are resolved as finely as the
//! large ones. The outage constraint is a feasibility filter: points with
//! `SOP > φ` get `f₁ = −∞`. The rate is then optimized by the same scalar
//! search wrapped around the power allocation.

use alloc::vec::Vec;

#[allow(unused_imports)] // unused when std is linked into the build graph
use num_traits::Float;

use crate::error::{domain, Error, Result};
use crate::fading::AntennaConfig;
use crate::linkbudget::{build_snr_set, SystemParams, Topology};
use crate::see::{power_total, Scheme};
use crate::sop_an::{sop_an_with, JammingModel};
use crate::sop_csidf::{sop_csidf, SecrecyParams};

const INV_PHI2: f64 = 0.381_966_011_250_105_1;

/// Which power is optimized first in each alternation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum AllocationOrder {
    #[default]
    AliceFirst,
    RelayFirst,
}

/// Optimizer settings.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OptConfig {
    /// Upper power bound for both transmitters, in W.
    pub p_max: f64,
    /// Lower power bound, in W.
    pub p_min: f64,
    /// Upper rate bound; derived from the link budget when `None`.
    pub rate_max: Option<f64>,
    /// Equivocation rate subtracted from the rate bound.
    pub rate_e: f64,
    /// Largest acceptable SOP, `φ`.
    pub sop_target: f64,
    pub dinkelbach_tol: f64,
    pub rate_tol: f64,
    /// Tolerance on `ln P` in the power searches.
    pub power_tol: f64,
    pub max_outer_iters: usize,
    pub max_inner_iters: usize,
    /// Points per axis of the coarse scans that seed the local searches.
    pub power_scan: usize,
    pub rate_scan: usize,
    pub order: AllocationOrder,
    pub jamming: JammingModel,
}

impl Default for OptConfig {
    fn default() -> Self {
        Self {
            p_max: 1.0,
            p_min: 1e-4,
            rate_max: None,
            rate_e: 0.0,
            sop_target: 0.1,
            dinkelbach_tol: 1e-6,
            rate_tol: 1e-3,
            power_tol: 1e-4,
            max_outer_iters: 50,
            max_inner_iters: 100,
            power_scan: 10,
            rate_scan: 12,
            order: AllocationOrder::AliceFirst,
            jamming: JammingModel::Split,
        }
    }
}

impl OptConfig {
    /// Defaults with the given power bound (`p_min = p_max · 10⁻⁴`) and `φ`.
    pub fn new(p_max: f64, sop_target: f64) -> Self {
        Self {
            p_max,
            p_min: p_max * 1e-4,
            sop_target,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.p_max > 0.0) || !self.p_max.is_finite() {
            return Err(domain("p_max", self.p_max));
        }
        if !(self.p_min > 0.0 && self.p_min < self.p_max) {
            return Err(domain("p_min", self.p_min));
        }
        if !(self.sop_target > 0.0 && self.sop_target <= 1.0) {
            return Err(domain("sop_target", self.sop_target));
        }
        for (name, v) in [
            ("dinkelbach_tol", self.dinkelbach_tol),
            ("rate_tol", self.rate_tol),
            ("power_tol", self.power_tol),
        ] {
            if !(v > 0.0) {
                return Err(domain(name, v));
            }
        }
        if let Some(r) = self.rate_max {
            if !(r > 0.0) || !r.is_finite() {
                return Err(domain("rate_max", r));
            }
        }
        if !(self.rate_e >= 0.0) {
            return Err(domain("rate_e", self.rate_e));
        }
        if self.power_scan < 2 || self.rate_scan < 2 {
            return Err(Error::Param("scan resolutions must be at least 2".into()));
        }
        if self.max_outer_iters == 0 || self.max_inner_iters == 0 {
            return Err(Error::Param("iteration limits must be positive".into()));
        }
        Ok(())
    }
}

/// One Dinkelbach iteration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DinkelbachStep {
    pub lambda: f64,
    /// `max_x f₁(x) − λ f₂(x)`.
    pub f_lambda: f64,
    pub x: f64,
}

/// Outcome of [`dinkelbach_1d`].
#[derive(Debug, Clone, PartialEq)]
pub struct Dinkelbach {
    pub x: f64,
    /// Final ratio `f₁(x)/f₂(x)`.
    pub lambda: f64,
    pub converged: bool,
    /// False when `f₁` is `−∞` everywhere the search looked.
    pub feasible: bool,
    pub trace: Vec<DinkelbachStep>,
}

/// Search direction of a power-allocation step, all in log-power.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Variable {
    AlicePower,
    RelayPower,
    /// `(P_A e^u, P_R e^{−u})`: trades relay power for source power.
    Tilt,
    /// `(P_A e^u, P_R e^u)`: both powers together.
    Scale,
}

/// One Dinkelbach iteration of a power allocation, with the full point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TraceEntry {
    pub variable: Variable,
    pub lambda: f64,
    pub f_lambda: f64,
    pub p_a: f64,
    pub p_r: f64,
    pub rate: f64,
}

/// Result of a power allocation or of the joint optimization.
#[derive(Debug, Clone, PartialEq)]
pub struct OptResult {
    pub scheme: Scheme,
    pub p_a: f64,
    pub p_r: f64,
    pub rate: f64,
    pub see: f64,
    pub sop: f64,
    pub p_total: f64,
    /// Whether `sop ≤ φ`. Infeasible results carry the lowest-SOP point seen.
    pub feasible: bool,
    /// Power alternations performed for the reported rate.
    pub outer_iterations: usize,
    /// All inner searches converged.
    pub converged: bool,
    /// SEE evaluations spent.
    pub evaluations: usize,
    pub trace: Vec<TraceEntry>,
}

/// Maximizes `f` on `[a, b]` by Brent's method (golden-section steps with
/// parabolic interpolation), then compares against both endpoints.
///
/// `f` may return `−∞` for infeasible points.
pub fn golden_section<F: FnMut(f64) -> f64>(mut f: F, a: f64, b: f64, tol: f64) -> (f64, f64) {
    let (x, fx) = brent_max(&mut f, a, b, tol, 200);
    let fa = f(a);
    let fb = f(b);
    let mut best = (x, fx);
    if fa > best.1 {
        best = (a, fa);
    }
    if fb > best.1 {
        best = (b, fb);
    }
    best
}

fn brent_max<F: FnMut(f64) -> f64>(f: &mut F, mut a: f64, mut b: f64, tol: f64, max_iter: usize) -> (f64, f64) {
    let mut g = |x: f64| {
        let v = f(x);
        if v.is_nan() {
            f64::INFINITY
        } else {
            -v
        }
    };
    let sqrt_eps = f64::EPSILON.sqrt();
    let mut x = a + INV_PHI2 * (b - a);
    let (mut w, mut v) = (x, x);
    let mut fx = g(x);
    let (mut fw, mut fv) = (fx, fx);
    let (mut d, mut e): (f64, f64) = (0.0, 0.0);
    for _ in 0..max_iter {
        let m = 0.5 * (a + b);
        let tol1 = sqrt_eps * x.abs() + tol / 3.0;
        let t2 = 2.0 * tol1;
        if (x - m).abs() <= t2 - 0.5 * (b - a) {
            break;
        }
        let mut p = 0.0;
        let mut q = 0.0;
        let mut r = 0.0;
        if e.abs() > tol1 && fx.is_finite() && fw.is_finite() && fv.is_finite() {
            r = (x - w) * (fx - fv);
            q = (x - v) * (fx - fw);
            p = (x - v) * q - (x - w) * r;
            q = 2.0 * (q - r);
            if q > 0.0 {
                p = -p;
            } else {
                q = -q;
            }
            r = e;
            e = d;
        }
        if p.abs() < (0.5 * q * r).abs() && p > q * (a - x) && p < q * (b - x) {
            d = p / q;
            let u = x + d;
            if u - a < t2 || b - u < t2 {
                d = if x < m { tol1 } else { -tol1 };
            }
        } else {
            e = if x < m { b - x } else { a - x };
            d = INV_PHI2 * e;
        }
        let u = x + if d.abs() >= tol1 { d } else if d > 0.0 { tol1 } else { -tol1 };
        let fu = g(u);
        if fu <= fx {
            if u < x {
                b = x;
            } else {
                a = x;
            }
            v = w;
            fv = fw;
            w = x;
            fw = fx;
            x = u;
            fx = fu;
        } else {
            if u < x {
                a = u;
            } else {
                b = u;
            }
            if fu <= fw || w == x {
                v = w;
                fv = fw;
                w = u;
                fw = fu;
            } else if fu <= fv || v == x || v == w {
                v = u;
                fv = fu;
            }
        }
    }
    (x, -fx)
}

/// Maximizes `h` over `[lo, hi]`: an even `scan`-point grid followed by a
/// Brent refinement between the neighbours of the best grid point.
fn scan_then_refine<H: FnMut(f64) -> f64>(mut h: H, lo: f64, hi: f64, scan: usize, tol: f64) -> (f64, f64) {
    let step = (hi - lo) / (scan - 1) as f64;
    let mut best = (lo, f64::NEG_INFINITY);
    let mut best_i = 0;
    for i in 0..scan {
        let x = if i + 1 == scan { hi } else { lo + step * i as f64 };
        let v = h(x);
        if v > best.1 {
            best = (x, v);
            best_i = i;
        }
    }
    if best.1 == f64::NEG_INFINITY {
        return best;
    }
    let a = lo + step * best_i.saturating_sub(1) as f64;
    let b = (lo + step * (best_i + 1) as f64).min(hi);
    let (x, v) = brent_max(&mut h, a, b, tol, 200);
    if v > best.1 {
        (x, v)
    } else {
        best
    }
}

/// Settings of a one-dimensional Dinkelbach search.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DinkelbachConfig {
    /// Stop when `|F(λ)|` falls below this.
    pub tol: f64,
    /// Tolerance on `x` of the inner maximizations.
    pub x_tol: f64,
    pub max_iters: usize,
    /// Grid points of the inner coarse scan.
    pub scan: usize,
}

impl Default for DinkelbachConfig {
    fn default() -> Self {
        Self {
            tol: 1e-6,
            x_tol: 1e-6,
            max_iters: 100,
            scan: 16,
        }
    }
}

/// Maximizes `f₁(x)/f₂(x)` on `[lo, hi]` by Dinkelbach's parametric
/// iteration `λ_{n+1} = f₁(x_n)/f₂(x_n)` with `x_n = argmax f₁ − λ_n f₂`.
///
/// `f₂` must be positive; `f₁` may be `−∞` to mark infeasible points.
pub fn dinkelbach_1d<F1, F2>(mut f1: F1, mut f2: F2, lo: f64, hi: f64, cfg: &DinkelbachConfig) -> Dinkelbach
where
    F1: FnMut(f64) -> f64,
    F2: FnMut(f64) -> f64,
{
    let mut lambda = 0.0;
    let mut trace = Vec::new();
    let mut x_best = lo;
    let mut best_ratio = f64::NEG_INFINITY;
    for _ in 0..cfg.max_iters {
        let (x, f_lambda) = scan_then_refine(|x| f1(x) - lambda * f2(x), lo, hi, cfg.scan, cfg.x_tol);
        if f_lambda == f64::NEG_INFINITY {
            return Dinkelbach {
                x: lo,
                lambda: f64::NEG_INFINITY,
                converged: false,
                feasible: false,
                trace,
            };
        }
        trace.push(DinkelbachStep { lambda, f_lambda, x });
        let ratio = f1(x) / f2(x);
        if ratio > best_ratio {
            best_ratio = ratio;
            x_best = x;
        }
        if f_lambda.abs() <= cfg.tol {
            return Dinkelbach {
                x: x_best,
                lambda: best_ratio,
                converged: true,
                feasible: true,
                trace,
            };
        }
        if ratio <= lambda {
            // F(λ) > tol yet no ratio gain: the inner search stalled.
            break;
        }
        lambda = ratio;
    }
    Dinkelbach {
        x: x_best,
        lambda: best_ratio,
        converged: false,
        feasible: true,
        trace,
    }
}

/// A scheme placed in a concrete system.
#[derive(Debug, Clone, Copy)]
pub struct Problem<'a> {
    pub scheme: Scheme,
    pub params: &'a SystemParams,
    pub topo: &'a Topology,
    pub ant: &'a AntennaConfig,
}

/// SOP, consumed power and SEE at one operating point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Evaluation {
    pub sop: f64,
    pub p_total: f64,
    pub see: f64,
}

impl<'a> Problem<'a> {
    pub fn new(scheme: Scheme, params: &'a SystemParams, topo: &'a Topology, ant: &'a AntennaConfig) -> Result<Self> {
        params.validate()?;
        topo.validate()?;
        scheme.check_antennas(ant)?;
        Ok(Self {
            scheme,
            params,
            topo,
            ant,
        })
    }

    pub fn evaluate(&self, p_a: f64, p_r: f64, rate: f64, jamming: JammingModel) -> Result<Evaluation> {
        let snr = build_snr_set(self.params, self.topo, p_a, p_r)?;
        let sp = SecrecyParams::with_rate(rate);
        let sop = match self.scheme {
            Scheme::Csidf => sop_csidf(&snr, self.ant, &sp)?.sop,
            Scheme::An => sop_an_with(&snr, self.ant, &sp, jamming)?,
        };
        let p_total = power_total(self.scheme, self.params, &snr, self.ant, p_a, p_r)?;
        Ok(Evaluation {
            sop,
            p_total,
            see: (rate * (1.0 - sop) / p_total).max(0.0),
        })
    }

    /// `log₂(1 + γ̄_AB(p_max) n_B) − R_E`.
    pub fn default_rate_max(&self, cfg: &OptConfig) -> Result<f64> {
        let snr = build_snr_set(self.params, self.topo, cfg.p_max, cfg.p_max)?;
        Ok((snr.ab * self.ant.n_b as f64).ln_1p() / core::f64::consts::LN_2 - cfg.rate_e)
    }
}

struct Point {
    p_a: f64,
    p_r: f64,
    eval: Evaluation,
}

fn check_bounds(params: &SystemParams, cfg: &OptConfig) -> Result<()> {
    cfg.validate()?;
    if cfg.p_max > params.p_max_w {
        return Err(Error::Param(alloc::format!(
            "optimizer p_max {} exceeds the system limit {}",
            cfg.p_max, params.p_max_w
        )));
    }
    Ok(())
}

/// Allocates `(P_A, P_R)` at a fixed rate.
pub fn allocate_power(problem: &Problem, rate: f64, cfg: &OptConfig) -> Result<OptResult> {
    allocate_power_from(problem, rate, cfg, &[])
}

/// [`allocate_power`] that also considers the given `(p_a, p_r)` starting
/// points next to the coarse scan.
pub fn allocate_power_from(problem: &Problem, rate: f64, cfg: &OptConfig, starts: &[(f64, f64)]) -> Result<OptResult> {
    check_bounds(problem.params, cfg)?;
    if !(rate >= 0.0) || !rate.is_finite() {
        return Err(domain("rate", rate));
    }
    let mut evaluations = 0usize;
    let mut eval = |p_a: f64, p_r: f64| -> Result<Evaluation> {
        evaluations += 1;
        problem.evaluate(p_a, p_r, rate, cfg.jamming)
    };
    let (u_lo, u_hi) = (cfg.p_min.ln(), cfg.p_max.ln());
    let n = cfg.power_scan;
    let grid = |i: usize| if i + 1 == n { cfg.p_max } else { (u_lo + (u_hi - u_lo) * i as f64 / (n - 1) as f64).exp() };

    let mut best_feasible: Option<Point> = None;
    let mut lowest_sop: Option<Point> = None;
    let consider = |pt: Point, best_feasible: &mut Option<Point>, lowest_sop: &mut Option<Point>| {
        if lowest_sop.as_ref().is_none_or(|b| pt.eval.sop < b.eval.sop) {
            *lowest_sop = Some(Point { ..pt });
        }
        if pt.eval.sop <= cfg.sop_target && best_feasible.as_ref().is_none_or(|b| pt.eval.see > b.eval.see) {
            *best_feasible = Some(pt);
        }
    };
    for i in 0..n {
        for j in 0..n {
            let (p_a, p_r) = (grid(i), grid(j));
            let e = eval(p_a, p_r)?;
            consider(Point { p_a, p_r, eval: e }, &mut best_feasible, &mut lowest_sop);
        }
    }
    for &(p_a, p_r) in starts {
        let (p_a, p_r) = (p_a.clamp(cfg.p_min, cfg.p_max), p_r.clamp(cfg.p_min, cfg.p_max));
        let e = eval(p_a, p_r)?;
        consider(Point { p_a, p_r, eval: e }, &mut best_feasible, &mut lowest_sop);
    }

    let mut cur = match best_feasible {
        Some(p) => p,
        None => {
            let p = lowest_sop.expect("scan is non-empty");
            return Ok(OptResult {
                scheme: problem.scheme,
                p_a: p.p_a,
                p_r: p.p_r,
                rate,
                see: p.eval.see,
                sop: p.eval.sop,
                p_total: p.eval.p_total,
                feasible: false,
                outer_iterations: 0,
                converged: false,
                evaluations,
                trace: Vec::new(),
            });
        }
    };

    let dcfg = DinkelbachConfig {
        tol: cfg.dinkelbach_tol,
        x_tol: cfg.power_tol,
        max_iters: cfg.max_inner_iters,
        scan: n,
    };
    // Coordinate steps alone stall where the outage constraint cuts the
    // box diagonally, so each round also moves along the two diagonals.
    let order = match cfg.order {
        AllocationOrder::AliceFirst => [Variable::AlicePower, Variable::RelayPower, Variable::Tilt, Variable::Scale],
        AllocationOrder::RelayFirst => [Variable::RelayPower, Variable::AlicePower, Variable::Tilt, Variable::Scale],
    };
    let clamp = |p: f64| p.clamp(cfg.p_min, cfg.p_max);
    let mut trace = Vec::new();
    let mut converged = true;
    let mut outer = 0;
    let mut first_error: Option<Error> = None;
    while outer < cfg.max_outer_iters {
        outer += 1;
        let start_see = cur.eval.see;
        for var in order {
            let (la, lr) = (cur.p_a.ln(), cur.p_r.ln());
            let (lo, hi) = match var {
                Variable::AlicePower | Variable::RelayPower => (u_lo, u_hi),
                Variable::Tilt => ((u_lo - la).max(lr - u_hi), (u_hi - la).min(lr - u_lo)),
                Variable::Scale => (u_lo - la.min(lr), u_hi - la.max(lr)),
            };
            if !(hi - lo > cfg.power_tol) {
                continue;
            }
            let point = |u: f64| match var {
                Variable::AlicePower => (clamp(u.exp()), cur.p_r),
                Variable::RelayPower => (cur.p_a, clamp(u.exp())),
                Variable::Tilt => (clamp(cur.p_a * u.exp()), clamp(cur.p_r * (-u).exp())),
                Variable::Scale => (clamp(cur.p_a * u.exp()), clamp(cur.p_r * u.exp())),
            };
            let mut record = |u: f64| -> Option<Evaluation> {
                let (p_a, p_r) = point(u);
                match eval(p_a, p_r) {
                    Ok(e) => Some(e),
                    Err(err) => {
                        first_error.get_or_insert(err);
                        None
                    }
                }
            };
            // f₁ and f₂ share one evaluation per point through a tiny cache.
            let mut cache: Option<(f64, Evaluation)> = None;
            let mut get = |u: f64| -> Option<Evaluation> {
                if let Some((cu, ce)) = cache {
                    if cu == u {
                        return Some(ce);
                    }
                }
                let e = record(u)?;
                cache = Some((u, e));
                Some(e)
            };
            let get = core::cell::RefCell::new(&mut get);
            let res = dinkelbach_1d(
                |u| match (get.borrow_mut())(u) {
                    Some(e) if e.sop <= cfg.sop_target => rate * (1.0 - e.sop),
                    _ => f64::NEG_INFINITY,
                },
                |u| (get.borrow_mut())(u).map_or(f64::INFINITY, |e| e.p_total),
                lo,
                hi,
                &dcfg,
            );
            if !res.feasible {
                continue;
            }
            converged &= res.converged;
            for s in &res.trace {
                let (p_a, p_r) = point(s.x);
                trace.push(TraceEntry {
                    variable: var,
                    lambda: s.lambda,
                    f_lambda: s.f_lambda,
                    p_a,
                    p_r,
                    rate,
                });
            }
            let (p_a, p_r) = point(res.x);
            let e = (get.borrow_mut())(res.x);
            if let Some(e) = e {
                if e.sop <= cfg.sop_target && e.see >= cur.eval.see {
                    cur = Point { p_a, p_r, eval: e };
                }
            }
        }
        if cur.eval.see - start_see >= cfg.dinkelbach_tol {
            continue;
        }
        // Every single direction is stuck, typically on a curved stretch of
        // the outage boundary. Search P_R with P_A re-optimized for each
        // candidate, which follows the boundary, and resume if that helps.
        let mut polished: Option<Point> = None;
        let mut profile = |v: f64| -> f64 {
            let p_r = clamp(v.exp());
            let mut inner = |u: f64| -> f64 {
                let p_a = clamp(u.exp());
                match eval(p_a, p_r) {
                    Ok(e) if e.sop <= cfg.sop_target => {
                        if polished.as_ref().is_none_or(|b| e.see > b.eval.see) {
                            polished = Some(Point { p_a, p_r, eval: e });
                        }
                        e.see
                    }
                    Ok(_) => f64::NEG_INFINITY,
                    Err(err) => {
                        first_error.get_or_insert(err);
                        f64::NEG_INFINITY
                    }
                }
            };
            scan_then_refine(&mut inner, u_lo, u_hi, n, cfg.power_tol).1
        };
        scan_then_refine(&mut profile, u_lo, u_hi, n, cfg.power_tol);
        match polished {
            Some(p) if p.eval.see - cur.eval.see >= cfg.dinkelbach_tol => cur = p,
            _ => break,
        }
    }
    if let Some(err) = first_error {
        return Err(err);
    }
    Ok(OptResult {
        scheme: problem.scheme,
        p_a: cur.p_a,
        p_r: cur.p_r,
        rate,
        see: cur.eval.see,
        sop: cur.eval.sop,
        p_total: cur.eval.p_total,
        feasible: true,
        outer_iterations: outer,
        converged,
        evaluations,
        trace,
    })
}

fn better(a: &OptResult, b: &OptResult) -> bool {
    match (a.feasible, b.feasible) {
        (true, false) => true,
        (false, true) => false,
        (true, true) => a.see > b.see,
        (false, false) => a.sop < b.sop,
    }
}

/// Maximizes SEE jointly over `(P_A, P_R, R)` subject to `SOP ≤ φ`.
pub fn maximize_see(problem: &Problem, cfg: &OptConfig) -> Result<OptResult> {
    maximize_see_from(problem, cfg, &[])
}

/// [`maximize_see`] warm-started from earlier solutions, e.g. the optimum
/// for a neighbouring parameter value in a sweep. Their rates join the rate
/// scan and their powers seed every power allocation.
pub fn maximize_see_from(problem: &Problem, cfg: &OptConfig, seeds: &[OptResult]) -> Result<OptResult> {
    check_bounds(problem.params, cfg)?;
    let rate_max = match cfg.rate_max {
        Some(r) => r,
        None => problem.default_rate_max(cfg)?,
    };
    if !(rate_max > 0.0) {
        return Err(Error::Param(alloc::format!("rate bound {rate_max} leaves no positive rate")));
    }
    let starts: Vec<(f64, f64)> = seeds.iter().map(|s| (s.p_a, s.p_r)).collect();
    let mut best: Option<OptResult> = None;
    let mut evaluations = 0;
    let mut first_error: Option<Error> = None;
    let mut run = |rate: f64, best: &mut Option<OptResult>| -> f64 {
        match allocate_power_from(problem, rate, cfg, &starts) {
            Ok(r) => {
                evaluations += r.evaluations;
                let score = if r.feasible { r.see } else { f64::NEG_INFINITY };
                if best.as_ref().is_none_or(|b| better(&r, b)) {
                    *best = Some(r);
                }
                score
            }
            Err(e) => {
                first_error.get_or_insert(e);
                f64::NEG_INFINITY
            }
        }
    };
    let n = cfg.rate_scan;
    let step = rate_max / n as f64;
    let mut scan_best = (0usize, f64::NEG_INFINITY);
    for i in 1..=n {
        let v = run(step * i as f64, &mut best);
        if v > scan_best.1 {
            scan_best = (i, v);
        }
    }
    for s in seeds {
        if s.rate > 0.0 && s.rate <= rate_max {
            run(s.rate, &mut best);
        }
    }
    if scan_best.1 > f64::NEG_INFINITY {
        let i = scan_best.0;
        let a = step * (i - 1) as f64;
        let b = (step * (i + 1) as f64).min(rate_max);
        let a = a.max(step * 1e-3);
        brent_max(&mut |r| run(r, &mut best), a, b, cfg.rate_tol, 200);
    }
    if let Some(e) = first_error {
        return Err(e);
    }
    let mut out = best.expect("rate scan is non-empty");
    if let Some(b) = seeds.iter().filter(|s| s.feasible).max_by(|x, y| x.see.total_cmp(&y.see)) {
        // A seed is only a candidate if it is feasible under this config.
        if let Ok(e) = problem.evaluate(b.p_a.clamp(cfg.p_min, cfg.p_max), b.p_r.clamp(cfg.p_min, cfg.p_max), b.rate, cfg.jamming) {
            if e.sop <= cfg.sop_target && (!out.feasible || e.see > out.see) && b.rate <= rate_max {
                out = OptResult {
                    p_a: b.p_a.clamp(cfg.p_min, cfg.p_max),
                    p_r: b.p_r.clamp(cfg.p_min, cfg.p_max),
                    rate: b.rate,
                    see: e.see,
                    sop: e.sop,
                    p_total: e.p_total,
                    feasible: true,
                    ..out
                };
            }
        }
    }
    out.evaluations = evaluations;
    Ok(out)
}

/// Exhaustive search over an `n × n × n` grid: powers evenly spaced in
/// `(0, p_max]`, rates evenly spaced in `(0, rate_max]`. Returns the best
/// feasible point, or the lowest-SOP point when none is feasible.
pub fn grid_search(problem: &Problem, cfg: &OptConfig, n: usize) -> Result<OptResult> {
    check_bounds(problem.params, cfg)?;
    if n == 0 {
        return Err(Error::Param("grid resolution must be positive".into()));
    }
    let rate_max = match cfg.rate_max {
        Some(r) => r,
        None => problem.default_rate_max(cfg)?,
    };
    let mut best: Option<OptResult> = None;
    let mut evaluations = 0;
    for i in 1..=n {
        let p_a = cfg.p_max * i as f64 / n as f64;
        for j in 1..=n {
            let p_r = cfg.p_max * j as f64 / n as f64;
            for k in 1..=n {
                let rate = rate_max * k as f64 / n as f64;
                let e = problem.evaluate(p_a, p_r, rate, cfg.jamming)?;
                evaluations += 1;
                let r = OptResult {
                    scheme: problem.scheme,
                    p_a,
                    p_r,
                    rate,
                    see: e.see,
                    sop: e.sop,
                    p_total: e.p_total,
                    feasible: e.sop <= cfg.sop_target,
                    outer_iterations: 0,
                    converged: true,
                    evaluations: 0,
                    trace: Vec::new(),
                };
                if best.as_ref().is_none_or(|b| better(&r, b)) {
                    best = Some(r);
                }
            }
        }
    }
    let mut out = best.expect("grid is non-empty");
    out.evaluations = evaluations;
    Ok(out)
}
