//! Signed mixtures of Erlang distributions.
//!
//! Every SNR law in the model is a finite combination
//! `Σ wᵢ · Erlang(kᵢ, λᵢ)` with real (possibly negative) weights summing to
//! one: MRC is a single Erlang, TAS/MRC expands the `n_tx`-th power of the
//! MRC CDF binomially, and sums of independent SNRs are convolutions, which
//! stay inside the family. The outage kernel [`outage`] then integrates the
//! eavesdropper survival function against such a density in closed form.
//!
//! Terms are grouped by rate; within a group the weights are stored densely
//! by shape so that convolution and the outage kernel work on whole
//! polynomial blocks.
//!
//! Two rates that are close make the partial-fraction expansion of a
//! convolution ill-conditioned. When the smaller rate is at least half the
//! larger one, the slower Erlang is instead re-expanded exactly onto the
//! faster rate as a negative-binomial mixture with positive weights, which
//! converges geometrically and has no cancellation.

use alloc::vec;
use alloc::vec::Vec;

#[allow(unused_imports)] // unused when std is linked into the build graph
use num_traits::Float;

use crate::math::{binomial, factorial, ln_binomial, ln_factorial, Sum};
use crate::specfun::reg_lower_gamma;

/// Rates closer than this ratio (smaller/larger) are merged by
/// re-expansion instead of partial fractions.
const SNAP_RATIO: f64 = 0.5;

/// Partial fractions whose coefficients would exceed this magnitude are
/// replaced by re-expansion, whatever the rate ratio.
const PF_MAGNITUDE_LIMIT: f64 = 1e6;

/// Series re-expansion stops once terms fall below this weight.
const SERIES_CUTOFF: f64 = 1e-18;

const MAX_SERIES_TERMS: usize = 4000;

/// All Erlang terms sharing one rate. `weights[k]` multiplies
/// `Erlang(k + 1, rate)`.
#[derive(Debug, Clone, PartialEq)]
pub struct RateGroup {
    pub rate: f64,
    pub weights: Vec<f64>,
}

impl RateGroup {
    fn add(&mut self, shape: usize, w: f64) {
        if self.weights.len() < shape {
            self.weights.resize(shape, 0.0);
        }
        self.weights[shape - 1] += w;
    }

    fn max_shape(&self) -> usize {
        self.weights.len()
    }
}

/// A signed mixture of Erlang densities.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct ErlangMix {
    groups: Vec<RateGroup>,
}

impl ErlangMix {
    pub fn new() -> Self {
        Self::default()
    }

    /// A single `Erlang(shape, rate)`.
    pub fn single(shape: u32, rate: f64) -> Self {
        let mut mix = Self::new();
        mix.add_term(shape as usize, rate, 1.0);
        mix
    }

    /// MRC over `n_rx` branches with mean branch SNR `g_bar`.
    pub fn mrc(n_rx: u32, g_bar: f64) -> Self {
        Self::single(n_rx, 1.0 / g_bar)
    }

    /// TAS over `n_tx` antennas followed by MRC over `n_rx` branches.
    ///
    /// Expands `n_tx F^{n_tx−1} f` with `F`, `f` the MRC CDF and density:
    /// `F^{k} = e^{−kx/γ̄} (Σ_{w<n_rx} (x/γ̄)^w/w!)^k` expanded in powers of
    /// `x/γ̄` gives Erlang terms of rate `(k+1)/γ̄`.
    pub fn tas_mrc(n_tx: u32, n_rx: u32, g_bar: f64) -> Self {
        let mut mix = Self::new();
        let ln_n_tx = (n_tx as f64).ln();
        let ln_rx_fact = ln_factorial(n_rx - 1);
        for k in 0..n_tx {
            let coeffs = truncated_exp_power(n_rx, k);
            let rate = (k + 1) as f64 / g_bar;
            let ln_k1 = ((k + 1) as f64).ln();
            let negative = k % 2 == 1;
            let ln_choose = ln_binomial(n_tx - 1, k);
            for (j, &c) in coeffs.iter().enumerate() {
                if c == 0.0 {
                    continue;
                }
                let shape = j as u32 + n_rx;
                let ln_w = ln_n_tx + ln_choose + c.ln() + ln_factorial(shape - 1)
                    - ln_rx_fact
                    - shape as f64 * ln_k1;
                let w = ln_w.exp();
                mix.add_term(shape as usize, rate, if negative { -w } else { w });
            }
        }
        mix
    }

    pub fn groups(&self) -> &[RateGroup] {
        &self.groups
    }

    pub fn add_term(&mut self, shape: usize, rate: f64, weight: f64) {
        debug_assert!(shape >= 1 && rate > 0.0);
        match self.groups.iter_mut().find(|g| g.rate == rate) {
            Some(g) => g.add(shape, weight),
            None => {
                let mut g = RateGroup {
                    rate,
                    weights: Vec::new(),
                };
                g.add(shape, weight);
                self.groups.push(g);
                self.groups.sort_by(|a, b| a.rate.total_cmp(&b.rate));
            }
        }
    }

    /// Number of stored (shape, rate) slots.
    pub fn len(&self) -> usize {
        self.groups.iter().map(|g| g.weights.len()).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.groups.is_empty()
    }

    pub fn total_weight(&self) -> f64 {
        let mut s = Sum::new();
        for g in &self.groups {
            for &w in &g.weights {
                s.add(w);
            }
        }
        s.value()
    }

    /// `Σ|wᵢ|`; the ratio to [`total_weight`](Self::total_weight) bounds the
    /// relative cancellation of any evaluation.
    pub fn abs_weight(&self) -> f64 {
        self.groups
            .iter()
            .flat_map(|g| g.weights.iter())
            .map(|w| w.abs())
            .sum()
    }

    pub fn max_shape(&self) -> usize {
        self.groups.iter().map(RateGroup::max_shape).max().unwrap_or(0)
    }

    /// Density of the sum of two independent variables.
    pub fn convolve(&self, other: &Self) -> Self {
        let mut out = Self::new();
        for ga in &self.groups {
            for gb in &other.groups {
                convolve_groups(ga, gb, &mut out);
            }
        }
        out
    }

    pub fn pdf(&self, x: f64) -> f64 {
        if x < 0.0 {
            return 0.0;
        }
        let mut s = Sum::new();
        for g in &self.groups {
            let y = g.rate * x;
            for (k, &w) in g.weights.iter().enumerate() {
                if w == 0.0 {
                    continue;
                }
                let dens = if k == 0 {
                    g.rate * (-y).exp()
                } else if y == 0.0 {
                    0.0
                } else {
                    g.rate * (k as f64 * y.ln() - y - ln_factorial(k as u32)).exp()
                };
                s.add(w * dens);
            }
        }
        s.value()
    }

    pub fn cdf(&self, x: f64) -> f64 {
        if x <= 0.0 {
            return 0.0;
        }
        let mut s = Sum::new();
        for g in &self.groups {
            for (k, &w) in g.weights.iter().enumerate() {
                if w != 0.0 {
                    s.add(w * reg_lower_gamma((k + 1) as f64, g.rate * x).unwrap_or(f64::NAN));
                }
            }
        }
        s.value()
    }

    pub fn survival(&self, x: f64) -> f64 {
        if x <= 0.0 {
            return self.total_weight();
        }
        let mut s = Sum::new();
        for g in &self.groups {
            let pois = poisson_pmf(g.rate * x, g.weights.len());
            let mut cum = 0.0;
            for (k, &w) in g.weights.iter().enumerate() {
                cum += pois[k];
                s.add(w * cum);
            }
        }
        s.value()
    }
}

/// Coefficients of `(Σ_{w<n} t^w / w!)^k` in powers of `t`.
pub fn truncated_exp_power(n: u32, k: u32) -> Vec<f64> {
    let base: Vec<f64> = (0..n).map(|w| 1.0 / factorial(w)).collect();
    let mut acc = vec![1.0];
    for _ in 0..k {
        let mut next = vec![0.0; acc.len() + base.len() - 1];
        for (i, &a) in acc.iter().enumerate() {
            for (j, &b) in base.iter().enumerate() {
                next[i + j] += a * b;
            }
        }
        acc = next;
    }
    acc
}

/// Poisson probabilities `P{N = i}`, `i < len`, for mean `mean`.
fn poisson_pmf(mean: f64, len: usize) -> Vec<f64> {
    let mut out = vec![0.0; len];
    if len == 0 {
        return out;
    }
    if mean == 0.0 {
        out[0] = 1.0;
        return out;
    }
    let ln_mean = mean.ln();
    for (i, slot) in out.iter_mut().enumerate() {
        *slot = (i as f64 * ln_mean - mean - ln_factorial(i as u32)).exp();
    }
    out
}

/// Weights of `Erlang(shape, slow)` re-expanded on the faster rate `fast`:
/// `Σ_n (slow/fast)^shape C(shape+n−1, n) (1 − slow/fast)^n Erlang(shape+n, fast)`.
fn re_expand(shape: usize, slow: f64, fast: f64) -> Vec<f64> {
    let ratio = slow / fast;
    let delta = 1.0 - ratio;
    if delta <= 0.0 {
        return vec![1.0];
    }
    let m = shape as f64;
    let mut out = Vec::new();
    // log of the first weight; later weights by recurrence
    let mut w = (m * ratio.ln()).exp();
    let mode = ((m - 1.0) * delta / ratio).max(0.0);
    let mut total = 0.0;
    for n in 0..MAX_SERIES_TERMS {
        out.push(w);
        total += w;
        if (n as f64) > mode && (w < SERIES_CUTOFF || 1.0 - total < SERIES_CUTOFF) {
            break;
        }
        w *= (m + n as f64) / (n as f64 + 1.0) * delta;
    }
    out
}

/// Same-rate convolution: shapes add.
fn convolve_same_rate(a: &[f64], b: &[f64], rate: f64, out: &mut ErlangMix) {
    for (i, &wa) in a.iter().enumerate() {
        if wa == 0.0 {
            continue;
        }
        for (j, &wb) in b.iter().enumerate() {
            if wb != 0.0 {
                out.add_term(i + j + 2, rate, wa * wb);
            }
        }
    }
}

fn re_expand_group(g: &RateGroup, fast: f64) -> Vec<f64> {
    let mut dense: Vec<f64> = Vec::new();
    for (k, &w) in g.weights.iter().enumerate() {
        if w == 0.0 {
            continue;
        }
        let series = re_expand(k + 1, g.rate, fast);
        let need = k + series.len();
        if dense.len() < need {
            dense.resize(need, 0.0);
        }
        for (n, s) in series.iter().enumerate() {
            dense[k + n] += w * s;
        }
    }
    dense
}

fn convolve_groups(ga: &RateGroup, gb: &RateGroup, out: &mut ErlangMix) {
    let (slow, fast) = if ga.rate <= gb.rate { (ga, gb) } else { (gb, ga) };
    if slow.rate == fast.rate {
        convolve_same_rate(&ga.weights, &gb.weights, ga.rate, out);
        return;
    }
    if slow.rate / fast.rate >= SNAP_RATIO
        || pf_magnitude(ga.max_shape(), ga.rate, gb.max_shape(), gb.rate) > PF_MAGNITUDE_LIMIT
    {
        let moved = re_expand_group(slow, fast.rate);
        convolve_same_rate(&moved, &fast.weights, fast.rate, out);
        return;
    }
    for (i, &wa) in ga.weights.iter().enumerate() {
        if wa == 0.0 {
            continue;
        }
        for (j, &wb) in gb.weights.iter().enumerate() {
            if wb != 0.0 {
                partial_fractions(i + 1, ga.rate, j + 1, gb.rate, wa * wb, out);
            }
        }
    }
}

/// Largest partial-fraction coefficient of `Erlang(m1, l1) ⊛ Erlang(m2, l2)`,
/// bounded by its value at `i = 1` on each side.
fn pf_magnitude(m1: usize, l1: f64, m2: usize, l2: f64) -> f64 {
    let r21 = (l2 / (l2 - l1)).abs();
    let r12 = (l1 / (l1 - l2)).abs();
    let side = |ma: usize, mb: usize, ra: f64, rb: f64| {
        (0..ma)
            .map(|e| binomial((mb + e) as u32 - 1, e as u32) * rb.powi(mb as i32) * ra.powi(e as i32))
            .fold(0.0, f64::max)
    };
    side(m1, m2, r12, r21).max(side(m2, m1, r21, r12))
}

/// `Erlang(m1, l1) ⊛ Erlang(m2, l2)` for distinct rates:
/// `Σ_{i≤m1} C(m1+m2−i−1, m1−i) (l2/(l2−l1))^{m2} (l1/(l1−l2))^{m1−i} Erlang(i, l1)`
/// plus the mirror-image sum on `l2`.
fn partial_fractions(m1: usize, l1: f64, m2: usize, l2: f64, scale: f64, out: &mut ErlangMix) {
    let r21 = l2 / (l2 - l1);
    let r12 = l1 / (l1 - l2);
    for i in 1..=m1 {
        let c = binomial((m1 + m2 - i - 1) as u32, (m1 - i) as u32);
        out.add_term(i, l1, scale * c * r21.powi(m2 as i32) * r12.powi((m1 - i) as i32));
    }
    for j in 1..=m2 {
        let c = binomial((m1 + m2 - j - 1) as u32, (m2 - j) as u32);
        out.add_term(j, l2, scale * c * r12.powi(m1 as i32) * r21.powi((m2 - j) as i32));
    }
}

/// `Pr{E > a(1+X) − 1}` for independent `X` and `E`, with
/// `a = 2^{−2·rate}`. This is the probability that the secrecy capacity
/// `½log₂(1+X) − ½log₂(1+E)` falls below `rate`.
///
/// With `x₀ = 2^{2·rate} − 1` the event holds outright when `X < x₀`; above
/// it, each pair of Erlang terms integrates to a finite double sum of
/// Poisson and negative-binomial probabilities.
pub fn outage(x: &ErlangMix, eve: &ErlangMix, rate: f64) -> f64 {
    let a = (-2.0 * rate * core::f64::consts::LN_2).exp();
    let x0 = (2.0 * rate * core::f64::consts::LN_2).exp_m1();
    let mut total = Sum::new();
    // Eve survival grouped by rate: e^{−μy} Σ_q V_q (μy)^q / q!
    let eve_tails: Vec<(f64, Vec<f64>)> = eve
        .groups
        .iter()
        .map(|g| {
            let mut tail = vec![0.0; g.weights.len()];
            let mut acc = 0.0;
            for q in (0..g.weights.len()).rev() {
                acc += g.weights[q];
                tail[q] = acc;
            }
            (g.rate, tail)
        })
        .collect();
    for g in &x.groups {
        let m_max = g.weights.len();
        let pois = poisson_pmf(g.rate * x0, m_max);
        // Pr{X < x₀} for this group
        let mut cum = 0.0;
        for (k, &w) in g.weights.iter().enumerate() {
            cum += pois[k];
            if w != 0.0 {
                total.add(w * (1.0 - cum).max(0.0));
            }
        }
        for (mu, tail) in &eve_tails {
            let s = g.rate + mu * a;
            let u = g.rate / s;
            let v = mu * a / s;
            // T_p = u^{p+1} Σ_{q<N} V_q C(p+q, q) v^q
            let mut nb_weights = vec![0.0; m_max];
            let mut up = u;
            for slot in nb_weights.iter_mut() {
                *slot = up;
                up *= u;
            }
            for (p, slot) in nb_weights.iter_mut().enumerate() {
                let mut c = *slot;
                let mut acc = 0.0;
                for (q, &vq) in tail.iter().enumerate() {
                    acc += vq * c;
                    c *= (p + q + 1) as f64 / (q + 1) as f64 * v;
                }
                *slot = acc;
            }
            for (k, &w) in g.weights.iter().enumerate() {
                if w == 0.0 {
                    continue;
                }
                let mut acc = 0.0;
                for p in 0..=k {
                    acc += pois[k - p] * nb_weights[p];
                }
                total.add(w * acc);
            }
        }
    }
    total.value()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fading::{cdf_tas_mrc, pdf_mrc, pdf_tas_mrc};
    use crate::quad::{integrate, QuadConfig};

    #[test]
    fn exp_power_coefficients() {
        // (1 + t + t²/2)² = 1 + 2t + 2t² + t³ + t⁴/4
        let c = truncated_exp_power(3, 2);
        let want = [1.0, 2.0, 2.0, 1.0, 0.25];
        assert_eq!(c.len(), want.len());
        for (a, b) in c.iter().zip(want) {
            assert!((a - b).abs() < 1e-15);
        }
        assert_eq!(truncated_exp_power(4, 0), vec![1.0]);
    }

    #[test]
    fn tas_mrc_mixture_matches_direct_density() {
        for n_tx in 1..=4 {
            for n_rx in 1..=4 {
                let g = 1.3;
                let mix = ErlangMix::tas_mrc(n_tx, n_rx, g);
                assert!((mix.total_weight() - 1.0).abs() < 1e-12);
                for &x in &[0.05, 0.7, 2.0, 6.0, 15.0] {
                    let want = pdf_tas_mrc(x, n_tx, n_rx, g);
                    assert!((mix.pdf(x) - want).abs() < 1e-12, "({n_tx},{n_rx}) x={x}");
                    let cw = cdf_tas_mrc(x, n_tx, n_rx, g);
                    assert!((mix.cdf(x) - cw).abs() < 1e-12);
                    assert!((mix.survival(x) - (1.0 - cw)).abs() < 1e-12);
                }
            }
        }
    }

    fn numeric_convolution(f: impl Fn(f64) -> f64, g: impl Fn(f64) -> f64, x: f64) -> f64 {
        integrate(|y| f(x - y) * g(y), 0.0, x, &QuadConfig::with_tol(1e-15, 1e-13)).value
    }

    #[test]
    fn convolution_partial_fractions() {
        let a = ErlangMix::single(2, 1.0);
        let b = ErlangMix::single(3, 4.0);
        let c = a.convolve(&b);
        assert!((c.total_weight() - 1.0).abs() < 1e-13);
        for &x in &[0.1, 1.0, 3.0, 8.0] {
            let want = numeric_convolution(|t| pdf_mrc(t, 2, 1.0), |t| pdf_mrc(t, 3, 0.25), x);
            assert!((c.pdf(x) - want).abs() < 1e-12, "x={x}");
        }
    }

    #[test]
    fn convolution_near_equal_rates_is_stable() {
        // rates within 1e-9 and 30 %: both go through the re-expansion
        for &fast in &[1.0 + 1e-9, 1.3, 1.999] {
            let a = ErlangMix::tas_mrc(2, 3, 1.0);
            let b = ErlangMix::tas_mrc(3, 2, 1.0 / fast);
            let c = a.convolve(&b);
            assert!((c.total_weight() - 1.0).abs() < 1e-12);
            assert!(c.abs_weight() < 1e3);
            for &x in &[0.2, 2.0, 9.0] {
                let want = numeric_convolution(|t| pdf_tas_mrc(t, 2, 3, 1.0), |t| pdf_tas_mrc(t, 3, 2, 1.0 / fast), x);
                assert!((c.pdf(x) - want).abs() < 1e-11, "fast={fast} x={x}");
            }
        }
    }

    #[test]
    fn equal_rate_convolution_is_erlang() {
        let c = ErlangMix::mrc(2, 0.5).convolve(&ErlangMix::mrc(3, 0.5));
        assert_eq!(c, ErlangMix::single(5, 2.0));
    }

    #[test]
    fn re_expansion_weights_sum_to_one() {
        for &(m, r) in &[(1usize, 0.5), (4, 0.51), (7, 0.9), (3, 0.999_999)] {
            let w = re_expand(m, r, 1.0);
            let s: f64 = w.iter().sum();
            assert!((s - 1.0).abs() < 1e-14, "m={m} r={r} s={s}");
        }
    }

    #[test]
    fn outage_limits() {
        let x = ErlangMix::tas_mrc(2, 2, 5.0);
        let eve = ErlangMix::mrc(2, 1.0).convolve(&ErlangMix::mrc(2, 3.0));
        // zero rate, silent Eve: never in outage
        let silent = ErlangMix::mrc(2, 1e-12).convolve(&ErlangMix::mrc(2, 2e-12));
        assert!(outage(&x, &silent, 0.0).abs() < 1e-9);
        // huge rate: always in outage
        assert!((outage(&x, &eve, 50.0) - 1.0).abs() < 1e-9);
        // silent Eve at positive rate: Pr{X < 2^{2R} − 1}
        let r = 0.7;
        let x0 = 2f64.powf(2.0 * r) - 1.0;
        assert!((outage(&x, &silent, r) - cdf_tas_mrc(x0, 2, 2, 5.0)).abs() < 1e-9);
    }

    #[test]
    fn outage_matches_quadrature() {
        let x = ErlangMix::tas_mrc(2, 3, 4.0);
        let eve = ErlangMix::mrc(2, 0.8).convolve(&ErlangMix::mrc(2, 1.1));
        for &r in &[0.0, 0.3, 1.0, 2.5] {
            let a = 2f64.powf(-2.0 * r);
            let x0 = 1.0 / a - 1.0;
            let tail = integrate(
                |t| x.pdf(t) * eve.survival(a * (t - x0)),
                x0,
                x0 + 400.0,
                &QuadConfig::with_tol(1e-14, 1e-12),
            )
            .value;
            let want = x.cdf(x0) + tail;
            assert!((outage(&x, &eve, r) - want).abs() < 1e-10, "r={r}");
        }
    }
}
