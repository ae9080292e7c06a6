//! Reference computations for the integration tests.
//!
//! Everything here is built from textbook densities and brute-force
//! numerical integration, sharing no code with the library beyond its
//! public input types.

#![allow(dead_code)]

pub mod distributions;
pub mod quadrature;
pub mod specfun;

use statrs::function::gamma::{gamma_lr, ln_gamma};

const GK_NODES: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const KRONROD_WEIGHTS: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
const GAUSS_WEIGHTS: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

/// One 15-point Kronrod rule with the embedded 7-point Gauss rule as error
/// estimate.
fn gauss_kronrod<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64) {
    let (c, h) = (0.5 * (a + b), 0.5 * (b - a));
    let (mut k, mut g) = (0.0, 0.0);
    for (i, (&x, &wk)) in GK_NODES.iter().zip(&KRONROD_WEIGHTS).enumerate() {
        let fx = if x == 0.0 { f(c) } else { f(c - h * x) + f(c + h * x) };
        k += wk * fx;
        if i % 2 == 1 {
            g += GAUSS_WEIGHTS[i / 2] * fx;
        }
    }
    (k * h, (k - g).abs() * h)
}

/// Adaptive bisection driven by the Gauss–Kronrod error estimate.
pub fn adaptive<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, tol: f64, depth: u32) -> f64 {
    let (k, err) = gauss_kronrod(f, a, b);
    if err <= tol.max(64.0 * f64::EPSILON * k.abs()) || depth == 0 {
        k
    } else {
        let m = 0.5 * (a + b);
        adaptive(f, a, m, 0.5 * tol, depth - 1) + adaptive(f, m, b, 0.5 * tol, depth - 1)
    }
}

/// [`adaptive`] over `panels` equal sub-intervals, so that narrow features
/// of long integration ranges are not stepped over.
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, tol: f64, panels: usize) -> f64 {
    if b <= a {
        return 0.0;
    }
    let h = (b - a) / panels as f64;
    (0..panels)
        .map(|i| adaptive(&f, a + h * i as f64, a + h * (i + 1) as f64, tol / panels as f64, 40))
        .sum()
}

/// Point beyond which a Gamma(n, g) variable has negligible mass.
pub fn gamma_support(n: u32, g: f64) -> f64 {
    g * (n as f64 + 35.0)
}

pub fn gamma_pdf(x: f64, n: u32, g: f64) -> f64 {
    if x < 0.0 {
        return 0.0;
    }
    if x == 0.0 {
        return if n == 1 { 1.0 / g } else { 0.0 };
    }
    let n = n as f64;
    ((n - 1.0) * x.ln() - x / g - ln_gamma(n) - n * g.ln()).exp()
}

pub fn gamma_cdf(x: f64, n: u32, g: f64) -> f64 {
    if x <= 0.0 {
        0.0
    } else {
        gamma_lr(n as f64, x / g)
    }
}

/// Best of `n_tx` independent MRC branches, each Gamma(n_rx, g).
pub fn tas_cdf(x: f64, n_tx: u32, n_rx: u32, g: f64) -> f64 {
    gamma_cdf(x, n_rx, g).powi(n_tx as i32)
}

pub fn tas_pdf(x: f64, n_tx: u32, n_rx: u32, g: f64) -> f64 {
    if x <= 0.0 && n_rx > 1 {
        return 0.0;
    }
    n_tx as f64 * gamma_cdf(x, n_rx, g).powi(n_tx as i32 - 1) * gamma_pdf(x, n_rx, g)
}

/// CDF of `Gamma(n, g1) + Gamma(n, g2)` by one convolution integral.
pub fn eve_cdf(x: f64, n: u32, g1: f64, g2: f64) -> f64 {
    if x <= 0.0 {
        return 0.0;
    }
    // Integrating only over the support of the first density keeps every
    // Simpson panel on its mass; beyond that the second CDF is 1.
    let hi = x.min(gamma_support(n, g1));
    let beyond = gamma_cdf(x, n, g1) - gamma_cdf(hi, n, g1);
    integrate(|u| gamma_pdf(u, n, g1) * gamma_cdf(x - u, n, g2), 0.0, hi, 1e-12, 16) + beyond
}

/// Density of the sum of two independent TAS/MRC variables.
pub fn coop_pdf(x: f64, first: (u32, u32, f64), second: (u32, u32, f64)) -> f64 {
    if x <= 0.0 {
        return 0.0;
    }
    let support = |(n_tx, n_rx, g): (u32, u32, f64)| gamma_support(n_rx, g) * (1.0 + (n_tx as f64).ln());
    let lo = (x - support(second)).max(0.0);
    let hi = x.min(support(first));
    integrate(
        |y| tas_pdf(y, first.0, first.1, first.2) * tas_pdf(x - y, second.0, second.1, second.2),
        lo,
        hi,
        1e-12,
        16,
    )
}

/// Mean link SNRs of one test case (same field meaning as the library's).
#[derive(Debug, Clone, Copy)]
pub struct Case {
    pub n_a: u32,
    pub n_b: u32,
    pub n_r: u32,
    pub n_e: u32,
    pub ab: f64,
    pub ar: f64,
    pub rb: f64,
    pub ae: f64,
    pub re: f64,
    pub rate: f64,
}

impl Case {
    fn x0(&self) -> f64 {
        (2f64).powf(2.0 * self.rate) - 1.0
    }

    fn a(&self) -> f64 {
        (2f64).powf(-2.0 * self.rate)
    }

    /// `Pr{γ_E > a(1 + X) − 1} = 1 − ∫_{x₀}^∞ f_X(t) F_E(a(t − x₀)) dt`.
    fn outage_given<F: Fn(f64) -> f64>(&self, pdf: F, hi: f64) -> f64 {
        let (x0, a) = (self.x0(), self.a());
        let eve = |e: f64| eve_cdf(e, self.n_e, self.ae, self.re);
        1.0 - integrate(|t| pdf(t) * eve(a * (t - x0)), x0, x0.max(hi), 1e-10, 64)
    }

    pub fn o_abe(&self) -> f64 {
        let hi = gamma_support(self.n_b, self.ab) * (1.0 + (self.n_a as f64).ln());
        self.outage_given(|t| tas_pdf(t, self.n_a, self.n_b, self.ab), hi)
    }

    pub fn o_are(&self) -> f64 {
        self.outage_given(|t| gamma_pdf(t, self.n_r, self.ar), gamma_support(self.n_r, self.ar))
    }

    pub fn o_be(&self) -> f64 {
        let hi = (gamma_support(self.n_b, self.ab) + gamma_support(self.n_b, self.rb))
            * (1.0 + (self.n_a.max(self.n_r) as f64).ln());
        self.outage_given(
            |t| coop_pdf(t, (self.n_a, self.n_b, self.ab), (self.n_r, self.n_b, self.rb)),
            hi,
        )
    }

    /// `Pr{(1 + γ_AB)/(1 + γ_AE/γ_I) < 2^{2R}}` with `γ_I ~ Gamma(n_r, θ)`,
    /// integrated over `γ_I` and `γ_AE` directly.
    pub fn an(&self, theta: f64) -> f64 {
        let (x0, b) = (self.x0(), (2f64).powf(2.0 * self.rate));
        let inner = |g: f64| {
            if g <= 0.0 {
                return 0.0;
            }
            integrate(
                |e| gamma_pdf(e, self.n_e, self.ae) * tas_cdf(x0 + b * e / g, self.n_a, self.n_b, self.ab),
                0.0,
                gamma_support(self.n_e, self.ae),
                1e-11,
                16,
            )
        };
        integrate(|g| gamma_pdf(g, self.n_r, theta) * inner(g), 0.0, gamma_support(self.n_r, theta), 1e-10, 32)
    }
}

/// Kolmogorov–Smirnov distance between a sample and a continuous CDF.
pub fn ks_statistic<F: Fn(f64) -> f64>(mut samples: Vec<f64>, cdf: F) -> f64 {
    samples.sort_by(f64::total_cmp);
    let n = samples.len() as f64;
    samples
        .iter()
        .enumerate()
        .map(|(i, &x)| {
            let c = cdf(x);
            (c - i as f64 / n).abs().max(((i + 1) as f64 / n - c).abs())
        })
        .fold(0.0, f64::max)
}

/// Asymptotic KS critical value at significance `alpha`.
pub fn ks_critical(n: usize, alpha: f64) -> f64 {
    (-0.5 * (alpha / 2.0).ln()).sqrt() / (n as f64).sqrt()
}
