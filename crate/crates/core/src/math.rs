//! Small numeric helpers shared by the closed forms.

#[allow(unused_imports)] // unused when std is linked into the build graph
use num_traits::Float;

const FACTORIAL_LEN: usize = 171;

static FACTORIALS: [f64; FACTORIAL_LEN] = factorial_table();

const fn factorial_table() -> [f64; FACTORIAL_LEN] {
    let mut t = [1.0; FACTORIAL_LEN];
    let mut i = 1;
    while i < FACTORIAL_LEN {
        t[i] = t[i - 1] * i as f64;
        i += 1;
    }
    t
}

/// `n!` for `n <= 170`, `inf` beyond.
pub fn factorial(n: u32) -> f64 {
    FACTORIALS.get(n as usize).copied().unwrap_or(f64::INFINITY)
}

pub fn ln_factorial(n: u32) -> f64 {
    match FACTORIALS.get(n as usize) {
        Some(f) => f.ln(),
        None => crate::specfun::ln_gamma(n as f64 + 1.0),
    }
}

pub fn binomial(n: u32, k: u32) -> f64 {
    if k > n {
        return 0.0;
    }
    let k = k.min(n - k);
    let mut c = 1.0;
    for i in 0..k {
        c = c * (n - i) as f64 / (i + 1) as f64;
    }
    c.round()
}

pub fn ln_binomial(n: u32, k: u32) -> f64 {
    if n <= 60 {
        return binomial(n, k).ln();
    }
    ln_factorial(n) - ln_factorial(k) - ln_factorial(n - k)
}

/// Compensated (Neumaier) summation.
#[derive(Debug, Default, Clone, Copy)]
pub struct Sum {
    sum: f64,
    comp: f64,
}

impl Sum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

pub fn clamp_prob(p: f64) -> f64 {
    p.clamp(0.0, 1.0)
}
