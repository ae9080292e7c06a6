//! Special functions used by the outage closed forms.
//!
//! * lower incomplete gamma γ(s, x) and its regularized forms,
//! * Gauss hypergeometric ₂F₁(a, b; c; z) for real |z| < 1,
//! * Tricomi's confluent hypergeometric U(a, b, z) (also written Ψ).

use core::f64::consts::PI;

#[allow(unused_imports)] // unused when std is linked into the build graph
use num_traits::Float;

use crate::error::{domain, Result};
use crate::math::factorial;
use crate::quad::{integrate_to_infinity, QuadConfig};

const EPS: f64 = 1e-16;
const MAX_SERIES: usize = 100_000;

const LANCZOS_G: f64 = 7.0;
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_9,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_1,
    -176.615_029_162_140_6,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_572e-6,
    1.505_632_735_149_311_6e-7,
];

fn as_small_int(x: f64) -> Option<u32> {
    if (1.0..=171.0).contains(&x) && x.fract() == 0.0 {
        Some(x as u32)
    } else {
        None
    }
}

/// `ln |Γ(x)|`.
pub fn ln_gamma(x: f64) -> f64 {
    if let Some(n) = as_small_int(x) {
        return factorial(n - 1).ln();
    }
    if x < 0.5 {
        // Γ(x)Γ(1-x) = π / sin(πx)
        return (PI / (PI * x).sin().abs()).ln() - ln_gamma(1.0 - x);
    }
    let x = x - 1.0;
    let mut acc = LANCZOS[0];
    for (i, &c) in LANCZOS.iter().enumerate().skip(1) {
        acc += c / (x + i as f64);
    }
    let t = x + LANCZOS_G + 0.5;
    0.5 * (2.0 * PI).ln() + (x + 0.5) * t.ln() - t + acc.ln()
}

/// `Γ(x)`; infinite at the poles.
pub fn gamma(x: f64) -> f64 {
    if let Some(n) = as_small_int(x) {
        return factorial(n - 1);
    }
    if x <= 0.0 && x.fract() == 0.0 {
        return f64::INFINITY;
    }
    if x < 0.5 {
        return PI / ((PI * x).sin() * gamma(1.0 - x));
    }
    ln_gamma(x).exp()
}

/// `1/Γ(x)`, which is zero at the poles.
pub fn rgamma(x: f64) -> f64 {
    if x <= 0.0 && x.fract() == 0.0 {
        return 0.0;
    }
    1.0 / gamma(x)
}

/// Digamma ψ(x) = Γ'(x)/Γ(x).
pub fn digamma(x: f64) -> f64 {
    if x <= 0.0 && x.fract() == 0.0 {
        return f64::NAN;
    }
    if x < 0.0 {
        return digamma(1.0 - x) - PI / (PI * x).tan();
    }
    let mut x = x;
    let mut acc = 0.0;
    while x < 10.0 {
        acc -= 1.0 / x;
        x += 1.0;
    }
    let x2 = 1.0 / (x * x);
    // Bernoulli tail: -1/12, 1/120, -1/252, 1/240, -1/132, 691/32760
    let tail = x2
        * (-1.0 / 12.0
            + x2 * (1.0 / 120.0
                + x2 * (-1.0 / 252.0 + x2 * (1.0 / 240.0 + x2 * (-1.0 / 132.0 + x2 * 691.0 / 32760.0)))));
    acc + x.ln() - 0.5 / x + tail
}

/// Series for γ(s, x) e^{x} x^{-s}, valid and fast for x < s + 1.
fn lower_gamma_series(s: f64, x: f64) -> f64 {
    let mut ap = s;
    let mut del = 1.0 / s;
    let mut sum = del;
    for _ in 0..MAX_SERIES {
        ap += 1.0;
        del *= x / ap;
        sum += del;
        if del.abs() < sum.abs() * EPS {
            break;
        }
    }
    sum
}

/// Continued fraction for Γ(s, x) e^{x} x^{-s}, valid for x ≥ s + 1.
fn upper_gamma_cf(s: f64, x: f64) -> f64 {
    const TINY: f64 = 1e-300;
    let mut b = x + 1.0 - s;
    let mut c = 1.0 / TINY;
    let mut d = 1.0 / b;
    let mut h = d;
    for i in 1..MAX_SERIES {
        let an = -(i as f64) * (i as f64 - s);
        b += 2.0;
        d = an * d + b;
        if d.abs() < TINY {
            d = TINY;
        }
        c = b + an / c;
        if c.abs() < TINY {
            c = TINY;
        }
        d = 1.0 / d;
        let del = d * c;
        h *= del;
        if (del - 1.0).abs() < EPS {
            break;
        }
    }
    h
}

fn check_gamma_args(s: f64, x: f64) -> Result<()> {
    if !(s > 0.0) || !s.is_finite() {
        return Err(domain("s", s));
    }
    if !(x >= 0.0) {
        return Err(domain("x", x));
    }
    Ok(())
}

/// Regularized lower incomplete gamma P(s, x) = γ(s, x)/Γ(s).
pub fn reg_lower_gamma(s: f64, x: f64) -> Result<f64> {
    check_gamma_args(s, x)?;
    if x == 0.0 {
        return Ok(0.0);
    }
    if x.is_infinite() {
        return Ok(1.0);
    }
    let log_prefactor = -x + s * x.ln() - ln_gamma(s);
    if x < s + 1.0 {
        Ok((log_prefactor.exp() * lower_gamma_series(s, x)).min(1.0))
    } else {
        Ok((1.0 - log_prefactor.exp() * upper_gamma_cf(s, x)).max(0.0))
    }
}

/// Regularized upper incomplete gamma Q(s, x) = 1 − P(s, x).
pub fn reg_upper_gamma(s: f64, x: f64) -> Result<f64> {
    check_gamma_args(s, x)?;
    if x == 0.0 {
        return Ok(1.0);
    }
    if x.is_infinite() {
        return Ok(0.0);
    }
    let log_prefactor = -x + s * x.ln() - ln_gamma(s);
    if x < s + 1.0 {
        Ok((1.0 - log_prefactor.exp() * lower_gamma_series(s, x)).max(0.0))
    } else {
        Ok((log_prefactor.exp() * upper_gamma_cf(s, x)).min(1.0))
    }
}

/// Lower incomplete gamma γ(s, x) = ∫₀ˣ t^{s−1} e^{−t} dt.
pub fn lower_inc_gamma(s: f64, x: f64) -> Result<f64> {
    check_gamma_args(s, x)?;
    if x == 0.0 {
        return Ok(0.0);
    }
    if x < s + 1.0 {
        Ok((-x + s * x.ln()).exp() * lower_gamma_series(s, x))
    } else {
        Ok(gamma(s) * reg_lower_gamma(s, x)?)
    }
}

fn is_nonpositive_int(x: f64) -> bool {
    x <= 0.0 && x.fract() == 0.0
}

/// Plain power series of ₂F₁; also exact for terminating parameters.
fn hyp2f1_series(a: f64, b: f64, c: f64, z: f64) -> f64 {
    let mut term = 1.0;
    let mut sum = 1.0;
    let mut small = 0;
    for n in 0..MAX_SERIES * 10 {
        let nf = n as f64;
        term *= (a + nf) * (b + nf) / ((c + nf) * (nf + 1.0)) * z;
        sum += term;
        if term == 0.0 {
            break;
        }
        if term.abs() <= EPS * sum.abs() {
            small += 1;
            if small >= 3 {
                break;
            }
        } else {
            small = 0;
        }
    }
    sum
}

/// ₂F₁(a, b; a+b+m; z) for integer m ≥ 0 and 0.5 < z < 1, through the
/// logarithmic form of the 1−z connection formula.
fn hyp2f1_int_m(a: f64, b: f64, m: u32, z: f64) -> f64 {
    let w = 1.0 - z;
    let mf = m as f64;
    let c = a + b + mf;
    let mut finite = 0.0;
    if m > 0 {
        let pref = gamma(mf) * gamma(c) * rgamma(a + mf) * rgamma(b + mf);
        let mut term = 1.0;
        for k in 0..m {
            let kf = k as f64;
            finite += term;
            term *= (a + kf) * (b + kf) / ((kf + 1.0) * (1.0 - mf + kf)) * w;
        }
        finite *= pref;
    }
    let pref = gamma(c) * rgamma(a) * rgamma(b) * (-w).powi(m as i32);
    if pref == 0.0 {
        return finite;
    }
    let ln_w = w.ln();
    let mut coeff = 1.0 / factorial(m);
    let mut tail = 0.0;
    let mut small = 0;
    for k in 0..MAX_SERIES {
        let kf = k as f64;
        let psi = ln_w - digamma(kf + 1.0) - digamma(kf + mf + 1.0)
            + digamma(a + kf + mf)
            + digamma(b + kf + mf);
        let term = coeff * psi;
        tail += term;
        if term.abs() <= EPS * tail.abs() {
            small += 1;
            if small >= 3 {
                break;
            }
        } else {
            small = 0;
        }
        coeff *= (a + mf + kf) * (b + mf + kf) / ((kf + 1.0) * (kf + mf + 1.0)) * w;
    }
    finite - pref * tail
}

/// Gauss hypergeometric function ₂F₁(a, b; c; z) for real −1 < z < 1.
///
/// Uses the power series for |z| ≤ 1/2, the Pfaff transformation for
/// z < −1/2, and the 1−z connection formulas for z > 1/2 (including the
/// logarithmic case where c − a − b is an integer).
pub fn gauss_2f1(a: f64, b: f64, c: f64, z: f64) -> Result<f64> {
    for (name, v) in [("a", a), ("b", b), ("c", c), ("z", z)] {
        if !v.is_finite() {
            return Err(domain(name, v));
        }
    }
    if is_nonpositive_int(c) {
        return Err(domain("c", c));
    }
    if z.abs() >= 1.0 {
        return Err(domain("z", z));
    }
    if z == 0.0 {
        return Ok(1.0);
    }
    if is_nonpositive_int(a) || is_nonpositive_int(b) {
        return Ok(hyp2f1_series(a, b, c, z));
    }
    if z < -0.5 {
        // Pfaff: (1−z)^{−a} ₂F₁(a, c−b; c; z/(z−1))
        return Ok((1.0 - z).powf(-a) * gauss_2f1(a, c - b, c, z / (z - 1.0))?);
    }
    if z <= 0.5 {
        return Ok(hyp2f1_series(a, b, c, z));
    }
    let m = c - a - b;
    let m_round = m.round();
    if m == m_round {
        if m >= 0.0 {
            return Ok(hyp2f1_int_m(a, b, m as u32, z));
        }
        // Euler: (1−z)^{c−a−b} ₂F₁(c−a, c−b; c; z), whose excess is −m > 0.
        let ap = c - a;
        let bp = c - b;
        if is_nonpositive_int(ap) || is_nonpositive_int(bp) {
            return Ok((1.0 - z).powf(m) * hyp2f1_series(ap, bp, c, z));
        }
        return Ok((1.0 - z).powf(m) * hyp2f1_int_m(ap, bp, (-m) as u32, z));
    }
    if (m - m_round).abs() < 1e-6 {
        // Near-integer excess: the connection formula cancels badly.
        return Ok(hyp2f1_series(a, b, c, z));
    }
    let w = 1.0 - z;
    let t1 = gamma(c) * gamma(m) * rgamma(c - a) * rgamma(c - b);
    let t2 = gamma(c) * gamma(-m) * rgamma(a) * rgamma(b);
    let mut value = 0.0;
    if t1 != 0.0 {
        value += t1 * hyp2f1_series(a, b, 1.0 - m, w);
    }
    if t2 != 0.0 {
        value += t2 * w.powf(m) * hyp2f1_series(c - a, c - b, m + 1.0, w);
    }
    Ok(value)
}

/// Tricomi's confluent hypergeometric function U(a, b, z), a > 0, z > 0,
/// from U = Γ(a)⁻¹ ∫₀^∞ e^{−zt} t^{a−1} (1+t)^{b−a−1} dt.
pub fn tricomi_u(a: f64, b: f64, z: f64) -> Result<f64> {
    Ok(tricomi_u_scaled(a, b, z)? * (-a * z.ln()).exp())
}

/// `z^a U(a, b, z)`, which tends to 1 for large `z` and stays finite where
/// `U` itself would overflow or underflow.
pub fn tricomi_u_scaled(a: f64, b: f64, z: f64) -> Result<f64> {
    if !(a > 0.0) || !a.is_finite() {
        return Err(domain("a", a));
    }
    if !b.is_finite() {
        return Err(domain("b", b));
    }
    if !(z > 0.0) || !z.is_finite() {
        return Err(domain("z", z));
    }
    // The integrand is scaled by z^a/Γ(a) so that it integrates to U·z^a,
    // which tends to 1 as z grows.
    let lead = a * z.ln() - ln_gamma(a);
    let pow_tail = b - a - 1.0;
    let integrand = |t: f64| {
        if t <= 0.0 {
            return 0.0;
        }
        (lead - z * t + (a - 1.0) * t.ln() + pow_tail * t.ln_1p()).exp()
    };
    let scale = (a + pow_tail.max(0.0)).max(1.0) / z;
    let cfg = QuadConfig {
        abs_tol: 0.0,
        rel_tol: 1e-12,
        max_intervals: 4000,
    };
    Ok(integrate_to_infinity(integrand, 0.0, scale, &cfg)?.value)
}
