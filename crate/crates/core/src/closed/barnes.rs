//! Barnes G and the G-function product forms of the overlaps.

use std::f64::consts::PI;

use num_complex::Complex64;

use super::check_case;
use crate::error::{Error, Result};
use crate::Mu;

/// log of the Glaisher-Kinkelin constant, 1/12 - zeta'(-1).
pub const LOG_GLAISHER: f64 = 0.248_754_477_033_784_26;

const SHIFT_TO: f64 = 12.0;

pub fn log_gamma(z: f64) -> f64 {
    libm::lgamma(z)
}

/// log G(z) for z > 0.
pub fn log_barnes_g(z: f64) -> Result<f64> {
    if !(z > 0.0) || !z.is_finite() {
        return Err(Error::Domain(format!("log G needs z > 0, got {z}")));
    }
    let mut w = z;
    let mut acc = 0.0;
    // log G(w) = log G(w + 1) - log Gamma(w)
    while w < SHIFT_TO + 1.0 {
        acc -= log_gamma(w);
        w += 1.0;
    }
    Ok(acc + log_g1p_asymptotic(w - 1.0))
}

/// log G(1 + x) for large x.
fn log_g1p_asymptotic(x: f64) -> f64 {
    // B_{2k+2} / (4k(k+1)) for k = 1..
    const B: [f64; 6] = [-1.0 / 30.0, 1.0 / 42.0, -1.0 / 30.0, 5.0 / 66.0, -691.0 / 2730.0, 7.0 / 6.0];
    let lx = x.ln();
    let mut s = 0.5 * x * x * lx - 0.75 * x * x + 0.5 * x * (2.0 * PI).ln() - lx / 12.0 + 1.0 / 12.0 - LOG_GLAISHER;
    let x2 = x * x;
    let mut p = x2;
    for (i, b) in B.iter().enumerate() {
        let k = (i + 1) as f64;
        s += b / (4.0 * k * (k + 1.0) * p);
        p *= x2;
    }
    s
}

/// psi^(1)(z) for z > 0.
pub fn trigamma(z: f64) -> Result<f64> {
    if !(z > 0.0) {
        return Err(Error::Domain(format!("trigamma needs z > 0, got {z}")));
    }
    let mut w = z;
    let mut acc = 0.0;
    while w < 12.0 {
        acc += 1.0 / (w * w);
        w += 1.0;
    }
    const B: [f64; 7] = [1.0 / 6.0, -1.0 / 30.0, 1.0 / 42.0, -1.0 / 30.0, 5.0 / 66.0, -691.0 / 2730.0, 7.0 / 6.0];
    let mut s = 1.0 / w + 0.5 / (w * w);
    let mut p = w * w * w;
    for b in B {
        s += b / p;
        p *= w * w;
    }
    Ok(acc + s)
}

/// A value carried as modulus logarithm and phase.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BarnesValue {
    pub log_abs: f64,
    pub phase: f64,
    pub zero: bool,
}

impl BarnesValue {
    fn zero() -> Self {
        BarnesValue { log_abs: f64::NEG_INFINITY, phase: 0.0, zero: true }
    }

    pub fn to_complex(self) -> Complex64 {
        if self.zero {
            Complex64::new(0.0, 0.0)
        } else {
            Complex64::from_polar(self.log_abs.exp(), self.phase)
        }
    }
}

/// Accumulates sums of log G terms.
struct Acc(f64);

impl Acc {
    fn g(&mut self, z: f64, power: f64) -> Result<&mut Self> {
        self.0 += power * log_barnes_g(z)?;
        Ok(self)
    }
    fn num(&mut self, zs: &[f64]) -> Result<&mut Self> {
        for &z in zs {
            self.g(z, 1.0)?;
        }
        Ok(self)
    }
    fn den(&mut self, zs: &[f64]) -> Result<&mut Self> {
        for &z in zs {
            self.g(z, -1.0)?;
        }
        Ok(self)
    }
}

fn ln2() -> f64 {
    std::f64::consts::LN_2
}
fn ln3() -> f64 {
    3f64.ln()
}

/// Uniform G-function forms for all three cases, valid for m up to the
/// number of up spins.
pub fn overlap_barnes_uniform(n_sites: usize, m: usize, mu: Mu) -> Result<BarnesValue> {
    check_case(n_sites, m, mu)?;
    if m > mu.n_up(n_sites) {
        return Ok(BarnesValue::zero());
    }
    let n = (n_sites / 2) as f64;
    let mf = m as f64;
    let h = mf / 2.0;
    let mut a = Acc(0.0);
    let phase;
    match mu {
        Mu::Zero => {
            phase = PI / 6.0 * (n - mf);
            a.0 += (mf * (mf + 1.0) + n * (mf - 1.0)) * ln2() + 0.5 * (n - mf) * (3.0 * n + 3.0 * mf + 1.0) * ln3()
                - (n - mf) * PI.ln();
            a.num(&[n + mf + 1.0, n + 2.0 / 3.0, n + 1.0, n + 4.0 / 3.0])?.den(&[2.0 * n + mf + 1.0])?;
            a.num(&[n + h + 0.5, n + h + 1.0])?.den(&[n - h + 0.5, n - h + 1.0])?;
            a.num(&[n / 2.0 - h + 0.5, n / 2.0 - h + 1.0])?.den(&[n / 2.0 + h + 0.5, n / 2.0 + h + 1.0])?;
            a.den(&[mf + 2.0 / 3.0, mf + 1.0, mf + 4.0 / 3.0, mf + 1.5])?;
            a.num(&[1.5 * mf + 1.0, 1.5 * mf + 1.5])?.den(&[h + 1.0, h + 1.5])?.num(&[1.5])?;
        }
        Mu::Plus => {
            phase = 0.0;
            a.0 += (mf * (mf + 2.0) + n * (mf - 1.0)) * ln2() + 0.5 * (n - mf) * (3.0 * n + 3.0 * mf + 4.0) * ln3()
                - (n - mf) * PI.ln();
            a.num(&[n + mf + 2.0, n + 1.0, n + 4.0 / 3.0, n + 5.0 / 3.0])?.den(&[2.0 * n + mf + 2.0])?;
            a.num(&[n + h + 1.0, n + h + 1.5])?.den(&[n - h + 1.0, n - h + 1.5])?;
            a.num(&[n / 2.0 - h + 1.0, n / 2.0 - h + 1.5])?.den(&[n / 2.0 + h + 1.0, n / 2.0 + h + 1.5])?;
            a.den(&[mf + 1.0, mf + 4.0 / 3.0, mf + 5.0 / 3.0, mf + 1.5])?;
            a.num(&[1.5 * mf + 1.5, 1.5 * mf + 2.0])?.den(&[h + 1.5, h + 2.0])?.num(&[1.5])?;
        }
        Mu::Minus => {
            phase = 0.0;
            a.0 += (mf * (mf + 3.0) + n * (mf - 1.0)) * ln2() + 0.5 * (n - mf) * (3.0 * n + 3.0 * mf + 4.0) * ln3()
                - (n - mf) * PI.ln();
            a.num(&[n + mf + 1.0, n + 4.0 / 3.0, n + 5.0 / 3.0, n + 2.0])?.den(&[2.0 * n + mf + 2.0])?;
            a.num(&[n + h + 1.0, n + h + 1.5])?.den(&[n - h + 1.0, n - h + 1.5])?;
            a.num(&[n / 2.0 - h + 0.5, n / 2.0 - h + 1.0])?.den(&[n / 2.0 + h + 0.5, n / 2.0 + h + 1.0])?;
            a.den(&[mf + 1.0, mf + 4.0 / 3.0, mf + 5.0 / 3.0, mf + 1.5])?;
            a.num(&[1.5 * mf + 1.5, 1.5 * mf + 2.0])?.den(&[h + 1.5, h + 2.0])?.num(&[1.5])?;
        }
    }
    Ok(BarnesValue { log_abs: a.0, phase, zero: false })
}

/// C0_{2(p+k),2k} from the staircase-Schur route.
pub fn cefinal_c0(k: usize, p: usize) -> Result<BarnesValue> {
    if k > p {
        return Ok(BarnesValue::zero());
    }
    let (k, p) = (k as f64, p as f64);
    let mut a = Acc(0.0);
    a.0 += 0.5 * (3.0 * p * p + p + 9.0 * k * k + 2.0 * k + 6.0 * p * k) * ln3()
        - (k + 0.5) * PI.ln()
        - (2.0 * p * p + 6.0 * k * k - k / 3.0 + 2.0 * p * k) * ln2();
    a.num(&[p + k + 2.0 / 3.0, p + k + 1.0, p + k + 4.0 / 3.0, p - k + 1.0])?.den(&[
        p + 2.0 * k + 1.0,
        p + 2.0 * k + 1.5,
        p + 0.5,
        p + 1.0,
    ])?;
    a.num(&[(p + 3.0 * k + 2.0) / 2.0, (p + 3.0 * k + 3.0) / 2.0])?.den(&[(p - k + 2.0) / 2.0, (p - k + 3.0) / 2.0])?;
    a.num(&[2.0 * k + 1.0 / 3.0])?.den(&[2.0 * k + 1.5])?;
    a.num(&[k + 4.0 / 3.0, k + 11.0 / 6.0])?.den(&[k + 1.0 / 6.0, k + 2.0 / 3.0])?;
    a.num(&[1.0 / 6.0, 1.5, 1.5, 1.5])?.den(&[1.0 / 3.0, 4.0 / 3.0, 4.0 / 3.0, 11.0 / 6.0])?;
    Ok(BarnesValue { log_abs: a.0, phase: PI / 6.0 * (p - k), zero: false })
}

/// Ratio of the staircase-Schur route to the uniform form; should be 1.
pub fn j0_ratio(k: usize, p: usize) -> Result<f64> {
    if k > p {
        return Err(Error::Domain("both sides vanish for k > p".into()));
    }
    let a = cefinal_c0(k, p)?;
    let b = overlap_barnes_uniform(2 * (p + k), 2 * k, Mu::Zero)?;
    Ok((a.log_abs - b.log_abs).exp())
}

/// Endpoint forms for the odd-m and odd-N cases, indexed by (k, p).
fn endpoint(mu: Mu, odd_m: bool, k: f64, p: f64) -> Result<BarnesValue> {
    let mut a = Acc(0.0);
    let mut phase = 0.0;
    let third = 1.0 / 3.0;
    match (mu, odd_m) {
        (Mu::Zero, true) => {
            phase = PI / 6.0 * (p - k);
            a.0 += 0.5 * (3.0 * p * p - 5.0 * p + 9.0 * k * k - 10.0 * k + 6.0 * p * k + 3.0) * ln3()
                - (k + 1.0) * PI.ln()
                - (2.0 * p * p - 3.0 * p + 6.0 * k * k - 22.0 * k / 3.0 + 2.0 * p * k + 11.0 / 3.0) * ln2();
            a.num(&[p + k - third, p + k, p + k + third, p - k + 1.0])?.den(&[
                p + 2.0 * k - 0.5,
                p + 2.0 * k,
                p,
                p + 0.5,
            ])?;
            a.num(&[(p + 3.0 * k) / 2.0, (p + 3.0 * k + 1.0) / 2.0])?
                .den(&[(p - k + 2.0) / 2.0, (p - k + 3.0) / 2.0])?;
            a.num(&[2.0 * k - 2.0 * third])?.den(&[2.0 * k + 0.5])?;
            a.num(&[k + 5.0 / 6.0, k + 4.0 * third])?.den(&[k - third, k + 1.0 / 6.0])?;
            a.num(&[7.0 / 6.0, 1.5, 1.5, 1.5])?.den(&[third, 5.0 / 6.0, 4.0 * third, 4.0 * third])?;
        }
        (Mu::Minus, true) => {
            a.0 += 0.5 * (3.0 * p * p - 2.0 * p + 9.0 * k * k - 7.0 * k + 6.0 * p * k + 1.0) * ln3()
                - (k - 0.5) * PI.ln()
                - (2.0 * p * p - p + 6.0 * k * k - 10.0 * k / 3.0 + 2.0 * p * k - third) * ln2();
            a.num(&[p + k + third, p + k + 2.0 * third, p + k + 1.0, p - k + 1.0])?.den(&[
                p + 2.0 * k,
                p + 2.0 * k + 0.5,
                p + 0.5,
                p + 1.0,
            ])?;
            a.num(&[(p + 3.0 * k) / 2.0, (p + 3.0 * k + 1.0) / 2.0])?
                .den(&[(p - k + 2.0) / 2.0, (p - k + 3.0) / 2.0])?;
            a.num(&[2.0 * k + third])?.den(&[2.0 * k + 0.5])?;
            a.num(&[k + third, k + 5.0 / 6.0])?.den(&[k + 1.0 / 6.0, k + 2.0 * third])?;
            a.num(&[1.0 / 6.0, 1.5, 1.5, 1.5])?.den(&[third, 4.0 * third, 4.0 * third, 11.0 / 6.0])?;
        }
        (Mu::Minus, false) => {
            a.0 += 0.5 * (3.0 * p * p - 8.0 * p + 9.0 * k * k - 19.0 * k + 6.0 * p * k + 10.0) * ln3()
                - k * PI.ln()
                - (2.0 * p * p - 4.0 * p + 6.0 * k * k - 31.0 * k / 3.0 + 2.0 * p * k + 16.0 / 3.0) * ln2();
            a.num(&[p + k - 2.0 * third, p + k - third, p + k, p - k + 1.0])?.den(&[
                p + 2.0 * k - 1.5,
                p + 2.0 * k - 1.0,
                p,
                p + 0.5,
            ])?;
            a.num(&[(p + 3.0 * k - 2.0) / 2.0, (p + 3.0 * k - 1.0) / 2.0])?
                .den(&[(p - k + 2.0) / 2.0, (p - k + 3.0) / 2.0])?;
            a.num(&[2.0 * k - 2.0 * third])?.den(&[2.0 * k - 0.5])?;
            a.num(&[k - 1.0 / 6.0, k + third])?.den(&[k - third, k + 1.0 / 6.0])?;
            a.num(&[7.0 / 6.0, 1.5, 1.5, 1.5])?.den(&[third, 5.0 / 6.0, 4.0 * third, 4.0 * third])?;
        }
        (Mu::Plus, true) => {
            a.0 += 0.5 * (3.0 * p * p - 8.0 * p + 9.0 * k * k - 13.0 * k + 6.0 * p * k + 5.0) * ln3()
                - (k - 1.5) * PI.ln()
                - (2.0 * p * p - 5.0 * p + 6.0 * k * k - 22.0 * k / 3.0 + 2.0 * p * k + 8.0 / 3.0) * ln2();
            a.num(&[p + k - 1.0, p + k - 2.0 * third, p + k - third, p - k + 1.0])?.den(&[
                p + 2.0 * k - 1.0,
                p + 2.0 * k - 0.5,
                p - 0.5,
                p,
            ])?;
            a.num(&[(p + 3.0 * k) / 2.0, (p + 3.0 * k + 1.0) / 2.0])?
                .den(&[(p - k + 2.0) / 2.0, (p - k + 3.0) / 2.0])?;
            a.num(&[2.0 * k + third])?.den(&[2.0 * k + 0.5])?;
            a.num(&[k + third, k + 5.0 / 6.0])?.den(&[k + 1.0 / 6.0, k + 2.0 * third])?;
            a.num(&[1.0 / 6.0, 2.0 * third, 1.5, 1.5, 1.5])?.den(&[
                11.0 / 6.0,
                4.0 * third,
                4.0 * third,
                4.0 * third,
                5.0 / 3.0,
            ])?;
        }
        (Mu::Plus, false) => {
            a.0 += 0.5 * (3.0 * p * p - 14.0 * p + 9.0 * k * k - 25.0 * k + 6.0 * p * k + 20.0) * ln3()
                - (k - 1.0) * PI.ln()
                - (2.0 * p * p - 8.0 * p + 6.0 * k * k - 43.0 * k / 3.0 + 2.0 * p * k + 37.0 / 3.0) * ln2();
            a.num(&[p + k - 2.0, p + k - 5.0 / 3.0, p + k - 4.0 * third, p - k + 1.0])?.den(&[
                p + 2.0 * k - 2.5,
                p + 2.0 * k - 2.0,
                p - 1.0,
                p - 0.5,
            ])?;
            a.num(&[(p + 3.0 * k - 2.0) / 2.0, (p + 3.0 * k - 1.0) / 2.0])?
                .den(&[(p - k + 2.0) / 2.0, (p - k + 3.0) / 2.0])?;
            a.num(&[2.0 * k - 2.0 * third])?.den(&[2.0 * k - 0.5])?;
            a.num(&[k - 1.0 / 6.0, k + third])?.den(&[k - third, k + 1.0 / 6.0])?;
            a.num(&[2.0 * third, 7.0 / 6.0, 1.5, 1.5, 1.5])?.den(&[
                5.0 / 6.0,
                4.0 * third,
                4.0 * third,
                4.0 * third,
                5.0 / 3.0,
            ])?;
        }
        (Mu::Zero, false) => unreachable!("even m, even N uses the uniform form"),
    }
    Ok(BarnesValue { log_abs: a.0, phase, zero: false })
}

/// G-function evaluation routed by parity: the uniform form for even N and
/// even m, the endpoint forms otherwise.
pub fn overlap_barnes_value(n_sites: usize, m: usize, mu: Mu) -> Result<BarnesValue> {
    check_case(n_sites, m, mu)?;
    if m > mu.n_up(n_sites) {
        return Ok(BarnesValue::zero());
    }
    let n = (n_sites / 2) as i64;
    let mi = m as i64;
    let odd_m = m % 2 == 1;
    let (k, p) = match (mu, odd_m) {
        (Mu::Zero, false) => return overlap_barnes_uniform(n_sites, m, mu),
        (Mu::Zero, true) | (Mu::Minus, true) => {
            let k = (mi + 1) / 2;
            (k, n - k + 1)
        }
        (Mu::Minus, false) => {
            let k = mi / 2 + 1;
            (k, n - k + 2)
        }
        (Mu::Plus, true) => {
            let k = (mi + 1) / 2;
            (k, n - k + 2)
        }
        (Mu::Plus, false) => {
            let k = mi / 2 + 1;
            (k, n - k + 3)
        }
    };
    endpoint(mu, odd_m, k as f64, p as f64)
}

pub fn overlap_barnes(n_sites: usize, m: usize, mu: Mu) -> Result<Complex64> {
    Ok(overlap_barnes_value(n_sites, m, mu)?.to_complex())
}

pub fn log_abs_overlap_barnes(n_sites: usize, m: usize, mu: Mu) -> Result<f64> {
    Ok(overlap_barnes_value(n_sites, m, mu)?.log_abs)
}
