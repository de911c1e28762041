//! Closed-form overlaps, BEFP ratios, their large-N limits and asymptotics.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::exact::{CycQ, Rational};
use crate::Mu;

mod asymptotics;
mod barnes;

pub use asymptotics::{
    fit_large_m, fit_scaling, least_squares, log_befp_limit_abs, taus, AsymptoticCoeffs, AsymptoticTarget,
};
pub use barnes::{
    cefinal_c0, j0_ratio, log_abs_overlap_barnes, log_barnes_g, log_gamma, overlap_barnes, overlap_barnes_uniform,
    overlap_barnes_value, trigamma, BarnesValue, LOG_GLAISHER,
};

/// e^{i pi/6} sqrt(3)
pub fn two_plus_q() -> CycQ {
    &CycQ::from_int(2) + &CycQ::q()
}

pub(crate) fn check_case(n_sites: usize, m: usize, mu: Mu) -> Result<()> {
    if !mu.valid_for(n_sites) {
        return Err(Error::InvalidCase(format!(
            "mu = {mu} needs {} N, got N = {n_sites}",
            if mu == Mu::Zero { "even" } else { "odd" }
        )));
    }
    if m > n_sites {
        return Err(Error::Domain(format!("m = {m} exceeds N = {n_sites}")));
    }
    Ok(())
}

fn ri(n: i64) -> Rational {
    Rational::from_integer(n.into())
}

fn fact(n: u64) -> BigInt {
    (1..=n).fold(BigInt::one(), |a, b| a * b)
}

fn pow2(e: u64) -> Rational {
    Rational::from_integer(BigInt::one() << e)
}

/// The m-dependent double product; `shift` and `off` select the case.
fn m_product(n: i64, m: i64, shift: i64, off: i64, den_off: i64) -> Rational {
    let mut r = Rational::one();
    for k in 0..m {
        for j in 0..=k {
            let num = (2 * j + k + shift) * (2 * j + n + off - k);
            if num == 0 {
                return Rational::zero();
            }
            r *= Rational::new(num.into(), ((2 * j + 1) * (2 * j + 2 * n + den_off - k)).into());
        }
    }
    r
}

fn m0_product(mu: Mu, n: i64) -> Rational {
    let mut r = Rational::one();
    let top = if mu == Mu::Zero { n - 1 } else { n };
    for l in 0..=top {
        let a = if mu == Mu::Zero { 3 * l + 1 } else { 3 * l };
        r *= Rational::new(fact(a as u64), fact((n + l) as u64));
    }
    r
}

/// BEFP as an exact ratio in Q(q).
pub fn befp_product(n_sites: usize, m: usize, mu: Mu) -> Result<CycQ> {
    check_case(n_sites, m, mu)?;
    let n = (n_sites / 2) as i64;
    let mi = m as i64;
    let tri = pow2((m * m.saturating_sub(1) / 2) as u64);
    Ok(match mu {
        Mu::Zero => &two_plus_q().pow(-mi) * &CycQ::from_rational(m_product(n, mi, 2, 0, 0) / tri),
        Mu::Plus | Mu::Minus => {
            let off = if mu == Mu::Plus { 1 } else { 0 };
            let three = num_traits::pow(ri(3), m);
            CycQ::from_rational(m_product(n, mi, 3, off, 1) / (three * tri))
        }
    })
}

/// C^mu_{N,m} from the product formulas, exactly.
pub fn overlap_product(n_sites: usize, m: usize, mu: Mu) -> Result<CycQ> {
    let b = befp_product(n_sites, m, mu)?;
    Ok(&b * &overlap_m0(n_sites, mu)?)
}

fn overlap_m0(n_sites: usize, mu: Mu) -> Result<CycQ> {
    check_case(n_sites, 0, mu)?;
    let n = (n_sites / 2) as i64;
    let r = CycQ::from_rational(m0_product(mu, n));
    Ok(if mu == Mu::Zero { &two_plus_q().pow(n) * &r } else { r })
}

/// The printed even-N, m = 0 value e^{i pi n/6} prod (3l+1)!/(n+l)!, without
/// the 3^{n/2}. Kept only to guard against adopting it.
pub fn cm0_literal_even(n: usize) -> num_complex::Complex64 {
    let r = crate::exact::rat_to_f64(&m0_product(Mu::Zero, n as i64));
    num_complex::Complex64::from_polar(r, std::f64::consts::PI * n as f64 / 6.0)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AsmKind {
    /// Alternating sign matrices of size m.
    A,
    /// Vertically symmetric ASMs of size 2m+1.
    AV,
    /// Cyclically symmetric transpose complement plane partitions of size 2m.
    N8,
}

pub fn asm_count(kind: AsmKind, m: usize) -> BigInt {
    let m = m as u64;
    let r: Rational = match kind {
        AsmKind::A => (0..m).map(|i| Rational::new(fact(3 * i + 1), fact(m + i))).product(),
        AsmKind::AV => (1..=m)
            .map(|i| Rational::new(fact(2 * i - 1) * fact(6 * i - 3) * (3 * i - 1), fact(4 * i - 2) * fact(4 * i - 1)))
            .product(),
        AsmKind::N8 => (1..m.max(1))
            .map(|i| Rational::new(fact(2 * i) * fact(6 * i) * (3 * i + 1), fact(4 * i) * fact(4 * i + 1)))
            .product(),
    };
    debug_assert!(r.is_integer());
    r.to_integer()
}

/// N -> infinity limit of BEFP^mu_{N,m}, exactly. The symmetric counts
/// enter at half size: A_V((m-1)/2) for odd m, N8(m/2) for even m.
pub fn befp_limit(m: usize, mu: Mu) -> CycQ {
    let mi = m as i64;
    let a = Rational::from_integer(asm_count(AsmKind::A, m));
    let odd = m % 2 == 1;
    let ratio = if odd {
        a / Rational::from_integer(asm_count(AsmKind::AV, (m - 1) / 2))
    } else {
        a / Rational::from_integer(asm_count(AsmKind::N8, m / 2))
    };
    let jprod = |top: i64, f: &dyn Fn(i64) -> Rational| -> Rational { (0..=top).map(f).product() };
    match (mu, odd) {
        (Mu::Plus | Mu::Minus, true) => {
            let den = pow2((m * (m + 1) / 2) as u64) * num_traits::pow(ri(3), (m - 1) / 2);
            CycQ::from_rational(ratio / den)
        }
        (Mu::Plus | Mu::Minus, false) => {
            let den = pow2((m * m / 2) as u64) * num_traits::pow(ri(3), m / 2);
            let j = jprod((mi - 2) / 2, &|j| Rational::new((3 * j + 1).into(), (6 * j + 1).into()));
            let j = if m == 0 { Rational::one() } else { j };
            CycQ::from_rational(ratio * j / den)
        }
        (Mu::Zero, true) => {
            let j = jprod((mi - 1) / 2, &|j| Rational::new((3 * j + 1).into(), (6 * j + 1).into()));
            let r = ratio * j / pow2(((m * m - 1) / 2) as u64);
            &two_plus_q().pow(-mi) * &CycQ::from_rational(r)
        }
        (Mu::Zero, false) => {
            let j = if m == 0 {
                Rational::one()
            } else {
                jprod((mi - 2) / 2, &|j| {
                    Rational::new(((3 * j + 1) * (6 * j + 5)).into(), ((3 * j + 2) * (6 * j + 1)).into())
                })
            };
            let r = ratio * j / pow2((m * (m + 1) / 2) as u64);
            &two_plus_q().pow(-mi) * &CycQ::from_rational(r)
        }
    }
}
