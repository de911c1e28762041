//! Determinant representation of S0_{k,p} at q = exp(2 pi i / 3), its Schur
//! factors, and the homogeneous-limit pipeline.

use std::ops::{Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::exact::{Assignment, CycQ, Rational, VarId};
use crate::qkz::{q, qi};

mod homogeneous;
mod schur;

pub use homogeneous::{
    c0_from_gamma, chebyshev_taylor_at_2, chebyshev_taylor_direct, det_m7_closed, gamma0_kp, m7_matrix, staged_matrix,
    ChebyshevKind, Gamma0Stage, IntegerSpecPoints,
};
pub use schur::{schur_bialternant, schur_staircase_eval, staircase, StaircaseSchurParams};

/// Division known to be exact (Bareiss quotients).
pub trait ExactDiv {
    fn exact_div(&self, d: &Self) -> Self;
}

impl ExactDiv for BigInt {
    fn exact_div(&self, d: &Self) -> Self {
        let (qt, r) = self.div_rem(d);
        debug_assert!(r.is_zero());
        qt
    }
}

impl ExactDiv for Rational {
    fn exact_div(&self, d: &Self) -> Self {
        self / d
    }
}

impl ExactDiv for CycQ {
    fn exact_div(&self, d: &Self) -> Self {
        self / d
    }
}

/// Fraction-free Gaussian elimination with row pivoting.
pub fn bareiss<T>(mut m: Vec<Vec<T>>) -> T
where
    T: Clone + Zero + One + Neg<Output = T> + ExactDiv,
    for<'a> &'a T: Mul<&'a T, Output = T> + Sub<&'a T, Output = T>,
{
    let n = m.len();
    if n == 0 {
        return T::one();
    }
    let mut negate = false;
    let mut prev = T::one();
    for k in 0..n {
        if m[k][k].is_zero() {
            match (k + 1..n).find(|&r| !m[r][k].is_zero()) {
                Some(r) => {
                    m.swap(k, r);
                    negate = !negate;
                }
                None => return T::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &(&m[i][j] * &m[k][k]) - &(&m[i][k] * &m[k][j]);
                m[i][j] = v.exact_div(&prev);
            }
        }
        prev = m[k][k].clone();
    }
    let d = m[n - 1][n - 1].clone();
    if negate {
        -d
    } else {
        d
    }
}

fn non_generic(what: &str) -> Error {
    Error::NonGeneric(what.into())
}

/// C(y) = prod_{i<j} (y_j - y_i)(y_i y_j - 1)
pub fn c_prod(ys: &[CycQ]) -> CycQ {
    let mut r = CycQ::one();
    for i in 0..ys.len() {
        for j in i + 1..ys.len() {
            r = &r * &(&(&ys[j] - &ys[i]) * &(&(&ys[i] * &ys[j]) - &CycQ::one()));
        }
    }
    r
}

/// eta^+-_j(x) for matrix half-size n.
pub fn eta(plus: bool, j: usize, n: usize, x: &CycQ) -> Result<CycQ> {
    let a = x.pow(3 * (j as i64 - 1));
    let b = x.pow(3 * (n as i64 - j as i64) + 1);
    let (num, den) = if plus { (&a + &b, &CycQ::one() + x) } else { (&a - &b, &CycQ::one() - x) };
    Ok(&num * &den.checked_inv().map_err(|_| non_generic("x = -+1 in eta"))?)
}

/// The matrix M^(k,p) of size 2(p+k).
pub fn matrix_m(k: usize, p: usize, zs: &[CycQ], xs: &[CycQ]) -> Result<Vec<Vec<CycQ>>> {
    let n = p + k;
    let mut m = vec![vec![CycQ::zero(); 2 * n]; 2 * n];
    for (i, x) in xs.iter().enumerate() {
        for j in 1..=n {
            m[i][j - 1] = eta(true, j, n, x)?;
            m[p + i][n + j - 1] = eta(false, j, n, x)?;
        }
    }
    for (i, z) in zs.iter().enumerate() {
        for j in 1..=n {
            m[2 * p + i][j - 1] = eta(true, j, n, z)?;
            m[2 * p + i][n + j - 1] = eta(false, j, n, z)?;
        }
    }
    Ok(m)
}

/// det M^(k,p) / (C(x) C(z, x)).
pub fn det_ratio(k: usize, p: usize, zs: &[CycQ], xs: &[CycQ]) -> Result<CycQ> {
    check_sizes(k, p, zs, xs)?;
    let zx: Vec<CycQ> = zs.iter().chain(xs).cloned().collect();
    let den = &c_prod(xs) * &c_prod(&zx);
    if den.is_zero() {
        return Err(non_generic("C(z, x) = 0"));
    }
    Ok(&bareiss(matrix_m(k, p, zs, xs)?) * &den.inv())
}

fn check_sizes(k: usize, p: usize, zs: &[CycQ], xs: &[CycQ]) -> Result<()> {
    if zs.len() != 2 * k || xs.len() != p {
        return Err(Error::Domain(format!("need {} z and {p} x values", 2 * k)));
    }
    Ok(())
}

fn split(k: usize, p: usize, at: &Assignment) -> Result<(Vec<CycQ>, Vec<CycQ>)> {
    let get = |v: VarId| at.get(&v).cloned().ok_or(Error::Unassigned(v));
    let zs = (1..=2 * k).map(|i| get(VarId::z(i))).collect::<Result<_>>()?;
    let xs = (1..=p).map(|i| get(VarId::x(i))).collect::<Result<_>>()?;
    Ok((zs, xs))
}

/// Determinant formula for S0_{k,p} at an exact point.
pub fn r_kp(k: usize, p: usize, at: &Assignment) -> Result<CycQ> {
    let (zs, xs) = split(k, p, at)?;
    r_kp_values(k, p, &zs, &xs)
}

pub fn r_kp_values(k: usize, p: usize, zs: &[CycQ], xs: &[CycQ]) -> Result<CycQ> {
    check_sizes(k, p, zs, xs)?;
    if xs.iter().any(|x| x.is_zero() || *x == CycQ::one() || *x == -CycQ::one()) {
        return Err(non_generic("x_i in {0, 1, -1}"));
    }
    let n = (p + k) as i64;
    let one = CycQ::one();
    let sign = if (p * (p.saturating_sub(1)) / 2).is_multiple_of(2) { one.clone() } else { -one.clone() };
    let three = Rational::from_integer(3.into()).pow((n * (n + 1) / 2) as i32);
    let two = Rational::from_integer(2.into()).pow(k as i32);
    let mut pre =
        &(&sign * &(&one - &CycQ::q_pow(2)).pow(p as i64 + 2 * k as i64)) * &CycQ::from_rational((two * three).recip());
    for x in xs {
        pre = &pre * &(&(&(&one - &(&q() * x)) * &(&one - &(&qi() * x))) * &x.pow(-n));
    }
    for z in zs {
        pre = &pre * &(&one + z);
    }
    for i in 0..zs.len() {
        for j in i + 1..zs.len() {
            pre = &pre * &(&(&q() * &zs[i]) - &(&qi() * &zs[j]));
        }
    }
    Ok(&pre * &det_ratio(k, p, zs, xs)?)
}

/// P^+-(y) = det(y_i^{3(j-1)} +- y_i^{3(n-j)+1}) / C(y).
pub fn p_pm(plus: bool, ys: &[CycQ]) -> Result<CycQ> {
    let n = ys.len();
    let m: Vec<Vec<CycQ>> = ys
        .iter()
        .map(|y| {
            (1..=n)
                .map(|j| {
                    let a = y.pow(3 * (j as i64 - 1));
                    let b = y.pow(3 * (n as i64 - j as i64) + 1);
                    if plus {
                        &a + &b
                    } else {
                        &a - &b
                    }
                })
                .collect()
        })
        .collect();
    let c = c_prod(ys);
    if c.is_zero() {
        return Err(non_generic("C(y) = 0"));
    }
    Ok(&bareiss(m) * &c.inv())
}

/// The subset expansion of det M^(k,p) / (C(x) C(z, x)) over k-subsets J
/// of the z indices, with P+ on (x, z_J) and P- on (x, z_J^c).
pub fn cofactor_sum(k: usize, p: usize, zs: &[CycQ], xs: &[CycQ]) -> Result<CycQ> {
    check_sizes(k, p, zs, xs)?;
    let one = CycQ::one();
    let mut total = CycQ::zero();
    for mask in 0u32..(1 << (2 * k)) {
        if mask.count_ones() as usize != k {
            continue;
        }
        let (jset, jc): (Vec<usize>, Vec<usize>) = (0..2 * k).partition(|&i| mask & (1 << i) != 0);
        let pick =
            |ix: &[usize]| -> Vec<CycQ> { xs.iter().cloned().chain(ix.iter().map(|&i| zs[i].clone())).collect() };
        let mut term = &p_pm(true, &pick(&jset))? * &p_pm(false, &pick(&jc))?;
        let mut den = CycQ::one();
        for &i in &jset {
            for &j in &jc {
                den = &den * &(&(&zs[j] - &zs[i]) * &(&(&zs[i] * &zs[j]) - &one));
            }
            den = &den * &(&one + &zs[i]);
        }
        for &j in &jc {
            den = &den * &(&one - &zs[j]);
        }
        if den.is_zero() {
            return Err(non_generic("cofactor denominator"));
        }
        term = &term * &den.inv();
        total = &total + &term;
    }
    let mut pre = if (p * k).is_multiple_of(2) { one.clone() } else { -one.clone() };
    for x in xs {
        let d = &one - &(x * x);
        pre = &pre * &d.checked_inv().map_err(|_| non_generic("x_i = +-1"))?;
    }
    Ok(&pre * &total)
}

#[cfg(test)]
mod tests;
