use num_traits::{One, Zero};

use super::bareiss;
use crate::error::{Error, Result};
use crate::exact::Rational;

/// (a, a-1, ..., 1, 0^b)
pub fn staircase(a: usize, b: usize) -> Vec<usize> {
    (1..=a).rev().chain(std::iter::repeat_n(0, b)).collect()
}

/// s_lambda(xs) as det(x_j^{lambda_i + l - i}) / det(x_j^{l - i}).
/// The partition is padded with zeros to the number of variables.
pub fn schur_bialternant(lambda: &[usize], xs: &[Rational]) -> Result<Rational> {
    let l = xs.len();
    let nonzero = lambda.iter().filter(|&&v| v > 0).count();
    if nonzero > l {
        return Ok(Rational::zero());
    }
    if lambda.windows(2).any(|w| w[0] < w[1]) {
        return Err(Error::Domain("partition must be non-increasing".into()));
    }
    let part = |i: usize| lambda.get(i).copied().unwrap_or(0);
    let mut vdm = Rational::one();
    for i in 0..l {
        for j in i + 1..l {
            vdm *= &xs[i] - &xs[j];
        }
    }
    if vdm.is_zero() {
        return Err(Error::NonGeneric("repeated Schur variables".into()));
    }
    let num: Vec<Vec<Rational>> = (0..l).map(|i| xs.iter().map(|x| pow(x, part(i) + l - 1 - i)).collect()).collect();
    Ok(bareiss(num) / vdm)
}

fn pow(x: &Rational, e: usize) -> Rational {
    num_traits::pow(x.clone(), e)
}

/// Staircase partition evaluated at equally spaced points x_i = alpha + beta i.
#[derive(Debug, Clone, PartialEq)]
pub struct StaircaseSchurParams {
    pub a: usize,
    pub b: usize,
    pub alpha: Rational,
    pub beta: Rational,
}

impl StaircaseSchurParams {
    pub fn points(&self) -> Vec<Rational> {
        (1..=self.a + self.b).map(|i| &self.alpha + &self.beta * Rational::from_integer(i.into())).collect()
    }
}

/// Product form of s_{(a..1,0^b)}(alpha + beta i).
pub fn schur_staircase_eval(p: &StaircaseSchurParams) -> Rational {
    let x = p.points();
    let mut r = Rational::one();
    for i in 1..=p.a {
        for j in i + p.b..=p.a + p.b {
            r *= &x[i - 1] + &x[j - 1];
        }
    }
    for k in 1..=p.a {
        for l in 1..=p.b {
            r *= Rational::new((2 * k + l - 1).into(), (k + l - 1).into());
        }
    }
    r / Rational::from_integer(num_bigint::BigInt::one() << p.a)
}
