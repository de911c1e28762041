//! Elements of Q(q) with q = exp(2 pi i / 3), stored as a + b q.

use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::Rational;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CycQ {
    pub a: Rational,
    pub b: Rational,
}

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

impl CycQ {
    pub fn new(a: Rational, b: Rational) -> Self {
        CycQ { a, b }
    }

    pub fn from_int(n: i64) -> Self {
        CycQ::new(Rational::from_integer(n.into()), Rational::zero())
    }

    pub fn from_rational(r: Rational) -> Self {
        CycQ::new(r, Rational::zero())
    }

    pub fn ratio(n: i64, d: i64) -> Self {
        CycQ::from_rational(rat(n, d))
    }

    pub fn q() -> Self {
        CycQ::new(Rational::zero(), Rational::one())
    }

    /// q^k for any integer k (q^3 = 1).
    pub fn q_pow(k: i64) -> Self {
        match k.rem_euclid(3) {
            0 => CycQ::one(),
            1 => CycQ::q(),
            _ => CycQ::new(-Rational::one(), -Rational::one()),
        }
    }

    /// 1 + 2q = i sqrt(3).
    pub fn i_sqrt3() -> Self {
        CycQ::new(Rational::one(), Rational::from_integer(2.into()))
    }

    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    /// Galois conjugate q -> q^2 (complex conjugation).
    pub fn conj(&self) -> Self {
        CycQ::new(&self.a - &self.b, -&self.b)
    }

    /// a^2 - ab + b^2
    pub fn norm(&self) -> Rational {
        &self.a * &self.a - &self.a * &self.b + &self.b * &self.b
    }

    pub fn checked_inv(&self) -> Result<Self> {
        let n = self.norm();
        if n.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let c = self.conj();
        Ok(CycQ::new(c.a / &n, c.b / n))
    }

    pub fn inv(&self) -> Self {
        self.checked_inv().expect("inverse of zero in Q(q)")
    }

    pub fn checked_div(&self, other: &CycQ) -> Result<Self> {
        Ok(self * &other.checked_inv()?)
    }

    pub fn pow(&self, e: i64) -> Self {
        if e < 0 {
            return self.inv().pow(-e);
        }
        let mut base = self.clone();
        let mut acc = CycQ::one();
        let mut e = e as u64;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    pub fn scale(&self, r: &Rational) -> Self {
        CycQ::new(&self.a * r, &self.b * r)
    }

    pub fn to_complex(&self) -> Complex64 {
        let a = rat_to_f64(&self.a);
        let b = rat_to_f64(&self.b);
        Complex64::new(a - 0.5 * b, b * 3f64.sqrt() / 2.0)
    }

    /// Parses "a b" with rational parts such as "3/2 1/1".
    pub fn parse(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split_whitespace().collect();
        if parts.len() != 2 {
            return Err(Error::Parse(format!("expected two rationals, got {s:?}")));
        }
        Ok(CycQ::new(parse_rational(parts[0])?, parse_rational(parts[1])?))
    }
}

pub fn parse_rational(s: &str) -> Result<Rational> {
    let bad = || Error::Parse(format!("bad rational {s:?}"));
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.parse().map_err(|_| bad())?;
            let d: BigInt = d.parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(bad());
            }
            Ok(Rational::new(n, d))
        }
        None => Ok(Rational::from_integer(s.parse().map_err(|_| bad())?)),
    }
}

pub fn rat_to_f64(r: &Rational) -> f64 {
    if let Some(x) = r.to_f64() {
        if x.is_finite() {
            return x;
        }
    }
    // huge numerator and denominator: compare bit lengths first
    let n = r.numer();
    let d = r.denom();
    let shift = n.bits() as i64 - d.bits() as i64;
    let (n2, d2) = if shift > 0 { (n.clone(), d << (shift as u64)) } else { (n << ((-shift) as u64), d.clone()) };
    let m = Rational::new(n2, d2).to_f64().unwrap_or(f64::NAN);
    m * 2f64.powi(shift as i32)
}

pub fn fmt_rational(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

impl fmt::Display for CycQ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {}", fmt_rational(&self.a), fmt_rational(&self.b))
    }
}

impl FromStr for CycQ {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        CycQ::parse(s)
    }
}

impl Zero for CycQ {
    fn zero() -> Self {
        CycQ::new(Rational::zero(), Rational::zero())
    }
    fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }
}

impl One for CycQ {
    fn one() -> Self {
        CycQ::new(Rational::one(), Rational::zero())
    }
}

impl From<i64> for CycQ {
    fn from(n: i64) -> Self {
        CycQ::from_int(n)
    }
}

impl From<Rational> for CycQ {
    fn from(r: Rational) -> Self {
        CycQ::from_rational(r)
    }
}

impl<'a> Add<&'a CycQ> for &'a CycQ {
    type Output = CycQ;
    fn add(self, o: &CycQ) -> CycQ {
        CycQ::new(&self.a + &o.a, &self.b + &o.b)
    }
}

impl<'a> Sub<&'a CycQ> for &'a CycQ {
    type Output = CycQ;
    fn sub(self, o: &CycQ) -> CycQ {
        CycQ::new(&self.a - &o.a, &self.b - &o.b)
    }
}

impl<'a> Mul<&'a CycQ> for &'a CycQ {
    type Output = CycQ;
    fn mul(self, o: &CycQ) -> CycQ {
        // q^2 = -1 - q
        let bd = &self.b * &o.b;
        let re = &self.a * &o.a - &bd;
        let qq = &self.a * &o.b + &self.b * &o.a - bd;
        CycQ::new(re, qq)
    }
}

impl<'a> Div<&'a CycQ> for &'a CycQ {
    type Output = CycQ;
    fn div(self, o: &CycQ) -> CycQ {
        self * &o.inv()
    }
}

impl Neg for &CycQ {
    type Output = CycQ;
    fn neg(self) -> CycQ {
        CycQ::new(-&self.a, -&self.b)
    }
}

impl Neg for CycQ {
    type Output = CycQ;
    fn neg(self) -> CycQ {
        CycQ::new(-self.a, -self.b)
    }
}

macro_rules! owned_binop {
    ($tr:ident, $m:ident) => {
        impl $tr<CycQ> for CycQ {
            type Output = CycQ;
            fn $m(self, o: CycQ) -> CycQ {
                (&self).$m(&o)
            }
        }
        impl $tr<&CycQ> for CycQ {
            type Output = CycQ;
            fn $m(self, o: &CycQ) -> CycQ {
                (&self).$m(o)
            }
        }
        impl $tr<CycQ> for &CycQ {
            type Output = CycQ;
            fn $m(self, o: CycQ) -> CycQ {
                self.$m(&o)
            }
        }
    };
}
owned_binop!(Add, add);
owned_binop!(Sub, sub);
owned_binop!(Mul, mul);
owned_binop!(Div, div);

impl AddAssign<&CycQ> for CycQ {
    fn add_assign(&mut self, o: &CycQ) {
        self.a += &o.a;
        self.b += &o.b;
    }
}

impl SubAssign<&CycQ> for CycQ {
    fn sub_assign(&mut self, o: &CycQ) {
        self.a -= &o.a;
        self.b -= &o.b;
    }
}

impl MulAssign<&CycQ> for CycQ {
    fn mul_assign(&mut self, o: &CycQ) {
        *self = &*self * o;
    }
}

impl CycQ {
    pub fn is_negative_rational(&self) -> bool {
        self.b.is_zero() && self.a.is_negative()
    }
}
