//! Sparse multivariate Laurent polynomials over Q(q).

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use super::CycQ;
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum VarKind {
    Z,
    X,
    AuxX,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VarId {
    pub kind: VarKind,
    pub index: u32,
}

impl VarId {
    pub fn z(i: usize) -> Self {
        VarId { kind: VarKind::Z, index: i as u32 }
    }
    pub fn x(i: usize) -> Self {
        VarId { kind: VarKind::X, index: i as u32 }
    }
    pub fn aux() -> Self {
        VarId { kind: VarKind::AuxX, index: 0 }
    }
}

impl fmt::Display for VarId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            VarKind::Z => write!(f, "z{}", self.index),
            VarKind::X => write!(f, "x{}", self.index),
            VarKind::AuxX => write!(f, "x"),
        }
    }
}

/// Exponent vector, sorted by variable, zero exponents omitted.
/// Ordered lexicographically (first differing variable decides).
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Monomial(Vec<(VarId, i32)>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(Vec::new())
    }

    pub fn var(v: VarId, e: i32) -> Self {
        if e == 0 {
            Monomial::one()
        } else {
            Monomial(vec![(v, e)])
        }
    }

    pub fn from_pairs(pairs: impl IntoIterator<Item = (VarId, i32)>) -> Self {
        let mut m = Monomial::one();
        for (v, e) in pairs {
            m = m.mul(&Monomial::var(v, e));
        }
        m
    }

    pub fn exps(&self) -> &[(VarId, i32)] {
        &self.0
    }

    pub fn exponent(&self, v: VarId) -> i32 {
        self.0.binary_search_by(|(w, _)| w.cmp(&v)).map(|i| self.0[i].1).unwrap_or(0)
    }

    pub fn total_degree(&self) -> i32 {
        self.0.iter().map(|(_, e)| e).sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn mul(&self, o: &Monomial) -> Monomial {
        self.combine(o, 1)
    }

    /// self / o, which may have negative exponents.
    pub fn div(&self, o: &Monomial) -> Monomial {
        self.combine(o, -1)
    }

    fn combine(&self, o: &Monomial, sign: i32) -> Monomial {
        let mut out = Vec::with_capacity(self.0.len() + o.0.len());
        let (mut i, mut j) = (0, 0);
        while i < self.0.len() || j < o.0.len() {
            let take = match (self.0.get(i), o.0.get(j)) {
                (Some(a), Some(b)) => a.0.cmp(&b.0),
                (Some(_), None) => Ordering::Less,
                _ => Ordering::Greater,
            };
            match take {
                Ordering::Less => {
                    out.push(self.0[i]);
                    i += 1;
                }
                Ordering::Greater => {
                    out.push((o.0[j].0, sign * o.0[j].1));
                    j += 1;
                }
                Ordering::Equal => {
                    let e = self.0[i].1 + sign * o.0[j].1;
                    if e != 0 {
                        out.push((self.0[i].0, e));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        Monomial(out)
    }

    pub fn pow(&self, k: i32) -> Monomial {
        if k == 0 {
            return Monomial::one();
        }
        Monomial(self.0.iter().map(|&(v, e)| (v, e * k)).collect())
    }

    /// True when every exponent of `o` is at most the matching one here.
    pub fn divisible_by(&self, o: &Monomial) -> bool {
        self.div(o).0.iter().all(|&(_, e)| e >= 0)
    }

    pub fn without(&self, v: VarId) -> Monomial {
        Monomial(self.0.iter().copied().filter(|(w, _)| *w != v).collect())
    }
}

impl Ord for Monomial {
    fn cmp(&self, o: &Self) -> Ordering {
        let (mut i, mut j) = (0, 0);
        loop {
            match (self.0.get(i), o.0.get(j)) {
                (None, None) => return Ordering::Equal,
                (Some(&(_, e)), None) => return e.cmp(&0),
                (None, Some(&(_, f))) => return 0.cmp(&f),
                (Some(&(v, e)), Some(&(w, f))) => match v.cmp(&w) {
                    Ordering::Equal => {
                        if e != f {
                            return e.cmp(&f);
                        }
                        i += 1;
                        j += 1;
                    }
                    // the variable v is absent from o
                    Ordering::Less => return e.cmp(&0),
                    Ordering::Greater => return 0.cmp(&f),
                },
            }
        }
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}

pub type Assignment = BTreeMap<VarId, CycQ>;

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct MultiLaurent {
    terms: BTreeMap<Monomial, CycQ>,
}

impl MultiLaurent {
    pub fn zero() -> Self {
        MultiLaurent { terms: BTreeMap::new() }
    }

    pub fn one() -> Self {
        MultiLaurent::constant(CycQ::one())
    }

    pub fn constant(c: CycQ) -> Self {
        MultiLaurent::term(c, Monomial::one())
    }

    pub fn term(c: CycQ, m: Monomial) -> Self {
        let mut p = MultiLaurent::zero();
        p.add_term(m, &c);
        p
    }

    pub fn var(v: VarId) -> Self {
        MultiLaurent::term(CycQ::one(), Monomial::var(v, 1))
    }

    /// c1 * v1 + c2 * v2
    pub fn linear(c1: CycQ, v1: VarId, c2: CycQ, v2: VarId) -> Self {
        let mut p = MultiLaurent::term(c1, Monomial::var(v1, 1));
        p.add_term(Monomial::var(v2, 1), &c2);
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &CycQ)> {
        self.terms.iter()
    }

    pub fn add_term(&mut self, m: Monomial, c: &CycQ) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c.clone());
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn coeff(&self, m: &Monomial) -> CycQ {
        self.terms.get(m).cloned().unwrap_or_else(CycQ::zero)
    }

    /// The constant term if the polynomial is constant.
    pub fn as_constant(&self) -> Option<CycQ> {
        match self.terms.len() {
            0 => Some(CycQ::zero()),
            1 => self.terms.get(&Monomial::one()).cloned(),
            _ => None,
        }
    }

    pub fn leading_term(&self) -> Option<(&Monomial, &CycQ)> {
        self.terms.iter().next_back()
    }

    pub fn scale(&self, c: &CycQ) -> Self {
        if c.is_zero() {
            return MultiLaurent::zero();
        }
        MultiLaurent { terms: self.terms.iter().map(|(m, a)| (m.clone(), a * c)).collect() }
    }

    pub fn mul_monomial(&self, m: &Monomial) -> Self {
        MultiLaurent { terms: self.terms.iter().map(|(k, a)| (k.mul(m), a.clone())).collect() }
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = MultiLaurent::one();
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    pub fn vars(&self) -> Vec<VarId> {
        let mut vs: Vec<VarId> = self.terms.keys().flat_map(|m| m.exps().iter().map(|(v, _)| *v)).collect();
        vs.sort();
        vs.dedup();
        vs
    }

    /// (min, max) exponent of v over all terms, None for the zero polynomial.
    pub fn degree_range(&self, v: VarId) -> Option<(i32, i32)> {
        let mut r: Option<(i32, i32)> = None;
        for m in self.terms.keys() {
            let e = m.exponent(v);
            r = Some(match r {
                None => (e, e),
                Some((lo, hi)) => (lo.min(e), hi.max(e)),
            });
        }
        r
    }

    pub fn total_degree_range(&self) -> Option<(i32, i32)> {
        let mut r: Option<(i32, i32)> = None;
        for m in self.terms.keys() {
            let e = m.total_degree();
            r = Some(match r {
                None => (e, e),
                Some((lo, hi)) => (lo.min(e), hi.max(e)),
            });
        }
        r
    }

    pub fn is_polynomial(&self) -> bool {
        self.terms.keys().all(|m| m.exps().iter().all(|&(_, e)| e >= 0))
    }

    /// Coefficient of v^e, as a polynomial in the remaining variables.
    pub fn coeff_of(&self, v: VarId, e: i32) -> Self {
        let mut out = MultiLaurent::zero();
        for (m, c) in &self.terms {
            if m.exponent(v) == e {
                out.add_term(m.without(v), c);
            }
        }
        out
    }

    /// Coefficient of the highest power of v, with that power.
    pub fn leading_in(&self, v: VarId) -> (i32, Self) {
        match self.degree_range(v) {
            None => (0, MultiLaurent::zero()),
            Some((_, hi)) => (hi, self.coeff_of(v, hi)),
        }
    }

    /// Coefficient of the lowest power of v, with that power.
    pub fn trailing_in(&self, v: VarId) -> (i32, Self) {
        match self.degree_range(v) {
            None => (0, MultiLaurent::zero()),
            Some((lo, _)) => (lo, self.coeff_of(v, lo)),
        }
    }

    pub fn eval(&self, at: &Assignment) -> Result<CycQ> {
        let mut powers: BTreeMap<(VarId, i32), CycQ> = BTreeMap::new();
        let mut total = CycQ::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for &(v, e) in m.exps() {
                let p = match powers.get(&(v, e)) {
                    Some(p) => p.clone(),
                    None => {
                        let x = at.get(&v).ok_or(Error::Unassigned(v))?;
                        if e < 0 && x.is_zero() {
                            return Err(Error::Pole(v));
                        }
                        let p = x.pow(e as i64);
                        powers.insert((v, e), p.clone());
                        p
                    }
                };
                t = &t * &p;
            }
            total += &t;
        }
        Ok(total)
    }

    /// Substitutes v -> c * target (a monomial), which covers renames,
    /// inversions (target = w^-1), scalings and v -> 0 (c = 0).
    pub fn subst_monomial(&self, v: VarId, c: &CycQ, target: &Monomial) -> Result<Self> {
        let mut out = MultiLaurent::zero();
        let mut cpow: BTreeMap<i32, CycQ> = BTreeMap::new();
        for (m, a) in &self.terms {
            let e = m.exponent(v);
            if e == 0 {
                out.add_term(m.clone(), a);
                continue;
            }
            if c.is_zero() {
                if e < 0 {
                    return Err(Error::Pole(v));
                }
                continue;
            }
            let ce = cpow.entry(e).or_insert_with(|| c.pow(e as i64)).clone();
            out.add_term(m.without(v).mul(&target.pow(e)), &(a * &ce));
        }
        Ok(out)
    }

    /// Simultaneous substitution v -> c_v * m_v for every v in the map.
    pub fn subst_many(&self, map: &BTreeMap<VarId, (CycQ, Monomial)>) -> Result<Self> {
        let mut powers: BTreeMap<(VarId, i32), (CycQ, Monomial)> = BTreeMap::new();
        let mut out = MultiLaurent::zero();
        for (m, a) in &self.terms {
            let mut coef = a.clone();
            let mut mono = Monomial::one();
            for &(v, e) in m.exps() {
                match map.get(&v) {
                    None => mono = mono.mul(&Monomial::var(v, e)),
                    Some((c, t)) => {
                        if c.is_zero() {
                            if e < 0 {
                                return Err(Error::Pole(v));
                            }
                            coef = CycQ::zero();
                            break;
                        }
                        let (pc, pm) = powers.entry((v, e)).or_insert_with(|| (c.pow(e as i64), t.pow(e))).clone();
                        coef = &coef * &pc;
                        mono = mono.mul(&pm);
                    }
                }
            }
            if !coef.is_zero() {
                out.add_term(mono, &coef);
            }
        }
        Ok(out)
    }

    pub fn subst_value(&self, v: VarId, c: &CycQ) -> Result<Self> {
        self.subst_monomial(v, c, &Monomial::one())
    }

    /// Applies a variable renaming (it may merge variables).
    pub fn rename(&self, f: impl Fn(VarId) -> VarId) -> Self {
        let mut out = MultiLaurent::zero();
        for (m, a) in &self.terms {
            let nm = Monomial::from_pairs(m.exps().iter().map(|&(v, e)| (f(v), e)));
            out.add_term(nm, a);
        }
        out
    }

    pub fn swap(&self, v: VarId, w: VarId) -> Self {
        self.rename(|u| {
            if u == v {
                w
            } else if u == w {
                v
            } else {
                u
            }
        })
    }

    /// General substitution v -> p. Negative powers of v need p invertible
    /// as a single term.
    pub fn subst(&self, v: VarId, p: &MultiLaurent) -> Result<Self> {
        if p.len() <= 1 {
            let (m, c) =
                p.terms().next().map(|(m, c)| (m.clone(), c.clone())).unwrap_or((Monomial::one(), CycQ::zero()));
            return self.subst_monomial(v, &c, &m);
        }
        let mut cache: BTreeMap<i32, MultiLaurent> = BTreeMap::new();
        let mut out = MultiLaurent::zero();
        for (m, a) in &self.terms {
            let e = m.exponent(v);
            if e < 0 {
                return Err(Error::NotExact);
            }
            let pe = cache.entry(e).or_insert_with(|| p.pow(e as u32)).clone();
            let rest = MultiLaurent::term(a.clone(), m.without(v));
            out = &out + &(&rest * &pe);
        }
        Ok(out)
    }

    /// Value as v -> 0; terms with negative powers of v are a pole.
    pub fn limit_zero(&self, v: VarId) -> Result<Self> {
        self.subst_value(v, &CycQ::zero())
    }

    /// Limit of v^-d * self as v -> infinity, for d the top degree in v.
    pub fn limit_infinity(&self, v: VarId, d: i32) -> Result<Self> {
        let (hi, c) = self.leading_in(v);
        if self.is_zero() || hi < d {
            return Ok(MultiLaurent::zero());
        }
        if hi > d {
            return Err(Error::Domain(format!("degree {hi} in {v} exceeds {d}")));
        }
        Ok(c)
    }

    /// Evaluates every variable at 1 (homogeneous point).
    pub fn limit_all(&self) -> CycQ {
        let mut s = CycQ::zero();
        for c in self.terms.values() {
            s += c;
        }
        s
    }

    fn min_exponents(&self) -> Monomial {
        let mut mins: BTreeMap<VarId, i32> = BTreeMap::new();
        for m in self.terms.keys() {
            for &(v, e) in m.exps() {
                let x = mins.entry(v).or_insert(0);
                *x = (*x).min(e);
            }
        }
        // a variable missing from a term has exponent 0 there
        Monomial::from_pairs(mins)
    }

    /// Exact division. Clears negative exponents by a monomial shift and
    /// runs multivariate long division; a nonzero remainder is an error.
    pub fn div_exact(&self, d: &MultiLaurent) -> Result<Self> {
        if d.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if self.is_zero() {
            return Ok(MultiLaurent::zero());
        }
        if d.len() == 1 {
            let (m, c) = d.terms().next().unwrap();
            let inv = c.checked_inv()?;
            return Ok(MultiLaurent { terms: self.terms.iter().map(|(k, a)| (k.div(m), a * &inv)).collect() });
        }
        let sn = self.min_exponents();
        let sd = d.min_exponents();
        let num = self.mul_monomial(&Monomial::one().div(&sn));
        let den = d.mul_monomial(&Monomial::one().div(&sd));
        let (lm, lc) = den.leading_term().map(|(m, c)| (m.clone(), c.clone())).unwrap();
        let lc_inv = lc.inv();
        let mut rem = num;
        let mut quot = MultiLaurent::zero();
        while let Some((m, c)) = rem.leading_term() {
            if !m.divisible_by(&lm) {
                return Err(Error::NotExact);
            }
            let qm = m.div(&lm);
            let qc = c * &lc_inv;
            for (dm, dc) in den.terms() {
                rem.add_term(dm.mul(&qm), &-(dc * &qc));
            }
            quot.add_term(qm, &qc);
        }
        Ok(quot.mul_monomial(&sn.div(&sd)))
    }

    pub fn to_complex_eval(&self, at: &BTreeMap<VarId, num_complex::Complex64>) -> Result<num_complex::Complex64> {
        let mut total = num_complex::Complex64::new(0.0, 0.0);
        for (m, c) in &self.terms {
            let mut t = c.to_complex();
            for &(v, e) in m.exps() {
                let x = at.get(&v).ok_or(Error::Unassigned(v))?;
                t *= x.powi(e);
            }
            total += t;
        }
        Ok(total)
    }
}

impl fmt::Display for MultiLaurent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (m, c) in self.terms.iter().rev() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({c})")?;
            for (v, e) in m.exps() {
                if *e == 1 {
                    write!(f, "*{v}")?;
                } else {
                    write!(f, "*{v}^{e}")?;
                }
            }
        }
        Ok(())
    }
}

impl<'a> Add<&'a MultiLaurent> for &'a MultiLaurent {
    type Output = MultiLaurent;
    fn add(self, o: &MultiLaurent) -> MultiLaurent {
        let (mut big, small) = if self.len() >= o.len() { (self.clone(), o) } else { (o.clone(), self) };
        for (m, c) in &small.terms {
            big.add_term(m.clone(), c);
        }
        big
    }
}

impl<'a> Sub<&'a MultiLaurent> for &'a MultiLaurent {
    type Output = MultiLaurent;
    fn sub(self, o: &MultiLaurent) -> MultiLaurent {
        let mut out = self.clone();
        for (m, c) in &o.terms {
            out.add_term(m.clone(), &-c);
        }
        out
    }
}

impl<'a> Mul<&'a MultiLaurent> for &'a MultiLaurent {
    type Output = MultiLaurent;
    fn mul(self, o: &MultiLaurent) -> MultiLaurent {
        let mut out = MultiLaurent::zero();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &o.terms {
                out.add_term(m1.mul(m2), &(c1 * c2));
            }
        }
        out
    }
}

impl Neg for &MultiLaurent {
    type Output = MultiLaurent;
    fn neg(self) -> MultiLaurent {
        self.scale(&-CycQ::one())
    }
}

macro_rules! owned_binop {
    ($tr:ident, $m:ident) => {
        impl $tr<MultiLaurent> for MultiLaurent {
            type Output = MultiLaurent;
            fn $m(self, o: MultiLaurent) -> MultiLaurent {
                (&self).$m(&o)
            }
        }
        impl $tr<&MultiLaurent> for MultiLaurent {
            type Output = MultiLaurent;
            fn $m(self, o: &MultiLaurent) -> MultiLaurent {
                (&self).$m(o)
            }
        }
    };
}
owned_binop!(Add, add);
owned_binop!(Sub, sub);
owned_binop!(Mul, mul);

impl Zero for MultiLaurent {
    fn zero() -> Self {
        MultiLaurent::zero()
    }
    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
}

impl From<CycQ> for MultiLaurent {
    fn from(c: CycQ) -> Self {
        MultiLaurent::constant(c)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;

    fn z(i: usize) -> MultiLaurent {
        MultiLaurent::var(VarId::z(i))
    }

    #[test]
    fn monomial_order_is_lex() {
        let a = Monomial::from_pairs([(VarId::z(1), 1)]);
        let b = Monomial::from_pairs([(VarId::z(2), 5)]);
        assert!(a > b);
        let c = Monomial::from_pairs([(VarId::z(1), 1), (VarId::z(2), 1)]);
        assert!(c > a);
        assert!(Monomial::var(VarId::z(2), -1) < Monomial::one());
    }

    #[test]
    fn exact_division_round_trip() {
        let f = &(&z(1) - &z(2)) * &(&(&z(1) * &z(3)) + &MultiLaurent::constant(CycQ::q()));
        let g = f.div_exact(&(&z(1) - &z(2))).unwrap();
        assert_eq!(&g * &(&z(1) - &z(2)), f);
    }

    #[test]
    fn inexact_division_fails() {
        let f = &z(1) + &z(2);
        assert_eq!(f.div_exact(&(&z(1) - &z(2))), Err(Error::NotExact));
    }

    #[test]
    fn laurent_division() {
        let zi = MultiLaurent::term(CycQ::one(), Monomial::var(VarId::z(1), -1));
        let f = &(&z(1) - &zi) * &(&z(2) + &zi);
        assert_eq!(f.div_exact(&(&z(2) + &zi)).unwrap(), &z(1) - &zi);
    }

    #[test]
    fn eval_errors() {
        let zi = MultiLaurent::term(CycQ::one(), Monomial::var(VarId::z(1), -1));
        let mut at = Assignment::new();
        assert_eq!(zi.eval(&at), Err(Error::Unassigned(VarId::z(1))));
        at.insert(VarId::z(1), CycQ::zero());
        assert_eq!(zi.eval(&at), Err(Error::Pole(VarId::z(1))));
        at.insert(VarId::z(1), CycQ::ratio(2, 3));
        assert_eq!(zi.eval(&at).unwrap(), CycQ::ratio(3, 2));
    }

    #[test]
    fn substitution_and_limits() {
        let f = &(&z(1) * &z(2)) + &z(2).pow(2);
        let g = f.subst_monomial(VarId::z(2), &CycQ::q(), &Monomial::var(VarId::z(1), 1)).unwrap();
        let expect = z(1).pow(2).scale(&(CycQ::q() + CycQ::q_pow(2)));
        assert_eq!(g, expect);
        assert_eq!(f.limit_zero(VarId::z(2)).unwrap(), MultiLaurent::zero());
        assert_eq!(f.limit_infinity(VarId::z(2), 2).unwrap(), MultiLaurent::one());
        assert_eq!(f.limit_all(), CycQ::from_int(2));
        let s = f.subst(VarId::z(1), &(&z(3) + &z(4))).unwrap();
        assert_eq!(
            s.eval(
                &[(VarId::z(2), CycQ::from_int(1)), (VarId::z(3), CycQ::from_int(2)), (VarId::z(4), CycQ::from_int(5))]
                    .into_iter()
                    .collect()
            )
            .unwrap(),
            CycQ::from_int(8)
        );
        let _ = rat(1, 2);
    }
}
