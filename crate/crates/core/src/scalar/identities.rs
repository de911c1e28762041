//! Sampled and exact checks of the scalar-product relations.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_traits::{One, Zero};

use super::{pf, scalar_product, scalar_product_with, Family, Param, ScalarKind};
use crate::error::{Error, Result};
use crate::exact::sample::{distinct_rationals, rng};
use crate::exact::{Assignment, CycQ, MultiLaurent, VarId};
use crate::qkz::{q, qi, qmqi};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Identity {
    SymmetryZ,
    SymmetryX,
    InversionX,
    TrivialZeros,
    ReductionX,
    ReductionZz,
    SToSbar,
    LimitsToPm,
}

impl Identity {
    pub const ALL: [Identity; 8] = [
        Identity::SymmetryZ,
        Identity::SymmetryX,
        Identity::InversionX,
        Identity::TrivialZeros,
        Identity::ReductionX,
        Identity::ReductionZz,
        Identity::SToSbar,
        Identity::LimitsToPm,
    ];

    fn name(self) -> &'static str {
        match self {
            Identity::SymmetryZ => "symmetry_z",
            Identity::SymmetryX => "symmetry_x",
            Identity::InversionX => "inversion_x",
            Identity::TrivialZeros => "trivial_zeros",
            Identity::ReductionX => "reduction_x",
            Identity::ReductionZz => "reduction_zz",
            Identity::SToSbar => "s_to_sbar",
            Identity::LimitsToPm => "limits_to_pm",
        }
    }

    /// Whether the identity makes a statement at this (k, p).
    pub fn applies(self, k: usize, p: usize) -> bool {
        match self {
            Identity::SymmetryZ => k >= 1 && k <= p,
            Identity::SymmetryX | Identity::ReductionX => p >= 2,
            Identity::InversionX | Identity::TrivialZeros => p >= 1,
            Identity::ReductionZz => k >= 1 && p >= 1,
            Identity::SToSbar => k >= 1 || p >= 1,
            Identity::LimitsToPm => k >= 1 && k <= p,
        }
    }
}

impl fmt::Display for Identity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Identity {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Identity::ALL.into_iter().find(|i| i.name() == s).ok_or_else(|| Error::Parse(format!("unknown identity {s:?}")))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct IdentityReport {
    pub identity: Identity,
    pub k: usize,
    pub p: usize,
    pub checks: usize,
    /// First counterexample, if any.
    pub failure: Option<String>,
}

impl IdentityReport {
    pub fn passed(&self) -> bool {
        self.failure.is_none()
    }
}

impl fmt::Display for IdentityReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.failure {
            None => write!(f, "{} k={} p={}: pass ({} checks)", self.identity, self.k, self.p, self.checks),
            Some(d) => write!(f, "{} k={} p={}: FAIL {}", self.identity, self.k, self.p, d),
        }
    }
}

struct Checker {
    checks: usize,
    failure: Option<String>,
}

impl Checker {
    fn eq(&mut self, what: &str, lhs: &CycQ, rhs: &CycQ, point: &Point) {
        if self.failure.is_some() {
            return;
        }
        self.checks += 1;
        if lhs != rhs {
            let ratio = rhs.checked_inv().map(|r| format!(" ratio {}", lhs * &r)).unwrap_or_default();
            self.failure = Some(format!("{what} at {point}: lhs {lhs} rhs {rhs}{ratio}"));
        }
    }

    fn ok(&mut self, what: &str, cond: bool, point: &Point) {
        if self.failure.is_some() {
            return;
        }
        self.checks += 1;
        if !cond {
            self.failure = Some(format!("{what} at {point}"));
        }
    }
}

/// Sample point: z values, optional x, x_i values.
#[derive(Clone, Debug)]
struct Point {
    zs: Vec<CycQ>,
    x: Option<CycQ>,
    xs: Vec<CycQ>,
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |v: &[CycQ]| v.iter().map(|c| format!("({c})")).collect::<Vec<_>>().join(",");
        write!(f, "z=[{}]", join(&self.zs))?;
        if let Some(x) = &self.x {
            write!(f, " x=({x})")?;
        }
        write!(f, " xs=[{}]", join(&self.xs))
    }
}

fn at(kind: ScalarKind, zs: &[CycQ], x: Option<&CycQ>, xs: &[CycQ]) -> Result<Assignment> {
    let mut a = Assignment::new();
    for (i, z) in zs.iter().enumerate() {
        a.insert(VarId::z(i + 1), z.clone());
    }
    if let Some(x) = x {
        a.insert(VarId::aux(), x.clone());
    }
    for (i, v) in xs.iter().enumerate() {
        a.insert(VarId::x(i + 1), v.clone());
    }
    if a.len() != kind.vars().len() {
        return Err(Error::Domain(format!("{kind}: wrong number of parameters")));
    }
    Ok(a)
}

fn s(family: Family, k: usize, p: usize, zs: &[CycQ], x: Option<&CycQ>, xs: &[CycQ]) -> Result<CycQ> {
    let kind = ScalarKind::new(family, k, p)?;
    scalar_product(kind, &at(kind, zs, x, xs)?)
}

/// Scalar product with one parameter left symbolic.
fn s_partial(kind: ScalarKind, pt: &Point, free: VarId) -> Result<MultiLaurent> {
    let mut params: BTreeMap<VarId, Param> =
        at(kind, &pt.zs, pt.x.as_ref(), &pt.xs)?.into_iter().map(|(v, c)| (v, Param::value(c))).collect();
    params.insert(free, Param::sym(free));
    scalar_product_with(kind, &params)
}

fn lin(a: &CycQ, x: &CycQ, b: &CycQ, y: &CycQ) -> CycQ {
    &(a * x) - &(b * y)
}

fn qp(k: i64) -> CycQ {
    CycQ::q_pow(k)
}

fn neg_q_pow(e: i64) -> CycQ {
    (-q()).pow(e)
}

fn d(k: i64) -> CycQ {
    qmqi().pow(-k)
}

pub fn verify_scalar_identity(
    which: Identity,
    k: usize,
    p: usize,
    sample_count: usize,
    seed: u64,
) -> Result<IdentityReport> {
    if !which.applies(k, p) {
        return Err(Error::InvalidCase(format!("{which} makes no statement at k = {k}, p = {p}")));
    }
    let mut r = rng(seed ^ ((k as u64) << 8) ^ ((p as u64) << 16));
    let mut c = Checker { checks: 0, failure: None };
    for _ in 0..sample_count.max(1) {
        // generic rationals for every parameter that may appear
        let vals = distinct_rationals(&mut r, 2 * k + p + 3);
        let pt = Point { zs: vals[..2 * k].to_vec(), x: None, xs: vals[2 * k..2 * k + p].to_vec() };
        let extra = &vals[2 * k + p..];
        match which {
            Identity::SymmetryZ => symmetry_z(&mut c, k, p, &pt)?,
            Identity::SymmetryX => symmetry_x(&mut c, k, p, &pt)?,
            Identity::InversionX => {
                let base = s(Family::S0, k, p, &pt.zs, None, &pt.xs)?;
                for i in 0..p {
                    let mut xs = pt.xs.clone();
                    xs[i] = xs[i].inv();
                    c.eq("x_i -> 1/x_i", &base, &s(Family::S0, k, p, &pt.zs, None, &xs)?, &pt);
                }
            }
            Identity::TrivialZeros => {
                for i in 0..p {
                    for v in [q(), qi()] {
                        let mut xs = pt.xs.clone();
                        xs[i] = v;
                        let val = s(Family::S0, k, p, &pt.zs, None, &xs)?;
                        c.ok("vanishing at x_i = q^(+-1)", val.is_zero(), &Point { xs, ..pt.clone() });
                    }
                }
            }
            Identity::ReductionX => reduction_x(&mut c, k, p, &pt)?,
            Identity::ReductionZz => reduction_zz(&mut c, k, p, &pt)?,
            Identity::SToSbar => s_to_sbar(&mut c, k, p, &pt, extra)?,
            Identity::LimitsToPm => limits_to_pm(&mut c, k, p, &pt, &extra[0])?,
        }
        if c.failure.is_some() {
            break;
        }
    }
    Ok(IdentityReport { identity: which, k, p, checks: c.checks, failure: c.failure })
}

fn symmetry_z(c: &mut Checker, k: usize, p: usize, pt: &Point) -> Result<()> {
    let base = s(Family::S0, k, p, &pt.zs, None, &pt.xs)?;
    for i in 0..2 * k - 1 {
        let mut sw = pt.zs.clone();
        sw.swap(i, i + 1);
        let swapped = s(Family::S0, k, p, &sw, None, &pt.xs)?;
        let lhs = &lin(&q(), &pt.zs[i + 1], &qi(), &pt.zs[i]) * &base;
        let rhs = &lin(&q(), &pt.zs[i], &qi(), &pt.zs[i + 1]) * &swapped;
        c.eq("exchange in z", &lhs, &rhs, pt);
    }
    // z_1 symbolic: divisible by prod_j (q z_1 - q^-1 z_j), quotient degree <= p - k
    let kind = ScalarKind::new(Family::S0, k, p)?;
    let f = s_partial(kind, pt, VarId::z(1))?;
    let mut div = MultiLaurent::one();
    for zj in &pt.zs[1..] {
        let t =
            &MultiLaurent::term(q(), crate::exact::Monomial::var(VarId::z(1), 1)) - &MultiLaurent::constant(&qi() * zj);
        div = &div * &t;
    }
    match f.div_exact(&div) {
        Ok(quot) => {
            let deg = quot.degree_range(VarId::z(1)).map_or(0, |r| r.1);
            let low = quot.degree_range(VarId::z(1)).map_or(0, |r| r.0);
            c.ok("quotient degree in z_1", low >= 0 && deg <= (p - k) as i32, pt);
        }
        Err(Error::NotExact) => c.ok("divisibility in z_1", false, pt),
        Err(e) => return Err(e),
    }
    Ok(())
}

fn symmetry_x(c: &mut Checker, k: usize, p: usize, pt: &Point) -> Result<()> {
    let base = s(Family::S0, k, p, &pt.zs, None, &pt.xs)?;
    for i in 0..p - 1 {
        let mut xs = pt.xs.clone();
        xs.swap(i, i + 1);
        c.eq("x_i <-> x_i+1", &base, &s(Family::S0, k, p, &pt.zs, None, &xs)?, pt);
    }
    let kind = ScalarKind::new(Family::S0, k, p)?;
    let f = s_partial(kind, pt, VarId::x(1))?;
    if let Some((lo, hi)) = f.degree_range(VarId::x(1)) {
        c.ok("degree width in x_1", hi - lo <= 2 * (k + p) as i32, pt);
    }
    Ok(())
}

fn reduction_x(c: &mut Checker, k: usize, p: usize, pt: &Point) -> Result<()> {
    let y = pt.xs[p - 2].clone();
    let yi = y.inv();
    let mut xs = pt.xs.clone();
    xs[p - 1] = &qp(-2) * &y;
    let lhs = s(Family::S0, k, p, &pt.zs, None, &xs)?;
    let lower = if k + p - 2 == 0 { CycQ::one() } else { s(Family::S0, k, p - 2, &pt.zs, None, &xs[..p - 2])? };
    let mut rhs = &qp(2 * (p + k) as i64 - 4) * &(&(&lin(&q(), &y, &qi(), &yi) * &(&y - &yi)) * &d(2));
    for z in &pt.zs {
        rhs = &rhs * &(&(&lin(&q(), z, &qi(), &yi) * &lin(&q(), z, &qp(-3), &y)) * &d(2));
    }
    for xi in &xs[..p - 2] {
        let xv = xi.inv();
        let t = &(&lin(&q(), xi, &qi(), &yi) * &lin(&q(), &xv, &qi(), &yi))
            * &(&lin(&q(), xi, &qp(-3), &y) * &lin(&q(), &xv, &qp(-3), &y));
        rhs = &rhs * &(&t * &d(4));
    }
    let one = CycQ::one();
    let num = &(&(&(&one + &qp(2)) * &(&q() - &y).pow(2)) * &(&qp(2) - &y)) * &(&(&qp(3) - &y) * &(&qp(3) + &y));
    let den = &(&qp(5) * &(&qp(2) - &one).pow(2)) * &(&y.pow(2) * &(&one + &y));
    rhs = &(&rhs * &num) * &den.inv();
    rhs = &rhs * &lower;
    c.eq("first reduction", &lhs, &rhs, &Point { xs, ..pt.clone() });
    Ok(())
}

fn reduction_zz(c: &mut Checker, k: usize, p: usize, pt: &Point) -> Result<()> {
    let y = pt.xs[p - 1].clone();
    let yi = y.inv();
    let mut zs = pt.zs.clone();
    zs[2 * k - 2] = &qp(-2) * &yi;
    zs[2 * k - 1] = &qp(-2) * &y;
    let lhs = s(Family::S0, k, p, &zs, None, &pt.xs)?;
    let lower = if k + p - 2 == 0 {
        CycQ::one()
    } else {
        s(Family::S0, k - 1, p - 1, &zs[..2 * k - 2], None, &pt.xs[..p - 1])?
    };
    let head = &(&lin(&qi(), &yi, &qp(-3), &y) * &lin(&q(), &y, &qi(), &yi)) * &lin(&qi(), &y, &q(), &yi);
    let mut rhs = -&(&(&qp(-2 * (p as i64 - k as i64)) * &head) * &d(3));
    for xi in &pt.xs[..p - 1] {
        let xv = xi.inv();
        let t = &(&lin(&q(), &y, &qi(), xi) * &lin(&q(), &y, &qi(), &xv))
            * &(&lin(&q(), &yi, &qi(), xi) * &lin(&q(), &yi, &qi(), &xv));
        rhs = &rhs * &(&t * &d(4));
    }
    for z in &zs[..2 * k - 2] {
        rhs = &rhs * &(&(&lin(&q(), z, &qp(-3), &y) * &lin(&q(), z, &qp(-3), &yi)) * &d(2));
    }
    rhs = &rhs * &lower;
    c.eq("second reduction", &lhs, &rhs, &Point { zs, ..pt.clone() });
    Ok(())
}

fn s_to_sbar(c: &mut Checker, k: usize, p: usize, pt: &Point, extra: &[CycQ]) -> Result<()> {
    if k >= 1 && p >= 1 {
        // S0_{k,p} at z_2k = q^-2 x_p
        let y = pt.xs[p - 1].clone();
        let yi = y.inv();
        let mut zs = pt.zs.clone();
        zs[2 * k - 1] = &qp(-2) * &y;
        let lhs = s(Family::S0, k, p, &zs, None, &pt.xs)?;
        let mut rhs = &neg_q_pow(k as i64 - p as i64) * &pf(&y, &yi);
        for z in &zs[..2 * k - 1] {
            rhs = &rhs * &(&lin(&q(), z, &qp(-3), &y) * &d(1));
        }
        for xj in &pt.xs[..p - 1] {
            rhs = &rhs * &(&pf(&y, xj) * &pf(&y, &xj.inv()));
        }
        let bar = s(Family::S0bar, k, p - 1, &zs[..2 * k - 1], Some(&yi), &pt.xs[..p - 1])?;
        c.eq("S0 -> S0bar", &lhs, &(&rhs * &bar), &Point { zs, ..pt.clone() });
    }
    if k >= 1 {
        // S0bar_{k,p} at z_{2k-1} = q^-2 x
        let x = extra[0].clone();
        let mut zs = pt.zs[..2 * k - 1].to_vec();
        zs[2 * k - 2] = &qp(-2) * &x;
        let lhs = s(Family::S0bar, k, p, &zs, Some(&x), &pt.xs)?;
        let mut rhs = &neg_q_pow(k as i64 - p as i64 - 1) * &pf(&x, &x.inv());
        // prefactor as produced by the reduction relation at sites 2k-1, 2k
        for z in &zs[..2 * k - 2] {
            rhs = &rhs * &(&lin(&q(), z, &qp(-3), &x) * &d(1));
        }
        for xi in &pt.xs {
            rhs = &rhs * &(&pf(&x, xi) * &pf(&x, &xi.inv()));
        }
        let lower = if k - 1 + p == 0 { CycQ::one() } else { s(Family::S0, k - 1, p, &zs[..2 * k - 2], None, &pt.xs)? };
        c.eq("S0bar -> S0", &lhs, &(&rhs * &lower), &Point { zs, x: Some(x), ..pt.clone() });
    }
    if p >= 1 && ScalarKind::new(Family::Splus, k, p).is_ok() {
        // S+_{k,p} at z_{2k+1} = q^-2 x_p
        let y = pt.xs[p - 1].clone();
        let yi = y.inv();
        let mut zs = pt.zs.clone();
        zs.push(&qp(-2) * &y);
        let lhs = s(Family::Splus, k, p, &zs, None, &pt.xs)?;
        let mut rhs = neg_q_pow(k as i64 - p as i64);
        for z in &zs[..2 * k] {
            rhs = &rhs * &(&lin(&q(), z, &qp(-3), &y) * &d(1));
        }
        for xj in &pt.xs[..p] {
            rhs = &rhs * &(&pf(&y, xj) * &pf(&y, &xj.inv()));
        }
        let bar = s(Family::Splusbar, k, p - 1, &zs[..2 * k], Some(&yi), &pt.xs[..p - 1])?;
        c.eq("S+ -> S+bar", &lhs, &(&rhs * &bar), &Point { zs, ..pt.clone() });
    }
    Ok(())
}

fn limits_to_pm(c: &mut Checker, k: usize, p: usize, pt: &Point, x: &CycQ) -> Result<()> {
    let n = (k + p) as i64;
    let one = CycQ::one();
    let scale = &qp(4 * k as i64 - 1) * &(&one - &qp(-2)).pow(n - 1);
    // z_2k -> infinity in S0; the power of q follows from the braid limit
    // with 2k - 1 up spins to the left
    let kind = ScalarKind::new(Family::S0, k, p)?;
    let lead = s_partial(kind, pt, VarId::z(2 * k))?.limit_infinity(VarId::z(2 * k), n as i32 - 1)?;
    let rhs = -&(&s(Family::Sminus, k - 1, p, &pt.zs[..2 * k - 1], None, &pt.xs)? * &(&scale * &qp(2)).inv());
    c.eq("S0 at z_2k -> oo", &lead.as_constant().unwrap_or_else(CycQ::zero), &rhs, pt);
    // z_{2k-1} -> infinity in S0bar
    let bar_pt = Point { zs: pt.zs[..2 * k - 1].to_vec(), x: Some(x.clone()), xs: pt.xs.clone() };
    let kind = ScalarKind::new(Family::S0bar, k, p)?;
    let lead = s_partial(kind, &bar_pt, VarId::z(2 * k - 1))?.limit_infinity(VarId::z(2 * k - 1), n as i32 - 1)?;
    let rhs = &s(Family::Sminusbar, k - 1, p, &pt.zs[..2 * k - 2], Some(x), &pt.xs)? * &scale.inv();
    c.eq("S0bar at z_2k-1 -> oo", &lead.as_constant().unwrap_or_else(CycQ::zero), &rhs, &bar_pt);
    // x -> 0 in x S0bar
    let f = s_partial(kind, &bar_pt, VarId::aux())?;
    let lim = f.mul_monomial(&crate::exact::Monomial::var(VarId::aux(), 1)).limit_zero(VarId::aux())?;
    let rhs = -&(&s(Family::Splus, k - 1, p, &pt.zs[..2 * k - 1], None, &pt.xs)?
        * &(&qp(2 * p as i64 + 1) * &qmqi().pow(n)).inv());
    c.eq("x S0bar at x -> 0", &lim.as_constant().unwrap_or_else(CycQ::zero), &rhs, &bar_pt);
    Ok(())
}
