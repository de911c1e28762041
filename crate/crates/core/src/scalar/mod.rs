//! Boundary co-vectors and the six scalar products built from them and the
//! qKZ solution vectors.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::exact::{Assignment, CycQ, Monomial, MultiLaurent, VarId};
use crate::qkz::{pair_index, psi_cached, q, qi, qmqi, rcheck_cleared, with_pair, QkzVector};
use crate::spin::is_up;
use crate::Mu;

mod identities;

pub use identities::{verify_scalar_identity, Identity, IdentityReport};

/// Largest chain the scalar products will request from the qKZ cache.
pub const MAX_SITES_ZERO: usize = 8;
pub const MAX_SITES_ODD: usize = 7;

/// A spectral argument c * monomial: either a number (empty monomial) or a
/// scaled power product of symbols.
#[derive(Clone, Debug, PartialEq)]
pub struct Param {
    pub coeff: CycQ,
    pub mono: Monomial,
}

impl Param {
    pub fn sym(v: VarId) -> Self {
        Param { coeff: CycQ::one(), mono: Monomial::var(v, 1) }
    }

    pub fn value(c: CycQ) -> Self {
        Param { coeff: c, mono: Monomial::one() }
    }

    pub fn inv(&self) -> Result<Self> {
        if self.coeff.is_zero() {
            return Err(Error::Pole(VarId::aux()));
        }
        Ok(Param { coeff: self.coeff.inv(), mono: self.mono.pow(-1) })
    }

    pub fn scaled(&self, c: &CycQ) -> Self {
        Param { coeff: &self.coeff * c, mono: self.mono.clone() }
    }

    pub fn as_laurent(&self) -> MultiLaurent {
        MultiLaurent::term(self.coeff.clone(), self.mono.clone())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BoundaryKind {
    Chi,
    Varphi,
}

/// Dual-basis coefficients. Chi: up-up, up-down, down-up, down-down.
/// Varphi: up, down.
#[derive(Clone, Debug, PartialEq)]
pub struct BoundaryState {
    pub kind: BoundaryKind,
    pub coeffs: Vec<MultiLaurent>,
}

fn qdiv(c: &CycQ) -> CycQ {
    c.inv()
}

pub fn chi_state(x: &Param) -> Result<BoundaryState> {
    let xl = x.as_laurent();
    let xi = x.inv()?.as_laurent();
    let diag = (&xl.scale(&qi()) - &xi.scale(&q())).scale(&qdiv(&(&qi() - &q())));
    let d1 = qdiv(&(&CycQ::one() - &q()));
    let ud = (&xl - &MultiLaurent::constant(q())).scale(&d1);
    let du = (&MultiLaurent::one() - &xi.scale(&q())).scale(&d1);
    Ok(BoundaryState { kind: BoundaryKind::Chi, coeffs: vec![diag.clone(), ud, du, diag] })
}

pub fn phi_state(x: &Param) -> Result<BoundaryState> {
    let xl = x.as_laurent();
    let xi = x.inv()?.as_laurent();
    let up = (&MultiLaurent::one() - &xl.scale(&q())).scale(&qdiv(&(&CycQ::one() - &q())));
    let down = (&xl.scale(&q()) - &xi.scale(&qi())).scale(&qmqi().inv());
    Ok(BoundaryState { kind: BoundaryKind::Varphi, coeffs: vec![up, down] })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Family {
    S0,
    S0bar,
    Splus,
    Sminus,
    Splusbar,
    Sminusbar,
}

impl Family {
    pub const ALL: [Family; 6] =
        [Family::S0, Family::S0bar, Family::Splus, Family::Sminus, Family::Splusbar, Family::Sminusbar];

    pub fn mu(self) -> Mu {
        match self {
            Family::S0 | Family::S0bar => Mu::Zero,
            Family::Splus | Family::Splusbar => Mu::Plus,
            Family::Sminus | Family::Sminusbar => Mu::Minus,
        }
    }

    pub fn barred(self) -> bool {
        matches!(self, Family::S0bar | Family::Splusbar | Family::Sminusbar)
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Family::S0 => "S0",
            Family::S0bar => "S0bar",
            Family::Splus => "Splus",
            Family::Sminus => "Sminus",
            Family::Splusbar => "Splusbar",
            Family::Sminusbar => "Sminusbar",
        })
    }
}

impl FromStr for Family {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Family::ALL
            .into_iter()
            .find(|f| f.to_string().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::Parse(format!("unknown scalar product {s:?}")))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct ScalarKind {
    pub family: Family,
    pub k: usize,
    pub p: usize,
}

impl ScalarKind {
    pub fn new(family: Family, k: usize, p: usize) -> Result<Self> {
        let kind = ScalarKind { family, k, p };
        if family == Family::S0bar && k == 0 {
            return Err(Error::InvalidCase(format!("{family} needs k >= 1")));
        }
        if family == Family::S0 && k + p == 0 {
            return Err(Error::InvalidCase("S0 needs k + p >= 1".into()));
        }
        let max = if family.mu() == Mu::Zero { MAX_SITES_ZERO } else { MAX_SITES_ODD };
        if kind.n_sites() > max {
            return Err(Error::Domain(format!("{kind} needs N = {} > {max}", kind.n_sites())));
        }
        Ok(kind)
    }

    pub fn n(&self) -> usize {
        self.k + self.p
    }

    pub fn n_sites(&self) -> usize {
        match self.family.mu() {
            Mu::Zero => 2 * self.n(),
            _ => 2 * self.n() + 1,
        }
    }

    /// Number of z parameters, which is also the number of leading up spins.
    pub fn n_z(&self) -> usize {
        match self.family {
            Family::S0 | Family::Splusbar | Family::Sminusbar => 2 * self.k,
            Family::S0bar => 2 * self.k - 1,
            Family::Splus | Family::Sminus => 2 * self.k + 1,
        }
    }

    /// Parameters in order z_1.., [x], x_1..x_p.
    pub fn vars(&self) -> Vec<VarId> {
        let mut v: Vec<VarId> = (1..=self.n_z()).map(VarId::z).collect();
        if self.family.barred() {
            v.push(VarId::aux());
        }
        v.extend((1..=self.p).map(VarId::x));
        v
    }

    /// (N, m, mu) of the overlap reached in the homogeneous limit.
    pub fn overlap_index(&self) -> (usize, usize, Mu) {
        (self.n_sites(), self.n_z(), self.family.mu())
    }

    fn psi(&self) -> Result<std::sync::Arc<QkzVector>> {
        psi_cached(self.family.mu(), self.n_sites())
    }
}

impl fmt::Display for ScalarKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}[k={},p={}]", self.family, self.k, self.p)
    }
}

fn contract(
    psi: &QkzVector,
    sites: &[Param],
    prefix: usize,
    phi: Option<&BoundaryState>,
    chis: &[BoundaryState],
) -> Result<MultiLaurent> {
    let map: BTreeMap<VarId, (CycQ, Monomial)> =
        sites.iter().enumerate().map(|(j, p)| (VarId::z(j + 1), (p.coeff.clone(), p.mono.clone()))).collect();
    let numeric: Option<Assignment> =
        map.iter().all(|(_, (_, m))| m.is_one()).then(|| map.iter().map(|(v, (c, _))| (*v, c.clone())).collect());
    let mask = (1u64 << prefix) - 1;
    let mut total = MultiLaurent::zero();
    for (s, comp) in &psi.comps {
        if s & mask != mask {
            continue;
        }
        let mut cov = MultiLaurent::one();
        let mut site = prefix + 1;
        if let Some(f) = phi {
            cov = &cov * &f.coeffs[if is_up(*s, site) { 0 } else { 1 }];
            site += 1;
        }
        for c in chis {
            cov = &cov * &c.coeffs[pair_index(*s, site)];
            site += 2;
        }
        if cov.is_zero() {
            continue;
        }
        let val = match &numeric {
            Some(at) => MultiLaurent::constant(comp.eval(at)?),
            None => comp.subst_many(&map)?,
        };
        total = &total + &(&cov * &val);
    }
    Ok(total)
}

/// Scalar product with every parameter replaced by the given argument.
/// Mixing symbols and numbers gives partially evaluated results.
pub fn scalar_product_with(kind: ScalarKind, params: &BTreeMap<VarId, Param>) -> Result<MultiLaurent> {
    let get = |v: VarId| params.get(&v).cloned().ok_or(Error::Unassigned(v));
    let mut sites: Vec<Param> = (1..=kind.n_z()).map(|i| get(VarId::z(i))).collect::<Result<_>>()?;
    let phi = if kind.family.barred() {
        let x = get(VarId::aux())?;
        sites.push(x.clone());
        Some(phi_state(&x)?)
    } else {
        None
    };
    let mut chis = Vec::with_capacity(kind.p);
    for i in 1..=kind.p {
        let x = get(VarId::x(i))?;
        sites.push(x.clone());
        sites.push(x.inv()?);
        chis.push(chi_state(&x)?);
    }
    contract(&*kind.psi()?, &sites, kind.n_z(), phi.as_ref(), &chis)
}

pub fn scalar_product(kind: ScalarKind, at: &Assignment) -> Result<CycQ> {
    let params = kind
        .vars()
        .into_iter()
        .map(|v| Ok((v, Param::value(at.get(&v).cloned().ok_or(Error::Unassigned(v))?))))
        .collect::<Result<_>>()?;
    let r = scalar_product_with(kind, &params)?;
    Ok(r.as_constant().unwrap_or_else(CycQ::zero))
}

/// Fully symbolic scalar product (small sizes only).
pub fn scalar_product_symbolic(kind: ScalarKind) -> Result<MultiLaurent> {
    let params = kind.vars().into_iter().map(|v| (v, Param::sym(v))).collect();
    scalar_product_with(kind, &params)
}

/// Value with all parameters at 1.
pub fn homogeneous_scalar(kind: ScalarKind) -> Result<CycQ> {
    let at = kind.vars().into_iter().map(|v| (v, CycQ::one())).collect();
    scalar_product(kind, &at)
}

/// Builds an assignment from values listed in `kind.vars()` order.
pub fn assignment(kind: ScalarKind, values: &[CycQ]) -> Result<Assignment> {
    let vars = kind.vars();
    if vars.len() != values.len() {
        return Err(Error::Domain(format!("{kind} takes {} parameters, got {}", vars.len(), values.len())));
    }
    Ok(vars.into_iter().zip(values.iter().cloned()).collect())
}

/// (q a - q^-1 b) / (q - q^-1)
pub(crate) fn pf(a: &CycQ, b: &CycQ) -> CycQ {
    &(&(&q() * a) - &(&qi() * b)) * &qmqi().inv()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Factorized {
    Kk,
    KkPlus1,
}

fn cross_x(xs: &[CycQ]) -> CycQ {
    let mut r = CycQ::one();
    for i in 0..xs.len() {
        for j in i + 1..xs.len() {
            let (a, b) = (&xs[i], &xs[j]);
            let (ai, bi) = (a.inv(), b.inv());
            r = &r * &(&(&pf(a, b) * &pf(a, &bi)) * &(&pf(&ai, b) * &pf(&ai, &bi)));
        }
    }
    r
}

fn vandermonde_z(zs: &[CycQ]) -> CycQ {
    let mut r = CycQ::one();
    for i in 0..zs.len() {
        for j in i + 1..zs.len() {
            r = &r * &pf(&zs[i], &zs[j]);
        }
    }
    r
}

/// Product formulas for S0_{k,k} and S0_{k,k+1}.
pub fn factorized_s0(variant: Factorized, k: usize, at: &Assignment) -> Result<CycQ> {
    let p = match variant {
        Factorized::Kk if k == 0 => return Err(Error::InvalidCase("S0_{k,k} needs k >= 1".into())),
        Factorized::Kk => k,
        Factorized::KkPlus1 => k + 1,
    };
    let get = |v: VarId| at.get(&v).cloned().ok_or(Error::Unassigned(v));
    let zs: Vec<CycQ> = (1..=2 * k).map(|i| get(VarId::z(i))).collect::<Result<_>>()?;
    let xs: Vec<CycQ> = (1..=p).map(|i| get(VarId::x(i))).collect::<Result<_>>()?;
    if xs.iter().any(|x| x.is_zero()) {
        return Err(Error::Pole(VarId::x(0)));
    }
    let d2 = qmqi().pow(-2);
    let mut r = &vandermonde_z(&zs) * &cross_x(&xs);
    match variant {
        Factorized::Kk => {
            for x in &xs {
                let xi = x.inv();
                let t = &(&(&q() * x) - &(&qi() * &xi)) * &(&(&q() * &xi) - &(&qi() * x));
                r = &(&r * &t) * &d2;
            }
        }
        Factorized::KkPlus1 => {
            let one = CycQ::one();
            let c = &(&(&one - &qi()) * &(&one + &qi())) * &(&one + &qi());
            r = &r * &c;
            for z in &zs {
                r = &r * &(&(&q() * z) + &CycQ::q_pow(-2));
            }
            for x in &xs {
                let t = &(&one - &(&q() * x)) * &(&one - &(&q() * &x.inv()));
                r = &(&r * &t) * &d2;
            }
        }
    }
    Ok(r)
}

/// Row vector times a two-site matrix acting on sites (i, i+1).
pub fn covector_apply(
    v: &BTreeMap<u64, MultiLaurent>,
    mat: &[[MultiLaurent; 4]; 4],
    i: usize,
) -> BTreeMap<u64, MultiLaurent> {
    let mut out: BTreeMap<u64, MultiLaurent> = BTreeMap::new();
    for (s, c) in v {
        let row = pair_index(*s, i);
        for (col, e) in mat[row].iter().enumerate() {
            if e.is_zero() {
                continue;
            }
            let slot = out.entry(with_pair(*s, i, col)).or_insert_with(MultiLaurent::zero);
            *slot = &*slot + &(e * c);
        }
    }
    out.retain(|_, v| !v.is_zero());
    out
}

/// Tensor product of boundary co-vectors as a map from basis states.
pub fn tensor_covector(parts: &[&BoundaryState]) -> BTreeMap<u64, MultiLaurent> {
    let mut out = BTreeMap::from([(0u64, MultiLaurent::one())]);
    let mut offset = 0;
    for part in parts {
        let width = if part.kind == BoundaryKind::Chi { 2 } else { 1 };
        let mut next = BTreeMap::new();
        for (s, c) in &out {
            for (idx, e) in part.coeffs.iter().enumerate() {
                if e.is_zero() {
                    continue;
                }
                let bits = if width == 2 {
                    (if idx & 2 == 0 { 1 } else { 0 }) | (if idx & 1 == 0 { 2 } else { 0 })
                } else if idx == 0 {
                    1
                } else {
                    0
                };
                next.insert(s | (bits << offset), c * e);
            }
        }
        out = next;
        offset += width;
    }
    out
}

fn eq_maps(a: &BTreeMap<u64, MultiLaurent>, b: &BTreeMap<u64, MultiLaurent>) -> bool {
    let keys: std::collections::BTreeSet<_> = a.keys().chain(b.keys()).collect();
    keys.into_iter().all(|k| {
        let x = a.get(k).cloned().unwrap_or_else(MultiLaurent::zero);
        let y = b.get(k).cloned().unwrap_or_else(MultiLaurent::zero);
        x == y
    })
}

fn ml_x() -> MultiLaurent {
    MultiLaurent::var(VarId::x(1))
}

fn ml_y() -> MultiLaurent {
    MultiLaurent::var(VarId::x(2))
}

/// chi(x) R-check(x^2) = chi(1/x), symbolically in x.
pub fn check_fish() -> Result<()> {
    let x = Param::sym(VarId::x(1));
    let lhs = tensor_covector(&[&chi_state(&x)?]);
    let (m, k) = rcheck_cleared(&ml_x().pow(2), &MultiLaurent::one());
    let lhs = covector_apply(&lhs, &m, 1);
    let rhs: BTreeMap<u64, MultiLaurent> =
        tensor_covector(&[&chi_state(&x.inv()?)?]).into_iter().map(|(s, c)| (s, &c * &k)).collect();
    if eq_maps(&lhs, &rhs) {
        Ok(())
    } else {
        Err(Error::IdentityFailed { name: "fish equation".into(), detail: "symbolic mismatch".into() })
    }
}

/// Boundary Yang-Baxter equation on four sites, symbolically in (x, y).
/// Both sides carry the same cleared denominators.
pub fn check_boundary_ybe() -> Result<()> {
    let (x, y) = (Param::sym(VarId::x(1)), Param::sym(VarId::x(2)));
    let (cx, cy) = (chi_state(&x)?, chi_state(&y)?);
    let xy = &ml_x() * &ml_y();
    let (m_in, _) = rcheck_cleared(&MultiLaurent::one(), &xy);
    let (m_out, _) = rcheck_cleared(&ml_x(), &ml_y());
    let lhs = covector_apply(&covector_apply(&tensor_covector(&[&cx, &cy]), &m_in, 2), &m_out, 1);
    let rhs = covector_apply(&covector_apply(&tensor_covector(&[&cy, &cx]), &m_in, 2), &m_out, 3);
    if eq_maps(&lhs, &rhs) {
        Ok(())
    } else {
        Err(Error::IdentityFailed { name: "boundary Yang-Baxter".into(), detail: "symbolic mismatch".into() })
    }
}

/// chi(x) projected on a down first spin equals down (x) varphi(1/x).
pub fn check_chi_varphi() -> Result<()> {
    let x = Param::sym(VarId::x(1));
    let chi = chi_state(&x)?;
    let phi = phi_state(&x.inv()?)?;
    // chi index 2 = down-up, 3 = down-down
    if chi.coeffs[2] == phi.coeffs[0] && chi.coeffs[3] == phi.coeffs[1] {
        Ok(())
    } else {
        Err(Error::IdentityFailed { name: "chi/varphi relation".into(), detail: "symbolic mismatch".into() })
    }
}
