//! Polynomial solutions of the level-one qKZ system at q = exp(2 pi i / 3).
//!
//! A solution is fixed by its reference component up..up down..down; the
//! other components follow from divided differences.

use std::collections::{BTreeMap, HashMap, VecDeque};
use std::sync::{Arc, Mutex, OnceLock};

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::exact::{CycQ, Monomial, MultiLaurent, VarId};
use crate::spin::is_up;
use crate::Mu;

pub fn q() -> CycQ {
    CycQ::q()
}

pub fn qi() -> CycQ {
    CycQ::q_pow(-1)
}

/// q - q^-1
pub fn qmqi() -> CycQ {
    CycQ::i_sqrt3()
}

fn z(i: usize) -> VarId {
    VarId::z(i)
}

/// (q z_i - q^-1 z_j) / (q - q^-1)
pub fn pair_factor(i: usize, j: usize) -> MultiLaurent {
    let d = qmqi().inv();
    MultiLaurent::linear(&q() * &d, z(i), &qi() * &-d, z(j))
}

/// Divided difference delta_i (lower spin moves right).
pub fn delta(f: &MultiLaurent, i: usize) -> Result<MultiLaurent> {
    divided(f, i, false)
}

/// Inverse divided difference delta_i^-1.
pub fn delta_inv(f: &MultiLaurent, i: usize) -> Result<MultiLaurent> {
    divided(f, i, true)
}

fn divided(f: &MultiLaurent, i: usize, inverse: bool) -> Result<MultiLaurent> {
    let swapped = f.swap(z(i), z(i + 1));
    let a = MultiLaurent::linear(q(), z(i), -qi(), z(i + 1));
    let zk = if inverse { z(i + 1) } else { z(i) };
    let b = MultiLaurent::term(qmqi(), Monomial::var(zk, 1));
    let num = &(&a * &swapped) - &(&b * f);
    num.div_exact(&MultiLaurent::linear(CycQ::one(), z(i + 1), -CycQ::one(), z(i)))
}

#[derive(Clone, Debug, PartialEq)]
pub struct QkzVector {
    pub n_sites: usize,
    pub n_up: usize,
    /// Components keyed by basis state (bit i set = site i+1 up).
    pub comps: BTreeMap<u64, MultiLaurent>,
}

/// The state with n_up up spins followed by down spins.
pub fn reference_state(n_up: usize) -> u64 {
    (1u64 << n_up) - 1
}

fn all_states(n_sites: usize, n_up: usize) -> Vec<u64> {
    (0u64..1 << n_sites).filter(|s| s.count_ones() as usize == n_up).collect()
}

impl QkzVector {
    /// Builds all components from the reference component by breadth-first
    /// application of delta_i.
    pub fn from_reference(n_sites: usize, n_up: usize, reference: MultiLaurent) -> Result<Self> {
        let mut comps = BTreeMap::new();
        let start = reference_state(n_up);
        comps.insert(start, reference);
        let mut queue = VecDeque::from([start]);
        while let Some(s) = queue.pop_front() {
            for i in 1..n_sites {
                if is_up(s, i) && !is_up(s, i + 1) {
                    let t = s ^ (0b11 << (i - 1));
                    if !comps.contains_key(&t) {
                        let c = delta(&comps[&s], i)?;
                        comps.insert(t, c);
                        queue.push_back(t);
                    }
                }
            }
        }
        Ok(QkzVector { n_sites, n_up, comps })
    }

    pub fn component(&self, s: u64) -> MultiLaurent {
        self.comps.get(&s).cloned().unwrap_or_else(MultiLaurent::zero)
    }

    pub fn states(&self) -> Vec<u64> {
        all_states(self.n_sites, self.n_up)
    }

    pub fn map(&self, f: impl Fn(&MultiLaurent) -> Result<MultiLaurent>) -> Result<Self> {
        let mut comps = BTreeMap::new();
        for (s, c) in &self.comps {
            comps.insert(*s, f(c)?);
        }
        Ok(QkzVector { n_sites: self.n_sites, n_up: self.n_up, comps })
    }

    /// Value of every component at all z_i = 1.
    pub fn homogeneous(&self) -> BTreeMap<u64, CycQ> {
        self.comps.iter().map(|(s, c)| (*s, c.limit_all())).collect()
    }

    /// Sum of the homogeneous components whose first m spins are up.
    pub fn homogeneous_overlap(&self, m: usize) -> CycQ {
        let mask = (1u64 << m) - 1;
        let mut total = CycQ::zero();
        for (s, c) in &self.comps {
            if s & mask == mask {
                total += &c.limit_all();
            }
        }
        total
    }

    pub fn eval(&self, zs: &[CycQ]) -> Result<BTreeMap<u64, CycQ>> {
        let at = zs.iter().enumerate().map(|(i, v)| (z(i + 1), v.clone())).collect();
        self.comps.iter().map(|(s, c)| Ok((*s, c.eval(&at)?))).collect()
    }

    /// Total degree and maximal individual degree, checking homogeneity.
    pub fn degrees(&self) -> Result<(i32, i32)> {
        let mut total = None;
        let mut indiv = 0;
        for c in self.comps.values() {
            if c.is_zero() {
                continue;
            }
            let (lo, hi) = c.total_degree_range().unwrap();
            if lo != hi || total.is_some_and(|t| t != lo) || !c.is_polynomial() {
                return Err(Error::IdentityFailed {
                    name: "homogeneity".into(),
                    detail: format!("component degrees {lo}..{hi}"),
                });
            }
            total = Some(lo);
            for i in 1..=self.n_sites {
                indiv = indiv.max(c.degree_range(z(i)).map_or(0, |r| r.1));
            }
        }
        Ok((total.unwrap_or(0), indiv))
    }
}

/// Reference component of Psi+ for N = 2n+1.
pub fn reference_plus(n: usize) -> MultiLaurent {
    let mut f = MultiLaurent::one();
    for i in 1..=n + 1 {
        for j in i + 1..=n + 1 {
            f = &f * &pair_factor(i, j);
        }
    }
    for i in n + 2..=2 * n + 1 {
        for j in i + 1..=2 * n + 1 {
            f = &f * &pair_factor(i, j);
        }
        f = f.mul_monomial(&Monomial::var(z(i), 1));
    }
    f
}

/// Product of pair factors within the blocks 1..k and k+1..N.
pub fn block_reference(n_sites: usize, k: usize) -> MultiLaurent {
    let mut f = MultiLaurent::one();
    for i in 1..=n_sites {
        for j in i + 1..=n_sites {
            if (i <= k) == (j <= k) {
                f = &f * &pair_factor(i, j);
            }
        }
    }
    f
}

pub fn build_psi_plus(n: usize) -> Result<QkzVector> {
    QkzVector::from_reference(2 * n + 1, n + 1, reference_plus(n))
}

/// Spin reversal of Psi+ with the factor z_i^-1 on every up spin.
pub fn build_psi_minus(n: usize) -> Result<QkzVector> {
    let plus = psi_cached(Mu::Plus, 2 * n + 1)?;
    let n_sites = 2 * n + 1;
    let full = (1u64 << n_sites) - 1;
    let mut comps = BTreeMap::new();
    for s in all_states(n_sites, n) {
        let src = plus.component(full ^ s);
        let shift = Monomial::from_pairs((1..=n_sites).filter(|&i| is_up(s, i)).map(|i| (z(i), -1)));
        let c = src.mul_monomial(&shift);
        if !c.is_polynomial() {
            return Err(Error::IdentityFailed { name: "psi_minus polynomial".into(), detail: format!("state {s:b}") });
        }
        if !c.is_zero() {
            comps.insert(s, c);
        }
    }
    Ok(QkzVector { n_sites, n_up: n, comps })
}

/// Psi0 for N = 2n from Psi+_{2n+1} at z_{2n+1} = 0.
pub fn build_psi_zero(n: usize) -> Result<QkzVector> {
    if n == 0 {
        return Ok(QkzVector { n_sites: 0, n_up: 0, comps: BTreeMap::from([(0, MultiLaurent::one())]) });
    }
    let plus = psi_cached(Mu::Plus, 2 * n + 1)?;
    let last = 1u64 << (2 * n);
    let pref = (&qi() - &q()).pow(n as i64) * q().pow(-2 * n as i64);
    let zprod = Monomial::from_pairs((1..=2 * n).map(|i| (z(i), 1)));
    let mut comps = BTreeMap::new();
    for (s, c) in &plus.comps {
        let c0 = c.limit_zero(z(2 * n + 1))?;
        if s & last == 0 {
            if !c0.is_zero() {
                return Err(Error::IdentityFailed {
                    name: "psi_zero vanishing".into(),
                    detail: format!("component {s:b} ending in down is nonzero at z = 0"),
                });
            }
            continue;
        }
        let v = c0.div_exact(&MultiLaurent::term(CycQ::one(), zprod.clone()))?.scale(&pref);
        if !v.is_polynomial() {
            return Err(Error::NotExact);
        }
        comps.insert(s & !last, v);
    }
    Ok(QkzVector { n_sites: 2 * n, n_up: n, comps })
}

/// Psi0 built directly from its own reference component.
pub fn build_psi_zero_direct(n: usize) -> Result<QkzVector> {
    QkzVector::from_reference(2 * n, n, block_reference(2 * n, n))
}

/// Cached solution vectors keyed by (mu, N). Psi0 for N > 6 comes from the
/// direct construction; smaller ones from Psi+.
pub fn psi_cached(mu: Mu, n_sites: usize) -> Result<Arc<QkzVector>> {
    type Slot = Arc<Mutex<Option<Arc<QkzVector>>>>;
    static CACHE: OnceLock<Mutex<HashMap<(Mu, usize), Slot>>> = OnceLock::new();
    if !mu.valid_for(n_sites) && !(mu == Mu::Zero && n_sites == 0) {
        return Err(Error::InvalidCase(format!("N = {n_sites} with mu = {mu}")));
    }
    let slot = CACHE.get_or_init(Default::default).lock().unwrap().entry((mu, n_sites)).or_default().clone();
    // one builder per key; other callers wait on the slot
    let mut guard = slot.lock().unwrap();
    if let Some(v) = guard.as_ref() {
        return Ok(v.clone());
    }
    let v = Arc::new(match mu {
        Mu::Plus => build_psi_plus(n_sites / 2)?,
        Mu::Minus => build_psi_minus(n_sites / 2)?,
        Mu::Zero if n_sites <= 6 => build_psi_zero(n_sites / 2)?,
        Mu::Zero => build_psi_zero_direct(n_sites / 2)?,
    });
    *guard = Some(v.clone());
    Ok(v)
}

/// Overlap C_{N,m} from the homogeneous limit of the qKZ solution.
pub fn qkz_overlap(n_sites: usize, m: usize, mu: Mu) -> Result<CycQ> {
    if m > n_sites {
        return Err(Error::Domain(format!("m = {m} exceeds N = {n_sites}")));
    }
    Ok(psi_cached(mu, n_sites)?.homogeneous_overlap(m))
}

/// Diagonal entries (lambda_up, lambda_down) of the cyclic twist D.
pub fn cyclic_factors(mu: Mu, n_sites: usize) -> (CycQ, CycQ) {
    let n = (n_sites / 2) as i64;
    match mu {
        Mu::Plus => (CycQ::q_pow(-3 * (n + 1) + 3), CycQ::q_pow(-3 * (n + 1))),
        Mu::Minus => (CycQ::q_pow(-3 * n + 3), CycQ::q_pow(-3 * n)),
        Mu::Zero => (-CycQ::q_pow(-3 * (n - 1) + 1), -CycQ::q_pow(-3 * (n - 1) - 1)),
    }
}

/// R-check(num/den) times (q den - q^-1 num), as polynomial entries, in the
/// basis up-up, up-down, down-up, down-down. Also returns the cleared factor.
pub fn rcheck_cleared(num: &MultiLaurent, den: &MultiLaurent) -> ([[MultiLaurent; 4]; 4], MultiLaurent) {
    let k = &den.scale(&q()) - &num.scale(&qi());
    let a = &num.scale(&q()) - &den.scale(&qi());
    let b = num - den;
    let c1 = num.scale(&qmqi());
    let c2 = den.scale(&qmqi());
    let o = MultiLaurent::zero();
    // rows of R permuted: P R
    let m = [
        [a.clone(), o.clone(), o.clone(), o.clone()],
        [o.clone(), c2, b.clone(), o.clone()],
        [o.clone(), b, c1, o.clone()],
        [o.clone(), o.clone(), o, a],
    ];
    (m, k)
}

/// R-check(w) with exact entries.
pub fn rcheck_exact(w: &CycQ) -> Result<[[CycQ; 4]; 4]> {
    let (m, k) = rcheck_cleared(&MultiLaurent::constant(w.clone()), &MultiLaurent::one());
    let kinv = k.as_constant().unwrap().checked_inv()?;
    Ok(m.map(|row| row.map(|e| &e.as_constant().unwrap() * &kinv)))
}

pub(crate) fn pair_index(s: u64, i: usize) -> usize {
    (if is_up(s, i) { 0 } else { 2 }) + (if is_up(s, i + 1) { 0 } else { 1 })
}

pub(crate) fn with_pair(s: u64, i: usize, idx: usize) -> u64 {
    let mut t = s & !(0b11 << (i - 1));
    if idx & 2 == 0 {
        t |= 1 << (i - 1);
    }
    if idx & 1 == 0 {
        t |= 1 << i;
    }
    t
}

/// Applies a two-site operator on sites (i, i+1) to a vector of components.
pub fn apply_two_site(
    mat: &[[MultiLaurent; 4]; 4],
    comps: &BTreeMap<u64, MultiLaurent>,
    i: usize,
) -> BTreeMap<u64, MultiLaurent> {
    let mut out: BTreeMap<u64, MultiLaurent> = BTreeMap::new();
    for (s, c) in comps {
        let col = pair_index(*s, i);
        for (row, r) in mat.iter().enumerate() {
            let e = &r[col];
            if e.is_zero() {
                continue;
            }
            let t = with_pair(*s, i, row);
            let v = e * c;
            let slot = out.entry(t).or_insert_with(MultiLaurent::zero);
            *slot = &*slot + &v;
        }
    }
    out.retain(|_, v| !v.is_zero());
    out
}

fn nonzero(c: &BTreeMap<u64, MultiLaurent>) -> BTreeMap<u64, MultiLaurent> {
    c.iter().filter(|(_, v)| !v.is_zero()).map(|(k, v)| (*k, v.clone())).collect()
}

fn fail(name: &str, detail: String) -> Error {
    Error::IdentityFailed { name: name.into(), detail }
}

/// R-check_{i,i+1}(z_{i+1}/z_i) Psi(.., z_i, z_{i+1}, ..) = Psi(.., z_{i+1}, z_i, ..)
pub fn check_exchange(psi: &QkzVector, i: usize) -> Result<()> {
    let (m, k) = rcheck_cleared(&MultiLaurent::var(z(i + 1)), &MultiLaurent::var(z(i)));
    let lhs = apply_two_site(&m, &psi.comps, i);
    let rhs: BTreeMap<u64, MultiLaurent> = psi.comps.iter().map(|(s, c)| (*s, &k * &c.swap(z(i), z(i + 1)))).collect();
    if nonzero(&lhs) != nonzero(&rhs) {
        return Err(fail("exchange", format!("N = {}, i = {i}", psi.n_sites)));
    }
    Ok(())
}

/// Psi_{a_N a_1 .. a_{N-1}}(q^-6 z_N, z_1, ..) = lambda_{a_N} Psi_a(z).
pub fn check_cyclic(psi: &QkzVector, lambda: (CycQ, CycQ)) -> Result<()> {
    let n = psi.n_sites;
    if n < 2 {
        return Ok(());
    }
    let tmp = VarId::z(10_000);
    let full = (1u64 << n) - 1;
    for s in psi.states() {
        // rotate right: new site 1 carries old site N
        let top = s >> (n - 1) & 1;
        let rot = ((s << 1) & full) | top;
        let c = psi.component(rot);
        let c = c.rename(|v| if v == z(1) { tmp } else { v });
        let c = c.rename(|v| if v.kind == z(1).kind && v != tmp { VarId::z(v.index as usize - 1) } else { v });
        let lhs = c.subst_monomial(tmp, &CycQ::q_pow(-6), &Monomial::var(z(n), 1))?;
        let lam = if top == 1 { &lambda.0 } else { &lambda.1 };
        let rhs = psi.component(s).scale(lam);
        if lhs != rhs {
            return Err(fail("cyclic covariance", format!("N = {n}, state {s:b}")));
        }
    }
    Ok(())
}

/// Wheel condition at z_j = q^2 z_i, z_k = q^4 z_i.
pub fn check_wheel(psi: &QkzVector, i: usize, j: usize, k: usize) -> Result<()> {
    for (s, c) in &psi.comps {
        let c = c.subst_monomial(z(j), &CycQ::q_pow(2), &Monomial::var(z(i), 1))?;
        let c = c.subst_monomial(z(k), &CycQ::q_pow(4), &Monomial::var(z(i), 1))?;
        if !c.is_zero() {
            return Err(fail("wheel", format!("N = {}, ({i},{j},{k}), state {s:b}", psi.n_sites)));
        }
    }
    Ok(())
}

/// Reduction relation at z_{i+1} = q^2 z_i, comparing with Psi_{N-2}.
pub fn check_reduction(mu: Mu, n_sites: usize, i: usize) -> Result<()> {
    let big = psi_cached(mu, n_sites)?;
    let small = psi_cached(mu, n_sites - 2)?;
    let n = (n_sites / 2) as i64;
    let mut pref = MultiLaurent::constant((-q()).pow(i as i64 - n));
    if mu == Mu::Plus {
        pref = &pref * &MultiLaurent::term(-q(), Monomial::var(z(i), 1));
    }
    let d = qmqi().inv();
    for j in 1..i {
        pref = &pref * &MultiLaurent::linear(&q() * &d, z(j), -(&qi() * &d), z(i));
    }
    for j in i + 2..=n_sites {
        pref = &pref * &MultiLaurent::linear(&CycQ::q_pow(3) * &d, z(i), -(&qi() * &d), z(j));
    }
    let mut rhs: BTreeMap<u64, MultiLaurent> = BTreeMap::new();
    let low_mask = (1u64 << (i - 1)) - 1;
    for (s, c) in &small.comps {
        let c = c.rename(|v| if v.index as usize >= i { VarId::z(v.index as usize + 2) } else { v });
        let c = &pref * &c;
        let lo = s & low_mask;
        let hi = (s & !low_mask) << 2;
        rhs.insert(lo | hi | (1 << (i - 1)), c.clone());
        rhs.insert(lo | hi | (1 << i), c.scale(&-qi()));
    }
    let mut lhs = BTreeMap::new();
    for (s, c) in &big.comps {
        lhs.insert(*s, c.subst_monomial(z(i + 1), &CycQ::q_pow(2), &Monomial::var(z(i), 1))?);
    }
    if nonzero(&lhs) != nonzero(&rhs) {
        return Err(fail("reduction", format!("N = {n_sites}, mu = {mu}, i = {i}")));
    }
    Ok(())
}

fn remove_site(s: u64, j: usize) -> u64 {
    let low = s & ((1u64 << (j - 1)) - 1);
    let high = s >> j;
    low | (high << (j - 1))
}

fn sigma_sum_before(s: u64, j: usize) -> i64 {
    (1..j).map(|i| if is_up(s, i) { 1 } else { -1 }).sum()
}

/// z_j -> 0 limit of the down-projected Psi0_{2n} against Psi+_{2n-1}.
pub fn check_braid_zero(n: usize, j: usize) -> Result<()> {
    let psi = psi_cached(Mu::Zero, 2 * n)?;
    let plus = psi_cached(Mu::Plus, 2 * n - 1)?;
    let base = (CycQ::one() - CycQ::q_pow(-2)).pow(-(n as i64 - 1));
    for s in psi.states() {
        if is_up(s, j) {
            continue;
        }
        let lhs = psi.component(s).limit_zero(z(j))?;
        let e2 = -(sigma_sum_before(s, j) + 6 * n as i64 - 3 * j as i64 - 1);
        if e2 % 2 != 0 {
            return Err(fail("braid limit 0", "half-integer power of q".into()));
        }
        let sign = if j.is_multiple_of(2) { CycQ::one() } else { -CycQ::one() };
        let coef = &(&CycQ::q_pow(e2 / 2) * &sign) * &base;
        let rhs = plus
            .component(remove_site(s, j))
            .rename(|v| if v.index as usize >= j { VarId::z(v.index as usize + 1) } else { v })
            .scale(&coef);
        if lhs != rhs {
            return Err(fail("braid limit 0", format!("n = {n}, j = {j}, state {s:b}")));
        }
    }
    Ok(())
}

/// z_j -> infinity limit of the up-projected Psi0_{2n} against Psi-_{2n-1}.
pub fn check_braid_infinity(n: usize, j: usize) -> Result<()> {
    let psi = psi_cached(Mu::Zero, 2 * n)?;
    let minus = psi_cached(Mu::Minus, 2 * n - 1)?;
    let base = (CycQ::one() - CycQ::q_pow(-2)).pow(-(n as i64 - 1));
    for s in psi.states() {
        if !is_up(s, j) {
            continue;
        }
        let lhs = psi.component(s).limit_infinity(z(j), n as i32 - 1)?;
        let e2 = -(sigma_sum_before(s, j) + 3 * j as i64 + 3);
        if e2 % 2 != 0 {
            return Err(fail("braid limit infinity", "half-integer power of q".into()));
        }
        let sign = if (j - 1).is_multiple_of(2) { CycQ::one() } else { -CycQ::one() };
        let coef = &(&CycQ::q_pow(e2 / 2) * &sign) * &base;
        let rhs = minus
            .component(remove_site(s, j))
            .rename(|v| if v.index as usize >= j { VarId::z(v.index as usize + 1) } else { v })
            .scale(&coef);
        if lhs != rhs {
            return Err(fail("braid limit infinity", format!("n = {n}, j = {j}, state {s:b}")));
        }
    }
    Ok(())
}

/// Every component agrees with delta_i applied to each of its predecessors.
pub fn check_path_independence(psi: &QkzVector) -> Result<()> {
    for s in psi.states() {
        for i in 1..psi.n_sites {
            if !is_up(s, i) && is_up(s, i + 1) {
                let pred = s ^ (0b11 << (i - 1));
                if delta(&psi.component(pred), i)? != psi.component(s) {
                    return Err(fail("path independence", format!("state {s:b}, i = {i}")));
                }
                if delta_inv(&psi.component(s), i)? != psi.component(pred) {
                    return Err(fail("inverse divided difference", format!("state {s:b}, i = {i}")));
                }
            }
        }
    }
    Ok(())
}

/// Expected (total, individual) degree bounds.
pub fn degree_bounds(mu: Mu, n_sites: usize) -> (i32, i32) {
    let n = (n_sites / 2) as i32;
    match mu {
        Mu::Plus => (n * (n + 1), n),
        Mu::Minus => (n * n, n),
        Mu::Zero => (n * (n - 1), (n - 1).max(0)),
    }
}

#[cfg(test)]
mod tests;
