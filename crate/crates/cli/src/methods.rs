//! Evaluation of one (N, m, mu) value by a chosen method.

use befp_core::closed::{befp_product, overlap_barnes, overlap_product};
use befp_core::det::{c0_from_gamma, gamma0_kp, Gamma0Stage};
use befp_core::exact::CycQ;
use befp_core::qkz::qkz_overlap;
use befp_core::spin::{befp_oracle, overlap_oracle};
use befp_core::{Error, Mu, Result};
use clap::ValueEnum;
use num_complex::Complex64;

pub const ORACLE_MAX_SITES: usize = 13;
pub const QKZ_MAX_SITES: usize = 7;
pub const DET_MAX_HALF: usize = 5;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, ValueEnum)]
pub enum Method {
    Oracle,
    Qkz,
    Determinant,
    Product,
    Barnes,
    All,
}

impl Method {
    pub const CONCRETE: [Method; 5] =
        [Method::Oracle, Method::Qkz, Method::Determinant, Method::Product, Method::Barnes];

    pub fn name(self) -> &'static str {
        match self {
            Method::Oracle => "oracle",
            Method::Qkz => "qkz",
            Method::Determinant => "determinant",
            Method::Product => "product",
            Method::Barnes => "barnes",
            Method::All => "all",
        }
    }

    /// Whether the method covers (N, m, mu) within its size budget.
    pub fn covers(self, n_sites: usize, m: usize, mu: Mu) -> bool {
        match self {
            Method::Oracle => (2..=ORACLE_MAX_SITES).contains(&n_sites),
            Method::Qkz => n_sites <= QKZ_MAX_SITES,
            Method::Determinant => mu == Mu::Zero && m.is_multiple_of(2) && n_sites / 2 <= DET_MAX_HALF && n_sites >= 2,
            Method::Product | Method::Barnes => true,
            Method::All => false,
        }
    }

    /// Concrete methods selected by `self` at (N, m, mu).
    pub fn expand(self, n_sites: usize, m: usize, mu: Mu) -> Result<Vec<Method>> {
        if self == Method::All {
            return Ok(Method::CONCRETE.into_iter().filter(|x| x.covers(n_sites, m, mu)).collect());
        }
        if !self.covers(n_sites, m, mu) {
            return Err(Error::InvalidCase(format!(
                "method {} does not cover N = {n_sites}, m = {m}, mu = {mu}",
                self.name()
            )));
        }
        Ok(vec![self])
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Quantity {
    Overlap,
    Befp,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Value {
    pub method: Method,
    pub value: Complex64,
    pub exact: Option<CycQ>,
}

fn check(n_sites: usize, m: usize, mu: Mu) -> Result<()> {
    if !mu.valid_for(n_sites) {
        return Err(Error::InvalidCase(format!("mu = {mu} does not match the parity of N = {n_sites}")));
    }
    if m > n_sites {
        return Err(Error::Domain(format!("m exceeds N ({m} > {n_sites})")));
    }
    Ok(())
}

fn det_overlap(n_sites: usize, m: usize) -> CycQ {
    let (k, p) = (m / 2, n_sites / 2 - m / 2);
    c0_from_gamma(k, p, &gamma0_kp(k, p, Gamma0Stage::FinalM7))
}

fn exact_value(method: Method, exact: CycQ) -> Value {
    Value { method, value: exact.to_complex(), exact: Some(exact) }
}

pub fn evaluate(quantity: Quantity, method: Method, n_sites: usize, m: usize, mu: Mu) -> Result<Value> {
    check(n_sites, m, mu)?;
    let ratio = |num: CycQ, den: CycQ| num.checked_div(&den);
    Ok(match (quantity, method) {
        (Quantity::Overlap, Method::Oracle) => Value { method, value: overlap_oracle(n_sites, m, mu)?, exact: None },
        (Quantity::Befp, Method::Oracle) => Value { method, value: befp_oracle(n_sites, m, mu)?, exact: None },
        (Quantity::Overlap, Method::Qkz) => exact_value(method, qkz_overlap(n_sites, m, mu)?),
        (Quantity::Befp, Method::Qkz) => {
            exact_value(method, ratio(qkz_overlap(n_sites, m, mu)?, qkz_overlap(n_sites, 0, mu)?)?)
        }
        (Quantity::Overlap, Method::Determinant) => exact_value(method, det_overlap(n_sites, m)),
        (Quantity::Befp, Method::Determinant) => {
            exact_value(method, ratio(det_overlap(n_sites, m), det_overlap(n_sites, 0))?)
        }
        (Quantity::Overlap, Method::Product) => exact_value(method, overlap_product(n_sites, m, mu)?),
        (Quantity::Befp, Method::Product) => exact_value(method, befp_product(n_sites, m, mu)?),
        (Quantity::Overlap, Method::Barnes) => Value { method, value: overlap_barnes(n_sites, m, mu)?, exact: None },
        (Quantity::Befp, Method::Barnes) => {
            Value { method, value: overlap_barnes(n_sites, m, mu)? / overlap_barnes(n_sites, 0, mu)?, exact: None }
        }
        (_, Method::All) => return Err(Error::InvalidCase("expand 'all' before evaluating".into())),
    })
}

/// Relative deviation, treating two values below `floor` as equal.
pub fn rel_dev(a: Complex64, b: Complex64, floor: f64) -> f64 {
    let scale = a.norm().max(b.norm());
    if scale < floor {
        0.0
    } else {
        (a - b).norm() / scale
    }
}

/// Largest pairwise relative deviation, with exact values compared exactly.
pub fn max_rel_dev(values: &[Value]) -> f64 {
    let mut worst = 0.0f64;
    for (i, a) in values.iter().enumerate() {
        for b in &values[i + 1..] {
            let d = match (&a.exact, &b.exact) {
                (Some(x), Some(y)) if x != y => f64::INFINITY,
                (Some(_), Some(_)) => 0.0,
                _ => rel_dev(a.value, b.value, 1e-12),
            };
            worst = worst.max(d);
        }
    }
    worst
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn expansion_respects_budgets() {
        assert_eq!(
            Method::All.expand(3, 1, Mu::Plus).unwrap(),
            vec![Method::Oracle, Method::Qkz, Method::Product, Method::Barnes]
        );
        assert_eq!(Method::All.expand(4, 2, Mu::Zero).unwrap().len(), 5);
        assert_eq!(Method::All.expand(20, 2, Mu::Zero).unwrap(), vec![Method::Product, Method::Barnes]);
        assert!(Method::Determinant.expand(5, 2, Mu::Plus).is_err());
    }

    #[test]
    fn exact_disagreement_is_infinite() {
        let a = exact_value(Method::Product, CycQ::from_int(2));
        let b = exact_value(Method::Qkz, CycQ::from_int(3));
        assert_eq!(max_rel_dev(&[a.clone(), a.clone()]), 0.0);
        assert!(max_rel_dev(&[a, b]).is_infinite());
    }

    #[test]
    fn befp_by_every_method() {
        for method in Method::All.expand(4, 2, Mu::Zero).unwrap() {
            let v = evaluate(Quantity::Befp, method, 4, 2, Mu::Zero).unwrap();
            let want = befp_product(4, 2, Mu::Zero).unwrap().to_complex();
            assert!((v.value - want).norm() < 1e-9, "{method:?}");
        }
    }
}
