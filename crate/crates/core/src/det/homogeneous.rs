//! Homogeneous limit of the determinant formula for S0_{k,p}.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::{bareiss, schur_staircase_eval, StaircaseSchurParams};
use crate::exact::{CycQ, Rational};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ChebyshevKind {
    U,
    T,
}

fn int(n: i64) -> Rational {
    Rational::from_integer(n.into())
}

fn factorial(n: u64) -> BigInt {
    (1..=n).fold(BigInt::one(), |a, b| a * b)
}

/// (1/m!) d^m/dbeta^m at beta = 2 of U_{ell-1}(beta/2) or T_ell(beta/2), in product form.
pub fn chebyshev_taylor_at_2(kind: ChebyshevKind, ell: i64, m: u32) -> Rational {
    let m = m as i64;
    match kind {
        ChebyshevKind::U => {
            let num: Rational = (-m..=m).map(|n| int(ell - n)).product();
            num / Rational::from_integer(factorial(2 * m as u64 + 1))
        }
        ChebyshevKind::T => {
            let num: Rational = (0..m).map(|n| int(ell * ell - n * n)).product();
            num / Rational::from_integer(factorial(2 * m as u64))
        }
    }
}

/// Same coefficient, read off the three-term recurrence in h = beta - 2.
pub fn chebyshev_taylor_direct(kind: ChebyshevKind, ell: i64, m: u32) -> Rational {
    let m = m as usize;
    // polynomial in h, truncated past degree m
    let step = |a: &[Rational], b: &[Rational]| -> Vec<Rational> {
        (0..=m)
            .map(|d| {
                let mut v = int(2) * &a[d] - &b[d];
                if d > 0 {
                    v += &a[d - 1];
                }
                v
            })
            .collect()
    };
    let mut c0 = vec![Rational::zero(); m + 1];
    c0[0] = Rational::one();
    let mut c1 = vec![Rational::zero(); m + 1];
    let (idx, sign) = match kind {
        // U_n with n = ell - 1; U_{-n} = -U_{n-2}
        ChebyshevKind::U => {
            c1[0] = int(2);
            if m >= 1 {
                c1[1] = Rational::one();
            }
            let n = ell - 1;
            if n >= 0 {
                (n, 1)
            } else {
                (-n - 2, -1)
            }
        }
        ChebyshevKind::T => {
            c1[0] = Rational::one();
            if m >= 1 {
                c1[1] = Rational::new(1.into(), 2.into());
            }
            (ell.abs(), 1)
        }
    };
    if idx < 0 {
        return Rational::zero();
    }
    let (mut a, mut b) = (c1, c0);
    let res = if idx == 0 {
        b
    } else {
        for _ in 1..idx {
            let n = step(&a, &b);
            b = a;
            a = n;
        }
        a
    };
    &res[m] * int(sign)
}

/// The integer points u_j and v_j of the homogeneous limit.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntegerSpecPoints {
    pub k: usize,
    pub p: usize,
    pub u: Vec<i64>,
    pub v: Vec<i64>,
}

impl IntegerSpecPoints {
    pub fn new(k: usize, p: usize) -> Self {
        let n = (p + k) as i64;
        let u: Vec<i64> = (1..=n).map(|j| 3 * (n - 2 * j) + 5).collect();
        let v = u.iter().map(|uj| 2 - uj).chain(u.iter().copied()).collect();
        IntegerSpecPoints { k, p, u, v }
    }

    /// v_{n+1-j} = -v_j for j <= n.
    pub fn is_antisymmetric(&self) -> bool {
        let n = self.k + self.p;
        (0..n).all(|j| self.v[n - 1 - j] == -self.v[j])
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Gamma0Stage {
    /// Taylor-coefficient determinant after the finite-difference limit.
    StagedFiniteDiff,
    /// Monomial determinant through the staircase Schur product.
    FinalM7,
}

fn pow2(e: usize) -> Rational {
    Rational::from_integer(BigInt::one() << e)
}

fn common_pow2(k: usize, p: usize) -> Rational {
    pow2(2 * p + k + p * p.saturating_sub(1) + (p + 2 * k) * (p + 2 * k).saturating_sub(1))
}

/// Finite-difference matrix of Chebyshev Taylor rows.
pub fn staged_matrix(k: usize, p: usize) -> Vec<Vec<Rational>> {
    let n = p + k;
    let sp = IntegerSpecPoints::new(k, p);
    (1..=2 * n)
        .map(|i| {
            let (m, top) = if i <= p { (i - 1, true) } else { (i - p - 1, false) };
            (1..=2 * n)
                .map(|j| {
                    // U index; the Taylor helper takes ell = index + 1
                    let idx = match (top, j <= n) {
                        (true, true) => -sp.u[j - 1] - 1,
                        (true, false) => sp.u[j - n - 1] - 3,
                        (false, true) => -sp.u[j - 1] + 1,
                        (false, false) => sp.u[j - n - 1] - 1,
                    };
                    chebyshev_taylor_direct(ChebyshevKind::U, idx + 1, m as u32)
                })
                .collect()
        })
        .collect()
}

/// Monomial matrix: v_j^{2(i-1)} for i <= p, v_j^{2i-2p-1} after.
pub fn m7_matrix(k: usize, p: usize) -> Vec<Vec<Rational>> {
    let sp = IntegerSpecPoints::new(k, p);
    (1..=2 * (p + k))
        .map(|i| {
            let e = if i <= p { 2 * (i - 1) } else { 2 * i - 2 * p - 1 };
            sp.v.iter().map(|&v| num_traits::pow(int(v), e)).collect()
        })
        .collect()
}

/// det of the monomial matrix via the reduced staircase Schur product.
pub fn det_m7_closed(k: usize, p: usize) -> Rational {
    if k > p {
        return Rational::zero();
    }
    let sp = IntegerSpecPoints::new(k, p);
    let s = schur_staircase_eval(&StaircaseSchurParams {
        a: 2 * k,
        b: p - k,
        alpha: int(3 * (p + k) as i64 + 5),
        beta: int(-6),
    });
    let mut vdm = Rational::one();
    for i in 0..sp.v.len() {
        for j in i + 1..sp.v.len() {
            vdm *= int(sp.v[j] - sp.v[i]);
        }
    }
    let sign = if (p * p.saturating_sub(1) / 2).is_multiple_of(2) { 1 } else { -1 };
    s * vdm * int(sign)
}

/// Homogeneous limit of det M / (C(x) C(z, x)).
pub fn gamma0_kp(k: usize, p: usize, stage: Gamma0Stage) -> Rational {
    if k > p {
        return Rational::zero();
    }
    match stage {
        Gamma0Stage::StagedFiniteDiff => {
            let sign = if p.is_multiple_of(2) { 1 } else { -1 };
            bareiss(staged_matrix(k, p)) * int(sign) / common_pow2(k, p)
        }
        Gamma0Stage::FinalM7 => {
            let mut pre: Rational = (1..=p as i64).map(|i| int(4 * i - 2)).product();
            for i in 1..=p as u64 {
                pre /= Rational::from_integer(factorial(2 * i - 1));
            }
            for i in 1..=(p + 2 * k) as u64 {
                pre /= Rational::from_integer(factorial(2 * i - 1));
            }
            pre * det_m7_closed(k, p) / common_pow2(k, p)
        }
    }
}

/// C0_{2(p+k),2k} from the limit value gamma.
pub fn c0_from_gamma(k: usize, p: usize, gamma: &Rational) -> CycQ {
    if gamma.is_zero() {
        return CycQ::zero();
    }
    let (ki, pi) = (k as i64, p as i64);
    let sign = if (pi * (pi + 1) / 2) % 2 == 0 { 1 } else { -1 };
    let e3 = pi * (pi - 1) / 2 - ki * (ki + 1) / 2 + ki * pi;
    let three =
        if e3 >= 0 { num_traits::pow(int(3), e3 as usize).recip() } else { num_traits::pow(int(3), (-e3) as usize) };
    let rat = int(sign) * pow2(k) * three * gamma;
    let q2m1 = &CycQ::q_pow(2) - &CycQ::one();
    &q2m1.pow(pi - ki) * &CycQ::from_rational(rat)
}
