//! Verification suites. Every check runs on its own and reports pass or
//! fail with a short counterexample; nothing panics on a failed identity.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64 as C64;
use num_traits::{One, Zero};

use crate::closed::{
    fit_large_m, fit_scaling, j0_ratio, overlap_barnes, overlap_barnes_uniform, overlap_product, AsymptoticCoeffs,
};
use crate::det::{
    c0_from_gamma, gamma0_kp, r_kp, r_kp_values, schur_bialternant, schur_staircase_eval, staircase, Gamma0Stage,
    StaircaseSchurParams,
};
use crate::error::{Error, Result};
use crate::exact::sample::{distinct_rationals, rng, small_rational};
use crate::exact::{CycQ, MultiLaurent, VarId};
use crate::qkz::{
    apply_two_site, check_braid_infinity, check_braid_zero, check_cyclic, check_exchange, check_path_independence,
    check_reduction, check_wheel, cyclic_factors, degree_bounds, psi_cached, qi, rcheck_cleared, rcheck_exact,
};
use crate::scalar::{
    assignment, check_boundary_ybe, check_chi_varphi, check_fish, factorized_s0, homogeneous_scalar, scalar_product,
    verify_scalar_identity, Factorized, Family, Identity, ScalarKind, MAX_SITES_ODD,
};
use crate::spin::{build_transfer_matrix, case_data, overlap_oracle, Sector};
use crate::Mu;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Suite {
    Qkz,
    Scalar,
    Determinant,
    Homogeneous,
    Barnes,
    Asymptotics,
}

impl Suite {
    pub const ALL: [Suite; 6] =
        [Suite::Qkz, Suite::Scalar, Suite::Determinant, Suite::Homogeneous, Suite::Barnes, Suite::Asymptotics];

    fn name(self) -> &'static str {
        match self {
            Suite::Qkz => "qkz",
            Suite::Scalar => "scalar",
            Suite::Determinant => "determinant",
            Suite::Homogeneous => "homogeneous",
            Suite::Barnes => "barnes",
            Suite::Asymptotics => "asymptotics",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL.into_iter().find(|x| x.name() == s).ok_or_else(|| Error::Parse(format!("unknown suite {s:?}")))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Check {
    pub suite: Suite,
    pub name: String,
    pub passed: bool,
    pub detail: Option<String>,
}

impl Check {
    pub fn from_result(suite: Suite, name: impl Into<String>, r: Result<()>) -> Self {
        let name = name.into();
        match r {
            Ok(()) => Check { suite, name, passed: true, detail: None },
            Err(e) => Check { suite, name, passed: false, detail: Some(e.to_string()) },
        }
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let status = if self.passed { "pass" } else { "FAIL" };
        write!(f, "[{}] {} ... {}", self.suite, self.name, status)?;
        if let Some(d) = &self.detail {
            write!(f, ": {d}")?;
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct VerifyConfig {
    pub seed: u64,
    /// Half chain length cap for the symbolic qKZ checks.
    pub max_n: usize,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig { seed: 1, max_n: 3 }
    }
}

pub fn run(suite: Suite, cfg: &VerifyConfig) -> Vec<Check> {
    match suite {
        Suite::Qkz => qkz_suite(cfg.max_n, cfg.seed),
        Suite::Scalar => scalar_suite(cfg.seed),
        Suite::Determinant => determinant_suite(cfg.seed),
        Suite::Homogeneous => homogeneous_suite(5, cfg.seed),
        Suite::Barnes => barnes_suite(30),
        Suite::Asymptotics => asymptotics_suite(1e-4),
    }
}

fn mismatch(name: &str, detail: String) -> Error {
    Error::IdentityFailed { name: name.into(), detail }
}

fn ensure(ok: bool, name: &str, detail: impl FnOnce() -> String) -> Result<()> {
    if ok {
        Ok(())
    } else {
        Err(mismatch(name, detail()))
    }
}

// ---------------------------------------------------------------- qKZ

/// Symbolic exchange, cyclicity, wheel, reduction and degree checks for
/// N <= 2 max_n + 1, braid limits for n <= max_n, plus R-check and
/// transfer-matrix checks at sampled points.
pub fn qkz_suite(max_n: usize, seed: u64) -> Vec<Check> {
    let s = Suite::Qkz;
    let mut out = Vec::new();
    let top = (2 * max_n + 1).min(MAX_SITES_ODD);
    for n_sites in 1..=top {
        for &mu in Mu::for_parity(n_sites) {
            let tag = format!("N={n_sites} mu={mu}");
            let psi = match psi_cached(mu, n_sites) {
                Ok(p) => p,
                Err(e) => {
                    out.push(Check::from_result(s, format!("construct {tag}"), Err(e)));
                    continue;
                }
            };
            out.push(Check::from_result(
                s,
                format!("degrees {tag}"),
                (|| {
                    let (t, i) = psi.degrees()?;
                    let (et, ei) = degree_bounds(mu, n_sites);
                    ensure(t == et && i <= ei, "degree bound", || {
                        format!("total {t} (want {et}), individual {i} (max {ei})")
                    })
                })(),
            ));
            out.push(Check::from_result(
                s,
                format!("exchange {tag}"),
                (1..n_sites).try_for_each(|i| check_exchange(&psi, i)),
            ));
            out.push(Check::from_result(s, format!("cyclic {tag}"), check_cyclic(&psi, cyclic_factors(mu, n_sites))));
            out.push(Check::from_result(s, format!("divided differences {tag}"), check_path_independence(&psi)));
            out.push(Check::from_result(
                s,
                format!("wheel {tag}"),
                (|| {
                    for i in 1..=n_sites {
                        for j in i + 1..=n_sites {
                            for k in j + 1..=n_sites {
                                check_wheel(&psi, i, j, k)?;
                            }
                        }
                    }
                    Ok(())
                })(),
            ));
            if n_sites >= 3 || (mu == Mu::Zero && n_sites == 2) {
                out.push(Check::from_result(
                    s,
                    format!("reduction {tag}"),
                    (1..n_sites).try_for_each(|i| check_reduction(mu, n_sites, i)),
                ));
            }
        }
    }
    for n in 1..=max_n.min(3) {
        out.push(Check::from_result(
            s,
            format!("braid limit z -> 0, n={n}"),
            (1..=2 * n).try_for_each(|j| check_braid_zero(n, j)),
        ));
        out.push(Check::from_result(
            s,
            format!("braid limit z -> infinity, n={n}"),
            (1..=2 * n).try_for_each(|j| check_braid_infinity(n, j)),
        ));
    }
    out.push(Check::from_result(s, "R-check unitarity and Yang-Baxter (sampled)", rcheck_sampled(seed, 3)));
    out.push(Check::from_result(s, "R-check fixes the singlet (symbolic)", rcheck_singlet()));
    out.push(Check::from_result(s, "inhomogeneous transfer eigenvector (sampled)", transfer_eigen(top, seed)));
    out
}

type M8 = [[CycQ; 8]; 8];

fn zero8() -> M8 {
    std::array::from_fn(|_| std::array::from_fn(|_| CycQ::zero()))
}

fn mul8(a: &M8, b: &M8) -> M8 {
    let mut out = zero8();
    for i in 0..8 {
        for j in 0..8 {
            for k in 0..8 {
                out[i][j] += &(&a[i][k] * &b[k][j]);
            }
        }
    }
    out
}

/// Two-site matrix acting on sites (1,2) or (2,3) of three.
fn embed(m: &[[CycQ; 4]; 4], first: bool) -> M8 {
    let mut out = zero8();
    for r in 0..8 {
        for c in 0..8 {
            let (rp, rs, cp, cs) = if first { (r >> 1, r & 1, c >> 1, c & 1) } else { (r & 3, r >> 2, c & 3, c >> 2) };
            if rs == cs {
                out[r][c] = m[rp][cp].clone();
            }
        }
    }
    out
}

pub fn rcheck_sampled(seed: u64, samples: usize) -> Result<()> {
    let mut r = rng(seed);
    for _ in 0..samples {
        let w = distinct_rationals(&mut r, 3);
        let a = rcheck_exact(&w[0])?;
        let b = rcheck_exact(&w[0].inv())?;
        for i in 0..4 {
            for j in 0..4 {
                let mut acc = CycQ::zero();
                for k in 0..4 {
                    acc += &(&a[i][k] * &b[k][j]);
                }
                let want = if i == j { CycQ::one() } else { CycQ::zero() };
                ensure(acc == want, "unitarity", || format!("w = {}, entry ({i},{j})", w[0]))?;
            }
        }
        let (z1, z2, z3) = (&w[0], &w[1], &w[2]);
        let r12 = |x: &CycQ| rcheck_exact(x).map(|m| embed(&m, true));
        let r23 = |x: &CycQ| rcheck_exact(x).map(|m| embed(&m, false));
        let lhs = mul8(&mul8(&r12(&(z2 / z3))?, &r23(&(z1 / z3))?), &r12(&(z1 / z2))?);
        let rhs = mul8(&mul8(&r23(&(z1 / z2))?, &r12(&(z1 / z3))?), &r23(&(z2 / z3))?);
        ensure(lhs == rhs, "Yang-Baxter", || format!("z = ({z1}, {z2}, {z3})"))?;
    }
    Ok(())
}

fn rcheck_singlet() -> Result<()> {
    let w = MultiLaurent::var(VarId::aux());
    let (m, k) = rcheck_cleared(&w, &MultiLaurent::one());
    let omega = BTreeMap::from([(0b01u64, MultiLaurent::one()), (0b10, MultiLaurent::constant(-qi()))]);
    let got = apply_two_site(&m, &omega, 1);
    let want: BTreeMap<u64, MultiLaurent> = omega.iter().map(|(s, c)| (*s, &k * c)).collect();
    ensure(got == want, "singlet", || "R-check(w) omega != omega".into())
}

fn transfer_eigen(max_sites: usize, seed: u64) -> Result<()> {
    let mut r = rng(seed.wrapping_add(11));
    for n_sites in 2..=max_sites.min(6) {
        for &mu in Mu::for_parity(n_sites) {
            let psi = psi_cached(mu, n_sites)?;
            let zs: Vec<C64> = distinct_rationals(&mut r, n_sites).iter().map(|c| c.to_complex()).collect();
            let at = zs.iter().enumerate().map(|(i, v)| (VarId::z(i + 1), *v)).collect();
            let (phi, mag) = case_data(n_sites, mu)?;
            let sector = Sector::new(n_sites, mag)?;
            let v: Vec<C64> =
                sector.states.iter().map(|s| psi.component(*s).to_complex_eval(&at)).collect::<Result<_>>()?;
            let v = nalgebra::DVector::from_vec(v);
            for spectral in [C64::new(0.7, 0.3), C64::new(-1.9, 0.5)] {
                let t = build_transfer_matrix(&sector, phi, spectral, Some(&zs))?;
                let res = (&t * &v - &v).norm() / v.norm();
                ensure(res < 1e-9, "transfer eigenvector", || format!("N = {n_sites}, mu = {mu}, residual {res:e}"))?;
            }
        }
    }
    Ok(())
}

// ---------------------------------------------------------------- scalar products

pub fn scalar_suite(seed: u64) -> Vec<Check> {
    let s = Suite::Scalar;
    let mut out = vec![
        Check::from_result(s, "fish equation", check_fish()),
        Check::from_result(s, "boundary Yang-Baxter", check_boundary_ybe()),
        Check::from_result(s, "chi / varphi relation", check_chi_varphi()),
    ];
    for which in Identity::ALL {
        for (k, p) in [(0, 1), (1, 1), (0, 2), (1, 2), (0, 3), (2, 1)] {
            if !which.applies(k, p) {
                continue;
            }
            let r = verify_scalar_identity(which, k, p, 3, seed).and_then(|rep| match rep.failure {
                None => Ok(()),
                Some(d) => Err(mismatch(&which.to_string(), d)),
            });
            out.push(Check::from_result(s, format!("{which} k={k} p={p}"), r));
        }
    }
    out.push(Check::from_result(
        s,
        "factorized S0_{k,k}, S0_{k,k+1}",
        (|| {
            let mut r = rng(seed.wrapping_add(3));
            for (variant, k) in
                [(Factorized::Kk, 1), (Factorized::KkPlus1, 0), (Factorized::KkPlus1, 1), (Factorized::Kk, 2)]
            {
                let p = if variant == Factorized::Kk { k } else { k + 1 };
                let kind = ScalarKind::new(Family::S0, k, p)?;
                for _ in 0..2 {
                    let at = assignment(kind, &distinct_rationals(&mut r, kind.vars().len()))?;
                    let (a, b) = (scalar_product(kind, &at)?, factorized_s0(variant, k, &at)?);
                    ensure(a == b, "factorized form", || format!("{kind}: {a} vs {b}"))?;
                }
            }
            Ok(())
        })(),
    ));
    out.push(Check::from_result(
        s,
        "homogeneous limits vs oracle",
        (|| {
            for family in Family::ALL {
                for k in 0..=3 {
                    for p in 0..=3 - k {
                        let Ok(kind) = ScalarKind::new(family, k, p) else { continue };
                        if kind.n_sites() < 2 {
                            continue;
                        }
                        let (n, m, mu) = kind.overlap_index();
                        let exact = homogeneous_scalar(kind)?.to_complex();
                        let oracle = overlap_oracle(n, m, mu)?;
                        ensure((exact - oracle).norm() < 1e-9 * (1.0 + oracle.norm()), "homogeneous limit", || {
                            format!("{kind}: {exact} vs {oracle}")
                        })?;
                    }
                }
            }
            Ok(())
        })(),
    ));
    out
}

// ---------------------------------------------------------------- determinant

/// Samples used to certify S = R at (k, p): one more than the largest
/// per-variable degree width, 2(k+p).
pub fn s_equals_r_samples(k: usize, p: usize) -> usize {
    2 * (k + p) + 1
}

/// Exact S0 = R at `samples` generic rational points.
pub fn s_equals_r(k: usize, p: usize, samples: usize, seed: u64) -> Result<()> {
    let kind = ScalarKind::new(Family::S0, k, p)?;
    let mut r = rng(seed ^ ((k as u64) << 20) ^ ((p as u64) << 24));
    for _ in 0..samples {
        let at = assignment(kind, &distinct_rationals(&mut r, 2 * k + p))?;
        let (lhs, rhs) = (scalar_product(kind, &at)?, r_kp(k, p, &at)?);
        ensure(lhs == rhs, "S = R", || format!("(k, p) = ({k}, {p}): S = {lhs}, R = {rhs}"))?;
    }
    Ok(())
}

pub const S_EQUALS_R_CASES: [(usize, usize); 6] = [(0, 1), (1, 1), (0, 2), (1, 2), (2, 2), (1, 3)];

pub fn determinant_suite(seed: u64) -> Vec<Check> {
    let s = Suite::Determinant;
    let mut out: Vec<Check> = S_EQUALS_R_CASES
        .iter()
        .map(|&(k, p)| {
            let n = s_equals_r_samples(k, p);
            Check::from_result(s, format!("S = R at (k,p) = ({k},{p}), {n} points"), s_equals_r(k, p, n, seed))
        })
        .collect();
    out.push(Check::from_result(
        s,
        "R vanishes for k > p",
        (|| {
            let v = distinct_rationals(&mut rng(seed), 5);
            let r = r_kp_values(2, 1, &v[..4], &v[4..])?;
            ensure(r.is_zero(), "R_{2,1}", || format!("got {r}"))
        })(),
    ));
    out.push(Check::from_result(s, "non-generic points rejected", {
        let c = CycQ::from_int;
        ensure(matches!(r_kp_values(1, 1, &[c(2), c(2)], &[c(3)]), Err(Error::NonGeneric(_))), "genericity", || {
            "coinciding z accepted".into()
        })
    }));
    out
}

// ---------------------------------------------------------------- homogeneous limit

/// (k, p) with k <= p and 1 <= k + p <= max_sum.
pub fn homogeneous_cases(max_sum: usize) -> Vec<(usize, usize)> {
    let mut v = Vec::new();
    for sum in 1..=max_sum {
        for k in 0..=sum / 2 {
            v.push((k, sum - k));
        }
    }
    v
}

pub fn gamma_stages_agree(k: usize, p: usize) -> Result<()> {
    let a = gamma0_kp(k, p, Gamma0Stage::StagedFiniteDiff);
    let b = gamma0_kp(k, p, Gamma0Stage::FinalM7);
    ensure(a == b, "Gamma stages", || format!("({k},{p}): staged {a}, final {b}"))
}

pub fn gamma_gives_product(k: usize, p: usize) -> Result<()> {
    let c = c0_from_gamma(k, p, &gamma0_kp(k, p, Gamma0Stage::FinalM7));
    let want = overlap_product(2 * (k + p), 2 * k, Mu::Zero)?;
    ensure(c == want, "C0 from Gamma", || format!("({k},{p}): {c} vs {want}"))
}

pub fn staircase_vs_bialternant(max_ab: usize, draws: usize, seed: u64) -> Result<()> {
    let mut r = rng(seed);
    for _ in 0..draws {
        let (alpha, beta) = (small_rational(&mut r), small_rational(&mut r));
        for a in 0..=max_ab {
            for b in 0..=max_ab {
                let p = StaircaseSchurParams { a, b, alpha: alpha.clone(), beta: beta.clone() };
                let lhs = schur_staircase_eval(&p);
                let rhs = schur_bialternant(&staircase(a, b), &p.points())?;
                ensure(lhs == rhs, "staircase Schur", || format!("a = {a}, b = {b}, alpha = {alpha}, beta = {beta}"))?;
            }
        }
    }
    Ok(())
}

pub fn homogeneous_suite(max_sum: usize, seed: u64) -> Vec<Check> {
    let s = Suite::Homogeneous;
    let mut out = Vec::new();
    for (k, p) in homogeneous_cases(max_sum) {
        out.push(Check::from_result(s, format!("staged = final Gamma at ({k},{p})"), gamma_stages_agree(k, p)));
        out.push(Check::from_result(s, format!("C0 from Gamma = product at ({k},{p})"), gamma_gives_product(k, p)));
    }
    out.push(Check::from_result(s, "staircase Schur = bialternant, a, b <= 5", staircase_vs_bialternant(5, 3, seed)));
    out
}

// ---------------------------------------------------------------- Barnes

fn rel(a: C64, b: C64) -> f64 {
    (a - b).norm() / b.norm().max(f64::MIN_POSITIVE)
}

/// Largest relative deviation of both Barnes routes from the product, over
/// all m, for half-length n.
pub fn barnes_deviation(mu: Mu, n: usize) -> Result<f64> {
    let n_sites = if mu == Mu::Zero { 2 * n } else { 2 * n + 1 };
    let mut worst = 0.0f64;
    for m in 0..=n_sites {
        let exact = overlap_product(n_sites, m, mu)?.to_complex();
        let routed = overlap_barnes(n_sites, m, mu)?;
        let uniform = overlap_barnes_uniform(n_sites, m, mu)?.to_complex();
        if exact.norm() == 0.0 {
            if routed.norm() != 0.0 || uniform.norm() != 0.0 {
                return Err(mismatch("Barnes zero", format!("N = {n_sites}, m = {m}")));
            }
            continue;
        }
        worst = worst.max(rel(routed, exact)).max(rel(uniform, exact));
    }
    Ok(worst)
}

pub fn barnes_suite(max_n: usize) -> Vec<Check> {
    let s = Suite::Barnes;
    let mut out = Vec::new();
    for mu in [Mu::Plus, Mu::Minus, Mu::Zero] {
        let r = (|| {
            for n in usize::from(mu == Mu::Zero)..=max_n {
                let d = barnes_deviation(mu, n)?;
                ensure(d < 1e-8, "Barnes vs product", || format!("n = {n}: relative deviation {d:e}"))?;
            }
            Ok(())
        })();
        out.push(Check::from_result(s, format!("Barnes = product, mu={mu}, n <= {max_n}"), r));
    }
    out.push(Check::from_result(
        s,
        "J0 = 1 for k <= 3, k <= p <= 5",
        (|| {
            for k in 0..=3 {
                for p in k.max(1)..=5 {
                    let j = j0_ratio(k, p)?;
                    ensure((j - 1.0).abs() < 1e-8, "J0", || format!("({k},{p}): {j}"))?;
                }
            }
            Ok(())
        })(),
    ));
    out
}

// ---------------------------------------------------------------- asymptotics

pub const FIT_CORRECTIONS: usize = 1;

pub fn scaling_grid() -> Vec<usize> {
    (500..=2000).step_by(20).collect()
}

pub fn large_m_grid() -> Vec<usize> {
    (500..=2000).collect()
}

/// Fitted minus closed-form coefficients of the scaling expansion.
pub fn scaling_fit_deviation(mu: Mu, x: f64, ns: &[usize]) -> Result<[f64; 4]> {
    let f = fit_scaling(mu, x, ns, FIT_CORRECTIONS)?;
    let c = AsymptoticCoeffs::new(mu, x)?;
    Ok([f[0] - c.f_minus2, f[1] - c.f_minus1, f[2] - c.f_log, f[3] - c.f_0])
}

pub fn large_m_fit_deviation(mu: Mu, ms: &[usize]) -> Result<[f64; 4]> {
    let g = fit_large_m(mu, ms, FIT_CORRECTIONS)?;
    let c = AsymptoticCoeffs::new(mu, 0.5)?;
    Ok([g[0] - c.g_minus2, g[1] - c.g_minus1, g[2] - c.g_log, g[3] - c.g_0])
}

pub fn asymptotics_suite(tol: f64) -> Vec<Check> {
    let s = Suite::Asymptotics;
    let mut out = Vec::new();
    let within = |d: Result<[f64; 4]>| -> Result<()> {
        let d = d?;
        ensure(d.iter().all(|v| v.abs() < tol), "fit", || format!("deviations {d:?}"))
    };
    let ns = scaling_grid();
    for mu in [Mu::Plus, Mu::Minus, Mu::Zero] {
        for x in [0.25, 0.5, 0.75] {
            out.push(Check::from_result(
                s,
                format!("scaling fit mu={mu} x={x}"),
                within(scaling_fit_deviation(mu, x, &ns)),
            ));
        }
    }
    let ms = large_m_grid();
    for mu in [Mu::Plus, Mu::Minus, Mu::Zero] {
        out.push(Check::from_result(s, format!("large-m fit mu={mu}"), within(large_m_fit_deviation(mu, &ms))));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suite_names_round_trip() {
        for s in Suite::ALL {
            assert_eq!(s.to_string().parse::<Suite>().unwrap(), s);
        }
        assert!("everything".parse::<Suite>().is_err());
    }

    #[test]
    fn homogeneous_case_list() {
        let v = homogeneous_cases(3);
        assert_eq!(v, vec![(0, 1), (0, 2), (1, 1), (0, 3), (1, 2)]);
    }

    #[test]
    fn failures_carry_detail() {
        let c = Check::from_result(Suite::Barnes, "x", Err(mismatch("J0", "(1,2): 0.5".into())));
        assert!(!c.passed);
        assert!(c.to_string().contains("FAIL") && c.to_string().contains("0.5"));
    }

    #[test]
    fn small_suites_pass() {
        for c in qkz_suite(1, 3).into_iter().chain(barnes_suite(4)).chain(homogeneous_suite(3, 2)) {
            assert!(c.passed, "{c}");
        }
        assert!(s_equals_r(1, 1, 3, 9).is_ok());
    }
}
