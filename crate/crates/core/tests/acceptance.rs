//! Acceptance suite: one PASS/FAIL line per criterion. Runs without the
//! libtest harness so the lines always reach stdout.

use std::process::ExitCode;
use std::time::Instant;

use befp_core::closed::{befp_product, cm0_literal_even, overlap_product, AsymptoticCoeffs};
use befp_core::det::{c0_from_gamma, gamma0_kp, Gamma0Stage};
use befp_core::qkz::qkz_overlap;
use befp_core::spin::{case_data, cylinder_ratio, groundstate, overlap_oracle, Sector};
use befp_core::verify::{self, Check};
use befp_core::{Mu, Result};
use num_complex::Complex64 as C64;

const SEED: u64 = 20_241;
const ORACLE_REL_TOL: f64 = 1e-9;
const MAX_ORACLE_SITES: usize = 13;
const MAX_QKZ_SITES: usize = 7;
const MAX_DET_SUM: usize = 5;
const STAIRCASE_MAX_AB: usize = 5;
const STAIRCASE_DRAWS: usize = 3;
const BARNES_MAX_N: usize = 30;
const FIT_TOL: f64 = 1e-4;
const CYLINDER_HEIGHT: usize = 80;
const CYLINDER_THETA: f64 = 0.9;
const CYLINDER_TOL: f64 = 1e-6;

struct Outcome {
    passed: bool,
    detail: String,
}

fn from_checks(checks: Vec<Check>) -> Outcome {
    let failed: Vec<String> = checks.iter().filter(|c| !c.passed).map(|c| c.to_string()).collect();
    if failed.is_empty() {
        Outcome { passed: true, detail: format!("{} checks", checks.len()) }
    } else {
        Outcome { passed: false, detail: failed.join("; ") }
    }
}

fn from_result(r: Result<String>) -> Outcome {
    match r {
        Ok(detail) => Outcome { passed: true, detail },
        Err(e) => Outcome { passed: false, detail: e.to_string() },
    }
}

fn fail(msg: String) -> befp_core::Error {
    befp_core::Error::IdentityFailed { name: "acceptance".into(), detail: msg }
}

fn rel_dev(a: C64, b: C64) -> f64 {
    let scale = a.norm().max(b.norm());
    if scale == 0.0 {
        0.0
    } else {
        (a - b).norm() / scale
    }
}

fn four_way() -> Result<String> {
    let (mut cases, mut worst) = (0usize, 0.0f64);
    for n_sites in 1..=MAX_ORACLE_SITES {
        for &mu in Mu::for_parity(n_sites) {
            // a single site has no chain Hamiltonian
            let gs = if n_sites >= 2 { Some(groundstate(n_sites, mu)?) } else { None };
            for m in 0..=n_sites {
                let exact = overlap_product(n_sites, m, mu)?;
                if let Some(gs) = &gs {
                    let oracle = gs.overlap(m);
                    let d = rel_dev(oracle, exact.to_complex());
                    if !(d < ORACLE_REL_TOL) && exact.to_complex().norm() + oracle.norm() > ORACLE_REL_TOL {
                        return Err(fail(format!("oracle N={n_sites} m={m} {mu}: {oracle} vs {exact}")));
                    }
                    worst = worst.max(d);
                }
                if n_sites <= MAX_QKZ_SITES {
                    let q = qkz_overlap(n_sites, m, mu)?;
                    if q != exact {
                        return Err(fail(format!("qkz N={n_sites} m={m} {mu}: {q} vs {exact}")));
                    }
                }
                if mu == Mu::Zero && m % 2 == 0 && n_sites / 2 <= MAX_DET_SUM {
                    let (k, p) = (m / 2, n_sites / 2 - m / 2);
                    let d = c0_from_gamma(k, p, &gamma0_kp(k, p, Gamma0Stage::FinalM7));
                    if d != exact {
                        return Err(fail(format!("determinant N={n_sites} m={m}: {d} vs {exact}")));
                    }
                }
                cases += 1;
            }
        }
    }
    Ok(format!("{cases} cases, worst oracle deviation {worst:.1e}"))
}

fn s_equals_r() -> Outcome {
    from_checks(
        verify::S_EQUALS_R_CASES
            .iter()
            .map(|&(k, p)| {
                let n = verify::s_equals_r_samples(k, p);
                Check::from_result(
                    verify::Suite::Determinant,
                    format!("({k},{p}) x{n}"),
                    verify::s_equals_r(k, p, n, SEED),
                )
            })
            .collect(),
    )
}

fn pipeline_consistency() -> Outcome {
    let mut checks = Vec::new();
    for (k, p) in verify::homogeneous_cases(MAX_DET_SUM) {
        let s = verify::Suite::Homogeneous;
        checks.push(Check::from_result(s, format!("stages ({k},{p})"), verify::gamma_stages_agree(k, p)));
        checks.push(Check::from_result(s, format!("product ({k},{p})"), verify::gamma_gives_product(k, p)));
    }
    from_checks(checks)
}

fn fits() -> Result<String> {
    let mut worst = 0.0f64;
    let ns = verify::scaling_grid();
    for mu in [Mu::Plus, Mu::Minus, Mu::Zero] {
        for x in [0.25, 0.5, 0.75] {
            let d = verify::scaling_fit_deviation(mu, x, &ns)?;
            worst = d.iter().fold(worst, |w, v| w.max(v.abs()));
        }
    }
    let ms = verify::large_m_grid();
    let mut zero_const = 0.0;
    for mu in [Mu::Plus, Mu::Minus, Mu::Zero] {
        let d = verify::large_m_fit_deviation(mu, &ms)?;
        worst = d.iter().fold(worst, |w, v| w.max(v.abs()));
        if mu == Mu::Zero {
            zero_const = d[3];
        }
    }
    if !(worst < FIT_TOL) {
        return Err(fail(format!("largest coefficient deviation {worst:e}")));
    }
    // the printed mu = 0 constant carries log(pi)/6 instead of log(pi)/3
    let c = AsymptoticCoeffs::new(Mu::Zero, 0.5)?;
    let printed = c.g_0 + std::f64::consts::PI.ln() / 6.0;
    let miss = (c.g_0 + zero_const - printed).abs();
    Ok(format!("worst deviation {worst:.1e}; printed g_0 for mu=0 misses the fit by {miss:.4}"))
}

fn cylinder() -> Result<String> {
    let z = C64::from_polar(1.0, CYLINDER_THETA);
    let mut worst = 0.0f64;
    let mut runs = 0;
    for (n_sites, mu) in [(3, Mu::Plus), (3, Mu::Minus), (4, Mu::Zero)] {
        let (_, mag) = case_data(n_sites, mu)?;
        let sector = Sector::new(n_sites, mag)?;
        for m in 0..=mu.n_up(n_sites) {
            let want = befp_product(n_sites, m, mu)?.to_complex();
            for &top in &sector.states {
                let r = cylinder_ratio(n_sites, mu, CYLINDER_HEIGHT, m, top, z)?;
                let d = (r.value - want).norm();
                if !(d < CYLINDER_TOL) || r.warning.is_some() {
                    return Err(fail(format!(
                        "N={n_sites} {mu} m={m} top={top:b}: {} vs {want} {:?}",
                        r.value, r.warning
                    )));
                }
                worst = worst.max(d);
                runs += 1;
            }
        }
    }
    Ok(format!("{runs} (N, mu, m, top) runs, worst deviation {worst:.1e}"))
}

fn m0_discrepancy() -> Result<String> {
    for n in 1..=5 {
        let literal = cm0_literal_even(n);
        let product = overlap_product(2 * n, 0, Mu::Zero)?.to_complex();
        let oracle = overlap_oracle(2 * n, 0, Mu::Zero)?;
        let ratio = product / literal;
        let want = 3f64.powf(n as f64 / 2.0);
        if rel_dev(ratio, C64::new(want, 0.0)) > 1e-12 {
            return Err(fail(format!("n={n}: product / literal = {ratio}, expected {want}")));
        }
        if rel_dev(oracle, product) > ORACLE_REL_TOL || rel_dev(oracle, literal) < 0.1 {
            return Err(fail(format!("n={n}: oracle {oracle} does not side with the product {product}")));
        }
    }
    Ok("literal even-N m=0 value is off by 3^(n/2) for n <= 5; oracle matches the product".into())
}

fn main() -> ExitCode {
    let criteria: Vec<(&str, Box<dyn Fn() -> Outcome>)> = vec![
        ("four-way overlap agreement, N <= 13", Box::new(|| from_result(four_way()))),
        ("S = R at generic rational points", Box::new(s_equals_r)),
        ("qKZ identity suite, n <= 3", Box::new(|| from_checks(verify::qkz_suite(3, SEED)))),
        ("staged vs final Gamma and C0 vs product, p + k <= 5", Box::new(pipeline_consistency)),
        (
            "staircase Schur vs bialternant, a, b <= 5",
            Box::new(|| {
                from_result(
                    verify::staircase_vs_bialternant(STAIRCASE_MAX_AB, STAIRCASE_DRAWS, SEED).map(|_| "3 draws".into()),
                )
            }),
        ),
        ("Barnes G forms vs products and J0", Box::new(|| from_checks(verify::barnes_suite(BARNES_MAX_N)))),
        ("asymptotic coefficient fits", Box::new(|| from_result(fits()))),
        ("cylinder ratio vs BEFP, N in {3, 4}", Box::new(|| from_result(cylinder()))),
        ("recorded m = 0 discrepancy guard", Box::new(|| from_result(m0_discrepancy()))),
    ];
    let mut failures = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let o = run();
        let status = if o.passed { "PASS" } else { "FAIL" };
        if !o.passed {
            failures += 1;
        }
        println!("criterion {}: {status} {name} ({:.1}s; {})", i + 1, t.elapsed().as_secs_f64(), o.detail);
    }
    println!("acceptance: {} of {} criteria passed", criteria.len() - failures, criteria.len());
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
