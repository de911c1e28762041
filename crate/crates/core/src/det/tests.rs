use super::homogeneous::{det_m7_closed, m7_matrix};
use super::*;
use crate::exact::sample::{distinct_rationals, rng};
use crate::scalar::{assignment, homogeneous_scalar, scalar_product, Family, ScalarKind};
use proptest::prelude::*;

fn c(n: i64) -> CycQ {
    CycQ::from_int(n)
}

fn r(n: i64) -> Rational {
    Rational::from_integer(n.into())
}

fn leibniz(m: &[Vec<BigInt>]) -> BigInt {
    fn go(m: &[Vec<BigInt>], row: usize, used: &mut Vec<bool>) -> BigInt {
        if row == m.len() {
            return BigInt::one();
        }
        let mut acc = BigInt::zero();
        let mut sign = 1;
        for j in 0..m.len() {
            if used[j] {
                continue;
            }
            used[j] = true;
            let t = &m[row][j] * go(m, row + 1, used);
            used[j] = false;
            if sign > 0 {
                acc += t;
            } else {
                acc -= t;
            }
            sign = -sign;
        }
        acc
    }
    go(m, 0, &mut vec![false; m.len()])
}

proptest! {
    #[test]
    fn bareiss_matches_leibniz(n in 1usize..5, entries in prop::collection::vec(-4i64..5, 16)) {
        let m: Vec<Vec<BigInt>> = (0..n).map(|i| (0..n).map(|j| BigInt::from(entries[i * 4 + j])).collect()).collect();
        prop_assert_eq!(bareiss(m.clone()), leibniz(&m));
    }

    #[test]
    fn bialternant_is_symmetric(xs in prop::collection::btree_set(-20i64..20, 4), swap in 0usize..3) {
        let mut v: Vec<Rational> = xs.into_iter().map(r).collect();
        let lam = [3, 1, 1];
        let a = schur_bialternant(&lam, &v).unwrap();
        v.swap(swap, swap + 1);
        prop_assert_eq!(a, schur_bialternant(&lam, &v).unwrap());
    }
}

/// Sum over semistandard tableaux of shape lambda with entries 1..=l.
fn tableau_sum(lambda: &[usize], xs: &[Rational]) -> Rational {
    let cells: Vec<(usize, usize)> =
        lambda.iter().enumerate().flat_map(|(i, &len)| (0..len).map(move |j| (i, j))).collect();
    let mut fill = vec![vec![0usize; lambda.first().copied().unwrap_or(0)]; lambda.len()];
    fn go(idx: usize, cells: &[(usize, usize)], fill: &mut Vec<Vec<usize>>, xs: &[Rational]) -> Rational {
        if idx == cells.len() {
            return fill.iter().flatten().filter(|&&e| e > 0).map(|&e| xs[e - 1].clone()).product();
        }
        let (i, j) = cells[idx];
        let lo_row = if j > 0 { fill[i][j - 1] } else { 1 };
        let lo_col = if i > 0 { fill[i - 1][j] + 1 } else { 1 };
        let mut acc = Rational::zero();
        for e in lo_row.max(lo_col)..=xs.len() {
            fill[i][j] = e;
            acc += go(idx + 1, cells, fill, xs);
        }
        fill[i][j] = 0;
        acc
    }
    go(0, &cells, &mut fill, xs)
}

#[test]
fn bialternant_matches_tableaux() {
    assert_eq!(schur_bialternant(&[1], &[r(7)]).unwrap(), r(7));
    let mut g = rng(11);
    for lam in [vec![2, 1], vec![1, 1, 1], vec![3, 2, 1], vec![4, 2], vec![2, 2, 2], vec![3, 3]] {
        for l in lam.len()..=4 {
            let xs: Vec<Rational> = (0..l).map(|_| crate::exact::sample::small_rational(&mut g)).collect();
            if xs.iter().enumerate().any(|(i, a)| xs[..i].contains(a)) {
                continue;
            }
            assert_eq!(schur_bialternant(&lam, &xs).unwrap(), tableau_sum(&lam, &xs), "{lam:?}");
        }
    }
    assert_eq!(schur_bialternant(&[2, 1], &[r(1), r(2), r(3)]).unwrap(), tableau_sum(&[2, 1], &[r(1), r(2), r(3)]));
    assert!(schur_bialternant(&[1], &[r(2), r(2)]).is_err());
}

#[test]
fn staircase_product_matches_bialternant() {
    let p = StaircaseSchurParams { a: 1, b: 0, alpha: r(3), beta: r(4) };
    assert_eq!(schur_staircase_eval(&p), r(7));
    let p = StaircaseSchurParams { a: 2, b: 1, alpha: r(1), beta: r(1) };
    assert_eq!(schur_staircase_eval(&p), schur_bialternant(&[2, 1, 0], &[r(2), r(3), r(4)]).unwrap());
    // (k, p) = (1, 2)
    let p = StaircaseSchurParams { a: 2, b: 1, alpha: r(14), beta: r(-6) };
    let mut expect = Rational::new(1.into(), 4.into());
    for i in 1..=2i64 {
        for j in i..=2 {
            expect *= r(22 - 6 * i - 6 * j);
        }
    }
    expect *= Rational::new(2.into(), 1.into()) * Rational::new(4.into(), 2.into());
    assert_eq!(schur_staircase_eval(&p), expect);
    assert_eq!(expect, schur_bialternant(&staircase(2, 1), &p.points()).unwrap());
    let mut g = rng(5);
    for a in 0..=4 {
        for b in 0..=3 {
            let alpha = crate::exact::sample::small_rational(&mut g);
            let p = StaircaseSchurParams { a, b, alpha, beta: r(3) };
            assert_eq!(schur_staircase_eval(&p), schur_bialternant(&staircase(a, b), &p.points()).unwrap(), "{a} {b}");
        }
    }
}

#[test]
fn staircase_schur_reductions() {
    let mut g = rng(9);
    for a in 1..=4 {
        for b in 2..=4 {
            let mut xs: Vec<Rational> = (0..a + b)
                .map(|i| r(3 * i as i64 + 1) + crate::exact::sample::small_rational(&mut g) / r(1000))
                .collect();
            let lam = staircase(a, b);
            xs[0] = Rational::zero();
            assert_eq!(
                schur_bialternant(&lam, &xs).unwrap(),
                schur_bialternant(&staircase(a, b - 1), &xs[1..]).unwrap()
            );
            xs[0] = r(5) / r(7);
            xs[1] = -&xs[0];
            assert_eq!(
                schur_bialternant(&lam, &xs).unwrap(),
                schur_bialternant(&staircase(a, b - 2), &xs[2..]).unwrap()
            );
        }
    }
}

#[test]
fn chebyshev_coefficients() {
    use ChebyshevKind::{T, U};
    assert_eq!(chebyshev_taylor_at_2(U, 1, 0), r(1));
    assert_eq!(chebyshev_taylor_at_2(U, 3, 0), r(3));
    assert_eq!(chebyshev_taylor_at_2(T, 2, 1), r(2));
    for ell in -12..=12 {
        for m in 0..6 {
            assert_eq!(chebyshev_taylor_at_2(U, ell, m), chebyshev_taylor_direct(U, ell, m), "U {ell} {m}");
            assert_eq!(chebyshev_taylor_at_2(T, ell, m), chebyshev_taylor_direct(T, ell, m), "T {ell} {m}");
        }
    }
}

#[test]
fn spec_points_antisymmetric() {
    for k in 0..6 {
        for p in 0..6 {
            let sp = IntegerSpecPoints::new(k, p);
            assert!(sp.is_antisymmetric());
            assert_eq!(sp.v.len(), 2 * (k + p));
        }
    }
    assert_eq!(IntegerSpecPoints::new(1, 2).u, vec![8, 2, -4]);
}

#[test]
fn p_pm_small() {
    let y = c(5);
    assert_eq!(p_pm(true, std::slice::from_ref(&y)).unwrap(), c(6));
    assert_eq!(p_pm(false, &[y]).unwrap(), c(-4));
    // 2x2 by hand at (2, 3): rows (1 + y^4, y^3 + y)
    let det = (1 + 16) * (27 + 3) - (2 + 8) * (1 + 81);
    let cy = 6 - 1;
    assert_eq!(p_pm(true, &[c(2), c(3)]).unwrap(), CycQ::ratio(det, cy));
}

#[test]
fn p_pm_inversion_and_reductions() {
    let mut g = rng(2);
    let one = CycQ::one();
    let q2 = CycQ::q_pow(2);
    for n in 1..=4 {
        for plus in [true, false] {
            let sgn = if plus { one.clone() } else { -one.clone() };
            let mut ys = distinct_rationals(&mut g, n);
            let base = p_pm(plus, &ys).unwrap();
            let y0 = ys[0].clone();
            ys[0] = y0.inv();
            assert_eq!(p_pm(plus, &ys).unwrap(), &(&sgn * &y0.pow(-(n as i64))) * &base);
            if n < 2 {
                continue;
            }
            let ys = distinct_rationals(&mut g, n - 1);
            let y = ys[n - 2].clone();
            let head = &ys[..n - 2];
            let low = if head.is_empty() { one.clone() } else { p_pm(plus, head).unwrap() };
            let mut red = ys.clone();
            red.push(&CycQ::q_pow(-2) * &y);
            let mut rhs = &(&-&sgn * &low) * &(&(&one - &(&y * &y)) * &(&one - &(&q2 * &(&y * &y))));
            for yj in head {
                rhs = &rhs * &(&(yj - &(&q2 * &y)) * &(&(&q2 * &(yj * &y)) - &one));
            }
            assert_eq!(p_pm(plus, &red).unwrap(), rhs, "reduction n={n} plus={plus}");
            let mut red2 = ys.clone();
            red2.push(&CycQ::q_pow(-2) * &y.inv());
            let mut rhs2 = &(&-&low * &(&(&one - &(&y * &y)) * &(&q2 - &(&y * &y)))) * &y.pow(-(n as i64));
            for yj in head {
                rhs2 = &rhs2 * &(&(&(yj * &y) - &q2) * &(&(&q2 * yj) - &y));
            }
            assert_eq!(p_pm(plus, &red2).unwrap(), rhs2, "second reduction n={n} plus={plus}");
        }
    }
}

#[test]
fn cofactor_expansion() {
    let mut g = rng(4);
    for (k, p) in [(1, 1), (1, 2), (0, 2), (2, 2)] {
        let v = distinct_rationals(&mut g, 2 * k + p);
        let (zs, xs) = v.split_at(2 * k);
        assert_eq!(det_ratio(k, p, zs, xs).unwrap(), cofactor_sum(k, p, zs, xs).unwrap(), "({k},{p})");
    }
}

#[test]
fn determinant_reductions() {
    let mut g = rng(6);
    let one = CycQ::one();
    let q2 = CycQ::q_pow(2);
    for (k, p) in [(0, 2), (1, 2), (0, 3), (1, 3)] {
        let v = distinct_rationals(&mut g, 2 * k + p);
        let (zs, xs) = v.split_at(2 * k);
        let mut xs = xs.to_vec();
        let y = xs[p - 2].clone();
        xs[p - 1] = &CycQ::q_pow(-2) * &y;
        let lhs = det_ratio(k, p, zs, &xs).unwrap();
        let mut rhs = -&det_ratio(k, p - 2, zs, &xs[..p - 2]).unwrap();
        for xi in &xs[..p - 2] {
            let f = &(xi - &(&q2 * &y)) * &(&(&q2 * &(xi * &y)) - &one);
            rhs = &rhs * &(&f * &f);
        }
        for z in zs {
            rhs = &rhs * &(&(z - &(&q2 * &y)) * &(&(&q2 * &(z * &y)) - &one));
        }
        rhs = &rhs * &(&(&one - &(&q2 * &(&y * &y))) * &(&one - &(&y * &y)));
        assert_eq!(lhs, rhs, "first reduction ({k},{p})");
    }
    for (k, p) in [(1, 1), (1, 2), (2, 2), (1, 3)] {
        let v = distinct_rationals(&mut g, 2 * k + p);
        let (zs, xs) = v.split_at(2 * k);
        let mut zs = zs.to_vec();
        let xp = xs[p - 1].clone();
        zs[2 * k - 2] = &CycQ::q_pow(-2) * &xp.inv();
        zs[2 * k - 1] = &CycQ::q_pow(-2) * &xp;
        let lhs = det_ratio(k, p, &zs, xs).unwrap();
        let sign = if p % 2 == 0 { c(2) } else { c(-2) };
        let mut rhs = &(&sign * &CycQ::q_pow(-(k as i64))) * &xp.pow(-(p as i64 - k as i64 - 1));
        rhs = &rhs * &det_ratio(k - 1, p - 1, &zs[..2 * k - 2], &xs[..p - 1]).unwrap();
        for xi in &xs[..p - 1] {
            rhs = &rhs
                * &(&(&(&q2 * xi) - &xp)
                    * &(&(xi - &(&q2 * &xp)) * &(&(&(&q2 * &(xi * &xp)) - &one) * &(&(xi * &xp) - &q2))));
        }
        assert_eq!(lhs, rhs, "second reduction ({k},{p})");
    }
}

/// Prefactor of the first reduction for R_{k,p}, with y = x_{p-1}.
fn first_reduction_factor(k: usize, p: usize, zs: &[CycQ], xs: &[CycQ], y: &CycQ) -> CycQ {
    let one = CycQ::one();
    let (q1, qm1, qm3) = (q(), qi(), CycQ::q_pow(-3));
    let d = &q1 - &qm1;
    let yi = y.inv();
    let mut f =
        &CycQ::q_pow(2 * (p as i64 + k as i64 - 2)) * &(&(&(&(&q1 * y) - &(&qm1 * &yi)) * &(y - &yi)) * &d.pow(-2));
    for z in zs {
        f = &f * &(&(&(&(&q1 * z) - &(&qm1 * &yi)) * &(&(&q1 * z) - &(&qm3 * y))) * &d.pow(-2));
    }
    for x in &xs[..p - 2] {
        let xinv = x.inv();
        let t = &(&(&(&q1 * x) - &(&qm1 * &yi)) * &(&(&q1 * &xinv) - &(&qm1 * &yi)))
            * &(&(&(&q1 * x) - &(&qm3 * y)) * &(&(&q1 * &xinv) - &(&qm3 * y)));
        f = &f * &(&t * &d.pow(-4));
    }
    let num = &(&(&(&one + &CycQ::q_pow(2)) * &(&q1 - y).pow(2)) * &(&CycQ::q_pow(2) - y))
        * &(&(&CycQ::q_pow(3) - y) * &(&CycQ::q_pow(3) + y));
    let den = &(&(&CycQ::q_pow(5) * &(&CycQ::q_pow(2) - &one).pow(2)) * &y.pow(2)) * &(&one + y);
    &f * &(&num * &den.inv())
}

#[test]
fn first_reduction_of_r() {
    let mut g = rng(8);
    for (k, p) in [(1, 2), (0, 2), (1, 3), (0, 4)] {
        let v = distinct_rationals(&mut g, 2 * k + p);
        let (zs, xs) = v.split_at(2 * k);
        let mut xs = xs.to_vec();
        let y = xs[p - 2].clone();
        xs[p - 1] = &CycQ::q_pow(-2) * &y;
        let lhs = r_kp_values(k, p, zs, &xs).unwrap();
        let low = if p == 2 && k == 0 { CycQ::one() } else { r_kp_values(k, p - 2, zs, &xs[..p - 2]).unwrap() };
        assert_eq!(lhs, &first_reduction_factor(k, p, zs, &xs, &y) * &low, "({k},{p})");
    }
}

#[test]
fn r_matches_scalar_product() {
    let mut g = rng(10);
    for (k, p) in [(0, 1), (1, 1), (0, 2), (1, 2)] {
        let kind = ScalarKind::new(Family::S0, k, p).unwrap();
        for _ in 0..2 {
            let at = assignment(kind, &distinct_rationals(&mut g, 2 * k + p)).unwrap();
            assert_eq!(r_kp(k, p, &at).unwrap(), scalar_product(kind, &at).unwrap(), "({k},{p})");
        }
    }
    let at = assignment(ScalarKind::new(Family::S0, 1, 1).unwrap(), &[c(2), c(3), c(5)]).unwrap();
    assert_eq!(r_kp(1, 1, &at).unwrap(), scalar_product(ScalarKind::new(Family::S0, 1, 1).unwrap(), &at).unwrap());
    let v = distinct_rationals(&mut g, 5);
    assert!(r_kp_values(2, 1, &v[..4], &v[4..]).unwrap().is_zero());
}

#[test]
fn non_generic_points_are_rejected() {
    assert!(matches!(r_kp_values(1, 1, &[c(2), c(2)], &[c(3)]), Err(Error::NonGeneric(_))));
    assert!(matches!(r_kp_values(0, 1, &[], &[c(1)]), Err(Error::NonGeneric(_))));
    assert!(p_pm(true, &[c(2), CycQ::ratio(1, 2)]).is_err());
}

#[test]
fn m7_determinant_closed_form() {
    for (k, p) in [(0, 1), (0, 2), (1, 1), (1, 2), (2, 2), (1, 3), (2, 3)] {
        let direct = bareiss(m7_matrix(k, p));
        assert_eq!(direct, det_m7_closed(k, p), "({k},{p})");
        let sp = IntegerSpecPoints::new(k, p);
        let v: Vec<Rational> = sp.v.iter().map(|&x| r(x)).collect();
        let mut vdm = Rational::one();
        for i in 0..v.len() {
            for j in i + 1..v.len() {
                vdm *= &v[j] - &v[i];
            }
        }
        let sign = if (p * p.saturating_sub(1) / 2) % 2 == 0 { r(1) } else { r(-1) };
        assert_eq!(direct, sign * schur_bialternant(&staircase(2 * k, 2 * p), &v).unwrap() * vdm);
    }
}

#[test]
fn gamma_stages_agree() {
    for (k, p) in [(0, 1), (1, 1), (0, 2), (1, 2), (0, 3), (2, 2)] {
        let a = gamma0_kp(k, p, Gamma0Stage::StagedFiniteDiff);
        let b = gamma0_kp(k, p, Gamma0Stage::FinalM7);
        assert_eq!(a, b, "({k},{p})");
    }
    assert!(gamma0_kp(2, 1, Gamma0Stage::FinalM7).is_zero());
}

#[test]
fn gamma_gives_homogeneous_overlap() {
    let g = gamma0_kp(0, 1, Gamma0Stage::FinalM7);
    assert_eq!(c0_from_gamma(0, 1, &g), &c(2) + &q());
    for (k, p) in [(1, 1), (0, 2), (1, 2), (0, 3)] {
        let g = gamma0_kp(k, p, Gamma0Stage::FinalM7);
        let kind = ScalarKind::new(Family::S0, k, p).unwrap();
        assert_eq!(c0_from_gamma(k, p, &g), homogeneous_scalar(kind).unwrap(), "({k},{p})");
    }
}
