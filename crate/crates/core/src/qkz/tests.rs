use super::*;
use crate::exact::sample::{distinct_rationals, rng};
use crate::spin::{build_transfer_matrix, case_data, Sector};
use num_complex::Complex64 as C64;

fn lin(a: CycQ, i: usize, b: CycQ, j: usize) -> MultiLaurent {
    MultiLaurent::linear(a, z(i), b, z(j))
}

fn zv(i: usize) -> MultiLaurent {
    MultiLaurent::var(z(i))
}

fn qp(k: i64) -> CycQ {
    CycQ::q_pow(k)
}

#[test]
fn psi3_plus_components() {
    let p = build_psi_plus(1).unwrap();
    let d = qmqi().inv();
    let e1 = (&lin(q(), 1, -qi(), 2) * &zv(3)).scale(&d);
    let e2 = (&lin(qp(-2), 3, -qp(2), 1) * &zv(2)).scale(&d);
    let e3 = (&lin(q(), 2, -qi(), 3) * &zv(1)).scale(&d);
    assert_eq!(p.component(0b011), e1);
    assert_eq!(p.component(0b101), e2);
    assert_eq!(p.component(0b110), e3);
    assert_eq!(p.homogeneous_overlap(0), CycQ::from_int(3));
}

#[test]
fn psi3_minus_components_are_spin_reversed_labels() {
    let m = build_psi_minus(1).unwrap();
    let d = qmqi().inv();
    // printed labels up-up-down etc. belong to the reversed states
    assert_eq!(m.component(0b100), lin(q(), 1, -qi(), 2).scale(&d));
    assert_eq!(m.component(0b010), lin(qp(-2), 3, -qp(2), 1).scale(&d));
    assert_eq!(m.component(0b001), lin(q(), 2, -qi(), 3).scale(&d));
    assert_eq!(m.comps.len(), 3);
}

#[test]
fn psi2_zero_is_omega() {
    let p = build_psi_zero(1).unwrap();
    assert_eq!(p.component(0b01), MultiLaurent::one());
    assert_eq!(p.component(0b10), MultiLaurent::constant(-qi()));
}

#[test]
fn psi4_zero_components() {
    let p = build_psi_zero(2).unwrap();
    let d2 = qmqi().pow(-2);
    let e0011 = (&lin(q(), 1, -qi(), 2) * &lin(q(), 3, -qi(), 4)).scale(&d2);
    let e1001 = (&lin(q(), 2, -qi(), 3) * &lin(qp(2), 1, -qp(-2), 4)).scale(&(&d2 * &qi()));
    // both sites 3,4 up: the exchange relation forces the factor q z3 - q^-1 z4
    let e1100 = (&lin(q(), 1, -qi(), 2) * &lin(q(), 3, -qi(), 4)).scale(&(&d2 * &qp(-2)));
    let z24 = &zv(2) * &zv(4);
    let z13 = &zv(1) * &zv(3);
    let e0101 = (&(&z24.scale(&qmqi()) + &(&zv(3) * &lin(q(), 2, -qi(), 4)))
        - &(&zv(1) * &lin(qp(2), 2, -qp(-2), 4)).scale(&qp(3)))
        .scale(&(&d2 * &qp(-2)));
    let e1010 = (&(&(&zv(3) * &lin(qp(2), 2, -qp(-2), 4)) - &(&zv(1) * &lin(q(), 2, -qi(), 4)).scale(&qp(3)))
        - &z13.scale(&(&qmqi() * &qp(3))))
        .scale(&(&d2 * &qp(-3)));
    assert_eq!(p.component(0b0011), e0011);
    assert_eq!(p.component(0b1001), e1001);
    assert_eq!(p.component(0b0110), e1001);
    assert_eq!(p.component(0b1100), e1100);
    assert_eq!(p.component(0b0101), e0101);
    assert_eq!(p.component(0b1010), e1010);
}

#[test]
fn zero_vector_routes_agree() {
    for n in 1..=3 {
        assert_eq!(build_psi_zero(n).unwrap(), build_psi_zero_direct(n).unwrap(), "n = {n}");
    }
}

#[test]
fn degrees() {
    for n_sites in 1..=7 {
        for &mu in Mu::for_parity(n_sites) {
            let p = psi_cached(mu, n_sites).unwrap();
            let (t, i) = p.degrees().unwrap();
            let (et, ei) = degree_bounds(mu, n_sites);
            assert_eq!(t, et, "N = {n_sites} {mu}");
            assert!(i <= ei, "N = {n_sites} {mu}");
        }
    }
}

#[test]
fn exchange_cyclic_paths() {
    for n_sites in 2..=5 {
        for &mu in Mu::for_parity(n_sites) {
            let p = psi_cached(mu, n_sites).unwrap();
            for i in 1..n_sites {
                check_exchange(&p, i).unwrap();
            }
            check_cyclic(&p, cyclic_factors(mu, n_sites)).unwrap();
            check_path_independence(&p).unwrap();
        }
    }
}

#[test]
fn wrong_cyclic_factor_is_caught() {
    let p = psi_cached(Mu::Zero, 4).unwrap();
    let (u, d) = cyclic_factors(Mu::Zero, 4);
    assert!(check_cyclic(&p, (d, u)).is_err());
}

#[test]
fn reduction_relations() {
    for n_sites in 3..=5 {
        for &mu in Mu::for_parity(n_sites) {
            for i in 1..n_sites {
                check_reduction(mu, n_sites, i).unwrap();
            }
        }
    }
    check_reduction(Mu::Zero, 2, 1).unwrap();
}

#[test]
fn wheel_condition() {
    for n_sites in 3..=5 {
        for &mu in Mu::for_parity(n_sites) {
            let p = psi_cached(mu, n_sites).unwrap();
            for i in 1..=n_sites {
                for j in i + 1..=n_sites {
                    for k in j + 1..=n_sites {
                        check_wheel(&p, i, j, k).unwrap();
                    }
                }
            }
        }
    }
}

#[test]
fn braid_limits() {
    for n in 1..=2 {
        for j in 1..=2 * n {
            check_braid_zero(n, j).unwrap();
            check_braid_infinity(n, j).unwrap();
        }
    }
}

fn mat_mul(a: &[[CycQ; 8]; 8], b: &[[CycQ; 8]; 8]) -> [[CycQ; 8]; 8] {
    let mut out: [[CycQ; 8]; 8] = std::array::from_fn(|_| std::array::from_fn(|_| CycQ::zero()));
    for i in 0..8 {
        for j in 0..8 {
            for k in 0..8 {
                out[i][j] += &(&a[i][k] * &b[k][j]);
            }
        }
    }
    out
}

/// Embeds a two-site matrix on sites (1,2) or (2,3) of three sites.
fn embed(m: &[[CycQ; 4]; 4], first: bool) -> [[CycQ; 8]; 8] {
    let mut out: [[CycQ; 8]; 8] = std::array::from_fn(|_| std::array::from_fn(|_| CycQ::zero()));
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

#[test]
fn rcheck_properties() {
    let mut r = rng(7);
    for _ in 0..3 {
        let w = distinct_rationals(&mut r, 3);
        // unitarity
        let a = rcheck_exact(&w[0]).unwrap();
        let b = rcheck_exact(&w[0].inv()).unwrap();
        for i in 0..4 {
            for j in 0..4 {
                let mut s = CycQ::zero();
                for k in 0..4 {
                    s += &(&a[i][k] * &b[k][j]);
                }
                assert_eq!(s, if i == j { CycQ::one() } else { CycQ::zero() });
            }
        }
        // braid Yang-Baxter
        let (z1, z2, z3) = (&w[0], &w[1], &w[2]);
        let r12 = |x: &CycQ| embed(&rcheck_exact(x).unwrap(), true);
        let r23 = |x: &CycQ| embed(&rcheck_exact(x).unwrap(), false);
        let lhs = mat_mul(&mat_mul(&r12(&(z2 / z3)), &r23(&(z1 / z3))), &r12(&(z1 / z2)));
        let rhs = mat_mul(&mat_mul(&r23(&(z1 / z2)), &r12(&(z1 / z3))), &r23(&(z2 / z3)));
        assert_eq!(lhs, rhs);
    }
    // R-check(w) omega = omega, symbolically in w
    let w = MultiLaurent::var(VarId::aux());
    let (m, k) = rcheck_cleared(&w, &MultiLaurent::one());
    let omega = BTreeMap::from([(0b01u64, MultiLaurent::one()), (0b10, MultiLaurent::constant(-qi()))]);
    let out = apply_two_site(&m, &omega, 1);
    let expect: BTreeMap<u64, MultiLaurent> = omega.iter().map(|(s, c)| (*s, &k * c)).collect();
    assert_eq!(out, expect);
}

#[test]
fn inhomogeneous_transfer_eigenvector() {
    let mut r = rng(11);
    for (n_sites, mu) in [(3, Mu::Plus), (3, Mu::Minus), (4, Mu::Zero), (5, Mu::Plus), (6, Mu::Zero)] {
        let p = psi_cached(mu, n_sites).unwrap();
        let zs: Vec<C64> = distinct_rationals(&mut r, n_sites).iter().map(|c| c.to_complex()).collect();
        let at = zs.iter().enumerate().map(|(i, v)| (z(i + 1), *v)).collect();
        let (phi, mag) = case_data(n_sites, mu).unwrap();
        let sector = Sector::new(n_sites, mag).unwrap();
        let v: Vec<C64> = sector.states.iter().map(|s| p.component(*s).to_complex_eval(&at).unwrap()).collect();
        let v = nalgebra::DVector::from_vec(v);
        for spectral in [C64::new(0.7, 0.3), C64::new(-1.9, 0.5)] {
            let t = build_transfer_matrix(&sector, phi, spectral, Some(&zs)).unwrap();
            assert!((&t * &v - &v).norm() < 1e-9 * v.norm(), "N = {n_sites}");
        }
    }
}

#[test]
fn homogeneous_matches_oracle() {
    for n_sites in 1..=7 {
        for &mu in Mu::for_parity(n_sites) {
            if n_sites < 2 {
                continue;
            }
            let gs = crate::spin::groundstate(n_sites, mu).unwrap();
            for m in 0..=n_sites {
                let exact = qkz_overlap(n_sites, m, mu).unwrap().to_complex();
                assert!((exact - gs.overlap(m)).norm() < 1e-9 * (1.0 + exact.norm()), "N = {n_sites} {mu} m = {m}");
            }
        }
    }
}
