//! Numerical XXZ chain and six-vertex transfer matrices at q = exp(2 pi i / 3).

use std::collections::HashMap;
use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::Mu;

pub const DELTA: f64 = -0.5;

/// Basis states of fixed magnetisation. Bit i set means site i+1 is up.
#[derive(Clone, Debug)]
pub struct Sector {
    pub n_sites: usize,
    pub magnetisation: i32,
    pub states: Vec<u64>,
    index: HashMap<u64, usize>,
}

impl Sector {
    pub fn new(n_sites: usize, magnetisation: i32) -> Result<Self> {
        let n = n_sites as i32;
        if n_sites == 0 || n_sites > 24 || magnetisation.abs() > n || (magnetisation + n) % 2 != 0 {
            return Err(Error::InvalidCase(format!("no sector with N = {n_sites}, magnetisation {magnetisation}")));
        }
        let ups = ((magnetisation + n) / 2) as u32;
        let states: Vec<u64> = (0u64..1 << n_sites).filter(|s| s.count_ones() == ups).collect();
        let index = states.iter().enumerate().map(|(i, &s)| (s, i)).collect();
        Ok(Sector { n_sites, magnetisation, states, index })
    }

    pub fn dim(&self) -> usize {
        self.states.len()
    }

    pub fn index_of(&self, s: u64) -> Option<usize> {
        self.index.get(&s).copied()
    }

    pub fn n_up(&self) -> usize {
        ((self.magnetisation + self.n_sites as i32) / 2) as usize
    }

    /// up...up down...down
    pub fn reference(&self) -> u64 {
        (1u64 << self.n_up()) - 1
    }
}

pub fn is_up(s: u64, site: usize) -> bool {
    s >> (site - 1) & 1 == 1
}

/// Renders a basis state as a string of arrows, site 1 first.
pub fn state_label(s: u64, n_sites: usize) -> String {
    (1..=n_sites).map(|i| if is_up(s, i) { '↑' } else { '↓' }).collect()
}

pub fn parse_state(label: &str) -> Result<u64> {
    let mut s = 0u64;
    for (i, c) in label.chars().enumerate() {
        match c {
            '↑' | 'u' | 'U' | '1' => s |= 1 << i,
            '↓' | 'd' | 'D' | '0' => {}
            _ => return Err(Error::Parse(format!("bad spin {c:?} in {label:?}"))),
        }
    }
    Ok(s)
}

/// Twist angle and magnetisation of the groundstate sector for a case.
pub fn case_data(n_sites: usize, mu: Mu) -> Result<(f64, i32)> {
    match (n_sites % 2, mu) {
        (1, Mu::Plus) => Ok((0.0, 1)),
        (1, Mu::Minus) => Ok((0.0, -1)),
        (0, Mu::Zero) if n_sites >= 2 => Ok((-PI / 3.0, 0)),
        _ => Err(Error::InvalidCase(format!("N = {n_sites} with mu = {mu}"))),
    }
}

pub fn build_hamiltonian(sector: &Sector, delta: f64, phi: f64) -> DMatrix<C64> {
    let n = sector.n_sites;
    let dim = sector.dim();
    let mut h = DMatrix::<C64>::zeros(dim, dim);
    for (col, &s) in sector.states.iter().enumerate() {
        for i in 1..=n {
            let j = if i == n { 1 } else { i + 1 };
            if n == 1 {
                break;
            }
            let (ui, uj) = (is_up(s, i), is_up(s, j));
            let zz = if ui == uj { 1.0 } else { -1.0 };
            h[(col, col)] += C64::new(-0.5 * delta * zz, 0.0);
            if ui != uj {
                let t = s ^ (1 << (i - 1)) ^ (1 << (j - 1));
                // across the boundary the hop picks up exp(-+2 i phi)
                let phase = if i == n {
                    if ui {
                        C64::from_polar(1.0, 2.0 * phi)
                    } else {
                        C64::from_polar(1.0, -2.0 * phi)
                    }
                } else {
                    C64::new(1.0, 0.0)
                };
                let row = sector.index_of(t).expect("hop stays in sector");
                h[(row, col)] -= phase;
            }
        }
    }
    h
}

#[derive(Clone, Debug)]
pub struct GroundState {
    pub sector: Sector,
    pub energy: f64,
    pub gap: f64,
    /// Components in sector order, reference component equal to 1.
    pub vector: Vec<C64>,
}

impl GroundState {
    pub fn component(&self, s: u64) -> C64 {
        self.sector.index_of(s).map(|i| self.vector[i]).unwrap_or_default()
    }

    pub fn overlap(&self, m: usize) -> C64 {
        let mask = (1u64 << m) - 1;
        self.sector.states.iter().zip(&self.vector).filter(|(s, _)| *s & mask == mask).map(|(_, c)| c).sum()
    }
}

fn lowest_eigenpair(h: &DMatrix<C64>) -> (f64, f64, Vec<C64>) {
    let dim = h.nrows();
    let real = h.iter().all(|c| c.im == 0.0);
    let (vals, vecs): (Vec<f64>, DMatrix<C64>) = if real {
        let hr = h.map(|c| c.re);
        let e = hr.symmetric_eigen();
        (e.eigenvalues.iter().copied().collect(), e.eigenvectors.map(|x| C64::new(x, 0.0)))
    } else {
        let e = h.clone().symmetric_eigen();
        (e.eigenvalues.iter().copied().collect(), e.eigenvectors)
    };
    let mut order: Vec<usize> = (0..dim).collect();
    order.sort_by(|&a, &b| vals[a].total_cmp(&vals[b]));
    let gap = if dim > 1 { vals[order[1]] - vals[order[0]] } else { f64::INFINITY };
    let v = vecs.column(order[0]).iter().copied().collect();
    (vals[order[0]], gap, v)
}

pub fn groundstate(n_sites: usize, mu: Mu) -> Result<GroundState> {
    let (phi, mag) = case_data(n_sites, mu)?;
    let sector = Sector::new(n_sites, mag)?;
    let h = build_hamiltonian(&sector, DELTA, phi);
    let (energy, gap, v) = lowest_eigenpair(&h);
    let expected = -0.75 * n_sites as f64;
    if (energy - expected).abs() > 1e-8 * (1.0 + n_sites as f64) {
        return Err(Error::WrongEigenvalue { found: energy, expected });
    }
    if gap < 1e-8 {
        return Err(Error::Degenerate(gap));
    }
    let r = v[sector.index_of(sector.reference()).unwrap()];
    let scale = v.iter().map(|c| c.norm()).fold(0.0, f64::max);
    if r.norm() < 1e-8 * scale {
        return Err(Error::ZeroReference);
    }
    let vector = v.iter().map(|c| c / r).collect();
    Ok(GroundState { sector, energy, gap, vector })
}

pub fn overlap_oracle(n_sites: usize, m: usize, mu: Mu) -> Result<C64> {
    if m > n_sites {
        return Err(Error::Domain(format!("m = {m} exceeds N = {n_sites}")));
    }
    Ok(groundstate(n_sites, mu)?.overlap(m))
}

pub fn befp_oracle(n_sites: usize, m: usize, mu: Mu) -> Result<C64> {
    let gs = groundstate(n_sites, mu)?;
    let d = gs.overlap(0);
    if d.norm() < 1e-12 {
        return Err(Error::DivisionByZero);
    }
    if m > n_sites {
        return Err(Error::Domain(format!("m = {m} exceeds N = {n_sites}")));
    }
    Ok(gs.overlap(m) / d)
}

pub fn q_complex() -> C64 {
    C64::from_polar(1.0, 2.0 * PI / 3.0)
}

/// R(z) in the basis up-up, up-down, down-up, down-down (auxiliary space first).
pub fn r_matrix(z: C64) -> Result<[[C64; 4]; 4]> {
    let q = q_complex();
    let qi = q.inv();
    let den = q - qi * z;
    if den.norm() < 1e-14 {
        return Err(Error::NonGeneric(format!("R-matrix pole at z = {z}")));
    }
    let a = (q * z - qi) / den;
    let b = (z - 1.0) / den;
    let c1 = (q - qi) * z / den;
    let c2 = (q - qi) / den;
    let o = C64::new(0.0, 0.0);
    Ok([[a, o, o, o], [o, b, c1, o], [o, c2, b, o], [o, o, o, a]])
}

/// Permutation times R.
pub fn rcheck_matrix(z: C64) -> Result<[[C64; 4]; 4]> {
    let r = r_matrix(z)?;
    Ok([r[0], r[2], r[1], r[3]])
}

/// Sector block of tr_0(exp(i phi sigma^z_0) R_{0N} ... R_{01}). With `inhom`
/// the factor at site i is R(z_i / z), otherwise R(z).
pub fn build_transfer_matrix(sector: &Sector, phi: f64, z: C64, inhom: Option<&[C64]>) -> Result<DMatrix<C64>> {
    let n = sector.n_sites;
    let mut rs = Vec::with_capacity(n);
    for i in 0..n {
        let arg = match inhom {
            Some(zs) => zs[i] / z,
            None => z,
        };
        rs.push(r_matrix(arg)?);
    }
    let dim = sector.dim();
    let mut t = DMatrix::<C64>::zeros(dim, dim);
    let twist = [C64::from_polar(1.0, phi), C64::from_polar(1.0, -phi)];
    for (col, &beta) in sector.states.iter().enumerate() {
        // aux index 0 = up, 1 = down
        for a0 in 0..2usize {
            let mut paths: HashMap<(usize, u64), C64> = HashMap::new();
            paths.insert((a0, 0), C64::new(1.0, 0.0));
            for site in 1..=n {
                let s_in = if is_up(beta, site) { 0 } else { 1 };
                let r = &rs[site - 1];
                let mut next: HashMap<(usize, u64), C64> = HashMap::new();
                for (&(a, out), &amp) in &paths {
                    let c = 2 * a + s_in;
                    for row in 0..4 {
                        let w = r[row][c];
                        if w.norm() == 0.0 {
                            continue;
                        }
                        let (a2, s2) = (row / 2, row % 2);
                        let out2 = if s2 == 0 { out | 1 << (site - 1) } else { out };
                        *next.entry((a2, out2)).or_default() += amp * w;
                    }
                }
                paths = next;
            }
            for ((a, out), amp) in paths {
                if a != a0 {
                    continue;
                }
                if let Some(row) = sector.index_of(out) {
                    t[(row, col)] += amp * twist[a];
                }
            }
        }
    }
    Ok(t)
}

#[derive(Clone, Debug)]
pub struct CylinderRatio {
    pub value: C64,
    /// |lambda_2 / lambda_1| for the sector's transfer matrix.
    pub gap_ratio: f64,
    pub warning: Option<String>,
}

/// Fixed/free partition function ratio on a cylinder of height L. The
/// fixed top row is propagated down by T^L, so the limit is built from the
/// right eigenvector of T.
pub fn cylinder_ratio(n_sites: usize, mu: Mu, l: usize, m: usize, top: u64, z: C64) -> Result<CylinderRatio> {
    let (phi, mag) = case_data(n_sites, mu)?;
    let sector = Sector::new(n_sites, mag)?;
    let top_idx = sector
        .index_of(top)
        .ok_or_else(|| Error::InvalidCase("top configuration is outside the groundstate sector".into()))?;
    let t = build_transfer_matrix(&sector, phi, z, None)?;
    let mut v = DVector::<C64>::zeros(sector.dim());
    v[top_idx] = C64::new(1.0, 0.0);
    for _ in 0..l {
        v = &t * &v;
        let s = v.iter().map(|c| c.norm()).fold(0.0, f64::max);
        if s > 0.0 {
            v /= C64::new(s, 0.0);
        }
    }
    let mask = (1u64 << m) - 1;
    let mut num = C64::new(0.0, 0.0);
    let mut den = C64::new(0.0, 0.0);
    for (i, &s) in sector.states.iter().enumerate() {
        den += v[i];
        if s & mask == mask {
            num += v[i];
        }
    }
    let mut ev: Vec<f64> =
        t.clone().schur().eigenvalues().map(|e| e.iter().map(|c| c.norm()).collect()).unwrap_or_default();
    ev.sort_by(|a, b| b.total_cmp(a));
    let gap_ratio = if ev.len() > 1 { ev[1] / ev[0] } else { 0.0 };
    let warning = if gap_ratio.powi(l as i32) > 1e-6 {
        Some(format!("leading eigenvalue poorly separated: |l2/l1| = {gap_ratio:.6}, not converged at L = {l}"))
    } else if den.norm() < 1e-12 {
        Some("free partition function vanishes".to_string())
    } else {
        None
    };
    Ok(CylinderRatio { value: num / den, gap_ratio, warning })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> C64 {
        C64::new(re, 0.0)
    }

    fn max_abs(m: &DMatrix<C64>) -> f64 {
        m.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    #[test]
    fn sector_sizes() {
        assert_eq!(Sector::new(13, 1).unwrap().dim(), 1716);
        assert!(Sector::new(3, 0).is_err());
        assert_eq!(Sector::new(4, 0).unwrap().reference(), 0b0011);
    }

    #[test]
    fn lowest_eigenvalues() {
        let s = Sector::new(3, 1).unwrap();
        let (e, _, _) = lowest_eigenpair(&build_hamiltonian(&s, DELTA, 0.0));
        assert!((e + 2.25).abs() < 1e-12);
        let s = Sector::new(2, 0).unwrap();
        let (e, _, _) = lowest_eigenpair(&build_hamiltonian(&s, DELTA, -PI / 3.0));
        assert!((e + 1.5).abs() < 1e-12);
        let s = Sector::new(4, 0).unwrap();
        let (e, _, _) = lowest_eigenpair(&build_hamiltonian(&s, DELTA, -PI / 3.0));
        assert!((e + 3.0).abs() < 1e-12);
    }

    #[test]
    fn hermitian() {
        for n in 2..=8 {
            for mag in [0, 1, 2] {
                if let Ok(s) = Sector::new(n, mag) {
                    let h = build_hamiltonian(&s, DELTA, 0.37);
                    assert!(max_abs(&(&h - h.adjoint())) < 1e-12);
                }
            }
        }
    }

    #[test]
    fn small_groundstates() {
        let g = groundstate(3, Mu::Plus).unwrap();
        for s in [0b011u64, 0b101, 0b110] {
            assert!((g.component(s) - c(1.0)).norm() < 1e-10);
        }
        let g = groundstate(2, Mu::Zero).unwrap();
        assert!((g.component(0b01) - c(1.0)).norm() < 1e-10);
        assert!((g.component(0b10) + q_complex().inv()).norm() < 1e-10);
        let g = groundstate(3, Mu::Minus).unwrap();
        assert!((g.component(0b001) - c(1.0)).norm() < 1e-10);
        assert!((overlap_oracle(3, 1, Mu::Minus).unwrap() - c(1.0)).norm() < 1e-10);
        assert!((overlap_oracle(2, 0, Mu::Zero).unwrap() - (c(1.0) - q_complex().inv())).norm() < 1e-10);
        assert!((befp_oracle(3, 1, Mu::Plus).unwrap() - c(2.0 / 3.0)).norm() < 1e-10);
        assert!((befp_oracle(3, 1, Mu::Minus).unwrap() - c(1.0 / 3.0)).norm() < 1e-10);
        assert!(groundstate(4, Mu::Plus).is_err());
    }

    fn shift_matrix(s: &Sector, phi: f64) -> DMatrix<C64> {
        // tau^-1 exp(i phi sigma^z_N): (tau^-1 v)_{a1..aN} = v_{aN a1 .. a(N-1)}
        let n = s.n_sites;
        let mut m = DMatrix::<C64>::zeros(s.dim(), s.dim());
        for (col, &st) in s.states.iter().enumerate() {
            let ph = if is_up(st, n) { C64::from_polar(1.0, phi) } else { C64::from_polar(1.0, -phi) };
            // tau^-1 moves the spin at site N to site 1
            let top = st >> (n - 1) & 1;
            let out = ((st << 1) & ((1 << n) - 1)) | top;
            m[(s.index_of(out).unwrap(), col)] = ph;
        }
        m
    }

    #[test]
    fn transfer_at_one_is_shift() {
        let s = Sector::new(3, 1).unwrap();
        let t = build_transfer_matrix(&s, 0.0, c(1.0), None).unwrap();
        assert!(max_abs(&(&t - shift_matrix(&s, 0.0))) < 1e-12);
        let s = Sector::new(2, 0).unwrap();
        let t = build_transfer_matrix(&s, -PI / 3.0, c(1.0), None).unwrap();
        assert!(max_abs(&(&t - shift_matrix(&s, -PI / 3.0))) < 1e-12);
    }

    #[test]
    fn transfer_matrices_commute() {
        let s = Sector::new(4, 0).unwrap();
        for phi in [0.0, -PI / 3.0, 0.3] {
            let t1 = build_transfer_matrix(&s, phi, C64::new(0.7, 0.2), None).unwrap();
            let t2 = build_transfer_matrix(&s, phi, C64::new(1.3, -0.4), None).unwrap();
            assert!(max_abs(&(&t1 * &t2 - &t2 * &t1)) < 1e-10);
            let h = build_hamiltonian(&s, DELTA, phi);
            assert!(max_abs(&(&t1 * &h - &h * &t1)) < 1e-10);
        }
    }

    #[test]
    fn log_derivative_gives_hamiltonian() {
        let q = q_complex();
        for n in 2..=6 {
            for mag in [n as i32 % 2, n as i32 % 2 + 2] {
                let s = Sector::new(n, mag).unwrap();
                for phi in [0.0, -PI / 3.0] {
                    let eps = 1e-5;
                    let tp = build_transfer_matrix(&s, phi, c(1.0 + eps), None).unwrap();
                    let tm = build_transfer_matrix(&s, phi, c(1.0 - eps), None).unwrap();
                    let t1 = build_transfer_matrix(&s, phi, c(1.0), None).unwrap();
                    let d = (tp - tm) / C64::new(2.0 * eps, 0.0);
                    let lhs = t1.try_inverse().unwrap() * d;
                    let mut rhs = build_hamiltonian(&s, DELTA, phi);
                    for i in 0..s.dim() {
                        rhs[(i, i)] -= c(1.5 * n as f64 * DELTA);
                    }
                    let rhs = rhs * (-1.0 / (q - q.inv()));
                    assert!(max_abs(&(lhs - rhs)) < 1e-6, "N = {n}");
                }
            }
        }
    }

    #[test]
    fn groundstate_is_shift_invariant() {
        for (n, mu) in [(3, Mu::Plus), (5, Mu::Minus), (4, Mu::Zero), (6, Mu::Zero), (7, Mu::Plus)] {
            let g = groundstate(n, mu).unwrap();
            let (phi, _) = case_data(n, mu).unwrap();
            let t = build_transfer_matrix(&g.sector, phi, c(1.0), None).unwrap();
            let v = nalgebra::DVector::from_vec(g.vector.clone());
            assert!(((&t * &v) - &v).norm() < 1e-10 * v.norm());
        }
    }

    #[test]
    fn cylinder_small() {
        let z = C64::from_polar(1.0, 0.9);
        let r = cylinder_ratio(3, Mu::Plus, 60, 1, 0b011, z).unwrap();
        assert!((r.value - c(2.0 / 3.0)).norm() < 1e-6, "{:?}", r);
        assert!(r.warning.is_none());
        let r = cylinder_ratio(4, Mu::Zero, 80, 2, 0b0101, z).unwrap();
        assert!((r.value - befp_oracle(4, 2, Mu::Zero).unwrap()).norm() < 1e-6, "{:?}", r);
        // real spectral parameter: the top eigenvalues nearly coincide in modulus
        let r = cylinder_ratio(3, Mu::Plus, 80, 1, 0b011, c(0.9)).unwrap();
        assert!(r.gap_ratio > 0.99 && r.warning.is_some());
        let r = cylinder_ratio(3, Mu::Plus, 5, 0, 0b011, c(0.9)).unwrap();
        assert!((r.value - c(1.0)).norm() < 1e-12);
    }
}
