use nalgebra::{DMatrix, DVector};

use super::barnes::{log_abs_overlap_barnes, log_gamma, LOG_GLAISHER};
use crate::error::{Error, Result};
use crate::Mu;

/// Coefficients of the large-n scaling expansion of log|C| at fixed x = m/n,
/// and of the large-m expansion of log|lim BEFP|.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AsymptoticCoeffs {
    pub mu: Mu,
    pub x: f64,
    pub f_minus2: f64,
    pub f_minus1: f64,
    pub f_log: f64,
    pub f_0: f64,
    pub g_minus2: f64,
    pub g_minus1: f64,
    pub g_log: f64,
    pub g_0: f64,
    pub tau1: i32,
    pub tau2: i32,
}

pub fn taus(mu: Mu) -> (i32, i32) {
    match mu {
        Mu::Plus => (1, 1),
        Mu::Minus => (1, -1),
        Mu::Zero => (-1, -1),
    }
}

impl AsymptoticCoeffs {
    pub fn new(mu: Mu, x: f64) -> Result<Self> {
        if !(x > 0.0 && x < 1.0) {
            return Err(Error::Domain(format!("x must lie in (0, 1), got {x}")));
        }
        let (l2, l3) = (2f64.ln(), 3f64.ln());
        let (t1, t2) = taus(mu);
        let (t1f, t2f) = (t1 as f64, t2 as f64);
        let lg = |v: f64| v.ln();
        let f_minus2 = 0.25
            * (6.0 * l3 + x * x * (3.0 * l3 - 4.0 * l2) + (1.0 - x).powi(2) * lg(1.0 - x)
                - (2.0 - x).powi(2) * lg(2.0 - x)
                + (1.0 + x).powi(2) * lg(1.0 + x)
                - (2.0 + x).powi(2) * lg(2.0 + x));
        let f_minus1 = 0.25
            * ((3.0 * t1f + 5.0) * l3 + x * (l3 - 2.0 * l2) + t2f * (1.0 - x) * lg(1.0 - x)
                - t1f * (2.0 - x) * lg(2.0 - x)
                + (t2f + 2.0) * (1.0 + x) * lg(1.0 + x)
                - (t1f + 2.0) * (2.0 + x) * lg(2.0 + x));
        let f_0 = (3.0 + (18.0 * t1f + 15.0) * l3 - 15.0 * l2 - 36.0 * LOG_GLAISHER - 3.0 * lg(1.0 - x)
            + 3.0 * lg(2.0 - x)
            + (1.0 - 6.0 * t1f) * lg(x)
            + (18.0 * t2f + 15.0) * lg(1.0 + x)
            - (18.0 * t1f + 15.0) * lg(2.0 + x))
            / 72.0;
        let lpi = std::f64::consts::PI.ln();
        let lg13 = log_gamma(1.0 / 3.0);
        let (g_log, g_0) = match mu {
            Mu::Plus | Mu::Minus => {
                (-5.0 / 72.0, -l2 / 24.0 + 11.0 * l3 / 72.0 + lpi / 6.0 + 1.0 / 72.0 - LOG_GLAISHER / 6.0 - lg13 / 3.0)
            }
            // log pi enters with weight 1/3 here, not 1/6
            Mu::Zero => (
                7.0 / 72.0,
                -13.0 * l2 / 24.0 + 11.0 * l3 / 72.0 - lpi / 3.0 + 1.0 / 72.0 - LOG_GLAISHER / 6.0 + 2.0 * lg13 / 3.0,
            ),
        };
        Ok(AsymptoticCoeffs {
            mu,
            x,
            f_minus2,
            f_minus1,
            f_log: -1.0 / 24.0,
            f_0,
            g_minus2: 0.75 * (l3 - 2.0 * l2),
            g_minus1: 0.25 * l3 - l2,
            g_log,
            g_0,
            tau1: t1,
            tau2: t2,
        })
    }

    pub fn scaling_value(&self, n: f64) -> f64 {
        n * n * self.f_minus2 + n * self.f_minus1 + n.ln() * self.f_log + self.f_0
    }

    pub fn large_m_value(&self, m: f64) -> f64 {
        m * m * self.g_minus2 + m * self.g_minus1 + m.ln() * self.g_log + self.g_0
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum AsymptoticTarget {
    LogCScaling { x: f64, mu: Mu, n: f64 },
    LogBefpLargeM { m: f64, mu: Mu },
}

impl AsymptoticTarget {
    pub fn evaluate(&self) -> Result<f64> {
        match *self {
            AsymptoticTarget::LogCScaling { x, mu, n } => Ok(AsymptoticCoeffs::new(mu, x)?.scaling_value(n)),
            AsymptoticTarget::LogBefpLargeM { m, mu } => {
                if !(m > 0.0) {
                    return Err(Error::Domain("m must be positive".into()));
                }
                Ok(AsymptoticCoeffs::new(mu, 0.5)?.large_m_value(m))
            }
        }
    }
}

/// Least squares with column scaling, solved by SVD.
pub fn least_squares(rows: &[Vec<f64>], y: &[f64]) -> Result<Vec<f64>> {
    let cols = rows.first().map_or(0, |r| r.len());
    if rows.len() < cols || cols == 0 {
        return Err(Error::Domain("underdetermined fit".into()));
    }
    let mut a = DMatrix::from_fn(rows.len(), cols, |i, j| rows[i][j]);
    let scale: Vec<f64> = (0..cols).map(|j| a.column(j).norm().max(f64::MIN_POSITIVE)).collect();
    for (j, s) in scale.iter().enumerate() {
        a.column_mut(j).scale_mut(1.0 / s);
    }
    let b = DVector::from_column_slice(y);
    let sol = a.svd(true, true).solve(&b, 1e-14).map_err(|e| Error::Domain(e.to_string()))?;
    Ok(sol.iter().zip(&scale).map(|(v, s)| v / s).collect())
}

fn fit_basis(t: f64, corrections: usize) -> Vec<f64> {
    let mut r = vec![t * t, t, t.ln(), 1.0];
    r.extend((1..=corrections).map(|j| t.powi(-(j as i32))));
    r
}

/// Fits {n^2, n, log n, 1} (plus `corrections` inverse powers) to log|C|
/// along m = x n. Returns the four leading coefficients.
pub fn fit_scaling(mu: Mu, x: f64, ns: &[usize], corrections: usize) -> Result<[f64; 4]> {
    let mut rows = Vec::new();
    let mut y = Vec::new();
    for &n in ns {
        let mf = x * n as f64;
        if (mf - mf.round()).abs() > 1e-9 {
            return Err(Error::Domain(format!("x n = {mf} is not an integer")));
        }
        let n_sites = if mu == Mu::Zero { 2 * n } else { 2 * n + 1 };
        y.push(log_abs_overlap_barnes(n_sites, mf.round() as usize, mu)?);
        rows.push(fit_basis(n as f64, corrections));
    }
    let c = least_squares(&rows, &y)?;
    Ok([c[0], c[1], c[2], c[3]])
}

/// log |lim_{N -> oo} BEFP^mu_{N,m}| in floating point, for large m.
pub fn log_befp_limit_abs(m: usize, mu: Mu) -> f64 {
    let mf = m as f64;
    let (l2, l3) = (2f64.ln(), 3f64.ln());
    let log_a: f64 = (0..m).map(|i| log_gamma(3.0 * i as f64 + 2.0) - log_gamma(mf + i as f64 + 1.0)).sum();
    let odd = m % 2 == 1;
    let log_den: f64 = if odd {
        (1..=(m - 1) / 2)
            .map(|i| {
                let i = i as f64;
                (3.0 * i - 1.0).ln() + log_gamma(2.0 * i) + log_gamma(6.0 * i - 2.0)
                    - log_gamma(4.0 * i - 1.0)
                    - log_gamma(4.0 * i)
            })
            .sum()
    } else {
        (1..(m / 2).max(1))
            .map(|i| {
                let i = i as f64;
                (3.0 * i + 1.0).ln() + log_gamma(2.0 * i + 1.0) + log_gamma(6.0 * i + 1.0)
                    - log_gamma(4.0 * i + 1.0)
                    - log_gamma(4.0 * i + 2.0)
            })
            .sum()
    };
    let jsum = |top: i64, f: &dyn Fn(f64) -> f64| -> f64 { (0..=top).map(|j| f(j as f64)).sum() };
    let mi = m as i64;
    let rest = match (mu, odd) {
        (Mu::Plus | Mu::Minus, true) => -(mf * (mf + 1.0) / 2.0) * l2 - ((mf - 1.0) / 2.0) * l3,
        (Mu::Plus | Mu::Minus, false) => {
            -(mf * mf / 2.0) * l2 - (mf / 2.0) * l3 + jsum((mi - 2) / 2, &|j| ((3.0 * j + 1.0) / (6.0 * j + 1.0)).ln())
        }
        (Mu::Zero, true) => {
            -((mf * mf - 1.0) / 2.0) * l2 - (mf / 2.0) * l3
                + jsum((mi - 1) / 2, &|j| ((3.0 * j + 1.0) / (6.0 * j + 1.0)).ln())
        }
        (Mu::Zero, false) => {
            -(mf * (mf + 1.0) / 2.0) * l2 - (mf / 2.0) * l3
                + jsum((mi - 2) / 2, &|j| {
                    ((3.0 * j + 1.0) * (6.0 * j + 5.0) / ((3.0 * j + 2.0) * (6.0 * j + 1.0))).ln()
                })
        }
    };
    let rest = if m == 0 { 0.0 } else { rest };
    log_a - log_den + rest
}

/// Fits {m^2, m, log m, 1} (plus inverse powers) to log|lim BEFP|.
pub fn fit_large_m(mu: Mu, ms: &[usize], corrections: usize) -> Result<[f64; 4]> {
    let rows: Vec<Vec<f64>> = ms.iter().map(|&m| fit_basis(m as f64, corrections)).collect();
    let y: Vec<f64> = ms.iter().map(|&m| log_befp_limit_abs(m, mu)).collect();
    let c = least_squares(&rows, &y)?;
    Ok([c[0], c[1], c[2], c[3]])
}
