//! Equal-weight quadrature ("interval t-designs") on `[-1, 1]`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

const TARGET_RESIDUAL: f64 = 1e-13;
const ACCEPT_RESIDUAL: f64 = 1e-10;
const MAX_ITER: usize = 200;
const RESTARTS: usize = 64;
const MIN_GAP: f64 = 1e-6;

/// `n` distinct nodes whose equal-weight average reproduces the normalized
/// moments of `w_i(x) = (1 - x^2)^{(2 - i)/2}` up to degree `strength`.
#[derive(Debug, Clone, PartialEq)]
pub struct IntervalDesign {
    /// Ascending nodes in `[-1, 1]`.
    pub nodes: Vec<f64>,
    /// `1` for the semicircle weight `sqrt(1 - x^2)`, `2` for the constant weight.
    pub weight_exponent: u8,
    pub strength: u32,
}

impl IntervalDesign {
    /// Largest moment mismatch over degrees `1..=strength`.
    pub fn moment_residual(&self) -> f64 {
        residuals(&self.nodes, &target_moments(self.weight_exponent, self.strength))
            .iter()
            .fold(0.0, |m, r| m.max(r.abs()))
    }
}

/// Normalized moment `E[x^r]` under `(1 - x^2)^a`:
/// zero for odd `r`, `(1/2)_k / (a + 3/2)_k` for `r = 2k`.
pub fn weight_moment(weight_exponent: u8, r: u32) -> f64 {
    if r % 2 == 1 {
        return 0.0;
    }
    let a = (2.0 - weight_exponent as f64) / 2.0;
    (0..r / 2)
        .map(|j| (0.5 + j as f64) / (a + 1.5 + j as f64))
        .product()
}

fn target_moments(weight_exponent: u8, t: u32) -> Vec<f64> {
    (1..=t).map(|r| weight_moment(weight_exponent, r)).collect()
}

fn residuals(x: &[f64], target: &[f64]) -> Vec<f64> {
    let n = x.len() as f64;
    target
        .iter()
        .enumerate()
        .map(|(i, m)| x.iter().map(|v| v.powi(i as i32 + 1)).sum::<f64>() / n - m)
        .collect()
}

fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

/// Solves the small dense system `a y = b` by Gaussian elimination with partial pivoting.
fn solve(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Option<Vec<f64>> {
    let n = b.len();
    for c in 0..n {
        let piv = (c..n).max_by(|&i, &j| a[i][c].abs().total_cmp(&a[j][c].abs()))?;
        if a[piv][c].abs() < 1e-300 {
            return None;
        }
        a.swap(c, piv);
        b.swap(c, piv);
        for r in c + 1..n {
            let f = a[r][c] / a[c][c];
            for k in c..n {
                a[r][k] -= f * a[c][k];
            }
            b[r] -= f * b[c];
        }
    }
    let mut y = vec![0.0; n];
    for c in (0..n).rev() {
        let s: f64 = (c + 1..n).map(|k| a[c][k] * y[k]).sum();
        y[c] = (b[c] - s) / a[c][c];
    }
    Some(y)
}

/// Damped minimum-norm Newton iteration from `x`. Returns the final residual norm.
fn newton(x: &mut [f64], target: &[f64]) -> f64 {
    let n = x.len();
    let t = target.len();
    let mut f = residuals(x, target);
    let mut fnorm = norm(&f);
    for _ in 0..MAX_ITER {
        if fnorm <= TARGET_RESIDUAL {
            break;
        }
        // J[r][j] = (r+1) x_j^r / n
        let jac: Vec<Vec<f64>> = (0..t)
            .map(|r| x.iter().map(|v| (r + 1) as f64 * v.powi(r as i32) / n as f64).collect())
            .collect();
        let jjt: Vec<Vec<f64>> = (0..t)
            .map(|a| (0..t).map(|b| (0..n).map(|j| jac[a][j] * jac[b][j]).sum()).collect())
            .collect();
        let Some(y) = solve(jjt, f.clone()) else { break };
        let step: Vec<f64> = (0..n).map(|j| (0..t).map(|r| jac[r][j] * y[r]).sum()).collect();
        let mut damping = 1.0;
        let mut improved = false;
        while damping > 1e-6 {
            let trial: Vec<f64> = x
                .iter()
                .zip(&step)
                .map(|(v, s)| (v - damping * s).clamp(-1.0, 1.0))
                .collect();
            let ft = residuals(&trial, target);
            let nt = norm(&ft);
            if nt < fnorm {
                x.copy_from_slice(&trial);
                f = ft;
                fnorm = nt;
                improved = true;
                break;
            }
            damping *= 0.5;
        }
        if !improved {
            break;
        }
    }
    fnorm
}

fn distinct(x: &[f64]) -> bool {
    let mut s = x.to_vec();
    s.sort_by(f64::total_cmp);
    s.windows(2).all(|w| w[1] - w[0] > MIN_GAP)
}

/// Finds an `n`-node interval `t`-design for weight exponent `i` (1 or 2).
///
/// Starts from symmetric Chebyshev-like nodes so that the odd moments vanish
/// identically, then falls back to seeded random restarts.
pub fn interval_t_design(weight_exponent: u8, t: u32, n: usize) -> Result<IntervalDesign> {
    if !matches!(weight_exponent, 1 | 2) {
        return Err(Error::Domain(format!("weight exponent must be 1 or 2, got {weight_exponent}")));
    }
    if n == 0 {
        return Err(Error::Domain("an interval design needs at least one node".into()));
    }
    let target = target_moments(weight_exponent, t);
    let mut rng = ChaCha8Rng::seed_from_u64(0x1d_e516);
    let mut best = f64::INFINITY;
    for attempt in 0..=RESTARTS {
        let mut x: Vec<f64> = if attempt == 0 {
            (0..n)
                .map(|j| -(std::f64::consts::PI * (2 * j + 1) as f64 / (2 * n) as f64).cos())
                .collect()
        } else {
            (0..n).map(|_| rng.random_range(-0.95..0.95)).collect()
        };
        let r = newton(&mut x, &target);
        let max_res = residuals(&x, &target).iter().fold(0.0_f64, |m, v| m.max(v.abs()));
        best = best.min(max_res);
        if r.is_finite() && max_res <= ACCEPT_RESIDUAL && distinct(&x) {
            x.sort_by(f64::total_cmp);
            return Ok(IntervalDesign {
                nodes: x,
                weight_exponent,
                strength: t,
            });
        }
    }
    Err(Error::ConstructionFailed {
        attempts: RESTARTS + 1,
        residual: best,
    })
}
