//! Rounding approximate designs to exact designs of a given sample size.

use crate::designs::Design;
use crate::error::{Error, Result};

/// Integer replication counts for the support points of a design.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Apportionment {
    pub counts: Vec<u64>,
    pub n: u64,
}

/// Efficient design apportionment.
///
/// Starts from `ceil((n - m/2) w_i)` and then moves one unit at a time:
/// while the total is short, increment an index minimizing `n_i / w_i`;
/// while it is over, decrement an index maximizing `(n_i - 1) / w_i`.
/// Ties go to the lowest index.
pub fn efficient_round(weights: &[f64], n: u64) -> Result<Apportionment> {
    let m = weights.len();
    if m == 0 {
        return Err(Error::Domain("no weights to round".into()));
    }
    if let Some(w) = weights.iter().find(|w| !(**w > 0.0) || !w.is_finite()) {
        return Err(Error::Data(format!("weights must be positive, got {w}")));
    }
    if n < m as u64 {
        return Err(Error::Domain(format!(
            "sample size {n} is smaller than the support size {m}"
        )));
    }
    let scale = n as f64 - m as f64 / 2.0;
    let mut counts: Vec<u64> = weights.iter().map(|w| (scale * w).ceil().max(0.0) as u64).collect();
    let mut total: u64 = counts.iter().sum();
    while total < n {
        let j = argbest(weights, |i| counts[i] as f64 / weights[i], |a, b| a < b);
        counts[j] += 1;
        total += 1;
    }
    while total > n {
        let j = argbest(weights, |i| (counts[i] as f64 - 1.0) / weights[i], |a, b| a > b);
        counts[j] -= 1;
        total -= 1;
    }
    Ok(Apportionment { counts, n })
}

fn argbest(w: &[f64], key: impl Fn(usize) -> f64, better: impl Fn(f64, f64) -> bool) -> usize {
    (1..w.len()).fold(0, |best, i| if better(key(i), key(best)) { i } else { best })
}

/// Rounds a design to sample size `n` and returns the exact design (weights `n_i / n`)
/// together with its counts.
pub fn round_design(d: &Design, n: u64) -> Result<(Design, Apportionment)> {
    let a = efficient_round(d.weights(), n)?;
    let weights: Vec<f64> = a.counts.iter().map(|&c| c as f64 / n as f64).collect();
    let exact = Design::new(d.manifold(), d.points().to_vec(), weights)?;
    Ok((exact, a))
}
