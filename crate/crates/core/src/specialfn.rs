//! Orthogonal polynomials and factorial helpers behind the eigenfunction bases.
//!
//! Every polynomial is evaluated by its three-term recurrence.

use crate::error::{Error, Result};

fn check_argument(x: f64) -> Result<()> {
    if !(-1.0 - 1e-12..=1.0 + 1e-12).contains(&x) {
        return Err(Error::Domain(format!("argument {x} outside [-1, 1]")));
    }
    Ok(())
}

/// Jacobi polynomial `P_k^{(a,b)}(x)`.
pub fn jacobi(k: u32, a: f64, b: f64, x: f64) -> Result<f64> {
    if a <= -1.0 || b <= -1.0 {
        return Err(Error::Domain(format!("Jacobi parameters must exceed -1, got a={a}, b={b}")));
    }
    check_argument(x)?;
    Ok(jacobi_unchecked(k, a, b, x))
}

pub(crate) fn jacobi_unchecked(k: u32, a: f64, b: f64, x: f64) -> f64 {
    if k == 0 {
        return 1.0;
    }
    let mut prev = 1.0;
    let mut cur = 0.5 * (a - b + (a + b + 2.0) * x);
    for n in 2..=k {
        let n = n as f64;
        let s = 2.0 * n + a + b;
        let c1 = 2.0 * n * (n + a + b) * (s - 2.0);
        let c2 = (s - 1.0) * (s * (s - 2.0) * x + a * a - b * b);
        let c3 = 2.0 * (n + a - 1.0) * (n + b - 1.0) * s;
        let next = (c2 * cur - c3 * prev) / c1;
        prev = cur;
        cur = next;
    }
    cur
}

/// Gegenbauer polynomial `C_n^{lam}(x)`.
pub fn gegenbauer(n: u32, lam: f64, x: f64) -> Result<f64> {
    if lam <= -0.5 {
        return Err(Error::Domain(format!("Gegenbauer parameter must exceed -1/2, got {lam}")));
    }
    check_argument(x)?;
    Ok(gegenbauer_unchecked(n, lam, x))
}

pub(crate) fn gegenbauer_unchecked(n: u32, lam: f64, x: f64) -> f64 {
    if n == 0 {
        return 1.0;
    }
    let mut prev = 1.0;
    let mut cur = 2.0 * lam * x;
    for k in 2..=n {
        let k = k as f64;
        let next = (2.0 * x * (k + lam - 1.0) * cur - (k + 2.0 * lam - 2.0) * prev) / k;
        prev = cur;
        cur = next;
    }
    cur
}

/// Associated Legendre function `P_l^m(x)` for `0 <= m <= l`, including the
/// Condon-Shortley phase `(-1)^m`.
pub fn assoc_legendre(l: u32, m: u32, x: f64) -> Result<f64> {
    if m > l {
        return Err(Error::Domain(format!("order m={m} exceeds degree l={l}")));
    }
    check_argument(x)?;
    Ok(assoc_legendre_unchecked(l, m, x.clamp(-1.0, 1.0)))
}

pub(crate) fn assoc_legendre_unchecked(l: u32, m: u32, x: f64) -> f64 {
    // P_m^m = (-1)^m (2m-1)!! (1-x^2)^{m/2}
    let somx2 = ((1.0 - x) * (1.0 + x)).max(0.0).sqrt();
    let mut pmm = 1.0;
    let mut fact = 1.0;
    for _ in 0..m {
        pmm *= -fact * somx2;
        fact += 2.0;
    }
    if l == m {
        return pmm;
    }
    let mut pmmp1 = x * (2 * m + 1) as f64 * pmm;
    if l == m + 1 {
        return pmmp1;
    }
    let mut pll = 0.0;
    for ll in m + 2..=l {
        pll = (x * (2 * ll - 1) as f64 * pmmp1 - (ll + m - 1) as f64 * pmm) / (ll - m) as f64;
        pmm = pmmp1;
        pmmp1 = pll;
    }
    pll
}

/// `ln(n!)`.
pub fn ln_factorial(n: u32) -> f64 {
    (2..=n).map(|k| (k as f64).ln()).sum()
}

/// Binomial coefficient as a float, via log-factorials.
pub fn binomial(n: u32, k: u32) -> f64 {
    if k > n {
        return 0.0;
    }
    (ln_factorial(n) - ln_factorial(k) - ln_factorial(n - k)).exp()
}

/// Exact integer binomial coefficient.
pub fn binomial_u64(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u64, |acc, i| acc * (n - i) / (i + 1))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    /// Jacobi polynomial from the explicit finite sum
    /// `sum_s C(k+a, k-s) C(k+b, s) ((x-1)/2)^s ((x+1)/2)^(k-s)`, integer a, b.
    fn jacobi_explicit(k: u32, a: u32, b: u32, x: f64) -> f64 {
        (0..=k)
            .map(|s| {
                binomial_u64((k + a) as u64, (k - s) as u64) as f64
                    * binomial_u64((k + b) as u64, s as u64) as f64
                    * ((x - 1.0) / 2.0).powi(s as i32)
                    * ((x + 1.0) / 2.0).powi((k - s) as i32)
            })
            .sum()
    }

    /// Composite Gauss-Legendre (4 nodes per panel, 64 panels).
    fn quad(f: impl Fn(f64) -> f64) -> f64 {
        let nodes = [
            (-0.861_136_311_594_052_6, 0.347_854_845_137_453_9),
            (-0.339_981_043_584_856_3, 0.652_145_154_862_546_1),
            (0.339_981_043_584_856_3, 0.652_145_154_862_546_1),
            (0.861_136_311_594_052_6, 0.347_854_845_137_453_9),
        ];
        let panels = 64;
        let h = 2.0 / panels as f64;
        (0..panels)
            .map(|p| {
                let mid = -1.0 + h * (p as f64 + 0.5);
                nodes.iter().map(|(t, w)| w * f(mid + 0.5 * h * t)).sum::<f64>() * 0.5 * h
            })
            .sum()
    }

    #[test]
    fn jacobi_examples() {
        assert_eq!(jacobi(0, 0.3, 1.7, -0.2).unwrap(), 1.0);
        assert!((jacobi(1, 0.0, 0.0, 0.5).unwrap() - 0.5).abs() < 1e-15);
        assert!((jacobi(2, 1.0, 1.0, 1.0).unwrap() - 3.0).abs() < 1e-13);
        assert!(jacobi(1, -1.0, 0.0, 0.0).is_err());
        assert!(jacobi(1, 0.0, 0.0, 1.5).is_err());
    }

    #[test]
    fn jacobi_matches_explicit_sum() {
        for k in 0..=6 {
            for a in 0..=3 {
                for b in 0..=3 {
                    for i in 0..=10 {
                        let x = -1.0 + 0.2 * i as f64;
                        let r = jacobi(k, a as f64, b as f64, x).unwrap();
                        let e = jacobi_explicit(k, a, b, x);
                        assert!((r - e).abs() < 1e-10 * (1.0 + e.abs()), "k={k} a={a} b={b} x={x}");
                    }
                }
            }
        }
    }

    #[test]
    fn jacobi_orthogonality_by_quadrature() {
        for &(a, b) in &[(0.0, 0.0), (1.0, 2.0), (2.0, 0.0)] {
            for j in 0..=8 {
                for k in 0..j {
                    let v = quad(|x| {
                        jacobi_unchecked(j, a, b, x)
                            * jacobi_unchecked(k, a, b, x)
                            * (1.0 - x).powf(a)
                            * (1.0 + x).powf(b)
                    });
                    assert!(v.abs() < 1e-8, "j={j} k={k} a={a} b={b}: {v}");
                }
            }
        }
    }

    #[test]
    fn gegenbauer_examples() {
        assert_eq!(gegenbauer(0, 1.0, 0.3).unwrap(), 1.0);
        assert!((gegenbauer(1, 1.0, 0.3).unwrap() - 0.6).abs() < 1e-15);
        assert!(gegenbauer(2, 1.0, 0.5).unwrap().abs() < 1e-15);
        assert!(gegenbauer(2, -0.5, 0.5).is_err());
    }

    #[test]
    fn gegenbauer_is_scaled_jacobi() {
        // C_n^lam = (2lam)_n / (lam+1/2)_n * P_n^{(lam-1/2, lam-1/2)}
        for &lam in &[0.5, 1.0, 1.5, 3.0] {
            for n in 0..=6 {
                let rising = |z: f64| (0..n).map(|i| z + i as f64).product::<f64>();
                let ratio = rising(2.0 * lam) / rising(lam + 0.5);
                for i in 0..=8 {
                    let x = -1.0 + 0.25 * i as f64;
                    let g = gegenbauer(n, lam, x).unwrap();
                    let j = ratio * jacobi(n, lam - 0.5, lam - 0.5, x).unwrap();
                    assert!((g - j).abs() < 1e-10 * (1.0 + g.abs()));
                }
            }
        }
    }

    #[test]
    fn assoc_legendre_examples() {
        assert_eq!(assoc_legendre(0, 0, 0.7).unwrap(), 1.0);
        assert!((assoc_legendre(1, 0, 0.4).unwrap() - 0.4).abs() < 1e-15);
        assert!(assoc_legendre(2, 1, 0.0).unwrap().abs() < 1e-15);
        // P_2^1(x) = -3 x sqrt(1 - x^2)
        let x: f64 = 0.6;
        assert!((assoc_legendre(2, 1, x).unwrap() + 3.0 * x * (1.0 - x * x).sqrt()).abs() < 1e-14);
        assert!(assoc_legendre(1, 2, 0.0).is_err());
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial_u64(9, 3), 84);
        assert!((binomial(10, 4) - 210.0).abs() < 1e-9);
        assert_eq!(binomial(3, 5), 0.0);
    }

    proptest! {
        #[test]
        fn legendre_zero_order_is_jacobi_zero(l in 0u32..12, x in -1.0f64..1.0) {
            let p = assoc_legendre(l, 0, x).unwrap();
            let j = jacobi(l, 0.0, 0.0, x).unwrap();
            prop_assert!((p - j).abs() < 1e-10);
        }
    }
}
