//! Dense complex matrices and the Hermitian kernels the design criteria need:
//! eigendecomposition by cyclic Jacobi rotations, Moore-Penrose pseudo-inverse,
//! numerical rank and trace powers.

use std::ops::{Index, IndexMut};

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Relative eigenvalue cutoff shared by rank, pseudo-inverse and feasibility checks.
pub const DEFAULT_RANK_TOL: f64 = 1e-9;

const HERMITIAN_TOL: f64 = 1e-12;
const MAX_SWEEPS: usize = 100;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Row-major dense complex matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct CMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

impl CMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![ZERO; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = ONE;
        }
        m
    }

    pub fn from_vec(rows: usize, cols: usize, data: Vec<Complex64>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::Shape(format!(
                "{} entries for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        Ok(Self { rows, cols, data })
    }

    pub fn from_real_diag(diag: &[f64]) -> Self {
        let mut m = Self::zeros(diag.len(), diag.len());
        for (i, &d) in diag.iter().enumerate() {
            m[(i, i)] = Complex64::new(d, 0.0);
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn as_slice(&self) -> &[Complex64] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[Complex64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        let mut out = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out[(j, i)] = self[(i, j)].conj();
            }
        }
        out
    }

    pub fn matmul(&self, rhs: &CMatrix) -> Result<CMatrix> {
        if self.cols != rhs.rows {
            return Err(Error::Shape(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        let mut out = CMatrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == ZERO {
                    continue;
                }
                let rhs_row = rhs.row(k);
                let out_row = &mut out.data[i * rhs.cols..(i + 1) * rhs.cols];
                for (o, &b) in out_row.iter_mut().zip(rhs_row) {
                    *o += a * b;
                }
            }
        }
        Ok(out)
    }

    pub fn matvec(&self, v: &[Complex64]) -> Result<Vec<Complex64>> {
        if v.len() != self.cols {
            return Err(Error::Shape(format!(
                "vector of length {} against {} columns",
                v.len(),
                self.cols
            )));
        }
        Ok((0..self.rows)
            .map(|i| self.row(i).iter().zip(v).map(|(a, b)| a * b).sum())
            .collect())
    }

    /// `v* A v`, real part; `A` is assumed Hermitian.
    pub fn quadratic_form(&self, v: &[Complex64]) -> Result<f64> {
        let av = self.matvec(v)?;
        Ok(v.iter().zip(&av).map(|(a, b)| (a.conj() * b).re).sum())
    }

    pub fn scale(&self, factor: f64) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|z| z * factor).collect(),
        }
    }

    pub fn sub(&self, rhs: &CMatrix) -> Result<CMatrix> {
        if (self.rows, self.cols) != (rhs.rows, rhs.cols) {
            return Err(Error::Shape("subtraction of differently shaped matrices".into()));
        }
        Ok(Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect(),
        })
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).sum()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Largest entrywise distance to the identity.
    pub fn max_dev_from_identity(&self) -> f64 {
        let mut worst = 0.0_f64;
        for i in 0..self.rows {
            for j in 0..self.cols {
                let target = if i == j { ONE } else { ZERO };
                worst = worst.max((self[(i, j)] - target).norm());
            }
        }
        worst
    }

    /// Largest `|M[i,j] - conj(M[j,i])|`.
    pub fn hermitian_asymmetry(&self) -> f64 {
        let mut worst = 0.0_f64;
        for i in 0..self.rows.min(self.cols) {
            for j in i..self.cols.min(self.rows) {
                worst = worst.max((self[(i, j)] - self[(j, i)].conj()).norm());
            }
        }
        worst
    }

    pub fn is_hermitian(&self) -> bool {
        self.is_square() && self.hermitian_asymmetry() <= HERMITIAN_TOL * (1.0 + self.max_abs())
    }

    /// Principal submatrix on the given (ordered) index set.
    pub fn principal_submatrix(&self, idx: &[usize]) -> CMatrix {
        let mut out = CMatrix::zeros(idx.len(), idx.len());
        for (a, &i) in idx.iter().enumerate() {
            for (b, &j) in idx.iter().enumerate() {
                out[(a, b)] = self[(i, j)];
            }
        }
        out
    }

    /// Columns selected by index.
    pub fn select_columns(&self, idx: &[usize]) -> CMatrix {
        let mut out = CMatrix::zeros(self.rows, idx.len());
        for i in 0..self.rows {
            for (b, &j) in idx.iter().enumerate() {
                out[(i, b)] = self[(i, j)];
            }
        }
        out
    }

    fn check_hermitian(&self) -> Result<()> {
        if !self.is_square() {
            return Err(Error::Shape(format!(
                "expected a square matrix, got {}x{}",
                self.rows, self.cols
            )));
        }
        let asym = self.hermitian_asymmetry();
        if asym > HERMITIAN_TOL * (1.0 + self.max_abs()) {
            return Err(Error::NotHermitian { asymmetry: asym });
        }
        Ok(())
    }
}

impl Index<(usize, usize)> for CMatrix {
    type Output = Complex64;

    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for CMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        &mut self.data[i * self.cols + j]
    }
}

/// Eigendecomposition of a Hermitian matrix, eigenvalues ascending.
#[derive(Debug, Clone)]
pub struct HermitianEig {
    pub eigenvalues: Vec<f64>,
    /// Eigenvectors as columns, in the order of `eigenvalues`.
    pub eigenvectors: CMatrix,
}

impl HermitianEig {
    pub fn max_eigenvalue(&self) -> f64 {
        self.eigenvalues.last().copied().unwrap_or(0.0)
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.eigenvalues.first().copied().unwrap_or(0.0)
    }

    /// `V f(diag) V*`.
    pub fn reconstruct_with(&self, f: impl Fn(f64) -> f64) -> CMatrix {
        let n = self.eigenvalues.len();
        let v = &self.eigenvectors;
        let fk: Vec<f64> = self.eigenvalues.iter().map(|&k| f(k)).collect();
        let mut out = CMatrix::zeros(n, n);
        for i in 0..n {
            for j in i..n {
                let mut acc = ZERO;
                for (k, &w) in fk.iter().enumerate() {
                    if w != 0.0 {
                        acc += v[(i, k)] * v[(j, k)].conj() * w;
                    }
                }
                out[(i, j)] = acc;
                out[(j, i)] = acc.conj();
            }
        }
        out
    }

    pub fn reconstruct(&self) -> CMatrix {
        self.reconstruct_with(|k| k)
    }
}

/// Hermitian eigendecomposition by cyclic complex Jacobi rotations.
///
/// Each rotation first removes the phase of the pivot with a diagonal unitary,
/// then applies a real Givens rotation to the resulting real symmetric 2x2 block.
pub fn herm_eig(m: &CMatrix) -> Result<HermitianEig> {
    m.check_hermitian()?;
    let n = m.rows();
    let mut a = m.clone();
    // symmetrize exactly so round-off asymmetry cannot accumulate
    for i in 0..n {
        a[(i, i)] = Complex64::new(a[(i, i)].re, 0.0);
        for j in i + 1..n {
            let avg = (a[(i, j)] + a[(j, i)].conj()) * 0.5;
            a[(i, j)] = avg;
            a[(j, i)] = avg.conj();
        }
    }
    let mut v = CMatrix::identity(n);
    let scale = a.frobenius_norm().max(f64::MIN_POSITIVE);

    for _sweep in 0..MAX_SWEEPS {
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| a[(i, j)].norm_sqr())
            .sum::<f64>()
            .sqrt();
        if off <= 1e-15 * scale {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[(p, q)];
                let r = apq.norm();
                if r <= 1e-300 || r <= 1e-18 * scale {
                    continue;
                }
                // phase removal: column q times e^{-i theta}, row q times e^{i theta}
                let phase = apq / r;
                let pc = phase.conj();
                for i in 0..n {
                    a[(i, q)] *= pc;
                }
                for j in 0..n {
                    a[(q, j)] *= phase;
                }
                for i in 0..n {
                    v[(i, q)] *= pc;
                }
                let app = a[(p, p)].re;
                let aqq = a[(q, q)].re;
                let tau = (aqq - app) / (2.0 * r);
                let t = if tau >= 0.0 {
                    1.0 / (tau + (1.0 + tau * tau).sqrt())
                } else {
                    -1.0 / (-tau + (1.0 + tau * tau).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                // A <- P^T A P with P_pp = P_qq = c, P_pq = s, P_qp = -s
                for i in 0..n {
                    let aip = a[(i, p)];
                    let aiq = a[(i, q)];
                    a[(i, p)] = aip * c - aiq * s;
                    a[(i, q)] = aip * s + aiq * c;
                }
                for j in 0..n {
                    let apj = a[(p, j)];
                    let aqj = a[(q, j)];
                    a[(p, j)] = apj * c - aqj * s;
                    a[(q, j)] = apj * s + aqj * c;
                }
                a[(p, q)] = ZERO;
                a[(q, p)] = ZERO;
                for i in 0..n {
                    let vip = v[(i, p)];
                    let viq = v[(i, q)];
                    v[(i, p)] = vip * c - viq * s;
                    v[(i, q)] = vip * s + viq * c;
                }
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(i, i)].re.total_cmp(&a[(j, j)].re));
    let eigenvalues = order.iter().map(|&i| a[(i, i)].re).collect();
    let eigenvectors = v.select_columns(&order);
    Ok(HermitianEig {
        eigenvalues,
        eigenvectors,
    })
}

/// Eigenvalues only, ascending.
pub fn herm_eigenvalues(m: &CMatrix) -> Result<Vec<f64>> {
    herm_eig(m).map(|e| e.eigenvalues)
}

/// Moore-Penrose pseudo-inverse of a Hermitian positive semidefinite matrix.
///
/// Eigenvalues at or below `tol * kappa_max` are treated as zero.
pub fn pinv(m: &CMatrix, tol: f64) -> Result<CMatrix> {
    if tol <= 0.0 {
        return Err(Error::Domain(format!("tolerance must be positive, got {tol}")));
    }
    let eig = herm_eig(m)?;
    pinv_from_eig(&eig, tol)
}

pub(crate) fn pinv_from_eig(eig: &HermitianEig, tol: f64) -> Result<CMatrix> {
    let kmax = eig.max_eigenvalue().max(0.0);
    let cutoff = tol * kmax;
    if eig.min_eigenvalue() < -cutoff.max(tol) {
        return Err(Error::NotPsd {
            eigenvalue: eig.min_eigenvalue(),
        });
    }
    Ok(eig.reconstruct_with(|k| if k > cutoff && k > 0.0 { 1.0 / k } else { 0.0 }))
}

/// Number of eigenvalues above `tol * kappa_max`; zero when `kappa_max <= tol`.
pub fn rank(m: &CMatrix, tol: f64) -> Result<usize> {
    let eig = herm_eig(m)?;
    Ok(rank_from_eigenvalues(&eig.eigenvalues, tol))
}

pub(crate) fn rank_from_eigenvalues(eigenvalues: &[f64], tol: f64) -> usize {
    let kmax = eigenvalues.iter().copied().fold(0.0_f64, f64::max);
    if kmax <= tol {
        return 0;
    }
    eigenvalues.iter().filter(|&&k| k > tol * kmax).count()
}

/// `(sum kappa_i^p)^(1/p)` for a positive definite matrix, with the
/// determinant limit `(prod kappa_i)^(1/s)` at `p = 0` and `kappa_min` at
/// `p = -inf`.
pub fn trace_power(c: &CMatrix, p: f64) -> Result<f64> {
    let eig = herm_eig(c)?;
    trace_power_of_eigenvalues(&eig.eigenvalues, p)
}

pub fn trace_power_of_eigenvalues(eigenvalues: &[f64], p: f64) -> Result<f64> {
    check_exponent(p)?;
    let kmin = positive_min(eigenvalues)?;
    let s = eigenvalues.len() as f64;
    Ok(if p == f64::NEG_INFINITY {
        kmin
    } else if p == 0.0 {
        (eigenvalues.iter().map(|k| k.ln()).sum::<f64>() / s).exp()
    } else {
        // scale by kappa_min so large negative p does not overflow
        let sum: f64 = eigenvalues.iter().map(|k| (k / kmin).powf(p)).sum();
        kmin * sum.powf(1.0 / p)
    })
}

/// Normalized power mean `((1/s) sum kappa_i^p)^(1/p)`, nondecreasing in `p`.
pub fn power_mean_of_eigenvalues(eigenvalues: &[f64], p: f64) -> Result<f64> {
    let raw = trace_power_of_eigenvalues(eigenvalues, p)?;
    if p == f64::NEG_INFINITY || p == 0.0 {
        return Ok(raw);
    }
    let s = eigenvalues.len() as f64;
    Ok(raw * s.powf(-1.0 / p))
}

fn check_exponent(p: f64) -> Result<()> {
    if p.is_nan() || p >= 1.0 {
        return Err(Error::Domain(format!("exponent p must lie in [-inf, 1), got {p}")));
    }
    Ok(())
}

fn positive_min(eigenvalues: &[f64]) -> Result<f64> {
    if eigenvalues.is_empty() {
        return Err(Error::Shape("empty matrix".into()));
    }
    let kmin = eigenvalues.iter().copied().fold(f64::INFINITY, f64::min);
    let kmax = eigenvalues.iter().copied().fold(0.0_f64, f64::max);
    if kmin <= DEFAULT_RANK_TOL * kmax || kmin <= 0.0 {
        return Err(Error::Singular { eigenvalue: kmin });
    }
    Ok(kmin)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn random_matrix(rows: usize, cols: usize, rng: &mut ChaCha8Rng) -> CMatrix {
        let data = (0..rows * cols)
            .map(|_| c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
            .collect();
        CMatrix::from_vec(rows, cols, data).unwrap()
    }

    fn gram(a: &CMatrix) -> CMatrix {
        a.matmul(&a.adjoint()).unwrap()
    }

    #[test]
    fn identity_eigenvalues() {
        let e = herm_eig(&CMatrix::identity(3)).unwrap();
        assert_eq!(e.eigenvalues, vec![1.0, 1.0, 1.0]);
    }

    #[test]
    fn pauli_y_eigenvalues() {
        let m = CMatrix::from_vec(2, 2, vec![c(0.0, 0.0), c(0.0, -1.0), c(0.0, 1.0), c(0.0, 0.0)])
            .unwrap();
        let e = herm_eig(&m).unwrap();
        assert!((e.eigenvalues[0] + 1.0).abs() < 1e-14);
        assert!((e.eigenvalues[1] - 1.0).abs() < 1e-14);
    }

    #[test]
    fn rejects_non_square_and_non_hermitian() {
        assert!(matches!(herm_eig(&CMatrix::zeros(2, 3)), Err(Error::Shape(_))));
        let m = CMatrix::from_vec(2, 2, vec![c(1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)])
            .unwrap();
        assert!(matches!(herm_eig(&m), Err(Error::NotHermitian { .. })));
    }

    #[test]
    fn random_hermitian_reconstruction_and_residuals() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for n in [1, 2, 5, 17, 40] {
            let a = random_matrix(n, n, &mut rng);
            let m = {
                let h = a.adjoint();
                let mut s = a.clone();
                for i in 0..n {
                    for j in 0..n {
                        s[(i, j)] = (a[(i, j)] + h[(i, j)]) * 0.5;
                    }
                }
                s
            };
            let e = herm_eig(&m).unwrap();
            let err = e.reconstruct().sub(&m).unwrap().frobenius_norm();
            assert!(err <= 1e-9 * (1.0 + m.frobenius_norm()), "n={n} err={err}");
            assert!(e.eigenvalues.windows(2).all(|w| w[0] <= w[1]));
            let vv = e.eigenvectors.adjoint().matmul(&e.eigenvectors).unwrap();
            assert!(vv.max_dev_from_identity() < 1e-10);
            for (k, &kappa) in e.eigenvalues.iter().enumerate() {
                let col: Vec<_> = (0..n).map(|i| e.eigenvectors[(i, k)]).collect();
                let mv = m.matvec(&col).unwrap();
                let res: f64 = mv
                    .iter()
                    .zip(&col)
                    .map(|(a, b)| (a - b * kappa).norm_sqr())
                    .sum::<f64>()
                    .sqrt();
                assert!(res <= 1e-10 * (1.0 + kappa.abs()));
            }
            let tr: f64 = e.eigenvalues.iter().sum();
            assert!((tr - m.trace().re).abs() < 1e-10 * (1.0 + tr.abs()));
        }
    }

    #[test]
    fn pinv_examples() {
        let i4 = CMatrix::identity(4);
        assert!(pinv(&i4, 1e-9).unwrap().sub(&i4).unwrap().max_abs() < 1e-14);
        let d = CMatrix::from_real_diag(&[2.0, 0.0]);
        let p = pinv(&d, 1e-9).unwrap();
        assert!((p[(0, 0)].re - 0.5).abs() < 1e-15);
        assert!(p[(1, 1)].norm() < 1e-15);
    }

    #[test]
    fn pinv_of_low_rank_gram() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for (n, r) in [(6, 2), (10, 7), (12, 1)] {
            let a = random_matrix(n, r, &mut rng);
            let m = gram(&a);
            let mp = pinv(&m, DEFAULT_RANK_TOL).unwrap();
            assert_eq!(rank(&mp, DEFAULT_RANK_TOL).unwrap(), r);
            let back = m.matmul(&mp).unwrap().matmul(&m).unwrap();
            assert!(back.sub(&m).unwrap().max_abs() < 1e-8);
        }
    }

    #[test]
    fn pinv_is_involutive_on_full_rank() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let a = random_matrix(8, 8, &mut rng);
        let m = gram(&a);
        let back = pinv(&pinv(&m, 1e-12).unwrap(), 1e-12).unwrap();
        assert!(back.sub(&m).unwrap().max_abs() < 1e-8);
    }

    #[test]
    fn pinv_rejects_indefinite() {
        let m = CMatrix::from_real_diag(&[1.0, -0.5]);
        assert!(matches!(pinv(&m, 1e-9), Err(Error::NotPsd { .. })));
    }

    #[test]
    fn rank_examples() {
        assert_eq!(rank(&CMatrix::identity(10), DEFAULT_RANK_TOL).unwrap(), 10);
        assert_eq!(rank(&CMatrix::zeros(4, 4), DEFAULT_RANK_TOL).unwrap(), 0);
    }

    #[test]
    fn trace_power_examples() {
        let s = 5;
        let i = CMatrix::identity(s);
        assert!((trace_power(&i, -1.0).unwrap() - 1.0 / s as f64).abs() < 1e-14);
        assert_eq!(trace_power(&i, f64::NEG_INFINITY).unwrap(), 1.0);
        let d = CMatrix::from_real_diag(&[1.0, 4.0]);
        assert!((trace_power(&d, 0.0).unwrap() - 2.0).abs() < 1e-14);
        assert!(matches!(trace_power(&d, 1.0), Err(Error::Domain(_))));
        let sing = CMatrix::from_real_diag(&[1.0, 0.0]);
        assert!(matches!(trace_power(&sing, -1.0), Err(Error::Singular { .. })));
    }

    #[test]
    fn power_mean_is_monotone_in_p() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let ps = [f64::NEG_INFINITY, -20.0, -5.0, -2.0, -1.0, -0.3, 0.0, 0.2, 0.5, 0.99];
        for _ in 0..20 {
            let n = rng.random_range(1..8);
            let m = gram(&random_matrix(n, n, &mut rng));
            let ev = herm_eigenvalues(&m).unwrap();
            let vals: Vec<f64> = ps
                .iter()
                .map(|&p| power_mean_of_eigenvalues(&ev, p).unwrap())
                .collect();
            for w in vals.windows(2) {
                assert!(w[0] <= w[1] * (1.0 + 1e-12), "{vals:?}");
            }
        }
    }
}
