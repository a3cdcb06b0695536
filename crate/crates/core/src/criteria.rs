//! Information matrices, Kiefer criteria, efficiencies, optimality
//! certificates and lambda-design checks.

use num_complex::Complex64;

use crate::designs::{haar_points, Design};
use crate::error::{Error, Result};
use crate::geometry::{Manifold, Point};
use crate::harmonics::{
    product_eigenvalue, so3_eigenvalue, sphere2_eigenvalue, sphere3_eigenvalue, ModelSpec, Truncation,
};
use crate::linalg::{
    herm_eig, pinv_from_eig, rank_from_eigenvalues, trace_power_of_eigenvalues, CMatrix,
    HermitianEig, DEFAULT_RANK_TOL,
};
use crate::specialfn::binomial_u64;

/// Residual below which an equal-weight average counts as zero.
pub const LAMBDA_TOL: f64 = 1e-8;
/// Haar samples added to the design's own points in certificate sweeps.
pub const DEFAULT_TEST_POINTS: usize = 512;

const FEASIBILITY_TOL: f64 = 1e-6;

/// A set of complete eigenvalue levels whose coefficients are of interest.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SelectionSet {
    levels: Vec<usize>,
    indices: Vec<usize>,
    dimension: usize,
}

impl SelectionSet {
    /// `levels` must be strictly increasing level indices of `model`.
    pub fn new(model: &ModelSpec, levels: Vec<usize>) -> Result<Self> {
        if levels.is_empty() {
            return Err(Error::Domain("selection needs at least one level".into()));
        }
        if levels.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Domain(format!("levels must be strictly increasing, got {levels:?}")));
        }
        let mut indices = Vec::new();
        for &l in &levels {
            let lv = model.level(l)?;
            indices.extend(lv.offset..lv.offset + lv.multiplicity);
        }
        Ok(Self {
            levels,
            indices,
            dimension: model.dimension(),
        })
    }

    /// Every level of the model (`K = I_D`).
    pub fn all(model: &ModelSpec) -> Self {
        Self::new(model, (0..model.levels().len()).collect()).expect("model has levels")
    }

    pub fn levels(&self) -> &[usize] {
        &self.levels
    }

    /// Basis indices covered by the selection, ascending.
    pub fn indices(&self) -> &[usize] {
        &self.indices
    }

    /// `s`, the number of selected coefficients.
    pub fn size(&self) -> usize {
        self.indices.len()
    }

    /// The dense `D x s` selection matrix `K`.
    pub fn matrix(&self) -> CMatrix {
        let mut k = CMatrix::zeros(self.dimension, self.size());
        for (col, &row) in self.indices.iter().enumerate() {
            k[(row, col)] = Complex64::new(1.0, 0.0);
        }
        k
    }
}

/// `M = sum_i w_i phi(g_i) phi(g_i)^*`.
pub fn information_matrix(d: &Design, model: &ModelSpec) -> Result<CMatrix> {
    if d.manifold() != model.manifold() {
        return Err(Error::Manifold {
            expected: model.manifold().to_string(),
            found: d.manifold().to_string(),
        });
    }
    let n = model.dimension();
    let mut m = CMatrix::zeros(n, n);
    for (p, &w) in d.points().iter().zip(d.weights()) {
        let phi = model.basis_vector(p)?;
        for i in 0..n {
            let a = phi[i] * w;
            for j in i..n {
                m[(i, j)] += a * phi[j].conj();
            }
        }
    }
    for i in 0..n {
        m[(i, i)].im = 0.0;
        for j in 0..i {
            m[(i, j)] = m[(j, i)].conj();
        }
    }
    Ok(m)
}

/// Everything the criteria need from one information matrix.
#[derive(Debug, Clone)]
pub struct Analysis {
    pub info: CMatrix,
    pub info_eig: HermitianEig,
    pub selection: SelectionSet,
    /// `C_K`, or the reason it does not exist.
    pub c: std::result::Result<CMatrix, (usize, usize)>,
}

impl Analysis {
    pub fn new(info: CMatrix, selection: SelectionSet) -> Result<Self> {
        let info_eig = herm_eig(&info)?;
        let c = c_matrix_from_eig(&info_eig, &selection)?;
        Ok(Self {
            info,
            info_eig,
            selection,
            c,
        })
    }

    pub fn of(d: &Design, model: &ModelSpec, selection: &SelectionSet) -> Result<Self> {
        Self::new(information_matrix(d, model)?, selection.clone())
    }

    pub fn is_feasible(&self) -> bool {
        self.c.is_ok()
    }

    pub fn c_matrix(&self) -> Result<&CMatrix> {
        self.c.as_ref().map_err(|&(rank_m, rank_mk)| Error::Infeasible { rank_m, rank_mk })
    }

    pub fn c_eigenvalues(&self) -> Result<Vec<f64>> {
        Ok(herm_eig(self.c_matrix()?)?.eigenvalues)
    }

    pub fn rank(&self) -> usize {
        rank_from_eigenvalues(&self.info_eig.eigenvalues, DEFAULT_RANK_TOL)
    }

    pub fn evaluate(&self, criterion: Criterion) -> Result<f64> {
        match criterion {
            Criterion::Phi(p) => trace_power_of_eigenvalues(&self.c_eigenvalues()?, p),
            Criterion::Es(s) => es_from_eigenvalues(&self.info_eig.eigenvalues, s),
        }
    }
}

fn c_matrix_from_eig(
    eig: &HermitianEig,
    sel: &SelectionSet,
) -> Result<std::result::Result<CMatrix, (usize, usize)>> {
    let rank_m = rank_from_eigenvalues(&eig.eigenvalues, DEFAULT_RANK_TOL);
    // range(K) in range(M)  <=>  P e_j = e_j for every selected j, P the range projector
    let kmax = eig.max_eigenvalue();
    let cutoff = DEFAULT_RANK_TOL * kmax;
    let proj = eig.reconstruct_with(|k| if k > cutoff && k > 0.0 { 1.0 } else { 0.0 });
    let missing = sel
        .indices()
        .iter()
        .filter(|&&j| 1.0 - proj[(j, j)].re > FEASIBILITY_TOL)
        .count();
    if missing > 0 {
        return Ok(Err((rank_m, rank_m + missing.min(sel.size()))));
    }
    let m_plus = pinv_from_eig(eig, DEFAULT_RANK_TOL)?;
    let inner = m_plus.principal_submatrix(sel.indices());
    let inner_eig = herm_eig(&inner)?;
    if inner_eig.min_eigenvalue() <= 0.0 {
        return Ok(Err((rank_m, rank_m + 1)));
    }
    Ok(Ok(inner_eig.reconstruct_with(|k| 1.0 / k)))
}

/// `C_K = (K^* M^+ K)^{-1}`, defined when `range(K)` lies in `range(M)`.
pub fn c_matrix(m: &CMatrix, sel: &SelectionSet) -> Result<CMatrix> {
    let eig = herm_eig(m)?;
    c_matrix_from_eig(&eig, sel)?.map_err(|(rank_m, rank_mk)| Error::Infeasible { rank_m, rank_mk })
}

/// A Kiefer criterion: `Phi_p` on `C_K` or `Phi_{E_s}` on `M`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Criterion {
    /// `p` in `[-inf, 1)`.
    Phi(f64),
    /// Sum of the `s` smallest eigenvalues of `M`.
    Es(usize),
}

impl Criterion {
    pub fn name(&self) -> &'static str {
        match self {
            Criterion::Phi(_) => "phi_p",
            Criterion::Es(_) => "phi_es",
        }
    }

    pub fn parameter(&self) -> String {
        match self {
            Criterion::Phi(p) if *p == f64::NEG_INFINITY => "-inf".into(),
            Criterion::Phi(p) => format!("{p}"),
            Criterion::Es(s) => s.to_string(),
        }
    }
}

/// `Phi_p(mu) = (tr C_K^p)^{1/p}`; determinant limit at `p = 0`, `lambda_min` at `-inf`.
pub fn phi_p(d: &Design, model: &ModelSpec, sel: &SelectionSet, p: f64) -> Result<f64> {
    Analysis::of(d, model, sel)?.evaluate(Criterion::Phi(p))
}

fn es_from_eigenvalues(eigenvalues: &[f64], s: usize) -> Result<f64> {
    if s == 0 || s > eigenvalues.len() {
        return Err(Error::Domain(format!("s must lie in 1..={}, got {s}", eigenvalues.len())));
    }
    Ok(eigenvalues[..s].iter().sum())
}

/// Sum of the `s` smallest eigenvalues of `M`.
pub fn phi_es(d: &Design, model: &ModelSpec, s: usize) -> Result<f64> {
    let m = information_matrix(d, model)?;
    es_from_eigenvalues(&herm_eig(&m)?.eigenvalues, s)
}

/// Criterion value of a design relative to a reference design.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Efficiency {
    pub value: f64,
    pub reference_value: f64,
    pub efficiency: f64,
    /// False when the design cannot estimate `K^* theta`; value and efficiency are then 0.
    pub feasible: bool,
}

/// Efficiency from precomputed analyses; an infeasible numerator scores 0.
pub fn efficiency_of(design: &Analysis, reference: &Analysis, criterion: Criterion) -> Result<Efficiency> {
    let reference_value = reference.evaluate(criterion)?;
    let (value, feasible) = match design.evaluate(criterion) {
        Ok(v) => (v, true),
        Err(Error::Infeasible { .. } | Error::Singular { .. }) => (0.0, false),
        Err(e) => return Err(e),
    };
    Ok(Efficiency {
        value,
        reference_value,
        efficiency: value / reference_value,
        feasible,
    })
}

/// `Phi(d) / Phi(reference)`.
pub fn efficiency(
    d: &Design,
    reference: &Design,
    model: &ModelSpec,
    sel: &SelectionSet,
    criterion: Criterion,
) -> Result<Efficiency> {
    efficiency_of(&Analysis::of(d, model, sel)?, &Analysis::of(reference, model, sel)?, criterion)
}

/// Outcome of a pointwise equivalence-theorem check.
#[derive(Debug, Clone, PartialEq)]
pub struct CertificateReport {
    /// `max_g (LHS(g) - RHS)`; nonpositive (up to rounding) for optimal designs.
    pub max_violation: f64,
    pub max_lhs: f64,
    pub min_lhs: f64,
    pub rhs: f64,
    pub test_point_count: usize,
    pub criterion: Criterion,
}

impl CertificateReport {
    pub fn holds(&self, tol: f64) -> bool {
        self.max_violation <= tol
    }
}

/// 512 Haar samples followed by the design's own support points.
pub fn default_test_points(d: &Design, seed: u64) -> Result<Vec<Point>> {
    let mut pts = haar_points(d.manifold(), DEFAULT_TEST_POINTS, seed)?;
    pts.extend_from_slice(d.points());
    Ok(pts)
}

fn sweep(
    model: &ModelSpec,
    test_points: &[Point],
    rhs: f64,
    criterion: Criterion,
    lhs: impl Fn(&[Complex64]) -> Result<f64>,
) -> Result<CertificateReport> {
    if test_points.is_empty() {
        return Err(Error::Domain("no test points".into()));
    }
    let mut max_lhs = f64::NEG_INFINITY;
    let mut min_lhs = f64::INFINITY;
    for g in test_points {
        let v = lhs(&model.basis_vector(g)?)?;
        max_lhs = max_lhs.max(v);
        min_lhs = min_lhs.min(v);
    }
    Ok(CertificateReport {
        max_violation: max_lhs - rhs,
        max_lhs,
        min_lhs,
        rhs,
        test_point_count: test_points.len(),
        criterion,
    })
}

/// Checks `phi^* M^+ K C^{p+1} K^* M^+ phi <= tr C^p` at every test point.
///
/// For `p = -inf` the weight matrix `C^{p+1}` is replaced by `C E C` with `E`
/// the orthogonal projector onto the `lambda_min(C)` eigenspace, and the bound
/// by `tr(E) lambda_min(C)`. When `C = I_s` this is `E = I_s`, so optimal
/// designs attain equality `s = s`.
pub fn equivalence_certificate_of(
    a: &Analysis,
    model: &ModelSpec,
    p: f64,
    test_points: &[Point],
) -> Result<CertificateReport> {
    if p.is_nan() || p >= 1.0 {
        return Err(Error::Domain(format!("exponent p must lie in [-inf, 1), got {p}")));
    }
    let c = a.c_matrix()?;
    let c_eig = herm_eig(c)?;
    let kmin = c_eig.min_eigenvalue();
    let (weight, rhs) = if p == f64::NEG_INFINITY {
        let band = 1e-9 * c_eig.max_eigenvalue();
        let mult = c_eig.eigenvalues.iter().filter(|&&k| k - kmin <= band).count();
        (
            c_eig.reconstruct_with(|k| if k - kmin <= band { k * k } else { 0.0 }),
            mult as f64 * kmin,
        )
    } else {
        (
            c_eig.reconstruct_with(|k| k.powf(p + 1.0)),
            trace_power_of_eigenvalues(&c_eig.eigenvalues, p)?.powf(p),
        )
    };
    let rhs = if p == 0.0 { c_eig.eigenvalues.len() as f64 } else { rhs };
    // B = M^+ K: the selected columns of M^+
    let m_plus = pinv_from_eig(&a.info_eig, DEFAULT_RANK_TOL)?;
    let b = m_plus.select_columns(a.selection.indices());
    let b_adj = b.adjoint();
    sweep(model, test_points, rhs, Criterion::Phi(p), |phi| {
        let u = b_adj.matvec(phi)?;
        weight.quadratic_form(&u)
    })
}

pub fn equivalence_certificate(
    d: &Design,
    model: &ModelSpec,
    sel: &SelectionSet,
    p: f64,
    test_points: &[Point],
) -> Result<CertificateReport> {
    equivalence_certificate_of(&Analysis::of(d, model, sel)?, model, p, test_points)
}

/// Checks `phi^* K K^* phi <= Phi_{E_s}(M)` at every test point, `s = |sel|`.
pub fn es_certificate_of(a: &Analysis, model: &ModelSpec, test_points: &[Point]) -> Result<CertificateReport> {
    let s = a.selection.size();
    let rhs = es_from_eigenvalues(&a.info_eig.eigenvalues, s)?;
    let idx = a.selection.indices().to_vec();
    sweep(model, test_points, rhs, Criterion::Es(s), |phi| {
        Ok(idx.iter().map(|&i| phi[i].norm_sqr()).sum())
    })
}

pub fn es_certificate(
    d: &Design,
    model: &ModelSpec,
    sel: &SelectionSet,
    test_points: &[Point],
) -> Result<CertificateReport> {
    es_certificate_of(&Analysis::of(d, model, sel)?, model, test_points)
}

/// Per-level residuals of the lambda-design test.
#[derive(Debug, Clone, PartialEq)]
pub struct LambdaReport {
    /// `max |mean_g f(g)|` over the basis functions of levels `1..=max_level`.
    pub max_residual: f64,
    /// Residual per level, index 0 being level 1.
    pub level_residuals: Vec<f64>,
    pub passed: bool,
}

/// Checks that the equal-weight average of every non-constant basis function
/// up to level `max_level` of `model` vanishes.
pub fn verify_lambda(d: &Design, model: &ModelSpec, max_level: usize) -> Result<LambdaReport> {
    if !d.is_equal_weight() {
        return Err(Error::Precondition("lambda-designs are equal-weight point sets".into()));
    }
    if d.manifold() != model.manifold() {
        return Err(Error::Manifold {
            expected: model.manifold().to_string(),
            found: d.manifold().to_string(),
        });
    }
    let levels = model.levels();
    if max_level >= levels.len() {
        return Err(Error::Index {
            index: max_level,
            max: levels.len() - 1,
        });
    }
    let end = levels[max_level].offset + levels[max_level].multiplicity;
    let mut sums = vec![Complex64::new(0.0, 0.0); end];
    for p in d.points() {
        let phi = model.basis_vector(p)?;
        for (s, f) in sums.iter_mut().zip(&phi) {
            *s += f;
        }
    }
    let n = d.len() as f64;
    let level_residuals: Vec<f64> = levels[1..=max_level]
        .iter()
        .map(|l| {
            sums[l.offset..l.offset + l.multiplicity]
                .iter()
                .fold(0.0_f64, |m, s| m.max(s.norm() / n))
        })
        .collect();
    let max_residual = level_residuals.iter().copied().fold(0.0, f64::max);
    Ok(LambdaReport {
        max_residual,
        level_residuals,
        passed: max_residual <= LAMBDA_TOL,
    })
}

/// How the sufficient design strength is derived.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StrengthMode {
    /// Any compact group: integrate every eigenfunction with eigenvalue at most `14 lambda_d`.
    General,
    /// Products of level-`d` functions decompose into levels up to `2d`.
    ClebschGordan,
}

/// A sufficient lambda-design strength for optimality in a model.
#[derive(Debug, Clone, PartialEq)]
pub struct StrengthRequirement {
    pub manifold: Manifold,
    /// Required degree: one entry per torus axis or product factor, else a single entry.
    pub degrees: Vec<u32>,
    /// Eigenvalue the design must integrate up to.
    pub threshold: f64,
    /// The sharper `(8 + 4 sqrt 2) lambda_d` bound (general mode only).
    pub sharper_threshold: Option<f64>,
    /// For `SO(3)`: the equivalent strength on the double cover `S^3`.
    pub cover_degree: Option<u32>,
}

/// Largest `l` with `eig(l) <= bound`.
fn largest_below(bound: f64, eig: impl Fn(u32) -> f64) -> u32 {
    let mut l = 0;
    while eig(l + 1) <= bound * (1.0 + 1e-12) {
        l += 1;
    }
    l
}

pub const SHARP_FACTOR: f64 = 8.0 + 4.0 * std::f64::consts::SQRT_2;
pub const GENERAL_FACTOR: f64 = 14.0;

pub fn required_strength(model: &ModelSpec, mode: StrengthMode) -> StrengthRequirement {
    let manifold = model.manifold();
    let lambda_d = model.levels().last().map_or(0.0, |l| l.eigenvalue);
    let circle_eig = |k: u32| (k * k) as f64;
    let general = mode == StrengthMode::General;
    let (degrees, threshold) = match model.truncation() {
        Truncation::Circle { max_frequency: n } => {
            if general {
                (vec![largest_below(GENERAL_FACTOR * circle_eig(*n), circle_eig)], GENERAL_FACTOR * lambda_d)
            } else {
                (vec![2 * n], 4.0 * lambda_d)
            }
        }
        Truncation::Torus { max_frequency } => {
            // a box containing every frequency vector with |k|^2 <= 14 |k_d|^2
            let r: u32 = max_frequency.iter().map(|n| n * n).sum();
            let ks: Vec<u32> = if general {
                let k = largest_below(GENERAL_FACTOR * r as f64, circle_eig);
                vec![k; max_frequency.len()]
            } else {
                max_frequency.iter().map(|n| 2 * n).collect()
            };
            let t = if general {
                GENERAL_FACTOR * lambda_d
            } else {
                4.0 * lambda_d
            };
            (ks, t)
        }
        Truncation::Sphere2 { degree } => single(general, *degree, lambda_d, sphere2_eigenvalue),
        Truncation::Sphere3 { degree } => single(general, *degree, lambda_d, sphere3_eigenvalue),
        Truncation::So3 { degree } => single(general, *degree, lambda_d, so3_eigenvalue),
        Truncation::Sphere2xSo3 {
            sphere_degree: a,
            rotation_degree: b,
        } => {
            let (da, db) = if general {
                (
                    largest_below(GENERAL_FACTOR * sphere2_eigenvalue(*a), sphere2_eigenvalue),
                    largest_below(GENERAL_FACTOR * so3_eigenvalue(*b), so3_eigenvalue),
                )
            } else {
                (2 * a, 2 * b)
            };
            (vec![da, db], product_eigenvalue(da, db))
        }
    };
    let cover_degree = (manifold == Manifold::So3).then(|| 2 * degrees[0]);
    StrengthRequirement {
        manifold,
        degrees,
        threshold,
        sharper_threshold: general.then_some(SHARP_FACTOR * lambda_d),
        cover_degree,
    }
}

fn single(general: bool, degree: u32, lambda_d: f64, eig: fn(u32) -> f64) -> (Vec<u32>, f64) {
    if general {
        (vec![largest_below(GENERAL_FACTOR * lambda_d, eig)], GENERAL_FACTOR * lambda_d)
    } else {
        (vec![2 * degree], eig(2 * degree))
    }
}

/// Bounds `s <= s* <= s(s+1)/2 + s(D - s)` on the minimal support of an optimal design.
pub fn caratheodory_bounds(dimension: usize, s: usize) -> Result<(u64, u64)> {
    if s == 0 || s > dimension {
        return Err(Error::Domain(format!("need 1 <= s <= D, got s={s}, D={dimension}")));
    }
    let (s, d) = (s as u64, dimension as u64);
    Ok((s, s * (s + 1) / 2 + s * (d - s)))
}

/// Lower bound on the size of a spherical `t`-design on `S^3`:
/// `C(e+3, 3) + C(e+2, 3)` for `t = 2e`, `2 C(e+3, 3)` for `t = 2e + 1`.
pub fn s3_design_lower_bound(t: u32) -> u64 {
    let e = (t / 2) as u64;
    if t % 2 == 0 {
        binomial_u64(e + 3, 3) + binomial_u64(e + 2, 3)
    } else {
        2 * binomial_u64(e + 3, 3)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::designs::{circle_design, euler_grid, mimura_tight_2design, GridConvention};

    #[test]
    fn selection_matrix_is_isometry() {
        let model = ModelSpec::sphere3(3);
        let sel = SelectionSet::new(&model, vec![0, 2]).unwrap();
        assert_eq!(sel.size(), 10);
        let k = sel.matrix();
        assert!(k.adjoint().matmul(&k).unwrap().max_dev_from_identity() == 0.0);
        assert!(SelectionSet::new(&model, vec![2, 1]).is_err());
        assert!(SelectionSet::new(&model, vec![4]).is_err());
    }

    #[test]
    fn c_matrix_examples() {
        let model = ModelSpec::sphere3(2);
        let sel = SelectionSet::new(&model, vec![1]).unwrap();
        let c = c_matrix(&CMatrix::identity(14), &sel).unwrap();
        assert!(c.max_dev_from_identity() < 1e-12);
        let c = c_matrix(&CMatrix::from_real_diag(&[2.0; 14]), &SelectionSet::all(&model)).unwrap();
        assert!(c.sub(&CMatrix::identity(14).scale(2.0)).unwrap().max_abs() < 1e-12);
        let mut diag = [1.0; 14];
        diag[3] = 0.0;
        assert!(c_matrix(&CMatrix::from_real_diag(&diag), &sel).is_err());
        // level 0 does not touch index 3, so it stays estimable
        let sel0 = SelectionSet::new(&model, vec![0]).unwrap();
        assert!(c_matrix(&CMatrix::from_real_diag(&diag), &sel0).is_ok());
    }

    #[test]
    fn optimal_design_values() {
        let model = ModelSpec::circle(2);
        let d = circle_design(5).unwrap();
        let sel = SelectionSet::all(&model);
        assert!((phi_p(&d, &model, &sel, -1.0).unwrap() - 0.2).abs() < 1e-12);
        assert!((phi_p(&d, &model, &sel, f64::NEG_INFINITY).unwrap() - 1.0).abs() < 1e-12);
        assert!((phi_p(&d, &model, &sel, 0.0).unwrap() - 1.0).abs() < 1e-12);
        for s in 1..=5 {
            assert!((phi_es(&d, &model, s).unwrap() - s as f64).abs() < 1e-12);
        }
        assert!(phi_es(&d, &model, 0).is_err());
        assert!(phi_es(&d, &model, 6).is_err());
    }

    #[test]
    fn single_point_is_infeasible() {
        let model = ModelSpec::sphere3(1);
        let d = Design::equal_weight(Manifold::Sphere3, vec![Point::Sphere3([1.0, 0.0, 0.0, 0.0])]).unwrap();
        let sel = SelectionSet::all(&model);
        assert!(matches!(phi_p(&d, &model, &sel, 0.0), Err(Error::Infeasible { .. })));
        let m = information_matrix(&d, &model).unwrap();
        assert!((m.trace().re - 5.0).abs() < 1e-12);
        let pts = default_test_points(&d, 1).unwrap();
        assert!(matches!(
            equivalence_certificate(&d, &model, &sel, 0.0, &pts),
            Err(Error::Infeasible { .. })
        ));
        let e = efficiency(&d, &mimura_tight_2design(), &model, &sel, Criterion::Phi(-1.0)).unwrap();
        assert!(!e.feasible && e.efficiency == 0.0);
    }

    #[test]
    fn certificates_on_optimal_design() {
        let model = ModelSpec::sphere3(1);
        let d = mimura_tight_2design();
        let pts = default_test_points(&d, 9).unwrap();
        for sel in [SelectionSet::all(&model), SelectionSet::new(&model, vec![1]).unwrap()] {
            let s = sel.size() as f64;
            for p in [f64::NEG_INFINITY, -3.0, -1.0, 0.0, 0.5] {
                let r = equivalence_certificate(&d, &model, &sel, p, &pts).unwrap();
                assert!(r.max_violation.abs() < 1e-8, "p={p}: {r:?}");
                assert!((r.rhs - s).abs() < 1e-9 && (r.min_lhs - s).abs() < 1e-8);
            }
            let r = es_certificate(&d, &model, &sel, &pts).unwrap();
            assert!(r.max_violation.abs() < 1e-8 && (r.min_lhs - s).abs() < 1e-8);
        }
    }

    #[test]
    fn rank_deficient_grid() {
        let model = ModelSpec::so3(1);
        let d = euler_grid(2, 2, 3, GridConvention::Endpoints).unwrap();
        assert!(phi_es(&d, &model, 1).unwrap() <= 1e-8);
        let a = Analysis::of(&d, &model, &SelectionSet::all(&model)).unwrap();
        assert!(a.rank() < 10);
        let sel = SelectionSet::new(&model, vec![1]).unwrap();
        let pts = default_test_points(&d, 2).unwrap();
        assert!(es_certificate(&d, &model, &sel, &pts).unwrap().max_violation > 0.1);
    }

    #[test]
    fn lambda_checks() {
        let d = circle_design(7).unwrap();
        assert!(verify_lambda(&d, &ModelSpec::circle(3), 3).unwrap().max_residual < 1e-12);
        assert!(!verify_lambda(&d, &ModelSpec::circle(7), 7).unwrap().passed);
        let m = mimura_tight_2design();
        let model = ModelSpec::sphere3(3);
        assert!(verify_lambda(&m, &model, 2).unwrap().passed);
        assert!(!verify_lambda(&m, &model, 3).unwrap().passed);
        let w = Design::new(Manifold::Circle, vec![Point::Circle(0.1), Point::Circle(0.6)], vec![0.4, 0.6]).unwrap();
        assert!(matches!(verify_lambda(&w, &ModelSpec::circle(1), 1), Err(Error::Precondition(_))));
    }

    #[test]
    fn strengths() {
        let r = required_strength(&ModelSpec::sphere3(1), StrengthMode::General);
        assert_eq!(r.degrees, vec![5]);
        assert_eq!(r.threshold, 42.0);
        assert!(r.sharper_threshold.unwrap() < r.threshold);
        assert_eq!(required_strength(&ModelSpec::sphere3(1), StrengthMode::ClebschGordan).degrees, vec![2]);
        assert_eq!(required_strength(&ModelSpec::sphere3(4), StrengthMode::ClebschGordan).degrees, vec![8]);
        assert_eq!(required_strength(&ModelSpec::sphere3(4), StrengthMode::General).degrees, vec![17]);
        let so3 = required_strength(&ModelSpec::so3(1), StrengthMode::ClebschGordan);
        assert_eq!((so3.degrees[0], so3.cover_degree), (2, Some(4)));
        assert_eq!(
            required_strength(&ModelSpec::sphere2_so3(2, 1), StrengthMode::ClebschGordan).degrees,
            vec![4, 2]
        );
        assert_eq!(required_strength(&ModelSpec::circle(3), StrengthMode::ClebschGordan).degrees, vec![6]);
    }

    #[test]
    fn bounds() {
        assert_eq!(caratheodory_bounds(1, 1).unwrap(), (1, 1));
        assert_eq!(caratheodory_bounds(10, 10).unwrap(), (10, 55));
        for d in 0..5u64 {
            let n = (d + 1) * (d + 1);
            let (lo, hi) = caratheodory_bounds(n as usize, n as usize).unwrap();
            assert_eq!((lo, hi), (n, (n * n + n) / 2));
        }
        assert!(caratheodory_bounds(3, 0).is_err());
        let expect = [2, 5, 8, 14, 20, 30, 40, 55, 70, 91, 112, 140];
        for (t, e) in (1..=12).zip(expect) {
            assert_eq!(s3_design_lower_bound(t), e);
        }
    }
}
