//! Designs (finitely supported probability measures) and their constructors.

use std::f64::consts::{FRAC_1_SQRT_2, PI, TAU};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::geometry::{covering_map, rotation_distance, sphere_point, Euler, Manifold, Point};

mod interval;
pub mod io;

pub use interval::{interval_t_design, IntervalDesign};

/// Points closer than this in max-norm over stored coordinates are merged.
pub const DUPLICATE_TOL: f64 = 1e-9;
/// Frobenius distance below which projected rotations are identified.
pub const DEFAULT_DEDUP_TOL: f64 = 1e-8;

const WEIGHT_SUM_TOL: f64 = 1e-12;
const ON_MANIFOLD_TOL: f64 = 1e-9;

/// A finitely supported probability measure on one manifold.
#[derive(Debug, Clone, PartialEq)]
pub struct Design {
    manifold: Manifold,
    points: Vec<Point>,
    weights: Vec<f64>,
}

impl Design {
    /// Validates the inputs and merges duplicate points by adding their weights.
    pub fn new(manifold: Manifold, points: Vec<Point>, weights: Vec<f64>) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::Domain("a design needs at least one point".into()));
        }
        if points.len() != weights.len() {
            return Err(Error::Shape(format!(
                "{} points but {} weights",
                points.len(),
                weights.len()
            )));
        }
        for p in &points {
            if p.manifold() != manifold {
                return Err(Error::Manifold {
                    expected: manifold.to_string(),
                    found: p.manifold().to_string(),
                });
            }
            if p.coordinates().iter().any(|c| !c.is_finite()) {
                return Err(Error::Data("non-finite coordinate".into()));
            }
            let defect = p.constraint_defect();
            if defect > ON_MANIFOLD_TOL {
                return Err(Error::Data(format!("point off the manifold by {defect:.3e}")));
            }
        }
        if let Some(w) = weights.iter().find(|w| !(**w > 0.0) || !w.is_finite()) {
            return Err(Error::Data(format!("weights must be positive, got {w}")));
        }
        let total = compensated_sum(&weights);
        if (total - 1.0).abs() > WEIGHT_SUM_TOL {
            return Err(Error::Data(format!("weights sum to {total}, not 1")));
        }
        let (points, weights) = merge_duplicates(points, weights);
        Ok(Self {
            manifold,
            points,
            weights,
        })
    }

    /// Uniform weights `1/n` on the given points.
    pub fn equal_weight(manifold: Manifold, points: Vec<Point>) -> Result<Self> {
        let n = points.len();
        Self::new(manifold, points, vec![1.0 / n.max(1) as f64; n])
    }

    pub fn manifold(&self) -> Manifold {
        self.manifold
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// True when every weight equals `1/n` to `1e-12`.
    pub fn is_equal_weight(&self) -> bool {
        let target = 1.0 / self.len() as f64;
        self.weights.iter().all(|w| (w - target).abs() <= 1e-12)
    }
}

/// Neumaier summation; plain summation of many equal weights drifts past `1e-12`.
pub(crate) fn compensated_sum(xs: &[f64]) -> f64 {
    let mut sum = 0.0_f64;
    let mut c = 0.0;
    for &x in xs {
        let t = sum + x;
        c += if sum.abs() >= x.abs() { (sum - t) + x } else { (x - t) + sum };
        sum = t;
    }
    sum + c
}

fn max_norm_distance(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

/// Sweep over points sorted by their first coordinate; only candidates within
/// the tolerance band on that coordinate are compared.
fn merge_duplicates(points: Vec<Point>, weights: Vec<f64>) -> (Vec<Point>, Vec<f64>) {
    let coords: Vec<Vec<f64>> = points.iter().map(Point::coordinates).collect();
    let mut order: Vec<usize> = (0..points.len()).collect();
    order.sort_by(|&a, &b| coords[a][0].total_cmp(&coords[b][0]));
    let mut owner: Vec<usize> = (0..points.len()).collect();
    for (pos, &i) in order.iter().enumerate() {
        if owner[i] != i {
            continue;
        }
        for &j in &order[pos + 1..] {
            if coords[j][0] - coords[i][0] > DUPLICATE_TOL {
                break;
            }
            if owner[j] == j && max_norm_distance(&coords[i], &coords[j]) <= DUPLICATE_TOL {
                owner[j] = i;
            }
        }
    }
    // keep the first occurrence of each class in input order
    let mut first = vec![usize::MAX; points.len()];
    let mut out_points = Vec::new();
    let mut out_weights: Vec<f64> = Vec::new();
    for (i, p) in points.into_iter().enumerate() {
        let root = owner[i];
        if first[root] == usize::MAX {
            first[root] = out_points.len();
            out_points.push(p);
            out_weights.push(weights[i]);
        } else {
            out_weights[first[root]] += weights[i];
        }
    }
    (out_points, out_weights)
}

fn check_counts(counts: &[usize]) -> Result<()> {
    if counts.is_empty() || counts.contains(&0) {
        return Err(Error::Domain(format!("grid counts must be positive, got {counts:?}")));
    }
    Ok(())
}

/// Equal weights at `s / n`, `s = 1..=n`.
pub fn circle_design(n_points: usize) -> Result<Design> {
    check_counts(&[n_points])?;
    let pts = (1..=n_points)
        .map(|s| Point::Circle(s as f64 / n_points as f64))
        .collect();
    Design::equal_weight(Manifold::Circle, pts)
}

/// Product of circle designs, one per axis.
pub fn torus_grid(counts: &[usize]) -> Result<Design> {
    check_counts(counts)?;
    let mut pts: Vec<Vec<f64>> = vec![vec![]];
    for &n in counts {
        pts = pts
            .into_iter()
            .flat_map(|prefix| {
                (1..=n).map(move |s| {
                    let mut v = prefix.clone();
                    v.push(s as f64 / n as f64);
                    v
                })
            })
            .collect();
    }
    Design::equal_weight(
        Manifold::Torus(counts.len()),
        pts.into_iter().map(Point::Torus).collect(),
    )
}

/// The tight spherical 2-design on `S^3` built from the fifth roots of unity:
/// column `k` is `(1/sqrt 2)(Re z^k, Im z^k, Re z^2k, Im z^2k)`, `z = e^{2 pi i/5}`.
pub fn mimura_tight_2design() -> Design {
    let pts = (1..=5)
        .map(|k| {
            let a = TAU * k as f64 / 5.0;
            let (s1, c1) = a.sin_cos();
            let (s2, c2) = (2.0 * a).sin_cos();
            Point::Sphere3([
                FRAC_1_SQRT_2 * c1,
                FRAC_1_SQRT_2 * s1,
                FRAC_1_SQRT_2 * c2,
                FRAC_1_SQRT_2 * s2,
            ])
        })
        .collect();
    Design::equal_weight(Manifold::Sphere3, pts).expect("fixed construction is valid")
}

/// Composes two interval designs and a regular polygon into an equal-weight
/// design on `S^3`:
///
/// `x1 = c1`, `x2 = c2 sqrt(1 - c1^2)`,
/// `(x3, x4) = (cos, sin)(2 pi k / K) sqrt((1 - c1^2)(1 - c2^2))`.
///
/// `c1` must be a design for the weight `sqrt(1 - x^2)` and `c2` for the
/// constant weight. With strength-2 inputs and `K >= 3` the result is a
/// spherical 2-design with `K n1 n2` points.
pub fn bajnok_s3_design(c1: &IntervalDesign, c2: &IntervalDesign, circle_points: usize) -> Result<Design> {
    if c1.weight_exponent != 1 || c2.weight_exponent != 2 {
        return Err(Error::Precondition(format!(
            "first factor needs weight exponent 1 and second exponent 2, got {} and {}",
            c1.weight_exponent, c2.weight_exponent
        )));
    }
    if circle_points < 3 {
        return Err(Error::Precondition(format!(
            "need at least 3 circle points, got {circle_points}"
        )));
    }
    let mut pts = Vec::with_capacity(circle_points * c1.nodes.len() * c2.nodes.len());
    for &a in &c1.nodes {
        for &b in &c2.nodes {
            let r1 = (1.0 - a * a).max(0.0).sqrt();
            let r2 = ((1.0 - a * a) * (1.0 - b * b)).max(0.0).sqrt();
            for k in 1..=circle_points {
                let (s, c) = (TAU * k as f64 / circle_points as f64).sin_cos();
                pts.push(Point::Sphere3([a, b * r1, c * r2, s * r2]));
            }
        }
    }
    Design::equal_weight(Manifold::Sphere3, pts)
}

/// Pushes a design on `S^3 = SU(2)` through the double cover onto `SO(3)`,
/// merging images within `dedup_tol` (Frobenius norm) and adding their weights.
pub fn project_su2_to_so3(d: &Design, dedup_tol: f64) -> Result<Design> {
    if d.manifold() != Manifold::Sphere3 {
        return Err(Error::Manifold {
            expected: Manifold::Sphere3.to_string(),
            found: d.manifold().to_string(),
        });
    }
    let mut rots: Vec<[[f64; 3]; 3]> = Vec::new();
    let mut weights: Vec<f64> = Vec::new();
    for (p, &w) in d.points().iter().zip(d.weights()) {
        let Point::Sphere3(q) = p else { unreachable!() };
        let r = covering_map(q);
        match rots.iter().position(|s| rotation_distance(s, &r) <= dedup_tol) {
            Some(i) => weights[i] += w,
            None => {
                rots.push(r);
                weights.push(w);
            }
        }
    }
    let pts = rots.iter().map(|r| Point::So3(Euler::from_matrix(r))).collect();
    Design::new(Manifold::So3, pts, weights)
}

/// Placement of grid nodes on a polar-type angle in `[0, pi]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum GridConvention {
    /// `j pi / (n - 1)`, both poles included.
    Endpoints,
    /// `(j + 1/2) pi / n`.
    Midpoint,
    /// `j pi / n`.
    LeftOpen,
    /// Equally spaced in `cos`: `acos(1 - 2 j / (n - 1))`, both poles included.
    #[default]
    CosineEndpoints,
}

impl GridConvention {
    /// The `n` polar nodes; a single node sits on the equator.
    pub fn nodes(self, n: usize) -> Vec<f64> {
        if n == 1 && matches!(self, Self::Endpoints | Self::CosineEndpoints) {
            return vec![0.5 * PI];
        }
        let nf = n as f64;
        (0..n)
            .map(|j| {
                let j = j as f64;
                match self {
                    Self::Endpoints => j * PI / (nf - 1.0),
                    Self::Midpoint => (j + 0.5) * PI / nf,
                    Self::LeftOpen => j * PI / nf,
                    Self::CosineEndpoints => (1.0 - 2.0 * j / (nf - 1.0)).clamp(-1.0, 1.0).acos(),
                }
            })
            .collect()
    }
}

impl std::str::FromStr for GridConvention {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().replace(['-', '_'], "").as_str() {
            "endpoints" => Ok(Self::Endpoints),
            "midpoint" | "midpoints" => Ok(Self::Midpoint),
            "leftopen" => Ok(Self::LeftOpen),
            "cosineendpoints" | "cosine" => Ok(Self::CosineEndpoints),
            _ => Err(Error::Domain(format!("unknown grid convention '{s}'"))),
        }
    }
}

impl std::fmt::Display for GridConvention {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Self::Endpoints => "endpoints",
            Self::Midpoint => "midpoint",
            Self::LeftOpen => "left-open",
            Self::CosineEndpoints => "cosine-endpoints",
        })
    }
}

fn azimuths(n: usize) -> impl Iterator<Item = f64> {
    (0..n).map(move |i| TAU * i as f64 / n as f64)
}

fn euler_points(n_alpha: usize, n_beta: usize, n_gamma: usize, conv: GridConvention) -> Vec<Euler> {
    let betas = conv.nodes(n_beta);
    let mut out = Vec::with_capacity(n_alpha * n_beta * n_gamma);
    for a in azimuths(n_alpha) {
        for &b in &betas {
            for g in azimuths(n_gamma) {
                out.push(Euler::new(a, b, g));
            }
        }
    }
    out
}

/// Equal-weight product grid in z-y-z Euler angles; `alpha`, `gamma` at
/// `2 pi i / n`, `beta` placed by `conv`.
pub fn euler_grid(n_alpha: usize, n_beta: usize, n_gamma: usize, conv: GridConvention) -> Result<Design> {
    check_counts(&[n_alpha, n_beta, n_gamma])?;
    let pts = euler_points(n_alpha, n_beta, n_gamma, conv)
        .into_iter()
        .map(Point::So3)
        .collect();
    Design::equal_weight(Manifold::So3, pts)
}

/// Product grid in polar and azimuthal angle. Grid nodes that coincide on the
/// sphere (the poles) are merged, so the measure is unchanged but the support
/// may be smaller than `n_theta * n_phi`.
pub fn sphere2_grid(n_theta: usize, n_phi: usize, conv: GridConvention) -> Result<Design> {
    check_counts(&[n_theta, n_phi])?;
    let mut pts = Vec::with_capacity(n_theta * n_phi);
    for &t in &conv.nodes(n_theta) {
        for p in azimuths(n_phi) {
            pts.push(Point::Sphere2(sphere_point(t, p)));
        }
    }
    Design::equal_weight(Manifold::Sphere2, pts)
}

/// Product measure of a design on `S^2` and a design on `SO(3)`.
pub fn product_design(d1: &Design, d2: &Design) -> Result<Design> {
    if d1.manifold() != Manifold::Sphere2 || d2.manifold() != Manifold::So3 {
        return Err(Error::Manifold {
            expected: "s2 x so3".into(),
            found: format!("{} x {}", d1.manifold(), d2.manifold()),
        });
    }
    let mut pts = Vec::with_capacity(d1.len() * d2.len());
    let mut weights = Vec::with_capacity(d1.len() * d2.len());
    for (p, w1) in d1.points().iter().zip(d1.weights()) {
        let Point::Sphere2(x) = p else { unreachable!() };
        for (q, w2) in d2.points().iter().zip(d2.weights()) {
            let Point::So3(e) = q else { unreachable!() };
            pts.push(Point::Sphere2xSo3(*x, *e));
            weights.push(w1 * w2);
        }
    }
    normalize(&mut weights);
    Design::new(Manifold::Sphere2xSo3, pts, weights)
}

fn normalize(w: &mut [f64]) {
    let total = compensated_sum(w);
    w.iter_mut().for_each(|x| *x /= total);
}

fn gaussian_unit<const N: usize>(rng: &mut ChaCha8Rng) -> [f64; N] {
    loop {
        let mut v = [0.0; N];
        for x in &mut v {
            *x = rng.sample(StandardNormal);
        }
        let r = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if r > 1e-12 {
            v.iter_mut().for_each(|x| *x /= r);
            return v;
        }
    }
}

fn haar_rotation(rng: &mut ChaCha8Rng) -> Euler {
    Euler::from_matrix(&covering_map(&gaussian_unit::<4>(rng)))
}

/// Haar-distributed random point on `manifold`.
pub fn haar_point(manifold: Manifold, rng: &mut ChaCha8Rng) -> Point {
    let unit = |rng: &mut ChaCha8Rng| 1.0 - rng.random::<f64>();
    match manifold {
        Manifold::Circle => Point::Circle(unit(rng)),
        Manifold::Torus(d) => Point::Torus((0..d).map(|_| unit(rng)).collect()),
        Manifold::Sphere2 => Point::Sphere2(gaussian_unit::<3>(rng)),
        Manifold::Sphere3 => Point::Sphere3(gaussian_unit::<4>(rng)),
        Manifold::So3 => Point::So3(haar_rotation(rng)),
        Manifold::Sphere2xSo3 => Point::Sphere2xSo3(gaussian_unit::<3>(rng), haar_rotation(rng)),
    }
}

/// `count` Haar samples as a deterministic (given `seed`) equal-weight design.
pub fn haar_sample(manifold: Manifold, count: usize, seed: u64) -> Result<Design> {
    Design::equal_weight(manifold, haar_points(manifold, count, seed)?)
}

pub fn haar_points(manifold: Manifold, count: usize, seed: u64) -> Result<Vec<Point>> {
    if count == 0 {
        return Err(Error::Domain("sample count must be positive".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Ok((0..count).map(|_| haar_point(manifold, &mut rng)).collect())
}

/// The 24 unit Hurwitz quaternions `+-1, +-i, +-j, +-k, (+-1 +-i +-j +-k)/2`
/// (the binary tetrahedral group, vertices of the 24-cell). They integrate
/// every harmonic of degree at most 5 on `S^3` exactly.
pub fn binary_tetrahedral() -> Design {
    let mut pts = Vec::with_capacity(24);
    for axis in 0..4 {
        for s in [1.0, -1.0] {
            let mut q = [0.0; 4];
            q[axis] = s;
            pts.push(Point::Sphere3(q));
        }
    }
    for mask in 0..16u32 {
        let sign = |b: u32| if mask & (1 << b) == 0 { 0.5 } else { -0.5 };
        pts.push(Point::Sphere3([sign(0), sign(1), sign(2), sign(3)]));
    }
    Design::equal_weight(Manifold::Sphere3, pts).expect("fixed construction is valid")
}

/// Vertices of the regular icosahedron, a spherical 5-design on `S^2`.
pub fn icosahedron() -> Design {
    let g = 0.5 * (1.0 + 5f64.sqrt());
    let r = (1.0 + g * g).sqrt();
    let mut pts = Vec::with_capacity(12);
    for s1 in [1.0, -1.0] {
        for s2 in [1.0, -1.0] {
            let (a, b) = (s1 / r, s2 * g / r);
            pts.push(Point::Sphere2([0.0, a, b]));
            pts.push(Point::Sphere2([a, b, 0.0]));
            pts.push(Point::Sphere2([b, 0.0, a]));
        }
    }
    Design::equal_weight(Manifold::Sphere2, pts).expect("fixed construction is valid")
}
