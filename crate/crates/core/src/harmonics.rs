//! Orthonormal Laplace-Beltrami eigenfunction bases for the catalog manifolds.
//!
//! Every basis is normalized in `L^2` of the *probability* Haar (or volume)
//! measure, so the Haar measure has information matrix `I_D`. For the sphere
//! and rotation group this means the familiar functions are rescaled:
//! `sqrt(4 pi) Y_l^m` on `S^2` and `sqrt(2l + 1) D^l_{m,m'}` on `SO(3)`.
//!
//! Basis vectors are laid out level by level, levels ascending. Within a level:
//!
//! * circle: frequencies `k, -k`;
//! * torus: frequency vectors in lexicographic order;
//! * `S^2`: `m = -l..=l`;
//! * `S^3`: `(l, m)` with `l = 0..=n` outer and `m = -l..=l` inner;
//! * `SO(3)`: `(m, m')` with `m` outer and `m'` inner;
//! * `S^2 x SO(3)`: the `S^2` index outer, the `SO(3)` index inner.

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::geometry::{hyperspherical_angles, sphere_angles, Euler, Manifold, Point};
use crate::specialfn::{
    assoc_legendre_unchecked, gegenbauer_unchecked, jacobi_unchecked, ln_factorial,
};

/// Degree label of an eigenspace block.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Degree {
    /// Circle `|k|`, torus `|k|^2`, or the degree `l` on spheres and `SO(3)`.
    Single(u32),
    /// `(l_{S^2}, l_{SO(3)})` on the product manifold.
    Pair(u32, u32),
}

impl std::fmt::Display for Degree {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Degree::Single(l) => write!(f, "{l}"),
            Degree::Pair(a, b) => write!(f, "({a},{b})"),
        }
    }
}

/// One eigenspace block of the truncated basis.
#[derive(Debug, Clone, PartialEq)]
pub struct Level {
    pub degree: Degree,
    pub eigenvalue: f64,
    pub multiplicity: usize,
    /// Index of the first basis function of this block.
    pub offset: usize,
}

/// Truncation of the eigenfunction expansion on a given manifold.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Truncation {
    /// Frequencies `-n..=n`.
    Circle { max_frequency: u32 },
    /// Per-axis frequency box `|k_i| <= n_i`.
    Torus { max_frequency: Vec<u32> },
    Sphere2 { degree: u32 },
    Sphere3 { degree: u32 },
    So3 { degree: u32 },
    Sphere2xSo3 { sphere_degree: u32, rotation_degree: u32 },
}

/// A regression model: manifold, truncation and the induced level table.
#[derive(Debug, Clone, PartialEq)]
pub struct ModelSpec {
    truncation: Truncation,
    levels: Vec<Level>,
    /// Frequency vectors in basis order (circle and torus only).
    frequencies: Vec<Vec<i32>>,
}

impl ModelSpec {
    pub fn circle(max_frequency: u32) -> Self {
        Self::new(Truncation::Circle { max_frequency })
    }

    pub fn torus(max_frequency: Vec<u32>) -> Result<Self> {
        if max_frequency.is_empty() {
            return Err(Error::Domain("torus needs at least one axis".into()));
        }
        Ok(Self::new(Truncation::Torus { max_frequency }))
    }

    pub fn sphere2(degree: u32) -> Self {
        Self::new(Truncation::Sphere2 { degree })
    }

    pub fn sphere3(degree: u32) -> Self {
        Self::new(Truncation::Sphere3 { degree })
    }

    pub fn so3(degree: u32) -> Self {
        Self::new(Truncation::So3 { degree })
    }

    pub fn sphere2_so3(sphere_degree: u32, rotation_degree: u32) -> Self {
        Self::new(Truncation::Sphere2xSo3 {
            sphere_degree,
            rotation_degree,
        })
    }

    /// The same manifold truncated at a single degree (per axis / per factor).
    pub fn with_degree(manifold: Manifold, degree: u32) -> Self {
        match manifold {
            Manifold::Circle => Self::circle(degree),
            Manifold::Torus(d) => Self::new(Truncation::Torus {
                max_frequency: vec![degree; d],
            }),
            Manifold::Sphere2 => Self::sphere2(degree),
            Manifold::Sphere3 => Self::sphere3(degree),
            Manifold::So3 => Self::so3(degree),
            Manifold::Sphere2xSo3 => Self::sphere2_so3(degree, degree),
        }
    }

    pub fn new(truncation: Truncation) -> Self {
        let mut levels = Vec::new();
        let mut frequencies = Vec::new();
        let push = |levels: &mut Vec<Level>, degree, eigenvalue, multiplicity| {
            let offset = levels.last().map_or(0, |l: &Level| l.offset + l.multiplicity);
            levels.push(Level {
                degree,
                eigenvalue,
                multiplicity,
                offset,
            });
        };
        match &truncation {
            Truncation::Circle { max_frequency } => {
                for k in 0..=*max_frequency {
                    let k = k as i32;
                    if k == 0 {
                        frequencies.push(vec![0]);
                    } else {
                        frequencies.push(vec![k]);
                        frequencies.push(vec![-k]);
                    }
                    let mult = if k == 0 { 1 } else { 2 };
                    push(&mut levels, Degree::Single(k as u32), TAU * TAU * (k * k) as f64, mult);
                }
            }
            Truncation::Torus { max_frequency } => {
                let mut all: Vec<Vec<i32>> = vec![vec![]];
                for &n in max_frequency {
                    let n = n as i32;
                    all = all
                        .into_iter()
                        .flat_map(|prefix| {
                            (-n..=n).map(move |k| {
                                let mut v = prefix.clone();
                                v.push(k);
                                v
                            })
                        })
                        .collect();
                }
                let norm2 = |v: &Vec<i32>| v.iter().map(|k| k * k).sum::<i32>();
                all.sort_by(|a, b| norm2(a).cmp(&norm2(b)).then_with(|| a.cmp(b)));
                let mut i = 0;
                while i < all.len() {
                    let r = norm2(&all[i]);
                    let j = all[i..].iter().take_while(|v| norm2(v) == r).count();
                    push(&mut levels, Degree::Single(r as u32), TAU * TAU * r as f64, j);
                    i += j;
                }
                frequencies = all;
            }
            Truncation::Sphere2 { degree } => {
                for l in 0..=*degree {
                    push(&mut levels, Degree::Single(l), sphere2_eigenvalue(l), (2 * l + 1) as usize);
                }
            }
            Truncation::Sphere3 { degree } => {
                for l in 0..=*degree {
                    push(&mut levels, Degree::Single(l), sphere3_eigenvalue(l), ((l + 1) * (l + 1)) as usize);
                }
            }
            Truncation::So3 { degree } => {
                for l in 0..=*degree {
                    push(&mut levels, Degree::Single(l), so3_eigenvalue(l), ((2 * l + 1) * (2 * l + 1)) as usize);
                }
            }
            Truncation::Sphere2xSo3 {
                sphere_degree,
                rotation_degree,
            } => {
                for a in 0..=*sphere_degree {
                    for b in 0..=*rotation_degree {
                        let mult = (2 * a + 1) * (2 * b + 1) * (2 * b + 1);
                        push(&mut levels, Degree::Pair(a, b), product_eigenvalue(a, b), mult as usize);
                    }
                }
            }
        }
        Self {
            truncation,
            levels,
            frequencies,
        }
    }

    pub fn truncation(&self) -> &Truncation {
        &self.truncation
    }

    pub fn manifold(&self) -> Manifold {
        match &self.truncation {
            Truncation::Circle { .. } => Manifold::Circle,
            Truncation::Torus { max_frequency } => Manifold::Torus(max_frequency.len()),
            Truncation::Sphere2 { .. } => Manifold::Sphere2,
            Truncation::Sphere3 { .. } => Manifold::Sphere3,
            Truncation::So3 { .. } => Manifold::So3,
            Truncation::Sphere2xSo3 { .. } => Manifold::Sphere2xSo3,
        }
    }

    pub fn levels(&self) -> &[Level] {
        &self.levels
    }

    /// Number of regression functions `D`.
    pub fn dimension(&self) -> usize {
        self.levels.last().map_or(0, |l| l.offset + l.multiplicity)
    }

    pub fn eigenvalue(&self, level: usize) -> Result<f64> {
        self.level(level).map(|l| l.eigenvalue)
    }

    pub fn multiplicity(&self, level: usize) -> Result<usize> {
        self.level(level).map(|l| l.multiplicity)
    }

    pub fn level(&self, level: usize) -> Result<&Level> {
        self.levels.get(level).ok_or(Error::Index {
            index: level,
            max: self.levels.len().saturating_sub(1),
        })
    }

    /// Index of the level with the given product degree pair.
    pub fn level_of_pair(&self, sphere: u32, rotation: u32) -> Option<usize> {
        self.levels
            .iter()
            .position(|l| l.degree == Degree::Pair(sphere, rotation))
    }

    /// Evaluates `phi(g)` in the canonical order.
    pub fn basis_vector(&self, g: &Point) -> Result<Vec<Complex64>> {
        let mut out = Vec::with_capacity(self.dimension());
        match (&self.truncation, g) {
            (Truncation::Circle { .. }, Point::Circle(x)) => {
                for k in &self.frequencies {
                    out.push(Complex64::from_polar(1.0, TAU * k[0] as f64 * x));
                }
            }
            (Truncation::Torus { max_frequency }, Point::Torus(x)) if x.len() == max_frequency.len() => {
                for k in &self.frequencies {
                    let phase: f64 = k.iter().zip(x).map(|(&ki, &xi)| ki as f64 * xi).sum();
                    out.push(Complex64::from_polar(1.0, TAU * phase));
                }
            }
            (Truncation::Sphere2 { degree }, Point::Sphere2(x)) => {
                sphere2_block(*degree, x, &mut out);
            }
            (Truncation::Sphere3 { degree }, Point::Sphere3(x)) => {
                let (chi, theta, phi) = hyperspherical_angles(x);
                for n in 0..=*degree {
                    for l in 0..=n {
                        for m in -(l as i32)..=(l as i32) {
                            out.push(hyperspherical_unchecked(n, l, m, chi, theta, phi));
                        }
                    }
                }
            }
            (Truncation::So3 { degree }, Point::So3(e)) => {
                so3_block(*degree, e, &mut out);
            }
            (
                Truncation::Sphere2xSo3 {
                    sphere_degree,
                    rotation_degree,
                },
                Point::Sphere2xSo3(x, e),
            ) => {
                let mut s2 = Vec::new();
                sphere2_block(*sphere_degree, x, &mut s2);
                let mut so3 = Vec::new();
                so3_block(*rotation_degree, e, &mut so3);
                let s2_off = |l: u32| (l * l) as usize;
                let so3_off = |l: u32| (4 * l * l * l - l) as usize / 3;
                for a in 0..=*sphere_degree {
                    for b in 0..=*rotation_degree {
                        let sa = &s2[s2_off(a)..s2_off(a) + (2 * a + 1) as usize];
                        let nb = ((2 * b + 1) * (2 * b + 1)) as usize;
                        let sb = &so3[so3_off(b)..so3_off(b) + nb];
                        for y in sa {
                            for d in sb {
                                out.push(y * d);
                            }
                        }
                    }
                }
            }
            _ => {
                return Err(Error::Manifold {
                    expected: self.manifold().to_string(),
                    found: g.manifold().to_string(),
                })
            }
        }
        Ok(out)
    }
}

/// Eigenvalue `l(l+1)` of the unit 2-sphere.
pub fn sphere2_eigenvalue(l: u32) -> f64 {
    (l * (l + 1)) as f64
}

/// Eigenvalue `l(l+2)` of the unit 3-sphere.
pub fn sphere3_eigenvalue(l: u32) -> f64 {
    (l * (l + 2)) as f64
}

/// `SO(3)` levels share the `l(l+2)` labelling with `S^3`; only their order matters.
pub fn so3_eigenvalue(l: u32) -> f64 {
    (l * (l + 2)) as f64
}

/// Product-manifold eigenvalue label `l1(l1+1) l2(l2+1)`.
pub fn product_eigenvalue(sphere: u32, rotation: u32) -> f64 {
    (sphere * (sphere + 1)) as f64 * (rotation * (rotation + 1)) as f64
}

/// `sqrt(4 pi) Y_l^m` for `l <= degree`, `m = -l..=l`.
fn sphere2_block(degree: u32, x: &[f64; 3], out: &mut Vec<Complex64>) {
    let (theta, phi) = sphere_angles(x);
    let ct = x[2].clamp(-1.0, 1.0);
    let _ = theta;
    for l in 0..=degree {
        for m in -(l as i32)..=(l as i32) {
            out.push(scaled_spherical_harmonic(l, m, ct, phi));
        }
    }
}

/// `sqrt(4 pi) Y_l^m(theta, phi)` from `cos theta`.
fn scaled_spherical_harmonic(l: u32, m: i32, cos_theta: f64, phi: f64) -> Complex64 {
    let am = m.unsigned_abs();
    let norm = ((2 * l + 1) as f64 * (ln_factorial(l - am) - ln_factorial(l + am)).exp()).sqrt();
    let p = assoc_legendre_unchecked(l, am, cos_theta);
    let y = Complex64::from_polar(norm * p, am as f64 * phi);
    if m >= 0 {
        y
    } else if am % 2 == 0 {
        y.conj()
    } else {
        -y.conj()
    }
}

/// Surface-normalized spherical harmonic `Y_l^m(theta, phi)`
/// (Condon-Shortley phase, unit norm on the unit sphere of area `4 pi`).
pub fn spherical_harmonic(l: u32, m: i32, theta: f64, phi: f64) -> Result<Complex64> {
    if m.unsigned_abs() > l {
        return Err(Error::Domain(format!("|m|={} exceeds l={l}", m.abs())));
    }
    Ok(scaled_spherical_harmonic(l, m, theta.cos(), phi) / (4.0 * PI).sqrt())
}

fn so3_block(degree: u32, e: &Euler, out: &mut Vec<Complex64>) {
    for l in 0..=degree {
        let scale = ((2 * l + 1) as f64).sqrt();
        let li = l as i32;
        for m in -li..=li {
            for mp in -li..=li {
                out.push(wigner_big_d_unchecked(l, m, mp, e.alpha, e.beta, e.gamma) * scale);
            }
        }
    }
}

fn check_orders(l: u32, m: i32, mp: i32) -> Result<()> {
    if m.unsigned_abs() > l || mp.unsigned_abs() > l {
        return Err(Error::Domain(format!("orders ({m}, {mp}) out of range for l={l}")));
    }
    Ok(())
}

/// Wigner small-d function `d^l_{m,m'}(beta)` in the Jacobi-polynomial form
/// with `k = l - max(|m|,|m'|)`, `a = |m - m'|`, `b = |m + m'|` and sign
/// `(-1)^nu`, `nu = max(0, m' - m)`.
pub fn wigner_d(l: u32, m: i32, mp: i32, beta: f64) -> Result<f64> {
    check_orders(l, m, mp)?;
    Ok(wigner_d_unchecked(l, m, mp, beta))
}

pub(crate) fn wigner_d_unchecked(l: u32, m: i32, mp: i32, beta: f64) -> f64 {
    let k = l - m.unsigned_abs().max(mp.unsigned_abs());
    let a = (m - mp).unsigned_abs();
    let b = (m + mp).unsigned_abs();
    let sign = if mp > m && (mp - m) % 2 == 1 { -1.0 } else { 1.0 };
    // binom(2l - k, k + a)^{1/2} binom(k + b, b)^{-1/2}
    let ln_pref = 0.5
        * (ln_factorial(2 * l - k) - ln_factorial(k + a) - ln_factorial(2 * l - 2 * k - a))
        - 0.5 * (ln_factorial(k + b) - ln_factorial(b) - ln_factorial(k));
    let (s, c) = (0.5 * beta).sin_cos();
    sign * ln_pref.exp()
        * s.powi(a as i32)
        * c.powi(b as i32)
        * jacobi_unchecked(k, a as f64, b as f64, beta.cos())
}

/// Wigner D-function `e^{-i m alpha} d^l_{m,m'}(beta) e^{-i m' gamma}`.
pub fn wigner_big_d(l: u32, m: i32, mp: i32, alpha: f64, beta: f64, gamma: f64) -> Result<Complex64> {
    check_orders(l, m, mp)?;
    Ok(wigner_big_d_unchecked(l, m, mp, alpha, beta, gamma))
}

fn wigner_big_d_unchecked(l: u32, m: i32, mp: i32, alpha: f64, beta: f64, gamma: f64) -> Complex64 {
    let d = wigner_d_unchecked(l, m, mp, beta);
    Complex64::from_polar(d, -(m as f64) * alpha - (mp as f64) * gamma)
}

/// Normalized hyperspherical harmonic on `S^3`,
/// `A_{n,l} sin^l(chi) C_{n-l}^{l+1}(cos chi) Y_l^m(theta, phi)`, with
/// `A_{n,l}` chosen for unit norm under the probability measure on `S^3`.
pub fn hyperspherical(n: u32, l: u32, m: i32, chi: f64, theta: f64, phi: f64) -> Result<Complex64> {
    if l > n || m.unsigned_abs() > l {
        return Err(Error::Domain(format!("invalid hyperspherical indices (n={n}, l={l}, m={m})")));
    }
    Ok(hyperspherical_unchecked(n, l, m, chi, theta, phi))
}

fn hyperspherical_unchecked(n: u32, l: u32, m: i32, chi: f64, theta: f64, phi: f64) -> Complex64 {
    // int_0^pi sin^{2l+2} chi [C_{n-l}^{l+1}(cos chi)]^2 dchi
    //   = pi 2^{-2l-1} (n+l+1)! / ((n-l)! (n+1) (l!)^2)
    let ln_radial_norm = PI.ln() - (2 * l + 1) as f64 * std::f64::consts::LN_2
        + ln_factorial(n + l + 1)
        - ln_factorial(n - l)
        - ((n + 1) as f64).ln()
        - 2.0 * ln_factorial(l);
    // probability measure on S^3: sin^2 chi sin theta dchi dtheta dphi / (2 pi^2)
    let amplitude = (0.5 * ((2.0 * PI * PI).ln() - ln_radial_norm)).exp();
    let (sc, cc) = chi.sin_cos();
    let radial = sc.powi(l as i32) * gegenbauer_unchecked(n - l, (l + 1) as f64, cc);
    let ylm = scaled_spherical_harmonic(l, m, theta.cos(), phi) / (4.0 * PI).sqrt();
    ylm * (amplitude * radial)
}
