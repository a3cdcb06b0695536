//! Points on the catalog manifolds and the rotation-group conversions between
//! unit quaternions, rotation matrices and z-y-z Euler angles.

use std::f64::consts::{PI, TAU};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type Rotation = [[f64; 3]; 3];

/// The manifolds the library knows how to expand in Laplace-Beltrami eigenfunctions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Manifold {
    /// `S^1 = R/Z`, coordinate in `(0, 1]`.
    Circle,
    /// `T^d = (0, 1]^d`.
    Torus(usize),
    /// Unit 2-sphere in `R^3`.
    Sphere2,
    /// Unit 3-sphere in `R^4`, identified with `SU(2)`.
    Sphere3,
    /// Rotation group, z-y-z Euler angles.
    So3,
    /// `S^2 x SO(3)`.
    Sphere2xSo3,
}

impl Manifold {
    /// Number of stored coordinates per point.
    pub fn coordinate_count(&self) -> usize {
        match self {
            Manifold::Circle => 1,
            Manifold::Torus(d) => *d,
            Manifold::Sphere2 => 3,
            Manifold::Sphere3 => 4,
            Manifold::So3 => 3,
            Manifold::Sphere2xSo3 => 6,
        }
    }

    pub fn tag(&self) -> String {
        match self {
            Manifold::Circle => "s1".into(),
            Manifold::Torus(d) => format!("t{d}"),
            Manifold::Sphere2 => "s2".into(),
            Manifold::Sphere3 => "s3".into(),
            Manifold::So3 => "so3".into(),
            Manifold::Sphere2xSo3 => "s2xso3".into(),
        }
    }
}

impl fmt::Display for Manifold {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.tag())
    }
}

impl FromStr for Manifold {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let lower = s.to_ascii_lowercase();
        match lower.as_str() {
            "s1" | "circle" => Ok(Manifold::Circle),
            "s2" | "sphere2" => Ok(Manifold::Sphere2),
            "s3" | "su2" | "sphere3" => Ok(Manifold::Sphere3),
            "so3" => Ok(Manifold::So3),
            "s2xso3" | "s2-so3" => Ok(Manifold::Sphere2xSo3),
            other => other
                .strip_prefix('t')
                .and_then(|d| d.parse::<usize>().ok())
                .filter(|&d| d >= 1)
                .map(Manifold::Torus)
                .ok_or_else(|| Error::Domain(format!("unknown manifold '{s}'"))),
        }
    }
}

/// z-y-z Euler angles: `R = Rz(alpha) Ry(beta) Rz(gamma)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Euler {
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
}

impl Euler {
    /// Wraps `alpha` and `gamma` into `[0, 2pi)` and clamps `beta` into `[0, pi]`.
    pub fn new(alpha: f64, beta: f64, gamma: f64) -> Self {
        Self {
            alpha: wrap_angle(alpha),
            beta: beta.clamp(0.0, PI),
            gamma: wrap_angle(gamma),
        }
    }

    pub fn to_matrix(&self) -> Rotation {
        let (sa, ca) = self.alpha.sin_cos();
        let (sb, cb) = self.beta.sin_cos();
        let (sg, cg) = self.gamma.sin_cos();
        [
            [ca * cb * cg - sa * sg, -ca * cb * sg - sa * cg, ca * sb],
            [sa * cb * cg + ca * sg, -sa * cb * sg + ca * cg, sa * sb],
            [-sb * cg, sb * sg, cb],
        ]
    }

    /// Canonical Euler triple of a rotation matrix; `gamma = 0` on the gimbal-lock set.
    pub fn from_matrix(r: &Rotation) -> Self {
        let beta = r[2][2].clamp(-1.0, 1.0).acos();
        let sb = (r[0][2] * r[0][2] + r[1][2] * r[1][2]).sqrt();
        if sb > 1e-12 {
            let alpha = r[1][2].atan2(r[0][2]);
            let gamma = r[2][1].atan2(-r[2][0]);
            Self::new(alpha, beta, gamma)
        } else if r[2][2] > 0.0 {
            Self::new(r[1][0].atan2(r[0][0]), 0.0, 0.0)
        } else {
            Self::new((-r[0][1]).atan2(r[1][1]), PI, 0.0)
        }
    }
}

pub fn wrap_angle(x: f64) -> f64 {
    let w = x.rem_euclid(TAU);
    if w >= TAU {
        0.0
    } else {
        w
    }
}

/// Wraps into the circle chart `(0, 1]`.
pub fn wrap_unit(x: f64) -> f64 {
    let w = x.rem_euclid(1.0);
    if w == 0.0 {
        1.0
    } else {
        w
    }
}

/// The double cover `SU(2) -> SO(3)` applied to the unit 4-vector `(x, y, u, v)`
/// representing `[[x + iy, u + iv], [-u + iv, x - iy]]`.
pub fn covering_map(q: &[f64; 4]) -> Rotation {
    let [x, y, u, v] = *q;
    [
        [
            x * x + y * y - u * u - v * v,
            2.0 * (y * v + x * u),
            -2.0 * (x * v - y * u),
        ],
        [
            -2.0 * (x * u - y * v),
            x * x - y * y - u * u + v * v,
            2.0 * (x * y + u * v),
        ],
        [
            2.0 * (x * v + y * u),
            -2.0 * (x * y - u * v),
            x * x - y * y + u * u - v * v,
        ],
    ]
}

pub fn rotation_distance(a: &Rotation, b: &Rotation) -> f64 {
    let mut s = 0.0;
    for i in 0..3 {
        for j in 0..3 {
            s += (a[i][j] - b[i][j]).powi(2);
        }
    }
    s.sqrt()
}

/// Largest deviation of `R^T R` from the identity, and the determinant.
pub fn orthogonality_defect(r: &Rotation) -> (f64, f64) {
    let mut worst = 0.0_f64;
    for i in 0..3 {
        for j in 0..3 {
            let dot: f64 = (0..3).map(|k| r[k][i] * r[k][j]).sum();
            let target = if i == j { 1.0 } else { 0.0 };
            worst = worst.max((dot - target).abs());
        }
    }
    let det = r[0][0] * (r[1][1] * r[2][2] - r[1][2] * r[2][1])
        - r[0][1] * (r[1][0] * r[2][2] - r[1][2] * r[2][0])
        + r[0][2] * (r[1][0] * r[2][1] - r[1][1] * r[2][0]);
    (worst, det)
}

/// Polar angle `theta` and azimuth `phi` of a unit 3-vector.
pub fn sphere_angles(x: &[f64; 3]) -> (f64, f64) {
    let theta = x[2].clamp(-1.0, 1.0).acos();
    let phi = if x[0] == 0.0 && x[1] == 0.0 {
        0.0
    } else {
        wrap_angle(x[1].atan2(x[0]))
    };
    (theta, phi)
}

pub fn sphere_point(theta: f64, phi: f64) -> [f64; 3] {
    let (st, ct) = theta.sin_cos();
    let (sp, cp) = phi.sin_cos();
    [st * cp, st * sp, ct]
}

/// Hyperspherical angles `(chi, theta, phi)` of a unit 4-vector under
/// `x0 = cos chi`, `x1 = sin chi cos theta`,
/// `x2 = sin chi sin theta cos phi`, `x3 = sin chi sin theta sin phi`.
pub fn hyperspherical_angles(x: &[f64; 4]) -> (f64, f64, f64) {
    let chi = x[0].clamp(-1.0, 1.0).acos();
    let r = (x[1] * x[1] + x[2] * x[2] + x[3] * x[3]).sqrt();
    if r == 0.0 {
        return (chi, 0.0, 0.0);
    }
    let theta = (x[1] / r).clamp(-1.0, 1.0).acos();
    let phi = if x[2] == 0.0 && x[3] == 0.0 {
        0.0
    } else {
        wrap_angle(x[3].atan2(x[2]))
    };
    (chi, theta, phi)
}

/// A location on one of the catalog manifolds.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum Point {
    Circle(f64),
    Torus(Vec<f64>),
    /// Unit 3-vector.
    Sphere2([f64; 3]),
    /// Unit 4-vector.
    Sphere3([f64; 4]),
    So3(Euler),
    Sphere2xSo3([f64; 3], Euler),
}

impl Point {
    pub fn manifold(&self) -> Manifold {
        match self {
            Point::Circle(_) => Manifold::Circle,
            Point::Torus(x) => Manifold::Torus(x.len()),
            Point::Sphere2(_) => Manifold::Sphere2,
            Point::Sphere3(_) => Manifold::Sphere3,
            Point::So3(_) => Manifold::So3,
            Point::Sphere2xSo3(..) => Manifold::Sphere2xSo3,
        }
    }

    /// Stored coordinates: circle/torus values, Cartesian unit vectors, Euler triples.
    pub fn coordinates(&self) -> Vec<f64> {
        match self {
            Point::Circle(x) => vec![*x],
            Point::Torus(x) => x.clone(),
            Point::Sphere2(x) => x.to_vec(),
            Point::Sphere3(x) => x.to_vec(),
            Point::So3(e) => vec![e.alpha, e.beta, e.gamma],
            Point::Sphere2xSo3(x, e) => vec![x[0], x[1], x[2], e.alpha, e.beta, e.gamma],
        }
    }

    /// Builds a point from stored coordinates, canonicalizing angle ranges.
    /// Unit-vector rows are not renormalized here.
    pub fn from_coordinates(manifold: Manifold, c: &[f64]) -> Result<Self> {
        if c.len() != manifold.coordinate_count() {
            return Err(Error::Data(format!(
                "{manifold} points need {} coordinates, got {}",
                manifold.coordinate_count(),
                c.len()
            )));
        }
        Ok(match manifold {
            Manifold::Circle => Point::Circle(wrap_unit(c[0])),
            Manifold::Torus(_) => Point::Torus(c.iter().map(|&x| wrap_unit(x)).collect()),
            Manifold::Sphere2 => Point::Sphere2([c[0], c[1], c[2]]),
            Manifold::Sphere3 => Point::Sphere3([c[0], c[1], c[2], c[3]]),
            Manifold::So3 => Point::So3(Euler::new(c[0], c[1], c[2])),
            Manifold::Sphere2xSo3 => {
                Point::Sphere2xSo3([c[0], c[1], c[2]], Euler::new(c[3], c[4], c[5]))
            }
        })
    }

    /// Deviation from the manifold constraint (unit norm for sphere points).
    pub fn constraint_defect(&self) -> f64 {
        fn unit(x: &[f64]) -> f64 {
            (x.iter().map(|v| v * v).sum::<f64>().sqrt() - 1.0).abs()
        }
        match self {
            Point::Sphere2(x) | Point::Sphere2xSo3(x, _) => unit(x),
            Point::Sphere3(x) => unit(x),
            _ => 0.0,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn euler_round_trip() {
        for &(a, b, g) in &[(0.3, 1.1, 5.0), (6.0, 0.2, 0.1), (1.0, 3.0, 2.0), (0.0, 1.5, 0.0)] {
            let e = Euler::new(a, b, g);
            let back = Euler::from_matrix(&e.to_matrix());
            assert!(rotation_distance(&e.to_matrix(), &back.to_matrix()) < 1e-12);
            assert!((back.alpha - a).abs() < 1e-12 && (back.gamma - g).abs() < 1e-12);
        }
        // gimbal lock: only alpha + gamma (beta = 0) or alpha - gamma (beta = pi) survive
        for &b in &[0.0, PI] {
            let e = Euler::new(1.0, b, 0.4);
            let back = Euler::from_matrix(&e.to_matrix());
            assert!(rotation_distance(&e.to_matrix(), &back.to_matrix()) < 1e-12);
        }
    }

    #[test]
    fn covering_map_identity_and_antipodes() {
        let id = covering_map(&[1.0, 0.0, 0.0, 0.0]);
        assert!(rotation_distance(&id, &[[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]]) == 0.0);
        let q = [0.5, -0.5, 0.5, 0.5];
        let mq = q.map(|v| -v);
        assert_eq!(covering_map(&q), covering_map(&mq));
        let (orth, det) = orthogonality_defect(&covering_map(&q));
        assert!(orth < 1e-14 && (det - 1.0).abs() < 1e-14);
    }

    #[test]
    fn manifold_tags_parse() {
        for m in [
            Manifold::Circle,
            Manifold::Torus(3),
            Manifold::Sphere2,
            Manifold::Sphere3,
            Manifold::So3,
            Manifold::Sphere2xSo3,
        ] {
            assert_eq!(m.tag().parse::<Manifold>().unwrap(), m);
        }
        assert!("s7".parse::<Manifold>().is_err());
    }

    #[test]
    fn hyperspherical_angles_reconstruct() {
        let x = [0.1, -0.3, 0.5, 0.0];
        let n = x.iter().map(|v: &f64| v * v).sum::<f64>().sqrt();
        let x = x.map(|v| v / n);
        let (chi, th, ph) = hyperspherical_angles(&x);
        let back = [
            chi.cos(),
            chi.sin() * th.cos(),
            chi.sin() * th.sin() * ph.cos(),
            chi.sin() * th.sin() * ph.sin(),
        ];
        for i in 0..4 {
            assert!((back[i] - x[i]).abs() < 1e-14);
        }
    }
}
