//! Design files.
//!
//! The plain text format has one point per line, whitespace-separated
//! coordinates written with 17 significant digits, and carries no weights
//! (equal weights are implied). The JSON format carries the manifold tag,
//! the points, the weights and, for exact designs, the replication counts.

use std::fs;
use std::io::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::Design;
use crate::error::{Error, Result};
use crate::geometry::{Manifold, Point};

const UNIT_TOL: f64 = 1e-6;

fn parse_rows(path: &Path, width: usize) -> Result<Vec<Vec<f64>>> {
    let text = fs::read_to_string(path)?;
    let mut rows = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let parse_err = |message: String| Error::Parse {
            path: path.to_path_buf(),
            line: i + 1,
            message,
        };
        let row = line
            .split_whitespace()
            .map(|tok| tok.parse::<f64>().map_err(|e| parse_err(format!("'{tok}': {e}"))))
            .collect::<Result<Vec<f64>>>()?;
        if row.len() != width {
            return Err(parse_err(format!("expected {width} values, found {}", row.len())));
        }
        if row.iter().any(|v| !v.is_finite()) {
            return Err(parse_err("non-finite value".into()));
        }
        rows.push(row);
    }
    if rows.is_empty() {
        return Err(Error::Data(format!("{} contains no points", path.display())));
    }
    Ok(rows)
}

/// Rescales a row to unit length when it is within `1e-6` of it. Rows already
/// unit to rounding are left untouched so text round trips are bit-exact.
fn renormalize(row: &mut [f64], line: usize) -> Result<()> {
    let r = row.iter().map(|x| x * x).sum::<f64>().sqrt();
    if (r - 1.0).abs() > UNIT_TOL {
        return Err(Error::Data(format!("point {line} has norm {r}, not 1")));
    }
    if (r - 1.0).abs() > 4.0 * f64::EPSILON {
        row.iter_mut().for_each(|x| *x /= r);
    }
    Ok(())
}

/// Loads an equal-weight sphere design: `dim = 3` for `S^2`, `dim = 4` for `S^3`.
pub fn load_point_file(path: impl AsRef<Path>, dim: usize) -> Result<Design> {
    let manifold = match dim {
        3 => Manifold::Sphere2,
        4 => Manifold::Sphere3,
        _ => return Err(Error::Domain(format!("point files hold 3 or 4 coordinates, not {dim}"))),
    };
    read_text(path, manifold)
}

/// Loads an equal-weight design in the plain text format for any manifold.
pub fn read_text(path: impl AsRef<Path>, manifold: Manifold) -> Result<Design> {
    let path = path.as_ref();
    let mut rows = parse_rows(path, manifold.coordinate_count())?;
    let mut points = Vec::with_capacity(rows.len());
    for (i, row) in rows.iter_mut().enumerate() {
        match manifold {
            Manifold::Sphere2 | Manifold::Sphere3 => renormalize(row, i + 1)?,
            Manifold::Sphere2xSo3 => renormalize(&mut row[..3], i + 1)?,
            _ => {}
        }
        points.push(Point::from_coordinates(manifold, row)?);
    }
    Design::equal_weight(manifold, points)
}

fn format_row(p: &Point) -> String {
    p.coordinates()
        .iter()
        .map(|c| format!("{c:.16e}"))
        .collect::<Vec<_>>()
        .join(" ")
}

/// Writes an equal-weight design in the plain text format.
pub fn write_text(d: &Design, path: impl AsRef<Path>) -> Result<()> {
    if !d.is_equal_weight() {
        return Err(Error::Precondition(
            "the text format has no weights; use JSON for weighted designs".into(),
        ));
    }
    let mut out = String::new();
    for p in d.points() {
        out.push_str(&format_row(p));
        out.push('\n');
    }
    let mut f = fs::File::create(path)?;
    f.write_all(out.as_bytes())?;
    Ok(())
}

/// Serialized form of a design.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DesignFile {
    pub manifold: String,
    pub points: Vec<Vec<f64>>,
    pub weights: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub counts: Option<Vec<u64>>,
}

impl DesignFile {
    pub fn from_design(d: &Design, counts: Option<Vec<u64>>) -> Self {
        Self {
            manifold: d.manifold().tag(),
            points: d.points().iter().map(Point::coordinates).collect(),
            weights: d.weights().to_vec(),
            counts,
        }
    }

    pub fn to_design(&self) -> Result<Design> {
        let manifold: Manifold = self.manifold.parse()?;
        let points = self
            .points
            .iter()
            .map(|c| Point::from_coordinates(manifold, c))
            .collect::<Result<Vec<_>>>()?;
        Design::new(manifold, points, self.weights.clone())
    }
}

pub fn write_json(d: &Design, counts: Option<Vec<u64>>, path: impl AsRef<Path>) -> Result<()> {
    let file = DesignFile::from_design(d, counts);
    let mut s = serde_json::to_string_pretty(&file)?;
    s.push('\n');
    fs::write(path, s)?;
    Ok(())
}

pub fn read_json(path: impl AsRef<Path>) -> Result<DesignFile> {
    Ok(serde_json::from_str(&fs::read_to_string(path)?)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::designs::{euler_grid, mimura_tight_2design, GridConvention};

    #[test]
    fn text_round_trip_is_exact() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("m.txt");
        let d = mimura_tight_2design();
        write_text(&d, &path).unwrap();
        assert_eq!(load_point_file(&path, 4).unwrap(), d);

        let g = euler_grid(3, 3, 2, GridConvention::Midpoint).unwrap();
        write_text(&g, &path).unwrap();
        assert_eq!(read_text(&path, Manifold::So3).unwrap(), g);
    }

    #[test]
    fn two_decimal_file_is_close_to_exact() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("mimura.txt");
        fs::write(
            &path,
            "0.22 0.67 -0.57 0.42\n-0.57 0.42 0.22 -0.67\n\n-0.57 -0.42 0.22 0.67\n0.22 -0.67 -0.57 -0.42\n0.71 0 0.71 0\n",
        )
        .unwrap();
        // the two-decimal rows are not within 1e-6 of unit length
        assert!(matches!(load_point_file(&path, 4), Err(Error::Data(_))));
        let rows: Vec<[f64; 4]> = [
            [0.22, 0.67, -0.57, 0.42],
            [-0.57, 0.42, 0.22, -0.67],
            [-0.57, -0.42, 0.22, 0.67],
            [0.22, -0.67, -0.57, -0.42],
            [0.71, 0.0, 0.71, 0.0],
        ]
        .map(|r| {
            let n = r.iter().map(|x| x * x).sum::<f64>().sqrt();
            r.map(|x| x / n)
        })
        .to_vec();
        let text: String = rows
            .iter()
            .map(|r| format!("{} {} {} {}\n", r[0], r[1], r[2], r[3]))
            .collect();
        fs::write(&path, text).unwrap();
        let loaded = load_point_file(&path, 4).unwrap();
        let exact = mimura_tight_2design();
        for (a, b) in loaded.points().iter().zip(exact.points()) {
            let (a, b) = (a.coordinates(), b.coordinates());
            assert!(a.iter().zip(&b).all(|(x, y)| (x - y).abs() < 1e-2));
        }
    }

    #[test]
    fn parse_errors_carry_line_numbers() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("bad.txt");
        fs::write(&path, "1 0 0 0\n0 1 x 0\n").unwrap();
        match load_point_file(&path, 4) {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 2),
            other => panic!("unexpected {other:?}"),
        }
        fs::write(&path, "1 0 0\n").unwrap();
        assert!(matches!(load_point_file(&path, 4), Err(Error::Parse { line: 1, .. })));
        fs::write(&path, "").unwrap();
        assert!(matches!(load_point_file(&path, 4), Err(Error::Data(_))));
        assert!(matches!(load_point_file(dir.path().join("missing"), 4), Err(Error::Io(_))));
    }

    #[test]
    fn json_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("d.json");
        let d = Design::new(
            Manifold::Circle,
            vec![Point::Circle(0.25), Point::Circle(0.75)],
            vec![0.3, 0.7],
        )
        .unwrap();
        write_json(&d, Some(vec![3, 7]), &path).unwrap();
        let f = read_json(&path).unwrap();
        assert_eq!(f.counts, Some(vec![3, 7]));
        assert_eq!(f.to_design().unwrap(), d);
        assert!(write_text(&d, dir.path().join("t.txt")).is_err());
    }
}
