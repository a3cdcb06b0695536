//! Parsing of flag values and CSV number formatting.

use lambda_design::{Manifold, ModelSpec};

use crate::Failure;

pub fn manifold(s: &str) -> Result<Manifold, Failure> {
    s.parse().map_err(|e: lambda_design::Error| Failure::usage(e.to_string()))
}

pub fn list<T: std::str::FromStr>(s: &str, what: &str) -> Result<Vec<T>, Failure> {
    s.split(',')
        .map(|t| {
            t.trim()
                .parse()
                .map_err(|_| Failure::usage(format!("invalid {what} '{t}'")))
        })
        .collect()
}

/// Model from a manifold tag and a degree string.
pub fn model(manifold: Manifold, degree: &str) -> Result<ModelSpec, Failure> {
    let d: Vec<u32> = list(degree, "degree")?;
    let one = |d: &[u32]| -> Result<u32, Failure> {
        match d {
            [x] => Ok(*x),
            _ => Err(Failure::usage(format!("{manifold} takes a single degree"))),
        }
    };
    Ok(match manifold {
        Manifold::Circle => ModelSpec::circle(one(&d)?),
        Manifold::Torus(k) => {
            let per_axis = if d.len() == 1 { vec![d[0]; k] } else { d };
            if per_axis.len() != k {
                return Err(Failure::usage(format!("{manifold} needs 1 or {k} degrees")));
            }
            ModelSpec::torus(per_axis)?
        }
        Manifold::Sphere2 => ModelSpec::sphere2(one(&d)?),
        Manifold::Sphere3 => ModelSpec::sphere3(one(&d)?),
        Manifold::So3 => ModelSpec::so3(one(&d)?),
        Manifold::Sphere2xSo3 => match d.as_slice() {
            [a, b] => ModelSpec::sphere2_so3(*a, *b),
            [a] => ModelSpec::sphere2_so3(*a, *a),
            _ => return Err(Failure::usage("s2xso3 takes 'sphere,rotation' degrees")),
        },
    })
}

fn real(s: &str) -> Result<f64, Failure> {
    match s.trim() {
        "-inf" | "-infinity" => Ok(f64::NEG_INFINITY),
        t => t
            .parse::<f64>()
            .ok()
            .filter(|x| x.is_finite())
            .ok_or_else(|| Failure::usage(format!("invalid number '{t}'"))),
    }
}

/// Expands `-inf`, plain numbers and `a..b:step` ranges (`a <= p < b`).
pub fn p_values(specs: &[String]) -> Result<Vec<f64>, Failure> {
    let mut out = Vec::new();
    for spec in specs {
        for item in spec.split(',') {
            if let Some((range, step)) = item.split_once(':') {
                let (a, b) = range
                    .split_once("..")
                    .ok_or_else(|| Failure::usage(format!("invalid range '{item}'")))?;
                let (a, b, step) = (real(a)?, real(b)?, real(step)?);
                if !(step > 0.0) || !a.is_finite() || a >= b {
                    return Err(Failure::usage(format!("invalid range '{item}'")));
                }
                let count = ((b - a) / step - 1e-9).ceil() as usize;
                out.extend((0..count).map(|i| a + step * i as f64));
            } else {
                out.push(real(item)?);
            }
        }
    }
    Ok(out)
}

/// Expands integers and inclusive ranges `a..b`.
pub fn es_values(specs: &[String]) -> Result<Vec<usize>, Failure> {
    let mut out = Vec::new();
    for spec in specs {
        for item in spec.split(',') {
            let bad = || Failure::usage(format!("invalid size '{item}'"));
            if let Some((a, b)) = item.split_once("..") {
                let a: usize = a.trim().parse().map_err(|_| bad())?;
                let b: usize = b.trim().parse().map_err(|_| bad())?;
                if a > b {
                    return Err(bad());
                }
                out.extend(a..=b);
            } else {
                out.push(item.trim().parse().map_err(|_| bad())?);
            }
        }
    }
    Ok(out)
}

/// 12 significant digits in scientific notation.
pub fn sig12(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.11e}")
    } else if x.is_nan() {
        "nan".into()
    } else if x > 0.0 {
        "inf".into()
    } else {
        "-inf".into()
    }
}
