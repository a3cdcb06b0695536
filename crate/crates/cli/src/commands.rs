use std::fmt::Write as _;
use std::path::Path;

use lambda_design::criteria::{efficiency_of, Analysis};
use lambda_design::designs::{self, io};
use lambda_design::rounding::round_design;
use lambda_design::{
    required_strength, verify_lambda, CMatrix, Criterion, Design, GridConvention, Manifold,
    ModelSpec, SelectionSet, StrengthMode,
};

use crate::params::{self, sig12};
use crate::{BuildArgs, CriteriaArgs, Failure, RoundArgs, StrengthArgs, VerifyArgs};

/// Writes to stdout; a closed pipe (`| head`) is not an error.
fn emit(text: &str) -> Result<(), Failure> {
    use std::io::Write as _;
    let mut out = std::io::stdout().lock();
    match out.write_all(text.as_bytes()).and_then(|()| out.flush()) {
        Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => Err(e.into()),
        _ => Ok(()),
    }
}

fn is_json(path: &Path) -> bool {
    path.extension().is_some_and(|e| e.eq_ignore_ascii_case("json"))
}

/// Loads a JSON design, or a text design of the given manifold.
fn load(path: &Path, manifold: Option<Manifold>) -> Result<Design, Failure> {
    if is_json(path) {
        let d = io::read_json(path)?.to_design()?;
        if let Some(m) = manifold.filter(|m| *m != d.manifold()) {
            return Err(Failure::domain(format!(
                "{} holds a {} design, expected {m}",
                path.display(),
                d.manifold()
            )));
        }
        return Ok(d);
    }
    let m = manifold.ok_or_else(|| Failure::usage("--manifold is required for text designs"))?;
    Ok(io::read_text(path, m)?)
}

fn require(manifold: Manifold, expected: Manifold, construct: &str) -> Result<(), Failure> {
    if manifold != expected {
        return Err(Failure::usage(format!("'{construct}' builds {expected} designs, not {manifold}")));
    }
    Ok(())
}

fn needed<'a, T>(v: &'a Option<T>, flag: &str, construct: &str) -> Result<&'a T, Failure> {
    v.as_ref()
        .ok_or_else(|| Failure::usage(format!("'{construct}' needs --{flag}")))
}

fn convention(a: &BuildArgs, manifold: Manifold) -> Result<GridConvention, Failure> {
    match &a.convention {
        Some(s) => s.parse().map_err(|e: lambda_design::Error| Failure::usage(e.to_string())),
        None if manifold == Manifold::So3 => Ok(GridConvention::CosineEndpoints),
        None => Ok(GridConvention::Endpoints),
    }
}

fn construct(a: &BuildArgs) -> Result<Design, Failure> {
    let m = params::manifold(&a.manifold)?;
    let c = a.construct.as_str();
    let counts = || -> Result<Vec<usize>, Failure> { params::list(needed(&a.counts, "counts", c)?, "count") };
    Ok(match c {
        "circle" => {
            require(m, Manifold::Circle, c)?;
            designs::circle_design(*needed(&a.points, "points", c)?)?
        }
        "torus" => {
            let n = counts()?;
            require(m, Manifold::Torus(n.len()), c)?;
            designs::torus_grid(&n)?
        }
        "mimura" => {
            require(m, Manifold::Sphere3, c)?;
            designs::mimura_tight_2design()
        }
        "bajnok" => {
            require(m, Manifold::Sphere3, c)?;
            let c1 = designs::interval_t_design(1, a.strength, a.n1)?;
            let c2 = designs::interval_t_design(2, a.strength, a.n2)?;
            designs::bajnok_s3_design(&c1, &c2, a.circle_points)?
        }
        "grid" => {
            let n = counts()?;
            let conv = convention(a, m)?;
            match (m, n.as_slice()) {
                (Manifold::So3, [x, y, z]) => designs::euler_grid(*x, *y, *z, conv)?,
                (Manifold::Sphere2, [x, y]) => designs::sphere2_grid(*x, *y, conv)?,
                (Manifold::Sphere2xSo3, [t, p, x, y, z]) => designs::product_design(
                    &designs::sphere2_grid(*t, *p, conv)?,
                    &designs::euler_grid(*x, *y, *z, conv)?,
                )?,
                (Manifold::Circle | Manifold::Torus(_), _) => {
                    return Err(Failure::usage("use 'circle' or 'torus' for these manifolds"))
                }
                _ => return Err(Failure::usage(format!("wrong number of grid counts for {m}"))),
            }
        }
        "project" => {
            require(m, Manifold::So3, c)?;
            let d = load(needed(&a.input, "input", c)?, Some(Manifold::Sphere3))?;
            designs::project_su2_to_so3(&d, a.dedup_tol)?
        }
        "product" => {
            require(m, Manifold::Sphere2xSo3, c)?;
            let d1 = load(needed(&a.a, "a", c)?, Some(Manifold::Sphere2))?;
            let d2 = load(needed(&a.b, "b", c)?, Some(Manifold::So3))?;
            designs::product_design(&d1, &d2)?
        }
        "haar" => designs::haar_sample(m, *needed(&a.points, "points", c)?, a.seed)?,
        "tetrahedral" => {
            require(m, Manifold::Sphere3, c)?;
            designs::binary_tetrahedral()
        }
        "icosahedron" => {
            require(m, Manifold::Sphere2, c)?;
            designs::icosahedron()
        }
        "file" => load(needed(&a.input, "input", c)?, Some(m))?,
        other => return Err(Failure::usage(format!("unknown construction '{other}'"))),
    })
}

pub fn build(a: &BuildArgs) -> Result<(), Failure> {
    let d = construct(a)?;
    let summary = format!("{} points on {}", d.len(), d.manifold());
    match &a.out {
        Some(path) if is_json(path) => io::write_json(&d, None, path)?,
        Some(path) => io::write_text(&d, path)?,
        None => {
            emit(&stdout_text(&d)?)?;
            eprintln!("{summary}");
            return Ok(());
        }
    }
    println!("{summary}");
    Ok(())
}

/// The design in its stdout form: text when equal-weight, JSON otherwise.
fn stdout_text(d: &Design) -> Result<String, Failure> {
    if d.is_equal_weight() {
        let mut s = String::new();
        for p in d.points() {
            let row: Vec<String> = p.coordinates().iter().map(|c| format!("{c:.16e}")).collect();
            s.push_str(&row.join(" "));
            s.push('\n');
        }
        Ok(s)
    } else {
        let f = io::DesignFile::from_design(d, None);
        let mut s = serde_json::to_string_pretty(&f).map_err(|e| Failure::domain(e.to_string()))?;
        s.push('\n');
        Ok(s)
    }
}

pub fn verify(a: &VerifyArgs) -> Result<(), Failure> {
    let m = params::manifold(&a.manifold)?;
    let d = load(&a.input, Some(m))?;
    let model = ModelSpec::with_degree(m, a.max_level as u32);
    let r = verify_lambda(&d, &model, a.max_level)?;
    for (i, res) in r.level_residuals.iter().enumerate() {
        let lv = model.level(i + 1)?;
        println!("level {} (degree {}): max residual {res:.3e}", i + 1, lv.degree);
    }
    if r.passed {
        println!("PASS: {} points, max residual {:.3e}", d.len(), r.max_residual);
        Ok(())
    } else {
        println!("FAIL: {} points, max residual {:.3e}", d.len(), r.max_residual);
        Err(Failure::domain(format!("not a lambda-design through level {}", a.max_level)))
    }
}

pub fn criteria(a: &CriteriaArgs) -> Result<(), Failure> {
    let m = params::manifold(&a.manifold)?;
    let model = params::model(m, &a.degree)?;
    let d = load(&a.input, Some(m))?;
    let sel = match &a.levels {
        Some(l) => SelectionSet::new(&model, params::list(l, "level")?)?,
        None => SelectionSet::all(&model),
    };
    let mut ps = params::p_values(&a.p)?;
    let es = params::es_values(&a.es)?;
    if ps.is_empty() && es.is_empty() {
        ps = vec![f64::NEG_INFINITY, -1.0, 0.0];
    }
    let analysis = Analysis::of(&d, &model, &sel)?;
    let reference = match &a.reference {
        Some(path) => Analysis::of(&load(path, Some(m))?, &model, &sel)?,
        None => Analysis::new(CMatrix::identity(model.dimension()), sel.clone())?,
    };
    let criteria = ps.into_iter().map(Criterion::Phi).chain(es.into_iter().map(Criterion::Es));
    let mut csv = String::from("criterion,param,value,reference_value,efficiency,feasible\n");
    for c in criteria {
        if let Criterion::Phi(_) = c {
            if !reference.is_feasible() {
                return Err(Failure::domain("reference design is infeasible for the selection"));
            }
        }
        let e = efficiency_of(&analysis, &reference, c)?;
        let _ = writeln!(
            csv,
            "{},{},{},{},{},{}",
            c.name(),
            c.parameter(),
            sig12(e.value),
            sig12(e.reference_value),
            sig12(e.efficiency),
            e.feasible
        );
    }
    match &a.out {
        Some(path) => std::fs::write(path, csv)?,
        None => emit(&csv)?,
    }
    Ok(())
}

pub fn round(a: &RoundArgs) -> Result<(), Failure> {
    let m = a.manifold.as_deref().map(params::manifold).transpose()?;
    let d = load(&a.input, m)?;
    let (exact, app) = round_design(&d, a.n)?;
    let mut table = String::new();
    for (p, c) in exact.points().iter().zip(&app.counts) {
        let coords: Vec<String> = p.coordinates().iter().map(|x| format!("{x:.16e}")).collect();
        let _ = writeln!(table, "{c}\t{}", coords.join(" "));
    }
    emit(&table)?;
    if let Some(path) = &a.out {
        io::write_json(&exact, Some(app.counts.clone()), path)?;
    }
    eprintln!("{} observations on {} points", app.n, app.counts.len());
    Ok(())
}

pub fn strength(a: &StrengthArgs) -> Result<(), Failure> {
    let m = params::manifold(&a.manifold)?;
    let model = params::model(m, &a.degree)?;
    let mode = match a.mode.to_ascii_lowercase().as_str() {
        "general" => StrengthMode::General,
        "cg" | "clebsch-gordan" | "clebschgordan" => StrengthMode::ClebschGordan,
        other => return Err(Failure::usage(format!("unknown mode '{other}'"))),
    };
    let r = required_strength(&model, mode);
    let degrees: Vec<String> = r.degrees.iter().map(u32::to_string).collect();
    println!("manifold: {m}");
    println!("required degree: {}", degrees.join(","));
    println!("eigenvalue threshold: {}", r.threshold);
    if let Some(s) = r.sharper_threshold {
        println!("sharper threshold: {s}");
    }
    if let Some(c) = r.cover_degree {
        println!("degree on the double cover: {c}");
    }
    Ok(())
}
