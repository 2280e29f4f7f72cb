use std::io::Read;
use std::path::{Path, PathBuf};

use bandforge::fixtures;
use bandforge::gluing::{build_equations, newton_solve, volume, NewtonOptions, NewtonOutcome, ShapeVector};
use bandforge::interval::{certify_with, Certificate, CertifyOptions, PipelineError};
use bandforge::report::exit;
use bandforge::sweep::{certify_batch, ExecMode};
use bandforge::tri::{parse_triangulation, Triangulation};
use serde_json::{json, Value};

use crate::report::{Failure, Report};
use crate::{CertifyArgs, TriArgs, TriCommand};

pub const FIXTURE_DIR_VAR: &str = "BANDFORGE_FIXTURE_DIR";

/// Header volumes carry eight decimals.
const HEADER_ROUNDING: f64 = 5e-9;
/// Agreement required between a computed volume and the header.
const VOLUME_TOL: f64 = 5e-7;

pub fn run(cmd: &TriCommand) -> Result<Report, Failure> {
    match cmd {
        TriCommand::Parse(args) => parse_cmd(args),
        TriCommand::Solve(args) => solve_cmd(args),
        TriCommand::Volume(args) => volume_cmd(args),
        TriCommand::Certify(args) if args.all_fixtures => certify_all(args),
        TriCommand::Certify(args) => certify_cmd(args),
    }
}

fn source_label(args: &TriArgs) -> String {
    match (&args.fixture, &args.path) {
        (Some(f), _) => format!("fixture:{}", f.to_uppercase()),
        (None, Some(p)) if p != "-" => p.clone(),
        _ => "stdin".to_string(),
    }
}

fn read_input(args: &TriArgs) -> Result<String, Failure> {
    if let Some(name) = &args.fixture {
        return fixtures::by_name(name)
            .map(str::to_string)
            .ok_or_else(|| Failure::other(format!("unknown fixture {name:?} (expected A or B)")));
    }
    match args.path.as_deref() {
        None | Some("-") => {
            let mut s = String::new();
            std::io::stdin()
                .read_to_string(&mut s)
                .map_err(|e| Failure::parse(format!("reading stdin: {e}")))?;
            Ok(s)
        }
        Some(p) => std::fs::read_to_string(p).map_err(|e| Failure::parse(format!("{p}: {e}"))),
    }
}

fn load(args: &TriArgs) -> Result<Triangulation, Failure> {
    let text = read_input(args)?;
    parse_triangulation(&text).map_err(Failure::parse)
}

fn inputs(args: &TriArgs) -> Value {
    json!({
        "source": source_label(args),
        "tol": args.tol,
        "max_iter": args.max_iter,
    })
}

fn newton_opts(args: &TriArgs) -> NewtonOptions {
    NewtonOptions {
        tol: args.tol,
        max_iter: args.max_iter,
    }
}

fn solve(t: &Triangulation, args: &TriArgs) -> Result<NewtonOutcome, Failure> {
    let sys = build_equations(t).map_err(|e| Failure::new(exit::SOLVE, e.to_string()))?;
    newton_solve(&sys, &ShapeVector(t.shapes()), newton_opts(args))
        .map_err(|e| Failure::new(exit::SOLVE, e.to_string()))
}

fn shapes_json(s: &ShapeVector) -> Value {
    Value::Array(s.0.iter().map(|z| json!([z.re, z.im])).collect())
}

fn parse_cmd(args: &TriArgs) -> Result<Report, Failure> {
    let t = load(args)?;
    let cusps: Vec<Value> = t
        .cusps
        .iter()
        .map(|c| json!({"topology": c.topology, "filling": [c.filling_m, c.filling_l]}))
        .collect();
    let results = json!({
        "name": t.name,
        "solution_type": t.solution_type.to_string(),
        "volume_hint": t.volume_hint,
        "orientability": t.orientability.to_string(),
        "tetrahedra": t.tet_count(),
        "cusps": cusps,
    });
    Ok(Report::new("tri parse", inputs(args), results).check(
        "structure validates",
        true,
        format!("{} tetrahedra, {} cusps", t.tet_count(), t.cusp_count()),
    ))
}

fn solve_cmd(args: &TriArgs) -> Result<Report, Failure> {
    let t = load(args)?;
    let out = solve(&t, args)?;
    let vol = volume(&out.shapes);
    let results = json!({
        "name": t.name,
        "shapes": shapes_json(&out.shapes),
        "residual_max": out.residual,
        "iterations": out.iterations,
        "volume": vol,
    });
    Ok(Report::new("tri solve", inputs(args), results)
        .check(
            "converged",
            out.residual < args.tol,
            format!("max residual {:e} after {} iterations", out.residual, out.iterations),
        )
        .check(
            "positively oriented",
            out.shapes.is_geometric(),
            "every shape has positive imaginary part",
        ))
}

fn volume_cmd(args: &TriArgs) -> Result<Report, Failure> {
    let t = load(args)?;
    let out = solve(&t, args)?;
    let vol = volume(&out.shapes);
    let diff = (vol - t.volume_hint).abs();
    let results = json!({
        "name": t.name,
        "volume": vol,
        "header_volume": t.volume_hint,
        "residual_max": out.residual,
    });
    Ok(Report::new("tri volume", inputs(args), results).check(
        "matches header volume",
        diff < VOLUME_TOL,
        format!("|{vol:.10} - {}| = {diff:.1e} (tolerance {VOLUME_TOL:e})", t.volume_hint),
    ))
}

fn certify_opts(args: &CertifyArgs) -> CertifyOptions {
    let mut opts = CertifyOptions {
        newton: newton_opts(&args.tri),
        ..CertifyOptions::default()
    };
    if let Some(r) = args.radius {
        opts.radii = vec![r];
    }
    opts
}

fn header_agrees(cert: &Certificate, t: &Triangulation) -> (bool, String) {
    let v = cert.volume_enclosure;
    let h = t.volume_hint;
    let ok = v.lo() <= h + HEADER_ROUNDING && v.hi() >= h - HEADER_ROUNDING;
    (ok, format!("{v} against header {h} +- {HEADER_ROUNDING:e}"))
}

fn certificate_report(args: &CertifyArgs, t: &Triangulation, cert: &Certificate) -> Report {
    let mut inputs = inputs(&args.tri);
    inputs["radius"] = json!(args.radius);
    let (agrees, detail) = header_agrees(cert, t);
    Report::new("tri certify", inputs, json!({ "certificate": cert }))
        .check(
            "certificate valid",
            cert.is_valid(),
            format!(
                "contracted = {}, all_imag_positive = {}, radius {:e}",
                cert.contracted, cert.all_imag_positive, cert.radius_used
            ),
        )
        .check("volume enclosure agrees with header", agrees, detail)
}

fn pipeline_failure(e: PipelineError) -> Failure {
    Failure::new(exit::for_stage(e.stage()), e.to_string())
}

fn certify_cmd(args: &CertifyArgs) -> Result<Report, Failure> {
    let t = load(&args.tri)?;
    match certify_with(&t, &certify_opts(args)) {
        Ok(cert) => Ok(certificate_report(args, &t, &cert)),
        Err(PipelineError::NotCertified(cert)) => Err(Failure {
            code: exit::CERTIFY,
            message: "no radius produced a valid certificate".into(),
            report: Some(certificate_report(args, &t, &cert)),
        }),
        Err(e) => Err(pipeline_failure(e)),
    }
}

fn external_fixtures(dir: &Path) -> Result<Vec<PathBuf>, Failure> {
    let entries = std::fs::read_dir(dir).map_err(|e| Failure::parse(format!("{}: {e}", dir.display())))?;
    let mut paths: Vec<PathBuf> = entries
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "tri"))
        .collect();
    paths.sort();
    Ok(paths)
}

fn certify_all(args: &CertifyArgs) -> Result<Report, Failure> {
    let mut sources: Vec<(String, Result<Triangulation, String>)> = vec![
        ("fixture:A".into(), fixtures::appendix_a().map_err(|e| e.to_string())),
        ("fixture:B".into(), fixtures::appendix_b().map_err(|e| e.to_string())),
    ];
    let dir = std::env::var_os(FIXTURE_DIR_VAR).map(PathBuf::from);
    if let Some(dir) = &dir {
        for path in external_fixtures(dir)? {
            let parsed = std::fs::read_to_string(&path)
                .map_err(|e| e.to_string())
                .and_then(|s| parse_triangulation(&s).map_err(|e| e.to_string()));
            sources.push((path.display().to_string(), parsed));
        }
    }

    let parsed: Vec<Triangulation> = sources
        .iter()
        .filter_map(|(_, r)| r.as_ref().ok().cloned())
        .collect();
    let opts = certify_opts(args);
    let mut certified = certify_batch(ExecMode::default(), &parsed, &opts).into_iter();

    let mut report = Report::new(
        "tri certify --all-fixtures",
        json!({
            "fixture_dir": dir.as_ref().map(|d| d.display().to_string()),
            "radius": args.radius,
            "tol": args.tri.tol,
            "max_iter": args.tri.max_iter,
        }),
        Value::Null,
    );
    let mut results = Vec::new();
    let mut code = exit::OK;
    let mut note = |c: i32| {
        if code == exit::OK {
            code = c;
        }
    };
    for (source, parsed) in &sources {
        match parsed {
            Err(e) => {
                note(exit::PARSE);
                results.push(json!({"source": source, "error": e, "stage": "parse"}));
                report = report.check(source, false, e.clone());
            }
            Ok(t) => match certified.next().expect("one result per parsed input") {
                Ok(cert) => {
                    let (agrees, detail) = header_agrees(&cert, t);
                    results.push(json!({"source": source, "certificate": cert}));
                    report = report.check(
                        source,
                        cert.is_valid(),
                        format!("{}: valid at radius {:e}; volume {detail}", t.name, cert.radius_used),
                    );
                    if !agrees {
                        report = report.check(&format!("{source} volume"), false, detail);
                    }
                }
                Err(e) => {
                    note(exit::for_stage(e.stage()));
                    results.push(json!({"source": source, "error": e.to_string(), "stage": e.stage()}));
                    report = report.check(source, false, e.to_string());
                }
            },
        }
    }
    report.results = Value::Array(results);
    if code == exit::OK {
        Ok(report)
    } else {
        Err(Failure {
            code,
            message: "some inputs did not certify".into(),
            report: Some(report),
        })
    }
}
