//! One function per subcommand. Each returns the process exit code after
//! emitting its output, or a [`Failure`] already sorted by exit code.

use crate::render;
use crate::{
    emit, ActivateArgs, ClassifyArgs, DistillCheckArgs, ExtremesArgs, Failure, Format, PlaneArgs,
    RegionsArgs, VerifyArgs, VerifyFormat, WitnessArgs,
};
use rayon::prelude::*;
use serde_json::{json, Map, Value};
use std::fmt::Write as _;
use std::path::Path;
use symact_core::activation::{fidelity_bruteforce, plane_coefficients, plane_third_point};
use symact_core::distill::{certify_1distillable, Rank2Options};
use symact_core::geometry::{RationalPoint3, SymmetricGeometry};
use symact_core::selfcheck::run_verify;
use symact_core::states::{
    coords_of, isotropic_matrix, symmetric_matrix, werner_matrix, IsotropicParam, SymmetricSpec,
    WernerParam,
};
use symact_core::tensor::io::read_operator;
use symact_core::witness::{verify_witness_positivity, witness_expectation, witness_report};
use symact_core::{parse_rational, rat, rat_int, rat_to_f64, tol, Error, LabeledOperator, Rat};

type CmdResult = Result<i32, Failure>;

/// Reads an operator JSON file, naming the file in parse and i/o errors.
fn read_operator_file(path: &Path) -> Result<LabeledOperator, Failure> {
    read_operator(path).map_err(|e| match e {
        Error::Io(_) | Error::Json(_) => Failure::Input(format!("{}: {e}", path.display())),
        other => other.into(),
    })
}

fn parse_rat(text: &str, what: &str) -> Result<Rat, Failure> {
    parse_rational(text).map_err(|e| Failure::Input(format!("{what}: {e}")))
}

fn parse_dim(text: &str, what: &str) -> Result<usize, Failure> {
    text.parse::<usize>()
        .map_err(|_| Failure::Input(format!("{what}: `{text}` is not a dimension")))
}

/// The three coordinate arguments; clap has already fixed their count.
fn parse_point(values: &[String]) -> Result<RationalPoint3, Failure> {
    Ok([
        parse_rat(&values[0], "lambda")?,
        parse_rat(&values[1], "lambda")?,
        parse_rat(&values[2], "lambda")?,
    ])
}

fn lambda_with_derived(point: &RationalPoint3) -> [Rat; 4] {
    [
        point[0],
        point[1],
        point[2],
        rat_int(1) - point[0] - point[1] - point[2],
    ]
}

/// Structural sanity of a file-supplied operator: hermitian and unit
/// trace. Positivity is deliberately not checked (it would need a full
/// diagonalization); downstream quantities stay well defined without it.
fn check_density(op: &LabeledOperator, path: &Path) -> Result<(), Failure> {
    let n = op.dim();
    let entries = op.entries();
    let mut deviation: f64 = 0.0;
    for i in 0..n {
        for j in 0..=i {
            deviation = deviation.max((entries[i * n + j] - entries[j * n + i].conj()).norm());
        }
    }
    if deviation > tol::HERMITICITY_TOL {
        return Err(Failure::Input(format!(
            "{}: operator is not hermitian (max deviation {deviation:.3e})",
            path.display()
        )));
    }
    let trace = op.trace();
    if (trace.re - 1.0).abs() > tol::TRACE_TOL || trace.im.abs() > tol::TRACE_TOL {
        return Err(Failure::Input(format!(
            "{}: operator trace is {trace}, expected 1",
            path.display()
        )));
    }
    Ok(())
}

/// Puts measured coordinates onto a denominator-10^12 grid and clears
/// rounding dust at the simplex boundary, so file-supplied operators can
/// enter the exact geometry.
fn snap_coordinates(lambda: &[f64; 4]) -> Result<RationalPoint3, Failure> {
    const DEN: i128 = 1_000_000_000_000;
    let mut point = [rat_int(0); 3];
    for (slot, &x) in point.iter_mut().zip(lambda) {
        if !(-tol::TRACE_TOL..=1.0 + tol::TRACE_TOL).contains(&x) {
            return Err(Failure::Input(format!(
                "operator coordinates {lambda:?} do not describe a state"
            )));
        }
        *slot = rat((x.max(0.0) * DEN as f64).round() as i128, DEN);
    }
    let sum = point[0] + point[1] + point[2];
    if sum > rat_int(1) {
        if rat_to_f64(&sum) > 1.0 + tol::TRACE_TOL {
            return Err(Failure::Input(format!(
                "operator coordinates {lambda:?} leave the state simplex"
            )));
        }
        for slot in &mut point {
            *slot = *slot / sum;
        }
    }
    Ok(point)
}

pub fn classify(args: &ClassifyArgs) -> CmdResult {
    let point = parse_point(&args.lambda)?;
    let geo = SymmetricGeometry::new(args.d)?;
    let c = geo.classify(&point)?;
    let mut obj = Map::new();
    obj.insert("d".into(), json!(args.d));
    obj.insert(
        "lambda".into(),
        render::rational_array(&lambda_with_derived(&point)),
    );
    obj.insert("label".into(), json!(c.label.as_str()));
    obj.insert(
        "min_pt_eigenvalue".into(),
        render::float(c.min_pt_eigenvalue),
    );
    obj.insert("witness_value".into(), render::rational(&c.witness_value));
    obj.insert(
        "activating_alpha_interval".into(),
        render::interval(&c.activating_alpha_interval),
    );
    if let Some(alpha_text) = &args.alpha {
        let alpha = parse_rat(alpha_text, "alpha")?;
        let report = geo.activation_report(&alpha, &point)?;
        obj.insert(
            "activation".into(),
            Value::Object(render::activation(&report)),
        );
    }
    emit(&args.out, &render::pretty(&Value::Object(obj)))?;
    Ok(0)
}

pub fn activate(args: &ActivateArgs) -> CmdResult {
    let alpha = parse_rat(&args.alpha, "alpha")?;
    let geo = SymmetricGeometry::new(args.d)?;
    let (point, sigma) = match (&args.lambda, &args.sigma) {
        (Some(values), None) => (parse_point(values)?, None),
        (None, Some(path)) => {
            let op = read_operator_file(path)?;
            check_density(&op, path)?;
            let coords = coords_of(&op)?;
            (snap_coordinates(&coords.lambda)?, Some(op))
        }
        _ => unreachable!("clap enforces exactly one source"),
    };
    let report = geo.activation_report(&alpha, &point)?;
    let mut obj = render::activation(&report);
    if let Some(path) = &args.sigma {
        obj.insert("sigma".into(), json!(path.display().to_string()));
    }
    if args.verify {
        if args.d <= 3 {
            let werner = WernerParam::new(args.d, rat_to_f64(&alpha))?;
            let target = match &sigma {
                Some(op) => op.clone(),
                None => symmetric_matrix(&SymmetricSpec::from_lambda3(
                    args.d,
                    [
                        rat_to_f64(&point[0]),
                        rat_to_f64(&point[1]),
                        rat_to_f64(&point[2]),
                    ],
                )?)?,
            };
            let brute = fidelity_bruteforce(&werner, &target)?;
            let deviation = (brute.fidelity - rat_to_f64(&report.fidelity))
                .abs()
                .max((brute.success_probability - rat_to_f64(&report.success_probability)).abs());
            obj.insert(
                "bruteforce".into(),
                json!({
                    "fidelity": render::float(brute.fidelity),
                    "success_probability": render::float(brute.success_probability),
                    "max_deviation": render::float(deviation),
                }),
            );
            if deviation > 1e-8 {
                return Err(Failure::Numerical(format!(
                    "closed form and dense protocol disagree by {deviation:.3e}"
                )));
            }
        } else {
            // The dense cross-check would need d^6-dimensional operators.
            obj.insert("bruteforce".into(), Value::Null);
        }
    }
    emit(&args.out, &render::pretty(&Value::Object(obj)))?;
    Ok(0)
}

pub fn extremes(args: &ExtremesArgs) -> CmdResult {
    let geo = SymmetricGeometry::new(args.d)?;
    let p = geo.ppt_extreme_points();
    let tau = geo.intersection_vertices();
    let mut extreme = Map::new();
    for (i, point) in p.iter().enumerate() {
        extreme.insert(format!("p{}", i + 1), json!(render::point_string(point)));
    }
    let mut vertices = Map::new();
    for (i, point) in tau.iter().enumerate() {
        vertices.insert(format!("tau{}", i + 1), json!(render::point_string(point)));
    }
    let value = json!({
        "d": args.d,
        "ppt_extreme_points": extreme,
        "intersection_vertices": vertices,
        "tau0": render::point_string(&geo.tau0()),
    });
    emit(&args.out, &render::pretty(&value))?;
    Ok(0)
}

pub fn plane(args: &PlaneArgs) -> CmdResult {
    let alpha = parse_rat(&args.alpha, "alpha")?;
    if alpha <= rat_int(1) || alpha >= rat_int(args.d as i128) {
        return Err(Failure::Input(format!(
            "alpha must lie strictly between 1 and {} for the threshold plane",
            args.d
        )));
    }
    let geo = SymmetricGeometry::new(args.d)?;
    let coefficients = plane_coefficients(args.d, &alpha)?;
    let third = plane_third_point(args.d, &alpha)?;
    // The crossing sits on the segment from tau1 to tau5; tau1 has first
    // coordinate zero, so the segment parameter reads off directly.
    let t = third[0] / geo.intersection_vertices()[4][0];
    let value = json!({
        "d": args.d,
        "alpha": render::rational(&alpha),
        "coefficients": render::rational_array(&coefficients),
        "root_parameter": render::rational(&t),
        "third_point": render::point_string(&third),
    });
    emit(&args.out, &render::pretty(&value))?;
    Ok(0)
}

pub fn regions(args: &RegionsArgs) -> CmdResult {
    if args.resolution == 0 {
        return Err(Failure::Input("resolution must be at least 1".into()));
    }
    let geo = SymmetricGeometry::new(args.d)?;
    // Region labels need the separable hull; fail before the scan, not in it.
    geo.separable_polytope()?;
    let n = args.resolution;
    let mut keys = Vec::new();
    for k1 in 0..=n {
        for k2 in 0..=(n - k1) {
            for k3 in 0..=(n - k1 - k2) {
                keys.push((k1, k2, k3));
            }
        }
    }
    // Parallel evaluation; collect preserves the lexicographic key order.
    let rows = keys
        .par_iter()
        .map(|&(k1, k2, k3)| {
            let point = [
                rat(k1 as i128, n as i128),
                rat(k2 as i128, n as i128),
                rat(k3 as i128, n as i128),
            ];
            let c = geo.classify(&point)?;
            let (lo, hi) = match &c.activating_alpha_interval {
                Some((lo, hi)) => (lo.to_string(), hi.to_string()),
                None => (String::new(), String::new()),
            };
            Ok([
                point[0].to_string(),
                point[1].to_string(),
                point[2].to_string(),
                c.label.as_str().to_string(),
                c.witness_value.to_string(),
                lo,
                hi,
            ])
        })
        .collect::<Result<Vec<_>, symact_core::Error>>()?;
    let text = match args.format {
        Format::Csv => {
            let mut text = String::from("l1,l2,l3,label,witness,interval_lo,interval_hi\n");
            for row in &rows {
                writeln!(text, "{}", row.join(",")).expect("writing to a string cannot fail");
            }
            text
        }
        Format::Json => {
            let array: Vec<Value> = rows
                .iter()
                .map(|row| {
                    json!({
                        "l1": row[0],
                        "l2": row[1],
                        "l3": row[2],
                        "label": row[3],
                        "witness": row[4],
                        "interval_lo": if row[5].is_empty() { Value::Null } else { json!(row[5]) },
                        "interval_hi": if row[6].is_empty() { Value::Null } else { json!(row[6]) },
                    })
                })
                .collect();
            render::pretty(&Value::Array(array))
        }
    };
    emit(&args.out, &text)?;
    Ok(0)
}

pub fn witness(args: &WitnessArgs) -> CmdResult {
    let value = match (&args.lambda, &args.state) {
        (Some(values), None) => {
            let point = parse_point(values)?;
            let report = witness_report(args.d, &point, args.samples, args.seed)?;
            json!({
                "d": args.d,
                "lambda": render::rational_array(&lambda_with_derived(&point)),
                "value": render::rational(&report.value),
                "value_float": render::float(rat_to_f64(&report.value)),
                "min_product_expectation": render::float(report.min_product_expectation),
                "certificate": report.certificate.as_str(),
            })
        }
        (None, Some(path)) => {
            let op = read_operator_file(path)?;
            check_density(&op, path)?;
            let file_d = op.layout().dims().first().copied().unwrap_or(0);
            if file_d != args.d {
                return Err(Failure::Input(format!(
                    "{}: subsystem dimension {file_d} does not match --d {}",
                    path.display(),
                    args.d
                )));
            }
            let expectation = witness_expectation(&op)?;
            let floor = verify_witness_positivity(args.d, args.samples, args.seed)?;
            let certified = floor.min_expectation >= -tol::CERTIFICATE_TOL
                && expectation < -tol::CERTIFICATE_TOL;
            json!({
                "d": args.d,
                "state": path.display().to_string(),
                "value": render::float(expectation),
                "min_product_expectation": render::float(floor.min_expectation),
                "certificate": if certified { "entangled" } else { "inconclusive" },
            })
        }
        _ => unreachable!("clap enforces exactly one source"),
    };
    emit(&args.out, &render::pretty(&value))?;
    Ok(0)
}

pub fn distill_check(args: &DistillCheckArgs) -> CmdResult {
    if args.restarts == 0 {
        return Err(Failure::Input("restarts must be at least 1".into()));
    }
    let opts = Rank2Options {
        restarts: args.restarts,
        seed: args.seed,
    };
    let (rho, cut, source) = match (&args.werner, &args.isotropic, &args.state) {
        (Some(values), None, None) => {
            let d = parse_dim(&values[0], "werner dimension")?;
            let alpha = rat_to_f64(&parse_rat(&values[1], "werner alpha")?);
            let rho = werner_matrix(&WernerParam::new(d, alpha)?)?;
            (
                rho,
                vec!["A".to_string()],
                json!({"family": "werner", "d": d, "alpha": render::float(alpha)}),
            )
        }
        (None, Some(values), None) => {
            let d = parse_dim(&values[0], "isotropic dimension")?;
            let f = rat_to_f64(&parse_rat(&values[1], "isotropic fraction")?);
            let rho = isotropic_matrix(&IsotropicParam::new(d, f)?)?;
            (
                rho,
                vec!["A".to_string()],
                json!({"family": "isotropic", "d": d, "f": render::float(f)}),
            )
        }
        (None, None, Some(path)) => {
            let op = read_operator_file(path)?;
            check_density(&op, path)?;
            let cut = match &args.cut {
                Some(text) => text
                    .split(',')
                    .map(str::trim)
                    .filter(|s| !s.is_empty())
                    .map(str::to_string)
                    .collect(),
                None => vec![op.layout().labels()[0].clone()],
            };
            (op, cut, json!({"file": path.display().to_string()}))
        }
        _ => unreachable!("clap enforces exactly one source"),
    };
    let cut_refs: Vec<&str> = cut.iter().map(String::as_str).collect();
    let report = certify_1distillable(&rho, &cut_refs, &opts)?;
    let value = json!({
        "source": source,
        "cut": cut,
        "minimum": {
            "value": render::float(report.minimum.value),
            "state": render::pure_state(&report.minimum.state),
            "restarts": report.minimum.restarts,
            "total_sweeps": report.minimum.total_sweeps,
        },
        "verdict": report.verdict.as_str(),
    });
    emit(&args.out, &render::pretty(&value))?;
    Ok(0)
}

pub fn verify(args: &VerifyArgs) -> CmdResult {
    let report = run_verify(args.d, args.seed)?;
    let text = match args.format {
        VerifyFormat::Text => {
            let mut text = String::new();
            writeln!(
                text,
                "verification suite  d={}  seed={}",
                report.d, report.seed
            )
            .expect("writing to a string cannot fail");
            for check in &report.checks {
                writeln!(
                    text,
                    "  {:<36} {}  {}",
                    check.name,
                    if check.passed { "pass" } else { "FAIL" },
                    check.detail
                )
                .expect("writing to a string cannot fail");
            }
            let t = &report.tension;
            writeln!(
                text,
                "  activating fraction of the audit hull: {}/{} = {:.6}",
                t.activating, t.grid_points, t.activating_fraction
            )
            .expect("writing to a string cannot fail");
            let failed = report.checks.iter().filter(|c| !c.passed).count();
            if report.passed {
                writeln!(text, "result: pass ({} checks)", report.checks.len())
                    .expect("writing to a string cannot fail");
            } else {
                writeln!(
                    text,
                    "result: FAIL ({failed} of {} checks)",
                    report.checks.len()
                )
                .expect("writing to a string cannot fail");
            }
            text
        }
        VerifyFormat::Json => {
            let checks: Vec<Value> = report
                .checks
                .iter()
                .map(|c| json!({"name": c.name, "passed": c.passed, "detail": c.detail}))
                .collect();
            let t = &report.tension;
            render::pretty(&json!({
                "d": report.d,
                "seed": report.seed,
                "checks": checks,
                "tension": {
                    "grid_points": t.grid_points,
                    "activating": t.activating,
                    "activating_fraction": render::float(t.activating_fraction),
                    "spot_checks": t.spot_checks,
                    "consistent": t.consistent,
                },
                "passed": report.passed,
            }))
        }
    };
    emit(&args.out, &text)?;
    Ok(if report.passed { 0 } else { 3 })
}
