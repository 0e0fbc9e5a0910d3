use std::fmt::Write as _;

use bilv_core::dynamics::{integrate, IntegrateOptions, SystemSpec, Trajectory};
use bilv_core::exactalg::{LaurentPoly, Poly, Rational};
use bilv_core::indexsets::{enumerate_s, enumerate_s_prime};
use bilv_core::integrals::{k_b_expansion, solve_b_from_c, DeformationC};
use bilv_core::lax::{char_poly_expected, char_poly_lax, det_lax, det_lax_expected, lax_residual};
use bilv_core::poisson::{jacobi_violations, ConstantStructure};
use bilv_core::sampler::rng;
use bilv_core::veselov::{per_site_lax_check, poisson_map_table, vs_equivalence, vs_vector_field_check, UVariant};
use rand::Rng;
use serde_json::{json, Value};

use crate::CliError;

/// A finished command: the machine-readable report, a one-line summary and
/// whether every requested check passed.
pub struct Outcome {
    pub report: String,
    pub summary: String,
    pub ok: bool,
}

fn json_report(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("json values always serialize");
    s.push('\n');
    s
}

fn poly_json(p: &Poly) -> Value {
    serde_json::to_value(p.to_json_terms()).expect("poly terms always serialize")
}

pub fn sets(k: usize, ell: usize, prime: bool) -> Result<Outcome, CliError> {
    if ell > k {
        return Err(CliError::Config(format!("--ell {ell} exceeds --k {k}")));
    }
    let tuples = if prime { enumerate_s_prime(k, ell) } else { enumerate_s(k, ell) };
    let mut report = String::new();
    for t in &tuples {
        writeln!(report, "{t}").unwrap();
    }
    let name = if prime { "S'" } else { "S" };
    Ok(Outcome { summary: format!("{name}_{ell} for k = {k}: {} tuples", tuples.len()), report, ok: true })
}

pub fn jacobi(b: &ConstantStructure) -> Outcome {
    let v = jacobi_violations(b);
    let ok = v.is_empty();
    let report = json_report(&json!({ "k": b.k(), "violations": v }));
    Outcome { summary: format!("jacobi: {} violating triples", v.len()), report, ok }
}

pub fn integrals(b: &ConstantStructure) -> Outcome {
    let ks = k_b_expansion(b);
    let degrees: Vec<u32> = ks.iter().map(|p| p.total_degree().unwrap_or(0)).collect();
    let report = json_report(&json!({
        "metadata": { "k": b.k(), "route": "expansion", "degrees": degrees },
        "integrals": ks.iter().map(poly_json).collect::<Vec<_>>(),
    }));
    Outcome { summary: format!("wrote {} integrals for k = {}", ks.len(), b.k()), report, ok: true }
}

pub fn structure_from_c(k: usize, c: Vec<Rational>, free: &Rational) -> Result<ConstantStructure, CliError> {
    let c = DeformationC::new(k, c)?;
    Ok(solve_b_from_c(&c, free)?)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum LaxCheck {
    Residual,
    Det,
    Charpoly,
}

fn differing_exponents(a: &LaurentPoly, b: &LaurentPoly) -> Vec<i32> {
    let d = a - b;
    d.terms().filter(|(_, c)| !c.is_zero()).map(|(e, _)| e).collect()
}

pub fn lax(b: &ConstantStructure, check: LaxCheck) -> Outcome {
    let (name, nonzero): (&str, Value) = match check {
        LaxCheck::Residual => ("residual", json!(lax_residual(b).nonzero_entries())),
        LaxCheck::Det => ("det", json!(differing_exponents(&det_lax(b), &det_lax_expected(b)))),
        LaxCheck::Charpoly => ("charpoly", json!(differing_exponents(&char_poly_lax(b), &char_poly_expected(b)))),
    };
    let ok = nonzero.as_array().is_some_and(Vec::is_empty);
    let report = json_report(&json!({ "k": b.k(), "check": name, "ok": ok, "nonzero_entries": nonzero }));
    Outcome { summary: format!("lax {name}: {}", if ok { "ok" } else { "FAILED" }), report, ok }
}

pub fn vs_check(b: &ConstantStructure) -> Outcome {
    let k = b.k();
    let pm = poisson_map_table(b);
    let field = vs_vector_field_check(b);
    let trace = vs_equivalence(b);
    let per_site = if k <= 2 { json!(per_site_lax_check(b, UVariant::FromFlow)) } else { json!("skipped") };
    let ok = pm.ok() && field && trace.ok() && per_site != json!(false);
    let report = json_report(&json!({
        "k": k,
        "poisson_map": pm.ok(),
        "vector_field": field,
        "trace_identity": trace.ok(),
        "per_site_lax": per_site,
        "wrap_bracket": poly_json(&pm.wrap_bracket),
    }));
    Outcome { summary: format!("vs-check: {}", if ok { "ok" } else { "FAILED" }), report, ok }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum OutFormat {
    Csv,
    Json,
}

pub struct SimulateArgs {
    pub c: Vec<Rational>,
    pub free: Rational,
    pub x0: Option<Vec<f64>>,
    pub t_end: f64,
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub stride: Option<f64>,
    pub format: OutFormat,
    pub seed: u64,
}

fn csv(spec: &SystemSpec, traj: &Trajectory) -> String {
    let n = spec.dim();
    let mut out = String::from("t");
    for i in 1..=n {
        write!(out, ",x{i}").unwrap();
    }
    for l in 0..=spec.k() {
        write!(out, ",K{l}").unwrap();
    }
    out.push('\n');
    for s in &traj.samples {
        write!(out, "{}", s.t).unwrap();
        for v in s.x.iter().chain(&spec.integral_values(&s.x)) {
            write!(out, ",{v}").unwrap();
        }
        out.push('\n');
    }
    out
}

pub fn simulate(k: usize, args: SimulateArgs) -> Result<Outcome, CliError> {
    let c = DeformationC::new(k, args.c)?;
    let spec = SystemSpec::with_free(c, &args.free)?;
    let x0 = match args.x0 {
        Some(x) => x,
        None => {
            let mut r = rng(args.seed);
            (0..spec.dim()).map(|_| r.gen_range(0.5..1.5)).collect()
        }
    };
    let mut opts = IntegrateOptions::new(args.rel_tol, args.abs_tol);
    if let Some(s) = args.stride {
        opts = opts.stride(s);
    }
    let traj = integrate(&spec, &x0, args.t_end, &opts).map_err(|e| match e {
        bilv_core::Error::StepSizeUnderflow { .. } => CliError::Failed(e.to_string()),
        other => CliError::from(other),
    })?;
    let worst = traj.max_rel_drift.iter().cloned().fold(0.0, f64::max);
    let report = match args.format {
        OutFormat::Csv => csv(&spec, &traj),
        OutFormat::Json => json_report(&json!({
            "k": k,
            "x0": x0,
            "trajectory": traj.samples,
            "drift": {
                "integrals_at_start": traj.integrals_at_start,
                "max_rel_drift": traj.max_rel_drift,
            },
            "steps": { "accepted": traj.steps_accepted, "rejected": traj.steps_rejected },
        })),
    };
    Ok(Outcome {
        summary: format!("{} samples, {} steps, max relative drift {worst:.3e}", traj.samples.len(), traj.steps_accepted),
        report,
        ok: true,
    })
}
