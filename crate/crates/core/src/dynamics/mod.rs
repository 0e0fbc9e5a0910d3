//! Floating-point simulation of `ẋ_i = Σ_j A_{i,j} x_i x_j + c_i` with drift
//! monitoring of the integrals `K_0^b, …, K_k^b`.

mod dopri;
mod tape;

pub use dopri::{DenseStep, StepStats, Tolerances};
pub use tape::Tape;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::exactalg::{to_f64, Rational};
use crate::integrals::{k_b_expansion, solve_b_from_c, DeformationC};
use crate::poisson::{a_entry, ConstantStructure};

#[derive(Debug, Clone)]
pub struct SystemSpec {
    k: usize,
    c: DeformationC,
    b: ConstantStructure,
    a: Vec<Vec<i8>>,
    c_f64: Vec<f64>,
    integrals: Vec<Tape>,
}

impl SystemSpec {
    /// `b` solved from `c` with the free constant set to zero.
    pub fn new(c: DeformationC) -> Result<SystemSpec> {
        SystemSpec::with_free(c, &Rational::from_integer(0.into()))
    }

    pub fn with_free(c: DeformationC, free: &Rational) -> Result<SystemSpec> {
        let k = c.k();
        let n = 2 * k + 1;
        let b = solve_b_from_c(&c, free)?;
        let integrals = k_b_expansion(&b)
            .iter()
            .map(|p| Tape::compile(p, n))
            .collect::<Result<Vec<_>>>()?;
        let a = (1..=n).map(|i| (1..=n).map(|j| a_entry(k, i, j)).collect()).collect();
        let c_f64 = c.values().iter().map(to_f64).collect();
        Ok(SystemSpec { k, c, b, a, c_f64, integrals })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn dim(&self) -> usize {
        2 * self.k + 1
    }

    pub fn c(&self) -> &DeformationC {
        &self.c
    }

    pub fn structure(&self) -> &ConstantStructure {
        &self.b
    }

    pub fn integrals(&self) -> &[Tape] {
        &self.integrals
    }

    pub fn integral_values(&self, x: &[f64]) -> Vec<f64> {
        self.integrals.iter().map(|t| t.eval(x)).collect()
    }

    fn field_into(&self, x: &[f64], out: &mut [f64]) {
        for (i, row) in self.a.iter().enumerate() {
            let s: f64 = row
                .iter()
                .zip(x)
                .map(|(&a, &xj)| match a {
                    1 => xj,
                    -1 => -xj,
                    _ => 0.0,
                })
                .sum();
            out[i] = x[i] * s + self.c_f64[i];
        }
    }
}

pub fn vector_field(spec: &SystemSpec, x: &[f64]) -> Result<Vec<f64>> {
    if x.len() != spec.dim() {
        return Err(Error::DimensionMismatch(format!("state has {} entries, expected {}", x.len(), spec.dim())));
    }
    let mut out = vec![0.0; x.len()];
    spec.field_into(x, &mut out);
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct State {
    pub t: f64,
    pub x: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Trajectory {
    pub samples: Vec<State>,
    pub integrals_at_start: Vec<f64>,
    pub max_rel_drift: Vec<f64>,
    pub steps_accepted: usize,
    pub steps_rejected: usize,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntegrateOptions {
    pub rel_tol: f64,
    pub abs_tol: f64,
    /// Sampling interval for the dense output; `None` records every step.
    pub stride: Option<f64>,
    pub max_steps: usize,
    /// Integrate the time-reversed field.
    pub reverse: bool,
}

impl IntegrateOptions {
    pub fn new(rel_tol: f64, abs_tol: f64) -> IntegrateOptions {
        IntegrateOptions { rel_tol, abs_tol, stride: None, max_steps: 10_000_000, reverse: false }
    }

    pub fn stride(mut self, s: f64) -> IntegrateOptions {
        self.stride = Some(s);
        self
    }

    pub fn reversed(mut self) -> IntegrateOptions {
        self.reverse = true;
        self
    }
}

/// Adaptive Dormand–Prince integration on `[0, t_end]`.
pub fn integrate(spec: &SystemSpec, x0: &[f64], t_end: f64, opts: &IntegrateOptions) -> Result<Trajectory> {
    let n = spec.dim();
    if x0.len() != n {
        return Err(Error::DimensionMismatch(format!("x0 has {} entries, expected {n}", x0.len())));
    }
    if !(t_end > 0.0 && opts.rel_tol > 0.0 && opts.abs_tol > 0.0) {
        return Err(Error::InvalidInput("t_end and tolerances must be positive".into()));
    }
    if let Some(s) = opts.stride {
        if !(s > 0.0) {
            return Err(Error::InvalidInput("stride must be positive".into()));
        }
    }
    let sign = if opts.reverse { -1.0 } else { 1.0 };
    let field = |x: &[f64], out: &mut [f64]| {
        spec.field_into(x, out);
        if sign < 0.0 {
            out.iter_mut().for_each(|v| *v = -*v);
        }
    };
    let tol = Tolerances { rel: opts.rel_tol, abs: opts.abs_tol };
    let mut samples = vec![State { t: 0.0, x: x0.to_vec() }];
    let mut next_sample = opts.stride.unwrap_or(0.0);
    let mut buf = vec![0.0; n];
    let stats = dopri::integrate(field, 0.0, x0, t_end, &tol, opts.max_steps, |step, y_end| {
        let t1 = step.t + step.h;
        match opts.stride {
            None => samples.push(State { t: t1, x: y_end.to_vec() }),
            Some(s) => {
                while next_sample < t1 && next_sample < t_end {
                    step.at((next_sample - step.t) / step.h, &mut buf);
                    samples.push(State { t: next_sample, x: buf.clone() });
                    next_sample = samples.len() as f64 * s;
                }
                if t1 >= t_end {
                    samples.push(State { t: t_end, x: y_end.to_vec() });
                }
            }
        }
    })?;
    let integrals_at_start = spec.integral_values(x0);
    let mut traj = Trajectory {
        samples,
        integrals_at_start,
        max_rel_drift: Vec::new(),
        steps_accepted: stats.accepted,
        steps_rejected: stats.rejected,
    };
    traj.max_rel_drift = drift_report(&traj, spec);
    Ok(traj)
}

/// `max_t |K(x(t)) − K(x0)| / max(1, |K(x0)|)` for each integral.
pub fn drift_report(traj: &Trajectory, spec: &SystemSpec) -> Vec<f64> {
    let Some(first) = traj.samples.first() else {
        return vec![0.0; spec.integrals().len()];
    };
    let start = spec.integral_values(&first.x);
    let mut worst = vec![0.0f64; start.len()];
    for s in &traj.samples {
        for (w, (v, v0)) in worst.iter_mut().zip(spec.integral_values(&s.x).iter().zip(&start)) {
            *w = w.max((v - v0).abs() / v0.abs().max(1.0));
        }
    }
    worst
}
