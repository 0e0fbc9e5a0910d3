//! Dormand–Prince 5(4) with a PI step-size controller and the standard
//! 4th-order continuous extension.

use crate::error::{Error, Result};

const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const A71: f64 = 35.0 / 384.0;
const A73: f64 = 500.0 / 1113.0;
const A74: f64 = 125.0 / 192.0;
const A75: f64 = -2187.0 / 6784.0;
const A76: f64 = 11.0 / 84.0;

const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

const D1: f64 = -12715105075.0 / 11282082432.0;
const D3: f64 = 87487479700.0 / 32700410799.0;
const D4: f64 = -10690763975.0 / 1880347072.0;
const D5: f64 = 701980252875.0 / 199316789632.0;
const D6: f64 = -1453857185.0 / 822651844.0;
const D7: f64 = 69997945.0 / 29380423.0;

const SAFETY: f64 = 0.9;
/// Step may grow by at most `1 / MIN_FAC` and shrink by at most `1 / MAX_FAC` per step.
const MIN_FAC: f64 = 0.2;
const MAX_FAC: f64 = 10.0;
const BETA: f64 = 0.04;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    pub rel: f64,
    pub abs: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepStats {
    pub accepted: usize,
    pub rejected: usize,
    pub evaluations: usize,
}

/// Interpolation data of one accepted step on `[t, t + h]`.
pub struct DenseStep<'a> {
    pub t: f64,
    pub h: f64,
    rcont: [&'a [f64]; 5],
}

impl DenseStep<'_> {
    /// State at `t + θh`, `θ ∈ [0, 1]`.
    pub fn at(&self, theta: f64, out: &mut [f64]) {
        let t1 = 1.0 - theta;
        for (i, o) in out.iter_mut().enumerate() {
            let [r1, r2, r3, r4, r5] = self.rcont;
            *o = r1[i] + theta * (r2[i] + t1 * (r3[i] + theta * (r4[i] + t1 * r5[i])));
        }
    }
}

fn norm(v: &[f64], y: &[f64], tol: &Tolerances) -> f64 {
    let s: f64 = v
        .iter()
        .zip(y)
        .map(|(vi, yi)| {
            let sc = tol.abs + tol.rel * yi.abs();
            (vi / sc).powi(2)
        })
        .sum();
    (s / v.len() as f64).sqrt()
}

fn initial_step(f: &mut impl FnMut(&[f64], &mut [f64]), y: &[f64], f0: &[f64], span: f64, tol: &Tolerances) -> f64 {
    let d0 = norm(y, y, tol);
    let d1 = norm(f0, y, tol);
    let mut h = if d0 < 1e-5 || d1 < 1e-5 { 1e-6 } else { 0.01 * d0 / d1 };
    h = h.min(span);
    let y1: Vec<f64> = y.iter().zip(f0).map(|(a, b)| a + h * b).collect();
    let mut f1 = vec![0.0; y.len()];
    f(&y1, &mut f1);
    let diff: Vec<f64> = f1.iter().zip(f0).map(|(a, b)| a - b).collect();
    let d2 = norm(&diff, y, tol) / h;
    let h1 = if d1.max(d2) <= 1e-15 {
        (h * 1e-3).max(1e-6)
    } else {
        (0.01 / d1.max(d2)).powf(0.2)
    };
    (100.0 * h).min(h1).min(span)
}

/// Integrates `y' = f(y)` from `t0` to `t_end`, invoking `on_step` after every
/// accepted step with its continuous extension.
pub fn integrate(
    mut f: impl FnMut(&[f64], &mut [f64]),
    t0: f64,
    y0: &[f64],
    t_end: f64,
    tol: &Tolerances,
    max_steps: usize,
    mut on_step: impl FnMut(&DenseStep<'_>, &[f64]),
) -> Result<StepStats> {
    let n = y0.len();
    let mut y = y0.to_vec();
    let mut t = t0;
    let span = t_end - t0;
    let mut k = vec![vec![0.0; n]; 7];
    let mut ytmp = vec![0.0; n];
    let mut ynew = vec![0.0; n];
    let mut err = vec![0.0; n];
    let mut rcont = vec![vec![0.0; n]; 5];
    let mut stats = StepStats { accepted: 0, rejected: 0, evaluations: 1 };
    f(&y, &mut k[0]);
    let mut h = initial_step(&mut f, &y, &k[0].clone(), span, tol);
    stats.evaluations += 1;
    let mut facold = 1e-4f64;
    let expo = 0.2 - BETA * 0.75;

    while t < t_end {
        if stats.accepted + stats.rejected >= max_steps {
            return Err(Error::StepSizeUnderflow { t, h });
        }
        let last = t + h >= t_end;
        if last {
            h = t_end - t;
        }
        if h <= f64::EPSILON * 16.0 * t.abs().max(1.0) {
            return Err(Error::StepSizeUnderflow { t, h });
        }
        let stage = |coef: &[(usize, f64)], k: &[Vec<f64>], out: &mut [f64]| {
            for i in 0..n {
                out[i] = y[i] + h * coef.iter().map(|&(s, a)| a * k[s][i]).sum::<f64>();
            }
        };
        stage(&[(0, A21)], &k, &mut ytmp);
        f(&ytmp, &mut k[1]);
        stage(&[(0, A31), (1, A32)], &k, &mut ytmp);
        f(&ytmp, &mut k[2]);
        stage(&[(0, A41), (1, A42), (2, A43)], &k, &mut ytmp);
        f(&ytmp, &mut k[3]);
        stage(&[(0, A51), (1, A52), (2, A53), (3, A54)], &k, &mut ytmp);
        f(&ytmp, &mut k[4]);
        stage(&[(0, A61), (1, A62), (2, A63), (3, A64), (4, A65)], &k, &mut ytmp);
        f(&ytmp, &mut k[5]);
        stage(&[(0, A71), (2, A73), (3, A74), (4, A75), (5, A76)], &k, &mut ynew);
        f(&ynew, &mut k[6]);
        stats.evaluations += 6;

        for i in 0..n {
            err[i] = h * (E1 * k[0][i] + E3 * k[2][i] + E4 * k[3][i] + E5 * k[4][i] + E6 * k[5][i] + E7 * k[6][i]);
        }
        let scale: Vec<f64> = y.iter().zip(&ynew).map(|(a, b)| a.abs().max(b.abs())).collect();
        let e = norm(&err, &scale, tol);
        let fac11 = e.powf(expo);

        if e.is_finite() && e <= 1.0 {
            let mut fac = fac11 / facold.powf(BETA);
            fac = (1.0 / MAX_FAC).max((1.0 / MIN_FAC).min(fac / SAFETY));
            let hnew = h / fac;
            facold = e.max(1e-4);

            for i in 0..n {
                let ydiff = ynew[i] - y[i];
                let bspl = h * k[0][i] - ydiff;
                rcont[0][i] = y[i];
                rcont[1][i] = ydiff;
                rcont[2][i] = bspl;
                rcont[3][i] = ydiff - h * k[6][i] - bspl;
                rcont[4][i] = h
                    * (D1 * k[0][i] + D3 * k[2][i] + D4 * k[3][i] + D5 * k[4][i] + D6 * k[5][i] + D7 * k[6][i]);
            }
            let dense = DenseStep {
                t,
                h,
                rcont: [&rcont[0], &rcont[1], &rcont[2], &rcont[3], &rcont[4]],
            };
            on_step(&dense, &ynew);
            stats.accepted += 1;
            t = if last { t_end } else { t + h };
            std::mem::swap(&mut y, &mut ynew);
            let (first, rest) = k.split_at_mut(1);
            first[0].copy_from_slice(&rest[5]);
            h = hnew;
        } else {
            stats.rejected += 1;
            let shrink = if e.is_finite() { (1.0 / MIN_FAC).min(fac11 / SAFETY) } else { MAX_FAC };
            h /= shrink.max(1.0 + 1e-3);
        }
    }
    Ok(stats)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exponential_decay() {
        let tol = Tolerances { rel: 1e-10, abs: 1e-12 };
        let mut end = vec![];
        integrate(|y, dy| dy[0] = -y[0], 0.0, &[1.0], 2.0, &tol, 100_000, |_, y| end = y.to_vec()).unwrap();
        assert!((end[0] - (-2.0f64).exp()).abs() < 1e-9);
    }

    #[test]
    fn dense_output_matches_solution() {
        let tol = Tolerances { rel: 1e-10, abs: 1e-12 };
        let mut worst = 0.0f64;
        let mut buf = [0.0; 2];
        integrate(
            |y, dy| {
                dy[0] = y[1];
                dy[1] = -y[0];
            },
            0.0,
            &[0.0, 1.0],
            6.0,
            &tol,
            100_000,
            |d, _| {
                for s in 0..=4 {
                    let th = s as f64 / 4.0;
                    d.at(th, &mut buf);
                    worst = worst.max((buf[0] - (d.t + th * d.h).sin()).abs());
                }
            },
        )
        .unwrap();
        assert!(worst < 1e-8, "{worst}");
    }

    #[test]
    fn blow_up_is_reported() {
        let tol = Tolerances { rel: 1e-8, abs: 1e-10 };
        let r = integrate(|y, dy| dy[0] = y[0] * y[0], 0.0, &[1.0], 2.0, &tol, 1_000_000, |_, _| {});
        assert!(matches!(r, Err(Error::StepSizeUnderflow { .. })));
    }
}
