//! Relabeling of the deformed flow as a periodic Veselov–Shabat chain:
//! `g_i = x_{ρ_i}` with `ρ_ℓ = (ℓ−1)k + 1`, the variables `f_i` with
//! `g_i = f_i + f_{i+1}`, the 2×2 transfer matrices and the trace formula.

use serde::Serialize;

use crate::exactalg::{rat, ratio, wrap, Poly, Var};
use crate::integrals::deformed_casimir;
use crate::lax::flow_rhs;
use crate::poisson::{Bracket, BracketKind, ConstantStructure};

/// `ρ_ℓ` for `ℓ = 1..=2k+1`.
pub fn rho(k: usize) -> Vec<usize> {
    let n = 2 * k + 1;
    (1..=n).map(|l| wrap(((l - 1) * k + 1) as i64, n)).collect()
}

pub fn rho_is_permutation(k: usize) -> bool {
    let mut r = rho(k);
    r.sort_unstable();
    r == (1..=2 * k + 1).collect::<Vec<_>>()
}

/// Rewrites `x_{ρ_i}` as `g_i`.
pub fn x_to_g(k: usize, p: &Poly) -> Poly {
    let r = rho(k);
    let mut inv = vec![0; r.len() + 1];
    for (i, &ri) in r.iter().enumerate() {
        inv[ri] = i + 1;
    }
    p.rename(|v| match v {
        Var::X(i) => Var::g(inv[i as usize]),
        other => other,
    })
}

/// Rewrites `g_i` as `x_{ρ_i}`.
pub fn g_to_x(k: usize, p: &Poly) -> Poly {
    let r = rho(k);
    p.rename(|v| match v {
        Var::G(i) => Var::x(r[i as usize - 1]),
        other => other,
    })
}

/// `f_i = ½ Σ_{j=1}^{n} (−1)^{j+1} g_{i+j−1}` for an odd-length vector.
pub fn g_to_f(g: &[f64]) -> Vec<f64> {
    let n = g.len();
    assert!(n % 2 == 1, "length must be odd");
    (0..n)
        .map(|i| {
            0.5 * (0..n)
                .map(|j| if j % 2 == 0 { g[(i + j) % n] } else { -g[(i + j) % n] })
                .sum::<f64>()
        })
        .collect()
}

/// `g_i = f_i + f_{i+1}`.
pub fn f_to_g(f: &[f64]) -> Vec<f64> {
    let n = f.len();
    (0..n).map(|i| f[i] + f[(i + 1) % n]).collect()
}

/// `f_i` as linear polynomials in the `g` variables.
pub fn f_in_g(k: usize) -> Vec<Poly> {
    let n = 2 * k + 1;
    (1..=n)
        .map(|i| {
            (1..=n)
                .map(|j| {
                    let s = if j % 2 == 1 { ratio(1, 2) } else { ratio(-1, 2) };
                    Poly::var(Var::g(wrap((i + j - 1) as i64, n))).scale(&s)
                })
                .sum()
        })
        .collect()
}

/// Chain parameters in chain indexing: `β_{i+1} = b_{ρ_i, ρ_i+k}`.
/// Entry `0` holds `β_1`.
pub fn vs_params(b: &ConstantStructure) -> Vec<Poly> {
    let k = b.k();
    let n = b.dim();
    let r = rho(k);
    let mut beta = vec![Poly::zero(); n];
    for i in 1..=n {
        beta[wrap(i as i64 + 1, n) - 1] = b.param(r[i - 1]);
    }
    beta
}

fn beta_at(beta: &[Poly], i: i64) -> &Poly {
    &beta[wrap(i, beta.len()) - 1]
}

fn g(i: i64, n: usize) -> Poly {
    Poly::var(Var::g(wrap(i, n)))
}

/// `ġ_i` obtained by pushing the deformed flow forward along `x → g`.
pub fn g_dot(b: &ConstantStructure) -> Vec<Poly> {
    let r = rho(b.k());
    let rhs = flow_rhs(b);
    r.iter().map(|&ri| x_to_g(b.k(), &rhs[ri - 1])).collect()
}

/// Residuals `ġ_i − (f_{i+1}² − f_i² + β_{i+1} − β_i)` in the `g` variables,
/// with the chain parameters on the right-hand side taken from `beta`.
pub fn vs_field_residuals(b: &ConstantStructure, beta: &[Poly]) -> Vec<Poly> {
    let n = b.dim();
    let f = f_in_g(b.k());
    let gd = g_dot(b);
    (0..n)
        .map(|i| {
            let fi = &f[i];
            let fj = &f[(i + 1) % n];
            let ii = i as i64 + 1;
            let rhs = &(&(fj * fj) - &(fi * fi)) + &(beta_at(beta, ii + 1) - beta_at(beta, ii));
            &gd[i] - &rhs
        })
        .collect()
}

pub fn vs_vector_field_check(b: &ConstantStructure) -> bool {
    vs_field_residuals(b, &vs_params(b)).iter().all(Poly::is_zero)
}

type Mat2 = [[Poly; 2]; 2];

fn mat_mul(a: &Mat2, b: &Mat2) -> Mat2 {
    let e = |i: usize, j: usize| &(&a[i][0] * &b[0][j]) + &(&a[i][1] * &b[1][j]);
    [[e(0, 0), e(0, 1)], [e(1, 0), e(1, 1)]]
}

fn mat_sub(a: &Mat2, b: &Mat2) -> Mat2 {
    let e = |i: usize, j: usize| &a[i][j] - &b[i][j];
    [[e(0, 0), e(0, 1)], [e(1, 0), e(1, 1)]]
}

/// `L_i = [[f_i, 1], [f_i² + β_i − λ, f_i]]`, with `f` in the `g` variables.
fn transfer(f: &Poly, beta: &Poly) -> Mat2 {
    let lam = Poly::var(Var::Lam);
    [
        [f.clone(), Poly::one()],
        [&(&(f * f) + beta) - &lam, f.clone()],
    ]
}

/// `tr(L_1 L_2 ⋯ L_{2k+1})` as a polynomial in `g` and `λ`.
pub fn vs_transfer_trace(k: usize, beta: &[Poly]) -> Poly {
    let f = f_in_g(k);
    let mut acc: Option<Mat2> = None;
    for (i, fi) in f.iter().enumerate() {
        let li = transfer(fi, &beta[i]);
        acc = Some(match acc {
            None => li,
            Some(a) => mat_mul(&a, &li),
        });
    }
    let l = acc.expect("at least one site");
    &l[0][0] + &l[1][1]
}

/// `Π_i (1 + (β_{i+1} − λ) ∂²/∂g_i∂g_{i+1}) Π_j g_j`.
pub fn vs_trace_formula(k: usize, beta: &[Poly]) -> Poly {
    let n = 2 * k + 1;
    let lam = Poly::var(Var::Lam);
    let mut p: Poly = (1..=n as i64).map(|i| g(i, n)).product();
    for i in 1..=n as i64 {
        let coeff = beta_at(beta, i + 1) - &lam;
        let d = p.partial(Var::g(wrap(i, n))).partial(Var::g(wrap(i + 1, n)));
        p += &(&coeff * &d);
    }
    p
}

/// The three routes to `tr(L)` compared in the `x` variables.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TraceIdentity {
    pub product_equals_formula: bool,
    pub formula_equals_casimir: bool,
}

impl TraceIdentity {
    pub fn ok(&self) -> bool {
        self.product_equals_formula && self.formula_equals_casimir
    }
}

/// `K_k^{b−λ}`: every chain parameter `b_{i,i+k}` replaced by `b_{i,i+k} − λ`.
pub fn casimir_minus_lambda(b: &ConstantStructure) -> Poly {
    deformed_casimir(&b.minus_scaled_unit(&-Poly::var(Var::Lam)))
}

pub fn vs_equivalence(b: &ConstantStructure) -> TraceIdentity {
    let k = b.k();
    let beta = vs_params(b);
    let formula = vs_trace_formula(k, &beta);
    let product = vs_transfer_trace(k, &beta);
    TraceIdentity {
        product_equals_formula: product == formula,
        formula_equals_casimir: g_to_x(k, &formula) == casimir_minus_lambda(b),
    }
}

pub fn vs_equivalence_check(b: &ConstantStructure) -> bool {
    vs_equivalence(b).ok()
}

/// The pushed-forward bracket table `{g_i, g_j}` for `i < j`, compared with
/// `g_i g_{i+1} + β_{i+1}` on adjacent pairs and `(−1)^{j−i+1} g_i g_j`
/// otherwise. The pair `(1, 2k+1)` is reported separately.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PoissonMapReport {
    pub mismatches: Vec<(usize, usize)>,
    /// `{g_{2k+1}, g_1}` computed by pushforward.
    pub wrap_bracket: Poly,
    /// Whether it equals `g_{2k+1} g_1 + β_1`, the adjacent rule read cyclically.
    pub wrap_is_cyclic_adjacent: bool,
}

impl PoissonMapReport {
    pub fn ok(&self) -> bool {
        self.mismatches.is_empty() && self.wrap_is_cyclic_adjacent
    }
}

pub fn poisson_map_table(b: &ConstantStructure) -> PoissonMapReport {
    let k = b.k();
    let n = b.dim();
    let r = rho(k);
    let br = Bracket::new(&BracketKind::Deformed(b.clone()));
    let beta = vs_params(b);
    let push = |i: usize, j: usize| -> Poly {
        x_to_g(k, &br.matrix()[r[i - 1] - 1][r[j - 1] - 1])
    };
    let mut mismatches = Vec::new();
    for i in 1..=n {
        for j in i + 1..=n {
            if i == 1 && j == n {
                continue;
            }
            let gg = &g(i as i64, n) * &g(j as i64, n);
            let expected = if j == i + 1 {
                &gg + beta_at(&beta, j as i64)
            } else if (j - i) % 2 == 1 {
                gg
            } else {
                -gg
            };
            if push(i, j) != expected {
                mismatches.push((i, j));
            }
        }
    }
    let wrap_bracket = push(n, 1);
    let cyclic = &(&g(n as i64, n) * &g(1, n)) + beta_at(&beta, 1);
    PoissonMapReport {
        mismatches,
        wrap_is_cyclic_adjacent: wrap_bracket == cyclic,
        wrap_bracket,
    }
}

/// `x_to_g(Σ x_j) = Σ g_j`.
pub fn hamiltonian_correspondence(k: usize) -> bool {
    let n = 2 * k + 1;
    x_to_g(k, &(1..=n).map(Poly::x).sum()) == (1..=n as i64).map(|i| g(i, n)).sum()
}

/// `F_i = Σ_{t=0}^{k−1} g_{i+2t+1} (Σ_{e≤t} g_{i+2e} − Σ_{e=t+1}^{k} g_{i+2e})`.
pub fn f_aux(k: usize, i: usize) -> Poly {
    let n = 2 * k + 1;
    let ii = i as i64;
    (0..k as i64)
        .map(|t| {
            let plus: Poly = (0..=t).map(|e| g(ii + 2 * e, n)).sum();
            let minus: Poly = (t + 1..=k as i64).map(|e| g(ii + 2 * e, n)).sum();
            &g(ii + 2 * t + 1, n) * &(&plus - &minus)
        })
        .sum()
}

/// Which lower-left entry to use in `U_i = [[0, 1], [q_i, 0]]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum UVariant {
    /// `q_i = F_i + f_i² + β_i − λ` with `F_i` from [`f_aux`].
    Displayed,
    /// `q_i = −ḟ_i + f_i² + β_i − λ`, with `ḟ_i` taken from the flow.
    FromFlow,
}

/// Entries of `L̇_i − (L_i U_{i+1} − U_i L_i)` for every site, flattened.
pub fn per_site_residuals(b: &ConstantStructure, variant: UVariant) -> Vec<Poly> {
    let k = b.k();
    let n = b.dim();
    let f = f_in_g(k);
    let beta = vs_params(b);
    let gd = g_dot(b);
    let fdot: Vec<Poly> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let s = if j % 2 == 0 { ratio(1, 2) } else { ratio(-1, 2) };
                    gd[(i + j) % n].scale(&s)
                })
                .sum()
        })
        .collect();
    let lam = Poly::var(Var::Lam);
    let u = |i: usize| -> Mat2 {
        let p = &(&(&f[i] * &f[i]) + &beta[i]) - &lam;
        let q = match variant {
            UVariant::Displayed => &f_aux(k, i + 1) + &p,
            UVariant::FromFlow => &p - &fdot[i],
        };
        [[Poly::zero(), Poly::one()], [q, Poly::zero()]]
    };
    let mut out = Vec::new();
    for i in 0..n {
        let li = transfer(&f[i], &beta[i]);
        let ldot: Mat2 = [
            [fdot[i].clone(), Poly::zero()],
            [(&f[i] * &fdot[i]).scale(&rat(2)), fdot[i].clone()],
        ];
        let rhs = mat_sub(&mat_mul(&li, &u((i + 1) % n)), &mat_mul(&u(i), &li));
        let res = mat_sub(&ldot, &rhs);
        out.extend(res.into_iter().flatten());
    }
    out
}

pub fn per_site_lax_check(b: &ConstantStructure, variant: UVariant) -> bool {
    per_site_residuals(b, variant).iter().all(Poly::is_zero)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rho_values() {
        assert_eq!(rho(2), vec![1, 3, 5, 2, 4]);
        assert!((1..=50).all(rho_is_permutation));
        let p = &Poly::x(3) * &Poly::x(1).pow(2);
        assert_eq!(x_to_g(2, &Poly::x(3)), Poly::var(Var::g(2)));
        assert_eq!(g_to_x(2, &x_to_g(2, &p)), p);
    }

    #[test]
    fn f_and_g() {
        assert_eq!(f_to_g(&[1.0, 0.0, 0.0, 0.0, 0.0]), vec![1.0, 0.0, 0.0, 0.0, 1.0]);
        assert_eq!(g_to_f(&[2.0, 2.0, 2.0]), vec![1.0, 1.0, 1.0]);
        let g = [0.3, -1.2, 4.0, 2.5, 0.1];
        let back = f_to_g(&g_to_f(&g));
        for (a, b) in g.iter().zip(&back) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn transfer_trace_example() {
        let beta = vec![Poly::zero(); 3];
        let t = vs_transfer_trace(1, &beta);
        let v = t.eval_f64(|v| match v {
            Var::G(_) => 2.0,
            _ => 0.0,
        });
        assert_eq!(v, 8.0);
        let formula = vs_trace_formula(1, &beta);
        let at_zero = formula.substitute(|v| (v == Var::Lam).then(Poly::zero));
        assert_eq!(at_zero, (1..=3).map(|i| Poly::var(Var::g(i))).product());
    }

    #[test]
    fn equivalences() {
        for k in 1..=2 {
            let b = ConstantStructure::symbolic(k);
            assert!(vs_vector_field_check(&b));
            assert!(vs_equivalence_check(&b));
            assert!(poisson_map_table(&b).ok());
            assert!(hamiltonian_correspondence(k));
        }
        let b = ConstantStructure::symbolic(2);
        let mut beta = vs_params(&b);
        beta[0] = &beta[0] + &Poly::one();
        assert!(!vs_field_residuals(&b, &beta).iter().all(Poly::is_zero));
    }

    #[test]
    fn per_site() {
        for k in 1..=2 {
            let b = ConstantStructure::symbolic(k);
            assert!(per_site_lax_check(&b, UVariant::FromFlow));
        }
    }
}
