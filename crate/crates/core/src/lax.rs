//! The Lax operator `L^b(λ) = X + λ^{-1}Δ + λM` of the deformed flow, the
//! Lax-equation residual, and the closed forms of its determinant and
//! characteristic polynomial.

use serde::Serialize;

use crate::exactalg::{wrap, LaurentMatrix, LaurentPoly, Poly, Var};
use crate::integrals::deformed_casimir;
use crate::poisson::{a_entry, ConstantStructure};

/// The constituent matrices, 0-based storage.
#[derive(Debug, Clone, PartialEq)]
pub struct LaxParts {
    /// `X_{i,i−k} = x_i`.
    pub x: LaurentMatrix,
    /// `M_{i,i+1} = 1`.
    pub m: LaurentMatrix,
    /// `Δ_{i,i} = b_{i+k,i}`.
    pub delta: LaurentMatrix,
    /// `B_{i,i} = −(x_i + ⋯ + x_{i+k})`.
    pub b: LaurentMatrix,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LaxOperator {
    pub k: usize,
    pub structure: ConstantStructure,
    pub parts: LaxParts,
    pub l: LaurentMatrix,
}

fn idx(i: i64, n: usize) -> usize {
    wrap(i, n) - 1
}

pub fn lax_parts(b: &ConstantStructure) -> LaxParts {
    let k = b.k();
    let n = b.dim();
    let ki = k as i64;
    let x = LaurentMatrix::from_fn(n, |i, j| {
        if j == idx(i as i64 + 1 - ki, n) {
            LaurentPoly::from_poly(Poly::x(i + 1))
        } else {
            LaurentPoly::zero()
        }
    });
    let m = LaurentMatrix::from_fn(n, |i, j| {
        if j == idx(i as i64 + 2, n) {
            LaurentPoly::one()
        } else {
            LaurentPoly::zero()
        }
    });
    let delta = LaurentMatrix::from_fn(n, |i, j| {
        if i == j {
            let r = i as i64 + 1;
            LaurentPoly::from_poly(b.entry(r + ki, r).clone())
        } else {
            LaurentPoly::zero()
        }
    });
    let bm = LaurentMatrix::from_fn(n, |i, j| {
        if i == j {
            let s: Poly = (0..=k).map(|t| Poly::x(wrap((i + 1 + t) as i64, n))).sum();
            LaurentPoly::from_poly(-s)
        } else {
            LaurentPoly::zero()
        }
    });
    LaxParts { x, m, delta, b: bm }
}

pub fn build_lax(b: &ConstantStructure) -> LaxOperator {
    let parts = lax_parts(b);
    let l = &(&parts.x + &parts.delta.map(|e| e.mul_lam(-1))) + &parts.m.map(|e| e.mul_lam(1));
    LaxOperator { k: b.k(), structure: b.clone(), parts, l }
}

/// Right-hand side of the deformed flow:
/// `ẋ_i = x_i Σ_j A_{i,j} x_j + b_{i,i+k} − b_{i−k,i}`.
pub fn flow_rhs(b: &ConstantStructure) -> Vec<Poly> {
    let k = b.k();
    let n = b.dim();
    (1..=n)
        .map(|i| {
            let lin: Poly = (1..=n)
                .filter_map(|j| match a_entry(k, i, j) {
                    0 => None,
                    1 => Some(Poly::x(j)),
                    _ => Some(-Poly::x(j)),
                })
                .sum();
            let ii = i as i64;
            let ki = k as i64;
            &(&Poly::x(i) * &lin) + &(b.entry(ii, ii + ki) - b.entry(ii - ki, ii))
        })
        .collect()
}

/// `L̇ − [L, B' − λM^{k+1}]` with the given diagonal `B'`.
pub fn lax_residual_with(op: &LaxOperator, bmat: &LaurentMatrix) -> LaurentMatrix {
    let k = op.k;
    let n = 2 * k + 1;
    let rhs = flow_rhs(&op.structure);
    let ldot = LaurentMatrix::from_fn(n, |i, j| {
        if j == idx(i as i64 + 1 - k as i64, n) {
            LaurentPoly::from_poly(rhs[i].clone())
        } else {
            LaurentPoly::zero()
        }
    });
    let shift = op.parts.m.pow(k as u32 + 1).map(|e| e.mul_lam(1));
    let partner = bmat - &shift;
    &ldot - &op.l.commutator(&partner)
}

pub fn lax_residual(b: &ConstantStructure) -> LaurentMatrix {
    let op = build_lax(b);
    lax_residual_with(&op, &op.parts.b)
}

pub fn det_lax(b: &ConstantStructure) -> LaurentPoly {
    build_lax(b).l.det()
}

/// `λ^{2k+1} + λ^{−(2k+1)} Π_j b_{j+k,j} + K_k^b`.
pub fn det_lax_expected(b: &ConstantStructure) -> LaurentPoly {
    let k = b.k() as i64;
    let n = b.dim() as i32;
    let prod: Poly = (1..=n as i64).map(|j| b.entry(j + k, j).clone()).product();
    let top = LaurentPoly::lam(n);
    let bottom = LaurentPoly::monomial(-n, prod);
    &(&top + &bottom) + &LaurentPoly::from_poly(deformed_casimir(b))
}

/// `det(L^b(λ) − μ·Id)`, with `μ` the variable `mu`.
pub fn char_poly_lax(b: &ConstantStructure) -> LaurentPoly {
    let op = build_lax(b);
    let n = op.l.size();
    let mu = LaurentPoly::from_poly(Poly::var(Var::Mu));
    let shifted = LaurentMatrix::from_fn(n, |i, j| {
        if i == j {
            op.l.get(i, j) - &mu
        } else {
            op.l.get(i, j).clone()
        }
    });
    shifted.det()
}

/// `λ^{2k+1} + λ^{−(2k+1)} Π_j (b_{j+k,j} − λμ) + K_k^{b−λμ𝟏}`.
pub fn char_poly_expected(b: &ConstantStructure) -> LaurentPoly {
    let k = b.k() as i64;
    let n = b.dim() as i32;
    let lam_mu = LaurentPoly::monomial(1, Poly::var(Var::Mu));
    let mut prod = LaurentPoly::one();
    for j in 1..=n as i64 {
        prod = &prod * &(&LaurentPoly::from_poly(b.entry(j + k, j).clone()) - &lam_mu);
    }
    let lm = &Poly::var(Var::Lam) * &Poly::var(Var::Mu);
    let cas = LaurentPoly::from_poly_in(&deformed_casimir(&b.minus_scaled_unit(&lm)), Var::Lam);
    &(&LaurentPoly::lam(n) + &prod.mul_lam(-n)) + &cas
}

/// `K_ℓ^b` read off as the coefficient of `(λμ)^{k−ℓ}` in a characteristic
/// polynomial.
pub fn k_b_from_char_poly(k: usize, chi: &LaurentPoly) -> Vec<Poly> {
    (0..=k)
        .map(|ell| {
            let e = k - ell;
            chi.coeff(e as i32).coeff_of(Var::Mu, e as u32)
        })
        .collect()
}

/// Weights of every term of a characteristic polynomial: 1 for `x`, `μ` and
/// each power of `λ` (with sign), 2 for each parameter.
pub fn weights(chi: &LaurentPoly) -> Vec<i64> {
    let w = |v: Var| match v {
        Var::B(..) => 2,
        _ => 1,
    };
    chi.terms()
        .flat_map(|(e, p)| p.weighted_degrees(w).into_iter().map(move |d| d + e as i64))
        .collect()
}

pub fn is_weight_homogeneous(k: usize, chi: &LaurentPoly) -> bool {
    weights(chi).iter().all(|&w| w == 2 * k as i64 + 1)
}

/// Nonzero Leibniz terms of `Λ = L^b(λ)E`, where `E_{j,j+k} = 1`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PermutationSupport {
    /// Permutations (1-based images) contributing a nonzero product.
    pub contributing: Vec<Vec<usize>>,
    /// Those with some `σ(i) ∉ {i, i+k, i+k+1}`.
    pub outside: Vec<Vec<usize>>,
    /// Whether the Leibniz sum reproduces `det L^b(λ)`.
    pub leibniz_matches_det: bool,
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    fn go(cur: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        if cur.len() == used.len() {
            out.push(cur.clone());
            return;
        }
        for v in 0..used.len() {
            if !used[v] {
                used[v] = true;
                cur.push(v);
                go(cur, used, out);
                cur.pop();
                used[v] = false;
            }
        }
    }
    let mut out = Vec::new();
    go(&mut Vec::new(), &mut vec![false; n], &mut out);
    out
}

fn parity(p: &[usize]) -> bool {
    let mut seen = vec![false; p.len()];
    let mut odd = false;
    for s in 0..p.len() {
        let mut len = 0;
        let mut c = s;
        while !seen[c] {
            seen[c] = true;
            c = p[c];
            len += 1;
        }
        if len > 0 && len % 2 == 0 {
            odd = !odd;
        }
    }
    odd
}

/// Brute force over all `(2k+1)!` permutations.
pub fn permutation_support(b: &ConstantStructure) -> PermutationSupport {
    let op = build_lax(b);
    let n = op.l.size();
    let k = op.k;
    let lam = |i: usize, j: usize| op.l.get(i, (j + n - k) % n);
    let mut contributing = Vec::new();
    let mut outside = Vec::new();
    let mut sum = LaurentPoly::zero();
    for p in permutations(n) {
        let mut prod = LaurentPoly::one();
        for (i, &j) in p.iter().enumerate() {
            prod = &prod * lam(i, j);
            if prod.is_zero() {
                break;
            }
        }
        if prod.is_zero() {
            continue;
        }
        sum = if parity(&p) { &sum - &prod } else { &sum + &prod };
        let ok = p.iter().enumerate().all(|(i, &j)| {
            let d = (j + n - i) % n;
            d == 0 || d == k || d == k + 1
        });
        let one_based: Vec<usize> = p.iter().map(|j| j + 1).collect();
        if !ok {
            outside.push(one_based.clone());
        }
        contributing.push(one_based);
    }
    PermutationSupport {
        contributing,
        outside,
        leibniz_matches_det: sum == op.l.det(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::integrals::k_ell;

    #[test]
    fn entries_k1() {
        let op = build_lax(&ConstantStructure::zero(1));
        assert_eq!(op.l.get(0, 1), &LaurentPoly::lam(1));
        assert_eq!(op.l.get(1, 0), &LaurentPoly::from_poly(Poly::x(2)));
        let sym = build_lax(&ConstantStructure::symbolic(1));
        assert_eq!(sym.l.get(0, 0), &LaurentPoly::monomial(-1, -Poly::var(Var::b(1, 2))));
        let m = build_lax(&ConstantStructure::zero(2)).parts.m;
        assert_eq!(m.pow(5), LaurentMatrix::identity(5));
    }

    #[test]
    fn residual_vanishes() {
        assert!(lax_residual(&ConstantStructure::zero(1)).is_zero());
        assert!(lax_residual(&ConstantStructure::symbolic(2)).is_zero());
        let op = build_lax(&ConstantStructure::symbolic(2));
        let mut bad = op.parts.b.clone();
        bad.set(0, 0, bad.get(0, 0) + &LaurentPoly::from_poly(Poly::x(1)));
        assert!(!lax_residual_with(&op, &bad).is_zero());
    }

    #[test]
    fn determinant() {
        for k in 1..=2 {
            let b = ConstantStructure::symbolic(k);
            assert_eq!(det_lax(&b), det_lax_expected(&b));
            assert_eq!(build_lax(&b).l.det_direct(), det_lax(&b));
        }
        let z = det_lax(&ConstantStructure::zero(2));
        assert_eq!(z, &LaurentPoly::lam(5) + &LaurentPoly::from_poly(k_ell(2, 2)));
    }

    #[test]
    fn characteristic_polynomial() {
        let b = ConstantStructure::symbolic(1);
        let chi = char_poly_lax(&b);
        assert_eq!(chi, char_poly_expected(&b));
        assert_eq!(k_b_from_char_poly(1, &chi)[0], k_ell(1, 0));
        assert!(is_weight_homogeneous(1, &chi));
        let z = char_poly_lax(&ConstantStructure::zero(1));
        let mut expected = &LaurentPoly::lam(3) - &LaurentPoly::from_poly(Poly::var(Var::Mu).pow(3));
        for ell in 0..=1 {
            let e = 1 - ell;
            let lm = &Poly::var(Var::Mu).pow(e as u32) * &k_ell(1, ell);
            expected = &expected + &LaurentPoly::monomial(e as i32, lm);
        }
        assert_eq!(z, expected);
    }

    #[test]
    fn support() {
        for k in 1..=2 {
            let s = permutation_support(&ConstantStructure::symbolic(k));
            assert!(s.outside.is_empty());
            assert!(s.leibniz_matches_det);
        }
    }
}
