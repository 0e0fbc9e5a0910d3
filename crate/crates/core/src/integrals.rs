//! First integrals: the undeformed `K_ℓ`, the deformed Casimir `K_k^b`, the
//! deformed family `K_ℓ^b` (by pencil expansion and by `e^{D_b}`), the
//! second-order operators `D`, `D_b`, and the solver for `b` given the
//! constants `c` of the deformed flow.

use std::collections::HashMap;

use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exactalg::{format_rational, rat, wrap, Monomial, Poly, Rational, Var};
use crate::indexsets::{complement, complement_pairs, enumerate_s};
use crate::linalg;
use crate::poisson::ConstantStructure;

/// Constants `c_1..c_{2k+1}` of the deformed flow; they sum to zero.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DeformationC {
    k: usize,
    #[serde(serialize_with = "ser_rationals")]
    c: Vec<Rational>,
}

fn ser_rationals<S: serde::Serializer>(v: &[Rational], s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(format_rational))
}

impl DeformationC {
    pub fn new(k: usize, c: Vec<Rational>) -> Result<DeformationC> {
        if c.len() != 2 * k + 1 {
            return Err(Error::WrongArity { expected: 2 * k + 1, got: c.len() });
        }
        let sum: Rational = c.iter().sum();
        if !sum.is_zero() {
            return Err(Error::ConstraintViolation(format!(
                "constants must sum to zero, got {}",
                format_rational(&sum)
            )));
        }
        Ok(DeformationC { k, c })
    }

    pub fn zero(k: usize) -> DeformationC {
        DeformationC { k, c: vec![Rational::zero(); 2 * k + 1] }
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn values(&self) -> &[Rational] {
        &self.c
    }

    /// 1-based, wrapped.
    pub fn get(&self, i: i64) -> &Rational {
        &self.c[wrap(i, self.c.len()) - 1]
    }
}

/// `x_{m_1} x_{m_2} ⋯ x_{m_s}`.
pub fn x_monomial(m: &[usize]) -> Monomial {
    Monomial::from_pairs(m.iter().map(|&i| (Var::x(i), 1)))
}

/// `K_ℓ = Σ_{m ∈ S_ℓ} x_m`.
pub fn k_ell(k: usize, ell: usize) -> Poly {
    Poly::from_terms(enumerate_s(k, ell).iter().map(|m| (Rational::one(), x_monomial(m.entries()))))
}

/// Chain parameter attached to an admissible complement pair `(r, s)`:
/// `b_{r,s}` at distance `k`, `−b_{r,s} = b_{s,s+k}` at distance `k+1`.
fn pair_weight(beta: &[Poly], k: usize, r: usize, s: usize) -> &Poly {
    if s - r == k {
        &beta[r - 1]
    } else {
        &beta[s - 1]
    }
}

fn casimir_from_chain(k: usize, beta: &[Poly]) -> Poly {
    let mut out = Poly::zero();
    for ell in 0..=k {
        for m in enumerate_s(k, ell) {
            let mp = complement(k, &m);
            let coeff: Poly = complement_pairs(&mp)
                .into_iter()
                .map(|(r, s)| pair_weight(beta, k, r, s).clone())
                .product();
            out += &(&coeff * &Poly::term(Rational::one(), x_monomial(m.entries())));
        }
    }
    out
}

/// `K_k^b = Σ_ℓ Σ_{m ∈ S_ℓ} b′_m x_m`, where `b′_m` multiplies the signed
/// coefficients over the pairing of the complement `m′`.
pub fn deformed_casimir(b: &ConstantStructure) -> Poly {
    casimir_from_chain(b.k(), &b.chain())
}

/// `K_0^b, …, K_k^b` as the coefficients of `ν^{k−ℓ}` in `K_k^{b−ν𝟏}`.
pub fn k_b_expansion(b: &ConstantStructure) -> Vec<Poly> {
    let k = b.k();
    let shifted = b.minus_scaled_unit(&Poly::var(Var::Nu));
    let by_nu = deformed_casimir(&shifted).split_by(Var::Nu);
    (0..=k)
        .map(|ell| by_nu.get(&((k - ell) as u32)).cloned().unwrap_or_else(Poly::zero))
        .collect()
}

fn second_order(k: usize, p: &Poly, weight: impl Fn(usize) -> Poly) -> Poly {
    let n = 2 * k + 1;
    (1..=n)
        .map(|i| {
            let d = p.partial(Var::x(i)).partial(Var::x(wrap((i + k) as i64, n)));
            if d.is_zero() {
                d
            } else {
                &weight(i) * &d
            }
        })
        .sum()
}

/// `D = Σ_i ∂²/∂x_i∂x_{i+k}`.
pub fn op_d(k: usize, p: &Poly) -> Poly {
    second_order(k, p, |_| Poly::one())
}

/// `D_b = Σ_i b_{i,i+k} ∂²/∂x_i∂x_{i+k}`.
pub fn op_db(b: &ConstantStructure, p: &Poly) -> Poly {
    let beta = b.chain();
    second_order(b.k(), p, |i| beta[i - 1].clone())
}

/// `Σ_{j ≤ ℓ} D_b^j K_ℓ / j!`.
pub fn k_b_via_exp(b: &ConstantStructure, ell: usize) -> Poly {
    let mut term = k_ell(b.k(), ell);
    let mut out = term.clone();
    let mut fact = Rational::one();
    for j in 1..=ell {
        term = op_db(b, &term);
        fact *= rat(j as i64);
        out += &term.scale(&(Rational::one() / &fact));
    }
    out
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RecursionReport {
    /// `i` with `D K_i ≠ (k−i+1) K_{i−1}`.
    pub undeformed_failures: Vec<usize>,
    /// `i` with `D K_{i+1}^b ≠ (k−i) K_i^b`.
    pub deformed_failures: Vec<usize>,
}

impl RecursionReport {
    pub fn ok(&self) -> bool {
        self.undeformed_failures.is_empty() && self.deformed_failures.is_empty()
    }
}

pub fn recursion_report(b: &ConstantStructure) -> RecursionReport {
    let k = b.k();
    let undeformed_failures = (1..=k)
        .filter(|&i| op_d(k, &k_ell(k, i)) != k_ell(k, i - 1).scale(&rat((k - i + 1) as i64)))
        .collect();
    let kb = k_b_expansion(b);
    let deformed_failures = (0..k)
        .filter(|&i| op_d(k, &kb[i + 1]) != kb[i].scale(&rat((k - i) as i64)))
        .collect();
    RecursionReport { undeformed_failures, deformed_failures }
}

/// Both recursions, with fully symbolic `b`.
pub fn recursion_check(k: usize) -> bool {
    recursion_report(&ConstantStructure::symbolic(k)).ok()
}

/// Chain parameters solving `b_{i,i+k} − b_{i−k,i} = c_i`, normalized by
/// `b_{1−k,1} = free`:
/// `b_{i,i+k} = free + Σ_{t=0}^{T} c_{1+tk}` where `1 + Tk ≡ i`.
pub fn solve_b_from_c(c: &DeformationC, free: &Rational) -> Result<ConstantStructure> {
    let k = c.k();
    let n = 2 * k + 1;
    let sum: Rational = c.values().iter().sum();
    if !sum.is_zero() {
        return Err(Error::ConstraintViolation("constants must sum to zero".into()));
    }
    let mut beta = vec![Poly::zero(); n];
    let mut acc = free.clone();
    for t in 0..n {
        let idx = wrap((1 + t * k) as i64, n);
        acc += c.get(idx as i64);
        beta[idx - 1] = Poly::constant(acc.clone());
    }
    Ok(ConstantStructure::from_chain(k, &beta))
}

/// Residuals `b_{i,i+k} − b_{i−k,i} − c_i`, all zero for a solution.
pub fn linear_residuals(b: &ConstantStructure, c: &DeformationC) -> Vec<Poly> {
    let k = b.k() as i64;
    (1..=b.dim() as i64)
        .map(|i| &(b.entry(i, i + k) - b.entry(i - k, i)) - &Poly::constant(c.get(i).clone()))
        .collect()
}

/// Jacobian `∂f_r/∂x_i` evaluated at a point.
pub fn jacobian_at(fs: &[Poly], n: usize, point: &HashMap<Var, Rational>) -> Result<Vec<Vec<Rational>>> {
    fs.par_iter()
        .map(|f| (1..=n).map(|i| f.partial(Var::x(i)).eval(point)).collect())
        .collect()
}

pub fn jacobian_rank(fs: &[Poly], n: usize, point: &HashMap<Var, Rational>) -> Result<usize> {
    Ok(linalg::rank(&jacobian_at(fs, n, point)?))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn b(i: usize, j: usize) -> Poly {
        Poly::var(Var::b(i, j))
    }

    #[test]
    fn undeformed_integrals() {
        assert_eq!(k_ell(1, 0), (1..=3).map(Poly::x).sum());
        assert_eq!(k_ell(2, 2), (1..=5).map(Poly::x).product());
        let x = |e: &[usize]| Poly::term(Rational::one(), x_monomial(e));
        let expected = [[1, 2, 4], [1, 3, 4], [1, 3, 5], [2, 3, 5], [2, 4, 5]]
            .iter()
            .map(|e| x(e))
            .sum();
        assert_eq!(k_ell(2, 1), expected);
    }

    #[test]
    fn casimir_k1() {
        let x = Poly::x;
        let c: Poly = (1..=3).map(x).product();
        let expected = &(&(&c + &(&b(2, 3) * &x(1))) - &(&b(1, 3) * &x(2))) + &(&b(1, 2) * &x(3));
        assert_eq!(deformed_casimir(&ConstantStructure::symbolic(1)), expected);
        assert_eq!(deformed_casimir(&ConstantStructure::zero(3)), (1..=7).map(x).product());
    }

    #[test]
    fn expansion_limits() {
        for k in 1..=3 {
            let bs = ConstantStructure::symbolic(k);
            let kb = k_b_expansion(&bs);
            assert_eq!(kb[0], (1..=2 * k + 1).map(Poly::x).sum());
            assert_eq!(kb[k], deformed_casimir(&bs));
            let undeformed = k_b_expansion(&ConstantStructure::zero(k));
            assert_eq!(undeformed, (0..=k).map(|l| k_ell(k, l)).collect::<Vec<_>>());
        }
    }

    #[test]
    fn operators() {
        let c: Poly = (1..=3).map(Poly::x).product();
        assert_eq!(op_d(1, &c), (1..=3).map(Poly::x).sum());
        assert!(op_d(1, &Poly::int(3)).is_zero());
        let bs = ConstantStructure::symbolic(1);
        assert_eq!(op_db(&bs, &c), &deformed_casimir(&bs) - &c);
        assert_eq!(k_b_via_exp(&bs, 1), &c + &op_db(&bs, &c));
        assert_eq!(k_b_via_exp(&bs, 0), k_ell(1, 0));
    }

    #[test]
    fn recursions() {
        assert!(recursion_check(1));
        assert!(recursion_check(2));
    }

    #[test]
    fn solver() {
        let c = DeformationC::new(1, vec![rat(2), rat(-5), rat(3)]).unwrap();
        let b = solve_b_from_c(&c, &rat(7)).unwrap();
        assert_eq!(b.param(1), Poly::int(9));
        assert_eq!(b.param(2), Poly::int(4));
        assert_eq!(b.param(3), Poly::int(7));
        assert!(linear_residuals(&b, &c).iter().all(Poly::is_zero));
        let z = solve_b_from_c(&DeformationC::zero(2), &rat(3)).unwrap();
        assert!(z.chain().iter().all(|p| *p == Poly::int(3)));
        assert!(matches!(
            DeformationC::new(1, vec![rat(1), rat(0), rat(0)]),
            Err(Error::ConstraintViolation(_))
        ));
    }
}
