//! Laurent polynomials in the spectral parameter λ with polynomial
//! coefficients, and square matrices of them.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::One;

use super::poly::{Monomial, Poly};
use super::rational::Rational;
use super::var::Var;
use crate::linalg::det_expand;

/// `Σ_e coeffs[e - shift] · λ^e`.
///
/// Normalized so that the lowest and highest stored coefficients are nonzero;
/// the zero value has no coefficients and shift 0.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct LaurentPoly {
    shift: i32,
    coeffs: Vec<Poly>,
}

impl LaurentPoly {
    pub fn zero() -> LaurentPoly {
        LaurentPoly::default()
    }

    pub fn one() -> LaurentPoly {
        LaurentPoly::from_poly(Poly::one())
    }

    pub fn from_poly(p: Poly) -> LaurentPoly {
        LaurentPoly::monomial(0, p)
    }

    /// `p · λ^e`.
    pub fn monomial(e: i32, p: Poly) -> LaurentPoly {
        LaurentPoly::new(e, vec![p])
    }

    /// `λ^e`.
    pub fn lam(e: i32) -> LaurentPoly {
        LaurentPoly::monomial(e, Poly::one())
    }

    pub fn new(shift: i32, coeffs: Vec<Poly>) -> LaurentPoly {
        let mut out = LaurentPoly { shift, coeffs };
        out.normalize();
        out
    }

    fn normalize(&mut self) {
        while self.coeffs.last().is_some_and(Poly::is_zero) {
            self.coeffs.pop();
        }
        let lead = self.coeffs.iter().take_while(|p| p.is_zero()).count();
        if lead > 0 {
            self.coeffs.drain(..lead);
            self.shift += lead as i32;
        }
        if self.coeffs.is_empty() {
            self.shift = 0;
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Lowest λ-exponent present (0 for the zero value).
    pub fn min_exp(&self) -> i32 {
        self.shift
    }

    /// Highest λ-exponent present (`shift - 1` for zero).
    pub fn max_exp(&self) -> i32 {
        self.shift + self.coeffs.len() as i32 - 1
    }

    pub fn coeff(&self, e: i32) -> Poly {
        let idx = e - self.shift;
        if idx < 0 {
            return Poly::zero();
        }
        self.coeffs.get(idx as usize).cloned().unwrap_or_default()
    }

    /// Nonzero `(exponent, coefficient)` pairs in increasing exponent.
    pub fn terms(&self) -> impl Iterator<Item = (i32, &Poly)> {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, p)| !p.is_zero())
            .map(move |(i, p)| (self.shift + i as i32, p))
    }

    pub fn mul_lam(&self, e: i32) -> LaurentPoly {
        if self.is_zero() {
            return LaurentPoly::zero();
        }
        LaurentPoly {
            shift: self.shift + e,
            coeffs: self.coeffs.clone(),
        }
    }

    pub fn map_coeffs(&self, f: impl Fn(&Poly) -> Poly) -> LaurentPoly {
        LaurentPoly::new(self.shift, self.coeffs.iter().map(f).collect())
    }

    /// Folds λ into the polynomial ring as the variable `var`; `None` if a
    /// negative power is present.
    pub fn to_poly(&self, var: Var) -> Option<Poly> {
        if self.is_zero() {
            return Some(Poly::zero());
        }
        if self.shift < 0 {
            return None;
        }
        Some(
            self.terms()
                .map(|(e, p)| p * &Poly::term(Rational::one(), Monomial::pow(var, e as u32)))
                .sum(),
        )
    }

    /// Reads powers of `var` in `p` as powers of λ.
    pub fn from_poly_in(p: &Poly, var: Var) -> LaurentPoly {
        let parts = p.split_by(var);
        let Some(&top) = parts.keys().next_back() else {
            return LaurentPoly::zero();
        };
        let mut coeffs = vec![Poly::zero(); top as usize + 1];
        for (e, c) in parts {
            coeffs[e as usize] = c;
        }
        LaurentPoly::new(0, coeffs)
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (e, p) in self.terms().collect::<Vec<_>>().into_iter().rev() {
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            match e {
                0 => write!(f, "({p})")?,
                1 => write!(f, "({p})*lam")?,
                _ => write!(f, "({p})*lam^{e}")?,
            }
        }
        Ok(())
    }
}

impl Add<&LaurentPoly> for &LaurentPoly {
    type Output = LaurentPoly;
    fn add(self, rhs: &LaurentPoly) -> LaurentPoly {
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        let lo = self.min_exp().min(rhs.min_exp());
        let hi = self.max_exp().max(rhs.max_exp());
        let coeffs = (lo..=hi).map(|e| &self.coeff(e) + &rhs.coeff(e)).collect();
        LaurentPoly::new(lo, coeffs)
    }
}

impl Sub<&LaurentPoly> for &LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, rhs: &LaurentPoly) -> LaurentPoly {
        self + &(-rhs)
    }
}

impl Neg for &LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        self.map_coeffs(|p| -p)
    }
}

impl Mul<&LaurentPoly> for &LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, rhs: &LaurentPoly) -> LaurentPoly {
        if self.is_zero() || rhs.is_zero() {
            return LaurentPoly::zero();
        }
        let mut coeffs = vec![Poly::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    coeffs[i + j] += a * b;
                }
            }
        }
        LaurentPoly::new(self.shift + rhs.shift, coeffs)
    }
}

impl super::RingElem for LaurentPoly {
    fn zero() -> Self {
        LaurentPoly::zero()
    }
    fn one() -> Self {
        LaurentPoly::one()
    }
    fn is_zero(&self) -> bool {
        LaurentPoly::is_zero(self)
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn neg(&self) -> Self {
        -self
    }
}

/// A square matrix of [`LaurentPoly`] entries, 0-based storage.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LaurentMatrix {
    n: usize,
    entries: Vec<Vec<LaurentPoly>>,
}

impl LaurentMatrix {
    pub fn zeros(n: usize) -> LaurentMatrix {
        LaurentMatrix {
            n,
            entries: vec![vec![LaurentPoly::zero(); n]; n],
        }
    }

    pub fn identity(n: usize) -> LaurentMatrix {
        LaurentMatrix::from_fn(n, |i, j| if i == j { LaurentPoly::one() } else { LaurentPoly::zero() })
    }

    /// Builds from a 0-based entry function.
    pub fn from_fn(n: usize, f: impl Fn(usize, usize) -> LaurentPoly) -> LaurentMatrix {
        LaurentMatrix {
            n,
            entries: (0..n).map(|i| (0..n).map(|j| f(i, j)).collect()).collect(),
        }
    }

    /// Lifts a polynomial matrix (λ-degree 0 entries).
    pub fn from_polys(rows: &[Vec<Poly>]) -> LaurentMatrix {
        LaurentMatrix::from_fn(rows.len(), |i, j| LaurentPoly::from_poly(rows[i][j].clone()))
    }

    pub fn size(&self) -> usize {
        self.n
    }

    /// 0-based entry.
    pub fn get(&self, i: usize, j: usize) -> &LaurentPoly {
        &self.entries[i][j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: LaurentPoly) {
        self.entries[i][j] = v;
    }

    pub fn map(&self, f: impl Fn(&LaurentPoly) -> LaurentPoly) -> LaurentMatrix {
        LaurentMatrix::from_fn(self.n, |i, j| f(&self.entries[i][j]))
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().flatten().all(LaurentPoly::is_zero)
    }

    /// 1-based `(row, col)` positions of nonzero entries.
    pub fn nonzero_entries(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for i in 0..self.n {
            for j in 0..self.n {
                if !self.entries[i][j].is_zero() {
                    out.push((i + 1, j + 1));
                }
            }
        }
        out
    }

    pub fn commutator(&self, other: &LaurentMatrix) -> LaurentMatrix {
        &(self * other) - &(other * self)
    }

    pub fn pow(&self, e: u32) -> LaurentMatrix {
        let mut acc = LaurentMatrix::identity(self.n);
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// Determinant by clearing λ: each row is multiplied by the power of λ
    /// that makes it polynomial, the polynomial determinant is expanded with
    /// λ as an ordinary variable, and the total shift is divided back out.
    pub fn det(&self) -> LaurentPoly {
        let mut total_shift = 0i32;
        let mut rows = Vec::with_capacity(self.n);
        for row in &self.entries {
            let lo = row
                .iter()
                .filter(|e| !e.is_zero())
                .map(LaurentPoly::min_exp)
                .min();
            let Some(lo) = lo else {
                return LaurentPoly::zero();
            };
            total_shift += lo;
            rows.push(
                row.iter()
                    .map(|e| e.mul_lam(-lo).to_poly(Var::Lam).expect("row cleared of negative powers"))
                    .collect::<Vec<_>>(),
            );
        }
        let d = det_expand(&rows);
        LaurentPoly::from_poly_in(&d, Var::Lam).mul_lam(total_shift)
    }

    /// Determinant expanded directly in the Laurent ring.
    pub fn det_direct(&self) -> LaurentPoly {
        det_expand(&self.entries)
    }
}

impl Add<&LaurentMatrix> for &LaurentMatrix {
    type Output = LaurentMatrix;
    fn add(self, rhs: &LaurentMatrix) -> LaurentMatrix {
        assert_eq!(self.n, rhs.n);
        LaurentMatrix::from_fn(self.n, |i, j| &self.entries[i][j] + &rhs.entries[i][j])
    }
}

impl Sub<&LaurentMatrix> for &LaurentMatrix {
    type Output = LaurentMatrix;
    fn sub(self, rhs: &LaurentMatrix) -> LaurentMatrix {
        assert_eq!(self.n, rhs.n);
        LaurentMatrix::from_fn(self.n, |i, j| &self.entries[i][j] - &rhs.entries[i][j])
    }
}

impl Mul<&LaurentMatrix> for &LaurentMatrix {
    type Output = LaurentMatrix;
    fn mul(self, rhs: &LaurentMatrix) -> LaurentMatrix {
        assert_eq!(self.n, rhs.n);
        let n = self.n;
        let mut out = LaurentMatrix::zeros(n);
        for i in 0..n {
            for l in 0..n {
                let a = &self.entries[i][l];
                if a.is_zero() {
                    continue;
                }
                for j in 0..n {
                    let b = &rhs.entries[l][j];
                    if !b.is_zero() {
                        out.entries[i][j] = &out.entries[i][j] + &(a * b);
                    }
                }
            }
        }
        out
    }
}
