//! Sparse multivariate polynomials over the rationals.

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_traits::{One, Zero};
use smallvec::SmallVec;

use super::rational::{format_rational, Rational};
use super::var::Var;
use crate::error::{Error, Result};

/// A power product, stored as `(variable, exponent)` pairs sorted by variable
/// with no zero exponents.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Monomial(SmallVec<[(Var, u32); 6]>);

impl Monomial {
    pub fn one() -> Monomial {
        Monomial(SmallVec::new())
    }

    pub fn var(v: Var) -> Monomial {
        Monomial::pow(v, 1)
    }

    pub fn pow(v: Var, e: u32) -> Monomial {
        let mut m = Monomial::one();
        if e > 0 {
            m.0.push((v, e));
        }
        m
    }

    /// Builds a monomial from arbitrary pairs, merging repeats and dropping zeros.
    pub fn from_pairs(pairs: impl IntoIterator<Item = (Var, u32)>) -> Monomial {
        let mut map: BTreeMap<Var, u32> = BTreeMap::new();
        for (v, e) in pairs {
            *map.entry(v).or_default() += e;
        }
        Monomial(map.into_iter().filter(|&(_, e)| e > 0).collect())
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|&(_, e)| e).sum()
    }

    pub fn exponent(&self, v: Var) -> u32 {
        match self.0.binary_search_by(|(w, _)| w.cmp(&v)) {
            Ok(pos) => self.0[pos].1,
            Err(_) => 0,
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = (Var, u32)> + '_ {
        self.0.iter().copied()
    }

    pub fn vars(&self) -> impl Iterator<Item = Var> + '_ {
        self.0.iter().map(|&(v, _)| v)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let (a, b) = (&self.0, &other.0);
        let mut out = SmallVec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                Ordering::Less => {
                    out.push(a[i]);
                    i += 1;
                }
                Ordering::Greater => {
                    out.push(b[j]);
                    j += 1;
                }
                Ordering::Equal => {
                    out.push((a[i].0, a[i].1 + b[j].1));
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend_from_slice(&b[j..]);
        Monomial(out)
    }

    /// Returns the monomial with the exponent of `v` lowered by `by`, or `None`
    /// if that exponent is smaller than `by`.
    pub fn lower(&self, v: Var, by: u32) -> Option<Monomial> {
        let pos = self.0.binary_search_by(|(w, _)| w.cmp(&v)).ok()?;
        let e = self.0[pos].1;
        if e < by {
            return None;
        }
        let mut out = self.0.clone();
        if e == by {
            out.remove(pos);
        } else {
            out[pos].1 = e - by;
        }
        Some(Monomial(out))
    }

    /// Removes `v` entirely, returning its former exponent.
    pub fn without(&self, v: Var) -> (Monomial, u32) {
        match self.0.binary_search_by(|(w, _)| w.cmp(&v)) {
            Ok(pos) => {
                let mut out = self.0.clone();
                let (_, e) = out.remove(pos);
                (Monomial(out), e)
            }
            Err(_) => (self.clone(), 0),
        }
    }
}

/// Graded lexicographic: total degree first, then the exponent of the earliest
/// variable in the global order decides.
impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        let by_degree = self.degree().cmp(&other.degree());
        if by_degree != Ordering::Equal {
            return by_degree;
        }
        let (a, b) = (&self.0, &other.0);
        let mut i = 0;
        while i < a.len() && i < b.len() {
            let (va, ea) = a[i];
            let (vb, eb) = b[i];
            if va != vb {
                // the side holding the earlier variable has a positive exponent where the other has zero
                return if va < vb { Ordering::Greater } else { Ordering::Less };
            }
            if ea != eb {
                return ea.cmp(&eb);
            }
            i += 1;
        }
        a.len().cmp(&b.len())
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_one() {
            return f.write_str("1");
        }
        for (n, (v, e)) in self.iter().enumerate() {
            if n > 0 {
                f.write_str("*")?;
            }
            if e == 1 {
                write!(f, "{v}")?;
            } else {
                write!(f, "{v}^{e}")?;
            }
        }
        Ok(())
    }
}

/// A polynomial in canonical form: no zero coefficients, terms keyed by
/// [`Monomial`] in graded lexicographic order. Structural equality is
/// mathematical equality.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Poly {
    terms: BTreeMap<Monomial, Rational>,
}

impl Poly {
    pub fn zero() -> Poly {
        Poly::default()
    }

    pub fn one() -> Poly {
        Poly::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Poly {
        Poly::term(c, Monomial::one())
    }

    pub fn int(n: i64) -> Poly {
        Poly::constant(Rational::from_integer(BigInt::from(n)))
    }

    pub fn var(v: Var) -> Poly {
        Poly::term(Rational::one(), Monomial::var(v))
    }

    pub fn x(i: usize) -> Poly {
        Poly::var(Var::x(i))
    }

    pub fn term(c: Rational, m: Monomial) -> Poly {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        Poly { terms }
    }

    /// Collects `(coefficient, monomial)` pairs, merging like terms.
    pub fn from_terms(terms: impl IntoIterator<Item = (Rational, Monomial)>) -> Poly {
        let mut p = Poly::zero();
        for (c, m) in terms {
            p.add_term(m, c);
        }
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Terms in ascending canonical order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, m: &Monomial) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    /// The constant term if the polynomial is constant.
    pub fn as_constant(&self) -> Option<Rational> {
        match self.terms.len() {
            0 => Some(Rational::zero()),
            1 => self.terms.get(&Monomial::one()).cloned(),
            _ => None,
        }
    }

    pub fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(Monomial::degree).max()
    }

    pub fn degree_in(&self, v: Var) -> u32 {
        self.terms.keys().map(|m| m.exponent(v)).max().unwrap_or(0)
    }

    pub fn variables(&self) -> Vec<Var> {
        let mut vs: Vec<Var> = self.terms.keys().flat_map(|m| m.vars().collect::<Vec<_>>()).collect();
        vs.sort();
        vs.dedup();
        vs
    }

    pub fn scale(&self, c: &Rational) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly {
            terms: self.terms.iter().map(|(m, a)| (m.clone(), a * c)).collect(),
        }
    }

    pub fn pow(&self, e: u32) -> Poly {
        let mut acc = Poly::one();
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// Formal partial derivative.
    pub fn partial(&self, v: Var) -> Poly {
        let mut out = Poly::zero();
        for (m, c) in &self.terms {
            let e = m.exponent(v);
            if e == 0 {
                continue;
            }
            let lowered = m.lower(v, 1).expect("exponent checked");
            out.add_term(lowered, c * Rational::from_integer(BigInt::from(e)));
        }
        out
    }

    /// The coefficient of `v^power`, as a polynomial free of `v`.
    pub fn coeff_of(&self, v: Var, power: u32) -> Poly {
        let mut out = Poly::zero();
        for (m, c) in &self.terms {
            let (rest, e) = m.without(v);
            if e == power {
                out.add_term(rest, c.clone());
            }
        }
        out
    }

    /// Splits by powers of `v`: entry `e` is the coefficient of `v^e`.
    pub fn split_by(&self, v: Var) -> BTreeMap<u32, Poly> {
        let mut out: BTreeMap<u32, Poly> = BTreeMap::new();
        for (m, c) in &self.terms {
            let (rest, e) = m.without(v);
            out.entry(e).or_default().add_term(rest, c.clone());
        }
        out.retain(|_, p| !p.is_zero());
        out
    }

    /// Exact value at a point. Every variable of `self` must be assigned.
    pub fn eval(&self, assignment: &HashMap<Var, Rational>) -> Result<Rational> {
        let mut total = Rational::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (v, e) in m.iter() {
                let val = assignment.get(&v).ok_or(Error::MissingVariable(v))?;
                t *= num_traits::pow(val.clone(), e as usize);
            }
            total += t;
        }
        Ok(total)
    }

    /// Replaces the variables selected by `sub` with polynomials; variables
    /// for which `sub` returns `None` are kept.
    pub fn substitute(&self, sub: impl Fn(Var) -> Option<Poly>) -> Poly {
        let mut cache: HashMap<Var, Option<Poly>> = HashMap::new();
        let mut out = Poly::zero();
        for (m, c) in &self.terms {
            let mut kept: Vec<(Var, u32)> = Vec::new();
            let mut factor = Poly::constant(c.clone());
            for (v, e) in m.iter() {
                let image = cache.entry(v).or_insert_with(|| sub(v));
                match image {
                    Some(p) => factor = &factor * &p.pow(e),
                    None => kept.push((v, e)),
                }
            }
            let kept = Poly::term(Rational::one(), Monomial::from_pairs(kept));
            out += &factor * &kept;
        }
        out
    }

    /// Renames variables one-to-one (or many-to-one); cheaper than `substitute`.
    pub fn rename(&self, f: impl Fn(Var) -> Var) -> Poly {
        Poly::from_terms(
            self.terms
                .iter()
                .map(|(m, c)| (c.clone(), Monomial::from_pairs(m.iter().map(|(v, e)| (f(v), e))))),
        )
    }

    /// Keeps only the terms selected by `keep`.
    pub fn filter_terms(&self, keep: impl Fn(&Monomial) -> bool) -> Poly {
        Poly {
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| keep(m))
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    /// Sum of the terms of maximal degree counting only variables selected by `counts`.
    pub fn leading_form(&self, counts: impl Fn(Var) -> bool) -> Poly {
        let deg = |m: &Monomial| -> u32 { m.iter().filter(|&(v, _)| counts(v)).map(|(_, e)| e).sum() };
        let Some(top) = self.terms.keys().map(deg).max() else {
            return Poly::zero();
        };
        self.filter_terms(|m| deg(m) == top)
    }

    /// Weighted degrees of every term, with weight function `w`.
    pub fn weighted_degrees(&self, w: impl Fn(Var) -> i64) -> Vec<i64> {
        self.terms
            .keys()
            .map(|m| m.iter().map(|(v, e)| w(v) * e as i64).sum())
            .collect()
    }

    /// Approximate evaluation in floating point.
    pub fn eval_f64(&self, value: impl Fn(Var) -> f64) -> f64 {
        self.terms
            .iter()
            .map(|(m, c)| {
                m.iter()
                    .fold(super::rational::to_f64(c), |acc, (v, e)| acc * value(v).powi(e as i32))
            })
            .sum()
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (n, (m, c)) in self.terms.iter().rev().enumerate() {
            let neg = c < &Rational::zero();
            let mag = if neg { -c.clone() } else { c.clone() };
            match (n, neg) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            if m.is_one() {
                f.write_str(&format_rational(&mag))?;
            } else if mag.is_one() {
                write!(f, "{m}")?;
            } else {
                write!(f, "{}*{m}", format_rational(&mag))?;
            }
        }
        Ok(())
    }
}

impl From<Var> for Poly {
    fn from(v: Var) -> Poly {
        Poly::var(v)
    }
}

impl From<Rational> for Poly {
    fn from(c: Rational) -> Poly {
        Poly::constant(c)
    }
}

impl AddAssign<&Poly> for Poly {
    fn add_assign(&mut self, rhs: &Poly) {
        for (m, c) in &rhs.terms {
            self.add_term(m.clone(), c.clone());
        }
    }
}

impl AddAssign<Poly> for Poly {
    fn add_assign(&mut self, rhs: Poly) {
        if self.terms.len() < rhs.terms.len() {
            let lhs = std::mem::replace(self, rhs);
            *self += &lhs;
            return;
        }
        for (m, c) in rhs.terms {
            self.add_term(m, c);
        }
    }
}

impl SubAssign<&Poly> for Poly {
    fn sub_assign(&mut self, rhs: &Poly) {
        for (m, c) in &rhs.terms {
            self.add_term(m.clone(), -c.clone());
        }
    }
}

impl SubAssign<Poly> for Poly {
    fn sub_assign(&mut self, rhs: Poly) {
        for (m, c) in rhs.terms {
            self.add_term(m, -c);
        }
    }
}

impl Add<&Poly> for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Add<Poly> for Poly {
    type Output = Poly;
    fn add(mut self, rhs: Poly) -> Poly {
        self += rhs;
        self
    }
}

impl Sub<&Poly> for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl Sub<Poly> for Poly {
    type Output = Poly;
    fn sub(mut self, rhs: Poly) -> Poly {
        self -= rhs;
        self
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c.clone())).collect(),
        }
    }
}

impl Neg for Poly {
    type Output = Poly;
    fn neg(mut self) -> Poly {
        for c in self.terms.values_mut() {
            *c = -std::mem::take(c);
        }
        self
    }
}

impl Mul<&Poly> for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero();
        }
        let mut acc: HashMap<Monomial, Rational> = HashMap::with_capacity(self.terms.len() * rhs.terms.len());
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                *acc.entry(ma.mul(mb)).or_insert_with(Rational::zero) += ca * cb;
            }
        }
        Poly {
            terms: acc.into_iter().filter(|(_, c)| !c.is_zero()).collect(),
        }
    }
}

impl Mul<Poly> for Poly {
    type Output = Poly;
    fn mul(self, rhs: Poly) -> Poly {
        &self * &rhs
    }
}

impl Mul<&Rational> for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Rational) -> Poly {
        self.scale(rhs)
    }
}

impl std::iter::Sum for Poly {
    fn sum<I: Iterator<Item = Poly>>(iter: I) -> Poly {
        iter.fold(Poly::zero(), |acc, p| acc + p)
    }
}

impl<'a> std::iter::Sum<&'a Poly> for Poly {
    fn sum<I: Iterator<Item = &'a Poly>>(iter: I) -> Poly {
        iter.fold(Poly::zero(), |mut acc, p| {
            acc += p;
            acc
        })
    }
}

impl std::iter::Product for Poly {
    fn product<I: Iterator<Item = Poly>>(iter: I) -> Poly {
        iter.fold(Poly::one(), |acc, p| &acc * &p)
    }
}
