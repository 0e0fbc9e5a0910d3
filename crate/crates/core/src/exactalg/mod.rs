//! Exact polynomial algebra over the rationals.

mod laurent;
mod poly;
mod rational;
mod serial;
mod var;

pub use laurent::{LaurentMatrix, LaurentPoly};
pub use poly::{Monomial, Poly};
pub use rational::{format_rational, parse_rational, rat, ratio, to_f64, Rational};
pub use serial::{PolyJson, TermJson};
pub use var::Var;

use num_traits::{One, Zero};

/// The ring operations needed by the division-free determinant.
pub trait RingElem: Clone {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn neg(&self) -> Self;
}

impl RingElem for Poly {
    fn zero() -> Self {
        Poly::zero()
    }
    fn one() -> Self {
        Poly::one()
    }
    fn is_zero(&self) -> bool {
        Poly::is_zero(self)
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

impl RingElem for Rational {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
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

/// Reduces any integer to its representative in `{1, …, n}`.
pub fn wrap(i: i64, n: usize) -> usize {
    (i - 1).rem_euclid(n as i64) as usize + 1
}

/// The cyclic relabeling `x_i → x_{i+1}`, `b_{i,j} → b_{i+1,j+1}` (indices mod
/// `2k+1`). A b-pair that wraps past `2k+1` is rewritten with its indices in
/// increasing order, picking up the sign of the skew swap.
pub fn cyclic_shift(p: &Poly, k: usize) -> Poly {
    let n = 2 * k + 1;
    p.substitute(|v| match v {
        Var::X(i) => Some(Poly::x(wrap(i as i64 + 1, n))),
        Var::B(i, j) => {
            let (a, b) = (wrap(i as i64 + 1, n), wrap(j as i64 + 1, n));
            let v = Poly::var(Var::b(a, b));
            Some(if a < b { v } else { -v })
        }
        _ => None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shift_examples() {
        assert_eq!(cyclic_shift(&Poly::x(1), 1), Poly::x(2));
        let h: Poly = (1..=3).map(Poly::x).sum();
        assert_eq!(cyclic_shift(&h, 1), h);
        let c: Poly = (1..=3).map(Poly::x).product();
        assert_eq!(cyclic_shift(&c, 1), c);
        // b_{1,2} -> b_{2,3} -> b_{3,1} = -b_{1,3}
        let b12 = Poly::var(Var::b(1, 2));
        assert_eq!(cyclic_shift(&b12, 1), Poly::var(Var::b(2, 3)));
        assert_eq!(cyclic_shift(&cyclic_shift(&b12, 1), 1), -Poly::var(Var::b(1, 3)));
    }

    #[test]
    fn wrap_reduces() {
        assert_eq!(wrap(0, 5), 5);
        assert_eq!(wrap(6, 5), 1);
        assert_eq!(wrap(-4, 5), 1);
        assert_eq!(wrap(3, 5), 3);
    }
}
