//! Polynomials flattened to a term list with float coefficients.

use crate::error::{Error, Result};
use crate::exactalg::{to_f64, Poly, Var};

#[derive(Debug, Clone, PartialEq)]
struct Term {
    coeff: f64,
    /// 0-based coordinate index and exponent.
    factors: Vec<(usize, u32)>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Tape {
    dim: usize,
    terms: Vec<Term>,
}

impl Tape {
    /// Compiles a polynomial in `x_1..x_dim`; any other variable is an error.
    pub fn compile(p: &Poly, dim: usize) -> Result<Tape> {
        let mut terms = Vec::with_capacity(p.num_terms());
        for (m, c) in p.terms() {
            let mut factors = Vec::new();
            for (v, e) in m.iter() {
                match v {
                    Var::X(i) if (1..=dim).contains(&(i as usize)) => factors.push((i as usize - 1, e)),
                    other => {
                        return Err(Error::InvalidInput(format!("cannot compile variable {other} for a {dim}-dimensional state")))
                    }
                }
            }
            terms.push(Term { coeff: to_f64(c), factors });
        }
        Ok(Tape { dim, terms })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn eval(&self, x: &[f64]) -> f64 {
        self.terms
            .iter()
            .map(|t| t.factors.iter().fold(t.coeff, |acc, &(i, e)| acc * x[i].powi(e as i32)))
            .sum()
    }
}
