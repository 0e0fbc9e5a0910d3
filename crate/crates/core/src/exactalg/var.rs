use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// A polynomial variable.
///
/// The derived order is the global variable order used for canonical term
/// ordering: `x1 < … < x_n < b-pairs (lexicographic) < lam < mu < nu`, followed
/// by the Veselov–Shabat coordinates `g` and `f`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Var {
    /// Phase coordinate `x_i`, 1-based.
    X(u16),
    /// Constant deformation parameter `b_{i,j}` with `i < j`.
    B(u16, u16),
    /// Spectral parameter λ.
    Lam,
    /// Eigenvalue variable μ of the characteristic polynomial.
    Mu,
    /// Pencil parameter ν.
    Nu,
    /// Relabeled coordinate `g_i = x_{ρ_i}`.
    G(u16),
    /// Coordinate `f_i` with `g_i = f_i + f_{i+1}`.
    F(u16),
}

impl Var {
    pub fn x(i: usize) -> Var {
        Var::X(i as u16)
    }

    /// The parameter for the unordered pair `{i, j}`; panics if `i == j`.
    pub fn b(i: usize, j: usize) -> Var {
        assert_ne!(i, j, "b-variable needs two distinct indices");
        let (lo, hi) = if i < j { (i, j) } else { (j, i) };
        Var::B(lo as u16, hi as u16)
    }

    pub fn g(i: usize) -> Var {
        Var::G(i as u16)
    }

    pub fn f(i: usize) -> Var {
        Var::F(i as u16)
    }

    pub fn is_x(&self) -> bool {
        matches!(self, Var::X(_))
    }

    pub fn is_b(&self) -> bool {
        matches!(self, Var::B(..))
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Var::X(i) => write!(f, "x{i}"),
            Var::B(i, j) => write!(f, "b_{i}_{j}"),
            Var::Lam => f.write_str("lam"),
            Var::Mu => f.write_str("mu"),
            Var::Nu => f.write_str("nu"),
            Var::G(i) => write!(f, "g{i}"),
            Var::F(i) => write!(f, "f{i}"),
        }
    }
}

fn index(s: &str, whole: &str) -> Result<u16> {
    match s.parse::<u16>() {
        Ok(i) if i >= 1 => Ok(i),
        _ => Err(Error::Parse(format!("bad variable name {whole:?}"))),
    }
}

impl FromStr for Var {
    type Err = Error;

    fn from_str(s: &str) -> Result<Var> {
        match s {
            "lam" => return Ok(Var::Lam),
            "mu" => return Ok(Var::Mu),
            "nu" => return Ok(Var::Nu),
            _ => {}
        }
        if let Some(rest) = s.strip_prefix("b_") {
            let (i, j) = rest
                .split_once('_')
                .ok_or_else(|| Error::Parse(format!("bad variable name {s:?}")))?;
            let (i, j) = (index(i, s)?, index(j, s)?);
            if i >= j {
                return Err(Error::Parse(format!("b-variable {s:?} must have i < j")));
            }
            return Ok(Var::B(i, j));
        }
        if let Some(rest) = s.strip_prefix('x') {
            return Ok(Var::X(index(rest, s)?));
        }
        if let Some(rest) = s.strip_prefix('g') {
            return Ok(Var::G(index(rest, s)?));
        }
        if let Some(rest) = s.strip_prefix('f') {
            return Ok(Var::F(index(rest, s)?));
        }
        Err(Error::Parse(format!("bad variable name {s:?}")))
    }
}

impl Serialize for Var {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Var {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}
