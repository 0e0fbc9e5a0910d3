//! The circulant skew matrix `A^{(k)}`, the quadratic Lotka–Volterra bracket,
//! constant deformations `{x_i, x_j}_b = b_{i,j}`, their pencils, and Jacobi
//! diagnostics.

use std::collections::{BTreeMap, HashMap};

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::exactalg::{wrap, Poly, Rational, Var};
use crate::linalg;

/// `A^{(k)}_{i,j} = +1` iff `(j − i) mod (2k+1) ∈ {1..k}`, `−1` iff the
/// reverse holds, `0` on the diagonal.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SkewMatrixA {
    k: usize,
    entries: Vec<Vec<i8>>,
}

pub fn a_entry(k: usize, i: usize, j: usize) -> i8 {
    let n = 2 * k + 1;
    let d = (j + n - i) % n;
    match d {
        0 => 0,
        d if d <= k => 1,
        _ => -1,
    }
}

pub fn build_a(k: usize) -> SkewMatrixA {
    assert!(k >= 1, "k must be at least 1");
    let n = 2 * k + 1;
    let entries = (1..=n)
        .map(|i| (1..=n).map(|j| a_entry(k, i, j)).collect())
        .collect();
    SkewMatrixA { k, entries }
}

impl SkewMatrixA {
    pub fn k(&self) -> usize {
        self.k
    }

    pub fn dim(&self) -> usize {
        2 * self.k + 1
    }

    /// 1-based entry.
    pub fn get(&self, i: usize, j: usize) -> i8 {
        self.entries[i - 1][j - 1]
    }

    pub fn rows(&self) -> &[Vec<i8>] {
        &self.entries
    }

    pub fn rank(&self) -> usize {
        let q: Vec<Vec<Rational>> = self
            .entries
            .iter()
            .map(|r| r.iter().map(|&v| Rational::from_integer(v.into())).collect())
            .collect();
        linalg::rank(&q)
    }
}

/// Whether `(i, j)` (any order) is one of the `2k+1` pairs at distance `k`
/// or `k+1`.
pub fn is_admissible_pair(k: usize, i: usize, j: usize) -> bool {
    let d = i.abs_diff(j);
    d == k || d == k + 1
}

/// The admissible pairs `(i, j)`, `i < j`, in lexicographic order.
pub fn admissible_pairs(k: usize) -> Vec<(usize, usize)> {
    let n = 2 * k + 1;
    let mut out = Vec::with_capacity(n);
    for i in 1..=n {
        for j in i + 1..=n {
            if is_admissible_pair(k, i, j) {
                out.push((i, j));
            }
        }
    }
    out
}

/// A constant skew structure on `I × I`, entries polynomial (symbolic or
/// numeric). Built through the admissible constructors it is supported on
/// the pairs at distance `k`, `k+1`; `from_entries` accepts any skew support
/// for classification purposes.
#[derive(Debug, Clone, PartialEq)]
pub struct ConstantStructure {
    k: usize,
    full: Vec<Vec<Poly>>,
}

impl ConstantStructure {
    pub fn zero(k: usize) -> ConstantStructure {
        let n = 2 * k + 1;
        ConstantStructure { k, full: vec![vec![Poly::zero(); n]; n] }
    }

    /// Every admissible pair carries its own variable `b_{i,j}`.
    pub fn symbolic(k: usize) -> ConstantStructure {
        let mut s = ConstantStructure::zero(k);
        for (i, j) in admissible_pairs(k) {
            s.set(i, j, Poly::var(Var::b(i, j)));
        }
        s
    }

    /// The structure `𝟏` with `b_{j+k,j} = 1` for every `j`.
    pub fn unit(k: usize) -> ConstantStructure {
        ConstantStructure::from_chain(k, &vec![Poly::int(-1); 2 * k + 1])
    }

    /// Sets the chain parameters `β_i = b_{i,i+k}` (second index mod `2k+1`).
    pub fn from_chain(k: usize, beta: &[Poly]) -> ConstantStructure {
        let n = 2 * k + 1;
        assert_eq!(beta.len(), n, "need one chain parameter per index");
        let mut s = ConstantStructure::zero(k);
        for (idx, v) in beta.iter().enumerate() {
            let i = idx + 1;
            s.set(i, wrap((i + k) as i64, n), v.clone());
        }
        s
    }

    /// From admissible pair values keyed by `(i, j)`, `i < j`; missing pairs
    /// are zero.
    pub fn from_pairs(k: usize, params: &BTreeMap<(usize, usize), Poly>) -> Result<ConstantStructure> {
        let mut s = ConstantStructure::zero(k);
        let n = 2 * k + 1;
        for (&(i, j), v) in params {
            if i == 0 || j > n || i >= j || !is_admissible_pair(k, i, j) {
                return Err(Error::InvalidInput(format!("pair ({i}, {j}) is not admissible for k = {k}")));
            }
            s.set(i, j, v.clone());
        }
        Ok(s)
    }

    /// Any skew matrix given by its strictly upper entries; no support check.
    pub fn from_entries(k: usize, upper: &[((usize, usize), Poly)]) -> Result<ConstantStructure> {
        let n = 2 * k + 1;
        let mut s = ConstantStructure::zero(k);
        for ((i, j), v) in upper {
            if *i == 0 || *j > n || i >= j {
                return Err(Error::DimensionMismatch(format!("entry ({i}, {j}) outside the upper triangle of {n}x{n}")));
            }
            s.set(*i, *j, v.clone());
        }
        Ok(s)
    }

    fn set(&mut self, i: usize, j: usize, v: Poly) {
        self.full[j - 1][i - 1] = -&v;
        self.full[i - 1][j - 1] = v;
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn dim(&self) -> usize {
        2 * self.k + 1
    }

    /// Skew lookup `b_{i,j}` with indices reduced into `I`.
    pub fn entry(&self, i: i64, j: i64) -> &Poly {
        let n = self.dim();
        &self.full[wrap(i, n) - 1][wrap(j, n) - 1]
    }

    /// Chain parameter `β_i = b_{i,i+k}`.
    pub fn param(&self, i: usize) -> Poly {
        self.entry(i as i64, (i + self.k) as i64).clone()
    }

    pub fn chain(&self) -> Vec<Poly> {
        (1..=self.dim()).map(|i| self.param(i)).collect()
    }

    /// Pair value `b_{i,j}` for `i < j` admissible.
    pub fn pair(&self, i: usize, j: usize) -> &Poly {
        &self.full[i - 1][j - 1]
    }

    pub fn full(&self) -> &[Vec<Poly>] {
        &self.full
    }

    pub fn is_admissible(&self) -> bool {
        let n = self.dim();
        (1..=n).all(|i| {
            (1..=n).all(|j| is_admissible_pair(self.k, i, j) || self.full[i - 1][j - 1].is_zero())
        })
    }

    /// `b − t·𝟏`: every chain parameter shifted by `+t`.
    pub fn minus_scaled_unit(&self, t: &Poly) -> ConstantStructure {
        let beta: Vec<Poly> = self.chain().iter().map(|p| p + t).collect();
        ConstantStructure::from_chain(self.k, &beta)
    }

    /// Entrywise `self + other`.
    pub fn plus(&self, other: &ConstantStructure) -> ConstantStructure {
        assert_eq!(self.k, other.k);
        let full = self
            .full
            .iter()
            .zip(&other.full)
            .map(|(a, b)| a.iter().zip(b).map(|(p, q)| p + q).collect())
            .collect();
        ConstantStructure { k: self.k, full }
    }

    /// Substitutes values for the parameter variables in every entry.
    pub fn substitute(&self, sub: impl Fn(Var) -> Option<Poly> + Copy) -> ConstantStructure {
        let full = self
            .full
            .iter()
            .map(|row| row.iter().map(|p| p.substitute(sub)).collect())
            .collect();
        ConstantStructure { k: self.k, full }
    }

    /// Sign-adjusted pair coefficients: `b′_{i,j} = b_{i,j}` at distance `k`,
    /// `−b_{i,j}` at distance `k+1`.
    pub fn b_prime(&self) -> BPrimeTable {
        let k = self.k;
        let entries = admissible_pairs(k)
            .into_iter()
            .map(|(i, j)| {
                let v = self.pair(i, j);
                let v = if j - i == k { v.clone() } else { -v };
                ((i, j), v)
            })
            .collect();
        BPrimeTable { k, entries }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BPrimeTable {
    pub k: usize,
    pub entries: BTreeMap<(usize, usize), Poly>,
}

impl BPrimeTable {
    pub fn get(&self, i: usize, j: usize) -> &Poly {
        &self.entries[&(i.min(j), i.max(j))]
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum BracketKind {
    Quadratic { k: usize },
    Constant(ConstantStructure),
    /// Quadratic plus constant.
    Deformed(ConstantStructure),
    /// `{,}_b^{(k)} − ν{,}_𝟏`, with `ν` the variable `nu`.
    Pencil(ConstantStructure),
}

impl BracketKind {
    pub fn k(&self) -> usize {
        match self {
            BracketKind::Quadratic { k } => *k,
            BracketKind::Constant(b) | BracketKind::Deformed(b) | BracketKind::Pencil(b) => b.k(),
        }
    }

    /// The `(2k+1)×(2k+1)` matrix `{x_i, x_j}` (0-based storage).
    pub fn structure_matrix(&self) -> Vec<Vec<Poly>> {
        let k = self.k();
        let n = 2 * k + 1;
        let quadratic = |i: usize, j: usize| match a_entry(k, i, j) {
            0 => Poly::zero(),
            a => (&Poly::x(i) * &Poly::x(j)).scale(&Rational::from_integer(a.into())),
        };
        (1..=n)
            .map(|i| {
                (1..=n)
                    .map(|j| match self {
                        BracketKind::Quadratic { .. } => quadratic(i, j),
                        BracketKind::Constant(b) => b.full()[i - 1][j - 1].clone(),
                        BracketKind::Deformed(b) => &quadratic(i, j) + &b.full()[i - 1][j - 1],
                        BracketKind::Pencil(b) => {
                            let shifted = b.minus_scaled_unit(&Poly::var(Var::Nu));
                            &quadratic(i, j) + &shifted.full()[i - 1][j - 1]
                        }
                    })
                    .collect()
            })
            .collect()
    }
}

fn check_x_range(k: usize, p: &Poly) -> Result<()> {
    let n = 2 * k + 1;
    for v in p.variables() {
        if let Var::X(i) = v {
            if i as usize > n {
                return Err(Error::DimensionMismatch(format!("{v} is outside x1..x{n}")));
            }
        }
    }
    Ok(())
}

/// A bracket with its structure matrix computed once.
#[derive(Debug, Clone)]
pub struct Bracket {
    k: usize,
    p: Vec<Vec<Poly>>,
}

impl Bracket {
    pub fn new(kind: &BracketKind) -> Bracket {
        Bracket { k: kind.k(), p: kind.structure_matrix() }
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn matrix(&self) -> &[Vec<Poly>] {
        &self.p
    }

    fn gradient(&self, f: &Poly) -> Vec<Poly> {
        (1..=2 * self.k + 1).map(|i| f.partial(Var::x(i))).collect()
    }

    /// `Σ_{i,j} {x_i,x_j} ∂_i f ∂_j g`.
    pub fn apply(&self, f: &Poly, g: &Poly) -> Result<Poly> {
        check_x_range(self.k, f)?;
        check_x_range(self.k, g)?;
        let df = self.gradient(f);
        let dg = self.gradient(g);
        let n = df.len();
        let mut out = Poly::zero();
        for i in 0..n {
            if df[i].is_zero() {
                continue;
            }
            for j in 0..n {
                if i == j || dg[j].is_zero() || self.p[i][j].is_zero() {
                    continue;
                }
                out += &(&(&self.p[i][j] * &df[i]) * &dg[j]);
            }
        }
        Ok(out)
    }

    /// `{x_i, h}` for every `i`.
    pub fn hamiltonian_vector_field(&self, h: &Poly) -> Result<Vec<Poly>> {
        check_x_range(self.k, h)?;
        let dh = self.gradient(h);
        Ok(self
            .p
            .iter()
            .map(|row| {
                row.iter()
                    .zip(&dh)
                    .filter(|(p, d)| !p.is_zero() && !d.is_zero())
                    .map(|(p, d)| p * d)
                    .sum()
            })
            .collect())
    }

    /// `{{x_i,x_j},x_m} + {{x_j,x_m},x_i} + {{x_m,x_i},x_j}`.
    pub fn jacobiator(&self, i: usize, j: usize, m: usize) -> Poly {
        let term = |a: usize, b: usize, c: usize| -> Poly {
            let pab = &self.p[a - 1][b - 1];
            (0..self.p.len())
                .map(|l| {
                    let d = pab.partial(Var::x(l + 1));
                    if d.is_zero() {
                        Poly::zero()
                    } else {
                        &d * &self.p[l][c - 1]
                    }
                })
                .sum()
        };
        &(&term(i, j, m) + &term(j, m, i)) + &term(m, i, j)
    }

    /// Jacobiators of all triples `i < j < m`, keeping the nonzero ones.
    pub fn jacobi_residuals(&self) -> Vec<((usize, usize, usize), Poly)> {
        let n = 2 * self.k + 1;
        let triples: Vec<_> = (1..=n)
            .flat_map(|i| (i + 1..=n).flat_map(move |j| (j + 1..=n).map(move |m| (i, j, m))))
            .collect();
        triples
            .into_par_iter()
            .filter_map(|t| {
                let r = self.jacobiator(t.0, t.1, t.2);
                (!r.is_zero()).then_some((t, r))
            })
            .collect()
    }

    /// Rank of the structure matrix at a point.
    pub fn rank_at_point(&self, point: &HashMap<Var, Rational>) -> Result<usize> {
        let m = self
            .p
            .iter()
            .map(|row| row.iter().map(|p| p.eval(point)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        Ok(linalg::rank(&m))
    }
}

pub fn bracket(kind: &BracketKind, f: &Poly, g: &Poly) -> Result<Poly> {
    Bracket::new(kind).apply(f, g)
}

pub fn hamiltonian_vector_field(kind: &BracketKind, h: &Poly) -> Result<Vec<Poly>> {
    Bracket::new(kind).hamiltonian_vector_field(h)
}

pub fn rank_at_point(kind: &BracketKind, point: &HashMap<Var, Rational>) -> Result<usize> {
    Bracket::new(kind).rank_at_point(point)
}

/// Triples `(i, j, m)` with `i ∉ {j, m}`, `j < m`, at which
/// `b_{j,m}(A_{i,j} + A_{i,m}) ≠ 0`; empty exactly when adding `b` to the
/// quadratic bracket preserves the Jacobi identity.
pub fn jacobi_violations(b: &ConstantStructure) -> Vec<(usize, usize, usize)> {
    let k = b.k();
    let n = b.dim();
    let mut out = Vec::new();
    for j in 1..=n {
        for m in j + 1..=n {
            if b.pair(j, m).is_zero() {
                continue;
            }
            for i in (1..=n).filter(|&i| i != j && i != m) {
                if a_entry(k, i, j) + a_entry(k, i, m) != 0 {
                    out.push((i, j, m));
                }
            }
        }
    }
    out.sort_unstable();
    out
}

/// Point assignment from x-values and chain-parameter-free numeric structure.
pub fn x_assignment(x: &[Rational]) -> HashMap<Var, Rational> {
    x.iter().enumerate().map(|(i, v)| (Var::x(i + 1), v.clone())).collect()
}

/// Substitution map sending each pair variable `b_{i,j}` to a value.
pub fn b_assignment(k: usize, values: &[Rational]) -> HashMap<Var, Rational> {
    admissible_pairs(k)
        .into_iter()
        .zip(values)
        .map(|((i, j), v)| (Var::b(i, j), v.clone()))
        .collect()
}

/// Replaces pair variables by the numbers in `values` (admissible-pair order).
pub fn numeric_structure(k: usize, values: &[Rational]) -> ConstantStructure {
    let assign = b_assignment(k, values);
    ConstantStructure::symbolic(k).substitute(|v| assign.get(&v).map(|r| Poly::constant(r.clone())))
}

impl ConstantStructure {
    pub fn is_zero(&self) -> bool {
        self.full.iter().flatten().all(Poly::is_zero)
    }
}
