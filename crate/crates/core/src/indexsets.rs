//! Index-tuple combinatorics over `I = {1, …, 2k+1}`: the sets `S_ℓ` of
//! tuples whose principal submatrix of `A^{(k)}` equals `A^{(ℓ)}`, their
//! complements `S′_ℓ`, the involution σ, the cyclic shift τ, and the
//! insertion maps φ₁, φ₂ from `S_{ℓ-1,-}` into `S_{ℓ,+}`.
//!
//! Tuples are 1-based throughout.

use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};

/// A strictly increasing tuple over `I = {1, …, 2k+1}`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct IndexTuple {
    k: usize,
    entries: Vec<usize>,
}

impl IndexTuple {
    pub fn new(k: usize, entries: Vec<usize>) -> Result<IndexTuple> {
        let n = 2 * k + 1;
        if let Some(&bad) = entries.iter().find(|&&m| m == 0 || m > n) {
            return Err(Error::DomainViolation(format!("entry {bad} outside 1..={n}")));
        }
        if entries.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::DomainViolation(format!("entries {entries:?} are not strictly increasing")));
        }
        Ok(IndexTuple { k, entries })
    }

    /// Builds from any set of distinct indices, sorting them.
    pub fn from_unsorted(k: usize, mut entries: Vec<usize>) -> Result<IndexTuple> {
        entries.sort_unstable();
        IndexTuple::new(k, entries)
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn entries(&self) -> &[usize] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn contains(&self, i: usize) -> bool {
        self.entries.binary_search(&i).is_ok()
    }

    /// 1-based accessor `m_i`.
    pub fn m(&self, i: usize) -> usize {
        self.entries[i - 1]
    }
}

impl fmt::Display for IndexTuple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.entries.iter().map(usize::to_string).collect();
        f.write_str(&parts.join(" "))
    }
}

/// Which inequality of the membership test failed first.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Violation {
    /// `m_{ℓ+i} < m_i + k + 1` fails.
    Lower { i: usize },
    /// `m_i + k + 1 ≤ m_{ℓ+i+1}` fails.
    Upper { i: usize },
    /// `m_{2ℓ+1} < m_{ℓ+1} + k + 1` fails.
    Closing,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SMembership {
    pub tuple: IndexTuple,
    pub ell: usize,
    pub in_s: bool,
    pub witness: Option<Violation>,
}

fn check_arity(expected: usize, got: usize) -> Result<()> {
    if expected != got {
        return Err(Error::WrongArity { expected, got });
    }
    Ok(())
}

/// Membership of `m` (with `2ℓ+1` entries) in `S_ℓ` via the inequality
/// characterization.
pub fn is_in_s(k: usize, ell: usize, m: &IndexTuple) -> Result<SMembership> {
    check_arity(2 * ell + 1, m.len())?;
    let witness = first_violation(k, ell, m.entries());
    Ok(SMembership {
        tuple: m.clone(),
        ell,
        in_s: witness.is_none(),
        witness,
    })
}

fn first_violation(k: usize, ell: usize, m: &[usize]) -> Option<Violation> {
    let at = |i: usize| m[i - 1];
    for i in 1..=ell {
        if at(ell + i) >= at(i) + k + 1 {
            return Some(Violation::Lower { i });
        }
        if at(i) + k + 1 > at(ell + i + 1) {
            return Some(Violation::Upper { i });
        }
    }
    if at(2 * ell + 1) >= at(ell + 1) + k + 1 {
        return Some(Violation::Closing);
    }
    None
}

/// All members of `S_ℓ` in lexicographic order, by backtracking with the
/// inequalities checked as soon as their indices are placed.
pub fn enumerate_s(k: usize, ell: usize) -> Vec<IndexTuple> {
    assert!(ell <= k, "ell must lie in 0..=k");
    let n = 2 * k + 1;
    let len = 2 * ell + 1;
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(len);
    extend(k, ell, n, len, &mut cur, &mut out);
    out
}

/// Whether the partially built tuple (positions `1..=p` filled, `p = cur.len()`)
/// still satisfies every inequality whose indices are all placed.
fn prefix_ok(k: usize, ell: usize, cur: &[usize]) -> bool {
    let p = cur.len();
    let at = |i: usize| cur[i - 1];
    // position p closes: Lower for i = p - ell (needs m_{ell+i}), Upper for i = p - ell - 1
    if p > ell && p - ell <= ell {
        let i = p - ell;
        if at(ell + i) >= at(i) + k + 1 {
            return false;
        }
    }
    if p >= ell + 2 {
        let i = p - ell - 1;
        if i >= 1 && i <= ell && at(i) + k + 1 > at(ell + i + 1) {
            return false;
        }
    }
    if p == 2 * ell + 1 && at(2 * ell + 1) >= at(ell + 1) + k + 1 {
        return false;
    }
    true
}

fn extend(k: usize, ell: usize, n: usize, len: usize, cur: &mut Vec<usize>, out: &mut Vec<IndexTuple>) {
    if cur.len() == len {
        out.push(IndexTuple { k, entries: cur.clone() });
        return;
    }
    let start = cur.last().map_or(1, |&m| m + 1);
    let remaining = len - cur.len();
    for m in start..=n + 1 - remaining {
        cur.push(m);
        if prefix_ok(k, ell, cur) {
            extend(k, ell, n, len, cur, out);
        }
        cur.pop();
    }
}

/// `σ(m)_i = 2k+2 − m_{s+1−i}`.
pub fn sigma(k: usize, m: &IndexTuple) -> IndexTuple {
    let entries = m.entries.iter().rev().map(|&v| 2 * k + 2 - v).collect();
    IndexTuple { k, entries }
}

/// Adds one to every entry; an entry equal to `2k+1` wraps to 1 and moves to
/// the front.
pub fn tau(k: usize, m: &IndexTuple) -> IndexTuple {
    let n = 2 * k + 1;
    let entries = match m.entries.last() {
        Some(&last) if last == n => {
            let mut e = vec![1];
            e.extend(m.entries[..m.len() - 1].iter().map(|v| v + 1));
            e
        }
        _ => m.entries.iter().map(|v| v + 1).collect(),
    };
    IndexTuple { k, entries }
}

/// `I ⊖ m`.
pub fn complement(k: usize, m: &IndexTuple) -> IndexTuple {
    let entries = (1..=2 * k + 1).filter(|i| !m.contains(*i)).collect();
    IndexTuple { k, entries }
}

/// Membership in `S′_ℓ`: writing `m′ = (r_1..r_{k-ℓ}, s_1..s_{k-ℓ})`,
/// each `s_j − r_j` must lie in `{k, k+1}`.
pub fn is_in_s_prime(k: usize, ell: usize, mp: &IndexTuple) -> Result<bool> {
    if ell > k {
        return Err(Error::DomainViolation(format!("ell = {ell} exceeds k = {k}")));
    }
    let half = k - ell;
    check_arity(2 * half, mp.len())?;
    Ok((0..half).all(|j| {
        let d = mp.entries[half + j] - mp.entries[j];
        d == k || d == k + 1
    }))
}

/// The pairing `(r_j, s_j)` of a complement tuple.
pub fn complement_pairs(mp: &IndexTuple) -> Vec<(usize, usize)> {
    let half = mp.len() / 2;
    (0..half).map(|j| (mp.entries[j], mp.entries[half + j])).collect()
}

/// Members of `S′_ℓ`, lexicographic.
pub fn enumerate_s_prime(k: usize, ell: usize) -> Vec<IndexTuple> {
    let mut out: Vec<IndexTuple> = enumerate_s(k, ell).iter().map(|m| complement(k, m)).collect();
    out.sort();
    out
}

fn insert_pair(k: usize, ell: usize, m: &IndexTuple, pair: (usize, usize), bound_ok: bool, which: &str) -> Result<IndexTuple> {
    if ell == 0 {
        return Err(Error::DomainViolation(format!("{which} needs ell >= 1")));
    }
    check_arity(2 * ell - 1, m.len())?;
    if m.contains(1) {
        return Err(Error::DomainViolation(format!("{which}: input {m:?} contains 1")));
    }
    if !is_in_s(k, ell - 1, m)?.in_s {
        return Err(Error::DomainViolation(format!("{which}: input is not in S_{}", ell - 1)));
    }
    if !bound_ok {
        return Err(Error::DomainViolation(format!("{which}: m_ell = {} outside the domain", m.m(ell))));
    }
    if m.contains(pair.1) {
        return Err(Error::DomainViolation(format!("{which}: inserted index {} already present", pair.1)));
    }
    let mut entries = m.entries.clone();
    entries.push(pair.0);
    entries.push(pair.1);
    IndexTuple::from_unsorted(k, entries)
}

/// `φ₁(m) = m ⊕ (1, k+2)` on `{m ∈ S_{ℓ-1,-} : m_ℓ ≤ k+1}`.
pub fn phi1(k: usize, ell: usize, m: &IndexTuple) -> Result<IndexTuple> {
    let ok = ell >= 1 && m.len() >= ell && m.m(ell) <= k + 1;
    insert_pair(k, ell, m, (1, k + 2), ok, "phi1")
}

/// `φ₂(m) = m ⊕ (1, k+1)` on `{m ∈ S_{ℓ-1,-} : m_ℓ ≥ k+2}`.
pub fn phi2(k: usize, ell: usize, m: &IndexTuple) -> Result<IndexTuple> {
    let ok = ell >= 1 && m.len() >= ell && m.m(ell) >= k + 2;
    insert_pair(k, ell, m, (1, k + 1), ok, "phi2")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t(k: usize, e: &[usize]) -> IndexTuple {
        IndexTuple::new(k, e.to_vec()).unwrap()
    }

    #[test]
    fn membership_examples() {
        assert!(is_in_s(2, 1, &t(2, &[1, 2, 4])).unwrap().in_s);
        let no = is_in_s(2, 1, &t(2, &[1, 2, 5])).unwrap();
        assert!(!no.in_s);
        assert_eq!(no.witness, Some(Violation::Closing));
        assert!(is_in_s(2, 0, &t(2, &[3])).unwrap().in_s);
        assert_eq!(
            is_in_s(2, 1, &t(2, &[1, 2])),
            Err(Error::WrongArity { expected: 3, got: 2 })
        );
    }

    #[test]
    fn enumeration_examples() {
        assert_eq!(enumerate_s(1, 1), vec![t(1, &[1, 2, 3])]);
        assert_eq!(enumerate_s(1, 0), vec![t(1, &[1]), t(1, &[2]), t(1, &[3])]);
        let expected: Vec<IndexTuple> = [[1, 2, 4], [1, 3, 4], [1, 3, 5], [2, 3, 5], [2, 4, 5]]
            .iter()
            .map(|e| t(2, e))
            .collect();
        assert_eq!(enumerate_s(2, 1), expected);
    }

    #[test]
    fn sigma_tau_complement() {
        assert_eq!(sigma(2, &t(2, &[1, 2, 4])), t(2, &[2, 4, 5]));
        assert_eq!(sigma(1, &t(1, &[1, 2, 3])), t(1, &[1, 2, 3]));
        assert_eq!(tau(2, &t(2, &[1, 2, 4])), t(2, &[2, 3, 5]));
        assert_eq!(tau(2, &t(2, &[2, 3, 5])), t(2, &[1, 3, 4]));
        assert_eq!(complement(2, &t(2, &[1, 2, 4])), t(2, &[3, 5]));
        assert!(complement(1, &t(1, &[1, 2, 3])).is_empty());
    }

    #[test]
    fn s_prime_examples() {
        assert!(is_in_s_prime(2, 1, &t(2, &[3, 5])).unwrap());
        assert!(!is_in_s_prime(2, 1, &t(2, &[2, 3])).unwrap());
        assert!(is_in_s_prime(2, 2, &t(2, &[])).unwrap());
        assert!(is_in_s_prime(2, 1, &t(2, &[3])).is_err());
    }

    #[test]
    fn phi_examples() {
        assert_eq!(phi1(2, 1, &t(2, &[2])).unwrap(), t(2, &[1, 2, 4]));
        assert_eq!(phi2(2, 1, &t(2, &[4])).unwrap(), t(2, &[1, 3, 4]));
        assert!(matches!(phi1(2, 1, &t(2, &[4])), Err(Error::DomainViolation(_))));
        assert!(matches!(phi2(2, 1, &t(2, &[1])), Err(Error::DomainViolation(_))));
        assert!(matches!(phi1(2, 0, &t(2, &[2])), Err(Error::DomainViolation(_))));
    }

    #[test]
    fn tuple_validation() {
        assert!(IndexTuple::new(1, vec![2, 1]).is_err());
        assert!(IndexTuple::new(1, vec![4]).is_err());
        assert!(IndexTuple::new(1, vec![0]).is_err());
    }
}
