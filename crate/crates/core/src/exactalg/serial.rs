//! JSON wire format for polynomials: an array of
//! `{"coeff": "p/q", "exps": {"x1": 2, "b_1_3": 1}}` terms, leading term first.

use std::collections::BTreeMap;

use serde::de::Error as _;
use serde::ser::SerializeMap;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::poly::{Monomial, Poly};
use super::rational::{format_rational, parse_rational};
use super::var::Var;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TermJson {
    pub coeff: String,
    pub exps: Vec<(Var, u32)>,
}

pub type PolyJson = Vec<TermJson>;

struct Exps<'a>(&'a [(Var, u32)]);

impl Serialize for Exps<'_> {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut map = serializer.serialize_map(Some(self.0.len()))?;
        for (v, e) in self.0 {
            map.serialize_entry(&v.to_string(), e)?;
        }
        map.end()
    }
}

impl Serialize for TermJson {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut map = serializer.serialize_map(Some(2))?;
        map.serialize_entry("coeff", &self.coeff)?;
        map.serialize_entry("exps", &Exps(&self.exps))?;
        map.end()
    }
}

#[derive(Deserialize)]
struct RawTerm {
    coeff: String,
    exps: BTreeMap<String, u32>,
}

impl<'de> Deserialize<'de> for TermJson {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let raw = RawTerm::deserialize(deserializer)?;
        let mut exps = raw
            .exps
            .into_iter()
            .map(|(name, e)| name.parse::<Var>().map(|v| (v, e)).map_err(D::Error::custom))
            .collect::<Result<Vec<_>, _>>()?;
        exps.sort();
        Ok(TermJson { coeff: raw.coeff, exps })
    }
}

impl Poly {
    pub fn to_json_terms(&self) -> PolyJson {
        self.terms()
            .rev()
            .map(|(m, c)| TermJson {
                coeff: format_rational(c),
                exps: m.iter().collect(),
            })
            .collect()
    }

    pub fn from_json_terms(terms: &[TermJson]) -> crate::error::Result<Poly> {
        let mut out = Poly::zero();
        for t in terms {
            let c = parse_rational(&t.coeff)?;
            out.add_term(Monomial::from_pairs(t.exps.iter().copied()), c);
        }
        Ok(out)
    }
}

impl Serialize for Poly {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        self.to_json_terms().serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Poly {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let terms = PolyJson::deserialize(deserializer)?;
        Poly::from_json_terms(&terms).map_err(D::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::ratio;

    #[test]
    fn wire_format() {
        let p = &(&Poly::x(1).pow(2) * &Poly::var(Var::b(1, 3))).scale(&ratio(1, 2)) - &Poly::x(2);
        let json = serde_json::to_string(&p).unwrap();
        assert_eq!(
            json,
            r#"[{"coeff":"1/2","exps":{"x1":2,"b_1_3":1}},{"coeff":"-1","exps":{"x2":1}}]"#
        );
        let back: Poly = serde_json::from_str(&json).unwrap();
        assert_eq!(back, p);
    }

    #[test]
    fn rejects_bad_names() {
        let bad = r#"[{"coeff":"1","exps":{"b_3_1":1}}]"#;
        assert!(serde_json::from_str::<Poly>(bad).is_err());
    }
}
