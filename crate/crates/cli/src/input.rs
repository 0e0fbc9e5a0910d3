//! Parsing of structure files and comma-separated number lists.

use std::collections::BTreeMap;
use std::path::Path;

use bilv_core::exactalg::{parse_rational, Poly, Rational, Var};
use bilv_core::poisson::{is_admissible_pair, ConstantStructure};
use serde::Deserialize;
use serde_json::Value;

use crate::CliError;

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct BFile {
    k: usize,
    #[serde(default)]
    params: BTreeMap<String, Value>,
}

/// Pair parameters read from a `b.json` file.
pub struct BParams {
    pub k: usize,
    pub pairs: BTreeMap<(usize, usize), Rational>,
}

impl BParams {
    pub fn admissible(&self) -> Result<ConstantStructure, CliError> {
        let map = self.pairs.iter().map(|(&p, v)| (p, Poly::constant(v.clone()))).collect();
        Ok(ConstantStructure::from_pairs(self.k, &map)?)
    }

    pub fn any_support(&self) -> Result<ConstantStructure, CliError> {
        let entries: Vec<_> = self.pairs.iter().map(|(&p, v)| (p, Poly::constant(v.clone()))).collect();
        Ok(ConstantStructure::from_entries(self.k, &entries)?)
    }
}

fn value_to_rational(key: &str, v: &Value) -> Result<Rational, CliError> {
    match v {
        Value::String(s) => Ok(parse_rational(s)?),
        Value::Number(n) if n.is_i64() => Ok(Rational::from_integer(n.as_i64().unwrap().into())),
        _ => Err(CliError::Config(format!("value of {key} must be an integer or a \"p/q\" string"))),
    }
}

/// Reads a structure file; with `strict`, pairs outside the admissible set
/// are an error.
pub fn read_b_file(path: &Path, k: usize, strict: bool) -> Result<BParams, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
    let raw: BFile =
        serde_json::from_str(&text).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
    if raw.k != k {
        return Err(CliError::Config(format!("{} is for k = {}, not k = {k}", path.display(), raw.k)));
    }
    let n = 2 * k + 1;
    let mut pairs = BTreeMap::new();
    for (key, v) in &raw.params {
        let (i, j) = match key.parse::<Var>() {
            Ok(Var::B(i, j)) => (i as usize, j as usize),
            _ => return Err(CliError::Config(format!("unknown parameter {key:?}"))),
        };
        if j > n {
            return Err(CliError::Config(format!("{key} is out of range for k = {k}")));
        }
        if strict && !is_admissible_pair(k, i, j) {
            return Err(CliError::Config(format!("{key} is not an admissible pair for k = {k}")));
        }
        pairs.insert((i, j), value_to_rational(key, v)?);
    }
    Ok(BParams { k, pairs })
}

pub fn parse_rational_list(s: &str) -> Result<Vec<Rational>, CliError> {
    s.split(',')
        .map(|t| parse_rational(t.trim()).map_err(CliError::from))
        .collect()
}

pub fn parse_f64_list(s: &str) -> Result<Vec<f64>, CliError> {
    s.split(',')
        .map(|t| {
            t.trim()
                .parse::<f64>()
                .map_err(|_| CliError::Config(format!("{t:?} is not a number")))
        })
        .collect()
}
