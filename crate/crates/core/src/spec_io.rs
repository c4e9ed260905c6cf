//! JSON input documents describing a reductive space with optional forms
//! and metric.
//!
//! ```json
//! {
//!   "name": "example",
//!   "dimension": 3,
//!   "labels": ["X1", "X2", "X3"],
//!   "structure_constants": [[0, 1, 2, "-1"], [1, 2, 0, "-1"], [2, 0, 1, -1.0]],
//!   "h_indices": [],
//!   "m_indices": [0, 1, 2],
//!   "forms": { "omega": [[[0, 1], "1/2"]] },
//!   "metric": [["1", "0", "0"], ["0", "1", "0"], ["0", "0", "1"]]
//! }
//! ```
//!
//! Values are `"p/q"` strings (exact) or JSON numbers (floating). Structure
//! constants are given for `i < j` or both orders; antisymmetry is completed
//! and the Jacobi identity checked on load. Form indices refer to positions
//! inside `m_indices`.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exterior::KForm;
use crate::lie::{LieAlgebra, ReductiveSpace};
use crate::linalg::{Gram, Matrix};
use crate::scalar::{format_rational, parse_rational, Rational, Scalar};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Value {
    Exact(String),
    Float(f64),
}

impl Value {
    pub fn exact(q: &Rational) -> Self {
        Value::Exact(format_rational(q))
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, Value::Exact(_))
    }

    pub fn to_scalar<S: Scalar>(&self) -> Result<S> {
        match self {
            Value::Exact(s) => parse_rational(s)
                .map(|q| S::from_rational(&q))
                .ok_or_else(|| Error::Parse(format!("not a rational number: {s:?}"))),
            Value::Float(x) if x.is_finite() => Ok(S::from_f64(*x)),
            Value::Float(x) => Err(Error::Parse(format!("non-finite value {x}"))),
        }
    }
}

/// `(multi-index, value)` pairs of a form.
pub type FormEntries = Vec<(Vec<usize>, Value)>;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpaceSpec {
    #[serde(default)]
    pub name: String,
    pub dimension: usize,
    pub labels: Vec<String>,
    pub structure_constants: Vec<(usize, usize, usize, Value)>,
    pub h_indices: Vec<usize>,
    pub m_indices: Vec<usize>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub forms: BTreeMap<String, FormEntries>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub metric: Option<Vec<Vec<Value>>>,
}

impl SpaceSpec {
    /// Parses and validates; syntax errors carry line and column.
    pub fn from_json(text: &str) -> Result<Self> {
        let spec: SpaceSpec = serde_json::from_str(text)
            .map_err(|e| Error::Parse(format!("line {}, column {}: {e}", e.line(), e.column())))?;
        spec.validate(text)?;
        Ok(spec)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("serializable")
    }

    /// True when every number in the document is an exact string.
    pub fn is_exact(&self) -> bool {
        self.structure_constants.iter().all(|e| e.3.is_exact())
            && self.forms.values().flatten().all(|(_, v)| v.is_exact())
            && self.metric.iter().flatten().flatten().all(Value::is_exact)
    }

    fn validate(&self, text: &str) -> Result<()> {
        let at = |needle: &str| line_of(text, needle).map(|l| format!("line {l}: ")).unwrap_or_default();
        if self.labels.len() != self.dimension {
            return Err(Error::Parse(format!(
                "{}{} labels for dimension {}",
                at("\"labels\""),
                self.labels.len(),
                self.dimension
            )));
        }
        let mut seen = vec![false; self.dimension];
        for &i in self.h_indices.iter().chain(&self.m_indices) {
            if i >= self.dimension || seen[i] {
                return Err(Error::Parse(format!(
                    "{}h_indices and m_indices must partition 0..{}",
                    at("\"h_indices\""),
                    self.dimension
                )));
            }
            seen[i] = true;
        }
        if seen.iter().any(|s| !s) {
            return Err(Error::Parse(format!(
                "{}h_indices and m_indices must partition 0..{}",
                at("\"m_indices\""),
                self.dimension
            )));
        }
        for (n, (i, j, k, v)) in self.structure_constants.iter().enumerate() {
            if *i >= self.dimension || *j >= self.dimension || *k >= self.dimension {
                return Err(Error::Parse(format!(
                    "{}structure constant #{n} has an index out of range",
                    at("\"structure_constants\"")
                )));
            }
            v.to_scalar::<f64>().map_err(|e| Error::Parse(format!("{}structure constant #{n}: {e}", at("\"structure_constants\""))))?;
        }
        let m = self.m_indices.len();
        for (name, entries) in &self.forms {
            for (idx, v) in entries {
                if idx.iter().any(|&a| a >= m) {
                    return Err(Error::Parse(format!("{}form {name:?}: index {idx:?} out of range {m}", at(&format!("\"{name}\"")))));
                }
                v.to_scalar::<f64>()?;
            }
        }
        if let Some(g) = &self.metric {
            if g.len() != m || g.iter().any(|r| r.len() != m) {
                return Err(Error::Parse(format!("{}metric must be {m}×{m}", at("\"metric\""))));
            }
        }
        // Jacobi and antisymmetry in floating point; exact loads re-check.
        self.space::<f64>().map_err(|e| match e {
            Error::JacobiFails(..) | Error::NotAntisymmetric(..) | Error::NotReductive(_) => {
                Error::Parse(format!("{}{e}", at("\"structure_constants\"")))
            }
            e => e,
        })?;
        Ok(())
    }

    pub fn algebra<S: Scalar>(&self) -> Result<LieAlgebra<S>> {
        let tol = if S::EXACT { 0.0 } else { crate::DEFAULT_TOLERANCE };
        let entries = self
            .structure_constants
            .iter()
            .map(|(i, j, k, v)| Ok((*i, *j, *k, v.to_scalar::<S>()?)))
            .collect::<Result<Vec<_>>>()?;
        LieAlgebra::from_sparse(self.labels.clone(), entries, tol)
    }

    pub fn space<S: Scalar>(&self) -> Result<ReductiveSpace<S>> {
        let tol = if S::EXACT { 0.0 } else { crate::DEFAULT_TOLERANCE };
        ReductiveSpace::new(self.algebra()?, self.h_indices.clone(), self.m_indices.clone(), tol)
    }

    pub fn form<S: Scalar>(&self, name: &str) -> Result<Option<KForm<S>>> {
        let Some(entries) = self.forms.get(name) else {
            return Ok(None);
        };
        let n = self.m_indices.len();
        let k = entries.first().map(|(i, _)| i.len()).unwrap_or(0);
        let terms = entries.iter().map(|(i, v)| Ok((i.as_slice(), v.to_scalar::<S>()?))).collect::<Result<Vec<_>>>()?;
        KForm::from_terms(n, k, terms).map(Some)
    }

    pub fn gram<S: Scalar>(&self) -> Result<Option<Gram<S>>> {
        let Some(rows) = &self.metric else {
            return Ok(None);
        };
        let rows = rows
            .iter()
            .map(|r| r.iter().map(Value::to_scalar::<S>).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        let tol = if S::EXACT { 0.0 } else { crate::DEFAULT_TOLERANCE };
        Gram::new(Matrix::from_rows(rows), tol).map(Some)
    }

    /// Document for an exact rational space, with optional forms and metric.
    pub fn from_space(
        name: &str,
        space: &ReductiveSpace<Rational>,
        forms: &[(&str, &KForm<Rational>)],
        metric: Option<&Gram<Rational>>,
    ) -> Self {
        let alg = space.algebra();
        let structure_constants = alg
            .sparse_entries(0.0)
            .into_iter()
            .filter(|(i, j, _, _)| i < j)
            .map(|(i, j, k, v)| (i, j, k, Value::exact(&v)))
            .collect();
        let forms = forms
            .iter()
            .map(|(n, f)| {
                let entries = f.terms(0.0).into_iter().map(|(i, v)| (i, Value::exact(&v))).collect();
                (n.to_string(), entries)
            })
            .collect();
        let metric = metric.map(|g| {
            let m = g.matrix();
            (0..m.rows()).map(|r| (0..m.cols()).map(|c| Value::exact(&m[(r, c)])).collect()).collect()
        });
        SpaceSpec {
            name: name.to_string(),
            dimension: alg.dim(),
            labels: alg.labels().to_vec(),
            structure_constants,
            h_indices: space.h_indices().to_vec(),
            m_indices: space.m_indices().to_vec(),
            forms,
            metric,
        }
    }
}

fn line_of(text: &str, needle: &str) -> Option<usize> {
    text.lines().position(|l| l.contains(needle)).map(|i| i + 1)
}

#[cfg(test)]
mod tests {
    use super::*;

    const SU2: &str = r#"{
  "dimension": 3,
  "labels": ["X1", "X2", "X3"],
  "structure_constants": [[0, 1, 2, "-1"], [1, 2, 0, "-1"], [2, 0, 1, -1.0]],
  "h_indices": [],
  "m_indices": [0, 1, 2],
  "forms": { "e1": [[[0], "1/2"]] }
}"#;

    #[test]
    fn loads_mixed_values() {
        let s = SpaceSpec::from_json(SU2).unwrap();
        assert!(!s.is_exact());
        let sp = s.space::<Rational>().unwrap();
        let e1 = s.form::<Rational>("e1").unwrap().unwrap();
        let d = sp.ce_differential(&e1, 0.0).unwrap();
        assert_eq!(d, KForm::term(3, &[1, 2], <Rational as Scalar>::from_ratio(1, 2)));
    }

    #[test]
    fn syntax_error_has_position() {
        let err = SpaceSpec::from_json("{\n  \"dimension\": 3,\n  oops\n}").unwrap_err();
        assert!(err.to_string().contains("line 3"), "{err}");
    }

    #[test]
    fn jacobi_error_on_load() {
        let bad = r#"{
  "dimension": 4,
  "labels": ["A", "B", "C", "D"],
  "structure_constants": [[0, 1, 2, "1"], [2, 3, 0, "1"]],
  "h_indices": [],
  "m_indices": [0, 1, 2, 3]
}"#;
        let err = SpaceSpec::from_json(bad).unwrap_err();
        assert!(err.to_string().contains("Jacobi") && err.to_string().contains("line 4"), "{err}");
    }

    #[test]
    fn round_trip() {
        let s = SpaceSpec::from_json(SU2).unwrap();
        assert_eq!(SpaceSpec::from_json(&s.to_json()).unwrap(), s);
    }
}
