//! JSON file formats for forms, ideals and specs.
//!
//! A form is `{"vars": [...], "char": p, "degree": d, "terms": [...]}` where
//! each term is `{"coef": "3", "exps": [..]}` or `{"coef": "3", "mono":
//! "x*y^2"}`. Coefficients are decimal strings so the same file reads over
//! both field modes. An ideal is `{"ring": {"vars", "char"}, "gens": [form]}`.

use std::collections::HashSet;
use std::path::Path;
use std::sync::Arc;

use perazzo_core::{
    AlgebraError, Field, Form, GradedIdeal, HomogeneousIdeal, Monomial, PerazzoSpec, PolyRing,
};
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::CliError;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermJson {
    pub coef: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub exps: Option<Vec<u16>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mono: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FormJson {
    pub vars: Vec<String>,
    #[serde(rename = "char")]
    pub characteristic: u64,
    pub degree: u32,
    pub terms: Vec<TermJson>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RingJson {
    pub vars: Vec<String>,
    #[serde(rename = "char")]
    pub characteristic: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IdealJson {
    pub ring: RingJson,
    pub gens: Vec<FormJson>,
}

pub fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T, CliError> {
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.display().to_string(),
        source,
    })?;
    serde_json::from_str(&text).map_err(|source| CliError::Json {
        path: path.display().to_string(),
        source,
    })
}

fn check_vars(vars: &[String]) -> Result<(), CliError> {
    let mut seen = HashSet::new();
    for v in vars {
        if v.is_empty() || !v.chars().all(|c| c.is_ascii_alphanumeric() || c == '_') {
            return Err(CliError::Input(format!("invalid variable name {v:?}")));
        }
        if !seen.insert(v) {
            return Err(CliError::Input(format!("variable {v} listed twice")));
        }
    }
    Ok(())
}

pub fn ring_from_vars<F: Field>(field: &F, vars: &[String]) -> Result<Arc<PolyRing<F>>, CliError> {
    check_vars(vars)?;
    Ok(PolyRing::new(field.clone(), vars.to_vec()))
}

/// Parses `x*y^2`, `x1^3*x2` or `1` against the names of `ring`.
pub fn parse_monomial<F: Field>(ring: &PolyRing<F>, s: &str) -> Result<Monomial, CliError> {
    let mut exps = vec![0u16; ring.nvars()];
    let s = s.trim();
    if s == "1" {
        return Ok(Monomial::new(exps));
    }
    for factor in s.split('*') {
        let (name, e) = match factor.trim().split_once('^') {
            Some((n, e)) => {
                let e: u16 = e
                    .trim()
                    .parse()
                    .map_err(|_| CliError::Input(format!("bad exponent in {factor:?}")))?;
                (n.trim(), e)
            }
            None => (factor.trim(), 1),
        };
        let k = ring
            .var_index(name)
            .ok_or_else(|| CliError::Input(format!("unknown variable {name:?}")))?;
        exps[k] += e;
    }
    Ok(Monomial::new(exps))
}

pub fn form_in_ring<F: Field>(
    ring: &Arc<PolyRing<F>>,
    json: &FormJson,
) -> Result<Form<F>, CliError> {
    if json.vars != ring.names() {
        return Err(CliError::Input(format!(
            "form variables {:?} differ from ring variables {:?}",
            json.vars,
            ring.names()
        )));
    }
    if json.terms.is_empty() {
        return Err(AlgebraError::ZeroForm.into());
    }
    let field = ring.field();
    let mut terms = Vec::with_capacity(json.terms.len());
    for t in &json.terms {
        let mono = match (&t.exps, &t.mono) {
            (Some(e), None) => {
                if e.len() != ring.nvars() {
                    return Err(CliError::Input(format!(
                        "exponent vector {e:?} has {} entries for {} variables",
                        e.len(),
                        ring.nvars()
                    )));
                }
                Monomial::new(e.clone())
            }
            (None, Some(m)) => parse_monomial(ring, m)?,
            _ => {
                return Err(CliError::Input(
                    "each term needs exactly one of \"exps\" or \"mono\"".into(),
                ))
            }
        };
        terms.push((mono, field.parse(&t.coef)?));
    }
    let form = Form::from_terms(ring, json.degree, terms)?;
    if form.is_zero() {
        return Err(AlgebraError::ZeroForm.into());
    }
    Ok(form)
}

pub fn parse_form<F: Field>(field: &F, json: &FormJson) -> Result<Form<F>, CliError> {
    let ring = ring_from_vars(field, &json.vars)?;
    form_in_ring(&ring, json)
}

pub fn form_to_json<F: Field>(form: &Form<F>) -> FormJson {
    let field = form.field();
    FormJson {
        vars: form.ring().names().to_vec(),
        characteristic: field.characteristic(),
        degree: form.degree(),
        terms: form
            .terms()
            .map(|(m, c)| TermJson {
                coef: field.format(c),
                exps: Some(m.exps().to_vec()),
                mono: None,
            })
            .collect(),
    }
}

pub fn parse_ideal<F: Field>(field: &F, json: &IdealJson) -> Result<HomogeneousIdeal<F>, CliError> {
    let ring = ring_from_vars(field, &json.ring.vars)?;
    let gens = json
        .gens
        .iter()
        .map(|g| form_in_ring(&ring, g))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(HomogeneousIdeal::new(&ring, gens)?)
}

pub fn ideal_to_json<F: Field>(ideal: &HomogeneousIdeal<F>) -> IdealJson {
    let ring = ideal.ring();
    IdealJson {
        ring: RingJson {
            vars: ring.names().to_vec(),
            characteristic: ring.field().characteristic(),
        },
        gens: ideal.generators().iter().map(form_to_json).collect(),
    }
}

/// A spec file is either a bare spec or any object with a `"spec"` member,
/// such as the output of `gen`.
pub fn read_spec(path: &Path) -> Result<PerazzoSpec, CliError> {
    let value: Value = read_json(path)?;
    let inner = match value.get("spec") {
        Some(s) => s.clone(),
        None => value,
    };
    serde_json::from_value(inner).map_err(|source| CliError::Json {
        path: path.display().to_string(),
        source,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use perazzo_core::{PrimeField, RationalField};

    fn sample() -> FormJson {
        serde_json::from_str(
            r#"{"vars": ["x", "y"], "char": 7, "degree": 2,
                "terms": [{"coef": "3", "mono": "x*y"}, {"coef": "-1", "exps": [2, 0]}, {"coef": "9", "exps": [0, 2]}]}"#,
        )
        .unwrap()
    }

    #[test]
    fn round_trip_is_canonical() {
        let f = PrimeField::new(7).unwrap();
        let form = parse_form(&f, &sample()).unwrap();
        let json = form_to_json(&form);
        assert_eq!(json.terms[0].coef, "6");
        assert_eq!(json.terms[2].coef, "2");
        let again = form_to_json(&parse_form(&f, &json).unwrap());
        assert_eq!(json, again);
        let text = serde_json::to_string(&json).unwrap();
        assert_eq!(serde_json::from_str::<FormJson>(&text).unwrap(), json);
    }

    #[test]
    fn rational_coefficients() {
        let mut j = sample();
        j.terms[0].coef = "-2/4".into();
        let form = parse_form(&RationalField, &j).unwrap();
        assert_eq!(form_to_json(&form).terms[1].coef, "-1/2");
    }

    #[test]
    fn bad_inputs() {
        let f = PrimeField::default();
        let mut j = sample();
        j.terms.clear();
        assert!(parse_form(&f, &j)
            .unwrap_err()
            .to_string()
            .contains("zero form"));

        let mut j = sample();
        j.terms[1].exps = Some(vec![3, 0]);
        let err = parse_form(&f, &j).unwrap_err().to_string();
        assert!(err.contains("x^3"), "{err}");

        let mut j = sample();
        j.terms[0].mono = Some("x*w".into());
        assert!(parse_form(&f, &j)
            .unwrap_err()
            .to_string()
            .contains("unknown variable"));

        let mut j = sample();
        j.vars[1] = "x".into();
        assert!(parse_form(&f, &j).is_err());
    }

    #[test]
    fn ideal_round_trip() {
        let f = PrimeField::default();
        let j = sample();
        let ideal = IdealJson {
            ring: RingJson {
                vars: j.vars.clone(),
                characteristic: 32003,
            },
            gens: vec![j],
        };
        let parsed = parse_ideal(&f, &ideal).unwrap();
        let out = ideal_to_json(&parsed);
        assert_eq!(ideal_to_json(&parse_ideal(&f, &out).unwrap()), out);
    }
}
