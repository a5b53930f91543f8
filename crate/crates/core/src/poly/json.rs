use serde::{Deserialize, Serialize};

use super::MultiPoly;
use crate::error::{Error, Result};
use crate::fields::Field;

/// Wire form of a polynomial; terms are listed leading term first.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PolyJson {
    pub field: Field,
    pub vars: Vec<String>,
    pub terms: Vec<TermJson>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermJson {
    pub e: Vec<u32>,
    pub c: String,
}

impl From<&MultiPoly> for PolyJson {
    fn from(p: &MultiPoly) -> PolyJson {
        PolyJson {
            field: p.field().clone(),
            vars: p.vars().to_vec(),
            terms: p
                .terms()
                .rev()
                .map(|(m, c)| TermJson { e: m.0.clone(), c: p.field().format(c) })
                .collect(),
        }
    }
}

impl TryFrom<&PolyJson> for MultiPoly {
    type Error = Error;

    fn try_from(j: &PolyJson) -> Result<MultiPoly> {
        let mut seen = std::collections::HashSet::new();
        for v in &j.vars {
            if !seen.insert(v) {
                return Err(Error::Parse(format!("duplicate variable `{v}`")));
            }
        }
        let terms = j
            .terms
            .iter()
            .map(|t| Ok((t.e.clone(), j.field.parse(&t.c)?)))
            .collect::<Result<Vec<_>>>()?;
        MultiPoly::from_terms(&j.field, &j.vars, terms)
    }
}

impl MultiPoly {
    pub fn to_json(&self) -> PolyJson {
        PolyJson::from(self)
    }

    pub fn from_json(j: &PolyJson) -> Result<MultiPoly> {
        MultiPoly::try_from(j)
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string(&self.to_json()).expect("serializable")
    }

    pub fn from_json_str(text: &str) -> Result<MultiPoly> {
        let j: PolyJson = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        MultiPoly::from_json(&j)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::var_names;

    #[test]
    fn round_trip_rationals() {
        let q = Field::rationals();
        let vars = var_names("x", 3);
        let mut p = MultiPoly::from_int_terms(&q, &vars, &[(&[2, 0, 0], 3), (&[0, 1, 1], -1), (&[0, 0, 0], 5)]);
        p = p.scale(&q.parse("1/2").unwrap());
        let text = p.to_json_string();
        assert!(text.starts_with(r#"{"field":{"kind":"rationals"},"vars":["x0","x1","x2"],"terms":[{"e":[0,1,1],"c":"-1/2"}"#));
        assert_eq!(MultiPoly::from_json_str(&text).unwrap(), p);
    }

    #[test]
    fn round_trip_extension() {
        let f9 = Field::extension(3, 2).unwrap();
        let vars = var_names("z", 2);
        let p = MultiPoly::from_terms(
            &f9,
            &vars,
            vec![(vec![1, 0], f9.generator().unwrap()), (vec![0, 0], f9.from_i64(2))],
        )
        .unwrap();
        let text = p.to_json_string();
        assert!(text.contains(r#""modulus":[1,0,1]"#));
        assert!(text.contains(r#""c":"0,1""#));
        assert_eq!(MultiPoly::from_json_str(&text).unwrap(), p);
    }

    #[test]
    fn rejects_malformed() {
        assert!(matches!(MultiPoly::from_json_str("{"), Err(Error::Parse(_))));
        let bad = r#"{"field":{"kind":"prime","p":4},"vars":["x"],"terms":[]}"#;
        assert!(MultiPoly::from_json_str(bad).is_err());
        let bad = r#"{"field":{"kind":"prime","p":5},"vars":["x"],"terms":[{"e":[1,2],"c":"1"}]}"#;
        assert!(MultiPoly::from_json_str(bad).is_err());
    }
}
