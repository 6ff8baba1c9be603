//! JSON forms of tribrackets and brackets.
//!
//! A tribracket is `{"n": 3, "tensor": [[[...]]]}` or just the nested
//! one-based tensor. A bracket is
//! `{"tribracket": <tribracket>, "modulus": m, "A": [[[...]]], "B": [[[...]]]}`.

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::bracket::{CoefficientTensor, SkeinVariant, TribracketBracket};
use crate::error::{Error, Result};
use crate::ring::ModulusRing;
use crate::tribracket::Tribracket;

#[derive(Serialize, Deserialize)]
struct TensorJson {
    n: usize,
    tensor: Vec<Vec<Vec<usize>>>,
}

#[derive(Serialize, Deserialize)]
struct BracketJson {
    tribracket: Value,
    modulus: u32,
    #[serde(rename = "A")]
    a: Vec<Vec<Vec<i64>>>,
    #[serde(rename = "B")]
    b: Vec<Vec<Vec<i64>>>,
}

fn tribracket_from_value(value: Value) -> Result<Tribracket> {
    let tensor: Vec<Vec<Vec<usize>>> = if value.is_array() {
        serde_json::from_value(value)?
    } else {
        let t: TensorJson = serde_json::from_value(value)?;
        if t.tensor.len() != t.n {
            return Err(Error::MalformedTensor(format!(
                "declared n = {} but the tensor has {} matrices",
                t.n,
                t.tensor.len()
            )));
        }
        t.tensor
    };
    Tribracket::from_tensor(&tensor)
}

/// Reads a tribracket without checking the axioms.
pub fn tribracket_from_json(text: &str) -> Result<Tribracket> {
    tribracket_from_value(serde_json::from_str(text)?)
}

pub fn tribracket_to_json(x: &Tribracket) -> String {
    serde_json::to_string(&TensorJson {
        n: x.size(),
        tensor: x.to_tensor(),
    })
    .expect("serializable")
}

/// The raw parts of a bracket file, before any axiom is checked.
pub struct BracketParts {
    pub tribracket: Tribracket,
    pub a: CoefficientTensor,
    pub b: CoefficientTensor,
}

pub fn bracket_parts_from_json(text: &str) -> Result<BracketParts> {
    let raw: BracketJson = serde_json::from_str(text)?;
    let ring = ModulusRing::new(raw.modulus)?;
    Ok(BracketParts {
        tribracket: tribracket_from_value(raw.tribracket)?,
        a: CoefficientTensor::from_tensor(ring, &raw.a)?,
        b: CoefficientTensor::from_tensor(ring, &raw.b)?,
    })
}

/// Reads and fully verifies a bracket.
pub fn bracket_from_json(text: &str, variant: SkeinVariant) -> Result<TribracketBracket> {
    let p = bracket_parts_from_json(text)?;
    TribracketBracket::with_variant(p.tribracket, p.a, p.b, variant)
}

pub fn bracket_to_value(b: &TribracketBracket) -> Value {
    let widen = |t: &CoefficientTensor| -> Vec<Vec<Vec<i64>>> {
        t.to_tensor()
            .into_iter()
            .map(|m| {
                m.into_iter()
                    .map(|r| r.into_iter().map(i64::from).collect())
                    .collect()
            })
            .collect()
    };
    serde_json::to_value(BracketJson {
        tribracket: serde_json::to_value(TensorJson {
            n: b.tribracket().size(),
            tensor: b.tribracket().to_tensor(),
        })
        .expect("serializable"),
        modulus: b.ring().modulus(),
        a: widen(b.a()),
        b: widen(b.b()),
    })
    .expect("serializable")
}

pub fn bracket_to_json(b: &TribracketBracket) -> String {
    bracket_to_value(b).to_string()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builtins;

    #[test]
    fn tribracket_round_trip() {
        let x = builtins::three_element_tribracket();
        let json = tribracket_to_json(&x);
        assert!(json.starts_with(r#"{"n":3,"tensor":[[[1,3,2]"#));
        assert_eq!(tribracket_from_json(&json).unwrap(), x);
        assert_eq!(
            tribracket_from_json("[[[2,1],[1,2]],[[1,2],[2,1]]]").unwrap(),
            builtins::two_element_tribracket()
        );
        assert!(tribracket_from_json(r#"{"n":3,"tensor":[[[1]]]}"#).is_err());
        assert!(tribracket_from_json("[[[0,1],[1,2]],[[1,2],[2,1]]]").is_err());
    }

    #[test]
    fn bracket_round_trip() {
        for b in [builtins::z7_bracket(), builtins::beta1(), builtins::beta2()] {
            let back = bracket_from_json(&bracket_to_json(&b), SkeinVariant::Corrected).unwrap();
            assert_eq!(back, b);
        }
        let raw = r#"{"tribracket":[[[1]]],"modulus":7,"A":[[[3]]],"B":[[[5]]]}"#;
        let b = bracket_from_json(raw, SkeinVariant::Corrected).unwrap();
        assert_eq!(b.ring().modulus(), 7);
    }
}
