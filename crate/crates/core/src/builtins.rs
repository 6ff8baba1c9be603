//! Named tribrackets and brackets used throughout the examples and tables.

use crate::bracket::{CoefficientTensor, TribracketBracket};
use crate::error::{Error, Result};
use crate::ring::ModulusRing;
use crate::tribracket::Tribracket;

/// The 3-element tribracket given by three 3x3 matrices.
pub fn three_element_tribracket() -> Tribracket {
    Tribracket::from_tensor(&[
        vec![vec![1, 3, 2], vec![2, 1, 3], vec![3, 2, 1]],
        vec![vec![2, 1, 3], vec![3, 2, 1], vec![1, 3, 2]],
        vec![vec![3, 2, 1], vec![1, 3, 2], vec![2, 1, 3]],
    ])
    .expect("static tensor")
}

/// The 2-element tribracket `[[2 1;1 2],[1 2;2 1]]`.
pub fn two_element_tribracket() -> Tribracket {
    Tribracket::from_tensor(&[vec![vec![2, 1], vec![1, 2]], vec![vec![1, 2], vec![2, 1]]])
        .expect("static tensor")
}

fn two_by_two(ring: ModulusRing, m: [[[i64; 2]; 2]; 2]) -> CoefficientTensor {
    CoefficientTensor::from_fn(ring, 2, |a, b, c| m[a][b][c])
}

fn build(modulus: u32, a: [[[i64; 2]; 2]; 2], b: [[[i64; 2]; 2]; 2]) -> TribracketBracket {
    let ring = ModulusRing::new(modulus).expect("static modulus");
    TribracketBracket::new(
        two_element_tribracket(),
        two_by_two(ring, a),
        two_by_two(ring, b),
    )
    .expect("built-in bracket satisfies the axioms")
}

/// Bracket over Z/7 on the 2-element tribracket with δ = 6 and w = 4.
pub fn z7_bracket() -> TribracketBracket {
    build(
        7,
        [[[1, 3], [2, 1]], [[1, 2], [3, 1]]],
        [[[5, 1], [3, 5]], [[5, 3], [1, 5]]],
    )
}

/// First Z/5 bracket used for the knot and link tables.
pub fn beta1() -> TribracketBracket {
    build(
        5,
        [[[1, 4], [2, 1]], [[1, 1], [3, 1]]],
        [[[4, 1], [3, 4]], [[4, 4], [2, 4]]],
    )
}

/// Second Z/5 bracket used for the knot and link tables.
///
/// `A_{2,1,2} = 3`. With the value 1 found in some printings, δ is not
/// constant (`(2,1,2)` gives 0, every other triple gives 2); 3 is the only
/// single-entry change that yields a bracket.
pub fn beta2() -> TribracketBracket {
    build(
        5,
        [[[1, 2], [2, 1]], [[1, 3], [3, 1]]],
        [[[4, 3], [3, 4]], [[4, 2], [2, 4]]],
    )
}

pub const TRIBRACKET_NAMES: [&str; 2] = ["x3", "x2"];
pub const BRACKET_NAMES: [&str; 3] = ["z7", "beta1", "beta2"];

pub fn tribracket_by_name(name: &str) -> Result<Tribracket> {
    match name {
        "x3" | "ex1" => Ok(three_element_tribracket()),
        "x2" | "ex2" => Ok(two_element_tribracket()),
        "trivial" | "x1" => Ok(Tribracket::trivial()),
        _ => Err(unknown(name, &TRIBRACKET_NAMES)),
    }
}

pub fn bracket_by_name(name: &str) -> Result<TribracketBracket> {
    match name {
        "z7" => Ok(z7_bracket()),
        "beta1" => Ok(beta1()),
        "beta2" => Ok(beta2()),
        _ => Err(unknown(name, &BRACKET_NAMES)),
    }
}

fn unknown(name: &str, known: &[&str]) -> Error {
    Error::UnknownName {
        name: name.to_string(),
        suggestion: crate::catalog::nearest(name, known.iter().copied()),
    }
}
