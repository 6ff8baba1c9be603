//! Finite horizontal tribrackets stored as operation 3-tensors.
//!
//! Elements are the labels `1..=n`. `eval(a, b, c)` reads matrix `a`, row `b`,
//! column `c` of the tensor. Internally the tensor is kept zero-based and
//! flattened in row-major order.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ring::ModulusRing;

/// Largest size accepted by [`enumerate_tribrackets`].
pub const ENUMERATION_HARD_BOUND: usize = 4;
/// Sizes above this are enumerated with a warning.
pub const ENUMERATION_DEFAULT_BOUND: usize = 3;

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Tribracket {
    size: usize,
    table: Vec<u16>,
}

/// Which tribracket condition a violation refers to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Axiom {
    /// `[x,b,c] = d` must have exactly one solution.
    LeftDivision,
    /// `[a,x,c] = d` must have exactly one solution.
    CenterDivision,
    /// `[a,b,x] = d` must have exactly one solution.
    RightDivision,
    /// `[c,[a,b,c],[a,c,d]] = [b,[a,b,c],[a,b,d]]`
    FirstIdentity,
    /// `[b,[a,b,c],[a,b,d]] = [d,[a,b,d],[a,c,d]]`
    SecondIdentity,
}

impl Axiom {
    pub fn is_quasigroup(self) -> bool {
        matches!(
            self,
            Axiom::LeftDivision | Axiom::CenterDivision | Axiom::RightDivision
        )
    }
}

/// A failed axiom instance. Labels are one-based; for the division axioms the
/// unknown slot is reported as 0.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub axiom: Axiom,
    pub witness: [usize; 4],
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct AxiomReport {
    pub valid: bool,
    pub violations: Vec<Violation>,
}

impl Tribracket {
    /// Builds a tribracket from a one-based tensor with
    /// `tensor[a-1][b-1][c-1] = [a,b,c]`. Only shape and range are checked;
    /// see [`Tribracket::verify`].
    pub fn from_tensor(tensor: &[Vec<Vec<usize>>]) -> Result<Self> {
        let n = tensor.len();
        if n == 0 {
            return Err(Error::MalformedTensor("empty tensor".into()));
        }
        let mut table = Vec::with_capacity(n * n * n);
        for (a, matrix) in tensor.iter().enumerate() {
            if matrix.len() != n {
                return Err(Error::MalformedTensor(format!(
                    "matrix {} has {} rows, expected {n}",
                    a + 1,
                    matrix.len()
                )));
            }
            for (b, row) in matrix.iter().enumerate() {
                if row.len() != n {
                    return Err(Error::MalformedTensor(format!(
                        "matrix {} row {} has {} entries, expected {n}",
                        a + 1,
                        b + 1,
                        row.len()
                    )));
                }
                for &v in row {
                    if v == 0 || v > n {
                        return Err(Error::IndexOutOfRange { label: v, size: n });
                    }
                    table.push((v - 1) as u16);
                }
            }
        }
        Ok(Tribracket { size: n, table })
    }

    /// Builds a tensor from a zero-based operation.
    pub(crate) fn from_fn(n: usize, op: impl Fn(usize, usize, usize) -> usize) -> Self {
        let mut table = Vec::with_capacity(n * n * n);
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    let v = op(a, b, c);
                    debug_assert!(v < n);
                    table.push(v as u16);
                }
            }
        }
        Tribracket { size: n, table }
    }

    /// The one-element tribracket.
    pub fn trivial() -> Self {
        Tribracket {
            size: 1,
            table: vec![0],
        }
    }

    #[inline]
    pub fn size(&self) -> usize {
        self.size
    }

    /// One-based tensor, matrix by matrix.
    pub fn to_tensor(&self) -> Vec<Vec<Vec<usize>>> {
        let n = self.size;
        (0..n)
            .map(|a| {
                (0..n)
                    .map(|b| (0..n).map(|c| self.get(a, b, c) + 1).collect())
                    .collect()
            })
            .collect()
    }

    /// Zero-based evaluation. Panics when an index is out of range.
    #[inline]
    pub fn get(&self, a: usize, b: usize, c: usize) -> usize {
        self.table[(a * self.size + b) * self.size + c] as usize
    }

    fn check_label(&self, label: usize) -> Result<usize> {
        if label == 0 || label > self.size {
            return Err(Error::IndexOutOfRange {
                label,
                size: self.size,
            });
        }
        Ok(label - 1)
    }

    /// `[a,b,c]` on one-based labels.
    pub fn eval(&self, a: usize, b: usize, c: usize) -> Result<usize> {
        let (a, b, c) = (
            self.check_label(a)?,
            self.check_label(b)?,
            self.check_label(c)?,
        );
        Ok(self.get(a, b, c) + 1)
    }

    fn solve(&self, slot: usize, known: [usize; 3]) -> Result<usize> {
        let [p, q, d] = known;
        let (p, q, d) = (
            self.check_label(p)?,
            self.check_label(q)?,
            self.check_label(d)?,
        );
        let solutions: Vec<usize> = (0..self.size)
            .filter(|&x| {
                let v = match slot {
                    0 => self.get(x, p, q),
                    1 => self.get(p, x, q),
                    _ => self.get(p, q, x),
                };
                v == d
            })
            .collect();
        if solutions.len() != 1 {
            let equation = match slot {
                0 => format!("[x,{},{}]={}", p + 1, q + 1, d + 1),
                1 => format!("[{},x,{}]={}", p + 1, q + 1, d + 1),
                _ => format!("[{},{},x]={}", p + 1, q + 1, d + 1),
            };
            return Err(Error::NotQuasigroup {
                equation,
                solutions: solutions.len(),
            });
        }
        Ok(solutions[0] + 1)
    }

    /// The unique `x` with `[x,b,c] = d`.
    pub fn divide_left(&self, b: usize, c: usize, d: usize) -> Result<usize> {
        self.solve(0, [b, c, d])
    }

    /// The unique `x` with `[a,x,c] = d`.
    pub fn divide_center(&self, a: usize, c: usize, d: usize) -> Result<usize> {
        self.solve(1, [a, c, d])
    }

    /// The unique `x` with `[a,b,x] = d`.
    pub fn divide_right(&self, a: usize, b: usize, d: usize) -> Result<usize> {
        self.solve(2, [a, b, d])
    }

    /// Checks both tribracket conditions exhaustively and reports every
    /// violation.
    pub fn verify(&self) -> AxiomReport {
        self.verify_with_limit(None)
    }

    /// As [`Tribracket::verify`], stopping after `limit` violations.
    pub fn verify_with_limit(&self, limit: Option<usize>) -> AxiomReport {
        let n = self.size;
        let cap = limit.unwrap_or(usize::MAX);
        let mut violations = Vec::new();

        // condition (i): each partial map is a bijection
        let mut counts = vec![0usize; n];
        for (axiom, slot) in [
            (Axiom::LeftDivision, 0),
            (Axiom::CenterDivision, 1),
            (Axiom::RightDivision, 2),
        ] {
            for p in 0..n {
                for q in 0..n {
                    counts.iter_mut().for_each(|c| *c = 0);
                    for x in 0..n {
                        let v = match slot {
                            0 => self.get(x, p, q),
                            1 => self.get(p, x, q),
                            _ => self.get(p, q, x),
                        };
                        counts[v] += 1;
                    }
                    for (d, &count) in counts.iter().enumerate() {
                        if count != 1 && violations.len() < cap {
                            let witness = match slot {
                                0 => [0, p + 1, q + 1, d + 1],
                                1 => [p + 1, 0, q + 1, d + 1],
                                _ => [p + 1, q + 1, 0, d + 1],
                            };
                            violations.push(Violation { axiom, witness });
                        }
                    }
                }
            }
        }

        // condition (ii), as two equalities over all quadruples
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    let abc = self.get(a, b, c);
                    for d in 0..n {
                        let acd = self.get(a, c, d);
                        let abd = self.get(a, b, d);
                        let left = self.get(c, abc, acd);
                        let middle = self.get(b, abc, abd);
                        let right = self.get(d, abd, acd);
                        let witness = [a + 1, b + 1, c + 1, d + 1];
                        if left != middle && violations.len() < cap {
                            violations.push(Violation {
                                axiom: Axiom::FirstIdentity,
                                witness,
                            });
                        }
                        if middle != right && violations.len() < cap {
                            violations.push(Violation {
                                axiom: Axiom::SecondIdentity,
                                witness,
                            });
                        }
                    }
                }
            }
        }

        AxiomReport {
            valid: violations.is_empty(),
            violations,
        }
    }

    /// Division tables for fast constraint propagation. Fails unless the
    /// tensor is a ternary quasigroup.
    pub fn divisions(&self) -> Result<Divisions> {
        let n = self.size;
        let unset = u16::MAX;
        let mut left = vec![unset; n * n * n];
        let mut center = vec![unset; n * n * n];
        let mut right = vec![unset; n * n * n];
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    let d = self.get(a, b, c);
                    for (table, idx, x, eq) in [
                        (&mut left, (b * n + c) * n + d, a, "left"),
                        (&mut center, (a * n + c) * n + d, b, "center"),
                        (&mut right, (a * n + b) * n + d, c, "right"),
                    ] {
                        if table[idx] != unset {
                            return Err(Error::NotQuasigroup {
                                equation: format!(
                                    "{eq} division near [{},{},{}]",
                                    a + 1,
                                    b + 1,
                                    c + 1
                                ),
                                solutions: 2,
                            });
                        }
                        table[idx] = x as u16;
                    }
                }
            }
        }
        Ok(Divisions {
            size: n,
            left,
            center,
            right,
        })
    }
}

impl fmt::Debug for Tribracket {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Tribracket")
            .field("size", &self.size)
            .field("tensor", &self.to_tensor())
            .finish()
    }
}

/// Prints the tensor as a list of `n` matrices, side by side.
impl fmt::Display for Tribracket {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_matrices(f, self.size, |a, b, c| (self.get(a, b, c) + 1).to_string())
    }
}

pub(crate) fn write_matrices(
    f: &mut impl fmt::Write,
    n: usize,
    entry: impl Fn(usize, usize, usize) -> String,
) -> fmt::Result {
    let width = (0..n)
        .flat_map(|a| (0..n).flat_map(move |b| (0..n).map(move |c| (a, b, c))))
        .map(|(a, b, c)| entry(a, b, c).len())
        .max()
        .unwrap_or(1);
    for b in 0..n {
        let mut line = String::new();
        for a in 0..n {
            if a > 0 {
                line.push_str("  ");
            }
            line.push('[');
            let row: Vec<String> = (0..n)
                .map(|c| format!("{:>width$}", entry(a, b, c)))
                .collect();
            line.push_str(&row.join(" "));
            line.push(']');
        }
        writeln!(f, "{line}")?;
    }
    Ok(())
}

/// Precomputed left, center and right division tables (zero-based).
#[derive(Clone, Debug)]
pub struct Divisions {
    size: usize,
    left: Vec<u16>,
    center: Vec<u16>,
    right: Vec<u16>,
}

impl Divisions {
    /// `x` with `[x,b,c] = d`.
    #[inline]
    pub fn left(&self, b: usize, c: usize, d: usize) -> usize {
        self.left[(b * self.size + c) * self.size + d] as usize
    }

    /// `x` with `[a,x,c] = d`.
    #[inline]
    pub fn center(&self, a: usize, c: usize, d: usize) -> usize {
        self.center[(a * self.size + c) * self.size + d] as usize
    }

    /// `x` with `[a,b,x] = d`.
    #[inline]
    pub fn right(&self, a: usize, b: usize, d: usize) -> usize {
        self.right[(a * self.size + b) * self.size + d] as usize
    }
}

/// A validated finite group given by its Cayley table on `0..n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupTable {
    size: usize,
    table: Vec<usize>,
    identity: usize,
    inverse: Vec<usize>,
}

impl GroupTable {
    /// Validates closure, associativity, identity and inverses.
    pub fn new(rows: &[Vec<usize>]) -> Result<Self> {
        let n = rows.len();
        if n == 0 {
            return Err(Error::NotAGroup("empty table".into()));
        }
        let mut table = Vec::with_capacity(n * n);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(Error::NotAGroup(format!(
                    "row {i} has length {}",
                    row.len()
                )));
            }
            for &v in row {
                if v >= n {
                    return Err(Error::NotAGroup(format!("entry {v} outside 0..{n}")));
                }
                table.push(v);
            }
        }
        let mul = |x: usize, y: usize| table[x * n + y];
        for x in 0..n {
            for y in 0..n {
                for z in 0..n {
                    if mul(mul(x, y), z) != mul(x, mul(y, z)) {
                        return Err(Error::NotAGroup(format!(
                            "not associative at ({x}, {y}, {z})"
                        )));
                    }
                }
            }
        }
        let identity = (0..n)
            .find(|&e| (0..n).all(|x| mul(e, x) == x && mul(x, e) == x))
            .ok_or_else(|| Error::NotAGroup("no identity".into()))?;
        let mut inverse = Vec::with_capacity(n);
        for x in 0..n {
            let inv = (0..n)
                .find(|&y| mul(x, y) == identity && mul(y, x) == identity)
                .ok_or_else(|| Error::NotAGroup(format!("{x} has no inverse")))?;
            inverse.push(inv);
        }
        Ok(GroupTable {
            size: n,
            table,
            identity,
            inverse,
        })
    }

    /// The cyclic group Z/n under addition.
    pub fn cyclic(n: usize) -> Self {
        let rows: Vec<Vec<usize>> = (0..n)
            .map(|x| (0..n).map(|y| (x + y) % n).collect())
            .collect();
        GroupTable::new(&rows).expect("cyclic table is a group")
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    #[inline]
    pub fn mul(&self, x: usize, y: usize) -> usize {
        self.table[x * self.size + y]
    }

    #[inline]
    pub fn inv(&self, x: usize) -> usize {
        self.inverse[x]
    }
}

/// Dehn tribracket `[a,b,c] = b a^{-1} c`, element `g` labelled `g + 1`.
pub fn make_dehn(group: &[Vec<usize>]) -> Result<Tribracket> {
    let group = GroupTable::new(group)?;
    Ok(dehn(&group))
}

pub fn dehn(group: &GroupTable) -> Tribracket {
    Tribracket::from_fn(group.size(), |a, b, c| {
        group.mul(group.mul(b, group.inv(a)), c)
    })
}

/// Alexander tribracket `[a,b,c] = xb + yc - xya` on Z/m, residue `r`
/// labelled `r + 1`.
pub fn make_alexander(modulus: u32, x: u32, y: u32) -> Result<Tribracket> {
    let ring = ModulusRing::new(modulus)?;
    let (x, y) = (ring.elem(x as i64), ring.elem(y as i64));
    for v in [x, y] {
        if !v.is_unit() {
            return Err(Error::NonUnit {
                value: v.value(),
                modulus,
            });
        }
    }
    let xy = x * y;
    Ok(Tribracket::from_fn(modulus as usize, |a, b, c| {
        let a = ring.elem(a as i64);
        let b = ring.elem(b as i64);
        let c = ring.elem(c as i64);
        (x * b + y * c - xy * a).value() as usize
    }))
}

/// All tribrackets on `{1..n}` in lexicographic order of the flattened
/// tensor. Sizes above [`ENUMERATION_DEFAULT_BOUND`] log a warning; sizes
/// above [`ENUMERATION_HARD_BOUND`] are refused.
pub fn enumerate_tribrackets(n: usize) -> Result<Vec<Tribracket>> {
    if n == 0 || n > ENUMERATION_HARD_BOUND {
        return Err(Error::BoundExceeded {
            what: "tribracket enumeration size",
            requested: n,
            bound: ENUMERATION_HARD_BOUND,
        });
    }
    if n > ENUMERATION_DEFAULT_BOUND {
        log::warn!("enumerating tribrackets of size {n}; this is slow");
    }
    let mut search = LatinCubeSearch {
        n,
        table: vec![0; n * n * n],
        // bit masks of values used along each of the three line directions
        along_a: vec![0; n * n],
        along_b: vec![0; n * n],
        along_c: vec![0; n * n],
        found: Vec::new(),
    };
    search.fill(0);
    Ok(search.found)
}

struct LatinCubeSearch {
    n: usize,
    table: Vec<u16>,
    along_a: Vec<u32>,
    along_b: Vec<u32>,
    along_c: Vec<u32>,
    found: Vec<Tribracket>,
}

impl LatinCubeSearch {
    fn fill(&mut self, cell: usize) {
        let n = self.n;
        if cell == n * n * n {
            let candidate = Tribracket {
                size: n,
                table: self.table.clone(),
            };
            if candidate.verify_with_limit(Some(1)).valid {
                self.found.push(candidate);
            }
            return;
        }
        let (a, b, c) = (cell / (n * n), (cell / n) % n, cell % n);
        let (ia, ib, ic) = (b * n + c, a * n + c, a * n + b);
        let used = self.along_a[ia] | self.along_b[ib] | self.along_c[ic];
        for v in 0..n {
            let bit = 1u32 << v;
            if used & bit != 0 {
                continue;
            }
            self.table[cell] = v as u16;
            self.along_a[ia] |= bit;
            self.along_b[ib] |= bit;
            self.along_c[ic] |= bit;
            self.fill(cell + 1);
            self.along_a[ia] &= !bit;
            self.along_b[ib] &= !bit;
            self.along_c[ic] &= !bit;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builtins;

    #[test]
    fn worked_tensor_lookups() {
        let x = builtins::three_element_tribracket();
        assert_eq!(x.eval(2, 3, 1).unwrap(), 1);
        assert_eq!(x.eval(1, 1, 2).unwrap(), 3);
        assert_eq!(x.divide_right(1, 1, 3).unwrap(), 2);
        assert!(matches!(
            x.eval(4, 1, 1),
            Err(Error::IndexOutOfRange { .. })
        ));
        assert!(matches!(
            x.eval(0, 1, 1),
            Err(Error::IndexOutOfRange { .. })
        ));
    }

    #[test]
    fn dehn_degenerate_left() {
        let g = GroupTable::cyclic(5);
        let t = dehn(&g);
        for a in 1..=5 {
            for c in 1..=5 {
                assert_eq!(t.eval(a, a, c).unwrap(), c);
            }
        }
    }

    #[test]
    fn dehn_z3_division() {
        // residues b=1, c=2, d=0 are labels 2, 3, 1; b - a + c = d forces a = 0
        let t = make_dehn(&cyclic_rows(3)).unwrap();
        assert_eq!(t.divide_left(2, 3, 1).unwrap(), 1);
        for a in 0..3 {
            for b in 0..3 {
                for c in 0..3 {
                    assert_eq!(t.get(a, b, c), (b + 3 - a + c) % 3);
                }
            }
        }
    }

    fn cyclic_rows(n: usize) -> Vec<Vec<usize>> {
        (0..n)
            .map(|x| (0..n).map(|y| (x + y) % n).collect())
            .collect()
    }

    #[test]
    fn constant_tensor_is_not_a_quasigroup() {
        let t = Tribracket::from_fn(2, |_, _, _| 0);
        assert!(matches!(
            t.divide_left(1, 1, 2),
            Err(Error::NotQuasigroup { solutions: 0, .. })
        ));
        assert!(matches!(
            t.divide_left(1, 1, 1),
            Err(Error::NotQuasigroup { solutions: 2, .. })
        ));
        assert!(t.divisions().is_err());
    }

    #[test]
    fn verifies_example_tensors() {
        assert!(builtins::three_element_tribracket().verify().valid);
        assert!(builtins::two_element_tribracket().verify().valid);
        assert!(Tribracket::trivial().verify().valid);
    }

    #[test]
    fn repeated_row_value_cites_condition_i() {
        let mut tensor = builtins::three_element_tribracket().to_tensor();
        tensor[0][0] = vec![1, 1, 2];
        let report = Tribracket::from_tensor(&tensor).unwrap().verify();
        assert!(!report.valid);
        assert!(report.violations.iter().any(|v| v.axiom.is_quasigroup()));
        let limited = Tribracket::from_tensor(&tensor)
            .unwrap()
            .verify_with_limit(Some(2));
        assert_eq!(limited.violations.len(), 2);
    }

    #[test]
    fn rejects_malformed_tensors() {
        assert!(Tribracket::from_tensor(&[]).is_err());
        assert!(Tribracket::from_tensor(&[vec![vec![1, 2]], vec![vec![2, 1]]]).is_err());
        assert!(matches!(
            Tribracket::from_tensor(&[vec![vec![0]]]),
            Err(Error::IndexOutOfRange { label: 0, size: 1 })
        ));
    }

    #[test]
    fn group_validation() {
        assert!(GroupTable::new(&cyclic_rows(4)).is_ok());
        // an order-5 Latin square that is not associative: x*y = 2x + y mod 5
        let rows: Vec<Vec<usize>> = (0..5)
            .map(|x| (0..5).map(|y| (2 * x + y) % 5).collect())
            .collect();
        assert!(matches!(make_dehn(&rows), Err(Error::NotAGroup(_))));
        assert!(matches!(
            make_dehn(&[vec![0, 0], vec![0, 0]]),
            Err(Error::NotAGroup(_))
        ));
    }

    #[test]
    fn alexander_constructor() {
        let t = make_alexander(3, 1, 1).unwrap();
        assert_eq!(t, dehn(&GroupTable::cyclic(3)));
        assert!(make_alexander(5, 2, 3).unwrap().verify().valid);
        assert!(matches!(
            make_alexander(4, 2, 1),
            Err(Error::NonUnit {
                value: 2,
                modulus: 4
            })
        ));
    }

    #[test]
    fn display_lists_matrices() {
        let s = builtins::two_element_tribracket().to_string();
        assert_eq!(s, "[2 1]  [1 2]\n[1 2]  [2 1]\n");
    }

    #[test]
    fn enumeration_bounds() {
        assert_eq!(
            enumerate_tribrackets(1).unwrap(),
            vec![Tribracket::trivial()]
        );
        assert!(enumerate_tribrackets(0).is_err());
        assert!(matches!(
            enumerate_tribrackets(5),
            Err(Error::BoundExceeded { requested: 5, .. })
        ));
    }
}
