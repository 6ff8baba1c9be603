//! Region colorings, the counting invariant and the bracket enhancement.
//!
//! For a coloring `C`, `β(C) = w^(n-p) Σ_states Π coefficients · δ^k`, where
//! `k` is the number of loops in the state. At a crossing colored `(a,b,c)`
//! the oriented smoothing contributes `A_abc` and the disoriented one
//! `B_abc` when the crossing is positive, and `A_abc⁻¹` / `B_abc⁻¹` when it
//! is negative.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bracket::TribracketBracket;
use crate::diagram::{LinkDiagram, PdCode, Sign};
use crate::error::{Error, Result};
use crate::ring::{ModulusRing, RingElement};
use crate::tribracket::Tribracket;

/// A region coloring: `faces[f]` is the zero-based element on face `f`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Coloring {
    pub faces: Vec<usize>,
}

impl Coloring {
    /// Zero-based `(a, b, c, d)` at each crossing.
    pub fn crossing_colors(&self, diagram: &LinkDiagram) -> Vec<[usize; 4]> {
        diagram
            .crossings()
            .iter()
            .map(|x| {
                let r = x.roles;
                [
                    self.faces[r.a],
                    self.faces[r.b],
                    self.faces[r.c],
                    self.faces[r.d],
                ]
            })
            .collect()
    }

    pub fn is_valid(&self, diagram: &LinkDiagram, x: &Tribracket) -> bool {
        self.faces.len() == diagram.face_count()
            && self.faces.iter().all(|&v| v < x.size())
            && self
                .crossing_colors(diagram)
                .iter()
                .all(|&[a, b, c, d]| x.get(a, b, c) == d)
    }
}

/// What to do when a face is assigned during the coloring search.
#[derive(Clone, Debug, Default)]
struct Step {
    face: usize,
    /// A crossing whose other three role faces are already assigned and in
    /// which this face occupies exactly one role: `(role, [other faces])`.
    forced: Option<(usize, [usize; 3])>,
    /// Crossings whose roles are all assigned after this step.
    checks: Vec<[usize; 4]>,
}

fn plan(diagram: &LinkDiagram) -> Vec<Step> {
    let faces = diagram.face_count();
    let crossings = diagram.crossings();
    let role_faces: Vec<[usize; 4]> = crossings
        .iter()
        .map(|x| [x.roles.a, x.roles.b, x.roles.c, x.roles.d])
        .collect();

    // breadth-first over crossings that share a face
    let mut order: Vec<usize> = Vec::with_capacity(faces);
    let mut placed = vec![false; faces];
    let mut used = vec![false; crossings.len()];
    for start in 0..crossings.len() {
        if used[start] {
            continue;
        }
        let mut queue = std::collections::VecDeque::from([start]);
        used[start] = true;
        while let Some(c) = queue.pop_front() {
            for &f in &role_faces[c] {
                if !placed[f] {
                    placed[f] = true;
                    order.push(f);
                }
            }
            for (c2, r) in role_faces.iter().enumerate() {
                if !used[c2] && r.iter().any(|f| role_faces[c].contains(f)) {
                    used[c2] = true;
                    queue.push_back(c2);
                }
            }
        }
    }
    for (f, p) in placed.iter().enumerate() {
        if !p {
            order.push(f);
        }
    }

    let mut position = vec![0usize; faces];
    for (i, &f) in order.iter().enumerate() {
        position[f] = i;
    }
    let mut steps: Vec<Step> = order
        .iter()
        .map(|&f| Step {
            face: f,
            ..Step::default()
        })
        .collect();
    for r in &role_faces {
        let last = r.iter().map(|&f| position[f]).max().expect("four roles");
        steps[last].checks.push(*r);
        let face = order[last];
        if steps[last].forced.is_none() && r.iter().filter(|&&f| f == face).count() == 1 {
            let role = r.iter().position(|&f| f == face).expect("present");
            let mut others = [0; 3];
            let mut k = 0;
            for (i, &f) in r.iter().enumerate() {
                if i != role {
                    others[k] = f;
                    k += 1;
                }
            }
            steps[last].forced = Some((role, others));
        }
    }
    steps
}

/// All colorings of `diagram` by `x`, sorted by face assignment.
pub fn enumerate_colorings(diagram: &LinkDiagram, x: &Tribracket) -> Vec<Coloring> {
    let steps = plan(diagram);
    let divisions = x.divisions().ok();
    let n = x.size();
    let mut assignment = vec![usize::MAX; diagram.face_count()];
    let mut out = Vec::new();

    fn forced_value(
        x: &Tribracket,
        divisions: &crate::tribracket::Divisions,
        role: usize,
        o: [usize; 3],
    ) -> usize {
        match role {
            0 => divisions.left(o[0], o[1], o[2]),
            1 => divisions.center(o[0], o[1], o[2]),
            2 => divisions.right(o[0], o[1], o[2]),
            _ => x.get(o[0], o[1], o[2]),
        }
    }

    fn descend(
        depth: usize,
        steps: &[Step],
        x: &Tribracket,
        divisions: Option<&crate::tribracket::Divisions>,
        n: usize,
        assignment: &mut Vec<usize>,
        out: &mut Vec<Coloring>,
    ) {
        if depth == steps.len() {
            out.push(Coloring {
                faces: assignment.clone(),
            });
            return;
        }
        let step = &steps[depth];
        let candidates: Vec<usize> = match (step.forced, divisions) {
            (Some((role, others)), Some(div)) => {
                vec![forced_value(x, div, role, others.map(|f| assignment[f]))]
            }
            _ => (0..n).collect(),
        };
        for v in candidates {
            assignment[step.face] = v;
            let ok = step.checks.iter().all(|r| {
                x.get(assignment[r[0]], assignment[r[1]], assignment[r[2]]) == assignment[r[3]]
            });
            if ok {
                descend(depth + 1, steps, x, divisions, n, assignment, out);
            }
        }
        assignment[step.face] = usize::MAX;
    }

    descend(
        0,
        &steps,
        x,
        divisions.as_ref(),
        n,
        &mut assignment,
        &mut out,
    );
    out.sort();
    out
}

/// Number of colorings of the diagram.
pub fn counting_invariant(diagram: &LinkDiagram, x: &Tribracket) -> usize {
    enumerate_colorings(diagram, x).len()
}

/// Loop counts of every smoothing state of a diagram, shared by all
/// colorings.
#[derive(Clone, Debug)]
pub struct StateSum<'a> {
    diagram: &'a LinkDiagram,
    loops: Vec<u32>,
}

/// How coefficients are assigned at negative crossings. Only the default is
/// an invariant; the swapped rule is kept to show why.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub(crate) enum NegativeRule {
    /// Oriented ↦ A⁻¹, disoriented ↦ B⁻¹.
    #[default]
    Inverse,
    /// Oriented ↦ B⁻¹, disoriented ↦ A⁻¹.
    #[cfg_attr(not(test), allow(dead_code))]
    SwappedInverse,
}

impl<'a> StateSum<'a> {
    pub fn new(diagram: &'a LinkDiagram) -> Result<Self> {
        Ok(StateSum {
            diagram,
            loops: diagram.state_loop_counts()?,
        })
    }

    pub fn diagram(&self) -> &LinkDiagram {
        self.diagram
    }

    /// `β(C)` for a coloring of this diagram.
    pub fn beta(&self, coloring: &Coloring, bracket: &TribracketBracket) -> Result<RingElement> {
        self.beta_with(coloring, bracket, NegativeRule::Inverse)
    }

    pub(crate) fn beta_with(
        &self,
        coloring: &Coloring,
        bracket: &TribracketBracket,
        rule: NegativeRule,
    ) -> Result<RingElement> {
        if !coloring.is_valid(self.diagram, bracket.tribracket()) {
            return Err(Error::Diagram(
                "not a coloring of this diagram by the bracket's tribracket".into(),
            ));
        }
        let ring = bracket.ring();
        let m = ring.modulus() as u64;
        let coefficients: Vec<[u64; 2]> = self
            .diagram
            .crossings()
            .iter()
            .zip(coloring.crossing_colors(self.diagram))
            .map(|(x, [a, b, c, _])| {
                let ca = bracket.a().get(a, b, c);
                let cb = bracket.b().get(a, b, c);
                let pair = match (x.sign, rule) {
                    (Sign::Positive, _) => [ca, cb],
                    (Sign::Negative, NegativeRule::Inverse) => [ca.inv()?, cb.inv()?],
                    (Sign::Negative, NegativeRule::SwappedInverse) => [cb.inv()?, ca.inv()?],
                };
                Ok(pair.map(|e| e.value() as u64))
            })
            .collect::<Result<_>>()?;

        let max_loops = self.loops.iter().copied().max().unwrap_or(0) as usize;
        let delta = bracket.delta().value() as u64;
        let mut delta_pow = vec![1 % m; max_loops + 1];
        for k in 1..=max_loops {
            delta_pow[k] = delta_pow[k - 1] * delta % m;
        }

        let mut total = 0u64;
        for (s, &k) in self.loops.iter().enumerate() {
            let mut term = delta_pow[k as usize];
            for (i, pair) in coefficients.iter().enumerate() {
                term = term * pair[s >> i & 1] % m;
            }
            total = (total + term) % m;
        }
        let exponent = self.diagram.negative_count() as i64 - self.diagram.positive_count() as i64;
        Ok(bracket.w().pow(exponent)? * ring.elem(total as i64))
    }
}

/// `β(C)` for a single coloring.
pub fn beta(
    diagram: &LinkDiagram,
    coloring: &Coloring,
    bracket: &TribracketBracket,
) -> Result<RingElement> {
    StateSum::new(diagram)?.beta(coloring, bracket)
}

/// The multiset of `β` values, sorted by residue.
pub fn phi_multiset(
    diagram: &LinkDiagram,
    bracket: &TribracketBracket,
) -> Result<Vec<RingElement>> {
    phi_multiset_with(diagram, bracket, NegativeRule::Inverse)
}

pub(crate) fn phi_multiset_with(
    diagram: &LinkDiagram,
    bracket: &TribracketBracket,
    rule: NegativeRule,
) -> Result<Vec<RingElement>> {
    let sum = StateSum::new(diagram)?;
    let colorings = enumerate_colorings(diagram, bracket.tribracket());
    let mut values = colorings
        .par_iter()
        .map(|c| sum.beta_with(c, bracket, rule))
        .collect::<Result<Vec<_>>>()?;
    values.sort();
    Ok(values)
}

/// `Φ = Σ_C u^β(C)`.
pub fn phi(diagram: &LinkDiagram, bracket: &TribracketBracket) -> Result<InvariantPolynomial> {
    Ok(InvariantPolynomial::from_values(
        bracket.ring(),
        phi_multiset(diagram, bracket)?,
    ))
}

/// The first component-orientation mask (in increasing order) under which
/// `Φ` equals `expected`, with every mask's value for reporting.
#[derive(Clone, Debug)]
pub struct OrientationSearch {
    pub matched: Option<u64>,
    pub values: Vec<(u64, InvariantPolynomial)>,
}

/// Tries all `2^k` orientation assignments of a `k`-component PD code,
/// stopping at the first one whose `Φ` equals `expected`.
pub fn search_orientations(
    pd: &PdCode,
    bracket: &TribracketBracket,
    expected: &InvariantPolynomial,
) -> Result<OrientationSearch> {
    let k = pd.components().len();
    let mut values = Vec::new();
    for mask in 0..1u64 << k {
        let diagram = LinkDiagram::with_orientation_mask(pd, mask)?;
        let value = phi(&diagram, bracket)?;
        let hit = &value == expected;
        values.push((mask, value));
        if hit {
            return Ok(OrientationSearch {
                matched: Some(mask),
                values,
            });
        }
    }
    Ok(OrientationSearch {
        matched: None,
        values,
    })
}

/// `Σ multiplicity · u^exponent` with exponents in Z/m.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct InvariantPolynomial {
    ring: ModulusRing,
    terms: BTreeMap<u32, u64>,
}

impl InvariantPolynomial {
    pub fn new(ring: ModulusRing) -> Self {
        InvariantPolynomial {
            ring,
            terms: BTreeMap::new(),
        }
    }

    pub fn from_values(ring: ModulusRing, values: impl IntoIterator<Item = RingElement>) -> Self {
        let mut p = InvariantPolynomial::new(ring);
        for v in values {
            p.add_term(v.value(), 1);
        }
        p
    }

    /// Adds `count · u^exponent`, reducing the exponent mod m.
    pub fn add_term(&mut self, exponent: u32, count: u64) {
        if count == 0 {
            return;
        }
        let e = exponent % self.ring.modulus();
        *self.terms.entry(e).or_default() += count;
    }

    pub fn ring(&self) -> ModulusRing {
        self.ring
    }

    /// Exponent residue to multiplicity, ascending.
    pub fn terms(&self) -> &BTreeMap<u32, u64> {
        &self.terms
    }

    pub fn coefficient(&self, exponent: u32) -> u64 {
        self.terms
            .get(&(exponent % self.ring.modulus()))
            .copied()
            .unwrap_or(0)
    }

    /// Sum of multiplicities, the number of colorings.
    pub fn total(&self) -> u64 {
        self.terms.values().sum()
    }

    pub fn multiset(&self) -> Vec<RingElement> {
        self.terms
            .iter()
            .flat_map(|(&e, &c)| std::iter::repeat_n(self.ring.elem(e as i64), c as usize))
            .collect()
    }

    /// Parses the canonical form (`4u^4+3u^3+u^2+2`), accepting any term
    /// order, `*`, spaces and repeated exponents.
    pub fn parse(ring: ModulusRing, text: &str) -> Result<Self> {
        let bad = |detail: &str| Error::Polynomial(format!("{text:?}: {detail}"));
        let compact: String = text
            .chars()
            .filter(|c| !c.is_whitespace() && *c != '*')
            .collect();
        let mut p = InvariantPolynomial::new(ring);
        if compact == "0" {
            return Ok(p);
        }
        if compact.is_empty() {
            return Err(bad("empty"));
        }
        for term in compact.split('+') {
            let (coef, power) = match term.find('u') {
                Some(i) => (&term[..i], Some(&term[i + 1..])),
                None => (term, None),
            };
            let count: u64 = if coef.is_empty() {
                if power.is_none() {
                    return Err(bad("empty term"));
                }
                1
            } else {
                coef.parse()
                    .map_err(|_| bad(&format!("bad coefficient {coef:?}")))?
            };
            let exponent: u64 = match power {
                None => 0,
                Some("") => 1,
                Some(rest) => rest
                    .strip_prefix('^')
                    .and_then(|e| e.parse().ok())
                    .ok_or_else(|| bad(&format!("bad exponent in {term:?}")))?,
            };
            p.add_term((exponent % ring.modulus() as u64) as u32, count);
        }
        Ok(p)
    }
}

impl fmt::Display for InvariantPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .rev()
            .map(|(&e, &c)| {
                let coef = if c == 1 && e != 0 {
                    String::new()
                } else {
                    c.to_string()
                };
                match e {
                    0 => coef,
                    1 => format!("{coef}u"),
                    _ => format!("{coef}u^{e}"),
                }
            })
            .collect();
        f.write_str(&parts.join("+"))
    }
}

#[derive(Serialize, Deserialize)]
struct PolynomialJson {
    modulus: u32,
    terms: BTreeMap<String, u64>,
}

impl Serialize for InvariantPolynomial {
    fn serialize<S: serde::Serializer>(
        &self,
        serializer: S,
    ) -> std::result::Result<S::Ok, S::Error> {
        PolynomialJson {
            modulus: self.ring.modulus(),
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (e.to_string(), *c))
                .collect(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for InvariantPolynomial {
    fn deserialize<D: serde::Deserializer<'de>>(
        deserializer: D,
    ) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let raw = PolynomialJson::deserialize(deserializer)?;
        let ring = ModulusRing::new(raw.modulus).map_err(D::Error::custom)?;
        let mut p = InvariantPolynomial::new(ring);
        for (e, c) in raw.terms {
            let e: u32 = e
                .parse()
                .map_err(|_| D::Error::custom(format!("bad exponent {e:?}")))?;
            p.add_term(e, c);
        }
        Ok(p)
    }
}

impl FromStr for ModulusPolynomial {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (m, poly) = s
            .split_once(':')
            .ok_or_else(|| Error::Polynomial(format!("{s:?}: expected MODULUS:POLYNOMIAL")))?;
        let m: u32 = m
            .trim()
            .parse()
            .map_err(|_| Error::Polynomial(format!("bad modulus {m:?}")))?;
        Ok(ModulusPolynomial(InvariantPolynomial::parse(
            ModulusRing::new(m)?,
            poly,
        )?))
    }
}

/// `m:polynomial` text form, for command-line arguments.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModulusPolynomial(pub InvariantPolynomial);

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builtins;
    use crate::diagram::parse_pd;

    fn diagram(text: &str) -> LinkDiagram {
        LinkDiagram::build(&parse_pd(text).unwrap()).unwrap()
    }

    fn z(m: u32) -> ModulusRing {
        ModulusRing::new(m).unwrap()
    }

    #[test]
    fn unknot_and_trefoil_counts() {
        let x = builtins::three_element_tribracket();
        assert_eq!(counting_invariant(&diagram("U(1)"), &x), 9);
        assert_eq!(
            counting_invariant(&diagram("X(1,4,2,5) X(3,6,4,1) X(5,2,6,3)"), &x),
            27
        );
        assert_eq!(counting_invariant(&diagram("X[1,1,2,2]"), &x), 9);
        assert_eq!(counting_invariant(&diagram("U(2)"), &x), 27);
    }

    #[test]
    fn colorings_satisfy_every_crossing() {
        let x = builtins::three_element_tribracket();
        let d = diagram("X[4,2,5,1], X[8,6,1,5], X[6,3,7,4], X[2,7,3,8]");
        let colorings = enumerate_colorings(&d, &x);
        assert!(!colorings.is_empty());
        assert!(colorings.iter().all(|c| c.is_valid(&d, &x)));
        assert!(colorings.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn hopf_phi_over_z7() {
        let b = builtins::z7_bracket();
        let d = diagram("X[4,1,3,2], X[2,3,1,4]");
        assert_eq!(counting_invariant(&d, b.tribracket()), 8);
        let p = (0..4u64)
            .map(|mask| {
                let d = LinkDiagram::with_orientation_mask(d.pd(), mask).unwrap();
                phi(&d, &b).unwrap().to_string()
            })
            .collect::<Vec<_>>();
        assert!(p.contains(&"4u^6+4u".to_string()), "{p:?}");
    }

    #[test]
    fn unknot_beta_is_delta() {
        let b = builtins::z7_bracket();
        let values = phi_multiset(&diagram("U(1)"), &b).unwrap();
        assert_eq!(
            values.iter().map(|v| v.value()).collect::<Vec<_>>(),
            vec![6; 4]
        );
    }

    #[test]
    fn polynomial_text_round_trip() {
        let r = z(5);
        let p = InvariantPolynomial::parse(r, "u+u^4+2u^2").unwrap();
        assert_eq!(p.to_string(), "u^4+2u^2+u");
        assert_eq!(InvariantPolynomial::parse(r, &p.to_string()).unwrap(), p);
        let q = InvariantPolynomial::parse(r, "3 + 2*u^0 + u^6").unwrap();
        assert_eq!(q.to_string(), "u+5");
        assert_eq!(InvariantPolynomial::new(r).to_string(), "0");
        assert!(InvariantPolynomial::parse(r, "4yu^2").is_err());
        assert!(InvariantPolynomial::parse(r, "").is_err());
        assert!(InvariantPolynomial::parse(r, "u^").is_err());
    }

    #[test]
    fn polynomial_json_round_trip() {
        let p = InvariantPolynomial::parse(z(5), "4u^4+3u^3+u^2").unwrap();
        let json = serde_json::to_string(&p).unwrap();
        assert_eq!(json, r#"{"modulus":5,"terms":{"2":1,"3":3,"4":4}}"#);
        assert_eq!(
            serde_json::from_str::<InvariantPolynomial>(&json).unwrap(),
            p
        );
        assert_eq!(p.total(), 8);
        assert_eq!(p.multiset().len(), 8);
    }

    #[test]
    fn modulus_polynomial_argument() {
        let ModulusPolynomial(p) = "7:4u^6+4u".parse().unwrap();
        assert_eq!(p.ring().modulus(), 7);
        assert_eq!(p.coefficient(6), 4);
        assert!("4u^6".parse::<ModulusPolynomial>().is_err());
    }

    #[test]
    fn only_the_inverse_rule_survives_reidemeister_moves() {
        let b = builtins::z7_bracket();
        let closure = |strands, word: &[i32]| {
            LinkDiagram::build(&PdCode::from_braid(strands, word).unwrap()).unwrap()
        };
        // trefoil against a copy with a cancelling pair of crossings, and the
        // figure eight against a negative stabilisation
        let pairs = [
            (closure(2, &[1, 1, 1]), closure(2, &[1, 1, -1, 1, 1])),
            (closure(3, &[1, -2, 1, -2]), closure(4, &[1, -2, 1, -2, -3])),
        ];
        let values = |d: &LinkDiagram, rule| phi_multiset_with(d, &b, rule).unwrap();
        for (d, e) in &pairs {
            assert_eq!(
                values(d, NegativeRule::Inverse),
                values(e, NegativeRule::Inverse)
            );
            assert_ne!(
                values(d, NegativeRule::SwappedInverse),
                values(e, NegativeRule::SwappedInverse)
            );
        }
    }
}
