//! Tribracket brackets: pairs of unit-valued coefficient tensors `(A, B)`
//! over Z/m satisfying the loop-value and skein conditions.

use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ring::{ModulusRing, RingElement};
use crate::tribracket::{write_matrices, Tribracket};

/// Largest tribracket size accepted by [`search_brackets`].
pub const SEARCH_HARD_BOUND: usize = 3;
/// Sizes above this are searched with a warning.
pub const SEARCH_DEFAULT_BOUND: usize = 2;

/// A coefficient tensor indexed like the tribracket tensor.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CoefficientTensor {
    ring: ModulusRing,
    size: usize,
    values: Vec<u32>,
}

impl CoefficientTensor {
    /// Reads a one-based-indexed nested tensor; entries are reduced mod m.
    pub fn from_tensor(ring: ModulusRing, tensor: &[Vec<Vec<i64>>]) -> Result<Self> {
        let n = tensor.len();
        if n == 0 {
            return Err(Error::MalformedTensor("empty coefficient tensor".into()));
        }
        let mut values = Vec::with_capacity(n * n * n);
        for matrix in tensor {
            if matrix.len() != n || matrix.iter().any(|row| row.len() != n) {
                return Err(Error::MalformedTensor(format!(
                    "coefficient tensor is not {n}x{n}x{n}"
                )));
            }
            for row in matrix {
                values.extend(row.iter().map(|&v| ring.elem(v).value()));
            }
        }
        Ok(CoefficientTensor {
            ring,
            size: n,
            values,
        })
    }

    pub fn from_fn(ring: ModulusRing, n: usize, f: impl Fn(usize, usize, usize) -> i64) -> Self {
        let mut values = Vec::with_capacity(n * n * n);
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    values.push(ring.elem(f(a, b, c)).value());
                }
            }
        }
        CoefficientTensor {
            ring,
            size: n,
            values,
        }
    }

    fn from_raw(ring: ModulusRing, size: usize, values: Vec<u32>) -> Self {
        CoefficientTensor { ring, size, values }
    }

    pub fn ring(&self) -> ModulusRing {
        self.ring
    }

    pub fn size(&self) -> usize {
        self.size
    }

    /// Zero-based lookup.
    #[inline]
    pub fn get(&self, a: usize, b: usize, c: usize) -> RingElement {
        self.ring.elem(self.raw(a, b, c) as i64)
    }

    #[inline]
    fn raw(&self, a: usize, b: usize, c: usize) -> u32 {
        self.values[(a * self.size + b) * self.size + c]
    }

    /// Residues in row-major order.
    pub fn values(&self) -> &[u32] {
        &self.values
    }

    pub fn to_tensor(&self) -> Vec<Vec<Vec<u32>>> {
        let n = self.size;
        (0..n)
            .map(|a| {
                (0..n)
                    .map(|b| (0..n).map(|c| self.raw(a, b, c)).collect())
                    .collect()
            })
            .collect()
    }

    /// First entry that is not a unit, as a one-based triple.
    pub fn first_non_unit(&self) -> Option<([usize; 3], u32)> {
        let n = self.size;
        self.values.iter().enumerate().find_map(|(i, &v)| {
            if self.ring.elem(v as i64).is_unit() {
                None
            } else {
                Some(([i / (n * n) + 1, (i / n) % n + 1, i % n + 1], v))
            }
        })
    }
}

impl fmt::Debug for CoefficientTensor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?} over {}", self.to_tensor(), self.ring)
    }
}

impl fmt::Display for CoefficientTensor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_matrices(f, self.size, |a, b, c| self.raw(a, b, c).to_string())
    }
}

/// Which form of the fourth skein equation to check.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SkeinVariant {
    /// Four right-hand terms, mirroring the fifth equation.
    #[default]
    Corrected,
    /// The five-term form with the repeated `A A B` term.
    AsPrinted,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum SkeinEquation {
    #[serde(rename = "ii.i")]
    First,
    #[serde(rename = "ii.ii")]
    Second,
    #[serde(rename = "ii.iii")]
    Third,
    #[serde(rename = "ii.iv")]
    Fourth,
    #[serde(rename = "ii.v")]
    Fifth,
}

impl SkeinEquation {
    pub const ALL: [SkeinEquation; 5] = [
        SkeinEquation::First,
        SkeinEquation::Second,
        SkeinEquation::Third,
        SkeinEquation::Fourth,
        SkeinEquation::Fifth,
    ];
}

impl fmt::Display for SkeinEquation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            SkeinEquation::First => "ii.i",
            SkeinEquation::Second => "ii.ii",
            SkeinEquation::Third => "ii.iii",
            SkeinEquation::Fourth => "ii.iv",
            SkeinEquation::Fifth => "ii.v",
        };
        f.write_str(s)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SkeinViolation {
    pub equation: SkeinEquation,
    /// One-based `(a, b, c, d)`.
    pub witness: [usize; 4],
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct BracketAxiomReport {
    pub valid: bool,
    pub variant: SkeinVariant,
    pub units_ok: bool,
    pub delta_ok: bool,
    pub w_ok: bool,
    /// Residue of δ when it is constant.
    pub delta: Option<u32>,
    /// Residue of w when it is constant.
    pub w: Option<u32>,
    pub skein_violations: Vec<SkeinViolation>,
}

/// δ = -A B⁻¹ - A⁻¹ B, required to be the same for every triple.
pub fn derive_delta(a: &CoefficientTensor, b: &CoefficientTensor) -> Result<RingElement> {
    check_pair(a, b)?;
    let n = a.size;
    let mut first: Option<([usize; 3], RingElement)> = None;
    for x in 0..n {
        for y in 0..n {
            for z in 0..n {
                let value = loop_value(a.get(x, y, z), b.get(x, y, z))?;
                match first {
                    None => first = Some(([x + 1, y + 1, z + 1], value)),
                    Some((triple, v)) if v != value => {
                        return Err(Error::NotConstant {
                            quantity: "delta",
                            first: triple,
                            first_value: v.value(),
                            second: [x + 1, y + 1, z + 1],
                            second_value: value.value(),
                        })
                    }
                    _ => {}
                }
            }
        }
    }
    Ok(first.expect("non-empty tensor").1)
}

/// w = -A_{a,b,b}² B_{a,b,b}⁻¹, required to be the same for every `(a, b)`.
/// Also confirms the negative-kink value -A⁻² B equals w⁻¹.
pub fn derive_w(a: &CoefficientTensor, b: &CoefficientTensor) -> Result<RingElement> {
    check_pair(a, b)?;
    let n = a.size;
    let mut first: Option<([usize; 3], RingElement)> = None;
    for x in 0..n {
        for y in 0..n {
            let (ca, cb) = (a.get(x, y, y), b.get(x, y, y));
            let value = kink_value(ca, cb)?;
            let negative = -(ca.pow(-2)? * cb);
            if negative * value != a.ring.one() {
                return Err(Error::NotConstant {
                    quantity: "w inverse",
                    first: [x + 1, y + 1, y + 1],
                    first_value: value.value(),
                    second: [x + 1, y + 1, y + 1],
                    second_value: negative.value(),
                });
            }
            match first {
                None => first = Some(([x + 1, y + 1, y + 1], value)),
                Some((triple, v)) if v != value => {
                    return Err(Error::NotConstant {
                        quantity: "w",
                        first: triple,
                        first_value: v.value(),
                        second: [x + 1, y + 1, y + 1],
                        second_value: value.value(),
                    })
                }
                _ => {}
            }
        }
    }
    Ok(first.expect("non-empty tensor").1)
}

fn loop_value(a: RingElement, b: RingElement) -> Result<RingElement> {
    Ok(-(a * b.inv()?) - a.inv()? * b)
}

fn kink_value(a: RingElement, b: RingElement) -> Result<RingElement> {
    Ok(-(a * a * b.inv()?))
}

fn check_pair(a: &CoefficientTensor, b: &CoefficientTensor) -> Result<()> {
    if a.ring != b.ring {
        return Err(Error::ModulusMismatch {
            left: a.ring.modulus(),
            right: b.ring.modulus(),
        });
    }
    if a.size != b.size {
        return Err(Error::MalformedTensor(format!(
            "A has size {} but B has size {}",
            a.size, b.size
        )));
    }
    Ok(())
}

/// Residue arithmetic without per-element modulus bookkeeping.
#[derive(Clone, Copy)]
struct Zn(u64);

impl Zn {
    #[inline]
    fn mul(self, x: u64, y: u64) -> u64 {
        x * y % self.0
    }
    #[inline]
    fn mul3(self, x: u64, y: u64, z: u64) -> u64 {
        x * y % self.0 * z % self.0
    }
}

/// Triples feeding one quadruple's equations: L1, L2, L3 on the left and
/// R1, R2, R3 on the right, as flat tensor indices.
fn quadruple_triples(x: &Tribracket, a: usize, b: usize, c: usize, d: usize) -> [usize; 6] {
    let n = x.size();
    let idx = |p: usize, q: usize, r: usize| (p * n + q) * n + r;
    let abc = x.get(a, b, c);
    let acd = x.get(a, c, d);
    let abd = x.get(a, b, d);
    [
        idx(a, b, c),
        idx(c, abc, acd),
        idx(a, c, d),
        idx(b, abc, abd),
        idx(a, b, d),
        idx(d, abd, acd),
    ]
}

/// Evaluates one skein equation; `true` when it holds.
fn equation_holds(
    eq: SkeinEquation,
    variant: SkeinVariant,
    zn: Zn,
    delta: u64,
    a: &[u32],
    b: &[u32],
    t: &[usize; 6],
) -> bool {
    let av = |i: usize| a[t[i]] as u64;
    let bv = |i: usize| b[t[i]] as u64;
    let m = zn.0;
    match eq {
        SkeinEquation::First => zn.mul3(av(0), av(1), av(2)) == zn.mul3(av(3), av(4), av(5)),
        SkeinEquation::Second => zn.mul3(av(0), bv(1), bv(2)) == zn.mul3(bv(3), av(4), bv(5)),
        SkeinEquation::Third => zn.mul3(bv(0), bv(1), av(2)) == zn.mul3(av(3), bv(4), bv(5)),
        SkeinEquation::Fourth => {
            let lhs = zn.mul3(av(0), bv(1), av(2));
            let aab = zn.mul3(av(3), av(4), bv(5));
            let mut rhs = aab
                + zn.mul3(bv(3), av(4), av(5))
                + zn.mul(delta, zn.mul3(bv(3), av(4), bv(5)))
                + zn.mul3(bv(3), bv(4), bv(5));
            if variant == SkeinVariant::AsPrinted {
                rhs += aab;
            }
            lhs == rhs % m
        }
        SkeinEquation::Fifth => {
            let lhs = zn.mul3(av(0), av(1), bv(2))
                + zn.mul3(bv(0), av(1), av(2))
                + zn.mul(delta, zn.mul3(bv(0), av(1), bv(2)))
                + zn.mul3(bv(0), bv(1), bv(2));
            lhs % m == zn.mul3(av(3), bv(4), av(5))
        }
    }
}

/// Entries (A at `t` is `t`, B at `t` is `n³ + t`) read by one equation.
fn equation_entries(eq: SkeinEquation, cube: usize, t: &[usize; 6]) -> Vec<usize> {
    let a = |i: usize| t[i];
    let b = |i: usize| cube + t[i];
    match eq {
        SkeinEquation::First => vec![a(0), a(1), a(2), a(3), a(4), a(5)],
        SkeinEquation::Second => vec![a(0), b(1), b(2), b(3), a(4), b(5)],
        SkeinEquation::Third => vec![b(0), b(1), a(2), a(3), b(4), b(5)],
        SkeinEquation::Fourth => vec![a(0), b(1), a(2), a(3), a(4), a(5), b(3), b(4), b(5)],
        SkeinEquation::Fifth => vec![a(0), a(1), a(2), b(0), b(1), b(2), a(3), b(4), a(5)],
    }
}

/// Full axiom check of `(A, B)` over the tribracket `x`.
pub fn verify_bracket(
    x: &Tribracket,
    a: &CoefficientTensor,
    b: &CoefficientTensor,
    variant: SkeinVariant,
) -> BracketAxiomReport {
    let mut report = BracketAxiomReport {
        variant,
        ..Default::default()
    };
    if check_pair(a, b).is_err() || a.size != x.size() {
        return report;
    }
    report.units_ok = a.first_non_unit().is_none() && b.first_non_unit().is_none();
    if !report.units_ok {
        return report;
    }
    let delta = derive_delta(a, b).ok();
    let w = derive_w(a, b).ok();
    report.delta_ok = delta.is_some();
    report.w_ok = w.is_some();
    report.delta = delta.map(|d| d.value());
    report.w = w.map(|w| w.value());

    // without a constant δ the fourth and fifth equations are undefined; use
    // the value at (1,1,1) so the others still get reported
    let delta_value = match delta {
        Some(d) => d.value() as u64,
        None => loop_value(a.get(0, 0, 0), b.get(0, 0, 0))
            .map(|d| d.value() as u64)
            .unwrap_or(0),
    };
    let zn = Zn(a.ring.modulus() as u64);
    let n = x.size();
    for p in 0..n {
        for q in 0..n {
            for r in 0..n {
                for s in 0..n {
                    let t = quadruple_triples(x, p, q, r, s);
                    for eq in SkeinEquation::ALL {
                        if !equation_holds(eq, variant, zn, delta_value, &a.values, &b.values, &t) {
                            report.skein_violations.push(SkeinViolation {
                                equation: eq,
                                witness: [p + 1, q + 1, r + 1, s + 1],
                            });
                        }
                    }
                }
            }
        }
    }
    report.valid =
        report.units_ok && report.delta_ok && report.w_ok && report.skein_violations.is_empty();
    report
}

/// A verified tribracket bracket with its derived δ and w.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TribracketBracket {
    tribracket: Tribracket,
    a: CoefficientTensor,
    b: CoefficientTensor,
    delta: RingElement,
    w: RingElement,
    variant: SkeinVariant,
}

impl TribracketBracket {
    /// Checks units, δ/w constancy and the corrected skein equations.
    pub fn new(tribracket: Tribracket, a: CoefficientTensor, b: CoefficientTensor) -> Result<Self> {
        Self::with_variant(tribracket, a, b, SkeinVariant::Corrected)
    }

    pub fn with_variant(
        tribracket: Tribracket,
        a: CoefficientTensor,
        b: CoefficientTensor,
        variant: SkeinVariant,
    ) -> Result<Self> {
        check_pair(&a, &b)?;
        if a.size != tribracket.size() {
            return Err(Error::MalformedTensor(format!(
                "coefficients have size {} but the tribracket has size {}",
                a.size,
                tribracket.size()
            )));
        }
        for t in [&a, &b] {
            if let Some((_, value)) = t.first_non_unit() {
                return Err(Error::NonUnit {
                    value,
                    modulus: t.ring.modulus(),
                });
            }
        }
        let delta = derive_delta(&a, &b)?;
        let w = derive_w(&a, &b)?;
        let report = verify_bracket(&tribracket, &a, &b, variant);
        if !report.valid {
            return Err(Error::InvalidBracket(Box::new(report)));
        }
        Ok(TribracketBracket {
            tribracket,
            a,
            b,
            delta,
            w,
            variant,
        })
    }

    pub fn tribracket(&self) -> &Tribracket {
        &self.tribracket
    }

    pub fn ring(&self) -> ModulusRing {
        self.a.ring
    }

    pub fn a(&self) -> &CoefficientTensor {
        &self.a
    }

    pub fn b(&self) -> &CoefficientTensor {
        &self.b
    }

    pub fn delta(&self) -> RingElement {
        self.delta
    }

    pub fn w(&self) -> RingElement {
        self.w
    }

    pub fn variant(&self) -> SkeinVariant {
        self.variant
    }

    pub fn verify(&self) -> BracketAxiomReport {
        verify_bracket(&self.tribracket, &self.a, &self.b, self.variant)
    }
}

impl fmt::Display for TribracketBracket {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "tribracket:")?;
        write!(f, "{}", self.tribracket)?;
        writeln!(f, "A over {}:", self.ring())?;
        write!(f, "{}", self.a)?;
        writeln!(f, "B over {}:", self.ring())?;
        write!(f, "{}", self.b)?;
        write!(f, "delta = {}, w = {}", self.delta, self.w)
    }
}

/// The one-element bracket `A = a`, `B = a⁻¹`, a normalized Kauffman bracket.
pub fn make_kauffman(ring: ModulusRing, a: u32) -> Result<TribracketBracket> {
    let a = ring.elem(a as i64);
    let b = a.inv()?;
    TribracketBracket::new(
        Tribracket::trivial(),
        CoefficientTensor::from_fn(ring, 1, |_, _, _| a.value() as i64),
        CoefficientTensor::from_fn(ring, 1, |_, _, _| b.value() as i64),
    )
}

/// The bracket `A = B = phi`. Fails with [`Error::InvalidBracket`] (carrying
/// the report) when `phi` is not a 2-cocycle.
pub fn make_cocycle(
    x: &Tribracket,
    ring: ModulusRing,
    phi: impl Fn(usize, usize, usize) -> i64,
) -> Result<TribracketBracket> {
    let n = x.size();
    let coefficients = CoefficientTensor::from_fn(ring, n, phi);
    if let Some((_, value)) = coefficients.first_non_unit() {
        return Err(Error::NonUnit {
            value,
            modulus: ring.modulus(),
        });
    }
    let report = verify_bracket(x, &coefficients, &coefficients, SkeinVariant::Corrected);
    if !report.valid {
        return Err(Error::InvalidBracket(Box::new(report)));
    }
    TribracketBracket::new(x.clone(), coefficients.clone(), coefficients)
}

#[derive(Clone, Debug)]
pub struct SearchOptions {
    /// Keep only the first `limit` results in canonical order.
    pub limit: Option<usize>,
    /// Worker threads; `None` uses the global pool.
    pub workers: Option<usize>,
    /// With `false`, every full assignment is generated and checked (oracle
    /// mode).
    pub prune: bool,
    pub variant: SkeinVariant,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions {
            limit: None,
            workers: None,
            prune: true,
            variant: SkeinVariant::Corrected,
        }
    }
}

/// Every bracket on `x` over `ring`, sorted by the concatenated `(A, B)`
/// residues.
pub fn search_brackets(
    x: &Tribracket,
    ring: ModulusRing,
    options: &SearchOptions,
) -> Result<Vec<TribracketBracket>> {
    let n = x.size();
    if n > SEARCH_HARD_BOUND {
        return Err(Error::BoundExceeded {
            what: "bracket search tribracket size",
            requested: n,
            bound: SEARCH_HARD_BOUND,
        });
    }
    if n > SEARCH_DEFAULT_BOUND {
        log::warn!("searching brackets on a tribracket of size {n}; this is slow");
    }
    let plan = SearchPlan::new(x, ring, options.variant);
    let units: Vec<u32> = ring.units().iter().map(|u| u.value()).collect();

    // split the tree on the first two assigned entries
    let prefixes: Vec<[u32; 2]> = units
        .iter()
        .flat_map(|&p| units.iter().map(move |&q| [p, q]))
        .collect();
    let run = || -> Vec<(Vec<u32>, Vec<u32>)> {
        prefixes
            .par_iter()
            .flat_map_iter(|prefix| {
                let mut state = plan.start(&units);
                let mut found = Vec::new();
                state.seed(&plan, prefix, options.prune, &mut found);
                found
            })
            .collect()
    };
    let mut found = match options.workers {
        Some(workers) => rayon::ThreadPoolBuilder::new()
            .num_threads(workers.max(1))
            .build()
            .map_err(|e| Error::Io(std::io::Error::other(e)))?
            .install(run),
        None => run(),
    };
    found.sort();
    found.dedup();
    if let Some(limit) = options.limit {
        found.truncate(limit);
    }
    found
        .into_iter()
        .map(|(a, b)| {
            TribracketBracket::with_variant(
                x.clone(),
                CoefficientTensor::from_raw(ring, n, a),
                CoefficientTensor::from_raw(ring, n, b),
                options.variant,
            )
        })
        .collect()
}

/// Static part of the bracket search: entry order and the checks that
/// become decidable at each step.
struct SearchPlan<'a> {
    x: &'a Tribracket,
    ring: ModulusRing,
    variant: SkeinVariant,
    cube: usize,
    /// Entry assigned at each step.
    order: Vec<usize>,
    /// Pair (δ/w) checks keyed by step: the triple whose A and B are both set.
    pair_checks: Vec<Vec<usize>>,
    /// Skein checks keyed by step.
    skein_checks: Vec<Vec<(SkeinEquation, [usize; 6])>>,
}

impl<'a> SearchPlan<'a> {
    fn new(x: &'a Tribracket, ring: ModulusRing, variant: SkeinVariant) -> Self {
        let n = x.size();
        let cube = n * n * n;
        let degenerate: Vec<usize> = (0..n)
            .flat_map(|a| (0..n).map(move |b| (a * n + b) * n + b))
            .collect();
        let mut order: Vec<usize> = degenerate.clone();
        order.extend(degenerate.iter().map(|t| cube + t));
        for t in 0..cube {
            if !degenerate.contains(&t) {
                order.push(t);
                order.push(cube + t);
            }
        }
        let mut step_of = vec![0; 2 * cube];
        for (step, &entry) in order.iter().enumerate() {
            step_of[entry] = step;
        }
        let steps = 2 * cube;
        let mut pair_checks = vec![Vec::new(); steps];
        for t in 0..cube {
            pair_checks[step_of[t].max(step_of[cube + t])].push(t);
        }
        // δ is fixed once the first pair is complete
        let first_pair_step = (0..cube)
            .map(|t| step_of[t].max(step_of[cube + t]))
            .min()
            .unwrap_or(0);
        let mut skein_checks = vec![Vec::new(); steps];
        for p in 0..n {
            for q in 0..n {
                for r in 0..n {
                    for s in 0..n {
                        let t = quadruple_triples(x, p, q, r, s);
                        for eq in SkeinEquation::ALL {
                            let mut step = equation_entries(eq, cube, &t)
                                .into_iter()
                                .map(|e| step_of[e])
                                .max()
                                .unwrap_or(0);
                            if matches!(eq, SkeinEquation::Fourth | SkeinEquation::Fifth) {
                                step = step.max(first_pair_step);
                            }
                            skein_checks[step].push((eq, t));
                        }
                    }
                }
            }
        }
        SearchPlan {
            x,
            ring,
            variant,
            cube,
            order,
            pair_checks,
            skein_checks,
        }
    }

    fn start<'u>(&self, units: &'u [u32]) -> SearchState<'u> {
        SearchState {
            a: vec![0; self.cube],
            b: vec![0; self.cube],
            delta: None,
            w: None,
            units,
        }
    }
}

struct SearchState<'u> {
    a: Vec<u32>,
    b: Vec<u32>,
    delta: Option<u64>,
    w: Option<u64>,
    units: &'u [u32],
}

impl SearchState<'_> {
    fn set(&mut self, plan: &SearchPlan, step: usize, value: u32) {
        let entry = plan.order[step];
        if entry < plan.cube {
            self.a[entry] = value;
        } else {
            self.b[entry - plan.cube] = value;
        }
    }

    fn seed(
        &mut self,
        plan: &SearchPlan,
        prefix: &[u32; 2],
        prune: bool,
        found: &mut Vec<(Vec<u32>, Vec<u32>)>,
    ) {
        for (step, &value) in prefix.iter().enumerate() {
            self.set(plan, step, value);
            if prune && self.check(plan, step).is_none() {
                return;
            }
        }
        self.descend(plan, prefix.len(), prune, found);
    }

    fn descend(
        &mut self,
        plan: &SearchPlan,
        step: usize,
        prune: bool,
        found: &mut Vec<(Vec<u32>, Vec<u32>)>,
    ) {
        if step == plan.order.len() {
            self.leaf(plan, prune, found);
            return;
        }
        for i in 0..self.units.len() {
            let value = self.units[i];
            self.set(plan, step, value);
            if !prune {
                self.descend(plan, step + 1, prune, found);
                continue;
            }
            if let Some(saved) = self.check(plan, step) {
                self.descend(plan, step + 1, prune, found);
                (self.delta, self.w) = saved;
            }
        }
    }

    fn leaf(&self, plan: &SearchPlan, prune: bool, found: &mut Vec<(Vec<u32>, Vec<u32>)>) {
        if !prune {
            let n = plan.x.size();
            let a = CoefficientTensor::from_raw(plan.ring, n, self.a.clone());
            let b = CoefficientTensor::from_raw(plan.ring, n, self.b.clone());
            if !verify_bracket(plan.x, &a, &b, plan.variant).valid {
                return;
            }
        }
        found.push((self.a.clone(), self.b.clone()));
    }

    /// Runs the checks decidable at `step`. On success returns the previous
    /// `(delta, w)` so the caller can restore them when backtracking.
    fn check(&mut self, plan: &SearchPlan, step: usize) -> Option<(Option<u64>, Option<u64>)> {
        let saved = (self.delta, self.w);
        let ring = plan.ring;
        let n = plan.x.size();
        for &t in &plan.pair_checks[step] {
            let (ca, cb) = (ring.elem(self.a[t] as i64), ring.elem(self.b[t] as i64));
            let d = loop_value(ca, cb).ok()?.value() as u64;
            match self.delta {
                None => self.delta = Some(d),
                Some(v) if v != d => {
                    (self.delta, self.w) = saved;
                    return None;
                }
                _ => {}
            }
            let (bb, cc) = ((t / n) % n, t % n);
            if bb == cc {
                let kink = kink_value(ca, cb).ok()?.value() as u64;
                match self.w {
                    None => self.w = Some(kink),
                    Some(v) if v != kink => {
                        (self.delta, self.w) = saved;
                        return None;
                    }
                    _ => {}
                }
            }
        }
        let zn = Zn(ring.modulus() as u64);
        let delta = self.delta.unwrap_or(0);
        for (eq, t) in &plan.skein_checks[step] {
            if !equation_holds(*eq, plan.variant, zn, delta, &self.a, &self.b, t) {
                (self.delta, self.w) = saved;
                return None;
            }
        }
        Some(saved)
    }
}
