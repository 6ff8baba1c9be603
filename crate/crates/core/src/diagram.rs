//! Oriented link diagrams from PD codes.
//!
//! A crossing `X(i,j,k,l)` lists its four edge labels counterclockwise,
//! starting at the incoming under-strand, so the under-strand runs `i -> k`.
//! Over-strand directions are propagated along components from the
//! under-strands; components that never pass under fall back to ascending
//! labels.
//!
//! Corner `k` of a crossing is the region between positions `k` and `k + 1`.
//! Regions are recovered as orbits of the corner successor map, and each
//! crossing names four of them by role: `a` lies left of both strands, `d`
//! right of both, and `b`, `c` are the regions behind and ahead of the
//! crossing (behind first at positive crossings, ahead first at negative
//! ones). The coloring rule is `[a,b,c] = d`.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::OnceLock;

use regex::Regex;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::unionfind::UnionFind;

/// Largest crossing count for which all 2^c smoothing states are visited.
pub const STATE_GUARD: usize = 24;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PdCode {
    crossings: Vec<[u32; 4]>,
    /// Crossingless components, declared with `U(k)`.
    loops: usize,
}

impl PdCode {
    pub fn new(crossings: Vec<[u32; 4]>, loops: usize) -> Result<Self> {
        if crossings.is_empty() && loops == 0 {
            return Err(Error::Pd(
                "a diagram without crossings needs a U(k) marker".into(),
            ));
        }
        let mut counts: BTreeMap<u32, usize> = BTreeMap::new();
        for x in &crossings {
            for &e in x {
                *counts.entry(e).or_default() += 1;
            }
        }
        if let Some((&label, &count)) = counts.iter().find(|(_, &c)| c != 2) {
            return Err(Error::Pd(format!(
                "edge {label} appears {count} time(s), expected exactly 2"
            )));
        }
        debug_assert_eq!(counts.len(), 2 * crossings.len());
        Ok(PdCode { crossings, loops })
    }

    pub fn crossings(&self) -> &[[u32; 4]] {
        &self.crossings
    }

    pub fn crossing_count(&self) -> usize {
        self.crossings.len()
    }

    pub fn edge_count(&self) -> usize {
        2 * self.crossings.len()
    }

    pub fn crossingless_loops(&self) -> usize {
        self.loops
    }

    /// Edge labels of each component with crossings, each sorted, ordered
    /// by smallest label.
    pub fn components(&self) -> Vec<Vec<u32>> {
        let labels = self.labels();
        let index: HashMap<u32, usize> = labels.iter().enumerate().map(|(i, &e)| (e, i)).collect();
        let mut uf = UnionFind::new(labels.len());
        for x in &self.crossings {
            uf.union(index[&x[0]], index[&x[2]]);
            uf.union(index[&x[1]], index[&x[3]]);
        }
        let mut groups: BTreeMap<usize, Vec<u32>> = BTreeMap::new();
        for (i, &e) in labels.iter().enumerate() {
            groups.entry(uf.find(i)).or_default().push(e);
        }
        let mut comps: Vec<Vec<u32>> = groups.into_values().collect();
        comps.sort_by_key(|c| c[0]);
        comps
    }

    /// Total number of link components, crossingless loops included.
    pub fn component_count(&self) -> usize {
        self.components().len() + self.loops
    }

    /// Per-component `(min, max)` label ranges.
    pub fn component_edge_ranges(&self) -> Vec<(u32, u32)> {
        self.components()
            .iter()
            .map(|c| (c[0], *c.last().expect("non-empty component")))
            .collect()
    }

    fn labels(&self) -> Vec<u32> {
        let mut labels: Vec<u32> = self.crossings.iter().flatten().copied().collect();
        labels.sort_unstable();
        labels.dedup();
        labels
    }

    /// Closure of a braid word on `strands` strands. Generator `i` (1-based)
    /// crosses strands `i` and `i+1` positively, `-i` negatively. Labels
    /// are assigned so each component runs through ascending labels.
    pub fn from_braid(strands: usize, word: &[i32]) -> Result<Self> {
        if strands == 0 {
            return Err(Error::Pd("a braid needs at least one strand".into()));
        }
        let mut next = strands as u32;
        let mut position: Vec<u32> = (0..strands as u32).collect();
        let mut raw: Vec<[u32; 4]> = Vec::with_capacity(word.len());
        let mut incoming: Vec<[usize; 2]> = Vec::with_capacity(word.len());
        for &g in word {
            let i = g.unsigned_abs() as usize;
            if i == 0 || i >= strands {
                return Err(Error::Pd(format!(
                    "generator {g} out of range for {strands} strands"
                )));
            }
            let (left, right) = (position[i - 1], position[i]);
            let (new_left, new_right) = (next, next + 1);
            next += 2;
            if g > 0 {
                raw.push([right, new_right, new_left, left]);
                incoming.push([0, 3]);
            } else {
                raw.push([left, right, new_right, new_left]);
                incoming.push([0, 1]);
            }
            position[i - 1] = new_left;
            position[i] = new_right;
        }
        // closing arcs identify the top of each position with its bottom
        let mut alias: HashMap<u32, u32> = HashMap::new();
        let mut loops = 0;
        for (p, &top) in position.iter().enumerate() {
            if top == p as u32 {
                loops += 1;
            } else {
                alias.insert(top, p as u32);
            }
        }
        let crossings: Vec<[u32; 4]> = raw
            .iter()
            .map(|x| x.map(|e| *alias.get(&e).unwrap_or(&e)))
            .collect();
        Ok(PdCode {
            crossings: relabel_ascending(&crossings, &incoming),
            loops,
        })
    }

    /// The same diagram with every crossing switched, orientation kept.
    pub fn mirror(&self) -> Result<PdCode> {
        // restarting each tuple at the incoming over end swaps over and
        // under while the planar picture stays fixed
        let diagram = LinkDiagram::build(self)?;
        let crossings = diagram
            .crossings()
            .iter()
            .map(|x| {
                let l = x.labels;
                let o = x.over_in;
                [l[o], l[(o + 1) % 4], l[(o + 2) % 4], l[(o + 3) % 4]]
            })
            .collect();
        Ok(PdCode {
            crossings,
            loops: self.loops,
        })
    }
}

/// Relabels braid-closure edges so that each component is a run of
/// consecutive labels in travel order, starting from 1. `incoming` gives the
/// two incoming positions of each crossing.
fn relabel_ascending(crossings: &[[u32; 4]], incoming: &[[usize; 2]]) -> Vec<[u32; 4]> {
    let mut successor: BTreeMap<u32, u32> = BTreeMap::new();
    for (x, inc) in crossings.iter().zip(incoming) {
        for &p in inc {
            successor.insert(x[p], x[(p + 2) % 4]);
        }
    }
    let mut labels: HashMap<u32, u32> = HashMap::new();
    let mut next = 1u32;
    for &start in successor.keys() {
        if labels.contains_key(&start) {
            continue;
        }
        let mut e = start;
        loop {
            labels.insert(e, next);
            next += 1;
            e = successor[&e];
            if e == start {
                break;
            }
        }
    }
    crossings.iter().map(|x| x.map(|e| labels[&e])).collect()
}

impl fmt::Display for PdCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = self
            .crossings
            .iter()
            .map(|x| format!("X[{},{},{},{}]", x[0], x[1], x[2], x[3]))
            .collect();
        if self.loops > 0 {
            parts.push(format!("U[{}]", self.loops));
        }
        f.write_str(&parts.join(", "))
    }
}

/// Parses `X(a,b,c,d)` / `X[a,b,c,d]` lists (optionally wrapped in
/// `PD[...]`), nested quadruple lists such as `[[1,5,2,4],...]` or
/// `{{1,5,2,4},...}`, and `U(k)` markers for crossingless loops.
pub fn parse_pd(text: &str) -> Result<PdCode> {
    static ITEM: OnceLock<Regex> = OnceLock::new();
    let item = ITEM
        .get_or_init(|| Regex::new(r"([XUxu])\s*[\(\[]([^\)\]]*)[\)\]]").expect("static regex"));

    let trimmed = text.trim();
    let mut crossings = Vec::new();
    let mut loops = 0usize;

    if item.is_match(trimmed) {
        let mut rest = item.replace_all(trimmed, "").to_string();
        for m in item.captures_iter(trimmed) {
            let values = parse_numbers(&m[2])?;
            match &m[1] {
                "X" | "x" => crossings.push(quadruple(&values, &m[0])?),
                _ => {
                    if values.len() != 1 {
                        return Err(Error::Pd(format!("{} must carry one count", &m[0])));
                    }
                    loops += values[0] as usize;
                }
            }
        }
        rest.retain(|c| !c.is_whitespace() && !",;[]PDpd".contains(c));
        if !rest.is_empty() {
            return Err(Error::Pd(format!("unexpected text {rest:?}")));
        }
    } else if !trimmed.is_empty() {
        let normalized = trimmed.replace('{', "[").replace('}', "]");
        let nested: Vec<Vec<i64>> = serde_json::from_str(&normalized)
            .map_err(|e| Error::Pd(format!("cannot read quadruple list: {e}")))?;
        for q in nested {
            let values = q
                .into_iter()
                .map(|v| u32::try_from(v).map_err(|_| Error::Pd(format!("bad label {v}"))))
                .collect::<Result<Vec<u32>>>()?;
            crossings.push(quadruple(&values, &format!("{values:?}"))?);
        }
    }
    PdCode::new(crossings, loops)
}

fn parse_numbers(body: &str) -> Result<Vec<u32>> {
    body.split(|c: char| c == ',' || c.is_whitespace())
        .filter(|s| !s.is_empty())
        .map(|s| {
            s.parse::<u32>()
                .map_err(|_| Error::Pd(format!("bad label {s:?}")))
        })
        .collect()
}

fn quadruple(values: &[u32], source: &str) -> Result<[u32; 4]> {
    <[u32; 4]>::try_from(values)
        .map_err(|_| Error::Pd(format!("{source} has {} labels, expected 4", values.len())))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Sign {
    Positive,
    Negative,
}

impl Sign {
    pub fn value(self) -> i32 {
        match self {
            Sign::Positive => 1,
            Sign::Negative => -1,
        }
    }
}

/// One of the two smoothings of a crossing.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Smoothing {
    /// Joins each incoming end to the outgoing end of the other strand.
    Oriented,
    /// Joins the two incoming ends and the two outgoing ends.
    Disoriented,
}

/// Region roles at a crossing.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Roles {
    pub a: usize,
    pub b: usize,
    pub c: usize,
    pub d: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Crossing {
    pub labels: [u32; 4],
    pub sign: Sign,
    /// Position (0 or 2) of the incoming under-strand end.
    pub under_in: usize,
    /// Position (1 or 3) of the incoming over-strand end.
    pub over_in: usize,
    /// Face index of each corner; corner `k` sits between positions `k`
    /// and `k + 1`.
    pub corner_faces: [usize; 4],
    pub roles: Roles,
}

impl Crossing {
    /// Position pairs joined by a smoothing.
    pub fn smoothing_pairs(&self, smoothing: Smoothing) -> [(usize, usize); 2] {
        let (ui, oi) = (self.under_in, self.over_in);
        let (uo, oo) = ((ui + 2) % 4, (oi + 2) % 4);
        match smoothing {
            Smoothing::Oriented => [(ui, oo), (oi, uo)],
            Smoothing::Disoriented => [(ui, oi), (uo, oo)],
        }
    }
}

/// A region of the diagram as the corners it touches.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Face {
    /// `(crossing, corner)` pairs in traversal order; empty for the inside
    /// of a crossingless loop or the plane around a crossingless diagram.
    pub corners: Vec<(usize, usize)>,
}

#[derive(Clone, Debug)]
pub struct LinkDiagram {
    pd: PdCode,
    reversed: Vec<bool>,
    crossings: Vec<Crossing>,
    faces: Vec<Face>,
    components: Vec<Vec<u32>>,
    edge_index: HashMap<u32, usize>,
    positive: usize,
    negative: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SmoothingState {
    pub choices: Vec<Smoothing>,
    pub loops: usize,
}

impl LinkDiagram {
    /// Builds the diagram with the orientation implied by the PD code.
    pub fn build(pd: &PdCode) -> Result<Self> {
        Self::with_reversed(pd, &[])
    }

    /// Builds the diagram with the components whose bit is set in `mask`
    /// reversed (bit `i` for the `i`-th component of [`PdCode::components`]).
    pub fn with_orientation_mask(pd: &PdCode, mask: u64) -> Result<Self> {
        let count = pd.components().len();
        let reversed: Vec<bool> = (0..count).map(|i| mask >> i & 1 == 1).collect();
        Self::with_reversed(pd, &reversed)
    }

    pub fn with_reversed(pd: &PdCode, reversed: &[bool]) -> Result<Self> {
        let components = pd.components();
        let mut flags = vec![false; components.len()];
        for (i, &r) in reversed.iter().enumerate() {
            if i >= flags.len() {
                if r {
                    return Err(Error::Diagram(format!(
                        "orientation override for component {} but only {} exist",
                        i + 1,
                        flags.len()
                    )));
                }
                continue;
            }
            flags[i] = r;
        }
        let edge_index: HashMap<u32, usize> = pd
            .labels()
            .into_iter()
            .enumerate()
            .map(|(i, e)| (e, i))
            .collect();
        let component_of: HashMap<u32, usize> = components
            .iter()
            .enumerate()
            .flat_map(|(ci, c)| c.iter().map(move |&e| (e, ci)))
            .collect();

        let incoming = orient(pd, &components)?;
        let n = pd.crossings.len();
        let mut crossings = Vec::with_capacity(n);
        for (ci, x) in pd.crossings.iter().enumerate() {
            let mut under_in = if incoming[ci][0] { 0 } else { 2 };
            let mut over_in = if incoming[ci][1] { 1 } else { 3 };
            if flags[component_of[&x[0]]] {
                under_in = (under_in + 2) % 4;
            }
            if flags[component_of[&x[1]]] {
                over_in = (over_in + 2) % 4;
            }
            let sign = if (over_in + 4 - under_in) % 4 == 3 {
                Sign::Positive
            } else {
                Sign::Negative
            };
            crossings.push(Crossing {
                labels: *x,
                sign,
                under_in,
                over_in,
                corner_faces: [0; 4],
                roles: Roles {
                    a: 0,
                    b: 0,
                    c: 0,
                    d: 0,
                },
            });
        }

        let faces = compute_faces(pd, &mut crossings)?;
        for x in crossings.iter_mut() {
            x.roles = roles(x);
        }
        let positive = crossings
            .iter()
            .filter(|x| x.sign == Sign::Positive)
            .count();
        Ok(LinkDiagram {
            pd: pd.clone(),
            reversed: flags,
            negative: n - positive,
            positive,
            crossings,
            faces,
            components,
            edge_index,
        })
    }

    pub fn pd(&self) -> &PdCode {
        &self.pd
    }

    pub fn crossings(&self) -> &[Crossing] {
        &self.crossings
    }

    pub fn faces(&self) -> &[Face] {
        &self.faces
    }

    pub fn face_count(&self) -> usize {
        self.faces.len()
    }

    pub fn positive_count(&self) -> usize {
        self.positive
    }

    pub fn negative_count(&self) -> usize {
        self.negative
    }

    pub fn writhe(&self) -> i64 {
        self.positive as i64 - self.negative as i64
    }

    /// Components with crossings plus crossingless loops.
    pub fn component_count(&self) -> usize {
        self.components.len() + self.pd.loops
    }

    /// Which components (in [`PdCode::components`] order) are reversed
    /// relative to the PD code.
    pub fn reversed(&self) -> &[bool] {
        &self.reversed
    }

    /// Edge labels of each component in direction of travel.
    pub fn component_paths(&self) -> Vec<Vec<u32>> {
        // at the crossing where edge e arrives, the strand leaves on the
        // opposite position
        let mut successor: HashMap<u32, u32> = HashMap::new();
        for x in &self.crossings {
            for inc in [x.under_in, x.over_in] {
                successor.insert(x.labels[inc], x.labels[(inc + 2) % 4]);
            }
        }
        self.components
            .iter()
            .map(|comp| {
                let start = comp[0];
                let mut path = vec![start];
                let mut e = successor[&start];
                while e != start {
                    path.push(e);
                    e = successor[&e];
                }
                path
            })
            .collect()
    }

    /// Joins edge ends according to `choices` and counts the closed loops,
    /// crossingless components included.
    pub fn smooth(&self, choices: &[Smoothing]) -> Result<SmoothingState> {
        if choices.len() != self.crossings.len() {
            return Err(Error::Diagram(format!(
                "{} smoothing choices for {} crossings",
                choices.len(),
                self.crossings.len()
            )));
        }
        let mut uf = UnionFind::new(self.edge_index.len());
        for (x, &s) in self.crossings.iter().zip(choices) {
            for (p, q) in x.smoothing_pairs(s) {
                uf.union(self.edge_index[&x.labels[p]], self.edge_index[&x.labels[q]]);
            }
        }
        Ok(SmoothingState {
            choices: choices.to_vec(),
            loops: uf.count() + self.pd.loops,
        })
    }

    fn check_state_guard(&self) -> Result<()> {
        if self.crossings.len() > STATE_GUARD {
            return Err(Error::BoundExceeded {
                what: "smoothing states (crossings)",
                requested: self.crossings.len(),
                bound: STATE_GUARD,
            });
        }
        Ok(())
    }

    /// All 2^c states; bit `i` of the state index selects the disoriented
    /// smoothing at crossing `i`.
    pub fn enumerate_states(&self) -> Result<impl Iterator<Item = SmoothingState> + '_> {
        self.check_state_guard()?;
        let c = self.crossings.len();
        Ok((0u64..1 << c).map(move |s| {
            let choices: Vec<Smoothing> = (0..c)
                .map(|i| {
                    if s >> i & 1 == 1 {
                        Smoothing::Disoriented
                    } else {
                        Smoothing::Oriented
                    }
                })
                .collect();
            self.smooth(&choices).expect("one choice per crossing")
        }))
    }

    /// Loop count of every state, indexed like [`LinkDiagram::enumerate_states`].
    pub fn state_loop_counts(&self) -> Result<Vec<u32>> {
        self.check_state_guard()?;
        let c = self.crossings.len();
        let pairs: Vec<[[(usize, usize); 2]; 2]> = self
            .crossings
            .iter()
            .map(|x| {
                [Smoothing::Oriented, Smoothing::Disoriented].map(|s| {
                    x.smoothing_pairs(s).map(|(p, q)| {
                        (self.edge_index[&x.labels[p]], self.edge_index[&x.labels[q]])
                    })
                })
            })
            .collect();
        let edges = self.edge_index.len();
        let loops = self.pd.loops as u32;
        let mut uf = UnionFind::new(edges);
        Ok((0u64..1 << c)
            .map(|s| {
                uf.reset();
                for (i, p) in pairs.iter().enumerate() {
                    for &(x, y) in &p[(s >> i & 1) as usize] {
                        uf.union(x, y);
                    }
                }
                uf.count() as u32 + loops
            })
            .collect())
    }

    /// Stable JSON-friendly description of faces, signs and roles.
    pub fn dump(&self) -> DiagramDump {
        DiagramDump {
            pd: self.pd.to_string(),
            components: self.component_paths(),
            crossingless_loops: self.pd.loops,
            writhe: self.writhe(),
            crossings: self
                .crossings
                .iter()
                .map(|x| CrossingDump {
                    labels: x.labels,
                    sign: x.sign.value(),
                    under: [x.labels[x.under_in], x.labels[(x.under_in + 2) % 4]],
                    over: [x.labels[x.over_in], x.labels[(x.over_in + 2) % 4]],
                    roles: x.roles,
                })
                .collect(),
            faces: self.faces.iter().map(|f| f.corners.clone()).collect(),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct DiagramDump {
    pub pd: String,
    pub components: Vec<Vec<u32>>,
    pub crossingless_loops: usize,
    pub writhe: i64,
    pub crossings: Vec<CrossingDump>,
    pub faces: Vec<Vec<(usize, usize)>>,
}

#[derive(Clone, Debug, Serialize)]
pub struct CrossingDump {
    pub labels: [u32; 4],
    pub sign: i32,
    /// `[incoming, outgoing]` edge labels.
    pub under: [u32; 2],
    pub over: [u32; 2],
    pub roles: Roles,
}

/// `incoming[c][p]` is true when the edge at position `p` of crossing `c`
/// points into the crossing.
fn orient(pd: &PdCode, components: &[Vec<u32>]) -> Result<Vec<[bool; 4]>> {
    let n = pd.crossings.len();
    let mut occurrences: HashMap<u32, Vec<(usize, usize)>> = HashMap::new();
    for (c, x) in pd.crossings.iter().enumerate() {
        for (p, &e) in x.iter().enumerate() {
            occurrences.entry(e).or_default().push((c, p));
        }
    }
    let mut state: Vec<[Option<bool>; 4]> = vec![[None; 4]; n];
    let mut queue: Vec<(usize, usize, bool)> = Vec::new();
    for c in 0..n {
        queue.push((c, 0, true));
    }

    let propagate =
        |state: &mut Vec<[Option<bool>; 4]>, queue: &mut Vec<(usize, usize, bool)>| -> Result<()> {
            while let Some((c, p, inc)) = queue.pop() {
                match state[c][p] {
                    Some(v) if v == inc => continue,
                    Some(_) => {
                        return Err(Error::Pd(format!(
                            "inconsistent orientation at edge {}",
                            pd.crossings[c][p]
                        )))
                    }
                    None => state[c][p] = Some(inc),
                }
                queue.push((c, (p + 2) % 4, !inc));
                let e = pd.crossings[c][p];
                for &(c2, p2) in &occurrences[&e] {
                    if (c2, p2) != (c, p) {
                        queue.push((c2, p2, !inc));
                    }
                }
            }
            Ok(())
        };
    propagate(&mut state, &mut queue)?;

    // components that only ever pass over: orient by ascending labels
    for comp in components {
        let first = comp[0];
        let (c, p) = occurrences[&first][0];
        if state[c][p].is_some() {
            continue;
        }
        let second = if comp.len() > 1 { comp[1] } else { first };
        let head = occurrences[&first]
            .iter()
            .copied()
            .find(|&(c, p)| pd.crossings[c][(p + 2) % 4] == second)
            .unwrap_or(occurrences[&first][0]);
        queue.push((head.0, head.1, true));
        propagate(&mut state, &mut queue)?;
    }

    Ok(state
        .into_iter()
        .map(|s| s.map(|v| v.expect("every position oriented")))
        .collect())
}

/// Orbits of the corner successor map, per connected piece, with the outer
/// faces of separate pieces merged and crossingless loops appended.
fn compute_faces(pd: &PdCode, crossings: &mut [Crossing]) -> Result<Vec<Face>> {
    let n = pd.crossings.len();
    let mut other: HashMap<(usize, usize), (usize, usize)> = HashMap::new();
    {
        let mut seen: HashMap<u32, (usize, usize)> = HashMap::new();
        for (c, x) in pd.crossings.iter().enumerate() {
            for (p, &e) in x.iter().enumerate() {
                if let Some(&first) = seen.get(&e) {
                    other.insert(first, (c, p));
                    other.insert((c, p), first);
                } else {
                    seen.insert(e, (c, p));
                }
            }
        }
    }

    let mut face_of = vec![[usize::MAX; 4]; n];
    let mut faces: Vec<Face> = Vec::new();
    for c in 0..n {
        for k in 0..4 {
            if face_of[c][k] != usize::MAX {
                continue;
            }
            let id = faces.len();
            let mut corners = Vec::new();
            let (mut cc, mut kk) = (c, k);
            while face_of[cc][kk] == usize::MAX {
                face_of[cc][kk] = id;
                corners.push((cc, kk));
                // leave along the edge at position k+1; the face continues at
                // the corner that starts at the arrival position
                (cc, kk) = other[&(cc, (kk + 1) % 4)];
            }
            if (cc, kk) != (c, k) {
                return Err(Error::Diagram(
                    "corner successor map is not a permutation".into(),
                ));
            }
            faces.push(Face { corners });
        }
    }

    // connected pieces of the 4-valent graph
    let mut uf = UnionFind::new(n);
    for (&(c1, _), &(c2, _)) in &other {
        uf.union(c1, c2);
    }
    let mut pieces: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for c in 0..n {
        pieces.entry(uf.find(c)).or_default().push(c);
    }
    let mut remap: Vec<usize> = (0..faces.len()).collect();
    let mut outer: Option<usize> = None;
    for members in pieces.values() {
        let mut piece_faces: Vec<usize> = members
            .iter()
            .flat_map(|&c| face_of[c].iter().copied())
            .collect();
        piece_faces.sort_unstable();
        piece_faces.dedup();
        if piece_faces.len() != members.len() + 2 {
            return Err(Error::Diagram(format!(
                "non-planar PD code: {} faces for {} crossings",
                piece_faces.len(),
                members.len()
            )));
        }
        let largest = *piece_faces
            .iter()
            .max_by_key(|&&f| (faces[f].corners.len(), std::cmp::Reverse(f)))
            .expect("piece has faces");
        match outer {
            None => outer = Some(largest),
            Some(o) => remap[largest] = o,
        }
    }
    let mut merged: Vec<Face> = Vec::new();
    let mut new_id: HashMap<usize, usize> = HashMap::new();
    for f in 0..faces.len() {
        let target = remap[f];
        let id = *new_id.entry(target).or_insert_with(|| {
            merged.push(Face {
                corners: Vec::new(),
            });
            merged.len() - 1
        });
        merged[id].corners.extend(faces[f].corners.iter().copied());
    }
    for (c, x) in crossings.iter_mut().enumerate() {
        for k in 0..4 {
            x.corner_faces[k] = new_id[&remap[face_of[c][k]]];
        }
    }
    if n == 0 {
        // the plane around the loops
        merged.push(Face {
            corners: Vec::new(),
        });
    }
    for _ in 0..pd.loops {
        merged.push(Face {
            corners: Vec::new(),
        });
    }
    Ok(merged)
}

fn roles(x: &Crossing) -> Roles {
    let (ui, oi) = (x.under_in, x.over_in);
    let (uo, oo) = ((ui + 2) % 4, (oi + 2) % 4);
    let left_of = |k: usize, out: usize| k == out || k == (out + 1) % 4;
    let corner_between = |p: usize, q: usize| if (p + 1) % 4 == q { p } else { q };
    let mut a = 0;
    let mut d = 0;
    for k in 0..4 {
        match (left_of(k, uo), left_of(k, oo)) {
            (true, true) => a = k,
            (false, false) => d = k,
            _ => {}
        }
    }
    let behind = corner_between(ui, oi);
    let ahead = corner_between(uo, oo);
    let (b, c) = match x.sign {
        Sign::Positive => (behind, ahead),
        Sign::Negative => (ahead, behind),
    };
    let f = x.corner_faces;
    Roles {
        a: f[a],
        b: f[b],
        c: f[c],
        d: f[d],
    }
}
