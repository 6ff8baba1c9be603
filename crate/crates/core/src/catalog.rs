//! Embedded corpus of named PD codes and expected invariant tables.
//!
//! Entries live one per file under `assets/catalog` as `key: value` lines:
//!
//! ```text
//! name: 3_1
//! pd: X[1,5,2,4], X[3,1,4,6], X[5,3,6,2]
//! components: 1
//! tags: knot
//! ```
//!
//! Optional keys are `orientation` (one 0/1 flag per component, 1 reverses
//! it), `braid` (`strands | word`, a second presentation as a braid closure;
//! when `pd` is absent the closure is the PD code) and `pair` (fixture group:
//! all members of a group are diagrams of the same oriented link).
//!
//! Expected tables live under `assets/tables`, one `name: polynomial` line per row; a row may end in `| printed <text>` when
//! the printed source cell differs from the value compared against.
//!
//! Setting `TRIBRACKET_CATALOG` to a directory with the same layout replaces
//! the embedded files of whichever subdirectory it provides.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::path::Path;

use crate::diagram::{parse_pd, LinkDiagram, PdCode};
use crate::error::{Error, Result};
use crate::invariant::InvariantPolynomial;
use crate::ring::ModulusRing;

include!(concat!(env!("OUT_DIR"), "/embedded_assets.rs"));

pub const CATALOG_ENV: &str = "TRIBRACKET_CATALOG";

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CatalogEntry {
    pub name: String,
    pub pd: PdCode,
    pub components: usize,
    /// Per-component reversal flags applied on top of the PD orientation.
    pub default_orientation: Vec<bool>,
    pub tags: BTreeSet<String>,
    pub pair: Option<String>,
    /// `(strands, word)` of a braid whose closure is the same link.
    pub braid: Option<(usize, Vec<i32>)>,
}

impl CatalogEntry {
    pub fn crossings(&self) -> usize {
        self.pd.crossing_count()
    }

    pub fn has_tag(&self, tag: &str) -> bool {
        self.tags.contains(tag)
    }

    /// The diagram with the entry's default orientation.
    pub fn diagram(&self) -> Result<LinkDiagram> {
        LinkDiagram::with_reversed(&self.pd, &self.default_orientation)
    }

    /// The braid closure presentation, if the entry has one.
    pub fn braid_pd(&self) -> Option<Result<PdCode>> {
        self.braid.as_ref().map(|(s, w)| PdCode::from_braid(*s, w))
    }

    /// Bit mask form of the default orientation.
    pub fn orientation_mask(&self) -> u64 {
        self.default_orientation
            .iter()
            .enumerate()
            .fold(0, |m, (i, &r)| m | (r as u64) << i)
    }

    fn parse(file: &str, text: &str) -> Result<Self> {
        let err = |message: String| Error::Catalog {
            file: file.to_string(),
            message,
        };
        let mut fields: BTreeMap<&str, &str> = BTreeMap::new();
        for line in text.lines().map(str::trim) {
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line
                .split_once(':')
                .ok_or_else(|| err(format!("expected `key: value`, got {line:?}")))?;
            if fields.insert(key.trim(), value.trim()).is_some() {
                return Err(err(format!("duplicate key {key:?}")));
            }
        }
        let get = |key: &str| {
            fields
                .get(key)
                .copied()
                .ok_or_else(|| err(format!("missing `{key}`")))
        };
        let name = get("name")?.to_string();
        let braid = match fields.get("braid") {
            None => None,
            Some(text) => Some(parse_braid(text).map_err(err)?),
        };
        let pd = match (fields.get("pd"), &braid) {
            (Some(pd), _) => parse_pd(pd),
            (None, Some((s, w))) => PdCode::from_braid(*s, w),
            (None, None) => return Err(err("missing `pd`".into())),
        }
        .map_err(|e| err(e.to_string()))?;
        let components: usize = get("components")?
            .parse()
            .map_err(|_| err("`components` is not a number".into()))?;
        if components != pd.component_count() {
            return Err(err(format!(
                "declares {components} components, PD has {}",
                pd.component_count()
            )));
        }
        let default_orientation = match fields.get("orientation") {
            None => Vec::new(),
            Some(flags) => flags
                .split_whitespace()
                .map(|f| match f {
                    "0" => Ok(false),
                    "1" => Ok(true),
                    _ => Err(err(format!("bad orientation flag {f:?}"))),
                })
                .collect::<Result<_>>()?,
        };
        let tags = fields
            .get("tags")
            .map(|t| {
                t.split(|c: char| c == ',' || c.is_whitespace())
                    .filter(|s| !s.is_empty())
                    .map(str::to_string)
                    .collect()
            })
            .unwrap_or_default();
        let entry = CatalogEntry {
            name,
            pd,
            components,
            default_orientation,
            tags,
            pair: fields.get("pair").map(|p| p.to_string()),
            braid,
        };
        entry.diagram().map_err(|e| err(e.to_string()))?;
        Ok(entry)
    }
}

fn parse_braid(text: &str) -> std::result::Result<(usize, Vec<i32>), String> {
    let (strands, word) = text
        .split_once('|')
        .ok_or_else(|| format!("expected `strands | word`, got {text:?}"))?;
    let strands = strands
        .trim()
        .parse()
        .map_err(|_| format!("bad strand count {strands:?}"))?;
    let word = word
        .split_whitespace()
        .map(|g| g.parse().map_err(|_| format!("bad generator {g:?}")))
        .collect::<std::result::Result<_, _>>()?;
    Ok((strands, word))
}

/// One expected row of a table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExpectedRow {
    pub name: String,
    pub value: InvariantPolynomial,
    /// The source cell as printed, when it had to be read as `value`.
    pub printed: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExpectedTable {
    pub bracket: String,
    pub rows: Vec<ExpectedRow>,
}

impl ExpectedTable {
    pub fn get(&self, name: &str) -> Option<&ExpectedRow> {
        self.rows.iter().find(|r| r.name == name)
    }

    fn parse(file: &str, bracket: &str, modulus: u32, text: &str) -> Result<Self> {
        let err = |message: String| Error::Catalog {
            file: file.to_string(),
            message,
        };
        let ring = ModulusRing::new(modulus)?;
        let mut rows = Vec::new();
        for line in text.lines().map(str::trim) {
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (name, rest) = line
                .split_once(':')
                .ok_or_else(|| err(format!("expected `name: polynomial`, got {line:?}")))?;
            let (value, printed) = match rest.split_once('|') {
                Some((v, note)) => {
                    let printed = note
                        .trim()
                        .strip_prefix("printed")
                        .ok_or_else(|| err(format!("unknown annotation {note:?}")))?;
                    (v, Some(printed.trim().to_string()))
                }
                None => (rest, None),
            };
            rows.push(ExpectedRow {
                name: name.trim().to_string(),
                value: InvariantPolynomial::parse(ring, value).map_err(|e| err(e.to_string()))?,
                printed,
            });
        }
        Ok(ExpectedTable {
            bracket: bracket.to_string(),
            rows,
        })
    }
}

/// Filter for [`Catalog::list`]; unset fields match everything.
#[derive(Clone, Debug, Default)]
pub struct Filter {
    pub tag: Option<String>,
    pub max_crossings: Option<usize>,
    pub min_crossings: Option<usize>,
}

impl Filter {
    pub fn tag(tag: &str) -> Self {
        Filter {
            tag: Some(tag.to_string()),
            ..Filter::default()
        }
    }

    fn matches(&self, e: &CatalogEntry) -> bool {
        self.tag.as_deref().is_none_or(|t| e.has_tag(t))
            && self.max_crossings.is_none_or(|m| e.crossings() <= m)
            && self.min_crossings.is_none_or(|m| e.crossings() >= m)
    }
}

#[derive(Clone, Debug)]
pub struct Catalog {
    entries: Vec<CatalogEntry>,
    tables: BTreeMap<String, ExpectedTable>,
}

/// Moduli of the tables shipped with the catalog, by bracket name.
const TABLE_MODULI: [(&str, u32); 2] = [("beta1", 5), ("beta2", 5)];

impl Catalog {
    /// The embedded assets, or the directory named by `TRIBRACKET_CATALOG`.
    pub fn load() -> Result<Self> {
        match std::env::var_os(CATALOG_ENV) {
            Some(dir) if !dir.is_empty() => Self::from_dir(Path::new(&dir)),
            _ => Self::embedded(),
        }
    }

    pub fn embedded() -> Result<Self> {
        Self::from_files(
            EMBEDDED_CATALOG
                .iter()
                .map(|&(f, t)| (f.to_string(), t.to_string()))
                .collect(),
            EMBEDDED_TABLES
                .iter()
                .map(|&(f, t)| (f.to_string(), t.to_string()))
                .collect(),
        )
    }

    /// Reads `catalog/*.txt` and `tables/*.txt` under `dir`; a missing
    /// subdirectory falls back to the embedded files.
    pub fn from_dir(dir: &Path) -> Result<Self> {
        let read = |sub: &str, fallback: &[(&str, &str)]| -> Result<Vec<(String, String)>> {
            let path = dir.join(sub);
            if !path.is_dir() {
                return Ok(fallback
                    .iter()
                    .map(|&(f, t)| (f.to_string(), t.to_string()))
                    .collect());
            }
            let mut files = Vec::new();
            for item in std::fs::read_dir(&path)? {
                let p = item?.path();
                if p.extension().is_some_and(|e| e == "txt") {
                    let name = p.file_name().expect("file").to_string_lossy().into_owned();
                    files.push((name, std::fs::read_to_string(&p)?));
                }
            }
            files.sort();
            Ok(files)
        };
        Self::from_files(
            read("catalog", EMBEDDED_CATALOG)?,
            read("tables", EMBEDDED_TABLES)?,
        )
    }

    fn from_files(catalog: Vec<(String, String)>, tables: Vec<(String, String)>) -> Result<Self> {
        let mut entries = Vec::with_capacity(catalog.len());
        let mut names = BTreeSet::new();
        for (file, text) in &catalog {
            let entry = CatalogEntry::parse(file, text)?;
            if !names.insert(entry.name.clone()) {
                return Err(Error::Catalog {
                    file: file.clone(),
                    message: format!("duplicate name {:?}", entry.name),
                });
            }
            entries.push(entry);
        }
        entries.sort_by(|a, b| natural_cmp(&a.name, &b.name));

        let mut parsed = BTreeMap::new();
        for (file, text) in &tables {
            let bracket = file.trim_end_matches(".txt");
            let modulus = TABLE_MODULI
                .iter()
                .find(|(n, _)| *n == bracket)
                .map(|&(_, m)| m)
                .ok_or_else(|| Error::Catalog {
                    file: file.clone(),
                    message: format!("no known bracket named {bracket:?}"),
                })?;
            parsed.insert(
                bracket.to_string(),
                ExpectedTable::parse(file, bracket, modulus, text)?,
            );
        }
        Ok(Catalog {
            entries,
            tables: parsed,
        })
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> &[CatalogEntry] {
        &self.entries
    }

    pub fn get(&self, name: &str) -> Result<&CatalogEntry> {
        self.entries
            .iter()
            .find(|e| e.name == name)
            .ok_or_else(|| Error::UnknownName {
                name: name.to_string(),
                suggestion: nearest(name, self.entries.iter().map(|e| e.name.as_str())),
            })
    }

    /// Matching entries in natural name order (`3_1` before `10_1`).
    pub fn list(&self, filter: &Filter) -> Vec<&CatalogEntry> {
        self.entries.iter().filter(|e| filter.matches(e)).collect()
    }

    /// Fixture groups by name, each with at least two members.
    pub fn fixture_pairs(&self) -> BTreeMap<String, Vec<&CatalogEntry>> {
        let mut groups: BTreeMap<String, Vec<&CatalogEntry>> = BTreeMap::new();
        for e in &self.entries {
            if let Some(p) = &e.pair {
                groups.entry(p.clone()).or_default().push(e);
            }
        }
        groups
    }

    pub fn table(&self, bracket: &str) -> Result<&ExpectedTable> {
        self.tables.get(bracket).ok_or_else(|| Error::UnknownName {
            name: bracket.to_string(),
            suggestion: nearest(bracket, self.tables.keys().map(String::as_str)),
        })
    }

    pub fn table_names(&self) -> impl Iterator<Item = &str> {
        self.tables.keys().map(String::as_str)
    }
}

/// Closest candidate by edit distance, if reasonably close.
pub fn nearest<'a>(name: &str, candidates: impl IntoIterator<Item = &'a str>) -> Option<String> {
    candidates
        .into_iter()
        .map(|c| (strsim::levenshtein(name, c), c))
        .filter(|&(d, c)| d <= 2.max(c.len() / 2))
        .min()
        .map(|(_, c)| c.to_string())
}

/// Orders digit runs numerically: `3_1 < 8_21 < 10_1`, `L6a5 < L6n1`.
pub fn natural_cmp(a: &str, b: &str) -> Ordering {
    fn chunks(s: &str) -> Vec<(bool, &str)> {
        let mut out = Vec::new();
        let mut start = 0;
        let bytes = s.as_bytes();
        for i in 1..=bytes.len() {
            if i == bytes.len() || bytes[i].is_ascii_digit() != bytes[start].is_ascii_digit() {
                out.push((bytes[start].is_ascii_digit(), &s[start..i]));
                start = i;
            }
        }
        out
    }
    let (ca, cb) = (chunks(a), chunks(b));
    for (x, y) in ca.iter().zip(&cb) {
        let ord = match (x, y) {
            ((true, p), (true, q)) => p
                .trim_start_matches('0')
                .len()
                .cmp(&q.trim_start_matches('0').len())
                .then_with(|| p.trim_start_matches('0').cmp(q.trim_start_matches('0'))),
            ((_, p), (_, q)) => p.cmp(q),
        };
        if ord != Ordering::Equal {
            return ord;
        }
    }
    ca.len().cmp(&cb.len()).then_with(|| a.cmp(b))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn natural_order() {
        let mut names = vec!["10_1", "3_1", "L6n1", "8_21", "0_1", "L6a5", "8_3", "L2a1"];
        names.sort_by(|a, b| natural_cmp(a, b));
        assert_eq!(
            names,
            ["0_1", "3_1", "8_3", "8_21", "10_1", "L2a1", "L6a5", "L6n1"]
        );
    }

    #[test]
    fn suggestions() {
        assert_eq!(nearest("beta3", ["beta1", "z7"]), Some("beta1".into()));
        assert_eq!(nearest("zzzzzzzz", ["beta1", "z7"]), None);
    }

    #[test]
    fn parses_entry_files() {
        let text = "name: hopf\npd: X[4,1,3,2], X[2,3,1,4]\ncomponents: 2\ntags: link, test\norientation: 0 1\n";
        let e = CatalogEntry::parse("hopf.txt", text).unwrap();
        assert_eq!(e.components, 2);
        assert_eq!(e.orientation_mask(), 2);
        assert!(e.has_tag("link") && e.has_tag("test"));
        let wrong = text.replace("components: 2", "components: 1");
        assert!(CatalogEntry::parse("hopf.txt", &wrong).is_err());
        assert!(CatalogEntry::parse("x.txt", "name: x\n").is_err());
        let braided =
            CatalogEntry::parse("t.txt", "name: t\nbraid: 2 | 1 1 1\ncomponents: 1\n").unwrap();
        assert_eq!(braided.crossings(), 3);
        assert!(CatalogEntry::parse("t.txt", "name: t\nbraid: 2 1 1 1\ncomponents: 1\n").is_err());
    }

    #[test]
    fn parses_tables() {
        let t = ExpectedTable::parse(
            "beta1.txt",
            "beta1",
            5,
            "3_1: 4u^2\nL7a7: 4u^2 | printed 4yu^2\n",
        )
        .unwrap();
        assert_eq!(t.rows.len(), 2);
        assert_eq!(t.get("L7a7").unwrap().printed.as_deref(), Some("4yu^2"));
        assert!(ExpectedTable::parse("beta1.txt", "beta1", 5, "3_1: 4u^2 | note\n").is_err());
    }
}
