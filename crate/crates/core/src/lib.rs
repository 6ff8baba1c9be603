//! Tribrackets, tribracket brackets over Z/n, and the link invariants they
//! define on PD-coded diagrams.
//!
//! ```
//! use tribracket::{builtins, catalog::Catalog, invariant};
//!
//! let catalog = Catalog::embedded().unwrap();
//! let hopf = catalog.get("L2a1").unwrap().diagram().unwrap();
//! let bracket = builtins::z7_bracket();
//! assert_eq!(invariant::counting_invariant(&hopf, bracket.tribracket()), 8);
//! ```

pub mod bracket;
pub mod builtins;
pub mod catalog;
pub mod diagram;
pub mod error;
pub mod formats;
pub mod invariant;
pub mod ring;
pub mod tribracket;
mod unionfind;

pub use bracket::{
    derive_delta, derive_w, make_cocycle, make_kauffman, search_brackets, verify_bracket,
    BracketAxiomReport, CoefficientTensor, SearchOptions, SkeinEquation, SkeinVariant,
    TribracketBracket,
};
pub use catalog::{Catalog, CatalogEntry};
pub use diagram::{parse_pd, LinkDiagram, PdCode, Sign, Smoothing};
pub use error::{Error, Result};
pub use invariant::{
    beta, counting_invariant, enumerate_colorings, phi, phi_multiset, Coloring, InvariantPolynomial,
};
pub use ring::{ModulusRing, RingElement};
pub use tribracket::{
    dehn, enumerate_tribrackets, make_alexander, make_dehn, AxiomReport, GroupTable, Tribracket,
};
