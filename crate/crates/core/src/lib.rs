//! Exact group-theoretic detectors of geometric intersection for simple
//! closed curves on the genus-`g` surface with one boundary component.
//!
//! Mapping classes are handled as automorphisms of the free fundamental
//! group. On top of that the crate decides
//!
//! * whether two Dehn twists commute (equivalently, whether the curves are
//!   disjoint),
//! * the depth of a mapping class in the Johnson filtration, via the
//!   truncated Magnus expansion, and the resulting pair invariant
//!   [`jfilt::ijf`],
//! * the Magnus representation of the Torelli group with abelianized Fox
//!   calculus.
//!
//! Generator twists come from versioned table fixtures under `data/tables`
//! that are checked against the standard relations by
//! [`mcg::validate_relations`].

pub mod curve;
pub mod error;
pub mod experiments;
pub mod foxrep;
pub mod jfilt;
pub mod magnus;
pub mod mcg;
pub mod report;
pub mod word;

pub use curve::{CurveCache, CurveData, CurveSpec, HomologyMatrix};
pub use error::{Error, Result};
pub use jfilt::{JFDepth, JFValue, PairReport};
pub use magnus::{DepthResult, Monomial, TruncatedSeries};
pub use mcg::{FreeAutomorphism, MappingClassWord, TwistName, TwistTable};
pub use word::{Genus, Letter, Word};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");
