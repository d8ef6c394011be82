//! Mapping classes of the surface with one boundary component, acting on the
//! free fundamental group.

mod automorphism;
mod relations;
mod table;

use std::fmt;
use std::str::FromStr;

pub use automorphism::{auto_equal, FreeAutomorphism, DEFAULT_IMAGE_LIMIT};
pub use relations::{validate_relations, RelationCheck, RelationKind, RelationReport};
pub use table::{builtin_table, TableEntry, TwistKind, TwistTable, MAX_TABLE_GENUS, MIN_TABLE_GENUS};

use crate::error::{Error, Result};
use crate::word::Genus;

/// Name of a generator twist in the built-in table.
///
/// `C0..C{2g+1}` are chain twists (`C0` only exists from genus 3 on),
/// `Delta` is the boundary twist and `SepJ` twists along the curve cutting
/// off the first `J` handles.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum TwistName {
    Chain(u32),
    Boundary,
    Separating(u32),
}

impl fmt::Display for TwistName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TwistName::Chain(i) => write!(f, "C{i}"),
            TwistName::Boundary => f.write_str("Delta"),
            TwistName::Separating(j) => write!(f, "Sep{j}"),
        }
    }
}

impl FromStr for TwistName {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::parse(1, format!("unknown twist name `{s}`"));
        let index = |digits: &str| -> Result<u32> {
            if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
                return Err(bad());
            }
            digits.parse().map_err(|_| bad())
        };
        if s == "Delta" {
            Ok(TwistName::Boundary)
        } else if let Some(rest) = s.strip_prefix("Sep") {
            Ok(TwistName::Separating(index(rest)?))
        } else if let Some(rest) = s.strip_prefix('C') {
            Ok(TwistName::Chain(index(rest)?))
        } else {
            Err(bad())
        }
    }
}

/// A product of generator-twist powers, read as a composite of maps: the
/// leftmost factor is applied last.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MappingClassWord {
    genus: Genus,
    factors: Vec<(TwistName, i32)>,
}

impl MappingClassWord {
    pub fn identity(genus: Genus) -> Self {
        MappingClassWord { genus, factors: Vec::new() }
    }

    /// Validates names against `table` and rejects zero exponents.
    pub fn new(table: &TwistTable, factors: Vec<(TwistName, i32)>) -> Result<Self> {
        for (name, e) in &factors {
            table.entry(*name)?;
            if *e == 0 {
                return Err(Error::Precondition(format!("zero exponent on {name}")));
            }
        }
        Ok(MappingClassWord { genus: table.genus(), factors })
    }

    /// Parses `C1 C2^-3 Sep1 Delta^2`.
    pub fn parse(table: &TwistTable, text: &str) -> Result<Self> {
        Self::parse_at(table, text, 0)
    }

    /// As [`parse`](Self::parse); `offset` shifts reported columns.
    pub(crate) fn parse_at(table: &TwistTable, text: &str, offset: usize) -> Result<Self> {
        let mut factors = Vec::new();
        let mut pos = 0;
        for token in text.split_whitespace() {
            let col = text[pos..].find(token).map(|o| pos + o).unwrap_or(pos) + offset + 1;
            pos = col - offset - 1 + token.len();
            let (name, exp) = match token.split_once('^') {
                None => (token, 1i64),
                Some((n, e)) => {
                    let e = e
                        .parse::<i64>()
                        .map_err(|_| Error::parse(col + n.len() + 1, format!("bad exponent `{e}`")))?;
                    (n, e)
                }
            };
            let name: TwistName = name
                .parse()
                .map_err(|_| Error::parse(col, format!("unknown twist name `{name}`")))?;
            if table.entry(name).is_err() {
                return Err(Error::parse(col, format!("no twist `{name}` at genus {}", table.genus())));
            }
            if exp == 0 {
                return Err(Error::parse(col, "exponent must be nonzero"));
            }
            let exp = i32::try_from(exp).map_err(|_| Error::parse(col, "exponent out of range"))?;
            factors.push((name, exp));
        }
        Ok(MappingClassWord { genus: table.genus(), factors })
    }

    pub fn genus(&self) -> Genus {
        self.genus
    }

    pub fn factors(&self) -> &[(TwistName, i32)] {
        &self.factors
    }

    pub fn len(&self) -> usize {
        self.factors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.factors.is_empty()
    }

    /// `self` followed by `other` as a product (`self ∘ other`).
    pub fn concat(&self, other: &MappingClassWord) -> Result<Self> {
        self.genus.ensure_same(other.genus)?;
        let mut factors = self.factors.clone();
        factors.extend_from_slice(&other.factors);
        Ok(MappingClassWord { genus: self.genus, factors })
    }

    pub fn inverse(&self) -> Self {
        MappingClassWord {
            genus: self.genus,
            factors: self.factors.iter().rev().map(|&(n, e)| (n, -e)).collect(),
        }
    }
}

impl fmt::Display for MappingClassWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, (name, e)) in self.factors.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            if *e == 1 {
                write!(f, "{name}")?;
            } else {
                write!(f, "{name}^{e}")?;
            }
        }
        Ok(())
    }
}

/// Automorphism of a mapping class word.
pub fn evaluate(table: &TwistTable, mcw: &MappingClassWord) -> Result<FreeAutomorphism> {
    table.evaluate(mcw)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn twist_names_round_trip() {
        for s in ["C0", "C5", "Delta", "Sep2"] {
            assert_eq!(s.parse::<TwistName>().unwrap().to_string(), s);
        }
        for s in ["C", "Sep", "D", "C-1", "Cx", "sep1"] {
            assert!(s.parse::<TwistName>().is_err(), "{s}");
        }
    }

    #[test]
    fn parse_mapping_class_words() {
        let t = TwistTable::builtin(2).unwrap();
        let w = MappingClassWord::parse(t, "C1 C2^-3 Sep1 Delta^2").unwrap();
        assert_eq!(w.to_string(), "C1 C2^-3 Sep1 Delta^2");
        assert_eq!(w.inverse().to_string(), "Delta^-2 Sep1^-1 C2^3 C1^-1");
        assert!(MappingClassWord::parse(t, "").unwrap().is_empty());
        match MappingClassWord::parse(t, "C1 C9") {
            Err(Error::Parse { pos, .. }) => assert_eq!(pos, 4),
            other => panic!("{other:?}"),
        }
        assert!(MappingClassWord::parse(t, "C1^0").is_err());
        assert!(MappingClassWord::parse(t, "C1^x").is_err());
        assert!(MappingClassWord::parse(t, "Sep2").is_err());
    }
}
