//! Essential simple closed curves given as a table base curve moved by a
//! mapping class, together with their twists and homology classes.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use parking_lot::RwLock;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::mcg::{FreeAutomorphism, MappingClassWord, TwistKind, TwistName, TwistTable};
use crate::word::{Genus, Word};

/// A curve `f(base)` where `f` is the conjugating mapping class word.
///
/// Text form: `Sep1 @ [C3 C4^-1]`; the `@ [...]` part may be omitted.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CurveSpec {
    base: TwistName,
    conjugator: MappingClassWord,
}

impl CurveSpec {
    pub fn new(table: &TwistTable, base: TwistName, conjugator: MappingClassWord) -> Result<Self> {
        table.genus().ensure_same(conjugator.genus())?;
        let entry = table.entry(base)?;
        if entry.kind == TwistKind::Boundary {
            return Err(Error::NotACurve(base.to_string()));
        }
        Ok(CurveSpec { base, conjugator })
    }

    /// A base curve with trivial conjugator.
    pub fn base_curve(table: &TwistTable, base: TwistName) -> Result<Self> {
        CurveSpec::new(table, base, MappingClassWord::identity(table.genus()))
    }

    pub fn parse(table: &TwistTable, text: &str) -> Result<Self> {
        SpecParser { table, text, pos: 0 }.spec()
    }

    pub fn genus(&self) -> Genus {
        self.conjugator.genus()
    }

    pub fn base(&self) -> TwistName {
        self.base
    }

    pub fn conjugator(&self) -> &MappingClassWord {
        &self.conjugator
    }

    /// The curve `g(self)`: `g` is prepended to the conjugator.
    pub fn moved_by(&self, g: &MappingClassWord) -> Result<Self> {
        Ok(CurveSpec { base: self.base, conjugator: g.concat(&self.conjugator)? })
    }

    pub fn resolve(&self, table: &TwistTable) -> Result<CurveData> {
        resolve(table, self)
    }
}

impl fmt::Display for CurveSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.conjugator.is_empty() {
            write!(f, "{}", self.base)
        } else {
            write!(f, "{} @ [{}]", self.base, self.conjugator)
        }
    }
}

impl Serialize for CurveSpec {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

struct SpecParser<'a> {
    table: &'a TwistTable,
    text: &'a str,
    pos: usize,
}

impl SpecParser<'_> {
    fn skip_ws(&mut self) {
        while self.text[self.pos..].starts_with(char::is_whitespace) {
            self.pos += self.text[self.pos..].chars().next().map_or(1, char::len_utf8);
        }
    }

    fn peek(&self) -> Option<char> {
        self.text[self.pos..].chars().next()
    }

    fn col(&self) -> usize {
        self.text[..self.pos].chars().count() + 1
    }

    fn spec(mut self) -> Result<CurveSpec> {
        self.skip_ws();
        let start = self.col();
        let name_len = self.text[self.pos..]
            .find(|c: char| !c.is_ascii_alphanumeric())
            .unwrap_or(self.text.len() - self.pos);
        if name_len == 0 {
            return Err(Error::parse(start, "expected a curve name"));
        }
        let name = &self.text[self.pos..self.pos + name_len];
        self.pos += name_len;
        let base: TwistName = name.parse().map_err(|_| Error::parse(start, format!("unknown curve name `{name}`")))?;
        let entry = self
            .table
            .entry(base)
            .map_err(|_| Error::parse(start, format!("no curve `{name}` at genus {}", self.table.genus())))?;
        if entry.kind == TwistKind::Boundary {
            return Err(Error::NotACurve(name.to_string()));
        }
        self.skip_ws();
        let conjugator = match self.peek() {
            None => MappingClassWord::identity(self.table.genus()),
            Some('@') => {
                self.pos += 1;
                self.skip_ws();
                if self.peek() != Some('[') {
                    return Err(Error::parse(self.col(), "expected `[` after `@`"));
                }
                self.pos += 1;
                let body_start = self.pos;
                let body_col = self.col();
                loop {
                    match self.peek() {
                        None => return Err(Error::parse(self.col(), "missing `]`")),
                        Some(']') => break,
                        Some(c) if c.is_ascii_alphanumeric() || c == '^' || c == '-' || c.is_whitespace() => {
                            self.pos += c.len_utf8();
                        }
                        Some(c) => return Err(Error::parse(self.col(), format!("unexpected `{c}`"))),
                    }
                }
                let body = &self.text[body_start..self.pos];
                self.pos += 1;
                MappingClassWord::parse_at(self.table, body, body_col - 1)?
            }
            Some(c) => return Err(Error::parse(self.col(), format!("expected `@` or end of input, found `{c}`"))),
        };
        self.skip_ws();
        if let Some(c) = self.peek() {
            return Err(Error::parse(self.col(), format!("trailing input starting at `{c}`")));
        }
        Ok(CurveSpec { base, conjugator })
    }
}

/// Integer matrix of a mapping class on `H_1 = Γ/Γ_2` in the basis
/// `x1..x2g`; column `j` is the homology class of the image of `x_j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomologyMatrix {
    n: usize,
    data: Vec<i64>,
}

impl HomologyMatrix {
    pub fn identity(n: usize) -> Self {
        let mut data = vec![0; n * n];
        for i in 0..n {
            data[i * n + i] = 1;
        }
        HomologyMatrix { n, data }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, row: usize, col: usize) -> i64 {
        self.data[row * self.n + col]
    }

    pub fn rows(&self) -> Vec<Vec<i64>> {
        self.data.chunks(self.n).map(<[i64]>::to_vec).collect()
    }

    pub fn is_identity(&self) -> bool {
        *self == HomologyMatrix::identity(self.n)
    }

    pub fn apply(&self, v: &[i64]) -> Vec<i64> {
        (0..self.n).map(|i| (0..self.n).map(|j| self.get(i, j) * v[j]).sum()).collect()
    }

    pub fn mul(&self, other: &HomologyMatrix) -> HomologyMatrix {
        let n = self.n;
        let mut data = vec![0; n * n];
        for i in 0..n {
            for k in 0..n {
                let a = self.get(i, k);
                if a != 0 {
                    for j in 0..n {
                        data[i * n + j] += a * other.get(k, j);
                    }
                }
            }
        }
        HomologyMatrix { n, data }
    }

    /// `Mᵀ J M = J` for the standard form.
    pub fn is_symplectic(&self) -> bool {
        let cols: Vec<Vec<i64>> = (0..self.n).map(|j| (0..self.n).map(|i| self.get(i, j)).collect()).collect();
        (0..self.n).all(|a| {
            (0..self.n).all(|b| {
                let mut ea = vec![0; self.n];
                let mut eb = vec![0; self.n];
                ea[a] = 1;
                eb[b] = 1;
                symplectic_form(&cols[a], &cols[b]) == symplectic_form(&ea, &eb)
            })
        })
    }
}

impl Serialize for HomologyMatrix {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.rows().serialize(s)
    }
}

pub fn homology_action(f: &FreeAutomorphism) -> HomologyMatrix {
    let n = f.genus().rank();
    let mut data = vec![0; n * n];
    for (j, w) in f.images().iter().enumerate() {
        for (i, c) in w.abelianize().into_iter().enumerate() {
            data[i * n + j] = c;
        }
    }
    HomologyMatrix { n, data }
}

/// `⟨e_{2i-1}, e_{2i}⟩ = 1`.
pub fn symplectic_form(u: &[i64], v: &[i64]) -> i64 {
    u.chunks(2).zip(v.chunks(2)).map(|(a, b)| a[0] * b[1] - a[1] * b[0]).sum()
}

/// Resolved data of a curve.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CurveData {
    pub twist: FreeAutomorphism,
    /// Cyclic word of the curve, canonical up to inversion.
    pub pi1_class: Word,
    pub homology: Vec<i64>,
    pub separating: bool,
}

/// Twist along `f(base)` is `f t_base f⁻¹`.
pub fn resolve(table: &TwistTable, spec: &CurveSpec) -> Result<CurveData> {
    table.genus().ensure_same(spec.genus())?;
    let entry = table.entry(spec.base)?;
    let f = table.evaluate(&spec.conjugator)?;
    let twist = entry.twist.conjugate_by(&f)?;
    let pi1_class = f.apply(&entry.curve)?.unoriented_cyclic_class();
    let homology = homology_action(&f).apply(&entry.homology);
    let separating = homology.iter().all(|&c| c == 0);
    Ok(CurveData { twist, pi1_class, homology, separating })
}

/// Signed count with respect to the orientations fixed by the table; only
/// the absolute value is meaningful for unoriented curves.
pub fn algebraic_intersection(table: &TwistTable, c1: &CurveSpec, c2: &CurveSpec) -> Result<i64> {
    c1.genus().ensure_same(c2.genus())?;
    let h1 = homology_of(table, c1)?;
    let h2 = homology_of(table, c2)?;
    Ok(symplectic_form(&h1, &h2))
}

fn homology_of(table: &TwistTable, spec: &CurveSpec) -> Result<Vec<i64>> {
    table.genus().ensure_same(spec.genus())?;
    let entry = table.entry(spec.base)?;
    let f = table.evaluate(&spec.conjugator)?;
    Ok(homology_action(&f).apply(&entry.homology))
}

/// Isotopy of curves, decided by equality of their twists.
pub fn curves_equal(table: &TwistTable, c1: &CurveSpec, c2: &CurveSpec) -> Result<bool> {
    c1.genus().ensure_same(c2.genus())?;
    Ok(resolve(table, c1)?.twist == resolve(table, c2)?.twist)
}

/// Memoized [`resolve`], keyed by genus and spec text. Use one cache per
/// table.
#[derive(Default)]
pub struct CurveCache {
    map: RwLock<HashMap<(u32, String), Arc<CurveData>>>,
}

impl CurveCache {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn get(&self, table: &TwistTable, spec: &CurveSpec) -> Result<Arc<CurveData>> {
        let key = (spec.genus().get(), spec.to_string());
        if let Some(d) = self.map.read().get(&key) {
            return Ok(Arc::clone(d));
        }
        let data = Arc::new(resolve(table, spec)?);
        Ok(Arc::clone(self.map.write().entry(key).or_insert(data)))
    }

    pub fn len(&self) -> usize {
        self.map.read().len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}
