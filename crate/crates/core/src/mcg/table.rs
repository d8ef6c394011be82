use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;
use std::sync::OnceLock;

use serde::Serialize;

use super::automorphism::{apply_letters, FreeAutomorphism, DEFAULT_IMAGE_LIMIT};
use super::{MappingClassWord, TwistName};
use crate::error::{Error, Result};
use crate::word::{Genus, Word};

pub const MIN_TABLE_GENUS: u32 = 1;
pub const MAX_TABLE_GENUS: u32 = 4;

const FIXTURES: [&str; 4] = [
    include_str!("../../data/tables/genus1.tbl"),
    include_str!("../../data/tables/genus2.tbl"),
    include_str!("../../data/tables/genus3.tbl"),
    include_str!("../../data/tables/genus4.tbl"),
];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum TwistKind {
    Chain,
    Boundary,
    Separating,
}

impl fmt::Display for TwistKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TwistKind::Chain => "chain",
            TwistKind::Boundary => "boundary",
            TwistKind::Separating => "separating",
        })
    }
}

/// One generator twist: its automorphism and the data of its curve.
#[derive(Clone, Debug)]
pub struct TableEntry {
    pub name: TwistName,
    pub kind: TwistKind,
    /// A representative of the curve in the fundamental group.
    pub curve: Word,
    pub homology: Vec<i64>,
    /// Names of table twists whose curves meet this one (chain adjacency).
    pub meets: Vec<TwistName>,
    pub twist: FreeAutomorphism,
}

impl TableEntry {
    pub fn separating(&self) -> bool {
        self.homology.iter().all(|&c| c == 0)
    }
}

/// Generator twists for one genus, in fixture order.
#[derive(Clone, Debug)]
pub struct TwistTable {
    genus: Genus,
    boundary: Word,
    entries: Vec<TableEntry>,
    index: BTreeMap<TwistName, usize>,
}

impl TwistTable {
    /// The table shipped with the library.
    pub fn builtin(genus: u32) -> Result<&'static TwistTable> {
        static TABLES: [OnceLock<Result<TwistTable>>; 4] =
            [OnceLock::new(), OnceLock::new(), OnceLock::new(), OnceLock::new()];
        if !(MIN_TABLE_GENUS..=MAX_TABLE_GENUS).contains(&genus) {
            return Err(if genus == 0 { Error::InvalidGenus(0) } else { Error::UnsupportedGenus(genus) });
        }
        let i = (genus - MIN_TABLE_GENUS) as usize;
        TABLES[i]
            .get_or_init(|| TwistTable::from_fixture(FIXTURES[i]))
            .as_ref()
            .map_err(Clone::clone)
    }

    /// Raw text of the built-in fixture.
    pub fn builtin_fixture(genus: u32) -> Result<&'static str> {
        if !(MIN_TABLE_GENUS..=MAX_TABLE_GENUS).contains(&genus) {
            return Err(Error::UnsupportedGenus(genus));
        }
        Ok(FIXTURES[(genus - MIN_TABLE_GENUS) as usize])
    }

    pub fn from_file(path: &Path) -> Result<TwistTable> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Table { line: 0, msg: format!("{}: {e}", path.display()) })?;
        TwistTable::from_fixture(&text)
    }

    /// Parses the text fixture format.
    pub fn from_fixture(text: &str) -> Result<TwistTable> {
        Parser::default().run(text)
    }

    pub fn genus(&self) -> Genus {
        self.genus
    }

    /// `[x1,x2][x3,x4]...`.
    pub fn boundary_word(&self) -> &Word {
        &self.boundary
    }

    pub fn entries(&self) -> &[TableEntry] {
        &self.entries
    }

    pub fn names(&self) -> impl Iterator<Item = TwistName> + '_ {
        self.entries.iter().map(|e| e.name)
    }

    pub fn entry(&self, name: TwistName) -> Result<&TableEntry> {
        self.index
            .get(&name)
            .map(|&i| &self.entries[i])
            .ok_or_else(|| Error::UnknownTwist { name: name.to_string(), genus: self.genus.get() })
    }

    pub fn twist(&self, name: TwistName) -> Result<&FreeAutomorphism> {
        Ok(&self.entry(name)?.twist)
    }

    pub fn chain_twists(&self) -> impl Iterator<Item = &TableEntry> {
        self.entries.iter().filter(|e| e.kind == TwistKind::Chain)
    }

    /// Entries usable as curve bases: everything except the boundary twist.
    pub fn curve_bases(&self) -> impl Iterator<Item = &TableEntry> {
        self.entries.iter().filter(|e| e.kind != TwistKind::Boundary)
    }

    pub fn meets(&self, a: TwistName, b: TwistName) -> Result<bool> {
        self.entry(b)?;
        Ok(self.entry(a)?.meets.contains(&b))
    }

    /// Composite of the named twists, leftmost applied last.
    pub fn evaluate(&self, mcw: &MappingClassWord) -> Result<FreeAutomorphism> {
        self.evaluate_with_limit(mcw, DEFAULT_IMAGE_LIMIT)
    }

    pub fn evaluate_with_limit(&self, mcw: &MappingClassWord, limit: usize) -> Result<FreeAutomorphism> {
        self.genus.ensure_same(mcw.genus())?;
        let mut acc = FreeAutomorphism::identity(self.genus);
        for &(name, e) in mcw.factors() {
            let t = self.twist(name)?;
            let step = if e < 0 { t.inverse() } else { t.clone() };
            for _ in 0..e.unsigned_abs() {
                acc = acc.compose_with_limit(&step, limit)?;
            }
        }
        Ok(acc)
    }

    /// Whether `f` commutes with every chain twist. Together with the
    /// central boundary twist these generate the mapping class group, so
    /// this decides centrality.
    pub fn is_central(&self, f: &FreeAutomorphism) -> Result<bool> {
        self.genus.ensure_same(f.genus())?;
        for e in self.chain_twists() {
            let t = &e.twist;
            for j in 0..self.genus.rank() {
                let ft = apply_letters(f.images(), t.images()[j].letters(), usize::MAX)?;
                let tf = apply_letters(t.images(), f.images()[j].letters(), usize::MAX)?;
                if ft != tf {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }
}

/// Free function form of [`TwistTable::builtin`].
pub fn builtin_table(genus: u32) -> Result<&'static TwistTable> {
    TwistTable::builtin(genus)
}

struct Block {
    line: usize,
    name: TwistName,
    kind: TwistKind,
    curve: Option<Word>,
    meets: Vec<TwistName>,
    images: BTreeMap<usize, Word>,
    inverse_images: BTreeMap<usize, Word>,
}

#[derive(Default)]
struct Parser {
    version: Option<u32>,
    genus: Option<Genus>,
    boundary: Option<Word>,
    blocks: Vec<Block>,
}

impl Parser {
    fn run(mut self, text: &str) -> Result<TwistTable> {
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let content = raw.split('#').next().unwrap_or("");
            if content.trim().is_empty() {
                continue;
            }
            let indented = content.starts_with(char::is_whitespace);
            self.line(line, content.trim(), indented)?;
        }
        self.finish()
    }

    fn genus(&self, line: usize) -> Result<Genus> {
        self.genus.ok_or_else(|| Error::Table { line, msg: "`genus` must come before words".into() })
    }

    fn word(&self, line: usize, text: &str) -> Result<Word> {
        Word::parse(self.genus(line)?, text).map_err(|e| Error::Table { line, msg: e.to_string() })
    }

    fn line(&mut self, line: usize, content: &str, indented: bool) -> Result<()> {
        let err = |msg: String| Error::Table { line, msg };
        let (key, rest) = content.split_once(char::is_whitespace).unwrap_or((content, ""));
        let rest = rest.trim();
        if !indented {
            match key {
                "version" => {
                    let v: u32 = rest.parse().map_err(|_| err(format!("bad version `{rest}`")))?;
                    if v != 1 {
                        return Err(err(format!("unsupported table version {v}")));
                    }
                    self.version = Some(v);
                }
                "genus" => {
                    let g: u32 = rest.parse().map_err(|_| err(format!("bad genus `{rest}`")))?;
                    self.genus = Some(Genus::new(g).map_err(|e| err(e.to_string()))?);
                }
                "boundary" => self.boundary = Some(self.word(line, rest)?),
                "twist" => {
                    let mut parts = rest.split_whitespace();
                    let name: TwistName = parts
                        .next()
                        .ok_or_else(|| err("missing twist name".into()))?
                        .parse()
                        .map_err(|e: Error| err(e.to_string()))?;
                    let kind = match parts.next() {
                        Some("chain") => TwistKind::Chain,
                        Some("boundary") => TwistKind::Boundary,
                        Some("separating") => TwistKind::Separating,
                        other => return Err(err(format!("bad twist kind {other:?}"))),
                    };
                    if self.blocks.iter().any(|b| b.name == name) {
                        return Err(err(format!("duplicate twist {name}")));
                    }
                    self.genus(line)?;
                    self.blocks.push(Block {
                        line,
                        name,
                        kind,
                        curve: None,
                        meets: Vec::new(),
                        images: BTreeMap::new(),
                        inverse_images: BTreeMap::new(),
                    });
                }
                _ => return Err(err(format!("unexpected `{key}`"))),
            }
            return Ok(());
        }
        if self.blocks.is_empty() {
            return Err(err("indented line outside a twist block".into()));
        }
        match key {
            "curve" => {
                let w = self.word(line, rest)?;
                self.blocks.last_mut().unwrap().curve = Some(w);
            }
            "meets" => {
                let names = rest
                    .split_whitespace()
                    .map(|s| s.parse::<TwistName>().map_err(|e| err(e.to_string())))
                    .collect::<Result<Vec<_>>>()?;
                self.blocks.last_mut().unwrap().meets = names;
            }
            "inverse" => {
                let (gen, w) = self.assignment(line, rest)?;
                let b = self.blocks.last_mut().unwrap();
                if b.inverse_images.insert(gen, w).is_some() {
                    return Err(err(format!("inverse image of x{gen} given twice")));
                }
            }
            _ => {
                let (gen, w) = self.assignment(line, content)?;
                let b = self.blocks.last_mut().unwrap();
                if b.images.insert(gen, w).is_some() {
                    return Err(err(format!("image of x{gen} given twice")));
                }
            }
        }
        Ok(())
    }

    fn assignment(&self, line: usize, text: &str) -> Result<(usize, Word)> {
        let err = |msg: String| Error::Table { line, msg };
        let (lhs, rhs) = text.split_once("->").ok_or_else(|| err(format!("expected `xj -> word`, got `{text}`")))?;
        let g = self.word(line, lhs.trim())?;
        if g.len() != 1 || g.letters()[0].is_inverse() {
            return Err(err(format!("left side `{}` is not a generator", lhs.trim())));
        }
        Ok((g.letters()[0].generator(), self.word(line, rhs.trim())?))
    }

    fn finish(self) -> Result<TwistTable> {
        let end = |msg: String| Error::Table { line: 0, msg };
        if self.version.is_none() {
            return Err(end("missing `version`".into()));
        }
        let genus = self.genus.ok_or_else(|| end("missing `genus`".into()))?;
        let boundary = self.boundary.ok_or_else(|| end("missing `boundary`".into()))?;
        let mut expected = Word::identity(genus);
        for i in 0..genus.get() as usize {
            let a = Word::generator(genus, 2 * i + 1)?;
            let b = Word::generator(genus, 2 * i + 2)?;
            expected = expected.multiply(&a.commutator(&b)?)?;
        }
        if boundary != expected {
            return Err(end(format!("boundary word must be {expected}")));
        }
        let mut entries = Vec::with_capacity(self.blocks.len());
        let mut index = BTreeMap::new();
        for b in self.blocks {
            let err = |msg: String| Error::Table { line: b.line, msg };
            let curve = b.curve.ok_or_else(|| err(format!("twist {} has no curve", b.name)))?;
            let fill = |m: &BTreeMap<usize, Word>| -> Vec<Word> {
                (1..=genus.rank())
                    .map(|j| m.get(&j).cloned().unwrap_or_else(|| Word::generator(genus, j).unwrap()))
                    .collect()
            };
            let twist = FreeAutomorphism::new(genus, fill(&b.images), fill(&b.inverse_images))
                .map_err(|e| err(format!("twist {}: {e}", b.name)))?;
            index.insert(b.name, entries.len());
            entries.push(TableEntry {
                name: b.name,
                kind: b.kind,
                homology: curve.abelianize(),
                curve,
                meets: b.meets,
                twist,
            });
        }
        for e in &entries {
            for m in &e.meets {
                let other = index
                    .get(m)
                    .map(|&i| &entries[i])
                    .ok_or_else(|| end(format!("twist {} meets unknown {m}", e.name)))?;
                if !other.meets.contains(&e.name) {
                    return Err(end(format!("meets is not symmetric between {} and {m}", e.name)));
                }
            }
            let nonzero = e.homology.iter().any(|&c| c != 0);
            if (e.kind == TwistKind::Chain) != nonzero {
                return Err(end(format!("twist {}: kind {} inconsistent with its homology", e.name, e.kind)));
            }
        }
        Ok(TwistTable { genus, boundary, entries, index })
    }
}
