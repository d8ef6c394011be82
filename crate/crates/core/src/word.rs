//! Words in the free group of rank `2g`, the fundamental group of the
//! genus-`g` surface with one boundary component.
//!
//! Every [`Word`] is freely reduced and carries its [`Genus`]; binary
//! operations refuse to mix genera.

use std::cmp::Ordering;
use std::fmt;

use crate::error::{Error, Result};

/// Genus of the ambient surface. The free group has rank `2 * genus`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Genus(u32);

impl Genus {
    pub fn new(g: u32) -> Result<Self> {
        if g == 0 {
            return Err(Error::InvalidGenus(g));
        }
        Ok(Genus(g))
    }

    pub fn get(self) -> u32 {
        self.0
    }

    /// Rank of the free group, `2g`.
    pub fn rank(self) -> usize {
        2 * self.0 as usize
    }

    pub(crate) fn ensure_same(self, other: Genus) -> Result<()> {
        if self != other {
            return Err(Error::GenusMismatch { left: self.0, right: other.0 });
        }
        Ok(())
    }
}

impl fmt::Display for Genus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// A generator `x_j` or its inverse. Stored as `+j` / `-j`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
#[repr(transparent)]
pub struct Letter(i32);

impl Letter {
    /// `generator` is 1-based.
    pub fn new(generator: usize, inverse: bool) -> Self {
        debug_assert!(generator >= 1);
        let j = generator as i32;
        Letter(if inverse { -j } else { j })
    }

    pub(crate) fn from_raw(raw: i32) -> Self {
        debug_assert!(raw != 0);
        Letter(raw)
    }

    pub fn raw(self) -> i32 {
        self.0
    }

    /// 1-based generator index.
    pub fn generator(self) -> usize {
        self.0.unsigned_abs() as usize
    }

    pub fn is_inverse(self) -> bool {
        self.0 < 0
    }

    pub fn inverse(self) -> Letter {
        Letter(-self.0)
    }
}

// Canonical order: by generator index, then positive before inverse.
impl Ord for Letter {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.generator(), self.is_inverse()).cmp(&(other.generator(), other.is_inverse()))
    }
}

impl PartialOrd for Letter {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_inverse() {
            write!(f, "x{}^-1", self.generator())
        } else {
            write!(f, "x{}", self.generator())
        }
    }
}

/// Appends `l` to a reduced buffer, cancelling against the last letter.
#[inline]
pub(crate) fn push_reduced(buf: &mut Vec<Letter>, l: Letter) {
    if buf.last() == Some(&l.inverse()) {
        buf.pop();
    } else {
        buf.push(l);
    }
}

#[inline]
pub(crate) fn extend_reduced(buf: &mut Vec<Letter>, letters: &[Letter]) {
    for &l in letters {
        push_reduced(buf, l);
    }
}

#[inline]
pub(crate) fn extend_inverse_reduced(buf: &mut Vec<Letter>, letters: &[Letter]) {
    for &l in letters.iter().rev() {
        push_reduced(buf, l.inverse());
    }
}

/// A freely reduced word. The empty word is the identity.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Word {
    genus: Genus,
    letters: Vec<Letter>,
}

impl Word {
    pub fn identity(genus: Genus) -> Self {
        Word { genus, letters: Vec::new() }
    }

    pub fn generator(genus: Genus, index: usize) -> Result<Self> {
        Self::reduce(genus, [index as i64])
    }

    /// Freely reduces a sequence of signed generator indices (`-j` is `x_j^-1`).
    pub fn reduce<I>(genus: Genus, raw: I) -> Result<Self>
    where
        I: IntoIterator<Item = i64>,
    {
        let max = genus.rank();
        let mut buf = Vec::new();
        for r in raw {
            if r == 0 || r.unsigned_abs() as usize > max {
                return Err(Error::GeneratorOutOfRange { index: r, genus: genus.get(), max });
            }
            push_reduced(&mut buf, Letter::from_raw(r as i32));
        }
        Ok(Word { genus, letters: buf })
    }

    pub fn from_letters(genus: Genus, letters: &[Letter]) -> Result<Self> {
        Self::reduce(genus, letters.iter().map(|l| l.raw() as i64))
    }

    /// Caller guarantees the letters are reduced and in range.
    pub(crate) fn from_reduced(genus: Genus, letters: Vec<Letter>) -> Self {
        debug_assert!(letters.windows(2).all(|p| p[0] != p[1].inverse()));
        debug_assert!(letters.iter().all(|l| l.generator() <= genus.rank()));
        Word { genus, letters }
    }

    pub fn genus(&self) -> Genus {
        self.genus
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn is_identity(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn multiply(&self, other: &Word) -> Result<Word> {
        self.genus.ensure_same(other.genus)?;
        let mut buf = Vec::with_capacity(self.len() + other.len());
        buf.extend_from_slice(&self.letters);
        extend_reduced(&mut buf, &other.letters);
        Ok(Word::from_reduced(self.genus, buf))
    }

    pub fn invert(&self) -> Word {
        let letters = self.letters.iter().rev().map(|l| l.inverse()).collect();
        Word::from_reduced(self.genus, letters)
    }

    /// `g · self · g⁻¹`.
    pub fn conjugate(&self, g: &Word) -> Result<Word> {
        self.genus.ensure_same(g.genus)?;
        let mut buf = g.letters.clone();
        extend_reduced(&mut buf, &self.letters);
        extend_inverse_reduced(&mut buf, &g.letters);
        Ok(Word::from_reduced(self.genus, buf))
    }

    /// `[self, v] = self · v · self⁻¹ · v⁻¹`.
    pub fn commutator(&self, v: &Word) -> Result<Word> {
        self.genus.ensure_same(v.genus)?;
        let mut buf = self.letters.clone();
        extend_reduced(&mut buf, &v.letters);
        extend_inverse_reduced(&mut buf, &self.letters);
        extend_inverse_reduced(&mut buf, &v.letters);
        Ok(Word::from_reduced(self.genus, buf))
    }

    pub fn pow(&self, k: i64) -> Word {
        let base = if k < 0 { self.invert() } else { self.clone() };
        let mut buf = Vec::new();
        for _ in 0..k.unsigned_abs() {
            extend_reduced(&mut buf, &base.letters);
        }
        Word::from_reduced(self.genus, buf)
    }

    /// Splits `self = conjugator · core · conjugator⁻¹` with `core` cyclically
    /// reduced and rotated to its lexicographically least rotation.
    pub fn cyclically_reduce(&self) -> (Word, Word) {
        let l = &self.letters;
        let mut i = 0;
        let mut j = l.len();
        while j > i + 1 && l[i] == l[j - 1].inverse() {
            i += 1;
            j -= 1;
        }
        let middle = &l[i..j];
        let r = least_rotation(middle);
        let mut core = Vec::with_capacity(middle.len());
        core.extend_from_slice(&middle[r..]);
        core.extend_from_slice(&middle[..r]);
        let mut conj = l[..i].to_vec();
        conj.extend_from_slice(&middle[..r]);
        (Word::from_reduced(self.genus, core), Word::from_reduced(self.genus, conj))
    }

    /// Canonical representative of the conjugacy class.
    pub fn cyclic_class(&self) -> Word {
        self.cyclically_reduce().0
    }

    /// Canonical representative of the conjugacy class taken up to inversion,
    /// i.e. of an unoriented free homotopy class of loops.
    pub fn unoriented_cyclic_class(&self) -> Word {
        let a = self.cyclic_class();
        let b = self.invert().cyclic_class();
        if b.letters < a.letters {
            b
        } else {
            a
        }
    }

    /// Image in `H_1 = Z^{2g}`: exponent sums per generator.
    pub fn abelianize(&self) -> Vec<i64> {
        let mut v = vec![0i64; self.genus.rank()];
        for l in &self.letters {
            v[l.generator() - 1] += if l.is_inverse() { -1 } else { 1 };
        }
        v
    }

    /// Parses `x1 x2^-1 x1^3`. `1` (or an empty string) is the identity.
    pub fn parse(genus: Genus, text: &str) -> Result<Word> {
        let mut raw = Vec::new();
        let mut pos = 0;
        for token in text.split_whitespace() {
            let col = text[pos..].find(token).map(|o| pos + o).unwrap_or(pos);
            pos = col + token.len();
            if token == "1" {
                continue;
            }
            let (gen, exp) = parse_power(token, 'x', col + 1)?;
            let j: usize = gen
                .parse()
                .map_err(|_| Error::parse(col + 1, format!("bad generator `{token}`")))?;
            if j == 0 || j > genus.rank() {
                return Err(Error::parse(
                    col + 1,
                    format!("generator x{j} out of range for genus {genus} (x1..x{})", genus.rank()),
                ));
            }
            let letter = if exp < 0 { -(j as i64) } else { j as i64 };
            raw.extend(std::iter::repeat_n(letter, exp.unsigned_abs() as usize));
        }
        Word::reduce(genus, raw)
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Word {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.genus, self.letters.len(), &self.letters).cmp(&(other.genus, other.letters.len(), &other.letters))
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.letters.is_empty() {
            return f.write_str("1");
        }
        for (i, l) in self.letters.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{l}")?;
        }
        Ok(())
    }
}

/// Splits `NAME^k` into (`NAME` without the prefix char, k). Used for both
/// generator tokens (`x3^-2`) and twist tokens.
pub(crate) fn parse_power(token: &str, prefix: char, col: usize) -> Result<(&str, i64)> {
    let body = token
        .strip_prefix(prefix)
        .ok_or_else(|| Error::parse(col, format!("expected `{prefix}<n>`, found `{token}`")))?;
    match body.split_once('^') {
        None => Ok((body, 1)),
        Some((name, exp)) => {
            let e: i64 = exp
                .parse()
                .map_err(|_| Error::parse(col + 1 + name.len(), format!("bad exponent `{exp}`")))?;
            Ok((name, e))
        }
    }
}

/// Start index of the lexicographically least rotation (two-pointer scan).
fn least_rotation(s: &[Letter]) -> usize {
    let n = s.len();
    let (mut i, mut j, mut k) = (0usize, 1usize, 0usize);
    while i < n && j < n && k < n {
        let a = s[(i + k) % n];
        let b = s[(j + k) % n];
        match a.cmp(&b) {
            Ordering::Equal => {
                k += 1;
                continue;
            }
            Ordering::Greater => i += k + 1,
            Ordering::Less => j += k + 1,
        }
        if i == j {
            j += 1;
        }
        k = 0;
    }
    i.min(j).min(n.saturating_sub(1))
}
