//! Truncated Magnus expansion `x_j ↦ 1 + X_j` of the free group into
//! noncommutative integer power series, and lower-central-series depth.
//!
//! A word lies in the `k`-th term of the lower central series exactly when
//! its expansion is `1 + (terms of degree ≥ k)` (Magnus). Expansion runs on a
//! dense buffer with checked `i128` arithmetic and falls back to big integers
//! on overflow; results are stored sparsely.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::word::{Genus, Letter, Word};

/// Largest dense working buffer, in coefficients.
const MAX_DENSE_TERMS: usize = 1 << 24;

/// A word in the noncommuting variables `X_1..X_{2g}`, packed as base-`2g`
/// digits with the first factor most significant. Ordered by degree, then
/// lexicographically.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial {
    degree: u8,
    code: u64,
}

impl Monomial {
    pub const ONE: Monomial = Monomial { degree: 0, code: 0 };

    /// `factors` are 1-based variable indices.
    pub fn new(rank: usize, factors: &[usize]) -> Monomial {
        let mut code = 0u64;
        for &f in factors {
            debug_assert!((1..=rank).contains(&f));
            code = code * rank as u64 + (f as u64 - 1);
        }
        Monomial { degree: factors.len() as u8, code }
    }

    pub fn degree(&self) -> usize {
        self.degree as usize
    }

    pub fn factors(&self, rank: usize) -> Vec<usize> {
        let mut out = vec![0; self.degree()];
        let mut c = self.code;
        for slot in out.iter_mut().rev() {
            *slot = (c % rank as u64) as usize + 1;
            c /= rank as u64;
        }
        out
    }

    fn concat(&self, other: &Monomial, rank: usize) -> Monomial {
        Monomial {
            degree: self.degree + other.degree,
            code: self.code * (rank as u64).pow(other.degree as u32) + other.code,
        }
    }

    pub fn display(&self, rank: usize) -> String {
        if self.degree == 0 {
            return "1".into();
        }
        self.factors(rank).iter().map(|f| format!("X{f}")).collect()
    }
}

/// Integer noncommutative power series truncated above degree `cap`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TruncatedSeries {
    genus: Genus,
    cap: usize,
    terms: BTreeMap<Monomial, BigInt>,
}

impl TruncatedSeries {
    pub fn one(genus: Genus, cap: usize) -> Result<Self> {
        check_cap(genus, cap)?;
        let mut terms = BTreeMap::new();
        terms.insert(Monomial::ONE, BigInt::one());
        Ok(TruncatedSeries { genus, cap, terms })
    }

    /// Builds a series from explicit terms; zero coefficients are dropped and
    /// terms above the cap are rejected.
    pub fn from_terms<I>(genus: Genus, cap: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Vec<usize>, BigInt)>,
    {
        check_cap(genus, cap)?;
        let rank = genus.rank();
        let mut map: BTreeMap<Monomial, BigInt> = BTreeMap::new();
        for (factors, c) in terms {
            if factors.len() > cap {
                return Err(Error::Precondition(format!("term of degree {} above cap {cap}", factors.len())));
            }
            if let Some(&bad) = factors.iter().find(|&&f| f == 0 || f > rank) {
                return Err(Error::GeneratorOutOfRange { index: bad as i64, genus: genus.get(), max: rank });
            }
            *map.entry(Monomial::new(rank, &factors)).or_insert_with(BigInt::zero) += c;
        }
        map.retain(|_, c| !c.is_zero());
        Ok(TruncatedSeries { genus, cap, terms: map })
    }

    pub fn genus(&self) -> Genus {
        self.genus
    }

    pub fn cap(&self) -> usize {
        self.cap
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &BigInt)> {
        self.terms.iter()
    }

    pub fn coeff(&self, factors: &[usize]) -> BigInt {
        self.terms
            .get(&Monomial::new(self.genus.rank(), factors))
            .cloned()
            .unwrap_or_default()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms.get(&Monomial::ONE).is_some_and(|c| c.is_one())
    }

    /// Terms of exactly the given degree.
    pub fn homogeneous_part(&self, degree: usize) -> Vec<(Monomial, BigInt)> {
        self.terms
            .iter()
            .filter(|(m, _)| m.degree() == degree)
            .map(|(m, c)| (*m, c.clone()))
            .collect()
    }

    /// Lowest positive degree carrying a nonzero term.
    pub fn lowest_nonconstant_degree(&self) -> Option<usize> {
        self.terms.keys().map(|m| m.degree()).find(|&d| d > 0)
    }

    /// Truncated product.
    pub fn mul(&self, other: &TruncatedSeries) -> Result<TruncatedSeries> {
        self.genus.ensure_same(other.genus)?;
        if self.cap != other.cap {
            return Err(Error::CapMismatch { left: self.cap, right: other.cap });
        }
        let rank = self.genus.rank();
        let mut out: BTreeMap<Monomial, BigInt> = BTreeMap::new();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                if m1.degree() + m2.degree() > self.cap {
                    // other.terms is sorted by degree
                    break;
                }
                *out.entry(m1.concat(m2, rank)).or_insert_with(BigInt::zero) += c1 * c2;
            }
        }
        out.retain(|_, c| !c.is_zero());
        Ok(TruncatedSeries { genus: self.genus, cap: self.cap, terms: out })
    }
}

impl fmt::Display for TruncatedSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rank = self.genus.rank();
        let mut first = true;
        for (m, c) in &self.terms {
            let body = if m.degree() == 0 {
                c.abs().to_string()
            } else {
                format!("{}·{}", c.abs(), m.display(rank))
            };
            match (first, c.is_negative()) {
                (true, false) => write!(f, "{body}")?,
                (true, true) => write!(f, "-{body}")?,
                (false, false) => write!(f, " + {body}")?,
                (false, true) => write!(f, " - {body}")?,
            }
            first = false;
        }
        if first {
            f.write_str("0")?;
        }
        write!(f, " + O(deg {})", self.cap + 1)
    }
}

/// Lower-central-series depth of a word.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, serde::Serialize)]
#[serde(tag = "case", content = "value", rename_all = "snake_case")]
pub enum DepthResult {
    /// The empty word.
    Identity,
    /// In `Γ_k` but not in `Γ_{k+1}`.
    Exact(usize),
    /// In `Γ_k`; deeper levels were not examined.
    AtLeast(usize),
}

fn check_cap(genus: Genus, cap: usize) -> Result<()> {
    if cap == 0 {
        return Err(Error::InvalidCap(cap));
    }
    let rank = genus.rank();
    let mut total = 0usize;
    let mut level = 1usize;
    for d in 0..=cap {
        if d > 0 {
            level = level.saturating_mul(rank);
        }
        total = total.saturating_add(level);
        if total > MAX_DENSE_TERMS || d >= 64 {
            let max = (0..=cap).take_while(|&c| dense_len(rank, c) <= MAX_DENSE_TERMS).last().unwrap_or(0);
            return Err(Error::CapTooLarge { cap, rank, max });
        }
    }
    Ok(())
}

fn dense_len(rank: usize, cap: usize) -> usize {
    (0..=cap).fold((0usize, 1usize), |(t, l), _| (t.saturating_add(l), l.saturating_mul(rank))).0
}

trait Coeff: Clone {
    fn c_zero() -> Self;
    fn c_one() -> Self;
    fn c_is_zero(&self) -> bool;
    /// Returns false on overflow.
    fn add_from(&mut self, other: &Self) -> bool;
    fn sub_from(&mut self, other: &Self) -> bool;
    fn to_big(&self) -> BigInt;
}

impl Coeff for i128 {
    fn c_zero() -> Self {
        0
    }
    fn c_one() -> Self {
        1
    }
    fn c_is_zero(&self) -> bool {
        *self == 0
    }
    #[inline]
    fn add_from(&mut self, other: &Self) -> bool {
        match self.checked_add(*other) {
            Some(v) => {
                *self = v;
                true
            }
            None => false,
        }
    }
    #[inline]
    fn sub_from(&mut self, other: &Self) -> bool {
        match self.checked_sub(*other) {
            Some(v) => {
                *self = v;
                true
            }
            None => false,
        }
    }
    fn to_big(&self) -> BigInt {
        BigInt::from(*self)
    }
}

impl Coeff for BigInt {
    fn c_zero() -> Self {
        Zero::zero()
    }
    fn c_one() -> Self {
        One::one()
    }
    fn c_is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn add_from(&mut self, other: &Self) -> bool {
        *self += other;
        true
    }
    fn sub_from(&mut self, other: &Self) -> bool {
        *self -= other;
        true
    }
    fn to_big(&self) -> BigInt {
        self.clone()
    }
}

/// Dense truncated expansion: `coeffs[offsets[d] + code]`.
struct Dense<C> {
    rank: usize,
    cap: usize,
    offsets: Vec<usize>,
    coeffs: Vec<C>,
}

impl<C: Coeff> Dense<C> {
    fn expand(rank: usize, cap: usize, letters: &[Letter]) -> Option<Self> {
        let mut offsets = Vec::with_capacity(cap + 2);
        let mut acc = 0usize;
        let mut level = 1usize;
        for _ in 0..=cap {
            offsets.push(acc);
            acc += level;
            level *= rank;
        }
        offsets.push(acc);
        let mut coeffs = vec![C::c_zero(); acc];
        coeffs[0] = C::c_one();
        let mut d = Dense { rank, cap, offsets, coeffs };
        for &l in letters {
            let ok = if l.is_inverse() { d.mul_inverse(l.generator() - 1) } else { d.mul_generator(l.generator() - 1) };
            if !ok {
                return None;
            }
        }
        Some(d)
    }

    /// Right-multiplies by `1 + X_j`.
    fn mul_generator(&mut self, j: usize) -> bool {
        let n = self.rank;
        for d in (0..self.cap).rev() {
            let src0 = self.offsets[d];
            let dst0 = self.offsets[d + 1];
            let count = self.offsets[d + 1] - src0;
            for c in 0..count {
                let src = src0 + c;
                if self.coeffs[src].c_is_zero() {
                    continue;
                }
                let dst = dst0 + c * n + j;
                let (lo, hi) = self.coeffs.split_at_mut(dst);
                if !hi[0].add_from(&lo[src]) {
                    return false;
                }
            }
        }
        true
    }

    /// Right-multiplies by `(1 + X_j)^{-1}`: new[m·X_j] = old[m·X_j] − new[m].
    fn mul_inverse(&mut self, j: usize) -> bool {
        let n = self.rank;
        for d in 1..=self.cap {
            let src0 = self.offsets[d - 1];
            let dst0 = self.offsets[d];
            let count = dst0 - src0;
            for p in 0..count {
                let src = src0 + p;
                if self.coeffs[src].c_is_zero() {
                    continue;
                }
                let dst = dst0 + p * n + j;
                let (lo, hi) = self.coeffs.split_at_mut(dst);
                if !hi[0].sub_from(&lo[src]) {
                    return false;
                }
            }
        }
        true
    }

    fn lowest_nonconstant_degree(&self) -> Option<usize> {
        (1..=self.cap).find(|&d| self.coeffs[self.offsets[d]..self.offsets[d + 1]].iter().any(|c| !c.c_is_zero()))
    }

    fn to_series(&self, genus: Genus) -> TruncatedSeries {
        let mut terms = BTreeMap::new();
        for d in 0..=self.cap {
            for (code, c) in self.coeffs[self.offsets[d]..self.offsets[d + 1]].iter().enumerate() {
                if !c.c_is_zero() {
                    terms.insert(Monomial { degree: d as u8, code: code as u64 }, c.to_big());
                }
            }
        }
        TruncatedSeries { genus, cap: self.cap, terms }
    }
}

enum Expansion {
    Small(Dense<i128>),
    Big(Dense<BigInt>),
}

impl Expansion {
    fn of(w: &Word, cap: usize) -> Result<Expansion> {
        check_cap(w.genus(), cap)?;
        let rank = w.genus().rank();
        Ok(match Dense::<i128>::expand(rank, cap, w.letters()) {
            Some(d) => Expansion::Small(d),
            None => Expansion::Big(Dense::<BigInt>::expand(rank, cap, w.letters()).expect("big integers do not overflow")),
        })
    }

    fn lowest_nonconstant_degree(&self) -> Option<usize> {
        match self {
            Expansion::Small(d) => d.lowest_nonconstant_degree(),
            Expansion::Big(d) => d.lowest_nonconstant_degree(),
        }
    }

    fn to_series(&self, genus: Genus) -> TruncatedSeries {
        match self {
            Expansion::Small(d) => d.to_series(genus),
            Expansion::Big(d) => d.to_series(genus),
        }
    }
}

/// Magnus expansion of `w` truncated above degree `cap`.
pub fn magnus_expand(w: &Word, cap: usize) -> Result<TruncatedSeries> {
    Ok(Expansion::of(w, cap)?.to_series(w.genus()))
}

/// Depth of `w` in the lower central series, examined through degree `cap`.
pub fn lcs_depth(w: &Word, cap: usize) -> Result<DepthResult> {
    if cap == 0 {
        return Err(Error::InvalidCap(cap));
    }
    if w.is_identity() {
        return Ok(DepthResult::Identity);
    }
    Ok(match Expansion::of(w, cap)?.lowest_nonconstant_degree() {
        Some(k) => DepthResult::Exact(k),
        None => DepthResult::AtLeast(cap + 1),
    })
}

/// Multiplies two series; alias of [`TruncatedSeries::mul`].
pub fn series_mul(s: &TruncatedSeries, t: &TruncatedSeries) -> Result<TruncatedSeries> {
    s.mul(t)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;
    use proptest::prelude::*;

    fn genus(g: u32) -> Genus {
        Genus::new(g).unwrap()
    }

    fn word(g: u32, raw: &[i64]) -> Word {
        Word::reduce(genus(g), raw.iter().copied()).unwrap()
    }

    fn big(v: i64) -> BigInt {
        BigInt::from(v)
    }

    /// Independent oracle: dense convolution over explicit factor tuples,
    /// with each letter series written out in full.
    fn schoolbook(rank: usize, cap: usize, letters: &[i64]) -> BTreeMap<Vec<usize>, i64> {
        let mut acc: BTreeMap<Vec<usize>, i64> = BTreeMap::from([(vec![], 1)]);
        for &l in letters {
            let j = l.unsigned_abs() as usize;
            let mut factor: BTreeMap<Vec<usize>, i64> = BTreeMap::from([(vec![], 1)]);
            if l > 0 {
                factor.insert(vec![j], 1);
            } else {
                for r in 1..=cap {
                    factor.insert(vec![j; r], if r % 2 == 0 { 1 } else { -1 });
                }
            }
            let mut next = BTreeMap::new();
            for (a, ca) in &acc {
                for (b, cb) in &factor {
                    if a.len() + b.len() <= cap {
                        let mut m = a.clone();
                        m.extend(b);
                        *next.entry(m).or_insert(0) += ca * cb;
                    }
                }
            }
            next.retain(|_, c| *c != 0);
            acc = next;
        }
        let _ = rank;
        acc
    }

    fn as_map(s: &TruncatedSeries) -> BTreeMap<Vec<usize>, i64> {
        let rank = s.genus().rank();
        s.terms()
            .map(|(m, c)| (m.factors(rank), i64::try_from(c).unwrap()))
            .collect()
    }

    #[test]
    fn generator_and_identity() {
        let one = magnus_expand(&Word::identity(genus(1)), 3).unwrap();
        assert!(one.is_one());
        let s = magnus_expand(&word(1, &[1]), 2).unwrap();
        assert_eq!(s.to_string(), "1 + 1·X1 + O(deg 3)");
    }

    #[test]
    fn commutator_expansion_at_cap_two() {
        // (1+X1)(1+X2)(1-X1+X1²)(1-X2+X2²) by hand: 1 + X1X2 - X2X1
        let c = word(1, &[1]).commutator(&word(1, &[2])).unwrap();
        let s = magnus_expand(&c, 2).unwrap();
        assert_eq!(s.to_string(), "1 + 1·X1X2 - 1·X2X1 + O(deg 3)");
        assert_eq!(s.coeff(&[1, 2]), big(1));
        assert_eq!(s.coeff(&[2, 1]), big(-1));
    }

    #[test]
    fn series_product_examples() {
        let g = genus(1);
        let s = magnus_expand(&word(1, &[1, 2, 2]), 3).unwrap();
        let one = TruncatedSeries::one(g, 3).unwrap();
        assert_eq!(s.mul(&one).unwrap(), s);
        let a = TruncatedSeries::from_terms(g, 2, [(vec![], big(1)), (vec![1], big(1))]).unwrap();
        let b = TruncatedSeries::from_terms(g, 2, [(vec![], big(1)), (vec![1], big(-1)), (vec![1, 1], big(1))]).unwrap();
        assert!(a.mul(&b).unwrap().is_one());
        let c3 = TruncatedSeries::one(g, 3).unwrap();
        assert!(matches!(a.mul(&c3), Err(Error::CapMismatch { .. })));
    }

    #[test]
    fn depth_examples() {
        let x1 = word(1, &[1]);
        let x2 = word(1, &[2]);
        assert_eq!(lcs_depth(&x1, 3).unwrap(), DepthResult::Exact(1));
        let c = x1.commutator(&x2).unwrap();
        assert_eq!(lcs_depth(&c, 3).unwrap(), DepthResult::Exact(2));
        let c3 = c.commutator(&x1).unwrap();
        assert_eq!(lcs_depth(&c3, 3).unwrap(), DepthResult::Exact(3));
        assert_eq!(lcs_depth(&c3, 2).unwrap(), DepthResult::AtLeast(3));
        assert_eq!(lcs_depth(&Word::identity(genus(1)), 2).unwrap(), DepthResult::Identity);
        assert!(lcs_depth(&x1, 0).is_err());
    }

    #[test]
    fn overflow_falls_back_to_big_integers() {
        // x1^-N has coefficient (-1)^d C(N+d-1, d) at X1^d; pick N so that
        // degree-9 coefficients exceed i128.
        let g = genus(1);
        let n: i64 = 1 << 17;
        let w = Word::reduce(g, std::iter::repeat_n(-1, n as usize)).unwrap();
        let cap = 9;
        let s = magnus_expand(&w, cap).unwrap();
        let mut expect = BigInt::one();
        for d in 1..=cap as i64 {
            expect = expect * big(n + d - 1) / big(d);
        }
        assert_eq!(s.coeff(&[1; 9]), -expect.clone());
        assert!(expect.bits() > 127);
    }

    #[test]
    fn cap_bounds() {
        assert!(matches!(magnus_expand(&word(2, &[1]), 20), Err(Error::CapTooLarge { .. })));
        let s = magnus_expand(&word(2, &[1, 2]), 6).unwrap();
        assert_eq!(s.cap(), 6);
    }

    fn raw_word(rank: i64, max_len: usize) -> impl Strategy<Value = Vec<i64>> {
        prop::collection::vec(prop_oneof![1..=rank, -rank..=-1], 0..max_len)
    }

    fn binomial(n: u64, k: u64) -> BigInt {
        (0..k).fold(BigInt::one(), |acc, i| acc * BigInt::from(n - i) / BigInt::from(i + 1))
    }

    proptest! {
        #[test]
        fn matches_schoolbook_convolution(raw in raw_word(2, 14)) {
            let w = Word::reduce(genus(1), raw.iter().copied()).unwrap();
            let s = magnus_expand(&w, 3).unwrap();
            let reduced: Vec<i64> = w.letters().iter().map(|l| l.raw() as i64).collect();
            prop_assert_eq!(as_map(&s), schoolbook(2, 3, &reduced));
            // unreduced input gives the same series
            prop_assert_eq!(as_map(&s), schoolbook(2, 3, &raw));
        }

        #[test]
        fn series_mul_matches_schoolbook(a in raw_word(2, 8), b in raw_word(2, 8)) {
            let g = genus(1);
            let sa = magnus_expand(&Word::reduce(g, a.iter().copied()).unwrap(), 3).unwrap();
            let sb = magnus_expand(&Word::reduce(g, b.iter().copied()).unwrap(), 3).unwrap();
            let mut both = a.clone();
            both.extend(&b);
            prop_assert_eq!(as_map(&sa.mul(&sb).unwrap()), schoolbook(2, 3, &both));
        }

        #[test]
        fn expansion_is_multiplicative(a in raw_word(4, 16), b in raw_word(4, 16), cap in 2usize..=4) {
            let g = genus(2);
            let u = Word::reduce(g, a.iter().copied()).unwrap();
            let v = Word::reduce(g, b.iter().copied()).unwrap();
            let lhs = magnus_expand(&u.multiply(&v).unwrap(), cap).unwrap();
            let rhs = magnus_expand(&u, cap).unwrap().mul(&magnus_expand(&v, cap).unwrap()).unwrap();
            prop_assert_eq!(&lhs, &rhs);
            prop_assert_eq!(lhs.coeff(&[]), BigInt::one());
            let assoc_l = lhs.mul(&rhs).unwrap().mul(&lhs).unwrap();
            let assoc_r = lhs.mul(&rhs.mul(&lhs).unwrap()).unwrap();
            prop_assert_eq!(assoc_l, assoc_r);
        }

        #[test]
        fn commutator_depth_is_superadditive(a in raw_word(4, 10), b in raw_word(4, 10)) {
            let g = genus(2);
            let cap = 4;
            let u = Word::reduce(g, a.iter().copied()).unwrap();
            let v = Word::reduce(g, b.iter().copied()).unwrap();
            let depth = |w: &Word| match lcs_depth(w, cap).unwrap() {
                DepthResult::Identity => usize::MAX,
                DepthResult::Exact(k) | DepthResult::AtLeast(k) => k,
            };
            let c = u.commutator(&v).unwrap();
            let need = depth(&u).saturating_add(depth(&v)).min(cap + 1);
            prop_assert!(depth(&c) >= need);
        }

        #[test]
        fn depth_is_conjugation_invariant(a in raw_word(4, 12), b in raw_word(4, 6)) {
            let g = genus(2);
            let u = Word::reduce(g, a.iter().copied()).unwrap();
            let h = Word::reduce(g, b.iter().copied()).unwrap();
            prop_assert_eq!(lcs_depth(&u, 4).unwrap(), lcs_depth(&u.conjugate(&h).unwrap(), 4).unwrap());
        }

        #[test]
        fn coefficients_obey_growth_bound(raw in raw_word(4, 20), cap in 1usize..=4) {
            let w = Word::reduce(genus(2), raw.iter().copied()).unwrap();
            let s = magnus_expand(&w, cap).unwrap();
            let l = w.len() as u64;
            for (m, c) in s.terms() {
                let d = m.degree() as u64;
                if d == 0 { continue; }
                prop_assert!(c.abs() <= binomial(l + d - 1, d));
            }
        }
    }
}
