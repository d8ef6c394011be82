//! Abelianized Fox calculus and the Magnus representation of the Torelli
//! group with coefficients in `Z[H]`, `H = Γ/Γ_2`.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::ser::{SerializeSeq, SerializeStruct};
use serde::{Serialize, Serializer};

use crate::curve::{homology_action, resolve, CurveSpec};
use crate::error::{Error, Result};
use crate::jfilt::{in_mk, SpecEnumerator};
use crate::mcg::{FreeAutomorphism, TwistTable};
use crate::word::{Genus, Word};

/// Laurent polynomial in `t_1..t_{2g}`, stored as exponent vector to
/// coefficient with no zero coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LaurentPoly {
    rank: usize,
    terms: BTreeMap<Vec<i64>, BigInt>,
}

impl LaurentPoly {
    pub fn zero(rank: usize) -> Self {
        LaurentPoly { rank, terms: BTreeMap::new() }
    }

    pub fn one(rank: usize) -> Self {
        Self::monomial(vec![0; rank], BigInt::one())
    }

    pub fn monomial(exponents: Vec<i64>, coeff: BigInt) -> Self {
        let rank = exponents.len();
        let mut terms = BTreeMap::new();
        if !coeff.is_zero() {
            terms.insert(exponents, coeff);
        }
        LaurentPoly { rank, terms }
    }

    /// `t_i` (1-based).
    pub fn variable(rank: usize, i: usize) -> Self {
        let mut e = vec![0; rank];
        e[i - 1] = 1;
        Self::monomial(e, BigInt::one())
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<i64>, &BigInt)> {
        self.terms.iter()
    }

    pub fn coeff(&self, exponents: &[i64]) -> BigInt {
        self.terms.get(exponents).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        *self == Self::one(self.rank)
    }

    fn add_term(&mut self, e: Vec<i64>, c: BigInt) {
        let slot = self.terms.entry(e).or_default();
        *slot += c;
        if slot.is_zero() {
            self.terms.retain(|_, c| !c.is_zero());
        }
    }

    pub fn add(&self, other: &LaurentPoly) -> LaurentPoly {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }

    pub fn neg(&self) -> LaurentPoly {
        LaurentPoly { rank: self.rank, terms: self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect() }
    }

    pub fn sub(&self, other: &LaurentPoly) -> LaurentPoly {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &LaurentPoly) -> LaurentPoly {
        let mut acc: BTreeMap<Vec<i64>, BigInt> = BTreeMap::new();
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                let e: Vec<i64> = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                *acc.entry(e).or_default() += c1 * c2;
            }
        }
        acc.retain(|_, c| !c.is_zero());
        LaurentPoly { rank: self.rank, terms: acc }
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (n, (e, c)) in self.terms.iter().enumerate() {
            if n > 0 {
                f.write_str(" + ")?;
            }
            write!(f, "{c}")?;
            for (i, &k) in e.iter().enumerate() {
                match k {
                    0 => {}
                    1 => write!(f, "·t{}", i + 1)?,
                    _ => write!(f, "·t{}^{k}", i + 1)?,
                }
            }
        }
        Ok(())
    }
}

struct Term<'a>(&'a [i64], &'a BigInt);

impl Serialize for Term<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("Term", 2)?;
        st.serialize_field("exponents", self.0)?;
        st.serialize_field("coeff", &self.1.to_string())?;
        st.end()
    }
}

/// Serialized as a list of `{exponents, coeff}` with the coefficient as a
/// decimal string.
impl Serialize for LaurentPoly {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(self.terms.len()))?;
        for (e, c) in &self.terms {
            seq.serialize_element(&Term(e, c))?;
        }
        seq.end()
    }
}

/// `∂w/∂x_i` pushed to `Z[H]`.
pub fn fox_derivative_abelianized(w: &Word, i: usize) -> Result<LaurentPoly> {
    let rank = w.genus().rank();
    if i == 0 || i > rank {
        return Err(Error::GeneratorOutOfRange { index: i as i64, genus: w.genus().get(), max: rank });
    }
    let mut prefix = vec![0i64; rank];
    let mut acc: BTreeMap<Vec<i64>, i64> = BTreeMap::new();
    for l in w.letters() {
        let j = l.generator() - 1;
        if l.is_inverse() {
            prefix[j] -= 1;
            if j + 1 == i {
                *acc.entry(prefix.clone()).or_default() -= 1;
            }
        } else {
            if j + 1 == i {
                *acc.entry(prefix.clone()).or_default() += 1;
            }
            prefix[j] += 1;
        }
    }
    let terms = acc.into_iter().filter(|(_, c)| *c != 0).map(|(e, c)| (e, BigInt::from(c))).collect();
    Ok(LaurentPoly { rank, terms })
}

/// Square matrix over `Z[H]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MagnusMatrix {
    genus: Genus,
    entries: Vec<LaurentPoly>,
}

impl MagnusMatrix {
    pub fn identity(genus: Genus) -> Self {
        let n = genus.rank();
        let entries = (0..n * n)
            .map(|k| if k / n == k % n { LaurentPoly::one(n) } else { LaurentPoly::zero(n) })
            .collect();
        MagnusMatrix { genus, entries }
    }

    pub fn genus(&self) -> Genus {
        self.genus
    }

    pub fn dim(&self) -> usize {
        self.genus.rank()
    }

    /// Entry in row `i`, column `j` (0-based).
    pub fn get(&self, i: usize, j: usize) -> &LaurentPoly {
        &self.entries[i * self.dim() + j]
    }

    pub fn is_identity(&self) -> bool {
        *self == MagnusMatrix::identity(self.genus)
    }

    pub fn mul(&self, other: &MagnusMatrix) -> Result<MagnusMatrix> {
        self.genus.ensure_same(other.genus)?;
        let n = self.dim();
        let entries = (0..n * n)
            .into_par_iter()
            .map(|k| {
                let (i, j) = (k / n, k % n);
                (0..n).fold(LaurentPoly::zero(n), |acc, m| acc.add(&self.get(i, m).mul(other.get(m, j))))
            })
            .collect();
        Ok(MagnusMatrix { genus: self.genus, entries })
    }
}

impl Serialize for MagnusMatrix {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let n = self.dim();
        let rows: Vec<&[LaurentPoly]> = self.entries.chunks(n).collect();
        let mut st = s.serialize_struct("MagnusMatrix", 2)?;
        st.serialize_field("genus", &self.genus.get())?;
        st.serialize_field("rows", &rows)?;
        st.end()
    }
}

/// Entry `(i, j)` is `∂f(x_j)/∂x_i` in `Z[H]`. Only defined on the Torelli
/// group, where it is a homomorphism.
pub fn magnus_rep(f: &FreeAutomorphism) -> Result<MagnusMatrix> {
    if !homology_action(f).is_identity() {
        return Err(Error::Precondition("the Magnus representation is defined on the Torelli group only".into()));
    }
    let genus = f.genus();
    let n = genus.rank();
    let entries = (0..n * n)
        .into_par_iter()
        .map(|k| fox_derivative_abelianized(f.image(k % n + 1), k / n + 1))
        .collect::<Result<Vec<_>>>()?;
    Ok(MagnusMatrix { genus, entries })
}

/// A nontrivial commutator of two separating twists in the kernel of the
/// Magnus representation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SuzukiHit {
    pub a: CurveSpec,
    pub b: CurveSpec,
    pub max_image_len: usize,
}

/// Examines up to `budget` pairs of separating curves (in enumeration order)
/// for commutators killed by the Magnus representation. Every hit is
/// re-checked for Torelli membership and nontriviality. An empty result
/// proves nothing.
pub fn suzuki_scan(table: &TwistTable, budget: usize) -> Result<Vec<SuzukiHit>> {
    if table.genus().get() < 2 {
        return Err(Error::Precondition("no separating curves in genus 1".into()));
    }
    if budget == 0 {
        return Ok(Vec::new());
    }
    let mut specs: Vec<CurveSpec> = Vec::new();
    let mut pairs = Vec::with_capacity(budget);
    'outer: for s in SpecEnumerator::separating(table) {
        for i in 0..specs.len() {
            pairs.push((i, specs.len()));
            if pairs.len() == budget {
                specs.push(s);
                break 'outer;
            }
        }
        specs.push(s);
    }
    let twists = specs
        .par_iter()
        .map(|s| resolve(table, s).map(|d| d.twist))
        .collect::<Result<Vec<_>>>()?;
    let found = pairs
        .par_iter()
        .map(|&(i, j)| -> Result<Option<SuzukiHit>> {
            let c = twists[i].commutator(&twists[j])?;
            if c.is_identity() || !magnus_rep(&c)?.is_identity() {
                return Ok(None);
            }
            if !in_mk(&c, 1)? {
                return Ok(None);
            }
            Ok(Some(SuzukiHit { a: specs[i].clone(), b: specs[j].clone(), max_image_len: c.max_image_len() }))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(found.into_iter().flatten().collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mcg::TwistName;
    use proptest::prelude::*;

    fn g(n: u32) -> Genus {
        Genus::new(n).unwrap()
    }

    fn ab_monomial(w: &Word) -> LaurentPoly {
        LaurentPoly::monomial(w.abelianize(), BigInt::one())
    }

    fn arb_word(genus: u32, max: usize) -> impl Strategy<Value = Word> {
        let rank = 2 * genus as i64;
        prop::collection::vec((1..=rank, any::<bool>()), 0..=max)
            .prop_map(move |v| Word::reduce(g(genus), v.into_iter().map(|(i, s)| if s { -i } else { i })).unwrap())
    }

    #[test]
    fn axioms() {
        let x1 = Word::parse(g(1), "x1").unwrap();
        assert!(fox_derivative_abelianized(&x1, 1).unwrap().is_one());
        assert!(fox_derivative_abelianized(&x1, 2).unwrap().is_zero());
        let d = fox_derivative_abelianized(&x1.invert(), 1).unwrap();
        assert_eq!(d, LaurentPoly::monomial(vec![-1, 0], BigInt::from(-1)));
        assert!(fox_derivative_abelianized(&x1, 3).is_err());
    }

    #[test]
    fn separating_twist_is_not_killed() {
        let t = TwistTable::builtin(2).unwrap();
        let sep = t.twist(TwistName::Separating(1)).unwrap();
        let m = magnus_rep(sep).unwrap();
        assert!(!m.is_identity());
        // x1 -> d x1 d^-1 with d = [x1,x2], expanded with the product rule
        let d = Word::parse(g(2), "x1 x2 x1^-1 x2^-1").unwrap();
        let x1 = Word::parse(g(2), "x1").unwrap();
        let by_hand = fox_derivative_abelianized(&d, 1)
            .unwrap()
            .add(&LaurentPoly::one(4))
            .add(&ab_monomial(&d.multiply(&x1).unwrap()).mul(&fox_derivative_abelianized(&d.invert(), 1).unwrap()));
        assert_eq!(m.get(0, 0), &by_hand);
        let inv = magnus_rep(&sep.inverse()).unwrap();
        assert!(m.mul(&inv).unwrap().is_identity());
        assert!(magnus_rep(t.twist(TwistName::Chain(1)).unwrap()).is_err());
        assert!(magnus_rep(&FreeAutomorphism::identity(g(2))).unwrap().is_identity());
    }

    #[test]
    fn json_shape() {
        let p = LaurentPoly::monomial(vec![1, -2], BigInt::from(3));
        assert_eq!(serde_json::to_string(&p).unwrap(), r#"[{"exponents":[1,-2],"coeff":"3"}]"#);
    }

    #[test]
    fn scan_budget_zero_is_empty() {
        let t = TwistTable::builtin(2).unwrap();
        assert!(suzuki_scan(t, 0).unwrap().is_empty());
        for hit in suzuki_scan(t, 10).unwrap() {
            let a = resolve(t, &hit.a).unwrap().twist;
            let b = resolve(t, &hit.b).unwrap().twist;
            let c = a.commutator(&b).unwrap();
            assert!(!c.is_identity());
            assert!(magnus_rep(&c).unwrap().is_identity());
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(100))]

        #[test]
        fn product_rule(u in arb_word(2, 20), v in arb_word(2, 20), i in 1usize..=4) {
            let lhs = fox_derivative_abelianized(&u.multiply(&v).unwrap(), i).unwrap();
            let rhs = fox_derivative_abelianized(&u, i).unwrap()
                .add(&ab_monomial(&u).mul(&fox_derivative_abelianized(&v, i).unwrap()));
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn fundamental_identity(w in arb_word(2, 30)) {
            let mut sum = LaurentPoly::zero(4);
            for j in 1..=4 {
                let t = LaurentPoly::variable(4, j).sub(&LaurentPoly::one(4));
                sum = sum.add(&fox_derivative_abelianized(&w, j).unwrap().mul(&t));
            }
            prop_assert_eq!(sum, ab_monomial(&w).sub(&LaurentPoly::one(4)));
        }
    }
}
