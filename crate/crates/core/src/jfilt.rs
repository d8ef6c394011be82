//! Johnson filtration membership and the depth invariant of curve pairs.
//!
//! `M(k)` is the kernel of the action on `Γ/Γ_{k+1}`. A mapping class `f`
//! lies in `M(k)` iff every `f(x_i) x_i⁻¹` lies in `Γ_{k+1}`, which is read
//! off the truncated Magnus expansion.

use std::collections::HashSet;
use std::fmt;

use num_bigint::BigInt;
use rayon::prelude::*;
use serde::Serialize;

use crate::curve::{homology_action, resolve, symplectic_form, CurveData, CurveSpec};
use crate::error::{Error, Result};
use crate::magnus::{lcs_depth, magnus_expand, DepthResult, Monomial};
use crate::mcg::{FreeAutomorphism, MappingClassWord, TwistKind, TwistName, TwistTable};
use crate::word::Word;

/// Position of a mapping class in the Johnson filtration.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(tag = "case", content = "value", rename_all = "snake_case")]
pub enum JFDepth {
    Identity,
    /// Acts nontrivially on homology.
    NotInM1,
    /// In `M(k)`, not in `M(k+1)`.
    Exact(usize),
    /// In `M(k)`; deeper levels were beyond the cap.
    AtLeast(usize),
}

/// Value of the pair invariant `i_JF`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(tag = "case", content = "value", rename_all = "snake_case")]
pub enum JFValue {
    /// The twists commute.
    Zero,
    /// The commutator acts nontrivially on homology.
    One,
    /// Commutator in `M(k-1)` but not in `M(k)`.
    ExactGE2(usize),
    /// Nontrivial commutator, value at least `k`; the cap was exhausted.
    AtLeast(usize),
}

impl JFValue {
    /// True for values known to be at least 2.
    pub fn is_at_least_two(self) -> bool {
        matches!(self, JFValue::ExactGE2(_) | JFValue::AtLeast(_))
    }

    /// Short label used in histograms and CSV.
    pub fn label(self) -> &'static str {
        match self {
            JFValue::Zero => "zero",
            JFValue::One => "one",
            JFValue::ExactGE2(_) => "exact",
            JFValue::AtLeast(_) => "at_least",
        }
    }
}

impl fmt::Display for JFValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            JFValue::Zero => f.write_str("0"),
            JFValue::One => f.write_str("1"),
            JFValue::ExactGE2(k) => write!(f, "{k}"),
            JFValue::AtLeast(k) => write!(f, ">={k}"),
        }
    }
}

fn check_level(k: usize) -> Result<()> {
    if k == 0 {
        Err(Error::InvalidCap(0))
    } else {
        Ok(())
    }
}

/// `f(x_i) x_i⁻¹` for every generator.
fn displacements(f: &FreeAutomorphism) -> Result<Vec<Word>> {
    let genus = f.genus();
    (1..=genus.rank())
        .map(|i| f.image(i).multiply(&Word::generator(genus, i)?.invert()))
        .collect()
}

/// Whether `f` acts trivially on `Γ/Γ_{k+1}`.
pub fn in_mk(f: &FreeAutomorphism, k: usize) -> Result<bool> {
    check_level(k)?;
    let words = displacements(f)?;
    let depths = words
        .par_iter()
        .filter(|w| !w.is_identity())
        .map(|w| lcs_depth(w, k))
        .collect::<Result<Vec<_>>>()?;
    Ok(depths.iter().all(|d| matches!(d, DepthResult::AtLeast(_))))
}

/// Johnson level of `f`, examined through Magnus degree `cap`.
pub fn johnson_depth(f: &FreeAutomorphism, cap: usize) -> Result<JFDepth> {
    check_level(cap)?;
    if f.is_identity() {
        return Ok(JFDepth::Identity);
    }
    if !homology_action(f).is_identity() {
        return Ok(JFDepth::NotInM1);
    }
    let words = displacements(f)?;
    let depths = words
        .par_iter()
        .filter(|w| !w.is_identity())
        .map(|w| lcs_depth(w, cap))
        .collect::<Result<Vec<_>>>()?;
    let lowest = depths
        .iter()
        .filter_map(|d| match d {
            DepthResult::Exact(k) => Some(*k),
            _ => None,
        })
        .min();
    Ok(match lowest {
        Some(d) => JFDepth::Exact(d - 1),
        None => JFDepth::AtLeast(cap),
    })
}

/// `i_JF` of a mapping class commutator, given the commutator itself.
pub fn ijf_of_commutator(commutator: &FreeAutomorphism, cap: usize) -> Result<JFValue> {
    Ok(match johnson_depth(commutator, cap)? {
        JFDepth::Identity => JFValue::Zero,
        JFDepth::NotInM1 => JFValue::One,
        JFDepth::Exact(k) => JFValue::ExactGE2(k + 1),
        JFDepth::AtLeast(k) => JFValue::AtLeast(k + 1),
    })
}

/// `i_JF(c1, c2)` with Johnson levels examined through `cap`. The value 0 is
/// decided exactly, by triviality of the twist commutator.
pub fn ijf(table: &TwistTable, c1: &CurveSpec, c2: &CurveSpec, cap: usize) -> Result<JFValue> {
    check_level(cap)?;
    c1.genus().ensure_same(c2.genus())?;
    let a = resolve(table, c1)?;
    let b = resolve(table, c2)?;
    ijf_of_commutator(&a.twist.commutator(&b.twist)?, cap)
}

/// Disjointness of two curves, decided by commuting twists.
pub fn geom_disjoint(table: &TwistTable, c1: &CurveSpec, c2: &CurveSpec) -> Result<bool> {
    c1.genus().ensure_same(c2.genus())?;
    resolve(table, c1)?.twist.commutes_with(&resolve(table, c2)?.twist)
}

/// Everything the library decides about a pair of curves.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PairReport {
    pub c1: CurveSpec,
    pub c2: CurveSpec,
    /// `[t_{c1}, t_{c2}] = 1`, i.e. the curves are disjoint.
    pub commuting: bool,
    /// `t1 t2 t1 = t2 t1 t2`: the standard intersection-once criterion,
    /// used only as a label.
    pub braid: bool,
    pub algebraic: i64,
    pub ijf: JFValue,
    pub depth_cap: usize,
    /// Broken consistency constraints; empty for a correct implementation.
    pub violations: Vec<String>,
}

impl PairReport {
    /// Checks the relations between the fields that must always hold.
    pub fn consistency_violations(&self) -> Vec<String> {
        let mut v = Vec::new();
        if self.commuting != (self.ijf == JFValue::Zero) {
            v.push("commuting <=> ijf = 0".to_string());
        }
        if self.ijf.is_at_least_two() != (!self.commuting && self.algebraic == 0) {
            v.push("ijf >= 2 <=> (not commuting and algebraic = 0)".to_string());
        }
        if (self.ijf == JFValue::One) != (self.algebraic != 0) {
            v.push("ijf = 1 <=> algebraic != 0".to_string());
        }
        if self.braid && !self.commuting && self.ijf != JFValue::One {
            v.push("braid and not commuting => ijf = 1".to_string());
        }
        v
    }
}

pub fn classify_pair(table: &TwistTable, c1: &CurveSpec, c2: &CurveSpec, cap: usize) -> Result<PairReport> {
    c1.genus().ensure_same(c2.genus())?;
    let a = resolve(table, c1)?;
    let b = resolve(table, c2)?;
    classify_resolved(c1, &a, c2, &b, cap)
}

pub(crate) fn classify_resolved(
    c1: &CurveSpec,
    a: &CurveData,
    c2: &CurveSpec,
    b: &CurveData,
    cap: usize,
) -> Result<PairReport> {
    check_level(cap)?;
    let ab = a.twist.compose(&b.twist)?;
    let ba = b.twist.compose(&a.twist)?;
    let commutator = ab.compose(&ba.inverse())?;
    let commuting = commutator.is_identity();
    let braid = ab.compose(&a.twist)? == ba.compose(&b.twist)?;
    let mut report = PairReport {
        c1: c1.clone(),
        c2: c2.clone(),
        commuting,
        braid,
        algebraic: symplectic_form(&a.homology, &b.homology),
        ijf: ijf_of_commutator(&commutator, cap)?,
        depth_cap: cap,
        violations: Vec::new(),
    };
    report.violations = report.consistency_violations();
    Ok(report)
}

/// Degree-`(k+1)` part of the expansion of `f(x_i) x_i⁻¹` for one generator.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LeadingTerm {
    pub generator: usize,
    pub terms: Vec<(Monomial, BigInt)>,
}

/// The `k`-th Johnson image of `f ∈ M(k)`, as raw tensor coefficients.
/// Nonzero for some generator iff `f ∉ M(k+1)`.
pub fn johnson_leading_term(f: &FreeAutomorphism, k: usize) -> Result<Vec<LeadingTerm>> {
    check_level(k)?;
    if !in_mk(f, k)? {
        return Err(Error::Precondition(format!("mapping class is not in M({k})")));
    }
    displacements(f)?
        .par_iter()
        .enumerate()
        .map(|(i, w)| {
            let terms = if w.is_identity() { Vec::new() } else { magnus_expand(w, k + 1)?.homogeneous_part(k + 1) };
            Ok(LeadingTerm { generator: i + 1, terms })
        })
        .collect()
}

/// Returns whether `[f, g] ∈ M(kf + kg)` for `f ∈ M(kf)`, `g ∈ M(kg)`.
/// The inclusion is a theorem, so `false` indicates a bug.
pub fn morita_check(f: &FreeAutomorphism, g: &FreeAutomorphism, kf: usize, kg: usize, cap: usize) -> Result<bool> {
    check_level(kf)?;
    check_level(kg)?;
    if kf + kg > cap {
        return Err(Error::Precondition(format!("kf + kg = {} exceeds cap {cap}", kf + kg)));
    }
    if !in_mk(f, kf)? {
        return Err(Error::Precondition(format!("first argument is not in M({kf})")));
    }
    if !in_mk(g, kg)? {
        return Err(Error::Precondition(format!("second argument is not in M({kg})")));
    }
    in_mk(&f.commutator(g)?, kf + kg)
}

/// Curve specs in a fixed order: conjugator length first, then base in table
/// order, then conjugator words (chain twists to the power ±1, freely
/// reduced) lexicographically.
pub struct SpecEnumerator<'a> {
    table: &'a TwistTable,
    bases: Vec<TwistName>,
    alphabet: Vec<(TwistName, i32)>,
    words: Vec<Vec<usize>>,
    length: usize,
    base: usize,
    word: usize,
}

impl<'a> SpecEnumerator<'a> {
    pub fn new(table: &'a TwistTable, bases: Vec<TwistName>) -> Self {
        let alphabet = table.chain_twists().flat_map(|e| [(e.name, 1), (e.name, -1)]).collect();
        SpecEnumerator { table, bases, alphabet, words: vec![Vec::new()], length: 0, base: 0, word: 0 }
    }

    /// All curve bases of the table.
    pub fn all(table: &'a TwistTable) -> Self {
        SpecEnumerator::new(table, table.curve_bases().map(|e| e.name).collect())
    }

    /// Separating bases only.
    pub fn separating(table: &'a TwistTable) -> Self {
        let bases = table.entries().iter().filter(|e| e.kind == TwistKind::Separating).map(|e| e.name).collect();
        SpecEnumerator::new(table, bases)
    }

    fn extend_words(&mut self) {
        let mut next = Vec::new();
        for w in &self.words {
            for a in 0..self.alphabet.len() {
                if let Some(&last) = w.last() {
                    // letters 2i and 2i+1 are mutually inverse
                    if last ^ 1 == a {
                        continue;
                    }
                }
                let mut v = w.clone();
                v.push(a);
                next.push(v);
            }
        }
        self.words = next;
        self.length += 1;
    }
}

impl Iterator for SpecEnumerator<'_> {
    type Item = CurveSpec;

    fn next(&mut self) -> Option<CurveSpec> {
        if self.bases.is_empty() || self.alphabet.is_empty() && self.length > 0 {
            return None;
        }
        if self.word == self.words.len() {
            self.word = 0;
            self.base += 1;
        }
        if self.base == self.bases.len() {
            self.base = 0;
            self.extend_words();
            if self.words.is_empty() {
                return None;
            }
        }
        let factors = self.words[self.word].iter().map(|&a| self.alphabet[a]).collect();
        self.word += 1;
        let conj = MappingClassWord::new(self.table, factors).ok()?;
        CurveSpec::new(self.table, self.bases[self.base], conj).ok()
    }
}

/// A curve disjoint from exactly one of `c1`, `c2`, searched among the first
/// `budget` specs of [`SpecEnumerator::all`]. `None` is not a proof that no
/// witness exists.
pub fn distinguishing_witness(
    table: &TwistTable,
    c1: &CurveSpec,
    c2: &CurveSpec,
    budget: usize,
) -> Result<Option<CurveSpec>> {
    c1.genus().ensure_same(c2.genus())?;
    let t1 = resolve(table, c1)?.twist;
    let t2 = resolve(table, c2)?.twist;
    if t1 == t2 {
        return Err(Error::Precondition(format!("`{c1}` and `{c2}` are the same curve")));
    }
    for d in SpecEnumerator::all(table).take(budget) {
        let td = resolve(table, &d)?.twist;
        if td.commutes_with(&t1)? != td.commutes_with(&t2)? {
            return Ok(Some(d));
        }
    }
    Ok(None)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum Fact5Verdict {
    FixesAllSampled { sampled: usize },
    Moves { curve: CurveSpec },
}

/// Looks for a separating curve `c` with `f(c) ≠ c` among the first
/// `budget` distinct curves of [`SpecEnumerator::separating`]. Specs naming
/// a curve already sampled are skipped without counting. A central `f`
/// fixes every curve.
pub fn fact5_instance(table: &TwistTable, f: &FreeAutomorphism, budget: usize) -> Result<Fact5Verdict> {
    table.genus().ensure_same(f.genus())?;
    if table.genus().get() < 2 {
        return Err(Error::Precondition("there are no essential separating curves in genus 1".into()));
    }
    let mut seen = HashSet::new();
    for c in SpecEnumerator::separating(table) {
        if seen.len() == budget {
            break;
        }
        let data = resolve(table, &c)?;
        if !seen.insert(data.pi1_class) {
            continue;
        }
        if !f.commutes_with(&data.twist)? {
            return Ok(Fact5Verdict::Moves { curve: c });
        }
    }
    Ok(Fact5Verdict::FixesAllSampled { sampled: seen.len() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn table(g: u32) -> &'static TwistTable {
        TwistTable::builtin(g).unwrap()
    }

    fn spec(g: u32, s: &str) -> CurveSpec {
        CurveSpec::parse(table(g), s).unwrap()
    }

    fn twist(g: u32, s: &str) -> FreeAutomorphism {
        resolve(table(g), &spec(g, s)).unwrap().twist
    }

    #[test]
    fn membership_of_separating_twist() {
        let sep = twist(2, "Sep1");
        assert!(in_mk(&sep, 1).unwrap());
        assert!(in_mk(&sep, 2).unwrap());
        assert!(!in_mk(&sep, 3).unwrap());
        assert_eq!(johnson_depth(&sep, 3).unwrap(), JFDepth::Exact(2));
        assert_eq!(johnson_depth(&sep, 2).unwrap(), JFDepth::AtLeast(2));
        let id = FreeAutomorphism::identity(table(2).genus());
        assert!(in_mk(&id, 7).unwrap());
        assert_eq!(johnson_depth(&id, 3).unwrap(), JFDepth::Identity);
        assert_eq!(johnson_depth(&twist(2, "C1"), 3).unwrap(), JFDepth::NotInM1);
        assert!(in_mk(&sep, 0).is_err());
    }

    #[test]
    fn leading_terms() {
        let sep = twist(2, "Sep1");
        let lt = johnson_leading_term(&sep, 2).unwrap();
        assert!(lt.iter().any(|t| !t.terms.is_empty()));
        // x3, x4 are fixed
        assert!(lt[2].terms.is_empty() && lt[3].terms.is_empty());
        assert!(lt.iter().all(|t| t.terms.iter().all(|(m, _)| m.degree() == 3)));
        let id = FreeAutomorphism::identity(table(2).genus());
        assert!(johnson_leading_term(&id, 3).unwrap().iter().all(|t| t.terms.is_empty()));
        assert!(matches!(johnson_leading_term(&sep, 3), Err(Error::Precondition(_))));
    }

    #[test]
    fn pair_values() {
        assert_eq!(ijf(table(2), &spec(2, "C1"), &spec(2, "C3"), 3).unwrap(), JFValue::Zero);
        assert_eq!(ijf(table(1), &spec(1, "C1"), &spec(1, "C2"), 3).unwrap(), JFValue::One);
        let r = classify_pair(table(1), &spec(1, "C1"), &spec(1, "C2"), 3).unwrap();
        assert!(!r.commuting && r.braid && r.algebraic.abs() == 1 && r.ijf == JFValue::One);
        assert!(r.violations.is_empty());
        let r = classify_pair(table(2), &spec(2, "C1"), &spec(2, "C3"), 3).unwrap();
        assert!(r.commuting && r.algebraic == 0 && r.ijf == JFValue::Zero);
        let r = classify_pair(table(2), &spec(2, "Sep1"), &spec(2, "Sep1 @ [C3]"), 3).unwrap();
        assert!(!r.commuting && r.algebraic == 0 && r.ijf == JFValue::AtLeast(4));
        assert!(r.violations.is_empty());
    }

    #[test]
    fn morita_examples() {
        let sep = twist(2, "Sep1");
        assert!(morita_check(&sep, &sep, 2, 2, 4).unwrap());
        let other = twist(2, "Sep1 @ [C3]");
        assert!(morita_check(&sep, &other, 2, 2, 4).unwrap());
        let c1 = twist(2, "C1");
        let c3 = twist(2, "C3");
        assert!(matches!(morita_check(&c1, &sep, 1, 2, 3), Err(Error::Precondition(_))));
        let torelli = sep.commutator(&c3).unwrap();
        assert!(morita_check(&torelli, &other, 1, 2, 3).unwrap());
        assert!(morita_check(&sep, &other, 2, 2, 3).is_err());
    }

    #[test]
    fn enumeration_order() {
        let t = table(1);
        let first: Vec<String> = SpecEnumerator::all(t).take(7).map(|s| s.to_string()).collect();
        assert_eq!(first, ["C1", "C2", "C1 @ [C1]", "C1 @ [C1^-1]", "C1 @ [C2]", "C1 @ [C2^-1]", "C2 @ [C1]"]);
        let n2 = SpecEnumerator::all(t).take(100).filter(|s| s.conjugator().len() == 2).count();
        assert_eq!(n2, 2 * 4 * 3);
        let words: Vec<_> = SpecEnumerator::all(t).take(100).collect();
        assert!(words.iter().all(|s| s.conjugator().factors().windows(2).all(|w| w[0].0 != w[1].0 || w[0].1 != -w[1].1)));
        assert_eq!(SpecEnumerator::separating(t).next(), None);
    }

    #[test]
    fn witnesses() {
        let t = table(2);
        let d = distinguishing_witness(t, &spec(2, "C1"), &spec(2, "C3"), 100).unwrap().unwrap();
        let t1 = twist(2, "C1");
        let t3 = twist(2, "C3");
        let td = resolve(t, &d).unwrap().twist;
        assert_ne!(td.commutes_with(&t1).unwrap(), td.commutes_with(&t3).unwrap());
        let w = distinguishing_witness(table(1), &spec(1, "C1"), &spec(1, "C2"), 100).unwrap();
        assert_eq!(w, Some(spec(1, "C1")));
        assert!(matches!(
            distinguishing_witness(t, &spec(2, "C2"), &spec(2, "C3 @ [C3 C2]"), 10),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn fact5() {
        let t = table(2);
        let delta = t.twist(TwistName::Boundary).unwrap();
        assert_eq!(fact5_instance(t, delta, 50).unwrap(), Fact5Verdict::FixesAllSampled { sampled: 50 });
        let id = FreeAutomorphism::identity(t.genus());
        assert!(matches!(fact5_instance(t, &id, 20).unwrap(), Fact5Verdict::FixesAllSampled { .. }));
        match fact5_instance(t, &twist(2, "C1"), 50).unwrap() {
            Fact5Verdict::Moves { curve } => {
                let s = resolve(t, &curve).unwrap();
                assert!(s.separating);
                assert!(!s.twist.commutes_with(&twist(2, "C1")).unwrap());
            }
            other => panic!("{other:?}"),
        }
        assert!(fact5_instance(table(1), &twist(1, "C1"), 5).is_err());
    }

    fn arb_word(g: u32, max: usize) -> impl Strategy<Value = MappingClassWord> {
        let names: Vec<TwistName> = table(g).names().collect();
        prop::collection::vec((0..names.len(), prop::sample::select(vec![-1, 1])), 0..=max)
            .prop_map(move |v| MappingClassWord::new(table(g), v.into_iter().map(|(i, e)| (names[i], e)).collect()).unwrap())
    }

    fn arb_spec(g: u32, max: usize) -> impl Strategy<Value = CurveSpec> {
        let bases: Vec<TwistName> = table(g).curve_bases().map(|e| e.name).collect();
        (prop::sample::select(bases), arb_word(g, max)).prop_map(move |(b, w)| CurveSpec::new(table(g), b, w).unwrap())
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]

        #[test]
        fn reports_are_consistent_and_symmetric(a in arb_spec(2, 3), b in arb_spec(2, 3)) {
            let t = table(2);
            let r = classify_pair(t, &a, &b, 3).unwrap();
            prop_assert!(r.violations.is_empty(), "{:?}", r);
            let s = classify_pair(t, &b, &a, 3).unwrap();
            prop_assert_eq!(r.ijf, s.ijf);
            prop_assert_eq!(r.commuting, s.commuting);
            prop_assert_eq!(r.algebraic, -s.algebraic);
        }

        #[test]
        fn ijf_is_invariant_under_moving_both_curves(a in arb_spec(2, 2), b in arb_spec(2, 2), g in arb_word(2, 2)) {
            let t = table(2);
            let before = ijf(t, &a, &b, 3).unwrap();
            let after = ijf(t, &a.moved_by(&g).unwrap(), &b.moved_by(&g).unwrap(), 3).unwrap();
            prop_assert_eq!(before, after);
        }

        #[test]
        fn depth_is_a_conjugacy_invariant(u in arb_word(2, 4), g in arb_word(2, 3)) {
            let t = table(2);
            let f = t.evaluate(&u).unwrap();
            let h = t.evaluate(&g).unwrap();
            prop_assert_eq!(johnson_depth(&f, 3).unwrap(), johnson_depth(&f.conjugate_by(&h).unwrap(), 3).unwrap());
            let sep = t.twist(TwistName::Separating(1)).unwrap().conjugate_by(&f).unwrap();
            prop_assert_eq!(johnson_depth(&sep, 3).unwrap(), JFDepth::Exact(2));
        }
    }
}
