//! Seeded experiments built on the detectors: random pair scans, nested
//! separating commutators deep in the Johnson filtration, Morita
//! inclusions, curve-moving and witness searches, and Fox calculus checks.
//!
//! Every function is deterministic in its arguments. Parallel work is merged
//! back in input order.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::One;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::curve::{resolve, symplectic_form, CurveSpec};
use crate::error::{Error, Result};
use crate::foxrep::{fox_derivative_abelianized, magnus_rep, suzuki_scan, LaurentPoly, SuzukiHit};
use crate::jfilt::{
    classify_resolved, distinguishing_witness, fact5_instance, in_mk, johnson_depth, morita_check, Fact5Verdict,
    JFDepth, PairReport,
};
use crate::mcg::{FreeAutomorphism, MappingClassWord, TwistKind, TwistName, TwistTable};
use crate::word::Word;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Random word of length `0..=max_len` in chain twists to the power ±1.
pub fn random_word<R: Rng>(table: &TwistTable, rng: &mut R, max_len: usize) -> MappingClassWord {
    let chains: Vec<TwistName> = table.chain_twists().map(|e| e.name).collect();
    let len = rng.random_range(0..=max_len);
    let factors = (0..len)
        .map(|_| (chains[rng.random_range(0..chains.len())], if rng.random::<bool>() { 1 } else { -1 }))
        .collect();
    MappingClassWord::new(table, factors).expect("chain twists exist in every table")
}

/// Random curve: a uniformly chosen base moved by [`random_word`].
pub fn random_spec<R: Rng>(table: &TwistTable, rng: &mut R, max_len: usize) -> CurveSpec {
    let bases: Vec<TwistName> = table.curve_bases().map(|e| e.name).collect();
    let base = bases[rng.random_range(0..bases.len())];
    let conj = random_word(table, rng, max_len);
    CurveSpec::new(table, base, conj).expect("bases come from the table")
}

/// Random separating curve.
pub fn random_separating_spec<R: Rng>(table: &TwistTable, rng: &mut R, max_len: usize) -> Result<CurveSpec> {
    let bases: Vec<TwistName> =
        table.entries().iter().filter(|e| e.kind == TwistKind::Separating).map(|e| e.name).collect();
    if bases.is_empty() {
        return Err(Error::Precondition("no separating curves in genus 1".into()));
    }
    let base = bases[rng.random_range(0..bases.len())];
    CurveSpec::new(table, base, random_word(table, rng, max_len))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ScanReport {
    pub pairs: Vec<PairReport>,
    /// Counts of `i_JF` cases keyed by [`crate::jfilt::JFValue::label`].
    pub histogram: BTreeMap<String, usize>,
    /// Pairs with at least one broken consistency constraint.
    pub violations: usize,
}

/// Classifies `samples` random pairs drawn from `seed`.
pub fn scan(table: &TwistTable, samples: usize, seed: u64, max_len: usize, cap: usize) -> Result<ScanReport> {
    let mut r = rng(seed);
    let specs: Vec<(CurveSpec, CurveSpec)> =
        (0..samples).map(|_| (random_spec(table, &mut r, max_len), random_spec(table, &mut r, max_len))).collect();
    let pairs = specs
        .par_iter()
        .map(|(a, b)| {
            let da = resolve(table, a)?;
            let db = resolve(table, b)?;
            classify_resolved(a, &da, b, &db, cap)
        })
        .collect::<Result<Vec<_>>>()?;
    let mut histogram: BTreeMap<String, usize> =
        ["zero", "one", "exact", "at_least"].iter().map(|k| (k.to_string(), 0)).collect();
    for p in &pairs {
        *histogram.entry(p.ijf.label().to_string()).or_default() += 1;
    }
    let violations = pairs.iter().filter(|p| !p.violations.is_empty()).count();
    Ok(ScanReport { pairs, histogram, violations })
}

/// One nested commutator `w_m`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CorollaryRow {
    pub m: usize,
    /// Level predicted by the Morita inclusion: `2m + 2`.
    pub expected_level: usize,
    /// `Some(in M(expected_level))` when the level is within the cap.
    pub in_expected_level: Option<bool>,
    pub depth: JFDepth,
    pub nontrivial: bool,
    pub max_image_len: usize,
}

/// A finite-level representation that fails to detect a nontrivial
/// commutator of twists.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NonDetection {
    pub level: usize,
    /// The commutator acts trivially on `Γ/Γ_{level+1}`.
    pub in_kernel: bool,
    pub commutator_nontrivial: bool,
    pub central: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CorollaryReport {
    pub a: CurveSpec,
    pub b: CurveSpec,
    pub cap: usize,
    pub commuting: bool,
    pub algebraic: i64,
    pub rows: Vec<CorollaryRow>,
    /// `levels[k-1]` is the `m` of a nontrivial `w_m` certified in `M(k)`.
    pub witnesses_by_level: Vec<Option<usize>>,
    pub non_detection: Option<NonDetection>,
    pub note: Option<String>,
}

impl CorollaryReport {
    /// Every row is nontrivial and sits where expected, and every level up
    /// to the cap has a witness.
    pub fn all_passed(&self) -> bool {
        !self.rows.is_empty()
            && self.rows.iter().all(|r| r.nontrivial && r.in_expected_level != Some(false))
            && self.witnesses_by_level.iter().all(Option::is_some)
            && self.non_detection.as_ref().is_none_or(|n| n.in_kernel && n.commutator_nontrivial && !n.central)
    }
}

/// Nested commutators `w_1 = [t_a, t_b]`, `w_{m+1} = [t_a, w_m]` of the
/// twists along `a = Sep1` and `b = Sep1 @ [C3]`, for `m ≤ cap / 2`.
pub fn corollary(table: &TwistTable, cap: usize) -> Result<CorollaryReport> {
    if table.genus().get() < 2 {
        return Err(Error::Precondition("separating curves need genus at least 2".into()));
    }
    let a = CurveSpec::parse(table, "Sep1")?;
    let b = CurveSpec::parse(table, "Sep1 @ [C3]")?;
    let da = resolve(table, &a)?;
    let db = resolve(table, &b)?;
    let ta = da.twist;
    let w1 = ta.commutator(&db.twist)?;
    let mut report = CorollaryReport {
        a,
        b,
        cap,
        commuting: w1.is_identity(),
        algebraic: symplectic_form(&da.homology, &db.homology),
        rows: Vec::new(),
        witnesses_by_level: Vec::new(),
        non_detection: None,
        note: None,
    };
    if cap < 4 {
        report.note = Some("cap below 4 cannot certify the first commutator, which lies in M(4)".into());
        return Ok(report);
    }
    let mut w = w1.clone();
    let mut levels = vec![None; cap];
    for m in 1..=cap / 2 {
        if m > 1 {
            w = match ta.commutator(&w) {
                Ok(next) => next,
                Err(Error::ImageTooLong { len, limit }) => {
                    report.note = Some(format!(
                        "w_{m} stopped: a generator image reached {len} letters (limit {limit})"
                    ));
                    break;
                }
                Err(e) => return Err(e),
            };
        }
        let expected_level = 2 * m + 2;
        let in_expected_level = if expected_level <= cap { Some(in_mk(&w, expected_level)?) } else { None };
        let depth = johnson_depth(&w, cap)?;
        let nontrivial = !w.is_identity();
        let certified = match depth {
            JFDepth::Exact(k) | JFDepth::AtLeast(k) => k,
            _ => 0,
        };
        if nontrivial {
            for slot in levels.iter_mut().take(certified) {
                slot.get_or_insert(m);
            }
        }
        report.rows.push(CorollaryRow { m, expected_level, in_expected_level, depth, nontrivial, max_image_len: w.max_image_len() });
    }
    report.witnesses_by_level = levels;
    report.non_detection = Some(NonDetection {
        level: 4,
        in_kernel: in_mk(&w1, 4)?,
        commutator_nontrivial: !w1.is_identity(),
        central: table.is_central(&w1)?,
    });
    Ok(report)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MoritaSample {
    pub kf: usize,
    pub kg: usize,
    pub f: String,
    pub g: String,
    pub holds: bool,
}

fn twist_of(table: &TwistTable, c: &CurveSpec) -> Result<FreeAutomorphism> {
    Ok(resolve(table, c)?.twist)
}

/// A nontrivial Torelli element `[t_c, t_d]` with `⟨c, d⟩ = 0`.
fn random_torelli<R: Rng>(table: &TwistTable, rng: &mut R, max_len: usize) -> Result<(String, FreeAutomorphism)> {
    loop {
        let c = random_spec(table, rng, max_len);
        let d = random_spec(table, rng, max_len);
        let dc = resolve(table, &c)?;
        let dd = resolve(table, &d)?;
        if symplectic_form(&dc.homology, &dd.homology) != 0 {
            continue;
        }
        let f = dc.twist.commutator(&dd.twist)?;
        if !f.is_identity() {
            return Ok((format!("[{c}, {d}]"), f));
        }
    }
}

/// `samples` checks of `[M(kf), M(kg)] ⊂ M(kf + kg)`, alternating between
/// `(1, 2)` and `(2, 2)`. Draws whose commutator exceeds the image limit are
/// replaced.
pub fn morita_samples(table: &TwistTable, samples: usize, seed: u64, max_len: usize) -> Result<Vec<MoritaSample>> {
    let mut r = rng(seed);
    let mut inputs = Vec::with_capacity(samples);
    while inputs.len() < samples {
        let (kf, (fname, f)) = if inputs.len() % 2 == 0 {
            (1, random_torelli(table, &mut r, max_len)?)
        } else {
            let c = random_separating_spec(table, &mut r, max_len)?;
            (2, (c.to_string(), twist_of(table, &c)?))
        };
        let d = random_separating_spec(table, &mut r, max_len)?;
        let g = twist_of(table, &d)?;
        // Pairs whose commutator is too long to expand are redrawn.
        match f.commutator(&g) {
            Err(Error::ImageTooLong { .. }) => continue,
            Err(e) => return Err(e),
            Ok(_) => inputs.push((kf, fname, f, d.to_string(), g)),
        }
    }
    inputs
        .into_par_iter()
        .map(|(kf, fname, f, gname, g)| {
            let holds = morita_check(&f, &g, kf, 2, kf + 2)?;
            Ok(MoritaSample { kf, kg: 2, f: fname, g: gname, holds })
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Fact5Sample {
    pub element: String,
    pub central: bool,
    pub verdict: Fact5Verdict,
}

/// The boundary twist followed by `samples` random non-central elements.
pub fn fact5_samples(table: &TwistTable, samples: usize, seed: u64, budget: usize) -> Result<Vec<Fact5Sample>> {
    let mut r = rng(seed);
    let delta = MappingClassWord::parse(table, "Delta")?;
    let mut words = vec![delta];
    while words.len() < samples + 1 {
        let w = random_word(table, &mut r, 4);
        if !w.is_empty() && !table.is_central(&table.evaluate(&w)?)? {
            words.push(w);
        }
    }
    words
        .into_par_iter()
        .map(|w| {
            let f = table.evaluate(&w)?;
            Ok(Fact5Sample { element: w.to_string(), central: table.is_central(&f)?, verdict: fact5_instance(table, &f, budget)? })
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WitnessResult {
    pub genus: u32,
    pub c1: CurveSpec,
    pub c2: CurveSpec,
    pub witness: Option<CurveSpec>,
}

/// Pairs of distinct curves used as fixtures for the witness search.
pub const WITNESS_FIXTURES: [(u32, &str, &str); 10] = [
    (1, "C1", "C2"),
    (1, "C1", "C1 @ [C2]"),
    (2, "C1", "C3"),
    (2, "C2", "C4"),
    (2, "C1", "C5"),
    (2, "Sep1", "C1"),
    (2, "Sep1", "Sep1 @ [C3]"),
    (2, "C3", "C3 @ [C4]"),
    (3, "C1", "C7"),
    (3, "Sep1", "Sep2"),
];

pub fn witness_fixtures(budget: usize) -> Result<Vec<WitnessResult>> {
    WITNESS_FIXTURES
        .par_iter()
        .map(|&(g, a, b)| {
            let table = TwistTable::builtin(g)?;
            let c1 = CurveSpec::parse(table, a)?;
            let c2 = CurveSpec::parse(table, b)?;
            let witness = distinguishing_witness(table, &c1, &c2, budget)?;
            Ok(WitnessResult { genus: g, c1, c2, witness })
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FoxReport {
    pub words: usize,
    pub product_rule_failures: usize,
    pub fundamental_identity_failures: usize,
    pub torelli_pairs: usize,
    pub multiplicativity_failures: usize,
    pub sep1_nontrivial: bool,
    pub suzuki_budget: usize,
    pub suzuki_hits: Option<Vec<SuzukiHit>>,
}

impl FoxReport {
    pub fn all_passed(&self) -> bool {
        self.product_rule_failures == 0
            && self.fundamental_identity_failures == 0
            && self.multiplicativity_failures == 0
            && self.sep1_nontrivial
    }
}

fn random_free_word<R: Rng>(table: &TwistTable, rng: &mut R, max_len: usize) -> Word {
    let rank = table.genus().rank() as i64;
    let len = rng.random_range(0..=max_len);
    let raw: Vec<i64> = (0..len)
        .map(|_| {
            let g = rng.random_range(1..=rank);
            if rng.random::<bool>() {
                -g
            } else {
                g
            }
        })
        .collect();
    Word::reduce(table.genus(), raw).expect("generators are in range")
}

fn random_torelli_element<R: Rng>(table: &TwistTable, rng: &mut R) -> Result<FreeAutomorphism> {
    if rng.random::<bool>() {
        let c = random_separating_spec(table, rng, 2)?;
        twist_of(table, &c)
    } else {
        Ok(random_torelli(table, rng, 2)?.1)
    }
}

/// Fox calculus identities on random words, multiplicativity of the Magnus
/// representation on random Torelli pairs, and optionally a kernel scan.
pub fn foxcheck(table: &TwistTable, seed: u64, words: usize, pairs: usize, suzuki_budget: usize) -> Result<FoxReport> {
    if table.genus().get() < 2 {
        return Err(Error::Precondition("the Torelli checks need genus at least 2".into()));
    }
    let rank = table.genus().rank();
    let mut r = rng(seed);
    let one = LaurentPoly::one(rank);
    let ab = |w: &Word| LaurentPoly::monomial(w.abelianize(), BigInt::one());
    let mut product_rule_failures = 0;
    let mut fundamental_identity_failures = 0;
    for _ in 0..words {
        let u = random_free_word(table, &mut r, 24);
        let v = random_free_word(table, &mut r, 24);
        let uv = u.multiply(&v)?;
        for i in 1..=rank {
            let lhs = fox_derivative_abelianized(&uv, i)?;
            let rhs = fox_derivative_abelianized(&u, i)?.add(&ab(&u).mul(&fox_derivative_abelianized(&v, i)?));
            if lhs != rhs {
                product_rule_failures += 1;
            }
        }
        let mut sum = LaurentPoly::zero(rank);
        for j in 1..=rank {
            let t = LaurentPoly::variable(rank, j).sub(&one);
            sum = sum.add(&fox_derivative_abelianized(&u, j)?.mul(&t));
        }
        if sum != ab(&u).sub(&one) {
            fundamental_identity_failures += 1;
        }
    }
    let mut torelli = Vec::with_capacity(pairs);
    for _ in 0..pairs {
        torelli.push((random_torelli_element(table, &mut r)?, random_torelli_element(table, &mut r)?));
    }
    let multiplicativity_failures = torelli
        .par_iter()
        .map(|(f, g)| -> Result<bool> {
            let lhs = magnus_rep(&f.compose(g)?)?;
            let rhs = magnus_rep(f)?.mul(&magnus_rep(g)?)?;
            Ok(lhs != rhs)
        })
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .filter(|&bad| bad)
        .count();
    let sep1_nontrivial = !magnus_rep(table.twist(TwistName::Separating(1))?)?.is_identity();
    let suzuki_hits = if suzuki_budget > 0 { Some(suzuki_scan(table, suzuki_budget)?) } else { None };
    Ok(FoxReport {
        words,
        product_rule_failures,
        fundamental_identity_failures,
        torelli_pairs: pairs,
        multiplicativity_failures,
        sep1_nontrivial,
        suzuki_budget,
        suzuki_hits,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn table(g: u32) -> &'static TwistTable {
        TwistTable::builtin(g).unwrap()
    }

    #[test]
    fn scan_is_deterministic_and_consistent() {
        let a = scan(table(2), 12, 7, 3, 3).unwrap();
        let b = scan(table(2), 12, 7, 3, 3).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.violations, 0);
        assert_eq!(a.histogram.values().sum::<usize>(), 12);
    }

    #[test]
    fn corollary_small_cap_is_empty() {
        let r = corollary(table(2), 3).unwrap();
        assert!(r.rows.is_empty() && r.note.is_some());
        assert!(!r.all_passed());
        assert!(corollary(table(1), 4).is_err());
    }

    #[test]
    fn corollary_cap_four() {
        let r = corollary(table(2), 4).unwrap();
        assert!(r.all_passed(), "{r:?}");
        assert_eq!(r.rows[0].in_expected_level, Some(true));
        assert!(!r.commuting);
        assert_eq!(r.algebraic, 0);
    }

    #[test]
    fn morita_and_fact5_small() {
        assert!(morita_samples(table(2), 4, 1, 2).unwrap().iter().all(|s| s.holds));
        let f = fact5_samples(table(2), 3, 1, 50).unwrap();
        assert_eq!(f[0].verdict, Fact5Verdict::FixesAllSampled { sampled: 50 });
        assert!(f[1..].iter().all(|s| matches!(s.verdict, Fact5Verdict::Moves { .. })));
    }

    #[test]
    fn fox_small() {
        let r = foxcheck(table(2), 3, 10, 4, 0).unwrap();
        assert!(r.all_passed(), "{r:?}");
        assert!(r.suzuki_hits.is_none());
    }
}
