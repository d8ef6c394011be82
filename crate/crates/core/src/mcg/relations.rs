use serde::Serialize;

use super::automorphism::FreeAutomorphism;
use super::table::{TwistKind, TwistTable};
use super::{MappingClassWord, TwistName};
use crate::curve::{homology_action, symplectic_form};
use crate::error::Result;
use crate::word::Word;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum RelationKind {
    Braid,
    Commute,
    NonCommute,
    Chain,
    SubChain,
    Central,
    BoundaryConjugation,
    SeparatingConjugation,
    HomologyTrivial,
    Transvection,
    FixesCurve,
    FixesBoundary,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RelationCheck {
    pub name: String,
    pub kind: RelationKind,
    pub passed: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RelationReport {
    pub genus: u32,
    pub checks: Vec<RelationCheck>,
}

impl RelationReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &RelationCheck> {
        self.checks.iter().filter(|c| !c.passed)
    }

    fn push(&mut self, kind: RelationKind, name: String, passed: bool) {
        self.checks.push(RelationCheck { name, kind, passed });
    }
}

fn chain_word(table: &TwistTable, from: u32, to: u32, power: i32) -> Result<MappingClassWord> {
    let one: Vec<_> = (from..=to).map(|i| (TwistName::Chain(i), 1)).collect();
    let mut factors = Vec::with_capacity(one.len() * power as usize);
    for _ in 0..power {
        factors.extend_from_slice(&one);
    }
    MappingClassWord::new(table, factors)
}

/// `[x1,x2]...[x_{2j-1},x_{2j}]`.
pub(crate) fn partial_boundary(table: &TwistTable, j: u32) -> Result<Word> {
    let genus = table.genus();
    let mut d = Word::identity(genus);
    for i in 0..j as usize {
        let a = Word::generator(genus, 2 * i + 1)?;
        let b = Word::generator(genus, 2 * i + 2)?;
        d = d.multiply(&a.commutator(&b)?)?;
    }
    Ok(d)
}

/// Checks the defining relations of the table as exact automorphism
/// identities. Failures are report entries, not errors; errors come only
/// from runaway word growth.
pub fn validate_relations(table: &TwistTable) -> Result<RelationReport> {
    let g = table.genus().get();
    let mut report = RelationReport { genus: g, checks: Vec::new() };
    let delta = table.twist(TwistName::Boundary)?;

    let chains: Vec<_> = table.chain_twists().collect();
    for (i, a) in chains.iter().enumerate() {
        for b in &chains[i + 1..] {
            let commutes = a.twist.commutes_with(&b.twist)?;
            if a.meets.contains(&b.name) {
                let aba = a.twist.compose(&b.twist)?.compose(&a.twist)?;
                let bab = b.twist.compose(&a.twist)?.compose(&b.twist)?;
                report.push(RelationKind::Braid, format!("{0} {1} {0} = {1} {0} {1}", a.name, b.name), aba == bab);
                report.push(RelationKind::NonCommute, format!("{} and {} do not commute", a.name, b.name), !commutes);
            } else {
                report.push(RelationKind::Commute, format!("{} and {} commute", a.name, b.name), commutes);
            }
        }
    }

    let seps: Vec<_> = table.entries().iter().filter(|e| e.kind == TwistKind::Separating).collect();
    for s in &seps {
        for c in table.chain_twists() {
            let commutes = s.twist.commutes_with(&c.twist)?;
            if s.meets.contains(&c.name) {
                report.push(RelationKind::NonCommute, format!("{} and {} do not commute", s.name, c.name), !commutes);
            } else {
                report.push(RelationKind::Commute, format!("{} and {} commute", s.name, c.name), commutes);
            }
        }
    }
    for (i, a) in seps.iter().enumerate() {
        for b in &seps[i + 1..] {
            let commutes = a.twist.commutes_with(&b.twist)?;
            report.push(RelationKind::Commute, format!("{} and {} commute", a.name, b.name), commutes);
        }
    }

    let chain_relations: Vec<(u32, i32)> = if g == 1 { vec![(2, 6)] } else { vec![(2 * g + 1, 2 * g as i32 + 2), (2 * g, 4 * g as i32 + 2)] };
    for (len, power) in chain_relations {
        let w = chain_word(table, 1, len, power)?;
        let f = table.evaluate(&w)?;
        report.push(RelationKind::Chain, format!("(C1 ... C{len})^{power} = Delta"), &f == delta);
    }
    for j in 1..g {
        let sep = table.twist(TwistName::Separating(j))?;
        let power = 4 * j as i32 + 2;
        let f = table.evaluate(&chain_word(table, 1, 2 * j, power)?)?;
        report.push(RelationKind::SubChain, format!("(C1 ... C{})^{power} = Sep{j}", 2 * j), &f == sep);
    }

    report.push(RelationKind::Central, "Delta is central".into(), table.is_central(delta)?);
    let inner = FreeAutomorphism::inner(table.boundary_word());
    report.push(RelationKind::BoundaryConjugation, "Delta is conjugation by the boundary word".into(), &inner == delta);

    for s in &seps {
        let TwistName::Separating(j) = s.name else { continue };
        report.push(
            RelationKind::HomologyTrivial,
            format!("{} acts trivially on homology", s.name),
            homology_action(&s.twist).is_identity(),
        );
        let d = partial_boundary(table, j)?;
        let genus = table.genus();
        let mut ok = true;
        for i in 1..=genus.rank() {
            let x = Word::generator(genus, i)?;
            let expected = if i <= 2 * j as usize { x.conjugate(&d)? } else { x };
            ok &= s.twist.image(i) == &expected;
        }
        report.push(
            RelationKind::SeparatingConjugation,
            format!("{} conjugates x1..x{} by [x1,x2]...[x{},x{}]", s.name, 2 * j, 2 * j - 1, 2 * j),
            ok,
        );
    }

    for e in table.chain_twists() {
        let m = homology_action(&e.twist);
        let rank = table.genus().rank();
        let ok = (0..rank).all(|k| {
            let mut v = vec![0i64; rank];
            v[k] = 1;
            let pairing = symplectic_form(&v, &e.homology);
            let expected: Vec<i64> = v.iter().zip(&e.homology).map(|(a, h)| a + pairing * h).collect();
            m.apply(&v) == expected
        });
        report.push(RelationKind::Transvection, format!("{} acts on homology as v -> v + <v,c>c", e.name), ok);
    }

    for e in table.entries() {
        let image = e.twist.apply(&e.curve)?;
        report.push(
            RelationKind::FixesCurve,
            format!("{} fixes its own curve", e.name),
            image.cyclic_class() == e.curve.cyclic_class(),
        );
        let db = e.twist.apply(table.boundary_word())?;
        report.push(RelationKind::FixesBoundary, format!("{} fixes the boundary word", e.name), &db == table.boundary_word());
    }
    Ok(report)
}
