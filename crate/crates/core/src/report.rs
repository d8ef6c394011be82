//! Versioned JSON envelopes and flat CSV projections of experiment results.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::experiments::{CorollaryReport, Fact5Sample, FoxReport, MoritaSample, ScanReport, WitnessResult};
use crate::jfilt::{Fact5Verdict, JFDepth, PairReport};
use crate::mcg::{RelationReport, TwistTable};

pub const SCHEMA: u32 = 1;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    #[default]
    Json,
    Csv,
}

impl FromStr for OutputFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "json" => Ok(OutputFormat::Json),
            "csv" => Ok(OutputFormat::Csv),
            _ => Err(Error::parse(1, format!("unknown output format `{s}` (expected json or csv)"))),
        }
    }
}

impl fmt::Display for OutputFormat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            OutputFormat::Json => "json",
            OutputFormat::Csv => "csv",
        })
    }
}

/// Parameters of a run, echoed into every report. The output path is not
/// part of the echo so that identical runs produce identical bytes.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct RunConfig {
    pub genus: u32,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub depth_cap: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sample_count: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rng_seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_conjugator_len: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub budget: Option<usize>,
    pub output_format: OutputFormat,
    #[serde(skip)]
    pub output_path: Option<std::path::PathBuf>,
}

#[derive(Serialize)]
struct Envelope<'a, T> {
    schema: u32,
    version: &'static str,
    command: &'a str,
    config: &'a RunConfig,
    result: &'a T,
}

/// Row-oriented view of a result for CSV output.
pub trait CsvTable {
    fn header(&self) -> Vec<&'static str>;
    fn rows(&self) -> Vec<Vec<String>>;
}

pub fn render_json<T: Serialize>(command: &str, config: &RunConfig, result: &T) -> Result<String> {
    let env = Envelope { schema: SCHEMA, version: crate::VERSION, command, config, result };
    let mut s = serde_json::to_string_pretty(&env).map_err(|e| Error::Precondition(e.to_string()))?;
    s.push('\n');
    Ok(s)
}

/// CSV with the schema, version and genus repeated on every row.
pub fn render_csv<T: CsvTable>(command: &str, config: &RunConfig, result: &T) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let err = |e: csv::Error| Error::Precondition(e.to_string());
    let mut header = vec!["schema", "version", "command", "genus"];
    header.extend(result.header());
    w.write_record(&header).map_err(err)?;
    for row in result.rows() {
        let mut rec = vec![SCHEMA.to_string(), crate::VERSION.to_string(), command.to_string(), config.genus.to_string()];
        rec.extend(row);
        w.write_record(&rec).map_err(err)?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Precondition(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| Error::Precondition(e.to_string()))
}

pub fn render<T: Serialize + CsvTable>(command: &str, config: &RunConfig, result: &T) -> Result<String> {
    match config.output_format {
        OutputFormat::Json => render_json(command, config, result),
        OutputFormat::Csv => render_csv(command, config, result),
    }
}

fn depth_text(d: JFDepth) -> String {
    match d {
        JFDepth::Identity => "identity".into(),
        JFDepth::NotInM1 => "not_in_m1".into(),
        JFDepth::Exact(k) => format!("exact:{k}"),
        JFDepth::AtLeast(k) => format!("at_least:{k}"),
    }
}

fn opt<T: ToString>(v: &Option<T>) -> String {
    v.as_ref().map(ToString::to_string).unwrap_or_default()
}

impl CsvTable for RelationReport {
    fn header(&self) -> Vec<&'static str> {
        vec!["relation", "kind", "passed"]
    }

    fn rows(&self) -> Vec<Vec<String>> {
        self.checks
            .iter()
            .map(|c| vec![c.name.clone(), serde_json::to_value(c.kind).unwrap().as_str().unwrap_or("").to_string(), c.passed.to_string()])
            .collect()
    }
}

fn pair_row(p: &PairReport) -> Vec<String> {
    vec![
        p.c1.to_string(),
        p.c2.to_string(),
        p.commuting.to_string(),
        p.braid.to_string(),
        p.algebraic.to_string(),
        p.ijf.label().to_string(),
        p.ijf.to_string(),
        p.depth_cap.to_string(),
        p.violations.join("; "),
    ]
}

const PAIR_HEADER: [&str; 9] = ["c1", "c2", "commuting", "braid", "algebraic", "ijf_case", "ijf", "depth_cap", "violations"];

impl CsvTable for PairReport {
    fn header(&self) -> Vec<&'static str> {
        PAIR_HEADER.to_vec()
    }

    fn rows(&self) -> Vec<Vec<String>> {
        vec![pair_row(self)]
    }
}

impl CsvTable for ScanReport {
    fn header(&self) -> Vec<&'static str> {
        let mut h = vec!["index"];
        h.extend(PAIR_HEADER);
        h
    }

    fn rows(&self) -> Vec<Vec<String>> {
        self.pairs
            .iter()
            .enumerate()
            .map(|(i, p)| {
                let mut r = vec![i.to_string()];
                r.extend(pair_row(p));
                r
            })
            .collect()
    }
}

impl CsvTable for CorollaryReport {
    fn header(&self) -> Vec<&'static str> {
        vec!["a", "b", "cap", "m", "expected_level", "in_expected_level", "depth", "nontrivial", "max_image_len"]
    }

    fn rows(&self) -> Vec<Vec<String>> {
        self.rows
            .iter()
            .map(|r| {
                vec![
                    self.a.to_string(),
                    self.b.to_string(),
                    self.cap.to_string(),
                    r.m.to_string(),
                    r.expected_level.to_string(),
                    opt(&r.in_expected_level),
                    depth_text(r.depth),
                    r.nontrivial.to_string(),
                    r.max_image_len.to_string(),
                ]
            })
            .collect()
    }
}

impl CsvTable for FoxReport {
    fn header(&self) -> Vec<&'static str> {
        vec!["check", "value"]
    }

    fn rows(&self) -> Vec<Vec<String>> {
        let mut rows = vec![
            vec!["words".into(), self.words.to_string()],
            vec!["product_rule_failures".into(), self.product_rule_failures.to_string()],
            vec!["fundamental_identity_failures".into(), self.fundamental_identity_failures.to_string()],
            vec!["torelli_pairs".into(), self.torelli_pairs.to_string()],
            vec!["multiplicativity_failures".into(), self.multiplicativity_failures.to_string()],
            vec!["sep1_nontrivial".into(), self.sep1_nontrivial.to_string()],
            vec!["suzuki_budget".into(), self.suzuki_budget.to_string()],
        ];
        if let Some(hits) = &self.suzuki_hits {
            rows.push(vec!["suzuki_hits".into(), hits.len().to_string()]);
        }
        rows
    }
}

impl CsvTable for Vec<MoritaSample> {
    fn header(&self) -> Vec<&'static str> {
        vec!["kf", "kg", "f", "g", "holds"]
    }

    fn rows(&self) -> Vec<Vec<String>> {
        self.iter().map(|s| vec![s.kf.to_string(), s.kg.to_string(), s.f.clone(), s.g.clone(), s.holds.to_string()]).collect()
    }
}

impl CsvTable for Vec<Fact5Sample> {
    fn header(&self) -> Vec<&'static str> {
        vec!["element", "central", "verdict", "moved_curve"]
    }

    fn rows(&self) -> Vec<Vec<String>> {
        self.iter()
            .map(|s| {
                let (verdict, curve) = match &s.verdict {
                    Fact5Verdict::FixesAllSampled { sampled } => (format!("fixes_all_sampled:{sampled}"), String::new()),
                    Fact5Verdict::Moves { curve } => ("moves".to_string(), curve.to_string()),
                };
                vec![s.element.clone(), s.central.to_string(), verdict, curve]
            })
            .collect()
    }
}

impl CsvTable for Vec<WitnessResult> {
    fn header(&self) -> Vec<&'static str> {
        vec!["pair_genus", "c1", "c2", "witness"]
    }

    fn rows(&self) -> Vec<Vec<String>> {
        self.iter().map(|w| vec![w.genus.to_string(), w.c1.to_string(), w.c2.to_string(), opt(&w.witness)]).collect()
    }
}

/// Summary of a twist table for listing.
#[derive(Clone, Debug, Serialize)]
pub struct TableSummary {
    pub genus: u32,
    pub boundary: String,
    pub twists: Vec<TwistSummary>,
}

#[derive(Clone, Debug, Serialize)]
pub struct TwistSummary {
    pub name: String,
    pub kind: crate::mcg::TwistKind,
    pub curve: String,
    pub homology: Vec<i64>,
    pub meets: Vec<String>,
}

impl TableSummary {
    pub fn of(table: &TwistTable) -> Self {
        TableSummary {
            genus: table.genus().get(),
            boundary: table.boundary_word().to_string(),
            twists: table
                .entries()
                .iter()
                .map(|e| TwistSummary {
                    name: e.name.to_string(),
                    kind: e.kind,
                    curve: e.curve.to_string(),
                    homology: e.homology.clone(),
                    meets: e.meets.iter().map(ToString::to_string).collect(),
                })
                .collect(),
        }
    }
}

impl CsvTable for TableSummary {
    fn header(&self) -> Vec<&'static str> {
        vec!["name", "kind", "curve", "homology", "meets"]
    }

    fn rows(&self) -> Vec<Vec<String>> {
        self.twists
            .iter()
            .map(|t| {
                let h: Vec<String> = t.homology.iter().map(ToString::to_string).collect();
                vec![t.name.clone(), t.kind.to_string(), t.curve.clone(), h.join(" "), t.meets.join(" ")]
            })
            .collect()
    }
}
