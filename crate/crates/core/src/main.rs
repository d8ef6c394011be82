use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use twistjf::experiments;
use twistjf::jfilt::{classify_pair, Fact5Verdict};
use twistjf::mcg::validate_relations;
use twistjf::report::{render, OutputFormat, RunConfig, TableSummary};
use twistjf::{CurveSpec, Error, TwistTable};

/// Exact detectors of curve intersection via Dehn twists and the Johnson
/// filtration.
#[derive(Parser)]
#[command(name = "twistjf", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct Common {
    /// Output format: json or csv.
    #[arg(long, default_value = "json")]
    format: OutputFormat,
    /// Write the report here instead of stdout.
    #[arg(long)]
    output: Option<PathBuf>,
    /// Directory holding genus<N>.tbl twist tables (defaults to the built-in copies).
    #[arg(long)]
    table_dir: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Check the twist table against the mapping class group relations.
    Validate {
        #[arg(long)]
        genus: u32,
        #[command(flatten)]
        common: Common,
    },
    /// Classify a pair of curves.
    Pair {
        #[arg(long)]
        genus: u32,
        #[arg(long)]
        c1: String,
        #[arg(long)]
        c2: String,
        #[arg(long, default_value_t = 3)]
        cap: usize,
        #[command(flatten)]
        common: Common,
    },
    /// Nested commutators of two separating twists deep in the Johnson filtration.
    Corollary {
        #[arg(long, default_value_t = 2)]
        genus: u32,
        #[arg(long, default_value_t = 4)]
        cap: usize,
        #[command(flatten)]
        common: Common,
    },
    /// Classify random curve pairs and check the consistency constraints.
    Scan {
        #[arg(long, default_value_t = 2)]
        genus: u32,
        #[arg(long, default_value_t = 100)]
        samples: usize,
        #[arg(long)]
        seed: u64,
        #[arg(long, default_value_t = 4)]
        max_conj_len: usize,
        #[arg(long, default_value_t = 3)]
        cap: usize,
        #[command(flatten)]
        common: Common,
    },
    /// Fox calculus identities and multiplicativity of the Magnus representation.
    Foxcheck {
        #[arg(long, default_value_t = 2)]
        genus: u32,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 100)]
        words: usize,
        #[arg(long, default_value_t = 20)]
        pairs: usize,
        /// Number of separating pairs to search for Magnus-kernel commutators (0 skips).
        #[arg(long, default_value_t = 0)]
        suzuki_budget: usize,
        #[command(flatten)]
        common: Common,
    },
    /// Check commutator inclusions [M(k), M(l)] in M(k+l) on random samples.
    Morita {
        #[arg(long, default_value_t = 2)]
        genus: u32,
        #[arg(long, default_value_t = 20)]
        samples: usize,
        #[arg(long)]
        seed: u64,
        #[arg(long, default_value_t = 2)]
        max_conj_len: usize,
        #[command(flatten)]
        common: Common,
    },
    /// Look for separating curves moved by random non-central mapping classes.
    Fact5 {
        #[arg(long, default_value_t = 2)]
        genus: u32,
        #[arg(long, default_value_t = 10)]
        samples: usize,
        #[arg(long)]
        seed: u64,
        #[arg(long, default_value_t = 50)]
        budget: usize,
        #[command(flatten)]
        common: Common,
    },
    /// Search curves that distinguish the built-in fixture pairs.
    Witness {
        #[arg(long, default_value_t = 100)]
        budget: usize,
        #[command(flatten)]
        common: Common,
    },
    /// List the twist table.
    Table {
        #[arg(long)]
        genus: u32,
        #[command(flatten)]
        common: Common,
    },
}

enum Failure {
    Usage(String),
    Violation,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

enum TableRef {
    Builtin(&'static TwistTable),
    Owned(Box<TwistTable>),
}

impl TableRef {
    fn get(&self) -> &TwistTable {
        match self {
            TableRef::Builtin(t) => t,
            TableRef::Owned(t) => t,
        }
    }
}

fn load_table(genus: u32, dir: Option<&Path>) -> Result<TableRef, Error> {
    match dir {
        None => TwistTable::builtin(genus).map(TableRef::Builtin),
        Some(d) => {
            let t = TwistTable::from_file(&d.join(format!("genus{genus}.tbl")))?;
            if t.genus().get() != genus {
                return Err(Error::GenusMismatch { left: genus, right: t.genus().get() });
            }
            Ok(TableRef::Owned(Box::new(t)))
        }
    }
}

fn config(genus: u32, common: &Common) -> RunConfig {
    RunConfig { genus, output_format: common.format, output_path: common.output.clone(), ..Default::default() }
}

fn emit(text: &str, config: &RunConfig) -> Result<(), Failure> {
    match &config.output_path {
        Some(p) => std::fs::write(p, text).map_err(|e| Failure::Usage(format!("{}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn verdict(ok: bool) -> Result<(), Failure> {
    if ok {
        Ok(())
    } else {
        Err(Failure::Violation)
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Validate { genus, common } => {
            let table = load_table(genus, common.table_dir.as_deref())?;
            let cfg = config(genus, &common);
            let report = validate_relations(table.get())?;
            emit(&render("validate", &cfg, &report)?, &cfg)?;
            verdict(report.all_passed())
        }
        Command::Pair { genus, c1, c2, cap, common } => {
            let table = load_table(genus, common.table_dir.as_deref())?;
            let t = table.get();
            let a = CurveSpec::parse(t, &c1).map_err(|e| Failure::Usage(format!("--c1: {e}")))?;
            let b = CurveSpec::parse(t, &c2).map_err(|e| Failure::Usage(format!("--c2: {e}")))?;
            let cfg = RunConfig { depth_cap: Some(cap), ..config(genus, &common) };
            let report = classify_pair(t, &a, &b, cap)?;
            emit(&render("pair", &cfg, &report)?, &cfg)?;
            verdict(report.violations.is_empty())
        }
        Command::Corollary { genus, cap, common } => {
            let table = load_table(genus, common.table_dir.as_deref())?;
            let cfg = RunConfig { depth_cap: Some(cap), ..config(genus, &common) };
            let report = experiments::corollary(table.get(), cap)?;
            emit(&render("corollary", &cfg, &report)?, &cfg)?;
            verdict(report.rows.is_empty() || report.all_passed())
        }
        Command::Scan { genus, samples, seed, max_conj_len, cap, common } => {
            let table = load_table(genus, common.table_dir.as_deref())?;
            let cfg = RunConfig {
                depth_cap: Some(cap),
                sample_count: Some(samples),
                rng_seed: Some(seed),
                max_conjugator_len: Some(max_conj_len),
                ..config(genus, &common)
            };
            let report = experiments::scan(table.get(), samples, seed, max_conj_len, cap)?;
            emit(&render("scan", &cfg, &report)?, &cfg)?;
            verdict(report.violations == 0)
        }
        Command::Foxcheck { genus, seed, words, pairs, suzuki_budget, common } => {
            let table = load_table(genus, common.table_dir.as_deref())?;
            let cfg = RunConfig {
                sample_count: Some(words),
                rng_seed: Some(seed),
                budget: Some(suzuki_budget),
                ..config(genus, &common)
            };
            let report = experiments::foxcheck(table.get(), seed, words, pairs, suzuki_budget)?;
            emit(&render("foxcheck", &cfg, &report)?, &cfg)?;
            verdict(report.all_passed())
        }
        Command::Morita { genus, samples, seed, max_conj_len, common } => {
            let table = load_table(genus, common.table_dir.as_deref())?;
            let cfg = RunConfig {
                sample_count: Some(samples),
                rng_seed: Some(seed),
                max_conjugator_len: Some(max_conj_len),
                ..config(genus, &common)
            };
            let report = experiments::morita_samples(table.get(), samples, seed, max_conj_len)?;
            emit(&render("morita", &cfg, &report)?, &cfg)?;
            verdict(report.iter().all(|s| s.holds))
        }
        Command::Fact5 { genus, samples, seed, budget, common } => {
            let table = load_table(genus, common.table_dir.as_deref())?;
            let cfg = RunConfig {
                sample_count: Some(samples),
                rng_seed: Some(seed),
                budget: Some(budget),
                ..config(genus, &common)
            };
            let report = experiments::fact5_samples(table.get(), samples, seed, budget)?;
            emit(&render("fact5", &cfg, &report)?, &cfg)?;
            let ok = report.iter().all(|s| match s.verdict {
                Fact5Verdict::FixesAllSampled { .. } => s.central,
                Fact5Verdict::Moves { .. } => !s.central,
            });
            verdict(ok)
        }
        Command::Witness { budget, common } => {
            let cfg = RunConfig { budget: Some(budget), ..config(0, &common) };
            let report = experiments::witness_fixtures(budget)?;
            emit(&render("witness", &cfg, &report)?, &cfg)?;
            verdict(report.iter().all(|w| w.witness.is_some()))
        }
        Command::Table { genus, common } => {
            let table = load_table(genus, common.table_dir.as_deref())?;
            let cfg = config(genus, &common);
            emit(&render("table", &cfg, &TableSummary::of(table.get()))?, &cfg)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Violation) => ExitCode::from(1),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
