//! Command-line driver: regenerate and verify the table of codimension-2 Fano
//! complete intersections.

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};

use wcirig::centers::search_test_classes;
use wcirig::conditions::{audit_conditions, load_conditions, shipped_conditions, ConditionRecord};
use wcirig::enumerate::enumerate;
use wcirig::family::{load_database, Database, MethodTag};
use wcirig::poly::CoefficientSeed;
use wcirig::rational::fmt_rational;
use wcirig::report::{all_reports, diff_family, family_report, render, summarize, Format, ReportOptions};
use wcirig::sarkisov::{row_identities, Corruption};

#[derive(Parser)]
#[command(name = "wcirig", version, about = "Birational rigidity certificates for codimension-2 Fano 3-folds")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum OutFormat {
    Md,
    Json,
    Csv,
}

impl From<OutFormat> for Format {
    fn from(f: OutFormat) -> Format {
        match f {
            OutFormat::Md => Format::Markdown,
            OutFormat::Json => Format::Json,
            OutFormat::Csv => Format::Csv,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Classify every center of one family.
    Classify {
        #[arg(long)]
        family: u32,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, value_enum, default_value = "md")]
        format: OutFormat,
    },
    /// Regenerate the whole table.
    Table {
        #[arg(long)]
        all: bool,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, value_enum, default_value = "md")]
        format: OutFormat,
    },
    /// Diff the computation against the database.
    Verify {
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
    /// Run the symbolic identities for involution and link rows.
    Symbolic {
        #[arg(long)]
        family: Option<u32>,
        #[arg(long, default_value_t = 3)]
        seeds: u64,
        /// Perturb the named identity to exercise failure reporting.
        #[arg(long)]
        corrupt: Option<String>,
    },
    /// Scan weight and degree tuples for terminal quasismooth candidates.
    Enumerate {
        #[arg(long)]
        max_weight: u32,
        #[arg(long)]
        max_degree: u32,
    },
    /// Check the recorded generality conditions for consistency.
    Audit {
        #[arg(long)]
        family: Option<u32>,
    },
    /// List every valid test class at the singular points of one family.
    Search {
        #[arg(long)]
        family: u32,
    },
}

enum Outcome {
    Verified,
    Mismatch,
}

fn database() -> Result<Database> {
    match std::env::var_os("WCIRIG_DB") {
        Some(p) => load_database(&PathBuf::from(&p)).with_context(|| format!("loading {}", PathBuf::from(p).display())),
        None => Ok(Database::shipped()),
    }
}

fn conditions(db: &Database) -> Result<BTreeMap<u32, ConditionRecord>> {
    match std::env::var_os("WCIRIG_CONDITIONS") {
        Some(p) => load_conditions(&PathBuf::from(&p), db).context("loading conditions"),
        None => Ok(shipped_conditions(db)),
    }
}

fn family(db: &Database, id: u32) -> Result<&(wcirig::family::FamilyRecord, wcirig::family::TableAnnotation)> {
    db.get(id).with_context(|| format!("no family {id} in the database"))
}

fn run(cli: Cli) -> Result<Outcome> {
    let db = database()?;
    let outcome = |ok: bool| if ok { Outcome::Verified } else { Outcome::Mismatch };
    match cli.command {
        Command::Classify { family: id, seed, format } => {
            let conds = conditions(&db)?;
            let (f, ann) = family(&db, id)?;
            let rep = family_report(f, ann, conds.get(&id), ReportOptions { seed: Some(CoefficientSeed(seed)) });
            print!("{}", render(std::slice::from_ref(&rep), format.into()));
            for e in &rep.errors {
                eprintln!("error: {e}");
            }
            Ok(outcome(rep.ok))
        }
        Command::Table { all, seed, format } => {
            if !all {
                bail!("table requires --all");
            }
            let conds = conditions(&db)?;
            let reps = all_reports(&db, &conds, ReportOptions { seed: Some(CoefficientSeed(seed)) });
            print!("{}", render(&reps, format.into()));
            let s = summarize(&reps);
            eprintln!("{} of {} families verified", s.passed, s.families);
            Ok(outcome(s.failed.is_empty()))
        }
        Command::Verify { seed } => {
            let conds = conditions(&db)?;
            let reps = all_reports(&db, &conds, ReportOptions { seed: Some(CoefficientSeed(seed)) });
            let mut diffs = Vec::new();
            for ((f, ann), rep) in db.entries.iter().zip(&reps) {
                diffs.extend(diff_family(f, ann, rep));
            }
            for d in &diffs {
                println!("{d}");
            }
            let s = summarize(&reps);
            println!("{} diffs; rigid set of size {}: {:?}", diffs.len(), s.rigid.len(), s.rigid);
            Ok(outcome(diffs.is_empty()))
        }
        Command::Symbolic { family: only, seeds, corrupt } => {
            if seeds == 0 {
                bail!("--seeds must be positive");
            }
            if let Some(id) = only {
                family(&db, id)?;
            }
            let mut failed = 0;
            let mut passed = 0;
            for (f, ann) in db.entries.iter().filter(|(f, _)| only.is_none_or(|id| id == f.id)) {
                for p in ann.points() {
                    for s in 1..=seeds {
                        let Some(res) = row_identities(f, p, CoefficientSeed(s), Corruption(corrupt.as_deref())) else {
                            continue;
                        };
                        let tag = match &p.method {
                            MethodTag::Qi => "QI",
                            MethodTag::Ei => "EI",
                            _ => "LINK",
                        };
                        match res {
                            Ok(r) if r.passed() => {
                                passed += 1;
                                println!("No.{} {} {tag} seed {s}: PASS", f.id, p.stratum_label());
                            }
                            Ok(r) => {
                                failed += 1;
                                for c in r.checks.iter().filter(|c| !c.holds) {
                                    let why = c.residual.as_deref().unwrap_or("");
                                    println!("No.{} {} {tag} seed {s}: FAIL {} {why}", f.id, p.stratum_label(), c.name);
                                }
                            }
                            Err(e) => {
                                failed += 1;
                                println!("No.{} {} {tag} seed {s}: FAIL {e}", f.id, p.stratum_label());
                            }
                        }
                    }
                }
            }
            println!("{passed} passed, {failed} failed");
            Ok(outcome(failed == 0))
        }
        Command::Enumerate { max_weight, max_degree } => {
            if max_weight == 0 || max_degree == 0 {
                bail!("bounds must be positive");
            }
            let found = enumerate(max_weight, max_degree, &db);
            for c in &found {
                let w: Vec<String> = c.weights.iter().map(|a| a.to_string()).collect();
                let id = c.known.map(|n| format!(" No.{n}")).unwrap_or_default();
                println!("X_{{{},{}}} in P({}) {}{id}", c.degrees[0], c.degrees[1], w.join(","), c.flag());
            }
            let known = found.iter().filter(|c| c.known.is_some()).count();
            eprintln!("{} candidates, {known} known, {} extra", found.len(), found.len() - known);
            Ok(Outcome::Verified)
        }
        Command::Audit { family: only } => {
            let conds = conditions(&db)?;
            let mut ok = true;
            for (id, rec) in conds.iter().filter(|(id, _)| only.is_none_or(|n| n == **id)) {
                let (f, _) = family(&db, *id)?;
                let rep = audit_conditions(f, rec);
                for item in &rep.items {
                    println!("No.{id} {}: {} {}", item.check, if item.ok { "PASS" } else { "FAIL" }, item.detail);
                }
                ok &= rep.ok();
            }
            Ok(outcome(ok))
        }
        Command::Search { family: id } => {
            let (f, ann) = family(&db, id)?;
            for p in ann.points() {
                for (t, v) in search_test_classes(f, p) {
                    println!("{} {}: TEST_CLASS({},{}) value {}", p.stratum_label(), p.type_string(), t.b, t.e, fmt_rational(&v));
                }
            }
            Ok(Outcome::Verified)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli) {
        Ok(Outcome::Verified) => ExitCode::SUCCESS,
        Ok(Outcome::Mismatch) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
