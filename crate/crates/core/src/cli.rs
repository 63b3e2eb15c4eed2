//! Command-line front end. [`run`] parses arguments, dispatches, and returns
//! the exit code with the rendered output so it can be tested in-process.

use std::sync::Arc;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::complexes::{homotopy_equal, rouquier, weight_axiom_suite, SuiteReport};
use crate::complexes::{bigraded_axiom_suite, transversality_suite};
use crate::coxeter::{CoxeterError, CoxeterSystem};
use crate::hecke::{braid_element, homfly_pt, hom_rank_pairing, HeckeElement};
use crate::homology::{euler_characteristic, strand_system, triply_graded_with_window};
use crate::mixed_point::{hom_graded, induce, MixedObject};
use crate::sampling::{self, Shape, DEFAULT_SEED};
use crate::soergel::{bott_samelson, decompose, graded_hom_rank_with_window, HomWindow};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_COMPUTE: i32 = 3;

#[derive(Debug, thiserror::Error)]
enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Compute(String),
}

impl From<CoxeterError> for CliError {
    fn from(e: CoxeterError) -> Self {
        CliError::Usage(e.to_string())
    }
}

fn compute<E: std::fmt::Display>(e: E) -> CliError {
    CliError::Compute(e.to_string())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Pretty,
}

#[derive(Debug, Parser)]
#[command(name = "graded-hecke", version, about = "Graded Hecke category computations")]
struct Args {
    #[arg(long, value_enum, default_value = "json", global = true)]
    format: Format,
    /// Seed for randomized suites.
    #[arg(long, default_value_t = DEFAULT_SEED, global = true)]
    seed: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Kazhdan–Lusztig basis element b_w in the standard basis.
    Kl { system: String, word: String },
    /// Decompose a Bott–Samelson bimodule into indecomposables.
    Decompose { system: String, word: String },
    /// Graded rank of Hom between two Bott–Samelson bimodules, with the Hecke pairing.
    Homrank { system: String, word1: String, word2: String },
    /// Minimal Rouquier complex of a braid word such as "s1 s2 -s1".
    Rouquier { system: String, braid: String },
    /// Class of the Rouquier complex in the Hecke algebra.
    Kclass { system: String, braid: String },
    /// Whether two braid words give homotopy equivalent Rouquier complexes.
    HomotopyEq { system: String, braid1: String, braid2: String },
    /// HOMFLY-PT polynomial of a braid closure, optionally with triply graded homology.
    Homfly {
        strands: usize,
        #[arg(default_value = "")]
        braid: String,
        #[arg(long)]
        homology: bool,
    },
    /// Graded Hom of the unit over pt_2, viewed over pt_1 and over pt_2.
    MixedDemo,
    /// Weight-structure axioms and transversality checks on seeded samples.
    WeightSuite {
        #[arg(long, default_value_t = 50)]
        samples: usize,
    },
}

/// A command result: a JSON document plus a flat table for csv and pretty output.
struct Report {
    json: Value,
    header: Vec<&'static str>,
    rows: Vec<Vec<String>>,
    ok: bool,
}

impl Report {
    fn new(json: Value, header: Vec<&'static str>, rows: Vec<Vec<String>>) -> Self {
        Report { json, header, rows, ok: true }
    }

    fn render(&self, format: Format) -> String {
        match format {
            Format::Json => serde_json::to_string_pretty(&self.json).expect("serializable") + "\n",
            Format::Csv => {
                let mut w = csv::Writer::from_writer(Vec::new());
                w.write_record(&self.header).expect("in-memory write");
                for r in &self.rows {
                    w.write_record(r).expect("in-memory write");
                }
                String::from_utf8(w.into_inner().expect("in-memory write")).expect("utf-8")
            }
            Format::Pretty => {
                let mut widths: Vec<usize> = self.header.iter().map(|h| h.chars().count()).collect();
                for r in &self.rows {
                    for (w, x) in widths.iter_mut().zip(r) {
                        *w = (*w).max(x.chars().count());
                    }
                }
                let line = |cells: Vec<&str>| {
                    let padded: Vec<String> = cells.iter().zip(&widths).map(|(c, &w)| format!("{c:<w$}")).collect();
                    padded.join("  ").trim_end().to_string() + "\n"
                };
                let mut out = line(self.header.clone());
                out += &line(widths.iter().map(|&w| "-".repeat(w)).collect::<Vec<_>>().iter().map(String::as_str).collect());
                for r in &self.rows {
                    out += &line(r.iter().map(String::as_str).collect());
                }
                out
            }
        }
    }
}

/// Exit code, standard output and standard error of one invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

pub fn run<I, T>(argv: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let args = match Args::try_parse_from(argv) {
        Ok(a) => a,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            return if code == EXIT_OK {
                Outcome { code, stdout: text, stderr: String::new() }
            } else {
                Outcome { code, stdout: String::new(), stderr: text }
            };
        }
    };
    match dispatch(&args) {
        Ok(r) => Outcome {
            code: if r.ok { EXIT_OK } else { EXIT_COMPUTE },
            stdout: r.render(args.format),
            stderr: String::new(),
        },
        Err(CliError::Usage(m)) => Outcome { code: EXIT_USAGE, stdout: String::new(), stderr: format!("error: {m}\n") },
        Err(CliError::Compute(m)) => Outcome { code: EXIT_COMPUTE, stdout: String::new(), stderr: format!("error: {m}\n") },
    }
}

fn system(name: &str) -> Result<Arc<CoxeterSystem>, CliError> {
    Ok(CoxeterSystem::parse(name)?)
}

fn dispatch(args: &Args) -> Result<Report, CliError> {
    match &args.command {
        Command::Kl { system: s, word } => kl(&system(s)?, word),
        Command::Decompose { system: s, word } => decompose_cmd(&system(s)?, word),
        Command::Homrank { system: s, word1, word2 } => homrank(&system(s)?, word1, word2),
        Command::Rouquier { system: s, braid } => rouquier_cmd(&system(s)?, braid),
        Command::Kclass { system: s, braid } => kclass(&system(s)?, braid),
        Command::HomotopyEq { system: s, braid1, braid2 } => homotopy_eq(&system(s)?, braid1, braid2, args.seed),
        Command::Homfly { strands, braid, homology } => homfly(*strands, braid, *homology),
        Command::MixedDemo => mixed_demo(),
        Command::WeightSuite { samples } => weight_suite(*samples, args.seed),
    }
}

fn kl(sys: &Arc<CoxeterSystem>, word: &str) -> Result<Report, CliError> {
    let w = sys.from_word(&sys.parse_word(word)?);
    let b = HeckeElement::kl(sys, w);
    let rows: Vec<Vec<String>> = b.terms().map(|(x, p)| vec![sys.word_compact(x), p.to_string()]).collect();
    let coeffs: Vec<Value> = rows.iter().map(|r| json!({"x": r[0], "poly": r[1]})).collect();
    Ok(Report::new(json!({"word": sys.word_compact(w), "coefficients": coeffs}), vec!["x", "poly"], rows))
}

fn decompose_cmd(sys: &Arc<CoxeterSystem>, word: &str) -> Result<Report, CliError> {
    let bs = bott_samelson(sys, &sys.parse_word(word)?).map_err(compute)?;
    let d = decompose(&bs).map_err(compute)?;
    let rows: Vec<Vec<String>> = d
        .summands
        .iter()
        .map(|s| vec![sys.word_compact(s.element), s.shift.to_string(), s.multiplicity.to_string()])
        .collect();
    let summands: Vec<Value> = d
        .summands
        .iter()
        .map(|s| json!({"element": sys.word_compact(s.element), "shift": s.shift, "multiplicity": s.multiplicity}))
        .collect();
    let json = json!({
        "system": sys.name(),
        "word": word,
        "summands": summands,
        "split_verified": d.verify(&bs),
        "character": d.character(sys).to_kl_basis().to_string(),
    });
    Ok(Report::new(json, vec!["element", "shift", "multiplicity"], rows))
}

fn homrank(sys: &Arc<CoxeterSystem>, w1: &str, w2: &str) -> Result<Report, CliError> {
    let (a, b) = (sys.parse_word(w1)?, sys.parse_word(w2)?);
    let (x, y) = (bott_samelson(sys, &a).map_err(compute)?, bott_samelson(sys, &b).map_err(compute)?);
    let rank = graded_hom_rank_with_window(&x, &y, HomWindow::from_env()).map_err(compute)?;
    let pairing =
        hom_rank_pairing(&HeckeElement::bs_product(sys, &a), &HeckeElement::bs_product(sys, &b)).map_err(compute)?;
    let json = json!({
        "system": sys.name(),
        "word1": w1,
        "word2": w2,
        "rank": rank.to_string(),
        "pairing": pairing.to_string(),
        "agree": rank == pairing,
    });
    let rows = vec![vec![w1.to_string(), w2.to_string(), rank.to_string(), pairing.to_string()]];
    Ok(Report::new(json, vec!["word1", "word2", "rank", "pairing"], rows))
}

fn rouquier_cmd(sys: &Arc<CoxeterSystem>, braid: &str) -> Result<Report, CliError> {
    let c = rouquier(sys, &sys.parse_signed_word(braid)?).map_err(compute)?;
    let rows = c
        .degrees()
        .flat_map(|d| c.term(d).iter().map(move |p| vec![d.to_string(), p.label.clone(), p.bimodule.rank().to_string()]))
        .collect();
    let mut json = c.to_json();
    json["braid"] = json!(braid);
    Ok(Report::new(json, vec!["degree", "summand", "rank"], rows))
}

fn kclass(sys: &Arc<CoxeterSystem>, braid: &str) -> Result<Report, CliError> {
    let word = sys.parse_signed_word(braid)?;
    let class = rouquier(sys, &word).map_err(compute)?.k_class().map_err(compute)?;
    let expected = braid_element(sys, &word);
    let rows = class.terms().map(|(x, p)| vec![sys.word_compact(x), p.to_string()]).collect();
    let json = json!({
        "braid": braid,
        "k_class": class.to_string(),
        "braid_element": expected.to_string(),
        "agree": class == expected,
    });
    Ok(Report::new(json, vec!["x", "coefficient"], rows))
}

fn homotopy_eq(sys: &Arc<CoxeterSystem>, b1: &str, b2: &str, seed: u64) -> Result<Report, CliError> {
    let (w1, w2) = (sys.parse_signed_word(b1)?, sys.parse_signed_word(b2)?);
    let (c, d) = (rouquier(sys, &w1).map_err(compute)?, rouquier(sys, &w2).map_err(compute)?);
    let eq = homotopy_equal(&c, &d, seed).map_err(compute)?;
    let json = json!({"braid1": b1, "braid2": b2, "homotopy_equivalent": eq});
    Ok(Report::new(json, vec!["braid1", "braid2", "homotopy_equivalent"], vec![vec![b1.into(), b2.into(), eq.to_string()]]))
}

fn homfly(strands: usize, braid: &str, homology: bool) -> Result<Report, CliError> {
    if strands == 0 {
        return Err(CliError::Usage("at least one strand is required".into()));
    }
    let sys = if strands > 1 { Some(strand_system(strands).map_err(compute)?) } else { None };
    let word = match &sys {
        Some(s) => s.parse_signed_word(braid)?,
        None if braid.split_whitespace().all(|t| t == "e") => vec![],
        None => return Err(CliError::Usage(format!("a braid on one strand has no generators, got {braid:?}"))),
    };
    let p = homfly_pt(sys.as_ref(), strands, &word).map_err(compute)?;
    let mut json = json!({"strands": strands, "braid": braid, "homfly_pt": p.to_string()});
    let mut rows = vec![vec!["homfly_pt".to_string(), p.to_string()]];
    let mut header = vec!["quantity", "value"];
    if homology {
        let t = triply_graded_with_window(strands, &word, HomWindow::from_env()).map_err(compute)?;
        let euler = euler_characteristic(&t).to_string();
        let table = t.to_json();
        json["entries"] = table["entries"].clone();
        json["window"] = json!([t.low, t.high]);
        json["euler"] = json!(euler);
        rows = t.dims.iter().map(|(&(h, g, c), d)| vec![h.to_string(), g.to_string(), c.to_string(), d.to_string()]).collect();
        header = vec!["h", "g", "c", "dim"];
    }
    Ok(Report::new(json, header, rows))
}

fn mixed_demo() -> Result<Report, CliError> {
    let unit2 = MixedObject::unit(2);
    let over1 = induce(&unit2, 1).map_err(compute)?;
    let d1 = hom_graded(&over1, &over1).map_err(compute)?.total_dim();
    let d2 = hom_graded(&unit2, &unit2).map_err(compute)?.total_dim();
    let json = json!({"over_pt1": d1, "over_pt2": d2});
    let rows = vec![vec!["pt1".into(), d1.to_string()], vec!["pt2".into(), d2.to_string()]];
    Ok(Report::new(json, vec!["base", "graded_hom_dim"], rows))
}

fn weight_suite(samples: usize, seed: u64) -> Result<Report, CliError> {
    let mut rng = sampling::rng(seed);
    let sys = CoxeterSystem::named("A2").map_err(compute)?;
    let complexes = (0..6).map(|_| sampling::random_bs_complex(&sys, &mut rng, 3)).collect::<Result<Vec<_>, _>>().map_err(compute)?;
    let bigraded: Vec<_> = (0..samples).map(|_| sampling::random_bigraded(&mut rng, Shape::default())).collect();
    let pure: Vec<_> = (0..samples).map(|_| sampling::random_pure(&mut rng, Shape::default())).collect();
    let suites: [(&str, SuiteReport); 3] = [
        ("bimodule complexes", weight_axiom_suite(&complexes)),
        ("bigraded", bigraded_axiom_suite(&bigraded)),
        ("transversality", transversality_suite(&bigraded, &pure)),
    ];
    let mut rows = Vec::new();
    let mut summary = Vec::new();
    let mut ok = true;
    for (name, report) in &suites {
        let mut checks: Vec<&str> = report.entries.iter().map(|e| e.check.as_str()).collect();
        checks.dedup();
        checks.sort_unstable();
        checks.dedup();
        for check in checks {
            let of: Vec<_> = report.entries.iter().filter(|e| e.check == check).collect();
            let failed = of.iter().filter(|e| !e.passed).count();
            rows.push(vec![name.to_string(), check.to_string(), of.len().to_string(), failed.to_string(), if failed == 0 { "pass" } else { "FAIL" }.to_string()]);
        }
        ok &= report.all_passed();
        let failures: Vec<Value> = report.failures().iter().map(|e| json!({"check": e.check, "subject": e.subject})).collect();
        summary.push(json!({"suite": name, "checks": report.entries.len(), "failures": failures}));
    }
    let json = json!({"seed": seed, "suites": summary, "all_passed": ok});
    let mut r = Report::new(json, vec!["suite", "check", "cases", "failed", "result"], rows);
    r.ok = ok;
    Ok(r)
}
