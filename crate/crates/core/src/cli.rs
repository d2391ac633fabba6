//! Command line front end.
//!
//! Exit codes: 0 on success, 1 when a property check finds a violation, 2 on
//! unreadable or invalid input.

use std::ffi::OsString;
use std::io::{Read, Write};
use std::path::PathBuf;
use std::time::Instant;

use clap::{Parser, Subcommand};
use serde_json::{json, Value};

use crate::arrowsum::{bracket_with, criteria_of, CriteriaReport, StateSumConfig};
use crate::braid::BraidWord;
use crate::check::{run_check, CheckOptions, Property};
use crate::coloring::{framing_space_connected, is_checkerboard_colorable, min_cut_points};
use crate::corpus::{default_corpus, parse_corpus};
use crate::diagram::TwistedGaussCode;
use crate::enumerate::enumerate_bar_placements;
use crate::poly::JonesSpecialization;
use crate::ArrowPolynomial;

#[derive(Parser, Debug)]
#[command(name = "twistpoly", version, about = "Arrow polynomial and colorability invariants of twisted link diagrams")]
pub struct Cli {
    /// Emit a JSON report instead of text.
    #[arg(long, global = true)]
    pub json: bool,
    /// Seed for randomized commands.
    #[arg(long, global = true, default_value_t = 42)]
    pub seed: u64,
    /// Diagram file; standard input when omitted or "-".
    #[arg(short, long, global = true)]
    pub input: Option<PathBuf>,
    /// Include wall-clock timing in the report.
    #[arg(long, global = true)]
    pub timing: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Arrow polynomial of a diagram (unnormalized unless --normalized).
    Compute {
        #[arg(long)]
        normalized: bool,
        /// Jones specialization of the normalized polynomial.
        #[arg(long)]
        jones: bool,
        #[arg(long)]
        as_set: bool,
        /// Necessary conditions for checkerboard colorability.
        #[arg(long)]
        criteria: bool,
    },
    /// Group bar placements on a bar-free diagram by normalized polynomial.
    EnumerateBars {
        #[arg(long, default_value_t = 2)]
        max_bars: usize,
    },
    /// Minimum number of cut points and an optimal framing.
    Cutpoints,
    /// Checkerboard colorability.
    Colorable,
    /// Whether moves I and II connect all checkerboard framings.
    FramingConnectivity {
        #[arg(long, default_value_t = 3)]
        bound: u32,
    },
    /// Gauss code of a braid closure.
    Closure {
        #[arg(long)]
        braid: String,
        #[arg(long)]
        strands: usize,
    },
    /// Run a property suite.
    Check {
        #[arg(long, value_parser = parse_property)]
        property: Property,
        #[arg(long, default_value_t = 20)]
        steps: usize,
        /// Corpus file; the shipped corpus when omitted.
        #[arg(long)]
        corpus: Option<PathBuf>,
        #[arg(long, default_value_t = 200)]
        walks: usize,
        #[arg(long, default_value_t = 100)]
        samples: usize,
    },
}

fn parse_property(s: &str) -> Result<Property, String> {
    s.parse()
}

struct Failure {
    code: i32,
    message: String,
}

fn input_error(message: impl Into<String>) -> Failure {
    Failure { code: 2, message: message.into() }
}

fn read_input(path: &Option<PathBuf>) -> Result<(String, String), Failure> {
    match path {
        Some(p) if p.as_os_str() != "-" => {
            let text = std::fs::read_to_string(p).map_err(|e| input_error(format!("{}: {e}", p.display())))?;
            Ok((p.display().to_string(), text))
        }
        _ => {
            let mut text = String::new();
            std::io::stdin().read_to_string(&mut text).map_err(|e| input_error(format!("<stdin>: {e}")))?;
            Ok(("<stdin>".into(), text))
        }
    }
}

fn read_diagram(path: &Option<PathBuf>) -> Result<(String, TwistedGaussCode), Failure> {
    let (name, text) = read_input(path)?;
    let d = TwistedGaussCode::parse(&text).map_err(|e| input_error(format!("{name}: {e}")))?;
    Ok((name, d))
}

fn poly_json(p: &ArrowPolynomial) -> Value {
    json!({ "text": p.to_string(), "terms": p.to_json() })
}

fn jones_json(j: &JonesSpecialization<num_bigint::BigInt>) -> Value {
    json!({ "numerator": poly_json(&j.numerator), "denominator_exp": j.denominator_exp })
}

fn criteria_text(r: &CriteriaReport) -> String {
    let mark = |b: bool| if b { "pass" } else { "fail" };
    let verdict = serde_json::to_value(r.verdict).ok().and_then(|v| v.as_str().map(String::from)).unwrap_or_default();
    format!("no-M {}, even k-degrees {}, dominant index {}: {verdict}", mark(r.no_m), mark(r.as_even), mark(r.dominant_index_bounded))
}

fn set_text(s: &std::collections::BTreeSet<u64>) -> String {
    let items: Vec<String> = s.iter().map(u64::to_string).collect();
    format!("{{{}}}", items.join(", "))
}

/// Result of one command: text lines, JSON payload and exit code.
struct Outcome {
    text: String,
    result: Value,
    input: Value,
    code: i32,
}

fn ok(text: String, input: Value, result: Value) -> Outcome {
    Outcome { text, result, input, code: 0 }
}

fn diagram_input(name: &str, d: &TwistedGaussCode) -> Value {
    json!({ "source": name, "code": d.to_string() })
}

fn execute(cli: &Cli) -> Result<Outcome, Failure> {
    let cfg = StateSumConfig::from_env();
    match &cli.command {
        Command::Compute { normalized, jones, as_set, criteria } => {
            let (name, d) = read_diagram(&cli.input)?;
            let raw = bracket_with(&d, &cfg).map_err(|e| input_error(e.to_string()))?;
            let norm = raw.normalize_by_writhe(d.writhe());
            let main = if *normalized { &norm } else { &raw };
            let mut text = vec![main.to_string()];
            let mut result = serde_json::Map::new();
            result.insert("writhe".into(), json!(d.writhe()));
            result.insert("bracket".into(), poly_json(&raw));
            result.insert("normalized".into(), poly_json(&norm));
            result.insert("as_set".into(), json!(raw.k_degree_set()));
            result.insert("m_degree_bound".into(), json!(norm.max_m_degree()));
            if *jones {
                let j = norm.specialize_jones();
                let js = norm.specialize_jones_scaled();
                text.push(format!("jones: {j}"));
                text.push(format!("jones scaled by d: {js}"));
                result.insert("jones".into(), jones_json(&j));
                result.insert("jones_scaled".into(), jones_json(&js));
            }
            if *as_set {
                text.push(format!("as-set: {}", set_text(&raw.k_degree_set())));
            }
            let report = criteria_of(&norm);
            if *criteria {
                text.push(format!("criteria: {}", criteria_text(&report)));
            }
            result.insert("criteria".into(), serde_json::to_value(&report).expect("serializable"));
            Ok(ok(text.join("\n"), diagram_input(&name, &d), Value::Object(result)))
        }
        Command::EnumerateBars { max_bars } => {
            let (name, d) = read_diagram(&cli.input)?;
            let classes = enumerate_bar_placements(&d, *max_bars).map_err(|e| input_error(e.to_string()))?;
            let mut text = vec![format!("{} distinct polynomials", classes.len())];
            for c in &classes {
                let codes: Vec<&str> = c.placements.iter().map(|p| p.code.as_str()).collect();
                text.push(format!("{}  <=  {}", c.polynomial, codes.join(" | ")));
            }
            let result = json!({
                "max_bars": max_bars,
                "classes": classes.iter().map(|c| json!({
                    "polynomial": poly_json(&c.polynomial),
                    "placements": c.placements,
                })).collect::<Vec<_>>(),
            });
            Ok(ok(text.join("\n"), diagram_input(&name, &d), result))
        }
        Command::Cutpoints => {
            let (name, d) = read_diagram(&cli.input)?;
            let r = min_cut_points(&d).map_err(|e| input_error(e.to_string()))?;
            let arcs = d.arcs();
            let mut text = vec![format!("p_d: {}", r.p_d)];
            for (k, (a, &c)) in arcs.iter().zip(&r.witness.cut_counts).enumerate() {
                if c > 0 {
                    let pos = |p: Option<usize>| p.map_or("-".to_string(), |p| d.component(a.component)[p].to_string());
                    text.push(format!("arc {k}: {} -> {} ({c} cut)", pos(a.start), pos(a.end)));
                }
            }
            Ok(ok(text.join("\n"), diagram_input(&name, &d), serde_json::to_value(&r).expect("serializable")))
        }
        Command::Colorable => {
            let (name, d) = read_diagram(&cli.input)?;
            let r = is_checkerboard_colorable(&d);
            let mut text = vec![r.colorable.to_string()];
            for c in &r.colorings {
                let bits: Vec<String> = c.iter().map(|(id, b)| format!("{id}:{}", u8::from(*b))).collect();
                text.push(format!("coloring {}", bits.join(" ")));
            }
            Ok(ok(text.join("\n"), diagram_input(&name, &d), serde_json::to_value(&r).expect("serializable")))
        }
        Command::FramingConnectivity { bound } => {
            let (name, d) = read_diagram(&cli.input)?;
            let r = framing_space_connected(&d, *bound).map_err(|e| input_error(e.to_string()))?;
            let text = format!(
                "connected: {} (bound {}, {}/{} plain framings reached, {} framings explored, max distance {}, mean distance {:.3})",
                r.connected, r.bound, r.plain_reached, r.plain_framings, r.nodes_explored, r.max_distance, r.mean_distance
            );
            Ok(ok(text, diagram_input(&name, &d), serde_json::to_value(&r).expect("serializable")))
        }
        Command::Closure { braid, strands } => {
            let w = BraidWord::parse(braid, *strands).map_err(|e| input_error(e.to_string()))?;
            let d = w.closure().map_err(|e| input_error(e.to_string()))?;
            let input = json!({ "braid": w.to_string(), "strands": strands });
            Ok(ok(d.to_string(), input, json!({ "code": d.to_string(), "components": d.components().len() })))
        }
        Command::Check { property, steps, corpus, walks, samples } => {
            let (source, entries) = match corpus {
                Some(p) => {
                    let text = std::fs::read_to_string(p).map_err(|e| input_error(format!("{}: {e}", p.display())))?;
                    let entries = parse_corpus(&text).map_err(|e| input_error(format!("{}: {e}", p.display())))?;
                    (p.display().to_string(), entries)
                }
                None => ("<shipped>".to_string(), default_corpus()),
            };
            let opts = CheckOptions { steps: *steps, seed: cli.seed, walks: *walks, samples: *samples, ..Default::default() };
            let r = run_check(*property, &entries, &opts);
            let mut text = vec![format!("{} {property}: {} cases, {} violations", if r.passed() { "PASS" } else { "FAIL" }, r.cases, r.violations.len())];
            if let Some(v) = r.smallest_violation() {
                text.push(format!("counterexample: {}", v.case));
                text.push(format!("  {}", v.detail));
            }
            let input = json!({ "corpus": source, "entries": entries.len(), "steps": steps, "walks": walks, "samples": samples });
            let result = json!({
                "property": property.name(),
                "passed": r.passed(),
                "cases": r.cases,
                "violations": r.violations.len(),
                "counterexample": r.smallest_violation(),
            });
            let code = if r.passed() { 0 } else { 1 };
            Ok(Outcome { code, ..ok(text.join("\n"), input, result) })
        }
    }
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Compute { .. } => "compute",
        Command::EnumerateBars { .. } => "enumerate-bars",
        Command::Cutpoints => "cutpoints",
        Command::Colorable => "colorable",
        Command::FramingConnectivity { .. } => "framing-connectivity",
        Command::Closure { .. } => "closure",
        Command::Check { .. } => "check",
    }
}

/// Runs the tool on `args` and returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let target: &mut dyn Write = if e.use_stderr() { err } else { out };
            let _ = write!(target, "{}", e.render());
            return code;
        }
    };
    let started = Instant::now();
    match execute(&cli) {
        Ok(o) => {
            if cli.json {
                let mut report = serde_json::Map::new();
                report.insert("tool".into(), json!("twistpoly"));
                report.insert("version".into(), json!(env!("CARGO_PKG_VERSION")));
                report.insert("command".into(), json!(command_name(&cli.command)));
                report.insert("seed".into(), json!(cli.seed));
                report.insert("input".into(), o.input);
                report.insert("result".into(), o.result);
                if cli.timing {
                    report.insert("elapsed_ms".into(), json!(started.elapsed().as_millis() as u64));
                }
                let _ = writeln!(out, "{}", serde_json::to_string_pretty(&Value::Object(report)).expect("serializable"));
            } else {
                let _ = writeln!(out, "{}", o.text);
                if cli.timing {
                    let _ = writeln!(out, "elapsed: {} ms", started.elapsed().as_millis());
                }
            }
            o.code
        }
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            f.code
        }
    }
}
