//! `verdier`: decide the Verdier and Gorenstein* properties of finite
//! posets, compute limits and duals of diagrams, and generate test objects.
//!
//! Exit codes: 0 the property holds, 1 it fails, 2 input error, 3 the two
//! Verdier criteria disagreed (a bug).

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use verdier_core::corpus;
use verdier_core::diagram::Diagram;
use verdier_core::duality::{self, CheckConfig, VerdictReport, INDEXING};
use verdier_core::homotopy;
use verdier_core::linalg::{HomologySummary, Ring};
use verdier_core::poset::FinitePoset;

const EXIT_PASS: u8 = 0;
const EXIT_FAIL: u8 = 1;
const EXIT_INPUT: u8 = 2;
const EXIT_INCONSISTENT: u8 = 3;

#[derive(Parser)]
#[command(name = "verdier", version, about = "Verdier and Gorenstein* deciders for finite posets")]
struct Cli {
    /// Coefficient ring: Z or F<p> for a prime p.
    #[arg(long, global = true, default_value = "Z")]
    ring: Ring,
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    jobs: Option<usize>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// On posets above the full-check bound, check the vanishing criterion
    /// on this many seeded random pairs instead of skipping it.
    #[arg(long, global = true)]
    sample_pairs: Option<usize>,
    /// Seed for pair sampling.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Largest poset on which the vanishing criterion runs on all pairs.
    #[arg(long, global = true, default_value_t = 40)]
    full_check_bound: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Property {
    Verdier,
    Gorenstein,
    Both,
}

#[derive(Subcommand)]
enum Command {
    /// Decide a property of the poset in a JSON file.
    Check {
        poset: PathBuf,
        #[arg(long, value_enum, default_value_t = Property::Both)]
        property: Property,
    },
    /// Cohomology of the limit of a diagram (or of an interval unit).
    Gamma {
        poset: PathBuf,
        /// Diagram JSON file on the same poset.
        diagram: Option<PathBuf>,
        /// Use the interval unit on [p, q] instead of a diagram file.
        #[arg(long, num_args = 2, value_names = ["P", "Q"], conflicts_with = "diagram")]
        interval: Option<Vec<String>>,
    },
    /// Chain-level dual of a diagram, with its per-element cohomology.
    Dualize {
        poset: PathBuf,
        diagram: PathBuf,
        /// Where to write the dual (contravariant diagram JSON).
        #[arg(long)]
        out: PathBuf,
    },
    /// Write a corpus object as JSON.
    ///
    /// Kinds: boundary-simplex N, simplex N, polygon N, antichain N,
    /// chain N, fan K, example-nonregular, suspension N (iterated from the
    /// empty poset), rp2-face-poset, poincare-complex, poincare-face-poset,
    /// random-poset SEED SIZE, random-graded-poset SEED SIZE,
    /// random-interval-diagram SEED POSET_FILE.
    Generate {
        kind: String,
        params: Vec<String>,
        /// Output file (default: standard output).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Re-derive the verdicts of every corpus entry.
    CorpusVerify,
}

/// An input problem: reported and mapped to exit code 2.
struct InputError(String);

impl<E: std::fmt::Display> From<E> for InputError {
    fn from(e: E) -> Self {
        InputError(e.to_string())
    }
}

type CmdResult = Result<u8, InputError>;

fn read(path: &Path) -> Result<String, InputError> {
    fs::read_to_string(path).map_err(|e| InputError(format!("{}: {e}", path.display())))
}

fn load_poset(path: &Path) -> Result<FinitePoset, InputError> {
    FinitePoset::from_json_str(&read(path)?).map_err(|e| InputError(format!("{}: {e}", path.display())))
}

fn load_diagram(path: &Path, poset: &FinitePoset, ring: Ring) -> Result<Diagram, InputError> {
    let d = Diagram::from_json_str(&read(path)?).map_err(|e| InputError(format!("{}: {e}", path.display())))?;
    if d.base() != poset {
        return Err(InputError(format!("{}: diagram is not on the given poset", path.display())));
    }
    if d.ring() != ring {
        return Err(InputError(format!("{}: diagram is over {}, but --ring is {ring}", path.display(), d.ring())));
    }
    Ok(d)
}

fn canonical(v: &Value) -> String {
    serde_json::to_string_pretty(v).expect("values serialize")
}

fn emit(out: Option<&Path>, text: &str) -> Result<(), InputError> {
    match out {
        Some(path) => fs::write(path, format!("{text}\n")).map_err(|e| InputError(format!("{}: {e}", path.display()))),
        None => {
            println!("{text}");
            Ok(())
        }
    }
}

fn verdict_exit(report: &VerdictReport) -> u8 {
    if report.is_inconsistent() {
        EXIT_INCONSISTENT
    } else if report.verdict {
        EXIT_PASS
    } else {
        EXIT_FAIL
    }
}

impl Cli {
    fn config(&self) -> CheckConfig {
        CheckConfig { ring: self.ring, full_check_bound: self.full_check_bound, sample_pairs: self.sample_pairs, seed: self.seed }
    }

    fn print_report(&self, report: &VerdictReport) {
        match self.format {
            Format::Json => println!("{}", report.to_json()),
            Format::Text => println!("{report}"),
        }
    }

    fn print_homology(&self, title: &str, h: &HomologySummary) {
        match self.format {
            Format::Json => println!(
                "{}",
                canonical(&json!({ "homology": h, "display": h.cohomological_display(), "ring": self.ring, "indexing": INDEXING }))
            ),
            Format::Text => println!("{title}: {}", h.cohomological_display()),
        }
    }
}

fn cmd_check(cli: &Cli, path: &Path, property: Property) -> CmdResult {
    let poset = load_poset(path)?;
    let config = cli.config();
    let report = match property {
        Property::Verdier => duality::is_verdier(&poset, &config)?,
        Property::Gorenstein => duality::is_gorenstein_star_poset(&poset, cli.ring)?,
        Property::Both => duality::main_theorem_check(&poset, &config)?,
    };
    cli.print_report(&report);
    Ok(verdict_exit(&report))
}

fn cmd_gamma(cli: &Cli, path: &Path, diagram: Option<&Path>, interval: Option<&[String]>) -> CmdResult {
    let poset = load_poset(path)?;
    let (title, d) = match (diagram, interval) {
        (Some(dpath), None) => (format!("Γ({})", dpath.display()), load_diagram(dpath, &poset, cli.ring)?),
        (None, Some([p, q])) => {
            let (pi, qi) = (poset.index_of(p)?, poset.index_of(q)?);
            if !poset.leq(pi, qi) {
                return Err(InputError(format!("{p} is not below {q}")));
            }
            (format!("Γ(Z_[{p},{q}])"), Diagram::interval_unit_ring(&poset, pi, qi, cli.ring)?)
        }
        _ => return Err(InputError("give either a diagram file or --interval P Q".into())),
    };
    let h = homotopy::gamma(&d)?.homology()?;
    cli.print_homology(&title, &h);
    Ok(EXIT_PASS)
}

fn cmd_dualize(cli: &Cli, path: &Path, diagram: &Path, out: &Path) -> CmdResult {
    let poset = load_poset(path)?;
    let d = load_diagram(diagram, &poset, cli.ring)?;
    let dual = duality::dualize(&d)?;
    emit(Some(out), &canonical(&dual.to_json()))?;
    let table: Vec<(String, HomologySummary)> = (0..poset.len())
        .map(|p| Ok((poset.name(p).to_string(), dual.at(p).homology()?)))
        .collect::<Result<_, InputError>>()?;
    match cli.format {
        Format::Json => {
            let cells: serde_json::Map<String, Value> = table.iter().map(|(n, h)| (n.clone(), json!(h))).collect();
            println!("{}", canonical(&json!({ "table": cells, "ring": cli.ring, "indexing": INDEXING, "out": out.display().to_string() })));
        }
        Format::Text => {
            let width = table.iter().map(|(n, _)| n.chars().count()).max().unwrap_or(0);
            let mut s = String::new();
            for (n, h) in &table {
                let _ = writeln!(s, "{n:<width$}  {}", h.cohomological_display());
            }
            print!("{s}");
        }
    }
    Ok(EXIT_PASS)
}

fn param<T: std::str::FromStr>(params: &[String], i: usize, what: &str) -> Result<T, InputError> {
    let raw = params.get(i).ok_or_else(|| InputError(format!("missing parameter {what}")))?;
    raw.parse().map_err(|_| InputError(format!("bad value {raw:?} for {what}")))
}

fn poset_value(p: &FinitePoset) -> Value {
    serde_json::to_value(p.to_json()).expect("posets serialize")
}

fn cmd_generate(kind: &str, params: &[String], out: Option<&Path>) -> CmdResult {
    let expected_params = match kind {
        "example-nonregular" | "rp2-face-poset" | "poincare-complex" | "poincare-face-poset" => 0,
        "random-poset" | "random-graded-poset" | "random-interval-diagram" => 2,
        _ => 1,
    };
    if params.len() != expected_params {
        return Err(InputError(format!("{kind} takes {expected_params} parameter(s), got {}", params.len())));
    }
    let n = || param::<usize>(params, 0, "N");
    let at_least = |min: usize| -> Result<usize, InputError> {
        let v = n()?;
        if v < min {
            return Err(InputError(format!("{kind} needs N ≥ {min}")));
        }
        Ok(v)
    };
    let value = match kind {
        "boundary-simplex" => poset_value(&corpus::boundary_simplex_poset(at_least(1)?)),
        "simplex" => poset_value(&corpus::simplex_poset(n()?)),
        "polygon" => poset_value(&corpus::polygon_poset(at_least(3)?)),
        "antichain" => poset_value(&FinitePoset::antichain(n()?)),
        "chain" => poset_value(&FinitePoset::chain(n()?)),
        "fan" => poset_value(&corpus::fan_poset(n()?)),
        "suspension" => {
            let mut p = FinitePoset::empty();
            for _ in 0..n()? {
                p = corpus::suspension_poset(&p);
            }
            poset_value(&p)
        }
        "example-nonregular" => poset_value(&corpus::example_nonregular()),
        "rp2-face-poset" => poset_value(&corpus::rp2_complex().face_poset()),
        "poincare-complex" => serde_json::to_value(corpus::poincare_sphere_complex()?.to_json())?,
        "poincare-face-poset" => poset_value(&corpus::poincare_sphere_complex()?.face_poset()),
        "random-poset" => poset_value(&corpus::random_poset(param(params, 0, "SEED")?, param(params, 1, "SIZE")?)),
        "random-graded-poset" => poset_value(&corpus::random_graded_poset(param(params, 0, "SEED")?, param(params, 1, "SIZE")?)),
        "random-interval-diagram" => {
            let poset = load_poset(Path::new(&params[1]))?;
            corpus::random_interval_diagram(param(params, 0, "SEED")?, &poset)?.to_json()
        }
        other => return Err(InputError(format!("unknown kind {other:?}"))),
    };
    emit(out, &canonical(&value))?;
    Ok(EXIT_PASS)
}

fn cmd_corpus_verify(cli: &Cli) -> CmdResult {
    corpus::verify_data_files()?;
    let checks = corpus::verify_corpus(&cli.config())?;
    let code = if checks.iter().any(|c| c.inconsistent) {
        EXIT_INCONSISTENT
    } else if checks.iter().all(|c| c.matches()) {
        EXIT_PASS
    } else {
        EXIT_FAIL
    };
    match cli.format {
        Format::Json => println!("{}", canonical(&json!({ "entries": checks, "ring": cli.ring, "all_match": code == EXIT_PASS }))),
        Format::Text => {
            let width = checks.iter().map(|c| c.name.len()).max().unwrap_or(0);
            for c in &checks {
                println!(
                    "{:<width$}  {:>4}  verdier={:<5}  gorenstein={:<5}  {}",
                    c.name,
                    c.elements,
                    c.verdier,
                    c.gorenstein,
                    if c.inconsistent {
                        "INCONSISTENT"
                    } else if c.matches() {
                        "ok"
                    } else {
                        "MISMATCH"
                    }
                );
            }
            let ok = checks.iter().filter(|c| c.matches()).count();
            println!("{ok}/{} entries match their expected verdicts", checks.len());
        }
    }
    Ok(code)
}

fn run(cli: &Cli) -> CmdResult {
    if let Some(jobs) = cli.jobs {
        rayon::ThreadPoolBuilder::new().num_threads(jobs.max(1)).build_global()?;
    }
    match &cli.command {
        Command::Check { poset, property } => cmd_check(cli, poset, *property),
        Command::Gamma { poset, diagram, interval } => cmd_gamma(cli, poset, diagram.as_deref(), interval.as_deref()),
        Command::Dualize { poset, diagram, out } => cmd_dualize(cli, poset, diagram, out),
        Command::Generate { kind, params, out } => cmd_generate(kind, params, out.as_deref()),
        Command::CorpusVerify => cmd_corpus_verify(cli),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(InputError(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_INPUT)
        }
    }
}

#[cfg(test)]
mod tests {
    use verdier_core::simplicial::SimplicialComplex;

    use super::*;

    #[test]
    fn complexes_round_trip_through_generate() {
        let k = corpus::rp2_complex();
        let v = serde_json::to_value(k.to_json()).unwrap();
        let back = SimplicialComplex::from_json_str(&canonical(&v)).unwrap();
        assert_eq!(back.face_counts(), k.face_counts());
    }
}
