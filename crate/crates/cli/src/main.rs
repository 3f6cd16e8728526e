use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde_json::{json, Value};

use hermlie_cli::dsl::{catalog_document, parse_document, serialize, DslDocument};
use hermlie_cli::io::{self, InputError};
use hermlie_core::catalog::{build_report, catalog_check, catalog_entry_with, catalog_list, CatalogEntry};
use hermlie_core::constructions::skt_extension;
use hermlie_core::liealg::verify_nilradical;
use hermlie_core::search::{kahler_metric_search, skt_metric_search, DEFAULT_BUDGET};
use hermlie_core::Subspace;

#[derive(Parser)]
#[command(name = "hermlie", version, about = "Exact checks of Hermitian structures on Lie algebras")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Report on an algebra given by structure equations.
    Check {
        file: PathBuf,
        /// Hermitian data (JSON).
        #[arg(long)]
        hermitian: Option<PathBuf>,
        /// Expected flag, e.g. `skt=true` or `J.balanced=false`.
        #[arg(long = "assert", value_name = "FLAG=BOOL")]
        asserts: Vec<String>,
    },
    /// Built-in algebras and structures.
    Catalog {
        #[command(subcommand)]
        action: CatalogAction,
    },
    /// Decide whether a coordinate subspace is the nilradical.
    Nilradical {
        file: PathBuf,
        /// 1-based basis indices, comma separated.
        #[arg(long, value_delimiter = ',', required = true)]
        candidate: Vec<usize>,
    },
    /// Search for an SKT or Kähler metric compatible with a fixed J.
    Search {
        kind: Kind,
        file: PathBuf,
        #[arg(long = "J", value_name = "FILE")]
        j: PathBuf,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: usize,
    },
    /// Build the SKT extension described by a JSON spec.
    Extend { spec: PathBuf },
    /// Print a catalog entry as structure equations.
    Export {
        name: String,
        #[arg(long = "param", value_name = "K=V")]
        params: Vec<String>,
        /// Print the entry's Hermitian data instead.
        #[arg(long)]
        hermitian: bool,
    },
}

#[derive(Subcommand)]
enum CatalogAction {
    List,
    Check {
        #[arg(required_unless_present = "all")]
        name: Option<String>,
        #[arg(long = "param", value_name = "K=V")]
        params: Vec<String>,
        #[arg(long, conflicts_with = "name")]
        all: bool,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    Skt,
    Kahler,
}

enum Failure {
    Assertion(String),
    Input(String),
}

impl From<InputError> for Failure {
    fn from(e: InputError) -> Self {
        Failure::Input(e.to_string())
    }
}

impl From<hermlie_cli::DslError> for Failure {
    fn from(e: hermlie_cli::DslError) -> Self {
        Failure::Input(e.to_string())
    }
}

impl From<hermlie_core::Error> for Failure {
    fn from(e: hermlie_core::Error) -> Self {
        Failure::Input(e.to_string())
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

/// Writes to stdout; a closed pipe is not an error.
fn emit(text: &str) {
    let mut out = std::io::stdout().lock();
    let _ = out.write_all(text.as_bytes()).and_then(|_| out.flush());
}

fn print_json(v: &Value) {
    emit(&format!("{}\n", serde_json::to_string_pretty(v).expect("json")));
}

fn lookup_flag(report: &hermlie_core::catalog::AlgebraReport, key: &str) -> Option<String> {
    report.lookup(key).or_else(|| {
        let first = report.structures.first()?;
        report.lookup(&format!("{}.{key}", first.label))
    })
}

fn check(file: &Path, hermitian: Option<&Path>, asserts: &[String]) -> Result<(), Failure> {
    let doc = parse_document(&read(file)?)?;
    let alg = doc.to_algebra()?;
    let name = doc
        .name
        .clone()
        .unwrap_or_else(|| file.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default());
    let h = match hermitian {
        Some(p) => io::load_hermitian(&read(p)?, alg.dim())?,
        None => io::HermitianFile::default(),
    };
    let report = build_report(&name, &alg, &h.structures, &h.gk, h.nilradical.as_ref())?;
    emit(&format!("{}\n", io::emit_report(&report)));
    let mut failed = Vec::new();
    for a in asserts {
        let (key, want) = a
            .split_once('=')
            .ok_or_else(|| Failure::Input(format!("assertion {a:?} must read FLAG=BOOL")))?;
        let want = want.trim();
        if want != "true" && want != "false" {
            return Err(Failure::Input(format!("assertion {a:?}: value must be true or false")));
        }
        match lookup_flag(&report, key.trim()) {
            Some(got) if got == want => {}
            Some(got) => failed.push(format!("{key}: expected {want}, got {got}")),
            None => return Err(Failure::Input(format!("unknown flag {key:?}"))),
        }
    }
    if failed.is_empty() {
        Ok(())
    } else {
        Err(Failure::Assertion(failed.join("\n")))
    }
}

fn entry(name: &str, params: &[String]) -> Result<CatalogEntry, Failure> {
    let overrides = io::parse_params(params)?;
    Ok(catalog_entry_with(name, &overrides)?)
}

fn catalog(action: CatalogAction) -> Result<(), Failure> {
    match action {
        CatalogAction::List => {
            for name in catalog_list() {
                emit(&format!("{name}\n"));
            }
            Ok(())
        }
        CatalogAction::Check { all: true, .. } => {
            let results: Vec<(String, Result<Vec<String>, String>)> = catalog_list()
                .par_iter()
                .map(|name| {
                    let r = catalog_entry_with(name, &Default::default())
                        .and_then(|e| catalog_check(&e))
                        .map(|c| c.mismatches)
                        .map_err(|e| e.to_string());
                    (name.to_string(), r)
                })
                .collect();
            let mut ok = true;
            let out: Vec<Value> = results
                .iter()
                .map(|(name, r)| match r {
                    Ok(m) => {
                        ok &= m.is_empty();
                        json!({"name": name, "passed": m.is_empty(), "mismatches": m})
                    }
                    Err(e) => {
                        ok = false;
                        json!({"name": name, "passed": false, "error": e})
                    }
                })
                .collect();
            print_json(&Value::Array(out));
            if ok {
                Ok(())
            } else {
                Err(Failure::Assertion("catalog expectations failed".into()))
            }
        }
        CatalogAction::Check { name, params, .. } => {
            let e = entry(name.as_deref().unwrap_or_default(), &params)?;
            let result = catalog_check(&e)?;
            emit(&format!("{}\n", io::emit_report(&result.report)));
            if result.passed() {
                Ok(())
            } else {
                Err(Failure::Assertion(result.mismatches.join("\n")))
            }
        }
    }
}

fn nilradical(file: &Path, candidate: &[usize]) -> Result<(), Failure> {
    let alg = parse_document(&read(file)?)?.to_algebra()?;
    let n = alg.dim();
    let idx = candidate
        .iter()
        .map(|&i| {
            if (1..=n).contains(&i) {
                Ok(i - 1)
            } else {
                Err(Failure::Input(format!("candidate index {i} is out of range 1..={n}")))
            }
        })
        .collect::<Result<Vec<_>, _>>()?;
    let h = Subspace::coordinate(n, &idx);
    let verdict = verify_nilradical(&alg, &h).map_err(InputError::from)?;
    print_json(&json!({
        "candidate": candidate,
        "dim": h.dim(),
        "verdict": verdict.code(),
        "detail": verdict.to_string(),
    }));
    Ok(())
}

fn search(kind: Kind, file: &Path, j: &Path, seed: u64, budget: usize) -> Result<(), Failure> {
    let alg = parse_document(&read(file)?)?.to_algebra()?;
    let h = io::load_hermitian(&read(j)?, alg.dim())?;
    let s = h
        .structures
        .first()
        .ok_or_else(|| Failure::Input("the --J file defines no complex structure".into()))?;
    let out = match kind {
        Kind::Skt => skt_metric_search(&alg, &s.j, seed, budget),
        Kind::Kahler => kahler_metric_search(&alg, &s.j, seed, budget),
    }
    .map_err(InputError::from)?;
    print_json(&json!({
        "status": out.status.to_string(),
        "kernel_dim": out.kernel_dim,
        "attempts": out.attempts,
        "omega": out.omega.as_ref().map(|w| w.to_string()),
        "g": out.metric.as_ref().map(io::metric_to_json),
    }));
    Ok(())
}

fn extend(spec: &Path) -> Result<(), Failure> {
    let spec = io::load_extension(&read(spec)?)?;
    let hd = skt_extension(&spec).map_err(InputError::from)?;
    let alg = hd.algebra();
    let structure = hermlie_core::catalog::Structure {
        label: "J".into(),
        j: hd.complex_structure().clone(),
        g: hd.metric().clone(),
    };
    let report = build_report("extension", alg, std::slice::from_ref(&structure), &[], None)?;
    let mut v = serde_json::to_value(&report).expect("json");
    let doc = DslDocument::from_algebra(alg, 'e');
    v["structure"] = json!(serialize(&doc).trim_end());
    v["hermitian"] = io::hermitian_to_json(&io::HermitianFile {
        structures: vec![structure],
        ..Default::default()
    });
    print_json(&v);
    Ok(())
}

fn export(name: &str, params: &[String], hermitian: bool) -> Result<(), Failure> {
    let e = entry(name, params)?;
    if hermitian {
        let file = io::HermitianFile {
            structures: e.structures.clone(),
            gk: e.gk.clone(),
            nilradical: e.nilradical.clone(),
        };
        print_json(&io::hermitian_to_json(&file));
    } else {
        emit(&serialize(&catalog_document(&e)));
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Check { file, hermitian, asserts } => check(&file, hermitian.as_deref(), &asserts),
        Command::Catalog { action } => catalog(action),
        Command::Nilradical { file, candidate } => nilradical(&file, &candidate),
        Command::Search { kind, file, j, seed, budget } => search(kind, &file, &j, seed, budget),
        Command::Extend { spec } => extend(&spec),
        Command::Export { name, params, hermitian } => export(&name, &params, hermitian),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Assertion(msg)) => {
            eprintln!("{msg}");
            ExitCode::from(1)
        }
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
