//! `rac1`: validate, planarize, audit and generate 1-bend RAC drawings.
//!
//! Reports go to stdout as JSON, diagnostics to stderr. Exit code 0 means
//! success, 1 a failed validation or unsatisfied bound, 2 an I/O or format
//! error.

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use rac1_core::charge::audit;
use rac1_core::drawing::{density_check, to_svg, validate_with, Drawing};
use rac1_core::generator::{family_report, generate, GeneratorParams};
use rac1_core::planarize::{face_stats, good_edges, planarize, Scope};
use rac1_core::removal::{eq3_bound, seeded_trace};

#[derive(Parser, Debug)]
#[command(name = "rac1", version, about = "Tools for 1-bend right-angle-crossing drawings")]
struct Cli {
    /// Tolerance on the normalized dot product of crossing segments.
    #[arg(long, global = true, default_value_t = 1e-9)]
    epsilon: f64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Check the RAC₁ conditions and list crossings and violations.
    Validate { input: PathBuf },
    /// Print the planarization: nodes, arcs, rotations and faces.
    Planarize {
        input: PathBuf,
        #[arg(long, value_enum, default_value_t = ScopeArg::All)]
        scope: ScopeArg,
    },
    /// Per-face statistics of the crossing-free subdrawing.
    Stats { input: PathBuf },
    /// Charging certificate, `|E₁| ≤ 4n − 8` and the per-face bound.
    Audit { input: PathBuf },
    /// Check `m ≤ 5.5n − 11`.
    Bound { input: PathBuf },
    /// Build the nested dodecahedral family.
    Generate {
        #[arg(long, default_value_t = 1)]
        levels: usize,
        #[arg(long, default_value_t = 1.0)]
        scale: f64,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        svg: Option<PathBuf>,
    },
    /// Remove random edges from a random triangulation and trace τ.
    RemovalSim {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        trace_out: Option<PathBuf>,
    },
    /// Render a drawing as SVG.
    ExportSvg {
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// Mark crossing points.
        #[arg(long)]
        crossings: bool,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ScopeArg {
    All,
    Crossed,
    CrossingFree,
}

impl From<ScopeArg> for Scope {
    fn from(s: ScopeArg) -> Scope {
        match s {
            ScopeArg::All => Scope::All,
            ScopeArg::Crossed => Scope::Crossed,
            ScopeArg::CrossingFree => Scope::CrossingFree,
        }
    }
}

enum Failure {
    /// Report printed, condition not met.
    Unsatisfied,
    /// I/O or format problem.
    Input(String),
}

type Outcome = Result<(), Failure>;

fn read(path: &Path) -> Result<Drawing, Failure> {
    let text = fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
    Drawing::from_json(&text).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn write(path: &Path, text: &str) -> Outcome {
    fs::write(path, text).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn emit(v: &Value) {
    let text = serde_json::to_string_pretty(v).expect("serializable report");
    let _ = writeln!(io::stdout(), "{text}");
}

fn check(ok: bool) -> Outcome {
    if ok {
        Ok(())
    } else {
        Err(Failure::Unsatisfied)
    }
}

fn error_report(kind: &str, message: String) -> Outcome {
    eprintln!("{kind}: {message}");
    emit(&json!({ "error": kind, "message": message }));
    Err(Failure::Unsatisfied)
}

fn run(cli: Cli) -> Outcome {
    let eps = cli.epsilon;
    match cli.command {
        Command::Validate { input } => {
            let d = read(&input)?;
            let r = validate_with(&d, eps);
            emit(&r.to_json());
            check(r.is_rac)
        }
        Command::Planarize { input, scope } => {
            let d = read(&input)?;
            match planarize(&d, scope.into()) {
                Ok(p) => {
                    emit(&p.to_json(&d));
                    Ok(())
                }
                Err(e) => error_report("planarize", e.to_string()),
            }
        }
        Command::Stats { input } => {
            let d = read(&input)?;
            let ge = match planarize(&d, Scope::All).and_then(|p| good_edges(&d, &p)) {
                Ok(ge) => ge,
                Err(e) => return error_report("planarize", e.to_string()),
            };
            let g0 = &ge.overlay.g0;
            let faces: Vec<Value> = g0
                .faces
                .iter()
                .map(|f| {
                    let s = face_stats(g0, f);
                    json!({
                        "face_id": f.id, "d": s.d, "l": s.l, "m": s.m, "i": s.i, "b": s.b,
                        "good": ge.faces[f.id].good, "outer": f.is_outer,
                    })
                })
                .collect();
            emit(&json!({
                "faces": faces,
                "notes": ["goodness of the outer face is evaluated over the unbounded region"],
            }));
            Ok(())
        }
        Command::Audit { input } => {
            let d = read(&input)?;
            match audit(&d, eps) {
                Ok(r) => {
                    emit(&r.to_json());
                    check(r.passed())
                }
                Err(e) => error_report("audit", e.to_string()),
            }
        }
        Command::Bound { input } => {
            let d = read(&input)?;
            match density_check(&d) {
                Ok(v) => {
                    emit(&json!(v));
                    check(v.satisfied)
                }
                Err(e) => error_report("bound", e.to_string()),
            }
        }
        Command::Generate { levels, scale, out, svg } => {
            let params = GeneratorParams { levels, scale };
            let d = generate(&params).map_err(|e| Failure::Input(e.to_string()))?;
            if let Some(path) = &svg {
                let r = validate_with(&d, eps);
                write(path, &to_svg(&d, Some(&r.crossings)))?;
            }
            match &out {
                Some(path) => {
                    write(path, &d.to_json())?;
                    let report = family_report(levels).map_err(|e| Failure::Input(e.to_string()))?;
                    emit(&json!(report));
                }
                None => {
                    let _ = writeln!(io::stdout(), "{}", d.to_json());
                }
            }
            Ok(())
        }
        Command::RemovalSim { n, k, seed, trace_out } => {
            let (trace, mut state) = seeded_trace(n, k, seed).map_err(|e| Failure::Input(e.to_string()))?;
            let bounds = eq3_bound(&state.faces(), n, trace.k);
            let report = json!({ "trace": trace, "bounds": bounds });
            if let Some(path) = &trace_out {
                write(path, &serde_json::to_string_pretty(&report).expect("serializable trace"))?;
            }
            emit(&json!({
                "n": n, "k": trace.k, "seed": seed, "final_tau": trace.final_tau,
                "within_bound": trace.within_bound, "bounds": bounds,
            }));
            check(trace.within_bound)
        }
        Command::ExportSvg { input, out, crossings } => {
            let d = read(&input)?;
            let r = crossings.then(|| validate_with(&d, eps));
            write(&out, &to_svg(&d, r.as_ref().map(|r| r.crossings.as_slice())))
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Unsatisfied) => ExitCode::from(1),
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
