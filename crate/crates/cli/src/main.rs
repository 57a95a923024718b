use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde_json::{json, Value};

use lielike_core::generate::{generate, Construction, GeneratorSpec};
use lielike_core::oracle::oracle_solve;
use lielike_core::verify::run_verify;
use lielike_core::{solve, verify_weight, InstanceFile, SolveError, Subspace};

#[derive(Parser)]
#[command(name = "lielike", version, about = "Exact checks and common weight vectors for Lie-like algebras and their modules")]
struct Cli {
    /// Print JSON on stdout instead of tables.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check the two defining identities of the algebra.
    CheckAlgebra { file: PathBuf },
    /// Check the five module axioms.
    CheckModule { file: PathBuf },
    /// Print the derived series and solvability depth.
    Derived { file: PathBuf },
    /// Print the plus annihilator of the module.
    Annihilator { file: PathBuf },
    /// Write the instance with its module replaced by the adjoint module.
    Adjoint {
        file: PathBuf,
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Find a common weight vector.
    Solve { file: PathBuf },
    /// List all joint weight spaces by brute force.
    Oracle { file: PathBuf },
    /// Run every check and cross-check the solver against the oracle.
    Verify { file: PathBuf },
    /// Generate a random valid instance.
    Generate {
        #[arg(long)]
        construction: Construction,
        #[arg(long)]
        dim: usize,
        #[arg(long)]
        s: usize,
        #[arg(long)]
        seed: u64,
        /// Largest absolute value of a random coefficient.
        #[arg(long, default_value_t = 2)]
        bound: u32,
        #[arg(short, long)]
        output: PathBuf,
    },
}

/// Exit status plus what to print.
struct Outcome {
    code: u8,
    json: Value,
    text: String,
}

impl Outcome {
    fn new(code: u8, json: Value, text: impl Into<String>) -> Self {
        Outcome {
            code,
            json,
            text: text.into(),
        }
    }
}

/// Failure that maps to exit code 2.
struct InputError(String);

fn load(path: &Path) -> Result<InstanceFile, InputError> {
    let text = fs::read_to_string(path).map_err(|e| InputError(format!("{}: {e}", path.display())))?;
    InstanceFile::parse(&text).map_err(|e| InputError(format!("{}: {e}", path.display())))
}

fn write(path: &Path, inst: &InstanceFile) -> Result<(), InputError> {
    fs::write(path, inst.to_json_string()).map_err(|e| InputError(format!("{}: {e}", path.display())))
}

fn subspace_json(s: &Subspace) -> Value {
    json!({ "dim": s.dim(), "ambient_dim": s.ambient_dim(), "basis": s.basis_vectors() })
}

fn run(cli: &Cli) -> Result<Outcome, InputError> {
    Ok(match &cli.command {
        Command::CheckAlgebra { file } => {
            let inst = load(file)?;
            let violations = inst.algebra.check_algebra();
            let lines: Vec<String> = violations.iter().map(ToString::to_string).collect();
            let text = if lines.is_empty() {
                format!("algebra ok (dim {}, s {})", inst.algebra.dim(), inst.algebra.s())
            } else {
                format!("{} violations\n{}", lines.len(), lines.join("\n"))
            };
            Outcome::new(u8::from(!lines.is_empty()), json!({ "valid": lines.is_empty(), "violations": lines }), text)
        }
        Command::CheckModule { file } => {
            let inst = load(file)?;
            let violations = inst.module.check_module();
            let list: Vec<Value> = violations
                .iter()
                .map(|v| json!({ "axiom": v.axiom.tag(), "k": v.k, "h": v.h, "i": v.i, "j": v.j, "message": v.to_string() }))
                .collect();
            let text = if violations.is_empty() {
                format!("module ok (vdim {})", inst.module.vdim())
            } else {
                let lines: Vec<String> = violations.iter().map(ToString::to_string).collect();
                format!("{} violations\n{}", lines.len(), lines.join("\n"))
            };
            Outcome::new(u8::from(!violations.is_empty()), json!({ "valid": violations.is_empty(), "violations": list }), text)
        }
        Command::Derived { file } => {
            let inst = load(file)?;
            let series = inst.algebra.derived_series();
            let (solvable, depth) = inst.algebra.is_solvable();
            let mut text = format!("{:<6} {:>4}  basis\n", "term", "dim");
            for (i, term) in series.iter().enumerate() {
                text += &format!("D^{:<4} {:>4}  {}\n", i + 1, term.dim(), term);
            }
            text += &if solvable { format!("solvable, depth {depth}") } else { "not solvable".into() };
            let terms: Vec<Value> = series.iter().map(subspace_json).collect();
            Outcome::new(0, json!({ "series": terms, "solvable": solvable, "depth": depth }), text)
        }
        Command::Annihilator { file } => {
            let inst = load(file)?;
            let ann = inst.module.plus_annihilator();
            let sub = inst.module.is_submodule(&ann);
            let text = format!("plus annihilator: {ann}\nsubmodule: {}", if sub { "yes" } else { "NO" });
            Outcome::new(u8::from(!sub), json!({ "annihilator": subspace_json(&ann), "submodule": sub }), text)
        }
        Command::Adjoint { file, output } => {
            let inst = load(file)?;
            let adj = InstanceFile {
                metadata: inst.metadata.clone(),
                ..InstanceFile::adjoint((*inst.algebra).clone())
            };
            write(output, &adj)?;
            Outcome::new(0, json!({ "written": output }), format!("wrote {}", output.display()))
        }
        Command::Solve { file } => {
            let inst = load(file)?;
            match solve(&inst.algebra, &inst.module) {
                Ok(r) => {
                    let ok = verify_weight(&inst.module, &r.v, &r.weight);
                    let trace: Vec<String> = r.branch_trace.iter().map(|b| b.tag().to_string()).collect();
                    let text = format!(
                        "v         {}\nphi       {}\npsi       {}\ndichotomy {}\ntrace     {}\nverified  {}",
                        r.v,
                        rows(&r.weight.phi),
                        rows(&r.weight.psi),
                        r.dichotomy,
                        if trace.is_empty() { "(base)".into() } else { trace.join(", ") },
                        if ok { "yes" } else { "NO" },
                    );
                    let mut value = serde_json::to_value(&r).expect("result serializes");
                    value["verified"] = json!(ok);
                    Outcome::new(u8::from(!ok), value, text)
                }
                Err(e) => {
                    let code = if matches!(e, SolveError::NonSplitSpectrum) { 2 } else { 1 };
                    Outcome::new(code, json!({ "error": e.to_string() }), format!("error: {e}"))
                }
            }
        }
        Command::Oracle { file } => {
            let inst = load(file)?;
            match oracle_solve(&inst.module) {
                Ok(entries) => {
                    let mut text = format!("{} joint weight spaces\n", entries.len());
                    let mut list = Vec::new();
                    for e in &entries {
                        text += &format!(
                            "dim {:>2}  phi {}  psi {}\n        {}\n",
                            e.space.dim(),
                            rows(&e.weight.phi),
                            rows(&e.weight.psi),
                            e.space
                        );
                        list.push(json!({ "space": subspace_json(&e.space), "phi": e.weight.phi, "psi": e.weight.psi }));
                    }
                    Outcome::new(0, json!({ "weight_spaces": list }), text.trim_end())
                }
                Err(e) => Outcome::new(2, json!({ "error": e.to_string() }), format!("error: {e}")),
            }
        }
        Command::Verify { file } => {
            let inst = load(file)?;
            let report = run_verify(&inst);
            let code = report.exit_code as u8;
            Outcome::new(code, serde_json::to_value(&report).expect("report serializes"), report.to_string())
        }
        Command::Generate { construction, dim, s, seed, bound, output } => {
            let spec = GeneratorSpec::new(*construction, *dim, *s, *seed).with_bound(*bound);
            let inst = generate(&spec).map_err(|e| InputError(e.to_string()))?;
            write(output, &inst)?;
            Outcome::new(
                0,
                json!({ "written": output, "dim": inst.algebra.dim(), "s": inst.algebra.s(), "vdim": inst.module.vdim() }),
                format!("wrote {} (dim {}, s {}, vdim {})", output.display(), inst.algebra.dim(), inst.algebra.s(), inst.module.vdim()),
            )
        }
    })
}

/// Functional values as `[a b; c d]`, one row per bracket.
fn rows(m: &[Vec<lielike_core::Scalar>]) -> String {
    let rows: Vec<String> = m
        .iter()
        .map(|r| r.iter().map(ToString::to_string).collect::<Vec<_>>().join(" "))
        .collect();
    format!("[{}]", rows.join("; "))
}

// A closed pipe (e.g. `| head`) is not an error worth a panic.
fn emit(text: &str) {
    let _ = writeln!(std::io::stdout().lock(), "{text}");
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(out) => {
            if cli.json {
                emit(&serde_json::to_string_pretty(&out.json).expect("value serializes"));
            } else {
                emit(&out.text);
            }
            ExitCode::from(out.code)
        }
        Err(InputError(msg)) => {
            if cli.json {
                emit(&json!({ "error": msg }).to_string());
            } else {
                eprintln!("error: {msg}");
            }
            ExitCode::from(2)
        }
    }
}
