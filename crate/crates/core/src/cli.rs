//! Command-line front end. Every subcommand prints one JSON document on
//! stdout; errors go to stderr as `{"error": …}`.
//!
//! Exit codes: 0 success, 1 usage or input error, 2 verification mismatch,
//! 3 size cap exceeded.

use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use serde_json::{json, Value};

use crate::circuits::{
    aux_branch_operators, aux_is_deterministic, circuit_matrix_exact, circuit_matrix_float,
    x_correction_example, AuxCircuit, Circuit, CircuitError,
};
use crate::diagram::Diagram;
use crate::eval::{self, EvalError, EvalOptions, ExactMatrix, FloatMatrix};
use crate::field::FieldElement;
use crate::gadgets::{self, parse_dimacs, parse_formula, parse_formula_with_vars, BoolFormula};
use crate::reduction::{self, ReductionError};
use crate::rewrite;
use crate::verify::{self, VerifyError};

pub const SIZE_CAP_ENV: &str = "ZXLAB_SIZE_CAP";

#[derive(Parser, Debug)]
#[command(
    name = "zxlab",
    version,
    about = "Exact ZX-diagram evaluation and the #SAT gadget pipeline"
)]
struct Cli {
    /// Indented JSON output.
    #[arg(long, global = true)]
    pretty: bool,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Contract a diagram to its matrix.
    Eval {
        diagram: PathBuf,
        /// Exact cyclotomic entries (default).
        #[arg(long, conflicts_with = "float")]
        exact: bool,
        /// Floating-point entries with an error bound.
        #[arg(long)]
        float: bool,
    },
    /// Fuse spiders, drop identity spiders and cancel Hadamard pairs.
    Simplify {
        diagram: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Build a gadget diagram.
    Gadget {
        #[arg(value_enum)]
        kind: GadgetKind,
        /// Formula file, required for lf, hardness and sampling.
        #[arg(long)]
        formula: Option<PathBuf>,
        /// Variable count, if larger than the largest index used.
        #[arg(long)]
        vars: Option<usize>,
        /// Count the sampling gadget is boosted for.
        #[arg(long, default_value_t = 1)]
        assumed_n1: u64,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Count satisfying assignments through the hardness gadget.
    Count {
        formula: PathBuf,
        #[arg(long)]
        vars: Option<usize>,
        /// Compare with brute-force enumeration.
        #[arg(long)]
        brute_check: bool,
    },
    /// Read a count off a 2x2 matrix.
    Decode {
        #[arg(long)]
        matrix: PathBuf,
        #[arg(long)]
        n: usize,
        /// Rescale to Frobenius norm √2 and round to the nearest allowed
        /// rotation.
        #[arg(long)]
        approx: bool,
        /// Rounding radius; defaults to 2^-(n+2).
        #[arg(long, requires = "approx")]
        eps: Option<f64>,
    },
    /// Decide whether a diagram is proportional to a unitary.
    CheckUnitary {
        diagram: PathBuf,
        /// Float check, implied by matrix boxes.
        #[arg(long)]
        float: bool,
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
    },
    /// Decide whether a diagram is proportional to a circuit's matrix.
    CheckProp { diagram: PathBuf, circuit: PathBuf },
    /// Sample computational-basis outcomes of a unitary diagram on |0…0⟩.
    Sample {
        diagram: PathBuf,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 100)]
        count: usize,
        /// Return seed-derived strings instead of failing on non-unitary input.
        #[arg(long)]
        promise_arbitrary: bool,
    },
    /// Randomized satisfiability through parity constraints and sampling.
    VvDemo {
        formula: PathBuf,
        #[arg(long)]
        vars: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Number of constrained formulas; defaults to 8n.
        #[arg(long)]
        m: Option<usize>,
        #[arg(long, default_value_t = 25)]
        trials: usize,
    },
    /// Branch operators and determinism of a circuit with measured ancillas.
    AuxCheck {
        /// Aux-circuit file; omit to use `--example`.
        circuit: Option<PathBuf>,
        #[arg(long, value_enum, conflicts_with = "circuit")]
        example: Option<AuxExample>,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum GadgetKind {
    Not,
    And,
    Lf,
    Hardness,
    HardnessComposed,
    Sampling,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum AuxExample {
    Corrected,
    Uncorrected,
}

/// Result of one invocation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

#[derive(Debug)]
enum Failure {
    Usage(String),
    Mismatch(String),
    SizeCap(String),
}

impl Failure {
    fn code(&self) -> i32 {
        match self {
            Failure::Usage(_) => 1,
            Failure::Mismatch(_) => 2,
            Failure::SizeCap(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Usage(m) | Failure::Mismatch(m) | Failure::SizeCap(m) => m,
        }
    }
}

impl From<EvalError> for Failure {
    fn from(e: EvalError) -> Self {
        match e {
            EvalError::SizeCap { .. } => Failure::SizeCap(e.to_string()),
            _ => Failure::Usage(e.to_string()),
        }
    }
}

impl From<VerifyError> for Failure {
    fn from(e: VerifyError) -> Self {
        match e {
            VerifyError::Eval(e) => e.into(),
            VerifyError::NotUnitary => Failure::Mismatch(e.to_string()),
            _ => Failure::Usage(e.to_string()),
        }
    }
}

impl From<ReductionError> for Failure {
    fn from(e: ReductionError) -> Self {
        match e {
            ReductionError::Eval(e) => e.into(),
            ReductionError::Verify(e) => e.into(),
            ReductionError::NotRotation(_)
            | ReductionError::NotUnitary
            | ReductionError::Residual { .. }
            | ReductionError::OracleMismatch(_) => Failure::Mismatch(e.to_string()),
            _ => Failure::Usage(e.to_string()),
        }
    }
}

impl From<CircuitError> for Failure {
    fn from(e: CircuitError) -> Self {
        Failure::Usage(e.to_string())
    }
}

type CliResult = Result<(Value, i32), Failure>;

/// Parses `argv` (program name first) and runs the subcommand.
pub fn run<I, T>(argv: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let text = e.to_string();
            let code = if e.use_stderr() { 1 } else { 0 };
            return if code == 0 {
                Outcome {
                    code,
                    stdout: text,
                    stderr: String::new(),
                }
            } else {
                Outcome {
                    code,
                    stdout: String::new(),
                    stderr: text,
                }
            };
        }
    };
    let res = size_cap_from_env().and_then(|opts| dispatch(&cli.cmd, opts));
    match res {
        Ok((v, code)) => Outcome {
            code,
            stdout: render(&v, cli.pretty),
            stderr: String::new(),
        },
        Err(f) => {
            let v = json!({ "error": f.message() });
            Outcome {
                code: f.code(),
                stdout: String::new(),
                stderr: render(&v, cli.pretty),
            }
        }
    }
}

fn render(v: &Value, pretty: bool) -> String {
    let mut s = if pretty {
        serde_json::to_string_pretty(v).expect("json value serializes")
    } else {
        v.to_string()
    };
    s.push('\n');
    s
}

fn size_cap_from_env() -> Result<EvalOptions, Failure> {
    match std::env::var(SIZE_CAP_ENV) {
        Ok(s) => s
            .trim()
            .parse::<u128>()
            .map(|size_cap| EvalOptions { size_cap })
            .map_err(|_| {
                Failure::Usage(format!(
                    "{SIZE_CAP_ENV} must be a positive integer, got {s:?}"
                ))
            }),
        Err(_) => Ok(EvalOptions::default()),
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn write(path: &Path, text: &str) -> Result<(), Failure> {
    std::fs::write(path, text).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn load_diagram(path: &Path) -> Result<Diagram, Failure> {
    Diagram::from_json_str(&read(path)?)
        .map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

/// DIMACS for `.cnf`/`.dimacs` files, the infix grammar otherwise.
fn load_formula(path: &Path, vars: Option<usize>) -> Result<BoolFormula, Failure> {
    let text = read(path)?;
    let dimacs = matches!(
        path.extension().and_then(|e| e.to_str()),
        Some("cnf" | "dimacs")
    );
    let f = if dimacs {
        parse_dimacs(&text)
    } else {
        parse_formula(&text)
    }
    .map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
    match vars {
        Some(n) if n < f.n => Err(Failure::Usage(format!(
            "--vars {n} is below the {} variables used",
            f.n
        ))),
        Some(n) if !dimacs => {
            parse_formula_with_vars(&text, n).map_err(|e| Failure::Usage(e.to_string()))
        }
        Some(n) => Ok(BoolFormula::new(n, f.expr)),
        None => Ok(f),
    }
}

fn sci(x: f64) -> String {
    format!("{x:.14e}")
}

fn complex_json(z: Complex64) -> Value {
    json!({ "re": sci(z.re), "im": sci(z.im) })
}

fn exact_json(m: &ExactMatrix) -> Value {
    let rows: Vec<Value> = (0..m.rows())
        .map(|r| (0..m.cols()).map(|c| m.get(r, c).to_string()).collect())
        .collect();
    json!({ "mode": "exact", "rows": m.rows(), "cols": m.cols(), "entries": rows })
}

fn float_json(m: &FloatMatrix) -> Value {
    let rows: Vec<Value> = (0..m.rows())
        .map(|r| (0..m.cols()).map(|c| complex_json(m.get(r, c))).collect())
        .collect();
    json!({ "mode": "float", "rows": m.rows(), "cols": m.cols(), "err": sci(m.err()), "entries": rows })
}

enum Entry {
    Exact(FieldElement),
    Float(Complex64),
}

fn parse_number(v: &Value) -> Option<f64> {
    v.as_f64()
        .or_else(|| v.as_str().and_then(|s| s.trim().parse().ok()))
}

fn parse_entry(v: &Value) -> Option<Entry> {
    match v {
        Value::String(s) => s.parse().ok().map(Entry::Exact),
        Value::Number(_) => parse_number(v).map(|re| Entry::Float(Complex64::new(re, 0.0))),
        Value::Object(o) => {
            let re = o.get("re").map_or(Some(0.0), parse_number)?;
            let im = o.get("im").map_or(Some(0.0), parse_number)?;
            Some(Entry::Float(Complex64::new(re, im)))
        }
        Value::Array(a) if a.len() == 2 && a.iter().all(|x| x.is_number()) => Some(Entry::Float(
            Complex64::new(parse_number(&a[0])?, parse_number(&a[1])?),
        )),
        _ => None,
    }
}

/// Entries are exact field strings, `{"re","im"}` objects, `[re, im]` pairs
/// or plain numbers, either as a flat row-major list or as nested rows.
fn load_matrix(path: &Path) -> Result<(usize, usize, Vec<Entry>), Failure> {
    let bad = |msg: &str| Failure::Usage(format!("{}: {msg}", path.display()));
    let v: Value = serde_json::from_str(&read(path)?).map_err(|e| bad(&e.to_string()))?;
    let raw = v
        .get("entries")
        .and_then(Value::as_array)
        .ok_or_else(|| bad("missing \"entries\" array"))?;
    let nested = !raw.is_empty() && raw.iter().all(|r| r.is_array() && parse_entry(r).is_none());
    let flat: Vec<&Value> = if nested {
        raw.iter().flat_map(|r| r.as_array().unwrap()).collect()
    } else {
        raw.iter().collect()
    };
    let entries = flat
        .into_iter()
        .map(|e| parse_entry(e).ok_or_else(|| bad(&format!("unreadable entry {e}"))))
        .collect::<Result<Vec<_>, _>>()?;
    let dim = |k: &str| v.get(k).and_then(Value::as_u64).map(|x| x as usize);
    let rows = dim("rows").unwrap_or(if nested {
        raw.len()
    } else {
        (entries.len() as f64).sqrt() as usize
    });
    let cols = dim("cols").unwrap_or(if rows == 0 { 0 } else { entries.len() / rows });
    if rows * cols != entries.len() {
        return Err(bad(&format!(
            "{} entries do not fill {rows}x{cols}",
            entries.len()
        )));
    }
    Ok((rows, cols, entries))
}

fn dispatch(cmd: &Cmd, opts: EvalOptions) -> CliResult {
    match cmd {
        Cmd::Eval { diagram, float, .. } => {
            let d = load_diagram(diagram)?;
            let v = if *float || d.has_matrix_box() {
                float_json(&eval::contract_float_with(&d, opts)?)
            } else {
                exact_json(&eval::contract_exact_with(&d, opts)?)
            };
            Ok((v, 0))
        }
        Cmd::Simplify { diagram, output } => {
            let d = load_diagram(diagram)?;
            let s = rewrite::simplify(&d);
            match output {
                Some(p) => {
                    write(p, &s.to_json_string(true))?;
                    Ok((
                        json!({ "written": p.display().to_string(), "nodes_before": d.node_count(), "nodes": s.node_count() }),
                        0,
                    ))
                }
                None => Ok((s.to_json(), 0)),
            }
        }
        Cmd::Gadget {
            kind,
            formula,
            vars,
            assumed_n1,
            output,
        } => {
            let need = || match formula {
                Some(p) => load_formula(p, *vars),
                None => Err(Failure::Usage("this gadget needs --formula".into())),
            };
            let d = match kind {
                GadgetKind::Not => gadgets::not_gadget(),
                GadgetKind::And => gadgets::and_gadget(),
                GadgetKind::Lf => gadgets::formula_map(&need()?),
                GadgetKind::Hardness => gadgets::hardness_gadget(&need()?),
                GadgetKind::HardnessComposed => gadgets::hardness_gadget_composed(&need()?),
                GadgetKind::Sampling => gadgets::sampling_gadget(&need()?, *assumed_n1)
                    .map_err(|e| Failure::Usage(e.to_string()))?,
            };
            match output {
                Some(p) => {
                    write(p, &d.to_json_string(true))?;
                    let v = json!({
                        "written": p.display().to_string(),
                        "nodes": d.node_count(),
                        "inputs": d.n_inputs(),
                        "outputs": d.n_outputs(),
                    });
                    Ok((v, 0))
                }
                None => Ok((d.to_json(), 0)),
            }
        }
        Cmd::Count {
            formula,
            vars,
            brute_check,
        } => {
            let f = load_formula(formula, *vars)?;
            let r = reduction::count_via_oracle_with(&f, opts)?;
            let mut v = serde_json::to_value(r).expect("count serializes");
            let mut code = 0;
            if *brute_check {
                let b = reduction::brute_force_count(&f)?;
                let ok = b.n1 == r.n1;
                v["check"] = json!(if ok { "ok" } else { "mismatch" });
                v["brute_n1"] = json!(b.n1);
                if !ok {
                    code = 2;
                }
            }
            Ok((v, code))
        }
        Cmd::Decode {
            matrix,
            n,
            approx,
            eps,
        } => {
            let (rows, cols, entries) = load_matrix(matrix)?;
            let r = if *approx {
                let zs: Vec<Complex64> = entries
                    .iter()
                    .map(|e| match e {
                        Entry::Exact(x) => x.to_complex(),
                        Entry::Float(z) => *z,
                    })
                    .collect();
                // a unitary of dimension d has Frobenius norm √d
                let norm =
                    (zs.iter().map(|z| z.norm_sqr()).sum::<f64>() / rows.max(1) as f64).sqrt();
                if norm == 0.0 {
                    return Err(Failure::Mismatch("zero matrix".into()));
                }
                let m = FloatMatrix::new(rows, cols, zs.iter().map(|z| z / norm).collect(), 0.0);
                let eps = eps.unwrap_or_else(|| reduction::approx_tolerance(*n));
                reduction::decode_count_approx_with(&m, *n, eps)?
            } else {
                let xs = entries
                    .into_iter()
                    .map(|e| match e {
                        Entry::Exact(x) => Ok(x),
                        Entry::Float(_) => Err(Failure::Usage(
                            "exact decode needs field entries; use --approx".into(),
                        )),
                    })
                    .collect::<Result<Vec<_>, _>>()?;
                reduction::decode_count_exact(&ExactMatrix::new(rows, cols, xs), *n)?
            };
            Ok((serde_json::to_value(r).expect("count serializes"), 0))
        }
        Cmd::CheckUnitary {
            diagram,
            float,
            tol,
        } => {
            let d = load_diagram(diagram)?;
            let v = if *float || d.has_matrix_box() {
                let u = verify::unitary_up_to_scalar_float_with(&d, *tol, opts)?;
                let mut v = json!({ "unitary": u.unitary, "mode": "float" });
                if u.deviation.is_finite() {
                    v["deviation"] = json!(sci(u.deviation));
                }
                v
            } else {
                let u = verify::unitary_up_to_scalar_with(&d, opts)?;
                let mut v = json!({ "unitary": u.unitary, "mode": "exact" });
                if let Some(c) = u.scalar {
                    v["scalar"] = json!(c.to_string());
                }
                v
            };
            Ok((v, 0))
        }
        Cmd::CheckProp { diagram, circuit } => {
            let d = load_diagram(diagram)?;
            let c = Circuit::from_jsonl(&read(circuit)?)?;
            if (d.n_inputs(), d.n_outputs()) != (c.n, c.n) {
                return Err(Failure::Usage(format!(
                    "diagram is {} -> {} but the circuit acts on {} qubits",
                    d.n_inputs(),
                    d.n_outputs(),
                    c.n
                )));
            }
            let v = match circuit_matrix_exact(&c) {
                Ok(u) if !d.has_matrix_box() => {
                    let m = eval::contract_exact_with(&d, opts)?;
                    // witness λ with diagram = λ · circuit
                    let p = verify::is_proportional_exact(&u, &m)?;
                    let mut v = json!({ "proportional": p.proportional, "mode": "exact" });
                    if let Some(w) = p.witness {
                        v["witness"] = json!(w.to_string());
                    }
                    v
                }
                _ => {
                    let u = circuit_matrix_float(&c)?;
                    let m = eval::contract_float_with(&d, opts)?;
                    let p = verify::is_proportional_float_tol(&u, &m, 1e-9);
                    let mut v = json!({ "proportional": p.proportional, "mode": "float" });
                    if let Some(w) = p.witness {
                        v["witness"] = complex_json(w);
                    }
                    v
                }
            };
            let code = if v["proportional"] == json!(true) {
                0
            } else {
                2
            };
            Ok((v, code))
        }
        Cmd::Sample {
            diagram,
            seed,
            count,
            promise_arbitrary,
        } => {
            let d = load_diagram(diagram)?;
            let s = verify::sample_with(&d, *seed, *count, *promise_arbitrary, opts)?;
            Ok((json!({ "seed": seed, "count": count, "samples": s }), 0))
        }
        Cmd::VvDemo {
            formula,
            vars,
            seed,
            m,
            trials,
        } => {
            let f = load_formula(formula, *vars)?;
            let m = m.unwrap_or(8 * f.n);
            let dec = reduction::sat_decide_randomized_with(&f, *seed, m, *trials, opts)?;
            let truth = reduction::brute_force_count(&f)?;
            let check = match (dec.sat, truth.n1 > 0) {
                (true, false) => "false-sat",
                (false, true) => "missed",
                _ => "ok",
            };
            let mut v = serde_json::to_value(&dec).expect("decision serializes");
            v["m"] = json!(m);
            v["brute_n1"] = json!(truth.n1);
            v["check"] = json!(check);
            Ok((v, if check == "false-sat" { 2 } else { 0 }))
        }
        Cmd::AuxCheck { circuit, example } => {
            let ac = match (circuit, example) {
                (Some(p), _) => AuxCircuit::from_jsonl(&read(p)?)?,
                (None, Some(AuxExample::Corrected)) => x_correction_example(true),
                (None, Some(AuxExample::Uncorrected)) => x_correction_example(false),
                (None, None) => {
                    return Err(Failure::Usage(
                        "give an aux-circuit file or --example".into(),
                    ))
                }
            };
            let branches = aux_branch_operators(&ac)?;
            let det = aux_is_deterministic(&ac)?;
            let bs: Vec<Value> = branches
                .iter()
                .map(|b| json!({ "outcome": b.outcome, "weight": sci(b.weight), "operator": float_json(&b.operator)["entries"] }))
                .collect();
            let mut v = json!({ "deterministic": det.deterministic, "branches": bs });
            if let Some(u) = det.unitary {
                v["unitary"] = float_json(&u)["entries"].clone();
            }
            Ok((v, 0))
        }
    }
}
