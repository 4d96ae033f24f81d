//! Circuits over `{Z_α, H, CNOT}`, their translation to diagrams, and circuits
//! with auxiliary qubits, Z measurements and classically controlled gates.

use std::collections::BTreeMap;
use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::diagram::{Diagram, Endpoint};
use crate::eval::{ExactMatrix, FloatMatrix};
use crate::field::FieldElement;
use crate::phase::DyadicPhase;

/// Default bound on auxiliary qubits for branch enumeration.
pub const DEFAULT_AUX_BOUND: usize = 8;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CircuitError {
    #[error("gate {index}: qubit {qubit} out of range for {n} qubits")]
    QubitRange {
        index: usize,
        qubit: usize,
        n: usize,
    },
    #[error("gate {0}: CNOT control equals target")]
    ControlIsTarget(usize),
    #[error("gate {0}: symbolic angle cannot be handled exactly")]
    Symbolic(usize),
    #[error("symbolic angle needs 0 <= n1 <= 2^n and n >= 1, got n1={n1}, n={n}")]
    BadSymbolic { n1: u64, n: u32 },
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("{aux} auxiliary qubits exceed the bound {bound}")]
    AuxBound { aux: usize, bound: usize },
    #[error("instruction {index}: classical bit {bit} used before it is measured")]
    BitUnassigned { index: usize, bit: usize },
    #[error("instruction {index}: classical bit {bit} measured twice")]
    BitReassigned { index: usize, bit: usize },
    #[error("instruction {index}: qubit {qubit} is not auxiliary")]
    NotAux { index: usize, qubit: usize },
    #[error("instruction {index}: prepare on qubit {qubit} whose state is not known")]
    PrepareUnknown { index: usize, qubit: usize },
}

/// The angle `2·arcsin(N₁/√(N₀²+N₁²))` with `N₀ = 2ⁿ − N₁`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SymbolicAngle {
    pub n1: u64,
    pub n: u32,
}

impl SymbolicAngle {
    pub fn new(n1: u64, n: u32) -> Result<Self, CircuitError> {
        if n == 0 || n > 62 || n1 > 1u64 << n {
            return Err(CircuitError::BadSymbolic { n1, n });
        }
        Ok(SymbolicAngle { n1, n })
    }

    pub fn n0(&self) -> u64 {
        (1u64 << self.n) - self.n1
    }

    /// `(cos α, sin α)` from the rational expressions in `N₀, N₁`.
    pub fn cos_sin(&self) -> (f64, f64) {
        let a = self.n0() as f64;
        let b = self.n1 as f64;
        let r = a * a + b * b;
        ((a * a - b * b) / r, 2.0 * a * b / r)
    }

    pub fn radians(&self) -> f64 {
        let (c, s) = self.cos_sin();
        s.atan2(c).rem_euclid(2.0 * std::f64::consts::PI)
    }

    pub fn cis(&self) -> Complex64 {
        let (c, s) = self.cos_sin();
        Complex64::new(c, s)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Angle {
    Dyadic(DyadicPhase),
    Symbolic(SymbolicAngle),
}

impl Angle {
    pub fn cis(&self) -> Complex64 {
        match self {
            Angle::Dyadic(p) => p.cis(),
            Angle::Symbolic(s) => s.cis(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Gate {
    Z { q: usize, angle: Angle },
    H { q: usize },
    Cnot { c: usize, t: usize },
}

impl Gate {
    pub fn z(q: usize, p: DyadicPhase) -> Gate {
        Gate::Z {
            q,
            angle: Angle::Dyadic(p),
        }
    }

    pub fn z_sym(q: usize, s: SymbolicAngle) -> Gate {
        Gate::Z {
            q,
            angle: Angle::Symbolic(s),
        }
    }

    pub fn h(q: usize) -> Gate {
        Gate::H { q }
    }

    pub fn cnot(c: usize, t: usize) -> Gate {
        Gate::Cnot { c, t }
    }

    fn qubits(&self) -> Vec<usize> {
        match *self {
            Gate::Z { q, .. } | Gate::H { q } => vec![q],
            Gate::Cnot { c, t } => vec![c, t],
        }
    }

    fn check(&self, index: usize, n: usize) -> Result<(), CircuitError> {
        for q in self.qubits() {
            if q >= n {
                return Err(CircuitError::QubitRange { index, qubit: q, n });
            }
        }
        if let Gate::Cnot { c, t } = self {
            if c == t {
                return Err(CircuitError::ControlIsTarget(index));
            }
        }
        Ok(())
    }
}

impl fmt::Display for Gate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Gate::Z {
                q,
                angle: Angle::Dyadic(p),
            } => write!(f, "Z({p}) q{q}"),
            Gate::Z {
                q,
                angle: Angle::Symbolic(s),
            } => write!(f, "Z(sym n1={} n={}) q{q}", s.n1, s.n),
            Gate::H { q } => write!(f, "H q{q}"),
            Gate::Cnot { c, t } => write!(f, "CNOT q{c} -> q{t}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Circuit {
    pub n: usize,
    pub gates: Vec<Gate>,
}

/// A circuit's diagram together with the power `p` such that
/// `circuit_matrix = (√2)^p · contract(diagram)`.
#[derive(Clone, Debug)]
pub struct CircuitDiagram {
    pub diagram: Diagram,
    pub sqrt2_power: i64,
}

impl Circuit {
    pub fn new(n: usize, gates: Vec<Gate>) -> Result<Circuit, CircuitError> {
        let c = Circuit { n, gates };
        c.validate()?;
        Ok(c)
    }

    pub fn validate(&self) -> Result<(), CircuitError> {
        for (i, g) in self.gates.iter().enumerate() {
            g.check(i, self.n)?;
            if let Gate::Z {
                angle: Angle::Symbolic(s),
                ..
            } = g
            {
                SymbolicAngle::new(s.n1, s.n)?;
            }
        }
        Ok(())
    }

    pub fn to_jsonl(&self) -> String {
        let mut out = serde_json::json!({ "qubits": self.n }).to_string();
        out.push('\n');
        for g in &self.gates {
            out.push_str(&serde_json::to_string(&GateRecord::from(*g)).expect("gate serializes"));
            out.push('\n');
        }
        out
    }

    /// Reads one JSON gate per line. An optional `{"qubits":n}` line fixes the
    /// width; otherwise it is one more than the largest index used.
    pub fn from_jsonl(text: &str) -> Result<Circuit, CircuitError> {
        let mut n = None;
        let mut gates = Vec::new();
        for (i, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            let v: serde_json::Value =
                serde_json::from_str(line).map_err(|e| CircuitError::Parse {
                    line: i + 1,
                    msg: e.to_string(),
                })?;
            if let Some(q) = v.get("qubits") {
                n = Some(q.as_u64().ok_or_else(|| CircuitError::Parse {
                    line: i + 1,
                    msg: "qubits must be a non-negative integer".into(),
                })? as usize);
                continue;
            }
            let rec: GateRecord = serde_json::from_value(v).map_err(|e| CircuitError::Parse {
                line: i + 1,
                msg: e.to_string(),
            })?;
            gates.push(
                rec.into_gate()
                    .map_err(|msg| CircuitError::Parse { line: i + 1, msg })?,
            );
        }
        let n = n.unwrap_or_else(|| {
            gates
                .iter()
                .flat_map(|g| g.qubits())
                .max()
                .map_or(0, |m| m + 1)
        });
        Circuit::new(n, gates)
    }
}

/// Translates gates to spiders: `Z_α` is a phase spider, `H` a Hadamard box
/// and `CNOT` a Z–X spider pair, which denotes `CNOT/√2`.
pub fn circuit_to_diagram(c: &Circuit) -> Result<CircuitDiagram, CircuitError> {
    c.validate()?;
    let mut d = Diagram::new(c.n, c.n);
    let mut cur: Vec<Endpoint> = (0..c.n).map(Endpoint::Input).collect();
    let mut power = 0;
    for (i, g) in c.gates.iter().enumerate() {
        match *g {
            Gate::Z { q, angle } => {
                let Angle::Dyadic(p) = angle else {
                    return Err(CircuitError::Symbolic(i));
                };
                let z = d.add_z(p);
                d.add_wire(cur[q], Endpoint::node(z));
                cur[q] = Endpoint::node(z);
            }
            Gate::H { q } => {
                let h = d.add_h();
                d.add_wire(cur[q], Endpoint::node(h));
                cur[q] = Endpoint::node(h);
            }
            Gate::Cnot { c: ctl, t } => {
                let z = d.add_z(DyadicPhase::ZERO);
                let x = d.add_x(DyadicPhase::ZERO);
                d.add_wire(cur[ctl], Endpoint::node(z));
                d.add_wire(cur[t], Endpoint::node(x));
                d.connect(z, x);
                cur[ctl] = Endpoint::node(z);
                cur[t] = Endpoint::node(x);
                power += 1;
            }
        }
    }
    for (q, e) in cur.into_iter().enumerate() {
        d.add_wire(e, Endpoint::Output(q));
    }
    Ok(CircuitDiagram {
        diagram: d,
        sqrt2_power: power,
    })
}

fn bit_of(q: usize, n: usize) -> usize {
    1 << (n - 1 - q)
}

/// Applies `g` to every column of the row-major `dim × cols` array `m`.
fn apply_rows<T: Clone>(
    m: &mut [T],
    cols: usize,
    n: usize,
    g: &Gate,
    phase: impl Fn(&T) -> T,
    hadamard: impl Fn(&T, &T) -> (T, T),
) {
    let dim = 1 << n;
    match *g {
        Gate::Z { q, .. } => {
            let b = bit_of(q, n);
            for r in (0..dim).filter(|r| r & b != 0) {
                for c in 0..cols {
                    m[r * cols + c] = phase(&m[r * cols + c]);
                }
            }
        }
        Gate::H { q } => {
            let b = bit_of(q, n);
            for r in (0..dim).filter(|r| r & b == 0) {
                for c in 0..cols {
                    let (x, y) = hadamard(&m[r * cols + c], &m[(r | b) * cols + c]);
                    m[r * cols + c] = x;
                    m[(r | b) * cols + c] = y;
                }
            }
        }
        Gate::Cnot { c: ctl, t } => {
            let (bc, bt) = (bit_of(ctl, n), bit_of(t, n));
            for r in (0..dim).filter(|r| r & bc != 0 && r & bt == 0) {
                for c in 0..cols {
                    m.swap(r * cols + c, (r | bt) * cols + c);
                }
            }
        }
    }
}

/// Exact unitary of a circuit with dyadic angles.
pub fn circuit_matrix_exact(c: &Circuit) -> Result<ExactMatrix, CircuitError> {
    c.validate()?;
    let dim = 1 << c.n;
    let mut m = ExactMatrix::identity(dim).entries().to_vec();
    let s = FieldElement::inv_sqrt2();
    for (i, g) in c.gates.iter().enumerate() {
        let w = match g {
            Gate::Z {
                angle: Angle::Dyadic(p),
                ..
            } => FieldElement::from_dyadic_phase(p.num(), p.k()),
            Gate::Z {
                angle: Angle::Symbolic(_),
                ..
            } => return Err(CircuitError::Symbolic(i)),
            _ => FieldElement::one(),
        };
        apply_rows(
            &mut m,
            dim,
            c.n,
            g,
            |x| x * &w,
            |x, y| ((x + y) * &s, (x - y) * &s),
        );
    }
    Ok(ExactMatrix::new(dim, dim, m))
}

/// Float unitary; symbolic angles are evaluated from their rational cos/sin.
pub fn circuit_matrix_float(c: &Circuit) -> Result<FloatMatrix, CircuitError> {
    c.validate()?;
    let dim = 1usize << c.n;
    let mut m = FloatMatrix::identity(dim).entries().to_vec();
    let s = std::f64::consts::FRAC_1_SQRT_2;
    for g in &c.gates {
        let w = match g {
            Gate::Z { angle, .. } => angle.cis(),
            _ => Complex64::new(1.0, 0.0),
        };
        apply_rows(
            &mut m,
            dim,
            c.n,
            g,
            |x| x * w,
            |x, y| ((x + y) * s, (x - y) * s),
        );
    }
    let err = (c.gates.len() as f64 + 1.0) * 8.0 * f64::EPSILON * (dim as f64).sqrt();
    Ok(FloatMatrix::new(dim, dim, m, err))
}

// ---------------------------------------------------------------------------
// aux circuits

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Instr {
    Gate(Gate),
    /// Reset an auxiliary qubit to `|0⟩`.
    Prepare {
        q: usize,
    },
    /// Z-basis measurement of an auxiliary qubit into a classical bit.
    Measure {
        q: usize,
        bit: usize,
    },
    /// Apply `gate` iff the classical bit is 1.
    Cc {
        bit: usize,
        gate: Gate,
    },
}

/// Qubits `0..n_main` are the main register, `n_main..n_main+n_aux` are
/// auxiliary and start in `|0⟩`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AuxCircuit {
    pub n_main: usize,
    pub n_aux: usize,
    pub instrs: Vec<Instr>,
}

#[derive(Clone, Debug)]
pub struct Branch {
    /// Classical bits in id order; a suffix `/v` records the final values of
    /// auxiliary qubits whose state was not fixed by a measurement.
    pub outcome: String,
    /// Induced map on the main register.
    pub operator: FloatMatrix,
    /// `tr(B†B)/2ⁿ`, the outcome probability averaged over basis inputs.
    pub weight: f64,
}

#[derive(Clone, Debug)]
pub struct Determinism {
    pub deterministic: bool,
    /// Normalized common unitary when deterministic.
    pub unitary: Option<FloatMatrix>,
}

impl AuxCircuit {
    pub fn width(&self) -> usize {
        self.n_main + self.n_aux
    }

    /// Classical bit ids in order of first measurement.
    fn check(&self, bound: usize) -> Result<Vec<usize>, CircuitError> {
        if self.n_aux > bound {
            return Err(CircuitError::AuxBound {
                aux: self.n_aux,
                bound,
            });
        }
        let n = self.width();
        let mut bits = Vec::new();
        // None: unknown; Some(v): known classical value
        let mut known: Vec<Option<bool>> = vec![Some(false); n];
        for (i, ins) in self.instrs.iter().enumerate() {
            match *ins {
                Instr::Gate(g) => {
                    g.check(i, n)?;
                    for q in g.qubits() {
                        known[q] = None;
                    }
                }
                Instr::Prepare { q } => {
                    self.check_aux(i, q)?;
                    if known[q].is_none() {
                        return Err(CircuitError::PrepareUnknown { index: i, qubit: q });
                    }
                    known[q] = Some(false);
                }
                Instr::Measure { q, bit } => {
                    self.check_aux(i, q)?;
                    if bits.contains(&bit) {
                        return Err(CircuitError::BitReassigned { index: i, bit });
                    }
                    bits.push(bit);
                    known[q] = Some(false);
                }
                Instr::Cc { bit, gate } => {
                    gate.check(i, n)?;
                    if !bits.contains(&bit) {
                        return Err(CircuitError::BitUnassigned { index: i, bit });
                    }
                    for q in gate.qubits() {
                        known[q] = None;
                    }
                }
            }
        }
        Ok(bits)
    }

    fn check_aux(&self, index: usize, q: usize) -> Result<(), CircuitError> {
        if q < self.n_main || q >= self.width() {
            return Err(CircuitError::NotAux { index, qubit: q });
        }
        Ok(())
    }

    pub fn to_jsonl(&self) -> String {
        let mut out = serde_json::json!({ "main": self.n_main, "aux": self.n_aux }).to_string();
        out.push('\n');
        for ins in &self.instrs {
            let rec = match *ins {
                Instr::Gate(g) => GateRecord::from(g),
                Instr::Prepare { q } => GateRecord::Prep { q },
                Instr::Measure { q, bit } => GateRecord::Meas { q, bit },
                Instr::Cc { bit, gate } => GateRecord::Cc {
                    bit,
                    gate: Box::new(GateRecord::from(gate)),
                },
            };
            out.push_str(&serde_json::to_string(&rec).expect("instruction serializes"));
            out.push('\n');
        }
        out
    }

    /// The first non-empty line must be `{"main":n,"aux":a}`.
    pub fn from_jsonl(text: &str) -> Result<AuxCircuit, CircuitError> {
        let mut header = None;
        let mut instrs = Vec::new();
        for (i, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            let perr = |msg: String| CircuitError::Parse { line: i + 1, msg };
            let v: serde_json::Value =
                serde_json::from_str(line).map_err(|e| perr(e.to_string()))?;
            if header.is_none() {
                let get = |k: &str| v.get(k).and_then(|x| x.as_u64()).map(|x| x as usize);
                match (get("main"), get("aux")) {
                    (Some(m), Some(a)) => header = Some((m, a)),
                    _ => return Err(perr("expected header {\"main\":n,\"aux\":a}".into())),
                }
                continue;
            }
            let rec: GateRecord = serde_json::from_value(v).map_err(|e| perr(e.to_string()))?;
            let ins = match rec {
                GateRecord::Prep { q } => Instr::Prepare { q },
                GateRecord::Meas { q, bit } => Instr::Measure { q, bit },
                GateRecord::Cc { bit, gate } => Instr::Cc {
                    bit,
                    gate: gate.into_gate().map_err(perr)?,
                },
                other => Instr::Gate(other.into_gate().map_err(perr)?),
            };
            instrs.push(ins);
        }
        let (n_main, n_aux) = header.ok_or(CircuitError::Parse {
            line: 0,
            msg: "empty file".into(),
        })?;
        let ac = AuxCircuit {
            n_main,
            n_aux,
            instrs,
        };
        ac.check(usize::MAX)?;
        Ok(ac)
    }
}

/// Main-register operator of every nonzero measurement branch.
pub fn aux_branch_operators(ac: &AuxCircuit) -> Result<Vec<Branch>, CircuitError> {
    aux_branch_operators_bounded(ac, DEFAULT_AUX_BOUND)
}

pub fn aux_branch_operators_bounded(
    ac: &AuxCircuit,
    bound: usize,
) -> Result<Vec<Branch>, CircuitError> {
    let bits = ac.check(bound)?;
    let n = ac.width();
    let dim = 1usize << n;
    let main_dim = 1usize << ac.n_main;
    let aux_dim = 1usize << ac.n_aux;
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let zero = Complex64::new(0.0, 0.0);
    let mut out = Vec::new();

    for assignment in 0..1usize << bits.len() {
        let value: BTreeMap<usize, bool> = bits
            .iter()
            .enumerate()
            .map(|(i, &b)| (b, assignment >> (bits.len() - 1 - i) & 1 == 1))
            .collect();
        // columns: main basis inputs tensored with |0…0⟩ on the aux register
        let mut m = vec![zero; dim * main_dim];
        for c in 0..main_dim {
            m[(c * aux_dim) * main_dim + c] = Complex64::new(1.0, 0.0);
        }
        let mut known: Vec<Option<bool>> = vec![Some(false); n];
        let apply = |m: &mut Vec<Complex64>, g: &Gate| {
            let w = match g {
                Gate::Z { angle, .. } => angle.cis(),
                _ => Complex64::new(1.0, 0.0),
            };
            apply_rows(
                m,
                main_dim,
                n,
                g,
                |x| x * w,
                |x, y| ((x + y) * s, (x - y) * s),
            );
        };
        for ins in &ac.instrs {
            match ins {
                Instr::Gate(g) => {
                    apply(&mut m, g);
                    for q in g.qubits() {
                        known[q] = None;
                    }
                }
                Instr::Prepare { q } => {
                    if known[*q] == Some(true) {
                        // flip the known |1⟩ back to |0⟩
                        let b = bit_of(*q, n);
                        for r in (0..dim).filter(|r| r & b == 0) {
                            for c in 0..main_dim {
                                m.swap(r * main_dim + c, (r | b) * main_dim + c);
                            }
                        }
                    }
                    known[*q] = Some(false);
                }
                Instr::Measure { q, bit } => {
                    let v = value[bit];
                    let b = bit_of(*q, n);
                    for r in (0..dim).filter(|r| (r & b != 0) != v) {
                        for c in 0..main_dim {
                            m[r * main_dim + c] = zero;
                        }
                    }
                    known[*q] = Some(v);
                }
                Instr::Cc { bit, gate } => {
                    if value[bit] {
                        apply(&mut m, gate);
                    }
                    for q in gate.qubits() {
                        known[q] = None;
                    }
                }
            }
        }
        let bit_str: String = (0..bits.len())
            .map(|i| {
                if assignment >> (bits.len() - 1 - i) & 1 == 1 {
                    '1'
                } else {
                    '0'
                }
            })
            .collect();
        let resolved = known[ac.n_main..].iter().all(Option::is_some);
        for v in 0..aux_dim {
            // rows with aux register = v
            let block: Vec<Complex64> = (0..main_dim)
                .flat_map(|r| {
                    let row = r * aux_dim + v;
                    m[row * main_dim..(row + 1) * main_dim].to_vec()
                })
                .collect();
            let norm2: f64 = block.iter().map(|z| z.norm_sqr()).sum();
            if norm2 <= 1e-24 {
                continue;
            }
            let outcome = if resolved || ac.n_aux == 0 {
                bit_str.clone()
            } else {
                format!("{bit_str}/{v:0width$b}", width = ac.n_aux)
            };
            let err =
                (ac.instrs.len() as f64 + 1.0) * 8.0 * f64::EPSILON * (main_dim as f64).sqrt();
            out.push(Branch {
                outcome,
                operator: FloatMatrix::new(main_dim, main_dim, block, err),
                weight: norm2 / main_dim as f64,
            });
        }
    }
    Ok(out)
}

/// True iff every nonzero branch operator is proportional to one common
/// unitary (float tolerance `1e-9`).
pub fn aux_is_deterministic(ac: &AuxCircuit) -> Result<Determinism, CircuitError> {
    let branches = aux_branch_operators(ac)?;
    let live: Vec<&Branch> = branches.iter().filter(|b| b.weight > 1e-12).collect();
    let no = Determinism {
        deterministic: false,
        unitary: None,
    };
    let Some(first) = live.first() else {
        return Ok(no);
    };
    for b in &live[1..] {
        if !crate::verify::is_proportional_float_tol(&first.operator, &b.operator, 1e-9)
            .proportional
        {
            return Ok(no);
        }
    }
    let u = first
        .operator
        .scale(Complex64::new(1.0 / first.weight.sqrt(), 0.0));
    let dim = u.rows();
    let gram = u.adjoint().mul(&u);
    let id = FloatMatrix::identity(dim);
    let dev = gram.sub(&id).max_abs();
    if dev > 1e-9 {
        return Ok(no);
    }
    Ok(Determinism {
        deterministic: true,
        unitary: Some(u),
    })
}

/// One main qubit and one auxiliary qubit: the auxiliary qubit, put in `|+⟩`,
/// controls an X on the main qubit and is then measured; outcome 1 is undone
/// by a classically controlled `H·Z_π·H = X`. Without the correction the two
/// branches differ by X.
pub fn x_correction_example(corrected: bool) -> AuxCircuit {
    let mut instrs = vec![
        Instr::Prepare { q: 1 },
        Instr::Gate(Gate::h(1)),
        Instr::Gate(Gate::cnot(1, 0)),
        Instr::Measure { q: 1, bit: 0 },
    ];
    if corrected {
        instrs.push(Instr::Cc {
            bit: 0,
            gate: Gate::h(0),
        });
        instrs.push(Instr::Cc {
            bit: 0,
            gate: Gate::z(0, DyadicPhase::PI),
        });
        instrs.push(Instr::Cc {
            bit: 0,
            gate: Gate::h(0),
        });
    }
    AuxCircuit {
        n_main: 1,
        n_aux: 1,
        instrs,
    }
}

// ---------------------------------------------------------------------------
// line format

#[derive(Serialize, Deserialize)]
#[serde(tag = "g")]
enum GateRecord {
    H {
        q: usize,
    },
    Z {
        q: usize,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        phase: Option<DyadicPhase>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        sym: Option<SymbolicAngle>,
    },
    #[serde(rename = "CNOT")]
    Cnot {
        c: usize,
        t: usize,
    },
    #[serde(rename = "prep")]
    Prep {
        q: usize,
    },
    #[serde(rename = "meas")]
    Meas {
        q: usize,
        bit: usize,
    },
    #[serde(rename = "cc")]
    Cc {
        bit: usize,
        gate: Box<GateRecord>,
    },
}

impl From<Gate> for GateRecord {
    fn from(g: Gate) -> Self {
        match g {
            Gate::H { q } => GateRecord::H { q },
            Gate::Z {
                q,
                angle: Angle::Dyadic(p),
            } => GateRecord::Z {
                q,
                phase: Some(p),
                sym: None,
            },
            Gate::Z {
                q,
                angle: Angle::Symbolic(s),
            } => GateRecord::Z {
                q,
                phase: None,
                sym: Some(s),
            },
            Gate::Cnot { c, t } => GateRecord::Cnot { c, t },
        }
    }
}

impl GateRecord {
    fn into_gate(self) -> Result<Gate, String> {
        match self {
            GateRecord::H { q } => Ok(Gate::H { q }),
            GateRecord::Z { q, phase, sym } => match (phase, sym) {
                (Some(p), None) => Ok(Gate::z(q, p)),
                (None, Some(s)) => {
                    let s = SymbolicAngle::new(s.n1, s.n).map_err(|e| e.to_string())?;
                    Ok(Gate::z_sym(q, s))
                }
                (None, None) => Ok(Gate::z(q, DyadicPhase::ZERO)),
                (Some(_), Some(_)) => Err("Z gate has both phase and sym".into()),
            },
            GateRecord::Cnot { c, t } => Ok(Gate::Cnot { c, t }),
            _ => Err("aux instruction in a plain circuit".into()),
        }
    }
}
