//! Diagram constructions for formulas: NOT, AND, the formula map `L_f`, the
//! hardness gadget and the boosted sampling gadget.

pub mod formula;

use std::collections::BTreeMap;

use num_complex::Complex64;
use thiserror::Error;

use crate::circuits::{circuit_to_diagram, Circuit, Gate, SymbolicAngle};
use crate::diagram::{Diagram, Endpoint, NodeId};
use crate::phase::DyadicPhase;

pub use formula::{
    parse_dimacs, parse_formula, parse_formula_with_vars, BoolFormula, Expr, ParseError,
};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GadgetError {
    #[error("boost matrix needs 1 <= n1 <= 2^n, got n1 = {n1}, n = {n}")]
    BadCount { n1: u64, n: u32 },
}

fn quarter(num: i64) -> DyadicPhase {
    DyadicPhase::new(num, 2)
}

/// `X_π`, the NOT gate.
pub fn not_gadget() -> Diagram {
    let mut d = Diagram::new(1, 1);
    let x = d.add_x(DyadicPhase::PI);
    d.add_wire(Endpoint::Input(0), Endpoint::node(x));
    d.add_wire(Endpoint::node(x), Endpoint::Output(0));
    d
}

/// `|x,y⟩ ↦ |x·y⟩` up to a common scalar: a Toffoli onto `|0⟩` with both
/// controls discarded by `⟨+|`. The CCZ inside is the phase polynomial
/// `π/4·(x + y + z − x⊕y − x⊕z − y⊕z + x⊕y⊕z)`, each parity term a phase
/// gadget. The outer Hadamard on the target turns `|0⟩` into `|+⟩`, which is
/// fused into the target spider.
pub fn and_gadget() -> Diagram {
    let mut d = Diagram::new(2, 1);
    let zx = d.add_z(quarter(1));
    let zy = d.add_z(quarter(1));
    let zt = d.add_z(quarter(1));
    let h = d.add_h();
    d.add_wire(Endpoint::Input(0), Endpoint::node(zx));
    d.add_wire(Endpoint::Input(1), Endpoint::node(zy));
    d.connect(zt, h);
    d.add_wire(Endpoint::node(h), Endpoint::Output(0));
    let gadgets: [(&[NodeId], i64); 4] = [
        (&[zx, zy], -1),
        (&[zx, zt], -1),
        (&[zy, zt], -1),
        (&[zx, zy, zt], 1),
    ];
    for (legs, num) in gadgets {
        let hub = d.add_x(DyadicPhase::ZERO);
        for &l in legs {
            d.connect(l, hub);
        }
        let p = d.add_z(quarter(num));
        d.connect(hub, p);
    }
    d
}

/// Copies `g` into `host` and returns the endpoints its inputs and outputs
/// were attached to. `g` must not wire a boundary straight to a boundary.
fn embed(host: &mut Diagram, g: &Diagram) -> (Vec<Endpoint>, Vec<Endpoint>) {
    let ids: BTreeMap<NodeId, NodeId> = g
        .nodes()
        .iter()
        .map(|(&id, k)| (id, host.add_node(k.clone())))
        .collect();
    let remap = |e: Endpoint| match e {
        Endpoint::Node { id, port } => Endpoint::Node { id: ids[&id], port },
        other => other,
    };
    let mut ins = vec![None; g.n_inputs()];
    let mut outs = vec![None; g.n_outputs()];
    for &(a, b) in g.wires() {
        match (a, b) {
            (Endpoint::Input(i), x) | (x, Endpoint::Input(i)) => ins[i] = Some(remap(x)),
            (Endpoint::Output(i), x) | (x, Endpoint::Output(i)) => outs[i] = Some(remap(x)),
            (x, y) => {
                host.add_wire(remap(x), remap(y));
            }
        }
    }
    let collect =
        |v: Vec<Option<Endpoint>>| v.into_iter().map(|e| e.expect("boundary wired")).collect();
    (collect(ins), collect(outs))
}

/// Adds the spiders of `f` to `d` and returns the endpoint carrying `f(x)`.
/// Variable `i` is a phase-0 Z spider with one leg per occurrence, plus a leg
/// to `Input(i)` when `open`.
fn build_formula(d: &mut Diagram, f: &BoolFormula, open: bool) -> Endpoint {
    let expr = f.expr.to_and_not();
    let vars: Vec<NodeId> = (0..f.n).map(|_| d.add_z(DyadicPhase::ZERO)).collect();
    if open {
        for (i, &v) in vars.iter().enumerate() {
            d.add_wire(Endpoint::Input(i), Endpoint::node(v));
        }
    }
    let and = and_gadget();
    fn build(d: &mut Diagram, e: &Expr, vars: &[NodeId], and: &Diagram) -> Endpoint {
        match e {
            Expr::Var(i) => Endpoint::node(vars[*i]),
            Expr::Not(c) => {
                let src = build(d, c, vars, and);
                let x = d.add_x(DyadicPhase::PI);
                d.add_wire(src, Endpoint::node(x));
                Endpoint::node(x)
            }
            Expr::And(a, b) => {
                let sa = build(d, a, vars, and);
                let sb = build(d, b, vars, and);
                let (ins, outs) = embed(d, and);
                d.add_wire(sa, ins[0]);
                d.add_wire(sb, ins[1]);
                outs[0]
            }
            Expr::Or(..) => unreachable!("rewritten to And/Not"),
        }
    }
    build(d, &expr, &vars, &and)
}

/// The `n → 1` map `Σ_x |f(x)⟩⟨x|` up to a scalar. `Or` is rewritten to
/// `And`/`Not` first and variables fan out through phase-0 Z spiders.
pub fn formula_map(f: &BoolFormula) -> Diagram {
    let mut d = Diagram::new(f.n, 1);
    let root = build_formula(&mut d, f, true);
    d.add_wire(root, Endpoint::Output(0));
    d
}

/// `Σ_x |f(x)⟩`: `formula_map` fed with `n` copies of `|0⟩ + |1⟩`, each
/// fused into its variable spider.
pub fn formula_state(f: &BoolFormula) -> Diagram {
    let mut d = Diagram::new(0, 1);
    let root = build_formula(&mut d, f, false);
    d.add_wire(root, Endpoint::Output(0));
    d
}

/// Controls `−iX` on the formula state and discards the control with
/// `⟨0| + ⟨1|`, leaving `N₀·I − i·N₁·X` up to a positive scalar. This is the
/// rotation `X_α = |+⟩⟨+| + e^{iα}|−⟩⟨−|` with `cos(α/2) : sin(α/2) = N₀ : N₁`,
/// up to global phase.
///
/// The control phase `Z_{−π/2}`, the CNOT's control spider and the discarding
/// effect are fused into one Z spider; the CNOT's target is an X spider on
/// the wire.
pub fn hardness_gadget(f: &BoolFormula) -> Diagram {
    let mut d = Diagram::new(1, 1);
    let root = build_formula(&mut d, f, false);
    let c = d.add_z(DyadicPhase::new(-1, 1));
    let t = d.add_x(DyadicPhase::ZERO);
    d.add_wire(root, Endpoint::node(c));
    d.connect(c, t);
    d.add_wire(Endpoint::Input(0), Endpoint::node(t));
    d.add_wire(Endpoint::node(t), Endpoint::Output(0));
    d
}

/// [`hardness_gadget`] assembled by composition, before fusion: `n`
/// one-legged Z states into `formula_map`, then `Z_{−π/2}` and a CNOT from
/// the formula wire onto the input wire, then a one-legged Z effect.
pub fn hardness_gadget_composed(f: &BoolFormula) -> Diagram {
    let mut plus = Diagram::empty();
    for _ in 0..f.n {
        let mut s = Diagram::new(0, 1);
        let z = s.add_z(DyadicPhase::ZERO);
        s.add_wire(Endpoint::node(z), Endpoint::Output(0));
        plus = Diagram::tensor(&plus, &s);
    }
    let state = Diagram::compose(&plus, &formula_map(f)).expect("arity n");
    let open = Diagram::tensor(&state, &Diagram::identity(1));
    let ctrl = Circuit::new(
        2,
        vec![Gate::z(0, DyadicPhase::new(-1, 1)), Gate::cnot(0, 1)],
    )
    .expect("valid circuit");
    let ctrl = circuit_to_diagram(&ctrl).expect("dyadic circuit").diagram;
    let closed = Diagram::tensor(&plus_effect(), &Diagram::identity(1));
    let d = Diagram::compose(&open, &ctrl).expect("arity 2");
    Diagram::compose(&d, &closed).expect("arity 2")
}

fn plus_effect() -> Diagram {
    let mut e = Diagram::new(1, 0);
    let z = e.add_z(DyadicPhase::ZERO);
    e.add_wire(Endpoint::Input(0), Endpoint::node(z));
    e
}

/// Row-major `M` with `M|0⟩ = |0⟩` and `M·X_α|0⟩ = |1⟩`, where `α` is the
/// angle of `n1` solutions among `2ⁿ`. `X_α|0⟩ = (p, q)` with
/// `p = (1 + e^{iα})/2`, `q = (1 − e^{iα})/2`.
pub fn boost_matrix(n1: u64, n: u32) -> Result<[Complex64; 4], GadgetError> {
    let bad = GadgetError::BadCount { n1, n };
    if n1 == 0 {
        return Err(bad);
    }
    let a = SymbolicAngle::new(n1, n).map_err(|_| bad)?;
    let w = a.cis();
    let one = Complex64::new(1.0, 0.0);
    let p = (one + w) / 2.0;
    let q = (one - w) / 2.0;
    Ok([one, -p / q, Complex64::new(0.0, 0.0), one / q])
}

/// A `1 → 1` diagram that is `I` when `f` is unsatisfiable and `X` when `f`
/// has exactly `assumed_n1` solutions, up to scalar. The hardness gadget acts
/// on `|0⟩`, the boost matrix maps the result to `|0⟩` or `|1⟩`, and that
/// qubit controls a CNOT onto the wire before being discarded by
/// `⟨0| + ⟨1|`. For other counts the result is `a·I + b·X`, generally not
/// proportional to a unitary.
pub fn sampling_gadget(f: &BoolFormula, assumed_n1: u64) -> Result<Diagram, GadgetError> {
    let m = boost_matrix(assumed_n1, f.n as u32)?;
    let mut zero = Diagram::new(0, 1);
    let x = zero.add_x(DyadicPhase::ZERO);
    zero.add_wire(Endpoint::node(x), Endpoint::Output(0));
    let mut boost = Diagram::new(1, 1);
    let b = boost.add_matrix(m);
    boost.add_wire(Endpoint::Input(0), Endpoint::port_in(b));
    boost.add_wire(Endpoint::port_out(b), Endpoint::Output(0));
    let s = Diagram::compose(&zero, &hardness_gadget(f)).expect("arity 1");
    let s = Diagram::compose(&s, &boost).expect("arity 1");
    let open = Diagram::tensor(&s, &Diagram::identity(1));
    let cnot = Circuit::new(2, vec![Gate::cnot(0, 1)]).expect("valid circuit");
    let cnot = circuit_to_diagram(&cnot).expect("dyadic circuit").diagram;
    let closed = Diagram::tensor(&plus_effect(), &Diagram::identity(1));
    let d = Diagram::compose(&open, &cnot).expect("arity 2");
    Ok(Diagram::compose(&d, &closed).expect("arity 2"))
}
