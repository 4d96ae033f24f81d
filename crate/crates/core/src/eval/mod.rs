//! Contraction of diagrams to the matrices they denote.
//!
//! Exact mode computes over `Z[ω]` with a separate power of `√2`, first with
//! machine-word coefficients for small orders and falling back to big
//! integers on overflow. Float mode tracks a certified error bound.

mod matrix;
mod network;

pub use matrix::{op_norm_2x2, ExactMatrix, FloatMatrix};
pub use network::ContractionPlan;

use num_bigint::BigInt;
use num_complex::Complex64;
use thiserror::Error;

use crate::diagram::{Diagram, NodeKind, Violation};
use crate::field::FieldElement;
use network::{BigCyc, Flt, Network, Ring, SmallCyc, Tensor};

/// Largest phase denominator exponent admitted in exact mode.
pub const MAX_EXACT_K: u32 = 16;

pub const DEFAULT_SIZE_CAP: u128 = 1 << 20;

#[derive(Debug, Error)]
pub enum EvalError {
    #[error("invalid diagram: {}", .0.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("; "))]
    Invalid(Vec<Violation>),
    #[error("matrix boxes can only be evaluated in float mode")]
    MatrixBoxInExact,
    #[error("intermediate tensor of {needed} entries exceeds the size cap {cap}")]
    SizeCap { needed: u128, cap: u128 },
    #[error("phase denominator 2^{0} is too fine for exact evaluation")]
    PhaseTooFine(u32),
    #[error("bad contraction plan: {0}")]
    BadPlan(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EvalOptions {
    /// Maximum number of entries of any intermediate tensor.
    pub size_cap: u128,
}

impl Default for EvalOptions {
    fn default() -> Self {
        EvalOptions {
            size_cap: DEFAULT_SIZE_CAP,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    Exact,
    Float,
}

#[derive(Clone, Debug)]
pub enum Contracted {
    Exact(ExactMatrix),
    Float(FloatMatrix),
}

/// Float contraction with the power of `√2` kept apart, for callers that
/// only need the matrix up to a positive scalar.
#[derive(Clone, Debug)]
pub struct ScaledFloat {
    /// Denoted operator divided by `2^{sqrt2_exp/2}`; `err` is in the same units.
    pub matrix: FloatMatrix,
    pub sqrt2_exp: i64,
}

/// Greedy pairwise contraction order for `d`.
pub fn plan_contraction(d: &Diagram) -> Result<ContractionPlan, EvalError> {
    plan_contraction_with(d, EvalOptions::default())
}

pub fn plan_contraction_with(d: &Diagram, opts: EvalOptions) -> Result<ContractionPlan, EvalError> {
    let net = Network::build(d)?;
    network::greedy_plan(&net, opts.size_cap)
}

/// A uniformly random pairing order over the tensors of `d`.
pub fn random_plan(d: &Diagram, rng: &mut impl rand::Rng) -> Result<ContractionPlan, EvalError> {
    let net = Network::build(d)?;
    Ok(network::random_plan(net.protos.len(), rng))
}

pub fn contract(d: &Diagram, mode: Mode) -> Result<Contracted, EvalError> {
    match mode {
        Mode::Exact => contract_exact(d).map(Contracted::Exact),
        Mode::Float => contract_float(d).map(Contracted::Float),
    }
}

pub fn contract_exact(d: &Diagram) -> Result<ExactMatrix, EvalError> {
    contract_exact_with(d, EvalOptions::default())
}

pub fn contract_exact_with(d: &Diagram, opts: EvalOptions) -> Result<ExactMatrix, EvalError> {
    let net = Network::build(d)?;
    if net.has_matrix() {
        return Err(EvalError::MatrixBoxInExact);
    }
    let plan = network::greedy_plan(&net, opts.size_cap)?;
    exact_from_plan(&net, &plan, opts.size_cap)
}

/// Exact contraction following a caller-supplied plan.
pub fn contract_exact_with_plan(
    d: &Diagram,
    plan: &ContractionPlan,
) -> Result<ExactMatrix, EvalError> {
    let net = Network::build(d)?;
    if net.has_matrix() {
        return Err(EvalError::MatrixBoxInExact);
    }
    if plan.initial != net.protos.len() {
        return Err(EvalError::BadPlan("plan does not match diagram".into()));
    }
    exact_from_plan(&net, plan, u128::MAX)
}

fn exact_from_plan(
    net: &Network,
    plan: &ContractionPlan,
    cap: u128,
) -> Result<ExactMatrix, EvalError> {
    let order = net.order()?;
    let h = (order / 2) as usize;
    let small = match h {
        1 => run_small::<1>(net, plan, cap, order)?,
        2 => run_small::<2>(net, plan, cap, order)?,
        4 => run_small::<4>(net, plan, cap, order)?,
        8 => run_small::<8>(net, plan, cap, order)?,
        _ => None,
    };
    if let Some(m) = small {
        return Ok(m);
    }
    let t = network::execute::<BigCyc>(net, plan, h, cap)?
        .unwrap_or_else(|_| unreachable!("big integers do not overflow"));
    Ok(to_exact(net, &t, order, |c| c.0.clone()))
}

fn run_small<const H: usize>(
    net: &Network,
    plan: &ContractionPlan,
    cap: u128,
    order: u32,
) -> Result<Option<ExactMatrix>, EvalError> {
    match network::execute::<SmallCyc<H>>(net, plan, H, cap)? {
        Ok(t) => Ok(Some(to_exact(net, &t, order, |c| {
            c.0.iter().map(|&x| BigInt::from(x)).collect()
        }))),
        Err(_) => Ok(None),
    }
}

fn to_exact<R: Ring>(
    net: &Network,
    t: &Tensor<R>,
    order: u32,
    coeffs: impl Fn(&R) -> Vec<BigInt>,
) -> ExactMatrix {
    let rows = 1usize << net.outputs.len();
    let cols = 1usize << net.inputs.len();
    let factor = FieldElement::sqrt2_pow(t.scale);
    let entries = t
        .data
        .iter()
        .map(|v| {
            if v.is_zero() {
                FieldElement::zero()
            } else {
                let e = FieldElement::new(order, coeffs(v), BigInt::from(1)).expect("valid order");
                &e * &factor
            }
        })
        .collect();
    ExactMatrix::new(rows, cols, entries)
}

pub fn contract_float(d: &Diagram) -> Result<FloatMatrix, EvalError> {
    contract_float_with(d, EvalOptions::default())
}

pub fn contract_float_with(d: &Diagram, opts: EvalOptions) -> Result<FloatMatrix, EvalError> {
    let s = contract_float_scaled(d, opts)?;
    let e = s.sqrt2_exp;
    let half = e.div_euclid(2) as i32;
    let mut f = (half as f64).exp2();
    let mut extra = 0.0;
    if e.rem_euclid(2) == 1 {
        f *= std::f64::consts::SQRT_2;
        extra = f64::EPSILON;
    }
    let m = s.matrix;
    let norm = m.frobenius();
    let entries = m.entries().iter().map(|z| z * f).collect();
    let err = (m.err() + extra * norm) * f;
    Ok(FloatMatrix::new(m.rows(), m.cols(), entries, err))
}

pub fn contract_float_scaled(d: &Diagram, opts: EvalOptions) -> Result<ScaledFloat, EvalError> {
    let net = Network::build(d)?;
    let plan = network::greedy_plan(&net, opts.size_cap)?;
    let h = (net.order().unwrap_or(1 << 20) / 2) as usize;
    let t = network::execute::<Flt>(&net, &plan, h.max(1), opts.size_cap)?
        .unwrap_or_else(|_| unreachable!("floats do not overflow"));
    let rows = 1usize << net.outputs.len();
    let cols = 1usize << net.inputs.len();
    let entries = t.data.iter().map(|z| z.0).collect();
    let err = t.err * ((rows * cols) as f64).sqrt();
    Ok(ScaledFloat {
        matrix: FloatMatrix::new(rows, cols, entries, err),
        sqrt2_exp: t.scale,
    })
}

/// Exact tensor of a single node with `degree` legs, entries in row-major leg
/// order (leg 0 most significant). Matrix boxes have legs `(in, out)`.
pub fn node_tensor_exact(kind: &NodeKind, degree: usize) -> Result<Vec<FieldElement>, EvalError> {
    let d = single_node(kind, degree);
    Ok(contract_exact(&d)?.entries().to_vec())
}

pub fn node_tensor_float(kind: &NodeKind, degree: usize) -> Result<Vec<Complex64>, EvalError> {
    let d = single_node(kind, degree);
    Ok(contract_float(&d)?.entries().to_vec())
}

/// The node as a diagram whose outputs are its legs in order.
fn single_node(kind: &NodeKind, degree: usize) -> Diagram {
    use crate::diagram::Endpoint;
    let mut d = Diagram::new(0, degree);
    let id = d.add_node(kind.clone());
    match kind {
        NodeKind::Matrix(_) => {
            d.add_wire(Endpoint::port_in(id), Endpoint::Output(0));
            d.add_wire(Endpoint::port_out(id), Endpoint::Output(1));
        }
        _ => {
            for i in 0..degree {
                d.add_wire(Endpoint::node(id), Endpoint::Output(i));
            }
        }
    }
    d
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::Endpoint;
    use crate::phase::DyadicPhase;

    fn fe(v: i64) -> FieldElement {
        FieldElement::from_integer(v)
    }

    #[test]
    fn spider_states() {
        let z = node_tensor_exact(&NodeKind::Z(DyadicPhase::ZERO), 1).unwrap();
        assert_eq!(z, vec![fe(1), fe(1)]);
        let x = node_tensor_exact(&NodeKind::X(DyadicPhase::ZERO), 1).unwrap();
        assert_eq!(x, vec![FieldElement::sqrt2(), fe(0)]);
        let h = node_tensor_exact(&NodeKind::H, 2).unwrap();
        let s = FieldElement::inv_sqrt2();
        assert_eq!(h, vec![s.clone(), s.clone(), s.clone(), -&s]);
        let z0 = node_tensor_exact(&NodeKind::Z(DyadicPhase::PI), 0).unwrap();
        assert_eq!(z0, vec![fe(0)]);
    }

    #[test]
    fn cnot_contracts_to_scaled_cnot() {
        let mut d = Diagram::new(2, 2);
        let z = d.add_z(DyadicPhase::ZERO);
        let x = d.add_x(DyadicPhase::ZERO);
        d.add_wire(Endpoint::Input(0), Endpoint::node(z));
        d.add_wire(Endpoint::node(z), Endpoint::Output(0));
        d.add_wire(Endpoint::Input(1), Endpoint::node(x));
        d.add_wire(Endpoint::node(x), Endpoint::Output(1));
        d.connect(z, x);
        let m = contract_exact(&d).unwrap().scale(&FieldElement::sqrt2());
        let cnot = [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]];
        for (r, row) in cnot.iter().enumerate() {
            for (c, v) in row.iter().enumerate() {
                assert_eq!(m.get(r, c), &fe(*v), "entry {r},{c}");
            }
        }
        let f = contract_float(&d).unwrap();
        let s = std::f64::consts::FRAC_1_SQRT_2;
        assert!((f.get(3, 2).re - s).abs() <= f.err() + 1e-15);
    }

    #[test]
    fn empty_diagram_is_one() {
        let m = contract_exact(&Diagram::empty()).unwrap();
        assert_eq!(m.shape(), (1, 1));
        assert!(m.get(0, 0).is_one());
    }

    #[test]
    fn wire_crossing() {
        let mut d = Diagram::new(2, 2);
        d.add_wire(Endpoint::Input(0), Endpoint::Output(1));
        d.add_wire(Endpoint::Input(1), Endpoint::Output(0));
        let m = contract_exact(&d).unwrap();
        // swap: |01> -> |10>
        assert!(m.get(2, 1).is_one());
        assert!(m.get(1, 2).is_one());
        assert!(m.get(1, 1).is_zero());
    }

    #[test]
    fn chain_plan_is_sequential() {
        let mut d = Diagram::new(1, 1);
        let ids: Vec<_> = (0..6).map(|_| d.add_z(DyadicPhase::new(1, 2))).collect();
        d.add_wire(Endpoint::Input(0), Endpoint::node(ids[0]));
        for w in ids.windows(2) {
            d.connect(w[0], w[1]);
        }
        d.add_wire(Endpoint::node(ids[5]), Endpoint::Output(0));
        let p = plan_contraction(&d).unwrap();
        assert_eq!(p.steps.len(), 5);
        assert_eq!(p.max_size, 4);
        assert_eq!(p.steps[0], (0, 1));
        assert_eq!(p.steps[1], (2, 6));
        let m = contract_exact(&d).unwrap();
        assert_eq!(m.get(1, 1), &FieldElement::from_dyadic_phase(6, 2));
    }

    #[test]
    fn single_node_plan_empty() {
        let mut d = Diagram::new(0, 1);
        let z = d.add_z(DyadicPhase::ZERO);
        d.add_wire(Endpoint::node(z), Endpoint::Output(0));
        assert!(plan_contraction(&d).unwrap().steps.is_empty());
    }

    #[test]
    fn size_cap_enforced() {
        let mut d = Diagram::new(0, 12);
        for i in 0..12 {
            let z = d.add_z(DyadicPhase::ZERO);
            d.add_wire(Endpoint::node(z), Endpoint::Output(i));
        }
        let r = contract_exact_with(&d, EvalOptions { size_cap: 1 << 10 });
        assert!(matches!(r, Err(EvalError::SizeCap { .. })));
        assert!(contract_exact_with(&d, EvalOptions { size_cap: 1 << 12 }).is_ok());
    }

    #[test]
    fn matrix_box_float_only() {
        let mut d = Diagram::new(1, 1);
        let c = |re: f64, im: f64| Complex64::new(re, im);
        let m = d.add_matrix([c(1.0, 0.0), c(2.0, 0.0), c(0.0, 1.0), c(3.0, 0.0)]);
        d.add_wire(Endpoint::Input(0), Endpoint::port_in(m));
        d.add_wire(Endpoint::port_out(m), Endpoint::Output(0));
        assert!(matches!(
            contract_exact(&d),
            Err(EvalError::MatrixBoxInExact)
        ));
        let f = contract_float(&d).unwrap();
        assert_eq!(f.get(0, 1), c(2.0, 0.0));
        assert_eq!(f.get(1, 0), c(0.0, 1.0));
    }

    #[test]
    fn big_fallback_matches() {
        // many fused phase-gadget style spiders push coefficients up; force
        // the big-integer path by a fine phase
        let mut d = Diagram::new(1, 1);
        let a = d.add_z(DyadicPhase::new(1, 5));
        let b = d.add_z(DyadicPhase::new(3, 5));
        d.add_wire(Endpoint::Input(0), Endpoint::node(a));
        d.connect(a, b);
        d.add_wire(Endpoint::node(b), Endpoint::Output(0));
        let m = contract_exact(&d).unwrap();
        assert_eq!(m.get(1, 1), &FieldElement::from_dyadic_phase(1, 3));
    }
}
