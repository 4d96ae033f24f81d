//! Counting solutions through the hardness gadget, the approximate decoder,
//! a brute-force stand-in for the extraction oracle, and the randomized
//! satisfiability test built on the sampling gadget.

mod vv;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::circuits::{circuit_matrix_float, Angle, Circuit, CircuitError, Gate, SymbolicAngle};
use crate::diagram::Diagram;
use crate::eval::{self, op_norm_2x2, EvalError, EvalOptions, ExactMatrix, FloatMatrix};
use crate::field::FieldElement;
use crate::gadgets::{hardness_gadget, BoolFormula, GadgetError};
use crate::phase::DyadicPhase;
use crate::verify::{self, VerifyError};

pub use vv::{sat_decide_randomized, sat_decide_randomized_with, vv_reduce, SatDecision};

/// Largest variable count accepted by [`brute_force_count`].
pub const BRUTE_FORCE_CAP: usize = 24;

#[derive(Debug, Error)]
pub enum ReductionError {
    #[error("expected a 2x2 matrix, got {0}x{1}")]
    Shape(usize, usize),
    #[error("matrix is not of the form a·I + b·X with b/a = ±i·N1/N0: {0}")]
    NotRotation(String),
    #[error("diagram is not proportional to a unitary")]
    NotUnitary,
    #[error("no allowed rotation within {tol:e} (best residual {residual:e})")]
    Residual { residual: f64, tol: f64 },
    #[error("{n} variables exceed the cap of {cap}")]
    TooManyVars { n: usize, cap: usize },
    #[error("extracted circuit disagrees with the diagram (deviation {0:e})")]
    OracleMismatch(f64),
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error(transparent)]
    Verify(#[from] VerifyError),
    #[error(transparent)]
    Gadget(#[from] GadgetError),
    #[error(transparent)]
    Circuit(#[from] CircuitError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Provenance {
    ExactRatio,
    ApproxRounded,
    BruteForce,
}

/// `n1` solutions and `n0` non-solutions among `2ⁿ` assignments.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct CountResult {
    pub n1: u64,
    pub n0: u64,
    pub n: usize,
    pub provenance: Provenance,
}

impl CountResult {
    fn new(n1: u64, n: usize, provenance: Provenance) -> CountResult {
        CountResult {
            n1,
            n0: (1u64 << n) - n1,
            n,
            provenance,
        }
    }
}

fn check_n(n: usize, cap: usize) -> Result<(), ReductionError> {
    if n > cap {
        return Err(ReductionError::TooManyVars { n, cap });
    }
    Ok(())
}

pub fn brute_force_count(f: &BoolFormula) -> Result<CountResult, ReductionError> {
    brute_force_count_with_cap(f, BRUTE_FORCE_CAP)
}

pub fn brute_force_count_with_cap(
    f: &BoolFormula,
    cap: usize,
) -> Result<CountResult, ReductionError> {
    check_n(f.n, cap.min(62))?;
    let n1 = (0..1u64 << f.n).filter(|&x| f.eval(x)).count() as u64;
    Ok(CountResult::new(n1, f.n, Provenance::BruteForce))
}

/// Which of the two rotation forms a matrix has: `N₀·I − i·N₁·X` (`minus`)
/// or `N₀·I + i·N₁·X`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
struct Decoded {
    n1: u64,
    minus: bool,
}

fn decode_exact_signed(m: &ExactMatrix, n: usize) -> Result<Decoded, ReductionError> {
    if m.shape() != (2, 2) {
        return Err(ReductionError::Shape(m.rows(), m.cols()));
    }
    check_n(n, 62)?;
    let bad = |why: &str| Err(ReductionError::NotRotation(why.into()));
    let (a, b) = (m.get(0, 0), m.get(1, 0));
    if a != m.get(1, 1) {
        return bad("diagonal entries differ");
    }
    if b != m.get(0, 1) {
        return bad("off-diagonal entries differ");
    }
    let total = 1u64 << n;
    match (a.is_zero(), b.is_zero()) {
        (true, true) => return bad("zero matrix"),
        (false, true) => return Ok(Decoded { n1: 0, minus: true }),
        (true, false) => {
            return Ok(Decoded {
                n1: total,
                minus: true,
            })
        }
        _ => {}
    }
    // b/a = ∓i·N₁/N₀, so i·b/a = ±N₁/N₀
    let t = &b.divide(a).expect("a is nonzero") * &FieldElement::imag_unit();
    let Some((p, q)) = t.rational_value() else {
        return bad("ratio is not ±i times a rational");
    };
    let minus = p.is_positive();
    let p = p.abs();
    let num = BigInt::from(total) * &p;
    let den = &p + &q;
    let (n1, rem) = num.div_rem(&den);
    if !rem.is_zero() {
        return bad("ratio does not match any count");
    }
    Ok(Decoded {
        n1: n1.to_u64().expect("n1 <= 2^n"),
        minus,
    })
}

/// Reads `N₁` off `m ∝ N₀·I ± i·N₁·X` exactly, with `N₀ + N₁ = 2ⁿ`.
pub fn decode_count_exact(m: &ExactMatrix, n: usize) -> Result<CountResult, ReductionError> {
    let d = decode_exact_signed(m, n)?;
    Ok(CountResult::new(d.n1, n, Provenance::ExactRatio))
}

/// `cos(α/2)·I − i·sin(α/2)·X` for `n1` of `2ⁿ`, or its conjugate-signed
/// twin when `!minus`.
pub fn rotation_matrix(n1: u64, n: usize, minus: bool) -> [Complex64; 4] {
    let a = ((1u64 << n) - n1) as f64;
    let b = n1 as f64;
    let r = a.hypot(b);
    let (c, s) = (a / r, b / r);
    let off = if minus {
        Complex64::new(0.0, -s)
    } else {
        Complex64::new(0.0, s)
    };
    [Complex64::new(c, 0.0), off, off, Complex64::new(c, 0.0)]
}

/// `min_θ ‖m − e^{iθ}·u‖` for 2×2 matrices.
pub fn phase_distance(m: &[Complex64; 4], u: &[Complex64; 4]) -> f64 {
    let f = |t: f64| {
        let w = Complex64::from_polar(1.0, t);
        op_norm_2x2(&[
            m[0] - w * u[0],
            m[1] - w * u[1],
            m[2] - w * u[2],
            m[3] - w * u[3],
        ])
    };
    let grid = 64;
    let step = std::f64::consts::TAU / grid as f64;
    let best = (0..grid)
        .map(|i| i as f64 * step)
        .fold((0.0, f64::INFINITY), |acc, t| {
            let v = f(t);
            if v < acc.1 {
                (t, v)
            } else {
                acc
            }
        });
    // golden-section search on the bracket around the best grid point
    let g = (5f64.sqrt() - 1.0) / 2.0;
    let (mut lo, mut hi) = (best.0 - step, best.0 + step);
    let mut x1 = hi - g * (hi - lo);
    let mut x2 = lo + g * (hi - lo);
    let (mut f1, mut f2) = (f(x1), f(x2));
    for _ in 0..80 {
        if f1 < f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - g * (hi - lo);
            f1 = f(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + g * (hi - lo);
            f2 = f(x2);
        }
    }
    best.1.min(f1).min(f2)
}

/// Default radius for [`decode_count_approx`]: `2^{−(n+2)}`.
pub fn approx_tolerance(n: usize) -> f64 {
    (-(n as f64 + 2.0)).exp2()
}

/// Nearest allowed rotation to a float matrix within `2^{−(n+2)}` of
/// `e^{iθ}·X_α` (either sign of `α`).
pub fn decode_count_approx(m: &FloatMatrix, n: usize) -> Result<CountResult, ReductionError> {
    decode_count_approx_with(m, n, approx_tolerance(n))
}

/// As [`decode_count_approx`] with radius `eps`.
pub fn decode_count_approx_with(
    m: &FloatMatrix,
    n: usize,
    eps: f64,
) -> Result<CountResult, ReductionError> {
    if m.shape() != (2, 2) {
        return Err(ReductionError::Shape(m.rows(), m.cols()));
    }
    check_n(n, 52)?;
    let e = m.entries();
    let mm = [e[0], e[1], e[2], e[3]];
    let total = 1u64 << n;
    // magnitudes of the symmetric parts estimate cos and sin of α/2
    let c = ((mm[0] + mm[3]) / 2.0).norm();
    let s = ((mm[1] + mm[2]) / 2.0).norm();
    let half = s.atan2(c);
    let est = (total as f64 * half.sin() / (half.sin() + half.cos())).round() as i64;
    let mut best = (0u64, f64::INFINITY);
    for k in (est - 2).max(0)..=(est + 2).min(total as i64) {
        for minus in [true, false] {
            let r = phase_distance(&mm, &rotation_matrix(k as u64, n, minus));
            if r < best.1 {
                best = (k as u64, r);
            }
        }
    }
    let tol = eps * (1.0 + 1e-6) + 1e-12;
    if best.1 > tol {
        return Err(ReductionError::Residual {
            residual: best.1,
            tol,
        });
    }
    Ok(CountResult::new(best.0, n, Provenance::ApproxRounded))
}

/// Stand-in for a circuit-extraction oracle on a `1 → 1` diagram of the
/// hardness-gadget form: contracts exactly, checks unitarity, decodes `N₁`
/// and returns `H·Z_α·H` (or `Z_π·H·Z_α·H·Z_π` for the opposite sign), with
/// `α` symbolic in `N₁` and `n`. Feasible only at desk scale.
pub fn mock_extraction_oracle(d: &Diagram, n: usize) -> Result<Circuit, ReductionError> {
    mock_extraction_oracle_with(d, n, EvalOptions::default())
}

pub fn mock_extraction_oracle_with(
    d: &Diagram,
    n: usize,
    opts: EvalOptions,
) -> Result<Circuit, ReductionError> {
    if (d.n_inputs(), d.n_outputs()) != (1, 1) {
        return Err(ReductionError::Shape(d.n_outputs(), d.n_inputs()));
    }
    let m = eval::contract_exact_with(d, opts)?;
    if !verify::matrix_unitary_up_to_scalar(&m).unitary {
        return Err(ReductionError::NotUnitary);
    }
    let dec = decode_exact_signed(&m, n)?;
    let angle = SymbolicAngle::new(dec.n1, n as u32)?;
    let core = [Gate::h(0), Gate::z_sym(0, angle), Gate::h(0)];
    let gates = if dec.minus {
        core.to_vec()
    } else {
        let zpi = Gate::z(0, DyadicPhase::PI);
        std::iter::once(zpi)
            .chain(core)
            .chain(std::iter::once(zpi))
            .collect()
    };
    let c = Circuit::new(1, gates)?;
    let u = circuit_matrix_float(&c)?;
    let v = m.to_float();
    let e = v.entries();
    let norm = (e.iter().map(|z| z.norm_sqr()).sum::<f64>() / 2.0).sqrt();
    let vv = [e[0] / norm, e[1] / norm, e[2] / norm, e[3] / norm];
    let ue = u.entries();
    let overlap: Complex64 = ue.iter().zip(&vv).map(|(x, y)| x.conj() * y).sum();
    let w = if overlap.norm() > 0.0 {
        overlap / overlap.norm()
    } else {
        Complex64::new(1.0, 0.0)
    };
    let dev = op_norm_2x2(&[
        vv[0] - w * ue[0],
        vv[1] - w * ue[1],
        vv[2] - w * ue[2],
        vv[3] - w * ue[3],
    ]);
    if dev > 1e-9 {
        return Err(ReductionError::OracleMismatch(dev));
    }
    Ok(c)
}

/// The symbolic angle of the first symbolic `Z` gate.
pub fn extracted_angle(c: &Circuit) -> Option<SymbolicAngle> {
    c.gates.iter().find_map(|g| match g {
        Gate::Z {
            angle: Angle::Symbolic(s),
            ..
        } => Some(*s),
        _ => None,
    })
}

/// Hardness gadget, then the mock oracle, then `N₁` read from the circuit.
pub fn count_via_oracle(f: &BoolFormula) -> Result<CountResult, ReductionError> {
    count_via_oracle_with(f, EvalOptions::default())
}

pub fn count_via_oracle_with(
    f: &BoolFormula,
    opts: EvalOptions,
) -> Result<CountResult, ReductionError> {
    let c = mock_extraction_oracle_with(&hardness_gadget(f), f.n, opts)?;
    let a = extracted_angle(&c).expect("oracle emits a symbolic rotation");
    Ok(CountResult::new(a.n1, f.n, Provenance::ExactRatio))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gadgets::parse_formula;

    fn fe(v: i64) -> FieldElement {
        FieldElement::from_integer(v)
    }

    fn rot(a: i64, b: i64, sign: i64) -> ExactMatrix {
        let ib = &FieldElement::imag_unit() * &fe(sign * b);
        ExactMatrix::new(2, 2, vec![fe(a), ib.clone(), ib, fe(a)])
    }

    #[test]
    fn brute_counts() {
        let c = |s: &str, n| {
            brute_force_count(&crate::gadgets::parse_formula_with_vars(s, n).unwrap())
                .unwrap()
                .n1
        };
        assert_eq!(c("x1 & ~x1", 1), 0);
        assert_eq!(c("x1 & x2", 2), 1);
        assert_eq!(c("x1 | x2", 2), 3);
    }

    #[test]
    fn exact_decode_cases() {
        assert_eq!(
            decode_count_exact(&ExactMatrix::identity(2), 3).unwrap().n1,
            0
        );
        assert_eq!(decode_count_exact(&rot(0, 1, 1), 1).unwrap().n1, 2);
        assert_eq!(decode_count_exact(&rot(3, 1, 1), 2).unwrap().n1, 1);
        assert_eq!(decode_count_exact(&rot(3, 1, -1), 2).unwrap().n1, 1);
        assert_eq!(
            decode_count_exact(&rot(6, 2, 1).scale(&FieldElement::sqrt2()), 2)
                .unwrap()
                .n1,
            1
        );
        assert!(decode_count_exact(&rot(3, 2, 1), 2).is_err());
        let mut m = rot(3, 1, 1);
        m.set(0, 1, fe(1));
        assert!(decode_count_exact(&m, 2).is_err());
    }

    #[test]
    fn approx_decode_exact_inputs() {
        for n1 in 0..=8 {
            for minus in [true, false] {
                let r = rotation_matrix(n1, 3, minus);
                let w = Complex64::from_polar(1.0, 0.7);
                let m = FloatMatrix::new(2, 2, r.iter().map(|z| z * w).collect(), 0.0);
                assert_eq!(decode_count_approx(&m, 3).unwrap().n1, n1);
            }
        }
    }

    #[test]
    fn oracle_on_gadgets() {
        let f = parse_formula("x1 & x2").unwrap();
        let c = mock_extraction_oracle(&hardness_gadget(&f), 2).unwrap();
        assert_eq!(
            c.gates,
            vec![
                Gate::h(0),
                Gate::z_sym(0, SymbolicAngle::new(1, 2).unwrap()),
                Gate::h(0)
            ]
        );
        let g = crate::gadgets::parse_formula_with_vars("x1 & ~x1", 1).unwrap();
        assert_eq!(count_via_oracle(&g).unwrap().n1, 0);
    }

    #[test]
    fn oracle_rejects_projector() {
        let mut d = Diagram::new(1, 1);
        let a = d.add_x(DyadicPhase::ZERO);
        let b = d.add_x(DyadicPhase::ZERO);
        d.add_wire(crate::Endpoint::Input(0), crate::Endpoint::node(a));
        d.add_wire(crate::Endpoint::node(b), crate::Endpoint::Output(0));
        assert!(matches!(
            mock_extraction_oracle(&d, 1),
            Err(ReductionError::NotUnitary)
        ));
    }
}
