//! Proportionality and unitarity-up-to-scalar checks, and a sampler for the
//! computational-basis output distribution of a unitary diagram.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::diagram::Diagram;
use crate::eval::{self, EvalError, EvalOptions, ExactMatrix, FloatMatrix};
use crate::field::FieldElement;

#[derive(Debug, Error)]
pub enum VerifyError {
    #[error("shape mismatch: {0:?} vs {1:?}")]
    Shape((usize, usize), (usize, usize)),
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error(transparent)]
    Diagram(#[from] crate::diagram::DiagramError),
    #[error("diagram is not proportional to a unitary")]
    NotUnitary,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Proportionality<S> {
    pub proportional: bool,
    /// `b/a` at the reference pair, so that `B = witness · A`.
    pub witness: Option<S>,
}

/// Exact test of `B = λ·A`: zero patterns must agree and every cross product
/// `a_i·b_r − a_r·b_i` must vanish.
pub fn is_proportional_exact(
    a: &ExactMatrix,
    b: &ExactMatrix,
) -> Result<Proportionality<FieldElement>, VerifyError> {
    if a.shape() != b.shape() {
        return Err(VerifyError::Shape(a.shape(), b.shape()));
    }
    let no = Proportionality {
        proportional: false,
        witness: None,
    };
    let (ea, eb) = (a.entries(), b.entries());
    if ea.iter().zip(eb).any(|(x, y)| x.is_zero() != y.is_zero()) {
        return Ok(no);
    }
    let Some(r) = ea.iter().position(|x| !x.is_zero()) else {
        return Ok(Proportionality {
            proportional: true,
            witness: None,
        });
    };
    for i in 0..ea.len() {
        if i == r || ea[i].is_zero() {
            continue;
        }
        if &ea[i] * &eb[r] != &ea[r] * &eb[i] {
            return Ok(no);
        }
    }
    let w = eb[r].divide(&ea[r]).expect("reference entry is nonzero");
    Ok(Proportionality {
        proportional: true,
        witness: Some(w),
    })
}

/// Float test of `B = λ·A` using the matrices' certified error bounds.
pub fn is_proportional_float(
    a: &FloatMatrix,
    b: &FloatMatrix,
) -> Result<Proportionality<Complex64>, VerifyError> {
    if a.shape() != b.shape() {
        return Err(VerifyError::Shape(a.shape(), b.shape()));
    }
    Ok(is_proportional_float_tol(a, b, 0.0))
}

/// As [`is_proportional_float`], with an extra relative tolerance `tol`.
pub fn is_proportional_float_tol(
    a: &FloatMatrix,
    b: &FloatMatrix,
    tol: f64,
) -> Proportionality<Complex64> {
    assert_eq!(a.shape(), b.shape(), "shapes differ");
    let (ea, eb) = (a.err(), b.err());
    let (r, ar) = a
        .entries()
        .iter()
        .enumerate()
        .fold((0, 0.0f64), |(bi, bv), (i, z)| {
            if z.norm() > bv {
                (i, z.norm())
            } else {
                (bi, bv)
            }
        });
    if ar <= ea {
        let zero = b.max_abs() <= eb + tol * a.max_abs().max(b.max_abs());
        return Proportionality {
            proportional: zero,
            witness: None,
        };
    }
    let lambda = b.entries()[r] / a.entries()[r];
    let scale = b.max_abs().max(lambda.norm() * a.max_abs());
    let base = eb + lambda.norm() * ea;
    let bound = base * (1.0 + (ar + ea) / (ar - ea)) + tol * scale + 8.0 * f64::EPSILON * scale;
    let ok = a
        .entries()
        .iter()
        .zip(b.entries())
        .all(|(x, y)| (y - lambda * x).norm() <= bound);
    Proportionality {
        proportional: ok,
        witness: ok.then_some(lambda),
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Unitarity {
    pub unitary: bool,
    /// `c` with `V·V† = c·I`.
    pub scalar: Option<FieldElement>,
}

/// Decides `V·V† ∝ I` exactly by contracting `d ∘ d†`.
pub fn unitary_up_to_scalar(d: &Diagram) -> Result<Unitarity, VerifyError> {
    unitary_up_to_scalar_with(d, EvalOptions::default())
}

pub fn unitary_up_to_scalar_with(d: &Diagram, opts: EvalOptions) -> Result<Unitarity, VerifyError> {
    let no = Unitarity {
        unitary: false,
        scalar: None,
    };
    if d.n_inputs() != d.n_outputs() {
        return Ok(no);
    }
    let vvd = Diagram::compose(&d.adjoint(), d)?;
    let m = eval::contract_exact_with(&vvd, opts)?;
    Ok(gram_is_scalar(&m))
}

/// The same verdict from an already contracted matrix `V`.
pub fn matrix_unitary_up_to_scalar(v: &ExactMatrix) -> Unitarity {
    if v.rows() != v.cols() {
        return Unitarity {
            unitary: false,
            scalar: None,
        };
    }
    gram_is_scalar(&v.mul(&v.adjoint()))
}

fn gram_is_scalar(g: &ExactMatrix) -> Unitarity {
    let no = Unitarity {
        unitary: false,
        scalar: None,
    };
    let c = g.get(0, 0);
    for r in 0..g.rows() {
        for col in 0..g.cols() {
            let v = g.get(r, col);
            let ok = if r == col { v == c } else { v.is_zero() };
            if !ok {
                return no;
            }
        }
    }
    // the diagonal of V·V† is real and non-negative, so only zero is excluded
    if c.is_zero() {
        return no;
    }
    Unitarity {
        unitary: true,
        scalar: Some(c.clone()),
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct FloatUnitarity {
    pub unitary: bool,
    /// `c` with `V·V† ≈ c·I`, relative to the scaled contraction.
    pub scalar: f64,
    /// `max |V·V†/c − I|` as computed.
    pub deviation: f64,
    /// Certified bound on the rounding error in `deviation`. It compounds over
    /// every contraction step and can exceed the real error by many orders of
    /// magnitude on large diagrams, so it is reported but not used.
    pub error_bound: f64,
}

/// Float version for diagrams with matrix boxes: unitary iff the computed
/// `V·V†/c` is within `tol` of `I` entrywise.
pub fn unitary_up_to_scalar_float(d: &Diagram, tol: f64) -> Result<FloatUnitarity, VerifyError> {
    unitary_up_to_scalar_float_with(d, tol, EvalOptions::default())
}

pub fn unitary_up_to_scalar_float_with(
    d: &Diagram,
    tol: f64,
    opts: EvalOptions,
) -> Result<FloatUnitarity, VerifyError> {
    if d.n_inputs() != d.n_outputs() {
        return Ok(FloatUnitarity::NO);
    }
    let s = eval::contract_float_scaled(d, opts)?;
    Ok(float_gram_check(&s.matrix, tol))
}

impl FloatUnitarity {
    const NO: FloatUnitarity = FloatUnitarity {
        unitary: false,
        scalar: 0.0,
        deviation: f64::INFINITY,
        error_bound: 0.0,
    };
}

fn float_gram_check(v: &FloatMatrix, tol: f64) -> FloatUnitarity {
    let g = v.mul(&v.adjoint());
    let dim = g.rows();
    let c = (0..dim).map(|i| g.get(i, i).re).sum::<f64>() / dim as f64;
    if c <= 0.0 || !c.is_finite() {
        return FloatUnitarity::NO;
    }
    let mut dev = 0.0f64;
    for r in 0..dim {
        for col in 0..dim {
            let want = if r == col { 1.0 } else { 0.0 };
            dev = dev.max((g.get(r, col) / c - want).norm());
        }
    }
    FloatUnitarity {
        unitary: dev <= tol,
        scalar: c,
        deviation: dev,
        error_bound: g.err() / c,
    }
}

/// Relative tolerance for the sampler's unitarity promise check.
pub const SAMPLE_UNITARY_TOL: f64 = 1e-6;

/// Draws `count` outcomes of measuring `d|0…0⟩` in the computational basis.
/// Sample `i` uses a ChaCha8 stream keyed by `(seed, i)`. A non-unitary
/// diagram is an error unless `promise_arbitrary`, in which case uniformly
/// random seed-derived strings are returned.
pub fn sample(
    d: &Diagram,
    seed: u64,
    count: usize,
    promise_arbitrary: bool,
) -> Result<Vec<String>, VerifyError> {
    sample_with(d, seed, count, promise_arbitrary, EvalOptions::default())
}

pub fn sample_with(
    d: &Diagram,
    seed: u64,
    count: usize,
    promise_arbitrary: bool,
    opts: EvalOptions,
) -> Result<Vec<String>, VerifyError> {
    let width = d.n_outputs();
    let unitary_ok = d.n_inputs() == d.n_outputs();
    let s = eval::contract_float_scaled(d, opts)?;
    let check = if unitary_ok {
        float_gram_check(&s.matrix, SAMPLE_UNITARY_TOL)
    } else {
        FloatUnitarity::NO
    };
    let draw = |i: usize| -> f64 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(i as u64);
        rng.gen::<f64>()
    };
    let fmt = |x: usize| -> String {
        (0..width)
            .map(|q| {
                if x >> (width - 1 - q) & 1 == 1 {
                    '1'
                } else {
                    '0'
                }
            })
            .collect()
    };
    let dim = 1usize << width;
    if !check.unitary {
        if !promise_arbitrary {
            return Err(VerifyError::NotUnitary);
        }
        return Ok((0..count)
            .map(|i| fmt(((draw(i) * dim as f64) as usize).min(dim - 1)))
            .collect());
    }
    let probs: Vec<f64> = (0..dim).map(|r| s.matrix.get(r, 0).norm_sqr()).collect();
    let total: f64 = probs.iter().sum();
    let mut cdf = Vec::with_capacity(dim);
    let mut acc = 0.0;
    for p in &probs {
        acc += p / total;
        cdf.push(acc);
    }
    Ok((0..count)
        .map(|i| {
            let u = draw(i);
            let x = cdf.iter().position(|&c| u < c).unwrap_or_else(|| {
                // rounding left the last bucket short of 1
                probs.iter().rposition(|&p| p > 0.0).unwrap_or(dim - 1)
            });
            fmt(x)
        })
        .collect())
}

/// Exact column-0 output distribution of a unitary diagram, used as the
/// reference for goodness-of-fit tests.
pub fn output_distribution(d: &Diagram) -> Result<Vec<f64>, VerifyError> {
    let s = eval::contract_float_scaled(d, EvalOptions::default())?;
    let probs: Vec<f64> = (0..s.matrix.rows())
        .map(|r| s.matrix.get(r, 0).norm_sqr())
        .collect();
    let total: f64 = probs.iter().sum();
    Ok(probs.into_iter().map(|p| p / total).collect())
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
    fn exact_proportional_examples() {
        let m = ExactMatrix::new(2, 2, vec![fe(1), fe(2), FieldElement::imag_unit(), fe(0)]);
        let p = is_proportional_exact(&m, &m.scale(&fe(3))).unwrap();
        assert!(p.proportional);
        assert_eq!(p.witness, Some(fe(3)));
        let x = ExactMatrix::new(2, 2, vec![fe(0), fe(1), fe(1), fe(0)]);
        assert!(
            !is_proportional_exact(&ExactMatrix::identity(2), &x)
                .unwrap()
                .proportional
        );
        assert!(
            is_proportional_exact(&ExactMatrix::identity(2), &ExactMatrix::identity(4)).is_err()
        );
    }

    #[test]
    fn float_proportional() {
        let a = FloatMatrix::from_fn(2, 2, |r, c| Complex64::new(r as f64 + 1.0, c as f64));
        let l = Complex64::new(0.3, -2.0);
        let p = is_proportional_float(&a, &a.scale(l)).unwrap();
        assert!(p.proportional);
        assert!((p.witness.unwrap() - l).norm() < 1e-12);
        assert!(
            !is_proportional_float(&FloatMatrix::identity(2), &a)
                .unwrap()
                .proportional
        );
    }

    fn h_diagram() -> Diagram {
        let mut d = Diagram::new(1, 1);
        let h = d.add_h();
        d.add_wire(Endpoint::Input(0), Endpoint::node(h));
        d.add_wire(Endpoint::node(h), Endpoint::Output(0));
        d
    }

    #[test]
    fn unitarity() {
        let u = unitary_up_to_scalar(&h_diagram()).unwrap();
        assert!(u.unitary);
        assert_eq!(u.scalar, Some(fe(1)));
        // a projector is not unitary
        let mut d = Diagram::new(1, 1);
        let a = d.add_x(DyadicPhase::ZERO);
        let b = d.add_x(DyadicPhase::ZERO);
        d.add_wire(Endpoint::Input(0), Endpoint::node(a));
        d.add_wire(Endpoint::node(b), Endpoint::Output(0));
        assert!(!unitary_up_to_scalar(&d).unwrap().unitary);
        assert!(!unitary_up_to_scalar_float(&d, 1e-9).unwrap().unitary);
    }

    #[test]
    fn sampling_identity_and_not() {
        let id = Diagram::identity(1);
        assert!(sample(&id, 7, 50, false).unwrap().iter().all(|s| s == "0"));
        let mut x = Diagram::new(1, 1);
        let n = x.add_x(DyadicPhase::PI);
        x.add_wire(Endpoint::Input(0), Endpoint::node(n));
        x.add_wire(Endpoint::node(n), Endpoint::Output(0));
        assert!(sample(&x, 7, 50, false).unwrap().iter().all(|s| s == "1"));
        assert_eq!(
            sample(&h_diagram(), 3, 20, false).unwrap(),
            sample(&h_diagram(), 3, 20, false).unwrap()
        );
    }
}
