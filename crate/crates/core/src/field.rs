//! Exact arithmetic in cyclotomic fields `Q(ω)` with `ω = e^{2πi/d}` and `d` a
//! power of two.
//!
//! An element is stored as `(1/M) · Σ_{p < d/2} a_p ω^p` with integer `a_p`
//! and a positive integer denominator `M`. Since the minimal polynomial of `ω`
//! is `x^{d/2} + 1`, the powers `ω^0 … ω^{d/2-1}` form a basis over `Q` and the
//! representation is unique once it is brought into canonical form:
//!
//! - the order `d` is the smallest power of two containing the element,
//! - `gcd(a_0, …, a_{d/2-1}, M) = 1`,
//! - zero is stored as `d = 2`, `a = [0]`, `M = 1`.
//!
//! Every value that arises from spiders, Hadamard boxes and dyadic phases has a
//! power-of-two denominator (`√2 = ω_8 + ω_8^{-1}`), but division can produce
//! arbitrary rational denominators, so `M` is a general positive integer.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FieldError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("cyclotomic order {0} is not a power of two >= 2")]
    BadOrder(u64),
    #[error("expected {expected} coefficients for order {order}, got {got}")]
    BadLength {
        order: u32,
        expected: usize,
        got: usize,
    },
    #[error("denominator must be positive")]
    BadDenominator,
    #[error("cannot parse field element: {0}")]
    Parse(String),
}

/// Exact element of a power-of-two cyclotomic field. Always canonical, so the
/// derived equality and hash are equality and hash of the represented number.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FieldElement {
    order: u32,
    coeffs: Vec<BigInt>,
    denom: BigInt,
}

impl FieldElement {
    /// Builds `(1/denom) · Σ coeffs[p] ω_order^p`.
    pub fn new(order: u32, coeffs: Vec<BigInt>, denom: BigInt) -> Result<Self, FieldError> {
        if order < 2 || !order.is_power_of_two() {
            return Err(FieldError::BadOrder(order as u64));
        }
        let expected = (order / 2) as usize;
        if coeffs.len() != expected {
            return Err(FieldError::BadLength {
                order,
                expected,
                got: coeffs.len(),
            });
        }
        if !denom.is_positive() {
            return Err(FieldError::BadDenominator);
        }
        Ok(Self::canonical(order, coeffs, denom))
    }

    pub fn zero() -> Self {
        FieldElement {
            order: 2,
            coeffs: vec![BigInt::zero()],
            denom: BigInt::one(),
        }
    }

    pub fn one() -> Self {
        Self::from_integer(1)
    }

    pub fn from_integer(v: i64) -> Self {
        Self::from_bigint(BigInt::from(v))
    }

    pub fn from_bigint(v: BigInt) -> Self {
        Self::canonical(2, vec![v], BigInt::one())
    }

    /// `p / q`; panics if `q` is zero.
    pub fn from_rational(p: BigInt, q: BigInt) -> Self {
        assert!(!q.is_zero(), "zero denominator");
        let (p, q) = if q.is_negative() { (-p, -q) } else { (p, q) };
        Self::canonical(2, vec![p], q)
    }

    /// `ω_order^p` for any integer `p`.
    pub fn root_of_unity(order: u32, p: i64) -> Self {
        assert!(
            order >= 2 && order.is_power_of_two(),
            "order must be a power of two >= 2"
        );
        let d = order as i64;
        let h = d / 2;
        let e = p.rem_euclid(d);
        let mut coeffs = vec![BigInt::zero(); h as usize];
        if e < h {
            coeffs[e as usize] = BigInt::one();
        } else {
            coeffs[(e - h) as usize] = -BigInt::one();
        }
        Self::canonical(order, coeffs, BigInt::one())
    }

    /// The root of unity `e^{iaπ/2^k}`, realized as `ω^a` at order `2^{k+1}`.
    pub fn from_dyadic_phase(a: i64, k: u32) -> Self {
        assert!(k < 31, "phase denominator 2^{k} is too large");
        Self::root_of_unity(1u32 << (k + 1), a)
    }

    /// `i = ω_4`.
    pub fn imag_unit() -> Self {
        Self::root_of_unity(4, 1)
    }

    /// `√2 = ω_8 + ω_8^{-1}`.
    pub fn sqrt2() -> Self {
        Self::root_of_unity(8, 1) + Self::root_of_unity(8, -1)
    }

    /// `1/√2 = √2 / 2`.
    pub fn inv_sqrt2() -> Self {
        let s = Self::sqrt2();
        Self::canonical(s.order, s.coeffs, BigInt::from(2))
    }

    /// `2^{e/2}` for any integer `e`.
    pub fn sqrt2_pow(e: i64) -> Self {
        let half = e.div_euclid(2);
        let base = if e.rem_euclid(2) == 1 {
            Self::sqrt2()
        } else {
            Self::one()
        };
        let pow2 = BigInt::one() << half.unsigned_abs();
        if half >= 0 {
            base.scale_int(&pow2)
        } else {
            Self::canonical(base.order, base.coeffs, pow2)
        }
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    /// Coefficients `a_p` of `ω^p` for `0 <= p < order/2` (numerators).
    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn denom(&self) -> &BigInt {
        &self.denom
    }

    /// `t` with `denom = 2^t`, if the denominator is a power of two.
    pub fn denom_exp(&self) -> Option<u32> {
        let t = self.denom.trailing_zeros().unwrap_or(0);
        if self.denom == BigInt::one() << t {
            Some(t as u32)
        } else {
            None
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn is_one(&self) -> bool {
        self.order == 2 && self.coeffs[0].is_one() && self.denom.is_one()
    }

    fn canonical(mut order: u32, mut coeffs: Vec<BigInt>, mut denom: BigInt) -> Self {
        if coeffs.iter().all(Zero::is_zero) {
            return Self::zero();
        }
        while order > 2 && coeffs.iter().skip(1).step_by(2).all(Zero::is_zero) {
            coeffs = coeffs.into_iter().step_by(2).collect();
            order /= 2;
        }
        let mut g = denom.clone();
        for c in &coeffs {
            if g.is_one() {
                break;
            }
            g = g.gcd(c);
        }
        if !g.is_one() {
            for c in coeffs.iter_mut() {
                *c /= &g;
            }
            denom /= &g;
        }
        FieldElement {
            order,
            coeffs,
            denom,
        }
    }

    /// Numerator coefficients re-expressed at a larger order.
    fn lifted(&self, order: u32) -> Vec<BigInt> {
        debug_assert!(order >= self.order);
        if order == self.order {
            return self.coeffs.clone();
        }
        let stride = (order / self.order) as usize;
        let mut out = vec![BigInt::zero(); (order / 2) as usize];
        for (p, c) in self.coeffs.iter().enumerate() {
            out[p * stride] = c.clone();
        }
        out
    }

    fn scale_int(&self, k: &BigInt) -> Self {
        let coeffs = self.coeffs.iter().map(|c| c * k).collect();
        Self::canonical(self.order, coeffs, self.denom.clone())
    }

    pub fn add(&self, other: &Self) -> Self {
        let order = self.order.max(other.order);
        let a = self.lifted(order);
        let b = other.lifted(order);
        let l = self.denom.lcm(&other.denom);
        let fa = &l / &self.denom;
        let fb = &l / &other.denom;
        let coeffs = a.iter().zip(&b).map(|(x, y)| x * &fa + y * &fb).collect();
        Self::canonical(order, coeffs, l)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        FieldElement {
            order: self.order,
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
            denom: self.denom.clone(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let order = self.order.max(other.order);
        let h = (order / 2) as usize;
        let a = self.lifted(order);
        let b = other.lifted(order);
        let mut out = vec![BigInt::zero(); h];
        for (i, x) in a.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                if y.is_zero() {
                    continue;
                }
                let k = i + j;
                // ω^{d/2} = -1
                if k < h {
                    out[k] += x * y;
                } else {
                    out[k - h] -= x * y;
                }
            }
        }
        Self::canonical(order, out, &self.denom * &other.denom)
    }

    /// Complex conjugate, using `ω^{-p} = -ω^{d/2-p}`.
    pub fn conj(&self) -> Self {
        let h = self.coeffs.len();
        let mut out = vec![BigInt::zero(); h];
        out[0] = self.coeffs[0].clone();
        for p in 1..h {
            out[h - p] = -&self.coeffs[p];
        }
        FieldElement {
            order: self.order,
            coeffs: out,
            denom: self.denom.clone(),
        }
    }

    pub fn pow(&self, mut e: u64) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    /// Exact quotient `self · other⁻¹`.
    pub fn divide(&self, other: &Self) -> Result<Self, FieldError> {
        if other.is_zero() {
            return Err(FieldError::DivisionByZero);
        }
        if self.is_zero() {
            return Ok(Self::zero());
        }
        Ok(self * &other.inverse())
    }

    /// Inverse of a nonzero element. With `σ: ω ↦ −ω`, the product `b·σ(b)`
    /// lies in the subfield of half the order, so `b⁻¹ = σ(b)·(b·σ(b))⁻¹`
    /// recurses down to a rational.
    fn inverse(&self) -> Self {
        debug_assert!(!self.is_zero());
        if self.order == 2 {
            let c = &self.coeffs[0];
            let (num, den) = if c.is_negative() {
                (-&self.denom, -c)
            } else {
                (self.denom.clone(), c.clone())
            };
            return Self::canonical(2, vec![num], den);
        }
        let flipped: Vec<BigInt> = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(p, c)| if p % 2 == 1 { -c } else { c.clone() })
            .collect();
        let sigma = FieldElement {
            order: self.order,
            coeffs: flipped,
            denom: self.denom.clone(),
        };
        let norm = self * &sigma;
        &sigma * &norm.inverse()
    }

    /// `Some((p, q))` in lowest terms with `q > 0` iff the element is rational.
    pub fn rational_value(&self) -> Option<(BigInt, BigInt)> {
        if self.order == 2 {
            Some((self.coeffs[0].clone(), self.denom.clone()))
        } else {
            None
        }
    }

    /// True iff the element equals its own conjugate.
    pub fn is_real(&self) -> bool {
        *self == self.conj()
    }

    /// Floating-point embedding together with an absolute error bound
    /// `≤ (Σ|a_p| / M) · ε · d`.
    pub fn to_float(&self) -> (Complex64, f64) {
        let d = self.order as usize;
        let h = d / 2;
        let mut re = 0.0f64;
        let mut im = 0.0f64;
        let mut mass = 0.0f64;
        for (p, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let v = ratio_to_f64(c, &self.denom);
            mass += v.abs();
            let (s, co) = unit_angle(p, h);
            re += v * co;
            im += v * s;
        }
        let bound = mass * f64::EPSILON * d as f64;
        (Complex64::new(re, im), bound)
    }

    pub fn to_complex(&self) -> Complex64 {
        self.to_float().0
    }
}

/// `(sin, cos)` of `πp/h`, exact at multiples of `π/2`.
fn unit_angle(p: usize, h: usize) -> (f64, f64) {
    if p == 0 {
        (0.0, 1.0)
    } else if 2 * p == h {
        (1.0, 0.0)
    } else {
        (std::f64::consts::PI * p as f64 / h as f64).sin_cos()
    }
}

fn ratio_to_f64(a: &BigInt, m: &BigInt) -> f64 {
    let bits = a.bits().max(m.bits());
    if bits < 1000 {
        return a.to_f64().unwrap_or(f64::NAN) / m.to_f64().unwrap_or(f64::NAN);
    }
    let shift = bits - 900;
    let a = a >> shift;
    let m = m >> shift;
    if m.is_zero() {
        return if a.is_negative() {
            f64::NEG_INFINITY
        } else {
            f64::INFINITY
        };
    }
    a.to_f64().unwrap_or(f64::NAN) / m.to_f64().unwrap_or(f64::NAN)
}

impl fmt::Display for FieldElement {
    /// `cyclo(d; t; a_0,a_1,…)` when the denominator is `2^t`,
    /// `cyclo(d; /M; a_0,…)` otherwise.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "cyclo({}; ", self.order)?;
        match self.denom_exp() {
            Some(t) => write!(f, "{t}; ")?,
            None => write!(f, "/{}; ", self.denom)?,
        }
        for (i, c) in self.coeffs.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{c}")?;
        }
        f.write_str(")")
    }
}

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for FieldElement {
    type Err = FieldError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || FieldError::Parse(s.to_string());
        let body = s
            .trim()
            .strip_prefix("cyclo(")
            .and_then(|r| r.strip_suffix(')'))
            .ok_or_else(bad)?;
        let mut parts = body.split(';');
        let order: u64 = parts
            .next()
            .ok_or_else(bad)?
            .trim()
            .parse()
            .map_err(|_| bad())?;
        let den = parts.next().ok_or_else(bad)?.trim();
        let coeffs = parts.next().ok_or_else(bad)?;
        if parts.next().is_some() {
            return Err(bad());
        }
        let denom = if let Some(m) = den.strip_prefix('/') {
            m.trim().parse::<BigInt>().map_err(|_| bad())?
        } else {
            let t: u32 = den.parse().map_err(|_| bad())?;
            BigInt::one() << t
        };
        let coeffs = coeffs
            .split(',')
            .map(|c| c.trim().parse::<BigInt>().map_err(|_| bad()))
            .collect::<Result<Vec<_>, _>>()?;
        let order = u32::try_from(order).map_err(|_| FieldError::BadOrder(order))?;
        FieldElement::new(order, coeffs, denom)
    }
}

macro_rules! forward_binop {
    ($tr:ident, $method:ident) => {
        impl $tr<&FieldElement> for &FieldElement {
            type Output = FieldElement;
            fn $method(self, rhs: &FieldElement) -> FieldElement {
                FieldElement::$method(self, rhs)
            }
        }
        impl $tr<FieldElement> for FieldElement {
            type Output = FieldElement;
            fn $method(self, rhs: FieldElement) -> FieldElement {
                FieldElement::$method(&self, &rhs)
            }
        }
        impl $tr<&FieldElement> for FieldElement {
            type Output = FieldElement;
            fn $method(self, rhs: &FieldElement) -> FieldElement {
                FieldElement::$method(&self, rhs)
            }
        }
    };
}

forward_binop!(Add, add);
forward_binop!(Sub, sub);
forward_binop!(Mul, mul);

impl Neg for FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        FieldElement::neg(&self)
    }
}

impl Neg for &FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        FieldElement::neg(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w8(p: i64) -> FieldElement {
        FieldElement::root_of_unity(8, p)
    }

    #[test]
    fn dyadic_phases() {
        assert!(FieldElement::from_dyadic_phase(0, 0).is_one());
        assert_eq!(
            FieldElement::from_dyadic_phase(1, 0),
            FieldElement::from_integer(-1)
        );
        let w = FieldElement::from_dyadic_phase(1, 2);
        assert_eq!(w, w8(1));
        let s = &w + &w.conj();
        assert_eq!(&s * &s, FieldElement::from_integer(2));
        // reduction mod 2^{k+1}
        assert_eq!(FieldElement::from_dyadic_phase(9, 2), w8(1));
        assert_eq!(FieldElement::from_dyadic_phase(-1, 2), w8(7));
    }

    #[test]
    fn add_examples() {
        let x = w8(3) + FieldElement::from_integer(5);
        assert_eq!(&x + &FieldElement::zero(), x);
        let two_w = &w8(1) + &w8(1);
        assert_eq!(two_w.order(), 8);
        assert_eq!(two_w.coeffs(), &[0, 2, 0, 0].map(BigInt::from));
        let s = &w8(1) + &w8(3);
        assert_eq!(
            &s * &s,
            FieldElement::from_dyadic_phase(1, 0) * FieldElement::from_integer(2)
        );
    }

    #[test]
    fn mul_and_conj_examples() {
        let x = w8(1) + FieldElement::from_rational(3.into(), 4.into());
        assert_eq!(&x * &FieldElement::one(), x);
        assert_eq!(&w8(1) * &w8(3), FieldElement::from_integer(-1));
        assert!(FieldElement::one().conj().is_one());
        assert_eq!(w8(1).conj(), -w8(3));
    }

    #[test]
    fn divide_examples() {
        let two_w = &w8(1) + &w8(1);
        assert_eq!(two_w.divide(&FieldElement::from_integer(2)).unwrap(), w8(1));
        assert_eq!(
            two_w.divide(&FieldElement::zero()),
            Err(FieldError::DivisionByZero)
        );
        let third = FieldElement::one()
            .divide(&FieldElement::from_integer(3))
            .unwrap();
        assert_eq!(third.rational_value(), Some((1.into(), 3.into())));
        assert_eq!(third.denom_exp(), None);
    }

    #[test]
    fn rational_values() {
        let a = FieldElement::from_rational(3.into(), 2.into());
        assert_eq!(a.rational_value(), Some((3.into(), 2.into())));
        assert_eq!(w8(1).rational_value(), None);
        let b = FieldElement::new(2, vec![6.into()], 4.into()).unwrap();
        assert_eq!(b.rational_value(), Some((3.into(), 2.into())));
        assert_eq!(b.denom_exp(), Some(1));
    }

    #[test]
    fn float_embedding() {
        let (one, _) = FieldElement::one().to_float();
        assert_eq!(one, Complex64::new(1.0, 0.0));
        let (i, b) = FieldElement::imag_unit().to_float();
        assert!((i - Complex64::new(0.0, 1.0)).norm() <= 1e-15 && b >= 0.0);
        let (r2, bound) = FieldElement::sqrt2().to_float();
        assert!((r2.re - std::f64::consts::SQRT_2).abs() <= 1e-12);
        assert!((r2.re - std::f64::consts::SQRT_2).abs() <= bound);
    }

    #[test]
    fn sqrt2_powers() {
        assert_eq!(FieldElement::sqrt2_pow(2), FieldElement::from_integer(2));
        assert_eq!(FieldElement::sqrt2_pow(-1), FieldElement::inv_sqrt2());
        assert_eq!(
            &FieldElement::sqrt2_pow(-3) * &FieldElement::sqrt2_pow(3),
            FieldElement::one()
        );
    }

    #[test]
    fn text_round_trip() {
        let x = w8(1) * FieldElement::from_rational(5.into(), 4.into()) + w8(2);
        let s = x.to_string();
        assert_eq!(s, "cyclo(8; 2; 0,5,4,0)");
        assert_eq!(s.parse::<FieldElement>().unwrap(), x);
        let y = FieldElement::from_rational(7.into(), 3.into());
        assert_eq!(y.to_string(), "cyclo(2; /3; 7)");
        assert_eq!(y.to_string().parse::<FieldElement>().unwrap(), y);
        assert!("cyclo(6; 0; 1,2,3)".parse::<FieldElement>().is_err());
        assert!("cyclo(8; 0; 1,2)".parse::<FieldElement>().is_err());
    }

    #[test]
    fn canonical_order_reduction() {
        // ω_16^4 = ω_4 = i
        assert_eq!(
            FieldElement::root_of_unity(16, 4),
            FieldElement::imag_unit()
        );
        assert_eq!(FieldElement::root_of_unity(16, 4).order(), 4);
    }
}
