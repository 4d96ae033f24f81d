//! Dense operators produced by contraction.

use std::fmt;

use num_complex::Complex64;

use crate::field::FieldElement;

/// `rows × cols` matrix of exact field elements, row-major.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ExactMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<FieldElement>,
}

impl ExactMatrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<FieldElement>) -> Self {
        assert_eq!(
            entries.len(),
            rows * cols,
            "entry count does not match shape"
        );
        ExactMatrix {
            rows,
            cols,
            entries,
        }
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self::new(rows, cols, vec![FieldElement::zero(); rows * cols])
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim, dim);
        for i in 0..dim {
            m.entries[i * dim + i] = FieldElement::one();
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, f: impl Fn(usize, usize) -> FieldElement) -> Self {
        let entries = (0..rows * cols).map(|i| f(i / cols, i % cols)).collect();
        Self::new(rows, cols, entries)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn get(&self, r: usize, c: usize) -> &FieldElement {
        &self.entries[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: FieldElement) {
        self.entries[r * self.cols + c] = v;
    }

    pub fn entries(&self) -> &[FieldElement] {
        &self.entries
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(FieldElement::is_zero)
    }

    /// `self · other`.
    pub fn mul(&self, other: &ExactMatrix) -> ExactMatrix {
        assert_eq!(self.cols, other.rows, "inner dimensions differ");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    let idx = i * other.cols + j;
                    out.entries[idx] = &out.entries[idx] + &(a * b);
                }
            }
        }
        out
    }

    pub fn kron(&self, other: &ExactMatrix) -> ExactMatrix {
        let rows = self.rows * other.rows;
        let cols = self.cols * other.cols;
        Self::from_fn(rows, cols, |r, c| {
            self.get(r / other.rows, c / other.cols) * other.get(r % other.rows, c % other.cols)
        })
    }

    pub fn adjoint(&self) -> ExactMatrix {
        Self::from_fn(self.cols, self.rows, |r, c| self.get(c, r).conj())
    }

    pub fn scale(&self, s: &FieldElement) -> ExactMatrix {
        ExactMatrix {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(|e| e * s).collect(),
        }
    }

    /// Float image with the accumulated embedding error as the bound.
    pub fn to_float(&self) -> FloatMatrix {
        let mut worst = 0.0f64;
        let entries = self
            .entries
            .iter()
            .map(|e| {
                let (z, b) = e.to_float();
                worst = worst.max(b);
                z
            })
            .collect();
        let err = worst * ((self.rows * self.cols) as f64).sqrt();
        FloatMatrix::new(self.rows, self.cols, entries, err)
    }
}

impl fmt::Debug for ExactMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ExactMatrix {}x{} [", self.rows, self.cols)?;
        for r in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|c| self.get(r, c).to_string()).collect();
            writeln!(f, "  {}", row.join(", "))?;
        }
        write!(f, "]")
    }
}

/// `rows × cols` complex matrix with an absolute error bound in operator-norm
/// units: the true operator lies within `err` of `entries` in the 2-norm.
#[derive(Clone, PartialEq)]
pub struct FloatMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<Complex64>,
    err: f64,
}

impl FloatMatrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<Complex64>, err: f64) -> Self {
        assert_eq!(
            entries.len(),
            rows * cols,
            "entry count does not match shape"
        );
        FloatMatrix {
            rows,
            cols,
            entries,
            err,
        }
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self::new(rows, cols, vec![Complex64::new(0.0, 0.0); rows * cols], 0.0)
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim, dim);
        for i in 0..dim {
            m.entries[i * dim + i] = Complex64::new(1.0, 0.0);
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, f: impl Fn(usize, usize) -> Complex64) -> Self {
        let entries = (0..rows * cols).map(|i| f(i / cols, i % cols)).collect();
        Self::new(rows, cols, entries, 0.0)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn get(&self, r: usize, c: usize) -> Complex64 {
        self.entries[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: Complex64) {
        self.entries[r * self.cols + c] = v;
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.entries
    }

    pub fn err(&self) -> f64 {
        self.err
    }

    pub fn with_err(mut self, err: f64) -> Self {
        self.err = err;
        self
    }

    pub fn frobenius(&self) -> f64 {
        self.entries
            .iter()
            .map(|z| z.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.entries.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn mul(&self, other: &FloatMatrix) -> FloatMatrix {
        assert_eq!(self.cols, other.rows, "inner dimensions differ");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == Complex64::new(0.0, 0.0) {
                    continue;
                }
                for j in 0..other.cols {
                    out.entries[i * other.cols + j] += a * other.get(k, j);
                }
            }
        }
        let na = self.frobenius();
        let nb = other.frobenius();
        let rounding = 4.0 * (self.cols as f64 + 2.0) * f64::EPSILON * na * nb;
        out.err = na * other.err + self.err * nb + self.err * other.err + rounding;
        out
    }

    pub fn kron(&self, other: &FloatMatrix) -> FloatMatrix {
        let rows = self.rows * other.rows;
        let cols = self.cols * other.cols;
        let mut m = Self::from_fn(rows, cols, |r, c| {
            self.get(r / other.rows, c / other.cols) * other.get(r % other.rows, c % other.cols)
        });
        let na = self.frobenius();
        let nb = other.frobenius();
        m.err =
            na * other.err + self.err * nb + self.err * other.err + 4.0 * f64::EPSILON * na * nb;
        m
    }

    pub fn adjoint(&self) -> FloatMatrix {
        let mut m = Self::from_fn(self.cols, self.rows, |r, c| self.get(c, r).conj());
        m.err = self.err;
        m
    }

    pub fn scale(&self, s: Complex64) -> FloatMatrix {
        FloatMatrix {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(|e| e * s).collect(),
            err: self.err * s.norm() + 2.0 * f64::EPSILON * self.frobenius() * s.norm(),
        }
    }

    pub fn sub(&self, other: &FloatMatrix) -> FloatMatrix {
        assert_eq!(self.shape(), other.shape(), "shapes differ");
        FloatMatrix {
            rows: self.rows,
            cols: self.cols,
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| a - b)
                .collect(),
            err: self.err + other.err,
        }
    }

    /// Largest singular value of a 2×2 matrix (closed form).
    pub fn op_norm_2x2(&self) -> f64 {
        assert_eq!(self.shape(), (2, 2), "op_norm_2x2 needs a 2x2 matrix");
        op_norm_2x2(&[
            self.entries[0],
            self.entries[1],
            self.entries[2],
            self.entries[3],
        ])
    }
}

/// Largest singular value of the row-major 2×2 matrix `m`.
pub fn op_norm_2x2(m: &[Complex64; 4]) -> f64 {
    let f2: f64 = m.iter().map(|z| z.norm_sqr()).sum();
    let det = (m[0] * m[3] - m[1] * m[2]).norm();
    let disc = (f2 * f2 - 4.0 * det * det).max(0.0);
    ((f2 + disc.sqrt()) / 2.0).sqrt()
}

impl fmt::Debug for FloatMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "FloatMatrix {}x{} (err {:.3e}) [",
            self.rows, self.cols, self.err
        )?;
        for r in 0..self.rows {
            let row: Vec<String> = (0..self.cols)
                .map(|c| {
                    let z = self.get(r, c);
                    format!("{:.6}{:+.6}i", z.re, z.im)
                })
                .collect();
            writeln!(f, "  {}", row.join(", "))?;
        }
        write!(f, "]")
    }
}
