//! Dyadic angles `aπ/2^k`.

use std::fmt;
use std::ops::{Add, Neg, Sub};

use serde::{Deserialize, Serialize};

/// The angle `num·π / 2^k`, kept reduced mod `2π` with `k` minimal.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(from = "RawPhase", into = "RawPhase")]
pub struct DyadicPhase {
    num: i64,
    k: u32,
}

#[derive(Serialize, Deserialize)]
struct RawPhase {
    num: i64,
    k: u32,
}

impl From<RawPhase> for DyadicPhase {
    fn from(r: RawPhase) -> Self {
        DyadicPhase::new(r.num, r.k)
    }
}

impl From<DyadicPhase> for RawPhase {
    fn from(p: DyadicPhase) -> Self {
        RawPhase { num: p.num, k: p.k }
    }
}

pub const MAX_K: u32 = 60;

impl DyadicPhase {
    pub fn new(num: i64, k: u32) -> Self {
        assert!(k <= MAX_K, "phase denominator exponent {k} exceeds {MAX_K}");
        let mut k = k;
        let mut num = reduce(num, k);
        while k > 0 && num % 2 == 0 {
            num /= 2;
            k -= 1;
            num = reduce(num, k);
        }
        DyadicPhase { num, k }
    }

    pub const ZERO: DyadicPhase = DyadicPhase { num: 0, k: 0 };
    pub const PI: DyadicPhase = DyadicPhase { num: 1, k: 0 };

    pub fn zero() -> Self {
        Self::ZERO
    }

    pub fn pi() -> Self {
        Self::PI
    }

    pub fn num(&self) -> i64 {
        self.num
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn is_zero(&self) -> bool {
        self.num == 0
    }

    pub fn radians(&self) -> f64 {
        std::f64::consts::PI * self.num as f64 / (self.k as f64).exp2()
    }

    /// `e^{iθ}` as a float.
    pub fn cis(&self) -> num_complex::Complex64 {
        match (self.num, self.k) {
            (0, _) => num_complex::Complex64::new(1.0, 0.0),
            (1, 0) => num_complex::Complex64::new(-1.0, 0.0),
            (1, 1) => num_complex::Complex64::new(0.0, 1.0),
            (3, 1) => num_complex::Complex64::new(0.0, -1.0),
            _ => num_complex::Complex64::from_polar(1.0, self.radians()),
        }
    }
}

fn reduce(num: i64, k: u32) -> i64 {
    let m = 1i128 << (k + 1);
    (num as i128).rem_euclid(m) as i64
}

impl Add for DyadicPhase {
    type Output = DyadicPhase;
    fn add(self, rhs: DyadicPhase) -> DyadicPhase {
        let k = self.k.max(rhs.k);
        let a = (self.num as i128) << (k - self.k);
        let b = (rhs.num as i128) << (k - rhs.k);
        let m = 1i128 << (k + 1);
        DyadicPhase::new((a + b).rem_euclid(m) as i64, k)
    }
}

impl Neg for DyadicPhase {
    type Output = DyadicPhase;
    fn neg(self) -> DyadicPhase {
        DyadicPhase::new(-self.num, self.k)
    }
}

impl Sub for DyadicPhase {
    type Output = DyadicPhase;
    fn sub(self, rhs: DyadicPhase) -> DyadicPhase {
        self + (-rhs)
    }
}

impl Default for DyadicPhase {
    fn default() -> Self {
        Self::ZERO
    }
}

impl fmt::Display for DyadicPhase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.num, self.k) {
            (0, _) => f.write_str("0"),
            (1, 0) => f.write_str("π"),
            (n, 0) => write!(f, "{n}π"),
            (1, k) => write!(f, "π/{}", 1u64 << k),
            (n, k) => write!(f, "{n}π/{}", 1u64 << k),
        }
    }
}

impl fmt::Debug for DyadicPhase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}
