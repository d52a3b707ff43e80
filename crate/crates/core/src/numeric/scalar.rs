//! Scalar abstraction: exact rationals (default) or `f64`.
//!
//! All partition sums and determinants are generic over [`Scalar`] so the
//! same enumeration code runs in exact mode (`Q`) and float mode (`f64`).

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, Signed, Zero};
use std::fmt::Debug;
use std::ops::{Add, Div, Mul, Neg, Sub};

/// Exact rational scalar.
pub type Q = BigRational;

pub trait Scalar:
    Clone
    + PartialEq
    + Debug
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    fn zero() -> Self;
    fn one() -> Self;
    fn from_ratio(num: i64, den: i64) -> Self;
    fn is_zero(&self) -> bool;
    /// 2^k for k possibly negative.
    fn two_pow(k: i32) -> Self {
        if k >= 0 {
            Self::from_ratio(1i64 << k, 1)
        } else {
            Self::from_ratio(1, 1i64 << (-k))
        }
    }
    fn from_int(n: i64) -> Self {
        Self::from_ratio(n, 1)
    }
    /// Determinant by an algorithm suited to the scalar: fraction-free
    /// Bareiss elimination after clearing denominators for rationals,
    /// partially pivoted LU for floats. `mat` is square, row-major.
    fn det(mat: Vec<Vec<Self>>) -> Self;
    fn to_f64(&self) -> f64;
    /// Canonical text form: `p/q` for rationals, shortest-roundtrip decimal
    /// for floats. Used by exports so files are byte-stable.
    fn render(&self) -> String;
    /// Equality at the mode's native strength: exact for rationals,
    /// relative error <= 1e-9 for floats.
    fn close(&self, other: &Self) -> bool;
}

impl Scalar for Q {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn from_ratio(num: i64, den: i64) -> Self {
        BigRational::new(BigInt::from(num), BigInt::from(den))
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn det(mat: Vec<Vec<Self>>) -> Self {
        bareiss_det(mat)
    }
    fn to_f64(&self) -> f64 {
        let n = self.numer();
        let d = self.denom();
        // good enough for reports; exact values never round-trip through here
        str_to_f64(&n.to_string()) / str_to_f64(&d.to_string())
    }
    fn render(&self) -> String {
        if self.denom() == &BigInt::from(1) {
            self.numer().to_string()
        } else {
            format!("{}/{}", self.numer(), self.denom())
        }
    }
    fn close(&self, other: &Self) -> bool {
        self == other
    }
}

fn str_to_f64(s: &str) -> f64 {
    s.parse::<f64>().unwrap_or(f64::NAN)
}

impl Scalar for f64 {
    fn zero() -> Self {
        0.0
    }
    fn one() -> Self {
        1.0
    }
    fn from_ratio(num: i64, den: i64) -> Self {
        num as f64 / den as f64
    }
    fn is_zero(&self) -> bool {
        *self == 0.0
    }
    fn det(mat: Vec<Vec<Self>>) -> Self {
        lu_det(mat)
    }
    fn to_f64(&self) -> f64 {
        *self
    }
    fn render(&self) -> String {
        format!("{self:?}")
    }
    fn close(&self, other: &Self) -> bool {
        let scale = self.abs().max(other.abs());
        if scale == 0.0 {
            return true;
        }
        (self - other).abs() <= 1e-9 * scale.max(1.0)
    }
}

/// Fraction-free determinant: clear denominators row by row, run Bareiss
/// on integers, divide the scaling back out at the end.
fn bareiss_det(mat: Vec<Vec<Q>>) -> Q {
    let n = mat.len();
    if n == 0 {
        return <Q as Scalar>::one();
    }
    let mut scale = BigInt::from(1);
    let mut m: Vec<Vec<BigInt>> = Vec::with_capacity(n);
    for row in &mat {
        assert_eq!(row.len(), n, "determinant needs a square matrix");
        let mut lcm = BigInt::from(1);
        for v in row {
            lcm = num::integer::lcm(lcm, v.denom().clone());
        }
        scale *= &lcm;
        m.push(
            row.iter()
                .map(|v| v.numer() * (&lcm / v.denom()))
                .collect(),
        );
    }
    let mut sign = 1i64;
    let mut prev = BigInt::from(1);
    for k in 0..n {
        if m[k][k].is_zero() {
            match (k + 1..n).find(|&r| !m[r][k].is_zero()) {
                Some(r) => {
                    m.swap(k, r);
                    sign = -sign;
                }
                None => return <Q as Scalar>::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let t = &m[i][j] * &m[k][k] - &m[i][k] * &m[k][j];
                m[i][j] = &t / &prev; // exact division in Bareiss
            }
            m[i][k] = BigInt::from(0);
        }
        prev = m[k][k].clone();
    }
    BigRational::new(m[n - 1][n - 1].clone() * BigInt::from(sign), scale)
}

fn lu_det(mut m: Vec<Vec<f64>>) -> f64 {
    let n = m.len();
    if n == 0 {
        return 1.0;
    }
    let mut det = 1.0;
    for k in 0..n {
        let piv = (k..n)
            .max_by(|&a, &b| m[a][k].abs().partial_cmp(&m[b][k].abs()).unwrap())
            .unwrap();
        if m[piv][k] == 0.0 {
            return 0.0;
        }
        if piv != k {
            m.swap(k, piv);
            det = -det;
        }
        det *= m[k][k];
        for i in k + 1..n {
            let f = m[i][k] / m[k][k];
            for j in k..n {
                m[i][j] -= f * m[k][j];
            }
        }
    }
    det
}

/// Parse `p`, `p/q` or a decimal into a ratio of i64.
pub fn parse_ratio(s: &str) -> Option<(i64, i64)> {
    let s = s.trim();
    if let Some((p, q)) = s.split_once('/') {
        let p = p.trim().parse::<i64>().ok()?;
        let q = q.trim().parse::<i64>().ok()?;
        if q == 0 {
            return None;
        }
        return Some((p, q));
    }
    if let Ok(p) = s.parse::<i64>() {
        return Some((p, 1));
    }
    // decimal like 0.25
    let f = s.parse::<f64>().ok()?;
    let den = 1_000_000i64;
    Some(((f * den as f64).round() as i64, den))
}
