//! Barred operators `q0 + q1|i + q2|j + q3|k`.
//!
//! The operator `a|b` sends `p` to `a p b`. Every real-linear map on the
//! quaternions is a unique barred operator, so the type is in bijection with
//! 4x4 real matrices acting on the column `(x0, x1, x2, x3)`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::algebra::Quaternion;

/// Coefficientwise tolerance used by [`BarredOperator::approx_eq`] callers
/// that have no better bound.
pub const OPERATOR_TOL: f64 = 1e-12;

/// Row-major 4x4 real matrix acting on column vectors.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RealMatrix4(pub [[f64; 4]; 4]);

impl RealMatrix4 {
    pub const IDENTITY: Self = Self([
        [1.0, 0.0, 0.0, 0.0],
        [0.0, 1.0, 0.0, 0.0],
        [0.0, 0.0, 1.0, 0.0],
        [0.0, 0.0, 0.0, 1.0],
    ]);

    pub fn from_row_major(entries: [f64; 16]) -> Self {
        Self(std::array::from_fn(|r| std::array::from_fn(|c| entries[4 * r + c])))
    }

    pub fn row_major(&self) -> [f64; 16] {
        std::array::from_fn(|n| self.0[n / 4][n % 4])
    }

    pub fn apply(&self, p: Quaternion) -> Quaternion {
        let v = p.to_array();
        Quaternion::from_array(std::array::from_fn(|r| {
            (0..4).map(|c| self.0[r][c] * v[c]).sum()
        }))
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.row_major()
            .iter()
            .zip(other.row_major())
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }

    /// Frobenius inner product.
    pub fn frobenius(&self, other: &Self) -> f64 {
        self.row_major()
            .iter()
            .zip(other.row_major())
            .map(|(a, b)| a * b)
            .sum()
    }
}

impl Mul for RealMatrix4 {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        Self(std::array::from_fn(|r| {
            std::array::from_fn(|c| (0..4).map(|k| self.0[r][k] * o.0[k][c]).sum())
        }))
    }
}

/// Real 2x2 matrix of `a + ib` acting on the column `(x0, x1)`.
pub fn complex_matrix(a: f64, b: f64) -> [[f64; 2]; 2] {
    [[a, -b], [b, a]]
}

#[derive(Clone, Copy, Default, PartialEq)]
pub struct BarredOperator {
    /// Left factors paired with the right units `1, i, j, k`.
    pub coeffs: [Quaternion; 4],
}

/// Component selected by a projector.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Axis {
    R,
    I,
    J,
    K,
}

impl Axis {
    pub const ALL: [Self; 4] = [Self::R, Self::I, Self::J, Self::K];

    pub const fn index(self) -> usize {
        match self {
            Self::R => 0,
            Self::I => 1,
            Self::J => 2,
            Self::K => 3,
        }
    }
}

impl BarredOperator {
    pub const ZERO: Self = Self { coeffs: [Quaternion::ZERO; 4] };
    pub const IDENTITY: Self = Self {
        coeffs: [Quaternion::ONE, Quaternion::ZERO, Quaternion::ZERO, Quaternion::ZERO],
    };

    pub const fn new(q0: Quaternion, q1: Quaternion, q2: Quaternion, q3: Quaternion) -> Self {
        Self { coeffs: [q0, q1, q2, q3] }
    }

    /// Left multiplication `p -> a p`.
    pub fn left(a: Quaternion) -> Self {
        Self::new(a, Quaternion::ZERO, Quaternion::ZERO, Quaternion::ZERO)
    }

    /// The operator `a|b`, i.e. `p -> a p b`, for arbitrary quaternions.
    pub fn sandwich(a: Quaternion, b: Quaternion) -> Self {
        let b = b.to_array();
        Self { coeffs: std::array::from_fn(|m| a.scale(b[m])) }
    }

    pub fn apply(&self, p: Quaternion) -> Quaternion {
        self.coeffs
            .iter()
            .zip(Quaternion::BASIS)
            .fold(Quaternion::ZERO, |acc, (&c, u)| acc + c * p * u)
    }

    /// `self ∘ other`, i.e. apply `other` first.
    ///
    /// `(a|u)(b|v) = ab|vu`, and `vu` is a signed unit.
    pub fn compose(&self, other: &Self) -> Self {
        let mut out = [Quaternion::ZERO; 4];
        for (m, &a) in self.coeffs.iter().enumerate() {
            for (n, &b) in other.coeffs.iter().enumerate() {
                let unit = Quaternion::BASIS[n] * Quaternion::BASIS[m];
                let (r, sign) = signed_unit_index(unit);
                out[r] += (a * b).scale(sign);
            }
        }
        Self { coeffs: out }
    }

    pub fn to_matrix(&self) -> RealMatrix4 {
        let cols = Quaternion::BASIS.map(|e| self.apply(e).to_array());
        RealMatrix4(std::array::from_fn(|r| std::array::from_fn(|c| cols[c][r])))
    }

    /// Inverse of [`to_matrix`](Self::to_matrix).
    ///
    /// The sixteen maps `p -> e_l p u_m` have signed-permutation matrices that
    /// are mutually orthogonal with squared Frobenius norm 4, so each
    /// coefficient is a projection.
    pub fn from_matrix(m: &RealMatrix4) -> Self {
        let mut coeffs = [[0.0; 4]; 4];
        for (r, unit) in Quaternion::BASIS.into_iter().enumerate() {
            for (l, e) in Quaternion::BASIS.into_iter().enumerate() {
                let basis = Self::sandwich(e, unit).to_matrix();
                coeffs[r][l] = m.frobenius(&basis) / 4.0;
            }
        }
        Self { coeffs: coeffs.map(Quaternion::from_array) }
    }

    /// Component projectors `P_r, P_i, P_j, P_k`.
    ///
    /// `P_r = (1 - i|i - j|j - k|k)/4`; the others flip the sign of every
    /// sandwich term except their own.
    pub fn projector(axis: Axis) -> Self {
        let signs: [f64; 4] = match axis {
            Axis::R => [1.0, -1.0, -1.0, -1.0],
            Axis::I => [1.0, -1.0, 1.0, 1.0],
            Axis::J => [1.0, 1.0, -1.0, 1.0],
            Axis::K => [1.0, 1.0, 1.0, -1.0],
        };
        Self {
            coeffs: std::array::from_fn(|m| Quaternion::BASIS[m].scale(signs[m] / 4.0)),
        }
    }

    /// `-(1 + i|i + j|j + k|k)/2`, which sends `q` to its conjugate.
    pub fn conj_operator() -> Self {
        Self { coeffs: Quaternion::BASIS.map(|u| u.scale(-0.5)) }
    }

    pub fn scale(&self, s: f64) -> Self {
        Self { coeffs: self.coeffs.map(|c| c.scale(s)) }
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| {
                a.to_array()
                    .iter()
                    .zip(b.to_array())
                    .map(|(x, y)| (x - y).abs())
                    .fold(0.0, f64::max)
            })
            .fold(0.0, f64::max)
    }

    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        self.max_abs_diff(other) <= tol
    }

    /// All sixteen real parameters, grouped by right unit then left component.
    pub fn to_params(&self) -> [f64; 16] {
        std::array::from_fn(|n| self.coeffs[n / 4].to_array()[n % 4])
    }

    pub fn from_params(p: &[f64]) -> Self {
        assert_eq!(p.len(), 16, "a barred operator has 16 parameters");
        Self {
            coeffs: std::array::from_fn(|m| {
                Quaternion::new(p[4 * m], p[4 * m + 1], p[4 * m + 2], p[4 * m + 3])
            }),
        }
    }
}

/// Maps `±1, ±i, ±j, ±k` to `(index, sign)`.
fn signed_unit_index(u: Quaternion) -> (usize, f64) {
    let a = u.to_array();
    let n = (0..4)
        .find(|&n| a[n] != 0.0)
        .expect("product of basis units is a signed unit");
    (n, a[n])
}

impl Add for BarredOperator {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Self { coeffs: std::array::from_fn(|m| self.coeffs[m] + o.coeffs[m]) }
    }
}

impl Sub for BarredOperator {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Self { coeffs: std::array::from_fn(|m| self.coeffs[m] - o.coeffs[m]) }
    }
}

impl Neg for BarredOperator {
    type Output = Self;
    fn neg(self) -> Self {
        self.scale(-1.0)
    }
}

impl fmt::Debug for BarredOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.coeffs)
    }
}

impl fmt::Display for BarredOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (c, unit) in self.coeffs.iter().zip(["1", "i", "j", "k"]) {
            if *c == Quaternion::ZERO {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({c})|{unit}")?;
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum BarredRepr {
    Coefficients([[f64; 4]; 4]),
    Matrix([f64; 16]),
}

impl Serialize for BarredOperator {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        BarredRepr::Coefficients(self.coeffs.map(Quaternion::to_array)).serialize(s)
    }
}

impl<'de> Deserialize<'de> for BarredOperator {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        Ok(match BarredRepr::deserialize(d)? {
            BarredRepr::Coefficients(c) => Self { coeffs: c.map(Quaternion::from_array) },
            BarredRepr::Matrix(m) => Self::from_matrix(&RealMatrix4::from_row_major(m)),
        })
    }
}
