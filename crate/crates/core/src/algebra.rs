//! Quaternion and octonion arithmetic.
//!
//! Quaternions are `x0 + i x1 + j x2 + k x3` with `i² = j² = k² = ijk = -1`.
//! Octonions extend them by Cayley-Dickson doubling with the basis
//! `e1 = i, e2 = j, e3 = k, e4 = l, e5 = il, e6 = jl, e7 = kl`; the full
//! product table is [`OCTONION_TABLE`].

use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default minimum vector norm below which the polar decomposition is refused.
pub const DEFAULT_POLAR_EPS: f64 = 1e-9;

/// Operations shared by quaternions and octonions.
///
/// The calculus routines only need coordinates, the real/vector split and the
/// algebra product, so they are written once against this trait.
pub trait Hypercomplex:
    Copy
    + fmt::Debug
    + PartialEq
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
    + Send
    + Sync
{
    /// Number of real coordinates.
    const DIM: usize;

    fn zero() -> Self;
    fn from_real(x0: f64) -> Self;
    fn coord(&self, n: usize) -> f64;
    fn set_coord(&mut self, n: usize, v: f64);

    fn real(&self) -> f64 {
        self.coord(0)
    }

    fn from_coords(c: &[f64]) -> Self {
        assert_eq!(c.len(), Self::DIM, "coordinate count mismatch");
        let mut out = Self::zero();
        c.iter().enumerate().for_each(|(n, &v)| out.set_coord(n, v));
        out
    }

    fn to_vec(&self) -> Vec<f64> {
        (0..Self::DIM).map(|n| self.coord(n)).collect()
    }

    fn scale(mut self, s: f64) -> Self {
        for n in 0..Self::DIM {
            self.set_coord(n, self.coord(n) * s);
        }
        self
    }

    fn conj(mut self) -> Self {
        for n in 1..Self::DIM {
            self.set_coord(n, -self.coord(n));
        }
        self
    }

    fn norm(&self) -> f64 {
        (0..Self::DIM).map(|n| self.coord(n).powi(2)).sum::<f64>().sqrt()
    }

    fn vector_norm(&self) -> f64 {
        (1..Self::DIM).map(|n| self.coord(n).powi(2)).sum::<f64>().sqrt()
    }

    /// The number with its real coordinate zeroed.
    fn vector_part(mut self) -> Self {
        self.set_coord(0, 0.0);
        self
    }

    fn is_finite(&self) -> bool {
        (0..Self::DIM).all(|n| self.coord(n).is_finite())
    }

    /// Largest coordinatewise absolute difference.
    fn max_abs_diff(&self, other: &Self) -> f64 {
        (0..Self::DIM)
            .map(|n| (self.coord(n) - other.coord(n)).abs())
            .fold(0.0, f64::max)
    }

    /// Splits `self` into `x0 + iota * x` with `iota` a unit pure imaginary.
    fn polar(&self, eps: f64) -> Result<PolarDecomposition<Self>> {
        let x = self.vector_norm();
        if x.is_nan() || x < eps {
            return Err(Error::NearRealAxis { norm: x, eps });
        }
        Ok(PolarDecomposition {
            x0: self.real(),
            x,
            iota: self.vector_part().scale(1.0 / x),
        })
    }
}

/// `x0 + iota * x` form of a number off the real axis.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PolarDecomposition<T> {
    pub x0: f64,
    /// Norm of the vector part, always positive.
    pub x: f64,
    /// Local imaginary unit: zero real part, unit norm.
    pub iota: T,
}

impl<T: Hypercomplex> PolarDecomposition<T> {
    pub fn recompose(&self) -> T {
        T::from_real(self.x0) + self.iota.scale(self.x)
    }
}

#[derive(Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
#[serde(from = "[f64; 4]", into = "[f64; 4]")]
pub struct Quaternion {
    pub x0: f64,
    pub x1: f64,
    pub x2: f64,
    pub x3: f64,
}

impl Quaternion {
    pub const ZERO: Self = Self::new(0.0, 0.0, 0.0, 0.0);
    pub const ONE: Self = Self::new(1.0, 0.0, 0.0, 0.0);
    pub const I: Self = Self::new(0.0, 1.0, 0.0, 0.0);
    pub const J: Self = Self::new(0.0, 0.0, 1.0, 0.0);
    pub const K: Self = Self::new(0.0, 0.0, 0.0, 1.0);

    /// The basis `1, i, j, k` in coordinate order.
    pub const BASIS: [Self; 4] = [Self::ONE, Self::I, Self::J, Self::K];

    pub const fn new(x0: f64, x1: f64, x2: f64, x3: f64) -> Self {
        Self { x0, x1, x2, x3 }
    }

    pub const fn from_array(a: [f64; 4]) -> Self {
        Self::new(a[0], a[1], a[2], a[3])
    }

    pub const fn to_array(self) -> [f64; 4] {
        [self.x0, self.x1, self.x2, self.x3]
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    pub fn norm_sqr(&self) -> f64 {
        self.x0 * self.x0 + self.x1 * self.x1 + self.x2 * self.x2 + self.x3 * self.x3
    }

    /// Standard conjugation `x0 - i x1 - j x2 - k x3`.
    pub fn conj(self) -> Self {
        Self::new(self.x0, -self.x1, -self.x2, -self.x3)
    }

    /// Conjugation written purely in terms of `q`: `-(q + iqi + jqj + kqk)/2`.
    pub fn conj_via_identity(self) -> Self {
        let sandwiches = [Self::I, Self::J, Self::K]
            .iter()
            .fold(self, |acc, &u| acc + u * self * u);
        sandwiches.scale(-0.5)
    }

    pub fn involution(self, inv: Involution) -> Self {
        let [si, sj, sk] = inv.signs();
        Self::new(
            self.x0,
            f64::from(si) * self.x1,
            f64::from(sj) * self.x2,
            f64::from(sk) * self.x3,
        )
    }

    pub fn scale(self, s: f64) -> Self {
        Self::new(self.x0 * s, self.x1 * s, self.x2 * s, self.x3 * s)
    }

    pub fn dot(&self, other: &Self) -> f64 {
        self.x0 * other.x0 + self.x1 * other.x1 + self.x2 * other.x2 + self.x3 * other.x3
    }
}

impl fmt::Debug for Quaternion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {}, {})", self.x0, self.x1, self.x2, self.x3)
    }
}

impl fmt::Display for Quaternion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.x0)?;
        for (c, unit) in [(self.x1, "i"), (self.x2, "j"), (self.x3, "k")] {
            if c < 0.0 || (c == 0.0 && c.is_sign_negative()) {
                write!(f, " - {}{unit}", -c)?;
            } else {
                write!(f, " + {c}{unit}")?;
            }
        }
        Ok(())
    }
}

impl From<[f64; 4]> for Quaternion {
    fn from(a: [f64; 4]) -> Self {
        Self::from_array(a)
    }
}

impl From<Quaternion> for [f64; 4] {
    fn from(q: Quaternion) -> Self {
        q.to_array()
    }
}

impl From<f64> for Quaternion {
    fn from(x0: f64) -> Self {
        Self::new(x0, 0.0, 0.0, 0.0)
    }
}

impl Add for Quaternion {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Self::new(self.x0 + o.x0, self.x1 + o.x1, self.x2 + o.x2, self.x3 + o.x3)
    }
}

impl AddAssign for Quaternion {
    fn add_assign(&mut self, o: Self) {
        *self = *self + o;
    }
}

impl Sub for Quaternion {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Self::new(self.x0 - o.x0, self.x1 - o.x1, self.x2 - o.x2, self.x3 - o.x3)
    }
}

impl SubAssign for Quaternion {
    fn sub_assign(&mut self, o: Self) {
        *self = *self - o;
    }
}

impl Neg for Quaternion {
    type Output = Self;
    fn neg(self) -> Self {
        Self::new(-self.x0, -self.x1, -self.x2, -self.x3)
    }
}

/// Hamilton product: `ij = k, jk = i, ki = j`, distinct units anticommute.
impl Mul for Quaternion {
    type Output = Self;
    fn mul(self, b: Self) -> Self {
        let a = self;
        Self::new(
            a.x0 * b.x0 - a.x1 * b.x1 - a.x2 * b.x2 - a.x3 * b.x3,
            a.x0 * b.x1 + a.x1 * b.x0 + a.x2 * b.x3 - a.x3 * b.x2,
            a.x0 * b.x2 - a.x1 * b.x3 + a.x2 * b.x0 + a.x3 * b.x1,
            a.x0 * b.x3 + a.x1 * b.x2 - a.x2 * b.x1 + a.x3 * b.x0,
        )
    }
}

impl Mul<f64> for Quaternion {
    type Output = Self;
    fn mul(self, s: f64) -> Self {
        self.scale(s)
    }
}

impl Hypercomplex for Quaternion {
    const DIM: usize = 4;

    fn zero() -> Self {
        Self::ZERO
    }

    fn from_real(x0: f64) -> Self {
        Self::from(x0)
    }

    fn coord(&self, n: usize) -> f64 {
        self.to_array()[n]
    }

    fn set_coord(&mut self, n: usize, v: f64) {
        match n {
            0 => self.x0 = v,
            1 => self.x1 = v,
            2 => self.x2 = v,
            3 => self.x3 = v,
            _ => panic!("quaternion coordinate {n} out of range"),
        }
    }
}

/// The six sign-flip involutions besides standard conjugation.
///
/// Each variant names the pattern applied to `(i, j, k)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Involution {
    /// `(-i, +j, +k)`, equal to `-i q̄ i`.
    FlipI,
    /// `(+i, -j, +k)`, equal to `-j q̄ j`.
    FlipJ,
    /// `(+i, +j, -k)`, equal to `-k q̄ k`.
    FlipK,
    /// `(+i, -j, -k)`, equal to `-i q i`.
    KeepI,
    /// `(-i, +j, -k)`, equal to `-j q j`.
    KeepJ,
    /// `(-i, -j, +k)`, equal to `-k q k`.
    KeepK,
}

impl Involution {
    pub const ALL: [Self; 6] = [
        Self::FlipI,
        Self::FlipJ,
        Self::FlipK,
        Self::KeepI,
        Self::KeepJ,
        Self::KeepK,
    ];

    pub fn from_signs(signs: [i8; 3]) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|inv| inv.signs() == signs)
            .ok_or(Error::InvalidPattern(signs))
    }

    pub const fn signs(self) -> [i8; 3] {
        match self {
            Self::FlipI => [-1, 1, 1],
            Self::FlipJ => [1, -1, 1],
            Self::FlipK => [1, 1, -1],
            Self::KeepI => [1, -1, -1],
            Self::KeepJ => [-1, 1, -1],
            Self::KeepK => [-1, -1, 1],
        }
    }

    /// The unit `u` and whether `q` is conjugated first in the sandwich
    /// `-u q u` / `-u q̄ u`.
    pub const fn sandwich(self) -> (Quaternion, bool) {
        match self {
            Self::FlipI => (Quaternion::I, true),
            Self::FlipJ => (Quaternion::J, true),
            Self::FlipK => (Quaternion::K, true),
            Self::KeepI => (Quaternion::I, false),
            Self::KeepJ => (Quaternion::J, false),
            Self::KeepK => (Quaternion::K, false),
        }
    }
}

/// Octonion product table: `OCTONION_TABLE[a][b] = (c, s)` means
/// `e_a e_b = s e_c` (index 0 is the real unit).
pub const OCTONION_TABLE: [[(usize, f64); 8]; 8] = [
    [(0, 1.0), (1, 1.0), (2, 1.0), (3, 1.0), (4, 1.0), (5, 1.0), (6, 1.0), (7, 1.0)],
    [(1, 1.0), (0, -1.0), (3, 1.0), (2, -1.0), (5, 1.0), (4, -1.0), (7, -1.0), (6, 1.0)],
    [(2, 1.0), (3, -1.0), (0, -1.0), (1, 1.0), (6, 1.0), (7, 1.0), (4, -1.0), (5, -1.0)],
    [(3, 1.0), (2, 1.0), (1, -1.0), (0, -1.0), (7, 1.0), (6, -1.0), (5, 1.0), (4, -1.0)],
    [(4, 1.0), (5, -1.0), (6, -1.0), (7, -1.0), (0, -1.0), (1, 1.0), (2, 1.0), (3, 1.0)],
    [(5, 1.0), (4, 1.0), (7, -1.0), (6, 1.0), (1, -1.0), (0, -1.0), (3, -1.0), (2, 1.0)],
    [(6, 1.0), (7, 1.0), (4, 1.0), (5, -1.0), (2, -1.0), (3, 1.0), (0, -1.0), (1, -1.0)],
    [(7, 1.0), (6, -1.0), (5, 1.0), (4, 1.0), (3, -1.0), (2, -1.0), (1, 1.0), (0, -1.0)],
];

#[derive(Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
#[serde(from = "[f64; 8]", into = "[f64; 8]")]
pub struct Octonion(pub [f64; 8]);

impl Octonion {
    pub const ZERO: Self = Self([0.0; 8]);
    pub const ONE: Self = Self::unit(0);

    /// Basis element `e_n` (`e_0 = 1`).
    pub const fn unit(n: usize) -> Self {
        let mut c = [0.0; 8];
        c[n] = 1.0;
        Self(c)
    }

    /// Embeds `a + b l` given the two quaternion halves.
    pub fn from_halves(a: Quaternion, b: Quaternion) -> Self {
        let (a, b) = (a.to_array(), b.to_array());
        Self([a[0], a[1], a[2], a[3], b[0], b[1], b[2], b[3]])
    }

    pub fn halves(&self) -> (Quaternion, Quaternion) {
        let c = &self.0;
        (
            Quaternion::new(c[0], c[1], c[2], c[3]),
            Quaternion::new(c[4], c[5], c[6], c[7]),
        )
    }
}

impl From<Quaternion> for Octonion {
    fn from(q: Quaternion) -> Self {
        Self::from_halves(q, Quaternion::ZERO)
    }
}

impl From<[f64; 8]> for Octonion {
    fn from(a: [f64; 8]) -> Self {
        Self(a)
    }
}

impl From<Octonion> for [f64; 8] {
    fn from(o: Octonion) -> Self {
        o.0
    }
}

impl fmt::Debug for Octonion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

impl Add for Octonion {
    type Output = Self;
    fn add(mut self, o: Self) -> Self {
        self.0.iter_mut().zip(o.0).for_each(|(a, b)| *a += b);
        self
    }
}

impl Sub for Octonion {
    type Output = Self;
    fn sub(mut self, o: Self) -> Self {
        self.0.iter_mut().zip(o.0).for_each(|(a, b)| *a -= b);
        self
    }
}

impl Neg for Octonion {
    type Output = Self;
    fn neg(mut self) -> Self {
        self.0.iter_mut().for_each(|a| *a = -*a);
        self
    }
}

impl Mul for Octonion {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        let mut out = [0.0; 8];
        for (a, &xa) in self.0.iter().enumerate() {
            if xa == 0.0 {
                continue;
            }
            for (b, &yb) in o.0.iter().enumerate() {
                let (c, s) = OCTONION_TABLE[a][b];
                out[c] += s * xa * yb;
            }
        }
        Self(out)
    }
}

impl Hypercomplex for Octonion {
    const DIM: usize = 8;

    fn zero() -> Self {
        Self::ZERO
    }

    fn from_real(x0: f64) -> Self {
        let mut c = [0.0; 8];
        c[0] = x0;
        Self(c)
    }

    fn coord(&self, n: usize) -> f64 {
        self.0[n]
    }

    fn set_coord(&mut self, n: usize, v: f64) {
        self.0[n] = v;
    }
}
