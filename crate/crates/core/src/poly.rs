//! Quaternion-coefficient polynomials in the real coordinates `x0..x3`.
//!
//! The real coordinates commute with everything, so a quaternion-valued
//! polynomial function of `q` is a finite sum `Σ c_n x^n` with quaternion
//! coefficients. Products keep coefficient order, which is all the
//! noncommutativity there is.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::algebra::Quaternion;
use crate::barred::{Axis, BarredOperator};
use crate::error::{Error, Result};

/// Maximum total degree any expansion may produce.
pub const DEGREE_CAP: u32 = 16;

/// Exponents `(n0, n1, n2, n3)` of `x0^n0 x1^n1 x2^n2 x3^n3`.
///
/// Ordered graded-lexicographically: total degree first, then larger
/// `n0`, then larger `n1`, and so on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct MultiIndex(pub [u32; 4]);

impl MultiIndex {
    pub const ONE: Self = Self([0; 4]);

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn unit(axis: usize) -> Self {
        let mut n = [0; 4];
        n[axis] = 1;
        Self(n)
    }

    pub fn add(&self, other: &Self) -> Self {
        Self(std::array::from_fn(|a| self.0[a] + other.0[a]))
    }

    /// All multi-indices of the given total degree, in graded-lex order.
    pub fn all_of_degree(degree: u32) -> Vec<Self> {
        let mut out = Vec::new();
        for n0 in (0..=degree).rev() {
            for n1 in (0..=degree - n0).rev() {
                for n2 in (0..=degree - n0 - n1).rev() {
                    out.push(Self([n0, n1, n2, degree - n0 - n1 - n2]));
                }
            }
        }
        out
    }

    fn eval(&self, x: &[f64; 4]) -> f64 {
        self.0
            .iter()
            .zip(x)
            .map(|(&n, &xi)| xi.powi(n as i32))
            .product()
    }
}

impl Ord for MultiIndex {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| other.0.cmp(&self.0))
    }
}

impl PartialOrd for MultiIndex {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

#[derive(Clone, Default, PartialEq)]
pub struct QPolynomial {
    terms: BTreeMap<MultiIndex, Quaternion>,
}

impl QPolynomial {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: Quaternion) -> Self {
        Self::from_terms([(MultiIndex::ONE, c)])
    }

    /// `q = x0 + i x1 + j x2 + k x3`.
    pub fn variable() -> Self {
        Self::from_terms((0..4).map(|a| (MultiIndex::unit(a), Quaternion::BASIS[a])))
    }

    /// The real coordinate `x_axis`.
    pub fn coordinate(axis: usize) -> Self {
        Self::from_terms([(MultiIndex::unit(axis), Quaternion::ONE)])
    }

    /// Sums repeated indices and drops zero coefficients.
    pub fn from_terms(terms: impl IntoIterator<Item = (MultiIndex, Quaternion)>) -> Self {
        let mut p = Self::zero();
        for (idx, c) in terms {
            p.add_term(idx, c);
        }
        p.normalize();
        p
    }

    fn add_term(&mut self, idx: MultiIndex, c: Quaternion) {
        *self.terms.entry(idx).or_default() += c;
    }

    fn normalize(&mut self) {
        self.terms.retain(|_, c| *c != Quaternion::ZERO);
    }

    fn map_coeffs(&self, f: impl Fn(Quaternion) -> Quaternion) -> Self {
        Self::from_terms(self.terms.iter().map(|(&i, &c)| (i, f(c))))
    }

    pub fn terms(&self) -> impl Iterator<Item = (&MultiIndex, &Quaternion)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, idx: MultiIndex) -> Quaternion {
        self.terms.get(&idx).copied().unwrap_or_default()
    }

    /// Total degree; zero for the zero polynomial.
    pub fn degree(&self) -> u32 {
        self.terms.keys().map(MultiIndex::degree).max().unwrap_or(0)
    }

    /// Drops every monomial containing one of `axes`, which is the
    /// restriction to the subspace where those coordinates vanish.
    pub fn restrict_zero(&self, axes: &[usize]) -> Self {
        Self::from_terms(
            self.terms()
                .filter(|(m, _)| axes.iter().all(|&a| m.0[a] == 0))
                .map(|(m, c)| (*m, *c)),
        )
    }

    pub fn depends_on(&self, axis: usize) -> bool {
        self.terms.keys().any(|i| i.0[axis] > 0)
    }

    /// Largest absolute value over all coefficient components.
    pub fn max_abs_coeff(&self) -> f64 {
        self.terms
            .values()
            .flat_map(|c| c.to_array())
            .fold(0.0, |m, x| m.max(x.abs()))
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.sub(other).max_abs_coeff()
    }

    pub fn is_zero_within(&self, tol: f64) -> bool {
        self.max_abs_coeff() <= tol
    }

    pub fn eval(&self, q: Quaternion) -> Quaternion {
        let x = q.to_array();
        self.terms
            .iter()
            .fold(Quaternion::ZERO, |acc, (idx, &c)| acc + c.scale(idx.eval(&x)))
    }

    pub fn add(&self, other: &Self) -> Self {
        Self::from_terms(self.terms.iter().chain(&other.terms).map(|(&i, &c)| (i, c)))
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        self.map_coeffs(|c| -c)
    }

    pub fn scale(&self, s: f64) -> Self {
        self.map_coeffs(|c| c.scale(s))
    }

    /// `c * P`.
    pub fn left_mul(&self, c: Quaternion) -> Self {
        self.map_coeffs(|a| c * a)
    }

    /// `P * c`.
    pub fn right_mul(&self, c: Quaternion) -> Self {
        self.map_coeffs(|a| a * c)
    }

    /// Conjugates every coefficient, which conjugates the function values.
    pub fn conj(&self) -> Self {
        self.map_coeffs(Quaternion::conj)
    }

    /// Real polynomial holding coordinate `component` of every coefficient.
    pub fn component(&self, component: usize) -> Self {
        self.map_coeffs(|c| Quaternion::from(c.to_array()[component]))
    }

    /// Order-preserving product `self * other`.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        let degree = self.degree() + other.degree();
        if !self.is_empty() && !other.is_empty() && degree > DEGREE_CAP {
            return Err(Error::DegreeCapExceeded { degree, cap: DEGREE_CAP });
        }
        let mut out = Self::zero();
        for (i, &a) in &self.terms {
            for (j, &b) in &other.terms {
                out.add_term(i.add(j), a * b);
            }
        }
        out.normalize();
        Ok(out)
    }

    pub fn pow(&self, n: u32) -> Result<Self> {
        if self.degree().saturating_mul(n) > DEGREE_CAP {
            return Err(Error::DegreeCapExceeded {
                degree: self.degree().saturating_mul(n),
                cap: DEGREE_CAP,
            });
        }
        (0..n).try_fold(Self::constant(Quaternion::ONE), |acc, _| acc.mul(self))
    }

    /// Exact partial derivative with respect to `x_axis`.
    pub fn partial(&self, axis: usize) -> Self {
        assert!(axis < 4, "axis {axis} out of range");
        Self::from_terms(self.terms.iter().filter(|(i, _)| i.0[axis] > 0).map(|(i, &c)| {
            let n = i.0[axis];
            let mut lowered = *i;
            lowered.0[axis] -= 1;
            (lowered, c.scale(f64::from(n)))
        }))
    }

    /// Applies `q0 + q1|i + q2|j + q3|k` to the polynomial's values.
    pub fn apply_barred(&self, op: &BarredOperator) -> Self {
        op.coeffs
            .iter()
            .zip(Quaternion::BASIS)
            .filter(|(c, _)| **c != Quaternion::ZERO)
            .fold(Self::zero(), |acc, (&c, u)| acc.add(&self.right_mul(u).left_mul(c)))
    }
}

impl fmt::Debug for QPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_map().entries(self.terms.iter().map(|(i, c)| (i.0, c))).finish()
    }
}

impl fmt::Display for QPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            return write!(f, "0");
        }
        for (n, (idx, c)) in self.terms.iter().enumerate() {
            if n > 0 {
                write!(f, " + ")?;
            }
            write!(f, "({c})")?;
            for (a, &e) in idx.0.iter().enumerate() {
                match e {
                    0 => {}
                    1 => write!(f, " x{a}")?,
                    _ => write!(f, " x{a}^{e}")?,
                }
            }
        }
        Ok(())
    }
}

#[derive(Serialize, Deserialize)]
struct TermRecord {
    index: [u32; 4],
    coeff: Quaternion,
}

impl Serialize for QPolynomial {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_seq(self.terms.iter().map(|(i, &c)| TermRecord { index: i.0, coeff: c }))
    }
}

impl<'de> Deserialize<'de> for QPolynomial {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let records = Vec::<TermRecord>::deserialize(d)?;
        Ok(Self::from_terms(records.into_iter().map(|r| (MultiIndex(r.index), r.coeff))))
    }
}

/// `α0 q α1 q ... q αr`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Monomial {
    pub factors: Vec<Quaternion>,
}

impl Monomial {
    pub fn new(factors: Vec<Quaternion>) -> Self {
        assert!(!factors.is_empty(), "a monomial needs at least one factor");
        Self { factors }
    }

    pub fn degree(&self) -> usize {
        self.factors.len() - 1
    }

    /// Multiplies the factors out at a single point.
    pub fn eval(&self, q: Quaternion) -> Quaternion {
        self.factors[1..]
            .iter()
            .fold(self.factors[0], |acc, &a| acc * q * a)
    }
}

pub fn expand_monomial(m: &Monomial) -> Result<QPolynomial> {
    if m.degree() as u32 > DEGREE_CAP {
        return Err(Error::DegreeCapExceeded { degree: m.degree() as u32, cap: DEGREE_CAP });
    }
    let q = QPolynomial::variable();
    m.factors[1..]
        .iter()
        .try_fold(QPolynomial::constant(m.factors[0]), |acc, &a| {
            Ok(acc.mul(&q)?.right_mul(a))
        })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    /// `Σ qⁿ aₙ`, coefficients on the right.
    Left,
    /// `Σ aₙ qⁿ`, coefficients on the left.
    Right,
}

impl Side {
    pub const fn name(self) -> &'static str {
        match self {
            Self::Left => "left",
            Self::Right => "right",
        }
    }
}

/// Truncated holomorphic series `Σ qⁿ aₙ` or `Σ aₙ qⁿ`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WeierstrassSeries {
    pub side: Side,
    pub coeffs: Vec<Quaternion>,
}

impl WeierstrassSeries {
    pub fn new(side: Side, coeffs: Vec<Quaternion>) -> Self {
        assert!(!coeffs.is_empty(), "a series needs at least one coefficient");
        Self { side, coeffs }
    }

    pub fn left(coeffs: Vec<Quaternion>) -> Self {
        Self::new(Side::Left, coeffs)
    }

    pub fn right(coeffs: Vec<Quaternion>) -> Self {
        Self::new(Side::Right, coeffs)
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Evaluates by Horner's rule, never expanding.
    pub fn eval(&self, q: Quaternion) -> Quaternion {
        let mut acc = Quaternion::ZERO;
        for &a in self.coeffs.iter().rev() {
            acc = match self.side {
                Side::Left => q * acc + a,
                Side::Right => acc * q + a,
            };
        }
        acc
    }
}

pub fn expand_series(w: &WeierstrassSeries) -> Result<QPolynomial> {
    if w.degree() as u32 > DEGREE_CAP {
        return Err(Error::DegreeCapExceeded { degree: w.degree() as u32, cap: DEGREE_CAP });
    }
    let q = QPolynomial::variable();
    let mut power = QPolynomial::constant(Quaternion::ONE);
    let mut out = QPolynomial::zero();
    for (n, &a) in w.coeffs.iter().enumerate() {
        if n > 0 {
            power = power.mul(&q)?;
        }
        let term = match w.side {
            Side::Left => power.right_mul(a),
            Side::Right => power.left_mul(a),
        };
        out = out.add(&term);
    }
    Ok(out)
}

/// `x0, x1, x2, x3` as polynomials, cross-checked against the barred
/// projector formulas applied to `q`:
///
/// `x0 = P_r q`, and `x_n = -u_n P_{u_n} q` for the units `u_n`.
pub fn coordinate_polys() -> Result<[QPolynomial; 4]> {
    let q = QPolynomial::variable();
    let coords: [QPolynomial; 4] = std::array::from_fn(QPolynomial::coordinate);
    for (n, axis) in Axis::ALL.into_iter().enumerate() {
        let projected = q.apply_barred(&BarredOperator::projector(axis));
        let via_barred = if n == 0 {
            projected
        } else {
            projected.left_mul(-Quaternion::BASIS[n])
        };
        if via_barred != coords[n] {
            return Err(Error::IdentityViolation(format!(
                "projector formula for x{n} gives {via_barred}"
            )));
        }
    }
    Ok(coords)
}
