use std::fmt;

use serde::Serialize;

use crate::algebra::{Hypercomplex, Octonion, Quaternion};
use crate::error::{Error, Result};
use crate::poly::QPolynomial;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum Literal {
    Quaternion(Quaternion),
    Octonion(Octonion),
}

impl Literal {
    fn as_octonion(self) -> Octonion {
        match self {
            Self::Quaternion(q) => q.into(),
            Self::Octonion(o) => o,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum Expr {
    Var,
    Const(Literal),
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    /// Left operand times right operand, never reordered.
    Mul(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, u32),
    Conj(Box<Expr>),
    /// `left · arg · right`.
    BarApply { left: Quaternion, right: Quaternion, arg: Box<Expr> },
}

impl Expr {
    pub fn depth(&self) -> usize {
        1 + match self {
            Self::Var | Self::Const(_) => 0,
            Self::Neg(a) | Self::Pow(a, _) | Self::Conj(a) | Self::BarApply { arg: a, .. } => a.depth(),
            Self::Add(a, b) | Self::Sub(a, b) | Self::Mul(a, b) => a.depth().max(b.depth()),
        }
    }
}

fn write_tuple(f: &mut fmt::Formatter<'_>, xs: &[f64]) -> fmt::Result {
    write!(f, "(")?;
    for (n, x) in xs.iter().enumerate() {
        if n > 0 {
            write!(f, ",")?;
        }
        write!(f, "{x}")?;
    }
    write!(f, ")")
}

/// Fully parenthesised; parsing the output gives back the same tree.
impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Var => write!(f, "q"),
            Self::Const(Literal::Quaternion(c)) => write_tuple(f, &c.to_array()),
            Self::Const(Literal::Octonion(o)) => write_tuple(f, &o.0),
            Self::Neg(a) => write!(f, "-({a})"),
            Self::Add(a, b) => write!(f, "({a} + {b})"),
            Self::Sub(a, b) => write!(f, "({a} - {b})"),
            Self::Mul(a, b) => write!(f, "({a} * {b})"),
            Self::Pow(a, n) => write!(f, "({a})^{n}"),
            Self::Conj(a) => write!(f, "conj({a})"),
            Self::BarApply { left, right, arg } => {
                write!(f, "bar(")?;
                write_tuple(f, &left.to_array())?;
                write!(f, ",")?;
                write_tuple(f, &right.to_array())?;
                write!(f, ")({arg})")
            }
        }
    }
}

fn power<T: Hypercomplex>(mut base: T, mut n: u32) -> T {
    let mut acc = T::from_real(1.0);
    while n > 0 {
        if n & 1 == 1 {
            acc = acc * base;
        }
        base = base * base;
        n >>= 1;
    }
    acc
}

/// Evaluates a quaternion-mode expression at `q`.
pub fn eval_expr(e: &Expr, q: Quaternion) -> Result<Quaternion> {
    Ok(match e {
        Expr::Var => q,
        Expr::Const(Literal::Quaternion(c)) => *c,
        Expr::Const(Literal::Octonion(_)) => return Err(Error::ModeMismatch("an octonion literal")),
        Expr::Neg(a) => -eval_expr(a, q)?,
        Expr::Add(a, b) => eval_expr(a, q)? + eval_expr(b, q)?,
        Expr::Sub(a, b) => eval_expr(a, q)? - eval_expr(b, q)?,
        Expr::Mul(a, b) => eval_expr(a, q)? * eval_expr(b, q)?,
        Expr::Pow(a, n) => power(eval_expr(a, q)?, *n),
        Expr::Conj(a) => eval_expr(a, q)?.conj(),
        Expr::BarApply { left, right, arg } => *left * eval_expr(arg, q)? * *right,
    })
}

/// Evaluates at an octonion; quaternion constants embed as the first half.
pub fn eval_expr_octonion(e: &Expr, o: Octonion) -> Result<Octonion> {
    Ok(match e {
        Expr::Var => o,
        Expr::Const(c) => c.as_octonion(),
        Expr::Neg(a) => -eval_expr_octonion(a, o)?,
        Expr::Add(a, b) => eval_expr_octonion(a, o)? + eval_expr_octonion(b, o)?,
        Expr::Sub(a, b) => eval_expr_octonion(a, o)? - eval_expr_octonion(b, o)?,
        Expr::Mul(a, b) => eval_expr_octonion(a, o)? * eval_expr_octonion(b, o)?,
        Expr::Pow(a, n) => power(eval_expr_octonion(a, o)?, *n),
        Expr::Conj(a) => Hypercomplex::conj(eval_expr_octonion(a, o)?),
        Expr::BarApply { .. } => return Err(Error::ModeMismatch("a barred operator")),
    })
}

/// Expands the expression into real monomials with quaternion coefficients.
pub fn to_polynomial(e: &Expr) -> Result<QPolynomial> {
    Ok(match e {
        Expr::Var => QPolynomial::variable(),
        Expr::Const(Literal::Quaternion(c)) => QPolynomial::constant(*c),
        Expr::Const(Literal::Octonion(_)) => return Err(Error::ModeMismatch("an octonion literal")),
        Expr::Neg(a) => to_polynomial(a)?.neg(),
        Expr::Add(a, b) => to_polynomial(a)?.add(&to_polynomial(b)?),
        Expr::Sub(a, b) => to_polynomial(a)?.sub(&to_polynomial(b)?),
        Expr::Mul(a, b) => to_polynomial(a)?.mul(&to_polynomial(b)?)?,
        Expr::Pow(a, n) => to_polynomial(a)?.pow(*n)?,
        Expr::Conj(a) => to_polynomial(a)?.conj(),
        Expr::BarApply { left, right, arg } => to_polynomial(arg)?.left_mul(*left).right_mul(*right),
    })
}
