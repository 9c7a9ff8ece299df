//! Quaternion and octonion calculus: algebra, barred operators, exact
//! polynomial expansion, analyticity residuals, derivative constraint
//! systems, and a small expression language.

pub mod algebra;
pub mod barred;
pub mod calculus;
pub mod cli;
pub mod constraints;
pub mod error;
pub mod parser;
pub mod poly;

pub use algebra::{Hypercomplex, Involution, Octonion, PolarDecomposition, Quaternion};
pub use barred::{Axis, BarredOperator, RealMatrix4};
pub use constraints::{build_system, solve, CoefficientSpace, DerivativeAnsatz, SolutionSpace};
pub use error::{Error, Result};
pub use parser::{eval_expr, parse, to_polynomial, Expr};
pub use poly::{MultiIndex, QPolynomial, Side, WeierstrassSeries};
