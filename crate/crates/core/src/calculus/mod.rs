//! Derivative operators and analyticity residuals.
//!
//! Everything in this file is exact: it works on [`QPolynomial`] and returns
//! residual polynomials that vanish exactly when the condition holds. The
//! finite-difference counterparts for black-box functions live in
//! [`numeric`].

pub mod numeric;

pub use numeric::{
    iota_consistency, local_cr_batch, local_cr_residual_numeric, local_cr_residual_octonion,
    local_cr_residual_vectorform, local_derivative_numeric, Condition, Element, FdConfig,
    FdScheme, ResidualReport,
};

use serde::{Deserialize, Serialize};

use crate::algebra::Quaternion;
use crate::error::{Error, Result};
use crate::poly::{expand_series, QPolynomial, Side, WeierstrassSeries};

const UNITS: [Quaternion; 3] = [Quaternion::I, Quaternion::J, Quaternion::K];

fn check_complex_restricted(p: &QPolynomial) -> Result<()> {
    if p.depends_on(2) || p.depends_on(3) {
        return Err(Error::NotComplexRestricted("depends on x2 or x3".into()));
    }
    if p.terms().any(|(_, c)| c.x2 != 0.0 || c.x3 != 0.0) {
        return Err(Error::NotComplexRestricted("coefficient has j or k content".into()));
    }
    Ok(())
}

/// `∂₀P + i ∂₁P` for an i-complex function of `x0, x1`.
pub fn complex_cr_residual(p: &QPolynomial) -> Result<QPolynomial> {
    check_complex_restricted(p)?;
    Ok(p.partial(0).add(&p.partial(1).left_mul(Quaternion::I)))
}

/// Two-dimensional Laplacian of the real and imaginary parts `u`, `v`.
pub fn harmonic_residual(p: &QPolynomial) -> Result<(QPolynomial, QPolynomial)> {
    check_complex_restricted(p)?;
    let lap2 = |f: &QPolynomial| f.partial(0).partial(0).add(&f.partial(1).partial(1));
    Ok((lap2(&p.component(0)), lap2(&p.component(1))))
}

/// `∂₀P + (i∂₁P + j∂₂P + k∂₃P)/3`.
pub fn naive_cr_residual(p: &QPolynomial) -> QPolynomial {
    let spatial = UNITS
        .iter()
        .enumerate()
        .fold(QPolynomial::zero(), |acc, (n, &u)| acc.add(&p.partial(n + 1).left_mul(u)));
    p.partial(0).scale(3.0).add(&spatial).scale(1.0 / 3.0)
}

/// `∂₀P + u ∂ₙP` for `u = i, j, k`: each vanishes iff the corresponding
/// equality of the four-increment condition holds.
pub fn directional_cr_residuals(p: &QPolynomial) -> [QPolynomial; 3] {
    let d0 = p.partial(0);
    std::array::from_fn(|n| d0.add(&p.partial(n + 1).left_mul(UNITS[n])))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum FueterOperator {
    /// `∂₀ + i∂₁ + j∂₂ + k∂₃`, units on the left.
    DbarL,
    /// `∂₀ - i∂₁ - j∂₂ - k∂₃`, units on the left.
    DL,
    /// `∂₀ + ∂₁ i + ∂₂ j + ∂₃ k`, units on the right.
    DbarR,
    /// `∂₀ - ∂₁ i - ∂₂ j - ∂₃ k`, units on the right.
    DR,
}

pub fn fueter(p: &QPolynomial, op: FueterOperator) -> QPolynomial {
    let (sign, right) = match op {
        FueterOperator::DbarL => (1.0, false),
        FueterOperator::DL => (-1.0, false),
        FueterOperator::DbarR => (1.0, true),
        FueterOperator::DR => (-1.0, true),
    };
    UNITS.iter().enumerate().fold(p.partial(0), |acc, (n, &u)| {
        let d = p.partial(n + 1);
        let term = if right { d.right_mul(u) } else { d.left_mul(u) };
        acc.add(&term.scale(sign))
    })
}

/// `□P = D̄ᴸ Dᴸ P`, the four-dimensional Laplacian.
pub fn laplacian4(p: &QPolynomial) -> QPolynomial {
    fueter(&fueter(p, FueterOperator::DL), FueterOperator::DbarL)
}

/// `D̄(□P)` with the units on the given side; zero for Fueter-analytic `P`.
pub fn fueter_residual(p: &QPolynomial, side: Side) -> QPolynomial {
    let op = match side {
        Side::Left => FueterOperator::DbarL,
        Side::Right => FueterOperator::DbarR,
    };
    fueter(&laplacian4(p), op)
}

/// Third-order analyticity of a Weierstrass series: the result must be the
/// zero polynomial.
pub fn fueter_analyticity_check(w: &WeierstrassSeries) -> Result<QPolynomial> {
    Ok(fueter_residual(&expand_series(w)?, w.side))
}

pub fn box_squared(p: &QPolynomial) -> QPolynomial {
    laplacian4(&laplacian4(p))
}

/// Termwise derivative `Σ n qⁿ⁻¹ aₙ` of a left series, which is what the
/// local derivative `½(∂₀ - ι∂ₓ)` produces on it.
pub fn local_derivative_series(w: &WeierstrassSeries) -> Result<WeierstrassSeries> {
    if w.side != Side::Left {
        return Err(Error::WrongSeriesSide { expected: "left", got: w.side.name() });
    }
    Ok(termwise_derivative(w))
}

/// Right-series counterpart, matching `½(∂₀ - ∂ₓ ι)` with `ι` acting from
/// the right.
pub fn mirrored_local_derivative_series(w: &WeierstrassSeries) -> Result<WeierstrassSeries> {
    if w.side != Side::Right {
        return Err(Error::WrongSeriesSide { expected: "right", got: w.side.name() });
    }
    Ok(termwise_derivative(w))
}

fn termwise_derivative(w: &WeierstrassSeries) -> WeierstrassSeries {
    let coeffs = if w.coeffs.len() == 1 {
        vec![Quaternion::ZERO]
    } else {
        w.coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(n, a)| a.scale(n as f64))
            .collect()
    };
    WeierstrassSeries::new(w.side, coeffs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{expand_monomial, Monomial, MultiIndex};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    const ONE: Quaternion = Quaternion::ONE;
    const I: Quaternion = Quaternion::I;
    const Z: Quaternion = Quaternion::ZERO;

    fn q() -> QPolynomial {
        QPolynomial::variable()
    }

    fn q_pow(n: u32) -> QPolynomial {
        q().pow(n).unwrap()
    }

    fn z() -> QPolynomial {
        QPolynomial::coordinate(0).add(&QPolynomial::coordinate(1).left_mul(I))
    }

    fn c(x: f64) -> QPolynomial {
        QPolynomial::constant(Quaternion::from(x))
    }

    fn rand_q(rng: &mut impl Rng) -> Quaternion {
        Quaternion::from_array(std::array::from_fn(|_| rng.gen_range(-2.0..2.0)))
    }

    /// Σ ∂ₐ² applied termwise, independent of the Fueter factorisation.
    fn laplacian_termwise(p: &QPolynomial) -> QPolynomial {
        (0..4).fold(QPolynomial::zero(), |acc, a| acc.add(&p.partial(a).partial(a)))
    }

    #[test]
    fn complex_cr() {
        let z2 = z().mul(&z()).unwrap();
        assert!(complex_cr_residual(&z2).unwrap().is_empty());
        assert_eq!(complex_cr_residual(&z().conj()).unwrap(), c(2.0));
        assert!(complex_cr_residual(&c(3.0)).unwrap().is_empty());
        assert!(complex_cr_residual(&q()).is_err());
        let with_j = QPolynomial::coordinate(0).left_mul(Quaternion::J);
        assert!(matches!(complex_cr_residual(&with_j), Err(Error::NotComplexRestricted(_))));
    }

    #[test]
    fn harmonic() {
        let z3 = z().pow(3).unwrap();
        let (u, v) = harmonic_residual(&z3).unwrap();
        assert!(u.is_empty() && v.is_empty());
        let x0sq = QPolynomial::coordinate(0).pow(2).unwrap();
        let (u, v) = harmonic_residual(&x0sq).unwrap();
        assert_eq!(u, c(2.0));
        assert!(v.is_empty());
        let (u, v) = harmonic_residual(&c(1.0)).unwrap();
        assert!(u.is_empty() && v.is_empty());
    }

    #[test]
    fn naive_condition() {
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        for _ in 0..50 {
            let (c1, c2) = (rand_q(&mut rng), rand_q(&mut rng));
            let p = QPolynomial::constant(c1).add(&q().right_mul(c2));
            assert!(naive_cr_residual(&p).is_zero_within(1e-15));
        }
        let expected = QPolynomial::from_terms(
            (1..4).map(|a| (MultiIndex::unit(a), Quaternion::BASIS[a].scale(4.0 / 3.0))),
        );
        assert_eq!(naive_cr_residual(&q_pow(2)), expected);
        assert!(naive_cr_residual(&c(2.0)).is_empty());
    }

    #[test]
    fn directional_condition() {
        for r in directional_cr_residuals(&c(4.0)) {
            assert!(r.is_empty());
        }
        let [a, b, d] = directional_cr_residuals(&z());
        assert!(a.is_empty());
        assert_eq!(b, c(1.0));
        assert_eq!(d, c(1.0));
        let r = directional_cr_residuals(&q_pow(2));
        assert!(r.iter().all(|p| !p.is_empty()));
    }

    #[test]
    fn fueter_operators() {
        assert_eq!(fueter(&q(), FueterOperator::DbarL), c(-2.0));
        assert_eq!(fueter(&q(), FueterOperator::DL), c(4.0));
        assert_eq!(fueter(&q(), FueterOperator::DbarR), c(-2.0));
        assert_eq!(fueter(&q(), FueterOperator::DR), c(4.0));
        assert!(fueter(&c(1.0), FueterOperator::DbarL).is_empty());
        assert_eq!(laplacian4(&q_pow(2)), c(-4.0));
        assert!(laplacian4(&c(5.0)).is_empty());
    }

    #[test]
    fn laplacian_factorises() {
        let mut rng = ChaCha8Rng::seed_from_u64(32);
        for _ in 0..50 {
            let degree = rng.gen_range(0..=4);
            let m = Monomial::new((0..=degree).map(|_| rand_q(&mut rng)).collect());
            let p = expand_monomial(&m).unwrap();
            let d = laplacian4(&p).max_abs_diff(&laplacian_termwise(&p));
            assert!(d < 1e-11, "{d}");
        }
    }

    #[test]
    fn fueter_annihilation() {
        let sq = WeierstrassSeries::left(vec![Z, Z, ONE]);
        assert!(fueter_analyticity_check(&sq).unwrap().is_empty());
        let mut rng = ChaCha8Rng::seed_from_u64(33);
        for side in [Side::Left, Side::Right] {
            for _ in 0..20 {
                let w = WeierstrassSeries::new(side, (0..=6).map(|_| rand_q(&mut rng)).collect());
                assert!(fueter_analyticity_check(&w).unwrap().is_zero_within(1e-10));
            }
        }
        // q̄ is linear, so □q̄ = 0 and the third-order residual vanishes too
        assert!(fueter_residual(&q().conj(), Side::Left).is_empty());
        // a cubic outside the series class is not annihilated
        let conj_cube = q().conj().pow(3).unwrap();
        assert!(!fueter_residual(&conj_cube, Side::Left).is_zero_within(1e-10));
        let x0_cube = QPolynomial::coordinate(0).pow(3).unwrap();
        assert_eq!(fueter_residual(&x0_cube, Side::Left), c(6.0));
    }

    #[test]
    fn box_squared_examples() {
        assert!(box_squared(&q_pow(3)).is_empty());
        assert!(box_squared(&q_pow(2)).is_empty());
        let x0_4 = QPolynomial::coordinate(0).pow(4).unwrap();
        assert_eq!(box_squared(&x0_4), c(24.0));
    }

    #[test]
    fn termwise_local_derivative() {
        let sq = WeierstrassSeries::left(vec![Z, Z, ONE]);
        assert_eq!(local_derivative_series(&sq).unwrap().coeffs, vec![Z, ONE.scale(2.0)]);
        let k = WeierstrassSeries::left(vec![I]);
        assert_eq!(local_derivative_series(&k).unwrap().coeffs, vec![Z]);
        let cst = Quaternion::new(0.0, 1.0, 2.0, 0.0);
        let cubic = WeierstrassSeries::left(vec![Z, cst, Z, ONE]);
        assert_eq!(local_derivative_series(&cubic).unwrap().coeffs, vec![cst, Z, ONE.scale(3.0)]);
        let right = WeierstrassSeries::right(vec![Z, ONE]);
        assert!(matches!(local_derivative_series(&right), Err(Error::WrongSeriesSide { .. })));
        assert!(mirrored_local_derivative_series(&right).is_ok());
    }
}
