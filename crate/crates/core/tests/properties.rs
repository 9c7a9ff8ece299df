mod common;

use hypercalc::algebra::{Hypercomplex, Octonion, Quaternion};
use hypercalc::barred::BarredOperator;
use hypercalc::parser::{eval_expr, parse, to_polynomial};
use hypercalc::poly::QPolynomial;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn quat() -> impl Strategy<Value = Quaternion> {
    prop::array::uniform4(-3.0..3.0f64).prop_map(Quaternion::from_array)
}

fn oct() -> impl Strategy<Value = Octonion> {
    prop::array::uniform8(-3.0..3.0f64).prop_map(Octonion)
}

fn operator() -> impl Strategy<Value = BarredOperator> {
    prop::array::uniform4(quat()).prop_map(|[a, b, c, d]| BarredOperator::new(a, b, c, d))
}

fn poly() -> impl Strategy<Value = QPolynomial> {
    (prop::collection::vec(quat(), 1..4), prop::collection::vec(quat(), 1..3)).prop_map(|(l, r)| {
        let q = QPolynomial::variable();
        let mut p = QPolynomial::zero();
        let mut power = QPolynomial::constant(Quaternion::ONE);
        for (n, c) in l.iter().enumerate() {
            p = p.add(&power.right_mul(*c));
            if n + 1 < l.len() {
                power = power.mul(&q).unwrap();
            }
        }
        r.iter().fold(p, |acc, c| acc.add(&q.conj().left_mul(*c)))
    })
}

fn close(a: &[f64], b: &[f64], scale: f64) -> bool {
    common::max_diff(a, b) <= 1e-12 * scale.max(1.0)
}

proptest! {
    #[test]
    fn hamilton_product_matches_componentwise_formula(a in quat(), b in quat()) {
        prop_assert!(close(&(a * b).to_array(), &common::hamilton(a.to_array(), b.to_array()), 1.0));
    }

    #[test]
    fn quaternion_product_is_associative(a in quat(), b in quat(), c in quat()) {
        let scale = a.norm() * b.norm() * c.norm();
        prop_assert!(close(&((a * b) * c).to_array(), &(a * (b * c)).to_array(), scale));
    }

    #[test]
    fn quaternion_norm_is_multiplicative(a in quat(), b in quat()) {
        prop_assert!(((a * b).norm() - a.norm() * b.norm()).abs() <= 1e-12 * (a.norm() * b.norm()).max(1.0));
    }

    #[test]
    fn conjugation_reverses_products(a in quat(), b in quat()) {
        let scale = a.norm() * b.norm();
        prop_assert!(close(&(a * b).conj().to_array(), &(b.conj() * a.conj()).to_array(), scale));
        prop_assert!(close(&a.conj_via_identity().to_array(), &a.conj().to_array(), a.norm()));
    }

    #[test]
    fn polar_form_recomposes(a in quat()) {
        prop_assume!(a.vector_norm() >= 1e-6);
        let polar = a.polar(1e-9).unwrap();
        prop_assert!(polar.recompose().max_abs_diff(&a) <= 1e-12 * a.norm().max(1.0));
        prop_assert!((polar.iota * polar.iota + Quaternion::ONE).norm() <= 1e-13);
    }

    #[test]
    fn operator_matrix_is_a_homomorphism(a in operator(), b in operator(), p in quat()) {
        let m = a.compose(&b).to_matrix();
        prop_assert!(m.max_abs_diff(&(a.to_matrix() * b.to_matrix())) <= 1e-11);
        prop_assert!(BarredOperator::from_matrix(&a.to_matrix()).max_abs_diff(&a) <= 1e-12);
        let direct = a.apply(b.apply(p));
        prop_assert!(close(&a.compose(&b).apply(p).to_array(), &direct.to_array(), direct.norm() + 100.0));
    }

    #[test]
    fn polynomial_product_evaluates_pointwise_for_real_factor(p in poly(), x in quat(), s in -3.0..3.0f64) {
        let real = QPolynomial::variable().add(&QPolynomial::variable().conj()).scale(0.5 * s);
        let lhs = p.mul(&real).unwrap().eval(x);
        let rhs = p.eval(x).scale(x.x0 * s);
        prop_assert!(close(&lhs.to_array(), &rhs.to_array(), rhs.norm() + 1.0));
    }

    #[test]
    fn polynomial_sum_and_conjugate_evaluate_pointwise(p in poly(), r in poly(), x in quat()) {
        let sum = p.add(&r).eval(x);
        prop_assert!(close(&sum.to_array(), &(p.eval(x) + r.eval(x)).to_array(), sum.norm() + 10.0));
        prop_assert!(close(&p.conj().eval(x).to_array(), &p.eval(x).conj().to_array(), p.eval(x).norm() + 10.0));
    }

    #[test]
    fn printed_expressions_reparse_to_the_same_tree(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (src, _) = common::random_expr(&mut rng, 4, 3);
        let e = parse(&src).unwrap();
        let again = parse(&e.to_string()).unwrap();
        prop_assert_eq!(&again, &e);
        let x = Quaternion::new(0.4, -0.3, 0.8, 0.1);
        let (a, b) = (eval_expr(&e, x).unwrap(), to_polynomial(&e).unwrap().eval(x));
        prop_assert!(close(&a.to_array(), &b.to_array(), a.norm() + 1.0));
    }

    #[test]
    fn octonions_are_alternative(a in oct(), b in oct()) {
        let scale = a.norm() * a.norm() * b.norm();
        prop_assert!(close(&((a * a) * b).0, &(a * (a * b)).0, scale));
        prop_assert!(close(&((b * a) * a).0, &(b * (a * a)).0, scale));
    }

    #[test]
    fn octonion_norm_is_multiplicative(a in oct(), b in oct()) {
        prop_assert!(((a * b).norm() - a.norm() * b.norm()).abs() <= 1e-12 * (a.norm() * b.norm()).max(1.0));
        prop_assert!(close(&(a * b).0, &common::cayley_dickson(a.0, b.0), a.norm() * b.norm()));
    }
}
