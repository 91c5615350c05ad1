use std::sync::Arc;

use proptest::prelude::*;

use twistdual::bialgebra::{cybe_residual, DualAlgebra};
use twistdual::commands::setup_r;
use twistdual::lie::LieAlgebraSpec;
use twistdual::presets::Setup;
use twistdual::rep::{cocycle_residual, Representation};
use twistdual::scalar::{Exponents, Param, ParamScalar, Rational, NUM_PARAMS};
use twistdual::uea::{GradingContext, Monomial, UElement, Uea};

fn rational() -> impl Strategy<Value = Rational> {
    (-6i64..=6, 1i64..=4).prop_map(|(n, d)| Rational::new(n, d))
}

/// Polynomials in gamma, xi and zeta with small exponents.
fn scalar() -> impl Strategy<Value = ParamScalar> {
    prop::collection::vec((rational(), 0i16..3, 0i16..3, 0i16..2), 0..4).prop_map(|terms| {
        let mut acc = ParamScalar::zero();
        for (c, g, x, z) in terms {
            let mut e: Exponents = [0; NUM_PARAMS];
            e[Param::Gamma.index()] = g;
            e[Param::Xi.index()] = x;
            e[Param::Zeta.index()] = z;
            acc += &ParamScalar::monomial(e, c);
        }
        acc
    })
}

fn sl3_ctx() -> Arc<Uea> {
    Uea::new(LieAlgebraSpec::sl3_adapted(), GradingContext::new(4))
}

/// Short PBW combinations with constant coefficients.
fn element(ctx: Arc<Uea>) -> impl Strategy<Value = UElement> {
    let n = ctx.dim();
    prop::collection::vec((prop::collection::vec(0u8..2, n), rational()), 1..4).prop_map(move |terms| {
        UElement::from_terms(&ctx, terms.into_iter().map(|(e, c)| (Monomial::from_exponents(&e), ParamScalar::constant(c))))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn scalars_form_a_commutative_ring(a in scalar(), b in scalar(), c in scalar()) {
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert!((&(&a + &b) - &b - &a).is_zero());
    }

    #[test]
    fn rationals_parse_what_they_print(r in rational()) {
        prop_assert_eq!(r.to_string().parse::<Rational>().unwrap(), r);
    }

    #[test]
    fn pbw_products_associate(x in element(sl3_ctx()), y in element(sl3_ctx()), z in element(sl3_ctx())) {
        let l = x.mul(&y).unwrap().mul(&z).unwrap();
        let r = x.mul(&y.mul(&z).unwrap()).unwrap();
        prop_assert!(l.sub(&r).unwrap().is_zero());
    }

    #[test]
    fn primitive_coproduct_is_multiplicative(x in element(sl3_ctx()), y in element(sl3_ctx())) {
        let lhs = x.mul(&y).unwrap().coproduct0();
        let rhs = x.coproduct0().mul(&y.coproduct0()).unwrap();
        prop_assert!(lhs.sub(&rhs).unwrap().is_zero());
    }

    #[test]
    fn fundamental_rep_is_multiplicative(x in element(sl3_ctx()), y in element(sl3_ctx())) {
        let rep = Representation::fundamental(&LieAlgebraSpec::sl3_adapted()).unwrap();
        let lhs = rep.uea_element(&x.mul(&y).unwrap());
        let rhs = rep.uea_element(&x).mul(&rep.uea_element(&y)).unwrap();
        prop_assert!(lhs.sub(&rhs).unwrap().is_zero());
    }

    #[test]
    fn cybe_holds_for_every_rational_gamma(g in rational()) {
        let setup = Setup::sl3_extended_jordanian().with_gamma(Some(g));
        let spec = setup.spec().unwrap();
        let r = setup_r(&setup, &spec).unwrap();
        prop_assert!(cybe_residual(&spec, &r).is_zero());
        prop_assert!(DualAlgebra::from_r(&spec, &r).unwrap().jacobi_residual().is_zero());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(6))]

    #[test]
    fn twist_is_a_cocycle_for_every_rational_gamma(g in rational()) {
        let b = Setup::sl3_extended_jordanian().with_gamma(Some(g)).build(3).unwrap();
        prop_assert!(b.hopf.cocycle_residual().unwrap().is_zero());
        let rep = Representation::fundamental(b.ctx.spec()).unwrap();
        prop_assert!(cocycle_residual(&b.hopf, &rep).unwrap().is_zero());
    }
}
