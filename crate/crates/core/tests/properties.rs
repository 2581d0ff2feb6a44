//! Algebraic invariants checked on generated polynomials, rational
//! expressions and forms.

use proptest::prelude::*;

use homvar::forms::{
    contract_total, exterior_d, lie_total, s_single, wedge, Covector, ScalarForm,
};
use homvar::multiindex::MultiIndex;
use homvar::symbolic::{gcd, int, parse_expr, ExprContext, Monomial};
use homvar::vvforms::VectorValuedForm;
use homvar::{JetVar, Poly, RatExpr};

const M: usize = 2;

fn jet_var() -> impl Strategy<Value = JetVar> {
    (1usize..=2, 0u16..=2, 0u16..=1)
        .prop_map(|(alpha, a, b)| JetVar::new(alpha, MultiIndex::from_counts(&[a, b])))
}

fn poly() -> impl Strategy<Value = Poly> {
    let term = (prop::collection::vec(jet_var(), 0..=2), -4i64..=4);
    prop::collection::vec(term, 1..=3).prop_map(|terms| {
        terms.into_iter().fold(Poly::zero(), |acc, (vars, c)| {
            let mono = vars
                .into_iter()
                .fold(Monomial::one(), |m, v| m.mul(&Monomial::var(v)));
            acc.add(&Poly::term(mono, int(c)))
        })
    })
}

fn nonzero_poly() -> impl Strategy<Value = Poly> {
    poly().prop_filter("nonzero", |p| !p.is_zero())
}

fn ratexpr() -> impl Strategy<Value = RatExpr> {
    (poly(), nonzero_poly()).prop_map(|(n, d)| RatExpr::new(n, d).expect("nonzero denominator"))
}

fn form(degree: usize) -> impl Strategy<Value = ScalarForm> {
    let term = (prop::collection::vec(jet_var(), degree), poly());
    prop::collection::vec(term, 1..=3).prop_map(move |terms| {
        let mut w = ScalarForm::zero(degree);
        for (vars, c) in terms {
            let basis = vars.into_iter().map(Covector).collect();
            w.add_assign(&ScalarForm::basis(basis, RatExpr::from_poly(c)));
        }
        w
    })
}

fn sign(degree: usize) -> RatExpr {
    RatExpr::integer(if degree.is_multiple_of(2) { 1 } else { -1 })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn field_axioms(a in ratexpr(), b in ratexpr(), c in ratexpr()) {
        prop_assert_eq!(a.add(&b), b.add(&a));
        prop_assert_eq!(a.mul(&b), b.mul(&a));
        prop_assert_eq!(a.add(&b).add(&c), a.add(&b.add(&c)));
        prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
        prop_assert_eq!(a.mul(&b.add(&c)), a.mul(&b).add(&a.mul(&c)));
        prop_assert!(a.sub(&a).is_zero());
        if !a.is_zero() {
            prop_assert!(a.div(&a).unwrap().is_one());
        }
    }

    #[test]
    fn canonical_form_is_idempotent(a in ratexpr()) {
        let again = RatExpr::new(a.num().clone(), a.den().clone()).unwrap();
        prop_assert_eq!(&again, &a);
        prop_assert!(gcd(a.num(), a.den()).is_constant());
        prop_assert_eq!(a.den().leading_coeff(), int(1));
    }

    #[test]
    fn scaling_numerator_and_denominator(n in poly(), d in nonzero_poly(), f in nonzero_poly()) {
        let a = RatExpr::new(n.clone(), d.clone()).unwrap();
        let b = RatExpr::new(n.mul(&f), d.mul(&f)).unwrap();
        prop_assert_eq!(a, b);
    }

    #[test]
    fn gcd_divides_and_is_maximal(a in nonzero_poly(), b in nonzero_poly(), c in nonzero_poly()) {
        let g = gcd(&a.mul(&c), &b.mul(&c));
        prop_assert!(a.mul(&c).div_exact(&g).is_some());
        prop_assert!(b.mul(&c).div_exact(&g).is_some());
        prop_assert!(g.div_exact(&c).is_some());
    }

    #[test]
    fn partials_commute_and_obey_leibniz(a in ratexpr(), b in ratexpr(), x in jet_var(), y in jet_var()) {
        prop_assert_eq!(a.partial(&x).partial(&y), a.partial(&y).partial(&x));
        let lhs = a.mul(&b).partial(&x);
        let rhs = a.partial(&x).mul(&b).add(&a.mul(&b.partial(&x)));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn parse_print_round_trip(a in ratexpr()) {
        let text = a.to_string();
        let back = parse_expr(&text, &ExprContext::default()).unwrap();
        prop_assert_eq!(&back, &a);
        prop_assert_eq!(back.to_string(), text);
    }

    #[test]
    fn multiindex_arithmetic(a in prop::collection::vec(0u16..4, 3), b in prop::collection::vec(0u16..4, 3)) {
        let (ia, ib) = (MultiIndex::from_counts(&a), MultiIndex::from_counts(&b));
        let sum = ia.add(&ib);
        prop_assert_eq!(sum.len(), ia.len() + ib.len());
        prop_assert_eq!(sum.subtract(&ib).unwrap(), ia);
        prop_assert!(sum.dominates(&ia));
        let round: MultiIndex = sum.to_string().parse().unwrap();
        prop_assert_eq!(round, sum);
    }

    #[test]
    fn wedge_is_graded_commutative(a in form(1), b in form(2)) {
        let ab = wedge(&a, &b);
        let ba = wedge(&b, &a);
        prop_assert_eq!(ab, ba.scale(&sign(2)));
        prop_assert!(wedge(&a, &a).is_zero());
    }

    #[test]
    fn d_is_a_graded_derivation(a in form(1), b in form(1)) {
        let lhs = exterior_d(&wedge(&a, &b));
        let rhs = wedge(&exterior_d(&a), &b).add(&wedge(&a, &exterior_d(&b)).scale(&sign(1)));
        prop_assert_eq!(lhs, rhs);
        prop_assert!(exterior_d(&exterior_d(&a)).is_zero());
    }

    #[test]
    fn total_contraction_is_an_antiderivation(a in form(1), b in form(2), j in 1usize..=M) {
        let lhs = contract_total(j, &wedge(&a, &b)).unwrap();
        let rhs = wedge(&contract_total(j, &a).unwrap(), &b)
            .sub(&wedge(&a, &contract_total(j, &b).unwrap()));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn total_derivative_commutes_with_d(a in form(1), j in 1usize..=M) {
        prop_assert_eq!(exterior_d(&lie_total(j, &a)), lie_total(j, &exterior_d(&a)));
    }

    #[test]
    fn vertical_endomorphism_kills_functions_and_is_nilpotent(a in form(0), i in 1usize..=M) {
        prop_assert!(s_single(i, &a).is_zero());
        let da = exterior_d(&a);
        let mut w = da.clone();
        for _ in 0..=3 {
            w = s_single(i, &w);
        }
        prop_assert!(w.is_zero());
    }

    #[test]
    fn form_json_round_trip(a in form(2)) {
        prop_assert_eq!(ScalarForm::from_json(&a.to_json(), 2).unwrap(), a);
    }

    #[test]
    fn vvform_identities(f in ratexpr(), b in form(1)) {
        let mut phi = VectorValuedForm::zero(M, 1, 1);
        phi.set(&[1], b.clone()).unwrap();
        phi.set(&[2], wedge(&ScalarForm::function(f.clone()), &b)).unwrap();
        prop_assert!(phi.d_total().d_total().is_zero());
        prop_assert!(phi.d().d().is_zero());
        prop_assert_eq!(phi.d().d_total(), phi.d_total().d());
        let back = VectorValuedForm::from_json(&phi.to_json(), M).unwrap();
        prop_assert_eq!(back, phi);
    }
}
