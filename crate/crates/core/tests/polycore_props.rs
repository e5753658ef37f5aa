use std::sync::Arc;

use proptest::prelude::*;

use nullcone::polycore::{
    buchberger, is_reduced_groebner, normal_form, Field, GbConfig, Ideal, Monomial, MonomialOrder,
    Polynomial, PrimeField, Rationals, Ring,
};

const P: u64 = 101;

fn ring(order: MonomialOrder) -> Arc<Ring<PrimeField>> {
    Ring::new(
        PrimeField::new(P).unwrap(),
        vec!["x".into(), "y".into(), "z".into()],
        order,
    )
    .unwrap()
}

type Terms = Vec<(Vec<u32>, u64)>;

fn terms(max_terms: usize, max_exp: u32) -> impl Strategy<Value = Terms> {
    prop::collection::vec((prop::collection::vec(0..=max_exp, 3), 0..P), 0..=max_terms)
}

fn poly(r: &Arc<Ring<PrimeField>>, t: &Terms) -> Polynomial<PrimeField> {
    Polynomial::from_terms(r, t.iter().map(|(e, c)| (Monomial::new(e.clone()), *c)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn arithmetic_is_a_commutative_ring(a in terms(4, 3), b in terms(4, 3), c in terms(4, 3)) {
        let r = ring(MonomialOrder::Grevlex);
        let (f, g, h) = (poly(&r, &a), poly(&r, &b), poly(&r, &c));
        prop_assert_eq!(f.mul(&g), g.mul(&f));
        prop_assert_eq!(f.mul(&g.add(&h)), f.mul(&g).add(&f.mul(&h)));
        prop_assert_eq!(f.mul(&g).mul(&h), f.mul(&g.mul(&h)));
        prop_assert_eq!(f.add(&g).sub(&g), f.clone());
        prop_assert!(f.sub(&f).is_zero());
    }

    #[test]
    fn evaluation_is_a_homomorphism(a in terms(4, 3), b in terms(4, 3), pt in prop::collection::vec(0..P, 3)) {
        let r = ring(MonomialOrder::Lex);
        let (f, g) = (poly(&r, &a), poly(&r, &b));
        let k = r.field();
        prop_assert_eq!(f.mul(&g).eval(&pt), k.mul(&f.eval(&pt), &g.eval(&pt)));
        prop_assert_eq!(f.add(&g).eval(&pt), k.add(&f.eval(&pt), &g.eval(&pt)));
    }

    #[test]
    fn text_round_trips(a in terms(5, 3)) {
        let r = ring(MonomialOrder::Grevlex);
        let f = poly(&r, &a);
        prop_assert_eq!(Polynomial::parse(&r, &f.to_string()).unwrap(), f);
    }

    #[test]
    fn groebner_basis_is_reduced_and_generates(gens in prop::collection::vec(terms(3, 2), 1..=3), m in terms(2, 1)) {
        let r = ring(MonomialOrder::Grevlex);
        let fs: Vec<_> = gens.iter().map(|t| poly(&r, t)).collect();
        let gb = buchberger(&r, &fs, &GbConfig::default()).unwrap();
        prop_assert!(is_reduced_groebner(&gb));
        for f in &fs {
            prop_assert!(normal_form(f, &gb).unwrap().is_zero());
        }
        let combo = fs.iter().fold(Polynomial::zero(&r), |acc, f| acc.add(&f.mul(&poly(&r, &m))));
        prop_assert!(normal_form(&combo, &gb).unwrap().is_zero());
        let extra = poly(&r, &m);
        let nf = normal_form(&extra, &gb).unwrap();
        prop_assert_eq!(normal_form(&nf, &gb).unwrap(), nf.clone());
        prop_assert!(normal_form(&extra.sub(&nf), &gb).unwrap().is_zero());
    }

    #[test]
    fn ideal_membership_agrees_across_orders(gens in prop::collection::vec(terms(3, 2), 1..=2), m in terms(3, 2)) {
        let grevlex = ring(MonomialOrder::Grevlex);
        let lex = ring(MonomialOrder::Lex);
        let a = Ideal::new(&grevlex, gens.iter().map(|t| poly(&grevlex, t)).collect()).unwrap();
        let b = Ideal::new(&lex, gens.iter().map(|t| poly(&lex, t)).collect()).unwrap();
        prop_assert_eq!(a.contains(&poly(&grevlex, &m)).unwrap(), b.contains(&poly(&lex, &m)).unwrap());
        prop_assert_eq!(a.height().unwrap(), b.height().unwrap());
    }

    #[test]
    fn intersection_lies_in_both_factors(x in 1u32..=3, y in 1u32..=3) {
        let r = Ring::new(Rationals, vec!["x".into(), "y".into()], MonomialOrder::Grevlex).unwrap();
        let a = Ideal::parse(&r, &[&format!("x^{x}")]).unwrap();
        let b = Ideal::parse(&r, &[&format!("y^{y}")]).unwrap();
        let meet = a.intersect(&b).unwrap();
        prop_assert!(a.contains_ideal(&meet).unwrap());
        prop_assert!(b.contains_ideal(&meet).unwrap());
        let product = Polynomial::parse(&r, &format!("x^{x}*y^{y}")).unwrap();
        prop_assert!(meet.contains(&product).unwrap());
    }
}
