mod common;

use common::group;
use proptest::prelude::*;
use qinv::dunkl::DunklFamily;
use qinv::exactnum::{rat, Cyc};
use qinv::polyring::{Monomial, MultiPoly};
use qinv::quasiinv::{is_quasi_invariant_poly, normal_expansion_test};
use qinv::refgroup::Multiplicity;

const CONDUCTOR: u32 = 12;

fn cyc() -> impl Strategy<Value = Cyc> {
    prop::collection::vec((-4i64..=4, 1i64..=3), 4).prop_map(|coeffs| {
        coeffs.iter().enumerate().fold(Cyc::zero(), |acc, (j, &(n, d))| {
            acc + Cyc::root_of_unity(j as i64 * 5, CONDUCTOR).scale_rational(&rat(n, d))
        })
    })
}

fn poly(nvars: usize, max_deg: u32) -> impl Strategy<Value = MultiPoly> {
    let monomial = prop::collection::vec(0..=max_deg, nvars).prop_map(Monomial);
    prop::collection::vec((monomial, -5i64..=5), 0..5)
        .prop_map(move |terms| MultiPoly::from_terms(nvars, terms.into_iter().map(|(m, c)| (m, Cyc::from_int(c)))))
}

fn homogeneous(nvars: usize, degree: u32) -> impl Strategy<Value = MultiPoly> {
    let monos = Monomial::all_of_degree(nvars, degree);
    prop::collection::vec(-3i64..=3, monos.len())
        .prop_map(move |cs| MultiPoly::from_terms(nvars, monos.clone().into_iter().zip(cs.into_iter().map(Cyc::from_int))))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn cyclotomic_field_axioms(a in cyc(), b in cyc(), c in cyc()) {
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert!((&a - &a).is_zero());
        if !a.is_zero() {
            prop_assert!((&a * &a.inv().unwrap()).is_one());
        }
    }

    #[test]
    fn conjugation_is_a_field_automorphism(a in cyc(), b in cyc()) {
        prop_assert_eq!((&a * &b).conj(), &a.conj() * &b.conj());
        prop_assert_eq!((&a + &b).conj(), &a.conj() + &b.conj());
        prop_assert_eq!(a.conj().conj(), a.clone());
    }

    #[test]
    fn polynomial_ring_laws(f in poly(2, 3), g in poly(2, 3), h in poly(2, 3)) {
        prop_assert_eq!(f.mul(&g), g.mul(&f));
        prop_assert_eq!(f.mul(&g.add(&h)), f.mul(&g).add(&f.mul(&h)));
        prop_assert_eq!(f.mul(&g).mul(&h), f.mul(&g.mul(&h)));
        prop_assert!(f.sub(&f).is_zero());
    }

    #[test]
    fn derivative_obeys_leibniz_rule(f in poly(2, 4), g in poly(2, 4), i in 0usize..2) {
        let lhs = f.mul(&g).derivative(i);
        let rhs = f.derivative(i).mul(&g).add(&f.mul(&g.derivative(i)));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn degree_of_product_is_additive(f in poly(2, 3), g in poly(2, 3)) {
        if let (Some(a), Some(b)) = (f.degree(), g.degree()) {
            prop_assert_eq!(f.mul(&g).degree(), Some(a + b));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn dunkl_operators_commute_at_rational_multiplicity(n1 in -6i64..=6, d1 in 1i64..=4, n2 in -6i64..=6, d2 in 1i64..=4) {
        let g = group("dihedral:2:1");
        let k = Multiplicity::new(vec![vec![rat(0, 1), rat(n1, d1)], vec![rat(0, 1), rat(n2, d2)]], None);
        let family = DunklFamily::new(&g, &k);
        prop_assert!(family.coordinate(0).commutator(family.coordinate(1)).is_zero());
    }

    #[test]
    fn dunkl_operators_lower_degree(f in homogeneous(2, 4), kv in 0i64..=3) {
        let g = group("dihedral:3:3");
        let k = Multiplicity::new(vec![vec![rat(0, 1), rat(kv, 2)]], None);
        let family = DunklFamily::new(&g, &k);
        for i in 0..2 {
            let image = family.coordinate(i).apply_poly(&f);
            let image = image.as_polynomial().expect("polynomial image");
            prop_assert!(image.is_zero() || (image.is_homogeneous() && image.degree() == Some(3)));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn membership_agrees_with_normal_expansion(f in homogeneous(1, 7), k1 in 0i64..=2, k2 in 0i64..=2) {
        let g = group("cyclic:3");
        let k = Multiplicity::from_ints(&[&[0, k1, k2]]);
        prop_assert_eq!(
            is_quasi_invariant_poly(&g, &f, &k).unwrap(),
            normal_expansion_test(&g, &f, &k).unwrap()
        );
    }

    #[test]
    fn membership_agrees_in_rank_two(f in poly(2, 4), k1 in 0i64..=2) {
        let g = group("dihedral:2:2");
        let k = Multiplicity::from_ints(&[&[0, k1], &[0, 1]]);
        prop_assert_eq!(
            is_quasi_invariant_poly(&g, &f, &k).unwrap(),
            normal_expansion_test(&g, &f, &k).unwrap()
        );
    }

    #[test]
    fn quasi_invariants_form_a_ring(f in homogeneous(1, 5), h in homogeneous(1, 4)) {
        let g = group("cyclic:3");
        let k = Multiplicity::from_ints(&[&[0, 1, 1]]);
        let member = |p: &MultiPoly| is_quasi_invariant_poly(&g, p, &k).unwrap();
        if member(&f) && member(&h) {
            prop_assert!(member(&f.mul(&h)));
            prop_assert!(member(&f.add(&h.mul(&MultiPoly::var(0, 1)))));
        }
    }
}
