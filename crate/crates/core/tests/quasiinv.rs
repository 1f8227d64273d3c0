mod common;

use common::{group, ints, integral_ks, CYCLIC};
use qinv::exactnum::Cyc;
use qinv::polyring::{LocalizedPoly, Monomial, MultiPoly};
use qinv::quasiinv::{
    compute_ak, compute_basis, dunkl_stability_basis, free_generators, is_quasi_invariant_poly, kz_twist,
    poincare_by_formula, poincare_by_membership, tau_quasi_invariants,
};
use qinv::refgroup::{InvariantScope, Multiplicity};

fn x_power(d: u32) -> MultiPoly {
    MultiPoly::monomial(Monomial(vec![d]), Cyc::one())
}

#[test]
fn rank_one_membership_examples() {
    let g = group("cyclic:2");
    let k = ints(&[&[0, 1]]);
    for (d, member) in [(2, true), (1, false), (3, true), (0, true)] {
        assert_eq!(is_quasi_invariant_poly(&g, &x_power(d), &k).expect("membership"), member, "x^{d}");
    }
}

#[test]
fn zero_multiplicity_admits_everything() {
    for spec in ["cyclic:3", "dihedral:3:3", "dihedral:2:1"] {
        let g = group(spec);
        let k = Multiplicity::zero(&g);
        let basis = compute_basis(&g, &k, 6).expect("basis");
        let expected = |d: i64| if g.dim() == 1 { 1 } else { d + 1 };
        for d in 0..=6 {
            assert_eq!(basis.dim(d) as i64, expected(d), "{spec} degree {d}");
        }
        let series = poincare_by_formula(&g, &k, 6).expect("formula");
        assert!((0..=6).all(|d| series.coefficient(d) == expected(d)), "{spec}");
    }
}

#[test]
fn discriminant_powers_in_dihedral_three() {
    let g = group("dihedral:3:3");
    let k = Multiplicity::parse(&g, "1").expect("multiplicity");
    let delta = g.relative_invariant(InvariantScope::All);
    let member = |f: &MultiPoly| is_quasi_invariant_poly(&g, f, &k).expect("membership");
    assert!(!member(&delta));
    assert!(member(&delta.pow(2)));
    assert!(member(&delta.pow(3)));
}

#[test]
fn cyclic_three_dimensions_and_generators() {
    let g = group("cyclic:3");
    let k = ints(&[&[0, 1, 1]]);
    let basis = compute_basis(&g, &k, 8).expect("basis");
    let dims: Vec<usize> = (0..=8).map(|d| basis.dim(d)).collect();
    assert_eq!(dims, [1, 0, 0, 1, 1, 1, 1, 1, 1]);
    let gens = free_generators(&g, &k).expect("generators");
    let mut degrees = gens.degrees();
    degrees.sort_unstable();
    assert_eq!(degrees, [0, 4, 5]);
    let series = poincare_by_formula(&g, &k, 8).expect("formula");
    assert_eq!(series.to_json()["closedForm"]["text"], "(1 + t^4 + t^5) / (1 - t^3)");
}

#[test]
fn expansion_multiplicity_of_rank_one() {
    let g = group("cyclic:2");
    assert_eq!(compute_ak(&g, &ints(&[&[0, 2]])).expect("ak"), ints(&[&[0, 2]]));
    assert_eq!(compute_ak(&g, &ints(&[&[0, 0]])).expect("ak"), ints(&[&[0, 0]]));
}

#[test]
fn cyclic_isotypic_modules_start_at_expected_degree() {
    let g = group("cyclic:3");
    let k = ints(&[&[0, 1, 2]]);
    for (j, start) in [(0, 0), (1, 3), (2, 6)] {
        let tau = g.irrep_by_name(&format!("sigma{j}")).expect("irrep");
        let module = tau_quasi_invariants(&g, tau, &k, 8).expect("module");
        for d in 0..=8 {
            assert_eq!(module.dim(d), usize::from(d >= start), "sigma{j} degree {d}");
        }
    }
}

#[test]
fn cyclic_twists_are_identity() {
    for spec in CYCLIC {
        let g = group(spec);
        for k in integral_ks(&g, 2) {
            let twist = kz_twist(&g, &k).expect("twist");
            assert!(twist.is_identity(), "{spec} {k}");
        }
    }
}

#[test]
fn membership_series_matches_formula_for_symmetric_three() {
    let g = group("symmetric:3");
    for kv in [1, 2] {
        let k = ints(&[&[0, kv]]);
        let by_membership = poincare_by_membership(&compute_basis(&g, &k, 16).expect("basis"));
        assert!(by_membership.agrees_with(&poincare_by_formula(&g, &k, 16).expect("formula")), "k = {kv}");
    }
}

#[test]
fn dunkl_operators_preserve_quasi_invariants() {
    for (spec, rows) in [("cyclic:3", &[&[0i64, 1, 1][..]][..]), ("dihedral:3:3", &[&[0, 1]])] {
        let g = group(spec);
        let basis = compute_basis(&g, &ints(rows), 7).expect("basis");
        assert!(dunkl_stability_basis(&basis, 3).expect("stability").checked > 0, "{spec}");
    }
}

#[test]
fn basis_membership_is_consistent() {
    let g = group("dihedral:2:2");
    let k = ints(&[&[0, 1], &[0, 1]]);
    let basis = compute_basis(&g, &k, 6).expect("basis");
    for d in 0..=6 {
        for f in basis.degree(d) {
            assert!(is_quasi_invariant_poly(&g, f, &k).expect("membership"));
            assert!(basis.contains(d, &LocalizedPoly::from_poly(f.clone(), g.arrangement())));
        }
    }
}
