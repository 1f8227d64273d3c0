mod common;

use common::{group, ints};
use qinv::baf::{
    apply_diffop_to_exp, construct_baf, default_truncation, phi_checks, uniqueness_check, BafError, ExpPolynomial,
};
use qinv::dunkl::DiffOp;
use qinv::exactnum::Cyc;
use qinv::polyring::{LocalizedPoly, Monomial, MultiPoly};
use qinv::refgroup::Multiplicity;
use qinv::shiftops::dual_fundamental_invariants;

fn factorial(n: i64) -> i64 {
    (1..=n).product()
}

/// Reversed Bessel polynomial in `z = λx`, monic, with alternating signs:
/// coefficient of `z^{m-j}` is `(-1)^j (m+j)! / (j! (m-j)! 2^j)`.
fn bessel_oracle(m: i64) -> MultiPoly {
    MultiPoly::from_terms(
        2,
        (0..=m).map(|j| {
            let c = factorial(m + j) / (factorial(j) * factorial(m - j) * (1 << j));
            let power = u32::try_from(m - j).expect("non-negative");
            (Monomial(vec![power, power]), Cyc::from_int(if j % 2 == 0 { c } else { -c }))
        }),
    )
}

#[test]
fn rank_two_prefactor_matches_bessel_polynomials() {
    let g = group("cyclic:2");
    for m in 0..=4 {
        let b = construct_baf(&g, &ints(&[&[0, m]])).expect("baf");
        assert_eq!(b.prefactor(), &bessel_oracle(m), "k = {m}");
        assert_eq!(b.chain_length, m as usize);
    }
}

#[test]
fn zero_multiplicity_gives_plain_exponential() {
    for spec in ["cyclic:3", "dihedral:2:2", "dihedral:3:3"] {
        let g = group(spec);
        let b = construct_baf(&g, &Multiplicity::zero(&g)).expect("baf");
        assert_eq!(b.prefactor(), &MultiPoly::one(2 * g.dim()), "{spec}");
        let phi = phi_checks(&b, 2, 2).expect("phi");
        assert_eq!(phi.value_at_origin, Cyc::from_int(g.order() as i64), "{spec}");
    }
}

#[test]
fn cyclic_three_leading_term_is_square_of_pairing() {
    let g = group("cyclic:3");
    let b = construct_baf(&g, &ints(&[&[0, 1, 1]])).expect("baf");
    let expected = MultiPoly::monomial(Monomial(vec![2, 2]), Cyc::one());
    assert_eq!(b.leading_term, expected);
    assert_eq!(b.prefactor().homogeneous_part(4), expected);
}

#[test]
fn origin_value_is_nonzero_for_small_multiplicities() {
    let cases: [(&str, &[&[i64]]); 4] = [
        ("cyclic:2", &[&[0, 1]]),
        ("cyclic:2", &[&[0, 2]]),
        ("cyclic:3", &[&[0, 1, 1]]),
        ("dihedral:2:2", &[&[0, 1], &[0, 1]]),
    ];
    for (spec, rows) in cases {
        let g = group(spec);
        let b = construct_baf(&g, &ints(rows)).expect("baf");
        let phi = phi_checks(&b, 4, 4).expect("phi");
        assert!(phi.passed(), "{spec}");
        assert!(!phi.value_at_origin.is_zero(), "{spec}");
    }
}

#[test]
fn uniqueness_holds_for_rank_one() {
    let g = group("cyclic:2");
    for m in 1..=3 {
        let k = ints(&[&[0, m]]);
        let b = construct_baf(&g, &k).expect("baf");
        let report = uniqueness_check(&b, default_truncation(&g, &k)).expect("uniqueness");
        assert!(report.unique && report.agrees, "k = {m}");
    }
}

#[test]
fn rejects_fractional_or_negative_multiplicity() {
    let g = group("cyclic:2");
    for k in ["0,1/2", "0,-1"] {
        let k = Multiplicity::parse(&g, k).expect("parses");
        assert!(matches!(construct_baf(&g, &k), Err(BafError::InvalidMultiplicity)));
    }
}

#[test]
fn derivative_of_exponential_multiplies_by_spectral_variable() {
    let g = group("cyclic:2");
    let phi = ExpPolynomial::exponential(&g);
    let out = apply_diffop_to_exp(&DiffOp::partial(0, g.arrangement()), &phi);
    assert_eq!(out.prefactor.as_polynomial(), Some(&MultiPoly::var(0, 2)));
}

#[test]
fn euler_shift_on_exponential() {
    let g = group("cyclic:2");
    let arr = g.arrangement();
    let mut op = DiffOp::zero(arr);
    op.add_term(Monomial(vec![1]), LocalizedPoly::from_poly(MultiPoly::var(0, 1), arr));
    op.add_term(Monomial(vec![0]), LocalizedPoly::constant(-Cyc::one(), arr));
    let out = apply_diffop_to_exp(&op, &ExpPolynomial::exponential(&g));
    let expected = MultiPoly::from_terms(2, [(Monomial(vec![1, 1]), Cyc::one()), (Monomial(vec![0, 0]), -Cyc::one())]);
    assert_eq!(out.prefactor.as_polynomial(), Some(&expected));
}

#[test]
fn constant_coefficient_operator_acts_by_symbol() {
    let g = group("dihedral:2:2");
    let phi = ExpPolynomial::exponential(&g);
    for p in dual_fundamental_invariants(&g) {
        let op = DiffOp::constant_coefficient(&p, g.arrangement());
        let out = apply_diffop_to_exp(&op, &phi);
        assert_eq!(out.prefactor.as_polynomial(), Some(&p.embed(0, 4)));
    }
}
