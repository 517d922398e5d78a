use uqcn::coeff::VRat;
use uqcn::symbolic::*;

#[test]
fn serre_identities_hold() {
    assert!(verify_s2().iter().all(|c| c.holds));
    assert!(verify_s3().iter().all(|c| c.holds));
}

#[test]
fn cubic_bracket_outcome() {
    let r = verify_cubic_simplification();
    assert!(r.extreme_w_parts_vanish);
    assert!(r.bracket_at_q1.is_zero());
    // only the coefficient q + q^2 makes the display exact
    assert!(r.s3_coefficient_matches);
    assert!(!r.reference_matches);
    assert!(!r.s3_with_reference_coefficient.holds);
    // the reference discrepancy is (q - q^-1)(q + q^2 - q - q^-1)(w^2 z2 + w z1 z3)
    let c = &(&MPoly::a_pow(1) - &MPoly::a_pow(-1)) * &(&MPoly::a_pow(2) - &MPoly::a_pow(-1));
    let shape = &(&MPoly::w().pow(2) * &MPoly::z(2)) + &(&(&MPoly::w() * &MPoly::z(1)) * &MPoly::z(3));
    assert_eq!(r.discrepancy_reference, &c * &shape);
}

#[test]
fn s3_vanishes_at_omega_only_after_reduction() {
    let p = s3_polynomial(&s3_coefficient());
    assert!(p.mod_cyclotomic3().is_zero());
    // a nonzero polynomial that survives reduction: the Vandermonde-type product itself
    let q = antisymmetrize(&(&(&MPoly::z(1) * &MPoly::z(1)) * &MPoly::z(2)));
    assert!(!q.mod_cyclotomic3().is_zero());
    assert!(!q.subst_a(&VRat::one()).is_zero());
}
