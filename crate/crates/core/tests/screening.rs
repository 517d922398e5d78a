use uqcn::fock::hw_sector;
use uqcn::modes::Realization;
use uqcn::screening::*;

#[test]
fn product_side_low_orders() {
    let c = product_character(1, Family2::F12, 2, 3, true);
    assert_eq!(c.coeff(&[0], 0), 1);
    assert_eq!((1..=3).map(|l| c.coeff(&[l], 0) + c.coeff(&[-l], 0)).sum::<i64>(), 0);
    assert_eq!((c.coeff(&[1], 4), c.coeff(&[-1], 4), c.coeff(&[0], 4)), (1, 1, 0));
    let c = product_character(1, Family2::F34, 1, 4, true);
    for k in 0..=4 {
        assert_eq!(c.coeff(&[-k], -1), 1);
        if k > 0 {
            assert_eq!(c.coeff(&[k], -1), 0);
        }
    }
}

#[test]
fn characters_agree_small() {
    for (n, pmax) in [(1, 2), (2, 1)] {
        let real = Realization::trivial(n).unwrap();
        for fam in [Family2::F12, Family2::F34] {
            let c = compare_characters(real.engine(), fam, pmax, 2).unwrap();
            assert!(c.pass, "n={n} {fam:?} {:?}", c.mismatches);
        }
    }
}

#[test]
fn f3_lowest_term_is_its_vacuum() {
    let real = Realization::trivial(2).unwrap();
    let c = compare_characters(real.engine(), Family2::F34, 1, 2).unwrap();
    let low = c.split[0].terms.keys().map(|k| k.1).min().unwrap();
    assert_eq!(low, -2);
    assert_eq!(c.split[0].coeff(&[0, 0], -2), 1);
    // the F4 coset starts one step higher in weight but at the same grade
    assert!(c.split[1].terms.keys().all(|(w, _)| w.iter().sum::<i64>() % 2 != 0));
}

#[test]
fn highest_weight_examples() {
    let real = Realization::trivial(3).unwrap();
    let h1 = check_highest_weight(&real, 1, 1).unwrap();
    assert!(h1.k_exponents.iter().all(|k| k == "0"));
    let h2 = check_highest_weight(&real, 2, 1).unwrap();
    assert_eq!(h2.grade, "-1/2");
    assert!(h2.in_kernel);
    let h3 = check_highest_weight(&real, 3, 1).unwrap();
    assert_eq!(h3.k_exponents[2], "-1/2");
    assert!(h1.pass && h2.pass && h3.pass);
}

#[test]
fn kernels_match_telescoping_rank_three() {
    let real = Realization::trivial(3).unwrap();
    for j in 1..=3 {
        for l in -2..=2 {
            for m in 0..=3 {
                assert_eq!(kernel_dim(real.engine(), j, l, m).unwrap() as i64, telescoped_kernel_dim(l, m), "j={j} l={l} m={m}");
            }
        }
    }
}

#[test]
fn kernel_basis_spans_kernel() {
    let real = Realization::trivial(1).unwrap();
    let kb = kernel_basis(real.engine(), 1, 2, 3).unwrap();
    for (m, vecs) in &kb {
        assert_eq!(vecs.len(), kernel_dim(real.engine(), 1, 2, *m as i64).unwrap());
    }
}

#[test]
fn closure_rank_three_vacuum_sector() {
    let real = Realization::trivial(3).unwrap();
    let c = submodule_closure(&real, &hw_sector(3, real.datum()).unwrap(), 1, 1);
    assert!(c.pass, "{:?}", c.failures);
    assert!(c.kernel_dim > 0);
}

#[test]
fn sign_matrix_rank_three() {
    let real = Realization::trivial(3).unwrap();
    let secs: Vec<_> = (1..=4).map(|i| hw_sector(i, real.datum()).unwrap()).collect();
    let m = q_sign_matrix(&real, &secs, 1, 1);
    assert!(m.pass, "{:?} {:?}", m.plus, m.minus);
    // Q_1 and x_3 share no b-oscillator
    assert_eq!(m.matrix[0][2], Some(1));
    assert_eq!(m.plus[2][2], Some(1));
    // Q_3 commutes with x_2^+ but anticommutes with x_2^-
    assert_eq!((m.plus[2][1], m.minus[2][1], m.matrix[2][1]), (Some(1), Some(-1), None));
}
