use proptest::prelude::*;

use uqcn::coeff::{gauss_binomial, Rat, VPoly, VRat};
use uqcn::fock::{enumerate_basis, hw_sector, FockVector};
use uqcn::linalg::{kernel, mat_vec, rank};
use uqcn::oscillator::{apply_mode, ModeOp, OscillatorGram};
use uqcn::roots::RootDatum;
use uqcn::screening::{partition_count, telescoped_kernel_dim, QSeries};
use uqcn::symbolic::{antisymmetrize, MPoly, S3_PERMS};

fn vpoly() -> impl Strategy<Value = VPoly> {
    prop::collection::vec((-12i64..12, -5i64..6), 0..5)
        .prop_map(|ts| VPoly::from_terms(ts.into_iter().map(|(e, c)| (e, Rat::from_int(c))).collect()))
}

fn vrat() -> impl Strategy<Value = VRat> {
    (vpoly(), vpoly()).prop_map(|(n, d)| if d.is_zero() { VRat::from_poly(n) } else { VRat::new(n, d).unwrap() })
}

fn mpoly() -> impl Strategy<Value = MPoly> {
    prop::collection::vec((prop::array::uniform5(0i32..3), -3i64..4), 0..5).prop_map(|ts| {
        ts.into_iter().fold(MPoly::zero(), |acc, (mut e, c)| {
            e[4] -= 1;
            &acc + &MPoly::monomial(VRat::from_int(c), e)
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn vrat_field_laws(a in vrat(), b in vrat(), c in vrat()) {
        prop_assert_eq!(&(&a + &b) * &c, &(&a * &c) + &(&b * &c));
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert!((&(&a - &b) + &b - a.clone()).is_zero());
        if !b.is_zero() {
            prop_assert_eq!(&(&a / &b) * &b, a);
        }
    }

    #[test]
    fn gauss_binomial_is_palindromic(m in 0u32..7, r in 0u32..7) {
        prop_assume!(r <= m);
        let g = gauss_binomial(m, r, 4);
        prop_assert_eq!(g.bar(), g.clone());
        prop_assert_eq!(g, gauss_binomial(m, m - r, 4));
    }

    #[test]
    fn mpoly_ring_laws(a in mpoly(), b in mpoly(), c in mpoly()) {
        prop_assert_eq!(&(&a + &b) * &c, &(&a * &c) + &(&b * &c));
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert!((&a - &a).is_zero());
    }

    #[test]
    fn permutations_are_ring_maps(a in mpoly(), b in mpoly(), k in 0usize..6) {
        let s = S3_PERMS[k].0;
        prop_assert_eq!((&a * &b).permute(s), &a.permute(s) * &b.permute(s));
        // antisymmetrization of a symmetric product vanishes
        let sym = S3_PERMS.iter().fold(MPoly::zero(), |acc, p| &acc + &a.permute(p.0));
        prop_assert!(antisymmetrize(&sym).is_zero());
    }

    #[test]
    fn kernel_vectors_are_killed(rows in prop::collection::vec(prop::collection::vec(-3i64..4, 4), 0..5)) {
        let m: Vec<Vec<VRat>> = rows.iter().map(|r| r.iter().map(|x| VRat::from_int(*x)).collect()).collect();
        let k = kernel(&m, 4);
        prop_assert_eq!(k.len() + rank(&m), 4);
        for v in &k {
            prop_assert!(mat_vec(&m, v).iter().all(|x| x.is_zero()));
        }
    }

    #[test]
    fn telescoping_is_nonnegative(l in -3i64..4, m in 0i64..8) {
        let k = telescoped_kernel_dim(l, m);
        prop_assert!(k >= 0 && k <= partition_count(m));
    }

    #[test]
    fn series_merge_is_commutative(xs in prop::collection::vec((-2i64..3, 0i64..16, -3i64..4), 0..8),
                                   ys in prop::collection::vec((-2i64..3, 0i64..16, -3i64..4), 0..8)) {
        let build = |ts: &[(i64, i64, i64)]| {
            let mut s = QSeries::new(vec![0], 0);
            for (w, p, c) in ts { s.add(vec![*w], *p, *c); }
            s
        };
        let (a, b) = (build(&xs), build(&ys));
        prop_assert_eq!(a.merged(&b), b.merged(&a));
        prop_assert!(a.merged(&b).differences(&b.merged(&a)).is_empty());
    }

    #[test]
    fn creation_operators_commute(n in 1usize..4, i in 1usize..4, j in 1usize..4, m in 1i64..3, l in 1i64..3, fam in 0u8..4) {
        prop_assume!(i <= n && j <= n);
        let d = RootDatum::new(n).unwrap();
        let gram = OscillatorGram::new(&d, 3);
        let op = |node, mode, b: bool| if b { ModeOp::B { node, mode } } else { ModeOp::A { node, mode } };
        let (x, y) = (op(i, -m, fam & 1 == 1), op(j, -l, fam & 2 == 2));
        for s in enumerate_basis(&hw_sector(2, &d).unwrap(), 1) {
            let v = FockVector::basis(s);
            let xy = apply_mode(&x, &apply_mode(&y, &v, &d, &gram), &d, &gram);
            let yx = apply_mode(&y, &apply_mode(&x, &v, &d, &gram), &d, &gram);
            prop_assert_eq!(xy, yx);
        }
    }
}
