use block_toeplitz::block::{displacement, displacement_reconstruct};
use block_toeplitz::harness::{AlgebraKind, Constraint, Gen};
use block_toeplitz::laws::{single_product_toeplitz_test, vector_identity_side};
use block_toeplitz::matrix::DenseMat;
use block_toeplitz::normality::{defect_sums, normal_defect, normality_criterion};
use block_toeplitz::scalar::GaussianRational;
use block_toeplitz::toeplitz::ToeplitzSpec;
use num_traits::{One, Zero};
use proptest::prelude::*;

fn scalar() -> impl Strategy<Value = GaussianRational> {
    (-30i64..=30, 1i64..=30, -30i64..=30, 1i64..=30)
        .prop_map(|(a, b, c, d)| GaussianRational::from_fractions(a, b, c, d))
}

fn matrix(d: usize) -> impl Strategy<Value = DenseMat> {
    proptest::collection::vec(scalar(), d * d)
        .prop_map(move |v| DenseMat::from_rows(v.chunks(d).map(<[_]>::to_vec).collect()).unwrap())
}

fn kind() -> impl Strategy<Value = AlgebraKind> {
    prop::sample::select(AlgebraKind::ALL.to_vec())
}

fn spec(seed: u64, kind: AlgebraKind, n: usize, d: usize) -> ToeplitzSpec {
    let mut g = Gen::new(seed, 8);
    let alg = g.algebra(kind, d);
    g.spec(&alg, n, &Constraint::None).unwrap()
}

proptest! {
    #[test]
    fn field_axioms(a in scalar(), b in scalar(), c in scalar()) {
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&a - &a, GaussianRational::zero());
        if !a.is_zero() {
            prop_assert_eq!(&a * &a.inv().unwrap(), GaussianRational::one());
        } else {
            prop_assert!(a.inv().is_err());
        }
    }

    #[test]
    fn conjugation_is_an_automorphism(a in scalar(), b in scalar()) {
        prop_assert_eq!((&a * &b).conj(), &a.conj() * &b.conj());
        prop_assert_eq!((&a + &b).conj(), &a.conj() + &b.conj());
        prop_assert_eq!(a.conj().conj(), a.clone());
        prop_assert!((&a * &a.conj()).is_real());
    }

    #[test]
    fn scalar_text_round_trip(a in scalar()) {
        prop_assert_eq!(a.to_string().parse::<GaussianRational>().unwrap(), a.clone());
        let json = serde_json::to_string(&a).unwrap();
        prop_assert_eq!(serde_json::from_str::<GaussianRational>(&json).unwrap(), a);
    }

    #[test]
    fn adjoint_reverses_products(a in matrix(3), b in matrix(3)) {
        prop_assert_eq!((&a * &b).adjoint(), &b.adjoint() * &a.adjoint());
    }

    #[test]
    fn spec_round_trips(seed in any::<u64>(), k in kind(), n in 1usize..=5, d in 1usize..=3) {
        let s = spec(seed, k, n, d);
        prop_assert_eq!(ToeplitzSpec::recognize(&s.build(), None), Some(s.clone()));
        let json = serde_json::to_string(&s).unwrap();
        prop_assert_eq!(serde_json::from_str::<ToeplitzSpec>(&json).unwrap(), s.clone());
        prop_assert_eq!(s.adjoint().build(), s.build().adjoint());
    }

    #[test]
    fn displacement_inverts(seed in any::<u64>(), n in 1usize..=5, d in 1usize..=3) {
        let m = Gen::new(seed, 8).block_matrix(n, d);
        prop_assert_eq!(displacement_reconstruct(&displacement(&m)), m);
    }

    #[test]
    fn product_test_is_symmetric(seed in any::<u64>(), k in kind(), n in 2usize..=4, d in 1usize..=2) {
        let (a, b) = (spec(seed, k, n, d), spec(seed ^ 1, k, n, d));
        prop_assert_eq!(
            single_product_toeplitz_test(&a, &b).unwrap(),
            single_product_toeplitz_test(&b, &a).unwrap()
        );
        let side = vector_identity_side(&a, &b).unwrap();
        prop_assert!((0..n).all(|k| side.block(0, k).is_zero() && side.block(k, 0).is_zero()));
    }

    #[test]
    fn normality_views_agree(seed in any::<u64>(), k in kind(), n in 2usize..=4, d in 1usize..=2) {
        let s = spec(seed, k, n, d);
        let r = normality_criterion(&s);
        prop_assert!(r.consistent());
        prop_assert_eq!(defect_sums(&s.build()).all_zero(), normal_defect(&s.build()).is_zero());
    }
}
