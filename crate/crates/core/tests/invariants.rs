use proptest::prelude::*;

use diamond_core::geninv::pinv;
use diamond_core::matcore::format::{matrix_to_string, parse_matrix};
use diamond_core::orders::corpus::pairs;
use diamond_core::orders::{gen_diamond_pair, leq_diamond, leq_diamond_dagger, leq_star};
use diamond_core::preservers::make_canonical;
use diamond_core::{approx_eq, rank, sample, CMat, SampleKind, Tol};

fn kind(tag: u8, r: usize) -> SampleKind {
    match tag % 6 {
        0 => SampleKind::Ginibre,
        1 => SampleKind::Rank(r),
        2 => SampleKind::Hermitian,
        3 => SampleKind::Projection(r),
        4 => SampleKind::Unitary,
        _ => SampleKind::PartialIsometry(r),
    }
}

prop_compose! {
    fn matrix()(n in 1usize..=5, tag in any::<u8>(), r in 0usize..=5, seed in any::<u64>()) -> CMat {
        sample(kind(tag, r.min(n)), n, seed).unwrap()
    }
}

fn loose() -> Tol {
    Tol::new(1e-7, 1e-7, 1e-12)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn rank_is_adjoint_invariant(a in matrix()) {
        let tol = Tol::default();
        prop_assert_eq!(rank(&a, &tol).unwrap(), rank(&a.adjoint(), &tol).unwrap());
    }

    #[test]
    fn approx_eq_is_symmetric(a in matrix(), seed in any::<u64>(), e in 0i32..14) {
        let tol = Tol::default();
        let g = sample(SampleKind::Ginibre, a.rows(), seed).unwrap();
        let b = &a + &g.scale_real(10f64.powi(-e));
        prop_assert_eq!(approx_eq(&a, &b, &tol).unwrap(), approx_eq(&b, &a, &tol).unwrap());
    }

    #[test]
    fn pinv_is_an_involution(a in matrix()) {
        let tol = Tol::default();
        let back = pinv(&pinv(&a, &tol).unwrap(), &tol).unwrap();
        prop_assert!(approx_eq(&back, &a, &loose()).unwrap());
    }

    #[test]
    fn pinv_commutes_with_adjoint(a in matrix()) {
        let tol = Tol::default();
        let x = pinv(&a.adjoint(), &tol).unwrap();
        let y = pinv(&a, &tol).unwrap().adjoint();
        prop_assert!(approx_eq(&x, &y, &loose()).unwrap());
    }

    #[test]
    fn diamond_is_reflexive(a in matrix()) {
        prop_assert!(leq_diamond(&a, &a, &Tol::default()).unwrap().holds());
    }

    #[test]
    fn generated_pairs_are_related_both_routes(n in 1usize..=6, seed in any::<u64>()) {
        let tol = Tol::default();
        let (a, b) = gen_diamond_pair(n, seed).unwrap();
        prop_assert!(leq_diamond(&a, &b, &tol).unwrap().holds());
        prop_assert!(leq_diamond_dagger(&a, &b, &tol).unwrap().holds());
    }

    #[test]
    fn diamond_passes_to_adjoints(n in 1usize..=6, seed in any::<u64>()) {
        let tol = Tol::default();
        let (a, b) = gen_diamond_pair(n, seed).unwrap();
        prop_assert!(leq_diamond(&a.adjoint(), &b.adjoint(), &tol).unwrap().holds());
    }

    #[test]
    fn star_implies_diamond(n in 1usize..=5, seed in any::<u64>()) {
        let tol = Tol::default();
        for (a, b) in pairs(n, 14, seed).unwrap() {
            if leq_star(&a, &b, &tol).unwrap().holds() {
                prop_assert!(leq_diamond(&a, &b, &tol).unwrap().holds());
            }
        }
    }

    #[test]
    fn unitary_similarity_keeps_verdicts(n in 1usize..=5, seed in any::<u64>()) {
        let tol = Tol::default();
        let u = sample(SampleKind::Unitary, n, seed ^ 1).unwrap();
        for (a, b) in pairs(n, 14, seed).unwrap() {
            let (ua, ub) = (&(&u * &a) * &u.adjoint(), &(&u * &b) * &u.adjoint());
            prop_assert_eq!(
                leq_diamond(&a, &b, &tol).unwrap().verdict,
                leq_diamond(&ua, &ub, &tol).unwrap().verdict
            );
        }
    }

    #[test]
    fn canonical_map_matches_formula(
        n in 1usize..=4, seed in any::<u64>(), lambda in 0.1f64..10.0, transpose in any::<bool>()
    ) {
        let u = sample(SampleKind::Unitary, n, seed).unwrap();
        let v = sample(SampleKind::Unitary, n, seed ^ 7).unwrap();
        let x = sample(SampleKind::Ginibre, n, seed ^ 9).unwrap();
        let t = make_canonical(lambda, &u, &v, transpose).unwrap();
        let inner = if transpose { x.transpose() } else { x.clone() };
        let want = (&(&u * &inner) * &v).scale_real(lambda);
        prop_assert!((&t.apply(&x).unwrap() - &want).fro_norm() <= 1e-12 * want.fro_norm().max(1.0));
    }

    #[test]
    fn matrix_text_round_trip(a in matrix()) {
        let back = parse_matrix(&matrix_to_string(&a)).unwrap().into_dense();
        prop_assert_eq!(back, a);
    }
}
