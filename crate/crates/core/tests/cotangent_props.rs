use proptest::prelude::*;
use rephom::cotangent::sampling::{diagonal_root_reps, sample_rep};
use rephom::cotangent::{cotangent_complex, cotangent_homology, euler_check, RepPoint};
use rephom::exact::{clear_denominators, snf_oracle, Cyclotomic, Rationals};
use rephom::fox::BraidWord;
use rephom::liegroups::AlgGroup;
use rephom::spaces::{CotangentTemplate, SpaceModel};

fn groups() -> impl Strategy<Value = AlgGroup> {
    prop_oneof![
        Just(AlgGroup::GL(1)),
        Just(AlgGroup::GL(2)),
        Just(AlgGroup::SL(2)),
        Just(AlgGroup::Torus(2)),
        Just(AlgGroup::GL(3)),
    ]
}

fn braids() -> impl Strategy<Value = BraidWord> {
    (2usize..4).prop_flat_map(|n| {
        prop::collection::vec((1..n, any::<bool>()), 1..5).prop_map(move |v| BraidWord::new(n, v).unwrap())
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn surface_euler_identity(genus in 1usize..4, g in groups(), seed in any::<u64>(), index in 0u64..1000) {
        let q = Rationals;
        let x = SpaceModel::surface(genus).unwrap();
        let rho = sample_rep(&q, &x, &g, seed, index).unwrap();
        let check = euler_check(&q, &x, &rho).unwrap();
        prop_assert!(check.pass);
        prop_assert_eq!(check.chi, (1 - x.euler_top().unwrap()) * g.dim() as i64);
    }

    #[test]
    fn surface_h1_at_most_dim_g(genus in 1usize..4, g in groups(), seed in any::<u64>(), index in 0u64..1000) {
        let q = Rationals;
        let x = SpaceModel::surface(genus).unwrap();
        let rho = sample_rep(&q, &x, &g, seed, index).unwrap();
        prop_assert!(cotangent_homology(&q, &x, &rho).unwrap().dim(1) <= g.dim());
    }

    #[test]
    fn cone_homology_matches_snf(genus in 1usize..3, g in groups(), seed in any::<u64>()) {
        let q = Rationals;
        let x = SpaceModel::surface(genus).unwrap();
        let rho = sample_rep(&q, &x, &g, seed, 0).unwrap();
        let c = cotangent_complex(&q, &x, &rho).unwrap();
        let rank = snf_oracle(&clear_denominators(c.differential(1))).len();
        let h = c.homology(&q).betti;
        prop_assert_eq!(h, vec![c.dims()[0] - rank, c.dims()[1] - rank]);
    }

    #[test]
    fn template_dims(genus in 1usize..4, braid in braids(), d in 1usize..9) {
        let x = SpaceModel::surface(genus).unwrap();
        let t = x.build_template().unwrap();
        prop_assert_eq!(t.dims(d), vec![2 * genus * d, d]);
        let n = braid.strands();
        let t = SpaceModel::link(braid).build_template().unwrap();
        let is_link_cone = matches!(t, CotangentTemplate::LinkCone { .. });
        prop_assert!(is_link_cone);
        prop_assert_eq!(t.dims(d), vec![n * d, n * d]);
    }

    #[test]
    fn link_bound_and_zero_euler(braid in braids(), g in groups(), seed in any::<u64>(), index in 0u64..1000) {
        let q = Rationals;
        let n = braid.strands();
        let x = SpaceModel::link(braid);
        let rho = sample_rep(&q, &x, &g, seed, index).unwrap();
        let h = cotangent_homology(&q, &x, &rho).unwrap();
        prop_assert_eq!(h.euler, 0);
        prop_assert_eq!(h.dim(0), h.dim(1));
        prop_assert!(h.dim(1) <= n * g.dim());
    }
}

#[test]
fn lens_pattern_for_all_diagonal_reps() {
    for (p, qs) in [(5u64, vec![1u64, 2]), (5, vec![2, 3, 4]), (4, vec![1, 3]), (3, vec![1, 2, 1, 1])] {
        let m = qs.len();
        let x = SpaceModel::lens(p, qs).unwrap();
        let f = Cyclotomic::new(p);
        for g in [AlgGroup::GL(2), AlgGroup::SL(2), AlgGroup::GL(3)] {
            assert_eq!(x.build_template().unwrap().dims(g.dim()), vec![g.dim(); 2 * m - 1]);
            for gamma in diagonal_root_reps(&f, &g, p).unwrap() {
                let rho = RepPoint::new(g.clone(), vec![gamma]).unwrap();
                let h = cotangent_homology(&f, &x, &rho).unwrap().betti;
                assert_eq!(h.len(), 2 * m - 1);
                assert!(h[2 * m - 2] > 0, "{x} {g}: {h:?}");
                assert!(h[1..2 * m - 2].iter().all(|&b| b == 0), "{x} {g}: {h:?}");
            }
        }
    }
}
