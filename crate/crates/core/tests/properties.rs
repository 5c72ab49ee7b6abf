mod common;

use proptest::prelude::*;

use common::*;
use lattice_simplex::build_delta_q;
use lattice_simplex::ehrhart::hstar_by_interpolation;
use lattice_simplex::hstar;
use lattice_simplex::idp::is_integrally_closed;
use lattice_simplex::linalg::lattice_index;
use lattice_simplex::weights::{satisfies_condition, sample_random_weights};

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn smith_form_is_a_divisibility_chain(m in small_matrix()) {
        prop_assert_eq!(check_smith(&m), Ok(()));
    }

    #[test]
    fn symmetric_unimodal_products_stay_symmetric_unimodal(
        a in palindromic_unimodal(),
        b in palindromic_unimodal(),
    ) {
        prop_assert_eq!(check_stanley(&a, &b), Ok(()));
    }

    #[test]
    fn composition_round_trips((p, q, i) in free_sum_input(2..=4)) {
        prop_assert_eq!(check_round_trip(&p, &q, i), Ok(()));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn parallelepiped_points_match_box_scan(q in admissible_weights(2..=4)) {
        let s = build_delta_q(&q).unwrap();
        prop_assert_eq!(check_fpp(&s), Ok(()));
    }

    #[test]
    fn hstar_routes_agree(q in admissible_weights(2..=4)) {
        let s = build_delta_q(&q).unwrap();
        let h = hstar(&s).unwrap();
        prop_assert_eq!(&h, &hstar_by_interpolation(&s).unwrap());
        prop_assert_eq!(h.coeffs().to_vec(), box_hstar(&s));
    }

    #[test]
    fn free_sums_multiply_and_preserve((p, q, i) in free_sum_input(2..=4)) {
        prop_assert_eq!(check_free_sum(&p, &q, i), Ok(()));
    }

    #[test]
    fn closure_matches_definition(q in admissible_weights(2..=4)) {
        let s = build_delta_q(&q).unwrap();
        prop_assert_eq!(is_integrally_closed(&s).unwrap().closed, brute_force_closed(&s));
    }

    #[test]
    fn delta_q_is_reflexive_and_palindromic(q in admissible_weights(2..=5)) {
        let s = build_delta_q(&q).unwrap();
        prop_assert_eq!(check_hibi(&s), Ok(()));
        prop_assert!(hstar(&s).unwrap().is_palindromic());
    }

    #[test]
    fn sampled_weights_are_admissible(dim in 1usize..=7, seed in any::<u64>()) {
        for q in sample_random_weights(dim, 4, seed) {
            prop_assert_eq!(q.len(), dim + 1);
            prop_assert!(satisfies_condition(&q), "{}", q);
        }
    }

    #[test]
    fn arbitrary_simplices_agree_with_oracles(s in small_simplex()) {
        prop_assert_eq!(check_fpp(&s), Ok(()));
        prop_assert_eq!(hstar(&s).unwrap(), hstar_by_interpolation(&s).unwrap());
        prop_assert_eq!(is_integrally_closed(&s).unwrap().closed, brute_force_closed(&s));
        if s.origin_in_interior() {
            prop_assert_eq!(check_hibi(&s), Ok(()));
        }
    }

    #[test]
    fn reeve_index_is_its_height(h in 1i64..=12) {
        let r = lattice_simplex::LatticeSimplex::reeve(h).unwrap();
        let v = r.vertices();
        let diffs: Vec<_> = v[1..].iter().map(|w| w.iter().zip(&v[0]).map(|(a, b)| a - b).collect()).collect();
        prop_assert_eq!(
            lattice_index(&diffs).unwrap(),
            lattice_simplex::linalg::LatticeIndex::Finite(h.into())
        );
    }
}

#[test]
fn enumeration_matches_sum_scan() {
    use lattice_simplex::weights::enumerate_reduced_weights;
    for len in 2..=5 {
        let ours: Vec<Vec<u64>> = enumerate_reduced_weights(len - 1)
            .iter()
            .map(|w| w.entries().iter().map(|x| x.try_into().unwrap()).collect())
            .collect();
        let mut ours = ours;
        ours.sort();
        assert_eq!(ours, reduced_weights_by_sums(len), "length {len}");
    }
    assert_eq!(reduced_weights_by_sums(5).len(), 147);
}
