mod common;

use std::sync::Arc;

use colourings::gf2::{AffineGF2Map, GF2Vector};
use colourings::polytope::{build_box, build_p4};
use common::*;
use proptest::prelude::*;

proptest! {
    #[test]
    fn affine_maps_round_trip(
        (m, n, x) in (1u8..=8).prop_flat_map(|d| (affine_map(d), affine_map(d), vector(d)))
    ) {
        prop_assert_eq!(affine_round_trip(&m, &n, &x), Ok(()));
    }

    #[test]
    fn cosets_behave(
        (gens, u, v) in (1u8..=8).prop_flat_map(|d| (spanning_set(d), vector(d), vector(d)))
    ) {
        prop_assert_eq!(coset_arithmetic(&gens, &u, &v), Ok(()));
    }

    #[test]
    fn orientation_matches_odd_subsets(
        colours in (1u8..=6).prop_flat_map(|d| prop::collection::vec(nonzero_vector(d), 1..=10))
    ) {
        prop_assert_eq!(orientation_criterion(&colours), Ok(()));
    }

    #[test]
    fn canonical_form_box3(
        raw in prop::collection::vec(any::<u64>(), 6),
        sym in any::<usize>(),
        a in affine_map(4),
    ) {
        let p = Arc::new(build_box(3).unwrap());
        let c = random_colouring(&p, 4, &raw);
        prop_assert_eq!(canonical_invariance(&c, sym, &a), Ok(()));
    }

    #[test]
    fn canonical_form_p4(
        raw in prop::collection::vec(any::<u64>(), 10),
        sym in any::<usize>(),
        a in affine_map(5),
    ) {
        let p = Arc::new(build_p4().0);
        let c = random_colouring(&p, 5, &raw);
        prop_assert_eq!(canonical_invariance(&c, sym, &a), Ok(()));
    }
}

#[test]
fn every_affine_map_of_the_plane() {
    let maps: Vec<AffineGF2Map> = (0..4u64)
        .flat_map(|r0| (0..4u64).flat_map(move |r1| (0..4u64).map(move |t| (r0, r1, t))))
        .filter_map(|(r0, r1, t)| {
            AffineGF2Map::from_rows(2, vec![r0, r1], GF2Vector::from_bits(2, t).unwrap()).ok()
        })
        .collect();
    assert_eq!(maps.len(), 24);
    for m in &maps {
        for n in &maps {
            for x in GF2Vector::all(2) {
                assert_eq!(affine_round_trip(m, n, &x), Ok(()));
            }
        }
    }
}

#[test]
fn every_subspace_of_three_space() {
    let all: Vec<GF2Vector> = GF2Vector::all(3).collect();
    for mask in 0u32..256 {
        let gens: Vec<GF2Vector> = (0..8).filter(|k| mask >> k & 1 == 1).map(|k| all[k]).collect();
        for u in &all {
            for v in &all {
                assert_eq!(coset_arithmetic(&gens, u, v), Ok(()));
            }
        }
    }
}

#[test]
fn every_short_colour_list_in_three_space() {
    let nonzero: Vec<GF2Vector> = GF2Vector::all(3).skip(1).collect();
    let mut lists: Vec<Vec<GF2Vector>> = vec![Vec::new()];
    for _ in 0..4 {
        lists = lists
            .iter()
            .flat_map(|l| {
                nonzero.iter().map(move |c| {
                    let mut l = l.clone();
                    l.push(*c);
                    l
                })
            })
            .collect();
        for l in &lists {
            assert_eq!(orientation_criterion(l), Ok(()));
        }
    }
}
