mod common;

use std::collections::BTreeSet;
use std::sync::Arc;

use colourings::colouring::{
    canonical_form, enumerate_proper_colourings, symmetric_p4_colouring, Colouring,
    EnumerationError,
};
use colourings::flatclass::{box_walk_deck_group, classify_cube_colouring};
use colourings::gf2::GF2Vector;
use colourings::polytope::{build_box, build_p4};

fn keys(cs: &[Colouring]) -> BTreeSet<Vec<u64>> {
    cs.iter()
        .map(|c| c.colours().iter().map(|x| x.bits()).collect())
        .collect()
}

#[test]
fn cube_classes_by_brute_force() {
    let p = Arc::new(build_box(3).unwrap());
    let mut brute = BTreeSet::new();
    let mut orientable = BTreeSet::new();
    for code in 0..7u64.pow(6) {
        let colours: Vec<GF2Vector> = (0..6)
            .map(|k| GF2Vector::from_bits(3, 1 + code / 7u64.pow(k) % 7).unwrap())
            .collect();
        let c = Colouring::new(p.clone(), 3, colours).unwrap();
        if !c.is_proper() {
            continue;
        }
        let key: Vec<u64> = canonical_form(&c).colours().iter().map(|x| x.bits()).collect();
        if c.is_orientable().is_some() {
            orientable.insert(key.clone());
        }
        brute.insert(key);
    }
    let all = enumerate_proper_colourings(&p, 3, false, None).unwrap();
    assert_eq!(all.len(), brute.len());
    assert_eq!(keys(&all), brute);
    let ori = enumerate_proper_colourings(&p, 3, true, None).unwrap();
    assert_eq!(keys(&ori), orientable);
    assert_eq!(ori.len(), 2);
}

#[test]
fn orientable_cube_counts() {
    let p = build_box(3).unwrap();
    let counts: Vec<usize> = (3..=6)
        .map(|s| enumerate_proper_colourings(&p, s, true, None).unwrap().len())
        .collect();
    assert_eq!(counts, [2, 8, 12, 13]);
    for s in 3..=6 {
        for c in enumerate_proper_colourings(&p, s, true, None).unwrap() {
            let walk = box_walk_deck_group(&c).unwrap();
            assert_eq!(classify_cube_colouring(&c).unwrap().wolf_type(), walk.wolf_type);
        }
    }
}

#[test]
fn p4_needs_four_colours() {
    let (p, _) = build_p4();
    assert!(enumerate_proper_colourings(&p, 3, false, None).unwrap().is_empty());
}

#[test]
fn p4_five_colours_contain_the_symmetric_class() {
    let (p, _) = build_p4();
    let all = enumerate_proper_colourings(&p, 5, true, None).unwrap();
    let target: Vec<u64> = canonical_form(&symmetric_p4_colouring())
        .colours()
        .iter()
        .map(|x| x.bits())
        .collect();
    assert!(keys(&all).contains(&target));
    for c in all.iter().filter(|c| c.image_dim() == 5).take(50) {
        assert_eq!(common::oracle_equivalence(c), Ok(()));
    }
}

#[test]
fn enumeration_cap_keeps_partial_output() {
    let (p, _) = build_p4();
    match enumerate_proper_colourings(&p, 4, false, Some(10)) {
        Err(EnumerationError::CapExceeded { cap, partial }) => {
            assert_eq!(cap, 10);
            assert_eq!(partial.len(), 10);
        }
        other => panic!("expected the cap to trip, got {:?}", other.map(|v| v.len())),
    }
}
