//! Checks shared by the acceptance binary and the property tests. Each
//! returns a description of the first failure.

#![allow(dead_code)]

use std::sync::Arc;

use colourings::colouring::{canonical_form, Colouring};
use colourings::gf2::{orientation_functional, AffineGF2Map, GF2Subspace, GF2Vector};
use colourings::oracle::DevelopingGraph;
use colourings::polytope::CombinatorialPolytope;
use proptest::prelude::*;

pub type Check = Result<(), String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Check {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

pub fn vector(dim: u8) -> impl Strategy<Value = GF2Vector> {
    (0u64..1 << dim).prop_map(move |b| GF2Vector::from_bits(dim, b).unwrap())
}

pub fn nonzero_vector(dim: u8) -> impl Strategy<Value = GF2Vector> {
    (1u64..1 << dim).prop_map(move |b| GF2Vector::from_bits(dim, b).unwrap())
}

pub fn affine_map(dim: u8) -> impl Strategy<Value = AffineGF2Map> {
    (prop::collection::vec(0u64..1 << dim, dim as usize), vector(dim))
        .prop_filter_map("singular", move |(rows, t)| AffineGF2Map::from_rows(dim, rows, t).ok())
}

pub fn spanning_set(dim: u8) -> impl Strategy<Value = Vec<GF2Vector>> {
    prop::collection::vec(vector(dim), 0..=dim as usize + 1)
}

pub fn affine_round_trip(m: &AffineGF2Map, n: &AffineGF2Map, x: &GF2Vector) -> Check {
    let dim = m.dim();
    let inv = m.inverse();
    ensure(m.compose(&inv) == AffineGF2Map::identity(dim), || format!("{m} ∘ inverse"))?;
    ensure(inv.compose(m) == AffineGF2Map::identity(dim), || format!("inverse ∘ {m}"))?;
    ensure(inv.inverse() == *m, || format!("double inverse of {m}"))?;
    ensure(inv.apply(&m.apply(x)) == *x, || format!("{m} does not invert at {x}"))?;
    ensure(m.compose(n).apply(x) == m.apply(&n.apply(x)), || {
        format!("{m} ∘ {n} at {x}")
    })?;
    let back = AffineGF2Map::parse_coordinates(dim, &m.to_string()).map_err(|e| e.to_string())?;
    ensure(back == *m, || format!("display round trip of {m}"))?;
    let split = AffineGF2Map::translation(m.translation_part()).compose(&m.linear_part());
    ensure(split == *m, || format!("translation-linear split of {m}"))
}

pub fn coset_arithmetic(gens: &[GF2Vector], u: &GF2Vector, v: &GF2Vector) -> Check {
    let dim = u.dim();
    let w = GF2Subspace::span(dim, gens).map_err(|e| e.to_string())?;
    let r = |x: &GF2Vector| w.reduce(x).unwrap();
    ensure(r(&(r(u) + r(v))) == r(&(*u + *v)), || format!("reduction is not additive at {u} {v}"))?;
    ensure((r(u) == r(v)) == w.contains(&(*u + *v)), || format!("coset equality at {u} {v}"))?;
    ensure(w.contains(&(r(u) + *u)), || format!("{u} and its reduction differ outside W"))?;
    if let Some(q) = w.quotient_coords(u).unwrap() {
        ensure(q.dim() as usize == dim as usize - w.dim(), || "quotient dimension".into())?;
        ensure(w.lift_quotient_coords(&q).unwrap() == r(u), || format!("lift of {q}"))?;
    }
    let distinct: std::collections::BTreeSet<u64> =
        GF2Vector::all(dim).map(|x| r(&x).bits()).collect();
    ensure(distinct.len() as u128 == w.index(), || {
        format!("{} cosets but index {}", distinct.len(), w.index())
    })?;
    ensure(w.elements().count() == 1 << w.dim(), || "element count".into())?;
    let sub = GF2Subspace::span(dim, &gens[..gens.len() / 2]).unwrap();
    let cosets: std::collections::BTreeSet<u64> =
        w.elements().map(|x| sub.reduce(&x).unwrap().bits()).collect();
    ensure(sub.index_in(&w) == Some(cosets.len() as u128), || "relative index".into())
}

/// Orientability holds exactly when every subset of colours with zero sum
/// has even size.
pub fn orientation_criterion(colours: &[GF2Vector]) -> Check {
    let n = colours.len();
    let dim = colours.first().map_or(1, |c| c.dim());
    let odd_relation = (1u32..1 << n).any(|s| {
        s.count_ones() % 2 == 1 && {
            let mut sum = GF2Vector::zero(dim);
            for (k, c) in colours.iter().enumerate() {
                if s >> k & 1 == 1 {
                    sum += *c;
                }
            }
            sum.is_zero()
        }
    });
    match orientation_functional(colours) {
        Some(f) => {
            ensure(colours.iter().all(|c| f.dot(c)), || format!("functional {f} is not odd"))?;
            ensure(!odd_relation, || "functional found despite an odd relation".into())
        }
        None => ensure(odd_relation, || "no functional but every relation is even".into()),
    }
}

/// The canonical form is constant on orbits of symmetries and `GL(s)`.
pub fn canonical_invariance(c: &Colouring, sym: usize, a: &AffineGF2Map) -> Check {
    let group = c.polytope().symmetry_group();
    let g = &group[sym % group.len()];
    let image = c.pull_back(g).map_colours(&a.linear_part());
    let (x, y) = (canonical_form(c), canonical_form(&image));
    ensure(x.colours() == y.colours(), || {
        format!("canonical forms differ: {:?} vs {:?}", x.colours(), y.colours())
    })?;
    ensure(canonical_form(&x).colours() == x.colours(), || "canonical form is not idempotent".into())
}

pub fn random_colouring(p: &Arc<CombinatorialPolytope>, s: u8, raw: &[u64]) -> Colouring {
    let colours = raw
        .iter()
        .take(p.facet_count())
        .map(|&b| GF2Vector::from_bits(s, 1 + b % ((1 << s) - 1)).unwrap())
        .collect();
    Colouring::new(p.clone(), s, colours).unwrap()
}

/// Formula counts against union-find on the developing graph.
pub fn oracle_equivalence(c: &Colouring) -> Check {
    let dg = DevelopingGraph::build(c).map_err(|e| e.to_string())?;
    let p = c.polytope();
    for f in 0..p.facet_count() {
        let h = c.hypersurface_report(f).map_err(|e| e.to_string())?;
        let comps = dg.hypersurface_components(f).map_err(|e| e.to_string())?;
        ensure(h.lift_count == comps.count as u128, || {
            format!("facet {f}: {} lifts, oracle {}", h.lift_count, comps.count)
        })?;
        let tube = dg.two_sided_by_tube(f).map_err(|e| e.to_string())?;
        ensure(h.two_sided == tube, || format!("facet {f}: two-sidedness"))?;
        let cut = dg.separates_by_cut(&c.colour(f));
        ensure(h.colour_class_separates == cut, || format!("facet {f}: separation"))?;
    }
    for w in 0..p.ideal_vertices.len() {
        let comps = dg.cusp_components(w).map_err(|e| e.to_string())?;
        ensure(c.cusp_count(w) == comps.count as u128, || {
            format!("vertex {w}: {} cusps, oracle {}", c.cusp_count(w), comps.count)
        })?;
    }
    Ok(())
}
