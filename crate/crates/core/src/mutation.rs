//! Cutting the symmetric P4 manifold along two disjoint facet hypersurfaces
//! and regluing each cut by a self-isometry of the hypersurface.
//!
//! The cusp sections of the cut manifold are unions of layers: a layer is a
//! coset of the span of the four square colours at an ideal vertex, one
//! unit thick in the direction normal to the cut. K5 vertices are 0-based
//! internally and 1-based in every label and file.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::Arc;

use num_rational::Ratio;
use thiserror::Error;

use crate::colouring::{symmetric_p4_colouring, Colouring, ColouringError};
use crate::flatclass::{
    box_walk_deck_group, realise_label, DeckGroup, EuclideanIsometry, FlatError, IntLattice,
    WolfType,
};
use crate::gf2::{AffineGF2Map, GF2Subspace, GF2Vector, Gf2Error};
use crate::isometry::ColouredIsometry;
use crate::oracle::{DevelopingGraph, OracleError, UnionFind};
use crate::polytope::{self, build_box, build_p4, K5Encoding, Permutation, PolytopeError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MutationError {
    #[error(transparent)]
    Colouring(#[from] ColouringError),
    #[error(transparent)]
    Polytope(#[from] PolytopeError),
    #[error(transparent)]
    Gf2(#[from] Gf2Error),
    #[error(transparent)]
    Oracle(#[from] OracleError),
    #[error(transparent)]
    Flat(#[from] FlatError),
    #[error("mutations are defined for the symmetric P4 colouring only")]
    NotSymmetric,
    #[error("facets {0} and {1} are not disjoint")]
    FacetsNotDisjoint(String, String),
    #[error("facet {0} needs exactly one pairing")]
    Unpaired(String),
    #[error("permutation {perm} does not fix facet {facet}")]
    DoesNotFixFacet { facet: String, perm: String },
    #[error("pairing of facet {0} reverses the orientation of its hypersurface")]
    NotOrientationPreserving(String),
    #[error("vertex {0} carries no long cusp piece")]
    NotLongCusp(usize),
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("the walk through the cusp pieces does not close up")]
    OpenWalk,
    #[error("the monodromy does not preserve the starting slice")]
    SliceNotPreserved,
    #[error("parity bookkeeping and the cut oracle disagree on {0}")]
    BoundaryMismatch(String),
}

fn facet_id(f: usize) -> String {
    let (p, _) = build_p4();
    p.ids[f].clone()
}

fn endpoints(f: usize) -> (usize, usize) {
    K5Encoding::default().edges[f]
}

fn unit_mask(f: usize) -> GF2Vector {
    let (i, j) = endpoints(f);
    GF2Vector::from_bits(5, (1 << i) | (1 << j)).expect("five coordinates")
}

/// `+` or `-`: the side of a cut, or the cusp containing the root copy.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Side {
    Plus,
    Minus,
}

impl Side {
    fn of(bit: bool) -> Side {
        if bit {
            Side::Minus
        } else {
            Side::Plus
        }
    }

    pub fn flip(self) -> Side {
        match self {
            Side::Plus => Side::Minus,
            Side::Minus => Side::Plus,
        }
    }
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Side::Plus => "+",
            Side::Minus => "-",
        })
    }
}

/// A boundary component `H_k^±` of the cut manifold, `k` in `{1, 2}`
/// stored as `0` or `1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Boundary {
    pub hypersurface: usize,
    pub side: Side,
}

impl fmt::Display for Boundary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "H{}{}", self.hypersurface + 1, self.side)
    }
}

/// A self-isometry of a facet hypersurface: a K5 vertex permutation fixing
/// the facet, followed by a translation whose class modulo the facet
/// colour is what matters.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Pairing {
    pub facet: usize,
    pub perm: Permutation,
    pub translation: GF2Vector,
}

impl Pairing {
    pub fn new(facet: usize, perm: Permutation, translation: GF2Vector) -> Self {
        Self {
            facet,
            perm,
            translation,
        }
    }

    pub fn identity(facet: usize) -> Self {
        Self::new(facet, Permutation::identity(5), GF2Vector::zero(5))
    }

    /// The pairing `i ∘ self ∘ i^{-1}` on the facet `i(F)`.
    pub fn conjugate(&self, i: &Permutation) -> Pairing {
        let enc = K5Encoding::default();
        let lin = AffineGF2Map::permutation(i.images());
        Pairing {
            facet: enc.symmetry(i).apply(self.facet),
            perm: i.compose(&self.perm).compose(&i.inverse()),
            translation: lin.apply(&self.translation),
        }
    }

    fn fixes_facet(&self) -> bool {
        let (i, j) = endpoints(self.facet);
        let (a, b) = (self.perm.apply(i), self.perm.apply(j));
        (a, b) == (i, j) || (a, b) == (j, i)
    }

    /// Orientation character of the isometry on its hypersurface: the
    /// permutation sign times the parity of dart colours in the
    /// translation.
    pub fn restriction_sign(&self) -> i8 {
        if unit_mask(self.facet).dot(&self.translation) {
            -self.perm.sign()
        } else {
            self.perm.sign()
        }
    }

    /// The translation class in quotient coordinates modulo the facet
    /// colour.
    pub fn quotient_translation(&self) -> GF2Vector {
        let by = GF2Subspace::span(5, &[K5Encoding::default().label(self.facet)]).unwrap();
        by.quotient_coords(&self.translation)
            .unwrap()
            .expect("nontrivial quotient")
    }
}

/// Extends a hypersurface isometry to the coloured isometry of the whole
/// manifold that reverses orientation.
pub fn lift_pairing(p: &Pairing) -> Result<ColouredIsometry, MutationError> {
    if !p.fixes_facet() {
        return Err(MutationError::DoesNotFixFacet {
            facet: facet_id(p.facet),
            perm: p.perm.to_string(),
        });
    }
    let lambda = K5Encoding::default().label(p.facet);
    let t = [p.translation, p.translation + lambda]
        .into_iter()
        .find(|t| (p.perm.sign() as i32) * if t.weight() % 2 == 1 { -1 } else { 1 } == -1)
        .expect("the facet colour has odd weight");
    Ok(ColouredIsometry::from_vertex_perm(&p.perm, t))
}

/// Two disjoint cut facets and a pairing for each.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MutationSpec {
    pub facets: [usize; 2],
    pub pairings: [Pairing; 2],
}

impl MutationSpec {
    pub fn new(facets: [usize; 2], pairings: [Pairing; 2]) -> Result<Self, MutationError> {
        let (a, b) = (endpoints(facets[0]), endpoints(facets[1]));
        if a.0 == b.0 || a.0 == b.1 || a.1 == b.0 || a.1 == b.1 {
            return Err(MutationError::FacetsNotDisjoint(
                facet_id(facets[0]),
                facet_id(facets[1]),
            ));
        }
        for (k, p) in pairings.iter().enumerate() {
            if p.facet != facets[k] {
                return Err(MutationError::Unpaired(facet_id(facets[k])));
            }
            if !p.fixes_facet() {
                return Err(MutationError::DoesNotFixFacet {
                    facet: facet_id(p.facet),
                    perm: p.perm.to_string(),
                });
            }
            if p.restriction_sign() != 1 {
                return Err(MutationError::NotOrientationPreserving(facet_id(p.facet)));
            }
        }
        Ok(Self { facets, pairings })
    }

    /// Identity pairings: regluing recovers the original manifold.
    pub fn identity(f1: usize, f2: usize) -> Result<Self, MutationError> {
        Self::new([f1, f2], [Pairing::identity(f1), Pairing::identity(f2)])
    }

    fn standard_cut() -> (K5Encoding, usize, usize) {
        let enc = K5Encoding::default();
        let (f1, f2) = (enc.facet1(4, 5), enc.facet1(1, 2));
        (enc, f1, f2)
    }

    fn phi1(f1: usize) -> Pairing {
        Pairing::new(
            f1,
            Permutation::parse_cycles(5, "(123)(45)").unwrap(),
            "01101".parse().unwrap(),
        )
    }

    /// Cut along `45` and `12`; a rotation with a translation on the
    /// first hypersurface and a three-cycle on the second.
    pub fn scenario_x() -> Self {
        let (_, f1, f2) = Self::standard_cut();
        let phi2 = Pairing::new(f2, Permutation::parse_cycles(5, "(345)").unwrap(), GF2Vector::zero(5));
        Self::new([f1, f2], [Self::phi1(f1), phi2]).expect("valid scenario")
    }

    /// Cut along `45` and `12`; the second pairing is the first conjugated
    /// by the involution `(14)(25)` exchanging the two facets.
    pub fn scenario_y() -> Self {
        let (_, f1, f2) = Self::standard_cut();
        let i = Permutation::parse_cycles(5, "(14)(25)").unwrap();
        let phi1 = Self::phi1(f1);
        let phi2 = phi1.conjugate(&i);
        Self::new([f1, f2], [phi1, phi2]).expect("valid scenario")
    }

    pub fn scenario(name: &str) -> Option<Self> {
        match name {
            "X" | "x" => Some(Self::scenario_x()),
            "Y" | "y" => Some(Self::scenario_y()),
            _ => None,
        }
    }

    /// The K5 vertex missed by both cut facets.
    pub fn shared_vertex(&self) -> usize {
        let (a, b) = (endpoints(self.facets[0]), endpoints(self.facets[1]));
        (0..5)
            .find(|&v| v != a.0 && v != a.1 && v != b.0 && v != b.1)
            .expect("disjoint edges miss one vertex")
    }

    /// Parses `cut <id> <id>` followed by one
    /// `pairing <id> perm=<cycles> trans=<bits>` line per cut facet.
    /// `trans` is either four quotient coordinates or a full vector.
    pub fn parse(text: &str) -> Result<Self, MutationError> {
        let (p, _) = build_p4();
        let mut cut: Option<(usize, [usize; 2])> = None;
        let mut pairings: Vec<(usize, Pairing)> = Vec::new();
        for (n, raw) in text.lines().enumerate() {
            let line = n + 1;
            let err = |message: String| MutationError::Parse { line, message };
            let body = raw.split('#').next().unwrap_or("").trim();
            if body.is_empty() {
                continue;
            }
            let words: Vec<&str> = body.split_whitespace().collect();
            let facet = |id: &str| p.facet_index(id).map_err(|e| err(e.to_string()));
            match words[0] {
                "cut" => {
                    if words.len() != 3 {
                        return Err(err("expected `cut <facet> <facet>`".into()));
                    }
                    if cut.is_some() {
                        return Err(err("duplicate cut line".into()));
                    }
                    let pair = [facet(words[1])?, facet(words[2])?];
                    let (a, b) = (endpoints(pair[0]), endpoints(pair[1]));
                    if a.0 == b.0 || a.0 == b.1 || a.1 == b.0 || a.1 == b.1 {
                        return Err(err(format!("facets {} and {} are not disjoint", words[1], words[2])));
                    }
                    cut = Some((line, pair));
                }
                "pairing" => {
                    if words.len() < 2 {
                        return Err(err("expected `pairing <facet> perm=.. trans=..`".into()));
                    }
                    let f = facet(words[1])?;
                    let mut perm = Permutation::identity(5);
                    let mut trans = GF2Vector::zero(5);
                    // a cycle string may contain spaces, so rejoin the tail
                    let tail = words[2..].join(" ");
                    let mut rest = tail.as_str();
                    while !rest.is_empty() {
                        let (key, after) = rest
                            .split_once('=')
                            .ok_or_else(|| err(format!("expected key=value, found `{rest}`")))?;
                        let end = after.find(" perm=").or_else(|| after.find(" trans="));
                        let (value, next) = match end {
                            Some(e) => (&after[..e], after[e + 1..].trim_start()),
                            None => (after, ""),
                        };
                        match key.trim() {
                            "perm" => {
                                perm = Permutation::parse_cycles(5, value.trim())
                                    .map_err(|e| err(e.to_string()))?
                            }
                            "trans" => {
                                let v: GF2Vector =
                                    value.trim().parse().map_err(|e: Gf2Error| err(e.to_string()))?;
                                trans = match v.dim() {
                                    5 => v,
                                    4 => GF2Subspace::span(5, &[K5Encoding::default().label(f)])?
                                        .lift_quotient_coords(&v)?,
                                    d => {
                                        return Err(err(format!(
                                            "translation has {d} bits, expected 4 or 5"
                                        )))
                                    }
                                };
                            }
                            other => return Err(err(format!("unknown key `{other}`"))),
                        }
                        rest = next;
                    }
                    pairings.push((line, Pairing::new(f, perm, trans)));
                }
                other => return Err(err(format!("unknown directive `{other}`"))),
            }
        }
        let (cut_line, facets) = cut.ok_or(MutationError::Parse {
            line: text.lines().count().max(1),
            message: "missing cut line".into(),
        })?;
        let mut chosen: [Option<Pairing>; 2] = [None, None];
        for (line, pr) in pairings {
            let k = facets.iter().position(|&f| f == pr.facet).ok_or(MutationError::Parse {
                line,
                message: format!("facet {} is not cut", facet_id(pr.facet)),
            })?;
            if chosen[k].is_some() {
                return Err(MutationError::Parse {
                    line,
                    message: format!("second pairing for facet {}", facet_id(pr.facet)),
                });
            }
            chosen[k] = Some(pr);
        }
        let [a, b] = chosen;
        let a = a.ok_or_else(|| MutationError::Unpaired(facet_id(facets[0])))?;
        let b = b.ok_or_else(|| MutationError::Unpaired(facet_id(facets[1])))?;
        Self::new(facets, [a, b]).map_err(|e| match e {
            MutationError::FacetsNotDisjoint(..) => MutationError::Parse {
                line: cut_line,
                message: e.to_string(),
            },
            other => other,
        })
    }

    pub fn to_file_string(&self) -> String {
        let mut out = format!("cut {} {}\n", facet_id(self.facets[0]), facet_id(self.facets[1]));
        for p in &self.pairings {
            out.push_str(&format!(
                "pairing {} perm={} trans={}\n",
                facet_id(p.facet),
                p.perm,
                p.quotient_translation()
            ));
        }
        out
    }
}

/// A coset `base + direction` in the space of copies.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AffineSlice {
    pub base: GF2Vector,
    pub direction: GF2Subspace,
}

impl AffineSlice {
    pub fn contains(&self, v: &GF2Vector) -> bool {
        self.direction.contains(&(*v + self.base))
    }

    pub fn elements(&self) -> Vec<GF2Vector> {
        self.direction.elements().map(|w| w + self.base).collect()
    }

    /// Whether every element satisfies `f . x = value`.
    pub fn satisfies(&self, f: &GF2Vector, value: bool) -> bool {
        self.elements().iter().all(|x| f.dot(x) == value)
    }
}

/// Name of a cusp piece: the ideal vertex, the cusp sign, and for the
/// shared vertex the letter `a` or `b` according to whether the piece
/// lies on the plus or minus side of the first cut.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PieceLabel {
    pub vertex: usize,
    pub letter: Option<char>,
    pub sign: Side,
}

impl fmt::Display for PieceLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.letter {
            Some(l) => write!(f, "({}{},{})", self.vertex + 1, l, self.sign),
            None => write!(f, "({},{})", self.vertex + 1, self.sign),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CuspSectionPiece {
    pub label: PieceLabel,
    /// 1 for a piece at the shared vertex, 2 otherwise.
    pub length: u32,
    /// For short pieces the first and second cut, for long pieces the plus
    /// side then the minus side of the one cut.
    pub boundary: [Boundary; 2],
    /// One layer per unit of length, the plus-side layer first.
    pub layers: Vec<AffineSlice>,
}

impl CuspSectionPiece {
    pub fn affine_subspace(&self) -> &AffineSlice {
        &self.layers[0]
    }

    pub fn is_short(&self) -> bool {
        self.length == 1
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Transition {
    /// Crossing a cut through its pairing, or its inverse from the minus
    /// side.
    Pairing { hypersurface: usize, inverse: bool },
    /// Crossing the central slice of a long piece at this vertex.
    Reflection { vertex: usize },
}

impl fmt::Display for Transition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Transition::Pairing {
                hypersurface,
                inverse: false,
            } => write!(f, "phi{}", hypersurface + 1),
            Transition::Pairing {
                hypersurface,
                inverse: true,
            } => write!(f, "phi{}^-1", hypersurface + 1),
            Transition::Reflection { vertex } => write!(f, "R{}", vertex + 1),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MonodromyClass {
    Identity,
    /// A nonzero translation of the slice torus.
    TorusTranslation,
    HyperellipticInvolution,
    Other,
}

impl fmt::Display for MonodromyClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            MonodromyClass::Identity => "Identity",
            MonodromyClass::TorusTranslation => "TorusTranslation",
            MonodromyClass::HyperellipticInvolution => "HyperellipticInvolution",
            MonodromyClass::Other => "Other",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CuspCycle {
    pub pieces: Vec<PieceLabel>,
    /// `gluings[j]` carries `pieces[j]` to the next piece, cyclically.
    pub gluings: Vec<Transition>,
    /// Every crossing, central slices included.
    pub steps: Vec<Transition>,
    pub fibre_length: u32,
    pub monodromy: AffineGF2Map,
    pub slice: AffineSlice,
    pub class: MonodromyClass,
    /// The side colours summing to the slice translation, when the
    /// monodromy acts on the slice by a translation.
    pub slice_translation: Option<GF2Vector>,
}

impl fmt::Display for CuspCycle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (p, g) in self.pieces.iter().zip(&self.gluings) {
            write!(f, "{p} -{g}-> ")?;
        }
        write!(f, "{}", self.pieces[0])
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MutantCusp {
    pub cycle: CuspCycle,
    pub wolf_type: Option<WolfType>,
    /// Translation lattice of the slice torus in the first two coordinates.
    pub fibre_lattice: IntLattice,
    /// The monodromy as an isometry of `R^3`, advancing `z` by the fibre
    /// length, centred at a fixed axis when it has one.
    pub monodromy_isometry: Option<EuclideanIsometry>,
    pub deck_group: Option<DeckGroup>,
    pub z_period: u32,
}

impl MutantCusp {
    pub fn lattice(&self) -> Option<&IntLattice> {
        self.deck_group.as_ref().map(DeckGroup::lattice)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MutantReport {
    pub cusps: Vec<MutantCusp>,
    pub copies: u128,
    pub euler_characteristic: Ratio<i64>,
    pub orientable: bool,
    pub total_fibre_length: u32,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
struct Layer {
    vertex: usize,
    base: GF2Vector,
}

/// The cut manifold with its pairings lifted.
#[derive(Debug, Clone)]
pub struct Mutation {
    spec: MutationSpec,
    colouring: Colouring,
    lifts: [ColouredIsometry; 2],
    inverse_lifts: [ColouredIsometry; 2],
    shared: usize,
    /// Square colours at each vertex.
    slices: Vec<GF2Subspace>,
    /// The two facets bounding a layer at each vertex.
    faces: Vec<[usize; 2]>,
    pieces: Vec<CuspSectionPiece>,
    piece_of: HashMap<Layer, usize>,
}

impl Mutation {
    pub fn new(c: &Colouring, spec: MutationSpec) -> Result<Self, MutationError> {
        if c.polytope().kind != polytope::PolytopeKind::P4
            || c.dim() != 5
            || c.colours() != symmetric_p4_colouring().colours()
        {
            return Err(MutationError::NotSymmetric);
        }
        let lifts = [lift_pairing(&spec.pairings[0])?, lift_pairing(&spec.pairings[1])?];
        let inverse_lifts = [lifts[0].inverse(), lifts[1].inverse()];
        let shared = spec.shared_vertex();
        let enc = K5Encoding::default();
        let mut slices = Vec::new();
        let mut faces = Vec::new();
        for v in 0..5 {
            let pair = Self::fibre_pair(&spec, shared, v);
            let squares: Vec<GF2Vector> = (0..10)
                .filter(|&f| !enc.touches(f, v) && !pair.contains(&f))
                .map(|f| c.colour(f))
                .collect();
            slices.push(GF2Subspace::span(5, &squares)?);
            faces.push(pair);
        }
        let mut m = Self {
            spec,
            colouring: c.clone(),
            lifts,
            inverse_lifts,
            shared,
            slices,
            faces,
            pieces: Vec::new(),
            piece_of: HashMap::new(),
        };
        m.build_pieces()?;
        Ok(m)
    }

    pub fn spec(&self) -> &MutationSpec {
        &self.spec
    }

    pub fn shared_vertex(&self) -> usize {
        self.shared
    }

    /// The lifted pairing of the `k`-th cut (0-based).
    pub fn lift(&self, k: usize) -> &ColouredIsometry {
        &self.lifts[k]
    }

    /// The facets normal to the fibre at vertex `v`: both cuts at the
    /// shared vertex, otherwise the cut through `v`'s cube and the facet
    /// opposite it.
    fn fibre_pair(spec: &MutationSpec, shared: usize, v: usize) -> [usize; 2] {
        let enc = K5Encoding::default();
        if v == shared {
            return spec.facets;
        }
        let k = Self::cut_at(spec, v);
        let f = spec.facets[k];
        let (i, j) = endpoints(f);
        let rest: Vec<usize> = (0..5).filter(|&x| x != v && x != i && x != j).collect();
        [f, enc.facet(rest[0], rest[1])]
    }

    /// The cut whose facet lies in the cube at a non-shared vertex.
    fn cut_at(spec: &MutationSpec, v: usize) -> usize {
        let enc = K5Encoding::default();
        if enc.touches(spec.facets[0], v) {
            1
        } else {
            0
        }
    }

    fn layer(&self, vertex: usize, v: GF2Vector) -> Layer {
        Layer {
            vertex,
            base: self.slices[vertex].reduce(&v).expect("five coordinates"),
        }
    }

    fn slice_of(&self, l: &Layer) -> AffineSlice {
        AffineSlice {
            base: l.base,
            direction: self.slices[l.vertex].clone(),
        }
    }

    /// Side of the `k`-th cut on which a layer's copies lie.
    fn side(&self, k: usize, l: &Layer) -> Side {
        Side::of(self.colouring.colour(self.spec.facets[k]).dot(&l.base))
    }

    fn cusp_sign(&self, l: &Layer) -> Side {
        let h = polytope::cusp_hyperplane_equation(l.vertex).expect("vertex below five");
        Side::of(h.dot(&l.base))
    }

    fn build_pieces(&mut self) -> Result<(), MutationError> {
        let mut short = Vec::new();
        let mut long = Vec::new();
        for v in 0..5 {
            let mut seen: Vec<Layer> = Vec::new();
            for x in GF2Vector::all(5) {
                let l = self.layer(v, x);
                if !seen.contains(&l) {
                    seen.push(l);
                }
            }
            if v == self.shared {
                for l in seen {
                    let s1 = self.side(0, &l);
                    let s2 = self.side(1, &l);
                    let label = PieceLabel {
                        vertex: v,
                        letter: Some(if s1 == Side::Plus { 'a' } else { 'b' }),
                        sign: self.cusp_sign(&l),
                    };
                    short.push((
                        label,
                        CuspSectionPiece {
                            label,
                            length: 1,
                            boundary: [
                                Boundary { hypersurface: 0, side: s1 },
                                Boundary { hypersurface: 1, side: s2 },
                            ],
                            layers: vec![self.slice_of(&l)],
                        },
                        vec![l],
                    ));
                }
            } else {
                let k = Self::cut_at(&self.spec, v);
                let r = self.colouring.colour(self.faces[v][1]);
                let mut done: Vec<Layer> = Vec::new();
                for l in seen {
                    if done.contains(&l) || self.side(k, &l) == Side::Minus {
                        continue;
                    }
                    let other = self.layer(v, l.base + r);
                    done.push(l);
                    done.push(other);
                    let label = PieceLabel {
                        vertex: v,
                        letter: None,
                        sign: self.cusp_sign(&l),
                    };
                    long.push((
                        label,
                        CuspSectionPiece {
                            label,
                            length: 2,
                            boundary: [
                                Boundary { hypersurface: k, side: Side::Plus },
                                Boundary { hypersurface: k, side: Side::Minus },
                            ],
                            layers: vec![self.slice_of(&l), self.slice_of(&other)],
                        },
                        vec![l, other],
                    ));
                }
            }
        }
        short.sort_by_key(|(label, _, _)| (label.letter, label.sign));
        long.sort_by_key(|(label, _, _)| (label.vertex, label.sign));
        for (_, piece, layers) in short.into_iter().chain(long) {
            let idx = self.pieces.len();
            for l in layers {
                self.piece_of.insert(l, idx);
            }
            self.pieces.push(piece);
        }
        Ok(())
    }

    /// Short pieces first, then long pieces by vertex and sign.
    pub fn pieces(&self) -> &[CuspSectionPiece] {
        &self.pieces
    }

    fn first_layer(&self, piece: usize) -> Layer {
        let v = self.pieces[piece].label.vertex;
        self.layer(v, self.pieces[piece].layers[0].base)
    }

    /// Translation by the colour of the facet opposite the cut in the cube
    /// at vertex `i` (0-based).
    pub fn parallel_reflection(&self, i: usize) -> Result<ColouredIsometry, MutationError> {
        if i >= 5 || i == self.shared {
            return Err(MutationError::NotLongCusp(i + 1));
        }
        Ok(ColouredIsometry::translation(
            10,
            self.colouring.colour(self.faces[i][1]),
        ))
    }

    /// `φ̃_k ∘ R_b ∘ φ̃_k ∘ R_a ∘ φ̃_k`, where `a < b` are the long vertices
    /// whose cubes contain the `k`-th cut.
    pub fn psi(&self, k: usize) -> Result<AffineGF2Map, MutationError> {
        let (a, b) = endpoints(self.spec.facets[1 - k]);
        let phi = &self.lifts[k].affine;
        let ra = self.parallel_reflection(a)?.affine;
        let rb = self.parallel_reflection(b)?.affine;
        Ok(phi.compose(&rb).compose(phi).compose(&ra).compose(phi))
    }

    /// Crosses the face `exit` (0 or 1) of a layer, returning the step, the
    /// layer entered and the index of the entry face there.
    fn cross(&self, l: &Layer, exit: usize) -> Result<(Transition, AffineGF2Map, Layer, usize), MutationError> {
        let f = self.faces[l.vertex][exit];
        match self.spec.facets.iter().position(|&g| g == f) {
            Some(k) => {
                let inverse = self.side(k, l) == Side::Minus;
                let iso = if inverse {
                    &self.inverse_lifts[k]
                } else {
                    &self.lifts[k]
                };
                let sigma = iso.vertex_perm.as_ref().expect("P4 isometry");
                let next = self.layer(sigma.apply(l.vertex), iso.affine.apply(&l.base));
                if self.side(k, &next) == self.side(k, l) {
                    return Err(MutationError::OpenWalk);
                }
                let entry = self.faces[next.vertex]
                    .iter()
                    .position(|&g| g == f)
                    .ok_or(MutationError::OpenWalk)?;
                Ok((
                    Transition::Pairing {
                        hypersurface: k,
                        inverse,
                    },
                    iso.affine.clone(),
                    next,
                    entry,
                ))
            }
            None => {
                let r = self.parallel_reflection(l.vertex)?.affine;
                let next = self.layer(l.vertex, r.apply(&l.base));
                Ok((Transition::Reflection { vertex: l.vertex }, r, next, exit))
            }
        }
    }

    /// Follows the gluings from each unvisited piece in order, leaving a
    /// short piece through the first cut and a long piece through the plus
    /// side.
    pub fn trace_cycles(&self) -> Result<Vec<CuspCycle>, MutationError> {
        let mut visited = vec![false; self.pieces.len()];
        let mut cycles = Vec::new();
        for start_piece in 0..self.pieces.len() {
            if visited[start_piece] {
                continue;
            }
            visited[start_piece] = true;
            let start = self.first_layer(start_piece);
            let mut pieces = vec![start_piece];
            let mut gluings = Vec::new();
            let mut steps = Vec::new();
            let mut map = AffineGF2Map::identity(5);
            let mut layer = start;
            let mut exit = 0;
            loop {
                let (t, step, next, entry) = self.cross(&layer, exit)?;
                map = step.compose(&map);
                steps.push(t);
                layer = next;
                exit = 1 - entry;
                if let Transition::Pairing { .. } = t {
                    gluings.push(t);
                }
                if layer == start && exit == 0 {
                    break;
                }
                if let Transition::Pairing { .. } = t {
                    let p = self.piece_of[&layer];
                    if p != start_piece {
                        if visited[p] {
                            return Err(MutationError::OpenWalk);
                        }
                        visited[p] = true;
                        pieces.push(p);
                    }
                }
                if steps.len() > 2 * self.pieces.len() * 2 {
                    return Err(MutationError::OpenWalk);
                }
            }
            let slice = self.slice_of(&start);
            let (class, slice_translation) = self.classify(&start, &map)?;
            cycles.push(CuspCycle {
                pieces: pieces.iter().map(|&p| self.pieces[p].label).collect(),
                gluings,
                steps,
                fibre_length: pieces.iter().map(|&p| self.pieces[p].length).sum(),
                monodromy: map,
                slice,
                class,
                slice_translation,
            });
        }
        Ok(cycles)
    }

    /// The cube faces (as P4 facets) of the square slice at vertex `v`, in
    /// the order `x0, x1, y0, y1`.
    fn square_faces(&self, v: usize) -> Result<[usize; 4], MutationError> {
        let (_, corr) = polytope::vertex_figure(self.colouring.polytope(), v)?;
        let axes: Vec<usize> = (0..3)
            .filter(|&a| !self.faces[v].contains(&corr[2 * a]))
            .collect();
        Ok([
            corr[2 * axes[0]],
            corr[2 * axes[0] + 1],
            corr[2 * axes[1]],
            corr[2 * axes[1] + 1],
        ])
    }

    /// The slice torus at vertex `v` as a square colouring in `(Z/2)^5`.
    pub fn slice_square(&self, v: usize) -> Result<Colouring, MutationError> {
        let faces = self.square_faces(v)?;
        let colours = faces.iter().map(|&f| self.colouring.colour(f)).collect();
        Ok(Colouring::new(Arc::new(build_box(2)?), 5, colours)?)
    }

    /// Parity pattern (bit `a` for axis `a`) of a sum of square side
    /// colours equal to `w`.
    fn side_parity(&self, v: usize, w: &GF2Vector) -> Result<Option<u32>, MutationError> {
        let faces = self.square_faces(v)?;
        for subset in 0u32..16 {
            let mut sum = GF2Vector::zero(5);
            for (k, &f) in faces.iter().enumerate() {
                if subset >> k & 1 == 1 {
                    sum += self.colouring.colour(f);
                }
            }
            if sum == *w {
                let px = (subset & 0b11).count_ones() % 2;
                let py = (subset >> 2 & 0b11).count_ones() % 2;
                return Ok(Some(px | py << 1));
            }
        }
        Ok(None)
    }

    fn classify(
        &self,
        start: &Layer,
        map: &AffineGF2Map,
    ) -> Result<(MonodromyClass, Option<GF2Vector>), MutationError> {
        let slice = &self.slices[start.vertex];
        let image = self.layer(start.vertex, map.apply(&start.base));
        let linear_ok = slice
            .basis()
            .iter()
            .all(|w| slice.contains(&map.apply_linear(w)));
        if image != *start || !linear_ok {
            return Err(MutationError::SliceNotPreserved);
        }
        if slice.basis().iter().any(|w| map.apply_linear(w) != *w) {
            return Ok((MonodromyClass::Other, None));
        }
        let w = map.apply(&start.base) + start.base;
        if w.is_zero() {
            return Ok((MonodromyClass::Identity, Some(w)));
        }
        let class = match self.side_parity(start.vertex, &w)? {
            Some(0) => MonodromyClass::TorusTranslation,
            Some(3) => MonodromyClass::HyperellipticInvolution,
            _ => MonodromyClass::Other,
        };
        Ok((class, Some(w)))
    }

    fn cusp_of(&self, cycle: CuspCycle) -> Result<MutantCusp, MutationError> {
        let v = cycle.pieces[0].vertex;
        let square = self.slice_square(v)?;
        let fibre_lattice = box_walk_deck_group(&square)?.lattice;
        let z = cycle.fibre_length as i64;
        let parity = match cycle.class {
            MonodromyClass::Identity | MonodromyClass::TorusTranslation => Some(0),
            MonodromyClass::HyperellipticInvolution => Some(3),
            MonodromyClass::Other => None,
        };
        let realised = match (parity, &cycle.slice_translation) {
            (Some(p), Some(w)) => realise_label(&square, w, p)?,
            _ => None,
        };
        let (monodromy_isometry, deck_group, wolf_type) = match realised {
            Some(k) => {
                let g = EuclideanIsometry::of_box(&k);
                let mut linear = vec![vec![0i64; 3]; 3];
                for (row, src) in linear.iter_mut().zip(&g.linear).take(2) {
                    row[..2].copy_from_slice(&src[..2]);
                }
                linear[2][2] = 1;
                let mut psi = EuclideanIsometry {
                    linear,
                    translation: vec![g.translation[0], g.translation[1], z],
                };
                if !psi.is_translation() {
                    psi = psi.centred_at(&[g.translation[0] / 2, g.translation[1] / 2, 0]);
                }
                let mut gens: Vec<EuclideanIsometry> = fibre_lattice
                    .basis()
                    .iter()
                    .map(|b| EuclideanIsometry::translation(vec![b[0], b[1], 0]))
                    .collect();
                gens.push(psi.clone());
                let group = DeckGroup::new(3, gens);
                let wolf = match group.point_group_order() {
                    1 => WolfType::Torus,
                    2 if psi.determinant_sign() == 1 => WolfType::G2,
                    _ => WolfType::Other,
                };
                (Some(psi), Some(group), Some(wolf))
            }
            None => (None, None, None),
        };
        Ok(MutantCusp {
            z_period: cycle.fibre_length,
            cycle,
            wolf_type,
            fibre_lattice,
            monodromy_isometry,
            deck_group,
        })
    }

    pub fn report(&self) -> Result<MutantReport, MutationError> {
        let cycles = self.trace_cycles()?;
        let total_fibre_length = cycles.iter().map(|c| c.fibre_length).sum();
        let cusps = cycles
            .into_iter()
            .map(|c| self.cusp_of(c))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(MutantReport {
            cusps,
            copies: self.colouring.copies(),
            euler_characteristic: self.colouring.euler_characteristic_p4()?,
            orientable: self.colouring.is_orientable().is_some()
                && self.spec.pairings.iter().all(|p| p.restriction_sign() == 1),
            total_fibre_length,
        })
    }

    /// Boundary components of the short pieces by parity: starting from
    /// the root piece, a translation swaps the sides of a cut exactly when
    /// its orientation characters on the manifold and on the hypersurface
    /// differ.
    pub fn short_cusp_boundaries(&self) -> BTreeMap<PieceLabel, [Boundary; 2]> {
        let m = self.shared;
        let alpha = GF2Vector::unit(5, m);
        let (_, j) = endpoints(self.spec.facets[0]);
        let beta = K5Encoding::default().label(K5Encoding::default().facet(m.min(j), m.max(j)));
        let cusp = polytope::cusp_hyperplane_equation(m).expect("vertex below five");
        let mut out = BTreeMap::new();
        for t in [GF2Vector::zero(5), alpha, beta, alpha + beta] {
            let on_m = t.weight() % 2 == 1;
            let swaps: Vec<bool> = self
                .spec
                .facets
                .iter()
                .map(|&f| on_m != unit_mask(f).dot(&t))
                .collect();
            let bounds = [
                Boundary {
                    hypersurface: 0,
                    side: if swaps[0] { Side::Minus } else { Side::Plus },
                },
                Boundary {
                    hypersurface: 1,
                    side: if swaps[1] { Side::Minus } else { Side::Plus },
                },
            ];
            let label = PieceLabel {
                vertex: m,
                letter: Some(if swaps[0] { 'b' } else { 'a' }),
                sign: Side::of(cusp.dot(&t)),
            };
            out.insert(label, bounds);
        }
        out
    }

    /// The same map from the tessellation: the boundary of each cut is
    /// split into its two sides by union-find over facet copies, and the
    /// cusp complex at the shared vertex is cut along both traces.
    pub fn short_cusp_boundaries_by_cut(
        &self,
    ) -> Result<BTreeMap<PieceLabel, [Boundary; 2]>, MutationError> {
        let dg = DevelopingGraph::build(&self.colouring)?;
        let n = dg.vertex_count();
        let root = dg.index_of(&GF2Vector::zero(5));
        let mut sides = Vec::new();
        for &f in &self.spec.facets {
            let mut uf = UnionFind::new(n);
            for d in polytope::dart(self.colouring.polytope(), f)? {
                for g in 0..n {
                    uf.union(g, dg.neighbour(g, d));
                }
            }
            if uf.component_sizes().len() != 2 {
                return Err(MutationError::BoundaryMismatch(format!(
                    "sides of {}",
                    facet_id(f)
                )));
            }
            let plus = uf.find(root);
            sides.push((0..n).map(|g| if uf.find(g) == plus { Side::Plus } else { Side::Minus }).collect::<Vec<_>>());
        }
        let m = self.shared;
        let enc = K5Encoding::default();
        let cube: Vec<usize> = (0..10).filter(|&f| !enc.touches(f, m)).collect();
        let mut cusps = UnionFind::new(n);
        let mut cut = UnionFind::new(n);
        for &f in &cube {
            for g in 0..n {
                cusps.union(g, dg.neighbour(g, f));
                if !self.spec.facets.contains(&f) {
                    cut.union(g, dg.neighbour(g, f));
                }
            }
        }
        let plus_cusp = cusps.find(root);
        let mut out: BTreeMap<PieceLabel, [Boundary; 2]> = BTreeMap::new();
        for g in 0..n {
            let bounds = [
                Boundary { hypersurface: 0, side: sides[0][g] },
                Boundary { hypersurface: 1, side: sides[1][g] },
            ];
            let label = PieceLabel {
                vertex: m,
                letter: Some(if sides[0][g] == Side::Plus { 'a' } else { 'b' }),
                sign: if cusps.find(g) == plus_cusp { Side::Plus } else { Side::Minus },
            };
            // every copy in a component must agree
            let rep = (0..n).find(|&h| cut.find(h) == cut.find(g)).unwrap();
            if sides[0][rep] != sides[0][g] || sides[1][rep] != sides[1][g] {
                return Err(MutationError::BoundaryMismatch(label.to_string()));
            }
            if let Some(prev) = out.insert(label, bounds) {
                if prev != bounds {
                    return Err(MutationError::BoundaryMismatch(label.to_string()));
                }
            }
        }
        if cut.component_sizes().len() != 4 || out.len() != 4 {
            return Err(MutationError::BoundaryMismatch("short pieces".into()));
        }
        Ok(out)
    }

    /// Both boundary computations, which must agree.
    pub fn checked_short_cusp_boundaries(
        &self,
    ) -> Result<BTreeMap<PieceLabel, [Boundary; 2]>, MutationError> {
        let parity = self.short_cusp_boundaries();
        let oracle = self.short_cusp_boundaries_by_cut()?;
        for (label, b) in &parity {
            if oracle.get(label) != Some(b) {
                return Err(MutationError::BoundaryMismatch(label.to_string()));
            }
        }
        Ok(parity)
    }
}

/// All ways of writing `t` as a sum of dart colours of `facet`, optionally
/// plus the facet colour; returns the parities of the number of dart
/// colours used.
pub fn dart_decomposition_parities(facet: usize, t: &GF2Vector) -> Vec<bool> {
    let c = symmetric_p4_colouring();
    let dart = polytope::dart(c.polytope(), facet).expect("P4 facet");
    let mut out = Vec::new();
    for subset in 0u32..(1 << (dart.len() + 1)) {
        let mut sum = GF2Vector::zero(5);
        for (k, &d) in dart.iter().enumerate() {
            if subset >> k & 1 == 1 {
                sum += c.colour(d);
            }
        }
        if subset >> dart.len() & 1 == 1 {
            sum += c.colour(facet);
        }
        if sum == *t {
            let parity = (subset & ((1 << dart.len()) - 1)).count_ones() % 2 == 1;
            if !out.contains(&parity) {
                out.push(parity);
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn map(s: &str) -> AffineGF2Map {
        AffineGF2Map::parse_coordinates(5, s).unwrap()
    }

    fn x() -> Mutation {
        Mutation::new(&symmetric_p4_colouring(), MutationSpec::scenario_x()).unwrap()
    }

    fn y() -> Mutation {
        Mutation::new(&symmetric_p4_colouring(), MutationSpec::scenario_y()).unwrap()
    }

    #[test]
    fn lifts_match_closed_forms() {
        let mx = x();
        assert_eq!(mx.lift(0).affine, map("(c+1, a, b, e, d+1)"));
        assert_eq!(mx.lift(1).affine, map("(a, b, e+1, c+1, d+1)"));
        assert_eq!(y().lift(1).affine, map("(b, a+1, e, c+1, d)"));
    }

    #[test]
    fn reflections() {
        let mx = x();
        assert_eq!(mx.parallel_reflection(0).unwrap().affine, map("(a+1, b, c, d+1, e+1)"));
        assert_eq!(mx.parallel_reflection(1).unwrap().affine, map("(a, b+1, c, d+1, e+1)"));
        assert_eq!(mx.parallel_reflection(3).unwrap().affine, map("(a+1, b+1, c, d+1, e)"));
        assert_eq!(mx.parallel_reflection(4).unwrap().affine, map("(a+1, b+1, c, d, e+1)"));
        assert!(mx.parallel_reflection(2).is_err());
    }

    #[test]
    fn psi_closed_forms() {
        let mx = x();
        assert_eq!(mx.psi(0).unwrap(), map("(a+1, b+1, c+1, e+1, d)"));
        assert_eq!(mx.psi(1).unwrap(), map("(a, b, c+1, d+1, e+1)"));
        assert_eq!(y().psi(1).unwrap(), map("(b+1, a, c+1, d+1, e+1)"));
    }

    #[test]
    fn piece_inventory() {
        let mx = x();
        let p = mx.pieces();
        assert_eq!(p.len(), 12);
        assert_eq!(p.iter().filter(|q| q.is_short()).count(), 4);
        assert_eq!(p.iter().map(|q| q.length).sum::<u32>(), 20);
        let names: Vec<String> = p.iter().map(|q| q.label.to_string()).collect();
        assert_eq!(&names[..4], &["(3a,+)", "(3a,-)", "(3b,+)", "(3b,-)"]);
        let h3: GF2Vector = "11011".parse().unwrap();
        let g1: GF2Vector = "11100".parse().unwrap();
        for (q, (s, l)) in p[..4].iter().zip([(false, false), (true, false), (false, true), (true, true)]) {
            assert!(q.affine_subspace().satisfies(&h3, s));
            assert!(q.affine_subspace().satisfies(&g1, l));
        }
    }

    #[test]
    fn short_boundaries_agree() {
        let b = x().checked_short_cusp_boundaries().unwrap();
        let show: Vec<String> = b
            .iter()
            .map(|(k, v)| format!("{k}:{},{}", v[0], v[1]))
            .collect();
        assert_eq!(
            show,
            ["(3a,+):H1+,H2+", "(3a,-):H1+,H2-", "(3b,+):H1-,H2-", "(3b,-):H1-,H2+"]
        );
    }

    #[test]
    fn dart_parities() {
        let enc = K5Encoding::default();
        let alpha: GF2Vector = "00100".parse().unwrap();
        let beta: GF2Vector = "11010".parse().unwrap();
        assert_eq!(dart_decomposition_parities(enc.facet1(4, 5), &alpha), vec![false]);
        assert_eq!(dart_decomposition_parities(enc.facet1(1, 2), &alpha), vec![false]);
        assert_eq!(dart_decomposition_parities(enc.facet1(4, 5), &beta), vec![true]);
        assert_eq!(dart_decomposition_parities(enc.facet1(1, 2), &beta), vec![false]);
    }

    #[test]
    fn scenario_x_cycle() {
        let cycles = x().trace_cycles().unwrap();
        assert_eq!(cycles.len(), 1);
        let c = &cycles[0];
        let names: Vec<String> = c.pieces.iter().map(|p| p.to_string()).collect();
        assert_eq!(
            names,
            [
                "(3a,+)", "(1,-)", "(2,-)", "(3b,-)", "(4,-)", "(5,-)", "(3a,-)", "(1,+)", "(2,+)",
                "(3b,+)", "(5,+)", "(4,+)"
            ]
        );
        assert_eq!(c.fibre_length, 20);
        assert_eq!(c.monodromy, AffineGF2Map::translation("00011".parse().unwrap()));
        assert_eq!(c.class, MonodromyClass::HyperellipticInvolution);
    }

    #[test]
    fn scenario_y_cycle() {
        let cycles = y().trace_cycles().unwrap();
        assert_eq!(cycles.len(), 1);
        assert_eq!(cycles[0].fibre_length, 20);
        assert_eq!(cycles[0].monodromy, AffineGF2Map::identity(5));
        assert_eq!(cycles[0].class, MonodromyClass::Identity);
    }

    #[test]
    fn identity_pairings_recover_cusps() {
        let enc = K5Encoding::default();
        let spec = MutationSpec::identity(enc.facet1(4, 5), enc.facet1(1, 2)).unwrap();
        let m = Mutation::new(&symmetric_p4_colouring(), spec).unwrap();
        let r = m.report().unwrap();
        assert_eq!(r.cusps.len(), 10);
        let expect = IntLattice::from_generators(3, &[vec![2, 2, 0], vec![2, 0, 2], vec![0, 2, 2]]);
        for c in &r.cusps {
            assert_eq!(c.wolf_type, Some(WolfType::Torus));
            assert_eq!(c.lattice(), Some(&expect));
        }
    }

    #[test]
    fn spec_file_round_trip() {
        for s in [MutationSpec::scenario_x(), MutationSpec::scenario_y()] {
            let text = s.to_file_string();
            let back = MutationSpec::parse(&text).unwrap();
            assert_eq!(lift_pairing(&back.pairings[0]), lift_pairing(&s.pairings[0]));
            assert_eq!(lift_pairing(&back.pairings[1]), lift_pairing(&s.pairings[1]));
        }
        let e = MutationSpec::parse("cut 45 12\npairing 45 perm=(14) trans=0000\npairing 12 trans=0000\n").unwrap_err();
        assert!(matches!(e, MutationError::DoesNotFixFacet { .. }));
        let e = MutationSpec::parse("cut 45 34\n").unwrap_err();
        assert!(matches!(e, MutationError::Parse { line: 1, .. }));
        let e = MutationSpec::parse("cut 45 12\npairing 45 trans=01\n").unwrap_err();
        assert!(matches!(e, MutationError::Parse { line: 2, .. }));
    }
}
