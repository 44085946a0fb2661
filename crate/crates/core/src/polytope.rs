//! Combinatorial right-angled polytopes: Euclidean boxes and the ideal
//! hyperbolic 4-polytope encoded by the complete graph on five vertices.

use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::gf2::GF2Vector;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolytopeError {
    #[error("box dimension {0} outside 2..=6")]
    BadBoxDimension(usize),
    #[error("unknown polytope {0:?}")]
    UnknownPolytope(String),
    #[error("unknown facet {0:?}")]
    UnknownFacet(String),
    #[error("unknown ideal vertex {0}")]
    UnknownVertex(usize),
    #[error("invalid permutation {0:?}")]
    BadPermutation(String),
    #[error("operation needs the P4 polytope")]
    NotP4,
}

const AXIS_NAMES: [char; 6] = ['x', 'y', 'z', 'w', 'v', 'u'];

/// A permutation of `{0, .., n-1}`, stored as its image list.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation(Vec<usize>);

impl Permutation {
    pub fn identity(n: usize) -> Self {
        Self((0..n).collect())
    }

    pub fn from_images(images: Vec<usize>) -> Result<Self, PolytopeError> {
        let mut seen = vec![false; images.len()];
        for &i in &images {
            if i >= images.len() || seen[i] {
                return Err(PolytopeError::BadPermutation(format!("{images:?}")));
            }
            seen[i] = true;
        }
        Ok(Self(images))
    }

    /// Parses 1-based cycle notation such as `"(123)(45)"`. Points may be
    /// separated by commas or spaces, which is required once `n > 9`.
    pub fn parse_cycles(n: usize, text: &str) -> Result<Self, PolytopeError> {
        let bad = || PolytopeError::BadPermutation(text.to_string());
        let mut images: Vec<usize> = (0..n).collect();
        let mut seen = vec![false; n];
        let text = text.trim();
        if text.is_empty() || text == "()" || text == "id" {
            return Ok(Self(images));
        }
        let mut rest = text;
        while !rest.is_empty() {
            let open = rest.strip_prefix('(').ok_or_else(bad)?;
            let close = open.find(')').ok_or_else(bad)?;
            let body = &open[..close];
            rest = open[close + 1..].trim_start();
            let points: Vec<usize> = if body.contains(',') || body.contains(' ') {
                body.split([',', ' '])
                    .filter(|s| !s.is_empty())
                    .map(|s| s.trim().parse::<usize>().map_err(|_| bad()))
                    .collect::<Result<_, _>>()?
            } else {
                body.chars()
                    .map(|c| c.to_digit(10).map(|d| d as usize).ok_or_else(bad))
                    .collect::<Result<_, _>>()?
            };
            for &p in &points {
                if p == 0 || p > n || seen[p - 1] {
                    return Err(bad());
                }
                seen[p - 1] = true;
            }
            for k in 0..points.len() {
                images[points[k] - 1] = points[(k + 1) % points.len()] - 1;
            }
        }
        Ok(Self(images))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    #[inline]
    pub fn apply(&self, i: usize) -> usize {
        self.0[i]
    }

    pub fn images(&self) -> &[usize] {
        &self.0
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(i, &j)| i == j)
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &Permutation) -> Permutation {
        Permutation(other.0.iter().map(|&i| self.0[i]).collect())
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0; self.0.len()];
        for (i, &j) in self.0.iter().enumerate() {
            inv[j] = i;
        }
        Permutation(inv)
    }

    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.0.len()];
        let mut out = Vec::new();
        for start in 0..self.0.len() {
            if seen[start] {
                continue;
            }
            let mut cycle = vec![start];
            seen[start] = true;
            let mut i = self.0[start];
            while i != start {
                seen[i] = true;
                cycle.push(i);
                i = self.0[i];
            }
            out.push(cycle);
        }
        out
    }

    pub fn sign(&self) -> i8 {
        let even = self
            .cycles()
            .iter()
            .map(|c| c.len() - 1)
            .sum::<usize>()
            % 2
            == 0;
        if even {
            1
        } else {
            -1
        }
    }

    /// All permutations of `n` points in lexicographic order of images.
    pub fn all(n: usize) -> Vec<Permutation> {
        let mut out = Vec::new();
        let mut cur: Vec<usize> = (0..n).collect();
        loop {
            out.push(Permutation(cur.clone()));
            // next lexicographic permutation
            let Some(i) = (0..n.saturating_sub(1)).rev().find(|&i| cur[i] < cur[i + 1]) else {
                break;
            };
            let j = (i + 1..n).rev().find(|&j| cur[j] > cur[i]).unwrap();
            cur.swap(i, j);
            cur[i + 1..].reverse();
        }
        out
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let wide = self.0.len() > 9;
        let mut any = false;
        for c in self.cycles().into_iter().filter(|c| c.len() > 1) {
            any = true;
            let pts: Vec<String> = c.iter().map(|p| (p + 1).to_string()).collect();
            write!(f, "({})", pts.join(if wide { "," } else { "" }))?;
        }
        if !any {
            f.write_str("()")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Permutation{self}")
    }
}

/// A combinatorial symmetry: a facet permutation with an orientation sign.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Symmetry {
    pub facet_perm: Permutation,
    pub sign: i8,
}

impl Symmetry {
    pub fn identity(facets: usize) -> Self {
        Self {
            facet_perm: Permutation::identity(facets),
            sign: 1,
        }
    }

    #[inline]
    pub fn apply(&self, facet: usize) -> usize {
        self.facet_perm.apply(facet)
    }

    pub fn compose(&self, other: &Symmetry) -> Symmetry {
        Symmetry {
            facet_perm: self.facet_perm.compose(&other.facet_perm),
            sign: self.sign * other.sign,
        }
    }

    pub fn inverse(&self) -> Symmetry {
        Symmetry {
            facet_perm: self.facet_perm.inverse(),
            sign: self.sign,
        }
    }

    pub fn is_identity(&self) -> bool {
        self.facet_perm.is_identity()
    }

    /// Image of a facet set, sorted.
    pub fn apply_set(&self, set: &[usize]) -> Vec<usize> {
        let mut out: Vec<usize> = set.iter().map(|&f| self.apply(f)).collect();
        out.sort_unstable();
        out
    }
}

/// Group generated by `gens`, identity first, in breadth-first order.
pub fn closure(facets: usize, gens: &[Symmetry]) -> Vec<Symmetry> {
    let id = Symmetry::identity(facets);
    let mut seen: HashSet<Permutation> = HashSet::new();
    seen.insert(id.facet_perm.clone());
    let mut out = vec![id];
    let mut next = 0;
    while next < out.len() {
        let g = out[next].clone();
        next += 1;
        for h in gens {
            let gh = h.compose(&g);
            if seen.insert(gh.facet_perm.clone()) {
                out.push(gh);
            }
        }
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PolytopeKind {
    Box(usize),
    P4,
}

#[derive(Debug, Clone)]
pub struct CombinatorialPolytope {
    pub name: String,
    pub kind: PolytopeKind,
    pub dim: usize,
    /// File identifiers, e.g. `"45"` or `"x0"`.
    pub ids: Vec<String>,
    /// Display labels, e.g. `"11100"` for the P4 facet `45`.
    pub labels: Vec<String>,
    /// `adjacency[f]` has bit `g` set when facets `f` and `g` meet.
    pub adjacency: Vec<u64>,
    pub simple_vertices: Vec<Vec<usize>>,
    pub ideal_vertices: Vec<Vec<usize>>,
    pub ideal_edges: Vec<Vec<usize>>,
    pub generators: Vec<Symmetry>,
    group: Vec<Symmetry>,
}

impl CombinatorialPolytope {
    pub fn by_name(name: &str) -> Result<Self, PolytopeError> {
        match name {
            "P4" | "p4" => Ok(build_p4().0),
            _ => {
                let d = name
                    .strip_prefix("box")
                    .and_then(|d| d.parse::<usize>().ok())
                    .ok_or_else(|| PolytopeError::UnknownPolytope(name.to_string()))?;
                build_box(d)
            }
        }
    }

    #[inline]
    pub fn facet_count(&self) -> usize {
        self.ids.len()
    }

    #[inline]
    pub fn adjacent(&self, f: usize, g: usize) -> bool {
        (self.adjacency[f] >> g) & 1 == 1
    }

    /// Facets adjacent to `f`, in index order.
    pub fn neighbours(&self, f: usize) -> Vec<usize> {
        (0..self.facet_count())
            .filter(|&g| self.adjacent(f, g))
            .collect()
    }

    pub fn facet_index(&self, id: &str) -> Result<usize, PolytopeError> {
        let id = id.trim();
        self.ids
            .iter()
            .position(|s| s == id)
            .or_else(|| self.labels.iter().position(|s| s == id))
            .ok_or_else(|| PolytopeError::UnknownFacet(id.to_string()))
    }

    /// The full symmetry group, identity first.
    pub fn symmetry_group(&self) -> &[Symmetry] {
        &self.group
    }

    /// Index of the facet opposite `f` in a box.
    pub fn opposite(&self, f: usize) -> Option<usize> {
        match self.kind {
            PolytopeKind::Box(_) => Some(f ^ 1),
            PolytopeKind::P4 => None,
        }
    }

    pub fn preserves_structure(&self, s: &Symmetry) -> bool {
        let n = self.facet_count();
        for f in 0..n {
            for g in 0..n {
                if self.adjacent(f, g) != self.adjacent(s.apply(f), s.apply(g)) {
                    return false;
                }
            }
        }
        let same = |list: &[Vec<usize>]| {
            let set: HashSet<Vec<usize>> = list.iter().cloned().collect();
            list.iter().all(|x| set.contains(&s.apply_set(x)))
        };
        same(&self.simple_vertices) && same(&self.ideal_vertices) && same(&self.ideal_edges)
    }
}

fn sorted(mut v: Vec<usize>) -> Vec<usize> {
    v.sort_unstable();
    v
}

/// A signed axis permutation of `{0,1}^d`: axis `k` goes to axis
/// `perm[k]`, and its two sides swap when `flips` has bit `k`.
pub fn box_symmetry(perm: &Permutation, flips: u32) -> Symmetry {
    let d = perm.len();
    let mut images = vec![0; 2 * d];
    let mut sign = perm.sign();
    for k in 0..d {
        let f = (flips >> k) & 1;
        if f == 1 {
            sign = -sign;
        }
        for side in 0..2 {
            images[2 * k + side] = 2 * perm.apply(k) + (side ^ f as usize);
        }
    }
    Symmetry {
        facet_perm: Permutation(images),
        sign,
    }
}

pub fn build_box(d: usize) -> Result<CombinatorialPolytope, PolytopeError> {
    if !(2..=6).contains(&d) {
        return Err(PolytopeError::BadBoxDimension(d));
    }
    let n = 2 * d;
    let ids: Vec<String> = (0..n)
        .map(|f| format!("{}{}", AXIS_NAMES[f / 2], f % 2))
        .collect();
    let adjacency = (0..n)
        .map(|f| {
            (0..n)
                .filter(|&g| g / 2 != f / 2)
                .fold(0u64, |m, g| m | 1 << g)
        })
        .collect();
    let simple_vertices = (0..1usize << d)
        .map(|bits| (0..d).map(|k| 2 * k + ((bits >> k) & 1)).collect())
        .collect();
    let mut generators = Vec::new();
    for k in 0..d - 1 {
        let mut img: Vec<usize> = (0..d).collect();
        img.swap(k, k + 1);
        generators.push(box_symmetry(&Permutation(img), 0));
    }
    generators.push(box_symmetry(&Permutation::identity(d), 1));
    let mut group = Vec::with_capacity((1 << d) * (1..=d).product::<usize>());
    group.push(Symmetry::identity(n));
    for p in Permutation::all(d) {
        for flips in 0..1u32 << d {
            if p.is_identity() && flips == 0 {
                continue;
            }
            group.push(box_symmetry(&p, flips));
        }
    }
    Ok(CombinatorialPolytope {
        name: format!("box{d}"),
        kind: PolytopeKind::Box(d),
        dim: d,
        labels: ids.clone(),
        ids,
        adjacency,
        simple_vertices,
        ideal_vertices: Vec::new(),
        ideal_edges: Vec::new(),
        generators,
        group,
    })
}

/// The correspondence between P4 facets and edges of the complete graph
/// on the vertices `1..=5` (stored 0-based).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct K5Encoding {
    /// `edges[f] = (i, j)` with `i < j`.
    pub edges: Vec<(usize, usize)>,
}

impl Default for K5Encoding {
    fn default() -> Self {
        let mut edges = Vec::with_capacity(10);
        for i in 0..5 {
            for j in i + 1..5 {
                edges.push((i, j));
            }
        }
        Self { edges }
    }
}

impl K5Encoding {
    pub fn facet(&self, i: usize, j: usize) -> usize {
        let (i, j) = if i < j { (i, j) } else { (j, i) };
        self.edges
            .iter()
            .position(|&e| e == (i, j))
            .expect("distinct vertices below 5")
    }

    /// Facet from a 1-based pair such as `(4, 5)`.
    pub fn facet1(&self, i: usize, j: usize) -> usize {
        self.facet(i - 1, j - 1)
    }

    pub fn touches(&self, f: usize, v: usize) -> bool {
        let (i, j) = self.edges[f];
        i == v || j == v
    }

    /// Display label with zeros at the two endpoints.
    pub fn label(&self, f: usize) -> GF2Vector {
        let (i, j) = self.edges[f];
        GF2Vector::from_bits(5, 0b11111 & !(1 << i) & !(1 << j)).unwrap()
    }

    pub fn symmetry(&self, sigma: &Permutation) -> Symmetry {
        let images = self
            .edges
            .iter()
            .map(|&(i, j)| self.facet(sigma.apply(i), sigma.apply(j)))
            .collect();
        Symmetry {
            facet_perm: Permutation(images),
            sign: sigma.sign(),
        }
    }

    /// The vertex permutation inducing a facet symmetry.
    pub fn vertex_permutation(&self, s: &Symmetry) -> Option<Permutation> {
        Permutation::all(5)
            .into_iter()
            .find(|p| self.symmetry(p).facet_perm == s.facet_perm)
    }
}

pub fn build_p4() -> (CombinatorialPolytope, K5Encoding) {
    let enc = K5Encoding::default();
    let n = enc.edges.len();
    let ids = enc
        .edges
        .iter()
        .map(|&(i, j)| format!("{}{}", i + 1, j + 1))
        .collect();
    let labels = (0..n).map(|f| enc.label(f).to_string()).collect();
    let adjacency = (0..n)
        .map(|f| {
            let (a, b) = enc.edges[f];
            (0..n)
                .filter(|&g| g != f && (enc.touches(g, a) || enc.touches(g, b)))
                .fold(0u64, |m, g| m | 1 << g)
        })
        .collect();
    let simple_vertices = (0..5)
        .map(|v| (0..n).filter(|&f| enc.touches(f, v)).collect())
        .collect();
    let ideal_vertices = (0..5)
        .map(|v| (0..n).filter(|&f| !enc.touches(f, v)).collect())
        .collect();
    let mut ideal_edges = Vec::new();
    for a in 0..5 {
        for b in a + 1..5 {
            for c in b + 1..5 {
                ideal_edges.push(sorted(vec![
                    enc.facet(a, b),
                    enc.facet(a, c),
                    enc.facet(b, c),
                ]));
            }
        }
    }
    let generators = vec![
        enc.symmetry(&Permutation(vec![1, 0, 2, 3, 4])),
        enc.symmetry(&Permutation(vec![1, 2, 3, 4, 0])),
    ];
    let group = Permutation::all(5)
        .iter()
        .map(|p| enc.symmetry(p))
        .collect();
    let p = CombinatorialPolytope {
        name: "P4".into(),
        kind: PolytopeKind::P4,
        dim: 4,
        ids,
        labels,
        adjacency,
        simple_vertices,
        ideal_vertices,
        ideal_edges,
        generators,
        group,
    };
    (p, enc)
}

/// The six facets adjacent to `f`, sorted by K5 edge.
pub fn dart(p: &CombinatorialPolytope, f: usize) -> Result<Vec<usize>, PolytopeError> {
    if p.kind != PolytopeKind::P4 {
        return Err(PolytopeError::NotP4);
    }
    if f >= p.facet_count() {
        return Err(PolytopeError::UnknownFacet(f.to_string()));
    }
    Ok(p.neighbours(f))
}

/// The cube vertex figure at ideal vertex `w` (0-based), with `corr[k]`
/// the P4 facet that meets the cube face `k`.
pub fn vertex_figure(
    p: &CombinatorialPolytope,
    w: usize,
) -> Result<(CombinatorialPolytope, [usize; 6]), PolytopeError> {
    if p.kind != PolytopeKind::P4 {
        return Err(PolytopeError::NotP4);
    }
    if w >= 5 {
        return Err(PolytopeError::UnknownVertex(w));
    }
    let enc = K5Encoding::default();
    let rest: Vec<usize> = (0..5).filter(|&v| v != w).collect();
    let (a, b, c, d) = (rest[0], rest[1], rest[2], rest[3]);
    let corr = [
        enc.facet(c, d),
        enc.facet(a, b),
        enc.facet(a, c),
        enc.facet(b, d),
        enc.facet(b, c),
        enc.facet(a, d),
    ];
    Ok((build_box(3)?, corr))
}

/// Functional `sum_{j != i} x_j` on `(Z/2)^5`, for 0-based `i`.
pub fn cusp_hyperplane_equation(i: usize) -> Result<GF2Vector, PolytopeError> {
    if i >= 5 {
        return Err(PolytopeError::UnknownVertex(i));
    }
    Ok(GF2Vector::from_bits(5, 0b11111 & !(1 << i)).unwrap())
}

impl FromStr for PolytopeKind {
    type Err = PolytopeError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ok(CombinatorialPolytope::by_name(s)?.kind)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn box_counts() {
        let c = build_box(3).unwrap();
        assert_eq!(c.facet_count(), 6);
        assert_eq!(c.simple_vertices.len(), 8);
        assert_eq!(c.symmetry_group().len(), 48);
        let sq = build_box(2).unwrap();
        assert_eq!((sq.facet_count(), sq.simple_vertices.len()), (4, 4));
        for v in &c.simple_vertices {
            for &f in v {
                for &g in v {
                    if f != g {
                        assert!(c.adjacent(f, g));
                        assert_ne!(c.opposite(f), Some(g));
                    }
                }
            }
        }
        assert!(build_box(1).is_err());
        assert!(build_box(7).is_err());
    }

    #[test]
    fn box_group_matches_closure() {
        for d in 2..=4 {
            let b = build_box(d).unwrap();
            let g = closure(b.facet_count(), &b.generators);
            assert_eq!(g.len(), b.symmetry_group().len());
            for s in b.symmetry_group() {
                assert!(b.preserves_structure(s));
            }
        }
    }

    #[test]
    fn p4_counts() {
        let (p, enc) = build_p4();
        assert_eq!(p.facet_count(), 10);
        assert_eq!(p.ideal_edges.len(), 10);
        assert_eq!(p.simple_vertices.len(), 5);
        assert_eq!(p.ideal_vertices.len(), 5);
        assert!(p.simple_vertices.iter().all(|v| v.len() == 4));
        assert!(p.ideal_vertices.iter().all(|v| v.len() == 6));
        assert_eq!(p.labels[enc.facet1(4, 5)], "11100");
        let f45 = enc.facet1(4, 5);
        let disjoint: Vec<usize> = (0..10)
            .filter(|&g| g != f45 && !p.adjacent(f45, g))
            .collect();
        assert_eq!(
            disjoint,
            vec![enc.facet1(1, 2), enc.facet1(1, 3), enc.facet1(2, 3)]
        );
        for &a in &disjoint {
            for &b in &disjoint {
                assert!(a == b || p.adjacent(a, b));
            }
        }
    }

    #[test]
    fn p4_group() {
        let (p, enc) = build_p4();
        assert_eq!(p.symmetry_group().len(), 120);
        assert_eq!(closure(10, &p.generators).len(), 120);
        for s in p.symmetry_group() {
            assert!(p.preserves_structure(s));
        }
        let t = enc.symmetry(&Permutation::parse_cycles(5, "(45)").unwrap());
        let f45 = enc.facet1(4, 5);
        assert_eq!(t.apply(f45), f45);
        assert_eq!(t.sign, -1);
    }

    #[test]
    fn ideal_edges_in_two_vertices() {
        let (p, _) = build_p4();
        for e in &p.ideal_edges {
            let n = p
                .ideal_vertices
                .iter()
                .filter(|v| e.iter().all(|f| v.contains(f)))
                .count();
            assert_eq!(n, 2);
        }
    }

    #[test]
    fn darts() {
        let (p, enc) = build_p4();
        let ids = |fs: Vec<usize>| fs.iter().map(|&f| p.ids[f].clone()).collect::<Vec<_>>();
        assert_eq!(
            ids(dart(&p, enc.facet1(4, 5)).unwrap()),
            ["14", "15", "24", "25", "34", "35"]
        );
        assert_eq!(
            ids(dart(&p, enc.facet1(1, 2)).unwrap()),
            ["13", "14", "15", "23", "24", "25"]
        );
        for f in 0..10 {
            let d = dart(&p, f).unwrap();
            assert_eq!(d.len(), 6);
            assert!(!d.contains(&f));
        }
    }

    #[test]
    fn vertex_figure_at_three() {
        let (p, enc) = build_p4();
        let (cube, corr) = vertex_figure(&p, 2).unwrap();
        assert_eq!(corr[0], enc.facet1(4, 5));
        assert_eq!(corr[1], enc.facet1(1, 2));
        assert_eq!(corr[2], enc.facet1(1, 4));
        assert_eq!(corr[3], enc.facet1(2, 5));
        assert_eq!(corr[4], enc.facet1(2, 4));
        assert_eq!(corr[5], enc.facet1(1, 5));
        for w in 0..5 {
            let (_, corr) = vertex_figure(&p, w).unwrap();
            for a in 0..6 {
                let n = (0..6).filter(|&b| cube.adjacent(a, b)).count();
                assert_eq!(n, 4);
                for b in 0..6 {
                    if a != b {
                        assert_eq!(cube.adjacent(a, b), p.adjacent(corr[a], corr[b]));
                    }
                }
            }
        }
    }

    #[test]
    fn hyperplane_equations() {
        assert_eq!(cusp_hyperplane_equation(2).unwrap().to_string(), "11011");
        assert_eq!(cusp_hyperplane_equation(0).unwrap().to_string(), "01111");
    }

    #[test]
    fn permutation_parsing() {
        let p = Permutation::parse_cycles(5, "(123)(45)").unwrap();
        assert_eq!(p.images(), &[1, 2, 0, 4, 3]);
        assert_eq!(p.to_string(), "(123)(45)");
        assert_eq!(p.sign(), -1);
        assert!(p.compose(&p.inverse()).is_identity());
        assert!(Permutation::parse_cycles(5, "(11)").is_err());
        assert!(Permutation::parse_cycles(5, "(16)").is_err());
        assert_eq!(Permutation::parse_cycles(5, "()").unwrap(), Permutation::identity(5));
    }

    #[test]
    fn sign_is_a_homomorphism() {
        let all = Permutation::all(4);
        assert_eq!(all.len(), 24);
        for a in &all {
            for b in &all {
                assert_eq!(a.compose(b).sign(), a.sign() * b.sign());
            }
        }
    }
}
