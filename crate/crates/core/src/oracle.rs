//! Brute-force checks on the tessellation by copies of the polytope.
//!
//! The copies are indexed by the elements of the image of the colouring;
//! copy `g` meets copy `g + λ(F)` along its facet `F`.

use std::collections::{BTreeMap, VecDeque};

use thiserror::Error;

use crate::colouring::{Colouring, ColouringError};
use crate::gf2::{GF2Subspace, GF2Vector};
use crate::isometry::ColouredIsometry;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error(transparent)]
    Colouring(#[from] ColouringError),
    #[error("tessellation with 2^{0} copies is too large")]
    TooLarge(usize),
    #[error("symmetry is not admissible for this colouring")]
    NotAdmissible,
    #[error("unknown facet {0}")]
    UnknownFacet(usize),
    #[error("unknown ideal vertex {0}")]
    UnknownVertex(usize),
}

/// Disjoint sets over `0..n` with path compression and union by size.
#[derive(Debug, Clone)]
pub struct UnionFind {
    parent: Vec<usize>,
    size: Vec<usize>,
}

impl UnionFind {
    pub fn new(n: usize) -> Self {
        Self {
            parent: (0..n).collect(),
            size: vec![1; n],
        }
    }

    pub fn find(&mut self, x: usize) -> usize {
        let mut root = x;
        while self.parent[root] != root {
            root = self.parent[root];
        }
        let mut cur = x;
        while self.parent[cur] != root {
            let next = self.parent[cur];
            self.parent[cur] = root;
            cur = next;
        }
        root
    }

    pub fn union(&mut self, a: usize, b: usize) -> bool {
        let (mut ra, mut rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        if self.size[ra] < self.size[rb] || (self.size[ra] == self.size[rb] && rb < ra) {
            std::mem::swap(&mut ra, &mut rb);
        }
        self.parent[rb] = ra;
        self.size[ra] += self.size[rb];
        true
    }

    /// Component sizes ordered by the smallest member of each component.
    pub fn component_sizes(&mut self) -> Vec<usize> {
        let mut by_root: BTreeMap<usize, (usize, usize)> = BTreeMap::new();
        for x in 0..self.parent.len() {
            let r = self.find(x);
            by_root.entry(r).or_insert((x, 0)).1 += 1;
        }
        let mut v: Vec<(usize, usize)> = by_root.into_values().collect();
        v.sort_unstable();
        v.into_iter().map(|(_, s)| s).collect()
    }
}

/// Result of a component count.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Components {
    pub count: usize,
    pub sizes: Vec<usize>,
}

impl Components {
    fn from_uf(mut uf: UnionFind) -> Self {
        let sizes = uf.component_sizes();
        Self {
            count: sizes.len(),
            sizes,
        }
    }
}

/// A stratum class preserved by a coloured isometry.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FixedStratum {
    /// Facets whose intersection is the face; empty for the whole polytope.
    pub facets: Vec<usize>,
    /// Linear part of the associated affine subspace of copies.
    pub linear: GF2Subspace,
    /// A copy `x` with `A(x) - x` in the linear part.
    pub witness: GF2Vector,
}

#[derive(Debug, Clone)]
pub struct DevelopingGraph {
    colouring: Colouring,
    image: GF2Subspace,
    vertices: Vec<GF2Vector>,
}

/// Largest image dimension the explicit graph accepts.
pub const MAX_IMAGE_DIM: usize = 20;

impl DevelopingGraph {
    pub fn build(c: &Colouring) -> Result<Self, OracleError> {
        let verdict = c.check_proper();
        if !verdict.is_proper() {
            return Err(ColouringError::Improper(verdict).into());
        }
        let image = c.image();
        if image.dim() > MAX_IMAGE_DIM {
            return Err(OracleError::TooLarge(image.dim()));
        }
        let vertices = image.elements().collect();
        Ok(Self {
            colouring: c.clone(),
            image,
            vertices,
        })
    }

    pub fn colouring(&self) -> &Colouring {
        &self.colouring
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn vertices(&self) -> &[GF2Vector] {
        &self.vertices
    }

    pub fn degree(&self) -> usize {
        self.colouring.colours().len()
    }

    /// The copy index of `v`, which must lie in the image.
    pub fn index_of(&self, v: &GF2Vector) -> usize {
        self.image.coordinates(v).expect("vertex lies in the image") as usize
    }

    /// The copy across facet `f` from copy `g`.
    pub fn neighbour(&self, g: usize, f: usize) -> usize {
        self.index_of(&(self.vertices[g] + self.colouring.colour(f)))
    }

    /// All labelled edges `(g, g + λ(F), F)`.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize, usize)> + '_ {
        (0..self.vertices.len())
            .flat_map(move |g| (0..self.degree()).map(move |f| (g, self.neighbour(g, f), f)))
    }

    /// Components of the union of all copies of facet `f`, glued across
    /// the ridges it shares with its neighbours.
    pub fn hypersurface_components(&self, f: usize) -> Result<Components, OracleError> {
        if f >= self.degree() {
            return Err(OracleError::UnknownFacet(f));
        }
        let p = self.colouring.polytope();
        let mut uf = UnionFind::new(self.vertices.len());
        for g in 0..self.vertices.len() {
            uf.union(g, self.neighbour(g, f));
            for h in p.neighbours(f) {
                uf.union(g, self.neighbour(g, h));
            }
        }
        Ok(Components::from_uf(uf))
    }

    /// Two-sidedness of the lift of `f` through the root copy, from the
    /// developing graph of its tubular neighbourhood.
    pub fn two_sided_by_tube(&self, f: usize) -> Result<bool, OracleError> {
        if f >= self.degree() {
            return Err(OracleError::UnknownFacet(f));
        }
        let p = self.colouring.polytope();
        let sides = p.neighbours(f);
        let tube = self.reachable(0, |h| h == f || sides.contains(&h));
        let cut = self.reachable(0, |h| sides.contains(&h));
        Ok(tube.iter().filter(|&&x| x).count() != cut.iter().filter(|&&x| x).count())
    }

    /// Whether deleting every edge coloured `value` disconnects the graph.
    pub fn separates_by_cut(&self, value: &GF2Vector) -> bool {
        let colours = self.colouring.colours();
        let reach = self.reachable(0, |h| colours[h] != *value);
        !reach.iter().all(|&x| x)
    }

    /// Components of the copies of the cusp at ideal vertex `w`.
    pub fn cusp_components(&self, w: usize) -> Result<Components, OracleError> {
        let p = self.colouring.polytope();
        let facets = p
            .ideal_vertices
            .get(w)
            .ok_or(OracleError::UnknownVertex(w))?;
        let mut uf = UnionFind::new(self.vertices.len());
        for g in 0..self.vertices.len() {
            for &h in facets {
                uf.union(g, self.neighbour(g, h));
            }
        }
        Ok(Components::from_uf(uf))
    }

    fn reachable(&self, start: usize, allowed: impl Fn(usize) -> bool) -> Vec<bool> {
        let mut seen = vec![false; self.vertices.len()];
        let mut queue = VecDeque::from([start]);
        seen[start] = true;
        while let Some(g) = queue.pop_front() {
            for h in (0..self.degree()).filter(|&h| allowed(h)) {
                let n = self.neighbour(g, h);
                if !seen[n] {
                    seen[n] = true;
                    queue.push_back(n);
                }
            }
        }
        seen
    }

    /// Faces of the polytope as facet sets: the whole polytope, every
    /// subset of a vertex or ideal-edge set, and the ideal vertex sets.
    pub fn faces(&self) -> Vec<Vec<usize>> {
        let p = self.colouring.polytope();
        let mut out: Vec<Vec<usize>> = vec![Vec::new()];
        for set in p.simple_vertices.iter().chain(&p.ideal_edges) {
            for mask in 1u32..1 << set.len() {
                let sub: Vec<usize> = (0..set.len())
                    .filter(|k| (mask >> k) & 1 == 1)
                    .map(|k| set[k])
                    .collect();
                out.push(sub);
            }
        }
        out.extend(p.ideal_vertices.iter().cloned());
        out.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
        out.dedup();
        out
    }

    /// Face classes whose associated affine subspace of copies is
    /// preserved by `iso`.
    pub fn fixed_point_check(
        &self,
        iso: &ColouredIsometry,
    ) -> Result<Vec<FixedStratum>, OracleError> {
        if !iso.respects(&self.colouring) {
            return Err(OracleError::NotAdmissible);
        }
        let mut out = Vec::new();
        for face in self.faces() {
            if iso.symmetry.apply_set(&face) != face {
                continue;
            }
            let linear = self.colouring.span_of(&face);
            let witness = self
                .vertices
                .iter()
                .find(|x| linear.contains(&(iso.affine.apply(x) + **x)));
            if let Some(&witness) = witness {
                out.push(FixedStratum {
                    facets: face,
                    linear,
                    witness,
                });
            }
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::colouring::symmetric_p4_colouring;
    use crate::polytope::{build_box, K5Encoding, Permutation};
    use std::sync::Arc;

    fn cube(colours: &[&str]) -> Colouring {
        Colouring::from_strs(Arc::new(build_box(3).unwrap()), colours).unwrap()
    }

    #[test]
    fn symmetric_graph() {
        let g = DevelopingGraph::build(&symmetric_p4_colouring()).unwrap();
        assert_eq!(g.vertex_count(), 32);
        assert_eq!(g.degree(), 10);
        for f in 0..10 {
            assert_eq!(g.hypersurface_components(f).unwrap().count, 1);
            assert!(g.two_sided_by_tube(f).unwrap());
        }
        let mut total = 0;
        for w in 0..5 {
            let c = g.cusp_components(w).unwrap();
            assert_eq!(c.sizes, vec![16, 16]);
            total += c.count;
        }
        assert_eq!(total, 10);
    }

    #[test]
    fn edge_labels_add_up() {
        let c = cube(&["001", "111", "100", "100", "010", "010"]);
        let g = DevelopingGraph::build(&c).unwrap();
        assert_eq!((g.vertex_count(), g.degree()), (8, 6));
        for (a, b, f) in g.edges() {
            assert_eq!(g.vertices()[a] + g.vertices()[b], c.colour(f));
        }
    }

    #[test]
    fn independent_colour_disconnects() {
        let c = cube(&["100", "100", "010", "010", "001", "001"]);
        let g = DevelopingGraph::build(&c).unwrap();
        assert!(g.separates_by_cut(&"100".parse().unwrap()));
        let h = g.hypersurface_components(0).unwrap();
        assert_eq!(h.count, 1);
        assert_eq!(h.count * h.sizes[0], 8);
    }

    #[test]
    fn one_sided_square_side() {
        let sq = Colouring::from_strs(Arc::new(build_box(2).unwrap()), &["10", "01", "11", "11"])
            .unwrap();
        let g = DevelopingGraph::build(&sq).unwrap();
        assert!(!g.two_sided_by_tube(2).unwrap());
        assert!(g.two_sided_by_tube(0).unwrap());
    }

    #[test]
    fn fixed_strata() {
        let c = symmetric_p4_colouring();
        let g = DevelopingGraph::build(&c).unwrap();
        let id = ColouredIsometry::identity(10, 5);
        assert_eq!(g.fixed_point_check(&id).unwrap().len(), g.faces().len());
        let t = ColouredIsometry::translation(10, "10000".parse().unwrap());
        let fixed = g.fixed_point_check(&t).unwrap();
        assert!(fixed.iter().all(|s| s.facets.len() >= 2));
        let i = ColouredIsometry::from_vertex_perm(
            &Permutation::parse_cycles(5, "(14)(25)").unwrap(),
            GF2Vector::zero(5),
        );
        let fixed = g.fixed_point_check(&i).unwrap();
        let enc = K5Encoding::default();
        let singles: Vec<usize> = fixed
            .iter()
            .filter(|s| s.facets.len() == 1)
            .map(|s| s.facets[0])
            .collect();
        assert_eq!(singles, vec![enc.facet1(1, 4), enc.facet1(2, 5)]);
        // the only preserved stratum touching {4,5} is the cusp at vertex 3,
        // which also contains its image {1,2}
        let touching: Vec<&FixedStratum> = fixed
            .iter()
            .filter(|s| s.facets.contains(&enc.facet1(4, 5)))
            .collect();
        assert_eq!(touching.len(), 1);
        assert_eq!(touching[0].facets, c.polytope().ideal_vertices[2]);
        let bad = ColouredIsometry::new(
            i.symmetry.clone(),
            crate::gf2::AffineGF2Map::identity(5),
        );
        assert_eq!(g.fixed_point_check(&bad), Err(OracleError::NotAdmissible));
    }
}
