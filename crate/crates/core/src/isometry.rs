//! Coloured isometries: a polytope symmetry paired with an affine map on
//! the copies of the polytope.

use std::fmt;

use crate::colouring::Colouring;
use crate::gf2::{AffineGF2Map, GF2Vector};
use crate::polytope::{K5Encoding, Permutation, Symmetry};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ColouredIsometry {
    pub symmetry: Symmetry,
    /// The vertex permutation of the complete graph, for P4 symmetries.
    pub vertex_perm: Option<Permutation>,
    pub affine: AffineGF2Map,
}

impl ColouredIsometry {
    pub fn new(symmetry: Symmetry, affine: AffineGF2Map) -> Self {
        Self {
            symmetry,
            vertex_perm: None,
            affine,
        }
    }

    /// A P4 symmetry acting on `(Z/2)^5` by permuting coordinates, followed
    /// by a translation.
    pub fn from_vertex_perm(sigma: &Permutation, translation: GF2Vector) -> Self {
        let enc = K5Encoding::default();
        let lin = AffineGF2Map::permutation(sigma.images());
        Self {
            symmetry: enc.symmetry(sigma),
            vertex_perm: Some(sigma.clone()),
            affine: AffineGF2Map::translation(translation).compose(&lin),
        }
    }

    pub fn identity(facets: usize, dim: u8) -> Self {
        Self::new(Symmetry::identity(facets), AffineGF2Map::identity(dim))
    }

    pub fn translation(facets: usize, t: GF2Vector) -> Self {
        Self::new(Symmetry::identity(facets), AffineGF2Map::translation(t))
    }

    /// Whether the map carries the labelled developing graph of `c` to
    /// itself: the linear part sends `λ(F)` to `λ(σ(F))`.
    pub fn respects(&self, c: &Colouring) -> bool {
        (0..c.colours().len()).all(|f| {
            self.affine.apply_linear(&c.colour(f)) == c.colour(self.symmetry.apply(f))
        })
    }

    /// Orientation character relative to an orientation functional `o`:
    /// the symmetry sign times `(-1)^{o . t}`.
    pub fn orientation_sign(&self, o: &GF2Vector) -> i8 {
        let t = self.affine.translation_part();
        if o.dot(&t) {
            -self.symmetry.sign
        } else {
            self.symmetry.sign
        }
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &ColouredIsometry) -> ColouredIsometry {
        ColouredIsometry {
            symmetry: self.symmetry.compose(&other.symmetry),
            vertex_perm: match (&self.vertex_perm, &other.vertex_perm) {
                (Some(a), Some(b)) => Some(a.compose(b)),
                _ => None,
            },
            affine: self.affine.compose(&other.affine),
        }
    }

    pub fn inverse(&self) -> ColouredIsometry {
        ColouredIsometry {
            symmetry: self.symmetry.inverse(),
            vertex_perm: self.vertex_perm.as_ref().map(Permutation::inverse),
            affine: self.affine.inverse(),
        }
    }
}

impl fmt::Display for ColouredIsometry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.vertex_perm {
            Some(p) => write!(f, "{p} {}", self.affine),
            None => write!(f, "{}", self.affine),
        }
    }
}

impl fmt::Debug for ColouredIsometry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ColouredIsometry({self})")
    }
}
