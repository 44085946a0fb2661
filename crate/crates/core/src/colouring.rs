//! Facet colourings and their combinatorial invariants.

use std::collections::HashSet;
use std::fmt;
use std::sync::Arc;

use num_rational::Ratio;
use thiserror::Error;

use crate::gf2::{self, AffineGF2Map, GF2Subspace, GF2Vector, Gf2Error};
use crate::polytope::{
    self, build_box, build_p4, CombinatorialPolytope, PolytopeError, PolytopeKind, Symmetry,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ColouringError {
    #[error(transparent)]
    Gf2(#[from] Gf2Error),
    #[error(transparent)]
    Polytope(#[from] PolytopeError),
    #[error("expected {expected} facet colours, found {found}")]
    FacetCount { expected: usize, found: usize },
    #[error("colouring is not proper: {0}")]
    Improper(ProperVerdict),
    #[error("colouring is not orientable")]
    NotOrientable,
    #[error("expected a colouring of {0}")]
    WrongPolytope(&'static str),
    #[error("target dimension {0} outside the supported range")]
    BadTargetDimension(u8),
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
}

/// A map from facets to `(Z/2)^s`.
#[derive(Clone)]
pub struct Colouring {
    polytope: Arc<CombinatorialPolytope>,
    dim: u8,
    colours: Vec<GF2Vector>,
}

impl PartialEq for Colouring {
    fn eq(&self, other: &Self) -> bool {
        self.polytope.name == other.polytope.name
            && self.dim == other.dim
            && self.colours == other.colours
    }
}

impl Eq for Colouring {}

impl fmt::Debug for Colouring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut m = f.debug_map();
        for (id, c) in self.polytope.ids.iter().zip(&self.colours) {
            m.entry(id, &c.to_string());
        }
        m.finish()
    }
}

impl Colouring {
    pub fn new(
        polytope: Arc<CombinatorialPolytope>,
        dim: u8,
        colours: Vec<GF2Vector>,
    ) -> Result<Self, ColouringError> {
        if colours.len() != polytope.facet_count() {
            return Err(ColouringError::FacetCount {
                expected: polytope.facet_count(),
                found: colours.len(),
            });
        }
        if let Some(c) = colours.iter().find(|c| c.dim() != dim) {
            return Err(Gf2Error::DimensionMismatch {
                expected: dim,
                found: c.dim(),
            }
            .into());
        }
        Ok(Self {
            polytope,
            dim,
            colours,
        })
    }

    /// Colouring given by bit strings in facet order.
    pub fn from_strs(
        polytope: Arc<CombinatorialPolytope>,
        colours: &[&str],
    ) -> Result<Self, ColouringError> {
        let colours: Vec<GF2Vector> = colours
            .iter()
            .map(|s| s.parse())
            .collect::<Result<_, _>>()?;
        let dim = colours.first().map(|c| c.dim()).unwrap_or(1);
        Self::new(polytope, dim, colours)
    }

    pub fn polytope(&self) -> &CombinatorialPolytope {
        &self.polytope
    }

    pub fn polytope_arc(&self) -> &Arc<CombinatorialPolytope> {
        &self.polytope
    }

    #[inline]
    pub fn dim(&self) -> u8 {
        self.dim
    }

    #[inline]
    pub fn colour(&self, facet: usize) -> GF2Vector {
        self.colours[facet]
    }

    pub fn colours(&self) -> &[GF2Vector] {
        &self.colours
    }

    pub fn image(&self) -> GF2Subspace {
        GF2Subspace::span(self.dim, &self.colours).expect("uniform dimension")
    }

    pub fn image_dim(&self) -> usize {
        self.image().dim()
    }

    /// Number of polytope copies tessellating the manifold.
    pub fn copies(&self) -> u128 {
        1u128 << self.image_dim()
    }

    pub fn span_of(&self, facets: &[usize]) -> GF2Subspace {
        let mut s = GF2Subspace::zero(self.dim);
        for &f in facets {
            s.insert(self.colours[f]);
        }
        s
    }

    pub fn check_proper(&self) -> ProperVerdict {
        let p = &*self.polytope;
        let independent = |set: &Vec<usize>| self.span_of(set).dim() == set.len();
        ProperVerdict {
            vertex_violations: (0..p.simple_vertices.len())
                .filter(|&k| !independent(&p.simple_vertices[k]))
                .collect(),
            edge_violations: (0..p.ideal_edges.len())
                .filter(|&k| !independent(&p.ideal_edges[k]))
                .collect(),
        }
    }

    pub fn is_proper(&self) -> bool {
        self.check_proper().is_proper()
    }

    fn require_proper(&self) -> Result<(), ColouringError> {
        let v = self.check_proper();
        if v.is_proper() {
            Ok(())
        } else {
            Err(ColouringError::Improper(v))
        }
    }

    /// Witness functional `f` with `f . c = 1` on every colour, if any.
    pub fn is_orientable(&self) -> Option<GF2Vector> {
        gf2::orientation_functional(&self.colours)
    }

    pub fn hypersurface_report(&self, facet: usize) -> Result<HypersurfaceReport, ColouringError> {
        self.require_proper()?;
        if facet >= self.polytope.facet_count() {
            return Err(PolytopeError::UnknownFacet(facet.to_string()).into());
        }
        let lambda = self.colours[facet];
        let neighbours = self.span_of(&self.polytope.neighbours(facet));
        let mut w = neighbours.clone();
        w.insert(lambda);
        let image = self.image();
        let others: Vec<GF2Vector> = self
            .colours
            .iter()
            .filter(|&&c| c != lambda)
            .copied()
            .collect();
        let others = GF2Subspace::span(self.dim, &others)?;
        Ok(HypersurfaceReport {
            facet,
            lift_count: w.index_in(&image).expect("W lies in the image"),
            two_sided: !neighbours.contains(&lambda),
            colour_class_separates: !others.contains(&lambda),
            w,
        })
    }

    /// The colouring of the facet `facet` by classes in `V / <λ(facet)>`.
    pub fn induced_facet_colouring(
        &self,
        facet: usize,
    ) -> Result<InducedFacetColouring, ColouringError> {
        self.require_proper()?;
        let dart = polytope::dart(&self.polytope, facet)?;
        let by = GF2Subspace::span(self.dim, &[self.colours[facet]])?;
        if self.dim < 2 {
            return Err(ColouringError::BadTargetDimension(self.dim));
        }
        let colours = dart
            .iter()
            .map(|&g| {
                by.quotient_coords(&self.colours[g])
                    .map(|q| q.expect("quotient is non-trivial"))
            })
            .collect::<Result<_, _>>()?;
        let image_in_quotient = {
            let mut s = GF2Subspace::zero(self.dim);
            for c in &self.colours {
                s.insert(by.reduce(c)?);
            }
            // the image of all colours in V/<λF>, as quotient coordinates
            let q: Vec<GF2Vector> = s
                .basis()
                .iter()
                .filter_map(|b| by.quotient_coords(b).ok().flatten())
                .collect();
            GF2Subspace::span(self.dim - 1, &q)?
        };
        Ok(InducedFacetColouring {
            parent: self.clone(),
            facet,
            dart,
            colours,
            image: image_in_quotient,
        })
    }

    /// The induced colouring of the cube vertex figure at `w` together
    /// with the number of cusps above `w`.
    pub fn induced_vertex_figure_colouring(
        &self,
        w: usize,
    ) -> Result<(Colouring, u128), ColouringError> {
        self.require_proper()?;
        let (cube, corr) = polytope::vertex_figure(&self.polytope, w)?;
        let colours = corr.iter().map(|&f| self.colours[f]).collect();
        let cube = Colouring::new(Arc::new(cube), self.dim, colours)?;
        let vw = self.span_of(&self.polytope.ideal_vertices[w]);
        let count = vw.index_in(&self.image()).expect("V_w lies in the image");
        Ok((cube, count))
    }

    /// Number of cusps above ideal vertex `w`.
    pub fn cusp_count(&self, w: usize) -> u128 {
        self.span_of(&self.polytope.ideal_vertices[w])
            .index_in(&self.image())
            .expect("V_w lies in the image")
    }

    /// The linear automorphism of `V` realising `sym`, if `sym` is
    /// admissible. It is the identity on a complement of the image.
    pub fn admissible_linear_part(&self, sym: &Symmetry) -> Option<AffineGF2Map> {
        let targets: Vec<GF2Vector> = (0..self.colours.len())
            .map(|f| self.colours[sym.apply(f)])
            .collect();
        AffineGF2Map::extend_linear(self.dim, &self.colours, &targets).ok()
    }

    pub fn admissible_symmetries(&self) -> AdmissibleGroup {
        let mut elements = Vec::new();
        let mut linear = Vec::new();
        for s in self.polytope.symmetry_group() {
            if let Some(l) = self.admissible_linear_part(s) {
                elements.push(s.clone());
                linear.push(l);
            }
        }
        AdmissibleGroup { elements, linear }
    }

    pub fn euler_characteristic_p4(&self) -> Result<Ratio<i64>, ColouringError> {
        if self.polytope.kind != PolytopeKind::P4 {
            return Err(ColouringError::WrongPolytope("P4"));
        }
        self.require_proper()?;
        Ok(Ratio::new(1i64 << self.image_dim(), 16))
    }

    /// `self` precomposed with a symmetry: facet `f` gets `λ(g(f))`.
    pub fn pull_back(&self, g: &Symmetry) -> Colouring {
        Colouring {
            polytope: self.polytope.clone(),
            dim: self.dim,
            colours: (0..self.colours.len())
                .map(|f| self.colours[g.apply(f)])
                .collect(),
        }
    }

    pub fn map_colours(&self, m: &AffineGF2Map) -> Colouring {
        Colouring {
            polytope: self.polytope.clone(),
            dim: self.dim,
            colours: self.colours.iter().map(|c| m.apply_linear(c)).collect(),
        }
    }

    /// Parses the text colouring format.
    pub fn parse(text: &str) -> Result<Self, ColouringError> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
            .filter(|(_, l)| !l.is_empty());
        let err = |line, message: String| ColouringError::Parse { line, message };
        let (ln, first) = lines.next().ok_or_else(|| err(1, "empty input".into()))?;
        let name = first
            .strip_prefix("polytope")
            .map(str::trim)
            .filter(|s| !s.is_empty())
            .ok_or_else(|| err(ln, "expected `polytope <name>`".into()))?;
        let polytope =
            CombinatorialPolytope::by_name(name).map_err(|e| err(ln, e.to_string()))?;
        let (ln, second) = lines
            .next()
            .ok_or_else(|| err(ln + 1, "expected `dim <s>`".into()))?;
        let dim: u8 = second
            .strip_prefix("dim")
            .map(str::trim)
            .and_then(|s| s.parse().ok())
            .filter(|d| (1..=gf2::MAX_DIM).contains(d))
            .ok_or_else(|| err(ln, "expected `dim <s>` with 1 <= s <= 64".into()))?;
        let mut colours: Vec<Option<GF2Vector>> = vec![None; polytope.facet_count()];
        let mut last = ln;
        for (ln, line) in lines {
            last = ln;
            let mut parts = line.split_whitespace();
            let (Some(id), Some(bits), None) = (parts.next(), parts.next(), parts.next()) else {
                return Err(err(ln, "expected `<facet-id> <bitstring>`".into()));
            };
            let f = polytope
                .ids
                .iter()
                .position(|s| s == id)
                .ok_or_else(|| err(ln, format!("unknown facet {id:?}")))?;
            let c: GF2Vector = bits
                .parse()
                .map_err(|e: Gf2Error| err(ln, e.to_string()))?;
            if c.dim() != dim {
                return Err(err(
                    ln,
                    format!("colour {bits} has length {}, expected {dim}", c.dim()),
                ));
            }
            if colours[f].replace(c).is_some() {
                return Err(err(ln, format!("facet {id} coloured twice")));
            }
        }
        let colours = colours
            .into_iter()
            .enumerate()
            .map(|(f, c)| {
                c.ok_or_else(|| err(last, format!("facet {} has no colour", polytope.ids[f])))
            })
            .collect::<Result<Vec<_>, _>>()?;
        Colouring::new(Arc::new(polytope), dim, colours)
    }

    pub fn to_file_string(&self) -> String {
        let mut out = format!("polytope {}\ndim {}\n", self.polytope.name, self.dim);
        for (id, c) in self.polytope.ids.iter().zip(&self.colours) {
            out.push_str(&format!("{id} {c}\n"));
        }
        out
    }
}

/// Properness failures, as indices into the polytope's vertex and ideal
/// edge lists.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ProperVerdict {
    pub vertex_violations: Vec<usize>,
    pub edge_violations: Vec<usize>,
}

impl ProperVerdict {
    pub fn is_proper(&self) -> bool {
        self.vertex_violations.is_empty() && self.edge_violations.is_empty()
    }
}

impl fmt::Display for ProperVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_proper() {
            return f.write_str("proper");
        }
        write!(
            f,
            "{} vertex and {} ideal-edge violations",
            self.vertex_violations.len(),
            self.edge_violations.len()
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HypersurfaceReport {
    pub facet: usize,
    pub w: GF2Subspace,
    pub lift_count: u128,
    pub two_sided: bool,
    /// Whether `λ(F)` lies outside the span of the colours different from
    /// `λ(F)`.
    pub colour_class_separates: bool,
}

#[derive(Debug, Clone)]
pub struct AdmissibleGroup {
    pub elements: Vec<Symmetry>,
    /// `linear[k]` realises `elements[k]` on colours.
    pub linear: Vec<AffineGF2Map>,
}

impl AdmissibleGroup {
    pub fn order(&self) -> usize {
        self.elements.len()
    }
}

/// The colouring that a proper P4 colouring induces on one of its facets,
/// with values in `V / <λ(F)>` written in quotient coordinates.
#[derive(Debug, Clone)]
pub struct InducedFacetColouring {
    pub parent: Colouring,
    pub facet: usize,
    pub dart: Vec<usize>,
    pub colours: Vec<GF2Vector>,
    /// Span of all parent colours in the quotient.
    pub image: GF2Subspace,
}

impl InducedFacetColouring {
    pub fn span_dim(&self) -> usize {
        rank_vec(&self.colours)
    }

    /// Ideal vertices of the parent polytope lying on this facet.
    pub fn ideal_vertices(&self) -> Vec<usize> {
        let p = self.parent.polytope();
        (0..p.ideal_vertices.len())
            .filter(|&w| p.ideal_vertices[w].contains(&self.facet))
            .collect()
    }

    /// Quotient colour of a parent facet in the dart.
    pub fn colour_of(&self, parent_facet: usize) -> Option<GF2Vector> {
        self.dart
            .iter()
            .position(|&g| g == parent_facet)
            .map(|k| self.colours[k])
    }

    /// Induced colouring of the square vertex figure at `w`, as a box2
    /// colouring whose facets `x0 x1 y0 y1` are the parent facets returned
    /// alongside.
    pub fn square_colouring(&self, w: usize) -> Result<(Colouring, [usize; 4]), ColouringError> {
        let (_, corr) = polytope::vertex_figure(self.parent.polytope(), w)?;
        let k = corr
            .iter()
            .position(|&f| f == self.facet)
            .ok_or(PolytopeError::UnknownVertex(w))?;
        let axes: Vec<usize> = (0..3).filter(|&a| a != k / 2).collect();
        let sides = [
            corr[2 * axes[0]],
            corr[2 * axes[0] + 1],
            corr[2 * axes[1]],
            corr[2 * axes[1] + 1],
        ];
        let colours = sides
            .iter()
            .map(|&f| self.colour_of(f).expect("square sides lie in the dart"))
            .collect();
        let sq = Colouring::new(Arc::new(build_box(2)?), self.parent.dim() - 1, colours)?;
        Ok((sq, sides))
    }

    /// Number of cusps of the hypersurface above the ideal vertex `w`.
    pub fn cusp_count(&self, w: usize) -> Result<u128, ColouringError> {
        let (sq, _) = self.square_colouring(w)?;
        Ok(sq.image().index_in(&self.image).expect("square span lies in image"))
    }

    /// Copies of the facet tessellating one lift of the hypersurface.
    pub fn copies(&self) -> u128 {
        1u128 << self.image.dim()
    }
}

fn rank_vec(v: &[GF2Vector]) -> usize {
    gf2::rank(v)
}

/// The colouring of P4 whose colour on each facet is its display label.
pub fn symmetric_p4_colouring() -> Colouring {
    let (p, enc) = build_p4();
    let colours = (0..p.facet_count()).map(|f| enc.label(f)).collect();
    Colouring::new(Arc::new(p), 5, colours).expect("ten colours of length five")
}

/// Incrementally expresses vectors in the basis formed by the first
/// independent vectors seen, in order.
struct SequentialBasis {
    rows: Vec<(u64, u64)>,
}

impl SequentialBasis {
    fn new() -> Self {
        Self { rows: Vec::new() }
    }

    fn express(&mut self, x: u64) -> u64 {
        let mut r = x;
        let mut combo = 0;
        for &(v, c) in &self.rows {
            if r & (v & v.wrapping_neg()) != 0 {
                r ^= v;
                combo ^= c;
            }
        }
        if r == 0 {
            return combo;
        }
        let k = self.rows.len();
        self.rows.push((r, combo ^ (1 << k)));
        1 << k
    }
}

/// Normal form under post-composition with `GL(s)`: the `k`-th colour
/// independent of the earlier ones becomes `e_k`, and the rest are
/// expressed in that basis.
pub fn gl_normal_form(colours: &[GF2Vector]) -> Vec<GF2Vector> {
    let mut basis = SequentialBasis::new();
    colours
        .iter()
        .map(|c| GF2Vector::from_bits(c.dim(), basis.express(c.bits())).unwrap())
        .collect()
}

/// Packs a normal form over at most 12 facets and 8 coordinates.
fn packed_normal_form(bits: impl Iterator<Item = u64>) -> u128 {
    let mut basis = SequentialBasis::new();
    let mut key = 0u128;
    for (k, b) in bits.enumerate() {
        key |= (basis.express(b) as u128) << (8 * k);
    }
    key
}

fn unpack(key: u128, n: usize, s: u8) -> Vec<GF2Vector> {
    (0..n)
        .map(|k| GF2Vector::from_bits(s, ((key >> (8 * k)) & 0xff) as u64).unwrap())
        .collect()
}

/// Comparison key matching lexicographic order of the colour list.
fn lex_key(key: u128, n: usize) -> u128 {
    (0..n).fold(0u128, |acc, k| (acc << 8) | ((key >> (8 * k)) & 0xff))
}

/// Lexicographically least normal form over the orbit of `c` under the
/// polytope symmetries and `GL(s)`.
pub fn canonical_form(c: &Colouring) -> Colouring {
    let best = c
        .polytope()
        .symmetry_group()
        .iter()
        .map(|g| gl_normal_form(c.pull_back(g).colours()))
        .min_by(|a, b| a.iter().map(|x| x.bits()).cmp(b.iter().map(|x| x.bits())))
        .expect("group contains the identity");
    Colouring {
        polytope: c.polytope.clone(),
        dim: c.dim,
        colours: best,
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EnumerationError {
    #[error("class cap of {cap} exceeded; {} classes found so far", partial.len())]
    CapExceeded { cap: usize, partial: Vec<Colouring> },
    #[error(transparent)]
    Colouring(#[from] ColouringError),
}

/// One canonical representative per class of proper colourings with
/// values in `(Z/2)^s`, up to symmetries and `GL(s)`. Representatives are
/// emitted in discovery order.
pub fn enumerate_proper_colourings(
    polytope: &CombinatorialPolytope,
    s: u8,
    orientable_only: bool,
    max_classes: Option<usize>,
) -> Result<Vec<Colouring>, EnumerationError> {
    if !(1..=6).contains(&s) {
        return Err(ColouringError::BadTargetDimension(s).into());
    }
    let p = Arc::new(polytope.clone());
    let n = p.facet_count();
    // constraint sets containing each facet, restricted to earlier facets
    let mut checks: Vec<Vec<Vec<usize>>> = vec![Vec::new(); n];
    for set in p.simple_vertices.iter().chain(&p.ideal_edges) {
        for &f in set {
            let earlier: Vec<usize> = set.iter().copied().filter(|&g| g <= f).collect();
            if earlier.len() > 1 {
                checks[f].push(earlier);
            }
        }
    }
    let perms = p
        .symmetry_group()
        .iter()
        .map(|g| g.facet_perm.images().to_vec())
        .collect();
    let mut state = Search {
        p: p.clone(),
        s,
        orientable_only,
        checks,
        perms,
        colours: vec![0; n],
        seen: HashSet::new(),
        out: Vec::new(),
        cap: max_classes,
        capped: false,
    };
    state.assign(0, 0);
    if state.capped {
        return Err(EnumerationError::CapExceeded {
            cap: max_classes.unwrap_or(0),
            partial: state.out,
        });
    }
    Ok(state.out)
}

struct Search {
    p: Arc<CombinatorialPolytope>,
    s: u8,
    orientable_only: bool,
    checks: Vec<Vec<Vec<usize>>>,
    perms: Vec<Vec<usize>>,
    colours: Vec<u64>,
    seen: HashSet<u128>,
    out: Vec<Colouring>,
    cap: Option<usize>,
    capped: bool,
}

fn independent_bits(colours: &[u64], set: &[usize]) -> bool {
    let mut rows = [0u64; 12];
    for (n, &f) in set.iter().enumerate() {
        let mut x = colours[f];
        for &r in &rows[..n] {
            if x & (r & r.wrapping_neg()) != 0 {
                x ^= r;
            }
        }
        if x == 0 {
            return false;
        }
        rows[n] = x;
    }
    true
}

impl Search {
    fn assign(&mut self, f: usize, rank: usize) {
        if self.capped {
            return;
        }
        if f == self.colours.len() {
            self.leaf();
            return;
        }
        let span_size = 1u64 << rank;
        let fresh = (rank < self.s as usize).then_some(1u64 << rank);
        for value in (1..span_size).chain(fresh) {
            self.colours[f] = value;
            if self.checks[f]
                .iter()
                .all(|set| independent_bits(&self.colours, set))
            {
                let r = if Some(value) == fresh { rank + 1 } else { rank };
                self.assign(f + 1, r);
            }
            if self.capped {
                return;
            }
        }
    }

    fn leaf(&mut self) {
        let n = self.colours.len();
        let here = packed_normal_form(self.colours.iter().copied());
        if self.seen.contains(&here) {
            return;
        }
        let mut best = here;
        for perm in &self.perms {
            let k = packed_normal_form(perm.iter().map(|&g| self.colours[g]));
            if lex_key(k, n) < lex_key(best, n) {
                best = k;
            }
            self.seen.insert(k);
        }
        let colours = unpack(best, n, self.s);
        if self.orientable_only && gf2::orientation_functional(&colours).is_none() {
            return;
        }
        if self.cap.is_some_and(|cap| self.out.len() >= cap) {
            self.capped = true;
            return;
        }
        self.out.push(Colouring {
            polytope: self.p.clone(),
            dim: self.s,
            colours,
        });
    }
}
