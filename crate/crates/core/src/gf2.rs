//! Linear and affine algebra over the two-element field.
//!
//! Vectors live in `(Z/2)^s` with `1 <= s <= 64` and are packed into a
//! single machine word: coordinate `i` (0-based) is bit `i`. The textual
//! form lists coordinates first to last, so `"11100"` is `(1,1,1,0,0)`.

use std::fmt;
use std::ops::{Add, AddAssign};
use std::str::FromStr;

use thiserror::Error;

/// Largest supported ambient dimension.
pub const MAX_DIM: u8 = 64;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Gf2Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: u8, found: u8 },
    #[error("ambient dimension {0} outside 1..=64")]
    BadDimension(usize),
    #[error("invalid bit string {0:?}")]
    BadBitString(String),
    #[error("linear part is not invertible")]
    NotInvertible,
    #[error("invalid affine expression {0:?}")]
    BadExpression(String),
}

#[inline]
fn mask(dim: u8) -> u64 {
    if dim >= 64 {
        u64::MAX
    } else {
        (1u64 << dim) - 1
    }
}

/// An element of `(Z/2)^s`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GF2Vector {
    dim: u8,
    bits: u64,
}

impl GF2Vector {
    pub fn zero(dim: u8) -> Self {
        assert!((1..=MAX_DIM).contains(&dim), "dimension {dim} out of range");
        Self { dim, bits: 0 }
    }

    /// Builds a vector from packed bits; bits above `dim` must be clear.
    pub fn from_bits(dim: u8, bits: u64) -> Result<Self, Gf2Error> {
        if !(1..=MAX_DIM).contains(&dim) {
            return Err(Gf2Error::BadDimension(dim as usize));
        }
        if bits & !mask(dim) != 0 {
            return Err(Gf2Error::BadBitString(format!("{bits:#x}")));
        }
        Ok(Self { dim, bits })
    }

    /// The `i`-th standard basis vector (0-based).
    pub fn unit(dim: u8, i: usize) -> Self {
        assert!(i < dim as usize);
        Self { dim, bits: 1 << i }
    }

    pub fn from_coords(coords: &[u8]) -> Result<Self, Gf2Error> {
        let dim = coords.len();
        if !(1..=MAX_DIM as usize).contains(&dim) {
            return Err(Gf2Error::BadDimension(dim));
        }
        let mut bits = 0;
        for (i, &c) in coords.iter().enumerate() {
            match c {
                0 => {}
                1 => bits |= 1 << i,
                _ => return Err(Gf2Error::BadBitString(format!("{coords:?}"))),
            }
        }
        Ok(Self { dim: dim as u8, bits })
    }

    #[inline]
    pub fn dim(&self) -> u8 {
        self.dim
    }

    #[inline]
    pub fn bits(&self) -> u64 {
        self.bits
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        i < self.dim as usize && (self.bits >> i) & 1 == 1
    }

    pub fn set(&mut self, i: usize, value: bool) {
        assert!(i < self.dim as usize);
        if value {
            self.bits |= 1 << i;
        } else {
            self.bits &= !(1 << i);
        }
    }

    #[inline]
    pub fn is_zero(&self) -> bool {
        self.bits == 0
    }

    #[inline]
    pub fn weight(&self) -> u32 {
        self.bits.count_ones()
    }

    /// Standard dot product, i.e. the value of `self` read as a functional.
    #[inline]
    pub fn dot(&self, other: &GF2Vector) -> bool {
        (self.bits & other.bits).count_ones() % 2 == 1
    }

    /// Index of the first non-zero coordinate.
    pub fn leading(&self) -> Option<usize> {
        (self.bits != 0).then(|| self.bits.trailing_zeros() as usize)
    }

    pub fn coords(&self) -> Vec<u8> {
        (0..self.dim as usize).map(|i| self.get(i) as u8).collect()
    }

    pub fn checked_add(&self, other: &GF2Vector) -> Result<GF2Vector, Gf2Error> {
        if self.dim != other.dim {
            return Err(Gf2Error::DimensionMismatch {
                expected: self.dim,
                found: other.dim,
            });
        }
        Ok(GF2Vector {
            dim: self.dim,
            bits: self.bits ^ other.bits,
        })
    }

    /// All `2^dim` vectors; only sensible for small `dim`.
    pub fn all(dim: u8) -> impl Iterator<Item = GF2Vector> {
        assert!(dim < 32, "exhaustive iteration over 2^{dim} points");
        (0..1u64 << dim).map(move |bits| GF2Vector { dim, bits })
    }
}

impl Add for GF2Vector {
    type Output = GF2Vector;

    fn add(self, rhs: GF2Vector) -> GF2Vector {
        debug_assert_eq!(self.dim, rhs.dim);
        GF2Vector {
            dim: self.dim,
            bits: self.bits ^ rhs.bits,
        }
    }
}

impl AddAssign for GF2Vector {
    fn add_assign(&mut self, rhs: GF2Vector) {
        debug_assert_eq!(self.dim, rhs.dim);
        self.bits ^= rhs.bits;
    }
}

impl fmt::Display for GF2Vector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.dim as usize {
            f.write_str(if self.get(i) { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for GF2Vector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF2Vector({self})")
    }
}

impl FromStr for GF2Vector {
    type Err = Gf2Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if s.is_empty() || s.len() > MAX_DIM as usize {
            return Err(Gf2Error::BadBitString(s.to_string()));
        }
        let mut bits = 0u64;
        for (i, ch) in s.chars().enumerate() {
            match ch {
                '0' => {}
                '1' => bits |= 1 << i,
                _ => return Err(Gf2Error::BadBitString(s.to_string())),
            }
        }
        Ok(GF2Vector {
            dim: s.len() as u8,
            bits,
        })
    }
}

/// A linear subspace, stored as a fully reduced echelon basis.
///
/// Each basis vector has a distinct pivot (its lowest set bit) and no other
/// basis vector has that pivot bit set. Basis vectors are kept sorted by
/// pivot, which makes the representation unique.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct GF2Subspace {
    ambient: u8,
    basis: Vec<u64>,
}

impl GF2Subspace {
    pub fn zero(ambient: u8) -> Self {
        assert!((1..=MAX_DIM).contains(&ambient));
        Self {
            ambient,
            basis: Vec::new(),
        }
    }

    pub fn full(ambient: u8) -> Self {
        let mut s = Self::zero(ambient);
        for i in 0..ambient as usize {
            s.insert(GF2Vector::unit(ambient, i));
        }
        s
    }

    /// Linear span of `vectors` inside `(Z/2)^ambient`.
    pub fn span<'a, I>(ambient: u8, vectors: I) -> Result<Self, Gf2Error>
    where
        I: IntoIterator<Item = &'a GF2Vector>,
    {
        if !(1..=MAX_DIM).contains(&ambient) {
            return Err(Gf2Error::BadDimension(ambient as usize));
        }
        let mut s = Self::zero(ambient);
        for v in vectors {
            if v.dim != ambient {
                return Err(Gf2Error::DimensionMismatch {
                    expected: ambient,
                    found: v.dim,
                });
            }
            s.insert(*v);
        }
        Ok(s)
    }

    /// Span of a non-empty list, taking the ambient dimension from its first
    /// element.
    pub fn span_of(vectors: &[GF2Vector]) -> Result<Self, Gf2Error> {
        let ambient = vectors.first().ok_or(Gf2Error::BadDimension(0))?.dim;
        Self::span(ambient, vectors)
    }

    #[inline]
    pub fn ambient_dim(&self) -> u8 {
        self.ambient
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> Vec<GF2Vector> {
        self.basis
            .iter()
            .map(|&bits| GF2Vector {
                dim: self.ambient,
                bits,
            })
            .collect()
    }

    pub fn pivots(&self) -> Vec<usize> {
        self.basis
            .iter()
            .map(|b| b.trailing_zeros() as usize)
            .collect()
    }

    fn reduce_bits(&self, mut bits: u64) -> u64 {
        for &b in &self.basis {
            if bits & (b & b.wrapping_neg()) != 0 {
                bits ^= b;
            }
        }
        bits
    }

    /// Adds `v` to the spanning set; returns whether the dimension grew.
    pub fn insert(&mut self, v: GF2Vector) -> bool {
        debug_assert_eq!(v.dim, self.ambient);
        let r = self.reduce_bits(v.bits);
        if r == 0 {
            return false;
        }
        let pivot = r & r.wrapping_neg();
        for b in &mut self.basis {
            if *b & pivot != 0 {
                *b ^= r;
            }
        }
        let pos = self
            .basis
            .iter()
            .position(|b| b.trailing_zeros() > r.trailing_zeros())
            .unwrap_or(self.basis.len());
        self.basis.insert(pos, r);
        true
    }

    pub fn contains(&self, v: &GF2Vector) -> bool {
        v.dim == self.ambient && self.reduce_bits(v.bits) == 0
    }

    pub fn is_subspace_of(&self, other: &GF2Subspace) -> bool {
        self.ambient == other.ambient && self.basis().iter().all(|b| other.contains(b))
    }

    /// Canonical representative of the coset `v + self`.
    pub fn reduce(&self, v: &GF2Vector) -> Result<GF2Vector, Gf2Error> {
        if v.dim != self.ambient {
            return Err(Gf2Error::DimensionMismatch {
                expected: self.ambient,
                found: v.dim,
            });
        }
        Ok(GF2Vector {
            dim: self.ambient,
            bits: self.reduce_bits(v.bits),
        })
    }

    /// Coordinates of the class of `v` in `V / self`, obtained by reducing
    /// and then deleting the pivot coordinates. Returns `None` when the
    /// quotient is trivial.
    pub fn quotient_coords(&self, v: &GF2Vector) -> Result<Option<GF2Vector>, Gf2Error> {
        let r = self.reduce(v)?;
        let pivots = self.pivots();
        let out_dim = self.ambient as usize - pivots.len();
        if out_dim == 0 {
            return Ok(None);
        }
        let mut bits = 0u64;
        let mut k = 0;
        for i in 0..self.ambient as usize {
            if pivots.contains(&i) {
                continue;
            }
            if r.get(i) {
                bits |= 1 << k;
            }
            k += 1;
        }
        Ok(Some(GF2Vector {
            dim: out_dim as u8,
            bits,
        }))
    }

    /// Inverse of [`Self::quotient_coords`]: the reduced representative whose
    /// quotient coordinates are `q`.
    pub fn lift_quotient_coords(&self, q: &GF2Vector) -> Result<GF2Vector, Gf2Error> {
        let pivots = self.pivots();
        let out_dim = self.ambient as usize - pivots.len();
        if q.dim as usize != out_dim {
            return Err(Gf2Error::DimensionMismatch {
                expected: out_dim as u8,
                found: q.dim,
            });
        }
        let mut bits = 0u64;
        let mut k = 0;
        for i in 0..self.ambient as usize {
            if pivots.contains(&i) {
                continue;
            }
            if q.get(k) {
                bits |= 1 << i;
            }
            k += 1;
        }
        Ok(GF2Vector {
            dim: self.ambient,
            bits,
        })
    }

    /// Expresses `v` in the stored basis, as a bit mask over basis indices.
    pub fn coordinates(&self, v: &GF2Vector) -> Option<u64> {
        if v.dim != self.ambient {
            return None;
        }
        let mut bits = v.bits;
        let mut coords = 0u64;
        for (k, &b) in self.basis.iter().enumerate() {
            if bits & (b & b.wrapping_neg()) != 0 {
                bits ^= b;
                coords |= 1 << k;
            }
        }
        (bits == 0).then_some(coords)
    }

    /// The element with the given basis coordinates.
    pub fn element(&self, coords: u64) -> GF2Vector {
        let mut bits = 0;
        for (k, &b) in self.basis.iter().enumerate() {
            if (coords >> k) & 1 == 1 {
                bits ^= b;
            }
        }
        GF2Vector {
            dim: self.ambient,
            bits,
        }
    }

    /// All `2^dim` elements, ordered by basis coordinates.
    pub fn elements(&self) -> impl Iterator<Item = GF2Vector> + '_ {
        assert!(self.dim() < 32, "too many elements to enumerate");
        (0..1u64 << self.dim()).map(move |c| self.element(c))
    }

    pub fn sum(&self, other: &GF2Subspace) -> GF2Subspace {
        assert_eq!(self.ambient, other.ambient);
        let mut s = self.clone();
        for b in other.basis() {
            s.insert(b);
        }
        s
    }

    /// Intersection via the Zassenhaus algorithm.
    pub fn intersection(&self, other: &GF2Subspace) -> GF2Subspace {
        assert_eq!(self.ambient, other.ambient);
        // rows (u | u) for u in self, (v | 0) for v in other, eliminate on
        // the left half; rows with vanishing left half span the intersection.
        let mut rows: Vec<(u64, u64)> = self
            .basis
            .iter()
            .map(|&u| (u, u))
            .chain(other.basis.iter().map(|&v| (v, 0)))
            .collect();
        let mut pivot_row = 0;
        for bit in 0..self.ambient as usize {
            let m = 1u64 << bit;
            let Some(found) = (pivot_row..rows.len()).find(|&r| rows[r].0 & m != 0) else {
                continue;
            };
            rows.swap(pivot_row, found);
            let p = rows[pivot_row];
            for (r, row) in rows.iter_mut().enumerate() {
                if r != pivot_row && row.0 & m != 0 {
                    row.0 ^= p.0;
                    row.1 ^= p.1;
                }
            }
            pivot_row += 1;
        }
        let mut out = GF2Subspace::zero(self.ambient);
        for &(l, r) in &rows[pivot_row..] {
            debug_assert_eq!(l, 0);
            out.insert(GF2Vector {
                dim: self.ambient,
                bits: r,
            });
        }
        out
    }

    /// `2^(ambient - dim)`, the index of the subspace in the ambient space.
    pub fn index(&self) -> u128 {
        1u128 << (self.ambient as usize - self.dim())
    }

    /// Index of `self` inside `sup`, when `self` is contained in it.
    pub fn index_in(&self, sup: &GF2Subspace) -> Option<u128> {
        self.is_subspace_of(sup)
            .then(|| 1u128 << (sup.dim() - self.dim()))
    }
}

impl fmt::Debug for GF2Subspace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.basis()).finish()
    }
}

/// Free function form of [`GF2Subspace::span_of`]. Empty input is an error
/// since the ambient dimension is then unknown.
pub fn span(vectors: &[GF2Vector]) -> Result<GF2Subspace, Gf2Error> {
    GF2Subspace::span_of(vectors)
}

pub fn subspace_index(sub: &GF2Subspace) -> u128 {
    sub.index()
}

pub fn quotient_project(v: &GF2Vector, by: &GF2Subspace) -> Result<GF2Vector, Gf2Error> {
    by.reduce(v)
}

/// Rank of a family of vectors.
pub fn rank(vectors: &[GF2Vector]) -> usize {
    match vectors.first() {
        None => 0,
        Some(v) => GF2Subspace::span(v.dim, vectors)
            .map(|s| s.dim())
            .unwrap_or(0),
    }
}

/// Solves `row_k . x = rhs_k` for all `k`; returns the solution with free
/// variables set to zero.
pub fn solve_dot_system(dim: u8, rows: &[(GF2Vector, bool)]) -> Option<GF2Vector> {
    let mut eqs: Vec<(u64, bool)> = rows.iter().map(|(r, b)| (r.bits, *b)).collect();
    let mut pivots = Vec::new();
    let mut next = 0;
    for bit in 0..dim as usize {
        let m = 1u64 << bit;
        let Some(found) = (next..eqs.len()).find(|&r| eqs[r].0 & m != 0) else {
            continue;
        };
        eqs.swap(next, found);
        let p = eqs[next];
        for (r, e) in eqs.iter_mut().enumerate() {
            if r != next && e.0 & m != 0 {
                e.0 ^= p.0;
                e.1 ^= p.1;
            }
        }
        pivots.push(bit);
        next += 1;
    }
    if eqs[next..].iter().any(|&(_, b)| b) {
        return None;
    }
    let mut x = 0u64;
    for (r, &bit) in pivots.iter().enumerate() {
        if eqs[r].1 {
            x |= 1 << bit;
        }
    }
    Some(GF2Vector { dim, bits: x })
}

/// A functional `f` with `f . c = 1` for every colour `c`, if one exists.
///
/// Such an `f` exists exactly when some change of basis makes every colour
/// a vector of odd weight.
pub fn orientation_functional(colours: &[GF2Vector]) -> Option<GF2Vector> {
    let dim = colours.first()?.dim;
    if colours.iter().any(|c| c.dim != dim) {
        return None;
    }
    let rows: Vec<_> = colours.iter().map(|c| (*c, true)).collect();
    solve_dot_system(dim, &rows)
}

/// An affine map `x -> L x + t` with invertible `L`.
///
/// `rows[i]` is the mask of input coordinates summed into output
/// coordinate `i`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct AffineGF2Map {
    dim: u8,
    rows: Vec<u64>,
    translation: GF2Vector,
}

impl AffineGF2Map {
    pub fn identity(dim: u8) -> Self {
        Self {
            dim,
            rows: (0..dim).map(|i| 1u64 << i).collect(),
            translation: GF2Vector::zero(dim),
        }
    }

    pub fn translation(t: GF2Vector) -> Self {
        Self {
            translation: t,
            ..Self::identity(t.dim)
        }
    }

    pub fn from_rows(dim: u8, rows: Vec<u64>, translation: GF2Vector) -> Result<Self, Gf2Error> {
        if rows.len() != dim as usize {
            return Err(Gf2Error::DimensionMismatch {
                expected: dim,
                found: rows.len() as u8,
            });
        }
        if translation.dim != dim {
            return Err(Gf2Error::DimensionMismatch {
                expected: dim,
                found: translation.dim,
            });
        }
        if rows.iter().any(|r| r & !mask(dim) != 0) {
            return Err(Gf2Error::BadDimension(dim as usize));
        }
        let m = Self {
            dim,
            rows,
            translation,
        };
        if rank(&m.rows.iter().map(|&r| GF2Vector { dim, bits: r }).collect::<Vec<_>>())
            != dim as usize
        {
            return Err(Gf2Error::NotInvertible);
        }
        Ok(m)
    }

    /// The linear map sending `e_k` to `e_{perm[k]}` (0-based images).
    pub fn permutation(perm: &[usize]) -> Self {
        let dim = perm.len() as u8;
        let mut rows = vec![0u64; perm.len()];
        for (k, &img) in perm.iter().enumerate() {
            rows[img] |= 1 << k;
        }
        Self {
            dim,
            rows,
            translation: GF2Vector::zero(dim),
        }
    }

    /// Builds the map sending each `sources[k]` to `targets[k]` on their
    /// span and fixing the standard basis vectors that complete a basis.
    /// Fails if the assignment is not the restriction of an automorphism.
    pub fn extend_linear(
        dim: u8,
        sources: &[GF2Vector],
        targets: &[GF2Vector],
    ) -> Result<Self, Gf2Error> {
        assert_eq!(sources.len(), targets.len());
        // pick an independent subfamily of the sources, completed by units
        let mut span = GF2Subspace::zero(dim);
        let mut src = Vec::new();
        let mut dst = Vec::new();
        for (s, t) in sources.iter().zip(targets) {
            if span.insert(*s) {
                src.push(*s);
                dst.push(*t);
            }
        }
        let mut tspan = GF2Subspace::span(dim, &dst)?;
        if tspan.dim() != src.len() {
            return Err(Gf2Error::NotInvertible);
        }
        // complete source and target bases independently by unit vectors
        for i in 0..dim as usize {
            let e = GF2Vector::unit(dim, i);
            if span.insert(e) {
                src.push(e);
            }
            if tspan.insert(e) {
                dst.push(e);
            }
        }
        // matrix with columns src maps to columns dst: L = D S^{-1}
        let s_inv = Self::from_columns(dim, &src)?.inverse();
        let d = Self::from_columns(dim, &dst)?;
        let l = d.compose(&s_inv);
        for (s, t) in sources.iter().zip(targets) {
            if l.apply(s) != *t {
                return Err(Gf2Error::NotInvertible);
            }
        }
        Ok(l)
    }

    fn from_columns(dim: u8, cols: &[GF2Vector]) -> Result<Self, Gf2Error> {
        let mut rows = vec![0u64; dim as usize];
        for (j, c) in cols.iter().enumerate() {
            for (i, row) in rows.iter_mut().enumerate() {
                if c.get(i) {
                    *row |= 1 << j;
                }
            }
        }
        Self::from_rows(dim, rows, GF2Vector::zero(dim))
    }

    #[inline]
    pub fn dim(&self) -> u8 {
        self.dim
    }

    pub fn rows(&self) -> &[u64] {
        &self.rows
    }

    pub fn translation_part(&self) -> GF2Vector {
        self.translation
    }

    pub fn linear_part(&self) -> AffineGF2Map {
        Self {
            translation: GF2Vector::zero(self.dim),
            ..self.clone()
        }
    }

    pub fn is_translation(&self) -> bool {
        self.rows
            .iter()
            .enumerate()
            .all(|(i, &r)| r == 1u64 << i)
    }

    pub fn apply_linear(&self, x: &GF2Vector) -> GF2Vector {
        debug_assert_eq!(x.dim, self.dim);
        let mut bits = 0u64;
        for (i, &r) in self.rows.iter().enumerate() {
            if (r & x.bits).count_ones() % 2 == 1 {
                bits |= 1 << i;
            }
        }
        GF2Vector {
            dim: self.dim,
            bits,
        }
    }

    pub fn apply(&self, x: &GF2Vector) -> GF2Vector {
        self.apply_linear(x) + self.translation
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &AffineGF2Map) -> AffineGF2Map {
        assert_eq!(self.dim, other.dim);
        let rows = self
            .rows
            .iter()
            .map(|&r| {
                (0..self.dim as usize)
                    .filter(|k| (r >> k) & 1 == 1)
                    .fold(0u64, |acc, k| acc ^ other.rows[k])
            })
            .collect();
        AffineGF2Map {
            dim: self.dim,
            rows,
            translation: self.apply(&other.translation),
        }
    }

    pub fn inverse(&self) -> AffineGF2Map {
        let n = self.dim as usize;
        // Gauss-Jordan on [L | I]
        let mut a = self.rows.clone();
        let mut inv: Vec<u64> = (0..n).map(|i| 1u64 << i).collect();
        for col in 0..n {
            let m = 1u64 << col;
            let p = (col..n)
                .find(|&r| a[r] & m != 0)
                .expect("invertible by construction");
            a.swap(col, p);
            inv.swap(col, p);
            for r in 0..n {
                if r != col && a[r] & m != 0 {
                    a[r] ^= a[col];
                    inv[r] ^= inv[col];
                }
            }
        }
        let lin = AffineGF2Map {
            dim: self.dim,
            rows: inv,
            translation: GF2Vector::zero(self.dim),
        };
        let t = lin.apply(&self.translation);
        AffineGF2Map {
            translation: t,
            ..lin
        }
    }

    /// Parses a coordinate description such as `"(c+1, a, b, e, d+1)"`,
    /// where `a, b, c, ...` name the input coordinates.
    pub fn parse_coordinates(dim: u8, text: &str) -> Result<Self, Gf2Error> {
        let bad = || Gf2Error::BadExpression(text.to_string());
        let inner = text
            .trim()
            .trim_start_matches('(')
            .trim_end_matches(')');
        let parts: Vec<&str> = inner.split(',').map(str::trim).collect();
        if parts.len() != dim as usize || dim > 26 {
            return Err(bad());
        }
        let mut rows = Vec::with_capacity(parts.len());
        let mut t = GF2Vector::zero(dim);
        for (i, part) in parts.iter().enumerate() {
            let mut row = 0u64;
            for term in part.split('+').map(str::trim) {
                match term {
                    "0" => {}
                    "1" => t.bits ^= 1 << i,
                    _ if term.len() == 1 => {
                        let k = (term.as_bytes()[0] as i32) - b'a' as i32;
                        if !(0..dim as i32).contains(&k) {
                            return Err(bad());
                        }
                        row ^= 1 << k;
                    }
                    _ => return Err(bad()),
                }
            }
            rows.push(row);
        }
        Self::from_rows(dim, rows, t)
    }
}

impl fmt::Display for AffineGF2Map {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let letters = self.dim <= 26;
        f.write_str("(")?;
        for (i, &r) in self.rows.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            let mut terms: Vec<String> = (0..self.dim as usize)
                .filter(|k| (r >> k) & 1 == 1)
                .map(|k| {
                    if letters {
                        ((b'a' + k as u8) as char).to_string()
                    } else {
                        format!("x{}", k + 1)
                    }
                })
                .collect();
            if self.translation.get(i) {
                terms.push("1".into());
            }
            if terms.is_empty() {
                terms.push("0".into());
            }
            f.write_str(&terms.join("+"))?;
        }
        f.write_str(")")
    }
}

impl fmt::Debug for AffineGF2Map {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "AffineGF2Map{self}")
    }
}
