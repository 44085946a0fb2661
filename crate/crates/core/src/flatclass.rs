//! Flat manifolds from colourings of Euclidean boxes.
//!
//! The reflection group of the unit box tessellation of `Z^d` acts simply
//! transitively on the boxes, so the box with corner `k` names a unique
//! group element `g_k`. Along each axis `g_k` is `x -> k + x` when `k` is
//! even and `x -> k + 1 - x` when `k` is odd. The colouring sends `g_k` to
//! a label; the deck group is the set of `g_k` with label zero.

use std::collections::{HashSet, VecDeque};
use std::fmt;

use num_rational::Ratio;
use thiserror::Error;

use crate::colouring::{Colouring, ColouringError};
use crate::gf2::{GF2Subspace, GF2Vector};
use crate::polytope::PolytopeKind;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FlatError {
    #[error(transparent)]
    Colouring(#[from] ColouringError),
    #[error("expected a box colouring of dimension {0}")]
    WrongDimension(usize),
    #[error("box walk exceeded radius {0} without closing up")]
    RadiusCap(usize),
}

/// A subgroup of `Z^d` in Hermite normal form.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IntLattice {
    dim: usize,
    basis: Vec<Vec<i64>>,
}

impl IntLattice {
    pub fn zero(dim: usize) -> Self {
        Self {
            dim,
            basis: Vec::new(),
        }
    }

    pub fn from_generators(dim: usize, gens: &[Vec<i64>]) -> Self {
        let mut rows: Vec<Vec<i64>> = gens
            .iter()
            .filter(|g| g.iter().any(|&x| x != 0))
            .cloned()
            .collect();
        let mut basis = Vec::new();
        for col in 0..dim {
            // gcd-reduce the column among remaining rows
            loop {
                let nz: Vec<usize> = (0..rows.len()).filter(|&r| rows[r][col] != 0).collect();
                if nz.len() <= 1 {
                    break;
                }
                let &p = nz
                    .iter()
                    .min_by_key(|&&r| rows[r][col].abs())
                    .expect("non-empty");
                let pivot = rows[p].clone();
                for &r in &nz {
                    if r != p {
                        let q = rows[r][col].div_euclid(pivot[col]);
                        for (x, y) in rows[r].iter_mut().zip(&pivot) {
                            *x -= q * y;
                        }
                    }
                }
            }
            if let Some(r) = (0..rows.len()).find(|&r| rows[r][col] != 0) {
                let mut row = rows.swap_remove(r);
                if row[col] < 0 {
                    row.iter_mut().for_each(|x| *x = -*x);
                }
                basis.push(row);
            }
            rows.retain(|r| r.iter().any(|&x| x != 0));
        }
        // reduce entries above each pivot
        for i in 0..basis.len() {
            let col = basis[i].iter().position(|&x| x != 0).unwrap();
            for j in 0..i {
                let q = basis[j][col].div_euclid(basis[i][col]);
                if q != 0 {
                    let bi = basis[i].clone();
                    for (x, y) in basis[j].iter_mut().zip(&bi) {
                        *x -= q * y;
                    }
                }
            }
        }
        Self { dim, basis }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Vec<i64>] {
        &self.basis
    }

    pub fn is_full_rank(&self) -> bool {
        self.basis.len() == self.dim
    }

    /// Covolume of a full-rank lattice.
    pub fn determinant(&self) -> Option<i64> {
        self.is_full_rank().then(|| {
            self.basis
                .iter()
                .map(|r| *r.iter().find(|&&x| x != 0).unwrap())
                .product()
        })
    }

    pub fn contains(&self, v: &[i64]) -> bool {
        let mut v = v.to_vec();
        for row in &self.basis {
            let col = row.iter().position(|&x| x != 0).unwrap();
            if v[col] % row[col] != 0 {
                return false;
            }
            let q = v[col] / row[col];
            for (x, y) in v.iter_mut().zip(row) {
                *x -= q * y;
            }
        }
        v.iter().all(|&x| x == 0)
    }

    pub fn join(&self, other: &IntLattice) -> IntLattice {
        let gens: Vec<Vec<i64>> = self.basis.iter().chain(&other.basis).cloned().collect();
        Self::from_generators(self.dim, &gens)
    }

    /// Representative of `v` modulo the lattice, reduced into the box
    /// `0 <= v[pivot] < pivot value` along pivot columns.
    pub fn reduce(&self, v: &[i64]) -> Vec<i64> {
        let mut v = v.to_vec();
        for row in &self.basis {
            let col = row.iter().position(|&x| x != 0).unwrap();
            let q = v[col].div_euclid(row[col]);
            for (x, y) in v.iter_mut().zip(row) {
                *x -= q * y;
            }
        }
        v
    }
}

impl fmt::Display for IntLattice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = self.basis.iter().map(|r| fmt_vec(r)).collect();
        write!(f, "<{}>", rows.join(", "))
    }
}

impl fmt::Debug for IntLattice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "IntLattice{self}")
    }
}

fn fmt_vec(v: &[i64]) -> String {
    let parts: Vec<String> = v.iter().map(|x| x.to_string()).collect();
    format!("({})", parts.join(","))
}

/// An isometry `x -> A x + t` with `A` a signed permutation matrix.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct EuclideanIsometry {
    pub linear: Vec<Vec<i64>>,
    pub translation: Vec<i64>,
}

impl EuclideanIsometry {
    pub fn identity(d: usize) -> Self {
        Self {
            linear: (0..d)
                .map(|i| (0..d).map(|j| (i == j) as i64).collect())
                .collect(),
            translation: vec![0; d],
        }
    }

    pub fn translation(t: Vec<i64>) -> Self {
        Self {
            translation: t.clone(),
            ..Self::identity(t.len())
        }
    }

    pub fn diagonal(signs: &[i64], t: Vec<i64>) -> Self {
        let d = signs.len();
        Self {
            linear: (0..d)
                .map(|i| (0..d).map(|j| if i == j { signs[i] } else { 0 }).collect())
                .collect(),
            translation: t,
        }
    }

    pub fn dim(&self) -> usize {
        self.translation.len()
    }

    /// The group element carrying the base box to the box at corner `k`.
    pub fn of_box(k: &[i64]) -> Self {
        let signs: Vec<i64> = k.iter().map(|&x| if x.rem_euclid(2) == 0 { 1 } else { -1 }).collect();
        let t = k
            .iter()
            .map(|&x| if x.rem_euclid(2) == 0 { x } else { x + 1 })
            .collect();
        Self::diagonal(&signs, t)
    }

    pub fn apply(&self, x: &[i64]) -> Vec<i64> {
        self.linear
            .iter()
            .zip(&self.translation)
            .map(|(row, t)| row.iter().zip(x).map(|(a, b)| a * b).sum::<i64>() + t)
            .collect()
    }

    fn apply_linear(&self, x: &[i64]) -> Vec<i64> {
        self.linear
            .iter()
            .map(|row| row.iter().zip(x).map(|(a, b)| a * b).sum())
            .collect()
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &EuclideanIsometry) -> EuclideanIsometry {
        let d = self.dim();
        let linear = (0..d)
            .map(|i| {
                (0..d)
                    .map(|j| (0..d).map(|k| self.linear[i][k] * other.linear[k][j]).sum())
                    .collect()
            })
            .collect();
        EuclideanIsometry {
            linear,
            translation: self.apply(&other.translation),
        }
    }

    pub fn inverse(&self) -> EuclideanIsometry {
        let d = self.dim();
        // orthogonal, so the inverse linear part is the transpose
        let linear: Vec<Vec<i64>> = (0..d)
            .map(|i| (0..d).map(|j| self.linear[j][i]).collect())
            .collect();
        let lin = EuclideanIsometry {
            linear,
            translation: vec![0; d],
        };
        let t = lin.apply_linear(&self.translation);
        EuclideanIsometry {
            translation: t.iter().map(|x| -x).collect(),
            ..lin
        }
    }

    pub fn is_translation(&self) -> bool {
        self.linear == Self::identity(self.dim()).linear
    }

    /// Conjugate by the translation `x -> x + c`: the same map written in
    /// coordinates centred at `c`.
    pub fn centred_at(&self, c: &[i64]) -> EuclideanIsometry {
        let shift = EuclideanIsometry::translation(c.to_vec());
        shift.inverse().compose(self).compose(&shift)
    }

    pub fn determinant_sign(&self) -> i64 {
        // signed permutation: product of signs times the permutation sign
        let d = self.dim();
        let mut perm = vec![0; d];
        let mut sign = 1;
        for (i, row) in self.linear.iter().enumerate() {
            let j = row.iter().position(|&x| x != 0).expect("signed permutation");
            perm[i] = j;
            sign *= row[j];
        }
        let mut seen = vec![false; d];
        for s in 0..d {
            if seen[s] {
                continue;
            }
            let mut len = 0;
            let mut i = s;
            while !seen[i] {
                seen[i] = true;
                i = perm[i];
                len += 1;
            }
            if len % 2 == 0 {
                sign = -sign;
            }
        }
        sign
    }
}

impl fmt::Display for EuclideanIsometry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        const NAMES: [&str; 6] = ["x", "y", "z", "w", "v", "u"];
        let mut parts = Vec::new();
        for (row, t) in self.linear.iter().zip(&self.translation) {
            let mut s = String::new();
            for (j, &a) in row.iter().enumerate() {
                match a {
                    0 => {}
                    1 => s.push_str(&format!("{}{}", if s.is_empty() { "" } else { "+" }, NAMES[j])),
                    -1 => s.push_str(&format!("-{}", NAMES[j])),
                    _ => s.push_str(&format!("{a:+}{}", NAMES[j])),
                }
            }
            if *t != 0 || s.is_empty() {
                if s.is_empty() {
                    s = t.to_string();
                } else {
                    s.push_str(&format!("{t:+}"));
                }
            }
            parts.push(s);
        }
        write!(f, "({})", parts.join(","))
    }
}

impl fmt::Debug for EuclideanIsometry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "EuclideanIsometry{self}")
    }
}

/// A crystallographic group given by generators, with its point group,
/// coset representatives and translation lattice.
#[derive(Debug, Clone)]
pub struct DeckGroup {
    dim: usize,
    generators: Vec<EuclideanIsometry>,
    point_group: Vec<Vec<Vec<i64>>>,
    reps: Vec<EuclideanIsometry>,
    lattice: IntLattice,
}

impl PartialEq for DeckGroup {
    fn eq(&self, other: &Self) -> bool {
        self.same_group(other)
    }
}

impl Eq for DeckGroup {}

impl DeckGroup {
    pub fn new(dim: usize, generators: Vec<EuclideanIsometry>) -> Self {
        // point group and a coset representative for each of its elements
        let mut reps = vec![EuclideanIsometry::identity(dim)];
        let mut point_group = vec![reps[0].linear.clone()];
        let mut i = 0;
        while i < reps.len() {
            let r = reps[i].clone();
            i += 1;
            for g in &generators {
                let h = g.compose(&r);
                if !point_group.contains(&h.linear) {
                    point_group.push(h.linear.clone());
                    reps.push(h);
                }
            }
        }
        // Schreier generators of the translation subgroup
        let mut trans = Vec::new();
        for r in &reps {
            for g in &generators {
                let h = g.compose(r);
                let k = point_group.iter().position(|p| *p == h.linear).unwrap();
                let t = reps[k].inverse().compose(&h);
                debug_assert!(t.is_translation());
                trans.push(t.translation);
            }
        }
        let lattice = IntLattice::from_generators(dim, &trans);
        Self {
            dim,
            generators,
            point_group,
            reps,
            lattice,
        }
    }

    pub fn generators(&self) -> &[EuclideanIsometry] {
        &self.generators
    }

    pub fn lattice(&self) -> &IntLattice {
        &self.lattice
    }

    pub fn point_group_order(&self) -> usize {
        self.point_group.len()
    }

    pub fn point_group(&self) -> &[Vec<Vec<i64>>] {
        &self.point_group
    }

    pub fn contains(&self, g: &EuclideanIsometry) -> bool {
        match self.point_group.iter().position(|p| *p == g.linear) {
            Some(k) => self.lattice.contains(&self.reps[k].inverse().compose(g).translation),
            None => false,
        }
    }

    pub fn same_group(&self, other: &DeckGroup) -> bool {
        self.generators.iter().all(|g| other.contains(g))
            && other.generators.iter().all(|g| self.contains(g))
    }

    /// Covolume, when the translation lattice has full rank.
    pub fn volume(&self) -> Option<Ratio<i64>> {
        self.lattice
            .determinant()
            .map(|d| Ratio::new(d, self.point_group.len() as i64))
    }

    pub fn dim(&self) -> usize {
        self.dim
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum WolfType {
    Torus,
    G2,
    Other,
}

impl fmt::Display for WolfType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            WolfType::Torus => "torus",
            WolfType::G2 => "G2",
            WolfType::Other => "other",
        })
    }
}

#[derive(Debug, Clone)]
pub struct FlatManifoldData {
    pub dim: usize,
    pub deck_generators: Vec<EuclideanIsometry>,
    pub volume: i64,
    pub wolf_type: WolfType,
    pub lattice: IntLattice,
    pub point_group_order: usize,
    pub group: DeckGroup,
}

/// Label of the box at corner `k`.
pub fn box_label(c: &Colouring, k: &[i64]) -> GF2Vector {
    let mut v = GF2Vector::zero(c.dim());
    for (a, &x) in k.iter().enumerate() {
        let (c0, c1) = (c.colour(2 * a), c.colour(2 * a + 1));
        v += match x.rem_euclid(4) {
            0 => GF2Vector::zero(c.dim()),
            1 => c1,
            2 => c0 + c1,
            _ => c0,
        };
    }
    v
}

fn box_dim(c: &Colouring) -> Result<usize, FlatError> {
    match c.polytope().kind {
        PolytopeKind::Box(d) => Ok(d),
        PolytopeKind::P4 => Err(FlatError::WrongDimension(3)),
    }
}

/// Colour carried by the wall crossed when leaving box `k` along axis `a`
/// in direction `dir`.
fn wall_colour(c: &Colouring, a: usize, k: i64, dir: i64) -> GF2Vector {
    let even = k.rem_euclid(2) == 0;
    let side = match (dir > 0, even) {
        (true, true) | (false, false) => 1,
        _ => 0,
    };
    c.colour(2 * a + side)
}

/// Walks the box tessellation outwards from the base box, emitting the
/// group element of each further box labelled zero that is not yet in
/// the group generated so far, until the generated group has covolume
/// `2^image_dim`.
pub fn box_walk_deck_group(c: &Colouring) -> Result<FlatManifoldData, FlatError> {
    let d = box_dim(c)?;
    let verdict = c.check_proper();
    if !verdict.is_proper() {
        return Err(ColouringError::Improper(verdict).into());
    }
    if c.is_orientable().is_none() {
        return Err(ColouringError::NotOrientable.into());
    }
    let target = Ratio::from_integer(1i64 << c.image_dim());
    let cap = 4usize << c.image_dim();
    let origin = vec![0i64; d];
    let mut seen: HashSet<Vec<i64>> = HashSet::from([origin.clone()]);
    let mut queue = VecDeque::from([(origin, GF2Vector::zero(c.dim()))]);
    let mut gens: Vec<EuclideanIsometry> = Vec::new();
    let mut group = DeckGroup::new(d, Vec::new());
    while let Some((k, label)) = queue.pop_front() {
        let radius = k.iter().map(|x| x.unsigned_abs() as usize).sum::<usize>();
        if radius > cap {
            return Err(FlatError::RadiusCap(cap));
        }
        debug_assert_eq!(label, box_label(c, &k));
        if label.is_zero() && radius > 0 {
            let g = EuclideanIsometry::of_box(&k);
            debug_assert!(faces_match(c, &k, &g));
            if !group.contains(&g) {
                gens.push(g);
                group = DeckGroup::new(d, gens.clone());
                if group.volume() == Some(target) {
                    let wolf_type = match group.point_group_order() {
                        1 => WolfType::Torus,
                        2 if d == 3 => WolfType::G2,
                        _ => WolfType::Other,
                    };
                    return Ok(FlatManifoldData {
                        dim: d,
                        deck_generators: gens,
                        volume: *target.numer(),
                        wolf_type,
                        lattice: group.lattice().clone(),
                        point_group_order: group.point_group_order(),
                        group,
                    });
                }
            }
        }
        for a in 0..d {
            for dir in [1i64, -1] {
                let mut next = k.clone();
                next[a] += dir;
                if seen.insert(next.clone()) {
                    let l = label + wall_colour(c, a, k[a], dir);
                    queue.push_back((next, l));
                }
            }
        }
    }
    unreachable!("the walk is unbounded")
}

/// Whether `g` carries each face of the base box to a face of box `k`
/// with the same colour.
fn faces_match(c: &Colouring, k: &[i64], g: &EuclideanIsometry) -> bool {
    (0..k.len()).all(|a| {
        (0..2i64).all(|side| {
            let mut p = vec![0i64; k.len()];
            p[a] = side;
            let plane = g.apply(&p)[a];
            let dir = if plane == k[a] { -1 } else { 1 };
            wall_colour(c, a, k[a], dir) == c.colour(2 * a + side as usize)
        })
    })
}

/// The point group computed algebraically: sign patterns `e` with an even
/// number of flips whose sum of side-0 colours lies in the span of the
/// opposite-pair sums.
pub fn algebraic_point_group(c: &Colouring) -> Result<Vec<u32>, FlatError> {
    let d = box_dim(c)?;
    let mut dspan = GF2Subspace::zero(c.dim());
    for a in 0..d {
        dspan.insert(c.colour(2 * a) + c.colour(2 * a + 1));
    }
    Ok((0..1u32 << d)
        .filter(|&e| {
            let v = (0..d)
                .filter(|a| (e >> a) & 1 == 1)
                .fold(GF2Vector::zero(c.dim()), |acc, a| acc + c.colour(2 * a));
            dspan.contains(&v)
        })
        .collect())
}

/// The spans of opposite face pairs of a cube colouring.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubspaceTriple {
    pub v: [GF2Subspace; 3],
}

impl SubspaceTriple {
    pub fn of(c: &Colouring) -> Result<Self, FlatError> {
        if box_dim(c)? != 3 {
            return Err(FlatError::WrongDimension(3));
        }
        Ok(Self {
            v: [0, 1, 2].map(|a| c.span_of(&[2 * a, 2 * a + 1])),
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CubeClass {
    ThreeTorus,
    HyperellipticBundle,
    /// Neither of the two: the point group has order four.
    Other,
}

impl CubeClass {
    pub fn wolf_type(self) -> WolfType {
        match self {
            CubeClass::ThreeTorus => WolfType::Torus,
            CubeClass::HyperellipticBundle => WolfType::G2,
            CubeClass::Other => WolfType::Other,
        }
    }
}

impl fmt::Display for CubeClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CubeClass::ThreeTorus => "3-torus",
            CubeClass::HyperellipticBundle => "hyperelliptic torus bundle",
            CubeClass::Other => "other",
        })
    }
}

/// Which torus criterion applies, if any, along which axis.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TorusWitness {
    TrivialIntersection(usize),
    EvenSum(usize),
}

pub fn torus_witness(c: &Colouring) -> Result<Option<TorusWitness>, FlatError> {
    let t = SubspaceTriple::of(c)?;
    for a in 0..3 {
        let (b, d) = ((a + 1) % 3, (a + 2) % 3);
        let rest = t.v[b].sum(&t.v[d]);
        let meet = t.v[a].intersection(&rest);
        if meet.dim() == 0 {
            return Ok(Some(TorusWitness::TrivialIntersection(a)));
        }
        if meet.dim() == 1 && t.v[a].dim() == 2 {
            let w = meet.basis()[0];
            let pair = |x: usize| c.colour(2 * x) + c.colour(2 * x + 1);
            if w == pair(a) {
                let even = [pair(b), GF2Vector::zero(c.dim())];
                let even_c = [pair(d), GF2Vector::zero(c.dim())];
                if even
                    .iter()
                    .any(|wb| even_c.iter().any(|wc| *wb + *wc == w))
                {
                    return Ok(Some(TorusWitness::EvenSum(a)));
                }
            }
        }
    }
    Ok(None)
}

/// Classification of the flat 3-manifold of a proper orientable cube
/// colouring by intersections of the opposite-pair spans.
pub fn classify_cube_colouring(c: &Colouring) -> Result<CubeClass, FlatError> {
    if box_dim(c)? != 3 {
        return Err(FlatError::WrongDimension(3));
    }
    let verdict = c.check_proper();
    if !verdict.is_proper() {
        return Err(ColouringError::Improper(verdict).into());
    }
    if c.is_orientable().is_none() {
        return Err(ColouringError::NotOrientable.into());
    }
    if torus_witness(c)?.is_some() {
        return Ok(CubeClass::ThreeTorus);
    }
    Ok(match algebraic_point_group(c)?.len() {
        4 => CubeClass::Other,
        _ => CubeClass::HyperellipticBundle,
    })
}

/// The nearest box (in walk order) whose label is `v` and whose corner
/// has the parity pattern `parity` (bit `a` set for odd coordinates).
pub fn realise_label(c: &Colouring, v: &GF2Vector, parity: u32) -> Result<Option<Vec<i64>>, FlatError> {
    let d = box_dim(c)?;
    // labels are periodic modulo 4 in every coordinate
    let mut best: Option<Vec<i64>> = None;
    let range: Vec<i64> = vec![0, 1, -1, 2, -2, 3, -3];
    let mut k = vec![0i64; d];
    fn rec(
        c: &Colouring,
        v: &GF2Vector,
        parity: u32,
        range: &[i64],
        a: usize,
        k: &mut Vec<i64>,
        best: &mut Option<Vec<i64>>,
    ) {
        if a == k.len() {
            if box_label(c, k) == *v {
                let norm = |x: &Vec<i64>| x.iter().map(|y| y.abs()).sum::<i64>();
                if best.as_ref().is_none_or(|b| norm(k) < norm(b)) {
                    *best = Some(k.clone());
                }
            }
            return;
        }
        for &x in range {
            if (x.rem_euclid(2) == 1) == ((parity >> a) & 1 == 1) {
                k[a] = x;
                rec(c, v, parity, range, a + 1, k, best);
            }
        }
    }
    rec(c, v, parity, &range, 0, &mut k, &mut best);
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polytope::build_box;
    use std::sync::Arc;

    fn boxc(d: usize, colours: &[&str]) -> Colouring {
        Colouring::from_strs(Arc::new(build_box(d).unwrap()), colours).unwrap()
    }

    fn fig1() -> Colouring {
        boxc(3, &["001", "111", "100", "100", "010", "010"])
    }

    #[test]
    fn hnf_basics() {
        let l = IntLattice::from_generators(3, &[vec![2, 2, 0], vec![2, 0, 2], vec![0, 2, 2]]);
        assert_eq!(l.determinant(), Some(16));
        assert!(l.contains(&[4, 0, 0]));
        assert!(!l.contains(&[2, 0, 0]));
        let m = IntLattice::from_generators(3, &[vec![2, 2, 0], vec![2, -2, 0], vec![2, 0, 2]]);
        assert_eq!(l, m);
        assert_eq!(l.reduce(&[5, 1, 1]), vec![1, 1, 1]);
    }

    #[test]
    fn isometry_algebra() {
        let g = EuclideanIsometry::of_box(&[2, -1, -1]);
        assert_eq!(g, EuclideanIsometry::diagonal(&[1, -1, -1], vec![2, 0, 0]));
        assert_eq!(g.to_string(), "(x+2,-y,-z)");
        let h = EuclideanIsometry::of_box(&[1, 3, 0]);
        assert_eq!(g.compose(&h).compose(&h.inverse()), g);
        assert_eq!(g.determinant_sign(), 1);
        assert_eq!(EuclideanIsometry::of_box(&[1, 0, 0]).determinant_sign(), -1);
    }

    #[test]
    fn labels_are_homomorphic() {
        // label(g_k) + label(g_m) = label of g_k ∘ g_m's box
        let c = fig1();
        for k in [[1i64, 0, 2], [3, -1, 1], [-2, 2, -3]] {
            for m in [[0i64, 1, 1], [2, -3, 0]] {
                let g = EuclideanIsometry::of_box(&k).compose(&EuclideanIsometry::of_box(&m));
                let corner = g.apply(&[0, 0, 0]);
                let corner: Vec<i64> = corner
                    .iter()
                    .zip(&g.linear)
                    .enumerate()
                    .map(|(i, (x, row))| if row[i] < 0 { x - 1 } else { *x })
                    .collect();
                assert_eq!(box_label(&c, &corner), box_label(&c, &k) + box_label(&c, &m));
            }
        }
    }

    #[test]
    fn fig1_walk() {
        let data = box_walk_deck_group(&fig1()).unwrap();
        assert_eq!(data.volume, 8);
        assert_eq!(data.wolf_type, WolfType::G2);
        let expected = DeckGroup::new(
            3,
            vec![
                EuclideanIsometry::diagonal(&[1, -1, -1], vec![2, 0, 0]),
                EuclideanIsometry::translation(vec![0, 2, 0]),
                EuclideanIsometry::translation(vec![0, 0, 2]),
            ],
        );
        assert!(data.group.same_group(&expected));
        assert_eq!(classify_cube_colouring(&fig1()).unwrap(), CubeClass::HyperellipticBundle);
    }

    #[test]
    fn fig4_walk() {
        let c = boxc(3, &["11100", "00111", "01101", "10110", "10101", "01110"]);
        let data = box_walk_deck_group(&c).unwrap();
        assert_eq!(data.wolf_type, WolfType::Torus);
        assert_eq!(data.volume, 16);
        let l = IntLattice::from_generators(3, &[vec![2, 2, 0], vec![2, 0, 2], vec![0, 2, 2]]);
        assert_eq!(data.lattice, l);
        assert_eq!(torus_witness(&c).unwrap(), Some(TorusWitness::EvenSum(0)));
        assert_eq!(classify_cube_colouring(&c).unwrap(), CubeClass::ThreeTorus);
    }

    #[test]
    fn square_walk() {
        let c = boxc(2, &["1000", "0100", "0010", "1110"]);
        let data = box_walk_deck_group(&c).unwrap();
        assert_eq!(data.volume, 8);
        assert_eq!(
            data.lattice,
            IntLattice::from_generators(2, &[vec![2, 2], vec![2, -2]])
        );
    }

    #[test]
    fn basis_cube_is_torus() {
        let c = boxc(3, &["100", "100", "010", "010", "001", "001"]);
        assert_eq!(
            torus_witness(&c).unwrap(),
            Some(TorusWitness::TrivialIntersection(0))
        );
        let data = box_walk_deck_group(&c).unwrap();
        assert_eq!(data.wolf_type, WolfType::Torus);
        assert_eq!(data.volume, 8);
    }

    #[test]
    fn hantzsche_wendt_colouring() {
        let c = boxc(3, &["1000", "1110", "0010", "0001", "0100", "1101"]);
        // a = e1, c = e3, d = e4, e = e2 in this basis
        assert!(c.is_proper());
        assert!(c.is_orientable().is_some());
        let data = box_walk_deck_group(&c).unwrap();
        assert_eq!(data.point_group_order, 4);
        assert_eq!(data.wolf_type, WolfType::Other);
        assert_eq!(classify_cube_colouring(&c).unwrap(), CubeClass::Other);
    }

    #[test]
    fn realise_labels() {
        let c = fig1();
        let k = realise_label(&c, &GF2Vector::zero(3), 0b110).unwrap().unwrap();
        assert_eq!(box_label(&c, &k), GF2Vector::zero(3));
        assert_eq!(k.iter().map(|x| x.rem_euclid(2)).collect::<Vec<_>>(), vec![0, 1, 1]);
    }
}
