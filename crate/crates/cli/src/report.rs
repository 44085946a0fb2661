//! Machine-readable reports. Every report carries `version` and round-trips
//! through JSON.

use std::fmt::Write as _;

use colourings::colouring::Colouring;
use colourings::flatclass::{box_walk_deck_group, classify_cube_colouring, torus_witness};
use colourings::mutation::{Mutation, MutantReport};
use colourings::oracle::DevelopingGraph;
use colourings::polytope::{K5Encoding, PolytopeKind};
use serde::{Deserialize, Serialize};

pub const VERSION: u32 = 1;

fn flag(agree: bool) -> &'static str {
    if agree {
        "AGREE"
    } else {
        "DISAGREE"
    }
}

fn yes(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn vectors(vs: &[Vec<i64>]) -> String {
    let parts: Vec<String> = vs
        .iter()
        .map(|v| {
            let xs: Vec<String> = v.iter().map(|x| x.to_string()).collect();
            format!("({})", xs.join(","))
        })
        .collect();
    parts.join(", ")
}

/// A value computed by formula next to the same value from the oracle.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Compared<T> {
    pub formula: T,
    pub oracle: T,
}

impl<T: PartialEq + std::fmt::Display> Compared<T> {
    pub fn agree(&self) -> bool {
        self.formula == self.oracle
    }

    fn cell(&self) -> String {
        format!("{} | {} {}", self.formula, self.oracle, flag(self.agree()))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InputEcho {
    pub polytope: String,
    pub dim: u8,
    /// `(facet id, colour)` in facet order.
    pub colours: Vec<(String, String)>,
}

impl InputEcho {
    pub fn of(c: &Colouring) -> Self {
        Self {
            polytope: c.polytope().name.clone(),
            dim: c.dim(),
            colours: c
                .polytope()
                .ids
                .iter()
                .zip(c.colours())
                .map(|(id, col)| (id.clone(), col.to_string()))
                .collect(),
        }
    }
}

/// Names of the failing vertex and ideal-edge constraints.
pub fn violations(c: &Colouring) -> Vec<String> {
    let p = c.polytope();
    let v = c.check_proper();
    let ids = |set: &[usize]| {
        set.iter().map(|&f| p.ids[f].as_str()).collect::<Vec<_>>().join(" ")
    };
    let mut out = Vec::new();
    for &k in &v.vertex_violations {
        let set = &p.simple_vertices[k];
        if p.kind == PolytopeKind::P4 {
            let enc = K5Encoding::default();
            let centre = (0..5).find(|&x| set.iter().all(|&f| enc.touches(f, x)));
            if let Some(x) = centre {
                out.push(format!("vertex star {}: {}", x + 1, ids(set)));
                continue;
            }
        }
        out.push(format!("vertex {}", ids(set)));
    }
    for &k in &v.edge_violations {
        out.push(format!("ideal edge {}", ids(&p.ideal_edges[k])));
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckReport {
    pub version: u32,
    pub input: InputEcho,
    pub proper: bool,
    pub violations: Vec<String>,
    pub orientable: bool,
    pub orientation_witness: Option<String>,
}

impl CheckReport {
    pub fn of(c: &Colouring) -> Self {
        let witness = c.is_orientable();
        Self {
            version: VERSION,
            input: InputEcho::of(c),
            proper: c.is_proper(),
            violations: violations(c),
            orientable: witness.is_some(),
            orientation_witness: witness.map(|w| w.to_string()),
        }
    }

    pub fn text(&self) -> String {
        let mut s = String::new();
        writeln!(s, "polytope {} dim {}", self.input.polytope, self.input.dim).unwrap();
        writeln!(s, "proper: {}", yes(self.proper)).unwrap();
        for v in &self.violations {
            writeln!(s, "  violated: {v}").unwrap();
        }
        match &self.orientation_witness {
            Some(w) => writeln!(s, "orientable: yes (functional {w})").unwrap(),
            None => writeln!(s, "orientable: no").unwrap(),
        }
        s
    }
}

/// A closed flat manifold tiled by boxes: formula classification beside
/// the walk oracle.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FlatReport {
    pub volume: i64,
    pub walk_type: String,
    pub classifier: Option<String>,
    pub torus_witness: Option<String>,
    pub lattice: Vec<Vec<i64>>,
    pub deck_generators: Vec<String>,
    pub point_group_order: usize,
}

impl FlatReport {
    pub fn of(c: &Colouring) -> Result<Self, String> {
        let walk = box_walk_deck_group(c).map_err(|e| e.to_string())?;
        let cube = c.polytope().kind == PolytopeKind::Box(3) && c.is_orientable().is_some();
        let (classifier, witness) = if cube {
            let class = classify_cube_colouring(c).map_err(|e| e.to_string())?;
            let w = torus_witness(c).map_err(|e| e.to_string())?;
            (Some(class.wolf_type().to_string()), w.map(|w| format!("{w:?}")))
        } else {
            (None, None)
        };
        Ok(Self {
            volume: walk.volume,
            walk_type: walk.wolf_type.to_string(),
            classifier,
            torus_witness: witness,
            lattice: walk.lattice.basis().to_vec(),
            deck_generators: walk.deck_generators.iter().map(|g| g.to_string()).collect(),
            point_group_order: walk.point_group_order,
        })
    }

    pub fn agree(&self) -> bool {
        self.classifier.as_ref().is_none_or(|c| *c == self.walk_type)
    }

    fn text(&self, indent: &str) -> String {
        let mut s = String::new();
        match &self.classifier {
            Some(c) => writeln!(
                s,
                "{indent}flat type: {c} | {} {}",
                self.walk_type,
                flag(self.agree())
            )
            .unwrap(),
            None => writeln!(s, "{indent}flat type (walk): {}", self.walk_type).unwrap(),
        }
        writeln!(s, "{indent}volume: {}", self.volume).unwrap();
        writeln!(s, "{indent}lattice: {}", vectors(&self.lattice)).unwrap();
        writeln!(s, "{indent}deck generators: {}", self.deck_generators.join(", ")).unwrap();
        s
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FacetCusp {
    pub vertex: usize,
    pub count: u64,
    pub squares: i64,
    pub lattice: Vec<Vec<i64>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HypersurfaceRow {
    pub facet: String,
    pub colour: String,
    pub lifts: Compared<u64>,
    pub two_sided: Compared<bool>,
    pub separating: Compared<bool>,
    pub cusps: Vec<FacetCusp>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CuspRow {
    pub vertex: usize,
    pub facets: Vec<String>,
    pub count: Compared<u64>,
    pub cubes_per_cusp: Vec<usize>,
    pub flat: Option<FlatReport>,
}

impl CuspRow {
    pub fn agree(&self) -> bool {
        self.count.agree() && self.flat.as_ref().is_none_or(FlatReport::agree)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AnalyzeReport {
    pub version: u32,
    pub check: CheckReport,
    pub copies: u64,
    pub euler_characteristic: Option<String>,
    pub hypersurfaces: Vec<HypersurfaceRow>,
    pub cusps: Vec<CuspRow>,
    pub flat: Option<FlatReport>,
}

impl AnalyzeReport {
    /// Requires a proper colouring.
    pub fn of(c: &Colouring) -> Result<Self, String> {
        let e = |x: &dyn std::fmt::Display| x.to_string();
        let p = c.polytope();
        let dg = DevelopingGraph::build(c).map_err(|x| e(&x))?;
        let mut hypersurfaces = Vec::new();
        for f in 0..p.facet_count() {
            let h = c.hypersurface_report(f).map_err(|x| e(&x))?;
            let mut cusps = Vec::new();
            if p.kind == PolytopeKind::P4 {
                let induced = c.induced_facet_colouring(f).map_err(|x| e(&x))?;
                for w in induced.ideal_vertices() {
                    let (square, _) = induced.square_colouring(w).map_err(|x| e(&x))?;
                    let walk = box_walk_deck_group(&square).map_err(|x| e(&x))?;
                    cusps.push(FacetCusp {
                        vertex: w + 1,
                        count: induced.cusp_count(w).map_err(|x| e(&x))? as u64,
                        squares: walk.volume,
                        lattice: walk.lattice.basis().to_vec(),
                    });
                }
            }
            hypersurfaces.push(HypersurfaceRow {
                facet: p.ids[f].clone(),
                colour: c.colour(f).to_string(),
                lifts: Compared {
                    formula: h.lift_count as u64,
                    oracle: dg.hypersurface_components(f).map_err(|x| e(&x))?.count as u64,
                },
                two_sided: Compared {
                    formula: h.two_sided,
                    oracle: dg.two_sided_by_tube(f).map_err(|x| e(&x))?,
                },
                separating: Compared {
                    formula: h.colour_class_separates,
                    oracle: dg.separates_by_cut(&c.colour(f)),
                },
                cusps,
            });
        }
        let mut cusps = Vec::new();
        for w in 0..p.ideal_vertices.len() {
            let comps = dg.cusp_components(w).map_err(|x| e(&x))?;
            let (cube, _) = c.induced_vertex_figure_colouring(w).map_err(|x| e(&x))?;
            cusps.push(CuspRow {
                vertex: w + 1,
                facets: p.ideal_vertices[w].iter().map(|&f| p.ids[f].clone()).collect(),
                count: Compared {
                    formula: c.cusp_count(w) as u64,
                    oracle: comps.count as u64,
                },
                cubes_per_cusp: comps.sizes,
                flat: FlatReport::of(&cube).ok(),
            });
        }
        let flat = match p.kind {
            PolytopeKind::Box(_) => Some(FlatReport::of(c)?),
            PolytopeKind::P4 => None,
        };
        Ok(Self {
            version: VERSION,
            check: CheckReport::of(c),
            copies: c.copies() as u64,
            euler_characteristic: c.euler_characteristic_p4().ok().map(|x| x.to_string()),
            hypersurfaces,
            cusps,
            flat,
        })
    }

    pub fn all_agree(&self) -> bool {
        self.hypersurfaces
            .iter()
            .all(|h| h.lifts.agree() && h.two_sided.agree() && h.separating.agree())
            && self.cusps.iter().all(CuspRow::agree)
            && self.flat.as_ref().is_none_or(FlatReport::agree)
    }

    pub fn text(&self) -> String {
        let mut s = self.check.text();
        writeln!(s, "copies: {}", self.copies).unwrap();
        if let Some(x) = &self.euler_characteristic {
            writeln!(s, "euler characteristic: {x}").unwrap();
        }
        writeln!(s, "hypersurfaces (formula | oracle):").unwrap();
        for h in &self.hypersurfaces {
            writeln!(
                s,
                "  {} [{}] lifts {}; two-sided {}; separating {}",
                h.facet,
                h.colour,
                h.lifts.cell(),
                h.two_sided.cell(),
                h.separating.cell()
            )
            .unwrap();
            for fc in &h.cusps {
                writeln!(
                    s,
                    "    ideal vertex {}: {} cusps of {} squares, lattice {}",
                    fc.vertex,
                    fc.count,
                    fc.squares,
                    vectors(&fc.lattice)
                )
                .unwrap();
            }
        }
        if !self.cusps.is_empty() {
            writeln!(s, "cusps (formula | oracle):").unwrap();
            for c in &self.cusps {
                let sizes: Vec<String> = c.cubes_per_cusp.iter().map(|x| x.to_string()).collect();
                writeln!(
                    s,
                    "  ideal vertex {} ({}): count {}; cubes per cusp {}",
                    c.vertex,
                    c.facets.join(" "),
                    c.count.cell(),
                    sizes.join(",")
                )
                .unwrap();
                match &c.flat {
                    Some(f) => s.push_str(&f.text("    ")),
                    None => writeln!(s, "    flat type: unavailable").unwrap(),
                }
            }
        }
        if let Some(f) = &self.flat {
            writeln!(s, "flat manifold (classifier | walk):").unwrap();
            s.push_str(&f.text("  "));
        }
        writeln!(s, "all checks: {}", flag(self.all_agree())).unwrap();
        s
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundaryRow {
    pub piece: String,
    pub parity: (String, String),
    pub oracle: (String, String),
}

impl BoundaryRow {
    pub fn agree(&self) -> bool {
        self.parity == self.oracle
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MutantCuspRow {
    pub pieces: Vec<String>,
    pub gluings: Vec<String>,
    pub cycle: String,
    pub fibre_length: u32,
    pub monodromy: String,
    pub monodromy_class: String,
    pub flat_type: Option<String>,
    pub fibre_lattice: Vec<Vec<i64>>,
    pub monodromy_isometry: Option<String>,
    pub lattice: Option<Vec<Vec<i64>>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MutateReport {
    pub version: u32,
    pub spec: String,
    pub lifts: Vec<String>,
    pub short_boundaries: Vec<BoundaryRow>,
    pub cusp_count: usize,
    pub cusps: Vec<MutantCuspRow>,
    pub total_fibre_length: u32,
    pub copies: u64,
    pub euler_characteristic: String,
    pub orientable: bool,
}

impl MutateReport {
    pub fn of(m: &Mutation, r: &MutantReport) -> Result<Self, String> {
        let parity = m.short_cusp_boundaries();
        let oracle = m.short_cusp_boundaries_by_cut().map_err(|e| e.to_string())?;
        let short_boundaries = parity
            .iter()
            .map(|(label, b)| {
                let o = oracle.get(label);
                BoundaryRow {
                    piece: label.to_string(),
                    parity: (b[0].to_string(), b[1].to_string()),
                    oracle: o.map_or((String::new(), String::new()), |o| {
                        (o[0].to_string(), o[1].to_string())
                    }),
                }
            })
            .collect();
        let cusps = r
            .cusps
            .iter()
            .map(|c| MutantCuspRow {
                pieces: c.cycle.pieces.iter().map(|p| p.to_string()).collect(),
                gluings: c.cycle.gluings.iter().map(|g| g.to_string()).collect(),
                cycle: c.cycle.to_string(),
                fibre_length: c.cycle.fibre_length,
                monodromy: c.cycle.monodromy.to_string(),
                monodromy_class: c.cycle.class.to_string(),
                flat_type: c.wolf_type.map(|w| w.to_string()),
                fibre_lattice: c.fibre_lattice.basis().to_vec(),
                monodromy_isometry: c.monodromy_isometry.as_ref().map(|g| g.to_string()),
                lattice: c.lattice().map(|l| l.basis().to_vec()),
            })
            .collect();
        Ok(Self {
            version: VERSION,
            spec: m.spec().to_file_string(),
            lifts: (0..2).map(|k| m.lift(k).to_string()).collect(),
            short_boundaries,
            cusp_count: r.cusps.len(),
            cusps,
            total_fibre_length: r.total_fibre_length,
            copies: r.copies as u64,
            euler_characteristic: r.euler_characteristic.to_string(),
            orientable: r.orientable,
        })
    }

    pub fn text(&self) -> String {
        let mut s = String::new();
        for line in self.spec.lines() {
            writeln!(s, "spec: {line}").unwrap();
        }
        for (k, l) in self.lifts.iter().enumerate() {
            writeln!(s, "lift of pairing {}: {l}", k + 1).unwrap();
        }
        writeln!(s, "short pieces (parity | oracle cut):").unwrap();
        for b in &self.short_boundaries {
            writeln!(
                s,
                "  {} bounded by {},{} | {},{} {}",
                b.piece,
                b.parity.0,
                b.parity.1,
                b.oracle.0,
                b.oracle.1,
                flag(b.agree())
            )
            .unwrap();
        }
        writeln!(s, "cusps: {}", self.cusp_count).unwrap();
        for (k, c) in self.cusps.iter().enumerate() {
            writeln!(s, "  cusp {}: {}", k + 1, c.cycle).unwrap();
            writeln!(s, "    fibre length {}", c.fibre_length).unwrap();
            writeln!(s, "    monodromy {} ({})", c.monodromy, c.monodromy_class).unwrap();
            if let Some(t) = &c.flat_type {
                writeln!(s, "    flat type {t}").unwrap();
            }
            writeln!(s, "    slice lattice {}", vectors(&c.fibre_lattice)).unwrap();
            if let Some(g) = &c.monodromy_isometry {
                writeln!(s, "    monodromy isometry {g}").unwrap();
            }
            if let Some(l) = &c.lattice {
                writeln!(s, "    translation lattice {}", vectors(l)).unwrap();
            }
        }
        writeln!(s, "total fibre length: {}", self.total_fibre_length).unwrap();
        writeln!(s, "copies: {}", self.copies).unwrap();
        writeln!(s, "euler characteristic: {}", self.euler_characteristic).unwrap();
        writeln!(s, "orientable: {}", yes(self.orientable)).unwrap();
        s
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassRow {
    pub colours: Vec<String>,
    pub image_dim: usize,
    pub copies: u64,
    pub orientable: bool,
    pub cusps: Option<u64>,
    pub flat_types: Vec<String>,
    pub agree: bool,
}

impl ClassRow {
    pub fn of(c: &Colouring) -> Result<Self, String> {
        let p = c.polytope();
        let mut flat_types = Vec::new();
        let mut agree = true;
        let cusps = if p.kind == PolytopeKind::P4 {
            let dg = DevelopingGraph::build(c).map_err(|e| e.to_string())?;
            let mut total = 0u64;
            for w in 0..p.ideal_vertices.len() {
                let n = c.cusp_count(w) as u64;
                agree &= dg.cusp_components(w).map_err(|e| e.to_string())?.count as u64 == n;
                total += n;
                let (cube, _) = c.induced_vertex_figure_colouring(w).map_err(|e| e.to_string())?;
                if cube.is_orientable().is_some() {
                    let f = FlatReport::of(&cube)?;
                    agree &= f.agree();
                    flat_types.push(f.walk_type);
                } else {
                    flat_types.push("non-orientable".into());
                }
            }
            Some(total)
        } else {
            if c.is_orientable().is_some() {
                let f = FlatReport::of(c)?;
                agree &= f.agree();
                flat_types.push(f.walk_type);
            }
            None
        };
        Ok(Self {
            colours: c.colours().iter().map(|x| x.to_string()).collect(),
            image_dim: c.image_dim(),
            copies: c.copies() as u64,
            orientable: c.is_orientable().is_some(),
            cusps,
            flat_types,
            agree,
        })
    }

    fn text(&self) -> String {
        let mut s = format!("{} copies={}", self.colours.join(" "), self.copies);
        if let Some(n) = self.cusps {
            write!(s, " cusps={n}").unwrap();
        }
        if !self.flat_types.is_empty() {
            write!(s, " flat={}", self.flat_types.join(",")).unwrap();
        }
        write!(s, " {}", flag(self.agree)).unwrap();
        s
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EnumerateReport {
    pub version: u32,
    pub polytope: String,
    pub dim: u8,
    pub orientable_only: bool,
    pub single_cusp: bool,
    /// Set when the class cap stopped the search; the list is partial.
    pub capped: bool,
    pub classes: Vec<ClassRow>,
}

impl EnumerateReport {
    pub fn text(&self) -> String {
        let mut s = String::new();
        for c in &self.classes {
            writeln!(s, "{}", c.text()).unwrap();
        }
        writeln!(
            s,
            "{} classes{}",
            self.classes.len(),
            if self.capped { " (partial: cap reached)" } else { "" }
        )
        .unwrap();
        s
    }
}
