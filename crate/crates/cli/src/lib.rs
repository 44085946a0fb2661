//! Command-line front end: properness checks, full analyses, mutations and
//! enumerations, as text or JSON.

pub mod report;

use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use colourings::colouring::{
    enumerate_proper_colourings, symmetric_p4_colouring, Colouring, ColouringError,
    EnumerationError,
};
use colourings::mutation::{Mutation, MutationError, MutationSpec};
use colourings::polytope::{CombinatorialPolytope, PolytopeKind};
use report::{AnalyzeReport, CheckReport, ClassRow, EnumerateReport, MutateReport};
use serde::Serialize;

#[derive(Parser, Debug)]
#[command(name = "colourings", version, about = "Colourings of right-angled polytopes")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    pub format: Format,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Check properness, and orientability with `--orientable`.
    Check {
        path: PathBuf,
        #[arg(long)]
        orientable: bool,
    },
    /// Census of copies, hypersurfaces, cusps and flat types.
    Analyze { path: PathBuf },
    /// Cut and reglue the symmetric P4 manifold.
    Mutate {
        /// Colouring file; the symmetric P4 colouring when omitted.
        colouring: Option<PathBuf>,
        /// Mutation spec file.
        #[arg(long, conflicts_with = "scenario")]
        spec: Option<PathBuf>,
        #[arg(long, value_enum)]
        scenario: Option<Scenario>,
    },
    /// List proper colourings up to symmetry and change of basis.
    Enumerate {
        /// `P4` or `box<d>`.
        polytope: String,
        #[arg(long)]
        dim: u8,
        #[arg(long)]
        orientable: bool,
        /// Keep only P4 classes with a single cusp in total.
        #[arg(long)]
        single_cusp: bool,
        #[arg(long)]
        max_classes: Option<usize>,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Scenario {
    #[value(name = "X")]
    X,
    #[value(name = "Y")]
    Y,
}

/// Printed output and process exit code: 0 success, 1 mathematical
/// failure, 2 input failure.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub stdout: String,
    pub stderr: String,
    pub code: u8,
}

impl Outcome {
    fn ok(stdout: String, code: u8) -> Self {
        Self {
            stdout,
            stderr: String::new(),
            code,
        }
    }

    fn input(msg: String) -> Self {
        Self {
            stdout: String::new(),
            stderr: format!("error: {msg}\n"),
            code: 2,
        }
    }

    fn math(msg: String) -> Self {
        Self {
            stdout: String::new(),
            stderr: format!("error: {msg}\n"),
            code: 1,
        }
    }
}

fn emit<T: Serialize>(format: Format, report: &T, text: String) -> String {
    match format {
        Format::Text => text,
        Format::Json => {
            let mut s = serde_json::to_string_pretty(report).expect("reports serialise");
            s.push('\n');
            s
        }
    }
}

fn read(path: &Path) -> Result<String, Outcome> {
    std::fs::read_to_string(path).map_err(|e| Outcome::input(format!("{}: {e}", path.display())))
}

fn load_colouring(path: &Path) -> Result<Colouring, Outcome> {
    let text = read(path)?;
    Colouring::parse(&text).map_err(|e| Outcome::input(format!("{}: {e}", path.display())))
}

fn mutation_failure(e: MutationError) -> Outcome {
    match e {
        MutationError::Parse { .. } => Outcome::input(e.to_string()),
        other => Outcome::math(other.to_string()),
    }
}

pub fn run(cli: &Cli) -> Outcome {
    match execute(cli) {
        Ok(o) | Err(o) => o,
    }
}

fn execute(cli: &Cli) -> Result<Outcome, Outcome> {
    let format = cli.format;
    match &cli.command {
        Command::Check { path, orientable } => {
            let c = load_colouring(path)?;
            let r = CheckReport::of(&c);
            let pass = r.proper && (!orientable || r.orientable);
            Ok(Outcome::ok(emit(format, &r, r.text()), if pass { 0 } else { 1 }))
        }
        Command::Analyze { path } => {
            let c = load_colouring(path)?;
            if !c.is_proper() {
                let r = CheckReport::of(&c);
                return Ok(Outcome::ok(emit(format, &r, r.text()), 1));
            }
            let r = AnalyzeReport::of(&c).map_err(Outcome::math)?;
            let code = if r.all_agree() { 0 } else { 1 };
            Ok(Outcome::ok(emit(format, &r, r.text()), code))
        }
        Command::Mutate {
            colouring,
            spec,
            scenario,
        } => {
            let c = match colouring {
                Some(p) => load_colouring(p)?,
                None => symmetric_p4_colouring(),
            };
            let spec = match (spec, scenario) {
                (Some(p), _) => MutationSpec::parse(&read(p)?).map_err(|e| {
                    let mut o = mutation_failure(e);
                    o.stderr = format!("error: {}: {}", p.display(), &o.stderr[7..]);
                    o
                })?,
                (None, Some(Scenario::X)) => MutationSpec::scenario_x(),
                (None, Some(Scenario::Y)) => MutationSpec::scenario_y(),
                (None, None) => return Err(Outcome::input("give --spec or --scenario".into())),
            };
            let m = Mutation::new(&c, spec).map_err(mutation_failure)?;
            let mr = m.report().map_err(mutation_failure)?;
            let r = MutateReport::of(&m, &mr).map_err(Outcome::math)?;
            let code = if r.short_boundaries.iter().all(|b| b.agree()) {
                0
            } else {
                1
            };
            Ok(Outcome::ok(emit(format, &r, r.text()), code))
        }
        Command::Enumerate {
            polytope,
            dim,
            orientable,
            single_cusp,
            max_classes,
        } => {
            let p = CombinatorialPolytope::by_name(polytope)
                .map_err(|e| Outcome::input(e.to_string()))?;
            let (classes, capped) =
                match enumerate_proper_colourings(&p, *dim, *orientable, *max_classes) {
                    Ok(v) => (v, false),
                    Err(EnumerationError::CapExceeded { partial, .. }) => (partial, true),
                    Err(EnumerationError::Colouring(e @ ColouringError::BadTargetDimension(_))) => {
                        return Err(Outcome::input(e.to_string()))
                    }
                    Err(e) => return Err(Outcome::math(e.to_string())),
                };
            let mut rows = Vec::new();
            for c in &classes {
                let row = ClassRow::of(c).map_err(Outcome::math)?;
                if *single_cusp && !(p.kind == PolytopeKind::P4 && row.cusps == Some(1)) {
                    continue;
                }
                rows.push(row);
            }
            let r = EnumerateReport {
                version: report::VERSION,
                polytope: p.name.clone(),
                dim: *dim,
                orientable_only: *orientable,
                single_cusp: *single_cusp,
                capped,
                classes: rows,
            };
            let code = if capped || !r.classes.iter().all(|c| c.agree) {
                1
            } else {
                0
            };
            Ok(Outcome::ok(emit(format, &r, r.text()), code))
        }
    }
}
