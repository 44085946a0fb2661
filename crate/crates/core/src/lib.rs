//! Colourings of right-angled polytopes over the two-element field, the
//! hyperbolic and flat manifolds they define, and mutation surgery on them.

pub mod gf2;
pub mod polytope;
pub mod colouring;
pub mod isometry;
pub mod oracle;
pub mod flatclass;
pub mod mutation;
