//! Exact computations around slope-unstable weak del Pezzo surfaces.
//!
//! * [`lattice`]: the Picard lattice of a blowup tower over a Hirzebruch surface.
//! * [`surface`]: fibered weak del Pezzo configurations built from blowups.
//! * [`foliation`]: the fibration foliation, its canonical class and slopes.
//! * [`fsing`]: dual graphs of foliated singularities and ADE recognition.
//! * [`toric`]: 2D fans, Gorenstein toric del Pezzo surfaces, toric foliations
//!   and the bounded blowup searches over them.
//! * [`classify`]: enumeration of unstable configurations up to isomorphism.

pub mod classify;
pub mod dot;
pub mod foliation;
pub mod fsing;
pub mod lattice;
pub mod linalg;
pub mod surface;
pub mod toric;

pub use lattice::{DivisorClass, LatticeForm};
pub use surface::{Center, SurfaceConfig};
