//! Diagrammatic volume bounds for Montesinos links.
//!
//! The pipeline goes from a list of tangle slopes to a reduced admissible
//! diagram, its Kauffman state graphs, and the volume bounds built from them.

pub mod bounds;
pub mod check;
pub mod diagram;
mod dsu;
pub mod enumerate;
pub mod iso;
pub mod montesinos;
pub mod rational;
pub mod report;
pub mod stategraph;
pub mod svg;
