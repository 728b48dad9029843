//! Pythagorean modules over graph algebras and their lifts to Cuntz–Krieger
//! representations, for the graphs of quantum spheres, projective spaces and
//! lens spaces.
//!
//! The pipeline runs graph → module → truncated lift:
//!
//! * [`graph`]: finite directed multigraphs, paths, power graphs, skew products;
//! * [`quantum`]: the graph families of the quantum spaces;
//! * [`module`]: finite-dimensional Pythagorean modules and their structure;
//! * [`lift`]: exact finite levels of the lifted representation;
//! * [`spectrum`]: classification of irreducible representations;
//! * [`codec`]: JSON and DOT encodings.

pub mod codec;
pub mod exec;
pub mod graph;
pub mod lift;
pub mod matrix;
pub mod module;
pub mod quantum;
pub mod spectrum;

pub use exec::Exec;
