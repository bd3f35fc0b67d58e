//! Star systems: decompositions of complete graphs into e-stars (copies of
//! the complete bipartite graph `K_{1,e}`), together with weak colourings,
//! chromatic-number certification, and uniqueness certificates.
//!
//! The crate is organised around five pieces:
//!
//! * [`system`] / [`verify`] — domain types, admissibility arithmetic, and
//!   exact verification of decompositions and colourings;
//! * [`baranyai`] — partitioning all e-subsets of a ground set into classes
//!   of pairwise-disjoint subsets with prescribed class sizes;
//! * [`constructions`] — one builder per construction family (equitable
//!   2-chromatic bases, order extensions, chromatic lifts, uniquely
//!   colourable gadget systems), each re-verified on exit;
//! * [`chromatic`] — exhaustive, budgeted search deciding k-colourability
//!   and uniqueness, plus the forcing propagator;
//! * [`io`] — the text file formats and JSON export used by the CLI.

pub mod baranyai;
pub mod chromatic;
pub mod constructions;
pub mod io;
pub mod system;
pub mod verify;

pub use system::{is_admissible, Colouring, Star, StarSystem, Vertex};
pub use verify::{check_colouring, validate_decomposition, ColouringReport, DecompositionReport};
