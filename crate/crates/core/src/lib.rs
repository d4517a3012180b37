//! Recognizing affine equivalence of convex polyhedra from their natural
//! developments.

pub mod cmgeom;
pub mod development;
pub mod interval;
pub mod oracle;
pub mod patch;
pub mod poly;
pub mod recognizer;
pub mod simplepath;
pub mod solver;
pub mod suspension;
pub mod verdict;
