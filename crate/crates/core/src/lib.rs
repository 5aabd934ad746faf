//! Finite combinatorial topology: simplicial complexes, barycentric
//! subdivision, elementary selections, stellar moves, cell-systems and
//! cellular maps between stellar simplexes, plus numeric realization checks.

pub mod cellular;
pub mod complex;
pub mod error;
pub mod geometry;
pub mod io;
pub mod map;
pub mod name;
pub mod par;
pub mod stellar;
pub mod subdivision;
pub mod systems;

pub use complex::{Complex, Face, Subcomplex};
pub use error::{Error, Result};
pub use map::{MapCertificate, SimplicialMap};
pub use name::VertexName;
