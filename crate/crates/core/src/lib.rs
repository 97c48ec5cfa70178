//! Desk-scale calculus for two-dimensional almost area-minimizing currents at
//! boundary points: discretized integral currents, boundary straightening,
//! winding-curve geometry, the Fourier epiperimetric competitor, and
//! almost-monotonicity / decay harnesses.

pub mod chain;
pub mod cone_spec;
pub mod current;
pub mod error;
pub mod excess;
pub mod flatnorm;
pub mod geom;
pub mod mesh;

pub use cone_spec::ConeSpec;
pub use current::{Region, SimplicialCurrent};
pub use error::{Error, Result};
pub use geom::{Plane2, Point};
