//! Relative `SL(2,C)`-character varieties of small surfaces in trace
//! coordinates, the mapping class group action on them, their Poisson
//! structures, and orbit experiments.
//!
//! | module | contents |
//! |--------|----------|
//! | [`model`] | surface models, trace points, boundary data |
//! | [`algebra`] | defining polynomials, classification, Euler class arithmetic |
//! | [`moves`] | twists, Vieta involutions and their free-group automorphisms |
//! | [`oracle`] | explicit matrix representations and deformation calculus |
//! | [`poisson`] | bivector fields, brackets, Casimir and Jacobi checks |
//! | [`dynamics`] | regimes, random walks, equidistribution, integer orbits |

pub mod algebra;
pub mod dynamics;
pub mod error;
pub mod model;
pub mod moves;
pub mod oracle;
pub mod poisson;

pub use error::{Error, Result};
pub use model::{BoundaryData, CharacterClass, Scalar, SectorTag, SurfaceModel, TracePoint};
