//! Supermagic (vertex-magic edge) labelings of the torus grid `C_n x C_m`.
//!
//! * [`torus`]: grid model, canonical edge names, diagonal decomposition.
//! * [`construct`]: explicit labelings for odd/odd (`gcd > 1`) and even/even grids.
//! * [`verify`]: supermagic check and corner-by-corner audit.
//! * [`search`]: backtracking search for the remaining shapes.
//! * [`document`] and [`render`]: file formats and figures.

pub mod construct;
pub mod document;
pub mod error;
pub mod labeling;
pub mod render;
pub mod search;
pub mod torus;
pub mod verify;

pub use construct::{construct, construct_even_even, construct_odd_odd, Construction, ConstructionPlan, Variant};
pub use error::{Error, Result};
pub use labeling::Labeling;
pub use search::{search, SearchConfig, SearchOutcome, SearchStatus};
pub use torus::{dims, EdgeRef, GridDims, Orientation, VertexRef};
pub use verify::{audit_corners, forced_constant, verify, VerificationReport};
