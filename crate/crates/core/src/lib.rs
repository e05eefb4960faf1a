//! Exact computations with Hodge parameters of semistable Deligne-Fontaine modules:
//! refinements, Steinberg-window data, reconstruction, and the surrounding combinatorics.

pub mod dims;
pub mod error;
pub mod extcomb;
pub mod hodge;
pub mod io;
pub mod liealg;
pub mod linalg;
pub mod rng;
pub mod shape;
pub mod weyl;

pub use error::{Error, Result};
pub use hodge::{forward, forward_extended, reconstruct, HodgeParameter};
pub use linalg::{Matrix, Scalar};
pub use shape::{Block, SemistableShape};
pub use weyl::Perm;
