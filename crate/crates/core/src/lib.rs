//! Exact lattice-point counting in dilated ellipsoids, discs and bodies of
//! revolution, explicit discrepancy bounds for them, and a sweep harness
//! that checks `|P(t)| ≤ bound(t)` on grids of rational dilations.

pub mod arith;
pub mod bounds;
pub mod error;
pub mod exactcount;
pub mod forms;
pub mod harness;
pub mod profiles;
pub mod quad;

pub use error::{Error, Result};
