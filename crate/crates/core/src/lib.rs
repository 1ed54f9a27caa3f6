pub mod cli;
pub mod denomset;
pub mod dist;
pub mod error;
pub mod farey;
pub mod ff;
pub mod formulas;
pub mod laurent;
pub mod minden;
mod par;
pub mod poly;

pub use denomset::DenomSet;
pub use error::{Error, Result};
pub use farey::{BallCover, CoverOptions, FareyFraction, SeparationRule};
pub use ff::{Field, FieldElement};
pub use laurent::{BallKey, TruncTail, TruncVec};
pub use minden::{MinDenResult, MinDenSolver, Statistic};
pub use poly::{Degree, Poly, PolyVec};

/// Default cap on enumeration work, in elementary units.
pub const DEFAULT_BUDGET: u64 = 10_000_000;
