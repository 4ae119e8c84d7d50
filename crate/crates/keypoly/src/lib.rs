//! Exact-arithmetic machinery for valuations on Q[x] over a p-adic base:
//! MacLane chains, epsilon/delta invariants, abstract and ordinary key
//! polynomial tests, ball avatars with the containment criterion, limit key
//! polynomials along increasing families, and Mac Lane-Vaquie chain
//! normalization, together with brute-force and Newton-polygon oracles.
//!
//! All values live in Q or in Q + Q*eps (lexicographic) and every
//! computation is exact; nothing here touches floating point.

pub mod balls;
pub mod error;
pub mod json;
pub mod limits;
pub mod oracle;
pub mod poly;
pub mod valuation;
pub mod value;

pub use balls::{ball_of, complete_set_check, mlv_normalize, optimal_sequence};
pub use balls::{BallAvatar, MlvChain, MlvReport, MlvStep, MlvTerminal, OptimalEntry, StepKind};
pub use error::{Error, Result};
pub use limits::{CenterLaw, DeltaLaw, IncreasingFamily, MonotoneMode, StableResult};
pub use poly::{base_val, is_irreducible_q, NewtonPolygon, RatPoly};
pub use valuation::{KeyBounds, KeyVerdict, MacLaneChain, ValuationClass};
pub use value::{LambdaValue, Rat, RationalValue};
