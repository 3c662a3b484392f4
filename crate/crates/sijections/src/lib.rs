//! Signed sets, sijections, and a fully verifiable bijection pipeline
//! between monotone triangles and shifted Gelfand-Tsetlin patterns.
//!
//! The crate has three layers:
//!
//! * [`element`], [`set`], [`sijection`] — signed sets as structural values,
//!   elements as finite trees, and sijections (signed bijections) with
//!   identity, inverse, Garsia–Milne composition, Cartesian product and
//!   indexed disjoint union, plus exhaustive verification.
//! * [`boxes`], [`gt`], [`mt`], [`arrows`] — the building-block sijections on
//!   signed intervals and boxes, generalized Gelfand-Tsetlin patterns with
//!   their row operations, monotone triangles, and the arrow decorations
//!   that drive the deformations.
//! * [`pipeline`], [`formula`], [`asm`] — the full pipeline
//!   `Γ: MT(k) ⇒ SGT(k)` assembled from the pieces, independent counting
//!   oracles, and the ASM bridge.
//!
//! Everything is immutable after construction and safe to share across
//! threads; verification parallelizes over elements.

pub mod arrows;
pub mod asm;
pub mod boxes;
mod cache;
pub mod element;
pub mod formula;
pub mod gt;
pub mod mt;
pub mod pipeline;
pub mod set;
pub mod sijection;
pub mod sweep;

pub use element::{Element, Sign};
pub use set::{Family, SignedSet};
pub use sijection::{Report, Side, SidedElement, Sijection};

/// Errors surfaced by constructors and by applying sijections to
/// values outside their carrier sets.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("configuration error: {0}")]
    Config(String),
    #[error("validation error: {0}")]
    Validation(String),
    #[error("not elementary: {0}")]
    NotElementary(String),
    #[error("iteration cap exceeded in {0}")]
    IterationCap(String),
}

pub type Result<T> = std::result::Result<T, Error>;
