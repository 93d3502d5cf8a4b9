//! Exact invariants of contact (+1)/(-1)-surgery diagrams.
//!
//! The crate computes, with arbitrary-precision arithmetic throughout:
//!
//! * first homology of the surgered manifold in canonical Smith normal
//!   form coordinates ([`diagram`], [`homology`]),
//! * spin structures as characteristic sublinks, the Gamma invariant and
//!   the d3 invariant of the contact structure ([`invariants`]),
//! * Kirby moves on framed linking data with a tracked characteristic
//!   sublink ([`kirby`]),
//! * the surgery description of a Lutz twist, with exact verification of
//!   the difference formulas for d3 and Gamma ([`lutz`]),
//! * lens space constructions and quadratic-residue obstructions to small
//!   surgery distance ([`lens`]).

pub mod diagram;
pub mod homology;
pub mod invariants;
pub mod kirby;
pub mod lens;
pub mod linalg;
pub mod lutz;
pub mod sample;

pub use diagram::{ContactCoeff, LegendrianComponent, SurgeryDiagram};
pub use homology::{H1Element, H1Group};
pub use invariants::{KnotInComplement, SpinStructure};
pub use linalg::{IntMatrix, Rational};
