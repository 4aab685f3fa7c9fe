//! Exact calculator for the valuative stability invariants β, β̂, τ and j of
//! log Fano pairs, in the three settings where the volume function
//! `x -> vol(L - xF)` is available in closed form:
//!
//! * [`dim1`]: `P^1` with a boundary, including cyclic covers;
//! * [`toric`]: toric pairs with monomial valuations, via moment polytopes;
//! * [`p2wb`]: plane curves and weighted blowups over `P^2`.
//!
//! All arithmetic is exact over [`Rational`].

pub mod dim1;
pub mod error;
pub mod invariants;
pub mod p2wb;
pub mod poly;
pub mod radical;
pub mod rational;
pub mod toric;
pub mod verify;
pub mod volfun;

pub use dim1::{CyclicCover, MarkedPoint, P1Pair, P1Point, P1Valuation, Verdict};
pub use error::{Error, Result};
pub use invariants::{InvariantReport, ThresholdParams};
pub use p2wb::{PlaneDivisorCase, WeightedBlowupDescriptor};
pub use poly::Polynomial;
pub use rational::Rational;
pub use toric::{FanPair, LatticeVector, Polytope};
pub use volfun::{PiecewisePolynomial, VolumeCurve};
