//! Exact open-closed mirror maps for branes on Fermat-type hypersurfaces.
//!
//! The crate enumerates weight systems, builds the mirror maps of each phase
//! as truncated bivariate series over exact rationals, inverts them, and
//! checks integrality and Picard-Fuchs annihilation.

pub mod cli;
pub mod geometry;
pub mod mirrormaps;
pub mod scalars;
pub mod series;
pub mod verify;

pub use geometry::{PartitionSolution, Phase, WeightSystem};
pub use scalars::{ExactInt, ExactRat};
pub use series::{Axis, BiSeries, LogSeries, Monomial, ThetaOperator, ThetaPoly};
