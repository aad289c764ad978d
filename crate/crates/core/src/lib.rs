//! Cycle and period statistics of polynomial and rational maps over finite
//! fields.
//!
//! The crate is layered bottom-up: [`field`] implements GF(p^k), [`poly`]
//! dense polynomials over it, [`space`] the map spaces and their
//! enumeration and sampling, [`dynamics`] the functional graph of a single
//! map, [`stats`] the census accumulator and the exact formulas it is
//! checked against, and [`harness`] the parallel census runner and the
//! verification suites.

pub mod dynamics;
pub mod error;
pub mod field;
pub mod harness;
pub mod poly;
pub mod primes;
pub mod space;
pub mod stats;

pub use dynamics::{cycle_decomposition, CycleStructure, FunctionalGraph};
pub use error::{Error, Result};
pub use field::{FieldElement, FieldSpec};
pub use poly::DensePolynomial;
pub use space::{RationalMap, SpaceDescriptor, SpaceKind, SpaceMember};
pub use stats::{AccumulatorConfig, Ensemble, StatsAccumulator};
