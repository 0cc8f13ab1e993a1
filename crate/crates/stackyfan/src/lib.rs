//! Exact-arithmetic toolkit for stacky fans and KM fans over a lattice.
//!
//! The crate decides torus-equivariant birational equivalence of proper
//! toric orbifolds from their stacky fans, computes and compares the
//! sublattice-coloring invariant, realizes any valid coloring as a smooth
//! proper stacky fan, and constructs explicit birational roofs through
//! KM-fan overlay and toric resolution. All arithmetic is exact
//! (arbitrary-precision integers and rationals); every canonical form is
//! deterministic so serialized outputs are byte-stable.

// Violation reports deliberately carry the offending cones and lattices;
// errors are cold paths here.
#![allow(clippy::result_large_err)]

pub type Int = num_bigint::BigInt;
pub type Rat = num_rational::BigRational;

mod linalg;

pub mod birational;
pub mod cli;
pub mod cone;
pub mod doc;
pub mod fan;
pub mod km;
pub mod lattice;
pub mod stacky;

pub use birational::{Coloring, EquivalenceReport, Witness, WitnessError};
pub use cone::{Cone, ConeError, RatVector};
pub use fan::{Fan, FanError};
pub use km::{KmError, KmFan, MultRecord, Resolution};
pub use lattice::{IntVector, LatticeError, Sublattice};
pub use stacky::{StackyError, StackyFan};
