//! Core verification stack for stabilizer-circuit benchmarks.
//!
//! The crate is organized bottom-up:
//!
//! - [`bits`]: word-packed GF(2) bit vectors and elimination.
//! - [`pauli`]: exact Pauli-group algebra with phase tracking mod 4.
//! - [`circuit`]: circuit text format, cost metrics, ASAP layering.
//! - [`tableau`]: stabilizer simulation and generator-preservation checks.
//! - [`code`]: the code library, tensor products, distances, manifests.
//! - [`fault`]: single-fault enumeration, frame propagation, FT scoring.
//! - [`score`]: task predicates and suite-level aggregation over exact
//!   rationals.
//! - [`synth`]: deterministic state-preparation synthesis and task
//!   baselines.

pub mod bits;
pub mod circuit;
pub mod code;
pub mod error;
pub mod fault;
pub mod gate;
pub mod pauli;
pub mod score;
pub mod synth;
pub mod tableau;

pub use circuit::{CircuitIR, CostTuple, Instruction};
pub use error::{Error, Result};
pub use gate::GateKind;
pub use pauli::PauliString;
