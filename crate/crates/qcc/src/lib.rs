//! Noise-adaptive quantum circuit compiler.
//!
//! The crate compiles a small textual circuit IR down to the native gate set
//! of a described hardware machine, choosing qubit placements and swap routes
//! by calibrated gate reliabilities rather than by distance alone.
//!
//! The pipeline runs in fixed stages:
//!
//! 1. [`ir`] parses the circuit text and expands three-qubit gates.
//! 2. [`machine`] loads the hardware description (topology + error rates).
//! 3. [`reliability`] turns the machine into an all-pairs table of end-to-end
//!    two-qubit reliabilities with explicit swap-path witnesses.
//! 4. [`mapper`] picks program-to-hardware qubit placements that maximize
//!    either the product of operation reliabilities or the weakest link.
//! 5. [`router`] inserts SWAP chains so every two-qubit gate lands on an edge.
//! 6. [`codegen`] lowers to the vendor gate set, merges single-qubit runs,
//!    and emits OpenQASM, Quil, or trapped-ion assembly.
//! 7. [`sim`] provides a dense-matrix simulator used for verification and
//!    for noisy success-rate estimates.
//! 8. [`bench`] generates the benchmark circuit families used throughout.
//! 9. [`pipeline`] ties the stages together behind the optimization levels
//!    exposed by the `qcc` binary.

pub mod bench;
pub mod codegen;
pub mod error;
pub mod ir;
pub mod machine;
pub mod mapper;
pub mod pipeline;
pub mod reliability;
pub mod router;
pub mod sim;

pub use error::{QccError, Result};
