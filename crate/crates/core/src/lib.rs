//! Quantum arithmetic circuits on a statevector simulator.
//!
//! Every builder returns a [`Circuit`] over caller-chosen qubit indices;
//! the `*_program` helpers pair a circuit with a [`RegisterLayout`] so it
//! can be run on named register values. Qubit 0 is the least-significant
//! bit of every basis index, and registers list their qubits LSB first.

pub mod comparator;
pub mod error;
pub mod layout;
pub mod phase_estimation;
pub mod qft;
pub mod qft_const_arith;
pub mod ripple_arith;
pub mod shor;
pub mod simulator;
pub mod var_mod_arith;

pub use error::{Error, Result};
pub use layout::{Program, Register, RegisterLayout, Role};
pub use qft_const_arith::classical;
pub use shor::{Convergent, FactorReport};
pub use simulator::{
    Circuit, Gate, GateKind, MeasurementHistogram, ResourceReport, SparseState, StateVector,
};

/// Pretty-printed JSON with every object's keys in sorted order, so reports
/// diff cleanly.
pub fn to_sorted_json(value: &impl serde::Serialize) -> String {
    let value = serde_json::to_value(value).expect("report types serialize");
    serde_json::to_string_pretty(&value).expect("values serialize")
}
