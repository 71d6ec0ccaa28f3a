//! Dense and sparse statevector simulation, measurement sampling and
//! resource accounting.

mod circuit;
mod dump;
mod gate;
mod measure;
mod resources;
mod sparse;
mod state;

pub use circuit::{check_disjoint, Circuit};
pub use dump::{dump, parse};
pub use gate::{format_angle, Gate, GateKind};
pub use measure::{
    extract_bits, marginal_distribution, marginal_probabilities, measure_register,
    sample_distribution, sample_index, MeasurementHistogram, Probabilities,
};
pub use resources::{resources, uncontrolled_phase_count, ResourceReport};
pub use sparse::{SparseState, SPARSE_MAX_QUBITS};
pub use state::{new_state, run, StateVector, AMPLITUDE_TOLERANCE, MAX_QUBITS};

/// Free-function form of [`Circuit::inverse`].
pub fn inverse(circuit: &Circuit) -> Circuit {
    circuit.inverse()
}

/// Free-function form of [`Circuit::controlled`].
pub fn controlled(circuit: &Circuit, controls: &[usize]) -> crate::Result<Circuit> {
    circuit.controlled(controls)
}

/// The circuit's unitary as rows of a dense matrix: `m[row][col]` is
/// `⟨row|U|col⟩`. Limited to 12 qubits.
pub fn unitary(circuit: &Circuit) -> crate::Result<Vec<Vec<num_complex::Complex64>>> {
    let n = circuit.qubit_count();
    if n > 12 {
        return Err(crate::error::capacity(
            "unitary extraction is limited to 12 qubits",
        ));
    }
    let dim = 1usize << n;
    let mut m = vec![vec![num_complex::Complex64::default(); dim]; dim];
    for col in 0..dim {
        let s = run(circuit, StateVector::basis(n, col)?)?;
        for (row, a) in m.iter_mut().zip(s.amplitudes()) {
            row[col] = *a;
        }
    }
    Ok(m)
}
