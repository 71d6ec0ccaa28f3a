//! Fixtures shared by the benchmarks.

use qarith_core::{Circuit, Gate};

/// `layers` rounds of Hadamards, a nearest-neighbour controlled-phase ladder
/// and a Toffoli sweep.
pub fn layered_circuit(qubits: usize, layers: usize) -> Circuit {
    let mut c = Circuit::new(qubits);
    for layer in 0..layers {
        for q in 0..qubits {
            c.push(Gate::h(q));
        }
        for q in 1..qubits {
            c.push(Gate::cphase(q - 1, q, 0.1 * (layer + q) as f64));
        }
        for q in 2..qubits {
            c.push(Gate::ccx(q - 2, q - 1, q));
        }
    }
    c
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gate_count() {
        assert_eq!(layered_circuit(5, 2).len(), 2 * (5 + 4 + 3));
    }
}
