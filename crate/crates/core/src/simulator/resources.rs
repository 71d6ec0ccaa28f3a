use std::collections::BTreeMap;

use serde::Serialize;

use super::circuit::Circuit;
use super::gate::GateKind;

/// Gate census of a circuit.
///
/// `gate_counts` is keyed by [`Gate::label`](super::gate::Gate::label), so
/// CNOT/Toffoli/CR are reported apart from uncontrolled X/Phase.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ResourceReport {
    pub qubit_count: usize,
    pub gate_counts: BTreeMap<String, usize>,
    pub depth: usize,
    pub qft_invocations: usize,
}

impl ResourceReport {
    pub fn count(&self, label: &str) -> usize {
        self.gate_counts.get(label).copied().unwrap_or(0)
    }

    pub fn total_gates(&self) -> usize {
        self.gate_counts.values().sum()
    }

    /// Controlled phase rotations with any number of controls.
    pub fn controlled_phase_count(&self) -> usize {
        self.gate_counts
            .iter()
            .filter(|(k, _)| k.ends_with('R'))
            .map(|(_, v)| v)
            .sum()
    }
}

/// Counts gates per label and computes unit-cost depth by per-qubit scheduling.
pub fn resources(circuit: &Circuit) -> ResourceReport {
    let mut gate_counts = BTreeMap::new();
    let mut level = vec![0usize; circuit.qubit_count()];
    let mut depth = 0;
    for g in circuit.gates() {
        *gate_counts.entry(g.label()).or_insert(0) += 1;
        let l = g.qubits().map(|q| level[q]).max().unwrap_or(0) + 1;
        for q in g.qubits() {
            level[q] = l;
        }
        depth = depth.max(l);
    }
    ResourceReport {
        qubit_count: circuit.qubit_count(),
        gate_counts,
        depth,
        qft_invocations: circuit.qft_invocations(),
    }
}

/// Number of single-qubit `Phase` gates (classical-constant rotations).
pub fn uncontrolled_phase_count(circuit: &Circuit) -> usize {
    circuit
        .gates()
        .iter()
        .filter(|g| matches!(g.kind(), GateKind::Phase(_)))
        .count()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::simulator::gate::Gate;

    #[test]
    fn empty_circuit() {
        let r = resources(&Circuit::new(0));
        assert_eq!(r.total_gates(), 0);
        assert_eq!(r.depth, 0);
        assert_eq!(r.qft_invocations, 0);
    }

    #[test]
    fn depth_and_counts() {
        let mut c = Circuit::new(3);
        c.push(Gate::h(0));
        c.push(Gate::h(1));
        c.push(Gate::cx(0, 1));
        c.push(Gate::x(2));
        c.push(Gate::ccx(0, 1, 2));
        let r = resources(&c);
        assert_eq!(r.depth, 3);
        assert_eq!(r.count("H"), 2);
        assert_eq!(r.count("CNOT"), 1);
        assert_eq!(r.count("Toffoli"), 1);
        assert_eq!(r.count("X"), 1);
        assert!(r.depth <= r.total_gates());
    }
}
