use std::collections::BTreeSet;

use super::gate::Gate;
use crate::error::{structural, Result};

/// An ordered gate list over `qubit_count` qubits.
///
/// Builders tag every QFT or inverse-QFT sub-block they emit; the tally is
/// carried through [`Circuit::append`], [`Circuit::inverse`] and
/// [`Circuit::controlled`] so resource reports can count QFT invocations.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Circuit {
    qubit_count: usize,
    gates: Vec<Gate>,
    qft_invocations: usize,
}

impl Circuit {
    pub fn new(qubit_count: usize) -> Circuit {
        Circuit {
            qubit_count,
            gates: Vec::new(),
            qft_invocations: 0,
        }
    }

    pub fn qubit_count(&self) -> usize {
        self.qubit_count
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    pub fn qft_invocations(&self) -> usize {
        self.qft_invocations
    }

    /// Marks this circuit as containing `count` more QFT/IQFT blocks.
    pub fn tag_qft_blocks(&mut self, count: usize) {
        self.qft_invocations += count;
    }

    /// Appends a gate, widening the circuit if the gate reaches past it.
    pub fn push(&mut self, gate: Gate) {
        self.qubit_count = self.qubit_count.max(gate.max_qubit() + 1);
        self.gates.push(gate);
    }

    /// Appends a gate only if it fits the current width.
    pub fn try_push(&mut self, gate: Gate) -> Result<()> {
        if gate.max_qubit() >= self.qubit_count {
            return Err(structural(format!(
                "gate {gate} exceeds circuit width {}",
                self.qubit_count
            )));
        }
        self.gates.push(gate);
        Ok(())
    }

    pub fn append(&mut self, other: &Circuit) {
        self.qubit_count = self.qubit_count.max(other.qubit_count);
        self.gates.extend_from_slice(&other.gates);
        self.qft_invocations += other.qft_invocations;
    }

    /// Returns the circuit widened to at least `qubit_count` qubits.
    pub fn widened(mut self, qubit_count: usize) -> Circuit {
        self.qubit_count = self.qubit_count.max(qubit_count);
        self
    }

    /// Reversed gate order with every angle negated.
    pub fn inverse(&self) -> Circuit {
        Circuit {
            qubit_count: self.qubit_count,
            gates: self.gates.iter().rev().map(Gate::inverse).collect(),
            qft_invocations: self.qft_invocations,
        }
    }

    /// Adds `controls` to every gate. The controls must not be acted on.
    pub fn controlled(&self, controls: &[usize]) -> Result<Circuit> {
        if controls.is_empty() {
            return Ok(self.clone());
        }
        let acting = self.acting_qubits();
        if let Some(q) = controls.iter().find(|q| acting.contains(q)) {
            return Err(structural(format!(
                "control qubit {q} is already used by the circuit"
            )));
        }
        let width = controls
            .iter()
            .map(|&q| q + 1)
            .fold(self.qubit_count, usize::max);
        let mut out = Circuit::new(width);
        out.qft_invocations = self.qft_invocations;
        for g in &self.gates {
            out.push(g.with_controls(controls)?);
        }
        Ok(out)
    }

    /// Every qubit some gate touches.
    pub fn acting_qubits(&self) -> BTreeSet<usize> {
        self.gates.iter().flat_map(|g| g.qubits()).collect()
    }
}

impl Extend<Gate> for Circuit {
    fn extend<I: IntoIterator<Item = Gate>>(&mut self, iter: I) {
        for g in iter {
            self.push(g);
        }
    }
}

impl FromIterator<Gate> for Circuit {
    fn from_iter<I: IntoIterator<Item = Gate>>(iter: I) -> Circuit {
        let mut c = Circuit::new(0);
        c.extend(iter);
        c
    }
}

/// Checks that qubit lists are internally distinct and pairwise disjoint.
pub fn check_disjoint(groups: &[(&str, &[usize])]) -> Result<()> {
    let mut seen = BTreeSet::new();
    for (name, qubits) in groups {
        for q in *qubits {
            if !seen.insert(*q) {
                return Err(structural(format!(
                    "qubit {q} of register '{name}' is used more than once"
                )));
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::simulator::gate::GateKind;

    #[test]
    fn push_widens() {
        let mut c = Circuit::new(1);
        c.push(Gate::cx(4, 0));
        assert_eq!(c.qubit_count(), 5);
        assert!(c.try_push(Gate::x(5)).is_err());
    }

    #[test]
    fn double_inverse_is_identical() {
        let mut c = Circuit::new(3);
        c.push(Gate::h(0));
        c.push(Gate::cphase(0, 1, 0.3));
        c.push(Gate::swap(1, 2));
        c.tag_qft_blocks(1);
        assert_eq!(c.inverse().inverse(), c);
        assert_eq!(c.inverse().gates()[0], Gate::swap(1, 2));
        assert_eq!(c.inverse().qft_invocations(), 1);
    }

    #[test]
    fn controlled_lifts_and_checks_overlap() {
        let mut c = Circuit::new(2);
        c.push(Gate::x(0));
        c.push(Gate::phase(1, 0.5));
        let cc = c.controlled(&[2]).unwrap();
        assert_eq!(cc.gates()[0], Gate::cx(2, 0));
        assert_eq!(cc.gates()[1].kind(), GateKind::ControlledPhase(0.5));
        assert_eq!(c.controlled(&[]).unwrap(), c);
        assert!(c.controlled(&[1]).is_err());
    }

    #[test]
    fn disjointness() {
        assert!(check_disjoint(&[("a", &[0, 1]), ("b", &[2])]).is_ok());
        assert!(check_disjoint(&[("a", &[0, 1]), ("b", &[1])]).is_err());
        assert!(check_disjoint(&[("a", &[0, 0])]).is_err());
    }
}
