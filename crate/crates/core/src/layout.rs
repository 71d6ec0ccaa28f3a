use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;

use crate::error::{domain, structural, Result};
use crate::simulator::{
    check_disjoint, extract_bits, resources, Circuit, ResourceReport, SparseState,
    AMPLITUDE_TOLERANCE,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Role {
    Value,
    Aux,
    Carry,
    Sign,
    Counting,
    Result,
}

impl fmt::Display for Role {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Role::Value => "value",
            Role::Aux => "aux",
            Role::Carry => "carry",
            Role::Sign => "sign",
            Role::Counting => "counting",
            Role::Result => "result",
        };
        f.write_str(s)
    }
}

/// A named qubit group, least-significant qubit first.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Register {
    pub name: String,
    pub role: Role,
    pub qubits: Vec<usize>,
}

impl Register {
    pub fn width(&self) -> usize {
        self.qubits.len()
    }
}

/// Disjoint named registers over a flat qubit space.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize)]
pub struct RegisterLayout {
    registers: Vec<Register>,
}

impl RegisterLayout {
    pub fn new() -> RegisterLayout {
        RegisterLayout::default()
    }

    /// Allocates `width` fresh qubits after the highest one in use.
    pub fn add(&mut self, name: &str, role: Role, width: usize) -> Result<Vec<usize>> {
        let start = self.total_qubits();
        let qubits: Vec<usize> = (start..start + width).collect();
        self.add_qubits(name, role, qubits.clone())?;
        Ok(qubits)
    }

    /// Registers an explicit qubit list.
    pub fn add_qubits(&mut self, name: &str, role: Role, qubits: Vec<usize>) -> Result<()> {
        if qubits.is_empty() {
            return Err(structural(format!("register '{name}' is empty")));
        }
        if self.registers.iter().any(|r| r.name == name) {
            return Err(structural(format!("register '{name}' defined twice")));
        }
        let mut groups: Vec<(&str, &[usize])> = self
            .registers
            .iter()
            .map(|r| (r.name.as_str(), r.qubits.as_slice()))
            .collect();
        groups.push((name, &qubits));
        check_disjoint(&groups)?;
        self.registers.push(Register {
            name: name.to_string(),
            role,
            qubits,
        });
        Ok(())
    }

    pub fn registers(&self) -> &[Register] {
        &self.registers
    }

    pub fn get(&self, name: &str) -> Result<&Register> {
        self.registers
            .iter()
            .find(|r| r.name == name)
            .ok_or_else(|| structural(format!("no register named '{name}'")))
    }

    pub fn qubits(&self, name: &str) -> Result<&[usize]> {
        Ok(&self.get(name)?.qubits)
    }

    /// One past the highest qubit index in use.
    pub fn total_qubits(&self) -> usize {
        self.registers
            .iter()
            .flat_map(|r| r.qubits.iter())
            .max()
            .map_or(0, |m| m + 1)
    }

    /// Qubits in registers with the `Aux` or `Carry` role.
    pub fn ancilla_count(&self) -> usize {
        self.registers
            .iter()
            .filter(|r| matches!(r.role, Role::Aux | Role::Carry))
            .map(Register::width)
            .sum()
    }

    /// Basis index with the given register values; unnamed registers are 0.
    pub fn encode(&self, values: &[(&str, u64)]) -> Result<u64> {
        let mut index = 0u64;
        for (name, value) in values {
            let reg = self.get(name)?;
            if reg.width() < 64 && value >> reg.width() != 0 {
                return Err(domain(format!(
                    "value {value} does not fit the {}-qubit register '{name}'",
                    reg.width()
                )));
            }
            for (k, &q) in reg.qubits.iter().enumerate() {
                index |= ((value >> k) & 1) << q;
            }
        }
        Ok(index)
    }

    pub fn decode(&self, index: u64) -> BTreeMap<String, u64> {
        self.registers
            .iter()
            .map(|r| (r.name.clone(), extract_bits(index, &r.qubits)))
            .collect()
    }
}

/// A circuit paired with the layout that gives its qubits meaning.
#[derive(Debug, Clone, PartialEq)]
pub struct Program {
    pub layout: RegisterLayout,
    pub circuit: Circuit,
}

impl Program {
    pub fn new(layout: RegisterLayout, circuit: Circuit) -> Program {
        let circuit = circuit.widened(layout.total_qubits());
        Program { layout, circuit }
    }

    pub fn qubit_count(&self) -> usize {
        self.circuit.qubit_count()
    }

    pub fn resources(&self) -> ResourceReport {
        resources(&self.circuit)
    }

    /// Runs the circuit on the basis state with the given register values.
    pub fn run_basis(&self, inputs: &[(&str, u64)]) -> Result<SparseState> {
        let mut state = SparseState::basis(self.qubit_count(), self.layout.encode(inputs)?)?;
        state.run(&self.circuit)?;
        Ok(state)
    }

    /// Runs a basis input and decodes every register of the resulting basis
    /// state. Fails if the output is not a single basis state.
    pub fn evaluate(&self, inputs: &[(&str, u64)]) -> Result<BTreeMap<String, u64>> {
        let state = self.run_basis(inputs)?;
        let index = state.dominant_basis(AMPLITUDE_TOLERANCE).ok_or_else(|| {
            structural(format!(
                "output for {inputs:?} is spread over {} basis states",
                state.support_size()
            ))
        })?;
        Ok(self.layout.decode(index))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::simulator::Gate;

    #[test]
    fn allocate_encode_decode() {
        let mut l = RegisterLayout::new();
        let x = l.add("x", Role::Value, 3).unwrap();
        let f = l.add("flag", Role::Aux, 1).unwrap();
        assert_eq!(x, vec![0, 1, 2]);
        assert_eq!(f, vec![3]);
        assert_eq!(l.total_qubits(), 4);
        assert_eq!(l.ancilla_count(), 1);
        let idx = l.encode(&[("x", 5), ("flag", 1)]).unwrap();
        assert_eq!(idx, 0b1101);
        assert_eq!(l.decode(idx)["x"], 5);
        assert!(l.encode(&[("x", 8)]).is_err());
        assert!(l.add("x", Role::Value, 1).is_err());
        assert!(l.add_qubits("y", Role::Value, vec![2]).is_err());
        assert!(l.add("z", Role::Value, 0).is_err());
    }

    #[test]
    fn evaluate_detects_superposition() {
        let mut l = RegisterLayout::new();
        l.add("x", Role::Value, 2).unwrap();
        let mut c = Circuit::new(2);
        c.push(Gate::x(1));
        let p = Program::new(l.clone(), c);
        assert_eq!(p.evaluate(&[("x", 1)]).unwrap()["x"], 3);
        let mut c = Circuit::new(2);
        c.push(Gate::h(0));
        assert!(Program::new(l, c).evaluate(&[]).is_err());
    }
}
