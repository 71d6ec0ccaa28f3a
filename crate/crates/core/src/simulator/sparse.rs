use std::collections::HashMap;

use num_complex::Complex64;

use super::circuit::Circuit;
use super::gate::{Gate, GateKind};
use super::state::StateVector;
use crate::error::{structural, Result};

/// Widest register addressable by a sparse state's `u64` basis labels.
pub const SPARSE_MAX_QUBITS: usize = 63;

// Amplitudes this small are treated as exact cancellations and dropped.
const PRUNE: f64 = 1e-13;

/// Statevector storing only nonzero amplitudes.
///
/// Arithmetic circuits applied to basis inputs stay within a handful of
/// basis states (only QFT blocks spread them out), so this representation
/// checks wide registers exhaustively where a dense vector would not fit.
#[derive(Debug, Clone, PartialEq)]
pub struct SparseState {
    qubits: usize,
    amps: HashMap<u64, Complex64>,
}

impl SparseState {
    pub fn basis(qubit_count: usize, index: u64) -> Result<SparseState> {
        if qubit_count == 0 || qubit_count > SPARSE_MAX_QUBITS {
            return Err(structural(format!(
                "sparse simulation supports 1..={SPARSE_MAX_QUBITS} qubits, requested {qubit_count}"
            )));
        }
        if qubit_count < 64 && index >> qubit_count != 0 {
            return Err(structural(format!(
                "basis index {index} out of range for {qubit_count} qubits"
            )));
        }
        let mut amps = HashMap::new();
        amps.insert(index, Complex64::new(1.0, 0.0));
        Ok(SparseState {
            qubits: qubit_count,
            amps,
        })
    }

    /// Builds a state from (index, amplitude) pairs; duplicates are summed.
    pub fn from_terms(
        qubit_count: usize,
        terms: impl IntoIterator<Item = (u64, Complex64)>,
    ) -> Result<SparseState> {
        let mut s = SparseState::basis(qubit_count, 0)?;
        s.amps.clear();
        for (i, a) in terms {
            if i >> qubit_count != 0 {
                return Err(structural(format!("basis index {i} out of range")));
            }
            *s.amps.entry(i).or_default() += a;
        }
        Ok(s)
    }

    pub fn qubit_count(&self) -> usize {
        self.qubits
    }

    pub fn amplitude(&self, index: u64) -> Complex64 {
        self.amps.get(&index).copied().unwrap_or_default()
    }

    /// Nonzero terms sorted by basis index.
    pub fn terms(&self) -> Vec<(u64, Complex64)> {
        let mut v: Vec<_> = self.amps.iter().map(|(i, a)| (*i, *a)).collect();
        v.sort_unstable_by_key(|(i, _)| *i);
        v
    }

    pub fn support_size(&self) -> usize {
        self.amps.len()
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.values().map(|a| a.norm_sqr()).sum()
    }

    /// The single basis index carrying probability ≥ 1 − tolerance, if any.
    pub fn dominant_basis(&self, tolerance: f64) -> Option<u64> {
        self.amps
            .iter()
            .find(|(_, a)| a.norm_sqr() >= 1.0 - tolerance)
            .map(|(i, _)| *i)
    }

    pub fn to_dense(&self) -> Result<StateVector> {
        if self.qubits > super::state::MAX_QUBITS {
            return Err(crate::error::capacity("sparse state too wide to densify"));
        }
        let mut v = vec![Complex64::default(); 1usize << self.qubits];
        for (i, a) in &self.amps {
            v[*i as usize] = *a;
        }
        StateVector::from_amplitudes(v)
    }

    pub fn apply_gate(&mut self, gate: &Gate) -> Result<()> {
        if gate.max_qubit() >= self.qubits {
            return Err(structural(format!(
                "gate {gate} out of range for {} qubits",
                self.qubits
            )));
        }
        let cmask: u64 = gate.controls().iter().fold(0, |m, &c| m | (1 << c));
        let active = |i: u64| i & cmask == cmask;
        let tbit = 1u64 << gate.targets()[0];
        match gate.kind() {
            GateKind::X => self.permute(|i| if active(i) { i ^ tbit } else { i }),
            GateKind::Swap => {
                let ubit = 1u64 << gate.targets()[1];
                self.permute(|i| {
                    let differ = ((i & tbit) != 0) != ((i & ubit) != 0);
                    if active(i) && differ {
                        i ^ tbit ^ ubit
                    } else {
                        i
                    }
                })
            }
            GateKind::Phase(theta) | GateKind::ControlledPhase(theta) => {
                let w = Complex64::from_polar(1.0, theta);
                for (i, a) in self.amps.iter_mut() {
                    if active(*i) && i & tbit != 0 {
                        *a *= w;
                    }
                }
            }
            GateKind::H => {
                let s = std::f64::consts::FRAC_1_SQRT_2;
                let mut out: HashMap<u64, Complex64> = HashMap::with_capacity(self.amps.len() * 2);
                for (&i, &a) in &self.amps {
                    if !active(i) {
                        *out.entry(i).or_default() += a;
                        continue;
                    }
                    let lo = i & !tbit;
                    let sign = if i & tbit != 0 { -1.0 } else { 1.0 };
                    *out.entry(lo).or_default() += a * s;
                    *out.entry(lo | tbit).or_default() += a * (s * sign);
                }
                out.retain(|_, a| a.norm() > PRUNE);
                self.amps = out;
            }
        }
        Ok(())
    }

    fn permute(&mut self, f: impl Fn(u64) -> u64) {
        self.amps = self.amps.drain().map(|(i, a)| (f(i), a)).collect();
    }

    pub fn run(&mut self, circuit: &Circuit) -> Result<()> {
        if circuit.qubit_count() > self.qubits {
            return Err(structural(format!(
                "circuit has {} qubits, state has {}",
                circuit.qubit_count(),
                self.qubits
            )));
        }
        for g in circuit.gates() {
            self.apply_gate(g)?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::simulator::state::run;

    #[test]
    fn matches_dense_on_small_circuit() {
        let mut circ = Circuit::new(4);
        circ.push(Gate::h(0));
        circ.push(Gate::h(2));
        circ.push(Gate::cphase(0, 2, 0.4));
        circ.push(Gate::ccx(0, 2, 3));
        circ.push(Gate::swap(1, 3).with_controls(&[0]).unwrap());
        circ.push(Gate::h(0));
        let dense = run(&circ, StateVector::basis(4, 0b0010).unwrap()).unwrap();
        let mut sparse = SparseState::basis(4, 0b0010).unwrap();
        sparse.run(&circ).unwrap();
        for i in 0..16u64 {
            assert!((dense.amplitude(i as usize) - sparse.amplitude(i)).norm() < 1e-12);
        }
    }

    #[test]
    fn hh_cancels_exactly() {
        let mut s = SparseState::basis(2, 1).unwrap();
        s.apply_gate(&Gate::h(0)).unwrap();
        s.apply_gate(&Gate::h(0)).unwrap();
        assert_eq!(s.support_size(), 1);
        assert_eq!(s.dominant_basis(1e-9), Some(1));
    }

    #[test]
    fn wide_registers() {
        let mut s = SparseState::basis(40, 1 << 39).unwrap();
        s.apply_gate(&Gate::cx(39, 0)).unwrap();
        assert_eq!(s.dominant_basis(1e-12), Some((1 << 39) | 1));
        assert!(SparseState::basis(64, 0).is_err());
    }
}
