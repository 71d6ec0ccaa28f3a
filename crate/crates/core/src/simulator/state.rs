use num_complex::Complex64;
use rayon::prelude::*;

use super::circuit::Circuit;
use super::gate::{Gate, GateKind};
use crate::error::{capacity, structural, Result};

/// Largest register the dense simulator will allocate (2^28 amplitudes, 4 GiB).
pub const MAX_QUBITS: usize = 28;

/// Absolute tolerance used when comparing amplitudes and probabilities.
pub const AMPLITUDE_TOLERANCE: f64 = 1e-9;

// Below this many index groups per gate the rayon overhead dominates.
const PARALLEL_THRESHOLD: usize = 1 << 14;

/// Dense statevector; bit `i` of a basis index is qubit `i`.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    qubits: usize,
    amps: Vec<Complex64>,
}

/// `|0…0⟩` on `qubit_count` qubits.
pub fn new_state(qubit_count: usize) -> Result<StateVector> {
    StateVector::new(qubit_count)
}

impl StateVector {
    pub fn new(qubit_count: usize) -> Result<StateVector> {
        StateVector::basis(qubit_count, 0)
    }

    /// The computational basis state `|index⟩`.
    pub fn basis(qubit_count: usize, index: usize) -> Result<StateVector> {
        check_capacity(qubit_count)?;
        let len = 1usize << qubit_count;
        if index >= len {
            return Err(structural(format!(
                "basis index {index} out of range for {qubit_count} qubits"
            )));
        }
        let mut amps = vec![Complex64::new(0.0, 0.0); len];
        amps[index] = Complex64::new(1.0, 0.0);
        Ok(StateVector {
            qubits: qubit_count,
            amps,
        })
    }

    /// Wraps raw amplitudes; the length must be a power of two.
    pub fn from_amplitudes(amps: Vec<Complex64>) -> Result<StateVector> {
        let len = amps.len();
        if len < 2 || !len.is_power_of_two() {
            return Err(structural(format!(
                "amplitude count {len} is not a power of two >= 2"
            )));
        }
        let qubits = len.trailing_zeros() as usize;
        check_capacity(qubits)?;
        Ok(StateVector { qubits, amps })
    }

    pub fn qubit_count(&self) -> usize {
        self.qubits
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn amplitude(&self, index: usize) -> Complex64 {
        self.amps[index]
    }

    pub fn probability(&self, index: usize) -> f64 {
        self.amps[index].norm_sqr()
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    /// `|⟨self|other⟩|²`.
    pub fn fidelity(&self, other: &StateVector) -> f64 {
        self.inner(other).norm_sqr()
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &StateVector) -> Complex64 {
        self.amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    pub fn apply_gate(&mut self, gate: &Gate) -> Result<()> {
        if gate.max_qubit() >= self.qubits {
            return Err(structural(format!(
                "gate {gate} out of range for {} qubits",
                self.qubits
            )));
        }
        apply_unchecked(&mut self.amps, self.qubits, gate);
        Ok(())
    }

    pub fn run(&mut self, circuit: &Circuit) -> Result<()> {
        if circuit.qubit_count() != self.qubits {
            return Err(structural(format!(
                "circuit has {} qubits, state has {}",
                circuit.qubit_count(),
                self.qubits
            )));
        }
        for g in circuit.gates() {
            apply_unchecked(&mut self.amps, self.qubits, g);
        }
        Ok(())
    }
}

/// Applies `circuit` to `state` and returns the result.
pub fn run(circuit: &Circuit, mut state: StateVector) -> Result<StateVector> {
    state.run(circuit)?;
    Ok(state)
}

fn check_capacity(qubit_count: usize) -> Result<()> {
    if qubit_count == 0 || qubit_count > MAX_QUBITS {
        return Err(capacity(format!(
            "dense simulation supports 1..={MAX_QUBITS} qubits, requested {qubit_count}"
        )));
    }
    Ok(())
}

#[derive(Clone, Copy)]
struct AmpPtr(*mut Complex64);
// Safety: every kernel below writes a set of indices derived from a distinct
// loop counter, so no two workers ever touch the same amplitude.
unsafe impl Send for AmpPtr {}
unsafe impl Sync for AmpPtr {}

/// Visits `base` for every index whose `fixed` bits equal the bits of `ones`.
/// `fixed` must be sorted ascending.
fn for_each_base<F>(qubits: usize, fixed: &[usize], ones: usize, f: F)
where
    F: Fn(usize) + Sync + Send,
{
    let groups = 1usize << (qubits - fixed.len());
    let expand = |mut i: usize| {
        for &p in fixed {
            let low = i & ((1usize << p) - 1);
            i = ((i >> p) << (p + 1)) | low;
        }
        i | ones
    };
    if groups >= PARALLEL_THRESHOLD {
        (0..groups).into_par_iter().for_each(|i| f(expand(i)));
    } else {
        (0..groups).for_each(|i| f(expand(i)));
    }
}

pub(crate) fn apply_unchecked(amps: &mut [Complex64], qubits: usize, gate: &Gate) {
    let cmask: usize = gate.controls().iter().fold(0, |m, &c| m | (1 << c));
    let mut fixed: Vec<usize> = gate.qubits().collect();
    fixed.sort_unstable();
    let ptr = AmpPtr(amps.as_mut_ptr());
    let t = gate.targets()[0];
    let tbit = 1usize << t;
    match gate.kind() {
        GateKind::X => for_each_base(qubits, &fixed, cmask, move |i| unsafe {
            let p = ptr;
            std::ptr::swap(p.0.add(i), p.0.add(i | tbit));
        }),
        GateKind::H => {
            let s = std::f64::consts::FRAC_1_SQRT_2;
            for_each_base(qubits, &fixed, cmask, move |i| unsafe {
                let p = ptr;
                let a = *p.0.add(i);
                let b = *p.0.add(i | tbit);
                *p.0.add(i) = (a + b) * s;
                *p.0.add(i | tbit) = (a - b) * s;
            })
        }
        GateKind::Swap => {
            let ubit = 1usize << gate.targets()[1];
            for_each_base(qubits, &fixed, cmask | tbit, move |i| unsafe {
                let p = ptr;
                std::ptr::swap(p.0.add(i), p.0.add(i ^ tbit ^ ubit));
            })
        }
        GateKind::Phase(theta) | GateKind::ControlledPhase(theta) => {
            let w = Complex64::from_polar(1.0, theta);
            for_each_base(qubits, &fixed, cmask | tbit, move |i| unsafe {
                let p = ptr;
                *p.0.add(i) *= w;
            })
        }
    }
}
