//! Quantum phase estimation over a pluggable controlled-unitary supplier.

use std::f64::consts::PI;

use crate::error::{capacity, structural, Result};
use crate::layout::{Program, RegisterLayout, Role};
use crate::qft::iqft_circuit;
use crate::simulator::{check_disjoint, marginal_probabilities, Circuit, Gate, Probabilities};

/// Supplies controlled powers `U^{2^power}` of a fixed unitary.
pub trait ControlledPowerSupplier {
    /// Circuit applying `U^{2^power}` to the work register when `control` is set.
    fn controlled_power(&self, power: usize, control: usize) -> Result<Circuit>;
}

/// `U = Phase(angle)` on one work qubit; powers fuse into a single rotation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhaseGateSupplier {
    pub target: usize,
    pub angle: f64,
}

impl ControlledPowerSupplier for PhaseGateSupplier {
    fn controlled_power(&self, power: usize, control: usize) -> Result<Circuit> {
        let angle = (self.angle * 2f64.powi(power as i32)).rem_euclid(2.0 * PI);
        let mut c = Circuit::new(0);
        c.push(Gate::cphase(control, self.target, angle));
        Ok(c)
    }
}

/// Generic supplier: controls `unitary` and repeats it `2^power` times.
#[derive(Debug, Clone, PartialEq)]
pub struct RepeatedSupplier {
    pub unitary: Circuit,
}

impl ControlledPowerSupplier for RepeatedSupplier {
    fn controlled_power(&self, power: usize, control: usize) -> Result<Circuit> {
        if power > 20 {
            return Err(capacity("repeated supplier limited to 2^20 repetitions"));
        }
        let once = self.unitary.controlled(&[control])?;
        let mut c = Circuit::new(0);
        for _ in 0..(1usize << power) {
            c.append(&once);
        }
        Ok(c)
    }
}

/// Hadamards on `counting`, controlled `U^{2^t}` from `counting[t]`, then the
/// inverse QFT. The work register must already hold an eigenstate.
pub fn qpe_circuit(
    counting: &[usize],
    work: &[usize],
    supplier: &dyn ControlledPowerSupplier,
) -> Result<Circuit> {
    if counting.is_empty() {
        return Err(structural("empty counting register"));
    }
    check_disjoint(&[("counting", counting), ("work", work)])?;
    let mut c = Circuit::new(0);
    for &q in counting {
        c.push(Gate::h(q));
    }
    for (t, &q) in counting.iter().enumerate() {
        let block = supplier.controlled_power(t, q)?;
        if let Some(stray) = block
            .acting_qubits()
            .into_iter()
            .find(|b| *b != q && !work.contains(b))
        {
            return Err(structural(format!(
                "controlled power {t} acts on qubit {stray} outside the work register"
            )));
        }
        c.append(&block);
    }
    c.append(&iqft_circuit(counting)?);
    Ok(c)
}

/// X gates that load the basis value `value` into `work`.
pub fn prepare_basis_eigenstate(work: &[usize], value: u64) -> Circuit {
    work.iter()
        .enumerate()
        .filter(|(k, _)| (value >> k) & 1 == 1)
        .map(|(_, &q)| Gate::x(q))
        .collect()
}

/// Outcome of reading the counting register.
#[derive(Debug, Clone, PartialEq)]
pub struct PhaseEstimate {
    pub measured: u64,
    pub width: usize,
    /// `measured / 2^width`, in turns.
    pub theta: f64,
    pub distribution: Vec<f64>,
}

impl PhaseEstimate {
    pub fn from_measurement(measured: u64, width: usize, distribution: Vec<f64>) -> PhaseEstimate {
        PhaseEstimate {
            measured,
            width,
            theta: measured as f64 / 2f64.powi(width as i32),
            distribution,
        }
    }
}

/// The most likely counting value (lowest on ties) and the full marginal.
pub fn estimate_phase(state: &dyn Probabilities, counting: &[usize]) -> Result<PhaseEstimate> {
    let dist = marginal_probabilities(state, counting)?;
    let mut best = 0;
    for (j, p) in dist.iter().enumerate() {
        if *p > dist[best] {
            best = j;
        }
    }
    Ok(PhaseEstimate::from_measurement(
        best as u64,
        counting.len(),
        dist,
    ))
}

/// Closed-form probability of reading `j` for phase `theta` (in turns) with
/// an `n`-qubit counting register.
pub fn qpe_outcome_probability(n: usize, theta: f64, j: u64) -> f64 {
    let size = 2f64.powi(n as i32);
    let delta = theta - j as f64 / size;
    let s = (PI * delta).sin();
    if s.abs() < 1e-15 {
        return 1.0;
    }
    let ratio = (PI * size * delta).sin() / (size * s);
    ratio * ratio
}

/// Phase-gate QPE: `counting` (`n` qubits) and a one-qubit `work` register
/// prepared in the `|1⟩` eigenstate of `Phase(2π·theta)`.
pub fn phase_gate_qpe_program(n: usize, theta: f64) -> Result<Program> {
    let mut l = RegisterLayout::new();
    let counting = l.add("counting", Role::Counting, n)?;
    let work = l.add("work", Role::Value, 1)?;
    let supplier = PhaseGateSupplier {
        target: work[0],
        angle: 2.0 * PI * theta,
    };
    let mut c = prepare_basis_eigenstate(&work, 1);
    c.append(&qpe_circuit(&counting, &work, &supplier)?);
    Ok(Program::new(l, c))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::simulator::{run, StateVector};

    fn estimate(n: usize, theta: f64) -> PhaseEstimate {
        let p = phase_gate_qpe_program(n, theta).unwrap();
        let s = run(&p.circuit, StateVector::new(p.qubit_count()).unwrap()).unwrap();
        estimate_phase(&s, p.layout.qubits("counting").unwrap()).unwrap()
    }

    #[test]
    fn example_one_eighth() {
        let e = estimate(3, 1.0 / 8.0);
        assert_eq!(e.measured, 1);
        assert_eq!(e.theta, 0.125);
        assert!((e.distribution[1] - 1.0).abs() < 1e-9);
    }

    #[test]
    fn five_sixteenths() {
        let e = estimate(4, 5.0 / 16.0);
        assert_eq!(e.measured, 5);
        assert!((e.distribution[5] - 1.0).abs() < 1e-9);
    }

    #[test]
    fn identity_reads_zero() {
        let mut l = RegisterLayout::new();
        let counting = l.add("c", Role::Counting, 3).unwrap();
        let work = l.add("w", Role::Value, 1).unwrap();
        let sup = RepeatedSupplier {
            unitary: Circuit::new(work[0] + 1),
        };
        let c = qpe_circuit(&counting, &work, &sup).unwrap().widened(4);
        let s = run(&c, StateVector::new(4).unwrap()).unwrap();
        let e = estimate_phase(&s, &counting).unwrap();
        assert_eq!(e.measured, 0);
        assert!((e.distribution[0] - 1.0).abs() < 1e-9);
    }

    #[test]
    fn repeated_supplier_matches_fused() {
        let mut u = Circuit::new(0);
        u.push(Gate::phase(3, 2.0 * PI * 3.0 / 8.0));
        let rep = RepeatedSupplier { unitary: u };
        let c = qpe_circuit(&[0, 1, 2], &[3], &rep).unwrap();
        let mut full = prepare_basis_eigenstate(&[3], 1);
        full.append(&c);
        let s = run(&full, StateVector::new(4).unwrap()).unwrap();
        assert_eq!(estimate_phase(&s, &[0, 1, 2]).unwrap().measured, 3);
    }

    #[test]
    fn foreign_qubits_rejected() {
        let sup = PhaseGateSupplier {
            target: 7,
            angle: 1.0,
        };
        assert!(qpe_circuit(&[0, 1], &[2], &sup).is_err());
    }

    #[test]
    fn reading_0001() {
        let e = PhaseEstimate::from_measurement(0b0001, 4, vec![]);
        assert_eq!(e.theta, 1.0 / 16.0);
    }
}
