use std::f64::consts::PI;

use num_complex::Complex64;
use proptest::prelude::*;

use qarith_core::qft::{qft_circuit, qft_noswap};
use qarith_core::simulator::{dump, parse, run, unitary};
use qarith_core::{Circuit, Gate, GateKind, SparseState, StateVector};

fn gate(qubits: usize) -> impl Strategy<Value = Gate> {
    (
        0..5u8,
        Just((0..qubits).collect::<Vec<usize>>()).prop_shuffle(),
        0..=2usize,
        -PI..PI,
    )
        .prop_map(move |(kind, order, controls, angle)| {
            let kind = match kind {
                0 => GateKind::X,
                1 => GateKind::H,
                2 if qubits >= 2 => GateKind::Swap,
                3 | 2 => GateKind::Phase(angle),
                _ if qubits >= 2 => GateKind::ControlledPhase(angle),
                _ => GateKind::Phase(angle),
            };
            let arity = if kind == GateKind::Swap { 2 } else { 1 };
            let min = usize::from(matches!(kind, GateKind::ControlledPhase(_)));
            let controls = controls.clamp(min, qubits - arity);
            Gate::new(
                kind,
                order[..arity].to_vec(),
                order[arity..arity + controls].to_vec(),
            )
            .unwrap()
        })
}

fn circuit(max_qubits: usize) -> impl Strategy<Value = Circuit> {
    (1..=max_qubits).prop_flat_map(|q| {
        prop::collection::vec(gate(q), 0..40).prop_map(move |gates| {
            let mut c = Circuit::new(q);
            c.extend(gates);
            c
        })
    })
}

fn state(qubits: usize) -> impl Strategy<Value = StateVector> {
    prop::collection::vec((-1.0..1.0f64, -1.0..1.0f64), 1usize << qubits).prop_filter_map(
        "nonzero state",
        |raw| {
            let norm = raw.iter().map(|(r, i)| r * r + i * i).sum::<f64>().sqrt();
            (norm > 1e-3).then(|| {
                StateVector::from_amplitudes(
                    raw.iter()
                        .map(|&(r, i)| Complex64::new(r, i) / norm)
                        .collect(),
                )
                .unwrap()
            })
        },
    )
}

fn circuit_and_state(max_qubits: usize) -> impl Strategy<Value = (Circuit, StateVector)> {
    circuit(max_qubits).prop_flat_map(|c| {
        let q = c.qubit_count();
        (Just(c), state(q))
    })
}

fn max_diff(a: &[Complex64], b: &[Complex64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn inverse_undoes_circuit((c, psi) in circuit_and_state(6)) {
        let out = run(&c, psi.clone()).unwrap();
        prop_assert!((out.norm_sqr() - 1.0).abs() < 1e-9);
        let back = run(&c.inverse(), out).unwrap();
        prop_assert!(back.fidelity(&psi) > 1.0 - 1e-9);
    }

    #[test]
    fn sparse_matches_dense(c in circuit(6), seed in any::<u64>()) {
        let q = c.qubit_count();
        let index = seed % (1u64 << q);
        let dense = run(&c, StateVector::basis(q, index as usize).unwrap()).unwrap();
        let mut sparse = SparseState::basis(q, index).unwrap();
        sparse.run(&c).unwrap();
        let sparse = sparse.to_dense().unwrap();
        prop_assert!(max_diff(dense.amplitudes(), sparse.amplitudes()) < 1e-9);
    }

    #[test]
    fn control_masks_the_circuit((c, psi) in circuit_and_state(5)) {
        // An extra top qubit controls every gate.
        let q = c.qubit_count();
        let ctl = c.controlled(&[q]).unwrap();
        let zero = [psi.amplitudes().to_vec(), vec![Complex64::default(); 1 << q]].concat();
        let out = run(&ctl, StateVector::from_amplitudes(zero.clone()).unwrap()).unwrap();
        prop_assert!(max_diff(out.amplitudes(), &zero) < 1e-12);

        let one = [vec![Complex64::default(); 1 << q], psi.amplitudes().to_vec()].concat();
        let out = run(&ctl, StateVector::from_amplitudes(one).unwrap()).unwrap();
        let plain = run(&c, psi).unwrap();
        prop_assert!(max_diff(&out.amplitudes()[1 << q..], plain.amplitudes()) < 1e-9);
        prop_assert!(out.amplitudes()[..1 << q].iter().all(|a| a.norm() < 1e-12));
    }

    #[test]
    fn dump_is_a_fixed_point(c in circuit(6)) {
        let text = dump(&c);
        let parsed = parse(&text).unwrap();
        prop_assert_eq!(parsed.qubit_count(), c.qubit_count());
        prop_assert_eq!(parsed.len(), c.len());
        prop_assert_eq!(dump(&parsed), text);
    }
}

#[test]
fn qft_is_unitary() {
    for n in 1..=6usize {
        let u = unitary(&qft_circuit(&(0..n).collect::<Vec<_>>()).unwrap()).unwrap();
        let dim = 1 << n;
        for i in 0..dim {
            for j in 0..dim {
                let dot: Complex64 = (0..dim).map(|k| u[k][i].conj() * u[k][j]).sum();
                let want = if i == j { 1.0 } else { 0.0 };
                assert!((dot - want).norm() < 1e-10, "n={n}, ({i},{j}): {dot}");
            }
        }
    }
}

#[test]
fn basis_states_map_to_phase_ramps() {
    for n in 1..=6usize {
        let dim = 1usize << n;
        let reg: Vec<usize> = (0..n).collect();
        let (with_swaps, no_swaps) = (qft_circuit(&reg).unwrap(), qft_noswap(&reg).unwrap());
        let reverse = |y: usize| (0..n).fold(0, |r, k| r | (((y >> k) & 1) << (n - 1 - k)));
        for x in 0..dim {
            let a = run(&with_swaps, StateVector::basis(n, x).unwrap()).unwrap();
            let b = run(&no_swaps, StateVector::basis(n, x).unwrap()).unwrap();
            for y in 0..dim {
                let want = Complex64::from_polar(
                    1.0 / (dim as f64).sqrt(),
                    2.0 * PI * (x * y) as f64 / dim as f64,
                );
                assert!((a.amplitude(y) - want).norm() < 1e-10);
                assert!((b.amplitude(reverse(y)) - want).norm() < 1e-10);
            }
        }
    }
}

#[test]
fn parse_rejects_garbage() {
    assert!(parse("FOO 1 2").is_err());
    assert!(parse("X").is_err());
    assert!(parse("X 1,2").is_err());
    assert!(parse("CPHASE 0 angle: 0.5").is_err());
}
