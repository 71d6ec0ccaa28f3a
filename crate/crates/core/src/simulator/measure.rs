use std::collections::{BTreeMap, BTreeSet};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::sparse::SparseState;
use super::state::StateVector;
use crate::error::{structural, Result};

/// Read access to basis probabilities, shared by the dense and sparse states.
pub trait Probabilities {
    fn qubit_count(&self) -> usize;
    /// Calls `f(index, probability)` for every basis state with nonzero amplitude.
    fn visit(&self, f: &mut dyn FnMut(u64, f64));
}

impl Probabilities for StateVector {
    fn qubit_count(&self) -> usize {
        StateVector::qubit_count(self)
    }

    fn visit(&self, f: &mut dyn FnMut(u64, f64)) {
        for (i, a) in self.amplitudes().iter().enumerate() {
            let p = a.norm_sqr();
            if p > 0.0 {
                f(i as u64, p);
            }
        }
    }
}

impl Probabilities for SparseState {
    fn qubit_count(&self) -> usize {
        SparseState::qubit_count(self)
    }

    fn visit(&self, f: &mut dyn FnMut(u64, f64)) {
        for (i, a) in self.terms() {
            f(i, a.norm_sqr());
        }
    }
}

/// Sampled outcomes of a register measurement.
///
/// Samples are drawn with ChaCha8 (`rand_chacha::ChaCha8Rng::seed_from_u64`),
/// so a seed reproduces a histogram bit for bit.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MeasurementHistogram {
    pub shots: u64,
    pub seed: u64,
    #[serde(with = "string_keys")]
    pub counts: BTreeMap<u64, u64>,
}

impl MeasurementHistogram {
    /// The most frequent value; ties go to the smaller value.
    pub fn mode(&self) -> Option<u64> {
        self.counts
            .iter()
            .max_by(|a, b| a.1.cmp(b.1).then(b.0.cmp(a.0)))
            .map(|(v, _)| *v)
    }

    pub fn to_json(&self) -> String {
        crate::to_sorted_json(self)
    }
}

mod string_keys {
    use std::collections::BTreeMap;

    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(m: &BTreeMap<u64, u64>, s: S) -> Result<S::Ok, S::Error> {
        let as_strings: BTreeMap<String, u64> =
            m.iter().map(|(k, v)| (k.to_string(), *v)).collect();
        as_strings.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BTreeMap<u64, u64>, D::Error> {
        let raw = BTreeMap::<String, u64>::deserialize(d)?;
        raw.into_iter()
            .map(|(k, v)| {
                k.parse::<u64>()
                    .map(|k| (k, v))
                    .map_err(serde::de::Error::custom)
            })
            .collect()
    }
}

fn check_qubits(state: &dyn Probabilities, qubits: &[usize]) -> Result<()> {
    let mut seen = BTreeSet::new();
    for &q in qubits {
        if q >= state.qubit_count() {
            return Err(structural(format!(
                "qubit {q} out of range for {} qubits",
                state.qubit_count()
            )));
        }
        if !seen.insert(q) {
            return Err(structural(format!("qubit {q} listed twice")));
        }
    }
    if qubits.len() > 63 {
        return Err(structural("cannot read more than 63 qubits as one value"));
    }
    Ok(())
}

/// Value of the listed qubits (first entry is the least-significant bit).
pub fn extract_bits(index: u64, qubits: &[usize]) -> u64 {
    qubits
        .iter()
        .enumerate()
        .fold(0, |v, (k, &q)| v | (((index >> q) & 1) << k))
}

/// Exact marginal over `qubits`; values with zero probability are omitted.
pub fn marginal_distribution(
    state: &dyn Probabilities,
    qubits: &[usize],
) -> Result<BTreeMap<u64, f64>> {
    check_qubits(state, qubits)?;
    let mut out = BTreeMap::new();
    state.visit(&mut |i, p| *out.entry(extract_bits(i, qubits)).or_insert(0.0) += p);
    Ok(out)
}

/// Exact marginal as a dense vector of length `2^qubits.len()`.
pub fn marginal_probabilities(state: &dyn Probabilities, qubits: &[usize]) -> Result<Vec<f64>> {
    check_qubits(state, qubits)?;
    if qubits.len() > super::state::MAX_QUBITS {
        return Err(crate::error::capacity("marginal register too wide"));
    }
    let mut out = vec![0.0; 1usize << qubits.len()];
    state.visit(&mut |i, p| out[extract_bits(i, qubits) as usize] += p);
    Ok(out)
}

/// Samples `shots` outcomes of measuring `qubits`; `state` is not collapsed.
pub fn measure_register(
    state: &dyn Probabilities,
    qubits: &[usize],
    shots: u64,
    seed: u64,
) -> Result<MeasurementHistogram> {
    if shots == 0 {
        return Err(structural("shots must be at least 1"));
    }
    let dist = marginal_distribution(state, qubits)?;
    Ok(sample_distribution(&dist, shots, seed))
}

/// Draws `shots` samples from a value→probability map.
pub fn sample_distribution(
    dist: &BTreeMap<u64, f64>,
    shots: u64,
    seed: u64,
) -> MeasurementHistogram {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let values: Vec<u64> = dist.keys().copied().collect();
    let mut cumulative = Vec::with_capacity(values.len());
    let mut total = 0.0;
    for p in dist.values() {
        total += p;
        cumulative.push(total);
    }
    let mut counts = BTreeMap::new();
    for _ in 0..shots {
        let u = rng.random::<f64>() * total;
        let k = cumulative
            .partition_point(|&c| c <= u)
            .min(values.len() - 1);
        *counts.entry(values[k]).or_insert(0) += 1;
    }
    MeasurementHistogram {
        shots,
        seed,
        counts,
    }
}

/// Draws one sample from a dense probability vector indexed by value.
pub fn sample_index(probs: &[f64], rng: &mut impl Rng) -> u64 {
    let total: f64 = probs.iter().sum();
    let mut u = rng.random::<f64>() * total;
    for (i, p) in probs.iter().enumerate() {
        if u < *p {
            return i as u64;
        }
        u -= p;
    }
    probs.iter().rposition(|p| *p > 0.0).unwrap_or(0) as u64
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::simulator::gate::Gate;

    #[test]
    fn basis_state_measures_deterministically() {
        let s = StateVector::basis(3, 0b101).unwrap();
        let h = measure_register(&s, &[0, 1, 2], 100, 7).unwrap();
        assert_eq!(h.counts, BTreeMap::from([(5, 100)]));
        let h = measure_register(&s, &[2, 1], 10, 7).unwrap();
        assert_eq!(h.counts, BTreeMap::from([(1, 10)]));
    }

    #[test]
    fn fair_coin_within_five_sigma() {
        let mut s = StateVector::new(1).unwrap();
        s.apply_gate(&Gate::h(0)).unwrap();
        let h = measure_register(&s, &[0], 10_000, 42).unwrap();
        for v in [0, 1] {
            let c = h.counts[&v] as i64;
            assert!((c - 5000).abs() <= 300, "count {c}");
        }
        assert_eq!(h.counts.values().sum::<u64>(), 10_000);
    }

    #[test]
    fn marginals() {
        let s = StateVector::new(4).unwrap();
        assert_eq!(
            marginal_distribution(&s, &[0, 1]).unwrap(),
            BTreeMap::from([(0, 1.0)])
        );
        let mut u = StateVector::new(3).unwrap();
        for q in 0..3 {
            u.apply_gate(&Gate::h(q)).unwrap();
        }
        let m = marginal_probabilities(&u, &[0, 1, 2]).unwrap();
        assert!(m.iter().all(|p| (p - 0.125).abs() < 1e-12));
        assert!(marginal_distribution(&u, &[0, 0]).is_err());
        assert!(marginal_distribution(&u, &[3]).is_err());
    }

    #[test]
    fn histogram_json_shape() {
        let h = MeasurementHistogram {
            shots: 3,
            seed: 1,
            counts: BTreeMap::from([(2, 1), (10, 2)]),
        };
        let v: serde_json::Value = serde_json::from_str(&h.to_json()).unwrap();
        assert_eq!(v["shots"], 3);
        assert_eq!(v["counts"]["10"], 2);
        let back: MeasurementHistogram = serde_json::from_str(&h.to_json()).unwrap();
        assert_eq!(back, h);
    }

    #[test]
    fn zero_shots_rejected() {
        let s = StateVector::new(1).unwrap();
        assert!(measure_register(&s, &[0], 0, 1).is_err());
    }
}
