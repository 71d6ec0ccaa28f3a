//! Order finding and factoring.
//!
//! Two backends produce the counting-register distribution:
//! * `Full` simulates the order-finding circuit on the dense simulator
//!   (`t + 2n + 1` qubits);
//! * `Fast` uses the structure of the state before the inverse QFT: after
//!   measuring the work register in class `v`, the counting register is the
//!   uniform superposition of `{ j : a^j mod N = v }`, so the marginal is a
//!   sum of squared DFT magnitudes of those indicator vectors.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use rustfft::num_complex::Complex64;
use rustfft::FftPlanner;
use serde::{Serialize, Serializer};

use crate::error::{capacity, domain, Error, Result};
use crate::layout::{Program, RegisterLayout, Role};
use crate::qft::iqft_circuit;
use crate::qft_const_arith::classical::{ceil_log2, gcd, is_prime, mod_pow, perfect_power};
use crate::qft_const_arith::const_mod_exp;
use crate::simulator::{marginal_probabilities, run, sample_index, Gate, StateVector, MAX_QUBITS};

/// Largest counting register the fast backend accepts.
pub const FAST_MAX_T: usize = 22;

/// Default attempt budget for [`factor`].
pub const DEFAULT_MAX_ATTEMPTS: usize = 64;

// `Auto` simulates the full circuit up to this many qubits.
const AUTO_FULL_LIMIT: usize = 20;

/// Parameters of one order-finding run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OrderFindingConfig {
    pub modulus: u64,
    pub base: u64,
    /// Counting register width.
    pub t: usize,
}

impl OrderFindingConfig {
    /// `t` defaults to `2n`, `n = ⌈log₂ N⌉`.
    pub fn new(modulus: u64, base: u64) -> Result<OrderFindingConfig> {
        if modulus < 3 {
            return Err(domain(format!(
                "modulus {modulus} too small for order finding"
            )));
        }
        OrderFindingConfig::with_t(modulus, base, 2 * ceil_log2(modulus))
    }

    pub fn with_t(modulus: u64, base: u64, t: usize) -> Result<OrderFindingConfig> {
        if modulus < 3 {
            return Err(domain(format!(
                "modulus {modulus} too small for order finding"
            )));
        }
        if base <= 1 || base >= modulus {
            return Err(domain(format!(
                "base {base} must satisfy 1 < a < {modulus}"
            )));
        }
        if gcd(base, modulus) != 1 {
            return Err(domain(format!("gcd({base}, {modulus}) != 1")));
        }
        if t == 0 || t > 62 {
            return Err(domain(format!("counting width {t} not in 1..=62")));
        }
        Ok(OrderFindingConfig { modulus, base, t })
    }

    /// Bits per work register.
    pub fn n(&self) -> usize {
        ceil_log2(self.modulus)
    }

    /// Qubits of the full circuit: counting, result, zero register, ancilla.
    pub fn full_qubits(&self) -> usize {
        self.t + 2 * self.n() + 1
    }
}

/// Layout plus the counting, result and work qubits.
type OrderLayout = (RegisterLayout, Vec<usize>, Vec<usize>, Vec<usize>);

fn order_layout(config: &OrderFindingConfig) -> Result<OrderLayout> {
    let n = config.n();
    let mut l = RegisterLayout::new();
    let counting = l.add("counting", Role::Counting, config.t)?;
    let result = l.add("result", Role::Result, n)?;
    let work = l.add("work", Role::Aux, n + 1)?;
    Ok((l, counting, result, work))
}

/// Hadamards on the counting register followed by modular exponentiation,
/// leaving `Σ_j |j⟩|a^j mod N⟩` (before the inverse QFT).
pub fn modexp_stage_program(config: &OrderFindingConfig) -> Result<Program> {
    let (l, counting, result, work) = order_layout(config)?;
    let mut c = counting
        .iter()
        .map(|&q| Gate::h(q))
        .collect::<crate::Circuit>();
    c.append(&const_mod_exp(
        &counting,
        &result,
        &work,
        config.base,
        config.modulus,
    )?);
    Ok(Program::new(l, c))
}

/// The complete order-finding circuit: Hadamards, modular exponentiation,
/// inverse QFT on the counting register.
pub fn order_finding_circuit(config: &OrderFindingConfig) -> Result<Program> {
    if config.full_qubits() > MAX_QUBITS {
        return Err(capacity(format!(
            "order finding for N={} with t={} needs {} qubits (limit {MAX_QUBITS}); use the fast backend",
            config.modulus,
            config.t,
            config.full_qubits()
        )));
    }
    let mut p = modexp_stage_program(config)?;
    let counting = p.layout.qubits("counting")?.to_vec();
    p.circuit.append(&iqft_circuit(&counting)?);
    Ok(p)
}

/// Counting-register marginal from full statevector simulation.
pub fn order_finding_full(config: &OrderFindingConfig) -> Result<Vec<f64>> {
    let p = order_finding_circuit(config)?;
    let state = run(&p.circuit, StateVector::new(p.qubit_count())?)?;
    marginal_probabilities(&state, p.layout.qubits("counting")?)
}

/// Counting-register marginal from the per-class DFT.
pub fn order_finding_fast(config: &OrderFindingConfig) -> Result<Vec<f64>> {
    if config.t > FAST_MAX_T {
        return Err(capacity(format!(
            "fast backend supports t <= {FAST_MAX_T}, requested {}",
            config.t
        )));
    }
    let size = 1usize << config.t;
    let mut class_of: HashMap<u64, usize> = HashMap::new();
    let mut members: Vec<Vec<usize>> = Vec::new();
    let mut value = 1 % config.modulus;
    for j in 0..size {
        let id = *class_of.entry(value).or_insert_with(|| {
            members.push(Vec::new());
            members.len() - 1
        });
        members[id].push(j);
        value = (u128::from(value) * u128::from(config.base) % u128::from(config.modulus)) as u64;
    }
    let fft = FftPlanner::<f64>::new().plan_fft_forward(size);
    let norm = 1.0 / (size as f64 * size as f64);
    let probs = members
        .par_iter()
        .map(|m| {
            let mut buf = vec![Complex64::new(0.0, 0.0); size];
            for &j in m {
                buf[j] = Complex64::new(1.0, 0.0);
            }
            fft.process(&mut buf);
            buf.iter()
                .map(|c| c.norm_sqr() * norm)
                .collect::<Vec<f64>>()
        })
        .reduce(
            || vec![0.0; size],
            |mut acc, p| {
                acc.iter_mut().zip(p).for_each(|(a, b)| *a += b);
                acc
            },
        );
    Ok(probs)
}

/// How the counting distribution is produced.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Backend {
    Full,
    Fast,
    /// Full simulation for circuits up to 20 qubits, the fast backend above.
    Auto,
}

impl FromStr for Backend {
    type Err = Error;

    fn from_str(s: &str) -> Result<Backend> {
        match s {
            "full" => Ok(Backend::Full),
            "fast" => Ok(Backend::Fast),
            "auto" => Ok(Backend::Auto),
            other => Err(domain(format!(
                "unknown backend '{other}' (full, fast, auto)"
            ))),
        }
    }
}

impl fmt::Display for Backend {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Backend::Full => "full",
            Backend::Fast => "fast",
            Backend::Auto => "auto",
        })
    }
}

pub fn counting_distribution(config: &OrderFindingConfig, backend: Backend) -> Result<Vec<f64>> {
    match backend {
        Backend::Full => order_finding_full(config),
        Backend::Fast => order_finding_fast(config),
        Backend::Auto if config.full_qubits() <= AUTO_FULL_LIMIT => order_finding_full(config),
        Backend::Auto => order_finding_fast(config),
    }
}

/// A continued-fraction convergent `numerator / denominator`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Convergent {
    pub numerator: u64,
    pub denominator: u64,
}

impl Serialize for Convergent {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        [self.numerator, self.denominator].serialize(s)
    }
}

impl fmt::Display for Convergent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.numerator, self.denominator)
    }
}

/// Convergents of `numerator / denominator` with denominator at most
/// `max_denominator`. When two consecutive convergents share a denominator
/// (only possible as `0/1, 1/1`) the later one replaces the earlier, so
/// denominators strictly increase.
pub fn continued_fraction(
    numerator: u64,
    denominator: u64,
    max_denominator: u64,
) -> Vec<Convergent> {
    let mut out: Vec<Convergent> = Vec::new();
    if denominator == 0 {
        return out;
    }
    let (mut p, mut q) = (u128::from(numerator), u128::from(denominator));
    let (mut h1, mut h2) = (1u128, 0u128);
    let (mut k1, mut k2) = (0u128, 1u128);
    while q != 0 {
        let a = p / q;
        (p, q) = (q, p % q);
        let h = a * h1 + h2;
        let k = a * k1 + k2;
        if k > u128::from(max_denominator) {
            break;
        }
        let conv = Convergent {
            numerator: h as u64,
            denominator: k as u64,
        };
        match out.last_mut() {
            Some(last) if last.denominator == conv.denominator => *last = conv,
            _ => out.push(conv),
        }
        (h2, h1) = (h1, h);
        (k2, k1) = (k1, k);
    }
    out
}

/// Why a measurement did not yield an order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Rejection {
    /// Measured 0: carries no information about `r`.
    ZeroMeasurement,
    /// No denominator `d` (or `2d`, `3d`, `4d`) up to `N` satisfies `a^d ≡ 1`.
    NoOrder,
}

/// Candidate multiples of each convergent denominator.
const DENOMINATOR_MULTIPLES: u64 = 4;

/// Smallest `r = k·d ≤ N` (`d` a convergent denominator of
/// `measured / 2^t`, `k ≤ 4`) with `a^r ≡ 1 (mod N)`.
pub fn recover_order(
    measured: u64,
    t: usize,
    config: &OrderFindingConfig,
) -> std::result::Result<u64, Rejection> {
    if measured == 0 {
        return Err(Rejection::ZeroMeasurement);
    }
    let n = config.modulus;
    continued_fraction(measured, 1u64 << t, n)
        .iter()
        .filter(|c| c.numerator != 0)
        .flat_map(|c| (1..=DENOMINATOR_MULTIPLES).map(move |k| c.denominator * k))
        .filter(|&d| d <= n && mod_pow(config.base, d, n) == 1)
        .min()
        .ok_or(Rejection::NoOrder)
}

/// `gcd(a^{r/2} − 1, N)` and `gcd(a^{r/2} + 1, N)` for even `r`.
pub fn factors_from_order(a: u64, r: u64, n: u64) -> Option<(u64, u64)> {
    if r % 2 == 1 {
        return None;
    }
    let y = mod_pow(a, r / 2, n);
    Some((gcd((y + n - 1) % n, n), gcd(y + 1, n)))
}

/// Outcome label of one factoring attempt.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum AttemptStatus {
    GcdShortcut,
    Accepted,
    ZeroMeasurement,
    NoOrder,
    OddOrder,
    TrivialRoot,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Attempt {
    pub a: u64,
    pub measured: Option<u64>,
    pub convergents: Vec<Convergent>,
    pub r: Option<u64>,
    pub status: AttemptStatus,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FactorReport {
    #[serde(rename = "N")]
    pub n: u64,
    pub factors: Vec<u64>,
    pub seed: u64,
    pub attempts: Vec<Attempt>,
}

impl FactorReport {
    pub fn to_json(&self) -> String {
        crate::to_sorted_json(self)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FactorOptions {
    pub seed: u64,
    pub backend: Backend,
    /// Counting width; `2⌈log₂ N⌉` when `None`.
    pub t: Option<usize>,
    pub max_attempts: usize,
    /// Use this base for every attempt instead of drawing one at random.
    pub base: Option<u64>,
    /// Take the most likely nonzero outcome instead of sampling.
    pub argmax: bool,
}

impl Default for FactorOptions {
    fn default() -> FactorOptions {
        FactorOptions {
            seed: 1,
            backend: Backend::Auto,
            t: None,
            max_attempts: DEFAULT_MAX_ATTEMPTS,
            base: None,
            argmax: false,
        }
    }
}

fn split(g: u64, n: u64) -> Vec<u64> {
    let mut f = vec![g, n / g];
    f.sort_unstable();
    f
}

/// Factors `N` with classical guards for even and perfect-power inputs and
/// order finding otherwise.
pub fn factor(n: u64, options: &FactorOptions) -> Result<FactorReport> {
    let mut report = FactorReport {
        n,
        factors: Vec::new(),
        seed: options.seed,
        attempts: Vec::new(),
    };
    if n < 4 || is_prime(n) {
        return Err(domain(format!("{n} is not composite")));
    }
    if n % 2 == 0 {
        report.factors = split(2, n);
        return Ok(report);
    }
    if let Some((b, _)) = perfect_power(n) {
        report.factors = split(b, n);
        return Ok(report);
    }
    if let Some(a) = options.base {
        if a <= 1 || a >= n {
            return Err(domain(format!("base {a} must satisfy 1 < a < {n}")));
        }
    }
    let t = options.t.unwrap_or(2 * ceil_log2(n));
    let mut rng = ChaCha8Rng::seed_from_u64(options.seed);
    let mut cache: HashMap<u64, Vec<f64>> = HashMap::new();
    for _ in 0..options.max_attempts {
        let a = options.base.unwrap_or_else(|| rng.random_range(2..n));
        let g = gcd(a, n);
        if g > 1 {
            report.attempts.push(Attempt {
                a,
                measured: None,
                convergents: Vec::new(),
                r: None,
                status: AttemptStatus::GcdShortcut,
            });
            report.factors = split(g, n);
            return Ok(report);
        }
        let config = OrderFindingConfig::with_t(n, a, t)?;
        let dist = match cache.get(&a) {
            Some(d) => d,
            None => {
                let d = counting_distribution(&config, options.backend)?;
                cache.entry(a).or_insert(d)
            }
        };
        let measured = if options.argmax {
            argmax_nonzero(dist)
        } else {
            sample_index(dist, &mut rng)
        };
        let convergents = continued_fraction(measured, 1u64 << t, n);
        let mut attempt = Attempt {
            a,
            measured: Some(measured),
            convergents,
            r: None,
            status: AttemptStatus::NoOrder,
        };
        match recover_order(measured, t, &config) {
            Err(Rejection::ZeroMeasurement) => attempt.status = AttemptStatus::ZeroMeasurement,
            Err(Rejection::NoOrder) => attempt.status = AttemptStatus::NoOrder,
            Ok(r) => {
                attempt.r = Some(r);
                attempt.status = AttemptStatus::OddOrder;
                if let Some((g1, g2)) = factors_from_order(a, r, n) {
                    let mut found: Vec<u64> =
                        [g1, g2].into_iter().filter(|&g| g != 1 && g != n).collect();
                    found.sort_unstable();
                    found.dedup();
                    attempt.status = AttemptStatus::TrivialRoot;
                    if !found.is_empty() {
                        attempt.status = AttemptStatus::Accepted;
                        report.attempts.push(attempt);
                        report.factors = split(found[0], n);
                        return Ok(report);
                    }
                }
            }
        }
        report.attempts.push(attempt);
    }
    Err(Error::Exhausted {
        report: Box::new(report),
    })
}

/// Most probable nonzero outcome, lowest index on ties.
fn argmax_nonzero(dist: &[f64]) -> u64 {
    let mut best = 1.min(dist.len() - 1);
    for (j, p) in dist.iter().enumerate().skip(1) {
        if *p > dist[best] {
            best = j;
        }
    }
    best as u64
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn continued_fraction_examples() {
        let cf = continued_fraction(3414, 4096, 35);
        assert_eq!(
            cf.last().unwrap(),
            &Convergent {
                numerator: 5,
                denominator: 6
            }
        );
        let cf = continued_fraction(64, 256, 15);
        assert_eq!(
            cf.last().unwrap(),
            &Convergent {
                numerator: 1,
                denominator: 4
            }
        );
        assert_eq!(
            continued_fraction(0, 256, 15),
            vec![Convergent {
                numerator: 0,
                denominator: 1
            }]
        );
    }

    #[test]
    fn convergents_are_reduced_and_increasing() {
        for num in 0..512u64 {
            let cf = continued_fraction(num, 512, 1000);
            for w in cf.windows(2) {
                assert!(w[0].denominator < w[1].denominator);
            }
            for c in &cf {
                assert_eq!(gcd(c.numerator, c.denominator), 1);
            }
            let last = cf.last().unwrap();
            assert_eq!(last.numerator * 512, num * last.denominator);
        }
    }

    #[test]
    fn order_recovery() {
        let c15 = OrderFindingConfig::new(15, 2).unwrap();
        assert_eq!(recover_order(64, 8, &c15), Ok(4));
        assert_eq!(recover_order(0, 8, &c15), Err(Rejection::ZeroMeasurement));
        let c35 = OrderFindingConfig::new(35, 4).unwrap();
        assert_eq!(c35.t, 12);
        assert_eq!(recover_order(3414, 12, &c35), Ok(6));
        assert_eq!(recover_order(2048, 12, &c35), Ok(6));
        assert_eq!(factors_from_order(4, 6, 35), Some((7, 5)));
    }

    #[test]
    fn config_validation() {
        assert!(OrderFindingConfig::new(15, 5).is_err());
        assert!(OrderFindingConfig::new(15, 1).is_err());
        assert!(OrderFindingConfig::new(15, 15).is_err());
        let c = OrderFindingConfig::new(91, 2).unwrap();
        assert_eq!(c.full_qubits(), 29);
        assert!(matches!(order_finding_circuit(&c), Err(Error::Capacity(_))));
    }

    #[test]
    fn classical_guards() {
        let r = factor(22, &FactorOptions::default()).unwrap();
        assert_eq!(r.factors, vec![2, 11]);
        let r = factor(49, &FactorOptions::default()).unwrap();
        assert_eq!(r.factors, vec![7, 7]);
        assert!(matches!(
            factor(13, &FactorOptions::default()),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn backend_parsing() {
        assert_eq!("fast".parse::<Backend>().unwrap(), Backend::Fast);
        assert!("gpu".parse::<Backend>().is_err());
    }
}
