//! QFT comparators against a constant or a second register, modular
//! reduction, and modular adders built from them.
//!
//! Moduli used here must satisfy `M ∈ [2^{n−1}, 2^n)` for an `n`-qubit
//! operand, which keeps `x − M` within one extra bit for every `x < 2^n`.

use crate::error::{domain, structural, Result};
use crate::layout::{Program, RegisterLayout, Role};
use crate::qft::{iqft_noswap, qft_noswap};
use crate::qft_const_arith::{fourier_add, fourier_register_phases, mod_add_block};
use crate::simulator::{check_disjoint, Circuit, Gate};

/// Comparison performed by [`compare_variants`]; the flag ends as `x R a`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relation {
    Lt,
    Le,
    Ge,
    Gt,
}

impl std::str::FromStr for Relation {
    type Err = crate::Error;

    fn from_str(s: &str) -> Result<Relation> {
        match s {
            "lt" => Ok(Relation::Lt),
            "le" => Ok(Relation::Le),
            "ge" => Ok(Relation::Ge),
            "gt" => Ok(Relation::Gt),
            other => Err(domain(format!("unknown relation '{other}'"))),
        }
    }
}

impl Relation {
    pub fn holds(self, x: u64, a: u64) -> bool {
        match self {
            Relation::Lt => x < a,
            Relation::Le => x <= a,
            Relation::Ge => x >= a,
            Relation::Gt => x > a,
        }
    }
}

fn check_constant(x: &[usize], a: u64) -> Result<()> {
    if x.is_empty() || x.len() > 62 {
        return Err(structural("comparator register width must be in 1..=62"));
    }
    if a >> x.len() != 0 {
        return Err(domain(format!(
            "constant {a} does not fit {} bits",
            x.len()
        )));
    }
    Ok(())
}

/// `|x⟩|0⟩ → |x⟩|x < a⟩`.
///
/// Subtracting `a` from `(x, flag)` read as `n+1` bits leaves the borrow in
/// the flag; adding `a` back to `x` alone restores it. Four QFT blocks,
/// `2n²` controlled rotations.
pub fn int_compare_lt(x: &[usize], a: u64, flag: usize) -> Result<Circuit> {
    check_constant(x, a)?;
    check_disjoint(&[("x", x), ("flag", &[flag])])?;
    compare_block(x, a, flag)
}

fn compare_block(x: &[usize], a: u64, flag: usize) -> Result<Circuit> {
    let ext: Vec<usize> = x.iter().copied().chain([flag]).collect();
    let mut c = fourier_add(&ext, -i128::from(a), &[])?;
    c.append(&fourier_add(x, i128::from(a), &[])?);
    Ok(c)
}

/// `lt`, `le` (compare against `a + 1`), `ge` and `gt` (negate the flag).
/// `le` with `a = 2^n − 1` is always true and reduces to a single X.
pub fn compare_variants(x: &[usize], a: u64, flag: usize, relation: Relation) -> Result<Circuit> {
    check_constant(x, a)?;
    check_disjoint(&[("x", x), ("flag", &[flag])])?;
    let all_ones = (1u64 << x.len()) - 1;
    let (bound, negate) = match relation {
        Relation::Lt => (Some(a), false),
        Relation::Ge => (Some(a), true),
        Relation::Le | Relation::Gt if a == all_ones => (None, relation == Relation::Gt),
        Relation::Le => (Some(a + 1), false),
        Relation::Gt => (Some(a + 1), true),
    };
    let mut c = Circuit::new(0);
    match bound {
        Some(b) => c.append(&compare_block(x, b, flag)?),
        // x ≤ 2^n − 1 always holds.
        None => c.push(Gate::x(flag)),
    }
    if negate {
        c.push(Gate::x(flag));
    }
    Ok(c)
}

/// `|x₁⟩|x₂⟩|0⟩ → |x₁⟩|x₂⟩|x₂ < x₁⟩`: the integer comparator with the
/// classical phase schedule replaced by rotations controlled on `x₁`.
pub fn states_compare(x1: &[usize], x2: &[usize], flag: usize) -> Result<Circuit> {
    if x1.len() != x2.len() || x1.is_empty() {
        return Err(structural(
            "compared registers must have equal nonzero width",
        ));
    }
    check_disjoint(&[("x1", x1), ("x2", x2), ("flag", &[flag])])?;
    let ext: Vec<usize> = x2.iter().copied().chain([flag]).collect();
    let mut c = qft_noswap(&ext)?;
    c.append(&fourier_register_phases(&ext, x1, true, &[]));
    c.append(&iqft_noswap(&ext)?);
    c.append(&qft_noswap(x2)?);
    c.append(&fourier_register_phases(x2, x1, false, &[]));
    c.append(&iqft_noswap(x2)?);
    Ok(c)
}

fn check_half_range(x: &[usize], m: u64) -> Result<()> {
    let n = x.len();
    if n == 0 || n > 62 {
        return Err(structural("register width must be in 1..=62"));
    }
    let lo = 1u64 << (n - 1);
    if m < lo || m >= (1u64 << n) {
        return Err(domain(format!(
            "modulus {m} must lie in [{lo}, {}) for a {n}-qubit register",
            1u64 << n
        )));
    }
    Ok(())
}

/// `|x⟩|0⟩ → |x mod M⟩|x < M⟩` for every `x < 2^n`. The flag records which
/// branch was taken and cannot be cleared.
pub fn mod_reduce(x: &[usize], flag: usize, m: u64) -> Result<Circuit> {
    check_half_range(x, m)?;
    check_disjoint(&[("x", x), ("flag", &[flag])])?;
    let ext: Vec<usize> = x.iter().copied().chain([flag]).collect();
    let mut c = fourier_add(&ext, -i128::from(m), &[])?;
    c.append(&fourier_add(x, i128::from(m), &[flag])?);
    Ok(c)
}

/// Which inputs [`mod_add_const_restricted`] must handle.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InputDomain {
    /// `x < M`; any `a < M` is accepted.
    Reduced,
    /// Every `x < 2^n`; requires `a ≤ 2M − 2^n`.
    FullSpace,
}

/// `|x⟩|0⟩ → |(x + a) mod M⟩|x + a < M⟩`, leaving the flag set.
pub fn mod_add_const_restricted(
    x: &[usize],
    a: u64,
    m: u64,
    flag: usize,
    inputs: InputDomain,
) -> Result<Circuit> {
    check_half_range(x, m)?;
    if a >= m {
        return Err(domain(format!(
            "constant {a} must be below the modulus {m}"
        )));
    }
    if inputs == InputDomain::FullSpace {
        let bound = 2 * m - (1u64 << x.len());
        if a > bound {
            return Err(domain(format!(
                "for inputs up to 2^{} the constant must satisfy a <= 2M - 2^n = {bound}, got {a}",
                x.len()
            )));
        }
    }
    check_disjoint(&[("x", x), ("flag", &[flag])])?;
    let ext: Vec<usize> = x.iter().copied().chain([flag]).collect();
    let mut c = fourier_add(&ext, i128::from(a) - i128::from(m), &[])?;
    c.append(&fourier_add(x, i128::from(m), &[flag])?);
    Ok(c)
}

/// `x ← (x + a) mod M` for `x < M` with one ancilla that returns to `|0⟩`.
/// Eight QFT blocks.
pub fn mod_add_const_clean(x: &[usize], a: u64, m: u64, ancilla: usize) -> Result<Circuit> {
    check_half_range(x, m)?;
    if a >= m {
        return Err(domain(format!(
            "constant {a} must be below the modulus {m}"
        )));
    }
    check_disjoint(&[("x", x), ("ancilla", &[ancilla])])?;
    mod_add_block(x, ancilla, a, m, &[])
}

/// `x ← ((x mod M) + a) mod M` for every `x < 2^n`: [`mod_reduce`] into
/// `anc_flag`, then [`mod_add_const_clean`] with `anc_top`. `anc_flag` ends
/// holding `x < M`; `anc_top` ends clean.
pub fn mod_add_const_fullspace(
    x: &[usize],
    a: u64,
    m: u64,
    anc_top: usize,
    anc_flag: usize,
) -> Result<Circuit> {
    check_disjoint(&[("x", x), ("ancilla", &[anc_top, anc_flag])])?;
    let mut c = mod_reduce(x, anc_flag, m)?;
    c.append(&mod_add_const_clean(x, a, m, anc_top)?);
    Ok(c)
}

/// Smallest `n` with `M ∈ [2^{n−1}, 2^n)`.
pub fn half_range_width(m: u64) -> Result<usize> {
    if m < 1 {
        return Err(domain("modulus must be positive"));
    }
    Ok(64 - m.leading_zeros() as usize)
}

/// Registers `x` (`n` qubits) and `flag`.
pub fn compare_program(n: usize, a: u64, relation: Relation) -> Result<Program> {
    let mut l = RegisterLayout::new();
    let x = l.add("x", Role::Value, n)?;
    let flag = l.add("flag", Role::Aux, 1)?;
    let c = compare_variants(&x, a, flag[0], relation)?;
    Ok(Program::new(l, c))
}

/// Registers `x1`, `x2` and `flag`.
pub fn states_compare_program(n: usize) -> Result<Program> {
    let mut l = RegisterLayout::new();
    let x1 = l.add("x1", Role::Value, n)?;
    let x2 = l.add("x2", Role::Value, n)?;
    let flag = l.add("flag", Role::Aux, 1)?;
    let c = states_compare(&x1, &x2, flag[0])?;
    Ok(Program::new(l, c))
}

/// Registers `x` and `flag`, with the width derived from `M`.
pub fn mod_reduce_program(m: u64) -> Result<Program> {
    let mut l = RegisterLayout::new();
    let x = l.add("x", Role::Value, half_range_width(m)?)?;
    let flag = l.add("flag", Role::Aux, 1)?;
    let c = mod_reduce(&x, flag[0], m)?;
    Ok(Program::new(l, c))
}

/// Registers `x` and `flag`.
pub fn restricted_adder_program(m: u64, a: u64, inputs: InputDomain) -> Result<Program> {
    let mut l = RegisterLayout::new();
    let x = l.add("x", Role::Value, half_range_width(m)?)?;
    let flag = l.add("flag", Role::Aux, 1)?;
    let c = mod_add_const_restricted(&x, a, m, flag[0], inputs)?;
    Ok(Program::new(l, c))
}

/// Registers `x` and `ancilla`.
pub fn clean_adder_program(m: u64, a: u64) -> Result<Program> {
    let mut l = RegisterLayout::new();
    let x = l.add("x", Role::Value, half_range_width(m)?)?;
    let anc = l.add("ancilla", Role::Aux, 1)?;
    let c = mod_add_const_clean(&x, a, m, anc[0])?;
    Ok(Program::new(l, c))
}

/// Registers `x`, `anc_top` and `anc_flag`.
pub fn fullspace_adder_program(m: u64, a: u64) -> Result<Program> {
    let mut l = RegisterLayout::new();
    let x = l.add("x", Role::Value, half_range_width(m)?)?;
    let top = l.add("anc_top", Role::Aux, 1)?;
    let flag = l.add("anc_flag", Role::Aux, 1)?;
    let c = mod_add_const_fullspace(&x, a, m, top[0], flag[0])?;
    Ok(Program::new(l, c))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lt_examples() {
        let p = compare_program(4, 7, Relation::Lt).unwrap();
        let out = p.evaluate(&[("x", 3)]).unwrap();
        assert_eq!((out["x"], out["flag"]), (3, 1));
        assert_eq!(p.evaluate(&[("x", 9)]).unwrap()["flag"], 0);
        let zero = compare_program(4, 0, Relation::Lt).unwrap();
        assert_eq!(zero.evaluate(&[("x", 0)]).unwrap()["flag"], 0);
        assert!(compare_program(4, 16, Relation::Lt).is_err());
    }

    #[test]
    fn le_edge_is_constant_true() {
        let p = compare_program(3, 7, Relation::Le).unwrap();
        assert_eq!(p.circuit.len(), 1);
        assert_eq!(p.evaluate(&[("x", 7)]).unwrap()["flag"], 1);
        let p = compare_program(3, 7, Relation::Gt).unwrap();
        assert_eq!(p.evaluate(&[("x", 7)]).unwrap()["flag"], 0);
    }

    #[test]
    fn reduce_and_adders() {
        let p = mod_reduce_program(11).unwrap();
        let out = p.evaluate(&[("x", 14)]).unwrap();
        assert_eq!((out["x"], out["flag"]), (3, 0));
        let out = p.evaluate(&[("x", 5)]).unwrap();
        assert_eq!((out["x"], out["flag"]), (5, 1));
        assert!(mod_reduce(&[0, 1, 2, 3], 4, 7).is_err());
        let p = clean_adder_program(13, 9).unwrap();
        let out = p.evaluate(&[("x", 7)]).unwrap();
        assert_eq!((out["x"], out["ancilla"]), (3, 0));
        assert!(restricted_adder_program(13, 11, InputDomain::FullSpace).is_err());
        assert!(restricted_adder_program(13, 11, InputDomain::Reduced).is_ok());
    }

    #[test]
    fn widths() {
        assert_eq!(half_range_width(5).unwrap(), 3);
        assert_eq!(half_range_width(11).unwrap(), 4);
        assert_eq!(half_range_width(8).unwrap(), 4);
    }
}
