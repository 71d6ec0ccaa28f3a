//! Arithmetic with a classically known operand, performed as phase
//! rotations between no-swap QFT blocks.
//!
//! After [`qft_noswap`], qubit `q[k]` of a `w`-qubit register carries the
//! phase `2π x / 2^{k+1}`. Rotating it by `θ_k(a) = 2π (a mod 2^{k+1}) / 2^{k+1}`
//! therefore adds `a` modulo `2^w`; negative constants are added as their
//! residue mod `2^w`.

pub mod classical;

use std::f64::consts::PI;

use crate::error::{capacity, domain, structural, Result};
use crate::layout::{Program, RegisterLayout, Role};
use crate::qft::{iqft_noswap, qft_noswap};
use crate::simulator::{check_disjoint, Circuit, Gate};
use classical::{gcd, mod_inverse, mod_mul, register_width};

/// Per-qubit rotation angles that add the constant `a` to a `width`-qubit
/// Fourier-basis register.
#[derive(Debug, Clone, PartialEq)]
pub struct PhaseSchedule {
    pub a: u64,
    pub width: usize,
    pub angles: Vec<f64>,
}

/// `θ_k(a) = 2π Σ_{j≤k} a_j / 2^{k+1−j}` for `k < n`. Requires `a < 2^n`.
pub fn phase_angles(a: u64, n: usize) -> Result<PhaseSchedule> {
    if n == 0 || n > 62 {
        return Err(structural(format!(
            "phase schedule width {n} not in 1..=62"
        )));
    }
    if a >> n != 0 {
        return Err(domain(format!("constant {a} does not fit {n} bits")));
    }
    Ok(PhaseSchedule {
        a,
        width: n,
        angles: (0..n).map(|k| angle(a, k)).collect(),
    })
}

fn angle(a: u64, k: usize) -> f64 {
    let modulus = 1u64 << (k + 1);
    2.0 * PI * (a % modulus) as f64 / modulus as f64
}

/// Residue of a signed constant modulo `2^width`.
fn residue(a: i128, width: usize) -> u64 {
    a.rem_euclid(1i128 << width) as u64
}

/// Phase layer adding `a` (mod `2^w`) to a register already in the
/// no-swap Fourier basis. Zero rotations are omitted.
pub fn fourier_phases(reg: &[usize], a: i128, controls: &[usize]) -> Circuit {
    let a = residue(a, reg.len());
    let mut c = Circuit::new(0);
    for (k, &q) in reg.iter().enumerate() {
        let theta = angle(a, k);
        if theta != 0.0 {
            c.push(Gate::mcphase(controls, q, theta));
        }
    }
    c
}

/// QFT, constant phase layer, inverse QFT: `reg ← (reg + a) mod 2^w`.
/// Only the phase layer carries `controls`.
pub fn fourier_add(reg: &[usize], a: i128, controls: &[usize]) -> Result<Circuit> {
    let mut c = qft_noswap(reg)?;
    c.append(&fourier_phases(reg, a, controls));
    c.append(&iqft_noswap(reg)?);
    Ok(c)
}

/// Phase layer adding (or with `negate`, subtracting) the value of the
/// quantum register `y` to a no-swap Fourier-basis register. Rotations by a
/// multiple of 2π are omitted, so target qubit `k` receives one controlled
/// phase per `y_j` with `j ≤ k`.
pub fn fourier_register_phases(
    reg: &[usize],
    y: &[usize],
    negate: bool,
    controls: &[usize],
) -> Circuit {
    let sign = if negate { -1.0 } else { 1.0 };
    let mut c = Circuit::new(0);
    for (k, &q) in reg.iter().enumerate() {
        for (j, &yj) in y.iter().enumerate().take(k + 1) {
            let ctrl: Vec<usize> = controls.iter().copied().chain([yj]).collect();
            c.push(Gate::mcphase(
                &ctrl,
                q,
                sign * crate::qft::rotation(k + 1 - j),
            ));
        }
    }
    c
}

/// Constant adder: `x ← (x + a) mod 2^width`. The inverse subtracts with
/// wraparound, giving `2^width + x − a` when `a > x`.
pub fn const_add(x: &[usize], a: u64) -> Result<Circuit> {
    check_disjoint(&[("x", x)])?;
    fourier_add(x, i128::from(a), &[])
}

fn check_modulus(x: &[usize], modulus: u64) -> Result<()> {
    if modulus < 2 {
        return Err(domain(format!("modulus {modulus} must be at least 2")));
    }
    if x.len() < register_width(modulus) {
        return Err(capacity(format!(
            "register of {} qubits cannot hold residues mod {modulus}",
            x.len()
        )));
    }
    if x.len() > 62 {
        return Err(capacity("register wider than 62 qubits"));
    }
    Ok(())
}

/// Modular adder on `x < N` with one clean ancilla `anc` that ends clean.
///
/// 1. `(x, anc) += a − N` over `w+1` bits; `anc` now flags `x + a < N`.
/// 2. if `anc`: `x += N` over `w` bits, giving `(x + a) mod N`.
/// 3. `(x, anc) −= a`; both branches leave `anc = 1`.
/// 4. `X(anc)`, then `x += a` over `w` bits.
///
/// Only the `±a` layers carry `controls`; with a control off, step 1 sets
/// `anc`, step 2 undoes the `−N`, and step 4 clears `anc`, so the block is
/// the identity.
pub(crate) fn mod_add_block(
    x: &[usize],
    anc: usize,
    a: u64,
    modulus: u64,
    controls: &[usize],
) -> Result<Circuit> {
    let ext: Vec<usize> = x.iter().copied().chain([anc]).collect();
    let (a, n) = (i128::from(a), i128::from(modulus));
    let mut c = qft_noswap(&ext)?;
    if controls.is_empty() {
        c.append(&fourier_phases(&ext, a - n, &[]));
    } else {
        c.append(&fourier_phases(&ext, -n, &[]));
        c.append(&fourier_phases(&ext, a, controls));
    }
    c.append(&iqft_noswap(&ext)?);
    c.append(&fourier_add(x, n, &[anc])?);
    c.append(&fourier_add(&ext, -a, controls)?);
    c.push(Gate::x(anc));
    c.append(&fourier_add(x, a, controls)?);
    Ok(c)
}

/// `x ← (x + a) mod N` for basis inputs `x < N`; `aux` is one clean qubit.
pub fn const_mod_add(x: &[usize], a: u64, modulus: u64, aux: &[usize]) -> Result<Circuit> {
    check_modulus(x, modulus)?;
    if a >= modulus {
        return Err(domain(format!(
            "constant {a} must be below the modulus {modulus}"
        )));
    }
    let anc = single(aux)?;
    check_disjoint(&[("x", x), ("aux", &[anc])])?;
    mod_add_block(x, anc, a, modulus, &[])
}

fn single(aux: &[usize]) -> Result<usize> {
    match aux {
        [q] => Ok(*q),
        _ => Err(capacity(format!(
            "expected exactly one aux qubit, got {}",
            aux.len()
        ))),
    }
}

/// `b ← (b + a·x) mod N`: controlled on `x_i`, add `(2^i a) mod N`.
pub fn const_mod_addmul(
    x: &[usize],
    b: &[usize],
    a: u64,
    modulus: u64,
    aux: &[usize],
) -> Result<Circuit> {
    check_modulus(b, modulus)?;
    if a >= modulus {
        return Err(domain(format!(
            "constant {a} must be below the modulus {modulus}"
        )));
    }
    let anc = single(aux)?;
    check_disjoint(&[("x", x), ("b", b), ("aux", &[anc])])?;
    addmul_block(x, b, anc, a, modulus, &[])
}

fn addmul_block(
    x: &[usize],
    b: &[usize],
    anc: usize,
    a: u64,
    modulus: u64,
    controls: &[usize],
) -> Result<Circuit> {
    let mut c = Circuit::new(0);
    let mut term = a % modulus;
    for &xi in x {
        if term != 0 {
            let ctrl: Vec<usize> = controls.iter().copied().chain([xi]).collect();
            c.append(&mod_add_block(b, anc, term, modulus, &ctrl)?);
        }
        term = mod_mul(term, 2, modulus);
    }
    Ok(c)
}

/// In-place multiplication `|x⟩|0⟩ → |a·x mod N⟩|0⟩` for `gcd(a, N) = 1`.
///
/// Multiply-accumulate into the zero register, swap the registers, then
/// run the inverse multiply-accumulate by `a⁻¹` to clear the copy of `x`.
pub fn const_mod_mul(
    x: &[usize],
    zero: &[usize],
    a: u64,
    modulus: u64,
    aux: &[usize],
) -> Result<Circuit> {
    check_modulus(x, modulus)?;
    if x.len() != zero.len() {
        return Err(structural("multiplier registers must have equal width"));
    }
    let anc = single(aux)?;
    check_disjoint(&[("x", x), ("zero", zero), ("aux", &[anc])])?;
    mul_block(x, zero, anc, a, modulus, &[])
}

fn mul_block(
    x: &[usize],
    zero: &[usize],
    anc: usize,
    a: u64,
    modulus: u64,
    controls: &[usize],
) -> Result<Circuit> {
    let a = a % modulus;
    let inv = mod_inverse(a, modulus).ok_or_else(|| {
        domain(format!(
            "{a} has no inverse mod {modulus} (gcd {})",
            gcd(a, modulus)
        ))
    })?;
    let mut c = addmul_block(x, zero, anc, a, modulus, controls)?;
    for (&p, &q) in x.iter().zip(zero) {
        let g = Gate::swap(p, q).with_controls(controls)?;
        c.push(g);
    }
    c.append(&addmul_block(x, zero, anc, inv, modulus, controls)?.inverse());
    Ok(c)
}

/// `|x⟩|0⟩|0⟩ → |x⟩|a^x mod N⟩|0⟩`.
///
/// The leading X gate prepares the result register in `|1⟩`, then each
/// exponent bit `x_i` controls a multiplication by `a^{2^i} mod N`
/// (multiplications by 1 are skipped). `work` is a zero register as wide
/// as `result` followed by one ancilla.
pub fn const_mod_exp(
    x: &[usize],
    result: &[usize],
    work: &[usize],
    a: u64,
    modulus: u64,
) -> Result<Circuit> {
    check_modulus(result, modulus)?;
    if work.len() != result.len() + 1 {
        return Err(capacity(format!(
            "work register needs {} qubits, got {}",
            result.len() + 1,
            work.len()
        )));
    }
    check_disjoint(&[("x", x), ("result", result), ("work", work)])?;
    let (zero, anc) = work.split_at(result.len());
    let a = a % modulus;
    if gcd(a, modulus) != 1 {
        return Err(domain(format!("gcd({a}, {modulus}) != 1")));
    }
    let mut c = Circuit::new(0);
    c.push(Gate::x(result[0]));
    let mut m = a;
    for &xi in x {
        if m != 1 {
            c.append(&mul_block(result, zero, anc[0], m, modulus, &[xi])?);
        }
        m = mod_mul(m, m, modulus);
    }
    Ok(c)
}

/// Constant adder on a `width`-qubit register `x`.
pub fn const_add_program(width: usize, a: u64) -> Result<Program> {
    let mut l = RegisterLayout::new();
    let x = l.add("x", Role::Value, width)?;
    let c = const_add(&x, a)?;
    Ok(Program::new(l, c))
}

/// Modular adder on `x` with ancilla `aux`.
pub fn const_mod_add_program(modulus: u64, a: u64) -> Result<Program> {
    let mut l = RegisterLayout::new();
    let x = l.add("x", Role::Value, register_width(modulus))?;
    let aux = l.add("aux", Role::Aux, 1)?;
    let c = const_mod_add(&x, a, modulus, &aux)?;
    Ok(Program::new(l, c))
}

/// Registers `x`, `b`, `aux`.
pub fn const_mod_addmul_program(modulus: u64, a: u64) -> Result<Program> {
    let n = register_width(modulus);
    let mut l = RegisterLayout::new();
    let x = l.add("x", Role::Value, n)?;
    let b = l.add("b", Role::Value, n)?;
    let aux = l.add("aux", Role::Aux, 1)?;
    let c = const_mod_addmul(&x, &b, a, modulus, &aux)?;
    Ok(Program::new(l, c))
}

/// Registers `x`, `zero`, `aux`; `2n + 1` qubits.
pub fn const_mod_mul_program(modulus: u64, a: u64) -> Result<Program> {
    let n = register_width(modulus);
    let mut l = RegisterLayout::new();
    let x = l.add("x", Role::Value, n)?;
    let zero = l.add("zero", Role::Aux, n)?;
    let aux = l.add("aux", Role::Aux, 1)?;
    let c = const_mod_mul(&x, &zero, a, modulus, &aux)?;
    Ok(Program::new(l, c))
}

/// Registers `x` (`exp_width` qubits), `result`, `work`; with
/// `exp_width = n` this is `3n + 1` qubits.
pub fn const_mod_exp_program(modulus: u64, a: u64, exp_width: usize) -> Result<Program> {
    let n = register_width(modulus);
    let mut l = RegisterLayout::new();
    let x = l.add("x", Role::Value, exp_width)?;
    let result = l.add("result", Role::Result, n)?;
    let work = l.add("work", Role::Aux, n + 1)?;
    let c = const_mod_exp(&x, &result, &work, a, modulus)?;
    Ok(Program::new(l, c))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn angle_formula() {
        assert!(phase_angles(0, 4).unwrap().angles.iter().all(|&t| t == 0.0));
        let s = phase_angles(1, 2).unwrap();
        assert!((s.angles[0] - PI).abs() < 1e-15);
        assert!((s.angles[1] - PI / 2.0).abs() < 1e-15);
        for n in 1..10 {
            let s = phase_angles((1 << n) - 1, n).unwrap();
            let want = 2.0 * PI * (1.0 - 2f64.powi(-(n as i32)));
            assert!((s.angles[n - 1] - want).abs() < 1e-12);
        }
        assert!(phase_angles(16, 4).is_err());
    }

    #[test]
    fn angle_matches_bit_sum() {
        for n in 1..8usize {
            for a in 0..(1u64 << n) {
                let s = phase_angles(a, n).unwrap();
                for k in 0..n {
                    let sum: f64 = (0..=k)
                        .map(|j| ((a >> j) & 1) as f64 / 2f64.powi((k + 1 - j) as i32))
                        .sum();
                    assert!((s.angles[k] - 2.0 * PI * sum).abs() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn small_examples() {
        let p = const_add_program(4, 3).unwrap();
        assert_eq!(p.evaluate(&[("x", 5)]).unwrap()["x"], 8);
        let sub = Program::new(
            p.layout.clone(),
            const_add(&[0, 1, 2, 3], 5).unwrap().inverse(),
        );
        assert_eq!(sub.evaluate(&[("x", 2)]).unwrap()["x"], 13);
        let p = const_mod_add_program(11, 7).unwrap();
        let out = p.evaluate(&[("x", 9)]).unwrap();
        assert_eq!((out["x"], out["aux"]), (5, 0));
        let p = const_mod_addmul_program(11, 4).unwrap();
        let out = p.evaluate(&[("x", 3), ("b", 1)]).unwrap();
        assert_eq!(out["b"], 2);
        let p = const_mod_mul_program(7, 3).unwrap();
        let out = p.evaluate(&[("x", 4)]).unwrap();
        assert_eq!((out["x"], out["zero"], out["aux"]), (5, 0, 0));
        let p = const_mod_exp_program(11, 2, 4).unwrap();
        assert_eq!(p.evaluate(&[("x", 4)]).unwrap()["result"], 5);
    }

    #[test]
    fn domain_checks() {
        assert!(matches!(
            const_mod_add_program(11, 11),
            Err(crate::Error::Domain(_))
        ));
        assert!(matches!(
            const_mod_mul_program(15, 5),
            Err(crate::Error::Domain(_))
        ));
        assert!(matches!(
            const_mod_exp_program(15, 6, 2),
            Err(crate::Error::Domain(_))
        ));
        assert!(const_mod_add(&[0, 1], 1, 11, &[2]).is_err());
        assert!(const_mod_add(&[0, 1, 2, 3], 1, 11, &[]).is_err());
    }

    #[test]
    fn modexp_qubit_budget() {
        let p = const_mod_exp_program(11, 2, 4).unwrap();
        assert_eq!(p.qubit_count(), 3 * 4 + 1);
        let p = const_mod_mul_program(11, 2).unwrap();
        assert_eq!(p.qubit_count(), 2 * 4 + 1);
    }

    #[test]
    fn mod_add_uses_eight_qft_blocks() {
        let p = const_mod_add_program(13, 5).unwrap();
        assert_eq!(p.resources().qft_invocations, 8);
    }
}
