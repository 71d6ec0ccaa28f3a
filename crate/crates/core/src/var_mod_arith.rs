//! Modular arithmetic where both operands are quantum registers.
//!
//! Qubit budgets: [`var_mod_add`] `2n + 2`, [`mod_double`] `n + 1`,
//! [`var_mod_mul`] `3n + 2`, [`var_mod_square`] `2n + 2`.

use crate::error::{capacity, domain, structural, Result};
use crate::layout::{Program, RegisterLayout, Role};
use crate::qft::{iqft_noswap, qft_noswap};
use crate::qft_const_arith::classical::register_width;
use crate::qft_const_arith::{fourier_add, fourier_register_phases};
use crate::ripple_arith::{adder, subtractor};
use crate::simulator::{check_disjoint, Circuit, Gate};

fn check_modulus(width: usize, modulus: u64) -> Result<()> {
    if modulus < 2 {
        return Err(domain(format!("modulus {modulus} must be at least 2")));
    }
    if width < register_width(modulus) || width > 62 {
        return Err(capacity(format!(
            "register of {width} qubits cannot hold residues mod {modulus}"
        )));
    }
    Ok(())
}

fn check_odd(modulus: u64) -> Result<()> {
    if modulus % 2 == 0 {
        return Err(domain(format!(
            "odd modulus required, got {modulus}: modular doubling reads the wrap \
             branch from the parity of 2x mod N"
        )));
    }
    Ok(())
}

/// `x ← (x + y) mod N` for `x, y < N`; `aux0` is the adder carry-in and
/// `aux1` the carry/comparison qubit. Both end clean.
pub fn var_mod_add(
    x: &[usize],
    y: &[usize],
    aux0: usize,
    aux1: usize,
    modulus: u64,
) -> Result<Circuit> {
    check_operands(x, y, modulus)?;
    check_disjoint(&[("x", x), ("y", y), ("aux", &[aux0, aux1])])?;
    var_mod_add_block(x, y, aux0, aux1, modulus, &[])
}

fn check_operands(x: &[usize], y: &[usize], modulus: u64) -> Result<()> {
    if x.len() != y.len() {
        return Err(structural("operands must have equal width"));
    }
    check_modulus(x.len(), modulus)
}

/// Ripple-carry modular adder. With a control off, only the `−N`/`+N`
/// Fourier blocks act; they set and clear `carry` around an unchanged `x`.
fn var_mod_add_block(
    x: &[usize],
    y: &[usize],
    c0: usize,
    carry: usize,
    modulus: u64,
    controls: &[usize],
) -> Result<Circuit> {
    let ext: Vec<usize> = x.iter().copied().chain([carry]).collect();
    let n = i128::from(modulus);
    let mut c = adder(x, y, &[c0, carry], true)?.controlled(controls)?;
    c.append(&fourier_add(&ext, -n, &[])?);
    c.append(&fourier_add(x, n, &[carry])?);
    // carry = [x + y < N] = [result >= y]; the borrow of result − y flips it to 1.
    c.append(&subtractor(x, y, &[c0, carry], true)?.controlled(controls)?);
    c.push(Gate::x(carry));
    c.append(&adder(x, y, &[c0], false)?.controlled(controls)?);
    Ok(c)
}

/// Same map as the ripple version but with the register addition done as
/// controlled phases, which needs no carry-in qubit.
fn fourier_var_mod_add_block(
    x: &[usize],
    y: &[usize],
    carry: usize,
    modulus: u64,
    controls: &[usize],
) -> Result<Circuit> {
    let ext: Vec<usize> = x.iter().copied().chain([carry]).collect();
    let n = i128::from(modulus);
    let mut c = qft_noswap(&ext)?;
    c.append(&fourier_register_phases(&ext, y, false, controls));
    c.append(&crate::qft_const_arith::fourier_phases(&ext, -n, &[]));
    c.append(&iqft_noswap(&ext)?);
    c.append(&fourier_add(x, n, &[carry])?);
    c.append(&qft_noswap(&ext)?);
    c.append(&fourier_register_phases(&ext, y, true, controls));
    c.append(&iqft_noswap(&ext)?);
    c.push(Gate::x(carry));
    c.append(&qft_noswap(x)?);
    c.append(&fourier_register_phases(x, y, false, controls));
    c.append(&iqft_noswap(x)?);
    Ok(c)
}

/// Doubles `(x, aux)` read as an `n+1`-bit value with a chain of `n` swaps.
pub fn left_shift_double(x: &[usize], aux: usize) -> Result<Circuit> {
    check_disjoint(&[("x", x), ("aux", &[aux])])?;
    Ok(shift_chain(x, aux))
}

fn shift_chain(x: &[usize], aux: usize) -> Circuit {
    let mut c = Circuit::new(0);
    let mut upper = aux;
    for &q in x.iter().rev() {
        c.push(Gate::swap(upper, q));
        upper = q;
    }
    c
}

/// `x ← 2x mod N` for odd `N` and `x < N`, using one ancilla.
///
/// After the shift and the conditional `−N`, the ancilla is set exactly
/// when no reduction happened, i.e. when the result is even; the final
/// negated CNOT from `x_0` clears it.
pub fn mod_double(x: &[usize], aux: usize, modulus: u64) -> Result<Circuit> {
    check_odd(modulus)?;
    check_modulus(x.len(), modulus)?;
    check_disjoint(&[("x", x), ("aux", &[aux])])?;
    mod_double_block(x, aux, modulus)
}

fn mod_double_block(x: &[usize], aux: usize, modulus: u64) -> Result<Circuit> {
    let ext: Vec<usize> = x.iter().copied().chain([aux]).collect();
    let n = i128::from(modulus);
    let mut c = shift_chain(x, aux);
    c.append(&fourier_add(&ext, -n, &[])?);
    c.append(&fourier_add(x, n, &[aux])?);
    c.push(Gate::x(x[0]));
    c.push(Gate::cx(x[0], aux));
    c.push(Gate::x(x[0]));
    Ok(c)
}

/// `|x⟩|y⟩|0⟩ → |x⟩|y⟩|x·y mod N⟩`, Horner order from the top bit of `x`:
/// `result ← 2·result + x_i·y (mod N)`. `aux` holds two clean qubits.
pub fn var_mod_mul(
    x: &[usize],
    y: &[usize],
    result: &[usize],
    aux: &[usize],
    modulus: u64,
) -> Result<Circuit> {
    check_odd(modulus)?;
    check_operands(x, y, modulus)?;
    if result.len() != x.len() {
        return Err(structural("result register must match operand width"));
    }
    let [c0, carry] = aux else {
        return Err(capacity(format!(
            "var_mod_mul needs 2 aux qubits, got {}",
            aux.len()
        )));
    };
    check_disjoint(&[("x", x), ("y", y), ("result", result), ("aux", aux)])?;
    let mut c = Circuit::new(0);
    for (step, &xi) in x.iter().rev().enumerate() {
        if step > 0 {
            c.append(&mod_double_block(result, *carry, modulus)?);
        }
        c.append(&var_mod_add_block(result, y, *c0, *carry, modulus, &[xi])?);
    }
    Ok(c)
}

/// `|x⟩|0⟩ → |x⟩|x² mod N⟩`. Each bit `x_i` is copied into `flag` to
/// control the addition of `x` itself, then uncopied. The addition runs in
/// the Fourier basis so `aux` (one qubit) is the only other ancilla.
pub fn var_mod_square(
    x: &[usize],
    result: &[usize],
    aux: usize,
    flag: usize,
    modulus: u64,
) -> Result<Circuit> {
    check_odd(modulus)?;
    check_operands(x, result, modulus)?;
    check_disjoint(&[
        ("x", x),
        ("result", result),
        ("aux", &[aux]),
        ("flag", &[flag]),
    ])?;
    let mut c = Circuit::new(0);
    for (step, &xi) in x.iter().rev().enumerate() {
        if step > 0 {
            c.append(&mod_double_block(result, aux, modulus)?);
        }
        c.push(Gate::cx(xi, flag));
        c.append(&fourier_var_mod_add_block(
            result,
            x,
            aux,
            modulus,
            &[flag],
        )?);
        c.push(Gate::cx(xi, flag));
    }
    Ok(c)
}

/// Registers `x`, `y`, `aux0`, `aux1`.
pub fn var_mod_add_program(modulus: u64) -> Result<Program> {
    let n = register_width(modulus);
    let mut l = RegisterLayout::new();
    let x = l.add("x", Role::Value, n)?;
    let y = l.add("y", Role::Value, n)?;
    let a0 = l.add("aux0", Role::Aux, 1)?;
    let a1 = l.add("aux1", Role::Carry, 1)?;
    let c = var_mod_add(&x, &y, a0[0], a1[0], modulus)?;
    Ok(Program::new(l, c))
}

/// Registers `x` (`n` qubits) and `aux`.
pub fn left_shift_program(n: usize) -> Result<Program> {
    let mut l = RegisterLayout::new();
    let x = l.add("x", Role::Value, n)?;
    let aux = l.add("aux", Role::Aux, 1)?;
    let c = left_shift_double(&x, aux[0])?;
    Ok(Program::new(l, c))
}

/// Registers `x` and `aux`.
pub fn mod_double_program(modulus: u64) -> Result<Program> {
    let mut l = RegisterLayout::new();
    let x = l.add("x", Role::Value, register_width(modulus))?;
    let aux = l.add("aux", Role::Aux, 1)?;
    let c = mod_double(&x, aux[0], modulus)?;
    Ok(Program::new(l, c))
}

/// Registers `x`, `y`, `result`, `aux` (2 qubits).
pub fn var_mod_mul_program(modulus: u64) -> Result<Program> {
    let n = register_width(modulus);
    let mut l = RegisterLayout::new();
    let x = l.add("x", Role::Value, n)?;
    let y = l.add("y", Role::Value, n)?;
    let r = l.add("result", Role::Result, n)?;
    let aux = l.add("aux", Role::Aux, 2)?;
    let c = var_mod_mul(&x, &y, &r, &aux, modulus)?;
    Ok(Program::new(l, c))
}

/// Registers `x`, `result`, `aux`, `flag`.
pub fn var_mod_square_program(modulus: u64) -> Result<Program> {
    let n = register_width(modulus);
    let mut l = RegisterLayout::new();
    let x = l.add("x", Role::Value, n)?;
    let r = l.add("result", Role::Result, n)?;
    let aux = l.add("aux", Role::Carry, 1)?;
    let flag = l.add("flag", Role::Aux, 1)?;
    let c = var_mod_square(&x, &r, aux[0], flag[0], modulus)?;
    Ok(Program::new(l, c))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::simulator::resources;

    #[test]
    fn examples() {
        let p = var_mod_add_program(11).unwrap();
        let out = p.evaluate(&[("x", 6), ("y", 8)]).unwrap();
        assert_eq!((out["x"], out["y"], out["aux0"], out["aux1"]), (3, 8, 0, 0));
        let p = left_shift_program(4).unwrap();
        let out = p.evaluate(&[("x", 5)]).unwrap();
        assert_eq!(out["x"] | (out["aux"] << 4), 10);
        let p = mod_double_program(11).unwrap();
        assert_eq!(p.evaluate(&[("x", 7)]).unwrap()["x"], 3);
        let p = var_mod_mul_program(7).unwrap();
        assert_eq!(p.evaluate(&[("x", 3), ("y", 4)]).unwrap()["result"], 5);
        let p = var_mod_square_program(11).unwrap();
        let out = p.evaluate(&[("x", 7)]).unwrap();
        assert_eq!((out["result"], out["aux"], out["flag"]), (5, 0, 0));
    }

    #[test]
    fn budgets() {
        for m in [5u64, 7, 11, 13] {
            let n = register_width(m);
            assert_eq!(var_mod_add_program(m).unwrap().qubit_count(), 2 * n + 2);
            assert_eq!(mod_double_program(m).unwrap().qubit_count(), n + 1);
            assert_eq!(var_mod_mul_program(m).unwrap().qubit_count(), 3 * n + 2);
            assert_eq!(var_mod_square_program(m).unwrap().qubit_count(), 2 * n + 2);
        }
        let shift = left_shift_program(5).unwrap();
        assert_eq!(resources(&shift.circuit).count("SWAP"), 5);
    }

    #[test]
    fn even_modulus_rejected() {
        for r in [
            mod_double_program(10).map(|_| ()),
            var_mod_mul_program(10).map(|_| ()),
            var_mod_square_program(10).map(|_| ()),
        ] {
            assert!(matches!(r, Err(crate::Error::Domain(_))));
        }
    }
}
