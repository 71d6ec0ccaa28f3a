//! Quantum Fourier transform blocks.
//!
//! For a register `q` listed least-significant qubit first, the no-swap
//! transform leaves qubit `q[i]` in `(|0⟩ + e^{2πi x/2^{i+1}}|1⟩)/√2`, i.e.
//! the bit-reversed image of the DFT. Fourier-basis arithmetic works on that
//! form directly; the swap layer restores the standard output order.

use std::f64::consts::PI;

use crate::error::{structural, Result};
use crate::layout::{Program, RegisterLayout, Role};
use crate::simulator::{check_disjoint, Circuit, Gate};

/// QFT with the terminal swap layer, so the output reads in input bit order.
pub fn qft_circuit(group: &[usize]) -> Result<Circuit> {
    build(group, true)
}

/// Inverse of [`qft_circuit`].
pub fn iqft_circuit(group: &[usize]) -> Result<Circuit> {
    Ok(qft_circuit(group)?.inverse())
}

/// QFT without the swap layer (bit-reversed output).
pub fn qft_noswap(group: &[usize]) -> Result<Circuit> {
    build(group, false)
}

/// Inverse of [`qft_noswap`].
pub fn iqft_noswap(group: &[usize]) -> Result<Circuit> {
    Ok(qft_noswap(group)?.inverse())
}

fn build(group: &[usize], swaps: bool) -> Result<Circuit> {
    if group.is_empty() {
        return Err(structural("QFT over an empty register"));
    }
    check_disjoint(&[("qft", group)])?;
    let n = group.len();
    let mut c = Circuit::new(0);
    for i in (0..n).rev() {
        c.push(Gate::h(group[i]));
        for m in (0..i).rev() {
            c.push(Gate::cphase(group[m], group[i], rotation(i - m + 1)));
        }
    }
    if swaps {
        for i in 0..n / 2 {
            c.push(Gate::swap(group[i], group[n - 1 - i]));
        }
    }
    c.tag_qft_blocks(1);
    Ok(c)
}

/// Angle of the `R_k` rotation, `2π / 2^k`.
pub fn rotation(k: usize) -> f64 {
    2.0 * PI / 2f64.powi(k as i32)
}

/// A standalone `n`-qubit QFT (or inverse) on register `x`.
pub fn qft_program(n: usize, inverse: bool) -> Result<Program> {
    let mut layout = RegisterLayout::new();
    let x = layout.add("x", Role::Value, n)?;
    let c = if inverse {
        iqft_circuit(&x)?
    } else {
        qft_circuit(&x)?
    };
    Ok(Program::new(layout, c))
}
