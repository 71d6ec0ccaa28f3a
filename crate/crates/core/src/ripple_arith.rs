//! Carry-based arithmetic: MAJ/UMA ripple adder, sign-magnitude add and
//! subtract via two's-complement conversion, shift-and-add multiplier and a
//! repeated-subtraction divider.
//!
//! Signed registers hold a magnitude in the value bits and a sign bit above
//! them. Negative operands are converted to two's complement around the
//! addition and converted back afterwards. `-0` is not a valid input.

use crate::error::{capacity, domain, structural, Result};
use crate::layout::{Program, RegisterLayout, Role};
use crate::simulator::{check_disjoint, Circuit, Gate};

/// Majority block: `|c, b, a⟩ → |a⊕c, a⊕b, maj(a, b, c)⟩`.
pub fn maj_circuit(c: usize, b: usize, a: usize) -> Result<Circuit> {
    check_disjoint(&[("maj", &[c, b, a])])?;
    let mut circ = Circuit::new(0);
    push_maj(&mut circ, c, b, a);
    Ok(circ)
}

/// Un-majority-and-add block; after [`maj_circuit`] it restores `c` and `a`
/// and leaves the sum bit `a⊕b⊕c` in `b`.
pub fn uma_circuit(c: usize, b: usize, a: usize) -> Result<Circuit> {
    check_disjoint(&[("uma", &[c, b, a])])?;
    let mut circ = Circuit::new(0);
    push_uma(&mut circ, c, b, a);
    Ok(circ)
}

fn push_maj(circ: &mut Circuit, c: usize, b: usize, a: usize) {
    circ.push(Gate::cx(a, b));
    circ.push(Gate::cx(a, c));
    circ.push(Gate::ccx(c, b, a));
}

fn push_uma(circ: &mut Circuit, c: usize, b: usize, a: usize) {
    circ.push(Gate::ccx(c, b, a));
    circ.push(Gate::cx(a, c));
    circ.push(Gate::cx(c, b));
}

/// Ripple-carry adder writing `(a + b) mod 2^n` into `a`.
///
/// `aux[0]` is the clean carry-in qubit. With `keep_carry`, `aux[1]` receives
/// bit `n` of the sum (XORed in), so `aux` has 2 qubits; otherwise 1.
pub fn adder(a: &[usize], b: &[usize], aux: &[usize], keep_carry: bool) -> Result<Circuit> {
    if a.len() != b.len() || a.is_empty() {
        return Err(structural(format!(
            "adder operands must have equal nonzero width, got {} and {}",
            a.len(),
            b.len()
        )));
    }
    let need = if keep_carry { 2 } else { 1 };
    if aux.len() != need {
        return Err(capacity(format!(
            "adder needs {need} aux qubit(s), got {}",
            aux.len()
        )));
    }
    check_disjoint(&[("a", a), ("b", b), ("aux", aux)])?;
    let n = a.len();
    let mut c = Circuit::new(0);
    // The carry ripples through b while the sum bits accumulate in a.
    let carry_in = |i: usize| if i == 0 { aux[0] } else { b[i - 1] };
    for i in 0..n {
        push_maj(&mut c, carry_in(i), a[i], b[i]);
    }
    if keep_carry {
        c.push(Gate::cx(b[n - 1], aux[1]));
    }
    for i in (0..n).rev() {
        push_uma(&mut c, carry_in(i), a[i], b[i]);
    }
    Ok(c)
}

/// Inverse of [`adder`]: `a ← (a − b) mod 2^n`; with `keep_borrow`,
/// `aux[1] ^= [a < b]`.
pub fn subtractor(a: &[usize], b: &[usize], aux: &[usize], keep_borrow: bool) -> Result<Circuit> {
    Ok(adder(a, b, aux, keep_borrow)?.inverse())
}

/// Adds one to `reg` (mod `2^width`) when every qubit in `controls` is set.
pub fn increment(reg: &[usize], controls: &[usize]) -> Circuit {
    let mut c = Circuit::new(0);
    for i in (0..reg.len()).rev() {
        let ctrl: Vec<usize> = controls.iter().chain(&reg[..i]).copied().collect();
        c.push(Gate::mcx(&ctrl, reg[i]));
    }
    c
}

/// A register with magnitude bits, an optional sign bit above them and an
/// optional binary-point position.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SignedRegister {
    pub value: Vec<usize>,
    pub sign: Option<usize>,
    pub point: Option<usize>,
}

impl SignedRegister {
    pub fn new(
        value: Vec<usize>,
        sign: Option<usize>,
        point: Option<usize>,
    ) -> Result<SignedRegister> {
        if value.is_empty() {
            return Err(structural("signed register without value bits"));
        }
        if let Some(s) = sign {
            if value.iter().any(|&v| v >= s) {
                return Err(structural(
                    "sign bit must be the highest index of the register",
                ));
            }
            check_disjoint(&[("value", &value), ("sign", &[s])])?;
        } else {
            check_disjoint(&[("value", &value)])?;
        }
        let width = value.len() + usize::from(sign.is_some());
        if point.is_some_and(|p| p >= width) {
            return Err(structural("binary point outside the register"));
        }
        Ok(SignedRegister { value, sign, point })
    }

    /// Contiguous register: low `qubits.len() - 1` qubits hold the magnitude,
    /// the last one the sign.
    pub fn from_slice(qubits: &[usize]) -> Result<SignedRegister> {
        let (sign, value) = qubits
            .split_last()
            .ok_or_else(|| structural("empty signed register"))?;
        SignedRegister::new(value.to_vec(), Some(*sign), None)
    }

    pub fn width(&self) -> usize {
        self.value.len() + usize::from(self.sign.is_some())
    }

    /// Value bits followed by the sign bit.
    pub fn all_qubits(&self) -> Vec<usize> {
        self.value.iter().copied().chain(self.sign).collect()
    }

    /// Binary-point position of a product of two registers with this layout.
    pub fn product_point(&self) -> Option<usize> {
        self.point.map(|p| 2 * p)
    }

    fn require_sign(&self) -> Result<usize> {
        self.sign
            .ok_or_else(|| structural("operation requires a sign bit"))
    }
}

/// If the sign bit is set, replaces the magnitude with its two's complement
/// (mod `2^n`). Applying it twice is the identity. `control_aux` must be clean.
pub fn complement_circuit(reg: &SignedRegister, control_aux: usize) -> Result<Circuit> {
    let sign = reg.require_sign()?;
    check_disjoint(&[("register", &reg.all_qubits()), ("aux", &[control_aux])])?;
    let mut c = Circuit::new(0);
    c.push(Gate::cx(sign, control_aux));
    for &v in &reg.value {
        c.push(Gate::cx(control_aux, v));
    }
    c.append(&increment(&reg.value, &[control_aux]));
    c.push(Gate::cx(sign, control_aux));
    Ok(c)
}

/// Sign-magnitude negation: flips the sign unless the magnitude is zero.
fn negate_sign_magnitude(reg: &SignedRegister) -> Result<Circuit> {
    let sign = reg.require_sign()?;
    let mut c = Circuit::new(0);
    c.push(Gate::x(sign));
    for &v in &reg.value {
        c.push(Gate::x(v));
    }
    c.push(Gate::mcx(&reg.value, sign));
    for &v in &reg.value {
        c.push(Gate::x(v));
    }
    Ok(c)
}

fn check_signed_pair(a: &SignedRegister, b: &SignedRegister, aux: &[usize]) -> Result<()> {
    a.require_sign()?;
    b.require_sign()?;
    if a.value.len() != b.value.len() {
        return Err(structural("signed operands must have equal width"));
    }
    if aux.len() != a.width() + 2 {
        return Err(capacity(format!(
            "signed add/sub needs {} aux qubits, got {}",
            a.width() + 2,
            aux.len()
        )));
    }
    check_disjoint(&[("a", &a.all_qubits()), ("b", &b.all_qubits()), ("aux", aux)])
}

/// `a ← a + b` on sign-magnitude registers. `aux` has `a.width() + 2` qubits
/// (only the first two are touched). Results outside the range wrap.
pub fn signed_add(a: &SignedRegister, b: &SignedRegister, aux: &[usize]) -> Result<Circuit> {
    check_signed_pair(a, b, aux)?;
    let ca = complement_circuit(a, aux[0])?;
    let cb = complement_circuit(b, aux[0])?;
    let mut c = Circuit::new(0);
    c.append(&ca);
    c.append(&cb);
    c.append(&adder(&a.all_qubits(), &b.all_qubits(), &aux[1..2], false)?);
    c.append(&ca);
    c.append(&cb);
    Ok(c)
}

/// `a ← a − b`, computed as `a + (−b)`.
pub fn signed_sub(a: &SignedRegister, b: &SignedRegister, aux: &[usize]) -> Result<Circuit> {
    check_signed_pair(a, b, aux)?;
    let neg = negate_sign_magnitude(b)?;
    let mut c = neg.clone();
    c.append(&signed_add(a, b, aux)?);
    c.append(&neg);
    Ok(c)
}

/// Shift-and-add multiplier: `result ← a·b` for `result` initially zero.
/// `aux` has `n + 1` qubits (`aux[0]` is the carry-in), `result` has `2n`.
pub fn multiplier(a: &[usize], b: &[usize], aux: &[usize], result: &[usize]) -> Result<Circuit> {
    let n = a.len();
    if b.len() != n || n == 0 {
        return Err(structural(
            "multiplier operands must have equal nonzero width",
        ));
    }
    if aux.len() != n + 1 || result.len() != 2 * n {
        return Err(capacity(format!(
            "multiplier needs {} aux and {} result qubits, got {} and {}",
            n + 1,
            2 * n,
            aux.len(),
            result.len()
        )));
    }
    check_disjoint(&[("a", a), ("b", b), ("aux", aux), ("result", result)])?;
    unsigned_product(a, b, aux[0], result)
}

fn unsigned_product(
    a: &[usize],
    b: &[usize],
    carry_in: usize,
    result: &[usize],
) -> Result<Circuit> {
    let n = a.len();
    let mut c = Circuit::new(0);
    for (i, &ai) in a.iter().enumerate() {
        let add = adder(&result[i..i + n], b, &[carry_in, result[i + n]], true)?;
        c.append(&add.controlled(&[ai])?);
    }
    Ok(c)
}

/// Signed multiplier: magnitudes multiply into `result[..2n]`, the sign of a
/// nonzero product goes to the top result qubit. `aux` has `a.width()`
/// qubits and `result` has `2·a.width() − 1`.
pub fn signed_multiplier(
    a: &SignedRegister,
    b: &SignedRegister,
    aux: &[usize],
    result: &[usize],
) -> Result<Circuit> {
    let sa = a.require_sign()?;
    let sb = b.require_sign()?;
    let n = a.value.len();
    if b.value.len() != n {
        return Err(structural("signed operands must have equal width"));
    }
    if aux.len() != a.width() || result.len() != 2 * a.width() - 1 {
        return Err(capacity(format!(
            "signed multiplier needs {} aux and {} result qubits, got {} and {}",
            a.width(),
            2 * a.width() - 1,
            aux.len(),
            result.len()
        )));
    }
    check_disjoint(&[
        ("a", &a.all_qubits()),
        ("b", &b.all_qubits()),
        ("aux", aux),
        ("result", result),
    ])?;
    let (mag, rs) = (&result[..2 * n], result[2 * n]);
    let mut c = unsigned_product(&a.value, &b.value, aux[0], mag)?;
    c.push(Gate::cx(sa, rs));
    c.push(Gate::cx(sb, rs));
    // A zero product keeps sign 0: undo each XOR when every magnitude bit is 0.
    for &q in mag {
        c.push(Gate::x(q));
    }
    for s in [sa, sb] {
        let ctrl: Vec<usize> = mag.iter().copied().chain([s]).collect();
        c.push(Gate::mcx(&ctrl, rs));
    }
    for &q in mag {
        c.push(Gate::x(q));
    }
    Ok(c)
}

/// Number of aux qubits [`divider`] uses: carry-in, borrow and round flag.
pub const DIVIDER_AUX: usize = 3;

/// Restoring divider: `quotient ← ⌊a/b⌋`, `a ← a mod b`, `b` unchanged.
///
/// Unrolls `2^n − 1` rounds, each of which compares `a ≥ b`, conditionally
/// subtracts and increments the quotient, then clears the round flag using
/// the fact that it was set exactly when the quotient now equals the round
/// number. `b = 0` leaves the quotient at `2^n − 1`.
pub fn divider(a: &[usize], b: &[usize], quotient: &[usize], aux: &[usize]) -> Result<Circuit> {
    let n = a.len();
    if b.len() != n || quotient.len() != n || n == 0 {
        return Err(structural(
            "divider registers must have equal nonzero width",
        ));
    }
    if n > 16 {
        return Err(capacity(
            "divider unrolls 2^n rounds; width is limited to 16",
        ));
    }
    if aux.len() != DIVIDER_AUX {
        return Err(capacity(format!(
            "divider needs {DIVIDER_AUX} aux qubits, got {}",
            aux.len()
        )));
    }
    check_disjoint(&[("a", a), ("b", b), ("quotient", quotient), ("aux", aux)])?;
    let (c0, borrow, flag) = (aux[0], aux[1], aux[2]);
    let compare = subtractor(a, b, &[c0, borrow], true)?;
    let restore = adder(a, b, &[c0, borrow], true)?;
    let cond_sub = subtractor(a, b, &[c0], false)?.controlled(&[flag])?;
    let cond_inc = increment(quotient, &[flag]);
    let mut c = Circuit::new(0);
    for round in 1..(1u64 << n) {
        c.append(&compare);
        c.push(Gate::cx(borrow, flag));
        c.push(Gate::x(flag));
        c.append(&restore);
        c.append(&cond_sub);
        c.append(&cond_inc);
        c.append(&equals_flip(quotient, round, flag));
    }
    Ok(c)
}

/// Flips `target` iff `reg` holds `value`.
fn equals_flip(reg: &[usize], value: u64, target: usize) -> Circuit {
    let mut c = Circuit::new(0);
    let zeros: Vec<usize> = reg
        .iter()
        .enumerate()
        .filter(|(k, _)| (value >> k) & 1 == 0)
        .map(|(_, &q)| q)
        .collect();
    for &q in &zeros {
        c.push(Gate::x(q));
    }
    c.push(Gate::mcx(reg, target));
    for &q in &zeros {
        c.push(Gate::x(q));
    }
    c
}

/// Sign-magnitude encoding of `v` in `n` magnitude bits plus a sign bit at `n`.
pub fn encode_signed(v: i64, n: usize) -> Result<u64> {
    let mag = v.unsigned_abs();
    if n >= 63 || mag >> n != 0 {
        return Err(domain(format!("{v} does not fit {n} magnitude bits")));
    }
    Ok(mag | (u64::from(v < 0) << n))
}

pub fn decode_signed(raw: u64, n: usize) -> i64 {
    let mag = (raw & ((1u64 << n) - 1)) as i64;
    if (raw >> n) & 1 == 1 {
        -mag
    } else {
        mag
    }
}

/// `a, b` (width `n`) with carry-in `aux` and, if `keep_carry`, a `carry` qubit.
pub fn adder_program(n: usize, keep_carry: bool) -> Result<Program> {
    let mut l = RegisterLayout::new();
    let a = l.add("a", Role::Value, n)?;
    let b = l.add("b", Role::Value, n)?;
    let mut aux = l.add("aux", Role::Aux, 1)?;
    if keep_carry {
        aux.extend(l.add("carry", Role::Carry, 1)?);
    }
    let c = adder(&a, &b, &aux, keep_carry)?;
    Ok(Program::new(l, c))
}

/// Signed add (or subtract) on `n` magnitude bits; registers `a` and `b`
/// hold the sign at bit `n`.
pub fn signed_program(n: usize, subtract: bool) -> Result<Program> {
    let mut l = RegisterLayout::new();
    let a = SignedRegister::from_slice(&l.add("a", Role::Value, n + 1)?)?;
    let b = SignedRegister::from_slice(&l.add("b", Role::Value, n + 1)?)?;
    let aux = l.add("aux", Role::Aux, n + 3)?;
    let c = if subtract {
        signed_sub(&a, &b, &aux)?
    } else {
        signed_add(&a, &b, &aux)?
    };
    Ok(Program::new(l, c))
}

/// Unsigned multiplier on `n`-bit operands, or the signed variant on `n`
/// magnitude bits (sign at bit `n` of `a`, `b`, and `2n` of `result`).
pub fn multiplier_program(n: usize, signed: bool) -> Result<Program> {
    let mut l = RegisterLayout::new();
    if signed {
        let a = SignedRegister::from_slice(&l.add("a", Role::Value, n + 1)?)?;
        let b = SignedRegister::from_slice(&l.add("b", Role::Value, n + 1)?)?;
        let aux = l.add("aux", Role::Aux, n + 1)?;
        let result = l.add("result", Role::Result, 2 * n + 1)?;
        let c = signed_multiplier(&a, &b, &aux, &result)?;
        Ok(Program::new(l, c))
    } else {
        let a = l.add("a", Role::Value, n)?;
        let b = l.add("b", Role::Value, n)?;
        let aux = l.add("aux", Role::Aux, n + 1)?;
        let result = l.add("result", Role::Result, 2 * n)?;
        let c = multiplier(&a, &b, &aux, &result)?;
        Ok(Program::new(l, c))
    }
}

pub fn divider_program(n: usize) -> Result<Program> {
    let mut l = RegisterLayout::new();
    let a = l.add("a", Role::Value, n)?;
    let b = l.add("b", Role::Value, n)?;
    let q = l.add("quotient", Role::Result, n)?;
    let aux = l.add("aux", Role::Aux, DIVIDER_AUX)?;
    let c = divider(&a, &b, &q, &aux)?;
    Ok(Program::new(l, c))
}

/// Classical guard for dividing by a known divisor.
pub fn check_divisor(b: u64) -> Result<()> {
    if b == 0 {
        return Err(domain("division by zero"));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::simulator::SparseState;

    fn run_bits(c: &Circuit, width: usize, input: u64) -> u64 {
        let mut s = SparseState::basis(width, input).unwrap();
        s.run(c).unwrap();
        s.dominant_basis(1e-9).unwrap()
    }

    #[test]
    fn maj_truth_table() {
        // Qubit order: c = 0, b = 1, a = 2.
        let maj = maj_circuit(0, 1, 2).unwrap();
        for input in 0..8u64 {
            let (c, b, a) = (input & 1, (input >> 1) & 1, (input >> 2) & 1);
            let out = run_bits(&maj, 3, input);
            let majority = u64::from(a + b + c >= 2);
            assert_eq!(out & 1, a ^ c);
            assert_eq!((out >> 1) & 1, a ^ b);
            assert_eq!(out >> 2, majority);
        }
    }

    #[test]
    fn uma_after_maj_writes_sum() {
        let mut c = maj_circuit(0, 1, 2).unwrap();
        c.append(&uma_circuit(0, 1, 2).unwrap());
        for input in 0..8u64 {
            let (cc, b, a) = (input & 1, (input >> 1) & 1, (input >> 2) & 1);
            let out = run_bits(&c, 3, input);
            assert_eq!(out, cc | ((a ^ b ^ cc) << 1) | (a << 2));
        }
        assert!(maj_circuit(0, 0, 1).is_err());
    }

    #[test]
    fn small_adder_cases() {
        let p = adder_program(4, true).unwrap();
        let out = p.evaluate(&[("a", 3), ("b", 4)]).unwrap();
        assert_eq!((out["a"], out["carry"]), (7, 0));
        let out = p.evaluate(&[("a", 9), ("b", 9)]).unwrap();
        assert_eq!((out["a"], out["carry"], out["b"], out["aux"]), (2, 1, 9, 0));
        assert!(adder(&[0, 1], &[2], &[3], false).is_err());
        assert!(adder(&[0], &[1], &[2], true).is_err());
    }

    #[test]
    fn complement_examples() {
        let mut l = RegisterLayout::new();
        let reg = SignedRegister::from_slice(&l.add("r", Role::Value, 5).unwrap()).unwrap();
        let aux = l.add("aux", Role::Aux, 1).unwrap();
        let p = Program::new(l, complement_circuit(&reg, aux[0]).unwrap());
        let minus3 = encode_signed(-3, 4).unwrap();
        assert_eq!(p.evaluate(&[("r", minus3)]).unwrap()["r"], 0b1_1101);
        assert_eq!(p.evaluate(&[("r", 5)]).unwrap()["r"], 5);
        let unsigned = SignedRegister::new(vec![0, 1], None, None).unwrap();
        assert!(complement_circuit(&unsigned, 2).is_err());
    }

    #[test]
    fn signed_register_rules() {
        assert!(SignedRegister::new(vec![1, 2], Some(0), None).is_err());
        assert!(SignedRegister::new(vec![0, 1], Some(2), Some(3)).is_err());
        let r = SignedRegister::new(vec![0, 1], Some(2), Some(1)).unwrap();
        assert_eq!(r.product_point(), Some(2));
    }

    #[test]
    fn signed_encoding() {
        assert_eq!(encode_signed(-2, 3).unwrap(), 0b1010);
        assert_eq!(decode_signed(0b1010, 3), -2);
        assert!(encode_signed(8, 3).is_err());
    }

    #[test]
    fn aux_budget_enforced() {
        let a = SignedRegister::from_slice(&[0, 1, 2]).unwrap();
        let b = SignedRegister::from_slice(&[3, 4, 5]).unwrap();
        let err = signed_add(&a, &b, &[6, 7, 8, 9]).unwrap_err();
        assert!(matches!(err, crate::Error::Capacity(_)));
        assert!(multiplier(&[0], &[1], &[2], &[3, 4]).is_err());
        assert!(divider(&[0], &[1], &[2], &[3, 4]).is_err());
        assert!(check_divisor(0).is_err());
    }

    #[test]
    fn divide_seven_by_two() {
        let p = divider_program(3).unwrap();
        let out = p.evaluate(&[("a", 7), ("b", 2)]).unwrap();
        assert_eq!(
            (out["quotient"], out["a"], out["b"], out["aux"]),
            (3, 1, 2, 0)
        );
    }
}
