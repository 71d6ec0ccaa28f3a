use std::fmt::Write as _;

use serde_json::{json, Map, Value};

use qarith_core::comparator::{self, half_range_width, Relation};
use qarith_core::error::Error;
use qarith_core::phase_estimation::phase_gate_qpe_program;
use qarith_core::ripple_arith::{self, decode_signed, encode_signed};
use qarith_core::shor::{factor, FactorOptions};
use qarith_core::simulator::{dump, measure_register, run, StateVector};
use qarith_core::{qft_const_arith, var_mod_arith};
use qarith_core::{MeasurementHistogram, Program, Result};

use crate::builders::{self, Params};
use crate::{BuilderArgs, Cli, Command, Common};

fn bits(v: u64) -> usize {
    (64 - v.leading_zeros() as usize).max(1)
}

fn domain(msg: String) -> Error {
    Error::Domain(msg)
}

fn check_fits(name: &str, v: u64, width: usize) -> Result<()> {
    if width == 0 || width > 62 {
        return Err(Error::Capacity(format!("width {width} not in 1..=62")));
    }
    if v >> width != 0 {
        return Err(domain(format!("{name} = {v} does not fit {width} bits")));
    }
    Ok(())
}

fn check_below(name: &str, v: u64, modulus: u64) -> Result<()> {
    if v >= modulus {
        return Err(domain(format!(
            "{name} = {v} must be below the modulus {modulus}"
        )));
    }
    Ok(())
}

fn measure(
    p: &Program,
    inputs: &[(&str, u64)],
    reg: &str,
    c: &Common,
) -> Result<MeasurementHistogram> {
    let state = p.run_basis(inputs)?;
    measure_register(&state, p.layout.qubits(reg)?, c.shots, c.seed)
}

/// Histogram output: JSON with decoded keys, or the outcome(s) as text.
fn emit(h: &MeasurementHistogram, decode: impl Fn(u64) -> String, c: &Common) -> String {
    if c.json {
        let counts: Map<String, Value> = h
            .counts
            .iter()
            .map(|(k, v)| (decode(*k), json!(v)))
            .collect();
        return pretty(&json!({ "shots": h.shots, "seed": h.seed, "counts": counts }));
    }
    if h.counts.len() == 1 {
        let (k, _) = h.counts.iter().next().expect("one outcome");
        return format!("{}\n", decode(*k));
    }
    let mut out = String::new();
    for (k, v) in &h.counts {
        let _ = writeln!(out, "{}: {v}", decode(*k));
    }
    out
}

pub fn pretty(value: &impl serde::Serialize) -> String {
    format!("{}\n", qarith_core::to_sorted_json(value))
}

fn plain(v: u64) -> String {
    v.to_string()
}

fn single_value(h: &MeasurementHistogram) -> u64 {
    h.mode().expect("at least one shot")
}

pub fn dispatch(cli: &Cli) -> Result<String> {
    let c = &cli.common;
    if c.shots == 0 {
        return Err(domain("--shots must be at least 1".into()));
    }
    match &cli.command {
        Command::Add { a, b, width } => signed_op(*a, *b, *width, false, c),
        Command::Sub { a, b, width } => signed_op(*a, *b, *width, true, c),
        Command::Mul { a, b, width } => mul(*a, *b, *width, c),
        Command::Div { a, b, width } => div(*a, *b, *width, c),
        Command::ConstAdd { x, a, width } => {
            let w = width.unwrap_or_else(|| bits(x.saturating_add(*a)));
            check_fits("x", *x, w)?;
            let p = qft_const_arith::const_add_program(w, *a)?;
            Ok(emit(&measure(&p, &[("x", *x)], "x", c)?, plain, c))
        }
        Command::ModAdd { x, a, modulus } => {
            check_below("x", *x, *modulus)?;
            let p = qft_const_arith::const_mod_add_program(*modulus, *a)?;
            Ok(emit(&measure(&p, &[("x", *x)], "x", c)?, plain, c))
        }
        Command::ModMul { x, a, modulus } => {
            check_below("x", *x, *modulus)?;
            let p = qft_const_arith::const_mod_mul_program(*modulus, *a)?;
            Ok(emit(&measure(&p, &[("x", *x)], "x", c)?, plain, c))
        }
        Command::ModExp { a, x, modulus } => {
            let p = qft_const_arith::const_mod_exp_program(*modulus, *a, bits(*x))?;
            Ok(emit(&measure(&p, &[("x", *x)], "result", c)?, plain, c))
        }
        Command::VarModAdd { x, y, modulus } => {
            check_below("x", *x, *modulus)?;
            check_below("y", *y, *modulus)?;
            let p = var_mod_arith::var_mod_add_program(*modulus)?;
            Ok(emit(
                &measure(&p, &[("x", *x), ("y", *y)], "x", c)?,
                plain,
                c,
            ))
        }
        Command::ModDouble { x, modulus } => {
            check_below("x", *x, *modulus)?;
            let p = var_mod_arith::mod_double_program(*modulus)?;
            Ok(emit(&measure(&p, &[("x", *x)], "x", c)?, plain, c))
        }
        Command::VarModMul { x, y, modulus } => {
            check_below("x", *x, *modulus)?;
            check_below("y", *y, *modulus)?;
            let p = var_mod_arith::var_mod_mul_program(*modulus)?;
            Ok(emit(
                &measure(&p, &[("x", *x), ("y", *y)], "result", c)?,
                plain,
                c,
            ))
        }
        Command::ModSquare { x, modulus } => {
            check_below("x", *x, *modulus)?;
            let p = var_mod_arith::var_mod_square_program(*modulus)?;
            Ok(emit(&measure(&p, &[("x", *x)], "result", c)?, plain, c))
        }
        Command::Compare {
            x,
            a,
            relation,
            width,
        } => compare(*x, *a, relation, *width, c),
        Command::ModReduce { x, modulus } => {
            let n = half_range_width(*modulus)?;
            check_fits("x", *x, n)?;
            let p = comparator::mod_reduce_program(*modulus)?;
            let h = measure(&p, &[("x", *x)], "x", c)?;
            if c.json {
                return Ok(emit(&h, plain, c));
            }
            let flag = single_value(&measure(&p, &[("x", *x)], "flag", c)?);
            Ok(format!("{} flag {flag}\n", single_value(&h)))
        }
        Command::Qpe { theta, width } => qpe(*theta, *width, c),
        Command::Factor {
            n,
            backend,
            base,
            t,
            argmax,
            max_attempts,
        } => {
            let options = FactorOptions {
                seed: c.seed,
                backend: backend.parse()?,
                t: *t,
                max_attempts: *max_attempts,
                base: *base,
                argmax: *argmax,
            };
            let report = factor(*n, &options)?;
            if c.json {
                return Ok(pretty(&report));
            }
            let fs: Vec<String> = report.factors.iter().map(u64::to_string).collect();
            Ok(format!("{}\n", fs.join(" ")))
        }
        Command::Resources(args) => resources(args, c),
        Command::Dump(args) => Ok(dump(&build(args)?.circuit)),
    }
}

fn signed_op(a: i64, b: i64, width: Option<usize>, subtract: bool, c: &Common) -> Result<String> {
    let n = width.unwrap_or_else(|| bits(a.unsigned_abs().max(b.unsigned_abs())) + 1);
    let p = ripple_arith::signed_program(n, subtract)?;
    let inputs = [("a", encode_signed(a, n)?), ("b", encode_signed(b, n)?)];
    let h = measure(&p, &inputs, "a", c)?;
    Ok(emit(&h, |v| decode_signed(v, n).to_string(), c))
}

fn mul(a: i64, b: i64, width: Option<usize>, c: &Common) -> Result<String> {
    let n = width.unwrap_or_else(|| bits(a.unsigned_abs().max(b.unsigned_abs())));
    if a < 0 || b < 0 {
        let p = ripple_arith::multiplier_program(n, true)?;
        let inputs = [("a", encode_signed(a, n)?), ("b", encode_signed(b, n)?)];
        let h = measure(&p, &inputs, "result", c)?;
        return Ok(emit(&h, |v| decode_signed(v, 2 * n).to_string(), c));
    }
    let (a, b) = (a as u64, b as u64);
    check_fits("a", a, n)?;
    check_fits("b", b, n)?;
    let p = ripple_arith::multiplier_program(n, false)?;
    Ok(emit(
        &measure(&p, &[("a", a), ("b", b)], "result", c)?,
        plain,
        c,
    ))
}

fn div(a: u64, b: u64, width: Option<usize>, c: &Common) -> Result<String> {
    ripple_arith::check_divisor(b)?;
    let n = width.unwrap_or_else(|| bits(a.max(b)));
    check_fits("a", a, n)?;
    check_fits("b", b, n)?;
    if n > 12 {
        return Err(Error::Capacity(format!(
            "divider unrolls 2^n rounds; CLI width is limited to 12, requested {n}"
        )));
    }
    let p = ripple_arith::divider_program(n)?;
    let inputs = [("a", a), ("b", b)];
    let h = measure(&p, &inputs, "quotient", c)?;
    if c.json {
        return Ok(emit(&h, plain, c));
    }
    let rem = single_value(&measure(&p, &inputs, "a", c)?);
    Ok(format!("{} remainder {rem}\n", single_value(&h)))
}

fn compare(x: u64, a: u64, relation: &str, width: Option<usize>, c: &Common) -> Result<String> {
    let n = width.unwrap_or_else(|| bits(x.max(a)));
    check_fits("x", x, n)?;
    check_fits("a", a, n)?;
    let flag_of = |rel: Relation| -> Result<MeasurementHistogram> {
        let p = comparator::compare_program(n, a, rel)?;
        measure(&p, &[("x", x)], "flag", c)
    };
    let h = if relation == "eq" {
        // x == a  ⇔  x ≥ a and x ≤ a; both flags are basis values.
        let ge = single_value(&flag_of(Relation::Ge)?);
        let le = single_value(&flag_of(Relation::Le)?);
        MeasurementHistogram {
            shots: c.shots,
            seed: c.seed,
            counts: [(ge & le, c.shots)].into(),
        }
    } else {
        flag_of(relation.parse()?)?
    };
    if c.json {
        return Ok(emit(&h, plain, c));
    }
    Ok(emit(&h, |v| (v == 1).to_string(), c))
}

fn qpe(theta: f64, width: usize, c: &Common) -> Result<String> {
    if !(0.0..1.0).contains(&theta) {
        return Err(domain(format!("theta = {theta} must lie in [0, 1)")));
    }
    if width == 0 || width > 20 {
        return Err(Error::Capacity(format!(
            "counting width {width} not in 1..=20"
        )));
    }
    let p = phase_gate_qpe_program(width, theta)?;
    let state = run(&p.circuit, StateVector::new(p.qubit_count())?)?;
    let h = measure_register(&state, p.layout.qubits("counting")?, c.shots, c.seed)?;
    if c.json {
        return Ok(emit(&h, plain, c));
    }
    let j = single_value(&h);
    let est = j as f64 / 2f64.powi(width as i32);
    let mut out = format!("measured {j} theta {est}\n");
    if h.counts.len() > 1 {
        out.push_str(&emit(&h, plain, c));
    }
    Ok(out)
}

fn build(args: &BuilderArgs) -> Result<Program> {
    builders::build(
        &args.builder,
        &Params {
            width: args.width,
            modulus: args.modulus,
            constant: args.constant,
            theta: args.theta,
        },
    )
}

fn resources(args: &BuilderArgs, c: &Common) -> Result<String> {
    let r = build(args)?.resources();
    if c.json {
        return Ok(pretty(&r));
    }
    let mut out = String::new();
    let _ = writeln!(out, "qubits: {}", r.qubit_count);
    let _ = writeln!(out, "depth: {}", r.depth);
    let _ = writeln!(out, "qft_invocations: {}", r.qft_invocations);
    let _ = writeln!(out, "controlled_phase: {}", r.controlled_phase_count());
    let _ = writeln!(out, "gates:");
    for (k, v) in &r.gate_counts {
        let _ = writeln!(out, "  {k}: {v}");
    }
    Ok(out)
}
