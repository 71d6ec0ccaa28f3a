//! Named circuit builders for the `resources` and `dump` subcommands.

use qarith_core::classical::register_width;
use qarith_core::comparator::{self, InputDomain, Relation};
use qarith_core::error::Error;
use qarith_core::shor::{modexp_stage_program, OrderFindingConfig};
use qarith_core::{phase_estimation, qft, qft_const_arith, ripple_arith, var_mod_arith};
use qarith_core::{Program, Result};

pub const NAMES: &[&str] = &[
    "qft",
    "iqft",
    "adder",
    "signed-add",
    "signed-sub",
    "multiplier",
    "signed-multiplier",
    "divider",
    "const-add",
    "mod-add",
    "mod-addmul",
    "mod-mul",
    "mod-exp",
    "var-mod-add",
    "left-shift",
    "mod-double",
    "var-mod-mul",
    "mod-square",
    "compare",
    "states-compare",
    "mod-reduce",
    "restricted-adder",
    "clean-adder",
    "fullspace-adder",
    "qpe",
    "shor",
];

pub struct Params {
    pub width: Option<usize>,
    pub modulus: Option<u64>,
    pub constant: Option<u64>,
    pub theta: f64,
}

fn need<T>(value: Option<T>, flag: &str, name: &str) -> Result<T> {
    value.ok_or_else(|| Error::Domain(format!("builder '{name}' requires --{flag}")))
}

pub fn build(name: &str, p: &Params) -> Result<Program> {
    let width = || need(p.width, "width", name);
    let modulus = || need(p.modulus, "modulus", name);
    let constant = p.constant.unwrap_or(1);
    match name {
        "qft" => qft::qft_program(width()?, false),
        "iqft" => qft::qft_program(width()?, true),
        "adder" => ripple_arith::adder_program(width()?, true),
        "signed-add" => ripple_arith::signed_program(width()?, false),
        "signed-sub" => ripple_arith::signed_program(width()?, true),
        "multiplier" => ripple_arith::multiplier_program(width()?, false),
        "signed-multiplier" => ripple_arith::multiplier_program(width()?, true),
        "divider" => ripple_arith::divider_program(width()?),
        "const-add" => qft_const_arith::const_add_program(width()?, constant),
        "mod-add" => qft_const_arith::const_mod_add_program(modulus()?, constant),
        "mod-addmul" => qft_const_arith::const_mod_addmul_program(modulus()?, constant),
        "mod-mul" => qft_const_arith::const_mod_mul_program(modulus()?, constant),
        "mod-exp" => {
            let m = modulus()?;
            let base = p.constant.unwrap_or(2);
            qft_const_arith::const_mod_exp_program(m, base, p.width.unwrap_or(register_width(m)))
        }
        "var-mod-add" => var_mod_arith::var_mod_add_program(modulus()?),
        "left-shift" => var_mod_arith::left_shift_program(width()?),
        "mod-double" => var_mod_arith::mod_double_program(modulus()?),
        "var-mod-mul" => var_mod_arith::var_mod_mul_program(modulus()?),
        "mod-square" => var_mod_arith::var_mod_square_program(modulus()?),
        "compare" => comparator::compare_program(width()?, constant, Relation::Lt),
        "states-compare" => comparator::states_compare_program(width()?),
        "mod-reduce" => comparator::mod_reduce_program(modulus()?),
        "restricted-adder" => {
            comparator::restricted_adder_program(modulus()?, constant, InputDomain::Reduced)
        }
        "clean-adder" => comparator::clean_adder_program(modulus()?, constant),
        "fullspace-adder" => comparator::fullspace_adder_program(modulus()?, constant),
        "qpe" => phase_estimation::phase_gate_qpe_program(width()?, p.theta),
        "shor" => {
            let m = modulus()?;
            let base = p.constant.unwrap_or(2);
            let config = match p.width {
                Some(t) => OrderFindingConfig::with_t(m, base, t)?,
                None => OrderFindingConfig::new(m, base)?,
            };
            let mut prog = modexp_stage_program(&config)?;
            let counting = prog.layout.qubits("counting")?.to_vec();
            prog.circuit.append(&qft::iqft_circuit(&counting)?);
            Ok(prog)
        }
        other => Err(Error::Domain(format!(
            "unknown builder '{other}'; expected one of: {}",
            NAMES.join(", ")
        ))),
    }
}
