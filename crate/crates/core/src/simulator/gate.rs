use std::fmt;

use crate::error::{structural, Result};

/// The primitive operation a [`Gate`] performs on its targets.
///
/// `ControlledPhase` is the only kind that requires controls; a `Phase`
/// that acquires controls is normalized into a `ControlledPhase`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GateKind {
    X,
    H,
    Swap,
    Phase(f64),
    ControlledPhase(f64),
}

impl GateKind {
    pub fn angle(&self) -> Option<f64> {
        match *self {
            GateKind::Phase(a) | GateKind::ControlledPhase(a) => Some(a),
            _ => None,
        }
    }

    fn arity(&self) -> usize {
        match self {
            GateKind::Swap => 2,
            _ => 1,
        }
    }
}

/// A gate together with its target and control qubits.
#[derive(Debug, Clone, PartialEq)]
pub struct Gate {
    kind: GateKind,
    targets: Vec<usize>,
    controls: Vec<usize>,
}

impl Gate {
    /// Builds a gate after checking arity, disjointness and the angle.
    pub fn new(kind: GateKind, targets: Vec<usize>, controls: Vec<usize>) -> Result<Gate> {
        let kind = match kind {
            GateKind::Phase(a) if !controls.is_empty() => GateKind::ControlledPhase(a),
            k => k,
        };
        if targets.len() != kind.arity() {
            return Err(structural(format!(
                "{} expects {} target(s), got {}",
                kind_name(&kind),
                kind.arity(),
                targets.len()
            )));
        }
        if let GateKind::ControlledPhase(_) = kind {
            if controls.is_empty() {
                return Err(structural("controlled phase without a control qubit"));
            }
        }
        if let Some(a) = kind.angle() {
            if !a.is_finite() {
                return Err(structural(format!("non-finite angle {a}")));
            }
        }
        let mut all: Vec<usize> = targets.iter().chain(&controls).copied().collect();
        all.sort_unstable();
        if all.windows(2).any(|w| w[0] == w[1]) {
            return Err(structural(format!(
                "gate qubits must be distinct: targets {targets:?}, controls {controls:?}"
            )));
        }
        Ok(Gate {
            kind,
            targets,
            controls,
        })
    }

    pub fn x(target: usize) -> Gate {
        Gate::raw(GateKind::X, vec![target], vec![])
    }

    pub fn cx(control: usize, target: usize) -> Gate {
        Gate::raw(GateKind::X, vec![target], vec![control])
    }

    pub fn ccx(c0: usize, c1: usize, target: usize) -> Gate {
        Gate::raw(GateKind::X, vec![target], vec![c0, c1])
    }

    pub fn mcx(controls: &[usize], target: usize) -> Gate {
        Gate::raw(GateKind::X, vec![target], controls.to_vec())
    }

    pub fn h(target: usize) -> Gate {
        Gate::raw(GateKind::H, vec![target], vec![])
    }

    pub fn swap(a: usize, b: usize) -> Gate {
        Gate::raw(GateKind::Swap, vec![a, b], vec![])
    }

    pub fn phase(target: usize, angle: f64) -> Gate {
        Gate::raw(GateKind::Phase(angle), vec![target], vec![])
    }

    pub fn cphase(control: usize, target: usize, angle: f64) -> Gate {
        Gate::raw(
            GateKind::ControlledPhase(angle),
            vec![target],
            vec![control],
        )
    }

    pub fn mcphase(controls: &[usize], target: usize, angle: f64) -> Gate {
        Gate::raw(GateKind::Phase(angle), vec![target], controls.to_vec())
    }

    // Constructors used by builders that already guarantee distinct qubits.
    // Invalid combinations are programming errors there, hence the panic.
    fn raw(kind: GateKind, targets: Vec<usize>, controls: Vec<usize>) -> Gate {
        match Gate::new(kind, targets, controls) {
            Ok(g) => g,
            Err(e) => panic!("invalid gate: {e}"),
        }
    }

    pub fn kind(&self) -> GateKind {
        self.kind
    }

    pub fn targets(&self) -> &[usize] {
        &self.targets
    }

    pub fn controls(&self) -> &[usize] {
        &self.controls
    }

    /// Every qubit the gate touches, targets first.
    pub fn qubits(&self) -> impl Iterator<Item = usize> + '_ {
        self.targets.iter().chain(&self.controls).copied()
    }

    pub fn max_qubit(&self) -> usize {
        self.qubits().max().unwrap_or(0)
    }

    pub fn inverse(&self) -> Gate {
        let kind = match self.kind {
            GateKind::Phase(a) => GateKind::Phase(-a),
            GateKind::ControlledPhase(a) => GateKind::ControlledPhase(-a),
            k => k,
        };
        Gate {
            kind,
            targets: self.targets.clone(),
            controls: self.controls.clone(),
        }
    }

    /// Appends `extra` to the control list. Fails if a qubit is already used.
    pub fn with_controls(&self, extra: &[usize]) -> Result<Gate> {
        let mut controls = self.controls.clone();
        controls.extend_from_slice(extra);
        Gate::new(self.kind, self.targets.clone(), controls)
    }

    /// Report label: `X`, `CNOT`, `Toffoli`, `C3X`, `H`, `CH`, `SWAP`,
    /// `CSWAP`, `Phase`, `CR`, `CCR`, `C3R`, ...
    pub fn label(&self) -> String {
        let k = self.controls.len();
        match self.kind {
            GateKind::X => match k {
                0 => "X".into(),
                1 => "CNOT".into(),
                2 => "Toffoli".into(),
                _ => format!("C{k}X"),
            },
            GateKind::H => match k {
                0 => "H".into(),
                1 => "CH".into(),
                _ => format!("C{k}H"),
            },
            GateKind::Swap => match k {
                0 => "SWAP".into(),
                1 => "CSWAP".into(),
                _ => format!("C{k}SWAP"),
            },
            GateKind::Phase(_) => "Phase".into(),
            GateKind::ControlledPhase(_) => match k {
                1 => "CR".into(),
                2 => "CCR".into(),
                _ => format!("C{k}R"),
            },
        }
    }
}

pub(crate) fn kind_name(kind: &GateKind) -> &'static str {
    match kind {
        GateKind::X => "X",
        GateKind::H => "H",
        GateKind::Swap => "SWAP",
        GateKind::Phase(_) => "PHASE",
        GateKind::ControlledPhase(_) => "CPHASE",
    }
}

impl fmt::Display for Gate {
    /// One line of the circuit dump format.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} ", kind_name(&self.kind))?;
        write_list(f, &self.targets)?;
        if !self.controls.is_empty() {
            write!(f, " ctrl: ")?;
            write_list(f, &self.controls)?;
        }
        if let Some(a) = self.kind.angle() {
            write!(f, " angle: {}", format_angle(a))?;
        }
        Ok(())
    }
}

fn write_list(f: &mut fmt::Formatter<'_>, xs: &[usize]) -> fmt::Result {
    for (i, x) in xs.iter().enumerate() {
        if i > 0 {
            write!(f, ",")?;
        }
        write!(f, "{x}")?;
    }
    Ok(())
}

/// Decimal rendering with 12 significant digits and no exponent.
pub fn format_angle(a: f64) -> String {
    if a == 0.0 {
        return "0".into();
    }
    let sci = format!("{:.11e}", a);
    let (mantissa, exp) = sci.split_once('e').expect("scientific format");
    let exp: i32 = exp.parse().expect("exponent");
    let (neg, mantissa) = match mantissa.strip_prefix('-') {
        Some(m) => (true, m),
        None => (false, mantissa),
    };
    let digits: String = mantissa.chars().filter(|c| *c != '.').collect();
    // `digits` holds d0 d1 ... d11 with the point after d0, scaled by 10^exp.
    let point = exp + 1;
    let mut out = String::new();
    if point <= 0 {
        out.push_str("0.");
        out.extend(std::iter::repeat_n('0', (-point) as usize));
        out.push_str(&digits);
    } else if point as usize >= digits.len() {
        out.push_str(&digits);
        out.extend(std::iter::repeat_n('0', point as usize - digits.len()));
    } else {
        out.push_str(&digits[..point as usize]);
        out.push('.');
        out.push_str(&digits[point as usize..]);
    }
    if out.contains('.') {
        let trimmed = out.trim_end_matches('0').trim_end_matches('.');
        out = trimmed.to_string();
    }
    if neg {
        out.insert(0, '-');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn phase_with_controls_becomes_controlled_phase() {
        let g = Gate::new(GateKind::Phase(0.5), vec![0], vec![1]).unwrap();
        assert_eq!(g.kind(), GateKind::ControlledPhase(0.5));
        assert_eq!(g.label(), "CR");
    }

    #[test]
    fn rejects_bad_gates() {
        assert!(Gate::new(GateKind::X, vec![0], vec![0]).is_err());
        assert!(Gate::new(GateKind::Swap, vec![0], vec![]).is_err());
        assert!(Gate::new(GateKind::H, vec![0, 1], vec![]).is_err());
        assert!(Gate::new(GateKind::ControlledPhase(1.0), vec![0], vec![]).is_err());
        assert!(Gate::new(GateKind::Phase(f64::NAN), vec![0], vec![]).is_err());
    }

    #[test]
    fn labels() {
        assert_eq!(Gate::x(0).label(), "X");
        assert_eq!(Gate::cx(1, 0).label(), "CNOT");
        assert_eq!(Gate::ccx(1, 2, 0).label(), "Toffoli");
        assert_eq!(Gate::mcx(&[1, 2, 3], 0).label(), "C3X");
        assert_eq!(
            Gate::swap(0, 1).with_controls(&[2]).unwrap().label(),
            "CSWAP"
        );
        assert_eq!(Gate::mcphase(&[1, 2], 0, 1.0).label(), "CCR");
        assert_eq!(Gate::phase(0, 1.0).label(), "Phase");
    }

    #[test]
    fn inverse_negates_angle() {
        assert_eq!(
            Gate::phase(0, PI / 4.0).inverse().kind(),
            GateKind::Phase(-PI / 4.0)
        );
        assert_eq!(Gate::x(3).inverse(), Gate::x(3));
    }

    #[test]
    fn angle_formatting() {
        assert_eq!(format_angle(PI / 4.0), "0.785398163397");
        assert_eq!(format_angle(-PI), "-3.14159265359");
        assert_eq!(format_angle(2.0), "2");
        assert_eq!(format_angle(1e-5), "0.00001");
        assert_eq!(format_angle(123456.0), "123456");
        assert_eq!(format_angle(0.0), "0");
    }

    #[test]
    fn display_line() {
        let g = Gate::mcphase(&[2, 3], 1, PI);
        assert_eq!(g.to_string(), "CPHASE 1 ctrl: 2,3 angle: 3.14159265359");
        assert_eq!(Gate::swap(0, 4).to_string(), "SWAP 0,4");
    }
}
