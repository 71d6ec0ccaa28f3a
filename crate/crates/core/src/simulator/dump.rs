//! Line-oriented circuit text format.
//!
//! ```text
//! # qubits 3
//! H 2
//! CPHASE 2 ctrl: 1 angle: 1.570796326795
//! SWAP 0,2
//! ```
//!
//! Blank lines and `#` comments are ignored, except that a `# qubits N`
//! header fixes the width; otherwise it is inferred from the largest index.

use super::circuit::Circuit;
use super::gate::{Gate, GateKind};
use crate::error::{structural, Result};

pub fn dump(circuit: &Circuit) -> String {
    let mut out = format!("# qubits {}\n", circuit.qubit_count());
    for g in circuit.gates() {
        out.push_str(&g.to_string());
        out.push('\n');
    }
    out
}

pub fn parse(text: &str) -> Result<Circuit> {
    let mut circuit = Circuit::new(0);
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if let Some(comment) = line.strip_prefix('#') {
            if let Some(n) = comment.trim().strip_prefix("qubits") {
                let n = n
                    .trim()
                    .parse()
                    .map_err(|_| structural(format!("line {}: bad qubit header", lineno + 1)))?;
                circuit = circuit.widened(n);
            }
            continue;
        }
        if line.is_empty() {
            continue;
        }
        let gate = parse_line(line).map_err(|e| structural(format!("line {}: {e}", lineno + 1)))?;
        circuit.push(gate);
    }
    Ok(circuit)
}

fn parse_line(line: &str) -> std::result::Result<Gate, String> {
    let (kind, rest) = line.split_once(' ').ok_or("missing targets")?;
    let (body, angle) = match rest.split_once("angle:") {
        Some((b, a)) => (
            b,
            Some(a.trim().parse::<f64>().map_err(|e| format!("angle: {e}"))?),
        ),
        None => (rest, None),
    };
    let (targets, controls) = match body.split_once("ctrl:") {
        Some((t, c)) => (t, parse_list(c)?),
        None => (body, Vec::new()),
    };
    let targets = parse_list(targets)?;
    let kind = match (kind, angle) {
        ("X", None) => GateKind::X,
        ("H", None) => GateKind::H,
        ("SWAP", None) => GateKind::Swap,
        ("PHASE", Some(a)) => GateKind::Phase(a),
        ("CPHASE", Some(a)) => GateKind::ControlledPhase(a),
        _ => return Err(format!("unknown gate '{kind}' or misplaced angle")),
    };
    Gate::new(kind, targets, controls).map_err(|e| e.to_string())
}

fn parse_list(s: &str) -> std::result::Result<Vec<usize>, String> {
    s.trim()
        .split(',')
        .map(|x| x.trim().parse::<usize>().map_err(|e| format!("'{x}': {e}")))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip() {
        let mut c = Circuit::new(6);
        c.push(Gate::h(2));
        c.push(Gate::cphase(1, 2, std::f64::consts::PI / 3.0));
        c.push(Gate::mcphase(&[0, 1], 3, -0.1));
        c.push(Gate::swap(0, 2));
        c.push(Gate::mcx(&[1, 3], 0));
        c.push(Gate::phase(4, 2.5));
        let text = dump(&c);
        let parsed = parse(&text).unwrap();
        assert_eq!(parsed.qubit_count(), 6);
        assert_eq!(dump(&parsed), text);
    }

    #[test]
    fn infers_width_and_skips_comments() {
        let c = parse("# a comment\n\nX 3 ctrl: 0\n").unwrap();
        assert_eq!(c.qubit_count(), 4);
        assert_eq!(c.gates()[0], Gate::cx(0, 3));
    }

    #[test]
    fn rejects_garbage() {
        assert!(parse("FOO 1").is_err());
        assert!(parse("X 0 angle: 1").is_err());
        assert!(parse("PHASE 0").is_err());
        assert!(parse("X 0 ctrl: 0").is_err());
        assert!(parse("SWAP 1").is_err());
    }
}
