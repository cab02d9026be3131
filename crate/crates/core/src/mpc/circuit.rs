//! Arithmetic circuits over F_p and their line-based text format:
//!
//! ```text
//! n 3 inputs 3 wires 5
//! mul 3 0 1
//! mul 4 3 2
//! output 4
//! ```
//!
//! Wires `0..n` carry the party inputs; every gate defines one fresh wire.

use std::fmt;

use rand::Rng;
use thiserror::Error;

use crate::algebra::{Fe, Field};

pub type Wire = usize;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Gate {
    Add { out: Wire, a: Wire, b: Wire },
    AddConst { out: Wire, a: Wire, c: Fe },
    MulConst { out: Wire, a: Wire, c: Fe },
    Mul { out: Wire, a: Wire, b: Wire },
}

impl Gate {
    pub fn out(&self) -> Wire {
        match *self {
            Gate::Add { out, .. } | Gate::AddConst { out, .. } | Gate::MulConst { out, .. } | Gate::Mul { out, .. } => out,
        }
    }

    pub fn inputs(&self) -> Vec<Wire> {
        match *self {
            Gate::Add { a, b, .. } | Gate::Mul { a, b, .. } => vec![a, b],
            Gate::AddConst { a, .. } | Gate::MulConst { a, .. } => vec![a],
        }
    }

    pub fn is_mul(&self) -> bool {
        matches!(self, Gate::Mul { .. })
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CircuitError {
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("wire {0} defined twice")]
    Redefined(Wire),
    #[error("wire {wire} used before it is defined (gate {gate})")]
    Undefined { gate: usize, wire: Wire },
    #[error("wire {0} out of range")]
    Range(Wire),
    #[error("the circuit needs one input per party ({n} parties, {inputs} inputs)")]
    Inputs { n: usize, inputs: usize },
    #[error("constant {0} is not a residue mod p")]
    Constant(u64),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Circuit {
    pub n: usize,
    pub wires: usize,
    pub gates: Vec<Gate>,
    pub output: Wire,
}

impl Circuit {
    /// Checks ranges, single definition and definition before use.
    pub fn new(n: usize, wires: usize, gates: Vec<Gate>, output: Wire) -> Result<Circuit, CircuitError> {
        let mut defined = vec![false; wires];
        for d in defined.iter_mut().take(n) {
            *d = true;
        }
        if n > wires {
            return Err(CircuitError::Range(n));
        }
        for (g, gate) in gates.iter().enumerate() {
            for w in gate.inputs() {
                if w >= wires {
                    return Err(CircuitError::Range(w));
                }
                if !defined[w] {
                    return Err(CircuitError::Undefined { gate: g, wire: w });
                }
            }
            let o = gate.out();
            if o >= wires {
                return Err(CircuitError::Range(o));
            }
            if std::mem::replace(&mut defined[o], true) {
                return Err(CircuitError::Redefined(o));
            }
        }
        if output >= wires {
            return Err(CircuitError::Range(output));
        }
        if !defined[output] {
            return Err(CircuitError::Undefined { gate: gates.len(), wire: output });
        }
        Ok(Circuit { n, wires, gates, output })
    }

    pub fn parse(field: Field, text: &str) -> Result<Circuit, CircuitError> {
        let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l.trim())).filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
        let syntax = |line: usize, msg: &str| CircuitError::Syntax { line, msg: msg.to_string() };
        let num = |line: usize, s: &str| s.parse::<usize>().map_err(|_| syntax(line, &format!("bad number {s:?}")));
        let (hl, header) = lines.next().ok_or_else(|| syntax(0, "empty circuit"))?;
        let h: Vec<&str> = header.split_whitespace().collect();
        if h.len() != 6 || h[0] != "n" || h[2] != "inputs" || h[4] != "wires" {
            return Err(syntax(hl, "expected `n <n> inputs <n> wires <W>`"));
        }
        let (n, inputs, wires) = (num(hl, h[1])?, num(hl, h[3])?, num(hl, h[5])?);
        if n != inputs {
            return Err(CircuitError::Inputs { n, inputs });
        }
        let constant = |line: usize, s: &str| -> Result<Fe, CircuitError> {
            let v = s.parse::<u64>().map_err(|_| syntax(line, &format!("bad constant {s:?}")))?;
            if v >= field.modulus() {
                return Err(CircuitError::Constant(v));
            }
            Ok(field.elem(v))
        };
        let mut gates = Vec::new();
        let mut output = None;
        for (ln, line) in lines {
            if output.is_some() {
                return Err(syntax(ln, "text after `output`"));
            }
            let t: Vec<&str> = line.split_whitespace().collect();
            let arity = if t[0] == "output" { 2 } else { 4 };
            if t.len() != arity {
                return Err(syntax(ln, &format!("`{}` takes {} operands", t[0], arity - 1)));
            }
            let gate = match t[0] {
                "add" => Gate::Add { out: num(ln, t[1])?, a: num(ln, t[2])?, b: num(ln, t[3])? },
                "mul" => Gate::Mul { out: num(ln, t[1])?, a: num(ln, t[2])?, b: num(ln, t[3])? },
                "addc" => Gate::AddConst { out: num(ln, t[1])?, a: num(ln, t[2])?, c: constant(ln, t[3])? },
                "mulc" => Gate::MulConst { out: num(ln, t[1])?, a: num(ln, t[2])?, c: constant(ln, t[3])? },
                "output" => {
                    output = Some(num(ln, t[1])?);
                    continue;
                }
                other => return Err(syntax(ln, &format!("unknown gate {other:?}"))),
            };
            gates.push(gate);
        }
        let output = output.ok_or_else(|| syntax(0, "missing `output` line"))?;
        Circuit::new(n, wires, gates, output)
    }

    /// Number of multiplication gates (c_M).
    pub fn mul_count(&self) -> usize {
        self.gates.iter().filter(|g| g.is_mul()).count()
    }

    /// Multiplicative depth of every wire.
    pub fn wire_depths(&self) -> Vec<usize> {
        let mut depth = vec![0; self.wires];
        for g in &self.gates {
            let d = g.inputs().iter().map(|&w| depth[w]).max().unwrap_or(0);
            depth[g.out()] = d + g.is_mul() as usize;
        }
        depth
    }

    /// Multiplicative depth of the output wire (D_M).
    pub fn depth(&self) -> usize {
        self.wire_depths()[self.output]
    }

    /// Gates the output depends on.
    pub fn cone(&self) -> Vec<bool> {
        let mut need = vec![false; self.wires];
        need[self.output] = true;
        let mut used = vec![false; self.gates.len()];
        for (g, gate) in self.gates.iter().enumerate().rev() {
            if need[gate.out()] {
                used[g] = true;
                for w in gate.inputs() {
                    need[w] = true;
                }
            }
        }
        used
    }

    /// Index of each multiplication gate among all multiplication gates.
    pub fn mul_index(&self) -> Vec<Option<usize>> {
        let mut k = 0;
        self.gates
            .iter()
            .map(|g| {
                g.is_mul().then(|| {
                    k += 1;
                    k - 1
                })
            })
            .collect()
    }

    /// Plaintext evaluation of every wire.
    pub fn eval_wires(&self, inputs: &[Fe]) -> Vec<Fe> {
        assert_eq!(inputs.len(), self.n, "one input per party");
        let zero = inputs[0].field().zero();
        let mut w = vec![zero; self.wires];
        w[..self.n].copy_from_slice(inputs);
        for g in &self.gates {
            w[g.out()] = match *g {
                Gate::Add { a, b, .. } => w[a] + w[b],
                Gate::AddConst { a, c, .. } => w[a] + c,
                Gate::MulConst { a, c, .. } => w[a] * c,
                Gate::Mul { a, b, .. } => w[a] * w[b],
            };
        }
        w
    }

    pub fn eval(&self, inputs: &[Fe]) -> Fe {
        self.eval_wires(inputs)[self.output]
    }

    /// A random circuit with `gates` gates whose output is the last wire.
    pub fn random<R: Rng + ?Sized>(field: Field, n: usize, gates: usize, rng: &mut R) -> Circuit {
        let mut gs = Vec::with_capacity(gates);
        for g in 0..gates {
            let out = n + g;
            let a = rng.gen_range(0..out);
            let b = rng.gen_range(0..out);
            let c = field.random(rng);
            gs.push(match rng.gen_range(0..4) {
                0 => Gate::Add { out, a, b },
                1 => Gate::AddConst { out, a, c },
                2 => Gate::MulConst { out, a, c },
                _ => Gate::Mul { out, a, b },
            });
        }
        let wires = n + gates;
        let output = if gates == 0 { 0 } else { wires - 1 };
        Circuit::new(n, wires, gs, output).expect("generated circuits are valid")
    }

    /// x_1 + x_2 + ... + x_n.
    pub fn sum(n: usize) -> Circuit {
        let gates = (1..n).map(|k| Gate::Add { out: n + k - 1, a: if k == 1 { 0 } else { n + k - 2 }, b: k }).collect();
        let wires = 2 * n - 1;
        Circuit::new(n, wires.max(n), gates, if n == 1 { 0 } else { wires - 1 }).expect("valid")
    }

    /// x_1 · x_2 · ... · x_k as a left-leaning chain (depth k - 1).
    pub fn product(n: usize, k: usize) -> Circuit {
        let gates = (1..k).map(|j| Gate::Mul { out: n + j - 1, a: if j == 1 { 0 } else { n + j - 2 }, b: j }).collect();
        let wires = n + k - 1;
        Circuit::new(n, wires, gates, if k == 1 { 0 } else { wires - 1 }).expect("valid")
    }
}

impl fmt::Display for Circuit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "n {} inputs {} wires {}", self.n, self.n, self.wires)?;
        for g in &self.gates {
            match *g {
                Gate::Add { out, a, b } => writeln!(f, "add {out} {a} {b}")?,
                Gate::AddConst { out, a, c } => writeln!(f, "addc {out} {a} {}", c.value())?,
                Gate::MulConst { out, a, c } => writeln!(f, "mulc {out} {a} {}", c.value())?,
                Gate::Mul { out, a, b } => writeln!(f, "mul {out} {a} {b}")?,
            }
        }
        writeln!(f, "output {}", self.output)
    }
}
