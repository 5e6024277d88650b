//! Line-oriented circuit format (`.qc`).
//!
//! ```text
//! # SUM demo: |1⟩_N ⊗ |1⟩_P  ↦  |1⟩_N ⊗ |2⟩_P
//! dims 3 3
//! prep 0 1
//! prep 1 1
//! swap 1
//! sum 0 1
//! measure all
//! ```
//!
//! One statement per line, `#` starts a comment, keywords are lowercase.
//! `dims` must come first. Statements:
//!
//! * `dims d1 d2 …`
//! * `prep <q> <label>`: basis state in the qudit's current encoding
//! * `x <q> [^k]`, `z <q> [^k]`: logical Pauli powers, `k` reduced mod `d`
//! * `f <q> [inv]`: Fourier gate
//! * `sum <c> <t>`: control in the number encoding, target in the phase encoding
//! * `swap <q>`: switch the qudit's encoding
//! * `measure <q>` | `measure all`: probability table, non-destructive

use std::fmt;

use serde::Serialize;

use crate::error::Error;
use crate::representations::Encoding;
use crate::simulator::{Register, StateDump};

/// 1-based source position.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Span {
    pub line: usize,
    pub column: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MeasureTarget {
    Qudit(usize),
    All,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Op {
    Prep { qudit: usize, label: usize },
    X { qudit: usize, power: usize },
    Z { qudit: usize, power: usize },
    Fourier { qudit: usize, inverse: bool },
    Sum { control: usize, target: usize },
    Swap { qudit: usize },
    Measure(MeasureTarget),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Statement {
    pub op: Op,
    pub span: Span,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Circuit {
    dims: Vec<usize>,
    statements: Vec<Statement>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParseError {
    pub span: Span,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}, column {}: {}", self.span.line, self.span.column, self.message)
    }
}

impl std::error::Error for ParseError {}

/// A simulator error tagged with the statement that raised it.
#[derive(Clone, Debug, PartialEq)]
pub struct ExecError {
    pub span: Span,
    pub error: Error,
}

impl fmt::Display for ExecError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}: {}", self.span.line, self.error)
    }
}

impl std::error::Error for ExecError {}

struct Token<'a> {
    text: &'a str,
    column: usize,
}

fn tokenize(line: &str) -> Vec<Token<'_>> {
    let code = line.split('#').next().unwrap_or("");
    let mut tokens = Vec::new();
    let mut start = None;
    for (i, ch) in code.char_indices().chain(std::iter::once((code.len(), ' '))) {
        match (ch.is_whitespace(), start) {
            (false, None) => start = Some(i),
            (true, Some(s)) => {
                tokens.push(Token { text: &code[s..i], column: code[..s].chars().count() + 1 });
                start = None;
            }
            _ => {}
        }
    }
    tokens
}

struct LineParser<'a> {
    line: usize,
    tokens: Vec<Token<'a>>,
    pos: usize,
    end_column: usize,
}

impl<'a> LineParser<'a> {
    fn error_at(&self, column: usize, message: impl Into<String>) -> ParseError {
        ParseError { span: Span { line: self.line, column }, message: message.into() }
    }

    fn next(&mut self, what: &str) -> Result<&Token<'a>, ParseError> {
        if self.pos >= self.tokens.len() {
            return Err(self.error_at(self.end_column, format!("expected {what}")));
        }
        self.pos += 1;
        Ok(&self.tokens[self.pos - 1])
    }

    fn peek(&self) -> Option<&Token<'a>> {
        self.tokens.get(self.pos)
    }

    fn integer(&mut self, what: &str) -> Result<(usize, usize), ParseError> {
        let tok = self.next(what)?;
        let (text, column) = (tok.text, tok.column);
        text.parse::<usize>()
            .map(|v| (v, column))
            .map_err(|_| self.error_at(column, format!("expected {what}, found `{text}`")))
    }

    fn qudit(&mut self, dims: &[usize]) -> Result<usize, ParseError> {
        let (q, column) = self.integer("qudit index")?;
        if q >= dims.len() {
            return Err(self.error_at(
                column,
                format!("qudit index {q} out of range (circuit has {} qudits)", dims.len()),
            ));
        }
        Ok(q)
    }

    /// Optional `^k`, reduced mod `d`; defaults to 1.
    fn power(&mut self, d: usize) -> Result<usize, ParseError> {
        let Some(tok) = self.peek() else { return Ok(1 % d) };
        let (text, column) = (tok.text, tok.column);
        let Some(digits) = text.strip_prefix('^') else {
            return Err(self.error_at(column, format!("expected `^<power>`, found `{text}`")));
        };
        self.pos += 1;
        let k: i64 = digits
            .parse()
            .map_err(|_| self.error_at(column, format!("invalid power `{text}`")))?;
        Ok(k.rem_euclid(d as i64) as usize)
    }

    fn finish(&self) -> Result<(), ParseError> {
        match self.peek() {
            Some(tok) => Err(self.error_at(tok.column, format!("unexpected token `{}`", tok.text))),
            None => Ok(()),
        }
    }
}

/// Parses and validates a circuit. LF and CRLF line endings are accepted.
pub fn parse(text: &str) -> Result<Circuit, ParseError> {
    let text = text.strip_prefix('\u{feff}').unwrap_or(text);
    let mut dims: Option<Vec<usize>> = None;
    let mut statements = Vec::new();

    for (idx, raw) in text.split('\n').enumerate() {
        let raw = raw.strip_suffix('\r').unwrap_or(raw);
        let tokens = tokenize(raw);
        if tokens.is_empty() {
            continue;
        }
        let end_column = raw.split('#').next().unwrap_or("").trim_end().chars().count() + 1;
        let mut p = LineParser { line: idx + 1, tokens, pos: 0, end_column };
        let keyword = p.next("keyword")?;
        let (kw, kw_col) = (keyword.text, keyword.column);
        let span = Span { line: p.line, column: kw_col };

        if kw == "dims" {
            if dims.is_some() {
                return Err(p.error_at(kw_col, "duplicate dims header"));
            }
            let mut ds = Vec::new();
            while p.peek().is_some() {
                let (d, column) = p.integer("dimension")?;
                if d < 2 {
                    return Err(p.error_at(column, format!("dimension must be at least 2, got {d}")));
                }
                ds.push(d);
            }
            if ds.is_empty() {
                return Err(p.error_at(p.end_column, "dims needs at least one dimension"));
            }
            dims = Some(ds);
            continue;
        }

        let Some(dims) = dims.as_deref() else {
            return Err(p.error_at(kw_col, "missing dims header before first statement"));
        };

        let op = match kw {
            "prep" => {
                let qudit = p.qudit(dims)?;
                let (label, column) = p.integer("label")?;
                if label >= dims[qudit] {
                    return Err(p.error_at(
                        column,
                        format!("label {label} out of range for qudit {qudit} of dimension {}", dims[qudit]),
                    ));
                }
                Op::Prep { qudit, label }
            }
            "x" | "z" => {
                let qudit = p.qudit(dims)?;
                let power = p.power(dims[qudit])?;
                if kw == "x" {
                    Op::X { qudit, power }
                } else {
                    Op::Z { qudit, power }
                }
            }
            "f" => {
                let qudit = p.qudit(dims)?;
                let inverse = match p.peek() {
                    Some(tok) if tok.text == "inv" => {
                        p.pos += 1;
                        true
                    }
                    _ => false,
                };
                Op::Fourier { qudit, inverse }
            }
            "sum" => {
                let control = p.qudit(dims)?;
                let target = p.qudit(dims)?;
                if control == target {
                    return Err(p.error_at(kw_col, "sum requires distinct qudits"));
                }
                if dims[control] != dims[target] {
                    return Err(p.error_at(
                        kw_col,
                        format!(
                            "sum requires equal dimensions (qudit {control} has {}, qudit {target} has {})",
                            dims[control], dims[target]
                        ),
                    ));
                }
                Op::Sum { control, target }
            }
            "swap" => Op::Swap { qudit: p.qudit(dims)? },
            "measure" => match p.peek() {
                Some(tok) if tok.text == "all" => {
                    p.pos += 1;
                    Op::Measure(MeasureTarget::All)
                }
                _ => Op::Measure(MeasureTarget::Qudit(p.qudit(dims)?)),
            },
            other => return Err(p.error_at(kw_col, format!("unknown keyword `{other}`"))),
        };
        p.finish()?;
        statements.push(Statement { op, span });
    }

    match dims {
        Some(dims) => Ok(Circuit { dims, statements }),
        None => Err(ParseError { span: Span { line: 1, column: 1 }, message: "missing dims header".into() }),
    }
}

impl Circuit {
    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn statements(&self) -> &[Statement] {
        &self.statements
    }

    pub fn ops(&self) -> impl Iterator<Item = &Op> {
        self.statements.iter().map(|s| &s.op)
    }
}

impl fmt::Display for Op {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Op::Prep { qudit, label } => write!(f, "prep {qudit} {label}"),
            Op::X { qudit, power: 1 } => write!(f, "x {qudit}"),
            Op::X { qudit, power } => write!(f, "x {qudit} ^{power}"),
            Op::Z { qudit, power: 1 } => write!(f, "z {qudit}"),
            Op::Z { qudit, power } => write!(f, "z {qudit} ^{power}"),
            Op::Fourier { qudit, inverse: false } => write!(f, "f {qudit}"),
            Op::Fourier { qudit, inverse: true } => write!(f, "f {qudit} inv"),
            Op::Sum { control, target } => write!(f, "sum {control} {target}"),
            Op::Swap { qudit } => write!(f, "swap {qudit}"),
            Op::Measure(MeasureTarget::All) => write!(f, "measure all"),
            Op::Measure(MeasureTarget::Qudit(q)) => write!(f, "measure {q}"),
        }
    }
}

/// Canonical text: dims header then one statement per line, no comments.
impl fmt::Display for Circuit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let dims: Vec<String> = self.dims.iter().map(usize::to_string).collect();
        writeln!(f, "dims {}", dims.join(" "))?;
        for s in &self.statements {
            writeln!(f, "{}", s.op)?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MeasurementTable {
    pub line: usize,
    pub qudit: usize,
    pub encoding: Encoding,
    pub probabilities: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExecutionReport {
    pub measurements: Vec<MeasurementTable>,
    pub final_state: StateDump,
}

impl ExecutionReport {
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for m in &self.measurements {
            out.push_str(&format!("measure qudit {} ({} basis, line {})\n", m.qudit, m.encoding, m.line));
            for (label, p) in m.probabilities.iter().enumerate() {
                out.push_str(&format!("  {label:>3}  {p:.12}\n"));
            }
        }
        let header: Vec<String> =
            self.final_state.qudits.iter().map(|q| format!("{}:{}", q.dim, q.encoding)).collect();
        out.push_str(&format!("final state [{}]\n", header.join(", ")));
        for (i, [re, im]) in self.final_state.state.iter().enumerate() {
            if re.abs() > 1e-12 || im.abs() > 1e-12 {
                out.push_str(&format!("  {i:>5}  {re:+.12} {im:+.12}i\n"));
            }
        }
        out
    }
}

/// Runs the circuit on a fresh register of `|0…0⟩` number-encoded qudits.
///
/// `prep` rotates a qudit to the requested label, which is only possible while
/// the qudit's label is still known (no `f`, and no `sum` involving an unknown
/// label). Nothing is inserted automatically, so a `sum` whose target is not
/// phase-encoded fails with the offending line.
pub fn execute(circuit: &Circuit) -> Result<ExecutionReport, ExecError> {
    let zeros = vec![0; circuit.dims.len()];
    let mut register = Register::init(&circuit.dims, &zeros)
        .map_err(|error| ExecError { span: Span { line: 1, column: 1 }, error })?;
    let mut labels: Vec<Option<usize>> = vec![Some(0); circuit.dims.len()];
    let mut measurements = Vec::new();

    for stmt in &circuit.statements {
        let at = |error: Error| ExecError { span: stmt.span, error };
        match stmt.op {
            Op::Prep { qudit, label } => {
                let d = circuit.dims[qudit];
                let current = labels[qudit].ok_or(Error::PrepUnknownState { qudit }).map_err(at)?;
                register.apply_x(qudit, (label + d - current) % d).map_err(at)?;
                labels[qudit] = Some(label);
            }
            Op::X { qudit, power } => {
                register.apply_x(qudit, power).map_err(at)?;
                labels[qudit] = labels[qudit].map(|l| (l + power) % circuit.dims[qudit]);
            }
            Op::Z { qudit, power } => register.apply_z(qudit, power).map_err(at)?,
            Op::Fourier { qudit, inverse } => {
                register.apply_fourier(qudit, inverse).map_err(at)?;
                labels[qudit] = None;
            }
            Op::Sum { control, target } => {
                register.apply_sum(control, target).map_err(at)?;
                let d = circuit.dims[target];
                match (labels[control], labels[target]) {
                    (Some(c), Some(t)) => labels[target] = Some((c + t) % d),
                    _ => {
                        labels[control] = None;
                        labels[target] = None;
                    }
                }
            }
            Op::Swap { qudit } => register.swap_encoding(qudit).map_err(at)?,
            Op::Measure(target) => {
                let qudits: Vec<usize> = match target {
                    MeasureTarget::All => (0..circuit.dims.len()).collect(),
                    MeasureTarget::Qudit(q) => vec![q],
                };
                for q in qudits {
                    measurements.push(MeasurementTable {
                        line: stmt.span.line,
                        qudit: q,
                        encoding: register.encoding(q).map_err(at)?,
                        probabilities: register.measure_probabilities(q).map_err(at)?,
                    });
                }
            }
        }
    }

    Ok(ExecutionReport { measurements, final_state: register.dump() })
}
