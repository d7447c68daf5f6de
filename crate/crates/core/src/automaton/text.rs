//! Line-oriented DFAO text format.
//!
//! ```text
//! k 2
//! alphabet 0 1
//! states 2
//! initial 0
//! output 0 0
//! output 1 1
//! trans 0 0 0
//! trans 0 1 1
//! trans 1 0 1
//! trans 1 1 0
//! ```
//!
//! `#` starts a comment. Every state needs exactly one `output` line and
//! every (state, digit) exactly one `trans` line.

use std::fmt::Write as _;

use super::dfao::{Dfao, DfaoError};
use crate::word::Symbol;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("line {line}, column {column}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

struct Cursor<'a> {
    line: usize,
    tokens: Vec<(usize, &'a str)>,
    at: usize,
}

impl<'a> Cursor<'a> {
    fn err(&self, column: usize, message: impl Into<String>) -> ParseError {
        ParseError {
            line: self.line,
            column,
            message: message.into(),
        }
    }

    fn end_column(&self) -> usize {
        self.tokens.last().map_or(1, |(c, t)| c + t.len())
    }

    fn number<T: std::str::FromStr>(&mut self, what: &str) -> Result<(usize, T), ParseError> {
        let Some(&(col, tok)) = self.tokens.get(self.at) else {
            return Err(self.err(self.end_column(), format!("expected {what}")));
        };
        self.at += 1;
        tok.parse()
            .map(|v| (col, v))
            .map_err(|_| self.err(col, format!("invalid {what} {tok:?}")))
    }

    fn rest(&self) -> &[(usize, &'a str)] {
        &self.tokens[self.at..]
    }

    fn finish(&self) -> Result<(), ParseError> {
        match self.tokens.get(self.at) {
            Some(&(col, tok)) => Err(self.err(col, format!("unexpected token {tok:?}"))),
            None => Ok(()),
        }
    }
}

fn tokenize(line: &str) -> Vec<(usize, &str)> {
    let line = line.split('#').next().unwrap_or("");
    let mut out = Vec::new();
    let mut start = None;
    for (i, c) in line.char_indices() {
        match (c.is_whitespace(), start) {
            (false, None) => start = Some(i),
            (true, Some(s)) => {
                out.push((s + 1, &line[s..i]));
                start = None;
            }
            _ => {}
        }
    }
    if let Some(s) = start {
        out.push((s + 1, &line[s..]));
    }
    out
}

impl Dfao {
    pub fn parse(text: &str) -> Result<Dfao, ParseError> {
        let mut base: Option<u32> = None;
        let mut alphabet: Option<Vec<Symbol>> = None;
        let mut states: Option<usize> = None;
        let mut initial: Option<u32> = None;
        let mut outputs: Vec<(usize, usize, u32, Symbol)> = Vec::new();
        let mut transitions: Vec<(usize, usize, u32, u32, u32)> = Vec::new();
        let mut last_line = 0;

        for (i, raw) in text.lines().enumerate() {
            let tokens = tokenize(raw);
            last_line = i + 1;
            if tokens.is_empty() {
                continue;
            }
            let (kw_col, kw) = tokens[0];
            let mut cur = Cursor {
                line: i + 1,
                tokens,
                at: 1,
            };
            let dup = |cur: &Cursor, set: bool| {
                if set {
                    Err(cur.err(kw_col, format!("duplicate {kw:?} line")))
                } else {
                    Ok(())
                }
            };
            match kw {
                "k" => {
                    dup(&cur, base.is_some())?;
                    let (col, k) = cur.number::<u32>("base")?;
                    if k < 2 {
                        return Err(cur.err(col, "base must be at least 2"));
                    }
                    base = Some(k);
                }
                "alphabet" => {
                    dup(&cur, alphabet.is_some())?;
                    let mut syms = Vec::new();
                    while !cur.rest().is_empty() {
                        let (col, s) = cur.number::<Symbol>("symbol")?;
                        if syms.contains(&s) {
                            return Err(cur.err(col, format!("symbol {s} listed twice")));
                        }
                        syms.push(s);
                    }
                    if syms.is_empty() {
                        return Err(cur.err(cur.end_column(), "alphabet is empty"));
                    }
                    alphabet = Some(syms);
                }
                "states" => {
                    dup(&cur, states.is_some())?;
                    let (col, n) = cur.number::<usize>("state count")?;
                    if n == 0 {
                        return Err(cur.err(col, "state count must be positive"));
                    }
                    states = Some(n);
                }
                "initial" => {
                    dup(&cur, initial.is_some())?;
                    initial = Some(cur.number::<u32>("state")?.1);
                }
                "output" => {
                    let (col, s) = cur.number::<u32>("state")?;
                    let (_, sym) = cur.number::<Symbol>("symbol")?;
                    outputs.push((i + 1, col, s, sym));
                }
                "trans" => {
                    let (col, s) = cur.number::<u32>("state")?;
                    let (_, d) = cur.number::<u32>("digit")?;
                    let (_, t) = cur.number::<u32>("state")?;
                    transitions.push((i + 1, col, s, d, t));
                }
                other => return Err(cur.err(kw_col, format!("unknown directive {other:?}"))),
            }
            cur.finish()?;
        }

        let missing = |what: &str| ParseError {
            line: last_line.max(1),
            column: 1,
            message: format!("missing {what:?} line"),
        };
        let base = base.ok_or_else(|| missing("k"))?;
        let alphabet = alphabet.ok_or_else(|| missing("alphabet"))?;
        let n = states.ok_or_else(|| missing("states"))?;
        let initial = initial.ok_or_else(|| missing("initial"))?;

        let mut output: Vec<Option<Symbol>> = vec![None; n];
        for (line, column, s, sym) in outputs {
            let at = |message: String| ParseError {
                line,
                column,
                message,
            };
            if s as usize >= n {
                return Err(at(format!("state {s} out of range")));
            }
            if !alphabet.contains(&sym) {
                return Err(at(format!("symbol {sym} not in alphabet")));
            }
            if output[s as usize].replace(sym).is_some() {
                return Err(at(format!("state {s} has two outputs")));
            }
        }
        let k = base as usize;
        let mut trans: Vec<Option<u32>> = vec![None; n * k];
        for (line, column, s, d, t) in transitions {
            let at = |message: String| ParseError {
                line,
                column,
                message,
            };
            if s as usize >= n || t as usize >= n {
                return Err(at(format!("state out of range in transition {s} {d} {t}")));
            }
            if d >= base {
                return Err(at(format!("digit {d} out of range for base {base}")));
            }
            if trans[s as usize * k + d as usize].replace(t).is_some() {
                return Err(at(format!("duplicate transition for state {s}, digit {d}")));
            }
        }
        let output: Vec<Symbol> = output
            .into_iter()
            .enumerate()
            .map(|(s, o)| o.ok_or_else(|| missing(&format!("output {s}"))))
            .collect::<Result<_, _>>()?;
        let trans: Vec<u32> = trans
            .into_iter()
            .enumerate()
            .map(|(i, t)| t.ok_or_else(|| missing(&format!("trans {} {}", i / k, i % k))))
            .collect::<Result<_, _>>()?;
        Dfao::new(base, alphabet, initial, trans, output).map_err(|e: DfaoError| ParseError {
            line: last_line.max(1),
            column: 1,
            message: e.to_string(),
        })
    }

    /// Canonical text: header lines, then outputs and transitions in state
    /// and digit order.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        writeln!(s, "k {}", self.base()).unwrap();
        let syms: Vec<String> = self.alphabet().iter().map(|a| a.to_string()).collect();
        writeln!(s, "alphabet {}", syms.join(" ")).unwrap();
        writeln!(s, "states {}", self.num_states()).unwrap();
        writeln!(s, "initial {}", self.initial()).unwrap();
        for q in 0..self.num_states() as u32 {
            writeln!(s, "output {} {}", q, self.output(q)).unwrap();
        }
        for q in 0..self.num_states() as u32 {
            for d in 0..self.base() {
                writeln!(s, "trans {} {} {}", q, d, self.next(q, d)).unwrap();
            }
        }
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn shipped_fixtures_are_canonical_text() {
        for (name, m) in fixtures::all() {
            let text = fixtures::text(name).unwrap();
            // Fixture files carry a comment header; the canonical form drops it.
            let body: String = text
                .lines()
                .filter(|l| !l.starts_with('#'))
                .map(|l| format!("{l}\n"))
                .collect();
            assert_eq!(m.to_text(), body, "{name}");
            assert_eq!(Dfao::parse(&m.to_text()).unwrap(), m);
        }
    }

    #[test]
    fn diagnostics_carry_positions() {
        let err = Dfao::parse("k 2\nalphabet 0 1\nstates 1\ninitial 0\noutput 0 7\n").unwrap_err();
        assert_eq!((err.line, err.column), (5, 8));

        let err = Dfao::parse("k 2\nfoo 1\n").unwrap_err();
        assert_eq!((err.line, err.column), (2, 1));

        let err = Dfao::parse("k 2\nalphabet 0\nstates 1\ninitial 0\noutput 0 0\ntrans 0 0 0\n")
            .unwrap_err();
        assert!(err.message.contains("trans 0 1"), "{err}");

        let err = Dfao::parse("k x\n").unwrap_err();
        assert_eq!((err.line, err.column), (1, 3));

        let err = Dfao::parse("  k 2 3\n").unwrap_err();
        assert_eq!((err.line, err.column), (1, 7));
    }

    #[test]
    fn comments_and_blank_lines() {
        let text = "# header\nk 2 # base\n\nalphabet 0\nstates 1\ninitial 0\noutput 0 0\ntrans 0 0 0\ntrans 0 1 0\n";
        let m = Dfao::parse(text).unwrap();
        assert_eq!(m.eval(17), 0);
    }
}
