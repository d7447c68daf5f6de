//! Text syntax for formulas.
//!
//! ```text
//! formula := unary ( "&" unary )* ( "|" ... )* ( "=>" formula )?
//! unary   := "~" unary | ("exists" | "forall") ident ("," ident)* "." formula
//!          | "(" formula ")" | "true" | "false" | pred "(" term ("," term)* ")"
//!          | "x[" term "]" ("=" | "!=") (number | "x[" term "]")
//!          | term ("=" | "!=" | "<" | "<=" | ">" | ">=") term
//! term    := summand ("+" summand)*
//! summand := number | number "*" ident | ident
//! ```
//!
//! `&` binds tighter than `|`, which binds tighter than `=>` (right
//! associative). Quantifier bodies extend as far right as possible.
//! Predicates: `factoreq(i,j,n)`, `period(i,n,p)`, `match(i,j,m,r)`,
//! `earliestfac(i,j,n)`, `prefx(i,j,x,y)`, `suffx(i,j,x,y)`, `prim(i,n)`,
//! `unbounded(i,r)`, `powers(i,n,p)`.

use super::{builders, Formula, LogicError, Term};

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Ident(String),
    Num(u64),
    Sym(&'static str),
}

const SYMBOLS: [&str; 17] = [
    "=>", "!=", "<=", ">=", "(", ")", "[", "]", ",", ".", "+", "*", "=", "<", ">", "&", "|",
];

fn lex(src: &str) -> Result<Vec<(usize, Tok)>, LogicError> {
    let mut out = Vec::new();
    let b = src.as_bytes();
    let mut i = 0;
    while i < b.len() {
        let c = b[i] as char;
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let start = i;
            while i < b.len() && b[i].is_ascii_digit() {
                i += 1;
            }
            let n = src[start..i].parse().map_err(|_| LogicError::Parse {
                offset: start,
                message: "number too large".into(),
            })?;
            out.push((start, Tok::Num(n)));
        } else if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < b.len() && (b[i].is_ascii_alphanumeric() || b[i] == b'_') {
                i += 1;
            }
            out.push((start, Tok::Ident(src[start..i].to_string())));
        } else if c == '~' {
            out.push((i, Tok::Sym("~")));
            i += 1;
        } else if let Some(s) = SYMBOLS.iter().find(|s| src[i..].starts_with(**s)) {
            out.push((i, Tok::Sym(s)));
            i += s.len();
        } else {
            return Err(LogicError::Parse {
                offset: i,
                message: format!("unexpected character {c:?}"),
            });
        }
    }
    Ok(out)
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    at: usize,
    len: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.at).map(|(_, t)| t)
    }

    fn peek2(&self) -> Option<&Tok> {
        self.toks.get(self.at + 1).map(|(_, t)| t)
    }

    fn offset(&self) -> usize {
        self.toks.get(self.at).map_or(self.len, |(o, _)| *o)
    }

    fn err<T>(&self, message: impl Into<String>) -> Result<T, LogicError> {
        Err(LogicError::Parse {
            offset: self.offset(),
            message: message.into(),
        })
    }

    fn eat(&mut self, s: &str) -> bool {
        if matches!(self.peek(), Some(Tok::Sym(t)) if *t == s) {
            self.at += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, s: &str) -> Result<(), LogicError> {
        if self.eat(s) {
            Ok(())
        } else {
            self.err(format!("expected {s:?}"))
        }
    }

    fn ident(&mut self) -> Result<String, LogicError> {
        match self.peek() {
            Some(Tok::Ident(s)) => {
                let s = s.clone();
                self.at += 1;
                Ok(s)
            }
            _ => self.err("expected identifier"),
        }
    }

    fn formula(&mut self) -> Result<Formula, LogicError> {
        let lhs = self.disjunction()?;
        if self.eat("=>") {
            let rhs = self.formula()?;
            return Ok(Formula::implies(lhs, rhs));
        }
        Ok(lhs)
    }

    fn disjunction(&mut self) -> Result<Formula, LogicError> {
        let mut parts = vec![self.conjunction()?];
        while self.eat("|") {
            parts.push(self.conjunction()?);
        }
        Ok(if parts.len() == 1 {
            parts.pop().unwrap()
        } else {
            Formula::Or(parts)
        })
    }

    fn conjunction(&mut self) -> Result<Formula, LogicError> {
        let mut parts = vec![self.unary()?];
        while self.eat("&") {
            parts.push(self.unary()?);
        }
        Ok(if parts.len() == 1 {
            parts.pop().unwrap()
        } else {
            Formula::And(parts)
        })
    }

    fn unary(&mut self) -> Result<Formula, LogicError> {
        if self.eat("~") {
            return Ok(!self.unary()?);
        }
        if self.eat("(") {
            let f = self.formula()?;
            self.expect(")")?;
            return Ok(f);
        }
        let word = match self.peek() {
            Some(Tok::Ident(s)) => s.clone(),
            _ => return self.relation(),
        };
        match word.as_str() {
            "exists" | "forall" => {
                self.at += 1;
                let mut vars = vec![self.ident()?];
                while self.eat(",") {
                    vars.push(self.ident()?);
                }
                self.expect(".")?;
                let body = self.formula()?;
                let names: Vec<&str> = vars.iter().map(|s| s.as_str()).collect();
                Ok(if word == "exists" {
                    Formula::exists(&names, body)
                } else {
                    Formula::forall(&names, body)
                })
            }
            "true" | "false" => {
                self.at += 1;
                Ok(Formula::Bool(word == "true"))
            }
            _ if self.peek2() == Some(&Tok::Sym("(")) => self.predicate(&word),
            _ => self.relation(),
        }
    }

    fn predicate(&mut self, name: &str) -> Result<Formula, LogicError> {
        let start = self.offset();
        self.at += 1;
        self.expect("(")?;
        let mut args = vec![self.term()?];
        while self.eat(",") {
            args.push(self.term()?);
        }
        self.expect(")")?;
        let want = match name {
            "prim" | "unbounded" => 2,
            "match" | "prefx" | "suffx" => 4,
            "factoreq" | "period" | "earliestfac" | "powers" => 3,
            _ => {
                return Err(LogicError::Parse {
                    offset: start,
                    message: format!("unknown predicate {name:?}"),
                })
            }
        };
        if args.len() != want {
            return Err(LogicError::Arity {
                name: name.to_string(),
                want,
                got: args.len(),
            });
        }
        let mut a = args.into_iter();
        let mut next = || a.next().unwrap();
        Ok(match name {
            "factoreq" => builders::factoreq(next(), next(), next()),
            "period" => builders::period_f(next(), next(), next()),
            "match" => builders::match_f(next(), next(), next(), next()),
            "earliestfac" => builders::earliestfac(next(), next(), next()),
            "prefx" => builders::prefx(next(), next(), next(), next()),
            "suffx" => builders::suffx(next(), next(), next(), next()),
            "prim" => builders::prim(next(), next()),
            "unbounded" => builders::unbounded(next(), next()),
            _ => builders::unbounded_powers_formula(next(), next(), next()),
        })
    }

    fn seq_index(&mut self) -> Result<Option<Term>, LogicError> {
        if self.peek() == Some(&Tok::Ident("x".into())) && self.peek2() == Some(&Tok::Sym("[")) {
            self.at += 2;
            let t = self.term()?;
            self.expect("]")?;
            return Ok(Some(t));
        }
        Ok(None)
    }

    fn relation(&mut self) -> Result<Formula, LogicError> {
        if let Some(lhs) = self.seq_index()? {
            let negate = if self.eat("!=") {
                true
            } else {
                self.expect("=")?;
                false
            };
            let atom = if let Some(rhs) = self.seq_index()? {
                Formula::SeqEq(lhs, rhs)
            } else {
                match self.peek() {
                    Some(&Tok::Num(n)) if n <= u32::MAX as u64 => {
                        self.at += 1;
                        Formula::SeqAt(lhs, n as u32)
                    }
                    _ => return self.err("expected symbol or x[...]"),
                }
            };
            return Ok(if negate { !atom } else { atom });
        }
        let lhs = self.term()?;
        let op = match self.peek() {
            Some(Tok::Sym(s)) if ["=", "!=", "<", "<=", ">", ">="].contains(s) => *s,
            _ => return self.err("expected comparison"),
        };
        self.at += 1;
        let rhs = self.term()?;
        Ok(match op {
            "=" => Formula::Eq(lhs, rhs),
            "!=" => !Formula::Eq(lhs, rhs),
            "<" => Formula::Lt(lhs, rhs),
            "<=" => Formula::Leq(lhs, rhs),
            ">" => Formula::Lt(rhs, lhs),
            _ => Formula::Leq(rhs, lhs),
        })
    }

    fn term(&mut self) -> Result<Term, LogicError> {
        let mut t = self.summand()?;
        while self.eat("+") {
            t = t + self.summand()?;
        }
        Ok(t)
    }

    fn summand(&mut self) -> Result<Term, LogicError> {
        match self.peek().cloned() {
            Some(Tok::Num(n)) => {
                self.at += 1;
                if self.eat("*") {
                    let v = self.ident()?;
                    Ok(Term::ConstMul(n, v))
                } else {
                    Ok(Term::Const(n))
                }
            }
            Some(Tok::Ident(v)) if !["exists", "forall", "true", "false"].contains(&v.as_str()) => {
                self.at += 1;
                Ok(Term::Var(v))
            }
            _ => self.err("expected term"),
        }
    }
}

/// Parses the text syntax described in the module documentation.
pub fn parse_formula(src: &str) -> Result<Formula, LogicError> {
    let mut p = Parser {
        toks: lex(src)?,
        at: 0,
        len: src.len(),
    };
    let f = p.formula()?;
    if p.at != p.toks.len() {
        return p.err("unexpected trailing input");
    }
    Ok(f)
}
