use std::collections::{BTreeSet, HashMap};

use super::{digits_msd, AutomatonError, Dfa, Limits};
use crate::word::{Symbol, SymbolSource, Word};

/// Deterministic finite automaton with output. Reading the base-`k`
/// digits of `n`, most significant first, lands in a state whose output is
/// the `n`-th term of the sequence.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Dfao {
    base: u32,
    alphabet: Vec<Symbol>,
    initial: u32,
    trans: Vec<u32>,
    output: Vec<Symbol>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum DfaoError {
    #[error("base must be at least 2, got {0}")]
    BadBase(u32),
    #[error("state {0} out of range")]
    StateOutOfRange(u32),
    #[error("output {sym} of state {state} is not in the alphabet")]
    OutputNotInAlphabet { state: u32, sym: Symbol },
    #[error("transition table has {got} entries, expected {want}")]
    NotTotal { got: usize, want: usize },
    #[error("reading a leading zero changes the sequence")]
    LeadingZeroSensitive,
}

impl Dfao {
    pub fn new(
        base: u32,
        alphabet: Vec<Symbol>,
        initial: u32,
        trans: Vec<u32>,
        output: Vec<Symbol>,
    ) -> Result<Dfao, DfaoError> {
        if base < 2 {
            return Err(DfaoError::BadBase(base));
        }
        let n = output.len();
        if trans.len() != n * base as usize {
            return Err(DfaoError::NotTotal {
                got: trans.len(),
                want: n * base as usize,
            });
        }
        if initial as usize >= n {
            return Err(DfaoError::StateOutOfRange(initial));
        }
        if let Some(&t) = trans.iter().find(|&&t| t as usize >= n) {
            return Err(DfaoError::StateOutOfRange(t));
        }
        for (s, &sym) in output.iter().enumerate() {
            if !alphabet.contains(&sym) {
                return Err(DfaoError::OutputNotInAlphabet {
                    state: s as u32,
                    sym,
                });
            }
        }
        let m = Dfao {
            base,
            alphabet,
            initial,
            trans,
            output,
        };
        let classes = m.output_classes();
        if classes[m.initial as usize] != classes[m.next(m.initial, 0) as usize] {
            return Err(DfaoError::LeadingZeroSensitive);
        }
        Ok(m)
    }

    /// Fixed point of a `k`-uniform morphism starting from `start`, with
    /// the identity coding. `images[a]` is the image of letter `a`.
    pub fn from_uniform_morphism(images: &[Vec<Symbol>], start: Symbol) -> Result<Dfao, DfaoError> {
        let base = images[start as usize].len() as u32;
        let n = images.len();
        let trans: Vec<u32> = images.iter().flat_map(|img| img.iter().copied()).collect();
        let alphabet: Vec<Symbol> = (0..n as Symbol).collect();
        Dfao::new(base, alphabet, start, trans, (0..n as Symbol).collect())
    }

    pub fn base(&self) -> u32 {
        self.base
    }

    pub fn alphabet(&self) -> &[Symbol] {
        &self.alphabet
    }

    pub fn initial(&self) -> u32 {
        self.initial
    }

    pub fn num_states(&self) -> usize {
        self.output.len()
    }

    pub fn next(&self, state: u32, digit: u32) -> u32 {
        self.trans[state as usize * self.base as usize + digit as usize]
    }

    pub fn output(&self, state: u32) -> Symbol {
        self.output[state as usize]
    }

    pub fn eval(&self, n: u64) -> Symbol {
        let s = digits_msd(n, self.base)
            .into_iter()
            .fold(self.initial, |s, d| self.next(s, d));
        self.output(s)
    }

    /// `x[start..start+len]` materialized.
    pub fn factor(&self, start: u64, len: usize) -> Word {
        Word::new((0..len as u64).map(|t| self.eval(start + t)).collect())
    }

    pub fn prefix(&self, len: usize) -> Word {
        self.factor(0, len)
    }

    /// Outputs of states reachable from the initial state.
    pub fn reachable_outputs(&self) -> BTreeSet<Symbol> {
        let mut seen = vec![false; self.num_states()];
        let mut stack = vec![self.initial];
        seen[self.initial as usize] = true;
        let mut out = BTreeSet::new();
        while let Some(s) = stack.pop() {
            out.insert(self.output(s));
            for d in 0..self.base {
                let t = self.next(s, d);
                if !seen[t as usize] {
                    seen[t as usize] = true;
                    stack.push(t);
                }
            }
        }
        out
    }

    /// Moore equivalence classes: states with identical output futures.
    fn output_classes(&self) -> Vec<u32> {
        let n = self.num_states();
        let mut class: Vec<u32> = {
            let mut ids: HashMap<Symbol, u32> = HashMap::new();
            self.output
                .iter()
                .map(|o| {
                    let len = ids.len() as u32;
                    *ids.entry(*o).or_insert(len)
                })
                .collect()
        };
        let mut count = class.iter().collect::<BTreeSet<_>>().len();
        loop {
            let mut sigs: HashMap<Vec<u32>, u32> = HashMap::new();
            let next: Vec<u32> = (0..n)
                .map(|s| {
                    let mut sig = vec![class[s]];
                    sig.extend((0..self.base).map(|d| class[self.next(s as u32, d) as usize]));
                    let len = sigs.len() as u32;
                    *sigs.entry(sig).or_insert(len)
                })
                .collect();
            if sigs.len() == count {
                return next;
            }
            count = sigs.len();
            class = next;
        }
    }

    /// Minimal equivalent DFAO restricted to reachable states, numbered
    /// breadth-first from the initial state.
    pub fn minimize(&self) -> Dfao {
        let classes = self.output_classes();
        let mut id: HashMap<u32, u32> = HashMap::new();
        let mut order = vec![classes[self.initial as usize]];
        let mut rep = vec![self.initial];
        id.insert(order[0], 0);
        let mut trans = Vec::new();
        let mut head = 0;
        while head < order.len() {
            let s = rep[head];
            head += 1;
            for d in 0..self.base {
                let t = self.next(s, d);
                let c = classes[t as usize];
                let next_id = match id.get(&c) {
                    Some(&i) => i,
                    None => {
                        let i = order.len() as u32;
                        id.insert(c, i);
                        order.push(c);
                        rep.push(t);
                        i
                    }
                };
                trans.push(next_id);
            }
        }
        let output = rep.iter().map(|&s| self.output(s)).collect();
        Dfao {
            base: self.base,
            alphabet: self.alphabet.clone(),
            initial: 0,
            trans,
            output,
        }
    }

    /// One-track automaton for `{ n : x[n] = sym }` on variable `var`.
    pub fn letter_dfa(&self, sym: Symbol, var: &str) -> Result<Dfa, AutomatonError> {
        let n = self.num_states();
        let k = self.base as usize;
        // Shift so that the initial state becomes state 0.
        let perm = |s: u32| -> u32 {
            if s == self.initial {
                0
            } else if s == 0 {
                self.initial
            } else {
                s
            }
        };
        let mut trans = vec![0u32; n * k];
        let mut accepting = vec![false; n];
        for s in 0..n as u32 {
            let ps = perm(s) as usize;
            accepting[ps] = self.output(s) == sym;
            for d in 0..self.base {
                trans[ps * k + d as usize] = perm(self.next(s, d));
            }
        }
        Dfa::from_parts(self.base, vec![var.to_string()], trans, accepting)
    }

    /// Two-track automaton for `{ (a, b) : x[a] = x[b] }`.
    pub fn equal_letters_dfa(
        &self,
        a: &str,
        b: &str,
        limits: &Limits,
    ) -> Result<Dfa, AutomatonError> {
        let mut acc: Option<Dfa> = None;
        for &sym in &self.alphabet {
            let both = self
                .letter_dfa(sym, a)?
                .intersect(&self.letter_dfa(sym, b)?, limits)?;
            acc = Some(match acc {
                None => both,
                Some(d) => d.union(&both, limits)?,
            });
        }
        acc.unwrap().reorder(&[a.to_string(), b.to_string()])
    }
}

impl SymbolSource for Dfao {
    fn symbol_at(&self, n: u64) -> Option<Symbol> {
        Some(self.eval(n))
    }
}
