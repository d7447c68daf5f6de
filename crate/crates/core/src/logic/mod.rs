//! First-order logic over `(N, +, n -> x[n])` compiled to automata.
//!
//! Terms are linear: sums of variables, constants and constant multiples.
//! Every formula compiles to a [`Dfa`] whose tracks are the formula's free
//! variables. Sentences compile to a zero-track automaton.

mod builders;
mod parse;

use std::collections::HashMap;
use std::fmt;
use std::ops::Add;
use std::sync::Arc;

use thiserror::Error;

use crate::automaton::relations::{add_rel, const_mul_rel, const_rel, eq_rel, leq_rel, less_rel};
use crate::automaton::{AutomatonError, Dfa, Dfao, Limits};
use crate::word::Symbol;

pub use builders::{
    earliestfac, factoreq, match_f, period_f, prefx, prim, setup2_body, setup2_formula,
    setup_formula, suffx, unbounded, unbounded_powers_formula, PowerFreedom,
};
pub use parse::parse_formula;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LogicError {
    #[error(transparent)]
    Automaton(#[from] AutomatonError),
    #[error("sentence expected, but {0:?} occur free")]
    FreeVariables(Vec<String>),
    #[error("predicate {name} takes {want} arguments, got {got}")]
    Arity {
        name: String,
        want: usize,
        got: usize,
    },
    #[error("predicate {name}: body mentions {var:?}, which is not a parameter")]
    UnboundInPredicate { name: String, var: String },
    #[error("parse error at offset {offset}: {message}")]
    Parse { offset: usize, message: String },
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Term {
    Var(String),
    Const(u64),
    Sum(Box<Term>, Box<Term>),
    ConstMul(u64, String),
}

impl Term {
    pub fn var(name: &str) -> Term {
        Term::Var(name.to_string())
    }

    pub fn mul(c: u64, name: &str) -> Term {
        Term::ConstMul(c, name.to_string())
    }

    fn collect_vars(&self, out: &mut Vec<String>) {
        match self {
            Term::Var(v) | Term::ConstMul(_, v) => push_unique(out, v),
            Term::Const(_) => {}
            Term::Sum(a, b) => {
                a.collect_vars(out);
                b.collect_vars(out);
            }
        }
    }
}

impl From<&str> for Term {
    fn from(v: &str) -> Term {
        Term::var(v)
    }
}

impl From<u64> for Term {
    fn from(c: u64) -> Term {
        Term::Const(c)
    }
}

impl From<&Term> for Term {
    fn from(t: &Term) -> Term {
        t.clone()
    }
}

impl<T: Into<Term>> Add<T> for Term {
    type Output = Term;
    fn add(self, rhs: T) -> Term {
        Term::Sum(Box::new(self), Box::new(rhs.into()))
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Var(v) => write!(f, "{v}"),
            Term::Const(c) => write!(f, "{c}"),
            Term::Sum(a, b) => write!(f, "{a}+{b}"),
            Term::ConstMul(c, v) => write!(f, "{c}*{v}"),
        }
    }
}

/// A named relation, compiled once per [`Compiler`] and applied by
/// renaming tracks. Names must identify the relation uniquely.
#[derive(Debug, Clone)]
pub struct Predicate {
    pub name: String,
    pub params: Vec<String>,
    pub body: PredicateBody,
}

#[derive(Debug, Clone)]
pub enum PredicateBody {
    Formula(Formula),
    Automaton(Dfa),
}

impl Predicate {
    pub fn new(name: &str, params: &[&str], body: Formula) -> Arc<Predicate> {
        Arc::new(Predicate {
            name: name.to_string(),
            params: params.iter().map(|p| p.to_string()).collect(),
            body: PredicateBody::Formula(body),
        })
    }
}

#[derive(Debug, Clone)]
pub enum Formula {
    Bool(bool),
    Eq(Term, Term),
    Leq(Term, Term),
    Lt(Term, Term),
    /// `x[t] = symbol`.
    SeqAt(Term, Symbol),
    /// `x[t1] = x[t2]`.
    SeqEq(Term, Term),
    Not(Box<Formula>),
    And(Vec<Formula>),
    Or(Vec<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    Exists(String, Box<Formula>),
    Forall(String, Box<Formula>),
    Apply(Arc<Predicate>, Vec<Term>),
}

fn push_unique(out: &mut Vec<String>, v: &str) {
    if !out.iter().any(|o| o == v) {
        out.push(v.to_string());
    }
}

impl Formula {
    pub fn eq(a: impl Into<Term>, b: impl Into<Term>) -> Formula {
        Formula::Eq(a.into(), b.into())
    }

    pub fn leq(a: impl Into<Term>, b: impl Into<Term>) -> Formula {
        Formula::Leq(a.into(), b.into())
    }

    pub fn lt(a: impl Into<Term>, b: impl Into<Term>) -> Formula {
        Formula::Lt(a.into(), b.into())
    }

    pub fn seq_at(t: impl Into<Term>, sym: Symbol) -> Formula {
        Formula::SeqAt(t.into(), sym)
    }

    pub fn seq_eq(a: impl Into<Term>, b: impl Into<Term>) -> Formula {
        Formula::SeqEq(a.into(), b.into())
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(f: Formula) -> Formula {
        Formula::Not(Box::new(f))
    }

    pub fn implies(a: Formula, b: Formula) -> Formula {
        Formula::Implies(Box::new(a), Box::new(b))
    }

    pub fn exists(vars: &[&str], body: Formula) -> Formula {
        vars.iter()
            .rev()
            .fold(body, |f, v| Formula::Exists(v.to_string(), Box::new(f)))
    }

    pub fn forall(vars: &[&str], body: Formula) -> Formula {
        vars.iter()
            .rev()
            .fold(body, |f, v| Formula::Forall(v.to_string(), Box::new(f)))
    }

    pub fn apply(pred: &Arc<Predicate>, args: Vec<Term>) -> Formula {
        Formula::Apply(pred.clone(), args)
    }

    /// Free variables in order of first appearance.
    pub fn free_vars(&self) -> Vec<String> {
        let mut out = Vec::new();
        self.collect_free(&mut Vec::new(), &mut out);
        out
    }

    fn collect_free(&self, bound: &mut Vec<String>, out: &mut Vec<String>) {
        let term = |t: &Term, bound: &Vec<String>, out: &mut Vec<String>| {
            let mut vs = Vec::new();
            t.collect_vars(&mut vs);
            for v in vs {
                if !bound.contains(&v) {
                    push_unique(out, &v);
                }
            }
        };
        match self {
            Formula::Bool(_) => {}
            Formula::Eq(a, b) | Formula::Leq(a, b) | Formula::Lt(a, b) | Formula::SeqEq(a, b) => {
                term(a, bound, out);
                term(b, bound, out);
            }
            Formula::SeqAt(t, _) => term(t, bound, out),
            Formula::Not(f) => f.collect_free(bound, out),
            Formula::And(fs) | Formula::Or(fs) => {
                fs.iter().for_each(|f| f.collect_free(bound, out))
            }
            Formula::Implies(a, b) => {
                a.collect_free(bound, out);
                b.collect_free(bound, out);
            }
            Formula::Exists(v, f) | Formula::Forall(v, f) => {
                bound.push(v.clone());
                f.collect_free(bound, out);
                bound.pop();
            }
            Formula::Apply(_, args) => args.iter().for_each(|t| term(t, bound, out)),
        }
    }
}

impl std::ops::BitAnd for Formula {
    type Output = Formula;
    fn bitand(self, rhs: Formula) -> Formula {
        match self {
            Formula::And(mut fs) => {
                fs.push(rhs);
                Formula::And(fs)
            }
            f => Formula::And(vec![f, rhs]),
        }
    }
}

impl std::ops::BitOr for Formula {
    type Output = Formula;
    fn bitor(self, rhs: Formula) -> Formula {
        match self {
            Formula::Or(mut fs) => {
                fs.push(rhs);
                Formula::Or(fs)
            }
            f => Formula::Or(vec![f, rhs]),
        }
    }
}

impl std::ops::Not for Formula {
    type Output = Formula;
    fn not(self) -> Formula {
        Formula::Not(Box::new(self))
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |f: &mut fmt::Formatter<'_>, fs: &[Formula], op: &str| -> fmt::Result {
            write!(f, "(")?;
            for (i, g) in fs.iter().enumerate() {
                if i > 0 {
                    write!(f, " {op} ")?;
                }
                write!(f, "{g}")?;
            }
            write!(f, ")")
        };
        match self {
            Formula::Bool(b) => write!(f, "{b}"),
            Formula::Eq(a, b) => write!(f, "{a} = {b}"),
            Formula::Leq(a, b) => write!(f, "{a} <= {b}"),
            Formula::Lt(a, b) => write!(f, "{a} < {b}"),
            Formula::SeqAt(t, s) => write!(f, "x[{t}] = {s}"),
            Formula::SeqEq(a, b) => write!(f, "x[{a}] = x[{b}]"),
            Formula::Not(g) => write!(f, "~({g})"),
            Formula::And(fs) => join(f, fs, "&"),
            Formula::Or(fs) => join(f, fs, "|"),
            Formula::Implies(a, b) => write!(f, "({a} => {b})"),
            Formula::Exists(v, g) => write!(f, "exists {v}. {g}"),
            Formula::Forall(v, g) => write!(f, "forall {v}. {g}"),
            Formula::Apply(p, args) => {
                write!(f, "{}(", p.name)?;
                for (i, a) in args.iter().enumerate() {
                    if i > 0 {
                        write!(f, ", ")?;
                    }
                    write!(f, "{a}")?;
                }
                write!(f, ")")
            }
        }
    }
}

/// A satisfying assignment, in free-variable order.
pub type Assignment = Vec<(String, u64)>;

/// Compilation context for one sequence. Predicate automata are cached by
/// name, so repeated applications cost a rename.
pub struct Compiler<'a> {
    seq: &'a Dfao,
    limits: Limits,
    cache: HashMap<String, Dfa>,
    letters: HashMap<Symbol, Dfa>,
    equal_letters: Option<Dfa>,
    fresh: usize,
    peak: usize,
}

impl<'a> Compiler<'a> {
    pub fn new(seq: &'a Dfao, limits: Limits) -> Self {
        Compiler {
            seq,
            limits,
            cache: HashMap::new(),
            letters: HashMap::new(),
            equal_letters: None,
            fresh: 0,
            peak: 0,
        }
    }

    pub fn sequence(&self) -> &Dfao {
        self.seq
    }

    pub fn limits(&self) -> &Limits {
        &self.limits
    }

    /// Largest intermediate automaton built so far.
    pub fn peak_states(&self) -> usize {
        self.peak
    }

    /// Automaton over the free variables of `f`, in order of first
    /// appearance.
    pub fn compile(&mut self, f: &Formula) -> Result<Dfa, LogicError> {
        let d = self.formula(f)?;
        Ok(d.reorder(&f.free_vars())?)
    }

    pub fn decide(&mut self, f: &Formula) -> Result<bool, LogicError> {
        let free = f.free_vars();
        if !free.is_empty() {
            return Err(LogicError::FreeVariables(free));
        }
        Ok(self
            .formula(f)?
            .truth()
            .expect("sentence compiles to a constant"))
    }

    /// Least satisfying assignment, ordered by the length of the padded
    /// representation, then lexicographically on digit columns.
    pub fn witness(&mut self, f: &Formula) -> Result<Option<Assignment>, LogicError> {
        let d = self.compile(f)?;
        Ok(d.shortest_accepted()
            .map(|vals| d.vars().iter().cloned().zip(vals).collect()))
    }

    fn note(&mut self, d: Dfa) -> Dfa {
        self.peak = self.peak.max(d.num_states());
        d
    }

    fn fresh_var(&mut self) -> String {
        self.fresh += 1;
        format!("#{}", self.fresh)
    }

    fn base(&self) -> u32 {
        self.seq.base()
    }

    fn formula(&mut self, f: &Formula) -> Result<Dfa, LogicError> {
        let limits = self.limits.clone();
        let out = match f {
            Formula::Bool(b) => Dfa::constant(self.base(), *b),
            Formula::Eq(a, b) => self.relation(Rel::Eq, a, b)?,
            Formula::Leq(a, b) => self.relation(Rel::Leq, a, b)?,
            Formula::Lt(a, b) => self.relation(Rel::Lt, a, b)?,
            Formula::SeqEq(a, b) => self.relation(Rel::SeqEq, a, b)?,
            Formula::SeqAt(t, sym) => {
                let mut defs = Vec::new();
                let v = self.term_var(t, &mut defs)?;
                let atom = self.letter(*sym)?.rename(&[("#x", &v)])?;
                self.combine(atom, defs)?
            }
            Formula::Not(g) => self.formula(g)?.complement(),
            Formula::And(fs) => {
                let mut acc = Dfa::constant(self.base(), true);
                for g in fs {
                    let d = self.formula(g)?;
                    acc = self.note(acc.intersect(&d, &limits)?);
                    if acc.is_empty() {
                        break;
                    }
                }
                acc
            }
            Formula::Or(fs) => {
                let mut acc = Dfa::constant(self.base(), false);
                for g in fs {
                    let d = self.formula(g)?;
                    acc = self.note(acc.union(&d, &limits)?);
                    if acc.is_universal() {
                        break;
                    }
                }
                acc
            }
            Formula::Implies(a, b) => {
                let da = self.formula(a)?;
                let db = self.formula(b)?;
                da.product(&db, &limits, |x, y| !x || y)?
            }
            Formula::Exists(v, g) => self.formula(g)?.project(v, &limits)?,
            Formula::Forall(v, g) => self.formula(g)?.forall(v, &limits)?,
            Formula::Apply(p, args) => self.apply(p, args)?,
        };
        Ok(self.note(out))
    }

    fn letter(&mut self, sym: Symbol) -> Result<Dfa, LogicError> {
        if let Some(d) = self.letters.get(&sym) {
            return Ok(d.clone());
        }
        let d = if self.seq.alphabet().contains(&sym) {
            self.seq.letter_dfa(sym, "#x")?
        } else {
            Dfa::empty(self.base(), vec!["#x".into()])?
        };
        self.letters.insert(sym, d.clone());
        Ok(d)
    }

    fn equal_letters(&mut self) -> Result<Dfa, LogicError> {
        if self.equal_letters.is_none() {
            self.equal_letters = Some(self.seq.equal_letters_dfa("#a", "#b", &self.limits)?);
        }
        Ok(self.equal_letters.clone().unwrap())
    }

    /// Names a variable equal to `t`, pushing its defining automata
    /// (outermost first) onto `defs`.
    fn term_var(&mut self, t: &Term, defs: &mut Vec<Dfa>) -> Result<String, LogicError> {
        let k = self.base();
        Ok(match t {
            Term::Var(v) => v.clone(),
            Term::ConstMul(1, v) => v.clone(),
            Term::Const(c) => {
                let f = self.fresh_var();
                defs.push(const_rel(k, *c, &f)?);
                f
            }
            Term::ConstMul(c, v) => {
                let f = self.fresh_var();
                defs.push(const_mul_rel(k, *c, v, &f)?);
                f
            }
            Term::Sum(a, b) => {
                let f = self.fresh_var();
                let slot = defs.len();
                defs.push(Dfa::constant(k, true));
                let va = self.term_var(a, defs)?;
                let vb = self.term_var(b, defs)?;
                defs[slot] = if va == vb {
                    const_mul_rel(k, 2, &va, &f)?
                } else {
                    add_rel(k, &va, &vb, &f)?
                };
                f
            }
        })
    }

    /// Intersects `atom` with the term definitions, projecting each fresh
    /// variable once no later definition mentions it.
    fn combine(&mut self, atom: Dfa, defs: Vec<Dfa>) -> Result<Dfa, LogicError> {
        let limits = self.limits.clone();
        let mut acc = atom;
        for (n, d) in defs.iter().enumerate() {
            acc = self.note(acc.intersect(d, &limits)?);
            let dead: Vec<String> = acc
                .vars()
                .iter()
                .filter(|v| {
                    v.starts_with('#') && !defs[n + 1..].iter().any(|e| e.vars().contains(v))
                })
                .cloned()
                .collect();
            for v in dead {
                acc = self.note(acc.project(&v, &limits)?);
            }
        }
        let rest: Vec<String> = acc
            .vars()
            .iter()
            .filter(|v| v.starts_with('#'))
            .cloned()
            .collect();
        for v in rest {
            acc = self.note(acc.project(&v, &limits)?);
        }
        Ok(acc)
    }

    fn relation(&mut self, rel: Rel, a: &Term, b: &Term) -> Result<Dfa, LogicError> {
        let k = self.base();
        let mut defs = Vec::new();
        let va = self.term_var(a, &mut defs)?;
        let vb = self.term_var(b, &mut defs)?;
        let atom = if va == vb {
            let one = vec![va.clone()];
            match rel {
                Rel::Lt => Dfa::empty(k, one)?,
                _ => Dfa::universal(k, one)?,
            }
        } else {
            match rel {
                Rel::Eq => eq_rel(k, &va, &vb)?,
                Rel::Leq => leq_rel(k, &va, &vb)?,
                Rel::Lt => less_rel(k, &va, &vb)?,
                Rel::SeqEq => self.equal_letters()?.rename(&[("#a", &va), ("#b", &vb)])?,
            }
        };
        self.combine(atom, defs)
    }

    fn predicate(&mut self, p: &Predicate) -> Result<Dfa, LogicError> {
        if let Some(d) = self.cache.get(&p.name) {
            return Ok(d.clone());
        }
        let d = match &p.body {
            PredicateBody::Automaton(d) => d.clone(),
            PredicateBody::Formula(f) => {
                if let Some(v) = f.free_vars().into_iter().find(|v| !p.params.contains(v)) {
                    return Err(LogicError::UnboundInPredicate {
                        name: p.name.clone(),
                        var: v,
                    });
                }
                self.formula(f)?
            }
        };
        let d = d.reorder(&p.params)?;
        self.cache.insert(p.name.clone(), d.clone());
        Ok(d)
    }

    fn apply(&mut self, p: &Predicate, args: &[Term]) -> Result<Dfa, LogicError> {
        if args.len() != p.params.len() {
            return Err(LogicError::Arity {
                name: p.name.clone(),
                want: p.params.len(),
                got: args.len(),
            });
        }
        let body = self.predicate(p)?;
        let mut defs = Vec::new();
        let mut names: Vec<String> = Vec::with_capacity(args.len());
        for a in args {
            let v = self.term_var(a, &mut defs)?;
            if names.contains(&v) {
                // Repeated argument: route through a fresh track.
                let f = self.fresh_var();
                defs.push(eq_rel(self.base(), &v, &f)?);
                names.push(f);
            } else {
                names.push(v);
            }
        }
        // Rename through temporaries so parameter names cannot collide
        // with argument names.
        let tmp: Vec<String> = (0..names.len()).map(|n| format!("#p{n}")).collect();
        let first: Vec<(&str, &str)> = p
            .params
            .iter()
            .map(|s| s.as_str())
            .zip(tmp.iter().map(|s| s.as_str()))
            .collect();
        let second: Vec<(&str, &str)> = tmp
            .iter()
            .map(|s| s.as_str())
            .zip(names.iter().map(|s| s.as_str()))
            .collect();
        let atom = body.rename(&first)?.rename(&second)?;
        self.combine(atom, defs)
    }
}

#[derive(Clone, Copy)]
enum Rel {
    Eq,
    Leq,
    Lt,
    SeqEq,
}

pub fn compile(f: &Formula, seq: &Dfao, limits: &Limits) -> Result<Dfa, LogicError> {
    Compiler::new(seq, limits.clone()).compile(f)
}

pub fn decide(f: &Formula, seq: &Dfao, limits: &Limits) -> Result<bool, LogicError> {
    Compiler::new(seq, limits.clone()).decide(f)
}

pub fn witness(f: &Formula, seq: &Dfao, limits: &Limits) -> Result<Option<Assignment>, LogicError> {
    Compiler::new(seq, limits.clone()).witness(f)
}

#[cfg(test)]
mod tests;
