//! Named predicates over factors of the sequence.
//!
//! All factor predicates use half-open lengths: `factoreq(i, j, n)` compares
//! `x[i..i+n]` with `x[j..j+n]`, and is true for `n = 0`.

use std::sync::{Arc, OnceLock};

use super::{Formula, Predicate, Term};
use crate::word::FactorizationPattern;

fn v(name: &str) -> Term {
    Term::var(name)
}

fn cached(cell: &'static OnceLock<Arc<Predicate>>, make: fn() -> Arc<Predicate>) -> Arc<Predicate> {
    cell.get_or_init(make).clone()
}

fn factoreq_pred() -> Arc<Predicate> {
    static P: OnceLock<Arc<Predicate>> = OnceLock::new();
    cached(&P, || {
        Predicate::new(
            "factoreq",
            &["i", "j", "n"],
            Formula::forall(
                &["t"],
                Formula::implies(
                    Formula::lt("t", "n"),
                    Formula::seq_eq(v("i") + "t", v("j") + "t"),
                ),
            ),
        )
    })
}

/// `x[i..i+n] = x[j..j+n]`.
pub fn factoreq(i: impl Into<Term>, j: impl Into<Term>, n: impl Into<Term>) -> Formula {
    Formula::apply(&factoreq_pred(), vec![i.into(), j.into(), n.into()])
}

fn period_pred() -> Arc<Predicate> {
    static P: OnceLock<Arc<Predicate>> = OnceLock::new();
    cached(&P, || {
        Predicate::new(
            "period",
            &["i", "n", "p"],
            Formula::exists(
                &["q"],
                Formula::eq(v("q") + "p", "n") & factoreq("i", v("i") + "p", "q"),
            ),
        )
    })
}

/// `x[i..i+n]` has period `p`, with `p <= n`.
pub fn period_f(i: impl Into<Term>, n: impl Into<Term>, p: impl Into<Term>) -> Formula {
    Formula::apply(&period_pred(), vec![i.into(), n.into(), p.into()])
}

fn match_pred() -> Arc<Predicate> {
    static P: OnceLock<Arc<Predicate>> = OnceLock::new();
    cached(&P, || {
        Predicate::new(
            "match",
            &["i", "j", "m", "r"],
            factoreq("i", "j", "r") & factoreq("j", v("j") + "r", "m"),
        )
    })
}

/// `x[j..j+m+r]` is a prefix of `z^ω` for `z = x[i..i+r]`.
pub fn match_f(
    i: impl Into<Term>,
    j: impl Into<Term>,
    m: impl Into<Term>,
    r: impl Into<Term>,
) -> Formula {
    Formula::apply(&match_pred(), vec![i.into(), j.into(), m.into(), r.into()])
}

fn earliestfac_pred() -> Arc<Predicate> {
    static P: OnceLock<Arc<Predicate>> = OnceLock::new();
    cached(&P, || {
        Predicate::new(
            "earliestfac",
            &["i", "j", "n"],
            factoreq("i", "j", "n")
                & Formula::forall(
                    &["t"],
                    Formula::implies(factoreq("t", "j", "n"), Formula::leq("i", "t")),
                ),
        )
    })
}

/// `i` is the first occurrence of `x[j..j+n]`.
pub fn earliestfac(i: impl Into<Term>, j: impl Into<Term>, n: impl Into<Term>) -> Formula {
    Formula::apply(&earliestfac_pred(), vec![i.into(), j.into(), n.into()])
}

fn prefx_pred() -> Arc<Predicate> {
    static P: OnceLock<Arc<Predicate>> = OnceLock::new();
    cached(&P, || {
        Predicate::new(
            "prefx",
            &["i", "j", "x", "y"],
            Formula::leq("j", "y") & factoreq("i", "x", "j"),
        )
    })
}

/// `x[i..i+j]` is a prefix of `x[x..x+y]`.
pub fn prefx(
    i: impl Into<Term>,
    j: impl Into<Term>,
    x: impl Into<Term>,
    y: impl Into<Term>,
) -> Formula {
    Formula::apply(&prefx_pred(), vec![i.into(), j.into(), x.into(), y.into()])
}

fn suffx_pred() -> Arc<Predicate> {
    static P: OnceLock<Arc<Predicate>> = OnceLock::new();
    cached(&P, || {
        Predicate::new(
            "suffx",
            &["i", "j", "x", "y"],
            Formula::leq("j", "y")
                & Formula::exists(
                    &["s"],
                    Formula::eq(v("s") + "j", v("x") + "y") & factoreq("i", "s", "j"),
                ),
        )
    })
}

/// `x[i..i+j]` is a suffix of `x[x..x+y]`.
pub fn suffx(
    i: impl Into<Term>,
    j: impl Into<Term>,
    x: impl Into<Term>,
    y: impl Into<Term>,
) -> Formula {
    Formula::apply(&suffx_pred(), vec![i.into(), j.into(), x.into(), y.into()])
}

fn prim_pred() -> Arc<Predicate> {
    static P: OnceLock<Arc<Predicate>> = OnceLock::new();
    cached(&P, || {
        // A nonempty word is primitive iff it differs from each of its
        // nontrivial rotations.
        let rotation = Formula::exists(
            &["j", "a"],
            Formula::lt(0u64, "j")
                & Formula::lt("j", "n")
                & Formula::eq(v("a") + "j", "n")
                & factoreq("i", v("i") + "j", "a")
                & factoreq("i", v("i") + "a", "j"),
        );
        Predicate::new("prim", &["i", "n"], Formula::lt(0u64, "n") & !rotation)
    })
}

/// `x[i..i+n]` is nonempty and primitive.
pub fn prim(i: impl Into<Term>, n: impl Into<Term>) -> Formula {
    Formula::apply(&prim_pred(), vec![i.into(), n.into()])
}

fn unbounded_pred() -> Arc<Predicate> {
    static P: OnceLock<Arc<Predicate>> = OnceLock::new();
    cached(&P, || {
        Predicate::new(
            "unbounded",
            &["i", "r"],
            Formula::lt(0u64, "r")
                & Formula::forall(
                    &["m"],
                    Formula::exists(
                        &["j", "n"],
                        Formula::lt("m", "n") & factoreq("i", "j", "r") & period_f("j", "n", "r"),
                    ),
                ),
        )
    })
}

/// `x[i..i+r]` is nonempty and occurs with unbounded exponent.
pub fn unbounded(i: impl Into<Term>, r: impl Into<Term>) -> Formula {
    Formula::apply(&unbounded_pred(), vec![i.into(), r.into()])
}

fn unbounded_powers_pred() -> Arc<Predicate> {
    static P: OnceLock<Arc<Predicate>> = OnceLock::new();
    cached(&P, || {
        Predicate::new(
            "unbounded_powers",
            &["i", "n", "p"],
            Formula::leq(1u64, "p")
                & Formula::exists(&["j"], earliestfac("i", "j", "p") & period_f("j", "n", "p")),
        )
    })
}

/// `i` is the first occurrence of `y = x[i..i+p]`, `p >= 1`, and some run
/// of length `n` and period `p` starts with `y`.
pub fn unbounded_powers_formula(
    i: impl Into<Term>,
    n: impl Into<Term>,
    p: impl Into<Term>,
) -> Formula {
    Formula::apply(&unbounded_powers_pred(), vec![i.into(), n.into(), p.into()])
}

/// Free variable `r`: there are `v = x[0..r]` with `r >= min_len`, not
/// having `u = x[i..i+d]` as a prefix or suffix, and `p_1, ..., p_blocks`
/// with `v u^{p_1} v u^{p_2} ... v u^{p_blocks}` a prefix of `x`.
///
/// The blocks are chained through start positions rather than exponent
/// sums: `a_t` is where the `t`-th run of `u` starts, `e_t` its length.
pub fn setup_formula(i: u64, d: u64, blocks: u64, min_len: u64) -> Formula {
    assert!(
        d >= 1 && blocks >= 1,
        "setup_formula needs d >= 1 and at least one block"
    );
    // The final run may be empty, so only runs 1..blocks-1 and the v's that
    // follow them constrain x. Built innermost first.
    let mut inner: Option<Formula> = None;
    for t in (1..blocks).rev() {
        let a = format!("a{t}");
        let e = format!("e{t}");
        let q = format!("q{t}");
        let run = Formula::exists(&[&q], Formula::eq(e.as_str(), Term::mul(d, &q)))
            & (Formula::eq(e.as_str(), 0u64)
                | (factoreq(i, a.as_str(), d) & period_f(a.as_str(), e.as_str(), d)));
        let mut body = run & factoreq(0u64, v(&a) + e.as_str(), "r");
        if let Some(next_block) = inner.take() {
            let next = format!("a{}", t + 1);
            body = body
                & Formula::exists(
                    &[&next],
                    Formula::eq(next.as_str(), v(&a) + e.as_str() + "r") & next_block,
                );
        }
        inner = Some(Formula::exists(&[&e], body));
    }
    let chain = match inner {
        Some(first) => Formula::exists(&["a1"], Formula::eq("a1", "r") & first),
        None => Formula::Bool(true),
    };
    Formula::leq(min_len, "r") & !prefx(i, d, 0u64, "r") & !suffx(i, d, 0u64, "r") & chain
}

/// Constraint placed on both unknown words of the pattern formula.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PowerFreedom {
    /// No constraint.
    None,
    /// `w^p` is not a factor of `x`.
    Exponent(u64),
    /// `w` does not occur with unbounded exponent.
    NotUnbounded,
}

fn power_free(pos: &str, len: &str, pf: PowerFreedom) -> Formula {
    match pf {
        PowerFreedom::None => Formula::Bool(true),
        PowerFreedom::Exponent(p) => !Formula::exists(
            &["jp"],
            factoreq(pos, "jp", len) & period_f("jp", Term::mul(p, len), len),
        ),
        PowerFreedom::NotUnbounded => !unbounded(pos, len),
    }
}

/// Free variables `i, j, r, s`: with `u_0 = x[i..i+r]`, `u_1 = x[j..j+s]`
/// both nonempty, neither a prefix or suffix of the other, both satisfying
/// `pf`, the word `u_{b_0} u_{b_1} ... u_{b_{m-1}}` is a prefix of `x`.
///
/// Block `t` starts at `a_t r + b_t s`, where `a_t` and `b_t` count the
/// zeros and ones before bit `t`.
pub fn setup2_body(pattern: &FactorizationPattern, pf: PowerFreedom) -> Formula {
    let mut parts = vec![
        Formula::lt(0u64, "r"),
        Formula::lt(0u64, "s"),
        !prefx("i", "r", "j", "s"),
        !suffx("i", "r", "j", "s"),
        !prefx("j", "s", "i", "r"),
        !suffx("j", "s", "i", "r"),
    ];
    let (mut zeros, mut ones) = (0u64, 0u64);
    for &bit in pattern.bits() {
        let pos = match (zeros, ones) {
            (0, 0) => Term::Const(0),
            (a, 0) => Term::mul(a, "r"),
            (0, b) => Term::mul(b, "s"),
            (a, b) => Term::mul(a, "r") + Term::mul(b, "s"),
        };
        if bit {
            parts.push(factoreq("j", pos, "s"));
            ones += 1;
        } else {
            parts.push(factoreq("i", pos, "r"));
            zeros += 1;
        }
    }
    parts.push(power_free("i", "r", pf));
    parts.push(power_free("j", "s", pf));
    Formula::And(parts)
}

/// Sentence: `setup2_body` is satisfiable.
pub fn setup2_formula(pattern: &FactorizationPattern, pf: PowerFreedom) -> Formula {
    Formula::exists(&["i", "j", "r", "s"], setup2_body(pattern, pf))
}
