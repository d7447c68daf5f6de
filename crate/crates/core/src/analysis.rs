//! Global structural queries on an automatic sequence: constants, repetitions
//! and periodicity.

use std::collections::{BTreeSet, HashMap};

use num_bigint::BigUint;
use num_rational::Ratio;
use serde::Serialize;
use thiserror::Error;

use crate::automaton::{AutomatonError, Dfa, Dfao};
use crate::logic::{
    earliestfac, factoreq, period_f, prim, unbounded, unbounded_powers_formula, Compiler, Formula,
    LogicError, Term,
};
use crate::word::{Symbol, Word};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AnalysisError {
    #[error(transparent)]
    Logic(#[from] LogicError),
    #[error("empty word")]
    EmptyWord,
    #[error("periodic-under-u: the sequence is {0}^ω")]
    PeriodicUnderU(Word),
    #[error("internal inconsistency: {0}")]
    Inconsistent(String),
}

impl From<AutomatonError> for AnalysisError {
    fn from(e: AutomatonError) -> Self {
        AnalysisError::Logic(LogicError::Automaton(e))
    }
}

/// Constants bounding repetitions and first occurrences. `c` is the
/// appearance constant, `kappa = c + 1`, `b` the power bound and `p = b`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AnalysisConstants {
    #[serde(rename = "C")]
    pub c: BigUint,
    pub kappa: BigUint,
    #[serde(rename = "B")]
    pub b: BigUint,
    pub p: BigUint,
    /// States of the minimal automaton for the appearance function.
    pub appearance_states: usize,
    /// States of the minimal automaton for the power relation.
    pub power_states: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct UnboundedFactor {
    pub first_position: u64,
    pub length: u64,
    pub word: Word,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MaxExponent {
    Finite(Ratio<u64>),
    Unbounded,
    NotAFactor,
}

impl std::fmt::Display for MaxExponent {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            MaxExponent::Finite(e) => write!(f, "{e}"),
            MaxExponent::Unbounded => write!(f, "unbounded"),
            MaxExponent::NotAFactor => write!(f, "not-a-factor"),
        }
    }
}

fn assigned(w: &[(String, u64)], name: &str) -> u64 {
    w.iter()
        .find(|(v, _)| v == name)
        .map(|(_, x)| *x)
        .expect("variable in witness")
}

fn big_pow(k: u32, e: usize) -> BigUint {
    num_traits::pow::pow(BigUint::from(k), e)
}

/// Every factor of length `n` occurs in `x[0..m]`.
fn appears_within(n: Term, m: &str) -> Formula {
    Formula::forall(
        &["i"],
        Formula::exists(
            &["j"],
            Formula::leq(Term::var("j") + n.clone(), m) & factoreq("i", "j", n),
        ),
    )
}

fn appearance_formula(n: Term) -> Formula {
    appears_within(n.clone(), "m")
        & Formula::forall(
            &["mm"],
            Formula::implies(Formula::lt("mm", "m"), !appears_within(n, "mm")),
        )
}

/// Automaton over `(n, m)` for the appearance function: `m` is the least
/// length such that every factor of length `n` occurs in `x[0..m]`.
pub fn appearance_relation(c: &mut Compiler) -> Result<Dfa, AnalysisError> {
    Ok(c.compile(&appearance_formula(Term::var("n")))?
        .reorder(&["n".into(), "m".into()])?)
}

/// The least `m` such that every factor of length `n` occurs in `x[0..m]`.
pub fn appearance_value(c: &mut Compiler, n: u64) -> Result<u64, AnalysisError> {
    let w = c
        .witness(&appearance_formula(Term::Const(n)))?
        .ok_or_else(|| AnalysisError::Inconsistent("appearance function undefined".into()))?;
    Ok(assigned(&w, "m"))
}

/// Appearance constant `C = k^(r+1)` where `r` is the state count of the
/// appearance relation. An accepted pair `(n, m)` with `m > k^(r+1) n` has
/// at least `r + 1` more digits on the `m` track than on the `n` track; the
/// run then repeats a state while `n` reads zeros, and pumping that loop
/// yields a second `m` for the same `n`, contradicting functionality.
pub fn appearance_constant(c: &mut Compiler) -> Result<(BigUint, usize), AnalysisError> {
    let rel = appearance_relation(c)?;
    let r = rel.num_states();
    Ok((big_pow(c.sequence().base(), r + 1), r))
}

/// Power bound `B = k^r C`, where `r` is the state count of the automaton
/// for [`unbounded_powers_formula`]: any `y` with `y^B` a factor occurs with
/// unbounded exponent.
pub fn power_bound(
    c: &mut Compiler,
    appearance: &BigUint,
) -> Result<(BigUint, usize), AnalysisError> {
    let d = c.compile(&unbounded_powers_formula("i", "n", "p"))?;
    let r = d.num_states();
    Ok((big_pow(c.sequence().base(), r) * appearance, r))
}

pub fn analysis_constants(c: &mut Compiler) -> Result<AnalysisConstants, AnalysisError> {
    let (cc, appearance_states) = appearance_constant(c)?;
    let (b, power_states) = power_bound(c, &cc)?;
    Ok(AnalysisConstants {
        kappa: &cc + 1u32,
        c: cc,
        p: b.clone(),
        b,
        appearance_states,
        power_states,
    })
}

/// Primitive factors occurring with unbounded exponent, one per word, at its
/// first occurrence. Sorted by length, then position.
pub fn unbounded_primitive_factors(
    c: &mut Compiler,
    limit: usize,
) -> Result<Vec<UnboundedFactor>, AnalysisError> {
    let f = earliestfac("i", "i", "p") & prim("i", "p") & unbounded("i", "p");
    let d = c.compile(&f)?.reorder(&["i".into(), "p".into()])?;
    let pairs = match d.enumerate_accepted(limit) {
        Ok(p) => p,
        Err(AutomatonError::Infinite) => {
            return Err(AnalysisError::Inconsistent(
                "infinitely many unbounded primitive factors".into(),
            ))
        }
        Err(e) => return Err(e.into()),
    };
    let mut out: Vec<UnboundedFactor> = pairs
        .into_iter()
        .map(|t| UnboundedFactor {
            first_position: t[0],
            length: t[1],
            word: c.sequence().factor(t[0], t[1] as usize),
        })
        .collect();
    out.sort_by_key(|f| (f.length, f.first_position));
    Ok(out)
}

/// `x[i..i+|z|] = z` with `i` free.
pub fn occurrence_formula(var: &str, z: &Word) -> Formula {
    Formula::And(
        z.symbols()
            .iter()
            .enumerate()
            .map(|(t, &a)| Formula::seq_at(Term::var(var) + t as u64, a))
            .collect(),
    )
}

/// First occurrence of `z`, if any.
pub fn first_occurrence(c: &mut Compiler, z: &Word) -> Result<Option<u64>, AnalysisError> {
    if z.is_empty() {
        return Ok(Some(0));
    }
    Ok(c.witness(&occurrence_formula("i", z))?
        .map(|w| assigned(&w, "i")))
}

/// Largest `e` such that `z^e` (a fractional power) occurs in the sequence.
pub fn max_exponent(c: &mut Compiler, z: &Word) -> Result<MaxExponent, AnalysisError> {
    if z.is_empty() {
        return Err(AnalysisError::EmptyWord);
    }
    let Some(i) = first_occurrence(c, z)? else {
        return Ok(MaxExponent::NotAFactor);
    };
    let r = z.len() as u64;
    if c.decide(&unbounded(i, r))? {
        return Ok(MaxExponent::Unbounded);
    }
    // Runs of period r starting with an occurrence of z have lengths forming
    // an interval [r, len]; find its top.
    let run = |n: Term| Formula::exists(&["j"], factoreq(i, "j", r) & period_f("j", n, r));
    let top = run(Term::var("n")) & !run(Term::var("n") + 1u64);
    let w = c
        .witness(&top)?
        .ok_or_else(|| AnalysisError::Inconsistent("bounded runs without a longest one".into()))?;
    Ok(MaxExponent::Finite(Ratio::new(assigned(&w, "n"), r)))
}

/// Least `p >= 1` with `x[i+p] = x[i]` for all `i`.
pub fn is_purely_periodic(c: &mut Compiler) -> Result<Option<u64>, AnalysisError> {
    let f = Formula::leq(1u64, "p")
        & Formula::forall(&["i"], Formula::seq_eq(Term::var("i") + "p", "i"));
    Ok(c.witness(&f)?.map(|w| assigned(&w, "p")))
}

/// Least preperiod `c`, then least period `p` for it.
pub fn is_ultimately_periodic(c: &mut Compiler) -> Result<Option<(u64, u64)>, AnalysisError> {
    let from = |cv: Term| {
        Formula::leq(1u64, "p")
            & Formula::forall(
                &["i"],
                Formula::implies(
                    Formula::leq(cv, "i"),
                    Formula::seq_eq(Term::var("i") + "p", "i"),
                ),
            )
    };
    let Some(w) = c.witness(&Formula::exists(&["p"], from(Term::var("c"))))? else {
        return Ok(None);
    };
    let pre = assigned(&w, "c");
    let w = c
        .witness(&from(Term::Const(pre)))?
        .ok_or_else(|| AnalysisError::Inconsistent("preperiod without period".into()))?;
    Ok(Some((pre, assigned(&w, "p"))))
}

pub fn occurring_letters(c: &mut Compiler) -> Result<BTreeSet<Symbol>, AnalysisError> {
    let mut out = BTreeSet::new();
    for &a in c.sequence().alphabet().to_vec().iter() {
        if c.decide(&Formula::exists(&["i"], Formula::seq_at("i", a)))? {
            out.insert(a);
        }
    }
    Ok(out)
}

/// The sequence `n -> x[n + s]`, as a minimal DFAO.
pub fn shift_sequence(c: &mut Compiler, s: u64) -> Result<Dfao, AnalysisError> {
    let seq = c.sequence().clone();
    let alphabet = seq.alphabet().to_vec();
    let mut parts: Vec<(Symbol, Dfa)> = Vec::new();
    for &a in &alphabet {
        let d = c.compile(&Formula::seq_at(Term::var("n") + s, a))?;
        let d = d.reorder(&["n".into()])?;
        if !d.is_empty() {
            parts.push((a, d));
        }
    }
    let k = seq.base();
    let mut index: HashMap<Vec<u32>, u32> = HashMap::new();
    let mut states: Vec<Vec<u32>> = vec![vec![0; parts.len()]];
    index.insert(states[0].clone(), 0);
    let mut trans = Vec::new();
    let mut output = Vec::new();
    let mut head = 0;
    while head < states.len() {
        let cur = states[head].clone();
        head += 1;
        let hits: Vec<Symbol> = parts
            .iter()
            .zip(&cur)
            .filter(|((_, d), &q)| d.is_accepting(q))
            .map(|((a, _), _)| *a)
            .collect();
        match hits.as_slice() {
            [a] => output.push(*a),
            // Tuples never reached by a number may accept nothing.
            [] => output.push(alphabet[0]),
            _ => {
                return Err(AnalysisError::Inconsistent(
                    "shifted letter automata overlap".into(),
                ))
            }
        }
        for digit in 0..k {
            let nxt: Vec<u32> = parts
                .iter()
                .zip(&cur)
                .map(|((_, d), &q)| d.next(q, digit))
                .collect();
            let id = match index.get(&nxt) {
                Some(&id) => id,
                None => {
                    let id = states.len() as u32;
                    index.insert(nxt.clone(), id);
                    states.push(nxt);
                    id
                }
            };
            trans.push(id);
        }
    }
    let m = Dfao::new(k, alphabet, 0, trans, output)
        .map_err(|e| AnalysisError::Inconsistent(format!("shifted sequence: {e}")))?;
    Ok(m.minimize())
}

/// Largest `i` with `u^i` a prefix of the sequence, and the sequence with
/// that prefix removed.
pub fn strip_max_power_prefix(c: &mut Compiler, u: &Word) -> Result<(u64, Dfao), AnalysisError> {
    if u.is_empty() {
        return Err(AnalysisError::EmptyWord);
    }
    let d = u.len() as u64;
    let starts = occurrence_formula("i", u) & Formula::eq("i", 0u64);
    if !c.decide(&Formula::exists(&["i"], starts))? {
        return Ok((0, c.sequence().clone()));
    }
    if c.decide(&Formula::forall(
        &["i"],
        Formula::seq_eq(Term::var("i") + d, "i"),
    ))? {
        return Err(AnalysisError::PeriodicUnderU(u.clone()));
    }
    let top = period_f(0u64, "n", d) & !period_f(0u64, Term::var("n") + 1u64, d);
    let w = c.witness(&top)?.ok_or_else(|| {
        AnalysisError::Inconsistent("aperiodic prefix without a longest run".into())
    })?;
    let i_max = assigned(&w, "n") / d;
    Ok((i_max, shift_sequence(c, i_max * d)?))
}

/// Length of the longest prefix of the sequence that is a factor of `u^ω`.
pub fn longest_prefix_in_powers(c: &mut Compiler, u: &Word) -> Result<Option<u64>, AnalysisError> {
    if u.is_empty() {
        return Err(AnalysisError::EmptyWord);
    }
    let d = u.len();
    let uu = u.concat(u);
    let head = c.sequence().prefix(d);
    // Short prefixes: scan directly.
    let short = (0..=d)
        .rev()
        .find(|&l| head.slice(0, l).is_factor_of(&uu))
        .unwrap_or(0);
    if short < d {
        return Ok(Some(short as u64));
    }
    if c.decide(&Formula::forall(
        &["i"],
        Formula::seq_eq(Term::var("i") + d as u64, "i"),
    ))? {
        return Ok(None);
    }
    let top = period_f(0u64, "n", d as u64) & !period_f(0u64, Term::var("n") + 1u64, d as u64);
    let w = c.witness(&top)?.ok_or_else(|| {
        AnalysisError::Inconsistent("aperiodic prefix without a longest run".into())
    })?;
    Ok(Some(assigned(&w, "n")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automaton::Limits;
    use crate::fixtures;

    fn comp(m: &Dfao) -> Compiler<'_> {
        Compiler::new(m, Limits::default())
    }

    /// `A(n)` from a long prefix: largest first occurrence end over factors.
    fn brute_a(x: &[Symbol], n: usize) -> usize {
        let mut seen = std::collections::HashSet::new();
        let mut best = n;
        for i in 0..=x.len() - n {
            if seen.insert(&x[i..i + n]) {
                best = i + n;
            }
        }
        best
    }

    #[test]
    fn appearance_relation_matches_prefix_scan() {
        for (name, m) in fixtures::all() {
            let x = m.prefix(1 << 14).into_symbols();
            let mut c = comp(&m);
            let rel = appearance_relation(&mut c).unwrap();
            for n in 0..=24u64 {
                let a = brute_a(&x, n as usize) as u64;
                assert!(rel.accepts(&[n, a]), "{name}: A({n}) = {a}");
                if n < 6 {
                    assert_eq!(appearance_value(&mut c, n).unwrap(), a, "{name}");
                }
            }
        }
    }

    #[test]
    fn constants_are_consistent() {
        let m = fixtures::thue_morse();
        let mut c = comp(&m);
        let k = analysis_constants(&mut c).unwrap();
        assert_eq!(k.kappa, &k.c + 1u32);
        assert_eq!(k.p, k.b);
        assert_eq!(k.b, big_pow(2, k.power_states) * &k.c);
        assert_eq!(k.c, big_pow(2, k.appearance_states + 1));
    }

    #[test]
    fn max_exponent_examples() {
        let tm = fixtures::thue_morse();
        let mut c = comp(&tm);
        let w = |s: &str| s.parse::<Word>().unwrap();
        assert_eq!(
            max_exponent(&mut c, &w("0")).unwrap(),
            MaxExponent::Finite(Ratio::from_integer(2))
        );
        assert_eq!(
            max_exponent(&mut c, &w("00")).unwrap(),
            MaxExponent::Finite(Ratio::from_integer(1))
        );
        // Overlap-free: 01010 never occurs, 0101 does.
        assert_eq!(
            max_exponent(&mut c, &w("01")).unwrap(),
            MaxExponent::Finite(Ratio::from_integer(2))
        );
        assert_eq!(
            max_exponent(&mut c, &w("011")).unwrap(),
            MaxExponent::Finite(Ratio::new(5, 3))
        );
        assert_eq!(
            max_exponent(&mut c, &w("000")).unwrap(),
            MaxExponent::NotAFactor
        );
        let p2 = fixtures::pow2_char();
        let mut c = comp(&p2);
        assert_eq!(
            max_exponent(&mut c, &w("0")).unwrap(),
            MaxExponent::Unbounded
        );
    }

    #[test]
    fn unbounded_factor_sets() {
        let tm = fixtures::thue_morse();
        assert!(unbounded_primitive_factors(&mut comp(&tm), 100)
            .unwrap()
            .is_empty());
        let p2 = fixtures::pow2_char();
        let got = unbounded_primitive_factors(&mut comp(&p2), 100).unwrap();
        assert_eq!(
            got.iter().map(|f| f.word.to_string()).collect::<Vec<_>>(),
            vec!["0"]
        );
        let m3 = fixtures::mod3();
        let got = unbounded_primitive_factors(&mut comp(&m3), 100).unwrap();
        let words: Vec<String> = got.iter().map(|f| f.word.to_string()).collect();
        assert_eq!(words, vec!["012", "120", "201"]);
    }

    #[test]
    fn periodicity() {
        let m3 = fixtures::mod3();
        assert_eq!(is_purely_periodic(&mut comp(&m3)).unwrap(), Some(3));
        let tm = fixtures::thue_morse();
        assert_eq!(is_purely_periodic(&mut comp(&tm)).unwrap(), None);
        assert_eq!(is_ultimately_periodic(&mut comp(&tm)).unwrap(), None);
        // 1 0^ω.
        let one_zeros = Dfao::new(2, vec![0, 1], 0, vec![0, 1, 1, 1], vec![1, 0]).unwrap();
        assert_eq!(one_zeros.prefix(4).to_string(), "1000");
        assert_eq!(
            is_ultimately_periodic(&mut comp(&one_zeros)).unwrap(),
            Some((1, 1))
        );
        assert_eq!(is_purely_periodic(&mut comp(&one_zeros)).unwrap(), None);
    }

    #[test]
    fn letters_and_shifts() {
        let m3 = fixtures::mod3();
        assert_eq!(
            occurring_letters(&mut comp(&m3)).unwrap(),
            BTreeSet::from([0, 1, 2])
        );
        for (name, m) in fixtures::all() {
            let mut c = comp(&m);
            for s in [1u64, 2, 5, 13] {
                let sh = shift_sequence(&mut c, s).unwrap();
                for n in 0..(1u64 << 12) {
                    assert_eq!(sh.eval(n), m.eval(n + s), "{name} shift {s} at {n}");
                }
            }
        }
    }

    #[test]
    fn strip_prefix() {
        let t = fixtures::ternary_tm();
        let (i, sh) = strip_max_power_prefix(&mut comp(&t), &"01".parse().unwrap()).unwrap();
        assert_eq!(i, 1);
        assert_eq!(sh.prefix(4).to_string(), "2020");
        let m3 = fixtures::mod3();
        let err = strip_max_power_prefix(&mut comp(&m3), &"012".parse().unwrap()).unwrap_err();
        assert!(matches!(err, AnalysisError::PeriodicUnderU(_)));
        let (i, _) = strip_max_power_prefix(&mut comp(&m3), &"1".parse().unwrap()).unwrap();
        assert_eq!(i, 0);
    }

    #[test]
    fn longest_prefix_in_powers_examples() {
        let t = fixtures::ternary_tm();
        let mut c = comp(&t);
        // x = 0120 2001 ...; "01" powers contain 010..., so the prefix "01" fits, "012" does not.
        assert_eq!(
            longest_prefix_in_powers(&mut c, &"01".parse().unwrap()).unwrap(),
            Some(2)
        );
        assert_eq!(
            longest_prefix_in_powers(&mut c, &"201".parse().unwrap()).unwrap(),
            Some(4)
        );
        let m3 = fixtures::mod3();
        assert_eq!(
            longest_prefix_in_powers(&mut comp(&m3), &"120".parse().unwrap()).unwrap(),
            None
        );
    }
}
