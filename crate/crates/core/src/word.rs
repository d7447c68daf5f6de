//! Finite words over small integer alphabets: periods, primitivity,
//! conjugation, two-word codes and `{u, v}` block parsing.

use std::fmt;
use std::str::FromStr;

use num_rational::Ratio;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// A letter of the sequence alphabet.
pub type Symbol = u32;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WordError {
    #[error("empty-word")]
    Empty,
    #[error("ambiguous-pair: {0} and {1} are not a prefix code")]
    AmbiguousPair(Word, Word),
    #[error("invalid symbol {0:?} in word literal")]
    BadSymbol(String),
    #[error("invalid pattern bit {0:?}")]
    BadPatternBit(char),
}

/// A finite word. The empty word is representable but most operations
/// reject it.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize)]
#[serde(into = "String", try_from = "String")]
pub struct Word(Vec<Symbol>);

impl Word {
    pub fn new(symbols: Vec<Symbol>) -> Self {
        Word(symbols)
    }

    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn symbols(&self) -> &[Symbol] {
        &self.0
    }

    pub fn into_symbols(self) -> Vec<Symbol> {
        self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        Word(v)
    }

    pub fn pow(&self, e: usize) -> Word {
        Word(self.0.repeat(e))
    }

    pub fn slice(&self, start: usize, end: usize) -> Word {
        Word(self.0[start..end].to_vec())
    }

    pub fn is_prefix_of(&self, other: &Word) -> bool {
        other.0.starts_with(&self.0)
    }

    pub fn is_suffix_of(&self, other: &Word) -> bool {
        other.0.ends_with(&self.0)
    }

    pub fn is_factor_of(&self, other: &Word) -> bool {
        self.is_empty() || other.0.windows(self.len()).any(|w| w == self.0.as_slice())
    }

    fn nonempty(&self) -> Result<(), WordError> {
        if self.is_empty() {
            Err(WordError::Empty)
        } else {
            Ok(())
        }
    }
}

impl From<Vec<Symbol>> for Word {
    fn from(v: Vec<Symbol>) -> Self {
        Word(v)
    }
}

impl From<&[Symbol]> for Word {
    fn from(v: &[Symbol]) -> Self {
        Word(v.to_vec())
    }
}

/// Symbols below 36 print as single base-36 characters; anything larger
/// switches the whole word to comma-separated decimals.
impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.iter().all(|&s| s < 36) {
            for &s in &self.0 {
                write!(f, "{}", char::from_digit(s, 36).unwrap())?;
            }
            Ok(())
        } else {
            let parts: Vec<String> = self.0.iter().map(|s| s.to_string()).collect();
            write!(f, "{}", parts.join(","))
        }
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "\"{self}\"")
    }
}

impl FromStr for Word {
    type Err = WordError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if s.contains(',') {
            s.split(',')
                .map(|p| {
                    p.trim()
                        .parse::<Symbol>()
                        .map_err(|_| WordError::BadSymbol(p.to_string()))
                })
                .collect::<Result<Vec<_>, _>>()
                .map(Word)
        } else {
            s.chars()
                .map(|c| {
                    c.to_digit(36)
                        .ok_or_else(|| WordError::BadSymbol(c.to_string()))
                })
                .collect::<Result<Vec<_>, _>>()
                .map(Word)
        }
    }
}

impl From<Word> for String {
    fn from(w: Word) -> String {
        w.to_string()
    }
}

impl TryFrom<String> for Word {
    type Error = WordError;
    fn try_from(s: String) -> Result<Self, Self::Error> {
        s.parse()
    }
}

/// Border array (KMP failure function): `border[i]` is the length of the
/// longest proper border of `w[..=i]`.
fn borders(w: &[Symbol]) -> Vec<usize> {
    let mut b = vec![0usize; w.len()];
    let mut k = 0;
    for i in 1..w.len() {
        while k > 0 && w[i] != w[k] {
            k = b[k - 1];
        }
        if w[i] == w[k] {
            k += 1;
        }
        b[i] = k;
    }
    b
}

/// Least period of a nonempty word.
pub fn period(w: &Word) -> Result<usize, WordError> {
    w.nonempty()?;
    Ok(w.len() - borders(&w.0)[w.len() - 1])
}

/// `|w| / period(w)` as an exact fraction.
pub fn exponent(w: &Word) -> Result<Ratio<u64>, WordError> {
    let p = period(w)?;
    Ok(Ratio::new(w.len() as u64, p as u64))
}

/// Returns `(root, e)` with `w = root^e` and `root` primitive.
pub fn primitive_root(w: &Word) -> Result<(Word, usize), WordError> {
    let p = period(w)?;
    if w.len().is_multiple_of(p) {
        Ok((w.slice(0, p), w.len() / p))
    } else {
        Ok((w.clone(), 1))
    }
}

pub fn is_primitive(w: &Word) -> Result<bool, WordError> {
    Ok(primitive_root(w)?.1 == 1)
}

pub fn commute(u: &Word, v: &Word) -> bool {
    u.concat(v) == v.concat(u)
}

/// Solution `u = (rs)^alpha r`, `d = rs` of the conjugation equation
/// `d u = u c`; then `c = s r`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConjugationSolution {
    pub r: Word,
    pub s: Word,
    pub alpha: usize,
}

impl ConjugationSolution {
    pub fn c(&self) -> Word {
        self.s.concat(&self.r)
    }
}

/// Solves `d u = u c` for `c`. Since `d = rs` has fixed length the
/// decomposition is unique; `r` is empty exactly when `|d|` divides `|u|`.
pub fn solve_conjugation(d: &Word, u: &Word) -> Result<Option<ConjugationSolution>, WordError> {
    d.nonempty()?;
    u.nonempty()?;
    let du = d.concat(u);
    if !u.is_prefix_of(&du) {
        return Ok(None);
    }
    let alpha = u.len() / d.len();
    let r = u.slice(alpha * d.len(), u.len());
    let s = d.slice(r.len(), d.len());
    Ok(Some(ConjugationSolution { r, s, alpha }))
}

/// Neither word is a prefix of the other.
pub fn is_prefix_code_pair(u: &Word, v: &Word) -> bool {
    !u.is_prefix_of(v) && !v.is_prefix_of(u)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Reduction {
    /// The inputs commute; both are powers of this primitive word.
    Single(Word),
    /// A generating pair of least total length. `a` is the first block of
    /// `u` in its `{a, b}` factorization.
    Pair(Word, Word),
}

/// Iterated prefix stripping: while one word is a prefix of the other,
/// replace the longer by its remainder. Terminates with a prefix-code pair
/// generating both inputs, or reports that the inputs commute.
pub fn strip_to_prefix_code(u: &Word, v: &Word) -> Result<Reduction, WordError> {
    u.nonempty()?;
    v.nonempty()?;
    if commute(u, v) {
        return Ok(Reduction::Single(primitive_root(u)?.0));
    }
    let (mut a, mut b) = (u.clone(), v.clone());
    loop {
        if a.is_prefix_of(&b) {
            b = b.slice(a.len(), b.len());
        } else if b.is_prefix_of(&a) {
            a = a.slice(b.len(), a.len());
        } else {
            return Ok(Reduction::Pair(a, b));
        }
    }
}

/// Membership of `w` in `{a, b}*` by dynamic programming over cut points.
pub(crate) fn in_star(w: &[Symbol], a: &[Symbol], b: &[Symbol]) -> bool {
    let n = w.len();
    let mut reach = vec![false; n + 1];
    reach[0] = true;
    for i in 0..n {
        if !reach[i] {
            continue;
        }
        for g in [a, b] {
            if !g.is_empty() && w[i..].starts_with(g) {
                reach[i + g.len()] = true;
            }
        }
    }
    reach[n]
}

/// Reduces `(u, v)` to a generating pair `(a, b)` of least total length
/// (`u, v ∈ {a, b}*`). Commuting inputs give their common primitive root.
///
/// In a least pair one generator is the first block of `u` (a prefix of
/// `u`), and the other starts at a multiple of the first generator's
/// length in `u` or `v`; the search enumerates exactly those candidates in
/// order of total length. A least pair is always a prefix code: if `a` were
/// a prefix of `b = a y`, the pair `(a, y)` would be shorter.
pub fn free_reduce(u: &Word, v: &Word) -> Result<Reduction, WordError> {
    u.nonempty()?;
    v.nonempty()?;
    if commute(u, v) {
        return Ok(Reduction::Single(primitive_root(u)?.0));
    }
    let words = [u.symbols(), v.symbols()];
    let mut best: Option<(usize, Word, Word)> = None;
    for la in 1..=u.len() {
        let a = &u.symbols()[..la];
        for w in words {
            // Largest j with a^j a prefix of w.
            let mut jmax = 0;
            while (jmax + 1) * la <= w.len() && &w[jmax * la..(jmax + 1) * la] == a {
                jmax += 1;
            }
            if jmax * la == w.len() {
                continue;
            }
            for j in 0..=jmax {
                let start = j * la;
                for end in start + 1..=w.len() {
                    let lb = end - start;
                    let size = la + lb;
                    if let Some((bs, _, _)) = &best {
                        if size >= *bs {
                            break;
                        }
                    }
                    let b = &w[start..end];
                    if in_star(u.symbols(), a, b) && in_star(v.symbols(), a, b) {
                        best = Some((size, Word::from(a), Word::from(b)));
                        break;
                    }
                }
            }
        }
    }
    let (_, a, b) = best.expect("the inputs themselves form a generating pair");
    Ok(Reduction::Pair(a, b))
}

/// The inputs are a least generating pair of themselves.
pub fn is_minimal_pair(u: &Word, v: &Word) -> bool {
    match free_reduce(u, v) {
        Ok(Reduction::Pair(a, b)) => a.len() + b.len() == u.len() + v.len(),
        _ => false,
    }
}

/// Factorization of `w` over a prefix-code pair, as a block sequence.
pub fn factorize_prefix_code(w: &Word, u: &Word, v: &Word) -> Option<Vec<Block>> {
    let mut out = Vec::new();
    let mut pos = 0;
    let s = w.symbols();
    while pos < s.len() {
        if s[pos..].starts_with(u.symbols()) {
            out.push(Block::U);
            pos += u.len();
        } else if s[pos..].starts_with(v.symbols()) {
            out.push(Block::V);
            pos += v.len();
        } else {
            return None;
        }
    }
    Some(out)
}

/// Block label in a `{u, v}` factorization.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Block {
    U,
    V,
}

/// Random access to a (possibly infinite) symbol stream.
pub trait SymbolSource {
    /// `None` past the end of a finite stream.
    fn symbol_at(&self, n: u64) -> Option<Symbol>;
}

impl SymbolSource for Word {
    fn symbol_at(&self, n: u64) -> Option<Symbol> {
        self.0.get(n as usize).copied()
    }
}

impl SymbolSource for [Symbol] {
    fn symbol_at(&self, n: u64) -> Option<Symbol> {
        self.get(n as usize).copied()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StopRule {
    Blocks(usize),
    VCount(usize),
    Length(u64),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ParseStatus {
    Hit,
    /// Neither word matches at this cut.
    Fail(u64),
    /// The stream ended before the stop rule fired.
    Exhausted,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseOutcome {
    pub blocks: Vec<Block>,
    pub consumed: u64,
    pub status: ParseStatus,
}

fn matches_at<S: SymbolSource + ?Sized>(stream: &S, pos: u64, w: &Word) -> Option<bool> {
    for (t, &c) in w.symbols().iter().enumerate() {
        match stream.symbol_at(pos + t as u64) {
            None => return None,
            Some(s) if s != c => return Some(false),
            _ => {}
        }
    }
    Some(true)
}

/// Deterministic left-to-right `{u, v}` factorization of a stream prefix.
pub fn greedy_parse<S: SymbolSource + ?Sized>(
    stream: &S,
    u: &Word,
    v: &Word,
    stop: StopRule,
) -> Result<ParseOutcome, WordError> {
    u.nonempty()?;
    v.nonempty()?;
    if !is_prefix_code_pair(u, v) {
        return Err(WordError::AmbiguousPair(u.clone(), v.clone()));
    }
    let mut blocks = Vec::new();
    let mut pos = 0u64;
    let mut vcount = 0usize;
    loop {
        let hit = match stop {
            StopRule::Blocks(n) => blocks.len() >= n,
            StopRule::VCount(n) => vcount >= n,
            StopRule::Length(n) => pos >= n,
        };
        if hit {
            return Ok(ParseOutcome {
                blocks,
                consumed: pos,
                status: ParseStatus::Hit,
            });
        }
        let mu = matches_at(stream, pos, u);
        let mv = matches_at(stream, pos, v);
        match (mu, mv) {
            (Some(true), _) => {
                blocks.push(Block::U);
                pos += u.len() as u64;
            }
            (_, Some(true)) => {
                blocks.push(Block::V);
                pos += v.len() as u64;
                vcount += 1;
            }
            (Some(false), Some(false)) => {
                return Ok(ParseOutcome {
                    blocks,
                    consumed: pos,
                    status: ParseStatus::Fail(pos),
                })
            }
            _ => {
                return Ok(ParseOutcome {
                    blocks,
                    consumed: pos,
                    status: ParseStatus::Exhausted,
                })
            }
        }
    }
}

/// A binary word `i_0 ... i_{m-1}` naming a sequence of `u_0`/`u_1` blocks.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FactorizationPattern(Vec<bool>);

impl FactorizationPattern {
    pub fn new(bits: Vec<bool>) -> Self {
        FactorizationPattern(bits)
    }

    /// Bits of `index` read most significant first, `len` of them.
    pub fn from_index(index: u64, len: usize) -> Self {
        FactorizationPattern(
            (0..len)
                .map(|t| (index >> (len - 1 - t)) & 1 == 1)
                .collect(),
        )
    }

    pub fn bits(&self) -> &[bool] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl fmt::Display for FactorizationPattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in &self.0 {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl FromStr for FactorizationPattern {
    type Err = WordError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        s.chars()
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                other => Err(WordError::BadPatternBit(other)),
            })
            .collect::<Result<Vec<_>, _>>()
            .map(FactorizationPattern)
    }
}

/// Substitutes `u` for every 0 and `v` for every 1.
pub fn build_pattern(p: &FactorizationPattern, u: &Word, v: &Word) -> Word {
    let mut out = Vec::new();
    for &b in p.bits() {
        out.extend_from_slice(if b { v.symbols() } else { u.symbols() });
    }
    Word(out)
}

/// No factor `U V^j U` or `V U^j V` with `j >= p`.
pub fn is_p_syndetic(blocks: &[Block], p: usize) -> bool {
    let mut i = 0;
    while i < blocks.len() {
        let b = blocks[i];
        let mut j = i;
        while j < blocks.len() && blocks[j] == b {
            j += 1;
        }
        let flanked = i > 0 && j < blocks.len();
        if flanked && j - i >= p {
            return false;
        }
        i = j;
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> Word {
        s.parse().unwrap()
    }

    #[test]
    fn periods() {
        assert_eq!(period(&w("entente")).unwrap(), 3);
        assert_eq!(period(&w("aaaa")).unwrap(), 1);
        assert_eq!(period(&w("abcab")).unwrap(), 3);
        assert_eq!(period(&Word::empty()), Err(WordError::Empty));
    }

    #[test]
    fn exponents() {
        assert_eq!(exponent(&w("entente")).unwrap(), Ratio::new(7, 3));
        assert_eq!(exponent(&w("aaaa")).unwrap(), Ratio::from_integer(4));
        assert_eq!(exponent(&w("abcab")).unwrap(), Ratio::new(5, 3));
        assert!(exponent(&Word::empty()).is_err());
    }

    #[test]
    fn roots() {
        assert_eq!(primitive_root(&w("abab")).unwrap(), (w("ab"), 2));
        assert_eq!(primitive_root(&w("aba")).unwrap(), (w("aba"), 1));
        assert_eq!(primitive_root(&w("a")).unwrap(), (w("a"), 1));
    }

    #[test]
    fn conjugation() {
        let sol = solve_conjugation(&w("ab"), &w("ababa")).unwrap().unwrap();
        assert_eq!(
            (sol.r.clone(), sol.s.clone(), sol.alpha),
            (w("a"), w("b"), 2)
        );
        assert_eq!(sol.c(), w("ba"));
        assert_eq!(w("ab").concat(&w("ababa")), w("ababa").concat(&sol.c()));

        let sol = solve_conjugation(&w("a"), &w("aaa")).unwrap().unwrap();
        assert_eq!((sol.r, sol.s, sol.alpha), (Word::empty(), w("a"), 3));

        assert_eq!(solve_conjugation(&w("b"), &w("a")).unwrap(), None);
    }

    #[test]
    fn reductions() {
        assert_eq!(
            free_reduce(&w("ab"), &w("abab")).unwrap(),
            Reduction::Single(w("ab"))
        );
        assert_eq!(
            free_reduce(&w("a"), &w("ab")).unwrap(),
            Reduction::Pair(w("a"), w("b"))
        );
        assert_eq!(
            free_reduce(&w("aba"), &w("ab")).unwrap(),
            Reduction::Pair(w("a"), w("b"))
        );
        assert!(free_reduce(&Word::empty(), &w("a")).is_err());
    }

    #[test]
    fn stripping_is_not_always_minimal() {
        // Neither word is a prefix of the other, so stripping stops at once,
        // yet the single letters generate both.
        assert_eq!(
            strip_to_prefix_code(&w("aab"), &w("ab")).unwrap(),
            Reduction::Pair(w("aab"), w("ab"))
        );
        assert_eq!(
            free_reduce(&w("aab"), &w("ab")).unwrap(),
            Reduction::Pair(w("a"), w("b"))
        );
    }

    #[test]
    fn prefix_codes() {
        assert!(is_prefix_code_pair(&w("01"), &w("10")));
        assert!(!is_prefix_code_pair(&w("0"), &w("01")));
        assert!(!is_prefix_code_pair(&w("ab"), &w("ab")));
    }

    #[test]
    fn greedy() {
        let out = greedy_parse(&w("01202001"), &w("01"), &w("20"), StopRule::Blocks(3)).unwrap();
        assert_eq!(out.blocks, vec![Block::U, Block::V, Block::V]);
        assert_eq!(out.status, ParseStatus::Hit);

        let out = greedy_parse(&w("0120"), &w("01"), &w("21"), StopRule::Blocks(10)).unwrap();
        assert_eq!(out.status, ParseStatus::Fail(2));
        assert_eq!(out.blocks, vec![Block::U]);

        let out = greedy_parse(&w("ababab"), &w("ab"), &w("cd"), StopRule::Length(6)).unwrap();
        assert_eq!(out.blocks, vec![Block::U; 3]);
        assert_eq!(out.status, ParseStatus::Hit);

        let out = greedy_parse(&w("abab"), &w("ab"), &w("cd"), StopRule::Blocks(5)).unwrap();
        assert_eq!(out.status, ParseStatus::Exhausted);

        let out = greedy_parse(&w("0101"), &w("01"), &w("10"), StopRule::VCount(1)).unwrap();
        assert_eq!(out.status, ParseStatus::Exhausted);

        assert!(matches!(
            greedy_parse(&w("aa"), &w("a"), &w("ab"), StopRule::Blocks(1)),
            Err(WordError::AmbiguousPair(_, _))
        ));
    }

    #[test]
    fn patterns() {
        let p: FactorizationPattern = "010".parse().unwrap();
        assert_eq!(build_pattern(&p, &w("ab"), &w("c")), w("abcab"));
        assert_eq!(
            build_pattern(&"1".parse().unwrap(), &w("ab"), &w("c")),
            w("c")
        );
        assert_eq!(
            build_pattern(&"0011".parse().unwrap(), &w("0"), &w("1")),
            w("0011")
        );
        assert_eq!(
            FactorizationPattern::from_index(0b0110, 4).to_string(),
            "0110"
        );
    }

    #[test]
    fn syndetic() {
        use Block::{U, V};
        assert!(!is_p_syndetic(&[U, V, V, V, U], 3));
        assert!(is_p_syndetic(&[U, V, V, U], 3));
        assert!(is_p_syndetic(&[V, U, U, U, U], 3));
    }

    #[test]
    fn display_roundtrip() {
        assert_eq!(w("entente").to_string(), "entente");
        assert_eq!(w("0120").symbols(), &[0, 1, 2, 0]);
        let big = Word::new(vec![40, 1]);
        assert_eq!(big.to_string(), "40,1");
        assert_eq!(big.to_string().parse::<Word>().unwrap(), big);
    }
}
