//! Brute-force ground truth on finite prefixes.
//!
//! Everything here works on materialized prefixes and is evidence, not
//! proof: an oracle can refute a claim about the infinite sequence but never
//! confirm an unboundedly quantified one.

use std::collections::{BTreeSet, HashMap, HashSet};

use num_rational::Ratio;
use serde::Serialize;

use crate::automaton::Dfao;
use crate::word::{is_minimal_pair, Symbol, Word};

/// The first `len` symbols of a sequence.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrefixView {
    symbols: Vec<Symbol>,
}

impl PrefixView {
    pub fn new(m: &Dfao, len: usize) -> Self {
        PrefixView {
            symbols: m.prefix(len).into_symbols(),
        }
    }

    pub fn from_symbols(symbols: Vec<Symbol>) -> Self {
        PrefixView { symbols }
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn symbols(&self) -> &[Symbol] {
        &self.symbols
    }

    pub fn word(&self) -> Word {
        Word::from(self.symbols.as_slice())
    }
}

/// `ok[i]`: `w[i..]` lies in `{u, v}*`.
fn suffix_table(w: &[Symbol], u: &[Symbol], v: &[Symbol]) -> Vec<bool> {
    let n = w.len();
    let mut ok = vec![false; n + 1];
    ok[n] = true;
    for i in (0..n).rev() {
        ok[i] = [u, v]
            .iter()
            .any(|g| w[i..].starts_with(g) && ok[i + g.len()]);
    }
    ok
}

/// Cut positions of a factorization of `w` over `{u, v}`, preferring `u`
/// at each cut, or `None` when `w ∉ {u, v}*`.
pub fn dp_factorize(w: &Word, u: &Word, v: &Word) -> Option<Vec<usize>> {
    assert!(
        !u.is_empty() && !v.is_empty(),
        "dp_factorize needs nonempty words"
    );
    let (s, us, vs) = (w.symbols(), u.symbols(), v.symbols());
    let ok = suffix_table(s, us, vs);
    if !ok[0] {
        return None;
    }
    let mut cuts = vec![0];
    let mut i = 0;
    while i < s.len() {
        i += if s[i..].starts_with(us) && ok[i + us.len()] {
            us.len()
        } else {
            vs.len()
        };
        cuts.push(i);
    }
    Some(cuts)
}

/// `w = f r` with `f ∈ {u, v}*` and `r` a proper prefix of `u` or `v`.
pub fn covers_prefix(w: &[Symbol], u: &[Symbol], v: &[Symbol]) -> bool {
    let n = w.len();
    let mut reach = vec![false; n + 1];
    reach[0] = true;
    for i in 0..=n {
        if !reach[i] {
            continue;
        }
        let rest = &w[i..];
        if [u, v]
            .iter()
            .any(|g| rest.len() < g.len() && g.starts_with(rest))
        {
            return true;
        }
        for g in [u, v] {
            if rest.starts_with(g) {
                reach[i + g.len()] = true;
            }
        }
    }
    false
}

/// Distinct factors of length `len`, sorted.
pub fn distinct_factors(prefix: &[Symbol], len: usize) -> Vec<Word> {
    if len > prefix.len() {
        return Vec::new();
    }
    let set: BTreeSet<&[Symbol]> = prefix.windows(len).collect();
    set.into_iter().map(Word::from).collect()
}

/// Pairs `(u, v)` with `u` a prefix and `v` a factor of the prefix,
/// `u ≠ v`, `|u| + |v| <= max_total_len`, such that the prefix factors over
/// `{u, v}` up to a residual that is a proper prefix of `u` or `v`. Sorted
/// by total length, then `|u|`, then lexicographically.
pub fn search_pairs(prefix: &PrefixView, max_total_len: usize) -> Vec<(Word, Word)> {
    let s = prefix.symbols();
    let mut out = Vec::new();
    for total in 2..=max_total_len {
        for lu in 1..total {
            if lu > s.len() {
                break;
            }
            let u = &s[..lu];
            for v in distinct_factors(s, total - lu) {
                if v.symbols() != u && covers_prefix(s, u, v.symbols()) {
                    out.push((Word::from(u), v));
                }
            }
        }
    }
    out
}

/// Largest end of a first occurrence over all length-`n` factors of the
/// prefix.
pub fn brute_appearance(prefix: &PrefixView, n: usize) -> usize {
    let s = prefix.symbols();
    let mut seen = HashSet::new();
    let mut best = 0;
    if n > s.len() {
        return 0;
    }
    for i in 0..=s.len() - n {
        if seen.insert(&s[i..i + n]) {
            best = i + n;
        }
    }
    best
}

/// Largest `e` with a factor of the prefix of period `|z|` and length
/// `e |z|` starting with `z`, or `None` when `z` does not occur.
pub fn brute_max_exponent(prefix: &PrefixView, z: &Word) -> Option<Ratio<u64>> {
    let (s, zs) = (prefix.symbols(), z.symbols());
    let r = zs.len();
    assert!(r > 0, "brute_max_exponent needs a nonempty word");
    let mut best = None;
    for i in 0..s.len().saturating_sub(r - 1) {
        if &s[i..i + r] != zs {
            continue;
        }
        let mut n = r;
        while i + n < s.len() && s[i + n] == s[i + n - r] {
            n += 1;
        }
        best = best.max(Some(n));
    }
    best.map(|n| Ratio::new(n as u64, r as u64))
}

/// All words of length `len` over `0..alphabet_size`, lexicographically.
pub fn all_words(alphabet_size: u32, len: usize) -> Vec<Word> {
    let mut out = vec![Vec::new()];
    for _ in 0..len {
        out = out
            .into_iter()
            .flat_map(|w: Vec<Symbol>| {
                (0..alphabet_size).map(move |a| {
                    let mut w = w.clone();
                    w.push(a);
                    w
                })
            })
            .collect();
    }
    out.into_iter().map(Word::new).collect()
}

/// Ordered minimal pairs `(u, v)` with `|u| + |v| <= max_total`, in order
/// of total length, then lexicographically.
pub fn minimal_pairs(alphabet_size: u32, max_total: usize) -> Vec<(Word, Word)> {
    let mut out = Vec::new();
    for total in 2..=max_total {
        for lu in 1..total {
            for u in all_words(alphabet_size, lu) {
                for v in all_words(alphabet_size, total - lu) {
                    if is_minimal_pair(&u, &v) {
                        out.push((u.clone(), v));
                    }
                }
            }
        }
    }
    out
}

/// Letters of the pattern alphabet: `x ↦ u`, `y ↦ v`.
const X: u8 = 0;
const Y: u8 = 1;

fn sigma(w: &[u8], u: &Word, v: &Word) -> Word {
    let mut out = Vec::new();
    for &c in w {
        out.extend_from_slice(if c == X { u.symbols() } else { v.symbols() });
    }
    Word::new(out)
}

fn pattern_string(w: &[u8]) -> String {
    w.iter().map(|&c| if c == X { 'x' } else { 'y' }).collect()
}

/// Word `σ(w) z` that is a factor of some element of `{u, v}^ω`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CombWitness {
    pub u: Word,
    pub v: Word,
    pub w: String,
    pub z: Word,
}

/// Reader for factors of `{u, v}^ω`: a set of positions inside the blocks,
/// as a bitmask over `(block, offset)` pairs.
struct FactorReader {
    blocks: [Vec<Symbol>; 2],
    offset: [usize; 2],
}

impl FactorReader {
    fn new(u: &Word, v: &Word) -> Self {
        FactorReader {
            blocks: [u.symbols().to_vec(), v.symbols().to_vec()],
            offset: [0, u.len()],
        }
    }

    fn full(&self) -> u64 {
        let n = self.blocks[0].len() + self.blocks[1].len();
        (1u64 << n) - 1
    }

    fn step(&self, set: u64, a: Symbol) -> u64 {
        let mut out = 0u64;
        let mut starts = false;
        for b in 0..2 {
            let w = &self.blocks[b];
            for o in 0..w.len() {
                if set >> (self.offset[b] + o) & 1 == 1 && w[o] == a {
                    if o + 1 == w.len() {
                        starts = true;
                    } else {
                        out |= 1 << (self.offset[b] + o + 1);
                    }
                }
            }
        }
        if starts {
            out |= 1 << self.offset[0] | 1 << self.offset[1];
        }
        out
    }

    fn read(&self, mut set: u64, w: &[Symbol]) -> u64 {
        for &a in w {
            set = self.step(set, a);
            if set == 0 {
                break;
            }
        }
        set
    }
}

/// Exhaustive search for a failure of the combinatorial proposition: a
/// minimal pair `(u, v)`, a pattern `w` over `{x, y}` with at least five
/// occurrences of `xy` and `|w| <= max_w_len`, and a word `z` of length
/// `max(|u|, |v|)` without `u` or `v` as a prefix, such that `σ(w) z` is a
/// factor of a word in `{u, v}^ω`.
pub fn search_comb_counterexample(
    max_uv_len: usize,
    max_w_len: usize,
    alphabet_size: u32,
) -> Option<CombWitness> {
    comb_search(max_uv_len, max_w_len, alphabet_size, 5)
}

fn comb_search(
    max_uv_len: usize,
    max_w_len: usize,
    alphabet_size: u32,
    min_xy: usize,
) -> Option<CombWitness> {
    assert!(
        max_uv_len <= 60,
        "pair length bound too large for the bitmask reader"
    );
    for (u, v) in minimal_pairs(alphabet_size, max_uv_len) {
        let reader = FactorReader::new(&u, &v);
        let zl = u.len().max(v.len());
        let zs: Vec<Word> = all_words(alphabet_size, zl)
            .into_iter()
            .filter(|z| !u.is_prefix_of(z) && !v.is_prefix_of(z))
            .collect();
        if zs.is_empty() {
            continue;
        }
        let mut search = CombSearch {
            u: &u,
            v: &v,
            reader: &reader,
            zs: &zs,
            max_len: max_w_len,
            min_xy,
            failed: HashSet::new(),
        };
        let mut w = Vec::new();
        if let Some(z) = search.dfs(reader.full(), &mut w, 0) {
            return Some(CombWitness {
                u: u.clone(),
                v: v.clone(),
                w: pattern_string(&w),
                z,
            });
        }
    }
    None
}

struct CombSearch<'a> {
    u: &'a Word,
    v: &'a Word,
    reader: &'a FactorReader,
    zs: &'a [Word],
    max_len: usize,
    min_xy: usize,
    /// `(set, xy count, last letter, length)` states known to have no
    /// counterexample below them.
    failed: HashSet<(u64, usize, Option<u8>, usize)>,
}

impl CombSearch<'_> {
    fn dfs(&mut self, set: u64, w: &mut Vec<u8>, xy: usize) -> Option<Word> {
        let key = (set, xy, w.last().copied(), w.len());
        if self.failed.contains(&key) {
            return None;
        }
        if xy >= self.min_xy {
            for z in self.zs {
                if self.reader.read(set, z.symbols()) != 0 {
                    return Some(z.clone());
                }
            }
        }
        if w.len() < self.max_len {
            for c in [X, Y] {
                let block = if c == X { self.u } else { self.v };
                let next = self.reader.read(set, block.symbols());
                if next == 0 {
                    continue;
                }
                let gained = usize::from(w.last() == Some(&X) && c == Y);
                w.push(c);
                if let Some(z) = self.dfs(next, w, (xy + gained).min(self.min_xy)) {
                    return Some(z);
                }
                w.pop();
            }
        }
        self.failed.insert(key);
        None
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DepsilonWitness {
    pub u: Word,
    pub v: Word,
    pub d: Word,
    pub w: String,
    pub w_prime: String,
}

/// Patterns over `{x, y}` of length at most `max_len` starting with `x` and
/// containing `y`.
fn admissible_patterns(max_len: usize) -> Vec<Vec<u8>> {
    let mut out = Vec::new();
    for len in 2..=max_len {
        for bits in 0..1u32 << (len - 1) {
            let mut w = vec![X];
            w.extend((0..len - 1).map(|t| if bits >> (len - 2 - t) & 1 == 1 { Y } else { X }));
            if w.contains(&Y) {
                out.push(w);
            }
        }
    }
    out
}

/// Exhaustive search for a failure of the `d = ε` lemma: a minimal pair
/// `(u, v)`, a nonempty `d` with `|d| < max(|u|, |v|)` not ending in `u`,
/// and admissible patterns `w, w'` with `σ(w')` a prefix of `d σ(w)`.
pub fn search_depsilon_counterexample(
    max_uv_len: usize,
    max_w_len: usize,
    alphabet_size: u32,
) -> Option<DepsilonWitness> {
    let patterns = admissible_patterns(max_w_len);
    for (u, v) in minimal_pairs(alphabet_size, max_uv_len) {
        let images: Vec<Word> = patterns.iter().map(|w| sigma(w, &u, &v)).collect();
        // Admissible σ(w') keyed by length, for prefix tests.
        let mut by_image: HashMap<&[Symbol], usize> = HashMap::new();
        for (i, img) in images.iter().enumerate() {
            by_image.entry(img.symbols()).or_insert(i);
        }
        let dmax = u.len().max(v.len());
        for dl in 1..dmax {
            for d in all_words(alphabet_size, dl) {
                if u.is_suffix_of(&d) {
                    continue;
                }
                for (wi, img) in images.iter().enumerate() {
                    let z = d.concat(img);
                    let zs = z.symbols();
                    for end in 1..=zs.len() {
                        if let Some(&wpi) = by_image.get(&zs[..end]) {
                            return Some(DepsilonWitness {
                                u: u.clone(),
                                v: v.clone(),
                                d,
                                w: pattern_string(&patterns[wi]),
                                w_prime: pattern_string(&patterns[wpi]),
                            });
                        }
                    }
                }
            }
        }
    }
    None
}
