//! Exact membership of an automatic sequence in `{u, v}^ω`.
//!
//! By König's lemma, `x ∈ {u, v}^ω` iff infinitely many prefixes of `x` lie
//! in `{u, v}*`. The set of such prefix lengths is recognized by an
//! automaton built from the DFAO and a DFA for `{u, v}*`, so membership
//! reduces to an infiniteness check.

use std::collections::{BTreeSet, HashMap};

use crate::automaton::{AutomatonError, Dfa, Dfao, Limits};
use crate::word::{Symbol, Word};

/// Complete DFA for `{u, v}*` over the sequence alphabet. State 0 is the
/// initial state.
struct StarDfa {
    trans: Vec<u32>,
    accepting: Vec<bool>,
    alpha: usize,
}

fn star_dfa(words: &[&Word], alphabet: &[Symbol]) -> StarDfa {
    // NFA states: 0 is a block boundary, then (word, offset) for offsets
    // strictly inside a word.
    let mut ids: HashMap<(usize, usize), u32> = HashMap::new();
    for (w, word) in words.iter().enumerate() {
        for o in 1..word.len() {
            let n = ids.len() as u32 + 1;
            ids.insert((w, o), n);
        }
    }
    let step = |state: (usize, usize), a: Symbol| -> Option<u32> {
        let (w, o) = state;
        let word = words[w].symbols();
        (word[o] == a).then(|| {
            if o + 1 == word.len() {
                0
            } else {
                ids[&(w, o + 1)]
            }
        })
    };
    let mut back: Vec<(usize, usize)> = vec![(usize::MAX, 0); ids.len() + 1];
    for (&k, &v) in &ids {
        back[v as usize] = k;
    }
    let nfa_next = |s: u32, a: Symbol| -> Vec<u32> {
        if s == 0 {
            (0..words.len()).filter_map(|w| step((w, 0), a)).collect()
        } else {
            step(back[s as usize], a).into_iter().collect()
        }
    };
    let alpha = alphabet.len();
    let mut index: HashMap<BTreeSet<u32>, u32> = HashMap::new();
    let mut sets = vec![BTreeSet::from([0u32])];
    index.insert(sets[0].clone(), 0);
    let mut trans = Vec::new();
    let mut head = 0;
    while head < sets.len() {
        let cur = sets[head].clone();
        head += 1;
        for &a in alphabet {
            let nxt: BTreeSet<u32> = cur.iter().flat_map(|&s| nfa_next(s, a)).collect();
            let id = *index.entry(nxt.clone()).or_insert_with(|| {
                sets.push(nxt);
                sets.len() as u32 - 1
            });
            trans.push(id);
        }
    }
    let accepting = sets.iter().map(|s| s.contains(&0)).collect();
    StarDfa {
        trans,
        accepting,
        alpha,
    }
}

/// Interned transformations of the star DFA's state set.
struct Transforms {
    n: usize,
    all: Vec<Vec<u32>>,
    index: HashMap<Vec<u32>, u32>,
    compose: HashMap<(u32, u32), u32>,
}

impl Transforms {
    fn new(n: usize) -> Self {
        let mut t = Transforms {
            n,
            all: Vec::new(),
            index: HashMap::new(),
            compose: HashMap::new(),
        };
        t.intern((0..n as u32).collect());
        t
    }

    fn intern(&mut self, f: Vec<u32>) -> u32 {
        if let Some(&id) = self.index.get(&f) {
            return id;
        }
        let id = self.all.len() as u32;
        self.index.insert(f.clone(), id);
        self.all.push(f);
        id
    }

    /// Apply `f`, then `g`.
    fn then(&mut self, f: u32, g: u32) -> u32 {
        if let Some(&h) = self.compose.get(&(f, g)) {
            return h;
        }
        let (ff, gg) = (&self.all[f as usize], &self.all[g as usize]);
        let h: Vec<u32> = (0..self.n).map(|q| gg[ff[q] as usize]).collect();
        let id = self.intern(h);
        self.compose.insert((f, g), id);
        id
    }

    fn apply(&self, f: u32, q: u32) -> u32 {
        self.all[f as usize][q as usize]
    }
}

/// One-track automaton over `n` accepting exactly the `n` with
/// `x[0..n] ∈ {u, v}*`.
pub fn prefix_membership(
    m: &Dfao,
    u: &Word,
    v: &Word,
    limits: &Limits,
) -> Result<Dfa, AutomatonError> {
    let alphabet = m.alphabet().to_vec();
    let star = star_dfa(&[u, v], &alphabet);
    let k = m.base();
    let nm = m.num_states();
    let mut tf = Transforms::new(star.accepting.len());
    let letter: Vec<u32> = alphabet
        .iter()
        .enumerate()
        .map(|(ai, _)| {
            let f = (0..star.accepting.len())
                .map(|q| star.trans[q * star.alpha + ai])
                .collect();
            tf.intern(f)
        })
        .collect();
    let sym_index: HashMap<Symbol, usize> =
        alphabet.iter().enumerate().map(|(i, &a)| (a, i)).collect();

    // levels[j][q]: transformation induced by the length-k^j block read
    // from DFAO state q. The sequence of levels is eventually periodic.
    let mut levels: Vec<Vec<u32>> = vec![(0..nm as u32)
        .map(|q| letter[sym_index[&m.output(q)]])
        .collect()];
    let mut seen: HashMap<Vec<u32>, usize> = HashMap::from([(levels[0].clone(), 0)]);
    let (pre, cycle) = loop {
        let last = levels.last().unwrap().clone();
        let next: Vec<u32> = (0..nm as u32)
            .map(|q| (0..k).fold(0, |acc, d| tf.then(acc, last[m.next(q, d) as usize])))
            .collect();
        if let Some(&s) = seen.get(&next) {
            break (s, levels.len() - s);
        }
        limits.check(levels.len() + tf.all.len(), "fixed-pair levels")?;
        seen.insert(next.clone(), levels.len());
        levels.push(next);
    };
    let end = (pre + cycle) as u32;
    // Lasso index of the next lower level.
    let preds = |e: u32| -> Vec<u32> {
        let mut out = vec![if e == 0 { end } else { e - 1 }];
        if e as usize == pre {
            out.push(end - 1);
        }
        out
    };
    let dead: Vec<bool> = {
        // Star DFA states that can never accept again.
        let n = star.accepting.len();
        let mut live = star.accepting.clone();
        let mut changed = true;
        while changed {
            changed = false;
            for q in 0..n {
                if !live[q]
                    && (0..star.alpha).any(|a| live[star.trans[q * star.alpha + a] as usize])
                {
                    live[q] = true;
                    changed = true;
                }
            }
        }
        live.iter().map(|l| !l).collect()
    };

    // Subset construction over NFA states (dfao state, star state, level).
    type Nfa = (u32, u32, u32);
    let start: BTreeSet<Nfa> = (0..=end).map(|e| (m.initial(), 0u32, e)).collect();
    let mut index: HashMap<BTreeSet<Nfa>, u32> = HashMap::from([(start.clone(), 0)]);
    let mut sets = vec![start];
    let mut trans = Vec::new();
    let mut head = 0;
    while head < sets.len() {
        limits.check(sets.len(), "fixed-pair subset construction")?;
        let cur = sets[head].clone();
        head += 1;
        for d in 0..k {
            let mut nxt = BTreeSet::new();
            for &(q, s, e) in &cur {
                if e == end {
                    continue;
                }
                let level = &levels[e as usize];
                let f = (0..d).fold(0, |acc, c| tf.then(acc, level[m.next(q, c) as usize]));
                let s2 = tf.apply(f, s);
                if dead[s2 as usize] {
                    continue;
                }
                let q2 = m.next(q, d);
                for e2 in preds(e) {
                    nxt.insert((q2, s2, e2));
                }
            }
            let id = match index.get(&nxt) {
                Some(&id) => id,
                None => {
                    let id = sets.len() as u32;
                    index.insert(nxt.clone(), id);
                    sets.push(nxt);
                    id
                }
            };
            trans.push(id);
        }
    }
    let accepting = sets
        .iter()
        .map(|set| {
            set.iter()
                .any(|&(_, s, e)| e == end && star.accepting[s as usize])
        })
        .collect();
    Dfa::from_parts(k, vec!["n".to_string()], trans, accepting)
}

/// `x ∈ {u, v}^ω`.
pub fn decide_fixed_pair(
    m: &Dfao,
    u: &Word,
    v: &Word,
    limits: &Limits,
) -> Result<bool, AutomatonError> {
    assert!(
        !u.is_empty() && !v.is_empty(),
        "decide_fixed_pair needs nonempty words"
    );
    Ok(!prefix_membership(m, u, v, limits)?.is_finite())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn in_star(w: &[Symbol], u: &[Symbol], v: &[Symbol]) -> bool {
        let mut ok = vec![false; w.len() + 1];
        ok[0] = true;
        for i in 0..w.len() {
            if ok[i] {
                for g in [u, v] {
                    if w[i..].starts_with(g) {
                        ok[i + g.len()] = true;
                    }
                }
            }
        }
        ok[w.len()]
    }

    #[test]
    fn prefix_lengths_match_dynamic_programming() {
        let pairs = [
            "0 1", "01 10", "0 12", "01 20", "01 21", "1 0", "011 0", "10 0", "2 0", "012 0",
            "0 00",
        ];
        for (name, m) in fixtures::all() {
            let x = m.prefix(1 << 10).into_symbols();
            for p in pairs {
                let (u, v) = p.split_once(' ').unwrap();
                let (u, v): (Word, Word) = (u.parse().unwrap(), v.parse().unwrap());
                let d = prefix_membership(&m, &u, &v, &Limits::default()).unwrap();
                for n in 0..x.len() {
                    assert_eq!(
                        d.accepts(&[n as u64]),
                        in_star(&x[..n], u.symbols(), v.symbols()),
                        "{name} {p} n={n}"
                    );
                }
            }
        }
    }

    #[test]
    fn fixed_pair_examples() {
        let w = |s: &str| s.parse::<Word>().unwrap();
        let lim = Limits::default();
        let t = fixtures::ternary_tm();
        assert!(decide_fixed_pair(&t, &w("01"), &w("20"), &lim).unwrap());
        assert!(!decide_fixed_pair(&t, &w("01"), &w("21"), &lim).unwrap());
        assert!(decide_fixed_pair(&t, &w("20"), &w("01"), &lim).unwrap());
        let tm = fixtures::thue_morse();
        assert!(decide_fixed_pair(&tm, &w("0"), &w("1"), &lim).unwrap());
        assert!(decide_fixed_pair(&tm, &w("01"), &w("10"), &lim).unwrap());
        assert!(!decide_fixed_pair(&tm, &w("0"), &w("0"), &lim).unwrap());
        assert!(!decide_fixed_pair(&tm, &w("01"), &w("0"), &lim).unwrap());
        let m3 = fixtures::mod3();
        assert!(decide_fixed_pair(&m3, &w("012"), &w("012012"), &lim).unwrap());
        assert!(decide_fixed_pair(&m3, &w("0"), &w("12"), &lim).unwrap());
        assert!(!decide_fixed_pair(&m3, &w("01"), &w("12"), &lim).unwrap());
        // Many prefixes of 0 1 1 0 1 0 0 0 1 0^7 1 ... lie in {0, 1}*.
        let p2 = fixtures::pow2_char();
        assert!(decide_fixed_pair(&p2, &w("0"), &w("1"), &lim).unwrap());
        assert!(!decide_fixed_pair(&p2, &w("01"), &w("10"), &lim).unwrap());
    }
}
