use std::collections::HashMap;
use std::collections::VecDeque;
use std::fmt;

use super::minimize::hopcroft;
use super::{AutomatonError, Limits};

/// A letter is a column of digits, one per track, packed in mixed radix
/// with track 0 as the most significant digit. Numeric letter order is
/// therefore lexicographic column order.
pub type Letter = u32;

const MAX_ALPHABET: u64 = 1 << 20;

/// Deterministic automaton over base-`k` digit columns, read most
/// significant digit first. Tuples are padded with leading zeros to a
/// common length.
///
/// Every public constructor returns the canonical form: minimal, every
/// state reachable, states numbered breadth-first from the initial state
/// (which is always state 0), and acceptance invariant under prepending the
/// all-zero column. Two canonical automata over the same variables accept
/// the same tuples iff they are structurally equal.
#[derive(Clone, PartialEq, Eq)]
pub struct Dfa {
    base: u32,
    vars: Vec<String>,
    alpha: usize,
    trans: Vec<u32>,
    accepting: Vec<bool>,
}

fn alphabet_size(base: u32, tracks: usize) -> Result<usize, AutomatonError> {
    let size = (base as u64)
        .checked_pow(tracks as u32)
        .filter(|&s| s <= MAX_ALPHABET);
    size.map(|s| s as usize)
        .ok_or(AutomatonError::TooManyTracks { base, tracks })
}

pub(crate) fn digits_msd(mut n: u64, base: u32) -> Vec<u32> {
    let mut d = Vec::new();
    while n > 0 {
        d.push((n % base as u64) as u32);
        n /= base as u64;
    }
    d.reverse();
    d
}

impl Dfa {
    /// Builds from raw parts and canonicalizes. `trans[s * alpha + letter]`.
    pub fn from_parts(
        base: u32,
        vars: Vec<String>,
        trans: Vec<u32>,
        accepting: Vec<bool>,
    ) -> Result<Dfa, AutomatonError> {
        if base < 2 {
            return Err(AutomatonError::BadBase(base));
        }
        for (i, v) in vars.iter().enumerate() {
            if vars[..i].contains(v) {
                return Err(AutomatonError::DuplicateVariable(v.clone()));
            }
        }
        let alpha = alphabet_size(base, vars.len())?;
        assert_eq!(
            trans.len(),
            accepting.len() * alpha,
            "transition table is not total"
        );
        let raw = Dfa {
            base,
            vars,
            alpha,
            trans,
            accepting,
        };
        Ok(raw.canonical())
    }

    /// Accepts every tuple (or `true` for zero tracks).
    pub fn universal(base: u32, vars: Vec<String>) -> Result<Dfa, AutomatonError> {
        let alpha = alphabet_size(base, vars.len())?;
        Dfa::from_parts(base, vars, vec![0; alpha], vec![true])
    }

    pub fn empty(base: u32, vars: Vec<String>) -> Result<Dfa, AutomatonError> {
        let alpha = alphabet_size(base, vars.len())?;
        Dfa::from_parts(base, vars, vec![0; alpha], vec![false])
    }

    pub fn constant(base: u32, value: bool) -> Dfa {
        Dfa {
            base,
            vars: Vec::new(),
            alpha: 1,
            trans: vec![0],
            accepting: vec![value],
        }
    }

    pub fn base(&self) -> u32 {
        self.base
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn tracks(&self) -> usize {
        self.vars.len()
    }

    pub fn alphabet_len(&self) -> usize {
        self.alpha
    }

    pub fn num_states(&self) -> usize {
        self.accepting.len()
    }

    pub fn next(&self, state: u32, letter: Letter) -> u32 {
        self.trans[state as usize * self.alpha + letter as usize]
    }

    pub fn is_accepting(&self, state: u32) -> bool {
        self.accepting[state as usize]
    }

    pub fn letter_digits(&self, letter: Letter) -> Vec<u32> {
        let mut out = vec![0; self.tracks()];
        let mut l = letter;
        for t in (0..self.tracks()).rev() {
            out[t] = l % self.base;
            l /= self.base;
        }
        out
    }

    pub fn encode_letter(&self, digits: &[u32]) -> Letter {
        digits.iter().fold(0, |acc, &d| acc * self.base + d)
    }

    /// Padded column encoding of a tuple, one value per track.
    pub fn encode_tuple(&self, values: &[u64]) -> Vec<Letter> {
        assert_eq!(values.len(), self.tracks());
        let digits: Vec<Vec<u32>> = values.iter().map(|&v| digits_msd(v, self.base)).collect();
        let len = digits.iter().map(Vec::len).max().unwrap_or(0);
        (0..len)
            .map(|i| {
                let col: Vec<u32> = digits
                    .iter()
                    .map(|d| {
                        if i + d.len() >= len {
                            d[i + d.len() - len]
                        } else {
                            0
                        }
                    })
                    .collect();
                self.encode_letter(&col)
            })
            .collect()
    }

    pub fn run(&self, letters: &[Letter]) -> u32 {
        letters.iter().fold(0, |s, &l| self.next(s, l))
    }

    pub fn accepts(&self, values: &[u64]) -> bool {
        self.is_accepting(self.run(&self.encode_tuple(values)))
    }

    /// Truth value of a zero-track automaton.
    pub fn truth(&self) -> Option<bool> {
        if self.tracks() == 0 {
            Some(self.accepting[0])
        } else {
            None
        }
    }

    pub fn is_empty(&self) -> bool {
        !self.accepting.iter().any(|&a| a)
    }

    pub fn is_universal(&self) -> bool {
        self.accepting.iter().all(|&a| a)
    }

    pub fn is_zero_closed(&self) -> bool {
        self.next(0, 0) == 0
    }

    fn check(&self, limits: &Limits, stage: &str) -> Result<(), AutomatonError> {
        limits.check(self.num_states(), stage)
    }

    // --- canonical form -------------------------------------------------

    fn canonical(self) -> Dfa {
        let reach = self.renumber_reachable();
        let (classes, count) = hopcroft(&reach.trans, &reach.accepting, reach.alpha);
        let mut trans = vec![0u32; count * reach.alpha];
        let mut accepting = vec![false; count];
        for s in 0..reach.num_states() {
            let c = classes[s] as usize;
            accepting[c] = reach.accepting[s];
            for l in 0..reach.alpha {
                trans[c * reach.alpha + l] = classes[reach.trans[s * reach.alpha + l] as usize];
            }
        }
        // The class of state 0 need not be 0; renumbering fixes that.
        let mut min = Dfa {
            base: reach.base,
            vars: reach.vars,
            alpha: reach.alpha,
            trans,
            accepting,
        };
        if classes[0] != 0 {
            let mut perm: Vec<u32> = (0..count as u32).collect();
            perm.swap(0, classes[0] as usize);
            min = min.permuted(&perm);
        }
        min.renumber_reachable()
    }

    fn permuted(&self, perm: &[u32]) -> Dfa {
        let n = self.num_states();
        let mut trans = vec![0u32; n * self.alpha];
        let mut accepting = vec![false; n];
        for s in 0..n {
            let ns = perm[s] as usize;
            accepting[ns] = self.accepting[s];
            for l in 0..self.alpha {
                trans[ns * self.alpha + l] = perm[self.trans[s * self.alpha + l] as usize];
            }
        }
        Dfa {
            base: self.base,
            vars: self.vars.clone(),
            alpha: self.alpha,
            trans,
            accepting,
        }
    }

    /// Breadth-first renumbering from state 0, dropping unreachable states.
    fn renumber_reachable(&self) -> Dfa {
        let n = self.num_states();
        let mut id = vec![u32::MAX; n];
        let mut order = Vec::with_capacity(n);
        id[0] = 0;
        order.push(0u32);
        let mut head = 0;
        while head < order.len() {
            let s = order[head] as usize;
            head += 1;
            for l in 0..self.alpha {
                let t = self.trans[s * self.alpha + l] as usize;
                if id[t] == u32::MAX {
                    id[t] = order.len() as u32;
                    order.push(t as u32);
                }
            }
        }
        let m = order.len();
        let mut trans = Vec::with_capacity(m * self.alpha);
        let mut accepting = Vec::with_capacity(m);
        for &s in &order {
            let s = s as usize;
            accepting.push(self.accepting[s]);
            trans.extend(
                self.trans[s * self.alpha..(s + 1) * self.alpha]
                    .iter()
                    .map(|&t| id[t as usize]),
            );
        }
        Dfa {
            base: self.base,
            vars: self.vars.clone(),
            alpha: self.alpha,
            trans,
            accepting,
        }
    }

    // --- Boolean operations ---------------------------------------------

    pub fn complement(&self) -> Dfa {
        let mut out = self.clone();
        for a in &mut out.accepting {
            *a = !*a;
        }
        out
    }

    pub fn intersect(&self, other: &Dfa, limits: &Limits) -> Result<Dfa, AutomatonError> {
        self.product(other, limits, |a, b| a && b)
    }

    pub fn union(&self, other: &Dfa, limits: &Limits) -> Result<Dfa, AutomatonError> {
        self.product(other, limits, |a, b| a || b)
    }

    /// Synchronized product. Tracks are aligned by variable name; the result
    /// carries `self`'s variables followed by those only in `other`.
    pub fn product(
        &self,
        other: &Dfa,
        limits: &Limits,
        op: impl Fn(bool, bool) -> bool,
    ) -> Result<Dfa, AutomatonError> {
        if self.base != other.base {
            return Err(AutomatonError::BaseMismatch(self.base, other.base));
        }
        let mut vars = self.vars.clone();
        for v in &other.vars {
            if !vars.contains(v) {
                vars.push(v.clone());
            }
        }
        let alpha = alphabet_size(self.base, vars.len())?;
        let la = self.letter_map(&vars);
        let lb = other.letter_map(&vars);

        let mut index: HashMap<(u32, u32), u32> = HashMap::new();
        let mut pairs: Vec<(u32, u32)> = vec![(0, 0)];
        index.insert((0, 0), 0);
        let mut trans: Vec<u32> = Vec::new();
        let mut accepting = Vec::new();
        let mut head = 0;
        while head < pairs.len() {
            let (a, b) = pairs[head];
            head += 1;
            accepting.push(op(self.is_accepting(a), other.is_accepting(b)));
            for l in 0..alpha {
                let key = (self.next(a, la[l]), other.next(b, lb[l]));
                let id = match index.get(&key) {
                    Some(&id) => id,
                    None => {
                        let id = pairs.len() as u32;
                        index.insert(key, id);
                        pairs.push(key);
                        id
                    }
                };
                trans.push(id);
            }
            if pairs.len().is_multiple_of(4096) {
                limits.check(pairs.len(), "product")?;
            }
        }
        limits.check(pairs.len(), "product")?;
        let out = Dfa {
            base: self.base,
            vars,
            alpha,
            trans,
            accepting,
        }
        .canonical();
        out.check(limits, "product")?;
        Ok(out)
    }

    /// For every letter over `target` variables (a superset of ours), the
    /// letter over our own tracks.
    fn letter_map(&self, target: &[String]) -> Vec<Letter> {
        let pos: Vec<usize> = self
            .vars
            .iter()
            .map(|v| target.iter().position(|t| t == v).unwrap())
            .collect();
        let size = (self.base as usize).pow(target.len() as u32);
        let mut out = Vec::with_capacity(size);
        let mut digits = vec![0u32; target.len()];
        for l in 0..size {
            let mut x = l as u32;
            for t in (0..target.len()).rev() {
                digits[t] = x % self.base;
                x /= self.base;
            }
            out.push(pos.iter().fold(0, |acc, &p| acc * self.base + digits[p]));
        }
        out
    }

    // --- quantification ---------------------------------------------------

    /// Existentially quantifies `var`: subset construction over the
    /// remaining tracks, started from every state reachable by columns that
    /// are zero on the remaining tracks, so that witnesses longer than the
    /// other components are still found.
    pub fn project(&self, var: &str, limits: &Limits) -> Result<Dfa, AutomatonError> {
        let Some(t) = self.vars.iter().position(|v| v == var) else {
            return Ok(self.clone());
        };
        let mut vars = self.vars.clone();
        vars.remove(t);
        let alpha = alphabet_size(self.base, vars.len())?;
        let k = self.base as usize;
        let tracks = self.tracks();
        // The dropped digit sits at weight base^(tracks-1-t).
        let low = k.pow((tracks - 1 - t) as u32);
        let expand = |l: usize, d: usize| -> usize { (l / low) * low * k + d * low + (l % low) };

        let n = self.num_states();
        let mut mark = vec![u32::MAX; n];
        let mut stamp = 0u32;

        // Leading-zero saturation of the start set.
        let mut start: Vec<u32> = vec![0];
        mark[0] = stamp;
        let mut head = 0;
        while head < start.len() {
            let s = start[head] as usize;
            head += 1;
            for d in 0..k {
                let nx = self.trans[s * self.alpha + expand(0, d)];
                if mark[nx as usize] != stamp {
                    mark[nx as usize] = stamp;
                    start.push(nx);
                }
            }
        }
        start.sort_unstable();

        let mut index: HashMap<Vec<u32>, u32> = HashMap::new();
        let mut sets: Vec<Vec<u32>> = vec![start.clone()];
        index.insert(start, 0);
        let mut trans: Vec<u32> = Vec::new();
        let mut accepting = Vec::new();
        let mut head = 0;
        let mut buf: Vec<u32> = Vec::new();
        while head < sets.len() {
            let set = sets[head].clone();
            head += 1;
            accepting.push(set.iter().any(|&s| self.accepting[s as usize]));
            for l in 0..alpha {
                stamp += 1;
                buf.clear();
                for &s in &set {
                    let base_ix = s as usize * self.alpha;
                    for d in 0..k {
                        let nx = self.trans[base_ix + expand(l, d)];
                        if mark[nx as usize] != stamp {
                            mark[nx as usize] = stamp;
                            buf.push(nx);
                        }
                    }
                }
                buf.sort_unstable();
                let id = match index.get(&buf) {
                    Some(&id) => id,
                    None => {
                        let id = sets.len() as u32;
                        index.insert(buf.clone(), id);
                        sets.push(buf.clone());
                        id
                    }
                };
                trans.push(id);
            }
            if sets.len().is_multiple_of(1024) {
                limits.check(sets.len(), "determinize")?;
            }
        }
        limits.check(sets.len(), "determinize")?;
        let out = Dfa {
            base: self.base,
            vars,
            alpha,
            trans,
            accepting,
        }
        .canonical();
        out.check(limits, "project")?;
        Ok(out)
    }

    pub fn forall(&self, var: &str, limits: &Limits) -> Result<Dfa, AutomatonError> {
        Ok(self.complement().project(var, limits)?.complement())
    }

    // --- track bookkeeping ------------------------------------------------

    pub fn rename(&self, map: &[(&str, &str)]) -> Result<Dfa, AutomatonError> {
        let vars: Vec<String> = self
            .vars
            .iter()
            .map(|v| {
                map.iter()
                    .find(|(from, _)| from == v)
                    .map_or(v.clone(), |(_, to)| to.to_string())
            })
            .collect();
        for (i, v) in vars.iter().enumerate() {
            if vars[..i].contains(v) {
                return Err(AutomatonError::DuplicateVariable(v.clone()));
            }
        }
        Ok(Dfa {
            vars,
            ..self.clone()
        })
    }

    /// Permutes tracks into `order`, adding free tracks for variables the
    /// automaton does not mention.
    pub fn reorder(&self, order: &[String]) -> Result<Dfa, AutomatonError> {
        for v in &self.vars {
            if !order.contains(v) {
                return Err(AutomatonError::UnknownVariable(v.clone()));
            }
        }
        if order == self.vars.as_slice() {
            return Ok(self.clone());
        }
        let alpha = alphabet_size(self.base, order.len())?;
        let map = self.letter_map(order);
        let n = self.num_states();
        let mut trans = Vec::with_capacity(n * alpha);
        for s in 0..n {
            for &l in &map {
                trans.push(self.trans[s * self.alpha + l as usize]);
            }
        }
        let out = Dfa {
            base: self.base,
            vars: order.to_vec(),
            alpha,
            trans,
            accepting: self.accepting.clone(),
        };
        Ok(out.canonical())
    }

    // --- witnesses ----------------------------------------------------------

    /// Distance (in letters) from each state to acceptance.
    fn distances_to_accept(&self) -> Vec<u32> {
        let n = self.num_states();
        let mut preds: Vec<Vec<u32>> = vec![Vec::new(); n];
        for s in 0..n {
            for l in 0..self.alpha {
                preds[self.trans[s * self.alpha + l] as usize].push(s as u32);
            }
        }
        let mut dist = vec![u32::MAX; n];
        let mut queue = VecDeque::new();
        for (s, d) in dist.iter_mut().enumerate() {
            if self.accepting[s] {
                *d = 0;
                queue.push_back(s);
            }
        }
        while let Some(s) = queue.pop_front() {
            for &p in &preds[s] {
                if dist[p as usize] == u32::MAX {
                    dist[p as usize] = dist[s] + 1;
                    queue.push_back(p as usize);
                }
            }
        }
        dist
    }

    /// The accepted tuple whose padded representation is shortest, ties
    /// broken lexicographically on columns.
    pub fn shortest_accepted(&self) -> Option<Vec<u64>> {
        let dist = self.distances_to_accept();
        if dist[0] == u32::MAX {
            return None;
        }
        let mut s = 0u32;
        let mut letters = Vec::new();
        while dist[s as usize] > 0 {
            let want = dist[s as usize] - 1;
            let l = (0..self.alpha as u32)
                .find(|&l| dist[self.next(s, l) as usize] == want)
                .unwrap();
            letters.push(l);
            s = self.next(s, l);
        }
        Some(self.decode(&letters))
    }

    pub fn decode(&self, letters: &[Letter]) -> Vec<u64> {
        let mut vals = vec![0u64; self.tracks()];
        for &l in letters {
            for (v, d) in vals.iter_mut().zip(self.letter_digits(l)) {
                *v = *v * self.base as u64 + d as u64;
            }
        }
        vals
    }

    /// States lying on some path from the start to acceptance after the
    /// first non-zero column (the "started" part of the automaton).
    fn useful_started(&self) -> (Vec<bool>, Vec<bool>) {
        let n = self.num_states();
        let dist = self.distances_to_accept();
        let coreach: Vec<bool> = dist.iter().map(|&d| d != u32::MAX).collect();
        let mut started = vec![false; n];
        let mut stack = Vec::new();
        for l in 1..self.alpha as u32 {
            let t = self.next(0, l) as usize;
            if !started[t] {
                started[t] = true;
                stack.push(t);
            }
        }
        while let Some(s) = stack.pop() {
            for l in 0..self.alpha {
                let t = self.trans[s * self.alpha + l] as usize;
                if !started[t] {
                    started[t] = true;
                    stack.push(t);
                }
            }
        }
        (started, coreach)
    }

    /// Finitely many tuples are accepted.
    pub fn is_finite(&self) -> bool {
        let (started, coreach) = self.useful_started();
        let n = self.num_states();
        let live: Vec<bool> = (0..n).map(|s| started[s] && coreach[s]).collect();
        // Cycle detection restricted to live started states.
        let mut color = vec![0u8; n];
        for root in 0..n {
            if !live[root] || color[root] != 0 {
                continue;
            }
            let mut stack: Vec<(usize, usize)> = vec![(root, 0)];
            color[root] = 1;
            while let Some(top) = stack.last_mut() {
                let (s, l) = *top;
                if l == self.alpha {
                    color[s] = 2;
                    stack.pop();
                    continue;
                }
                top.1 += 1;
                let t = self.trans[s * self.alpha + l] as usize;
                if !live[t] {
                    continue;
                }
                match color[t] {
                    0 => {
                        color[t] = 1;
                        stack.push((t, 0));
                    }
                    1 => return false,
                    _ => {}
                }
            }
        }
        true
    }

    /// Up to `limit` accepted tuples, least canonical representations first.
    /// Works for infinite sets.
    pub fn first_accepted(&self, limit: usize) -> Vec<Vec<u64>> {
        let (started, coreach) = self.useful_started();
        let mut out = Vec::new();
        if limit == 0 {
            return out;
        }
        if self.accepting[0] {
            out.push(vec![0; self.tracks()]);
        }
        let mut layer: Vec<(u32, Vec<Letter>)> = (1..self.alpha as u32)
            .map(|l| (self.next(0, l), vec![l]))
            .filter(|(s, _)| coreach[*s as usize])
            .collect();
        while !layer.is_empty() && out.len() < limit {
            let mut next = Vec::new();
            for (s, word) in layer {
                if self.accepting[s as usize] {
                    out.push(self.decode(&word));
                    if out.len() == limit {
                        return out;
                    }
                }
                for l in 0..self.alpha as u32 {
                    let t = self.next(s, l);
                    if started[t as usize] && coreach[t as usize] {
                        let mut w = word.clone();
                        w.push(l);
                        next.push((t, w));
                    }
                }
            }
            layer = next;
        }
        out
    }

    /// All accepted tuples in length-lexicographic order. Errors when the
    /// set is infinite or has more than `limit` elements.
    pub fn enumerate_accepted(&self, limit: usize) -> Result<Vec<Vec<u64>>, AutomatonError> {
        if !self.is_finite() {
            return Err(AutomatonError::Infinite);
        }
        let (started, coreach) = self.useful_started();
        let mut out = Vec::new();
        if self.accepting[0] {
            out.push(vec![0; self.tracks()]);
        }
        // Finite: every accepted canonical word has length < num_states + 1.
        let mut layer: Vec<(u32, Vec<Letter>)> = (1..self.alpha as u32)
            .map(|l| (self.next(0, l), vec![l]))
            .filter(|(s, _)| coreach[*s as usize])
            .collect();
        while !layer.is_empty() {
            let mut next = Vec::new();
            for (s, word) in layer {
                if self.accepting[s as usize] {
                    out.push(self.decode(&word));
                    if out.len() > limit {
                        return Err(AutomatonError::LimitExceeded(limit));
                    }
                }
                for l in 0..self.alpha as u32 {
                    let t = self.next(s, l);
                    if started[t as usize] && coreach[t as usize] {
                        let mut w = word.clone();
                        w.push(l);
                        next.push((t, w));
                    }
                }
            }
            layer = next;
        }
        Ok(out)
    }
}

impl fmt::Debug for Dfa {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "Dfa(base {}, vars {:?}, {} states)",
            self.base,
            self.vars,
            self.num_states()
        )?;
        for s in 0..self.num_states() {
            let row: Vec<u32> = (0..self.alpha as u32)
                .map(|l| self.next(s as u32, l))
                .collect();
            writeln!(
                f,
                "  {s}{} {:?}",
                if self.accepting[s] { "*" } else { "" },
                row
            )?;
        }
        Ok(())
    }
}
