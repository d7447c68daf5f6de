//! Hopcroft partition refinement over a refinable-partition array.

struct Partition {
    elems: Vec<u32>,
    loc: Vec<usize>,
    set_of: Vec<usize>,
    first: Vec<usize>,
    end: Vec<usize>,
    mid: Vec<usize>,
}

impl Partition {
    fn new(n: usize, initial: &[bool]) -> Partition {
        let mut elems: Vec<u32> = Vec::with_capacity(n);
        elems.extend((0..n as u32).filter(|&q| !initial[q as usize]));
        let split = elems.len();
        elems.extend((0..n as u32).filter(|&q| initial[q as usize]));
        let mut loc = vec![0; n];
        for (i, &q) in elems.iter().enumerate() {
            loc[q as usize] = i;
        }
        let mut p = Partition {
            elems,
            loc,
            set_of: vec![0; n],
            first: vec![],
            end: vec![],
            mid: vec![],
        };
        for (a, b) in [(0, split), (split, n)] {
            if a < b {
                let id = p.first.len();
                p.first.push(a);
                p.end.push(b);
                p.mid.push(a);
                for i in a..b {
                    p.set_of[p.elems[i] as usize] = id;
                }
            }
        }
        p
    }

    fn len(&self) -> usize {
        self.first.len()
    }

    fn size(&self, s: usize) -> usize {
        self.end[s] - self.first[s]
    }

    /// Returns true the first time a block receives a mark.
    fn mark(&mut self, q: u32) -> Option<usize> {
        let s = self.set_of[q as usize];
        let i = self.loc[q as usize];
        let m = self.mid[s];
        if i < m {
            return None;
        }
        self.elems.swap(i, m);
        self.loc[self.elems[i] as usize] = i;
        self.loc[self.elems[m] as usize] = m;
        self.mid[s] += 1;
        (self.mid[s] == self.first[s] + 1).then_some(s)
    }

    /// Splits the marked part off `s`. Returns the new block, if any.
    fn split(&mut self, s: usize) -> Option<usize> {
        if self.mid[s] == self.end[s] {
            self.mid[s] = self.first[s];
            return None;
        }
        let id = self.first.len();
        self.first.push(self.first[s]);
        self.end.push(self.mid[s]);
        self.mid.push(self.first[s]);
        self.first[s] = self.mid[s];
        for i in self.first[id]..self.end[id] {
            self.set_of[self.elems[i] as usize] = id;
        }
        Some(id)
    }
}

/// Coarsest partition of states compatible with acceptance and transitions.
/// Returns the class of each state and the number of classes.
pub(crate) fn hopcroft(trans: &[u32], accepting: &[bool], alpha: usize) -> (Vec<u32>, usize) {
    let n = accepting.len();
    // Inverse transitions, CSR keyed by target * alpha + letter.
    let mut offsets = vec![0u32; n * alpha + 1];
    for (src_l, &t) in trans.iter().enumerate() {
        let l = src_l % alpha;
        offsets[t as usize * alpha + l + 1] += 1;
    }
    for i in 1..offsets.len() {
        offsets[i] += offsets[i - 1];
    }
    let mut fill = offsets.clone();
    let mut sources = vec![0u32; trans.len()];
    for (src_l, &t) in trans.iter().enumerate() {
        let key = t as usize * alpha + src_l % alpha;
        sources[fill[key] as usize] = (src_l / alpha) as u32;
        fill[key] += 1;
    }

    let mut part = Partition::new(n, accepting);
    let mut in_work = vec![true; part.len()];
    let mut work: Vec<usize> = (0..part.len()).collect();
    let mut touched = Vec::new();
    let mut splitter = Vec::new();
    while let Some(b) = work.pop() {
        in_work[b] = false;
        splitter.clear();
        splitter.extend_from_slice(&part.elems[part.first[b]..part.end[b]]);
        for l in 0..alpha {
            for &q in &splitter {
                let key = q as usize * alpha + l;
                for &p in &sources[offsets[key] as usize..offsets[key + 1] as usize] {
                    if let Some(s) = part.mark(p) {
                        touched.push(s);
                    }
                }
            }
            for s in touched.drain(..) {
                if let Some(new) = part.split(s) {
                    in_work.push(false);
                    if in_work[s] {
                        in_work[new] = true;
                        work.push(new);
                    } else {
                        let smaller = if part.size(new) <= part.size(s) {
                            new
                        } else {
                            s
                        };
                        in_work[smaller] = true;
                        work.push(smaller);
                    }
                }
            }
        }
    }
    let classes = part.set_of.iter().map(|&s| s as u32).collect();
    (classes, part.len())
}
