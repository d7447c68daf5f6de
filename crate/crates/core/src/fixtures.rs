//! Bundled example sequences.

use crate::automaton::Dfao;
use crate::word::Symbol;

pub const NAMES: [&str; 4] = ["thue-morse", "mod3", "pow2-char", "ternary-tm"];

pub fn text(name: &str) -> Option<&'static str> {
    Some(match name {
        "thue-morse" => include_str!("../fixtures/thue-morse.dfao"),
        "mod3" => include_str!("../fixtures/mod3.dfao"),
        "pow2-char" => include_str!("../fixtures/pow2-char.dfao"),
        "ternary-tm" => include_str!("../fixtures/ternary-tm.dfao"),
        _ => return None,
    })
}

pub fn load(name: &str) -> Option<Dfao> {
    text(name).map(|t| Dfao::parse(t).expect("bundled fixture parses"))
}

pub fn all() -> Vec<(&'static str, Dfao)> {
    NAMES.iter().map(|&n| (n, load(n).unwrap())).collect()
}

pub fn thue_morse() -> Dfao {
    load("thue-morse").unwrap()
}

pub fn mod3() -> Dfao {
    load("mod3").unwrap()
}

pub fn pow2_char() -> Dfao {
    load("pow2-char").unwrap()
}

pub fn ternary_tm() -> Dfao {
    load("ternary-tm").unwrap()
}

/// Direct generators, independent of the automata, for cross-checking.
pub mod reference {
    use super::Symbol;

    pub fn thue_morse(n: u64) -> Symbol {
        n.count_ones() % 2
    }

    pub fn mod3(n: u64) -> Symbol {
        (n % 3) as Symbol
    }

    pub fn pow2_char(n: u64) -> Symbol {
        n.is_power_of_two() as Symbol
    }

    /// Prefix of the fixed point of `0 -> 01, 1 -> 20, 2 -> 20`, by
    /// iterating the morphism.
    pub fn ternary_tm_prefix(len: usize) -> Vec<Symbol> {
        let mut w: Vec<Symbol> = vec![0];
        while w.len() < len {
            w = w
                .iter()
                .flat_map(|&a| match a {
                    0 => [0, 1],
                    _ => [2, 0],
                })
                .collect();
        }
        w.truncate(len);
        w
    }

    pub fn prefix(name: &str, len: usize) -> Option<Vec<Symbol>> {
        let f: fn(u64) -> Symbol = match name {
            "thue-morse" => thue_morse,
            "mod3" => mod3,
            "pow2-char" => pow2_char,
            "ternary-tm" => return Some(ternary_tm_prefix(len)),
            _ => return None,
        };
        Some((0..len as u64).map(f).collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixtures_match_generators() {
        for (name, m) in all() {
            let want = reference::prefix(name, 1 << 12).unwrap();
            for (n, &w) in want.iter().enumerate() {
                assert_eq!(m.eval(n as u64), w, "{name} at {n}");
            }
        }
    }

    #[test]
    fn ternary_zeros_follow_thue_morse() {
        let m = ternary_tm();
        for n in 0..4096 {
            assert_eq!(m.eval(n) == 0, reference::thue_morse(n) == 0);
        }
    }
}
