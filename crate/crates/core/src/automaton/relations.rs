//! Arithmetic relations as synchronized automata.

use super::{digits_msd, AutomatonError, Dfa};

fn vars(names: &[&str]) -> Vec<String> {
    names.iter().map(|s| s.to_string()).collect()
}

/// Builds a canonical automaton from a transition function over digit
/// columns. `step(state, digits) -> state`; state 0 is initial.
fn build(
    base: u32,
    names: &[&str],
    states: usize,
    accepting: impl Fn(usize) -> bool,
    step: impl Fn(usize, &[u32]) -> usize,
) -> Result<Dfa, AutomatonError> {
    let tracks = names.len();
    let alpha = (base as usize).pow(tracks as u32);
    let mut trans = Vec::with_capacity(states * alpha);
    let mut digits = vec![0u32; tracks];
    for s in 0..states {
        for l in 0..alpha {
            let mut x = l as u32;
            for t in (0..tracks).rev() {
                digits[t] = x % base;
                x /= base;
            }
            trans.push(step(s, &digits) as u32);
        }
    }
    Dfa::from_parts(
        base,
        vars(names),
        trans,
        (0..states).map(accepting).collect(),
    )
}

/// `x = y`.
pub fn eq_rel(base: u32, x: &str, y: &str) -> Result<Dfa, AutomatonError> {
    build(
        base,
        &[x, y],
        2,
        |s| s == 0,
        |s, d| if s == 0 && d[0] == d[1] { 0 } else { 1 },
    )
}

/// `x < y`. States: 0 equal so far, 1 less, 2 dead.
pub fn less_rel(base: u32, x: &str, y: &str) -> Result<Dfa, AutomatonError> {
    build(
        base,
        &[x, y],
        3,
        |s| s == 1,
        |s, d| match s {
            0 if d[0] == d[1] => 0,
            0 if d[0] < d[1] => 1,
            1 => 1,
            _ => 2,
        },
    )
}

/// `x + y = z`. Reading most significant digit first, the state is the
/// carry the remaining low-order digits must produce; 2 is dead.
pub fn add_rel(base: u32, x: &str, y: &str, z: &str) -> Result<Dfa, AutomatonError> {
    let k = base as i64;
    build(
        base,
        &[x, y, z],
        3,
        |s| s == 0,
        |s, d| {
            if s == 2 {
                return 2;
            }
            let carry_in = d[2] as i64 + k * s as i64 - d[0] as i64 - d[1] as i64;
            if carry_in == 0 || carry_in == 1 {
                carry_in as usize
            } else {
                2
            }
        },
    )
}

/// `x = c`.
pub fn const_rel(base: u32, c: u64, x: &str) -> Result<Dfa, AutomatonError> {
    let digits = digits_msd(c, base);
    let n = digits.len();
    // State i: matched the first i digits (after any leading zeros); n+1 dead.
    build(
        base,
        &[x],
        n + 2,
        |s| s == n,
        |s, d| {
            if s < n && d[0] == digits[s] {
                s + 1
            } else if s == 0 && d[0] == 0 {
                0
            } else {
                n + 1
            }
        },
    )
}

/// `y = c * x`. Reading most significant digit first, the state is
/// `Y - c * X` over the digits read so far, which must stay in `[0, c)`;
/// `c` is the dead state.
pub fn const_mul_rel(base: u32, c: u64, x: &str, y: &str) -> Result<Dfa, AutomatonError> {
    if c == 0 {
        let zero = const_rel(base, 0, y)?;
        return zero.reorder(&vars(&[x, y]));
    }
    let k = base as u128;
    let c128 = c as u128;
    let states = usize::try_from(c + 1).map_err(|_| AutomatonError::Budget {
        stage: "const_mul_rel".into(),
        cap: usize::MAX,
    })?;
    build(
        base,
        &[x, y],
        states,
        |s| s == 0,
        |s, d| {
            if s as u128 == c128 {
                return s;
            }
            let r = k * s as u128 + d[1] as u128;
            match r.checked_sub(c128 * d[0] as u128) {
                Some(next) if next < c128 => next as usize,
                _ => c as usize,
            }
        },
    )
}

/// `x <= y`.
pub fn leq_rel(base: u32, x: &str, y: &str) -> Result<Dfa, AutomatonError> {
    build(
        base,
        &[x, y],
        3,
        |s| s <= 1,
        |s, d| match s {
            0 if d[0] == d[1] => 0,
            0 if d[0] < d[1] => 1,
            1 => 1,
            _ => 2,
        },
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automaton::Limits;

    #[test]
    fn examples() {
        let add = add_rel(2, "x", "y", "z").unwrap();
        assert!(add.accepts(&[2, 3, 5]));
        assert!(!add.accepts(&[2, 3, 6]));
        assert!(const_mul_rel(2, 3, "x", "y").unwrap().accepts(&[4, 12]));
        let less = less_rel(2, "x", "y").unwrap();
        assert!(less.accepts(&[0, 1]));
        assert!(!less.accepts(&[1, 1]));
    }

    #[test]
    fn eq_has_two_states() {
        assert_eq!(eq_rel(2, "x", "y").unwrap().num_states(), 2);
    }

    #[test]
    fn exhaustive_semantics_small_bases() {
        for base in 2..=3u32 {
            let eq = eq_rel(base, "x", "y").unwrap();
            let lt = less_rel(base, "x", "y").unwrap();
            let le = leq_rel(base, "x", "y").unwrap();
            let add = add_rel(base, "x", "y", "z").unwrap();
            let mul5 = const_mul_rel(base, 5, "x", "y").unwrap();
            let mul0 = const_mul_rel(base, 0, "x", "y").unwrap();
            let c7 = const_rel(base, 7, "x").unwrap();
            let c0 = const_rel(base, 0, "x").unwrap();
            for x in 0..60u64 {
                assert_eq!(c7.accepts(&[x]), x == 7);
                assert_eq!(c0.accepts(&[x]), x == 0);
                for y in 0..60u64 {
                    assert_eq!(eq.accepts(&[x, y]), x == y);
                    assert_eq!(lt.accepts(&[x, y]), x < y);
                    assert_eq!(le.accepts(&[x, y]), x <= y);
                    assert_eq!(mul5.accepts(&[x, y]), y == 5 * x);
                    assert_eq!(mul0.accepts(&[x, y]), y == 0);
                    for z in 0..60u64 {
                        assert_eq!(add.accepts(&[x, y, z]), x + y == z);
                    }
                }
            }
        }
    }

    #[test]
    fn all_relations_are_zero_closed() {
        for d in [
            eq_rel(2, "x", "y").unwrap(),
            less_rel(3, "x", "y").unwrap(),
            add_rel(2, "x", "y", "z").unwrap(),
            const_rel(2, 5, "x").unwrap(),
            const_mul_rel(3, 4, "x", "y").unwrap(),
        ] {
            assert!(d.is_zero_closed());
        }
    }

    #[test]
    fn const_mul_agrees_with_iterated_addition() {
        // 3x = x + 2x, built from add_rel and const_mul_rel(2).
        let limits = Limits::default();
        let double = const_mul_rel(2, 2, "x", "d").unwrap();
        let sum = add_rel(2, "x", "d", "y").unwrap();
        let composed = double
            .intersect(&sum, &limits)
            .unwrap()
            .project("d", &limits)
            .unwrap();
        let direct = const_mul_rel(2, 3, "x", "y").unwrap();
        assert_eq!(composed.reorder(&["x".into(), "y".into()]).unwrap(), direct);
    }
}
