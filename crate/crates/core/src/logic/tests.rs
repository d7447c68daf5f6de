use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::*;
use crate::fixtures;
use crate::word::FactorizationPattern;

fn limits() -> Limits {
    Limits::default()
}

fn prefix(m: &Dfao, n: usize) -> Vec<Symbol> {
    m.prefix(n).into_symbols()
}

fn feq(x: &[Symbol], i: usize, j: usize, n: usize) -> bool {
    (0..n).all(|t| x[i + t] == x[j + t])
}

fn var_f(name: &str) -> Term {
    Term::var(name)
}

#[test]
fn engine_examples() {
    let tm = fixtures::thue_morse();
    let l = limits();
    let two_zeros = Formula::seq_at("i", 0) & Formula::seq_at(var_f("i") + 1u64, 0);
    assert!(decide(&Formula::exists(&["i"], two_zeros.clone()), &tm, &l).unwrap());
    assert_eq!(
        witness(&two_zeros, &tm, &l).unwrap(),
        Some(vec![("i".to_string(), 5)])
    );

    let three = two_zeros & Formula::seq_at(var_f("i") + 2u64, 0);
    assert!(!decide(&Formula::exists(&["i"], three), &tm, &l).unwrap());

    assert!(decide(&Formula::forall(&["n"], Formula::eq("n", "n")), &tm, &l).unwrap());
    assert!(!decide(&Formula::exists(&["i"], Formula::seq_at("i", 7)), &tm, &l).unwrap());
    assert_eq!(
        witness(&Formula::eq("i", 7u64), &tm, &l).unwrap(),
        Some(vec![("i".to_string(), 7)])
    );
}

#[test]
fn decide_rejects_free_variables() {
    let tm = fixtures::thue_morse();
    let err = decide(&Formula::seq_at("i", 0), &tm, &limits()).unwrap_err();
    assert_eq!(err, LogicError::FreeVariables(vec!["i".into()]));
}

#[test]
fn builder_examples() {
    let tm = fixtures::thue_morse();
    let l = limits();
    let holds = |f: Formula| decide(&f, &tm, &l).unwrap();
    assert!(holds(factoreq(0u64, 3u64, 1u64)));
    assert!(!holds(factoreq(0u64, 1u64, 2u64)));
    assert!(holds(Formula::forall(&["i", "n"], factoreq("i", "i", "n"))));
    assert!(holds(period_f(0u64, 4u64, 3u64)));
    assert!(holds(prim(0u64, 2u64)));
    assert!(!holds(prim(5u64, 2u64)));
}

#[test]
fn builders_agree_with_prefix_scan() {
    const R: u64 = 20;
    let l = limits();
    for (name, m) in fixtures::all() {
        let x = prefix(&m, 256);
        let mut c = Compiler::new(&m, l.clone());
        let fe = c.compile(&factoreq("i", "j", "n")).unwrap();
        let pe = c.compile(&period_f("i", "n", "p")).unwrap();
        let ma = c.compile(&match_f("i", "j", "m", "r")).unwrap();
        let ea = c.compile(&earliestfac("i", "j", "n")).unwrap();
        let pr = c.compile(&prim("i", "n")).unwrap();
        let px = c.compile(&prefx("i", "j", "x", "y")).unwrap();
        let sx = c.compile(&suffx("i", "j", "x", "y")).unwrap();
        for i in 0..R {
            for j in 0..R {
                for n in 0..R {
                    let (iu, ju, nu) = (i as usize, j as usize, n as usize);
                    assert_eq!(
                        fe.accepts(&[i, j, n]),
                        feq(&x, iu, ju, nu),
                        "{name} factoreq {i} {j} {n}"
                    );
                    let want = ju <= nu && feq(&x, iu, iu + ju, nu - ju.min(nu));
                    assert_eq!(pe.accepts(&[i, n, j]), want, "{name} period {i} {n} {j}");
                    let want = feq(&x, iu, ju, nu) && (0..iu).all(|t| !feq(&x, t, ju, nu));
                    assert_eq!(
                        ea.accepts(&[i, j, n]),
                        want,
                        "{name} earliestfac {i} {j} {n}"
                    );
                    let want = feq(&x, iu, ju, nu) && feq(&x, ju, ju + nu, 3);
                    assert_eq!(
                        ma.accepts(&[i, j, 3, n]),
                        want,
                        "{name} match {i} {j} 3 {n}"
                    );
                    for y in [0u64, 3, 7] {
                        let yu = y as usize;
                        let want = ju <= yu && feq(&x, iu, nu, ju);
                        assert_eq!(
                            px.accepts(&[i, j, n, y]),
                            want,
                            "{name} prefx {i} {j} {n} {y}"
                        );
                        let want = ju <= yu && feq(&x, iu, nu + yu - ju, ju);
                        assert_eq!(
                            sx.accepts(&[i, j, n, y]),
                            want,
                            "{name} suffx {i} {j} {n} {y}"
                        );
                    }
                }
                let w = crate::word::Word::new(x[i as usize..(i + j) as usize].to_vec());
                let want = j > 0 && crate::word::is_primitive(&w).unwrap();
                assert_eq!(pr.accepts(&[i, j]), want, "{name} prim {i} {j}");
            }
        }
    }
}

#[test]
fn factoreq_laws() {
    let l = limits();
    for (_, m) in fixtures::all() {
        let mut c = Compiler::new(&m, l.clone());
        let sym = Formula::forall(
            &["i", "j", "n"],
            Formula::implies(factoreq("i", "j", "n"), factoreq("j", "i", "n")),
        );
        assert!(c.decide(&sym).unwrap());
        let mono = Formula::forall(
            &["i", "j", "n", "k"],
            Formula::implies(
                factoreq("i", "j", "n") & Formula::leq("k", "n"),
                factoreq("i", "j", "k"),
            ),
        );
        assert!(c.decide(&mono).unwrap());
    }
}

#[test]
fn unbounded_powers_examples() {
    let l = limits();
    let tm = fixtures::thue_morse();
    // Overlap-free: no run of period p and length 3p.
    let cube = Formula::exists(
        &["i", "n", "p"],
        unbounded_powers_formula("i", "n", "p") & Formula::leq(Term::mul(3, "p"), "n"),
    );
    assert!(!decide(&cube, &tm, &l).unwrap());
    let p2 = fixtures::pow2_char();
    let zeros = Formula::forall(
        &["m"],
        Formula::exists(
            &["n"],
            Formula::lt("m", "n") & unbounded_powers_formula(0u64, "n", 1u64),
        ),
    );
    assert!(decide(&zeros, &p2, &l).unwrap());
    assert!(decide(&unbounded(0u64, 1u64), &p2, &l).unwrap());
    assert!(!decide(&Formula::exists(&["i", "r"], unbounded("i", "r")), &tm, &l).unwrap());
}

#[test]
fn powers_need_positive_period() {
    let tm = fixtures::thue_morse();
    let f = Formula::exists(&["i", "n"], unbounded_powers_formula("i", "n", 0u64));
    assert!(!decide(&f, &tm, &limits()).unwrap());
}

#[test]
fn setup2_examples() {
    let tm = fixtures::thue_morse();
    let l = limits();
    let p01: FactorizationPattern = "01".parse().unwrap();
    assert!(decide(&setup2_formula(&p01, PowerFreedom::Exponent(3)), &tm, &l).unwrap());
    let zeros: FactorizationPattern = "000".parse().unwrap();
    assert!(!decide(&setup2_formula(&zeros, PowerFreedom::None), &tm, &l).unwrap());
    // The witness found really is a factorization of the prefix.
    let w = witness(&setup2_body(&p01, PowerFreedom::Exponent(3)), &tm, &l)
        .unwrap()
        .unwrap();
    let get = |n: &str| w.iter().find(|(v, _)| v == n).unwrap().1;
    let u0 = tm.factor(get("i"), get("r") as usize);
    let u1 = tm.factor(get("j"), get("s") as usize);
    assert!(u0.concat(&u1).is_prefix_of(&tm.prefix(64)));
    assert!(!u0.is_prefix_of(&u1) && !u1.is_prefix_of(&u0));
    assert!(!u0.is_suffix_of(&u1) && !u1.is_suffix_of(&u0));
}

#[test]
fn setup2_agrees_with_brute_force() {
    // For short patterns, search all (u0, u1) up to length 6 directly.
    let l = limits();
    for name in ["thue-morse", "ternary-tm"] {
        let m = fixtures::load(name).unwrap();
        let x = m.prefix(512);
        for len in 2..=3usize {
            for idx in 0..(1u64 << len) {
                let pat = FactorizationPattern::from_index(idx, len);
                let got = decide(&setup2_formula(&pat, PowerFreedom::None), &m, &l).unwrap();
                let mut brute = false;
                for r in 1..=6usize {
                    for s in 1..=6usize {
                        // u0 is the prefix or is found at a position of the first block of u1.
                        let bits = pat.bits();
                        let (mut pos, mut ok) = (0usize, true);
                        let (mut u0, mut u1): (
                            Option<crate::word::Word>,
                            Option<crate::word::Word>,
                        ) = (None, None);
                        for &b in bits {
                            let len = if b { s } else { r };
                            let piece = x.slice(pos, pos + len);
                            let slot = if b { &mut u1 } else { &mut u0 };
                            match slot {
                                Some(w) if *w != piece => ok = false,
                                Some(_) => {}
                                None => *slot = Some(piece),
                            }
                            pos += len;
                        }
                        let u0 = u0.unwrap_or_else(|| x.slice(0, r).clone());
                        let u1 = u1.unwrap_or_else(|| x.slice(0, s).clone());
                        let occurs = |w: &crate::word::Word| w.is_factor_of(&x);
                        if ok
                            && occurs(&u0)
                            && occurs(&u1)
                            && !u0.is_prefix_of(&u1)
                            && !u1.is_prefix_of(&u0)
                            && !u0.is_suffix_of(&u1)
                            && !u1.is_suffix_of(&u0)
                        {
                            brute = true;
                        }
                    }
                }
                if brute {
                    assert!(got, "{name} pattern {pat}: brute force found a pair");
                }
            }
        }
    }
}

#[test]
fn setup_formula_small_cases() {
    let l = limits();
    let tern = fixtures::ternary_tm();
    // u = "20" at position 2. v = "01": x = 01 20 20 01 ... so v u^2 v is a prefix.
    let f = setup_formula(2, 2, 3, 1);
    let d = compile(&f, &tern, &l).unwrap();
    assert!(d.accepts(&[2]));
    // One block only requires the v constraints.
    let d1 = compile(&setup_formula(2, 2, 1, 1), &tern, &l).unwrap();
    for r in 0..40u64 {
        let v = tern.prefix(r as usize);
        let u = tern.factor(2, 2);
        let want = r >= 1 && !u.is_prefix_of(&v) && !u.is_suffix_of(&v);
        assert_eq!(d1.accepts(&[r]), want, "r = {r}");
    }
    // Periodic sequence u^ω: no v avoids u as a prefix once r >= |u|.
    let m3 = fixtures::mod3();
    assert!(!decide(&Formula::exists(&["r"], setup_formula(0, 3, 2, 3)), &m3, &l).unwrap());
}

#[test]
fn setup_formula_matches_block_scan() {
    // Brute force: v = x[0..r], greedy is not enough, so search exponents.
    let l = limits();
    let tern = fixtures::ternary_tm();
    let x = tern.prefix(600);
    let (i, d) = (2u64, 2usize);
    let u = x.slice(i as usize, i as usize + d);
    let blocks = 4;
    let dfa = compile(&setup_formula(i, d as u64, blocks, 1), &tern, &l).unwrap();
    fn search(
        x: &crate::word::Word,
        v: &crate::word::Word,
        u: &crate::word::Word,
        pos: usize,
        left: u64,
    ) -> bool {
        if left == 0 {
            return true;
        }
        if pos + v.len() > x.len() || x.slice(pos, pos + v.len()) != *v {
            return false;
        }
        let mut at = pos + v.len();
        loop {
            if left == 1 || search(x, v, u, at, left - 1) {
                return true;
            }
            if at + u.len() > x.len() || x.slice(at, at + u.len()) != *u {
                return false;
            }
            at += u.len();
        }
    }
    for r in 1..40u64 {
        let v = x.slice(0, r as usize);
        let want = !u.is_prefix_of(&v) && !u.is_suffix_of(&v) && search(&x, &v, &u, 0, blocks);
        assert_eq!(dfa.accepts(&[r]), want, "r = {r}");
    }
}

#[test]
fn parser_round_trip() {
    let tm = fixtures::thue_morse();
    let l = limits();
    let cases = [
        ("exists i. x[i] = 0 & x[i+1] = 0", true),
        ("exists i. x[i] = 0 & x[i+1] = 0 & x[i+2] = 0", false),
        ("forall n. n = n", true),
        ("forall i, n. factoreq(i, i, n)", true),
        ("exists i, n. n > 0 & period(i, 3*n, n)", false),
        ("exists i. x[i] = x[i+1] & x[i+1] = x[i+2]", false),
        ("forall i. i < 3 => ~(x[i] != x[i])", true),
        ("prim(0, 2) & ~prim(5, 2) | false", true),
        ("exists i, r. unbounded(i, r)", false),
        ("exists i, n, p. powers(i, n, p) & n >= 2*p", true),
    ];
    for (src, want) in cases {
        let f = parse_formula(src).unwrap();
        assert_eq!(decide(&f, &tm, &l).unwrap(), want, "{src}");
    }
    assert!(matches!(
        parse_formula("exists . x"),
        Err(LogicError::Parse { .. })
    ));
    assert!(matches!(
        parse_formula("foo(i)"),
        Err(LogicError::Parse { .. })
    ));
    assert!(matches!(
        parse_formula("prim(i)"),
        Err(LogicError::Arity { .. })
    ));
    assert!(matches!(
        parse_formula("i = j )"),
        Err(LogicError::Parse { .. })
    ));
}

fn random_formula(rng: &mut ChaCha8Rng, depth: u32, vars: &[&str]) -> Formula {
    let v = |rng: &mut ChaCha8Rng| vars[rng.gen_range(0..vars.len())];
    if depth == 0 || rng.gen_bool(0.3) {
        return match rng.gen_range(0..4) {
            0 => Formula::seq_at(
                Term::var(v(rng)) + rng.gen_range(0..3u64),
                rng.gen_range(0..2),
            ),
            1 => Formula::lt(v(rng), Term::var(v(rng)) + rng.gen_range(0..4u64)),
            2 => Formula::seq_eq(v(rng), Term::var(v(rng)) + 1u64),
            _ => Formula::eq(Term::mul(2, v(rng)), v(rng)),
        };
    }
    match rng.gen_range(0..5) {
        0 => !random_formula(rng, depth - 1, vars),
        1 => random_formula(rng, depth - 1, vars) & random_formula(rng, depth - 1, vars),
        2 => random_formula(rng, depth - 1, vars) | random_formula(rng, depth - 1, vars),
        3 => Formula::exists(&[v(rng)], random_formula(rng, depth - 1, vars)),
        _ => Formula::forall(&[v(rng)], random_formula(rng, depth - 1, vars)),
    }
}

#[test]
fn quantifier_duality() {
    let seed = 0x5eed_u64;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let tm = fixtures::thue_morse();
    let l = limits();
    for round in 0..60 {
        let vars = ["a", "b", "c"];
        let body = random_formula(&mut rng, 3, &vars);
        let close = |f: Formula| {
            let free = f.free_vars();
            let names: Vec<&str> = free.iter().map(|s| s.as_str()).collect();
            Formula::exists(&names, f)
        };
        let lhs = close(!Formula::exists(&["a"], body.clone()));
        let rhs = close(Formula::forall(&["a"], !body.clone()));
        assert_eq!(
            decide(&lhs, &tm, &l).unwrap(),
            decide(&rhs, &tm, &l).unwrap(),
            "seed {seed:#x}, round {round}: {body}"
        );
    }
}

#[test]
fn compiled_formula_matches_direct_evaluation() {
    // Random quantifier-free formulas over two variables against a direct
    // evaluator on a prefix.
    let seed = 0xfeed_u64;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let l = limits();
    for (_, m) in fixtures::all() {
        let x = prefix(&m, 128);
        for round in 0..30 {
            let f = random_qf(&mut rng, 3);
            let d = compile(&f, &m, &l)
                .unwrap()
                .reorder(&["a".into(), "b".into()])
                .unwrap();
            for a in 0..40u64 {
                for b in 0..40u64 {
                    assert_eq!(
                        d.accepts(&[a, b]),
                        eval_qf(&f, &x, a, b),
                        "seed {seed:#x} round {round}: {f}"
                    );
                }
            }
        }
    }
}

fn random_qf(rng: &mut ChaCha8Rng, depth: u32) -> Formula {
    let v = |rng: &mut ChaCha8Rng| if rng.gen_bool(0.5) { "a" } else { "b" };
    if depth == 0 || rng.gen_bool(0.3) {
        return match rng.gen_range(0..4) {
            0 => Formula::seq_at(
                Term::var(v(rng)) + rng.gen_range(0..3u64),
                rng.gen_range(0..3),
            ),
            1 => Formula::leq(Term::var(v(rng)) + rng.gen_range(0..4u64), v(rng)),
            2 => Formula::seq_eq(Term::mul(rng.gen_range(1..4), v(rng)), v(rng)),
            _ => factoreq(v(rng), v(rng), rng.gen_range(0..4u64)),
        };
    }
    match rng.gen_range(0..3) {
        0 => !random_qf(rng, depth - 1),
        1 => random_qf(rng, depth - 1) & random_qf(rng, depth - 1),
        _ => random_qf(rng, depth - 1) | random_qf(rng, depth - 1),
    }
}

fn eval_term(t: &Term, a: u64, b: u64) -> u64 {
    match t {
        Term::Var(v) => {
            if v == "a" {
                a
            } else {
                b
            }
        }
        Term::Const(c) => *c,
        Term::Sum(p, q) => eval_term(p, a, b) + eval_term(q, a, b),
        Term::ConstMul(c, v) => c * if v == "a" { a } else { b },
    }
}

fn eval_qf(f: &Formula, x: &[Symbol], a: u64, b: u64) -> bool {
    let t = |t: &Term| eval_term(t, a, b) as usize;
    match f {
        Formula::Bool(v) => *v,
        Formula::Eq(p, q) => t(p) == t(q),
        Formula::Leq(p, q) => t(p) <= t(q),
        Formula::Lt(p, q) => t(p) < t(q),
        Formula::SeqAt(p, s) => x[t(p)] == *s,
        Formula::SeqEq(p, q) => x[t(p)] == x[t(q)],
        Formula::Not(g) => !eval_qf(g, x, a, b),
        Formula::And(gs) => gs.iter().all(|g| eval_qf(g, x, a, b)),
        Formula::Or(gs) => gs.iter().any(|g| eval_qf(g, x, a, b)),
        Formula::Apply(_, args) => feq(x, t(&args[0]), t(&args[1]), t(&args[2])),
        other => panic!("not quantifier-free: {other}"),
    }
}
