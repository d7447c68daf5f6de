use autorank::analysis::{self, MaxExponent};
use autorank::automaton::Limits;
use autorank::fixtures::{self, reference};
use autorank::logic::{factoreq, period_f, prim, Compiler};
use autorank::oracle::{self, dp_factorize, PrefixView};
use autorank::word::{
    self, build_pattern, greedy_parse, is_prefix_code_pair, Block, FactorizationPattern,
    ParseStatus, Reduction, StopRule, Symbol, Word,
};
use proptest::prelude::*;

fn word_strategy(alpha: u32, max: usize) -> impl Strategy<Value = Word> {
    prop::collection::vec(0..alpha, 1..=max).prop_map(Word::new)
}

fn generated_by(w: &Word, a: &Word, b: &Word) -> bool {
    dp_factorize(w, a, b).is_some()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(512))]

    #[test]
    fn period_is_least(x in word_strategy(3, 30)) {
        let p = word::period(&x).unwrap();
        let s = x.symbols();
        let is_period = |q: usize| (0..s.len() - q).all(|i| s[i] == s[i + q]);
        prop_assert!(is_period(p));
        prop_assert!((1..p).all(|q| !is_period(q)));
        prop_assert_eq!(word::exponent(&x).unwrap(), num_rational::Ratio::new(s.len() as u64, p as u64));
    }

    #[test]
    fn primitive_root_rebuilds(base in word_strategy(2, 8), e in 1usize..5) {
        let x = base.pow(e);
        let (r, k) = word::primitive_root(&x).unwrap();
        prop_assert_eq!(r.pow(k), x);
        prop_assert!(word::is_primitive(&r).unwrap());
        prop_assert_eq!(k % e, 0);
    }

    #[test]
    fn conjugation_identity(d in word_strategy(2, 5), u in word_strategy(2, 12)) {
        let du = d.concat(&u);
        match word::solve_conjugation(&d, &u).unwrap() {
            Some(sol) => {
                prop_assert_eq!(du, u.concat(&sol.c()));
                prop_assert_eq!(sol.r.concat(&sol.s), d.clone());
                prop_assert_eq!(d.pow(sol.alpha).concat(&sol.r), u);
            }
            None => prop_assert!(!u.is_prefix_of(&du)),
        }
    }

    #[test]
    fn reductions_generate_their_inputs(u in word_strategy(2, 7), v in word_strategy(2, 7)) {
        for red in [word::strip_to_prefix_code(&u, &v).unwrap(), word::free_reduce(&u, &v).unwrap()] {
            match red {
                Reduction::Single(r) => {
                    prop_assert!(word::commute(&u, &v));
                    prop_assert!(generated_by(&u, &r, &r) && generated_by(&v, &r, &r));
                }
                Reduction::Pair(a, b) => {
                    prop_assert!(!word::commute(&u, &v));
                    prop_assert!(generated_by(&u, &a, &b) && generated_by(&v, &a, &b));
                    prop_assert!(a.len() + b.len() <= u.len() + v.len());
                }
            }
        }
        if let Reduction::Pair(a, b) = word::free_reduce(&u, &v).unwrap() {
            prop_assert!(is_prefix_code_pair(&a, &b));
            prop_assert!(word::is_minimal_pair(&a, &b));
        }
    }

    #[test]
    fn greedy_parse_agrees_with_dp(
        u in word_strategy(2, 5),
        v in word_strategy(2, 5),
        bits in prop::collection::vec(any::<bool>(), 1..20),
    ) {
        prop_assume!(is_prefix_code_pair(&u, &v));
        let pattern = FactorizationPattern::new(bits.clone());
        let w = build_pattern(&pattern, &u, &v);
        let out = greedy_parse(&w, &u, &v, StopRule::Length(w.len() as u64)).unwrap();
        prop_assert_eq!(out.status, ParseStatus::Hit);
        let blocks: Vec<Block> = bits.iter().map(|&b| if b { Block::V } else { Block::U }).collect();
        prop_assert_eq!(&out.blocks, &blocks);
        let cuts = dp_factorize(&w, &u, &v).unwrap();
        prop_assert_eq!(cuts.len(), blocks.len() + 1);
    }

    #[test]
    fn covers_prefix_matches_cut_search(w in word_strategy(2, 16), u in word_strategy(2, 4), v in word_strategy(2, 4)) {
        let n = w.len();
        let direct = (0..=n).any(|cut| {
            let (head, tail) = (w.slice(0, cut), w.slice(cut, n));
            generated_by(&head, &u, &v)
                && ((tail.len() < u.len() && tail.is_prefix_of(&u))
                    || (tail.len() < v.len() && tail.is_prefix_of(&v)))
        });
        prop_assert_eq!(oracle::covers_prefix(w.symbols(), u.symbols(), v.symbols()), direct);
    }

    #[test]
    fn dfao_matches_reference(n in 0u64..1_000_000) {
        let tm = fixtures::thue_morse();
        prop_assert_eq!(tm.eval(n), reference::thue_morse(n));
        prop_assert_eq!(fixtures::mod3().eval(n), reference::mod3(n));
        prop_assert_eq!(fixtures::pow2_char().eval(n), reference::pow2_char(n));
    }
}

#[test]
fn leading_zero_columns_do_not_change_acceptance() {
    let tm = fixtures::thue_morse();
    let mut c = Compiler::new(&tm, Limits::default());
    let dfas = [
        c.compile(&factoreq("i", "j", "n")).unwrap(),
        c.compile(&period_f("i", "n", "p")).unwrap(),
        c.compile(&(prim("i", "n") & autorank::logic::Formula::lt("i", "j")))
            .unwrap(),
    ];
    for d in &dfas {
        assert!(d.is_zero_closed());
        let zero = d.encode_letter(&vec![0; d.tracks()]);
        for a in 0..12u64 {
            for b in 0..12u64 {
                for e in 0..12u64 {
                    let letters = d.encode_tuple(&[a, b, e]);
                    let want = d.is_accepting(d.run(&letters));
                    let mut padded = vec![zero; 2];
                    padded.extend(&letters);
                    assert_eq!(d.is_accepting(d.run(&padded)), want);
                    if letters.first() == Some(&zero) {
                        assert_eq!(d.is_accepting(d.run(&letters[1..])), want);
                    }
                }
            }
        }
    }
}

#[test]
fn prefix_scan_never_exceeds_max_exponent() {
    for (name, m) in fixtures::all() {
        let x: Vec<Symbol> = reference::prefix(name, 1 << 12).unwrap();
        let view = PrefixView::from_symbols(x.clone());
        let mut c = Compiler::new(&m, Limits::default());
        for len in 1..=4 {
            for z in oracle::distinct_factors(&x[..1024], len) {
                let scanned = oracle::brute_max_exponent(&view, &z).unwrap();
                match analysis::max_exponent(&mut c, &z).unwrap() {
                    MaxExponent::Finite(e) => assert!(scanned <= e, "{name} {z}: {scanned} > {e}"),
                    MaxExponent::Unbounded => {}
                    MaxExponent::NotAFactor => panic!("{name} {z} occurs"),
                }
            }
        }
    }
}
