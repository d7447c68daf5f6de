use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Duration;

use anyhow::{anyhow, bail, Context, Result};
use autorank::analysis;
use autorank::automaton::{Dfao, Limits};
use autorank::fixtures;
use autorank::logic::{parse_formula, Compiler};
use autorank::oracle::{self, PrefixView};
use autorank::rank::{self, Budget, Options};
use autorank::word::Word;
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

#[derive(Parser)]
#[command(
    name = "autorank",
    version,
    about = "Rank and repetition analysis of automatic sequences"
)]
struct Cli {
    #[arg(long, value_enum, default_value_t = Format::Human, global = true)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Human,
    Json,
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct Source {
    /// Bundled sequence: thue-morse, mod3, pow2-char, ternary-tm.
    #[arg(long)]
    fixture: Option<String>,
    /// DFAO text file.
    #[arg(long)]
    input: Option<PathBuf>,
}

impl Source {
    fn load(&self) -> Result<Dfao> {
        if let Some(name) = &self.fixture {
            return fixtures::load(name).ok_or_else(|| {
                anyhow!(
                    "unknown fixture {name:?}; expected one of {}",
                    fixtures::NAMES.join(", ")
                )
            });
        }
        let path = self.input.as_ref().expect("clap enforces one source");
        let text =
            std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        Dfao::parse(&text).map_err(|e| anyhow!("{}: {e}", path.display()))
    }
}

#[derive(Args)]
struct BudgetArgs {
    /// Largest automaton built during any single operation.
    #[arg(long, default_value_t = Budget::default().max_automaton_states)]
    budget_states: usize,
    /// Largest number of Step-5 patterns examined.
    #[arg(long, default_value_t = Budget::default().max_patterns)]
    budget_patterns: u64,
    /// Largest number of candidates enumerated from one automaton.
    #[arg(long, default_value_t = Budget::default().max_enumeration)]
    budget_enumeration: usize,
    /// Wall-time limit in seconds.
    #[arg(long, default_value_t = Budget::default().wall_time.as_secs())]
    wall_time: u64,
    /// Largest |u| + |v| tried by the small-pair fast path.
    #[arg(long, default_value_t = Budget::default().pair_search_len)]
    pair_search_len: usize,
    /// Largest block count tried when a word has unbounded exponent.
    #[arg(long, default_value_t = Budget::default().max_setup_blocks)]
    setup_blocks: u64,
    /// Test hook: replace the computed D. Marks the verdict unsound.
    #[arg(long = "assume-D", value_name = "D")]
    assume_d: Option<u64>,
    /// Test hook: skip the two-letter, ultimately periodic and small-pair
    /// certificates.
    #[arg(long)]
    no_fast_paths: bool,
}

impl BudgetArgs {
    fn budget(&self) -> Budget {
        Budget {
            max_automaton_states: self.budget_states,
            max_patterns: self.budget_patterns,
            max_enumeration: self.budget_enumeration,
            wall_time: Duration::from_secs(self.wall_time),
            pair_search_len: self.pair_search_len,
            max_setup_blocks: self.setup_blocks,
        }
    }

    fn options(&self) -> Options {
        Options {
            fast_paths: !self.no_fast_paths,
            assume_d: self.assume_d,
        }
    }

    fn limits(&self) -> Limits {
        Limits {
            max_states: self.budget_states,
            deadline: Some(std::time::Instant::now() + Duration::from_secs(self.wall_time)),
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate x[n] for a single n or a range `a..b`.
    Eval {
        #[command(flatten)]
        source: Source,
        #[arg(long)]
        n: String,
    },
    /// Constants, letters, periodicity and unbounded factors.
    Analyze {
        #[command(flatten)]
        source: Source,
        #[command(flatten)]
        budget: BudgetArgs,
    },
    /// Primitive factors of unbounded exponent.
    Factors {
        #[command(flatten)]
        source: Source,
        #[command(flatten)]
        budget: BudgetArgs,
    },
    /// Largest exponent of a word among the factors.
    MaxExponent {
        #[command(flatten)]
        source: Source,
        #[arg(long)]
        word: Word,
    },
    /// Pure and ultimate periodicity.
    Periodic {
        #[command(flatten)]
        source: Source,
    },
    /// Rank decision: Rank1, RankTwo, RankAtLeastThree or Inconclusive.
    Rank2 {
        #[command(flatten)]
        source: Source,
        #[command(flatten)]
        budget: BudgetArgs,
    },
    /// Decide a first-order formula; with free variables, print the
    /// least satisfying assignment.
    Decide {
        #[command(flatten)]
        source: Source,
        #[arg(long)]
        formula: String,
    },
    /// Exact test of x ∈ {u, v}^ω.
    FixedPair {
        #[command(flatten)]
        source: Source,
        #[arg(long)]
        u: Word,
        #[arg(long)]
        v: Word,
    },
    /// Brute-force checks on prefixes.
    #[command(subcommand)]
    Oracle(OracleCommand),
}

#[derive(Subcommand)]
enum OracleCommand {
    /// Factorization of a word over {u, v}.
    Dp {
        #[arg(long)]
        word: Word,
        #[arg(long)]
        u: Word,
        #[arg(long)]
        v: Word,
    },
    /// Pairs covering a prefix.
    Pairs {
        #[command(flatten)]
        source: Source,
        #[arg(long, default_value_t = 1024)]
        prefix_len: usize,
        #[arg(long, default_value_t = 4)]
        max_len: usize,
    },
    /// Appearance function and optional exponent scan on a prefix.
    Appearance {
        #[command(flatten)]
        source: Source,
        #[arg(long, default_value_t = 1 << 14)]
        prefix_len: usize,
        #[arg(long)]
        n: usize,
    },
    /// Largest exponent of a word on a prefix.
    Exponent {
        #[command(flatten)]
        source: Source,
        #[arg(long, default_value_t = 1 << 16)]
        prefix_len: usize,
        #[arg(long)]
        word: Word,
    },
    /// Counterexample search for the five-occurrence proposition.
    CombSearch {
        #[arg(long, default_value_t = 4)]
        max_uv: usize,
        #[arg(long, default_value_t = 14)]
        max_w: usize,
        #[arg(long, default_value_t = 2)]
        alphabet: u32,
    },
    /// Counterexample search for the d = ε lemma.
    DepsilonSearch {
        #[arg(long, default_value_t = 5)]
        max_uv: usize,
        #[arg(long, default_value_t = 6)]
        max_w: usize,
        #[arg(long, default_value_t = 2)]
        alphabet: u32,
    },
}

fn parse_range(s: &str) -> Result<(u64, u64)> {
    if let Some((a, b)) = s.split_once("..") {
        let a: u64 = a.trim().parse().context("range start")?;
        let b: u64 = b.trim().parse().context("range end")?;
        if b < a {
            bail!("empty range {s}");
        }
        Ok((a, b))
    } else {
        let n: u64 = s.trim().parse().context("index")?;
        Ok((n, n + 1))
    }
}

/// Output as (human text, JSON value).
fn run(command: Command) -> Result<(String, Value)> {
    Ok(match command {
        Command::Eval { source, n } => {
            let m = source.load()?;
            let (a, b) = parse_range(&n)?;
            let values: Vec<u32> = (a..b).map(|i| m.eval(i)).collect();
            let text = values
                .iter()
                .map(|v| v.to_string())
                .collect::<Vec<_>>()
                .join(if m.alphabet().iter().any(|&s| s > 9) {
                    " "
                } else {
                    ""
                });
            (text, json!({ "start": a, "values": values }))
        }
        Command::Analyze { source, budget } => {
            let m = source.load()?;
            let mut c = Compiler::new(&m, budget.limits());
            let letters = analysis::occurring_letters(&mut c)?;
            let pure = analysis::is_purely_periodic(&mut c)?;
            let ult = analysis::is_ultimately_periodic(&mut c)?;
            let k = analysis::analysis_constants(&mut c)?;
            let factors = analysis::unbounded_primitive_factors(&mut c, budget.budget_enumeration)?;
            let words: Vec<String> = factors.iter().map(|f| f.word.to_string()).collect();
            let text = format!(
                "letters: {letters:?}\npurely periodic: {}\nultimately periodic: {}\nC = {}\nkappa = {}\nB = p = {}\nappearance automaton states: {}\npower automaton states: {}\nunbounded primitive factors: {:?}",
                pure.map_or("no".into(), |p| format!("period {p}")),
                ult.map_or("no".into(), |(c, p)| format!("preperiod {c}, period {p}")),
                k.c, k.kappa, k.b, k.appearance_states, k.power_states, words
            );
            let value = json!({
                "letters": letters,
                "purely_periodic": pure,
                "ultimately_periodic": ult.map(|(c, p)| json!({ "preperiod": c, "period": p })),
                "constants": { "C": k.c.to_string(), "kappa": k.kappa.to_string(), "B": k.b.to_string(), "p": k.p.to_string(),
                               "appearance_states": k.appearance_states, "power_states": k.power_states },
                "unbounded_primitive_factors": factors,
            });
            (text, value)
        }
        Command::Factors { source, budget } => {
            let m = source.load()?;
            let mut c = Compiler::new(&m, budget.limits());
            let factors = analysis::unbounded_primitive_factors(&mut c, budget.budget_enumeration)?;
            let text = if factors.is_empty() {
                "none".to_string()
            } else {
                factors
                    .iter()
                    .map(|f| format!("{} (first at {})", f.word, f.first_position))
                    .collect::<Vec<_>>()
                    .join("\n")
            };
            (text, json!({ "unbounded_primitive_factors": factors }))
        }
        Command::MaxExponent { source, word } => {
            let m = source.load()?;
            let mut c = Compiler::new(&m, Limits::default());
            let e = analysis::max_exponent(&mut c, &word)?;
            (
                e.to_string(),
                json!({ "word": word, "max_exponent": e.to_string() }),
            )
        }
        Command::Periodic { source } => {
            let m = source.load()?;
            let mut c = Compiler::new(&m, Limits::default());
            let pure = analysis::is_purely_periodic(&mut c)?;
            let ult = analysis::is_ultimately_periodic(&mut c)?;
            let text = match (pure, ult) {
                (Some(p), _) => format!("purely periodic, period {p}"),
                (None, Some((c, p))) => format!("ultimately periodic, preperiod {c}, period {p}"),
                _ => "not ultimately periodic".to_string(),
            };
            let value = json!({
                "purely_periodic": pure,
                "ultimately_periodic": ult.map(|(c, p)| json!({ "preperiod": c, "period": p })),
            });
            (text, value)
        }
        Command::Rank2 { source, budget } => {
            let m = source.load()?;
            let report = rank::rank2_decide(&m, &budget.budget(), &budget.options())?;
            let mut lines = Vec::new();
            if report.soundness_flags.unsound {
                lines.push("UNSOUND-FOR-PRODUCTION".to_string());
            }
            lines.push(format!("verdict: {}", report.verdict));
            let k = &report.constants;
            for (name, v) in [
                ("C", &k.c),
                ("kappa", &k.kappa),
                ("p", &k.p),
                ("B", &k.b),
                ("D", &k.d),
                ("L", &k.l),
            ] {
                if let Some(v) = v {
                    lines.push(format!("{name} = {v}"));
                }
            }
            lines.extend(
                report
                    .soundness_flags
                    .notes
                    .iter()
                    .map(|n| format!("note: {n}")),
            );
            (lines.join("\n"), serde_json::to_value(&report)?)
        }
        Command::Decide { source, formula } => {
            let m = source.load()?;
            let f = parse_formula(&formula)?;
            let mut c = Compiler::new(&m, Limits::default());
            if f.free_vars().is_empty() {
                let truth = c.decide(&f)?;
                (
                    truth.to_string(),
                    json!({ "formula": formula, "value": truth }),
                )
            } else {
                let w = c.witness(&f)?;
                let text = match &w {
                    None => "unsatisfiable".to_string(),
                    Some(a) => a
                        .iter()
                        .map(|(v, x)| format!("{v} = {x}"))
                        .collect::<Vec<_>>()
                        .join(", "),
                };
                let assignment = w.map(|a| {
                    a.into_iter()
                        .map(|(k, v)| (k, json!(v)))
                        .collect::<serde_json::Map<_, _>>()
                });
                (text, json!({ "formula": formula, "witness": assignment }))
            }
        }
        Command::FixedPair { source, u, v } => {
            let m = source.load()?;
            if u.is_empty() || v.is_empty() {
                bail!("u and v must be nonempty");
            }
            let member = rank::decide_fixed_pair(&m, &u, &v, &Limits::default())?;
            (
                member.to_string(),
                json!({ "u": u, "v": v, "member": member }),
            )
        }
        Command::Oracle(o) => run_oracle(o)?,
    })
}

fn run_oracle(command: OracleCommand) -> Result<(String, Value)> {
    Ok(match command {
        OracleCommand::Dp { word, u, v } => {
            if u.is_empty() || v.is_empty() {
                bail!("u and v must be nonempty");
            }
            let cuts = oracle::dp_factorize(&word, &u, &v);
            let text = cuts
                .as_ref()
                .map_or("no factorization".into(), |c| format!("{c:?}"));
            (text, json!({ "cuts": cuts }))
        }
        OracleCommand::Pairs {
            source,
            prefix_len,
            max_len,
        } => {
            let p = PrefixView::new(&source.load()?, prefix_len);
            let pairs = oracle::search_pairs(&p, max_len);
            let text = pairs
                .iter()
                .map(|(u, v)| format!("({u}, {v})"))
                .collect::<Vec<_>>()
                .join("\n");
            (
                text,
                json!({ "evidence": "prefix", "prefix_len": prefix_len, "pairs": pairs }),
            )
        }
        OracleCommand::Appearance {
            source,
            prefix_len,
            n,
        } => {
            let p = PrefixView::new(&source.load()?, prefix_len);
            let a = oracle::brute_appearance(&p, n);
            (
                a.to_string(),
                json!({ "evidence": "prefix", "prefix_len": prefix_len, "n": n, "appearance": a }),
            )
        }
        OracleCommand::Exponent {
            source,
            prefix_len,
            word,
        } => {
            if word.is_empty() {
                bail!("word must be nonempty");
            }
            let p = PrefixView::new(&source.load()?, prefix_len);
            let e = oracle::brute_max_exponent(&p, &word).map(|r| r.to_string());
            (
                e.clone().unwrap_or_else(|| "not-a-factor".into()),
                json!({ "evidence": "prefix", "word": word, "max_exponent": e }),
            )
        }
        OracleCommand::CombSearch {
            max_uv,
            max_w,
            alphabet,
        } => {
            let r = oracle::search_comb_counterexample(max_uv, max_w, alphabet);
            let text = r
                .as_ref()
                .map_or("no counterexample".into(), |w| format!("{w:?}"));
            (text, json!({ "counterexample": r }))
        }
        OracleCommand::DepsilonSearch {
            max_uv,
            max_w,
            alphabet,
        } => {
            let r = oracle::search_depsilon_counterexample(max_uv, max_w, alphabet);
            let text = r
                .as_ref()
                .map_or("no counterexample".into(), |w| format!("{w:?}"));
            (text, json!({ "counterexample": r }))
        }
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let format = cli.format;
    match run(cli.command) {
        Ok((text, value)) => {
            match format {
                Format::Human => println!("{text}"),
                Format::Json => println!(
                    "{}",
                    serde_json::to_string_pretty(&value).expect("values serialize")
                ),
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
