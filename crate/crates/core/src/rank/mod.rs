//! Rank decision: one, two, or at least three.
//!
//! The pipeline checks periodicity, tries cheap certificates, computes the
//! repetition constants, handles words of unbounded exponent, and finally
//! searches block patterns of the length given by the prefix-threshold
//! constant `D`.

mod fixed_pair;

use std::fmt;
use std::time::{Duration, Instant};

use num_bigint::BigUint;
use num_traits::ToPrimitive;
use serde::ser::SerializeMap;
use serde::{Serialize, Serializer};
use thiserror::Error;

pub use fixed_pair::{decide_fixed_pair, prefix_membership};

use crate::analysis::{self, AnalysisError, UnboundedFactor};
use crate::automaton::{AutomatonError, Dfao, Limits};
use crate::logic::{
    prim, setup2_body, setup_formula, unbounded, Compiler, LogicError, PowerFreedom,
};
use crate::oracle::{covers_prefix, distinct_factors};
use crate::word::{commute, FactorizationPattern, Word};

/// Prefix length used to pre-filter candidate pairs before deciding them.
const PAIR_PREFIX: usize = 1 << 10;

/// `L = (15p + 4) κ`: enough `v` blocks to force membership when one
/// word has unbounded exponent.
pub fn lemma_l_constant(kappa: &BigUint, p: &BigUint) -> BigUint {
    (p * 15u32 + 4u32) * kappa
}

/// `D = 10 p² κ + p + 1`: a prefix in `{u, v}^D` forces membership when
/// neither word has unbounded exponent.
pub fn lemma_d_constant(kappa: &BigUint, p: &BigUint) -> BigUint {
    p * p * kappa * 10u32 + p + 1u32
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RankError {
    #[error(transparent)]
    Analysis(#[from] AnalysisError),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("invalid budget: {0}")]
    InvalidBudget(String),
}

/// Resource caps. Exceeding any of them yields an inconclusive verdict.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Budget {
    pub max_automaton_states: usize,
    /// Step-5 patterns; `0` disables the pattern search.
    pub max_patterns: u64,
    /// Candidate words enumerated from a single automaton.
    pub max_enumeration: usize,
    pub wall_time: Duration,
    /// Largest `|u| + |v|` tried by the small-pair fast path.
    pub pair_search_len: usize,
    /// Largest block count tried by the unbounded-factor search.
    pub max_setup_blocks: u64,
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            max_automaton_states: 2_000_000,
            max_patterns: 1 << 16,
            max_enumeration: 256,
            wall_time: Duration::from_secs(600),
            pair_search_len: 8,
            max_setup_blocks: 6,
        }
    }
}

impl Budget {
    pub fn validate(&self) -> Result<(), RankError> {
        let bad = |what: &str| Err(RankError::InvalidBudget(format!("{what} must be positive")));
        if self.max_automaton_states == 0 {
            return bad("max_automaton_states");
        }
        if self.max_enumeration == 0 {
            return bad("max_enumeration");
        }
        if self.wall_time.is_zero() {
            return bad("wall_time");
        }
        if self.max_setup_blocks == 0 {
            return bad("max_setup_blocks");
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Options {
    /// Two-letter, ultimately periodic and small-pair certificates before
    /// the main procedure.
    pub fast_paths: bool,
    /// Replaces the computed `D`. Unsound; for exercising Step 5 only.
    pub assume_d: Option<u64>,
}

impl Default for Options {
    fn default() -> Self {
        Options {
            fast_paths: true,
            assume_d: None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Stage {
    Periodicity,
    FastPath,
    Step1,
    Step2,
    Step3,
    Step4,
    Step5,
}

impl fmt::Display for Stage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

/// Why an explicit pair generates the sequence.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind")]
pub enum Evidence {
    /// The sequence uses exactly these two letters.
    TwoLetters,
    /// `x = u v^ω`.
    UltimatelyPeriodic { preperiod: u64, period: u64 },
    /// Infinitely many prefixes lie in `{u, v}*`, decided on the
    /// prefix-length automaton.
    PrefixAutomaton,
    /// Found while handling a word of unbounded exponent, then decided on
    /// the prefix-length automaton.
    UnboundedFactor { factor: Word, case: String },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind")]
pub enum Certificate {
    ExplicitPair {
        u: Word,
        v: Word,
        evidence: Evidence,
    },
    /// A pattern of length `D` whose formula is satisfiable. `validated`
    /// records the exact membership check of the extracted pair, when it
    /// ran.
    ExistenceByFormula {
        pattern: String,
        u: Word,
        v: Word,
        validated: Option<bool>,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RankVerdict {
    Rank1 {
        period: u64,
        word: Word,
    },
    RankTwo(Certificate),
    RankAtLeastThree,
    Inconclusive {
        stage: Stage,
        required: String,
        budget: String,
    },
}

impl fmt::Display for RankVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RankVerdict::Rank1 { period, word } => {
                write!(f, "Rank1 (period {period}, x = ({word})^ω)")
            }
            RankVerdict::RankTwo(Certificate::ExplicitPair { u, v, evidence }) => {
                write!(f, "RankTwo (x ∈ {{{u}, {v}}}^ω; evidence: {evidence:?})")
            }
            RankVerdict::RankTwo(Certificate::ExistenceByFormula {
                pattern,
                u,
                v,
                validated,
            }) => {
                write!(f, "RankTwo (pattern {pattern} satisfiable with u = {u}, v = {v}; validated: {validated:?})")
            }
            RankVerdict::RankAtLeastThree => write!(f, "RankAtLeastThree"),
            RankVerdict::Inconclusive {
                stage,
                required,
                budget,
            } => {
                write!(
                    f,
                    "Inconclusive at {stage}: requires {required} (budget: {budget})"
                )
            }
        }
    }
}

/// Decimal strings, `None` when the stage that computes them did not run.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct ReportConstants {
    #[serde(rename = "C")]
    pub c: Option<String>,
    pub kappa: Option<String>,
    pub p: Option<String>,
    #[serde(rename = "B")]
    pub b: Option<String>,
    #[serde(rename = "D")]
    pub d: Option<String>,
    #[serde(rename = "L")]
    pub l: Option<String>,
}

/// Configured limits and consumption. Timing is deliberately absent so that
/// reports are reproducible.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct BudgetReport {
    pub max_automaton_states: usize,
    pub max_patterns: u64,
    pub max_enumeration: usize,
    pub wall_time_secs: u64,
    pub pair_search_len: usize,
    pub max_setup_blocks: u64,
    pub peak_automaton_states: usize,
    pub fixed_pair_decisions: u64,
    pub patterns_checked: u64,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct SoundnessFlags {
    pub unsound: bool,
    pub notes: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RankReport {
    pub verdict: RankVerdict,
    pub constants: ReportConstants,
    pub budget_report: BudgetReport,
    pub soundness_flags: SoundnessFlags,
}

impl Serialize for RankReport {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut m = s.serialize_map(None)?;
        match &self.verdict {
            RankVerdict::Rank1 { period, word } => {
                m.serialize_entry("verdict", "Rank1")?;
                m.serialize_entry("period", period)?;
                m.serialize_entry("word", word)?;
            }
            RankVerdict::RankTwo(cert) => {
                m.serialize_entry("verdict", "RankTwo")?;
                m.serialize_entry("certificate", cert)?;
            }
            RankVerdict::RankAtLeastThree => m.serialize_entry("verdict", "RankAtLeastThree")?,
            RankVerdict::Inconclusive {
                stage,
                required,
                budget,
            } => {
                m.serialize_entry("verdict", "Inconclusive")?;
                m.serialize_entry("stage", stage)?;
                m.serialize_entry("required", required)?;
                m.serialize_entry("budget", budget)?;
            }
        }
        m.serialize_entry("constants", &self.constants)?;
        m.serialize_entry("budget_report", &self.budget_report)?;
        m.serialize_entry("soundness_flags", &self.soundness_flags)?;
        m.end()
    }
}

/// Outcome of the search for a partner of a word of unbounded exponent.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum UnboundedOutcome {
    Pair { u: Word, v: Word, case: String },
    NoPair,
    Inconclusive { required: String, budget: String },
}

enum Halt {
    Inconclusive {
        stage: Stage,
        required: String,
        budget: String,
    },
    Fatal(RankError),
}

struct Run<'a> {
    m: &'a Dfao,
    budget: Budget,
    opts: Options,
    limits: Limits,
    c: Compiler<'a>,
    constants: ReportConstants,
    report: BudgetReport,
    flags: SoundnessFlags,
    peak: usize,
}

impl<'a> Run<'a> {
    fn new(m: &'a Dfao, budget: &Budget, opts: &Options) -> Self {
        let limits = Limits {
            max_states: budget.max_automaton_states,
            deadline: Some(Instant::now() + budget.wall_time),
        };
        let report = BudgetReport {
            max_automaton_states: budget.max_automaton_states,
            max_patterns: budget.max_patterns,
            max_enumeration: budget.max_enumeration,
            wall_time_secs: budget.wall_time.as_secs(),
            pair_search_len: budget.pair_search_len,
            max_setup_blocks: budget.max_setup_blocks,
            ..BudgetReport::default()
        };
        Run {
            m,
            budget: budget.clone(),
            opts: opts.clone(),
            c: Compiler::new(m, limits.clone()),
            limits,
            constants: ReportConstants::default(),
            report,
            flags: SoundnessFlags::default(),
            peak: 0,
        }
    }

    fn halt(&self, stage: Stage, e: AnalysisError) -> Halt {
        match e {
            AnalysisError::Logic(LogicError::Automaton(AutomatonError::Budget { cap, .. })) => {
                Halt::Inconclusive {
                    stage,
                    required: format!("more than {cap} automaton states"),
                    budget: format!(
                        "max_automaton_states = {}",
                        self.budget.max_automaton_states
                    ),
                }
            }
            AnalysisError::Logic(LogicError::Automaton(AutomatonError::Timeout { .. })) => {
                Halt::Inconclusive {
                    stage,
                    required: "more wall time".into(),
                    budget: format!("wall_time = {}s", self.budget.wall_time.as_secs()),
                }
            }
            e => Halt::Fatal(RankError::Analysis(e)),
        }
    }

    fn at<T>(&self, stage: Stage, r: Result<T, AnalysisError>) -> Result<T, Halt> {
        r.map_err(|e| self.halt(stage, e))
    }

    fn fixed_pair(&mut self, stage: Stage, u: &Word, v: &Word) -> Result<bool, Halt> {
        self.report.fixed_pair_decisions += 1;
        let r = decide_fixed_pair(self.m, u, v, &self.limits).map_err(AnalysisError::from);
        self.at(stage, r)
    }

    fn finish(mut self, verdict: RankVerdict) -> RankReport {
        self.report.peak_automaton_states = self.peak.max(self.c.peak_states());
        RankReport {
            verdict,
            constants: self.constants,
            budget_report: self.report,
            soundness_flags: self.flags,
        }
    }

    fn pipeline(&mut self) -> Result<RankVerdict, Halt> {
        let r = analysis::is_purely_periodic(&mut self.c);
        if let Some(p) = self.at(Stage::Periodicity, r)? {
            return Ok(RankVerdict::Rank1 {
                period: p,
                word: self.m.prefix(p as usize),
            });
        }
        if self.opts.fast_paths {
            if let Some(v) = self.fast_paths()? {
                return Ok(v);
            }
        }

        let r = analysis::analysis_constants(&mut self.c);
        let k = self.at(Stage::Step1, r)?;
        let l = lemma_l_constant(&k.kappa, &k.p);
        let d = lemma_d_constant(&k.kappa, &k.p);
        self.constants = ReportConstants {
            c: Some(k.c.to_string()),
            kappa: Some(k.kappa.to_string()),
            p: Some(k.p.to_string()),
            b: Some(k.b.to_string()),
            d: None,
            l: Some(l.to_string()),
        };

        let r = analysis::unbounded_primitive_factors(&mut self.c, self.budget.max_enumeration);
        let factors = self.at(Stage::Step2, r)?;

        for f in &factors {
            match self.unbounded_case(f, &factors, &l)? {
                UnboundedOutcome::Pair { u, v, case } => {
                    let evidence = Evidence::UnboundedFactor {
                        factor: f.word.clone(),
                        case,
                    };
                    return Ok(RankVerdict::RankTwo(Certificate::ExplicitPair {
                        u,
                        v,
                        evidence,
                    }));
                }
                UnboundedOutcome::NoPair => {}
                UnboundedOutcome::Inconclusive { required, budget } => {
                    return Err(Halt::Inconclusive {
                        stage: Stage::Step3,
                        required,
                        budget,
                    })
                }
            }
        }

        self.constants.d = Some(d.to_string());
        let d_used = match self.opts.assume_d {
            Some(a) => BigUint::from(a),
            None => d,
        };
        let fits = d_used
            .to_u32()
            .filter(|&d| d < 64 && (1u64 << d) <= self.budget.max_patterns);
        let Some(d_small) = fits else {
            return Err(Halt::Inconclusive {
                stage: Stage::Step5,
                required: format!("2^{d_used} patterns"),
                budget: format!("max_patterns = {}", self.budget.max_patterns),
            });
        };
        self.step5(d_small)
    }

    fn fast_paths(&mut self) -> Result<Option<RankVerdict>, Halt> {
        let r = analysis::occurring_letters(&mut self.c);
        let letters: Vec<_> = self.at(Stage::FastPath, r)?.into_iter().collect();
        if let [a] = letters[..] {
            return Ok(Some(RankVerdict::Rank1 {
                period: 1,
                word: Word::new(vec![a]),
            }));
        }
        if let [a, b] = letters[..] {
            let (u, v) = (Word::new(vec![a]), Word::new(vec![b]));
            return Ok(Some(RankVerdict::RankTwo(Certificate::ExplicitPair {
                u,
                v,
                evidence: Evidence::TwoLetters,
            })));
        }
        let r = analysis::is_ultimately_periodic(&mut self.c);
        if let Some((pre, per)) = self.at(Stage::FastPath, r)? {
            let u = self.m.prefix(pre as usize);
            let v = self.m.factor(pre, per as usize);
            let evidence = Evidence::UltimatelyPeriodic {
                preperiod: pre,
                period: per,
            };
            return Ok(Some(RankVerdict::RankTwo(Certificate::ExplicitPair {
                u,
                v,
                evidence,
            })));
        }
        let prefix = self.m.prefix(PAIR_PREFIX).into_symbols();
        for total in 2..=self.budget.pair_search_len {
            for lu in 1..total {
                let u = Word::from(&prefix[..lu]);
                for v in distinct_factors(&prefix, total - lu) {
                    if v == u
                        || commute(&u, &v)
                        || !covers_prefix(&prefix, u.symbols(), v.symbols())
                    {
                        continue;
                    }
                    if self.fixed_pair(Stage::FastPath, &u, &v)? {
                        let evidence = Evidence::PrefixAutomaton;
                        return Ok(Some(RankVerdict::RankTwo(Certificate::ExplicitPair {
                            u,
                            v,
                            evidence,
                        })));
                    }
                }
            }
        }
        Ok(None)
    }

    /// Looks for `v` with `x ∈ {u, v}^ω`, where `u` has unbounded exponent.
    /// Every returned pair has been decided exactly.
    fn unbounded_case(
        &mut self,
        f: &UnboundedFactor,
        all: &[UnboundedFactor],
        l: &BigUint,
    ) -> Result<UnboundedOutcome, Halt> {
        let st = Stage::Step3;
        let u = &f.word;
        let found = |v: Word, case: &str| UnboundedOutcome::Pair {
            u: u.clone(),
            v,
            case: case.to_string(),
        };

        // Partners that are themselves of unbounded exponent (up to taking
        // roots), or no longer than u.
        for g in all {
            if g.word != *u && self.fixed_pair(st, u, &g.word)? {
                return Ok(found(g.word.clone(), "unbounded-partner"));
            }
        }
        for len in 1..=u.len() {
            let r = analysis::appearance_value(&mut self.c, len as u64);
            let a = self.at(st, r)?;
            let prefix = self.m.prefix(a as usize).into_symbols();
            for v in distinct_factors(&prefix, len) {
                if v != *u && self.fixed_pair(st, u, &v)? {
                    return Ok(found(v, "short-partner"));
                }
            }
        }

        // Remove the longest prefix u^i; the remainder does not start with u.
        let shifted = match analysis::strip_max_power_prefix(&mut self.c, u) {
            Ok((_, s)) => s,
            // x = u^ω: rank one, settled before this stage.
            Err(AnalysisError::PeriodicUnderU(_)) => return Ok(UnboundedOutcome::NoPair),
            Err(e) => return Err(self.halt(st, e)),
        };
        let mut c2 = Compiler::new(&shifted, self.limits.clone());
        let outcome = self.partner_after_strip(&mut c2, &shifted, u, l);
        self.peak = self.peak.max(c2.peak_states());
        outcome
    }

    fn partner_after_strip(
        &mut self,
        c2: &mut Compiler,
        shifted: &Dfao,
        u: &Word,
        l: &BigUint,
    ) -> Result<UnboundedOutcome, Halt> {
        let st = Stage::Step3;
        let found = |v: Word, case: &str| UnboundedOutcome::Pair {
            u: u.clone(),
            v,
            case: case.to_string(),
        };
        let r = analysis::longest_prefix_in_powers(c2, u);
        let Some(lstar) = self.at(st, r)? else {
            self.flags.notes.push(format!(
                "sequence is ultimately a power of a conjugate of {u}"
            ));
            return Ok(UnboundedOutcome::NoPair);
        };
        // v is a prefix of the remainder: a factor of u^ω exactly when
        // |v| <= lstar.
        if lstar > self.budget.max_enumeration as u64 {
            return Ok(UnboundedOutcome::Inconclusive {
                required: format!("{lstar} prefix candidates"),
                budget: format!("max_enumeration = {}", self.budget.max_enumeration),
            });
        }
        for r in 1..=lstar {
            let v = shifted.prefix(r as usize);
            if self.fixed_pair(st, u, &v)? {
                return Ok(found(v, "factor-of-powers"));
            }
        }

        let r = analysis::first_occurrence(c2, u);
        let i_u = self.at(st, r)?.ok_or_else(|| {
            Halt::Fatal(RankError::Precondition(format!(
                "{u} does not occur after stripping"
            )))
        })?;
        let cap = l.to_u64().map_or(self.budget.max_setup_blocks, |l| {
            l.min(self.budget.max_setup_blocks)
        });
        for blocks in 1..=cap {
            let f = setup_formula(i_u, u.len() as u64, blocks, lstar + 1) & !unbounded(0u64, "r");
            let r = c2.compile(&f).map_err(AnalysisError::from);
            let dfa = self.at(st, r)?;
            if dfa.is_empty() {
                return Ok(UnboundedOutcome::NoPair);
            }
            for t in dfa.first_accepted(self.budget.max_enumeration) {
                let v = shifted.prefix(t[0] as usize);
                if self.fixed_pair(st, u, &v)? {
                    return Ok(found(v, "setup"));
                }
            }
        }
        if BigUint::from(cap) >= *l {
            return Err(Halt::Fatal(RankError::Analysis(
                AnalysisError::Inconsistent(format!(
                    "{l} setup blocks satisfiable for {u} but no partner verified"
                )),
            )));
        }
        Ok(UnboundedOutcome::Inconclusive {
            required: format!("L = {l} setup blocks"),
            budget: format!("max_setup_blocks = {}", self.budget.max_setup_blocks),
        })
    }

    fn step5(&mut self, d: u32) -> Result<RankVerdict, Halt> {
        let st = Stage::Step5;
        for idx in 0..1u64 << d {
            let gray = idx ^ (idx >> 1);
            let pattern = FactorizationPattern::from_index(gray, d as usize);
            self.report.patterns_checked += 1;
            let r = self
                .c
                .witness(&setup2_body(&pattern, PowerFreedom::NotUnbounded))
                .map_err(AnalysisError::from);
            let Some(w) = self.at(st, r)? else { continue };
            let get = |name: &str| w.iter().find(|(v, _)| v == name).map(|(_, x)| *x).unwrap();
            let u = self.m.factor(get("i"), get("r") as usize);
            let v = self.m.factor(get("j"), get("s") as usize);
            self.report.fixed_pair_decisions += 1;
            let validated = decide_fixed_pair(self.m, &u, &v, &self.limits).ok();
            if validated == Some(false) {
                self.flags.notes.push(format!(
                    "pattern {pattern}: extracted pair ({u}, {v}) does not generate x"
                ));
            }
            return Ok(RankVerdict::RankTwo(Certificate::ExistenceByFormula {
                pattern: pattern.to_string(),
                u,
                v,
                validated,
            }));
        }
        Ok(RankVerdict::RankAtLeastThree)
    }
}

/// Decides whether the sequence has rank one, two, or at least three.
/// Budget breaches produce [`RankVerdict::Inconclusive`], not errors.
pub fn rank2_decide(m: &Dfao, budget: &Budget, opts: &Options) -> Result<RankReport, RankError> {
    budget.validate()?;
    let mut run = Run::new(m, budget, opts);
    if let Some(d) = opts.assume_d {
        run.flags.unsound = true;
        run.flags
            .notes
            .push(format!("UNSOUND-FOR-PRODUCTION: D overridden to {d}"));
    }
    let verdict = match run.pipeline() {
        Ok(v) => v,
        Err(Halt::Inconclusive {
            stage,
            required,
            budget,
        }) => RankVerdict::Inconclusive {
            stage,
            required,
            budget,
        },
        Err(Halt::Fatal(e)) => return Err(e),
    };
    Ok(run.finish(verdict))
}

/// Searches for `v` with `x ∈ {u, v}^ω`, where `u` must be a primitive
/// factor of unbounded exponent.
pub fn decide_with_unbounded(
    m: &Dfao,
    u: &Word,
    budget: &Budget,
) -> Result<UnboundedOutcome, RankError> {
    budget.validate()?;
    if u.is_empty() {
        return Err(RankError::Analysis(AnalysisError::EmptyWord));
    }
    let mut run = Run::new(m, budget, &Options::default());
    let outcome = (|| {
        let r = analysis::first_occurrence(&mut run.c, u);
        let Some(i) = run.at(Stage::Step3, r)? else {
            return Err(Halt::Fatal(RankError::Precondition(format!(
                "{u} is not a factor"
            ))));
        };
        let len = u.len() as u64;
        let r = run
            .c
            .decide(&(prim(i, len) & unbounded(i, len)))
            .map_err(AnalysisError::from);
        if !run.at(Stage::Step3, r)? {
            return Err(Halt::Fatal(RankError::Precondition(format!(
                "{u} is not primitive of unbounded exponent"
            ))));
        }
        let r = analysis::analysis_constants(&mut run.c);
        let k = run.at(Stage::Step1, r)?;
        let l = lemma_l_constant(&k.kappa, &k.p);
        let r = analysis::unbounded_primitive_factors(&mut run.c, budget.max_enumeration);
        let all = run.at(Stage::Step2, r)?;
        let me = all
            .iter()
            .find(|f| f.word == *u)
            .cloned()
            .unwrap_or(UnboundedFactor {
                first_position: i,
                length: len,
                word: u.clone(),
            });
        run.unbounded_case(&me, &all, &l)
    })();
    match outcome {
        Ok(o) => Ok(o),
        Err(Halt::Inconclusive {
            required, budget, ..
        }) => Ok(UnboundedOutcome::Inconclusive { required, budget }),
        Err(Halt::Fatal(e)) => Err(e),
    }
}
