//! Finite traces of the iterative construction behind the Central Sets
//! Theorem, and an independent checker for them.
//!
//! Round `n` works in the cylinder `U_n = [y(0) … y(depth_n − 1)]` around a
//! companion word `y` with `y(0) = 1`. It takes the first J-witness
//! `(r_n, α_n)` with `α_n` beyond all earlier blocks over the common
//! entering times of `x` and `y` into `U_n`, then sets
//! `depth_{n+1} = depth_n + r_n + max_i |s^{(i)}_{α_n}|`. Every combined
//! shift `r_β + s^{(i)}_{φ(β)}` with `β ⊆ {1..n}` then lies below
//! `depth_{n+1}`, so reading `x` at it after a later shift reads `y`, and
//! `y` is 1 there by induction.

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::jsets::{j_witness_after, IPGenerators, JWitness, JWitnesses};
use crate::symdyn::{entering_times, strong_prox_times, SymbolicWord};
use crate::windowsets::WindowSet;

/// Subsets `β` enumerated by [`verify_cst`] number `2^D − 1`.
pub const MAX_ROUNDS: usize = 24;
/// Violations kept per category; counts stay exact.
pub const MAX_REPORTED: usize = 1000;

/// How the companion word was obtained.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum YChoice {
    /// Supplied by the caller.
    Explicit,
    /// `x` itself.
    SelfWord,
    /// `σ^t x` for the `t ∈ F` whose depth-`depth` pattern recurs most often.
    Shift { t: usize, depth: usize, returns: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Companion {
    #[serde(flatten)]
    pub choice: YChoice,
    /// Set when `y(0)` was 0 and has been overwritten with 1.
    pub anchored: bool,
    #[serde(skip)]
    pub word: SymbolicWord,
}

impl Companion {
    fn anchor(word: SymbolicWord, choice: YChoice) -> Result<Self> {
        let anchored = word.get(0)? == 0;
        Ok(Companion { choice, anchored, word: word.with_origin(1)? })
    }

    pub fn explicit(word: SymbolicWord) -> Result<Self> {
        Self::anchor(word, YChoice::Explicit)
    }

    pub fn self_word(x: &SymbolicWord) -> Result<Self> {
        Self::anchor(x.clone(), YChoice::SelfWord)
    }

    /// Scans `t ∈ F` with `t ≤ len/2`, at most `candidates` of them, and picks
    /// the one whose length-`depth` pattern has the most entering times in
    /// `x`; ties go to the smallest `t`.
    pub fn auto_shift(x: &SymbolicWord, depth: usize, candidates: usize) -> Result<Self> {
        if depth == 0 {
            return Err(Error::arg("pattern depth must be >= 1"));
        }
        let limit = x.len() / 2;
        let mut best: Option<(usize, usize)> = None;
        for t in (1..=limit).filter(|&t| x.bits()[t] == 1).take(candidates) {
            if t + depth > x.len() {
                break;
            }
            let returns = entering_times(x, &x.shift(t)?.initial_cylinder(depth)?)?.len();
            if best.is_none_or(|(_, b)| returns > b) {
                best = Some((t, returns));
            }
        }
        let (t, returns) = best.ok_or_else(|| Error::Domain("no member of F in the first half of the word".into()))?;
        Self::anchor(x.shift(t)?, YChoice::Shift { t, depth, returns })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "engine", rename_all = "snake_case")]
pub enum Engine {
    /// One witness per round, first in order; any failed round fails the trace.
    Greedy,
    /// Retries earlier rounds with later witnesses, visiting at most `budget` witnesses.
    Backtracking { budget: u64 },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CstStep {
    pub r: usize,
    pub alpha: Vec<usize>,
    pub depth: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CstTrace {
    pub steps: Vec<CstStep>,
}

impl CstTrace {
    pub fn rounds(&self) -> usize {
        self.steps.len()
    }

    /// Blocks of the induced homomorphism `φ({n}) = α_n`.
    pub fn phi(&self) -> Vec<Vec<usize>> {
        self.steps.iter().map(|s| s.alpha.clone()).collect()
    }

    /// `r_β` for `β` given as a bitmask over rounds (bit `n−1` is round `n`).
    pub fn r_beta(&self, beta: u32) -> u128 {
        self.steps.iter().enumerate().filter(|(n, _)| beta >> n & 1 == 1).map(|(_, s)| s.r as u128).sum()
    }

    /// `φ(β)` as a sorted index list.
    pub fn phi_beta(&self, beta: u32) -> Vec<usize> {
        let mut out: Vec<usize> = self
            .steps
            .iter()
            .enumerate()
            .filter(|(n, _)| beta >> n & 1 == 1)
            .flat_map(|(_, s)| s.alpha.iter().copied())
            .collect();
        out.sort_unstable();
        out
    }
}

/// Why a trace could not be completed.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "reason", rename_all = "snake_case")]
pub enum CstFailure {
    /// Every generator index is already used by earlier blocks.
    GeneratorsExhausted { round: usize },
    /// No witness in the common entering times of `U_round`.
    NoWitness { round: usize, depth: usize, times: usize, window: usize },
    /// The backtracking budget ran out before a full trace was found.
    BudgetExhausted { visited: u64 },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum CstOutcome {
    Trace(CstTrace),
    None(CstFailure),
}

fn step_extent(g: &IPGenerators, w: &JWitness) -> Result<usize> {
    let s = g.value(&w.alpha)?;
    let spread = s.iter().map(|v| v.abs()).max().unwrap_or_else(BigInt::zero);
    (spread + w.r)
        .to_usize()
        .ok_or_else(|| Error::Overflow { what: "cylinder depth".into(), needed: u128::MAX, window: usize::MAX })
}

fn times_for(x: &SymbolicWord, y: &SymbolicWord, depth: usize, round: usize, rounds: usize) -> Result<WindowSet> {
    let usable = x.len().min(y.len());
    if depth + 1 > usable {
        return Err(Error::Margin {
            what: format!("round {round} of {rounds} needs a cylinder of depth {depth} plus one shift"),
            shortfall: depth + 1 - usable,
        });
    }
    strong_prox_times(x, y, depth - 1)
}

/// Runs `rounds` rounds of the construction for `x = 1_F` and companion `y`.
pub fn cst_trace(
    x: &SymbolicWord,
    y: &Companion,
    g: &IPGenerators,
    rounds: usize,
    engine: Engine,
) -> Result<CstOutcome> {
    if rounds == 0 {
        return Err(Error::arg("need at least one round"));
    }
    if rounds > MAX_ROUNDS {
        return Err(Error::Capacity { what: "rounds".into(), got: rounds as u128, limit: MAX_ROUNDS as u128 });
    }
    match engine {
        Engine::Greedy => greedy(x, &y.word, g, rounds),
        Engine::Backtracking { budget } => {
            let mut visited = 0;
            let mut steps = Vec::new();
            let mut last_failure = None;
            let found = backtrack(x, &y.word, g, rounds, 1, 0, &mut steps, &mut visited, budget, &mut last_failure)?;
            Ok(match found {
                true => CstOutcome::Trace(CstTrace { steps }),
                false if visited >= budget => CstOutcome::None(CstFailure::BudgetExhausted { visited }),
                false => CstOutcome::None(last_failure.unwrap_or(CstFailure::GeneratorsExhausted { round: 1 })),
            })
        }
    }
}

fn greedy(x: &SymbolicWord, y: &SymbolicWord, g: &IPGenerators, rounds: usize) -> Result<CstOutcome> {
    let mut steps = Vec::with_capacity(rounds);
    let mut depth = 1;
    let mut used = 0;
    for round in 1..=rounds {
        if used >= g.len() {
            return Ok(CstOutcome::None(CstFailure::GeneratorsExhausted { round }));
        }
        let times = times_for(x, y, depth, round, rounds)?;
        let Some(w) = j_witness_after(&times, g, used)? else {
            return Ok(CstOutcome::None(CstFailure::NoWitness {
                round,
                depth,
                times: times.len(),
                window: times.window(),
            }));
        };
        let next = depth + step_extent(g, &w)?;
        used = *w.alpha.last().unwrap();
        steps.push(CstStep { r: w.r, alpha: w.alpha, depth });
        depth = next;
    }
    Ok(CstOutcome::Trace(CstTrace { steps }))
}

#[allow(clippy::too_many_arguments)]
fn backtrack(
    x: &SymbolicWord,
    y: &SymbolicWord,
    g: &IPGenerators,
    rounds: usize,
    depth: usize,
    used: usize,
    steps: &mut Vec<CstStep>,
    visited: &mut u64,
    budget: u64,
    last_failure: &mut Option<CstFailure>,
) -> Result<bool> {
    let round = steps.len() + 1;
    if round > rounds {
        return Ok(true);
    }
    if used >= g.len() {
        *last_failure = Some(CstFailure::GeneratorsExhausted { round });
        return Ok(false);
    }
    let times = match times_for(x, y, depth, round, rounds) {
        Ok(t) => t,
        // a later round running off the word is a dead end for this branch
        Err(Error::Margin { .. }) if round > 1 => return Ok(false),
        Err(e) => return Err(e),
    };
    let mut any = false;
    for w in JWitnesses::new(&times, g, used)? {
        any = true;
        if *visited >= budget {
            return Ok(false);
        }
        *visited += 1;
        let next = depth + step_extent(g, &w)?;
        let last = *w.alpha.last().unwrap();
        steps.push(CstStep { r: w.r, alpha: w.alpha, depth });
        if backtrack(x, y, g, rounds, next, last, steps, visited, budget, last_failure)? {
            return Ok(true);
        }
        steps.pop();
    }
    if !any {
        *last_failure = Some(CstFailure::NoWitness { round, depth, times: times.len(), window: times.window() });
    }
    Ok(false)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CstViolation {
    pub beta: Vec<usize>,
    pub component: usize,
    pub value: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DepthViolation {
    /// Largest round in `β`; the shift must stay below `depth_{round+1}`.
    pub round: usize,
    pub beta: Vec<usize>,
    pub component: usize,
    pub value: String,
    pub next_depth: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CstVerdict {
    pub ok: bool,
    pub checked_beta_count: u64,
    pub components: usize,
    pub membership_violation_count: u64,
    pub margin_violation_count: u64,
    pub depth_violation_count: u64,
    pub membership_violations: Vec<CstViolation>,
    pub margin_violations: Vec<CstViolation>,
    pub depth_violations: Vec<DepthViolation>,
}

fn structural_check(g: &IPGenerators, trace: &CstTrace) -> Result<()> {
    let d = trace.rounds();
    if d == 0 {
        return Err(Error::Domain("trace has no steps".into()));
    }
    if d > MAX_ROUNDS {
        return Err(Error::Capacity { what: "trace rounds".into(), got: d as u128, limit: MAX_ROUNDS as u128 });
    }
    for (n, s) in trace.steps.iter().enumerate() {
        let round = n + 1;
        if s.r == 0 {
            return Err(Error::Domain(format!("step {round}: r must be >= 1")));
        }
        if s.alpha.is_empty() || s.alpha.windows(2).any(|p| p[0] >= p[1]) {
            return Err(Error::Domain(format!("step {round}: alpha must be nonempty and strictly increasing")));
        }
        if s.alpha.iter().any(|&t| t == 0 || t > g.len()) {
            return Err(Error::Domain(format!("step {round}: alpha has an index outside 1..={}", g.len())));
        }
        if let Some(prev) = n.checked_sub(1).map(|p| &trace.steps[p]) {
            if prev.alpha.last() >= s.alpha.first() {
                return Err(Error::Domain(format!("step {round}: alpha does not start after step {n}'s block")));
            }
            if prev.depth >= s.depth {
                return Err(Error::Domain(format!("step {round}: depth does not increase")));
            }
        }
    }
    Ok(())
}

/// Exact combined shifts `r_n + s^{(i)}_{α_n}` per round.
fn round_shifts(g: &IPGenerators, trace: &CstTrace) -> Result<Vec<Vec<BigInt>>> {
    trace
        .steps
        .iter()
        .map(|s| Ok(g.value(&s.alpha)?.into_iter().map(|v| v + s.r).collect()))
        .collect()
}

enum Finding {
    Margin(CstViolation),
    Membership(CstViolation),
    Depth(DepthViolation),
}

/// Checks every nonempty `β ⊆ {1..D}` and every component directly
/// against `F`, recomputing all sums from the trace and the generators.
pub fn verify_cst(set: &WindowSet, g: &IPGenerators, trace: &CstTrace) -> Result<CstVerdict> {
    structural_check(g, trace)?;
    let d = trace.rounds();
    let m = g.dim();
    let exact = round_shifts(g, trace)?;
    let small: Option<Vec<Vec<i128>>> =
        exact.iter().map(|row| row.iter().map(|v| v.to_i128().filter(|x| x.abs() < 1 << 100)).collect()).collect();
    let window = set.window() as i128;

    let findings: Vec<Finding> = (1u32..(1u32 << d))
        .into_par_iter()
        .flat_map_iter(|beta| {
            let rounds: Vec<usize> = (0..d).filter(|n| beta >> n & 1 == 1).collect();
            let top = *rounds.last().unwrap();
            let mut out = Vec::new();
            for i in 0..m {
                let value: BigInt = match &small {
                    Some(s) => BigInt::from(rounds.iter().map(|&n| s[n][i]).sum::<i128>()),
                    None => rounds.iter().map(|&n| &exact[n][i]).sum(),
                };
                let beta_list: Vec<usize> = rounds.iter().map(|n| n + 1).collect();
                let v = value.to_i128();
                let in_window = v.is_some_and(|v| (1..=window).contains(&v));
                if !in_window {
                    out.push(Finding::Margin(CstViolation {
                        beta: beta_list.clone(),
                        component: i + 1,
                        value: value.to_string(),
                    }));
                } else if !set.contains(v.unwrap() as usize) {
                    out.push(Finding::Membership(CstViolation {
                        beta: beta_list.clone(),
                        component: i + 1,
                        value: value.to_string(),
                    }));
                }
                if top + 1 < d {
                    let next_depth = trace.steps[top + 1].depth;
                    if value >= BigInt::from(next_depth) {
                        out.push(Finding::Depth(DepthViolation {
                            round: top + 1,
                            beta: beta_list,
                            component: i + 1,
                            value: value.to_string(),
                            next_depth,
                        }));
                    }
                }
            }
            out
        })
        .collect();

    let mut verdict = CstVerdict {
        ok: true,
        checked_beta_count: (1u64 << d) - 1,
        components: m,
        membership_violation_count: 0,
        margin_violation_count: 0,
        depth_violation_count: 0,
        membership_violations: Vec::new(),
        margin_violations: Vec::new(),
        depth_violations: Vec::new(),
    };
    for f in findings {
        match f {
            Finding::Margin(v) => {
                verdict.margin_violation_count += 1;
                if verdict.margin_violations.len() < MAX_REPORTED {
                    verdict.margin_violations.push(v);
                }
            }
            Finding::Membership(v) => {
                verdict.membership_violation_count += 1;
                if verdict.membership_violations.len() < MAX_REPORTED {
                    verdict.membership_violations.push(v);
                }
            }
            Finding::Depth(v) => {
                verdict.depth_violation_count += 1;
                if verdict.depth_violations.len() < MAX_REPORTED {
                    verdict.depth_violations.push(v);
                }
            }
        }
    }
    verdict.ok = verdict.membership_violation_count == 0 && verdict.margin_violation_count == 0;
    Ok(verdict)
}
