//! State-space streams and the exhaustive verification harness.
//!
//! Everything claimed about the game's long-run behaviour is checkable by
//! brute force on small rings: stream every state, run the claim's checker
//! on each, and report any counterexample. [`verify`] does exactly that,
//! optionally across worker threads, and is careful to produce the same
//! report for any worker count: the stream is cut into fixed-size chunks and
//! the per-chunk results are merged back in stream order.

use std::fmt;
use std::str::FromStr;
use std::time::{Duration, Instant};

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use rayon::ThreadPool;
use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::classify::{
    classify_periodic, monopoly, predict_outcome, predict_symmetric, ClassifyError, PeriodicClass,
};
use crate::dynamics::{detect_cycle, Trajectory};
use crate::state::{Block, State};

/// Largest state space [`enumerate_states`] and [`verify`] stream without an
/// explicit budget override.
pub const DEFAULT_BUDGET: u64 = 10_000_000;

/// The requested state space is larger than the enumeration budget.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
#[error("state space holds {needed} states, over the enumeration budget of {budget}")]
pub struct CapacityError {
    pub needed: u128,
    pub budget: u64,
}

/// Whether a stream visits every state or one representative per rotation
/// class.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DedupMode {
    All,
    UniqueUpToRotation,
}

/// Number of ways to distribute `m` candies among `n` children, i.e. the
/// binomial coefficient `C(m + n - 1, n - 1)`. Saturates at `u128::MAX`.
pub fn composition_count(n: usize, m: u64) -> u128 {
    binomial(m as u128 + n as u128 - 1, n as u128 - 1)
}

fn binomial(n: u128, k: u128) -> u128 {
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        // exact at every step: acc holds C(n, i), divisible after the multiply
        acc = match acc.checked_mul(n - i) {
            Some(v) => v / (i + 1),
            None => return u128::MAX,
        };
    }
    acc
}

/// All distributions of `m` candies among `n` children.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct StateSpace {
    pub n: usize,
    pub m: u64,
    pub dedup: DedupMode,
}

impl StateSpace {
    pub fn new(n: usize, m: u64, dedup: DedupMode) -> StateSpace {
        assert!(n >= 1, "a state space needs at least one child");
        StateSpace { n, m, dedup }
    }

    /// The balanced space: as many candies as children, no deduplication.
    pub fn balanced(n: usize) -> StateSpace {
        StateSpace::new(n, n as u64, DedupMode::All)
    }

    /// Size of the undeduplicated space.
    pub fn cardinality(&self) -> u128 {
        composition_count(self.n, self.m)
    }

    /// Streams the states. The budget is compared against the full
    /// cardinality even when deduplicating, since the stream still walks
    /// every composition underneath.
    pub fn states(&self, budget: u64) -> Result<Compositions, CapacityError> {
        let needed = self.cardinality();
        if needed > budget as u128 {
            return Err(CapacityError { needed, budget });
        }
        Ok(Compositions::new(self.n, self.m, self.dedup))
    }
}

/// Streams every distribution of `m` candies among `n` children, failing up
/// front if the space is larger than `budget`.
pub fn enumerate_states(
    n: usize,
    m: u64,
    dedup: DedupMode,
    budget: u64,
) -> Result<Compositions, CapacityError> {
    StateSpace::new(n, m, dedup).states(budget)
}

/// Iterator over weak compositions in colexicographic order, advancing a
/// single in-place buffer; memory stays linear in the ring size.
#[derive(Debug, Clone)]
pub struct Compositions {
    current: Vec<u64>,
    exhausted: bool,
    dedup: DedupMode,
}

impl Compositions {
    fn new(n: usize, m: u64, dedup: DedupMode) -> Compositions {
        let mut current = vec![0; n];
        current[0] = m;
        Compositions {
            current,
            exhausted: false,
            dedup,
        }
    }
}

impl Iterator for Compositions {
    type Item = State;

    fn next(&mut self) -> Option<State> {
        while !self.exhausted {
            let state = State::new(self.current.clone()).expect("ring is nonempty");
            self.exhausted = !advance(&mut self.current);
            let keep = match self.dedup {
                DedupMode::All => true,
                DedupMode::UniqueUpToRotation => state == state.canonical_rotation(),
            };
            if keep {
                return Some(state);
            }
        }
        None
    }
}

/// Replaces `c` with its colexicographic successor among the weak
/// compositions of the same total: add one candy at the lowest position
/// that has mass anywhere to its left, then flush that mass down to
/// position 0. Returns false once `c` is the final composition.
fn advance(c: &mut [u64]) -> bool {
    let mut left_sum = c[0];
    for j in 1..c.len() {
        if left_sum > 0 {
            c[j] += 1;
            for cell in &mut c[1..j] {
                *cell = 0;
            }
            c[0] = left_sum - 1;
            return true;
        }
        left_sum += c[j];
    }
    false
}

/// The claims the harness can check exhaustively.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Theorem {
    /// The index never increases under a step or a single share; a share
    /// preserves it exactly when the sharer holds two; a hoard of three or
    /// more forces a strict drop.
    IndexMonotonicity,
    /// `tau` survives steps, rotations, and single shares unchanged.
    TauInvariance,
    /// Firing the eligible children one at a time, in any order, lands on
    /// the same state as firing them simultaneously.
    Abelian,
    /// The structural classifier accepts exactly the states that lie on
    /// cycles, including every state of every reached cycle.
    Taxonomy,
    /// The outcome predicted from `tau` matches the cycle actually reached.
    Prediction,
    /// Mirror-symmetric states never end in a travelling wave.
    Symmetric,
    /// The monopoly state ends equitable on odd rings and in the two-state
    /// alternation on even rings.
    Monopoly,
}

impl Theorem {
    pub const ALL: [Theorem; 7] = [
        Theorem::IndexMonotonicity,
        Theorem::TauInvariance,
        Theorem::Abelian,
        Theorem::Taxonomy,
        Theorem::Prediction,
        Theorem::Symmetric,
        Theorem::Monopoly,
    ];

    pub fn id(self) -> &'static str {
        match self {
            Theorem::IndexMonotonicity => "index-monotonicity",
            Theorem::TauInvariance => "tau-invariance",
            Theorem::Abelian => "abelian",
            Theorem::Taxonomy => "taxonomy",
            Theorem::Prediction => "prediction",
            Theorem::Symmetric => "symmetric",
            Theorem::Monopoly => "monopoly",
        }
    }
}

impl fmt::Display for Theorem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("unknown theorem '{0}'; expected one of index-monotonicity, tau-invariance, abelian, taxonomy, prediction, symmetric, monopoly")]
pub struct UnknownTheorem(pub String);

impl FromStr for Theorem {
    type Err = UnknownTheorem;

    fn from_str(text: &str) -> Result<Self, UnknownTheorem> {
        Theorem::ALL
            .into_iter()
            .find(|t| t.id() == text)
            .ok_or_else(|| UnknownTheorem(text.to_string()))
    }
}

impl Serialize for Theorem {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(self.id())
    }
}

/// One counterexample: the state it happened on and what was expected and
/// observed there.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Failure {
    pub state: State,
    pub expected: String,
    pub observed: String,
}

impl Failure {
    fn new(state: &State, expected: impl Into<String>, observed: impl Into<String>) -> Failure {
        Failure {
            state: state.clone(),
            expected: expected.into(),
            observed: observed.into(),
        }
    }
}

/// Totals for a single ring size, for tabular export.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct NSummary {
    pub n: usize,
    pub states_checked: u64,
    pub failures: u64,
}

/// Outcome of one [`verify`] run.
#[derive(Debug, Clone, Serialize)]
pub struct VerificationReport {
    pub theorem: Theorem,
    #[serde(rename = "n")]
    pub n_values: Vec<usize>,
    pub states_checked: u64,
    pub failures: Vec<Failure>,
    /// Wall-clock time. Kept out of the serialized report so that repeated
    /// runs stay byte-identical whatever the machine or worker count.
    #[serde(skip)]
    pub elapsed: Duration,
    /// Per-ring-size breakdown backing the CSV export.
    #[serde(skip)]
    pub per_n: Vec<NSummary>,
}

impl VerificationReport {
    pub fn ok(&self) -> bool {
        self.failures.is_empty()
    }
}

#[derive(Debug, Clone, Copy)]
pub struct VerifyOptions {
    pub budget: u64,
    pub jobs: usize,
    pub max_steps: usize,
}

impl Default for VerifyOptions {
    fn default() -> VerifyOptions {
        VerifyOptions {
            budget: DEFAULT_BUDGET,
            jobs: 1,
            max_steps: crate::dynamics::DEFAULT_MAX_STEPS,
        }
    }
}

/// Checks one claim over every balanced state for each ring size in
/// `n_values` (every symmetric state for [`Theorem::Symmetric`], the single
/// monopoly state for [`Theorem::Monopoly`]).
///
/// The report is deterministic: same inputs, same report, bit for bit,
/// regardless of `jobs`.
pub fn verify(
    theorem: Theorem,
    n_values: &[usize],
    options: &VerifyOptions,
) -> Result<VerificationReport, CapacityError> {
    let started = Instant::now();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(options.jobs.max(1))
        .build()
        .expect("thread pool construction");
    let mut report = VerificationReport {
        theorem,
        n_values: n_values.to_vec(),
        states_checked: 0,
        failures: Vec::new(),
        elapsed: Duration::ZERO,
        per_n: Vec::new(),
    };
    for &n in n_values {
        let (checked, failures) = match theorem {
            Theorem::Monopoly => (1, check_monopoly(n, options.max_steps)),
            Theorem::Symmetric => {
                let states = StateSpace::balanced(n).states(options.budget)?;
                let checker = checker_for(theorem, options.max_steps);
                run_chunked(&pool, states.filter(|s| s.is_symmetric()), checker.as_ref())
            }
            _ => {
                let states = StateSpace::balanced(n).states(options.budget)?;
                let checker = checker_for(theorem, options.max_steps);
                run_chunked(&pool, states, checker.as_ref())
            }
        };
        report.per_n.push(NSummary {
            n,
            states_checked: checked,
            failures: failures.len() as u64,
        });
        report.states_checked += checked;
        report.failures.extend(failures);
    }
    report.elapsed = started.elapsed();
    Ok(report)
}

type Checker = dyn Fn(&State) -> Vec<Failure> + Sync + Send;

fn checker_for(theorem: Theorem, max_steps: usize) -> Box<Checker> {
    match theorem {
        Theorem::IndexMonotonicity => Box::new(check_index_monotonicity),
        Theorem::TauInvariance => Box::new(check_tau_invariance),
        Theorem::Abelian => Box::new(check_abelian),
        Theorem::Taxonomy => Box::new(move |s| check_taxonomy(s, max_steps)),
        Theorem::Prediction => Box::new(move |s| check_prediction(s, max_steps)),
        Theorem::Symmetric => Box::new(move |s| check_symmetric(s, max_steps)),
        Theorem::Monopoly => unreachable!("monopoly checks one ring at a time, not a stream"),
    }
}

/// Feeds fixed-size chunks of the stream to the pool and merges results in
/// stream order. Chunk boundaries depend only on the stream, so the merged
/// failure list is identical for any worker count.
fn run_chunked<I>(pool: &ThreadPool, states: I, checker: &Checker) -> (u64, Vec<Failure>)
where
    I: Iterator<Item = State>,
{
    const CHUNK: usize = 1024;
    let wave_len = pool.current_num_threads().max(1) * 4;
    let mut states = states;
    let mut checked = 0u64;
    let mut failures = Vec::new();
    loop {
        let mut wave: Vec<Vec<State>> = Vec::with_capacity(wave_len);
        for _ in 0..wave_len {
            let chunk: Vec<State> = states.by_ref().take(CHUNK).collect();
            if chunk.is_empty() {
                break;
            }
            checked += chunk.len() as u64;
            wave.push(chunk);
        }
        if wave.is_empty() {
            break;
        }
        let wave_failures: Vec<Vec<Failure>> = pool.install(|| {
            wave.par_iter()
                .map(|chunk| chunk.iter().flat_map(checker).collect())
                .collect()
        });
        for chunk_failures in wave_failures {
            failures.extend(chunk_failures);
        }
    }
    (checked, failures)
}

fn check_index_monotonicity(state: &State) -> Vec<Failure> {
    let mut failures = Vec::new();
    let index = state.index();
    let next = state.step();
    let next_index = next.index();
    if next_index > index {
        failures.push(Failure::new(
            state,
            format!("index(step(s)) <= {index}"),
            next_index.to_string(),
        ));
    }
    if state.max_count() >= 3 && next_index >= index {
        failures.push(Failure::new(
            state,
            format!("index(step(s)) < {index} when some child holds 3 or more"),
            next_index.to_string(),
        ));
    }
    if next != *state && next_index == index && state.max_count() != 2 {
        failures.push(Failure::new(
            state,
            "largest hoard of exactly 2 when a moving step preserves the index",
            format!("largest hoard {}", state.max_count()),
        ));
    }
    for child in state.sharers() {
        let shared = state
            .share_one(child)
            .expect("sharer holds at least two");
        let shared_index = shared.index();
        if shared_index > index {
            failures.push(Failure::new(
                state,
                format!("index(share_one(s, {child})) <= {index}"),
                shared_index.to_string(),
            ));
        }
        let holds_two = state.counts()[child] == 2;
        if (shared_index == index) != holds_two {
            failures.push(Failure::new(
                state,
                format!("share by child {child} preserves the index iff that child holds exactly 2"),
                format!(
                    "index {index} -> {shared_index} with child holding {}",
                    state.counts()[child]
                ),
            ));
        }
    }
    failures
}

fn check_tau_invariance(state: &State) -> Vec<Failure> {
    let mut failures = Vec::new();
    let tau = state.tau();
    let stepped = state.step().tau();
    if stepped != tau {
        failures.push(Failure::new(
            state,
            format!("tau {tau} preserved by step"),
            stepped.to_string(),
        ));
    }
    for k in 0..state.n() as i64 {
        let rotated = state.rotate(k).tau();
        if rotated != tau {
            failures.push(Failure::new(
                state,
                format!("tau {tau} preserved by rotation {k}"),
                rotated.to_string(),
            ));
        }
    }
    for child in state.sharers() {
        let shared = state
            .share_one(child)
            .expect("sharer holds at least two")
            .tau();
        if shared != tau {
            failures.push(Failure::new(
                state,
                format!("tau {tau} preserved by a share from child {child}"),
                shared.to_string(),
            ));
        }
    }
    failures
}

/// Stable per-state seed (FNV-1a over the counts), so the random firing
/// orders do not depend on how states were distributed over workers.
fn state_seed(state: &State) -> u64 {
    let mut hash = 0xcbf2_9ce4_8422_2325u64;
    for &count in state.counts() {
        for byte in count.to_le_bytes() {
            hash = (hash ^ byte as u64).wrapping_mul(0x0000_0100_0000_01b3);
        }
    }
    hash
}

fn check_abelian(state: &State) -> Vec<Failure> {
    let expected = state.step();
    let sharers: Vec<usize> = state.sharers().collect();
    let mut rng = ChaCha8Rng::seed_from_u64(state_seed(state));
    let mut failures = Vec::new();
    for _ in 0..3 {
        let mut order = sharers.clone();
        order.shuffle(&mut rng);
        let mut current = state.clone();
        let mut broke = false;
        for &child in &order {
            match current.share_one(child) {
                Ok(next) => current = next,
                Err(e) => {
                    // neighbours only gain before their own turn, so an
                    // eligible child can never drop below two in the queue
                    failures.push(Failure::new(
                        state,
                        format!("child {child} still able to share in order {order:?}"),
                        e.to_string(),
                    ));
                    broke = true;
                    break;
                }
            }
        }
        if !broke && current != expected {
            failures.push(Failure::new(
                state,
                format!("sequential shares in order {order:?} reaching {expected}"),
                current.to_string(),
            ));
        }
    }
    failures
}

fn check_taxonomy(state: &State, max_steps: usize) -> Vec<Failure> {
    let traj = match detect_cycle(state, max_steps) {
        Ok(t) => t,
        Err(e) => {
            return vec![Failure::new(
                state,
                format!("a cycle within {max_steps} steps"),
                e.to_string(),
            )]
        }
    };
    let mut failures = Vec::new();
    let class = classify_periodic(state);
    let periodic = traj.transient_length == 0;
    match (periodic, &class) {
        (true, Err(e)) => failures.push(Failure::new(
            state,
            "classification of a state on a cycle",
            format!("error: {e}"),
        )),
        (false, Ok(c)) => failures.push(Failure::new(
            state,
            "rejection of a state off every cycle",
            format!("classified {c}"),
        )),
        _ => {}
    }
    for cycle_state in &traj.cycle {
        if let Err(e) = classify_periodic(cycle_state) {
            failures.push(Failure::new(
                cycle_state,
                "classification of a reached cycle state",
                format!("error: {e}"),
            ));
        }
    }
    failures
}

fn check_prediction(state: &State, max_steps: usize) -> Vec<Failure> {
    let report = match predict_outcome(state) {
        Ok(r) => r,
        Err(e) => {
            return vec![Failure::new(
                state,
                "a prediction for a balanced state",
                format!("error: {e}"),
            )]
        }
    };
    let traj = match detect_cycle(state, max_steps) {
        Ok(t) => t,
        Err(e) => {
            return vec![Failure::new(
                state,
                format!("a cycle within {max_steps} steps"),
                e.to_string(),
            )]
        }
    };
    let reached = match classify_periodic(&traj.cycle[0]) {
        Ok(c) => c,
        Err(e) => {
            return vec![Failure::new(
                state,
                "a classifiable reached cycle",
                format!("error: {e}"),
            )]
        }
    };
    if reached != report.predicted {
        return vec![Failure::new(
            state,
            format!("outcome {}", report.predicted),
            format!("outcome {reached}"),
        )];
    }
    Vec::new()
}

fn check_symmetric(state: &State, max_steps: usize) -> Vec<Failure> {
    let report = match predict_symmetric(state) {
        Ok(r) => r,
        Err(e @ ClassifyError::TheoremViolation { .. }) => {
            return vec![Failure::new(
                state,
                "tau of 0 or n/2 for a symmetric balanced state",
                e.to_string(),
            )]
        }
        Err(e) => {
            return vec![Failure::new(
                state,
                "a prediction for a symmetric balanced state",
                format!("error: {e}"),
            )]
        }
    };
    let mut failures = Vec::new();
    if state.n() % 2 == 1 && report.predicted != PeriodicClass::Equitable {
        failures.push(Failure::new(
            state,
            "equitable outcome on an odd ring",
            report.predicted.to_string(),
        ));
    }
    match detect_cycle(state, max_steps) {
        Err(e) => failures.push(Failure::new(
            state,
            format!("a cycle within {max_steps} steps"),
            e.to_string(),
        )),
        Ok(traj) => match classify_periodic(&traj.cycle[0]) {
            Err(e) => failures.push(Failure::new(
                state,
                "a classifiable reached cycle",
                format!("error: {e}"),
            )),
            Ok(reached) if reached != report.predicted => failures.push(Failure::new(
                state,
                format!("outcome {}", report.predicted),
                format!("outcome {reached}"),
            )),
            Ok(_) => {}
        },
    }
    failures
}

fn check_monopoly(n: usize, max_steps: usize) -> Vec<Failure> {
    let start = monopoly(n);
    let traj = match detect_cycle(&start, max_steps) {
        Ok(t) => t,
        Err(e) => {
            return vec![Failure::new(
                &start,
                format!("a cycle within {max_steps} steps"),
                e.to_string(),
            )]
        }
    };
    if n % 2 == 1 {
        let ones = State::new(vec![1; n]).expect("n >= 1");
        if traj.period != 1 || traj.cycle[0] != ones {
            return vec![Failure::new(
                &start,
                format!("fixed state {ones}"),
                describe_cycle(&traj),
            )];
        }
    } else {
        let mut want = vec![
            State::from_blocks(&vec![Block::P; n / 2]).expect("n >= 2"),
            State::from_blocks(&vec![Block::PBar; n / 2]).expect("n >= 2"),
        ];
        want.sort();
        let mut cycle = traj.cycle.clone();
        cycle.sort();
        if traj.period != 2 || cycle != want {
            return vec![Failure::new(
                &start,
                format!("two-cycle {{{}; {}}}", want[0], want[1]),
                describe_cycle(&traj),
            )];
        }
    }
    Vec::new()
}

fn describe_cycle(traj: &Trajectory) -> String {
    let states: Vec<String> = traj.cycle.iter().map(|s| s.to_string()).collect();
    format!("period {} cycle [{}]", traj.period, states.join("; "))
}
