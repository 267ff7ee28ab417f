//! Property suites behind the classifier and the predictor, checked
//! exhaustively on small rings and probabilistically beyond them.

use candyshare::{
    classify_periodic, detect_cycle, enumerate_states, is_periodic, verify, Block, DedupMode,
    PeriodicClass, State, Theorem, VerificationReport, VerifyOptions, DEFAULT_BUDGET,
    DEFAULT_MAX_STEPS,
};
use proptest::prelude::*;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeSet;

fn s(text: &str) -> State {
    text.parse().expect("test state parses")
}

fn balanced_states(n: usize) -> impl Iterator<Item = State> {
    enumerate_states(n, n as u64, DedupMode::All, DEFAULT_BUDGET).expect("within budget")
}

fn assert_clean(report: &VerificationReport) {
    assert!(
        report.ok(),
        "{} found {} counterexamples, first: {:?}",
        report.theorem,
        report.failures.len(),
        report.failures.first()
    );
}

#[test]
fn conservation_exhaustive_small_rings() {
    for n in 1..=6 {
        for m in 0..=8 {
            for state in enumerate_states(n, m, DedupMode::All, DEFAULT_BUDGET).unwrap() {
                assert_eq!(state.step().total(), m, "total changed stepping {state}");
            }
        }
    }
}

#[test]
fn tau_invariance_exhaustive() {
    let sizes: Vec<usize> = (3..=8).collect();
    assert_clean(&verify(Theorem::TauInvariance, &sizes, &VerifyOptions::default()).unwrap());
}

#[test]
fn index_monotonicity_exhaustive() {
    let sizes: Vec<usize> = (3..=8).collect();
    assert_clean(&verify(Theorem::IndexMonotonicity, &sizes, &VerifyOptions::default()).unwrap());
}

#[test]
fn abelian_exhaustive() {
    let sizes: Vec<usize> = (3..=8).collect();
    assert_clean(&verify(Theorem::Abelian, &sizes, &VerifyOptions::default()).unwrap());
}

#[test]
fn step_commutes_with_rotation_and_reflection_exhaustive() {
    for n in 1..=6usize {
        for state in balanced_states(n) {
            for k in 0..n as i64 {
                assert_eq!(
                    state.rotate(k).step(),
                    state.step().rotate(k),
                    "rotation equivariance broken for {state}, k = {k}"
                );
            }
            assert_eq!(
                state.reflect().step(),
                state.step().reflect(),
                "reflection equivariance broken for {state}"
            );
        }
    }
}

#[test]
fn cycles_are_coherent_exhaustive() {
    for n in 3..=8usize {
        for state in balanced_states(n) {
            let traj = detect_cycle(&state, DEFAULT_MAX_STEPS).expect("orbit closes");
            assert_eq!(traj.period, traj.cycle.len());
            let distinct: BTreeSet<&State> = traj.cycle.iter().collect();
            assert_eq!(distinct.len(), traj.period, "repeated state in cycle of {state}");
            let index = traj.cycle[0].index();
            for (i, on_cycle) in traj.cycle.iter().enumerate() {
                assert_eq!(
                    on_cycle.step(),
                    traj.cycle[(i + 1) % traj.period],
                    "cycle of {state} broken at {i}"
                );
                assert!(on_cycle.max_count() <= 2, "hoard above 2 on cycle of {state}");
                assert_eq!(on_cycle.index(), index, "index moved along cycle of {state}");
            }
        }
    }
}

#[test]
fn cycles_are_coherent_sampled_larger_rings() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0001);
    for n in 9..=12usize {
        for _ in 0..200 {
            let mut counts = vec![0u64; n];
            for _ in 0..n {
                counts[rng.gen_range(0..n)] += 1;
            }
            let state = State::new(counts).unwrap();
            let traj = detect_cycle(&state, DEFAULT_MAX_STEPS).expect("orbit closes");
            assert!(traj.transient_length + traj.period < 1000, "orbit of {state} suspiciously long");
            for (i, on_cycle) in traj.cycle.iter().enumerate() {
                assert_eq!(on_cycle.step(), traj.cycle[(i + 1) % traj.period]);
            }
        }
    }
}

#[test]
fn wave_translates_one_position_per_step() {
    for n in 3..=10usize {
        let mut blocks = vec![Block::P];
        blocks.extend(std::iter::repeat(Block::I).take(n - 2));
        let wave = State::from_blocks(&blocks).unwrap();
        assert_eq!(wave.step(), wave.rotate(-1), "wave translation broken at n = {n}");
        let traj = detect_cycle(&wave, DEFAULT_MAX_STEPS).unwrap();
        assert_eq!(traj.transient_length, 0);
        assert_eq!(traj.period, n);
    }
}

#[test]
fn classifier_accepts_exactly_the_periodic_states() {
    let sizes: Vec<usize> = (3..=8).collect();
    assert_clean(&verify(Theorem::Taxonomy, &sizes, &VerifyOptions::default()).unwrap());
}

#[test]
fn classifier_p_count_stays_in_range() {
    for n in 3..=8usize {
        for state in balanced_states(n) {
            let Ok(class) = classify_periodic(&state) else {
                continue;
            };
            match class {
                PeriodicClass::Clockwise { p_count } | PeriodicClass::AntiClockwise { p_count } => {
                    assert!(p_count >= 1, "block-free wave on {state}");
                    assert!(2 * p_count < n as u64, "too many pairs on {state}");
                }
                PeriodicClass::Equivocal => {
                    assert_eq!(n % 2, 0, "equivocal on an odd ring: {state}");
                }
                PeriodicClass::Equitable => {
                    assert!(state.counts().iter().all(|&c| c == 1));
                }
            }
        }
    }
}

#[test]
fn wave_cycle_lengths_divide_the_ring() {
    for n in 3..=8usize {
        for state in balanced_states(n) {
            match classify_periodic(&state) {
                Ok(PeriodicClass::Clockwise { .. }) | Ok(PeriodicClass::AntiClockwise { .. }) => {
                    let traj = detect_cycle(&state, DEFAULT_MAX_STEPS).unwrap();
                    assert_eq!(
                        n % traj.period,
                        0,
                        "period {} of {state} does not divide {n}",
                        traj.period
                    );
                }
                _ => {}
            }
        }
    }
}

#[test]
fn predictions_match_simulation_exhaustive() {
    let sizes: Vec<usize> = (3..=8).collect();
    assert_clean(&verify(Theorem::Prediction, &sizes, &VerifyOptions::default()).unwrap());
}

#[test]
fn symmetric_states_never_end_in_waves() {
    let sizes: Vec<usize> = (3..=9).collect();
    assert_clean(&verify(Theorem::Symmetric, &sizes, &VerifyOptions::default()).unwrap());
}

#[test]
fn monopoly_outcomes_by_parity() {
    let sizes: Vec<usize> = (3..=12).collect();
    assert_clean(&verify(Theorem::Monopoly, &sizes, &VerifyOptions::default()).unwrap());
}

#[test]
fn unique_mode_covers_the_space_exactly_once() {
    for n in 1..=6usize {
        let m = n as u64;
        let all: BTreeSet<State> = enumerate_states(n, m, DedupMode::All, DEFAULT_BUDGET)
            .unwrap()
            .collect();
        let representatives: Vec<State> =
            enumerate_states(n, m, DedupMode::UniqueUpToRotation, DEFAULT_BUDGET)
                .unwrap()
                .collect();
        // every representative is canonical and no class appears twice
        let classes: BTreeSet<&State> = representatives.iter().collect();
        assert_eq!(classes.len(), representatives.len());
        for rep in &representatives {
            assert_eq!(rep, &rep.canonical_rotation(), "non-canonical representative {rep}");
        }
        // expanding every representative through its rotations rebuilds the space
        let mut expanded: BTreeSet<State> = BTreeSet::new();
        for rep in &representatives {
            for k in 0..n as i64 {
                expanded.insert(rep.rotate(k));
            }
        }
        assert_eq!(expanded, all, "rotation classes do not cover the space at n = {n}");
        // and each state's canonical form is listed exactly once
        for state in &all {
            assert!(classes.contains(&state.canonical_rotation()));
        }
    }
}

#[test]
fn is_periodic_agrees_with_transient_length() {
    for n in 1..=6usize {
        for state in balanced_states(n) {
            let traj = detect_cycle(&state, DEFAULT_MAX_STEPS).unwrap();
            assert_eq!(
                is_periodic(&state).unwrap(),
                traj.transient_length == 0,
                "periodicity disagreement on {state}"
            );
        }
    }
}

#[test]
fn index_preserving_moving_step_forces_max_two() {
    // a moving step that keeps the index flat can only happen when the
    // largest hoard is exactly 2
    for n in 3..=8usize {
        for state in balanced_states(n) {
            let next = state.step();
            if next != state && next.index() == state.index() {
                assert_eq!(state.max_count(), 2, "flat moving step from {state}");
            }
        }
    }
}

fn arb_state() -> impl Strategy<Value = State> {
    proptest::collection::vec(0u64..6, 1..10).prop_map(|counts| State::new(counts).unwrap())
}

proptest! {
    #[test]
    fn step_conserves_any_total(state in arb_state()) {
        prop_assert_eq!(state.step().total(), state.total());
    }

    #[test]
    fn single_share_preserves_tau_at_any_total(state in arb_state()) {
        for child in state.sharers().collect::<Vec<_>>() {
            prop_assert_eq!(state.share_one(child).unwrap().tau(), state.tau());
        }
    }

    #[test]
    fn step_preserves_tau_at_any_total(state in arb_state()) {
        prop_assert_eq!(state.step().tau(), state.tau());
    }

    #[test]
    fn step_commutes_with_symmetries(state in arb_state(), k in -20i64..=20) {
        prop_assert_eq!(state.rotate(k).step(), state.step().rotate(k));
        prop_assert_eq!(state.reflect().step(), state.step().reflect());
    }

    #[test]
    fn canonical_rotation_is_the_smallest(state in arb_state()) {
        let naive = (0..state.n() as i64).map(|k| state.rotate(k)).min().unwrap();
        prop_assert_eq!(state.canonical_rotation(), naive);
    }

    #[test]
    fn parse_inverts_display(state in arb_state()) {
        prop_assert_eq!(state.to_string().parse::<State>().unwrap(), state);
    }

    #[test]
    fn symmetry_check_matches_direct_search(state in arb_state()) {
        let direct = (0..state.n() as i64).any(|k| state.rotate(k) == state.reflect());
        prop_assert_eq!(state.is_symmetric(), direct);
    }
}
