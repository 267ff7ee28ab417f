//! Orbit structure under the sharing step.
//!
//! The step conserves candies and the state space for a fixed total is
//! finite, so every orbit is eventually periodic. [`detect_cycle`] finds the
//! exact transient length and minimal period by remembering every visited
//! state with its step number; the first revisit pins both numbers down with
//! no possibility of overshoot.

use std::collections::HashMap;

use serde::Serialize;
use thiserror::Error;

use crate::state::State;

/// Step budget used by [`is_periodic`] and the command-line tools when the
/// caller does not say otherwise. Orbits at desk scale close in far fewer
/// steps; the cap exists so a runaway input fails cleanly instead of
/// spinning forever.
pub const DEFAULT_MAX_STEPS: usize = 1_000_000;

/// The step budget ran out before any state repeated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
#[error("no cycle found within {max_steps} steps")]
pub struct CycleNotFound {
    pub max_steps: usize,
}

/// An orbit, split into its one-way transient and the cycle it falls into.
///
/// `cycle[0]` is the first revisited state, so `transient_length == 0` says
/// the initial state itself is periodic. Stepping `cycle[i]` yields
/// `cycle[(i + 1) % period]`, all cycle states are distinct, and `period ==
/// cycle.len()`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Trajectory {
    pub initial: State,
    pub transient_length: usize,
    pub period: usize,
    pub cycle: Vec<State>,
    #[serde(skip)]
    steps: Option<Vec<State>>,
}

impl Trajectory {
    /// Every distinct state visited, in step order: the transient prefix
    /// followed by one lap of the cycle. `None` unless the trajectory came
    /// from [`detect_cycle_with_prefix`].
    pub fn steps(&self) -> Option<&[State]> {
        self.steps.as_deref()
    }
}

/// Iterates the step from `start` until a state repeats, applying it at most
/// `max_steps` times. Discards the visited prefix; see
/// [`detect_cycle_with_prefix`] to keep it.
pub fn detect_cycle(start: &State, max_steps: usize) -> Result<Trajectory, CycleNotFound> {
    detect(start, max_steps, false)
}

/// Like [`detect_cycle`], but the trajectory also retains every visited
/// state for later rendering.
pub fn detect_cycle_with_prefix(
    start: &State,
    max_steps: usize,
) -> Result<Trajectory, CycleNotFound> {
    detect(start, max_steps, true)
}

/// True when the state lies on a cycle, i.e. its transient is empty.
pub fn is_periodic(state: &State) -> Result<bool, CycleNotFound> {
    Ok(detect_cycle(state, DEFAULT_MAX_STEPS)?.transient_length == 0)
}

fn detect(start: &State, max_steps: usize, keep_prefix: bool) -> Result<Trajectory, CycleNotFound> {
    let mut first_seen: HashMap<State, usize> = HashMap::new();
    let mut visited: Vec<State> = Vec::new();
    let mut current = start.clone();
    for step_no in 0..=max_steps {
        if let Some(&first) = first_seen.get(&current) {
            let period = step_no - first;
            let cycle = visited[first..].to_vec();
            return Ok(Trajectory {
                initial: start.clone(),
                transient_length: first,
                period,
                cycle,
                steps: keep_prefix.then_some(visited),
            });
        }
        if step_no == max_steps {
            break;
        }
        first_seen.insert(current.clone(), step_no);
        visited.push(current.clone());
        current = current.step();
    }
    Err(CycleNotFound { max_steps })
}
