//! The balanced candy-sharing game on a ring.
//!
//! `n` children sit in a circle, each holding some candies, `n` candies in
//! total. At every tick, every child holding at least two candies passes one
//! to each neighbour, all at once. This crate simulates that game exactly,
//! computes the quantities that control its long-run behaviour (the index,
//! which never increases, and the residue `tau`, which never changes), and
//! classifies and predicts the periodic states the game settles into.
//!
//! The modules split along those lines:
//!
//! * [`state`] holds the ring itself and the elementary operations: the
//!   parallel step, single-child sharing, deficiency and index, `tau`,
//!   rotations and reflections.
//! * [`dynamics`] iterates the step and finds the transient and cycle of an
//!   orbit exactly.
//! * [`classify`] names the periodic states (equitable, clockwise and
//!   anticlockwise waves, equivocal alternation) and predicts the outcome of
//!   a game from `tau` alone, without simulating.
//! * [`enumerate`] streams whole state spaces and checks the claims behind
//!   the classifier and the predictor exhaustively.

pub mod classify;
pub mod dynamics;
pub mod enumerate;
pub mod state;

pub use classify::{
    classify_periodic, monopoly, predict_outcome, predict_symmetric, ClassifyError, OutcomeReport,
    PeriodicClass,
};
pub use dynamics::{
    detect_cycle, detect_cycle_with_prefix, is_periodic, CycleNotFound, Trajectory,
    DEFAULT_MAX_STEPS,
};
pub use enumerate::{
    composition_count, enumerate_states, verify, CapacityError, Compositions, DedupMode, Failure,
    NSummary, StateSpace, Theorem, UnknownTheorem, VerificationReport, VerifyOptions,
    DEFAULT_BUDGET,
};
pub use state::{Block, State, StateError};
