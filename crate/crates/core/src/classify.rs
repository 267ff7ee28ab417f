//! Names for the periodic states and outcome prediction from `tau`.
//!
//! Every periodic state of the balanced game is one of four shapes: all
//! ones; a clockwise necklace of `(0,2)` pairs separated by ones; its
//! anticlockwise mirror; or the pure `(0,2)` alternation on an even ring.
//! [`classify_periodic`] recognises those shapes structurally.
//! [`predict_outcome`] skips the simulation entirely: the conserved residue
//! `tau` of the starting state already determines which shape the game
//! reaches.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::state::State;

/// The four possible long-run behaviours of a balanced game.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "class", rename_all = "lowercase")]
pub enum PeriodicClass {
    /// Every child holds exactly one candy; nothing ever moves again.
    Equitable,
    /// `p_count` travelling pairs circulate clockwise among content
    /// children, one position per step. `1 <= p_count < n/2`.
    Clockwise { p_count: u64 },
    /// The mirror image: `p_count` pairs circulate anticlockwise.
    AntiClockwise { p_count: u64 },
    /// Even rings only: zeros and twos alternate and the two halves swap
    /// hoards forever, period two.
    Equivocal,
}

impl fmt::Display for PeriodicClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PeriodicClass::Equitable => write!(f, "equitable"),
            PeriodicClass::Clockwise { p_count } => write!(f, "clockwise (p_count {p_count})"),
            PeriodicClass::AntiClockwise { p_count } => {
                write!(f, "anticlockwise (p_count {p_count})")
            }
            PeriodicClass::Equivocal => write!(f, "equivocal"),
        }
    }
}

/// What a game starting from a given state will settle into.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct OutcomeReport {
    pub tau: u64,
    pub predicted: PeriodicClass,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ClassifyError {
    #[error("state is not balanced: {m} candies among {n} children")]
    NotBalanced { n: usize, m: u64 },
    #[error("not a periodic state of the balanced game")]
    NotPeriodic,
    #[error("state has no mirror symmetry")]
    NotSymmetric,
    /// A symmetric balanced state whose `tau` is neither 0 nor `n/2`. No
    /// such state exists; returning this instead of panicking lets a
    /// verification harness tell a falsified claim from a bad input.
    #[error("symmetric balanced state has tau = {tau} on a ring of {n}, expected 0 or n/2")]
    TheoremViolation { tau: u64, n: usize },
    /// Tripwire: a ring containing a 1 tiled in both orientations. The block
    /// grammar makes this impossible, so hitting it means the classifier
    /// itself is broken.
    #[error("ring tiles in both orientations despite containing a 1")]
    AmbiguousTiling,
}

/// Recognises a periodic state by its shape and names it.
///
/// All ones is equitable. A perfect `(0,2)` alternation is equivocal.
/// Otherwise the ring must tile, from some starting position, into `(0,2)`
/// pairs and single ones (clockwise) or `(2,0)` pairs and single ones
/// (anticlockwise); `p_count` is the number of pairs. Anything else,
/// including any entry above 2, is not periodic.
pub fn classify_periodic(state: &State) -> Result<PeriodicClass, ClassifyError> {
    let counts = state.counts();
    if counts.iter().all(|&c| c == 1) {
        return Ok(PeriodicClass::Equitable);
    }
    if counts.iter().any(|&c| c > 2) {
        return Err(ClassifyError::NotPeriodic);
    }
    if is_pure_alternation(counts) {
        return Ok(PeriodicClass::Equivocal);
    }
    let clockwise = tiling_pairs(counts, 0, 2);
    let anticlockwise = tiling_pairs(counts, 2, 0);
    match (clockwise, anticlockwise) {
        (Some(p_count), None) => Ok(PeriodicClass::Clockwise { p_count }),
        (None, Some(p_count)) => Ok(PeriodicClass::AntiClockwise { p_count }),
        (None, None) => Err(ClassifyError::NotPeriodic),
        // alternation was handled above, so a 1 is present here
        (Some(_), Some(_)) => Err(ClassifyError::AmbiguousTiling),
    }
}

/// Zeros and twos in strict alternation around the whole ring.
fn is_pure_alternation(counts: &[u64]) -> bool {
    let n = counts.len();
    if n < 2 || n % 2 != 0 {
        return false;
    }
    (0..n).all(|i| counts[i] == if i % 2 == 0 { 0 } else { 2 })
        || (0..n).all(|i| counts[i] == if i % 2 == 0 { 2 } else { 0 })
}

/// Tries to tile the ring by `(first, second)` pairs and single ones,
/// scanning greedily from each starting rotation; the block grammar is
/// prefix-free, so per rotation the scan is forced. Returns the number of
/// pairs of the first tiling found.
fn tiling_pairs(counts: &[u64], first: u64, second: u64) -> Option<u64> {
    let n = counts.len();
    (0..n).find_map(|rot| {
        let mut pairs = 0;
        let mut pos = 0;
        while pos < n {
            let cell = counts[(rot + pos) % n];
            if cell == 1 {
                pos += 1;
            } else if cell == first && pos + 1 < n && counts[(rot + pos + 1) % n] == second {
                pairs += 1;
                pos += 2;
            } else {
                return None;
            }
        }
        Some(pairs)
    })
}

/// Predicts the long-run class of a balanced game from `tau` alone.
///
/// With `t = tau(s)` on a ring of `n`: 0 means equitable, `n/2` means
/// equivocal, anything below `n/2` means clockwise with `p_count = t`, and
/// anything above means anticlockwise with `p_count = n - t`.
pub fn predict_outcome(state: &State) -> Result<OutcomeReport, ClassifyError> {
    if !state.is_balanced() {
        return Err(ClassifyError::NotBalanced {
            n: state.n(),
            m: state.total(),
        });
    }
    let n = state.n() as u64;
    let tau = state.tau();
    let predicted = if tau == 0 {
        PeriodicClass::Equitable
    } else if 2 * tau < n {
        PeriodicClass::Clockwise { p_count: tau }
    } else if 2 * tau == n {
        PeriodicClass::Equivocal
    } else {
        PeriodicClass::AntiClockwise { p_count: n - tau }
    };
    Ok(OutcomeReport { tau, predicted })
}

/// [`predict_outcome`] specialised to states with a mirror symmetry.
///
/// Such games never end in a travelling wave: odd rings always reach the
/// equitable state, even rings reach equitable or equivocal according to
/// `tau` being 0 or `n/2`. Any other `tau` is reported as
/// [`ClassifyError::TheoremViolation`].
pub fn predict_symmetric(state: &State) -> Result<OutcomeReport, ClassifyError> {
    if !state.is_symmetric() {
        return Err(ClassifyError::NotSymmetric);
    }
    let report = predict_outcome(state)?;
    match report.predicted {
        PeriodicClass::Equitable | PeriodicClass::Equivocal => Ok(report),
        _ => Err(ClassifyError::TheoremViolation {
            tau: report.tau,
            n: state.n(),
        }),
    }
}

/// The balanced state with every candy in one hoard: child 0 holds `n`,
/// everyone else nothing.
pub fn monopoly(n: usize) -> State {
    assert!(n >= 1, "monopoly needs at least one child");
    let mut counts = vec![0; n];
    counts[0] = n as u64;
    State::new(counts).expect("n >= 1")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(text: &str) -> State {
        text.parse().expect("test state parses")
    }

    #[test]
    fn classify_recognises_all_four_shapes() {
        assert_eq!(classify_periodic(&s("1,1,1,1,1")), Ok(PeriodicClass::Equitable));
        assert_eq!(
            classify_periodic(&s("0,2,1,1,1")),
            Ok(PeriodicClass::Clockwise { p_count: 1 })
        );
        assert_eq!(classify_periodic(&s("0,2,0,2")), Ok(PeriodicClass::Equivocal));
        assert_eq!(
            classify_periodic(&s("2,0,1,1,1")),
            Ok(PeriodicClass::AntiClockwise { p_count: 1 })
        );
        assert_eq!(
            classify_periodic(&s("0,2,1,1,0,2")),
            Ok(PeriodicClass::Clockwise { p_count: 2 })
        );
    }

    #[test]
    fn classify_accepts_any_rotation() {
        assert_eq!(classify_periodic(&s("2,0,2,0")), Ok(PeriodicClass::Equivocal));
        assert_eq!(
            classify_periodic(&s("1,0,2,1,1")),
            Ok(PeriodicClass::Clockwise { p_count: 1 })
        );
        assert_eq!(
            classify_periodic(&s("1,1,1,2,0")),
            Ok(PeriodicClass::AntiClockwise { p_count: 1 })
        );
        assert_eq!(
            classify_periodic(&s("0,2,1")),
            Ok(PeriodicClass::Clockwise { p_count: 1 })
        );
    }

    #[test]
    fn classify_rejects_non_periodic_states() {
        assert_eq!(classify_periodic(&s("2,2,0,0")), Err(ClassifyError::NotPeriodic));
        assert_eq!(classify_periodic(&s("3,0,0")), Err(ClassifyError::NotPeriodic));
        assert_eq!(classify_periodic(&s("0,2,2,0")), Err(ClassifyError::NotPeriodic));
        // unbalanced rings never tile: pairs and ones average one per cell
        assert_eq!(classify_periodic(&s("1,1,0")), Err(ClassifyError::NotPeriodic));
        assert_eq!(classify_periodic(&s("0,0")), Err(ClassifyError::NotPeriodic));
    }

    #[test]
    fn classify_tiny_rings() {
        assert_eq!(classify_periodic(&s("1")), Ok(PeriodicClass::Equitable));
        assert_eq!(classify_periodic(&s("0,2")), Ok(PeriodicClass::Equivocal));
        assert_eq!(classify_periodic(&s("2,0")), Ok(PeriodicClass::Equivocal));
    }

    #[test]
    fn predict_examples() {
        let report = predict_outcome(&s("5,0,0,0,0")).unwrap();
        assert_eq!((report.tau, report.predicted), (0, PeriodicClass::Equitable));

        let report = predict_outcome(&s("4,0,0,0")).unwrap();
        assert_eq!((report.tau, report.predicted), (2, PeriodicClass::Equivocal));

        let report = predict_outcome(&s("0,2,1,1,1")).unwrap();
        assert_eq!(
            (report.tau, report.predicted),
            (1, PeriodicClass::Clockwise { p_count: 1 })
        );

        let report = predict_outcome(&s("2,0,1,1,1")).unwrap();
        assert_eq!(
            (report.tau, report.predicted),
            (4, PeriodicClass::AntiClockwise { p_count: 1 })
        );

        let report = predict_outcome(&s("2,2,0,0")).unwrap();
        assert_eq!((report.tau, report.predicted), (0, PeriodicClass::Equitable));
    }

    #[test]
    fn predict_rejects_unbalanced_states() {
        assert_eq!(
            predict_outcome(&s("1,1,1,0")),
            Err(ClassifyError::NotBalanced { n: 4, m: 3 })
        );
    }

    #[test]
    fn symmetric_prediction_examples() {
        let report = predict_symmetric(&s("3,0,0")).unwrap();
        assert_eq!(report.predicted, PeriodicClass::Equitable);

        let report = predict_symmetric(&s("2,2,0,0")).unwrap();
        assert_eq!((report.tau, report.predicted), (0, PeriodicClass::Equitable));

        let report = predict_symmetric(&s("0,2,0,2")).unwrap();
        assert_eq!((report.tau, report.predicted), (2, PeriodicClass::Equivocal));
    }

    #[test]
    fn symmetric_prediction_rejects_bad_inputs() {
        assert_eq!(predict_symmetric(&s("0,2,1,1,1")), Err(ClassifyError::NotSymmetric));
        assert_eq!(
            predict_symmetric(&s("0,4,0")),
            Err(ClassifyError::NotBalanced { n: 3, m: 4 })
        );
    }

    #[test]
    fn monopoly_examples() {
        assert_eq!(monopoly(4), s("4,0,0,0"));
        assert_eq!(monopoly(1), s("1"));
        assert_eq!(monopoly(2), s("2,0"));
    }

    #[test]
    fn json_shapes_are_stable() {
        assert_eq!(
            serde_json::to_value(PeriodicClass::Clockwise { p_count: 2 }).unwrap(),
            serde_json::json!({"class": "clockwise", "p_count": 2})
        );
        assert_eq!(
            serde_json::to_value(PeriodicClass::AntiClockwise { p_count: 1 }).unwrap(),
            serde_json::json!({"class": "anticlockwise", "p_count": 1})
        );
        assert_eq!(
            serde_json::to_value(PeriodicClass::Equitable).unwrap(),
            serde_json::json!({"class": "equitable"})
        );
        let report = predict_outcome(&s("4,0,0,0")).unwrap();
        assert_eq!(
            serde_json::to_value(report).unwrap(),
            serde_json::json!({"tau": 2, "predicted": {"class": "equivocal"}})
        );
    }
}
