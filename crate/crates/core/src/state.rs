//! Ring states and the elementary quantities of the sharing game.
//!
//! A [`State`] is a ring of candy counts, one per child, read clockwise.
//! Children are addressed by 0-based position throughout. The interesting
//! case is the *balanced* one, where the total candy count equals the ring
//! size; every quantity here is still defined (and tested) off balance.

use std::fmt;
use std::str::FromStr;

use serde::de::Error as _;
use serde::ser::SerializeSeq;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

/// Errors from constructing, parsing, or slicing a ring state.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum StateError {
    #[error("a state needs at least one child")]
    Empty,
    #[error("invalid count '{token}' at position {position}")]
    InvalidToken { position: usize, token: String },
    #[error("negative count '{token}' at position {position}")]
    NegativeCount { position: usize, token: String },
    #[error("child {child} out of range for a ring of {n}")]
    ChildOutOfRange { child: usize, n: usize },
    #[error("child {child} holds {count}, sharing needs at least 2")]
    NotEnoughCandies { child: usize, count: u64 },
    #[error("substring length {length} out of range 1..={n}")]
    LengthOutOfRange { length: usize, n: usize },
}

/// A ring of candy counts, one entry per child, clockwise.
///
/// Always holds at least one child. The state is *balanced* when the candies
/// add up to the number of children; the sharing step conserves the total,
/// so balance is preserved forever once present.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct State {
    counts: Vec<u64>,
}

impl State {
    /// Wraps a count vector; rejects the empty ring.
    pub fn new(counts: Vec<u64>) -> Result<Self, StateError> {
        if counts.is_empty() {
            return Err(StateError::Empty);
        }
        Ok(State { counts })
    }

    /// Number of children on the ring.
    pub fn n(&self) -> usize {
        self.counts.len()
    }

    /// Total number of candies.
    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }

    /// Largest hoard on the ring.
    pub fn max_count(&self) -> u64 {
        *self.counts.iter().max().expect("ring is nonempty")
    }

    /// True when candies and children are equinumerous.
    pub fn is_balanced(&self) -> bool {
        self.total() == self.n() as u64
    }

    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    /// Children currently able to share, i.e. holding at least two.
    pub fn sharers(&self) -> impl Iterator<Item = usize> + '_ {
        self.counts
            .iter()
            .enumerate()
            .filter(|&(_, &c)| c >= 2)
            .map(|(i, _)| i)
    }

    /// One tick of the game: every child holding at least two candies gives
    /// one to each neighbour, all simultaneously.
    ///
    /// Neighbours are taken cyclically, so on a ring of two the single
    /// neighbour receives both candies, and on a ring of one the child hands
    /// both back to itself. The total is conserved.
    pub fn step(&self) -> State {
        let n = self.n();
        let mut next = self.counts.clone();
        for i in 0..n {
            // eligibility is read from self, so the order of this loop
            // cannot matter
            if self.counts[i] >= 2 {
                next[i] -= 2;
                next[(i + 1) % n] += 1;
                next[(i + n - 1) % n] += 1;
            }
        }
        State { counts: next }
    }

    /// One child shares alone: gives one candy to each neighbour.
    ///
    /// Requires the child to hold at least two. Neighbour coincidence on
    /// tiny rings works as in [`State::step`].
    pub fn share_one(&self, child: usize) -> Result<State, StateError> {
        let n = self.n();
        if child >= n {
            return Err(StateError::ChildOutOfRange { child, n });
        }
        if self.counts[child] < 2 {
            return Err(StateError::NotEnoughCandies {
                child,
                count: self.counts[child],
            });
        }
        let mut counts = self.counts.clone();
        counts[child] -= 2;
        counts[(child + 1) % n] += 1;
        counts[(child + n - 1) % n] += 1;
        Ok(State { counts })
    }

    /// Shortfall of the cyclic substring of `length` children starting at
    /// `start`: how many candies it is missing to average one per child.
    ///
    /// Defined as `max(0, length - sum)` over the substring. `start` is
    /// taken modulo the ring size; `length` must lie in `1..=n`.
    pub fn deficiency(&self, start: usize, length: usize) -> Result<u64, StateError> {
        let n = self.n();
        if length == 0 || length > n {
            return Err(StateError::LengthOutOfRange { length, n });
        }
        let sum: u64 = (0..length).map(|k| self.counts[(start + k) % n]).sum();
        Ok((length as u64).saturating_sub(sum))
    }

    /// Total deficiency over every cyclic substring: all `n` starting
    /// positions at every length from 1 to `n`.
    ///
    /// The index never increases under the sharing step, which is what
    /// forces the game into a cycle.
    pub fn index(&self) -> u64 {
        let n = self.n();
        // prefix sums over the doubled ring make each substring sum O(1)
        let mut prefix = vec![0u64; 2 * n + 1];
        for i in 0..2 * n {
            prefix[i + 1] = prefix[i] + self.counts[i % n];
        }
        let mut total = 0;
        for start in 0..n {
            for length in 1..=n as u64 {
                let sum = prefix[start + length as usize] - prefix[start];
                total += length.saturating_sub(sum);
            }
        }
        total
    }

    /// The conserved residue of the game, in `0..n`.
    ///
    /// Computed as `n/2` (for even rings; 0 for odd) plus the sum of
    /// `position * count` with positions numbered 1 to `n`, all modulo `n`.
    /// Rotating the ring, one child sharing, and the parallel step all leave
    /// it unchanged, which is why it alone decides the game's outcome.
    pub fn tau(&self) -> u64 {
        let n = self.n() as u128;
        let offset = if n % 2 == 0 { n / 2 } else { 0 };
        // wide accumulator, reduced once at the end
        let weighted: u128 = self
            .counts
            .iter()
            .enumerate()
            .map(|(i, &c)| (i as u128 + 1) * c as u128)
            .sum();
        ((offset + weighted) % n) as u64
    }

    /// Rotates `k` places: each child's candies move to the neighbour `k`
    /// steps anticlockwise, so entry `i` of the result is entry `i + k` of
    /// the input. Negative `k` rotates the other way.
    pub fn rotate(&self, k: i64) -> State {
        let n = self.n();
        let shift = k.rem_euclid(n as i64) as usize;
        let mut counts = self.counts.clone();
        counts.rotate_left(shift);
        State { counts }
    }

    /// Mirror image of the ring: the count vector reversed.
    pub fn reflect(&self) -> State {
        let mut counts = self.counts.clone();
        counts.reverse();
        State { counts }
    }

    /// The lexicographically smallest rotation, a canonical representative
    /// of the state's rotation class.
    pub fn canonical_rotation(&self) -> State {
        self.rotate(least_rotation_start(&self.counts) as i64)
    }

    /// True when some rotation of the ring equals its mirror image.
    ///
    /// Equivalent to the state and its reflection having the same rotation
    /// class, so it reduces to comparing canonical rotations.
    pub fn is_symmetric(&self) -> bool {
        self.canonical_rotation() == self.reflect().canonical_rotation()
    }

    /// Concatenates blocks into a state.
    pub fn from_blocks(blocks: &[Block]) -> Result<State, StateError> {
        let counts: Vec<u64> = blocks.iter().flat_map(|b| b.cells().iter().copied()).collect();
        State::new(counts)
    }
}

/// Index of the lexicographically least rotation of `s`, by Booth's
/// algorithm: one pass over the doubled word with a failure function,
/// linear in the ring size.
fn least_rotation_start(s: &[u64]) -> usize {
    let n = s.len();
    let mut failure = vec![-1i64; 2 * n];
    let mut k = 0usize;
    for j in 1..2 * n {
        let sj = s[j % n];
        let mut i = failure[j - k - 1];
        while i != -1 && sj != s[(k + i as usize + 1) % n] {
            if sj < s[(k + i as usize + 1) % n] {
                k = j - i as usize - 1;
            }
            i = failure[i as usize];
        }
        if i == -1 && sj != s[k % n] {
            if sj < s[k % n] {
                k = j;
            }
            failure[j - k] = -1;
        } else {
            failure[j - k] = i + 1;
        }
    }
    k % n
}

/// The three cells that build every periodic state of the balanced game.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Block {
    /// `(0, 2)`: a travelling pair that advances clockwise each step.
    P,
    /// `(2, 0)`: the mirror pair, advancing anticlockwise.
    PBar,
    /// `(1)`: a single content child.
    I,
}

impl Block {
    pub fn cells(self) -> &'static [u64] {
        match self {
            Block::P => &[0, 2],
            Block::PBar => &[2, 0],
            Block::I => &[1],
        }
    }
}

impl fmt::Display for State {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, c) in self.counts.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for State {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "State({self})")
    }
}

impl FromStr for State {
    type Err = StateError;

    /// Parses a comma-separated count list such as `0,2,1,1`. Spaces around
    /// tokens are tolerated; an empty list, an empty token, anything
    /// non-numeric, and negative values are rejected with the offending
    /// token and its 1-based position.
    fn from_str(text: &str) -> Result<Self, StateError> {
        if text.trim().is_empty() {
            return Err(StateError::Empty);
        }
        let mut counts = Vec::new();
        for (i, raw) in text.split(',').enumerate() {
            let token = raw.trim();
            let looks_negative =
                token.len() > 1 && token.starts_with('-') && token[1..].bytes().all(|b| b.is_ascii_digit());
            if looks_negative {
                return Err(StateError::NegativeCount {
                    position: i + 1,
                    token: token.to_string(),
                });
            }
            match token.parse::<u64>() {
                Ok(value) => counts.push(value),
                Err(_) => {
                    return Err(StateError::InvalidToken {
                        position: i + 1,
                        token: token.to_string(),
                    })
                }
            }
        }
        State::new(counts)
    }
}

impl Serialize for State {
    /// A state is a plain JSON array of counts.
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut seq = serializer.serialize_seq(Some(self.counts.len()))?;
        for c in &self.counts {
            seq.serialize_element(c)?;
        }
        seq.end()
    }
}

impl<'de> Deserialize<'de> for State {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let counts = Vec::<u64>::deserialize(deserializer)?;
        State::new(counts).map_err(D::Error::custom)
    }
}
