//! ASCII view of a trajectory.

use std::fmt::Write as _;

use candyshare::Trajectory;
use thiserror::Error;

/// The trajectory was computed without its step-by-step prefix.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
#[error("trajectory has no step-by-step prefix to draw")]
pub struct MissingPrefix;

/// One line per visited state: the step number, then the ring with every
/// child able to share shown in brackets. A delimiter line marks where the
/// cycle begins. Lines wider than `width` columns are cut with an ellipsis.
pub fn render_trajectory(traj: &Trajectory, width: usize) -> Result<String, MissingPrefix> {
    let steps = traj.steps().ok_or(MissingPrefix)?;
    let num_width = steps.len().saturating_sub(1).to_string().len();
    let mut out = String::new();
    for (step_no, state) in steps.iter().enumerate() {
        if step_no == traj.transient_length {
            let _ = writeln!(out, "--- cycle (period {}) ---", traj.period);
        }
        let cells: Vec<String> = state
            .counts()
            .iter()
            .map(|&c| if c >= 2 { format!("[{c}]") } else { c.to_string() })
            .collect();
        let _ = writeln!(out, "{}", clip(&format!("{step_no:>num_width$}  {}", cells.join(",")), width));
    }
    Ok(out)
}

fn clip(line: &str, width: usize) -> String {
    if width == 0 || line.chars().count() <= width {
        return line.to_string();
    }
    let mut cut: String = line.chars().take(width.saturating_sub(3)).collect();
    cut.push_str("...");
    cut
}
