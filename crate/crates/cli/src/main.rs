//! `candyshare`: the balanced candy-sharing game from the command line.
//!
//! Exit status: 0 on success, 1 on a domain error (unparseable state,
//! violated precondition, exhausted step or enumeration budget), 2 when a
//! verification run finds counterexamples or a claimed-impossible input
//! shows up, 64 for usage mistakes.

mod render;

use std::fmt;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use candyshare::{
    classify_periodic, detect_cycle_with_prefix, monopoly, predict_outcome, verify, CapacityError,
    ClassifyError, CycleNotFound, DedupMode, OutcomeReport, PeriodicClass,
    State, StateError, StateSpace, Theorem, Trajectory, UnknownTheorem, VerificationReport,
    VerifyOptions, DEFAULT_BUDGET, DEFAULT_MAX_STEPS,
};

/// Version of the JSON output contract; bumped only on breaking changes.
const SCHEMA: u32 = 1;

const EXIT_USAGE: u8 = 64;

#[derive(Parser)]
#[command(
    name = "candyshare",
    version,
    about = "Simulate, classify, predict, and verify the balanced candy-sharing game on a ring"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum)]
enum Format {
    #[default]
    Text,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum)]
enum ReportFormat {
    #[default]
    Text,
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// Run the game until its cycle is found.
    Simulate {
        /// Starting state as comma-separated counts, e.g. 2,2,0,0.
        #[arg(long)]
        state: String,
        /// Step budget before giving up.
        #[arg(long, default_value_t = DEFAULT_MAX_STEPS)]
        max_steps: usize,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
        /// Also draw the trajectory line by line (text format only).
        #[arg(long)]
        render: bool,
    },
    /// Apply one parallel step, or a single child's share with --child.
    Step {
        #[arg(long)]
        state: String,
        /// 1-based position of the one child to share; everyone shares if omitted.
        #[arg(long)]
        child: Option<usize>,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
    },
    /// Total deficiency over all cyclic substrings.
    Index {
        #[arg(long)]
        state: String,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
    },
    /// The conserved residue that decides a balanced game's outcome.
    Tau {
        #[arg(long)]
        state: String,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
    },
    /// Predict the long-run class of a balanced game without simulating.
    Predict {
        #[arg(long)]
        state: String,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
    },
    /// Name the shape of a periodic state.
    Classify {
        #[arg(long)]
        state: String,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
    },
    /// Check whether some rotation of the ring equals its mirror image.
    Symmetric {
        #[arg(long)]
        state: String,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
    },
    /// The starting state with all candies in one hoard.
    Monopoly {
        /// Ring size.
        #[arg(long)]
        n: usize,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
    },
    /// List or count the distributions of m candies among n children.
    Enumerate {
        /// Ring size.
        #[arg(long)]
        n: usize,
        /// Total candies; defaults to n.
        #[arg(long)]
        m: Option<u64>,
        /// One representative per rotation class.
        #[arg(long)]
        unique: bool,
        /// Print only how many states there are.
        #[arg(long)]
        count_only: bool,
        /// Largest state space to stream.
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: u64,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
    },
    /// Check one claim against every balanced state of the given ring sizes.
    Verify {
        /// One of: index-monotonicity, tau-invariance, abelian, taxonomy,
        /// prediction, symmetric, monopoly.
        #[arg(long, value_parser = theorem_parser)]
        theorem: Theorem,
        /// Ring sizes: a single size, an inclusive a..b range, or a
        /// comma-separated mix of both.
        #[arg(long, value_parser = sizes_parser)]
        n: RingSizes,
        /// Worker threads.
        #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u64).range(1..))]
        jobs: u64,
        /// Largest state space to stream per ring size.
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: u64,
        #[arg(long, value_enum, default_value_t)]
        format: ReportFormat,
    },
    /// Draw a trajectory, one line per step, sharers marked.
    Render {
        #[arg(long)]
        state: String,
        #[arg(long, default_value_t = DEFAULT_MAX_STEPS)]
        max_steps: usize,
        /// Column budget per line.
        #[arg(long, default_value_t = 80)]
        width: usize,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
    },
}

#[derive(Debug, Clone)]
struct RingSizes(Vec<usize>);

fn sizes_parser(text: &str) -> Result<RingSizes, String> {
    let mut sizes = Vec::new();
    for part in text.split(',') {
        let part = part.trim();
        if let Some((a, b)) = part.split_once("..") {
            let a: usize = a.trim().parse().map_err(|_| format!("bad range start '{a}'"))?;
            let b: usize = b.trim().parse().map_err(|_| format!("bad range end '{b}'"))?;
            if a > b {
                return Err(format!("empty range '{part}'"));
            }
            sizes.extend(a..=b);
        } else {
            sizes.push(part.parse().map_err(|_| format!("bad ring size '{part}'"))?);
        }
    }
    if sizes.is_empty() {
        return Err("no ring sizes given".to_string());
    }
    Ok(RingSizes(sizes))
}

fn theorem_parser(text: &str) -> Result<Theorem, String> {
    text.parse().map_err(|e: UnknownTheorem| e.to_string())
}

enum CliError {
    /// Bad data or a violated precondition.
    Domain(String),
    /// A mathematical impossibility showed up; the implementation or the
    /// claim it rests on is wrong.
    Violation(String),
}

impl CliError {
    fn exit_code(&self) -> ExitCode {
        match self {
            CliError::Domain(_) => ExitCode::from(1),
            CliError::Violation(_) => ExitCode::from(2),
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Domain(msg) | CliError::Violation(msg) => f.write_str(msg),
        }
    }
}

impl From<StateError> for CliError {
    fn from(e: StateError) -> CliError {
        CliError::Domain(e.to_string())
    }
}

impl From<CycleNotFound> for CliError {
    fn from(e: CycleNotFound) -> CliError {
        CliError::Domain(e.to_string())
    }
}

impl From<CapacityError> for CliError {
    fn from(e: CapacityError) -> CliError {
        CliError::Domain(format!("{e}; raise --budget to continue"))
    }
}

impl From<ClassifyError> for CliError {
    fn from(e: ClassifyError) -> CliError {
        match e {
            ClassifyError::TheoremViolation { .. } | ClassifyError::AmbiguousTiling => {
                CliError::Violation(e.to_string())
            }
            _ => CliError::Domain(e.to_string()),
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            let code = match err.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => EXIT_USAGE,
            };
            let _ = err.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err}");
            err.exit_code()
        }
    }
}

#[derive(Serialize)]
struct TrajectoryDoc<'a> {
    schema: u32,
    #[serde(flatten)]
    trajectory: &'a Trajectory,
}

#[derive(Serialize)]
struct StepDoc<'a> {
    schema: u32,
    state: &'a State,
    #[serde(skip_serializing_if = "Option::is_none")]
    child: Option<usize>,
    result: &'a State,
}

#[derive(Serialize)]
struct IndexDoc<'a> {
    schema: u32,
    state: &'a State,
    index: u64,
}

#[derive(Serialize)]
struct TauDoc<'a> {
    schema: u32,
    state: &'a State,
    tau: u64,
}

#[derive(Serialize)]
struct PredictDoc<'a> {
    schema: u32,
    state: &'a State,
    #[serde(flatten)]
    report: &'a OutcomeReport,
}

#[derive(Serialize)]
struct ClassifyDoc<'a> {
    schema: u32,
    state: &'a State,
    #[serde(flatten)]
    class: &'a PeriodicClass,
}

#[derive(Serialize)]
struct SymmetricDoc<'a> {
    schema: u32,
    state: &'a State,
    symmetric: bool,
}

#[derive(Serialize)]
struct MonopolyDoc {
    schema: u32,
    n: usize,
    state: State,
}

#[derive(Serialize)]
struct EnumerateDoc {
    schema: u32,
    n: usize,
    m: u64,
    dedup: &'static str,
    count: u128,
    #[serde(skip_serializing_if = "Option::is_none")]
    states: Option<Vec<State>>,
}

#[derive(Serialize)]
struct VerifyDoc<'a> {
    schema: u32,
    #[serde(flatten)]
    report: &'a VerificationReport,
}

#[derive(Serialize)]
struct RenderDoc {
    schema: u32,
    lines: Vec<String>,
}

fn emit_json<T: Serialize>(doc: &T) {
    println!("{}", serde_json::to_string(doc).expect("documents serialize"));
}

fn parse_state(text: &str) -> Result<State, CliError> {
    Ok(text.parse::<State>()?)
}

fn run(cli: Cli) -> Result<ExitCode, CliError> {
    match cli.command {
        Command::Simulate {
            state,
            max_steps,
            format,
            render,
        } => {
            let state = parse_state(&state)?;
            let traj = detect_cycle_with_prefix(&state, max_steps)?;
            match format {
                Format::Json => emit_json(&TrajectoryDoc {
                    schema: SCHEMA,
                    trajectory: &traj,
                }),
                Format::Text => {
                    println!("initial: {}", traj.initial);
                    println!("transient: {}", traj.transient_length);
                    println!("period: {}", traj.period);
                    println!("cycle:");
                    for on_cycle in &traj.cycle {
                        println!("  {on_cycle}");
                    }
                    if render {
                        print!(
                            "{}",
                            render::render_trajectory(&traj, 80).expect("prefix was retained")
                        );
                    }
                }
            }
            Ok(ExitCode::SUCCESS)
        }

        Command::Step {
            state,
            child,
            format,
        } => {
            let state = parse_state(&state)?;
            let result = match child {
                None => state.step(),
                Some(position) => {
                    if position == 0 || position > state.n() {
                        return Err(CliError::Domain(format!(
                            "child {position} out of range 1..={}",
                            state.n()
                        )));
                    }
                    state.share_one(position - 1).map_err(|e| match e {
                        // report the child the way the user numbered it
                        StateError::NotEnoughCandies { count, .. } => CliError::Domain(format!(
                            "child {position} holds {count}, sharing needs at least 2"
                        )),
                        other => CliError::from(other),
                    })?
                }
            };
            match format {
                Format::Json => emit_json(&StepDoc {
                    schema: SCHEMA,
                    state: &state,
                    child,
                    result: &result,
                }),
                Format::Text => println!("{result}"),
            }
            Ok(ExitCode::SUCCESS)
        }

        Command::Index { state, format } => {
            let state = parse_state(&state)?;
            let index = state.index();
            match format {
                Format::Json => emit_json(&IndexDoc {
                    schema: SCHEMA,
                    state: &state,
                    index,
                }),
                Format::Text => println!("{index}"),
            }
            Ok(ExitCode::SUCCESS)
        }

        Command::Tau { state, format } => {
            let state = parse_state(&state)?;
            let tau = state.tau();
            match format {
                Format::Json => emit_json(&TauDoc {
                    schema: SCHEMA,
                    state: &state,
                    tau,
                }),
                Format::Text => println!("{tau}"),
            }
            Ok(ExitCode::SUCCESS)
        }

        Command::Predict { state, format } => {
            let state = parse_state(&state)?;
            let report = predict_outcome(&state)?;
            match format {
                Format::Json => emit_json(&PredictDoc {
                    schema: SCHEMA,
                    state: &state,
                    report: &report,
                }),
                Format::Text => {
                    println!("state: {state}");
                    println!("tau: {}", report.tau);
                    print_class("class", report.predicted);
                }
            }
            Ok(ExitCode::SUCCESS)
        }

        Command::Classify { state, format } => {
            let state = parse_state(&state)?;
            let class = classify_periodic(&state)?;
            match format {
                Format::Json => emit_json(&ClassifyDoc {
                    schema: SCHEMA,
                    state: &state,
                    class: &class,
                }),
                Format::Text => print_class("class", class),
            }
            Ok(ExitCode::SUCCESS)
        }

        Command::Symmetric { state, format } => {
            let state = parse_state(&state)?;
            let symmetric = state.is_symmetric();
            match format {
                Format::Json => emit_json(&SymmetricDoc {
                    schema: SCHEMA,
                    state: &state,
                    symmetric,
                }),
                Format::Text => println!("{symmetric}"),
            }
            Ok(ExitCode::SUCCESS)
        }

        Command::Monopoly { n, format } => {
            if n == 0 {
                return Err(CliError::Domain("ring size must be at least 1".to_string()));
            }
            let state = monopoly(n);
            match format {
                Format::Json => emit_json(&MonopolyDoc {
                    schema: SCHEMA,
                    n,
                    state,
                }),
                Format::Text => println!("{state}"),
            }
            Ok(ExitCode::SUCCESS)
        }

        Command::Enumerate {
            n,
            m,
            unique,
            count_only,
            budget,
            format,
        } => {
            if n == 0 {
                return Err(CliError::Domain("ring size must be at least 1".to_string()));
            }
            let m = m.unwrap_or(n as u64);
            let dedup = if unique {
                DedupMode::UniqueUpToRotation
            } else {
                DedupMode::All
            };
            let dedup_name = if unique { "unique-up-to-rotation" } else { "all" };
            let space = StateSpace::new(n, m, dedup);
            if count_only {
                // the full count has a closed form; only deduplication
                // needs to walk the stream (and therefore fit the budget)
                let count: u128 = match dedup {
                    DedupMode::All => space.cardinality(),
                    DedupMode::UniqueUpToRotation => space.states(budget)?.count() as u128,
                };
                match format {
                    Format::Json => emit_json(&EnumerateDoc {
                        schema: SCHEMA,
                        n,
                        m,
                        dedup: dedup_name,
                        count,
                        states: None,
                    }),
                    Format::Text => println!("{count}"),
                }
            } else {
                let states: Vec<State> = space.states(budget)?.collect();
                match format {
                    Format::Json => emit_json(&EnumerateDoc {
                        schema: SCHEMA,
                        n,
                        m,
                        dedup: dedup_name,
                        count: states.len() as u128,
                        states: Some(states),
                    }),
                    Format::Text => {
                        for state in &states {
                            println!("{state}");
                        }
                    }
                }
            }
            Ok(ExitCode::SUCCESS)
        }

        Command::Verify {
            theorem,
            n,
            jobs,
            budget,
            format,
        } => {
            if n.0.iter().any(|&size| size == 0) {
                return Err(CliError::Domain("ring size must be at least 1".to_string()));
            }
            let options = VerifyOptions {
                budget,
                jobs: jobs as usize,
                max_steps: DEFAULT_MAX_STEPS,
            };
            let report = verify(theorem, &n.0, &options)?;
            match format {
                ReportFormat::Json => emit_json(&VerifyDoc {
                    schema: SCHEMA,
                    report: &report,
                }),
                ReportFormat::Csv => print!("{}", csv_report(&report)),
                ReportFormat::Text => print_report(&report),
            }
            Ok(if report.ok() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(2)
            })
        }

        Command::Render {
            state,
            max_steps,
            width,
            format,
        } => {
            let state = parse_state(&state)?;
            let traj = detect_cycle_with_prefix(&state, max_steps)?;
            let text =
                render::render_trajectory(&traj, width).expect("prefix was retained");
            match format {
                Format::Json => emit_json(&RenderDoc {
                    schema: SCHEMA,
                    lines: text.lines().map(String::from).collect(),
                }),
                Format::Text => print!("{text}"),
            }
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn print_class(label: &str, class: PeriodicClass) {
    match class {
        PeriodicClass::Clockwise { p_count } => {
            println!("{label}: clockwise");
            println!("p_count: {p_count}");
        }
        PeriodicClass::AntiClockwise { p_count } => {
            println!("{label}: anticlockwise");
            println!("p_count: {p_count}");
        }
        PeriodicClass::Equitable => println!("{label}: equitable"),
        PeriodicClass::Equivocal => println!("{label}: equivocal"),
    }
}

fn print_report(report: &VerificationReport) {
    println!("theorem: {}", report.theorem);
    let sizes: Vec<String> = report.n_values.iter().map(|n| n.to_string()).collect();
    println!("n: {}", sizes.join(","));
    println!("states checked: {}", report.states_checked);
    println!("failures: {}", report.failures.len());
    for failure in report.failures.iter().take(5) {
        println!(
            "  state {}: expected {}, observed {}",
            failure.state, failure.expected, failure.observed
        );
    }
    if report.failures.len() > 5 {
        println!("  ... and {} more", report.failures.len() - 5);
    }
    println!("elapsed: {:.3}s", report.elapsed.as_secs_f64());
    println!(
        "result: {}",
        if report.ok() { "PASS" } else { "FAIL" }
    );
}

/// One row per ring size checked.
fn csv_report(report: &VerificationReport) -> String {
    let mut out = String::from("theorem,n,states_checked,failures\n");
    for row in &report.per_n {
        out.push_str(&format!(
            "{},{},{},{}\n",
            report.theorem, row.n, row.states_checked, row.failures
        ));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ring_size_lists_parse() {
        assert_eq!(sizes_parser("4").unwrap().0, vec![4]);
        assert_eq!(sizes_parser("3..6").unwrap().0, vec![3, 4, 5, 6]);
        assert_eq!(sizes_parser("3..5,9,11..12").unwrap().0, vec![3, 4, 5, 9, 11, 12]);
        assert!(sizes_parser("6..3").is_err());
        assert!(sizes_parser("x").is_err());
        assert!(sizes_parser("").is_err());
    }

    #[test]
    fn theorems_parse_by_id() {
        assert_eq!(theorem_parser("abelian"), Ok(Theorem::Abelian));
        assert!(theorem_parser("abelia").is_err());
    }

    #[test]
    fn impossibilities_map_to_the_violation_exit() {
        let violation = CliError::from(ClassifyError::TheoremViolation { tau: 1, n: 4 });
        assert!(matches!(violation, CliError::Violation(_)));
        let domain = CliError::from(ClassifyError::NotPeriodic);
        assert!(matches!(domain, CliError::Domain(_)));
        let parse = CliError::from(StateError::Empty);
        assert!(matches!(parse, CliError::Domain(_)));
    }

    #[test]
    fn csv_reports_carry_one_row_per_ring_size() {
        let report = verify(
            Theorem::Abelian,
            &[3, 4],
            &VerifyOptions {
                budget: DEFAULT_BUDGET,
                jobs: 1,
                max_steps: DEFAULT_MAX_STEPS,
            },
        )
        .unwrap();
        assert_eq!(
            csv_report(&report),
            "theorem,n,states_checked,failures\nabelian,3,10,0\nabelian,4,35,0\n"
        );
    }
}
