//! SAT backends: a built-in CDCL solver and external DIMACS solvers.

pub mod cdcl;
pub mod dimacs;
pub mod external;
pub mod maxsat;

use std::path::PathBuf;
use std::time::{Duration, Instant};

use crate::error::Result;
use crate::kb::CnfInstance;

pub use cdcl::CdclSolver;
pub use dimacs::{emit_dimacs, parse_dimacs};
pub use maxsat::{solve_maxsat, MaxSatInstance, MaxSatOutcome};

/// Environment variable naming an external SAT solver binary.
pub const SAT_SOLVER_ENV: &str = "INCMETER_SAT_SOLVER";

/// Outcome of one satisfiability call.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SolverResult {
    /// A model indexed by variable; slot 0 is unused.
    Sat(Vec<bool>),
    Unsat,
    Timeout(Duration),
}

impl SolverResult {
    pub fn is_sat(&self) -> bool {
        matches!(self, SolverResult::Sat(_))
    }
}

/// Which solver answers satisfiability queries.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub enum BackendKind {
    #[default]
    Internal,
    External { path: PathBuf, args: Vec<String> },
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct BackendConfig {
    pub kind: BackendKind,
    /// Wall-clock budget for a whole measure computation.
    pub timeout: Option<Duration>,
    pub seed: u64,
}

impl BackendConfig {
    /// Internal solver with the given seed and no timeout.
    pub fn internal(seed: u64) -> Self {
        BackendConfig {
            kind: BackendKind::Internal,
            timeout: None,
            seed,
        }
    }

    /// External solver named by [`SAT_SOLVER_ENV`], if set.
    pub fn from_env() -> Option<Self> {
        let path = std::env::var_os(SAT_SOLVER_ENV)?;
        Some(BackendConfig {
            kind: BackendKind::External {
                path: path.into(),
                args: Vec::new(),
            },
            ..Default::default()
        })
    }

    pub fn deadline(&self) -> Deadline {
        Deadline::new(self.timeout)
    }
}

/// A start instant and an optional budget.
#[derive(Clone, Copy, Debug)]
pub struct Deadline {
    start: Instant,
    limit: Option<Duration>,
}

impl Deadline {
    pub fn new(limit: Option<Duration>) -> Self {
        Deadline {
            start: Instant::now(),
            limit,
        }
    }

    pub fn none() -> Self {
        Deadline::new(None)
    }

    pub fn elapsed(&self) -> Duration {
        self.start.elapsed()
    }

    pub fn expired(&self) -> bool {
        self.limit.is_some_and(|l| self.start.elapsed() >= l)
    }

    /// Time left, or `None` without a budget.
    pub fn remaining(&self) -> Option<Duration> {
        self.limit.map(|l| l.saturating_sub(self.start.elapsed()))
    }
}

/// Time spent in one call: handing the clauses over, then searching.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct CallTimes {
    pub load: Duration,
    pub search: Duration,
}

/// Solve `cnf` with the configured backend.
pub fn solve(cnf: &CnfInstance, config: &BackendConfig, deadline: &Deadline) -> Result<SolverResult> {
    solve_timed(cnf, config, deadline).map(|(r, _)| r)
}

/// [`solve`], also reporting where the time went.
pub fn solve_timed(
    cnf: &CnfInstance,
    config: &BackendConfig,
    deadline: &Deadline,
) -> Result<(SolverResult, CallTimes)> {
    if deadline.expired() {
        return Ok((SolverResult::Timeout(deadline.elapsed()), CallTimes::default()));
    }
    match &config.kind {
        BackendKind::Internal => Ok(solve_internal_timed(cnf, config.seed, deadline)),
        BackendKind::External { path, args } => external::solve_external(cnf, path, args, deadline),
    }
}

/// Solve `cnf` with the built-in CDCL solver.
pub fn solve_internal(cnf: &CnfInstance, seed: u64, deadline: &Deadline) -> SolverResult {
    solve_internal_timed(cnf, seed, deadline).0
}

fn solve_internal_timed(cnf: &CnfInstance, seed: u64, deadline: &Deadline) -> (SolverResult, CallTimes) {
    let t0 = Instant::now();
    let mut s = CdclSolver::new(cnf.num_vars(), seed);
    for c in &cnf.clauses {
        s.add_clause(c);
    }
    let t1 = Instant::now();
    let r = s.solve(deadline);
    if let SolverResult::Sat(m) = &r {
        assert!(cnf.satisfied_by(m), "solver produced a non-model");
    }
    let times = CallTimes {
        load: t1 - t0,
        search: t1.elapsed(),
    };
    (r, times)
}
