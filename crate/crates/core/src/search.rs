//! Turning decision encodings into measure values, and the common entry
//! point [`compute`] for every method.

use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;
use std::time::{Duration, Instant};

use serde::Serialize;

use crate::asp;
use crate::cardinality::CardinalityMethod;
use crate::error::{Error, Result};
use crate::kb::KnowledgeBase;
use crate::measure::{InconsistencyValue, Measure};
use crate::oracles::naive::naive_measure;
use crate::sat_encodings::{encode_with, maxsat_contension};
use crate::solver::{solve_maxsat, solve_timed, BackendConfig, Deadline, SolverResult};

/// How a value is computed.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    SatBinary,
    SatLinear,
    MaxSat,
    Naive,
    Asp,
}

impl Method {
    pub const ALL: [Method; 5] = [
        Method::SatBinary,
        Method::SatLinear,
        Method::MaxSat,
        Method::Naive,
        Method::Asp,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Method::SatBinary => "sat-binary",
            Method::SatLinear => "sat-linear",
            Method::MaxSat => "maxsat",
            Method::Naive => "naive",
            Method::Asp => "asp",
        }
    }

    pub fn supports(self, measure: Measure) -> bool {
        self != Method::MaxSat || measure == Measure::Contension
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Method {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Method::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| format!("unknown method `{s}`"))
    }
}

/// Wall-clock time per phase of one computation.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct PhaseTimes {
    /// Building constraints or programs.
    pub encoding: Duration,
    /// Handing clauses to the solver (DIMACS writing for external solvers).
    pub cnf_transform: Duration,
    pub solving: Duration,
    pub other: Duration,
}

impl PhaseTimes {
    pub fn total(&self) -> Duration {
        self.encoding + self.cnf_transform + self.solving + self.other
    }

    /// Set `other` so that the phases add up to `total`.
    fn close(&mut self, total: Duration) {
        self.other = total.saturating_sub(self.encoding + self.cnf_transform + self.solving);
    }
}

impl Serialize for PhaseTimes {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("PhaseTimes", 4)?;
        st.serialize_field("encoding", &self.encoding.as_secs_f64())?;
        st.serialize_field("cnfTransform", &self.cnf_transform.as_secs_f64())?;
        st.serialize_field("solving", &self.solving.as_secs_f64())?;
        st.serialize_field("other", &self.other.as_secs_f64())?;
        st.end()
    }
}

/// The value of a measure with bookkeeping.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct SearchOutcome {
    pub measure: Measure,
    pub method: Method,
    pub value: InconsistencyValue,
    pub solver_calls: u64,
    pub phase_times: PhaseTimes,
}

/// Finite candidate values `min..=max` of a measure on a knowledge base.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SearchRange {
    pub measure: Measure,
    pub min: u64,
    pub max: u64,
    pub infinity_possible: bool,
}

impl SearchRange {
    pub fn new(measure: Measure, prepared: &KnowledgeBase) -> Self {
        SearchRange {
            measure,
            min: 0,
            max: measure.max_value(prepared),
            infinity_possible: measure.infinity_possible(),
        }
    }

    pub fn size(&self) -> u64 {
        self.max - self.min + 1
    }

    /// Most solver calls binary search may make on this range.
    pub fn binary_call_bound(&self) -> u64 {
        u64::from(self.size().ilog2()) + 1
    }
}

/// Options shared by all methods.
#[derive(Clone, Debug, Default)]
pub struct ComputeOptions {
    pub backend: BackendConfig,
    pub cardinality: CardinalityMethod,
    /// ASP solver executable; falls back to the environment.
    pub asp_solver: Option<PathBuf>,
}

// The query for slot `u`: hitting-set blocks count interpretations, so the
// value `u` corresponds to `u + 1` blocks.
fn query_bound(measure: Measure, u: u64) -> u64 {
    if measure == Measure::HittingSet {
        u + 1
    } else {
        u
    }
}

struct Decider<'a> {
    kb: &'a KnowledgeBase,
    measure: Measure,
    options: &'a ComputeOptions,
    deadline: Deadline,
    calls: u64,
    phases: PhaseTimes,
}

impl Decider<'_> {
    /// `Some(true)` iff the measure is at most `u`; `None` on timeout.
    fn at_most(&mut self, u: u64) -> Result<Option<bool>> {
        let t = Instant::now();
        let enc = encode_with(self.measure, self.kb, query_bound(self.measure, u), self.options.cardinality);
        self.phases.encoding += t.elapsed();
        self.calls += 1;
        let (r, times) = solve_timed(&enc.cnf, &self.options.backend, &self.deadline)?;
        self.phases.cnf_transform += times.load;
        self.phases.solving += times.search;
        Ok(match r {
            SolverResult::Sat(_) => Some(true),
            SolverResult::Unsat => Some(false),
            SolverResult::Timeout(_) => None,
        })
    }

    fn timeout(&self, lower: u64, upper: Option<u64>) -> Error {
        Error::Timeout {
            elapsed: self.deadline.elapsed(),
            lower,
            upper,
        }
    }

    fn outcome(mut self, method: Method, value: InconsistencyValue, start: Instant) -> SearchOutcome {
        self.phases.close(start.elapsed());
        SearchOutcome {
            measure: self.measure,
            method,
            value,
            solver_calls: self.calls,
            phase_times: self.phases,
        }
    }
}

fn trivial(kb: &KnowledgeBase, measure: Measure, method: Method, start: Instant) -> Result<Option<SearchOutcome>> {
    if matches!(measure, Measure::Contension | Measure::Forgetting) && kb.has_contradiction_constant() {
        return Err(Error::Undefined(measure));
    }
    if kb.is_empty() {
        let mut phases = PhaseTimes::default();
        phases.close(start.elapsed());
        return Ok(Some(SearchOutcome {
            measure,
            method,
            value: InconsistencyValue::Finite(0),
            solver_calls: 0,
            phase_times: phases,
        }));
    }
    Ok(None)
}

/// Binary search over the value range, one satisfiability call per step.
/// No satisfiable bound in the range means infinity.
pub fn binary_search(kb: &KnowledgeBase, measure: Measure, options: &ComputeOptions) -> Result<SearchOutcome> {
    let start = Instant::now();
    let kb = kb.prepared();
    if let Some(o) = trivial(&kb, measure, Method::SatBinary, start)? {
        return Ok(o);
    }
    let range = SearchRange::new(measure, &kb);
    let mut d = Decider {
        kb: &kb,
        measure,
        options,
        deadline: options.backend.deadline(),
        calls: 0,
        phases: PhaseTimes::default(),
    };
    let (mut min, mut max) = (range.min as i64, range.max as i64);
    let mut inc_val: i64 = -1;
    while min <= max {
        let mid = min + (max - min) / 2;
        match d.at_most(mid as u64)? {
            Some(true) => {
                if inc_val < 0 || mid < inc_val {
                    inc_val = mid;
                }
                max = mid - 1;
            }
            Some(false) => min = mid + 1,
            None => {
                let upper = (inc_val >= 0).then_some(inc_val as u64);
                return Err(d.timeout(min as u64, upper));
            }
        }
    }
    let value = if inc_val >= 0 {
        InconsistencyValue::Finite(inc_val as u64)
    } else if range.infinity_possible {
        InconsistencyValue::Infinity
    } else {
        return Err(exhausted(measure, &range));
    };
    Ok(d.outcome(Method::SatBinary, value, start))
}

fn exhausted(measure: Measure, range: &SearchRange) -> Error {
    Error::Backend(format!(
        "no bound up to {} holds for {measure}, which is always finite",
        range.max
    ))
}

/// Try `u = 0, 1, ...` until the first satisfiable bound.
pub fn linear_search(kb: &KnowledgeBase, measure: Measure, options: &ComputeOptions) -> Result<SearchOutcome> {
    let start = Instant::now();
    let kb = kb.prepared();
    if let Some(o) = trivial(&kb, measure, Method::SatLinear, start)? {
        return Ok(o);
    }
    let range = SearchRange::new(measure, &kb);
    let mut d = Decider {
        kb: &kb,
        measure,
        options,
        deadline: options.backend.deadline(),
        calls: 0,
        phases: PhaseTimes::default(),
    };
    for u in 0..=range.max {
        match d.at_most(u)? {
            Some(true) => return Ok(d.outcome(Method::SatLinear, InconsistencyValue::Finite(u), start)),
            Some(false) => {}
            None => return Err(d.timeout(u, None)),
        }
    }
    if range.infinity_possible {
        Ok(d.outcome(Method::SatLinear, InconsistencyValue::Infinity, start))
    } else {
        Err(exhausted(measure, &range))
    }
}

fn maxsat(kb: &KnowledgeBase, measure: Measure, options: &ComputeOptions) -> Result<SearchOutcome> {
    let start = Instant::now();
    if measure != Measure::Contension {
        return Err(Error::UnsupportedMethod {
            method: Method::MaxSat.name().into(),
            measure,
        });
    }
    let kb = kb.prepared();
    if let Some(o) = trivial(&kb, measure, Method::MaxSat, start)? {
        return Ok(o);
    }
    let t = Instant::now();
    let inst = maxsat_contension(&kb);
    let encoding = t.elapsed();
    let out = solve_maxsat(&inst, &options.backend, &options.backend.deadline(), options.cardinality)?;
    let mut phases = PhaseTimes {
        encoding,
        cnf_transform: out.times.load,
        solving: out.times.search,
        other: Duration::ZERO,
    };
    phases.close(start.elapsed());
    Ok(SearchOutcome {
        measure,
        method: Method::MaxSat,
        value: InconsistencyValue::Finite(out.cost),
        solver_calls: out.calls,
        phase_times: phases,
    })
}

fn naive(kb: &KnowledgeBase, measure: Measure, options: &ComputeOptions) -> Result<SearchOutcome> {
    let start = Instant::now();
    let out = naive_measure(kb, measure, &options.backend.deadline())?;
    let mut phases = PhaseTimes {
        solving: start.elapsed(),
        ..Default::default()
    };
    phases.close(start.elapsed());
    Ok(SearchOutcome {
        measure,
        method: Method::Naive,
        value: out.value,
        solver_calls: out.checks,
        phase_times: phases,
    })
}

fn asp_method(kb: &KnowledgeBase, measure: Measure, options: &ComputeOptions) -> Result<SearchOutcome> {
    let start = Instant::now();
    let kb = kb.prepared();
    if let Some(o) = trivial(&kb, measure, Method::Asp, start)? {
        return Ok(o);
    }
    let solver = asp::AspSolver::resolve(options.asp_solver.as_deref())?;
    let t = Instant::now();
    let program = asp::emit_asp(measure, &kb);
    let encoding = t.elapsed();
    let t = Instant::now();
    let value = solver.solve(&program, measure, &options.backend.deadline())?;
    let solving = t.elapsed();
    let mut phases = PhaseTimes {
        encoding,
        solving,
        ..Default::default()
    };
    phases.close(start.elapsed());
    Ok(SearchOutcome {
        measure,
        method: Method::Asp,
        value,
        solver_calls: 1,
        phase_times: phases,
    })
}

/// Compute `measure` on `kb` with `method`.
pub fn compute(
    kb: &KnowledgeBase,
    measure: Measure,
    method: Method,
    options: &ComputeOptions,
) -> Result<SearchOutcome> {
    match method {
        Method::SatBinary => binary_search(kb, measure, options),
        Method::SatLinear => linear_search(kb, measure, options),
        Method::MaxSat => maxsat(kb, measure, options),
        Method::Naive => naive(kb, measure, options),
        Method::Asp => asp_method(kb, measure, options),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kb::parse_kb;

    fn opts() -> ComputeOptions {
        ComputeOptions::default()
    }

    #[test]
    fn range_sizes_and_bounds() {
        let kb = parse_kb("x && y\nx || y\n!x").unwrap().prepared();
        let r = SearchRange::new(Measure::HittingSet, &kb);
        assert_eq!((r.max, r.size()), (2, 3));
        assert_eq!(r.binary_call_bound(), 2);
        let c = SearchRange::new(Measure::Contension, &kb);
        assert_eq!(c.size(), 3);
        let s = SearchRange::new(Measure::SumDistance, &kb);
        assert_eq!((s.size(), s.binary_call_bound()), (7, 3));
    }

    #[test]
    fn k7_all_sat_methods() {
        let kb = parse_kb("x && y\nx || y\n!x").unwrap();
        for m in Measure::ALL {
            let b = binary_search(&kb, m, &opts()).unwrap();
            let l = linear_search(&kb, m, &opts()).unwrap();
            assert_eq!(b.value, InconsistencyValue::Finite(1), "{m}");
            assert_eq!(l.value, InconsistencyValue::Finite(1), "{m}");
            assert_eq!(l.solver_calls, 2);
            let bound = SearchRange::new(m, &kb.prepared()).binary_call_bound();
            assert!(b.solver_calls <= bound, "{m}: {} > {bound}", b.solver_calls);
        }
        let ms = compute(&kb, Measure::Contension, Method::MaxSat, &opts()).unwrap();
        assert_eq!(ms.value, InconsistencyValue::Finite(1));
    }

    #[test]
    fn empty_kb_makes_no_calls() {
        let kb = parse_kb("").unwrap();
        for m in Measure::ALL {
            for method in [Method::SatBinary, Method::SatLinear, Method::Naive, Method::Asp] {
                let o = compute(&kb, m, method, &opts()).unwrap();
                assert_eq!(o.value, InconsistencyValue::Finite(0));
                assert_eq!(o.solver_calls, 0);
            }
        }
    }

    #[test]
    fn infinity_and_undefined() {
        let kb = parse_kb("x && !x\ny").unwrap();
        let o = binary_search(&kb, Measure::HittingSet, &opts()).unwrap();
        assert_eq!(o.value, InconsistencyValue::Infinity);
        let o = linear_search(&kb, Measure::SumDistance, &opts()).unwrap();
        assert_eq!(o.value, InconsistencyValue::Infinity);
        let bot = parse_kb("x\n- && y").unwrap();
        assert!(matches!(
            binary_search(&bot, Measure::Contension, &opts()),
            Err(Error::Undefined(Measure::Contension))
        ));
        assert_eq!(
            binary_search(&bot, Measure::HitDistance, &opts()).unwrap().value,
            InconsistencyValue::Finite(1)
        );
    }

    #[test]
    fn maxsat_only_for_contension() {
        let kb = parse_kb("x").unwrap();
        assert!(matches!(
            compute(&kb, Measure::Forgetting, Method::MaxSat, &opts()),
            Err(Error::UnsupportedMethod { .. })
        ));
    }

    #[test]
    fn method_names_round_trip() {
        for m in Method::ALL {
            assert_eq!(m.name().parse::<Method>().unwrap(), m);
        }
    }
}
