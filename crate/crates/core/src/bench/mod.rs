//! Benchmark harness: random corpora, a method matrix run on a worker pool,
//! and CSV reports.

pub mod report;
pub mod srs;

use std::collections::BTreeMap;
use std::fmt;
use std::fs;
use std::path::Path;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;
use std::time::{Duration, Instant};

use crate::error::{Error, Result};
use crate::kb::{parse_kb, KnowledgeBase};
use crate::measure::{InconsistencyValue, Measure};
use crate::search::{compute, ComputeOptions, Method, PhaseTimes};

pub use report::emit_reports;
pub use srs::{generate_corpus, generate_srs, write_corpus, CorpusEntry, SrsParams};

/// A finished value or a timeout.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BenchValue {
    Value(InconsistencyValue),
    Timeout,
}

impl fmt::Display for BenchValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BenchValue::Value(v) => write!(f, "{v}"),
            BenchValue::Timeout => f.write_str("timeout"),
        }
    }
}

/// One run of one method on one (knowledge base, measure) pair.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BenchRecord {
    pub kb_id: String,
    pub measure: Measure,
    pub method: Method,
    pub value: BenchValue,
    pub total: Duration,
    /// Zero for timeouts.
    pub phase_times: PhaseTimes,
    pub solver_calls: u64,
}

impl BenchRecord {
    pub fn is_timeout(&self) -> bool {
        self.value == BenchValue::Timeout
    }
}

/// Named knowledge bases from every `.kb` file in `dir`, sorted by name.
pub fn load_kb_dir(dir: &Path) -> Result<Vec<(String, KnowledgeBase)>> {
    let mut paths: Vec<_> = fs::read_dir(dir)?
        .map(|e| e.map(|e| e.path()))
        .collect::<std::io::Result<_>>()?;
    paths.retain(|p| p.extension().is_some_and(|e| e == "kb"));
    paths.sort();
    paths
        .into_iter()
        .map(|p| {
            let id = p.file_stem().unwrap_or_default().to_string_lossy().into_owned();
            Ok((id, parse_kb(&fs::read_to_string(&p)?)?))
        })
        .collect()
}

/// Run every supported (knowledge base, measure, method) cell with
/// `workers` threads. Each computation gets the timeout in
/// `options.backend`. Cells where the measure is undefined are skipped.
///
/// # Errors
/// The first failing computation, or [`Error::Disagreement`] if two methods
/// finish with different values on the same cell.
pub fn run_matrix(
    kbs: &[(String, KnowledgeBase)],
    measures: &[Measure],
    methods: &[Method],
    options: &ComputeOptions,
    workers: usize,
) -> Result<Vec<BenchRecord>> {
    let jobs: Vec<(usize, Measure, Method)> = (0..kbs.len())
        .flat_map(|k| measures.iter().flat_map(move |&m| methods.iter().map(move |&me| (k, m, me))))
        .filter(|&(_, m, me)| me.supports(m))
        .collect();
    let next = AtomicUsize::new(0);
    let sink = Mutex::new(Vec::with_capacity(jobs.len()));
    let failure: Mutex<Option<Error>> = Mutex::new(None);

    std::thread::scope(|s| {
        for _ in 0..workers.max(1).min(jobs.len().max(1)) {
            s.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                if i >= jobs.len() || failure.lock().unwrap().is_some() {
                    break;
                }
                let (k, measure, method) = jobs[i];
                let (id, kb) = &kbs[k];
                let start = Instant::now();
                let record = match compute(kb, measure, method, options) {
                    Ok(o) => BenchRecord {
                        kb_id: id.clone(),
                        measure,
                        method,
                        value: BenchValue::Value(o.value),
                        total: o.phase_times.total(),
                        phase_times: o.phase_times,
                        solver_calls: o.solver_calls,
                    },
                    Err(Error::Timeout { .. }) => BenchRecord {
                        kb_id: id.clone(),
                        measure,
                        method,
                        value: BenchValue::Timeout,
                        total: start.elapsed(),
                        phase_times: PhaseTimes::default(),
                        solver_calls: 0,
                    },
                    Err(Error::Undefined(_)) => continue,
                    Err(e) => {
                        failure.lock().unwrap().get_or_insert(e);
                        break;
                    }
                };
                sink.lock().unwrap().push(record);
            });
        }
    });
    if let Some(e) = failure.into_inner().unwrap() {
        return Err(e);
    }
    let mut records = sink.into_inner().unwrap();
    records.sort_by(|a, b| (&a.kb_id, a.measure, a.method).cmp(&(&b.kb_id, b.measure, b.method)));
    check_agreement(&records)?;
    Ok(records)
}

/// Fail if two finished records of one cell differ in value.
pub fn check_agreement(records: &[BenchRecord]) -> Result<()> {
    let mut seen: BTreeMap<(&str, Measure), (Method, InconsistencyValue)> = BTreeMap::new();
    for r in records {
        let BenchValue::Value(v) = r.value else { continue };
        match seen.get(&(r.kb_id.as_str(), r.measure)) {
            Some(&(m, w)) if w != v => {
                return Err(Error::Disagreement {
                    kb: r.kb_id.clone(),
                    measure: r.measure,
                    detail: format!("{m} gives {w}, {} gives {v}", r.method),
                })
            }
            Some(_) => {}
            None => {
                seen.insert((r.kb_id.as_str(), r.measure), (r.method, v));
            }
        }
    }
    Ok(())
}
