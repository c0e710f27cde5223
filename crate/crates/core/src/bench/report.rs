//! CSV output for benchmark records.

use std::collections::{BTreeMap, BTreeSet};
use std::fs;
use std::path::{Path, PathBuf};
use std::time::Duration;

use crate::error::Result;
use crate::measure::Measure;
use crate::search::Method;

use super::BenchRecord;

const RESULTS_HEADER: [&str; 10] = [
    "kb_id",
    "measure",
    "method",
    "value",
    "total_seconds",
    "encoding_seconds",
    "cnf_seconds",
    "solving_seconds",
    "other_seconds",
    "solver_calls",
];

const SUMMARY_HEADER: [&str; 6] = [
    "measure",
    "method",
    "instances",
    "solved",
    "timeouts",
    "cumulative_seconds",
];

fn secs(d: Duration) -> String {
    format!("{:.6}", d.as_secs_f64())
}

/// Write `results.csv`, `summary.csv`, one `cactus_<measure>_<method>.csv`
/// per cell and one `scatter_<measure>_<m1>_vs_<m2>.csv` per method pair.
/// Timeouts are pinned to `timeout` in scatter files. Returns the paths
/// written.
pub fn emit_reports(records: &[BenchRecord], dir: &Path, timeout: Duration) -> Result<Vec<PathBuf>> {
    fs::create_dir_all(dir)?;
    let mut written = Vec::new();

    let path = dir.join("results.csv");
    let mut w = csv::Writer::from_path(&path)?;
    w.write_record(RESULTS_HEADER)?;
    for r in records {
        let p = &r.phase_times;
        let phases: [String; 4] = if r.is_timeout() {
            Default::default()
        } else {
            [p.encoding, p.cnf_transform, p.solving, p.other].map(secs)
        };
        w.write_record([
            r.kb_id.clone(),
            r.measure.to_string(),
            r.method.to_string(),
            r.value.to_string(),
            secs(r.total),
        ]
        .into_iter()
        .chain(phases)
        .chain([r.solver_calls.to_string()]))?;
    }
    w.flush()?;
    written.push(path);

    let mut cells: BTreeMap<(Measure, Method), Vec<&BenchRecord>> = BTreeMap::new();
    for r in records {
        cells.entry((r.measure, r.method)).or_default().push(r);
    }

    let path = dir.join("summary.csv");
    let mut w = csv::Writer::from_path(&path)?;
    w.write_record(SUMMARY_HEADER)?;
    for ((measure, method), rs) in &cells {
        let timeouts = rs.iter().filter(|r| r.is_timeout()).count();
        let cumulative: Duration = rs.iter().filter(|r| !r.is_timeout()).map(|r| r.total).sum();
        w.write_record([
            measure.to_string(),
            method.to_string(),
            rs.len().to_string(),
            (rs.len() - timeouts).to_string(),
            timeouts.to_string(),
            secs(cumulative),
        ])?;
    }
    w.flush()?;
    written.push(path);

    for ((measure, method), rs) in &cells {
        let mut solved: Vec<Duration> = rs.iter().filter(|r| !r.is_timeout()).map(|r| r.total).collect();
        solved.sort();
        let path = dir.join(format!("cactus_{measure}_{method}.csv"));
        let mut w = csv::Writer::from_path(&path)?;
        w.write_record(["solved", "seconds"])?;
        for (i, d) in solved.iter().enumerate() {
            w.write_record([(i + 1).to_string(), secs(*d)])?;
        }
        w.flush()?;
        written.push(path);
    }

    let measures: BTreeSet<Measure> = cells.keys().map(|k| k.0).collect();
    for measure in measures {
        let methods: Vec<Method> = cells.keys().filter(|k| k.0 == measure).map(|k| k.1).collect();
        for (i, &m1) in methods.iter().enumerate() {
            for &m2 in &methods[i + 1..] {
                let time = |m| -> BTreeMap<&str, Duration> {
                    cells[&(measure, m)]
                        .iter()
                        .map(|r| (r.kb_id.as_str(), if r.is_timeout() { timeout } else { r.total }))
                        .collect()
                };
                let (a, b) = (time(m1), time(m2));
                let path = dir.join(format!("scatter_{measure}_{m1}_vs_{m2}.csv"));
                let mut w = csv::Writer::from_path(&path)?;
                w.write_record(["kb_id", &format!("{m1}_seconds"), &format!("{m2}_seconds")])?;
                for (id, ta) in &a {
                    if let Some(tb) = b.get(id) {
                        w.write_record([id.to_string(), secs(*ta), secs(*tb)])?;
                    }
                }
                w.flush()?;
                written.push(path);
            }
        }
    }
    Ok(written)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bench::BenchValue;
    use crate::search::PhaseTimes;

    fn rec(id: &str, method: Method, value: BenchValue, ms: u64) -> BenchRecord {
        BenchRecord {
            kb_id: id.into(),
            measure: Measure::Contension,
            method,
            value,
            total: Duration::from_millis(ms),
            phase_times: PhaseTimes::default(),
            solver_calls: 1,
        }
    }

    #[test]
    fn empty_records_give_headers() {
        let dir = tempfile::tempdir().unwrap();
        let files = emit_reports(&[], dir.path(), Duration::from_secs(1)).unwrap();
        assert_eq!(files.len(), 2);
        assert_eq!(
            fs::read_to_string(dir.path().join("results.csv")).unwrap(),
            "kb_id,measure,method,value,total_seconds,encoding_seconds,cnf_seconds,solving_seconds,other_seconds,solver_calls\n"
        );
        assert_eq!(
            fs::read_to_string(dir.path().join("summary.csv")).unwrap(),
            "measure,method,instances,solved,timeouts,cumulative_seconds\n"
        );
    }

    #[test]
    fn timeouts_counted_and_pinned() {
        let one = BenchValue::Value(1u64.into());
        let records = vec![
            rec("a", Method::SatBinary, one, 30),
            rec("b", Method::SatBinary, BenchValue::Timeout, 900),
            rec("c", Method::SatBinary, one, 10),
            rec("d", Method::SatBinary, BenchValue::Timeout, 950),
            rec("e", Method::SatBinary, one, 20),
            rec("a", Method::Naive, one, 5),
            rec("b", Method::Naive, one, 5),
        ];
        let dir = tempfile::tempdir().unwrap();
        emit_reports(&records, dir.path(), Duration::from_secs(1)).unwrap();
        let summary = fs::read_to_string(dir.path().join("summary.csv")).unwrap();
        assert!(summary.contains("contension,sat-binary,5,3,2,0.060000\n"));
        let cactus = fs::read_to_string(dir.path().join("cactus_contension_sat-binary.csv")).unwrap();
        assert_eq!(cactus, "solved,seconds\n1,0.010000\n2,0.020000\n3,0.030000\n");
        let scatter =
            fs::read_to_string(dir.path().join("scatter_contension_sat-binary_vs_naive.csv")).unwrap();
        assert_eq!(
            scatter,
            "kb_id,sat-binary_seconds,naive_seconds\na,0.030000,0.005000\nb,1.000000,0.005000\n"
        );
        let results = fs::read_to_string(dir.path().join("results.csv")).unwrap();
        assert!(results.contains("b,contension,sat-binary,timeout,0.900000,,,,,1\n"));
    }
}
