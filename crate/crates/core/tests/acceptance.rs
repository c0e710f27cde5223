//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any criterion fails.

use std::panic::{self, AssertUnwindSafe};
use std::path::{Path, PathBuf};
use std::sync::OnceLock;
use std::time::Instant;

use incmeter_core::asp::{emit_asp, static_text, ASP_SOLVER_ENV};
use incmeter_core::bench::{generate_srs, SrsParams};
use incmeter_core::cardinality::{at_most_binomial, at_most_sequential};
use incmeter_core::kb::{enumerate_models, tseitin, IndexedFormula, VarMap, VarName};
use incmeter_core::sat_encodings::encode_with;
use incmeter_core::search::{binary_search, linear_search};
use incmeter_core::solver::solve_internal;
use incmeter_core::{
    compute, oracle, parse_kb, CardinalityMethod, CnfInstance, ComputeOptions, Deadline, Formula,
    InconsistencyValue, KnowledgeBase, Measure, Method, SearchRange,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const CORPUS_SEED: u64 = 2024;
const CORPUS_SIZE: usize = 300;
const MAX_OCCURRENCES: usize = 12;

type Check = fn() -> Result<String, String>;

fn main() {
    let criteria: [(&str, Check); 9] = [
        ("worked examples", worked_examples),
        ("encoding conformance sweep", conformance_sweep),
        ("method agreement", method_agreement),
        ("cardinality correctness", cardinality_correctness),
        ("tseitin equisatisfiability", tseitin_equisatisfiability),
        ("encoding sizes", encoding_sizes),
        ("search cost bound", search_cost_bound),
        ("asp golden files", asp_golden_files),
        ("determinism", determinism),
    ];
    panic::set_hook(Box::new(|_| {}));
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = panic::catch_unwind(AssertUnwindSafe(check))
            .unwrap_or_else(|p| Err(panic_message(&p)));
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("criterion {} ({name}): PASS [{secs:.2}s] {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {} ({name}): FAIL [{secs:.2}s] {why}", i + 1);
            }
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}

fn panic_message(p: &Box<dyn std::any::Any + Send>) -> String {
    p.downcast_ref::<String>()
        .cloned()
        .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
        .unwrap_or_else(|| "panic".into())
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn kb(text: &str) -> KnowledgeBase {
    parse_kb(text).unwrap()
}

fn asp_configured() -> bool {
    std::env::var_os(ASP_SOLVER_ENV).is_some_and(|v| !v.is_empty())
}

fn methods_for(measure: Measure) -> Vec<Method> {
    Method::ALL
        .into_iter()
        .filter(|m| m.supports(measure))
        .filter(|&m| m != Method::Asp || asp_configured())
        .collect()
}

fn value_str(v: InconsistencyValue) -> String {
    v.to_string()
}

fn worked_examples() -> Result<String, String> {
    let k4 = kb("x && y\n!y");
    let k5 = kb("x && y\nx || y\nz\n!x");
    let k6 = kb("x && !x\ny\nz");
    let k7 = kb("x && y\nx || y\n!x");
    use InconsistencyValue::{Finite, Infinity};
    use Measure::*;
    let expected: Vec<(&str, &KnowledgeBase, Measure, InconsistencyValue)> = vec![
        ("K4", &k4, Contension, Finite(1)),
        ("K4", &k4, HittingSet, Finite(1)),
        ("K4", &k4, MaxDistance, Finite(1)),
        ("K4", &k4, SumDistance, Finite(1)),
        ("K4", &k4, HitDistance, Finite(1)),
        ("K5", &k5, Forgetting, Finite(1)),
        ("K6", &k6, HittingSet, Infinity),
        ("K6", &k6, MaxDistance, Infinity),
        ("K6", &k6, SumDistance, Infinity),
        ("K6", &k6, HitDistance, Finite(1)),
        ("K7", &k7, Contension, Finite(1)),
        ("K7", &k7, Forgetting, Finite(1)),
        ("K7", &k7, HittingSet, Finite(1)),
        ("K7", &k7, MaxDistance, Finite(1)),
        ("K7", &k7, SumDistance, Finite(1)),
        ("K7", &k7, HitDistance, Finite(1)),
    ];
    let opts = ComputeOptions::default();
    let start = Instant::now();
    let mut runs = 0;
    for (name, kb, m, want) in &expected {
        let o = oracle(*m, kb).map_err(|e| format!("oracle {name} {m}: {e}"))?;
        ensure(o == *want, || format!("oracle gives {o} for {m} on {name}, expected {want}"))?;
        for method in methods_for(*m) {
            let got = compute(kb, *m, method, &opts).map_err(|e| format!("{method} {m} {name}: {e}"))?;
            runs += 1;
            ensure(got.value == *want, || {
                format!("{method} gives {} for {m} on {name}, expected {want}", got.value)
            })?;
        }
    }
    let secs = start.elapsed().as_secs_f64();
    // ASP runs spawn a solver process each and are excluded from the budget.
    ensure(asp_configured() || secs < 5.0, || format!("took {secs:.2}s"))?;
    Ok(format!(
        "{} cells, {runs} method runs{}",
        expected.len(),
        if asp_configured() { ", asp included" } else { ", asp skipped (no backend)" }
    ))
}

/// The acceptance corpus: small SRS knowledge bases, resampled until the
/// occurrence count fits the forgetting oracle.
fn corpus(seed: u64) -> Vec<KnowledgeBase> {
    let mut master = ChaCha8Rng::seed_from_u64(seed);
    (0..CORPUS_SIZE)
        .map(|i| {
            let params = SrsParams {
                signature_size: 1 + i % 5,
                min_formulas: 1,
                max_formulas: 8,
                ..Default::default()
            };
            loop {
                let kb = generate_srs(&SrsParams {
                    seed: master.gen(),
                    ..params.clone()
                })
                .unwrap();
                if kb.occurrence_count() <= MAX_OCCURRENCES {
                    break kb;
                }
            }
        })
        .collect()
}

/// Parallel map preserving input order.
fn par_map<T: Sync, R: Send>(items: &[T], f: impl Fn(usize, &T) -> R + Sync) -> Vec<R> {
    let workers = std::thread::available_parallelism().map_or(4, |n| n.get()).min(16);
    let chunk = items.len().div_ceil(workers).max(1);
    std::thread::scope(|s| {
        let handles: Vec<_> = items
            .chunks(chunk)
            .enumerate()
            .map(|(c, part)| {
                let f = &f;
                s.spawn(move || {
                    part.iter()
                        .enumerate()
                        .map(|(j, x)| f(c * chunk + j, x))
                        .collect::<Vec<_>>()
                })
            })
            .collect();
        handles.into_iter().flat_map(|h| h.join().unwrap()).collect()
    })
}

struct Sweep {
    checked: usize,
    violations: Vec<String>,
    bound_violations: Vec<String>,
    /// Per knowledge base and measure: binary-search value and call count.
    fingerprint: Vec<Vec<(InconsistencyValue, u64)>>,
}

fn query(measure: Measure, u: u64) -> u64 {
    if measure == Measure::HittingSet {
        u + 1
    } else {
        u
    }
}

fn sweep(seed: u64) -> Sweep {
    let kbs = corpus(seed);
    let opts = ComputeOptions::default();
    let rows = par_map(&kbs, |i, kb| {
        let prepared = kb.prepared();
        let mut checked = 0;
        let mut violations = Vec::new();
        let mut bound_violations = Vec::new();
        let mut fingerprint = Vec::new();
        for m in Measure::ALL {
            let truth = oracle(m, kb).unwrap();
            let range = SearchRange::new(m, &prepared);
            let cards: &[CardinalityMethod] = if i % 10 == 0 {
                &[CardinalityMethod::Sequential, CardinalityMethod::Binomial]
            } else {
                &[CardinalityMethod::Sequential]
            };
            for &card in cards {
                for u in range.min..=range.max {
                    let enc = encode_with(m, kb, query(m, u), card);
                    let sat = solve_internal(&enc.cnf, 0, &Deadline::none()).is_sat();
                    checked += 1;
                    if sat != truth.at_most(u) {
                        violations.push(format!("kb {i} ({kb:?}) {m} u={u} {card}: sat={sat}, value {truth}"));
                    }
                }
            }
            let b = binary_search(kb, m, &opts).unwrap();
            if b.solver_calls > range.binary_call_bound() {
                bound_violations.push(format!(
                    "kb {i} {m}: {} calls, bound {}",
                    b.solver_calls,
                    range.binary_call_bound()
                ));
            }
            fingerprint.push((b.value, b.solver_calls));
        }
        (checked, violations, bound_violations, fingerprint)
    });
    let mut out = Sweep {
        checked: 0,
        violations: Vec::new(),
        bound_violations: Vec::new(),
        fingerprint: Vec::new(),
    };
    for (c, v, b, f) in rows {
        out.checked += c;
        out.violations.extend(v);
        out.bound_violations.extend(b);
        out.fingerprint.push(f);
    }
    out
}

fn main_sweep() -> &'static Sweep {
    static SWEEP: OnceLock<Sweep> = OnceLock::new();
    SWEEP.get_or_init(|| sweep(CORPUS_SEED))
}

fn conformance_sweep() -> Result<String, String> {
    let s = main_sweep();
    ensure(s.violations.is_empty(), || {
        format!("{} violations, first: {}", s.violations.len(), s.violations[0])
    })?;
    Ok(format!("{CORPUS_SIZE} kbs, {} (measure, u) queries, 0 violations", s.checked))
}

fn method_agreement() -> Result<String, String> {
    let kbs = corpus(CORPUS_SEED);
    let opts = ComputeOptions::default();
    let rows = par_map(&kbs, |i, kb| {
        let mut bad = Vec::new();
        let mut runs = 0;
        for m in Measure::ALL {
            let truth = oracle(m, kb).unwrap();
            for method in methods_for(m) {
                runs += 1;
                match compute(kb, m, method, &opts) {
                    Ok(o) if o.value == truth => {}
                    Ok(o) => bad.push(format!("kb {i} {m} {method}: {} vs oracle {truth}", o.value)),
                    Err(e) => bad.push(format!("kb {i} {m} {method}: {e}")),
                }
            }
        }
        (runs, bad)
    });
    let runs: usize = rows.iter().map(|r| r.0).sum();
    let bad: Vec<&String> = rows.iter().flat_map(|r| &r.1).collect();
    ensure(bad.is_empty(), || format!("{} disagreements, first: {}", bad.len(), bad[0]))?;
    Ok(format!(
        "{runs} runs, 0 disagreements{}",
        if asp_configured() { ", asp included" } else { ", asp skipped (no backend)" }
    ))
}

fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

fn cardinality_correctness() -> Result<String, String> {
    let mut cases = 0;
    for n in 0..=8usize {
        for k in 0..=n {
            let clauses = at_most_binomial(k, &(1..=n as i32).collect::<Vec<_>>());
            ensure(clauses.len() == binomial(n, k + 1), || {
                format!("binomial n={n} k={k}: {} clauses, expected {}", clauses.len(), binomial(n, k + 1))
            })?;
            for card in [CardinalityMethod::Sequential, CardinalityMethod::Binomial] {
                let mut vars = VarMap::new();
                let lits: Vec<i32> = (0..n)
                    .map(|i| vars.var(VarName::Atom(format!("p{i}"))) as i32)
                    .collect();
                let extra = match card {
                    CardinalityMethod::Sequential => at_most_sequential(k, &lits, &mut vars),
                    CardinalityMethod::Binomial => at_most_binomial(k, &lits),
                };
                let mut base = CnfInstance::new(vars);
                base.extend(extra);
                for bits in 0u32..1 << n {
                    let mut cnf = base.clone();
                    for (i, &l) in lits.iter().enumerate() {
                        cnf.add_clause([if bits >> i & 1 == 1 { l } else { -l }]);
                    }
                    let sat = solve_internal(&cnf, 0, &Deadline::none()).is_sat();
                    cases += 1;
                    ensure(sat == (bits.count_ones() as usize <= k), || {
                        format!("{card} n={n} k={k} assignment {bits:b}: sat={sat}")
                    })?;
                }
            }
        }
    }
    Ok(format!("{cases} assignments checked"))
}

fn random_formula(rng: &mut ChaCha8Rng, atoms: usize, depth: u32) -> Formula {
    let leaf = depth == 0 || rng.gen_bool(0.25);
    if leaf {
        return match rng.gen_range(0..20) {
            0 => Formula::Top,
            1 => Formula::Bottom,
            _ => Formula::atom(format!("p{}", rng.gen_range(0..atoms))),
        };
    }
    let op = rng.gen_range(0..5);
    let mut sub = || random_formula(rng, atoms, depth - 1);
    match op {
        0 => Formula::not(sub()),
        1 => Formula::and(sub(), sub()),
        2 => Formula::or(sub(), sub()),
        3 => Formula::implies(sub(), sub()),
        _ => Formula::iff(sub(), sub()),
    }
}

fn tseitin_equisatisfiability() -> Result<String, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut sat_count = 0;
    for i in 0..500 {
        let atoms = rng.gen_range(1..=6);
        let depth = rng.gen_range(1..=6);
        let f = random_formula(&mut rng, atoms, depth);
        let sig = KnowledgeBase::new(vec![f.clone()]).signature();
        let truth = IndexedFormula::compile(&f, &sig).satisfiable(sig.len());
        let got = solve_internal(&tseitin(&f), 0, &Deadline::none()).is_sat();
        ensure(got == truth, || format!("formula {i} `{f}`: solver {got}, truth table {truth}"))?;
        sat_count += usize::from(truth);
    }
    Ok(format!("500 formulas ({sat_count} satisfiable), 0 mismatches"))
}

fn encoding_sizes() -> Result<String, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut checked = 0;
    for i in 0..50 {
        let kb = generate_srs(&SrsParams {
            signature_size: rng.gen_range(1..=6),
            min_formulas: 1,
            max_formulas: 10,
            seed: rng.gen(),
            ..Default::default()
        })
        .unwrap();
        let p = kb.prepared();
        let at = p.signature().len();
        let sub = p.subformula_sites().len();
        let occ = p.occurrence_count();
        let k = p.len();
        let size = |m, u| encode_with(m, &kb, u, CardinalityMethod::Sequential).base_signature();
        let mut check = |what: &str, enc: usize, formula: usize| {
            checked += 1;
            ensure(enc == formula, || format!("kb {i} {what}: {enc} variables, expected {formula}"))
        };
        check("contension", size(Measure::Contension, 1), 3 * at + 3 * sub)?;
        check("forgetting", size(Measure::Forgetting, 1), 3 * occ)?;
        for u in 1..=3u64 {
            check("hitting-set", size(Measure::HittingSet, u), u as usize * (at + k))?;
        }
        check("max-distance", size(Measure::MaxDistance, 1), at + 2 * k * at)?;
        check("sum-distance", size(Measure::SumDistance, 1), at + 2 * k * at)?;
        check("hit-distance", size(Measure::HitDistance, 1), at + k)?;
    }
    Ok(format!("50 kbs, {checked} sizes exact"))
}

fn search_cost_bound() -> Result<String, String> {
    let s = main_sweep();
    ensure(s.bound_violations.is_empty(), || {
        format!("{} violations, first: {}", s.bound_violations.len(), s.bound_violations[0])
    })?;
    let opts = ComputeOptions::default();
    let mut consistent = 0;
    for kb in corpus(CORPUS_SEED).iter().chain([kb("x && y\n!z || y\nx")].iter()) {
        if enumerate_models(kb, 20).map_err(|e| e.to_string())?.is_empty() {
            continue;
        }
        consistent += 1;
        for m in Measure::ALL {
            let o = linear_search(kb, m, &opts).map_err(|e| e.to_string())?;
            ensure(o.solver_calls == 1 && o.value == InconsistencyValue::Finite(0), || {
                format!("linear {m} on consistent `{}`: {} calls, value {}", kb.to_string().trim(), o.solver_calls, value_str(o.value))
            })?;
        }
    }
    Ok(format!(
        "{} binary runs within bound; linear search made 1 call on each of {consistent} consistent kbs",
        s.fingerprint.len() * Measure::ALL.len()
    ))
}

fn golden_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden")
}

fn read_golden(name: &str) -> String {
    std::fs::read_to_string(golden_dir().join(name)).unwrap_or_else(|e| panic!("{name}: {e}"))
}

fn asp_golden_files() -> Result<String, String> {
    let k7 = kb("x && y\nx || y\n!x");
    for m in Measure::ALL {
        let golden = read_golden(&format!("{m}.lp"));
        ensure(static_text(m) == golden, || format!("static rules for {m} differ from golden"))?;
        let p = emit_asp(m, &k7);
        ensure(p.static_text() == golden, || format!("emitted static block for {m} differs"))?;
        let facts = read_golden(&format!("k7_{m}.facts.lp"));
        ensure(p.facts_text() == facts, || {
            format!("K7 facts for {m} differ:\n{}", p.facts_text())
        })?;
        ensure(p.text() == facts + &golden, || format!("program text for {m} is not facts then rules"))?;
    }
    Ok("6 static blocks and 6 K7 fact sets match".into())
}

fn determinism() -> Result<String, String> {
    let first = main_sweep();
    let again = sweep(CORPUS_SEED);
    ensure(corpus(CORPUS_SEED) == corpus(CORPUS_SEED), || "corpus differs between runs".into())?;
    ensure(first.fingerprint == again.fingerprint, || {
        let i = first
            .fingerprint
            .iter()
            .zip(&again.fingerprint)
            .position(|(a, b)| a != b)
            .unwrap_or(0);
        format!("kb {i}: {:?} then {:?}", first.fingerprint[i], again.fingerprint[i])
    })?;
    Ok(format!("{} (value, calls) pairs identical across reruns", first.fingerprint.len() * 6))
}
