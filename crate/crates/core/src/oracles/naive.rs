//! Naive baseline procedures: enumerate candidate witnesses in order of
//! increasing size and test each one.

use crate::error::{Error, Result};
use crate::kb::{CnfInstance, Expr, Formula, IndexedFormula, KnowledgeBase, Lit, Tseitin, VarName};
use crate::measure::{InconsistencyValue, Measure};
use crate::oracles::combinations;
use crate::solver::{solve_internal, Deadline, SolverResult};

/// Signature cap for the procedures that sweep all interpretations.
pub const NAIVE_ATOM_CAP: usize = 24;
/// Clause cap for the distributive CNF used by contension.
pub const NAIVE_CLAUSE_CAP: usize = 200_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct NaiveOutcome {
    pub value: InconsistencyValue,
    /// Satisfiability checks or candidate tests performed.
    pub checks: u64,
}

fn timeout(deadline: &Deadline, lower: u64, upper: Option<u64>) -> Error {
    Error::Timeout {
        elapsed: deadline.elapsed(),
        lower,
        upper,
    }
}

fn finite(value: u64, checks: u64) -> Result<NaiveOutcome> {
    Ok(NaiveOutcome {
        value: InconsistencyValue::Finite(value),
        checks,
    })
}

/// Compute `measure` by its naive baseline.
pub fn naive_measure(kb: &KnowledgeBase, measure: Measure, deadline: &Deadline) -> Result<NaiveOutcome> {
    let kb = kb.prepared();
    if kb.is_empty() {
        return finite(0, 0);
    }
    match measure {
        Measure::Contension => naive_contension(&kb, deadline),
        Measure::Forgetting => naive_forgetting(&kb, deadline),
        Measure::HittingSet => naive_hs(&kb, deadline),
        Measure::MaxDistance | Measure::SumDistance => naive_distance(&kb, measure, deadline),
        Measure::HitDistance => naive_hit(&kb, deadline),
    }
}

type Clause = Vec<Lit>;

fn product(a: &[Clause], b: &[Clause]) -> Result<Vec<Clause>> {
    let mut out = Vec::with_capacity(a.len() * b.len());
    for x in a {
        'pairs: for y in b {
            let mut c = x.clone();
            for &l in y {
                if c.contains(&-l) {
                    continue 'pairs;
                }
                if !c.contains(&l) {
                    c.push(l);
                }
            }
            c.sort_unstable();
            out.push(c);
            if out.len() > NAIVE_CLAUSE_CAP {
                return Err(Error::CapExceeded {
                    what: "distributive CNF size",
                    cap: NAIVE_CLAUSE_CAP,
                    got: out.len(),
                });
            }
        }
    }
    out.sort();
    out.dedup();
    Ok(out)
}

// Clauses of `f` (or of its negation) by pushing negations inward and
// distributing disjunction over conjunction. Atom `sig[i]` is literal i+1.
fn distribute(f: &Formula, positive: bool, sig: &[String]) -> Result<Vec<Clause>> {
    Ok(match (f, positive) {
        (Formula::Atom(a), _) => {
            let v = sig.iter().position(|s| s == a).expect("atom in signature") as Lit + 1;
            vec![vec![if positive { v } else { -v }]]
        }
        (Formula::Top, true) | (Formula::Bottom, false) => Vec::new(),
        (Formula::Top, false) | (Formula::Bottom, true) => vec![Vec::new()],
        (Formula::Not(a), p) => distribute(a, !p, sig)?,
        (Formula::And(a, b), true) | (Formula::Or(a, b), false) => {
            let mut cs = distribute(a, positive, sig)?;
            cs.extend(distribute(b, positive, sig)?);
            cs
        }
        (Formula::Or(a, b), true) | (Formula::And(a, b), false) => {
            product(&distribute(a, positive, sig)?, &distribute(b, positive, sig)?)?
        }
        (Formula::Implies(..) | Formula::Iff(..), _) => unreachable!("prepared formulas are reduced"),
    })
}

fn naive_contension(kb: &KnowledgeBase, deadline: &Deadline) -> Result<NaiveOutcome> {
    if kb.has_contradiction_constant() {
        return Err(Error::Undefined(Measure::Contension));
    }
    let sig = kb.signature();
    let mut clauses: Vec<Clause> = Vec::new();
    for f in kb {
        clauses.extend(distribute(f, true, &sig)?);
    }
    let mut atoms: Vec<u32> = clauses.iter().flatten().map(|l| l.unsigned_abs()).collect();
    atoms.sort_unstable();
    atoms.dedup();
    let mut checks = 0;
    for k in 0..=atoms.len() {
        for subset in combinations(atoms.len(), k) {
            if deadline.expired() {
                return Err(timeout(deadline, k as u64, Some(atoms.len() as u64)));
            }
            let removed: Vec<u32> = subset.iter().map(|&i| atoms[i]).collect();
            let mut cnf = CnfInstance::default();
            for x in &sig {
                cnf.var_map.var(VarName::Atom(x.clone()));
            }
            for c in &clauses {
                if !c.iter().any(|l| removed.contains(&l.unsigned_abs())) {
                    cnf.add_clause(c.iter().copied());
                }
            }
            checks += 1;
            match solve_internal(&cnf, 0, deadline) {
                SolverResult::Sat(_) => return finite(k as u64, checks),
                SolverResult::Unsat => {}
                SolverResult::Timeout(_) => {
                    return Err(timeout(deadline, k as u64, Some(atoms.len() as u64)))
                }
            }
        }
    }
    unreachable!("removing every atom leaves no clauses")
}

/// Satisfiability of a whole knowledge base through Tseitin and the
/// internal solver.
fn kb_satisfiable(formulas: &[Formula], deadline: &Deadline) -> Option<bool> {
    let mut cnf = CnfInstance::default();
    for f in formulas {
        let e = Expr::from_formula(f, &mut |a| {
            Expr::var(cnf.var_map.var(VarName::Atom(a.to_string())))
        });
        Tseitin::new(&mut cnf).assert(&e);
    }
    match solve_internal(&cnf, 0, deadline) {
        SolverResult::Sat(_) => Some(true),
        SolverResult::Unsat => Some(false),
        SolverResult::Timeout(_) => None,
    }
}

fn naive_forgetting(kb: &KnowledgeBase, deadline: &Deadline) -> Result<NaiveOutcome> {
    if kb.has_contradiction_constant() {
        return Err(Error::Undefined(Measure::Forgetting));
    }
    let occs = kb.occurrences();
    let upper = Some(occs.len() as u64);
    let mut checks = 0;
    for k in 0..=occs.len() {
        for subset in combinations(occs.len(), k) {
            for choice in 0..1u64 << k {
                if deadline.expired() {
                    return Err(timeout(deadline, k as u64, upper));
                }
                let mut formulas = kb.formulas().to_vec();
                for (bit, &i) in subset.iter().enumerate() {
                    let c = if choice >> bit & 1 == 1 { Formula::Top } else { Formula::Bottom };
                    let site = &occs[i].site;
                    formulas[site.formula] = formulas[site.formula]
                        .replace_at(&site.path, &c)
                        .expect("occurrence sites are valid");
                }
                checks += 1;
                match kb_satisfiable(&formulas, deadline) {
                    Some(true) => return finite(k as u64, checks),
                    Some(false) => {}
                    None => return Err(timeout(deadline, k as u64, upper)),
                }
            }
        }
    }
    unreachable!("forgetting every occurrence leaves satisfiable formulas")
}

fn compile_capped(kb: &KnowledgeBase) -> Result<(Vec<IndexedFormula>, usize)> {
    let sig = kb.signature();
    if sig.len() > NAIVE_ATOM_CAP {
        return Err(Error::CapExceeded {
            what: "signature size",
            cap: NAIVE_ATOM_CAP,
            got: sig.len(),
        });
    }
    Ok((kb.iter().map(|f| IndexedFormula::compile(f, &sig)).collect(), sig.len()))
}

fn naive_hs(kb: &KnowledgeBase, deadline: &Deadline) -> Result<NaiveOutcome> {
    let (formulas, n) = compile_capped(kb)?;
    let full: u64 = if formulas.len() >= 64 {
        return Err(Error::CapExceeded {
            what: "formula count",
            cap: 63,
            got: formulas.len(),
        });
    } else {
        (1u64 << formulas.len()) - 1
    };
    let mut masks: Vec<u64> = Vec::new();
    let mut checks = 0u64;
    for w in 0..1u64 << n {
        if w % 4096 == 0 && deadline.expired() {
            return Err(timeout(deadline, 0, None));
        }
        let m = formulas
            .iter()
            .enumerate()
            .filter(|(_, f)| f.eval_bits(w))
            .fold(0u64, |m, (i, _)| m | 1 << i);
        checks += 1;
        if m == full {
            return finite(0, checks);
        }
        masks.push(m);
    }
    masks.sort_unstable();
    masks.dedup();
    // only maximal sets matter for covering
    let maximal: Vec<u64> = masks
        .iter()
        .copied()
        .filter(|&m| !masks.iter().any(|&o| o != m && o & m == m))
        .collect();
    if maximal.iter().fold(0, |a, m| a | m) != full {
        return Ok(NaiveOutcome {
            value: InconsistencyValue::Infinity,
            checks,
        });
    }
    for k in 2..=formulas.len() {
        for tuple in combinations(maximal.len(), k) {
            if deadline.expired() {
                return Err(timeout(deadline, k as u64 - 1, Some(formulas.len() as u64 - 1)));
            }
            checks += 1;
            if tuple.iter().fold(0, |a, &i| a | maximal[i]) == full {
                return finite(k as u64 - 1, checks);
            }
        }
    }
    unreachable!("the maximal sets jointly cover every formula")
}

// Distance from `w` to the nearest model of `f`, growing a Hamming ball.
fn ball_distance(f: &IndexedFormula, w: u64, n: usize, checks: &mut u64) -> Option<u64> {
    for r in 0..=n {
        for flips in combinations(n, r) {
            *checks += 1;
            let v = flips.iter().fold(w, |v, &i| v ^ 1 << i);
            if f.eval_bits(v) {
                return Some(r as u64);
            }
        }
    }
    None
}

fn naive_distance(kb: &KnowledgeBase, measure: Measure, deadline: &Deadline) -> Result<NaiveOutcome> {
    let (formulas, n) = compile_capped(kb)?;
    let mut checks = 0;
    let mut best = InconsistencyValue::Infinity;
    for w in 0..1u64 << n {
        if deadline.expired() {
            return Err(timeout(deadline, 0, best.finite()));
        }
        let mut agg = Some(0u64);
        for f in &formulas {
            let d = ball_distance(f, w, n, &mut checks);
            agg = match (agg, d) {
                (Some(a), Some(d)) if measure == Measure::SumDistance => Some(a + d),
                (Some(a), Some(d)) => Some(a.max(d)),
                _ => None,
            };
            if agg.is_none() {
                break;
            }
        }
        if let Some(v) = agg {
            best = best.min(InconsistencyValue::Finite(v));
        }
    }
    Ok(NaiveOutcome { value: best, checks })
}

fn naive_hit(kb: &KnowledgeBase, deadline: &Deadline) -> Result<NaiveOutcome> {
    let (formulas, n) = compile_capped(kb)?;
    let mut checks = 0;
    let mut best = formulas.len() as u64;
    for w in 0..1u64 << n {
        if w % 4096 == 0 && deadline.expired() {
            return Err(timeout(deadline, 0, Some(best)));
        }
        checks += formulas.len() as u64;
        let unsatisfied = formulas.iter().filter(|f| !f.eval_bits(w)).count() as u64;
        best = best.min(unsatisfied);
    }
    finite(best, checks)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kb::parse_kb;

    fn value(text: &str, m: Measure) -> InconsistencyValue {
        naive_measure(&parse_kb(text).unwrap(), m, &Deadline::none())
            .unwrap()
            .value
    }

    #[test]
    fn worked_examples() {
        use InconsistencyValue::{Finite, Infinity};
        let k7 = "x&&y\nx||y\n!x";
        for m in Measure::ALL {
            assert_eq!(value(k7, m), Finite(1), "{m}");
        }
        assert_eq!(value("x&&!x\ny\nz", Measure::HittingSet), Infinity);
        assert_eq!(value("x&&!x\ny\nz", Measure::SumDistance), Infinity);
        assert_eq!(value("x&&!x\ny\nz", Measure::HitDistance), Finite(1));
        assert_eq!(value("x&&y\nx||y\nz\n!x", Measure::Forgetting), Finite(1));
        assert_eq!(value("", Measure::Contension), Finite(0));
    }

    #[test]
    fn distribution_drops_tautologies() {
        let sig = vec!["x".to_string(), "y".to_string()];
        let f = crate::kb::parse_formula("(x && y) || !x").unwrap();
        assert_eq!(distribute(&f, true, &sig).unwrap(), vec![vec![-1, 2]]);
    }

    #[test]
    fn consistent_kb_needs_one_check() {
        let out = naive_measure(&parse_kb("x\ny").unwrap(), Measure::Contension, &Deadline::none()).unwrap();
        assert_eq!(out, NaiveOutcome { value: InconsistencyValue::Finite(0), checks: 1 });
    }
}
