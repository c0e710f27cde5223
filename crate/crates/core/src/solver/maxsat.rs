//! Unweighted partial MaxSAT with unit soft clauses, solved by binary search
//! on the number of violated soft literals.

use std::fmt::Write;

use super::{solve_timed, BackendConfig, CallTimes, Deadline, SolverResult};
use crate::cardinality::CardinalityMethod;
use crate::error::{Error, Result};
use crate::kb::{CnfInstance, Lit};

/// Hard clauses plus unit soft clauses of weight one.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct MaxSatInstance {
    pub hard: CnfInstance,
    pub soft: Vec<Lit>,
}

impl MaxSatInstance {
    /// Number of soft literals false under `model`.
    pub fn cost(&self, model: &[bool]) -> u64 {
        self.soft
            .iter()
            .filter(|&&l| model[l.unsigned_abs() as usize] != (l > 0))
            .count() as u64
    }

    /// WCNF text; hard clauses carry weight `|soft| + 1`.
    pub fn to_wcnf(&self) -> String {
        let top = self.soft.len() + 1;
        let mut out = String::new();
        writeln!(
            out,
            "p wcnf {} {} {}",
            self.hard.num_vars(),
            self.hard.clauses.len() + self.soft.len(),
            top
        )
        .unwrap();
        for c in &self.hard.clauses {
            write!(out, "{top}").unwrap();
            for l in c {
                write!(out, " {l}").unwrap();
            }
            out.push_str(" 0\n");
        }
        for l in &self.soft {
            writeln!(out, "1 {l} 0").unwrap();
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MaxSatOutcome {
    pub cost: u64,
    pub model: Vec<bool>,
    pub calls: u64,
    /// Summed over all calls.
    pub times: CallTimes,
}

/// Minimum number of violated soft literals.
///
/// # Errors
/// [`Error::HardUnsat`] if the hard clauses alone are unsatisfiable,
/// [`Error::Timeout`] with the current cost bounds on deadline expiry.
pub fn solve_maxsat(
    inst: &MaxSatInstance,
    config: &BackendConfig,
    deadline: &Deadline,
    card: CardinalityMethod,
) -> Result<MaxSatOutcome> {
    let mut calls = 1;
    let mut times = CallTimes::default();
    let mut timed = |cnf: &CnfInstance| -> Result<SolverResult> {
        let (r, t) = solve_timed(cnf, config, deadline)?;
        times.load += t.load;
        times.search += t.search;
        Ok(r)
    };
    let mut best = match timed(&inst.hard)? {
        SolverResult::Sat(m) => m,
        SolverResult::Unsat => return Err(Error::HardUnsat),
        SolverResult::Timeout(elapsed) => {
            return Err(Error::Timeout {
                elapsed,
                lower: 0,
                upper: Some(inst.soft.len() as u64),
            })
        }
    };
    let mut lo = 0u64;
    let mut hi = inst.cost(&best);
    let violated: Vec<Lit> = inst.soft.iter().map(|l| -l).collect();
    while lo < hi {
        let mid = lo + (hi - lo) / 2;
        let mut cnf = inst.hard.clone();
        let extra = card.at_most(mid as usize, &violated, &mut cnf.var_map);
        cnf.extend(extra);
        calls += 1;
        match timed(&cnf)? {
            SolverResult::Sat(m) => {
                hi = inst.cost(&m);
                m[..best.len()].clone_into(&mut best);
            }
            SolverResult::Unsat => lo = mid + 1,
            SolverResult::Timeout(elapsed) => {
                return Err(Error::Timeout {
                    elapsed,
                    lower: lo,
                    upper: Some(hi),
                })
            }
        }
    }
    Ok(MaxSatOutcome {
        cost: hi,
        model: best,
        calls,
        times,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kb::VarName;

    fn instance() -> MaxSatInstance {
        // hard: a | b, b | c ; soft: !a, !b, !c
        let mut hard = CnfInstance::default();
        let v: Vec<Lit> = ["a", "b", "c"]
            .iter()
            .map(|x| hard.var_map.var(VarName::Atom(x.to_string())) as Lit)
            .collect();
        hard.add_clause([v[0], v[1]]);
        hard.add_clause([v[1], v[2]]);
        MaxSatInstance {
            hard,
            soft: v.iter().map(|l| -l).collect(),
        }
    }

    #[test]
    fn optimum_and_wcnf() {
        let inst = instance();
        let out = solve_maxsat(
            &inst,
            &BackendConfig::internal(0),
            &Deadline::none(),
            CardinalityMethod::Sequential,
        )
        .unwrap();
        assert_eq!(out.cost, 1);
        assert_eq!(inst.cost(&out.model), 1);
        assert_eq!(
            inst.to_wcnf(),
            "p wcnf 3 5 4\n4 1 2 0\n4 2 3 0\n1 -1 0\n1 -2 0\n1 -3 0\n"
        );
    }

    #[test]
    fn unsat_hard_part() {
        let mut inst = instance();
        inst.hard.add_clause([-2]);
        inst.hard.add_clause([-1]);
        assert!(matches!(
            solve_maxsat(&inst, &BackendConfig::internal(0), &Deadline::none(), CardinalityMethod::Binomial),
            Err(Error::HardUnsat)
        ));
    }
}
