//! DIMACS CNF text and SAT-competition style solver output.

use std::fmt::Write;

use super::SolverResult;
use crate::error::{Error, Result};
use crate::kb::{CnfInstance, Lit};

/// `p cnf V C` header followed by one zero-terminated clause per line.
pub fn emit_dimacs(cnf: &CnfInstance) -> String {
    let mut out = String::new();
    writeln!(out, "p cnf {} {}", cnf.num_vars(), cnf.clauses.len()).unwrap();
    for c in &cnf.clauses {
        for l in c {
            write!(out, "{l} ").unwrap();
        }
        out.push_str("0\n");
    }
    out
}

/// Parse DIMACS CNF. Variables get auxiliary names.
pub fn parse_dimacs(text: &str) -> Result<CnfInstance> {
    let mut cnf = CnfInstance::default();
    let mut declared: Option<(u32, usize)> = None;
    let mut current: Vec<Lit> = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('c') || line.starts_with('%') {
            continue;
        }
        if let Some(rest) = line.strip_prefix('p') {
            let f: Vec<&str> = rest.split_whitespace().collect();
            let (Some(&"cnf"), Some(v), Some(c)) = (f.first(), f.get(1), f.get(2)) else {
                return Err(Error::parse(i + 1, 1, "expected `p cnf <vars> <clauses>`"));
            };
            let v: u32 = v.parse().map_err(|_| Error::parse(i + 1, 1, "bad variable count"))?;
            let c: usize = c.parse().map_err(|_| Error::parse(i + 1, 1, "bad clause count"))?;
            for _ in 0..v {
                cnf.var_map.fresh_aux();
            }
            declared = Some((v, c));
            continue;
        }
        let Some((v, _)) = declared else {
            return Err(Error::parse(i + 1, 1, "clause before header"));
        };
        for tok in line.split_whitespace() {
            let l: Lit = tok
                .parse()
                .map_err(|_| Error::parse(i + 1, 1, format!("bad literal `{tok}`")))?;
            if l == 0 {
                cnf.clauses.push(std::mem::take(&mut current));
            } else if l.unsigned_abs() > v {
                return Err(Error::parse(i + 1, 1, format!("literal {l} exceeds {v} variables")));
            } else {
                current.push(l);
            }
        }
    }
    if !current.is_empty() {
        cnf.clauses.push(current);
    }
    match declared {
        None => Err(Error::parse(1, 1, "missing `p cnf` header")),
        Some((_, c)) if c != cnf.clauses.len() => Err(Error::parse(
            1,
            1,
            format!("header declares {c} clauses, found {}", cnf.clauses.len()),
        )),
        Some(_) => Ok(cnf),
    }
}

/// Read an `s` status line and `v` model lines. `UNKNOWN` maps to a timeout
/// with zero duration; the caller fills in the elapsed time.
pub fn parse_solver_output(text: &str, num_vars: u32) -> Result<SolverResult> {
    let mut status = None;
    let mut model = vec![false; num_vars as usize + 1];
    for line in text.lines() {
        let line = line.trim();
        if let Some(s) = line.strip_prefix("s ") {
            status = Some(s.trim().to_string());
        } else if let Some(vs) = line.strip_prefix("v ") {
            for tok in vs.split_whitespace() {
                let l: Lit = tok
                    .parse()
                    .map_err(|_| Error::MalformedOutput(format!("bad model literal `{tok}`")))?;
                let v = l.unsigned_abs() as usize;
                if v > num_vars as usize {
                    return Err(Error::MalformedOutput(format!("model literal {l} out of range")));
                }
                if l != 0 {
                    model[v] = l > 0;
                }
            }
        }
    }
    match status.as_deref() {
        Some("SATISFIABLE") => Ok(SolverResult::Sat(model)),
        Some("UNSATISFIABLE") => Ok(SolverResult::Unsat),
        Some("UNKNOWN") => Ok(SolverResult::Timeout(Default::default())),
        Some(other) => Err(Error::MalformedOutput(format!("unknown status `{other}`"))),
        None => Err(Error::MalformedOutput("no status line".into())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip() {
        let text = "c comment\np cnf 3 2\n1 -2 0\n2 3 -1 0\n";
        let cnf = parse_dimacs(text).unwrap();
        assert_eq!(cnf.clauses, vec![vec![1, -2], vec![2, 3, -1]]);
        assert_eq!(emit_dimacs(&cnf), "p cnf 3 2\n1 -2 0\n2 3 -1 0\n");
    }

    #[test]
    fn header_mismatch_is_rejected() {
        assert!(parse_dimacs("p cnf 1 2\n1 0\n").is_err());
        assert!(parse_dimacs("1 0\n").is_err());
        assert!(parse_dimacs("p cnf 1 1\n2 0\n").is_err());
    }

    #[test]
    fn solver_output() {
        let r = parse_solver_output("c hi\ns SATISFIABLE\nv 1 -2\nv 3 0\n", 3).unwrap();
        assert_eq!(r, SolverResult::Sat(vec![false, true, false, true]));
        assert_eq!(parse_solver_output("s UNSATISFIABLE\n", 3).unwrap(), SolverResult::Unsat);
        assert!(parse_solver_output("garbage\n", 3).is_err());
        assert!(parse_solver_output("s SATISFIABLE\nv 9 0\n", 3).is_err());
    }
}
