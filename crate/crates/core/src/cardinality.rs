//! At-most-k constraints over literals as clause sets.

use std::fmt;
use std::str::FromStr;

use crate::kb::{Lit, VarMap};
use crate::oracles::combinations;

/// Which clause encoding to use for at-most-k.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum CardinalityMethod {
    /// One clause per (k+1)-subset, no auxiliaries.
    Binomial,
    /// Sequential counter with `k` register bits per position.
    #[default]
    Sequential,
}

impl CardinalityMethod {
    /// Clauses forcing at most `k` of `lits` true.
    pub fn at_most(self, k: usize, lits: &[Lit], vars: &mut VarMap) -> Vec<Vec<Lit>> {
        match self {
            CardinalityMethod::Binomial => at_most_binomial(k, lits),
            CardinalityMethod::Sequential => at_most_sequential(k, lits, vars),
        }
    }
}

impl fmt::Display for CardinalityMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CardinalityMethod::Binomial => "binomial",
            CardinalityMethod::Sequential => "sequential",
        })
    }
}

impl FromStr for CardinalityMethod {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "binomial" => Ok(CardinalityMethod::Binomial),
            "sequential" => Ok(CardinalityMethod::Sequential),
            other => Err(format!("unknown cardinality encoding `{other}`")),
        }
    }
}

/// For every (k+1)-subset, a clause saying one of its literals is false.
pub fn at_most_binomial(k: usize, lits: &[Lit]) -> Vec<Vec<Lit>> {
    if k >= lits.len() {
        return Vec::new();
    }
    combinations(lits.len(), k + 1)
        .map(|subset| subset.into_iter().map(|i| -lits[i]).collect())
        .collect()
}

/// Sequential counter. Fresh register variables come from `vars`.
///
/// For `0 < k < n` this yields `2nk + n - 3k - 1` clauses.
pub fn at_most_sequential(k: usize, lits: &[Lit], vars: &mut VarMap) -> Vec<Vec<Lit>> {
    let n = lits.len();
    if k >= n {
        return Vec::new();
    }
    if k == 0 {
        return lits.iter().map(|&l| vec![-l]).collect();
    }
    // s[i][j]: at least j+1 of lits[0..=i] are true
    let s: Vec<Vec<Lit>> = (0..n - 1)
        .map(|_| (0..k).map(|_| vars.fresh_aux() as Lit).collect())
        .collect();
    let mut out = Vec::with_capacity(2 * n * k + n);
    out.push(vec![-lits[0], s[0][0]]);
    for j in 1..k {
        out.push(vec![-s[0][j]]);
    }
    for i in 1..n - 1 {
        out.push(vec![-lits[i], s[i][0]]);
        out.push(vec![-s[i - 1][0], s[i][0]]);
        for j in 1..k {
            out.push(vec![-lits[i], -s[i - 1][j - 1], s[i][j]]);
            out.push(vec![-s[i - 1][j], s[i][j]]);
        }
        out.push(vec![-lits[i], -s[i - 1][k - 1]]);
    }
    out.push(vec![-lits[n - 1], -s[n - 2][k - 1]]);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kb::VarName;

    fn setup(n: usize) -> (VarMap, Vec<Lit>) {
        let mut vm = VarMap::new();
        let lits = (0..n).map(|i| vm.var(VarName::Hit(i)) as Lit).collect();
        (vm, lits)
    }

    #[test]
    fn binomial_clause_counts() {
        let (_, lits) = setup(5);
        assert_eq!(at_most_binomial(2, &lits).len(), 10);
        assert_eq!(at_most_binomial(0, &lits), lits.iter().map(|l| vec![-l]).collect::<Vec<_>>());
        assert!(at_most_binomial(5, &lits).is_empty());
    }

    #[test]
    fn sequential_clause_count_formula() {
        for n in 2..9usize {
            for k in 1..n {
                let (mut vm, lits) = setup(n);
                let before = vm.len();
                let cls = at_most_sequential(k, &lits, &mut vm);
                assert_eq!(cls.len(), 2 * n * k + n - 3 * k - 1);
                assert!(cls.len() <= 3 * n * k + n);
                assert_eq!((vm.len() - before) as usize, (n - 1) * k);
            }
        }
    }

    #[test]
    fn method_names_round_trip() {
        for m in [CardinalityMethod::Binomial, CardinalityMethod::Sequential] {
            assert_eq!(m.to_string().parse::<CardinalityMethod>().unwrap(), m);
        }
    }
}
