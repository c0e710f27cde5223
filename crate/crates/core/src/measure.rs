//! Measure identifiers and inconsistency values shared by every pipeline.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::kb::KnowledgeBase;

/// The six inconsistency measures.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Measure {
    Contension,
    Forgetting,
    HittingSet,
    MaxDistance,
    SumDistance,
    HitDistance,
}

impl Measure {
    pub const ALL: [Measure; 6] = [
        Measure::Contension,
        Measure::Forgetting,
        Measure::HittingSet,
        Measure::MaxDistance,
        Measure::SumDistance,
        Measure::HitDistance,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Measure::Contension => "contension",
            Measure::Forgetting => "forgetting",
            Measure::HittingSet => "hitting-set",
            Measure::MaxDistance => "max-distance",
            Measure::SumDistance => "sum-distance",
            Measure::HitDistance => "hit-distance",
        }
    }

    /// Whether the measure can take the value infinity.
    pub fn infinity_possible(self) -> bool {
        matches!(
            self,
            Measure::HittingSet | Measure::MaxDistance | Measure::SumDistance
        )
    }

    /// Upper end of the finite value range on `kb`.
    ///
    /// `kb` is expected in prepared form (see [`KnowledgeBase::prepared`]).
    pub fn max_value(self, kb: &KnowledgeBase) -> u64 {
        let atoms = kb.signature().len() as u64;
        let formulas = kb.len() as u64;
        match self {
            Measure::Contension | Measure::MaxDistance => atoms,
            Measure::Forgetting => kb.occurrence_count() as u64,
            Measure::HittingSet => formulas.saturating_sub(1),
            Measure::SumDistance => atoms * formulas,
            Measure::HitDistance => formulas,
        }
    }
}

impl fmt::Display for Measure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Measure {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "contension" => Ok(Measure::Contension),
            "forgetting" => Ok(Measure::Forgetting),
            "hitting-set" | "hs" => Ok(Measure::HittingSet),
            "max-distance" | "dmax" => Ok(Measure::MaxDistance),
            "sum-distance" | "dsum" => Ok(Measure::SumDistance),
            "hit-distance" | "dhit" => Ok(Measure::HitDistance),
            other => Err(format!("unknown measure `{other}`")),
        }
    }
}

/// A non-negative integer or infinity.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum InconsistencyValue {
    Finite(u64),
    Infinity,
}

impl InconsistencyValue {
    pub fn is_finite(self) -> bool {
        matches!(self, InconsistencyValue::Finite(_))
    }

    pub fn finite(self) -> Option<u64> {
        match self {
            InconsistencyValue::Finite(v) => Some(v),
            InconsistencyValue::Infinity => None,
        }
    }

    /// `self <= u`, with infinity above every bound.
    pub fn at_most(self, u: u64) -> bool {
        matches!(self, InconsistencyValue::Finite(v) if v <= u)
    }
}

impl From<u64> for InconsistencyValue {
    fn from(v: u64) -> Self {
        InconsistencyValue::Finite(v)
    }
}

impl PartialOrd for InconsistencyValue {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for InconsistencyValue {
    fn cmp(&self, other: &Self) -> Ordering {
        use InconsistencyValue::*;
        match (self, other) {
            (Finite(a), Finite(b)) => a.cmp(b),
            (Finite(_), Infinity) => Ordering::Less,
            (Infinity, Finite(_)) => Ordering::Greater,
            (Infinity, Infinity) => Ordering::Equal,
        }
    }
}

impl fmt::Display for InconsistencyValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            InconsistencyValue::Finite(v) => write!(f, "{v}"),
            InconsistencyValue::Infinity => f.write_str("inf"),
        }
    }
}

impl FromStr for InconsistencyValue {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "inf" => Ok(InconsistencyValue::Infinity),
            _ => s
                .parse::<u64>()
                .map(InconsistencyValue::Finite)
                .map_err(|_| format!("not an inconsistency value: `{s}`")),
        }
    }
}

impl Serialize for InconsistencyValue {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            InconsistencyValue::Finite(v) => s.serialize_u64(*v),
            InconsistencyValue::Infinity => s.serialize_str("inf"),
        }
    }
}
