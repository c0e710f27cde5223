//! Inconsistency measures for propositional knowledge bases.
//!
//! Six measures (contension, forgetting-based, hitting-set, and the max,
//! sum and hit Dalal distances) computed by SAT search over cardinality
//! encodings, by MaxSAT, by answer set programming through an external
//! solver, or by brute force.
//!
//! ```
//! use incmeter_core::{compute, parse_kb, ComputeOptions, Measure, Method};
//!
//! let kb = parse_kb("x && y\n!y").unwrap();
//! let out = compute(&kb, Measure::Contension, Method::SatBinary, &ComputeOptions::default()).unwrap();
//! assert_eq!(out.value.to_string(), "1");
//! ```

pub mod asp;
pub mod bench;
pub mod cardinality;
pub mod error;
pub mod kb;
pub mod measure;
pub mod oracles;
pub mod sat_encodings;
pub mod search;
pub mod solver;

pub use asp::{emit_asp, extract_value, solve_asp, AnswerSetReport, AnswerStatus, AspProgram, AspSolver};
pub use bench::{emit_reports, generate_srs, run_matrix, BenchRecord, BenchValue, SrsParams};
pub use cardinality::CardinalityMethod;
pub use error::{Error, Result};
pub use kb::{parse_formula, parse_kb, CnfInstance, Formula, Interpretation, KnowledgeBase, Tv3};
pub use measure::{InconsistencyValue, Measure};
pub use oracles::oracle;
pub use sat_encodings::{encode, SatEncoding};
pub use search::{compute, ComputeOptions, Method, PhaseTimes, SearchOutcome, SearchRange};
pub use solver::{BackendConfig, BackendKind, Deadline, SolverResult};
