//! Fixtures shared by the criterion benchmarks.

use incmeter_core::bench::{generate_corpus, SrsParams};
use incmeter_core::KnowledgeBase;

/// `count` SRS knowledge bases over `atoms` atoms with 5 to 15 formulas.
pub fn corpus(atoms: usize, count: usize, seed: u64) -> Vec<KnowledgeBase> {
    let params = SrsParams {
        signature_size: atoms,
        seed,
        ..Default::default()
    };
    generate_corpus(&params, count)
        .expect("default parameters are valid")
        .into_iter()
        .map(|e| e.kb)
        .collect()
}
