//! Random knowledge bases in the SRS style: formulas grow by recursively
//! choosing a connective, with connective probabilities shrinking by a
//! constant factor per level.

use std::fs;
use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::kb::{Formula, KnowledgeBase};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct SrsParams {
    /// Probability of a disjunction at the top level.
    pub pd: f64,
    /// Probability of a conjunction at the top level.
    pub pc: f64,
    /// Probability of a negation at the top level.
    pub pn: f64,
    /// Factor applied to `pd`, `pc` and `pn` per level of depth.
    pub discount: f64,
    pub signature_size: usize,
    pub min_formulas: usize,
    pub max_formulas: usize,
    pub seed: u64,
}

impl Default for SrsParams {
    fn default() -> Self {
        SrsParams {
            pd: 0.3,
            pc: 0.3,
            pn: 0.3,
            discount: 0.5,
            signature_size: 3,
            min_formulas: 5,
            max_formulas: 15,
            seed: 0,
        }
    }
}

impl SrsParams {
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidParams(msg));
        for (name, p) in [("pd", self.pd), ("pc", self.pc), ("pn", self.pn)] {
            if !(0.0..=1.0).contains(&p) {
                return bad(format!("{name} = {p} is not a probability"));
            }
        }
        if self.pd + self.pc + self.pn > 1.0 + 1e-9 {
            return bad(format!(
                "pd + pc + pn = {} exceeds 1",
                self.pd + self.pc + self.pn
            ));
        }
        if !(self.discount > 0.0 && self.discount < 1.0) {
            return bad(format!("discount {} is outside (0, 1)", self.discount));
        }
        if self.signature_size == 0 {
            return bad("signature size must be positive".into());
        }
        if self.min_formulas > self.max_formulas {
            return bad(format!(
                "formula count range {}..={} is empty",
                self.min_formulas, self.max_formulas
            ));
        }
        Ok(())
    }
}

fn formula(p: &SrsParams, rng: &mut ChaCha8Rng, scale: f64) -> Formula {
    let r: f64 = rng.gen();
    let next = scale * p.discount;
    if r < p.pd * scale {
        Formula::or(formula(p, rng, next), formula(p, rng, next))
    } else if r < (p.pd + p.pc) * scale {
        Formula::and(formula(p, rng, next), formula(p, rng, next))
    } else if r < (p.pd + p.pc + p.pn) * scale {
        Formula::not(formula(p, rng, next))
    } else {
        Formula::atom(format!("x{}", rng.gen_range(0..p.signature_size)))
    }
}

/// One knowledge base over atoms `x0..x{n-1}`, determined by `params.seed`.
pub fn generate_srs(params: &SrsParams) -> Result<KnowledgeBase> {
    params.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let n = rng.gen_range(params.min_formulas..=params.max_formulas);
    Ok(KnowledgeBase::new(
        (0..n).map(|_| formula(params, &mut rng, 1.0)).collect(),
    ))
}

/// A generated instance with the seed that reproduces it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CorpusEntry {
    pub id: String,
    pub seed: u64,
    pub kb: KnowledgeBase,
}

/// `count` knowledge bases; instance seeds are drawn from `params.seed`.
pub fn generate_corpus(params: &SrsParams, count: usize) -> Result<Vec<CorpusEntry>> {
    params.validate()?;
    let mut master = ChaCha8Rng::seed_from_u64(params.seed);
    (0..count)
        .map(|i| {
            let seed = master.gen();
            let kb = generate_srs(&SrsParams {
                seed,
                ..params.clone()
            })?;
            Ok(CorpusEntry {
                id: format!("srs_{i:04}"),
                seed,
                kb,
            })
        })
        .collect()
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct Manifest<'a> {
    params: &'a SrsParams,
    instances: Vec<ManifestEntry<'a>>,
}

#[derive(Serialize)]
struct ManifestEntry<'a> {
    id: &'a str,
    seed: u64,
    file: String,
}

/// Write one `.kb` file per entry plus `manifest.json` into `dir`.
pub fn write_corpus(dir: &Path, params: &SrsParams, entries: &[CorpusEntry]) -> Result<()> {
    fs::create_dir_all(dir)?;
    let mut instances = Vec::with_capacity(entries.len());
    for e in entries {
        let file = format!("{}.kb", e.id);
        fs::write(dir.join(&file), e.kb.to_string())?;
        instances.push(ManifestEntry {
            id: &e.id,
            seed: e.seed,
            file,
        });
    }
    let manifest = Manifest { params, instances };
    let mut json = serde_json::to_string_pretty(&manifest)?;
    json.push('\n');
    fs::write(dir.join("manifest.json"), json)?;
    Ok(())
}
