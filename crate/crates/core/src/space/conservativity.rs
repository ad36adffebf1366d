use serde::Serialize;
use serde_json::{json, Value};

use super::{Space, SpaceError};
use crate::models::holds;
use crate::syntax::Formula;

/// Outcome for one sentence.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConservativityEntry {
    pub sentence: String,
    /// `σ` holds in every model of the class.
    pub holds_in_all_models: bool,
    /// `⟦σ⟧` is the whole space.
    pub full_extent: bool,
    pub extent_size: usize,
    /// Indices of the models where `σ` fails.
    pub failing_models: Vec<usize>,
    pub agree: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConservativityReport {
    /// Validity over the enumerated models stands in for provability.
    pub note: String,
    pub space_hash: String,
    pub point_count: usize,
    pub entries: Vec<ConservativityEntry>,
}

impl ConservativityReport {
    pub fn all_agree(&self) -> bool {
        self.entries.iter().all(|e| e.agree)
    }

    /// Entries where the two judgements differ.
    pub fn defects(&self) -> impl Iterator<Item = &ConservativityEntry> {
        self.entries.iter().filter(|e| !e.agree)
    }

    pub fn to_json(&self) -> Value {
        json!(self)
    }
}

/// Compares "true in every model of the class" with "`⟦σ⟧` is the whole
/// space" for each sentence. Disagreements are reported, not hidden.
pub fn conservativity_report(space: &Space, sentences: &[Formula]) -> Result<ConservativityReport, SpaceError> {
    let mut entries = Vec::with_capacity(sentences.len());
    for sigma in sentences {
        let extent = space.evaluate_sentence(sigma)?;
        let mut failing_models = Vec::new();
        for (index, m) in space.models().iter().enumerate() {
            if !holds(m, sigma)? {
                failing_models.push(index);
            }
        }
        let holds_in_all_models = failing_models.is_empty();
        let full_extent = extent.is_full();
        entries.push(ConservativityEntry {
            sentence: sigma.to_string(),
            holds_in_all_models,
            full_extent,
            extent_size: extent.len(),
            failing_models,
            agree: holds_in_all_models == full_extent,
        });
    }
    Ok(ConservativityReport {
        note: format!(
            "validity over the {} models of size at most {} stands in for provability",
            space.models().len(),
            space.class().max_size()
        ),
        space_hash: space.hash().to_string(),
        point_count: space.len(),
        entries,
    })
}
