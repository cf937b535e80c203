use std::path::Path;

use serde::{Deserialize, Serialize};

use super::CohesiveError;
use crate::clocked::CeSet;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Provenance {
    Maximal { family: Vec<String> },
    Family { family: Vec<String> },
    Injected { source: String },
}

/// A window `C ∩ [0, horizon]` of an approximated cohesive set together with
/// an enumeration of its complement.
#[derive(Clone, Debug)]
pub struct CohesiveApprox {
    elements: Vec<u64>,
    stage: u64,
    horizon: u64,
    provenance: Provenance,
    complement: CeSet,
}

#[derive(Serialize, Deserialize)]
struct Wire {
    provenance: Provenance,
    stage: u64,
    horizon: u64,
    elements: Vec<u64>,
}

impl CohesiveApprox {
    pub fn new(
        mut elements: Vec<u64>,
        stage: u64,
        horizon: u64,
        provenance: Provenance,
        complement: CeSet,
    ) -> Result<Self, CohesiveError> {
        elements.sort_unstable();
        elements.dedup();
        if let Some(&x) = elements.iter().find(|&&x| x > horizon) {
            return Err(CohesiveError::Malformed(format!(
                "{x} exceeds horizon {horizon}"
            )));
        }
        if let Some(&x) = elements.iter().find(|&&x| complement.contains_at(x, stage)) {
            return Err(CohesiveError::Malformed(format!(
                "{x} already enumerated into the complement"
            )));
        }
        Ok(CohesiveApprox {
            elements,
            stage,
            horizon,
            provenance,
            complement,
        })
    }

    /// Window given directly; the complement enumerates every other number
    /// of `[0, horizon]` at the stage equal to itself.
    pub fn injected(
        elements: Vec<u64>,
        horizon: u64,
        source: impl Into<String>,
    ) -> Result<Self, CohesiveError> {
        let complement = complement_of_window(&elements, horizon);
        Self::new(
            elements,
            horizon,
            horizon,
            Provenance::Injected {
                source: source.into(),
            },
            complement,
        )
    }

    pub fn elements(&self) -> &[u64] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn stage(&self) -> u64 {
        self.stage
    }

    pub fn horizon(&self) -> u64 {
        self.horizon
    }

    pub fn provenance(&self) -> &Provenance {
        &self.provenance
    }

    pub fn complement(&self) -> &CeSet {
        &self.complement
    }

    pub fn contains(&self, x: u64) -> bool {
        self.elements.binary_search(&x).is_ok()
    }

    /// The same set viewed through a shorter window.
    pub fn truncate(&self, bound: u64) -> CohesiveApprox {
        let bound = bound.min(self.horizon);
        CohesiveApprox {
            elements: self
                .elements
                .iter()
                .copied()
                .filter(|&x| x <= bound)
                .collect(),
            stage: self.stage,
            horizon: bound,
            provenance: self.provenance.clone(),
            complement: self.complement.clone(),
        }
    }

    /// Elements that survive enumeration up to a later stage.
    pub fn refresh(&self, stage: u64) -> CohesiveApprox {
        let stage = stage.max(self.stage);
        CohesiveApprox {
            elements: self
                .elements
                .iter()
                .copied()
                .filter(|&x| !self.complement.contains_at(x, stage))
                .collect(),
            stage,
            horizon: self.horizon,
            provenance: self.provenance.clone(),
            complement: self.complement.clone(),
        }
    }

    pub fn provenance_label(&self) -> String {
        match &self.provenance {
            Provenance::Maximal { family } => format!("maximal[{}]", family.join(", ")),
            Provenance::Family { family } => format!("family[{}]", family.join(", ")),
            Provenance::Injected { source } => format!("injected[{source}]"),
        }
    }

    pub fn to_json(&self) -> String {
        let w = Wire {
            provenance: self.provenance.clone(),
            stage: self.stage,
            horizon: self.horizon,
            elements: self.elements.clone(),
        };
        serde_json::to_string(&w).expect("serializable")
    }

    /// Reads a window; the complement becomes the window's complement in
    /// `[0, horizon]`.
    pub fn from_json(s: &str) -> Result<Self, CohesiveError> {
        let w: Wire =
            serde_json::from_str(s).map_err(|e| CohesiveError::Malformed(e.to_string()))?;
        let complement = complement_of_window(&w.elements, w.horizon);
        Self::new(w.elements, w.stage, w.horizon, w.provenance, complement)
    }

    pub fn load(path: &Path) -> Result<Self, CohesiveError> {
        let s =
            std::fs::read_to_string(path).map_err(|e| CohesiveError::Malformed(e.to_string()))?;
        Self::from_json(&s)
    }
}

pub(crate) fn complement_of_window(elements: &[u64], horizon: u64) -> CeSet {
    let mut win = elements.to_vec();
    win.sort_unstable();
    CeSet::from_entry("C̄", move |x, limit| {
        (x <= horizon && x <= limit && win.binary_search(&x).is_err()).then_some(x)
    })
}
