//! Experiment configuration: a TOML file with one optional table per concern.
//!
//! ```toml
//! [basis]
//! m = [2]          # radix pattern, repeated up to the depth
//! depth = 12
//!
//! [weights]
//! kinds = ["fejer", "riesz", "iterlog(1,1)"]
//!
//! [run]
//! seed = 7
//! ```
//!
//! Every field is optional; each command fills in its own defaults.

use serde::{Deserialize, Serialize};

use crate::error::{Result, VlabError};
use crate::group::Basis;
use crate::summability::WeightSequence;

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub basis: Option<BasisSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weights: Option<WeightsSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub run: Option<RunSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub transform: Option<TransformSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub maximal: Option<MaximalSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<CounterexampleSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub converge: Option<ConvergeSection>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BasisSection {
    pub m: Vec<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub depth: Option<usize>,
}

impl BasisSection {
    pub fn build(&self) -> Result<Basis> {
        Basis::new(&self.m, self.depth.unwrap_or(self.m.len()))
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WeightsSection {
    pub kinds: Vec<String>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunSection {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub out: Option<String>,
    /// Measure wall-clock times; off by default so output is reproducible.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub timing: Option<bool>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TransformSection {
    /// Explicit radix lists, one per case.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bases: Option<Vec<Vec<u32>>>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MaximalSection {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub functions: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p: Option<f64>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CounterexampleSection {
    /// `1/p`, an integer of at least 3.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub inv_p: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub m: Option<Vec<u32>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha0: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub count: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub samples: Option<usize>,
    /// Blocks up to this index also get the full-grid check.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dense_k_max: Option<usize>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConvergeSection {
    /// Spectrum below `M_j`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub j: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n_max: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub points: Option<usize>,
}

impl ExperimentConfig {
    pub fn parse(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| VlabError::Config(e.to_string()))
    }

    pub fn load(path: &std::path::Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| VlabError::Config(format!("{}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn to_toml(&self) -> Result<String> {
        toml::to_string(self).map_err(|e| VlabError::Config(e.to_string()))
    }

    pub fn seed(&self) -> u64 {
        self.run.as_ref().and_then(|r| r.seed).unwrap_or(0)
    }

    pub fn timing(&self) -> bool {
        self.run.as_ref().and_then(|r| r.timing).unwrap_or(false)
    }

    pub fn out(&self) -> Option<&str> {
        self.run.as_ref().and_then(|r| r.out.as_deref())
    }

    /// Configured basis, or `default` radices repeated to `depth`.
    pub fn basis_or(&self, pattern: &[u32], depth: usize) -> Result<Basis> {
        match &self.basis {
            Some(b) => b.build(),
            None => Basis::new(pattern, depth),
        }
    }

    /// Configured weight kinds, or the given defaults.
    pub fn weights_or(&self, defaults: &[&str]) -> Result<Vec<WeightSequence>> {
        match &self.weights {
            Some(w) if w.kinds.is_empty() => Err(VlabError::Config("[weights] kinds is empty".into())),
            Some(w) => w.kinds.iter().map(|k| WeightSequence::parse(k)).collect(),
            None => defaults.iter().map(|k| WeightSequence::parse(k)).collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip() {
        let cfg = ExperimentConfig {
            basis: Some(BasisSection {
                m: vec![2, 3],
                depth: Some(4),
            }),
            weights: Some(WeightsSection {
                kinds: vec!["fejer".into(), "iterlog(1,1)".into()],
            }),
            run: Some(RunSection {
                seed: Some(u64::MAX),
                out: Some("out.csv".into()),
                timing: Some(false),
            }),
            transform: Some(TransformSection {
                bases: Some(vec![vec![2, 2, 2], vec![3, 4]]),
            }),
            maximal: Some(MaximalSection {
                functions: Some(3),
                p: Some(0.1 + 0.2),
            }),
            counterexample: Some(CounterexampleSection {
                inv_p: Some(3),
                m: Some(vec![2]),
                alpha0: Some(1),
                count: Some(3),
                samples: Some(100),
                dense_k_max: Some(1),
            }),
            converge: Some(ConvergeSection {
                j: Some(3),
                n_max: Some(1 << 40),
                points: Some(9),
            }),
        };
        let text = cfg.to_toml().unwrap();
        assert_eq!(ExperimentConfig::parse(&text).unwrap(), cfg);
        assert_eq!(ExperimentConfig::parse("").unwrap(), ExperimentConfig::default());
    }

    #[test]
    fn rejects_garbage() {
        assert!(matches!(
            ExperimentConfig::parse("[basis]\nm = 3"),
            Err(VlabError::Config(_))
        ));
        assert!(ExperimentConfig::parse("[nope]\nx = 1").is_err());
        assert!(ExperimentConfig::parse("[basis]\nm = [2]\nextra = 1").is_err());
        assert!(ExperimentConfig::parse("not toml at all [").is_err());
    }

    #[test]
    fn defaults() {
        let cfg = ExperimentConfig::parse("[run]\nseed = 5").unwrap();
        assert_eq!(cfg.seed(), 5);
        assert!(!cfg.timing());
        assert_eq!(cfg.basis_or(&[2], 3).unwrap().size().to_string(), "8");
        assert_eq!(cfg.weights_or(&["riesz"]).unwrap().len(), 1);
        let bad = ExperimentConfig::parse("[weights]\nkinds = [\"gauss\"]").unwrap();
        assert!(bad.weights_or(&["fejer"]).is_err());
    }
}
