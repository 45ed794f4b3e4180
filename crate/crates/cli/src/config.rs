use serde::Deserialize;
use std::path::Path;
use widomlab_core::sets::SetSpec;

pub const MAX_DEGREE: usize = 400;
pub const SHABAT_MAX_DEGREE: usize = 40;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Emit {
    Csv,
    Svg,
}

/// Either an explicit list or an inclusive range `{"from": a, "to": b}`.
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(untagged)]
pub enum Degrees {
    List(Vec<usize>),
    Range(DegreeRange),
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DegreeRange {
    pub from: usize,
    pub to: usize,
}

impl Degrees {
    pub fn expand(&self) -> Vec<usize> {
        match self {
            Degrees::List(v) => v.clone(),
            Degrees::Range(r) => (r.from..=r.to).collect(),
        }
    }
}

fn default_tol() -> f64 {
    1e-6
}

fn default_emit() -> Vec<Emit> {
    vec![Emit::Csv]
}

fn default_samples() -> usize {
    64
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    #[serde(default)]
    pub set: Option<SetSpec>,
    #[serde(default)]
    pub degrees: Option<Degrees>,
    #[serde(default = "default_tol")]
    pub tol: f64,
    #[serde(default)]
    pub per_edge: Option<usize>,
    #[serde(default)]
    pub output: Option<String>,
    #[serde(default = "default_emit")]
    pub emit: Vec<Emit>,
    /// Target samples per segment for point clouds.
    #[serde(default = "default_samples")]
    pub samples: usize,
}

impl ExperimentConfig {
    pub fn load(path: &Path) -> Result<Self, String> {
        let text = std::fs::read_to_string(path).map_err(|e| format!("cannot read {}: {e}", path.display()))?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Self, String> {
        let cfg: ExperimentConfig = serde_json::from_str(text).map_err(|e| format!("bad config: {e}"))?;
        cfg.check()?;
        Ok(cfg)
    }

    pub fn check(&self) -> Result<(), String> {
        if !(1e-10..=1e-2).contains(&self.tol) {
            return Err(format!("tol must lie in [1e-10, 1e-2], got {}", self.tol));
        }
        if let Some(d) = &self.degrees {
            let list = d.expand();
            if list.is_empty() {
                return Err("degrees must be nonempty".into());
            }
            if let Some(&top) = list.iter().max() {
                if top > MAX_DEGREE {
                    return Err(format!("max degree is {MAX_DEGREE}, got {top}"));
                }
            }
        }
        if let Some(p) = self.per_edge {
            if p < 8 {
                return Err(format!("per_edge must be at least 8, got {p}"));
            }
        }
        if self.samples < 2 {
            return Err(format!("samples must be at least 2, got {}", self.samples));
        }
        if let Some(s) = &self.set {
            s.validate().map_err(|e| e.to_string())?;
        }
        Ok(())
    }

    pub fn degree_list(&self) -> Result<Vec<usize>, String> {
        self.degrees
            .as_ref()
            .map(Degrees::expand)
            .ok_or_else(|| "config needs `degrees`".to_string())
    }

    pub fn require_set(&self) -> Result<&SetSpec, String> {
        self.set.as_ref().ok_or_else(|| "config needs `set`".to_string())
    }
}
