use serde::Deserialize;
use vertexfusion::{Error, Result};

/// One run configuration document.
#[derive(Debug, Clone, Deserialize)]
pub struct RunConfig {
    pub command: Command,
    #[serde(default = "default_algebra")]
    pub algebra: String,
    /// "p/q" or "generic".
    #[serde(default = "default_kappa")]
    pub kappa: String,
    /// nonzero rational, default 1.
    #[serde(default = "default_z")]
    pub z: String,
    #[serde(default = "default_depth")]
    pub depth: usize,
    /// Lowest-space weights of the modules involved: [] is the trivial
    /// module, [k, ...] a dominant integral weight. Fusion commands read
    /// two entries, module commands the first.
    #[serde(default)]
    pub weights: Vec<Vec<i64>>,
    #[serde(default)]
    pub seed: u64,
    /// Sample count for the randomized suites.
    #[serde(default = "default_samples")]
    pub samples: usize,
    /// Hard cap on the depth, defaults to 6.
    #[serde(default = "default_cap")]
    pub depth_cap: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
pub enum Command {
    #[serde(rename = "algebra-info")]
    AlgebraInfo,
    #[serde(rename = "module-build")]
    ModuleBuild,
    #[serde(rename = "sugawara-check")]
    SugawaraCheck,
    #[serde(rename = "voa-check")]
    VoaCheck,
    #[serde(rename = "fusion-compute")]
    FusionCompute,
    #[serde(rename = "fusion-verify")]
    FusionVerify,
    #[serde(rename = "compat-check")]
    CompatCheck,
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::AlgebraInfo => "algebra-info",
            Command::ModuleBuild => "module-build",
            Command::SugawaraCheck => "sugawara-check",
            Command::VoaCheck => "voa-check",
            Command::FusionCompute => "fusion-compute",
            Command::FusionVerify => "fusion-verify",
            Command::CompatCheck => "compat-check",
        }
    }
}

fn default_algebra() -> String {
    "sl2".into()
}
fn default_kappa() -> String {
    "-1".into()
}
fn default_z() -> String {
    "1".into()
}
fn default_depth() -> usize {
    2
}
fn default_samples() -> usize {
    20
}
fn default_cap() -> usize {
    6
}

impl RunConfig {
    pub fn load(path: &str) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::InvalidInput(format!("cannot read config {path}: {e}")))?;
        let mut cfg: RunConfig = serde_json::from_str(&text)
            .map_err(|e| Error::InvalidInput(format!("bad config: {e}")))?;
        if let Ok(mode) = std::env::var("VERTEXFUSION_FIELD") {
            match mode.as_str() {
                "generic" => cfg.kappa = "generic".into(),
                "rational" => {
                    if cfg.kappa == "generic" {
                        return Err(Error::InvalidInput(
                            "VERTEXFUSION_FIELD=rational but config has generic kappa and no numeric value".into(),
                        ));
                    }
                }
                other => {
                    return Err(Error::InvalidInput(format!(
                        "unknown VERTEXFUSION_FIELD {other:?}"
                    )))
                }
            }
        }
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.depth > self.depth_cap {
            return Err(Error::InvalidInput(format!(
                "depth {} exceeds the hard cap {}",
                self.depth, self.depth_cap
            )));
        }
        Ok(())
    }

    pub fn weight_or_trivial(&self, i: usize) -> Vec<i64> {
        self.weights.get(i).cloned().unwrap_or_default()
    }
}
