//! Experiment configuration: a TOML file, command-line overrides, and
//! validation.

use std::path::Path;

use anyhow::{bail, Context, Result};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use ringradiant::radiation::{NodeCounts, PowerMode};
use ringradiant::spectral::ModeWeights;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum OutputFormat {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    Direct,
    FarField,
}

impl From<Mode> for PowerMode {
    fn from(m: Mode) -> Self {
        match m {
            Mode::Direct => PowerMode::Direct,
            Mode::FarField => PowerMode::FarField,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Nodes {
    pub theta: usize,
    pub phi: usize,
    pub sphere_theta: usize,
    pub time: usize,
}

impl Default for Nodes {
    fn default() -> Self {
        let n = NodeCounts::default();
        Self {
            theta: n.theta,
            phi: n.phi,
            sphere_theta: n.sphere_theta,
            time: n.time,
        }
    }
}

impl From<Nodes> for NodeCounts {
    fn from(n: Nodes) -> Self {
        NodeCounts {
            theta: n.theta,
            phi: n.phi,
            sphere_theta: n.sphere_theta,
            time: n.time,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    pub m: u32,
    pub c: f64,
    pub weights: [f64; 4],
    pub radii: Vec<f64>,
    pub t0: f64,
    pub mode: Mode,
    pub output_format: OutputFormat,
    pub nodes: Nodes,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            m: 2,
            c: ringradiant::DEFAULT_C,
            weights: [1.0, 1.0, 1.0, -1.0],
            radii: vec![5.0, 10.0, 20.0, 40.0],
            t0: 0.0,
            mode: Mode::FarField,
            output_format: OutputFormat::Csv,
            nodes: Nodes::default(),
        }
    }
}

/// Values given on the command line; each one replaces the file value.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub c: Option<f64>,
    pub m: Option<u32>,
    pub weights: Option<Vec<f64>>,
    pub radii: Option<Vec<f64>>,
    pub format: Option<OutputFormat>,
}

impl ExperimentConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        toml::from_str(text).context("could not parse config")
    }

    pub fn load(path: Option<&Path>) -> Result<Self> {
        match path {
            None => Ok(Self::default()),
            Some(p) => {
                let text = std::fs::read_to_string(p).with_context(|| format!("could not read {}", p.display()))?;
                Self::from_toml(&text).with_context(|| format!("in {}", p.display()))
            }
        }
    }

    pub fn apply(&mut self, o: &Overrides) -> Result<()> {
        if let Some(c) = o.c {
            self.c = c;
        }
        if let Some(m) = o.m {
            self.m = m;
        }
        if let Some(w) = &o.weights {
            if w.len() != 4 {
                bail!("--weights takes exactly four values, got {}", w.len());
            }
            self.weights = [w[0], w[1], w[2], w[3]];
        }
        if let Some(r) = &o.radii {
            self.radii = r.clone();
        }
        if let Some(f) = o.format {
            self.output_format = f;
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<()> {
        if self.m == 0 {
            bail!("m must be a positive integer");
        }
        if !(self.c > 1.0) || !self.c.is_finite() {
            bail!("c must be a finite number greater than 1, got {}", self.c);
        }
        if !self.weights.iter().all(|w| w.is_finite()) {
            bail!("weights must be finite");
        }
        if !self.t0.is_finite() {
            bail!("t0 must be finite");
        }
        if self.radii.is_empty() {
            bail!("radii must not be empty");
        }
        for r in &self.radii {
            if !(*r > 1.0) || !r.is_finite() {
                bail!("every radius must be finite and greater than 1, got {r}");
            }
        }
        if self.radii.windows(2).any(|w| w[1] <= w[0]) {
            bail!("radii must be strictly increasing");
        }
        let n = self.nodes;
        for (name, v) in [("theta", n.theta), ("phi", n.phi), ("sphere_theta", n.sphere_theta), ("time", n.time)] {
            if v < 16 || !v.is_power_of_two() {
                bail!("nodes.{name} must be a power of two >= 16, got {v}");
            }
        }
        NodeCounts::from(n).validate()?;
        Ok(())
    }

    pub fn mode_weights(&self) -> Result<ModeWeights> {
        Ok(ModeWeights::new(self.m, self.weights)?)
    }

    pub fn node_counts(&self) -> NodeCounts {
        self.nodes.into()
    }

    /// SHA-256 of the resolved configuration in its JSON form.
    pub fn hash(&self) -> String {
        let text = serde_json::to_string(self).expect("config serialises");
        Sha256::digest(text.as_bytes()).iter().map(|b| format!("{b:02x}")).collect()
    }
}

/// Load, override, validate.
pub fn resolve(path: Option<&Path>, overrides: &Overrides) -> Result<ExperimentConfig> {
    let mut cfg = ExperimentConfig::load(path)?;
    cfg.apply(overrides)?;
    cfg.validate()?;
    Ok(cfg)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_are_valid() {
        let c = ExperimentConfig::default();
        c.validate().unwrap();
        assert_eq!(c.node_counts(), NodeCounts::default());
    }

    #[test]
    fn partial_file_keeps_defaults() {
        let c = ExperimentConfig::from_toml("m = 4\nradii = [2.0, 3.0, 8.0]\n[nodes]\ntime = 64\n").unwrap();
        assert_eq!(c.m, 4);
        assert_eq!(c.nodes.time, 64);
        assert_eq!(c.nodes.phi, 64);
        assert_eq!(c.c, 10.0);
        c.validate().unwrap();
    }

    #[test]
    fn invalid_values_are_rejected() {
        let bad = [
            "radii = []",
            "radii = [5.0, 5.0]",
            "radii = [0.5, 2.0]",
            "c = 1.0",
            "m = 0",
            "[nodes]\nphi = 48",
            "[nodes]\ntime = 8",
        ];
        for text in bad {
            let c = ExperimentConfig::from_toml(text).unwrap();
            assert!(c.validate().is_err(), "{text}");
        }
        assert!(ExperimentConfig::from_toml("speed = 3").is_err());
        assert!(ExperimentConfig::from_toml("mode = \"sideways\"").is_err());
    }

    #[test]
    fn overrides_win_and_change_the_hash() {
        let mut c = ExperimentConfig::default();
        let h0 = c.hash();
        assert_eq!(h0, ExperimentConfig::default().hash());
        assert_eq!(h0.len(), 64);
        c.apply(&Overrides {
            c: Some(20.0),
            weights: Some(vec![1.0, 0.0, 0.0, 0.0]),
            ..Default::default()
        })
        .unwrap();
        assert_eq!(c.c, 20.0);
        assert_eq!(c.weights, [1.0, 0.0, 0.0, 0.0]);
        assert_ne!(c.hash(), h0);
        let short = Overrides {
            weights: Some(vec![1.0]),
            ..Default::default()
        };
        assert!(c.apply(&short).is_err());
    }
}
