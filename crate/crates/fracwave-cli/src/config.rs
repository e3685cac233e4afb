//! Run configuration: defaults, optional TOML file, flag overrides.

use std::path::PathBuf;

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Parametrization {
    /// Plot against uniformly spaced vertices.
    Uniform,
    /// Plot against resistance positions.
    Resistance,
    /// Plot against cumulative-measure positions.
    Measure,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Normalization {
    /// Times feed the series unchanged.
    Raw,
    /// Times are rescaled by pi / sqrt(lambda_{n,1}).
    Fundamental,
}

/// Everything a command run depends on. Serializes losslessly to TOML.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RunConfig {
    pub p: f64,
    pub n0: usize,
    pub n: usize,
    pub k: usize,
    pub times: Vec<f64>,
    pub parametrization: Parametrization,
    pub normalization: Normalization,
    pub output: Option<PathBuf>,
    pub oracle: bool,
    pub tolerance: Option<f64>,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            p: 0.2,
            n0: 2,
            n: 5,
            k: 1,
            times: vec![0.1, 0.2, 0.3, 0.4],
            parametrization: Parametrization::Uniform,
            normalization: Normalization::Fundamental,
            output: None,
            oracle: false,
            tolerance: None,
        }
    }
}

/// Flag values layered on top of a config file (or the defaults).
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub p: Option<f64>,
    pub n0: Option<usize>,
    pub n: Option<usize>,
    pub k: Option<usize>,
    pub times: Option<Vec<f64>>,
    pub parametrization: Option<Parametrization>,
    pub normalization: Option<Normalization>,
    pub output: Option<PathBuf>,
    pub oracle: bool,
    pub tolerance: Option<f64>,
}

impl RunConfig {
    pub fn apply(mut self, over: &Overrides) -> Self {
        if let Some(p) = over.p {
            self.p = p;
        }
        if let Some(n0) = over.n0 {
            self.n0 = n0;
        }
        if let Some(n) = over.n {
            self.n = n;
        }
        if let Some(k) = over.k {
            self.k = k;
        }
        if let Some(ref times) = over.times {
            self.times = times.clone();
        }
        if let Some(par) = over.parametrization {
            self.parametrization = par;
        }
        if let Some(norm) = over.normalization {
            self.normalization = norm;
        }
        if let Some(ref out) = over.output {
            self.output = Some(out.clone());
        }
        if over.oracle {
            self.oracle = true;
        }
        if let Some(tol) = over.tolerance {
            self.tolerance = Some(tol);
        }
        self
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn toml_round_trip_is_lossless() {
        let cfg = RunConfig {
            p: 0.337,
            times: vec![0.0, 0.125, 7.25, 0.1],
            output: Some(PathBuf::from("out/table.csv")),
            tolerance: Some(3.5e-9),
            parametrization: Parametrization::Measure,
            ..RunConfig::default()
        };
        let text = toml::to_string(&cfg).unwrap();
        let back: RunConfig = toml::from_str(&text).unwrap();
        assert_eq!(cfg, back);
    }

    #[test]
    fn partial_files_fall_back_to_defaults() {
        let cfg: RunConfig = toml::from_str("p = 0.4\nn = 3\n").unwrap();
        assert_eq!(cfg.p, 0.4);
        assert_eq!(cfg.n, 3);
        assert_eq!(cfg.n0, RunConfig::default().n0);
    }

    #[test]
    fn unknown_keys_are_rejected() {
        assert!(toml::from_str::<RunConfig>("speed = 11\n").is_err());
    }

    #[test]
    fn overrides_take_precedence() {
        let over = Overrides {
            p: Some(0.45),
            times: Some(vec![1.0]),
            oracle: true,
            ..Overrides::default()
        };
        let cfg = RunConfig::default().apply(&over);
        assert_eq!(cfg.p, 0.45);
        assert_eq!(cfg.times, vec![1.0]);
        assert!(cfg.oracle);
        assert_eq!(cfg.n, RunConfig::default().n);
    }
}
