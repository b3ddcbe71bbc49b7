//! Experiment configuration.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

fn default_lb_fraction() -> f64 {
    0.25
}

fn default_rewires_per_round() -> u32 {
    1
}

/// One measurement round plus the gap to the next one, in seconds.
fn default_round_period_s() -> u64 {
    900
}

/// Full description of one simulated experiment.
///
/// `n`, `m`, `rounds`, `num_destinations` and `seed` must be given
/// explicitly; `lb_fraction` (0.25), `rewires_per_round` (1) and
/// `round_period_s` (900) have documented defaults. Unknown keys in a config
/// file are an error.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    /// Node count of the substrate graph.
    pub n: u32,
    /// Edge count of the substrate graph.
    pub m: u64,
    /// Fraction of nodes that load-balance across equal-cost next hops.
    #[serde(default = "default_lb_fraction")]
    pub lb_fraction: f64,
    /// Single-edge rewirings applied at each round boundary.
    #[serde(default = "default_rewires_per_round")]
    pub rewires_per_round: u32,
    /// Number of measurement rounds.
    pub rounds: u32,
    /// Size of the fixed destination set.
    pub num_destinations: u32,
    /// Wall-clock spacing between round starts; recorded as metadata only.
    #[serde(default = "default_round_period_s")]
    pub round_period_s: u64,
    /// Master seed; every random decision derives from it.
    pub seed: u64,
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<()> {
        if self.n < 2 {
            return Err(Error::invalid(format!("n: must be >= 2, got {}", self.n)));
        }
        let max_pairs = self.n as u64 * (self.n as u64 - 1) / 2;
        if self.m < self.n as u64 - 1 || self.m > max_pairs {
            return Err(Error::invalid(format!(
                "m: must be in [{}, {max_pairs}] for n = {}, got {}",
                self.n - 1,
                self.n,
                self.m
            )));
        }
        if !(0.0..=1.0).contains(&self.lb_fraction) {
            return Err(Error::invalid(format!(
                "lb_fraction: must be in [0, 1], got {}",
                self.lb_fraction
            )));
        }
        if self.rounds < 1 {
            return Err(Error::invalid("rounds: must be >= 1, got 0".to_string()));
        }
        if self.num_destinations < 1 {
            return Err(Error::invalid(
                "num_destinations: must be >= 1, got 0".to_string(),
            ));
        }
        if self.num_destinations as u64 > self.n as u64 - 1 {
            return Err(Error::invalid(format!(
                "num_destinations: must be <= n - 1 = {}, got {}",
                self.n - 1,
                self.num_destinations
            )));
        }
        Ok(())
    }

    /// Parse and validate a JSON config.
    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: ExperimentConfig =
            serde_json::from_str(text).map_err(|e| Error::invalid(format!("config: {e}")))?;
        cfg.validate()?;
        Ok(cfg)
    }

    /// Fully resolved config as pretty JSON, newline-terminated.
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("config serializes");
        s.push('\n');
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn base() -> ExperimentConfig {
        ExperimentConfig {
            n: 10,
            m: 20,
            lb_fraction: 0.0,
            rewires_per_round: 0,
            rounds: 3,
            num_destinations: 2,
            round_period_s: 900,
            seed: 1,
        }
    }

    #[test]
    fn defaults_are_applied() {
        let cfg = ExperimentConfig::from_json(
            r#"{"n":10,"m":20,"rounds":3,"num_destinations":2,"seed":1}"#,
        )
        .unwrap();
        assert_eq!(cfg.lb_fraction, 0.25);
        assert_eq!(cfg.rewires_per_round, 1);
        assert_eq!(cfg.round_period_s, 900);
    }

    #[test]
    fn unknown_keys_are_rejected() {
        let err = ExperimentConfig::from_json(
            r#"{"n":10,"m":20,"rounds":3,"num_destinations":2,"seed":1,"typo":5}"#,
        )
        .unwrap_err();
        assert!(err.to_string().contains("typo"), "{err}");
    }

    #[test]
    fn missing_required_field_is_rejected() {
        let err =
            ExperimentConfig::from_json(r#"{"n":10,"m":20,"rounds":3,"seed":1}"#).unwrap_err();
        assert!(err.to_string().contains("num_destinations"), "{err}");
    }

    #[test]
    fn bounds_are_checked_per_field() {
        let mut cfg = base();
        cfg.num_destinations = 10;
        let err = cfg.validate().unwrap_err();
        assert!(err.to_string().contains("num_destinations"), "{err}");

        let mut cfg = base();
        cfg.m = 5;
        assert!(cfg.validate().unwrap_err().to_string().contains("m:"));

        let mut cfg = base();
        cfg.lb_fraction = 1.01;
        assert!(cfg
            .validate()
            .unwrap_err()
            .to_string()
            .contains("lb_fraction"));

        let mut cfg = base();
        cfg.rounds = 0;
        assert!(cfg.validate().unwrap_err().to_string().contains("rounds"));
    }

    #[test]
    fn json_round_trip_is_stable() {
        let cfg = base();
        let text = cfg.to_json();
        let back = ExperimentConfig::from_json(&text).unwrap();
        assert_eq!(cfg, back);
        assert_eq!(text, back.to_json());
    }
}
