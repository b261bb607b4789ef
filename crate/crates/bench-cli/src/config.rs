//! Experiment configuration: which learner runs on which data, with which
//! schedule, and where the results go. Configs are plain JSON and are
//! validated eagerly so a bad batch fails before any work starts.

use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use barrier_omd::omd::{eg_schedule, lb_schedule, EgEtaVariant};
use barrier_omd::ops::lbftrl_default_eta;
use serde::{Deserialize, Serialize};

use crate::data::{MarketKind, PovmStyle, TrueStateKind};

/// Which loss stream the experiment plays over.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Problem {
    /// Portfolio selection on the simplex: losses `-ln <a_t, x>`.
    Ops,
    /// Density-matrix learning: losses `-ln tr(A_t rho)`.
    Quantum,
}

/// Which learner plays the stream.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Algorithm {
    /// Smoothed exponentiated gradient (entropy mirror map).
    Eg,
    /// Online mirror descent with the log-barrier mirror map.
    LbOmd,
    /// Follow-the-regularized-leader with the log-barrier regularizer.
    LbFtrl,
    /// Online mirror descent with the log-determinant mirror map.
    QLbOmd,
}

impl Algorithm {
    pub fn problem(self) -> Problem {
        match self {
            Algorithm::Eg | Algorithm::LbOmd | Algorithm::LbFtrl => Problem::Ops,
            Algorithm::QLbOmd => Problem::Quantum,
        }
    }
}

/// Where the loss stream comes from.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "source", rename_all = "kebab-case")]
pub enum DataSource {
    /// Synthesize a market with a named seeded generator.
    Market { kind: MarketKind },
    /// Read price relatives from a CSV file with header `a1,...,ad`.
    MarketFile { path: PathBuf },
    /// Synthesize a measurement stream: project a true state onto a seeded
    /// POVM each round and keep the observed element.
    Quantum { true_state: TrueStateKind, povm: PovmStyle },
    /// Read observables from a JSON file (row-major `[re, im]` pairs).
    ObservablesFile { path: PathBuf },
}

impl DataSource {
    pub fn problem(&self) -> Problem {
        match self {
            DataSource::Market { .. } | DataSource::MarketFile { .. } => Problem::Ops,
            DataSource::Quantum { .. } | DataSource::ObservablesFile { .. } => Problem::Quantum,
        }
    }
}

fn default_true() -> bool {
    true
}

/// One experiment: learner, stream, schedule overrides, outputs.
///
/// When `eta` is absent the horizon-tuned schedule for the algorithm is
/// used. For EG, `gamma` may accompany `eta` (overriding both knobs) but
/// not replace it: the mixing weight only makes sense relative to a step
/// size, so `gamma` alone is rejected.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub problem: Problem,
    pub algorithm: Algorithm,
    /// Number of assets / Hilbert-space dimension.
    pub d: usize,
    /// Horizon (number of rounds).
    pub t: usize,
    #[serde(default)]
    pub seed: u64,
    pub data: DataSource,
    /// Step-size override; default is the horizon-tuned schedule.
    #[serde(default)]
    pub eta: Option<f64>,
    /// EG mixing-weight override; requires `eta`.
    #[serde(default)]
    pub gamma: Option<f64>,
    /// Which horizon-tuned EG step size to use (ignored elsewhere).
    #[serde(default)]
    pub eta_variant: EgEtaVariant,
    /// Duality-gap tolerance for the offline comparator. Defaults to 1e-6
    /// for portfolios and to a ladder starting at 1e-3 for density
    /// matrices (see the run module).
    #[serde(default)]
    pub comparator_tol: Option<f64>,
    /// Record per-round step lengths in the results CSV.
    #[serde(default = "default_true")]
    pub log_steps: bool,
    /// Use compensated summation for cumulative losses.
    #[serde(default)]
    pub kahan: bool,
    /// Per-round results CSV (`t,loss,cum_loss,cmp_cum_loss,regret,r_t`).
    #[serde(default)]
    pub output_csv: Option<PathBuf>,
    /// Run-summary JSON.
    #[serde(default)]
    pub output_json: Option<PathBuf>,
}

impl ExperimentConfig {
    /// Reads and validates a JSON config file.
    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path)
            .with_context(|| format!("reading config {}", path.display()))?;
        let cfg: ExperimentConfig = serde_json::from_str(&text)
            .with_context(|| format!("parsing config {}", path.display()))?;
        cfg.validate().with_context(|| format!("invalid config {}", path.display()))?;
        Ok(cfg)
    }

    /// Checks internal consistency and that the schedule is defined for
    /// `(t, d)`, so failures surface before any data is generated.
    pub fn validate(&self) -> Result<()> {
        if self.d < 2 {
            bail!("dimension must be >= 2, got {}", self.d);
        }
        if self.t == 0 {
            bail!("horizon must be >= 1");
        }
        if self.algorithm.problem() != self.problem {
            bail!(
                "algorithm {:?} plays the {:?} problem, config says {:?}",
                self.algorithm,
                self.algorithm.problem(),
                self.problem
            );
        }
        if self.data.problem() != self.problem {
            bail!("data source supplies a {:?} stream, config says {:?}", self.data.problem(), self.problem);
        }
        if let Some(tol) = self.comparator_tol {
            if !(tol > 0.0) || !tol.is_finite() {
                bail!("comparator tolerance must be positive and finite, got {tol}");
            }
        }
        if let Some(eta) = self.eta {
            if !(eta > 0.0) || !eta.is_finite() {
                bail!("step size must be positive and finite, got {eta}");
            }
        }
        match self.algorithm {
            Algorithm::Eg => match (self.gamma, self.eta) {
                (Some(_), None) => bail!("gamma override requires eta"),
                (gamma, eta) => {
                    // Resolve exactly like the run module will, so bad
                    // combinations fail here.
                    let sched = match eta {
                        None => eg_schedule(self.t, self.d, self.eta_variant)?,
                        Some(e) => {
                            let g = match gamma {
                                Some(g) => g,
                                None => eg_schedule(self.t, self.d, self.eta_variant)?.gamma,
                            };
                            barrier_omd::omd::EgSchedule { gamma: g, eta: e }
                        }
                    };
                    if !(sched.gamma > 0.0 && sched.gamma < 1.0) {
                        bail!("EG mixing weight must lie in (0, 1), got {}", sched.gamma);
                    }
                    if !(sched.eta > 0.0 && sched.eta <= sched.gamma / self.d as f64) {
                        bail!(
                            "EG step size must lie in (0, gamma/d] = (0, {}], got {}",
                            sched.gamma / self.d as f64,
                            sched.eta
                        );
                    }
                }
            },
            Algorithm::LbOmd | Algorithm::QLbOmd => {
                if self.gamma.is_some() {
                    bail!("gamma only applies to EG");
                }
                match self.eta {
                    None => {
                        lb_schedule(self.t, self.d)?;
                    }
                    Some(e) => {
                        if !(e < 1.0) {
                            bail!("log-barrier OMD needs eta < 1 for a finite step bound, got {e}");
                        }
                    }
                }
            }
            Algorithm::LbFtrl => {
                if self.gamma.is_some() {
                    bail!("gamma only applies to EG");
                }
                match self.eta {
                    None => {
                        lbftrl_default_eta(self.t, self.d)?;
                    }
                    Some(e) => {
                        if !(e <= 0.25) {
                            bail!("log-barrier FTRL needs eta in (0, 1/4], got {e}");
                        }
                    }
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn base() -> ExperimentConfig {
        ExperimentConfig {
            problem: Problem::Ops,
            algorithm: Algorithm::LbOmd,
            d: 5,
            t: 200,
            seed: 1,
            data: DataSource::Market { kind: MarketKind::IidUniform },
            eta: None,
            gamma: None,
            eta_variant: EgEtaVariant::default(),
            comparator_tol: None,
            log_steps: true,
            kahan: false,
            output_csv: None,
            output_json: None,
        }
    }

    #[test]
    fn valid_default_passes() {
        base().validate().unwrap();
    }

    #[test]
    fn algorithm_problem_mismatch_rejected() {
        let mut cfg = base();
        cfg.algorithm = Algorithm::QLbOmd;
        assert!(cfg.validate().is_err());
    }

    #[test]
    fn data_problem_mismatch_rejected() {
        let mut cfg = base();
        cfg.data = DataSource::Quantum {
            true_state: TrueStateKind::MaximallyMixed,
            povm: PovmStyle::RandomProjective,
        };
        assert!(cfg.validate().is_err());
    }

    #[test]
    fn gamma_without_eta_rejected() {
        let mut cfg = base();
        cfg.algorithm = Algorithm::Eg;
        cfg.t = 2000;
        cfg.gamma = Some(0.2);
        let err = cfg.validate().unwrap_err();
        assert!(err.to_string().contains("requires eta"));
    }

    #[test]
    fn eg_eta_above_mixing_window_rejected() {
        let mut cfg = base();
        cfg.algorithm = Algorithm::Eg;
        cfg.t = 2000;
        cfg.gamma = Some(0.2);
        cfg.eta = Some(0.2);
        assert!(cfg.validate().is_err());
        cfg.eta = Some(0.2 / 5.0);
        cfg.validate().unwrap();
    }

    #[test]
    fn short_horizon_rejected_for_lb_schedule() {
        let mut cfg = base();
        cfg.t = 4;
        assert!(cfg.validate().is_err());
        cfg.eta = Some(0.3);
        cfg.validate().unwrap();
    }

    #[test]
    fn ftrl_eta_window() {
        let mut cfg = base();
        cfg.algorithm = Algorithm::LbFtrl;
        cfg.eta = Some(0.3);
        assert!(cfg.validate().is_err());
        cfg.eta = Some(0.25);
        cfg.validate().unwrap();
    }

    #[test]
    fn config_json_round_trip() {
        let mut cfg = base();
        cfg.algorithm = Algorithm::Eg;
        cfg.t = 2000;
        cfg.eta_variant = EgEtaVariant::SqrtDim;
        cfg.data = DataSource::Market { kind: MarketKind::KellyTwoAsset };
        let text = serde_json::to_string_pretty(&cfg).unwrap();
        assert!(text.contains("\"eg\""), "{text}");
        assert!(text.contains("kelly-two-asset"), "{text}");
        let back: ExperimentConfig = serde_json::from_str(&text).unwrap();
        back.validate().unwrap();
        assert_eq!(back.algorithm, Algorithm::Eg);
        assert_eq!(back.eta_variant, EgEtaVariant::SqrtDim);
    }

    #[test]
    fn unknown_field_rejected() {
        let text = r#"{
            "problem": "ops", "algorithm": "lb-omd", "d": 5, "t": 200,
            "data": { "source": "market", "kind": "iid-uniform" },
            "bogus": 3
        }"#;
        assert!(serde_json::from_str::<ExperimentConfig>(text).is_err());
    }
}
