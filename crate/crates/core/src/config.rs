//! Flat `key=value` run configuration.
//!
//! Resolution order is defaults, then the config file, then command-line
//! overrides. Lines starting with `#` (after optional whitespace) and blank
//! lines are ignored; a `#` after a value starts a trailing comment.

use std::fmt::Write as _;
use std::path::PathBuf;

use crate::error::{Error, Result};
use crate::experiments::{linspace, SweepConfig};
use crate::measures::{BdmOptions, Boundary};
use crate::network::{RbnParams, WiringDist};
use crate::perturbation::{PerturbationMode, PerturbationOptions, Removal, DEFAULT_BAND_TOLERANCE};
use crate::transition::{PrestigeIteration, PrestigeOptions, DEFAULT_MAX_NODES};
use crate::turing::{DEFAULT_STEP_CAP, MAX_STATES};

/// Every accepted key, in manifest order.
pub const KEYS: &[&str] = &[
    "n_nodes",
    "in_degrees",
    "bias",
    "p_min",
    "p_max",
    "p_points",
    "steps",
    "samples",
    "master_seed",
    "wiring",
    "shared_wiring",
    "shared_initial",
    "block_side",
    "boundary",
    "network",
    "ctm_table",
    "ctm_states",
    "step_cap",
    "max_nodes",
    "mode",
    "count",
    "removal",
    "band_tolerance",
    "prestige",
    "prestige_tol",
    "prestige_max_iter",
];

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub n_nodes: usize,
    pub in_degrees: Vec<usize>,
    pub bias: f64,
    pub p_min: f64,
    pub p_max: f64,
    pub p_points: usize,
    pub steps: usize,
    pub samples: usize,
    pub master_seed: u64,
    pub wiring: WiringDist,
    pub shared_wiring: bool,
    pub shared_initial: bool,
    pub block_side: usize,
    pub boundary: Boundary,
    /// Network fixture file; a random network is drawn when unset.
    pub network: Option<PathBuf>,
    /// CTM table file, square or string (strings are expanded to squares);
    /// generated from `ctm_states` when unset.
    pub ctm_table: Option<PathBuf>,
    pub ctm_states: usize,
    pub step_cap: usize,
    pub max_nodes: usize,
    pub mode: PerturbationMode,
    pub count: usize,
    pub removal: Removal,
    pub band_tolerance: f64,
    pub prestige: PrestigeIteration,
    pub prestige_tol: f64,
    pub prestige_max_iter: usize,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            n_nodes: 500,
            in_degrees: vec![5],
            bias: 0.5,
            p_min: 0.0,
            p_max: 0.5,
            p_points: 41,
            steps: 250,
            samples: 10,
            master_seed: 1,
            wiring: WiringDist::Uniform,
            shared_wiring: true,
            shared_initial: true,
            block_side: 4,
            boundary: Boundary::Ignore,
            network: None,
            ctm_table: None,
            ctm_states: MAX_STATES,
            step_cap: DEFAULT_STEP_CAP,
            max_nodes: DEFAULT_MAX_NODES,
            mode: PerturbationMode::MostRelevant,
            count: 20,
            removal: Removal::Delete,
            band_tolerance: DEFAULT_BAND_TOLERANCE,
            prestige: PrestigeIteration::Plain,
            prestige_tol: 1e-10,
            prestige_max_iter: 1000,
        }
    }
}

fn bad(key: &str, line: usize, reason: impl Into<String>) -> Error {
    Error::Config {
        key: key.to_string(),
        line,
        reason: reason.into(),
    }
}

fn parse_num<T: std::str::FromStr>(key: &str, line: usize, value: &str) -> Result<T> {
    value
        .parse()
        .map_err(|_| bad(key, line, format!("expected {}, got {value:?}", std::any::type_name::<T>())))
}

fn parse_prob(key: &str, line: usize, value: &str) -> Result<f64> {
    let v: f64 = parse_num(key, line, value)?;
    if !(0.0..=1.0).contains(&v) {
        return Err(bad(key, line, format!("{v} is outside [0, 1]")));
    }
    Ok(v)
}

fn parse_positive(key: &str, line: usize, value: &str) -> Result<usize> {
    let v: usize = parse_num(key, line, value)?;
    if v == 0 {
        return Err(bad(key, line, "must be at least 1"));
    }
    Ok(v)
}

fn parse_bool(key: &str, line: usize, value: &str) -> Result<bool> {
    match value {
        "true" | "yes" | "1" => Ok(true),
        "false" | "no" | "0" => Ok(false),
        _ => Err(bad(key, line, format!("expected true|false, got {value:?}"))),
    }
}

fn parse_wiring(line: usize, value: &str) -> Result<WiringDist> {
    match value.split_once(':') {
        None if value == "uniform" => Ok(WiringDist::Uniform),
        None if value == "binomial" => Ok(WiringDist::Binomial { success_prob: 0.5 }),
        Some(("binomial", p)) => Ok(WiringDist::Binomial {
            success_prob: parse_prob("wiring", line, p)?,
        }),
        _ => Err(bad("wiring", line, format!("expected uniform|binomial[:P], got {value:?}"))),
    }
}

fn fmt_wiring(w: WiringDist) -> String {
    match w {
        WiringDist::Uniform => "uniform".into(),
        WiringDist::Binomial { success_prob } => format!("binomial:{success_prob}"),
    }
}

impl RunConfig {
    /// Applies one `key=value` assignment. `line` is the config-file line, or
    /// 0 for command-line overrides.
    pub fn set(&mut self, key: &str, value: &str, line: usize) -> Result<()> {
        let value = value.trim();
        match key {
            "n_nodes" => self.n_nodes = parse_positive(key, line, value)?,
            "in_degree" | "in_degrees" => {
                let ks = value
                    .split(',')
                    .map(|s| parse_positive(key, line, s.trim()))
                    .collect::<Result<Vec<_>>>()?;
                self.in_degrees = ks;
            }
            "bias" => self.bias = parse_prob(key, line, value)?,
            "p_min" => self.p_min = parse_prob(key, line, value)?,
            "p_max" => self.p_max = parse_prob(key, line, value)?,
            "p_points" => {
                self.p_points = parse_num(key, line, value)?;
                if self.p_points < 2 {
                    return Err(bad(key, line, "need at least 2 grid points"));
                }
            }
            "steps" => self.steps = parse_positive(key, line, value)?,
            "samples" => self.samples = parse_positive(key, line, value)?,
            "master_seed" | "seed" => self.master_seed = parse_num(key, line, value)?,
            "wiring" => self.wiring = parse_wiring(line, value)?,
            "shared_wiring" => self.shared_wiring = parse_bool(key, line, value)?,
            "shared_initial" | "shared_initial_state" => self.shared_initial = parse_bool(key, line, value)?,
            "block_side" => self.block_side = parse_positive(key, line, value)?,
            "boundary" => self.boundary = value.parse().map_err(|e: Error| bad(key, line, e.to_string()))?,
            "network" => self.network = (!value.is_empty()).then(|| PathBuf::from(value)),
            "ctm_table" => self.ctm_table = (!value.is_empty()).then(|| PathBuf::from(value)),
            "ctm_states" => {
                let n = parse_positive(key, line, value)?;
                if n > MAX_STATES {
                    return Err(bad(key, line, format!("at most {MAX_STATES} states supported")));
                }
                self.ctm_states = n;
            }
            "step_cap" => self.step_cap = parse_positive(key, line, value)?,
            "max_nodes" => self.max_nodes = parse_positive(key, line, value)?,
            "mode" => self.mode = value.parse().map_err(|e: Error| bad(key, line, e.to_string()))?,
            "count" => self.count = parse_num(key, line, value)?,
            "removal" => self.removal = value.parse().map_err(|e: Error| bad(key, line, e.to_string()))?,
            "band_tolerance" => {
                let t: f64 = parse_num(key, line, value)?;
                if !(0.0..1.0).contains(&t) {
                    return Err(bad(key, line, format!("{t} is outside [0, 1)")));
                }
                self.band_tolerance = t;
            }
            "prestige" => {
                self.prestige = match value {
                    "plain" => PrestigeIteration::Plain,
                    "lazy" => PrestigeIteration::Lazy,
                    _ => return Err(bad(key, line, format!("expected plain|lazy, got {value:?}"))),
                }
            }
            "prestige_tol" => {
                let t: f64 = parse_num(key, line, value)?;
                if !(t > 0.0 && t.is_finite()) {
                    return Err(bad(key, line, "must be positive"));
                }
                self.prestige_tol = t;
            }
            "prestige_max_iter" => self.prestige_max_iter = parse_positive(key, line, value)?,
            _ => return Err(bad(key, line, "unknown key")),
        }
        Ok(())
    }

    /// Applies a `key=value` override string.
    pub fn apply_override(&mut self, assignment: &str) -> Result<()> {
        let (key, value) = assignment
            .split_once('=')
            .ok_or_else(|| bad(assignment.trim(), 0, "expected key=value"))?;
        self.set(key.trim(), value, 0)
    }

    /// Checks constraints that span several keys.
    pub fn validate(&self) -> Result<()> {
        if self.p_min > self.p_max {
            return Err(bad("p_min", 0, format!("p_min {} exceeds p_max {}", self.p_min, self.p_max)));
        }
        for &k in &self.in_degrees {
            self.rbn_params(k)
                .validate()
                .map_err(|e| bad("in_degrees", 0, e.to_string()))?;
        }
        Ok(())
    }

    pub fn rbn_params(&self, in_degree: usize) -> RbnParams {
        RbnParams::new(self.n_nodes, in_degree, self.bias).with_wiring(self.wiring)
    }

    pub fn p_grid(&self) -> Result<Vec<f64>> {
        linspace(self.p_min, self.p_max, self.p_points)
    }

    pub fn bdm_options(&self) -> BdmOptions {
        BdmOptions {
            block_side: self.block_side,
            boundary: self.boundary,
        }
    }

    pub fn prestige_options(&self) -> PrestigeOptions {
        PrestigeOptions {
            tol: self.prestige_tol,
            max_iter: self.prestige_max_iter,
            iteration: self.prestige,
        }
    }

    pub fn perturbation_options(&self) -> PerturbationOptions {
        PerturbationOptions {
            count: self.count,
            removal: self.removal,
            band_tolerance: self.band_tolerance,
            bdm: self.bdm_options(),
            prestige: self.prestige_options(),
        }
    }

    pub fn sweep_config(&self) -> Result<SweepConfig> {
        Ok(SweepConfig {
            n_nodes: self.n_nodes,
            in_degrees: self.in_degrees.clone(),
            p_grid: self.p_grid()?,
            steps: self.steps,
            master_seed: self.master_seed,
            samples: self.samples,
            wiring_dist: self.wiring,
            shared_wiring: self.shared_wiring,
            shared_initial: self.shared_initial,
            bdm: self.bdm_options(),
        })
    }

    /// Every key with its resolved value, one `key=value` per line, in
    /// [`KEYS`] order. Parsing the result gives back `self`.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for &key in KEYS {
            let value = match key {
                "n_nodes" => self.n_nodes.to_string(),
                "in_degrees" => self.in_degrees.iter().map(|k| k.to_string()).collect::<Vec<_>>().join(","),
                "bias" => self.bias.to_string(),
                "p_min" => self.p_min.to_string(),
                "p_max" => self.p_max.to_string(),
                "p_points" => self.p_points.to_string(),
                "steps" => self.steps.to_string(),
                "samples" => self.samples.to_string(),
                "master_seed" => self.master_seed.to_string(),
                "wiring" => fmt_wiring(self.wiring),
                "shared_wiring" => self.shared_wiring.to_string(),
                "shared_initial" => self.shared_initial.to_string(),
                "block_side" => self.block_side.to_string(),
                "boundary" => self.boundary.to_string(),
                "network" => self.network.as_ref().map(|p| p.display().to_string()).unwrap_or_default(),
                "ctm_table" => self.ctm_table.as_ref().map(|p| p.display().to_string()).unwrap_or_default(),
                "ctm_states" => self.ctm_states.to_string(),
                "step_cap" => self.step_cap.to_string(),
                "max_nodes" => self.max_nodes.to_string(),
                "mode" => match self.mode {
                    PerturbationMode::MostRelevant => "most".into(),
                    PerturbationMode::LeastRelevant => "least".into(),
                },
                "count" => self.count.to_string(),
                "removal" => self.removal.to_string(),
                "band_tolerance" => self.band_tolerance.to_string(),
                "prestige" => match self.prestige {
                    PrestigeIteration::Plain => "plain".into(),
                    PrestigeIteration::Lazy => "lazy".into(),
                },
                "prestige_tol" => self.prestige_tol.to_string(),
                "prestige_max_iter" => self.prestige_max_iter.to_string(),
                _ => unreachable!("key list and formatter out of sync"),
            };
            let _ = writeln!(out, "{key}={value}");
        }
        out
    }
}

/// Applies every assignment in `text` on top of `base`.
pub fn parse_config_onto(base: RunConfig, text: &str) -> Result<RunConfig> {
    let mut cfg = base;
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let content = raw.split_once('#').map_or(raw, |(before, _)| before).trim();
        if content.is_empty() {
            continue;
        }
        let (key, value) = content.split_once('=').ok_or_else(|| Error::Parse {
            line,
            reason: format!("expected key=value, got {content:?}"),
        })?;
        cfg.set(key.trim(), value, line)?;
    }
    cfg.validate()?;
    Ok(cfg)
}

/// Parses a config file over the defaults.
pub fn parse_config(text: &str) -> Result<RunConfig> {
    parse_config_onto(RunConfig::default(), text)
}
