//! Parameter sweeps over the truth-table bias `p`.
//!
//! Every random object in a sweep comes from its own derived stream keyed by
//! (purpose, in-degree, grid index, sample index), so results are
//! independent of evaluation order and of which other points are computed.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::measures::{randomness_report_with, BdmOptions, CtmTable, RandomnessReport};
use crate::network::{
    generate_truth_tables, generate_wiring, theoretical_critical_p, BooleanNetwork, NetworkState, RbnParams,
    WiringDist,
};
use crate::rng::derive_stream;

const TAG_WIRING: u64 = 1;
const TAG_INITIAL: u64 = 2;
const TAG_TABLES: u64 = 3;

fn stream_id(tag: u64, k: usize, p_index: usize, sample: usize) -> u64 {
    (tag << 60) | ((k as u64 & 0xFFF) << 48) | ((p_index as u64 & 0xFF_FFFF) << 24) | (sample as u64 & 0xFF_FFFF)
}

/// `points` evenly spaced values from `min` to `max` inclusive.
pub fn linspace(min: f64, max: f64, points: usize) -> Result<Vec<f64>> {
    if points < 2 {
        return Err(Error::param("p_points", "need at least 2 grid points"));
    }
    if !(0.0..=1.0).contains(&min) || !(0.0..=1.0).contains(&max) || min > max {
        return Err(Error::param("p_min", format!("grid [{min}, {max}] must lie within [0, 1]")));
    }
    let step = (max - min) / (points - 1) as f64;
    Ok((0..points)
        .map(|i| if i == points - 1 { max } else { min + step * i as f64 })
        .collect())
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepConfig {
    pub n_nodes: usize,
    pub in_degrees: Vec<usize>,
    pub p_grid: Vec<f64>,
    pub steps: usize,
    pub master_seed: u64,
    pub samples: usize,
    pub wiring_dist: WiringDist,
    /// One wiring per in-degree, reused at every grid point and sample.
    pub shared_wiring: bool,
    /// One initial state reused everywhere.
    pub shared_initial: bool,
    pub bdm: BdmOptions,
}

impl Default for SweepConfig {
    fn default() -> Self {
        Self {
            n_nodes: 500,
            in_degrees: vec![5],
            p_grid: linspace(0.0, 0.5, 41).expect("static grid"),
            steps: 250,
            master_seed: 1,
            samples: 10,
            wiring_dist: WiringDist::Uniform,
            shared_wiring: true,
            shared_initial: true,
            bdm: BdmOptions::default(),
        }
    }
}

impl SweepConfig {
    pub fn validate(&self) -> Result<()> {
        if self.in_degrees.is_empty() {
            return Err(Error::param("in_degree", "at least one in-degree required"));
        }
        for &k in &self.in_degrees {
            RbnParams::new(self.n_nodes, k, 0.5)
                .with_wiring(self.wiring_dist)
                .validate()?;
        }
        if self.p_grid.len() < 2 {
            return Err(Error::param("p_points", "need at least 2 grid points"));
        }
        if let Some(p) = self.p_grid.iter().find(|p| !(0.0..=1.0).contains(*p)) {
            return Err(Error::param("p_grid", format!("{p} is outside [0, 1]")));
        }
        if self.samples == 0 {
            return Err(Error::param("samples", "must be at least 1"));
        }
        if self.steps == 0 {
            return Err(Error::param("steps", "must be at least 1"));
        }
        Ok(())
    }
}

/// Measures for one network at one grid point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepPoint {
    pub k: usize,
    pub p_index: usize,
    pub p: f64,
    pub sample: usize,
    pub truth_tables: RandomnessReport,
    pub diagram: RandomnessReport,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeanPoint {
    pub p: f64,
    pub truth_tables: RandomnessReport,
    pub diagram: RandomnessReport,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepSeries {
    pub k: usize,
    pub samples: usize,
    /// Grid-major, sample-minor.
    pub points: Vec<SweepPoint>,
    /// One per grid point, over exactly `samples` runs.
    pub means: Vec<MeanPoint>,
}

impl SweepSeries {
    pub fn grid(&self) -> Vec<f64> {
        self.means.iter().map(|m| m.p).collect()
    }

    pub fn mean_diagram_bdm(&self) -> Vec<f64> {
        self.means.iter().map(|m| m.diagram.bdm).collect()
    }

    pub fn mean_diagram_entropy(&self) -> Vec<f64> {
        self.means.iter().map(|m| m.diagram.entropy).collect()
    }
}

fn mean_report(reports: impl Iterator<Item = RandomnessReport>) -> RandomnessReport {
    let mut n = 0usize;
    let mut acc = RandomnessReport { entropy: 0.0, lzw_rate: 0.0, bdm: 0.0 };
    for r in reports {
        n += 1;
        acc.entropy += r.entropy;
        acc.lzw_rate += r.lzw_rate;
        acc.bdm += r.bdm;
    }
    let n = n as f64;
    RandomnessReport {
        entropy: acc.entropy / n,
        lzw_rate: acc.lzw_rate / n,
        bdm: acc.bdm / n,
    }
}

/// Runs every (grid point, sample) network for in-degree `k`.
pub fn sweep_in_degree(config: &SweepConfig, k: usize, table: &CtmTable, samples: usize) -> Result<SweepSeries> {
    config.validate()?;
    if samples == 0 {
        return Err(Error::param("samples", "must be at least 1"));
    }
    let n = config.n_nodes;
    let base = RbnParams::new(n, k, 0.5).with_wiring(config.wiring_dist);
    base.validate()?;
    let shared_wiring = generate_wiring(&base, &mut derive_stream(config.master_seed, stream_id(TAG_WIRING, k, 0, 0)))?;
    let shared_initial = NetworkState::random(n, &mut derive_stream(config.master_seed, stream_id(TAG_INITIAL, 0, 0, 0)));

    let tasks: Vec<(usize, usize)> = (0..config.p_grid.len())
        .flat_map(|i| (0..samples).map(move |s| (i, s)))
        .collect();
    let points = tasks
        .par_iter()
        .map(|&(i, sample)| {
            let p = config.p_grid[i];
            let params = RbnParams { bias: p, ..base };
            let wiring = if config.shared_wiring {
                shared_wiring.clone()
            } else {
                generate_wiring(&params, &mut derive_stream(config.master_seed, stream_id(TAG_WIRING, k, i, sample)))?
            };
            let initial = if config.shared_initial {
                shared_initial.clone()
            } else {
                NetworkState::random(n, &mut derive_stream(config.master_seed, stream_id(TAG_INITIAL, k, i, sample)))
            };
            let tables =
                generate_truth_tables(&params, &mut derive_stream(config.master_seed, stream_id(TAG_TABLES, k, i, sample)))?;
            let net = BooleanNetwork::new(params, wiring, tables)?;
            let diagram = net.evolve(&initial, config.steps)?;
            Ok(SweepPoint {
                k,
                p_index: i,
                p,
                sample,
                truth_tables: randomness_report_with(&net.truth_tables.to_matrix(), table, config.bdm)?,
                diagram: randomness_report_with(&diagram.to_matrix(), table, config.bdm)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;

    let means = points
        .chunks(samples)
        .map(|chunk| MeanPoint {
            p: chunk[0].p,
            truth_tables: mean_report(chunk.iter().map(|pt| pt.truth_tables)),
            diagram: mean_report(chunk.iter().map(|pt| pt.diagram)),
        })
        .collect();
    Ok(SweepSeries { k, samples, points, means })
}

/// Single-sample sweep for the first configured in-degree.
pub fn sweep_p(config: &SweepConfig, table: &CtmTable) -> Result<SweepSeries> {
    config.validate()?;
    sweep_in_degree(config, config.in_degrees[0], table, 1)
}

/// `config.samples` independent truth-table draws per grid point, averaged.
pub fn averaged_sweep(config: &SweepConfig, table: &CtmTable) -> Result<SweepSeries> {
    config.validate()?;
    sweep_in_degree(config, config.in_degrees[0], table, config.samples)
}

/// One averaged series per configured in-degree, each with its own wiring.
pub fn sweep_per_k(config: &SweepConfig, table: &CtmTable) -> Result<Vec<SweepSeries>> {
    config.validate()?;
    config
        .in_degrees
        .iter()
        .map(|&k| sweep_in_degree(config, k, table, config.samples))
        .collect()
}

pub const DETECTOR: &str = "trailing-ma3-max-forward-difference";

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CriticalityResult {
    pub k: usize,
    pub detected_p: f64,
    /// Low root of `2kp(1-p) = 1`; absent for `k < 2`.
    pub theoretical_p: Option<f64>,
    pub method: &'static str,
}

/// Index of the steepest rise in `values`.
///
/// The series is smoothed with a trailing 3-point moving average (shorter
/// windows at the start); the result is the `i` maximizing
/// `smooth[i + 1] - smooth[i]`, smallest `i` on ties. For a clean step whose
/// last low value sits at `i`, that is `i` itself.
pub fn steepest_rise(values: &[f64]) -> Result<usize> {
    if values.len() < 3 {
        return Err(Error::Degenerate(format!("{} points; need at least 3", values.len())));
    }
    let smooth: Vec<f64> = (0..values.len())
        .map(|i| {
            let w = &values[i.saturating_sub(2)..=i];
            w.iter().sum::<f64>() / w.len() as f64
        })
        .collect();
    let mut best = 0;
    let mut best_diff = f64::NEG_INFINITY;
    for i in 0..smooth.len() - 1 {
        let d = smooth[i + 1] - smooth[i];
        if d > best_diff {
            best = i;
            best_diff = d;
        }
    }
    if best_diff.is_nan() || best_diff <= 0.0 {
        return Err(Error::Degenerate("series never rises".into()));
    }
    Ok(best)
}

/// Critical bias of a series: the grid point of the steepest rise in mean
/// diagram BDM.
pub fn detect_critical_p(series: &SweepSeries) -> Result<CriticalityResult> {
    let i = steepest_rise(&series.mean_diagram_bdm())?;
    Ok(CriticalityResult {
        k: series.k,
        detected_p: series.means[i].p,
        theoretical_p: theoretical_critical_p(series.k).ok().map(|(lo, _)| lo),
        method: DETECTOR,
    })
}

/// Mean of `values` over grid points above `threshold` divided by the mean
/// over points below it.
pub fn jump_ratio(grid: &[f64], values: &[f64], threshold: f64) -> Result<f64> {
    let mean = |pred: &dyn Fn(f64) -> bool| {
        let v: Vec<f64> = grid.iter().zip(values).filter(|(p, _)| pred(**p)).map(|(_, v)| *v).collect();
        (!v.is_empty()).then(|| v.iter().sum::<f64>() / v.len() as f64)
    };
    let before = mean(&|p| p < threshold).ok_or_else(|| Error::Degenerate("no points below threshold".into()))?;
    let after = mean(&|p| p > threshold).ok_or_else(|| Error::Degenerate("no points above threshold".into()))?;
    if before <= 0.0 {
        return Err(Error::Degenerate("pre-threshold mean is not positive".into()));
    }
    Ok(after / before)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_spacing() {
        let g = linspace(0.0, 0.5, 41).unwrap();
        assert_eq!(g.len(), 41);
        assert!((g[1] - 0.0125).abs() < 1e-15);
        assert_eq!(g[40], 0.5);
        assert!(linspace(0.0, 0.5, 1).is_err());
        assert!(linspace(0.2, 1.5, 3).is_err());
    }

    #[test]
    fn step_detected_at_last_low_point() {
        let grid = linspace(0.0, 0.5, 41).unwrap();
        let values: Vec<f64> = (0..41).map(|i| if i <= 17 { 1.0 } else { 5.0 }).collect();
        assert_eq!(steepest_rise(&values).unwrap(), 17);
        let series = SweepSeries {
            k: 5,
            samples: 1,
            points: vec![],
            means: grid
                .iter()
                .zip(&values)
                .map(|(&p, &v)| {
                    let r = RandomnessReport { entropy: 0.5, lzw_rate: 0.5, bdm: v };
                    MeanPoint { p, truth_tables: r, diagram: r }
                })
                .collect(),
        };
        let c = detect_critical_p(&series).unwrap();
        assert_eq!(c.detected_p, grid[17]);
        assert!((c.theoretical_p.unwrap() - 0.1127).abs() < 1e-4);
    }

    #[test]
    fn flat_series_is_degenerate() {
        assert!(matches!(steepest_rise(&[3.0; 10]), Err(Error::Degenerate(_))));
        assert!(steepest_rise(&[1.0, 2.0]).is_err());
        // ties go to the smaller index
        assert_eq!(steepest_rise(&[0.0, 0.0, 0.0, 3.0, 3.0, 3.0, 6.0, 6.0, 6.0]).unwrap(), 2);
    }

    #[test]
    fn stream_ids_are_distinct() {
        let mut ids = std::collections::HashSet::new();
        for tag in [TAG_WIRING, TAG_INITIAL, TAG_TABLES] {
            for k in 1..6 {
                for i in 0..81 {
                    for s in 0..10 {
                        assert!(ids.insert(stream_id(tag, k, i, s)));
                    }
                }
            }
        }
    }

    #[test]
    fn jump_ratio_basics() {
        let grid = [0.0, 0.1, 0.2, 0.3];
        assert_eq!(jump_ratio(&grid, &[1.0, 1.0, 4.0, 6.0], 0.15).unwrap(), 5.0);
        assert!(jump_ratio(&grid, &[1.0; 4], 0.5).is_err());
    }

    #[test]
    fn invalid_configs() {
        let bad = SweepConfig { samples: 0, ..Default::default() };
        assert!(bad.validate().is_err());
        let bad = SweepConfig { p_grid: vec![0.1, 1.2], ..Default::default() };
        assert!(bad.validate().is_err());
        let bad = SweepConfig { in_degrees: vec![], ..Default::default() };
        assert!(bad.validate().is_err());
    }
}
