use std::fs;
use std::path::{Path, PathBuf};

use rbnlab_core::config::parse_config_onto;
use rbnlab_core::experiments::{detect_critical_p, sweep_per_k, CriticalityResult, DETECTOR};
use rbnlab_core::io::{
    attractor_report, diagram_pbm, measures_csv, perturbation_csv, prestige_csv, run_manifest,
    successor_csv, summary_csv, sweep_csv, write_ctm_table, write_text,
};
use rbnlab_core::measures::{randomness_report_with, BlockShape};
use rbnlab_core::perturbation::perturbation_series;
use rbnlab_core::transition::{build_transition_diagram, find_attractors, prestige_centrality};
use rbnlab_core::turing::{build_frequency_distribution, ctm_from_frequency};
use rbnlab_core::{derive_stream, theoretical_critical_p, BooleanNetwork, CtmTable, Error, NetworkState, Result, RunConfig};

use crate::Common;

const NETWORK_STREAM: u64 = 0;
const INITIAL_STREAM: u64 = 1;

/// Node count used by the transition-graph subcommands unless configured.
const SMALL_NETWORK: usize = 10;

fn read_input(path: &Path, key: &str) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::Config {
        key: key.to_string(),
        line: 0,
        reason: format!("cannot read {}: {e}", path.display()),
    })
}

fn resolve(common: &Common, mut cfg: RunConfig, flags: &[(&str, String)]) -> Result<RunConfig> {
    if let Some(path) = &common.config {
        cfg = parse_config_onto(cfg, &read_input(path, "--config")?)?;
    }
    for (key, value) in flags {
        cfg.set(key, value, 0)?;
    }
    for o in &common.overrides {
        cfg.apply_override(o)?;
    }
    if let Some(seed) = common.seed {
        cfg.master_seed = seed;
    }
    cfg.validate()?;
    Ok(cfg)
}

fn start(common: &Common, subcommand: &str, cfg: &RunConfig) -> Result<()> {
    let manifest = run_manifest(subcommand, cfg);
    eprint!("{manifest}");
    write_text(&common.out.join("run-manifest"), &manifest)
}

fn network(cfg: &RunConfig) -> Result<BooleanNetwork> {
    match &cfg.network {
        Some(path) => BooleanNetwork::from_fixture(&read_input(path, "network")?),
        None => BooleanNetwork::random(
            cfg.rbn_params(cfg.in_degrees[0]),
            &mut derive_stream(cfg.master_seed, NETWORK_STREAM),
        ),
    }
}

fn square_table(cfg: &RunConfig) -> Result<CtmTable> {
    let table = match &cfg.ctm_table {
        Some(path) => CtmTable::from_text(&read_input(path, "ctm_table")?)?,
        None => {
            eprintln!("enumerating ({}, 2) Turing machines, step cap {}", cfg.ctm_states, cfg.step_cap);
            ctm_from_frequency(&build_frequency_distribution(cfg.ctm_states, cfg.step_cap)?)?
        }
    };
    match table.shape() {
        BlockShape::String { .. } => CtmTable::derive_square(&table, cfg.block_side),
        BlockShape::Square { .. } => Ok(table),
    }
}

fn small_defaults() -> RunConfig {
    RunConfig {
        n_nodes: SMALL_NETWORK,
        ..RunConfig::default()
    }
}

fn network_flag(network: Option<PathBuf>) -> Vec<(&'static str, String)> {
    network
        .map(|p| vec![("network", p.display().to_string())])
        .unwrap_or_default()
}

pub fn evolve(common: &Common, network_path: Option<PathBuf>) -> Result<()> {
    let cfg = resolve(common, RunConfig::default(), &network_flag(network_path))?;
    start(common, "evolve", &cfg)?;
    let net = network(&cfg)?;
    let table = square_table(&cfg)?;
    let initial = NetworkState::random(net.n_nodes(), &mut derive_stream(cfg.master_seed, INITIAL_STREAM));
    let diagram = net.evolve(&initial, cfg.steps)?;
    let opts = cfg.bdm_options();
    let rows = [
        ("truth_tables", randomness_report_with(&net.truth_tables.to_matrix(), &table, opts)?),
        ("diagram", randomness_report_with(&diagram.to_matrix(), &table, opts)?),
    ];
    write_text(&common.out.join("diagram.pbm"), &diagram_pbm(&diagram))?;
    write_text(&common.out.join("network.txt"), &net.to_fixture())?;
    write_text(&common.out.join("measures.csv"), &measures_csv(&rows))
}

pub fn sweep(common: &Common) -> Result<()> {
    let cfg = resolve(common, RunConfig::default(), &[])?;
    start(common, "sweep", &cfg)?;
    let table = square_table(&cfg)?;
    let series = sweep_per_k(&cfg.sweep_config()?, &table)?;
    let summary = series
        .iter()
        .map(|s| match detect_critical_p(s) {
            Ok(c) => Ok(c),
            Err(Error::Degenerate(reason)) => {
                eprintln!("k={}: no critical point detected ({reason})", s.k);
                Ok(CriticalityResult {
                    k: s.k,
                    detected_p: f64::NAN,
                    theoretical_p: theoretical_critical_p(s.k).ok().map(|(lo, _)| lo),
                    method: DETECTOR,
                })
            }
            Err(e) => Err(e),
        })
        .collect::<Result<Vec<_>>>()?;
    write_text(&common.out.join("sweep.csv"), &sweep_csv(&series))?;
    write_text(&common.out.join("summary.csv"), &summary_csv(&summary))
}

pub fn transition_graph(common: &Common, network_path: Option<PathBuf>) -> Result<()> {
    let cfg = resolve(common, small_defaults(), &network_flag(network_path))?;
    start(common, "transition-graph", &cfg)?;
    let net = network(&cfg)?;
    let diagram = build_transition_diagram(&net, cfg.max_nodes)?;
    let attractors = find_attractors(&diagram);
    let prestige = prestige_centrality(&diagram, cfg.prestige_options());
    if !prestige.converged {
        eprintln!("prestige did not converge in {} iterations", prestige.iterations_used);
    }
    write_text(&common.out.join("network.txt"), &net.to_fixture())?;
    write_text(&common.out.join("successors.csv"), &successor_csv(&diagram))?;
    write_text(&common.out.join("attractors.txt"), &attractor_report(&attractors))?;
    write_text(&common.out.join("prestige.csv"), &prestige_csv(&prestige))
}

pub fn perturb(
    common: &Common,
    network_path: Option<PathBuf>,
    mode: Option<String>,
    count: Option<usize>,
    removal: Option<String>,
) -> Result<()> {
    let mut flags = network_flag(network_path);
    flags.extend(mode.map(|m| ("mode", m)));
    flags.extend(count.map(|c| ("count", c.to_string())));
    flags.extend(removal.map(|r| ("removal", r)));
    let cfg = resolve(common, small_defaults(), &flags)?;
    start(common, "perturb", &cfg)?;
    let net = network(&cfg)?;
    let table = square_table(&cfg)?;
    let diagram = build_transition_diagram(&net, cfg.max_nodes)?;
    let series = perturbation_series(&diagram, &table, cfg.mode, cfg.perturbation_options())?;
    write_text(&common.out.join("network.txt"), &net.to_fixture())?;
    write_text(&common.out.join("perturb.csv"), &perturbation_csv(&series))
}

pub fn ctm_gen(states: usize, step_cap: usize, square: Option<usize>, out: &Path) -> Result<()> {
    let strings = ctm_from_frequency(&build_frequency_distribution(states, step_cap)?)?;
    let table = match square {
        Some(side) => CtmTable::derive_square(&strings, side)?,
        None => strings,
    };
    write_ctm_table(out, &table)
}
