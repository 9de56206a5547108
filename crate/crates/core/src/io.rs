//! Text formats for every artifact the CLI writes.
//!
//! Formatters return `String`s so tests can compare bytes directly; the
//! `write_*` helpers only add file handling. CSV floats use the shortest
//! representation that parses back to the same `f64`.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use crate::config::RunConfig;
use crate::error::Result;
use crate::experiments::{CriticalityResult, SweepSeries};
use crate::measures::{CtmTable, RandomnessReport};
use crate::network::EvolutionDiagram;
use crate::perturbation::PerturbationSeries;
use crate::transition::{AttractorSet, PrestigeVector, TransitionDiagram};

pub const SWEEP_HEADER: &str = "k,p,sample,entropy_tt,lzw_tt,bdm_tt,entropy_diag,lzw_diag,bdm_diag";
pub const SUMMARY_HEADER: &str = "k,detected_p,theoretical_p";
pub const SUCCESSOR_HEADER: &str = "state,next";
pub const PRESTIGE_HEADER: &str = "state,score";
pub const PERTURB_HEADER: &str = "rank,state,prestige,entropy_rel,lzw_rel,bdm_rel,aid,classification";

fn num(v: f64) -> String {
    format!("{v}")
}

fn opt(v: Option<f64>) -> String {
    v.map(num).unwrap_or_default()
}

/// Plain PBM (`P1`): one diagram row per image row, `1` for an active node.
pub fn diagram_pbm(diagram: &EvolutionDiagram) -> String {
    let m = diagram.to_matrix();
    let mut out = format!("P1\n{} {}\n", m.cols(), m.rows());
    for r in 0..m.rows() {
        let row: Vec<&str> = m.row(r).iter().map(|&b| if b == 1 { "1" } else { "0" }).collect();
        out.push_str(&row.join(" "));
        out.push('\n');
    }
    out
}

pub const MEASURES_HEADER: &str = "object,entropy,lzw_rate,bdm";

pub fn measures_csv(rows: &[(&str, RandomnessReport)]) -> String {
    let mut out = format!("{MEASURES_HEADER}\n");
    for (name, r) in rows {
        let _ = writeln!(out, "{name},{},{},{}", num(r.entropy), num(r.lzw_rate), num(r.bdm));
    }
    out
}

pub fn sweep_csv(series: &[SweepSeries]) -> String {
    let mut out = format!("{SWEEP_HEADER}\n");
    for s in series {
        for pt in &s.points {
            let (t, d) = (pt.truth_tables, pt.diagram);
            let _ = writeln!(
                out,
                "{},{},{},{},{},{},{},{},{}",
                pt.k,
                num(pt.p),
                pt.sample,
                num(t.entropy),
                num(t.lzw_rate),
                num(t.bdm),
                num(d.entropy),
                num(d.lzw_rate),
                num(d.bdm),
            );
        }
    }
    out
}

pub fn summary_csv(results: &[CriticalityResult]) -> String {
    let mut out = format!("{SUMMARY_HEADER}\n");
    for r in results {
        let _ = writeln!(out, "{},{},{}", r.k, num(r.detected_p), opt(r.theoretical_p));
    }
    out
}

pub fn successor_csv(diagram: &TransitionDiagram) -> String {
    let mut out = format!("{SUCCESSOR_HEADER}\n");
    for (v, next) in diagram.successors().iter().enumerate() {
        let _ = writeln!(out, "{v},{next}");
    }
    out
}

/// One line per attractor: `cycle <i> length <L> basin <B> states <s0 s1 ...>`,
/// preceded by a count line.
pub fn attractor_report(attractors: &AttractorSet) -> String {
    let max_transient = attractors.transient_length.iter().copied().max().unwrap_or(0);
    let mut out = format!(
        "attractors {}\nfixed_points {}\nmax_transient {}\n",
        attractors.cycles.len(),
        attractors.fixed_points(),
        max_transient
    );
    for (i, cycle) in attractors.cycles.iter().enumerate() {
        let states: Vec<String> = cycle.iter().map(|s| s.to_string()).collect();
        let _ = writeln!(
            out,
            "cycle {i} length {} basin {} states {}",
            cycle.len(),
            attractors.basin_size[i],
            states.join(" ")
        );
    }
    out
}

pub fn prestige_csv(prestige: &PrestigeVector) -> String {
    let mut out = format!("{PRESTIGE_HEADER}\n");
    for (v, s) in prestige.scores.iter().enumerate() {
        let _ = writeln!(out, "{v},{}", num(*s));
    }
    out
}

pub fn perturbation_csv(series: &PerturbationSeries) -> String {
    let mut out = format!("{PERTURB_HEADER}\n");
    for r in &series.records {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{}",
            r.rank,
            r.node,
            num(r.prestige),
            opt(r.relative_change.entropy),
            opt(r.relative_change.lzw_rate),
            opt(r.relative_change.bdm),
            num(r.aid),
            r.classification,
        );
    }
    out
}

/// Resolved configuration plus a line naming the subcommand. Feeding the
/// `key=value` part back as a config file reproduces the run.
pub fn run_manifest(subcommand: &str, config: &RunConfig) -> String {
    format!("# rbnlab {subcommand}\n{}", config.to_text())
}

pub fn write_text(path: &Path, contents: &str) -> Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir)?;
    }
    fs::write(path, contents)?;
    Ok(())
}

pub fn write_ctm_table(path: &Path, table: &CtmTable) -> Result<()> {
    write_text(path, &table.to_text())
}

pub fn read_ctm_table(path: &Path) -> Result<CtmTable> {
    CtmTable::from_text(&fs::read_to_string(path)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::network::NetworkState;

    #[test]
    fn pbm_identity() {
        let d = EvolutionDiagram {
            rows: vec![NetworkState(vec![1, 0]), NetworkState(vec![0, 1])],
        };
        assert_eq!(diagram_pbm(&d), "P1\n2 2\n1 0\n0 1\n");
    }

    #[test]
    fn pbm_dimensions() {
        let d = EvolutionDiagram {
            rows: vec![NetworkState(vec![1, 0, 1]); 5],
        };
        let text = diagram_pbm(&d);
        assert_eq!(text.lines().nth(1), Some("3 5"));
        assert_eq!(text.lines().count(), 7);
        assert_eq!(text, diagram_pbm(&d));
    }

    #[test]
    fn successor_rows() {
        let d = TransitionDiagram::from_successors(vec![1, 1, 0]).unwrap();
        assert_eq!(successor_csv(&d), "state,next\n0,1\n1,1\n2,0\n");
    }
}
