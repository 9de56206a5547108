//! Node perturbation of transition diagrams and algorithmic information
//! dynamics (AID).
//!
//! A perturbation takes one state out of the adjacency matrix of the
//! transition diagram and re-measures randomness. By default the state's row
//! and column are deleted ([`Removal::Delete`]); [`Removal::Isolate`] zeroes
//! them instead and keeps the matrix shape. With isolation a sparse
//! adjacency matrix mostly changes a common block into the all-zero block,
//! which moves BDM only through its `log2` multiplicity terms.
//!
//! The AID of a state `e` is `K(G) - K(G \ e)` with `K` estimated by BDM.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::matrix::BitMatrix;
use crate::measures::{randomness_report_with, BdmOptions, CtmTable, RandomnessReport};
use crate::transition::{adjacency_matrix, prestige_centrality, PrestigeOptions, TransitionDiagram};

/// Copy of `adjacency` with row and column `node` zeroed.
pub fn disconnect_node(adjacency: &BitMatrix, node: usize) -> Result<BitMatrix> {
    if node >= adjacency.rows() || node >= adjacency.cols() {
        return Err(Error::param(
            "node",
            format!("{node} outside a {}x{} matrix", adjacency.rows(), adjacency.cols()),
        ));
    }
    let mut out = adjacency.clone();
    for c in 0..out.cols() {
        out.set(node, c, false);
    }
    for r in 0..out.rows() {
        out.set(r, node, false);
    }
    Ok(out)
}

/// Copy of `adjacency` with row and column `node` deleted, one side shorter.
pub fn remove_node(adjacency: &BitMatrix, node: usize) -> Result<BitMatrix> {
    let n = adjacency.rows();
    if n != adjacency.cols() || node >= n {
        return Err(Error::param("node", format!("{node} outside a {n}x{} matrix", adjacency.cols())));
    }
    if n == 1 {
        return Err(Error::Empty("matrix left after removing its only node"));
    }
    let cells = (0..n)
        .filter(|&r| r != node)
        .flat_map(|r| {
            let row = adjacency.row(r);
            row[..node].iter().chain(&row[node + 1..]).copied()
        })
        .collect();
    BitMatrix::from_cells(n - 1, n - 1, cells)
}

/// How a perturbed state leaves the adjacency matrix.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Removal {
    /// Delete the state's row and column (`G \ e` as vertex removal).
    #[default]
    Delete,
    /// Zero the state's row and column, keeping the matrix shape.
    Isolate,
}

impl Removal {
    pub fn apply(self, adjacency: &BitMatrix, node: usize) -> Result<BitMatrix> {
        match self {
            Removal::Delete => remove_node(adjacency, node),
            Removal::Isolate => disconnect_node(adjacency, node),
        }
    }
}

impl std::str::FromStr for Removal {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "delete" => Ok(Removal::Delete),
            "isolate" => Ok(Removal::Isolate),
            other => Err(Error::param("removal", format!("expected delete|isolate, got {other:?}"))),
        }
    }
}

impl std::fmt::Display for Removal {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Removal::Delete => "delete",
            Removal::Isolate => "isolate",
        })
    }
}

/// `(before - after) / before` for each measure; `None` where the baseline
/// is zero.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RelativeChange {
    pub entropy: Option<f64>,
    pub lzw_rate: Option<f64>,
    pub bdm: Option<f64>,
}

pub fn relative_randomness_change(before: &RandomnessReport, after: &RandomnessReport) -> RelativeChange {
    let rel = |b: f64, a: f64| (b != 0.0).then(|| (b - a) / b);
    RelativeChange {
        entropy: rel(before.entropy, after.entropy),
        lzw_rate: rel(before.lzw_rate, after.lzw_rate),
        bdm: rel(before.bdm, after.bdm),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AidBand {
    /// `|AID|` clearly below `log2 |V|`: recoverable from the description.
    ContainedInDescription,
    /// `|AID| ~ log2 |V|`.
    CausalNeutral,
    /// Above `log2 |V|` but not above `|V|`.
    InformationLoss,
    /// Above `|V|`.
    FundamentalOrNoise,
}

impl AidBand {
    pub fn as_str(&self) -> &'static str {
        match self {
            AidBand::ContainedInDescription => "contained",
            AidBand::CausalNeutral => "neutral",
            AidBand::InformationLoss => "information_loss",
            AidBand::FundamentalOrNoise => "fundamental_or_noise",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AidSign {
    /// Removal moved the graph toward randomness (high causal contribution).
    Negative,
    Zero,
    /// Removal moved the graph toward simplicity.
    Positive,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AidClass {
    pub band: AidBand,
    pub sign: AidSign,
}

impl std::fmt::Display for AidClass {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let sign = match self.sign {
            AidSign::Negative => "-",
            AidSign::Zero => "0",
            AidSign::Positive => "+",
        };
        write!(f, "{}({sign})", self.band.as_str())
    }
}

pub const DEFAULT_BAND_TOLERANCE: f64 = 0.1;

/// Places `|aid|` against `L = log2(n_vertices)`: below `(1-t)L`, within
/// `[(1-t)L, (1+t)L]`, above that up to `n_vertices`, or above `n_vertices`.
pub fn classify_aid(aid: f64, n_vertices: usize, band_tolerance: f64) -> Result<AidClass> {
    if n_vertices < 2 {
        return Err(Error::param("n_vertices", "needs at least 2 vertices"));
    }
    if !(0.0..1.0).contains(&band_tolerance) {
        return Err(Error::param("band_tolerance", format!("{band_tolerance} is outside [0, 1)")));
    }
    let l = (n_vertices as f64).log2();
    let mag = aid.abs();
    let band = if mag < (1.0 - band_tolerance) * l {
        AidBand::ContainedInDescription
    } else if mag <= (1.0 + band_tolerance) * l {
        AidBand::CausalNeutral
    } else if mag <= n_vertices as f64 {
        AidBand::InformationLoss
    } else {
        AidBand::FundamentalOrNoise
    };
    let sign = if aid < 0.0 {
        AidSign::Negative
    } else if aid > 0.0 {
        AidSign::Positive
    } else {
        AidSign::Zero
    };
    Ok(AidClass { band, sign })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PerturbationMode {
    MostRelevant,
    LeastRelevant,
}

impl std::str::FromStr for PerturbationMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "most" => Ok(Self::MostRelevant),
            "least" => Ok(Self::LeastRelevant),
            other => Err(Error::param("mode", format!("expected most|least, got {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PerturbationRecord {
    /// 1-based position in the prestige ranking for this mode.
    pub rank: usize,
    pub node: usize,
    pub prestige: f64,
    pub measure_before: RandomnessReport,
    pub measure_after: RandomnessReport,
    pub relative_change: RelativeChange,
    /// BDM before minus BDM after, in bits.
    pub aid: f64,
    pub classification: AidClass,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PerturbationSeries {
    pub mode: PerturbationMode,
    pub baseline: RandomnessReport,
    pub records: Vec<PerturbationRecord>,
    pub n_perturbed: usize,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PerturbationOptions {
    pub count: usize,
    pub removal: Removal,
    pub band_tolerance: f64,
    pub bdm: BdmOptions,
    pub prestige: PrestigeOptions,
}

impl Default for PerturbationOptions {
    fn default() -> Self {
        Self {
            count: 20,
            removal: Removal::default(),
            band_tolerance: DEFAULT_BAND_TOLERANCE,
            bdm: BdmOptions::default(),
            prestige: PrestigeOptions::default(),
        }
    }
}

/// Measures the pristine adjacency matrix, ranks states by prestige (ties
/// by ascending id) and removes the top or bottom `count` of them one at a
/// time, each trial starting from the pristine matrix.
pub fn perturbation_series(
    diagram: &TransitionDiagram,
    table: &CtmTable,
    mode: PerturbationMode,
    opts: PerturbationOptions,
) -> Result<PerturbationSeries> {
    let adjacency = adjacency_matrix(diagram);
    let prestige = prestige_centrality(diagram, opts.prestige);
    perturbation_series_with(&adjacency, &prestige.scores, table, mode, opts)
}

/// As [`perturbation_series`], for a given adjacency matrix and prestige.
pub fn perturbation_series_with(
    adjacency: &BitMatrix,
    prestige: &[f64],
    table: &CtmTable,
    mode: PerturbationMode,
    opts: PerturbationOptions,
) -> Result<PerturbationSeries> {
    let n = adjacency.rows();
    if prestige.len() != n {
        return Err(Error::Shape("one prestige score per state required".into()));
    }
    if opts.count > n {
        return Err(Error::param("count", format!("{} exceeds the {n} states", opts.count)));
    }
    let baseline = randomness_report_with(adjacency, table, opts.bdm)?;
    let mut order: Vec<usize> = (0..n).collect();
    match mode {
        PerturbationMode::MostRelevant => {
            order.sort_by(|&a, &b| prestige[b].total_cmp(&prestige[a]).then(a.cmp(&b)))
        }
        PerturbationMode::LeastRelevant => {
            order.sort_by(|&a, &b| prestige[a].total_cmp(&prestige[b]).then(a.cmp(&b)))
        }
    }
    let records = order[..opts.count]
        .par_iter()
        .enumerate()
        .map(|(i, &node)| {
            let perturbed = opts.removal.apply(adjacency, node)?;
            let after = randomness_report_with(&perturbed, table, opts.bdm)?;
            let aid = baseline.bdm - after.bdm;
            Ok(PerturbationRecord {
                rank: i + 1,
                node,
                prestige: prestige[node],
                measure_before: baseline,
                measure_after: after,
                relative_change: relative_randomness_change(&baseline, &after),
                aid,
                classification: classify_aid(aid, n.max(2), opts.band_tolerance)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(PerturbationSeries {
        mode,
        baseline,
        n_perturbed: records.len(),
        records,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measures::{Block, BlockShape};
    use crate::rng::derive_stream;

    fn toy_table() -> CtmTable {
        let entries = (0..1u64 << 16)
            .map(|b| (Block::from_packed(16, b), 4.0 + 1.5 * b.count_ones() as f64))
            .collect();
        CtmTable::new(BlockShape::Square { side: 4 }, entries).unwrap()
    }

    #[test]
    fn disconnect_self_loop() {
        let mut m = BitMatrix::zeros(4, 4);
        m.set(2, 2, true);
        let d = disconnect_node(&m, 2).unwrap();
        assert_eq!(d.count_ones(), 0);
        assert_eq!(m.count_ones(), 1);
        assert!(disconnect_node(&m, 4).is_err());
    }

    #[test]
    fn disconnect_isolated_node_is_identity() {
        let mut m = BitMatrix::zeros(4, 4);
        m.set(0, 1, true);
        m.set(1, 0, true);
        assert_eq!(disconnect_node(&m, 3).unwrap(), m);
    }

    #[test]
    fn disconnect_counting_identity() {
        for seed in 0..20 {
            let mut rng = derive_stream(seed, 9);
            let succ: Vec<u32> = (0..64).map(|_| rng.below(64) as u32).collect();
            let d = TransitionDiagram::from_successors(succ).unwrap();
            let adj = adjacency_matrix(&d);
            let indeg = d.in_degrees();
            for node in 0..64 {
                let self_loop = (d.successor(node) == node) as usize;
                let after = disconnect_node(&adj, node).unwrap();
                assert_eq!(after.count_ones(), 64 - indeg[node] - 1 + self_loop);
            }
        }
    }

    #[test]
    fn remove_node_drops_row_and_column() {
        let m = BitMatrix::from_rows(&[[0u8, 1, 0], [0, 0, 1], [1, 0, 0]]).unwrap();
        let r = remove_node(&m, 1).unwrap();
        assert_eq!(r, BitMatrix::from_rows(&[[0u8, 0], [1, 0]]).unwrap());
        assert!(remove_node(&m, 3).is_err());
        assert!(remove_node(&BitMatrix::zeros(1, 1), 0).is_err());
        assert_eq!("isolate".parse::<Removal>().unwrap(), Removal::Isolate);
        assert!("drop".parse::<Removal>().is_err());
    }

    #[test]
    fn relative_change_arithmetic() {
        let before = RandomnessReport { entropy: 0.5, lzw_rate: 0.25, bdm: 100.0 };
        let same = relative_randomness_change(&before, &before);
        assert_eq!((same.entropy, same.lzw_rate, same.bdm), (Some(0.0), Some(0.0), Some(0.0)));
        let after = RandomnessReport { bdm: 90.0, ..before };
        let rc = relative_randomness_change(&before, &after);
        assert!((rc.bdm.unwrap() - 0.1).abs() < 1e-15);
        let zero = RandomnessReport { entropy: 0.0, ..before };
        assert_eq!(relative_randomness_change(&zero, &after).entropy, None);
    }

    #[test]
    fn aid_bands() {
        let c = classify_aid(-5.0, 1024, 0.1).unwrap();
        assert_eq!(c, AidClass { band: AidBand::ContainedInDescription, sign: AidSign::Negative });
        assert_eq!(classify_aid(10.0, 1024, 0.1).unwrap().band, AidBand::CausalNeutral);
        assert_eq!(classify_aid(9.0, 1024, 0.1).unwrap().band, AidBand::CausalNeutral);
        assert_eq!(classify_aid(8.99, 1024, 0.1).unwrap().band, AidBand::ContainedInDescription);
        assert_eq!(classify_aid(11.5, 1024, 0.1).unwrap().band, AidBand::InformationLoss);
        assert_eq!(classify_aid(1024.0, 1024, 0.1).unwrap().band, AidBand::InformationLoss);
        let c = classify_aid(-2000.0, 1024, 0.1).unwrap();
        assert_eq!(c, AidClass { band: AidBand::FundamentalOrNoise, sign: AidSign::Negative });
        assert_eq!(classify_aid(2000.0, 1024, 0.1).unwrap().sign, AidSign::Positive);
        assert!(classify_aid(1.0, 1, 0.1).is_err());
    }

    fn seeded_diagram(seed: u64) -> TransitionDiagram {
        let mut rng = derive_stream(seed, 1);
        let succ: Vec<u32> = (0..256).map(|_| rng.below(256) as u32).collect();
        TransitionDiagram::from_successors(succ).unwrap()
    }

    #[test]
    fn empty_series_keeps_baseline() {
        let d = seeded_diagram(1);
        let opts = PerturbationOptions { count: 0, ..Default::default() };
        let s = perturbation_series(&d, &toy_table(), PerturbationMode::MostRelevant, opts).unwrap();
        assert!(s.records.is_empty());
        assert!(s.baseline.bdm > 0.0);
        let opts = PerturbationOptions { count: 257, ..Default::default() };
        assert!(perturbation_series(&d, &toy_table(), PerturbationMode::MostRelevant, opts).is_err());
    }

    #[test]
    fn isolating_an_edgeless_state_changes_nothing() {
        let mut m = BitMatrix::zeros(8, 8);
        m.set(0, 1, true);
        m.set(1, 0, true);
        let prestige = vec![0.0; 8];
        let opts = PerturbationOptions {
            count: 8,
            removal: Removal::Isolate,
            bdm: BdmOptions { block_side: 2, boundary: crate::measures::Boundary::Ignore },
            ..Default::default()
        };
        let s = perturbation_series_with(&m, &prestige, &toy_table_2(), PerturbationMode::LeastRelevant, opts).unwrap();
        for r in s.records.iter().filter(|r| r.node >= 2) {
            assert_eq!(r.relative_change.bdm, Some(0.0));
            assert_eq!(r.relative_change.entropy, Some(0.0));
            assert_eq!(r.relative_change.lzw_rate, Some(0.0));
        }
    }

    fn toy_table_2() -> CtmTable {
        let entries = (0..1u64 << 4).map(|b| (Block::from_packed(4, b), 2.0 + b.count_ones() as f64)).collect();
        CtmTable::new(BlockShape::Square { side: 2 }, entries).unwrap()
    }

    #[test]
    fn series_ordering_and_restore() {
        let d = seeded_diagram(2);
        let adj = adjacency_matrix(&d);
        let pristine = adj.clone();
        let prestige = prestige_centrality(&d, PrestigeOptions::default());
        let table = toy_table();
        let opts = PerturbationOptions { count: 10, ..Default::default() };
        for mode in [PerturbationMode::MostRelevant, PerturbationMode::LeastRelevant] {
            let s = perturbation_series_with(&adj, &prestige.scores, &table, mode, opts).unwrap();
            assert_eq!(s.n_perturbed, 10);
            for w in s.records.windows(2) {
                let (a, b) = (&w[0], &w[1]);
                match mode {
                    PerturbationMode::MostRelevant => assert!(a.prestige > b.prestige || (a.prestige == b.prestige && a.node < b.node)),
                    PerturbationMode::LeastRelevant => assert!(a.prestige < b.prestige || (a.prestige == b.prestige && a.node < b.node)),
                }
            }
            for r in &s.records {
                assert_eq!(r.measure_before, s.baseline);
                // AID and the BDM relative change carry the same sign
                let rel = r.relative_change.bdm.unwrap();
                assert_eq!(r.aid > 0.0, rel > 0.0);
                assert_eq!(r.aid < 0.0, rel < 0.0);
            }
        }
        assert_eq!(adj, pristine);
    }

    #[test]
    fn entropy_change_respects_moved_ones_bound() {
        use crate::measures::entropy::binary_entropy;
        let d = seeded_diagram(3);
        let adj = adjacency_matrix(&d);
        let prestige = prestige_centrality(&d, PrestigeOptions::default());
        let indeg = d.in_degrees();
        let cells = (256 * 256) as f64;
        let opts = PerturbationOptions { count: 20, removal: Removal::Isolate, ..Default::default() };
        let s = perturbation_series_with(&adj, &prestige.scores, &toy_table(), PerturbationMode::MostRelevant, opts)
            .unwrap();
        for r in &s.records {
            let removed = (indeg[r.node] + 1) as f64;
            let q = 256.0 / cells;
            let bound = binary_entropy(q) - binary_entropy(q - removed / cells);
            let change = r.measure_before.entropy - r.measure_after.entropy;
            assert!(change >= 0.0 && change <= bound + 1e-12, "{change} > {bound}");
        }
    }
}
