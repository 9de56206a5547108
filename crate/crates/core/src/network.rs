//! Random Boolean networks: generation and synchronous dynamics.
//!
//! A network of `N` nodes wires each node to `k` inputs (drawn with
//! replacement) and gives it a truth table of `2^k` output bits. The table
//! index for node `i` is the big-endian integer formed by its inputs in
//! wiring order: the first wired input is the most significant bit.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::matrix::BitMatrix;
use crate::rng::RngStream;

/// Largest in-degree accepted; truth tables hold `2^k` bits per node.
pub const MAX_IN_DEGREE: usize = 24;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum WiringDist {
    /// Each input drawn uniformly from `0..N`.
    Uniform,
    /// Each input is the number of successes in `N - 1` Bernoulli trials.
    Binomial { success_prob: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RbnParams {
    pub n_nodes: usize,
    pub in_degree: usize,
    pub bias: f64,
    pub wiring_dist: WiringDist,
}

impl RbnParams {
    pub fn new(n_nodes: usize, in_degree: usize, bias: f64) -> Self {
        Self {
            n_nodes,
            in_degree,
            bias,
            wiring_dist: WiringDist::Uniform,
        }
    }

    pub fn with_wiring(mut self, wiring_dist: WiringDist) -> Self {
        self.wiring_dist = wiring_dist;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_nodes == 0 {
            return Err(Error::param("n_nodes", "must be at least 1"));
        }
        if self.in_degree == 0 || self.in_degree > self.n_nodes {
            return Err(Error::param(
                "in_degree",
                format!("must lie in 1..={}, got {}", self.n_nodes, self.in_degree),
            ));
        }
        if self.in_degree > MAX_IN_DEGREE {
            return Err(Error::param(
                "in_degree",
                format!("at most {MAX_IN_DEGREE} supported"),
            ));
        }
        if !(0.0..=1.0).contains(&self.bias) {
            return Err(Error::param("bias", format!("{} is outside [0, 1]", self.bias)));
        }
        if let WiringDist::Binomial { success_prob } = self.wiring_dist {
            if !(0.0..=1.0).contains(&success_prob) {
                return Err(Error::param(
                    "wiring",
                    format!("binomial probability {success_prob} is outside [0, 1]"),
                ));
            }
        }
        Ok(())
    }
}

/// `N x k` matrix of input node indices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Wiring {
    k: usize,
    inputs: Vec<usize>,
}

impl Wiring {
    pub fn from_rows(rows: Vec<Vec<usize>>) -> Result<Self> {
        let n = rows.len();
        let k = rows.first().map_or(0, Vec::len);
        if n == 0 || k == 0 {
            return Err(Error::Empty("wiring"));
        }
        let mut inputs = Vec::with_capacity(n * k);
        for (i, row) in rows.into_iter().enumerate() {
            if row.len() != k {
                return Err(Error::Shape(format!("wiring row {i} has {} inputs, expected {k}", row.len())));
            }
            if let Some(&j) = row.iter().find(|&&j| j >= n) {
                return Err(Error::Shape(format!("wiring row {i} references node {j} >= {n}")));
            }
            inputs.extend(row);
        }
        Ok(Self { k, inputs })
    }

    pub fn n_nodes(&self) -> usize {
        self.inputs.len() / self.k
    }

    pub fn in_degree(&self) -> usize {
        self.k
    }

    pub fn inputs_of(&self, node: usize) -> &[usize] {
        &self.inputs[node * self.k..(node + 1) * self.k]
    }

    pub fn entries(&self) -> &[usize] {
        &self.inputs
    }
}

/// `N` rows of `2^k` output bits.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TruthTables {
    width: usize,
    bits: Vec<u8>,
}

impl TruthTables {
    pub fn from_rows(rows: Vec<Vec<u8>>, in_degree: usize) -> Result<Self> {
        let width = 1usize << in_degree;
        let mut bits = Vec::with_capacity(rows.len() * width);
        for (i, row) in rows.into_iter().enumerate() {
            if row.len() != width {
                return Err(Error::Shape(format!(
                    "truth table {i} has {} entries, expected {width}",
                    row.len()
                )));
            }
            if row.iter().any(|&b| b > 1) {
                return Err(Error::Shape(format!("truth table {i} has a non-binary entry")));
            }
            bits.extend(row);
        }
        Ok(Self { width, bits })
    }

    pub fn n_nodes(&self) -> usize {
        self.bits.len() / self.width
    }

    pub fn row(&self, node: usize) -> &[u8] {
        &self.bits[node * self.width..(node + 1) * self.width]
    }

    /// Tables as an `N x 2^k` matrix, one node per row.
    pub fn to_matrix(&self) -> BitMatrix {
        BitMatrix::from_cells(self.n_nodes(), self.width, self.bits.clone())
            .expect("truth tables are binary and rectangular")
    }

    pub fn ones_fraction(&self) -> f64 {
        self.bits.iter().map(|&b| b as usize).sum::<usize>() as f64 / self.bits.len() as f64
    }
}

/// Draws the `N x k` input matrix.
pub fn generate_wiring(params: &RbnParams, rng: &mut RngStream) -> Result<Wiring> {
    params.validate()?;
    let n = params.n_nodes;
    let k = params.in_degree;
    let inputs = match params.wiring_dist {
        WiringDist::Uniform => (0..n * k).map(|_| rng.below(n as u64) as usize).collect(),
        WiringDist::Binomial { success_prob } => (0..n * k)
            .map(|_| (0..n - 1).filter(|_| rng.bernoulli(success_prob)).count())
            .collect(),
    };
    Ok(Wiring { k, inputs })
}

/// Draws `N` truth tables whose bits are 1 with probability `bias`.
pub fn generate_truth_tables(params: &RbnParams, rng: &mut RngStream) -> Result<TruthTables> {
    params.validate()?;
    let width = 1usize << params.in_degree;
    let bits = (0..params.n_nodes * width)
        .map(|_| rng.bernoulli(params.bias) as u8)
        .collect();
    Ok(TruthTables { width, bits })
}

/// Binary state vector, one entry per node.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct NetworkState(pub Vec<u8>);

impl NetworkState {
    pub fn zeros(n: usize) -> Self {
        Self(vec![0; n])
    }

    pub fn random(n: usize, rng: &mut RngStream) -> Self {
        Self((0..n).map(|_| rng.bernoulli(0.5) as u8).collect())
    }

    /// Decodes an `n`-bit big-endian integer; node 0 is the most significant bit.
    pub fn from_index(index: u64, n: usize) -> Self {
        Self((0..n).map(|i| ((index >> (n - 1 - i)) & 1) as u8).collect())
    }

    pub fn to_index(&self) -> u64 {
        self.0.iter().fold(0u64, |acc, &b| (acc << 1) | b as u64)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn bits(&self) -> &[u8] {
        &self.0
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BooleanNetwork {
    pub params: RbnParams,
    pub wiring: Wiring,
    pub truth_tables: TruthTables,
}

impl BooleanNetwork {
    pub fn new(params: RbnParams, wiring: Wiring, truth_tables: TruthTables) -> Result<Self> {
        params.validate()?;
        if wiring.n_nodes() != params.n_nodes
            || wiring.in_degree() != params.in_degree
            || truth_tables.n_nodes() != params.n_nodes
            || truth_tables.width != 1 << params.in_degree
        {
            return Err(Error::Shape("wiring/truth tables disagree with params".into()));
        }
        Ok(Self {
            params,
            wiring,
            truth_tables,
        })
    }

    /// Wiring then truth tables, both drawn from `rng`.
    pub fn random(params: RbnParams, rng: &mut RngStream) -> Result<Self> {
        let wiring = generate_wiring(&params, rng)?;
        let truth_tables = generate_truth_tables(&params, rng)?;
        Ok(Self {
            params,
            wiring,
            truth_tables,
        })
    }

    pub fn n_nodes(&self) -> usize {
        self.params.n_nodes
    }

    pub fn in_degree(&self) -> usize {
        self.params.in_degree
    }

    /// Synchronous update of every node.
    pub fn step(&self, state: &NetworkState) -> Result<NetworkState> {
        if state.len() != self.n_nodes() {
            return Err(Error::Shape(format!(
                "state has {} bits, network has {} nodes",
                state.len(),
                self.n_nodes()
            )));
        }
        let mut next = vec![0u8; self.n_nodes()];
        self.step_into(state.bits(), &mut next);
        Ok(NetworkState(next))
    }

    /// Unchecked step; `current` and `next` must both have length `N`.
    pub(crate) fn step_into(&self, current: &[u8], next: &mut [u8]) {
        for (node, out) in next.iter_mut().enumerate() {
            let index = self
                .wiring
                .inputs_of(node)
                .iter()
                .fold(0usize, |acc, &j| (acc << 1) | current[j] as usize);
            *out = self.truth_tables.row(node)[index];
        }
    }

    /// Runs `steps` rows of dynamics starting from (and including) `initial`.
    pub fn evolve(&self, initial: &NetworkState, steps: usize) -> Result<EvolutionDiagram> {
        if steps == 0 {
            return Err(Error::param("steps", "must be at least 1"));
        }
        let mut rows = Vec::with_capacity(steps);
        rows.push(initial.clone());
        for t in 1..steps {
            let next = self.step(&rows[t - 1])?;
            rows.push(next);
        }
        Ok(EvolutionDiagram { rows })
    }

    /// Text fixture: `N k`, then `N` wiring rows, then `N` truth-table rows.
    pub fn to_fixture(&self) -> String {
        let mut out = format!("{} {}\n", self.n_nodes(), self.in_degree());
        for i in 0..self.n_nodes() {
            let row: Vec<String> = self.wiring.inputs_of(i).iter().map(|j| j.to_string()).collect();
            out.push_str(&row.join(" "));
            out.push('\n');
        }
        for i in 0..self.n_nodes() {
            for &b in self.truth_tables.row(i) {
                out.push(if b == 1 { '1' } else { '0' });
            }
            out.push('\n');
        }
        out
    }

    /// Parses the fixture format written by [`to_fixture`](Self::to_fixture).
    ///
    /// Truth-table rows may be written as contiguous `0`/`1` characters or
    /// whitespace separated. Blank lines and `#` comments are skipped. The
    /// bias is estimated from the table density.
    pub fn from_fixture(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
            .filter(|(_, l)| !l.is_empty());

        let (hline, header) = lines.next().ok_or(Error::Empty("fixture"))?;
        let dims: Vec<usize> = header
            .split_whitespace()
            .map(|t| t.parse())
            .collect::<std::result::Result<_, _>>()
            .map_err(|e| Error::Parse { line: hline, reason: format!("bad header: {e}") })?;
        let [n, k] = dims[..] else {
            return Err(Error::Parse { line: hline, reason: "header must be `N k`".into() });
        };
        if k > MAX_IN_DEGREE {
            return Err(Error::Parse { line: hline, reason: format!("in-degree {k} too large") });
        }

        let mut wiring = Vec::with_capacity(n);
        for _ in 0..n {
            let (ln, l) = lines
                .next()
                .ok_or(Error::Parse { line: hline, reason: "missing wiring rows".into() })?;
            let row: Vec<usize> = l
                .split_whitespace()
                .map(|t| t.parse())
                .collect::<std::result::Result<_, _>>()
                .map_err(|e| Error::Parse { line: ln, reason: format!("bad wiring entry: {e}") })?;
            if row.len() != k || row.iter().any(|&j| j >= n) {
                return Err(Error::Parse {
                    line: ln,
                    reason: format!("wiring row needs {k} indices below {n}"),
                });
            }
            wiring.push(row);
        }

        let mut tables = Vec::with_capacity(n);
        for _ in 0..n {
            let (ln, l) = lines
                .next()
                .ok_or(Error::Parse { line: hline, reason: "missing truth-table rows".into() })?;
            let row: Vec<u8> = l
                .chars()
                .filter(|c| !c.is_whitespace())
                .map(|c| match c {
                    '0' => Ok(0),
                    '1' => Ok(1),
                    other => Err(Error::Parse { line: ln, reason: format!("bad bit {other:?}") }),
                })
                .collect::<Result<_>>()?;
            if row.len() != 1 << k {
                return Err(Error::Parse {
                    line: ln,
                    reason: format!("truth table needs {} bits, found {}", 1 << k, row.len()),
                });
            }
            tables.push(row);
        }
        if let Some((ln, _)) = lines.next() {
            return Err(Error::Parse { line: ln, reason: "trailing content".into() });
        }

        let truth_tables = TruthTables::from_rows(tables, k)?;
        let params = RbnParams::new(n, k, truth_tables.ones_fraction());
        let wiring = Wiring::from_rows(wiring)?;
        Self::new(params, wiring, truth_tables)
    }
}

/// `T x N` record of states; row 0 is the initial state.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EvolutionDiagram {
    pub rows: Vec<NetworkState>,
}

impl EvolutionDiagram {
    pub fn steps(&self) -> usize {
        self.rows.len()
    }

    pub fn n_nodes(&self) -> usize {
        self.rows.first().map_or(0, NetworkState::len)
    }

    pub fn to_matrix(&self) -> BitMatrix {
        let cells = self.rows.iter().flat_map(|r| r.bits().iter().copied()).collect();
        BitMatrix::from_cells(self.steps(), self.n_nodes(), cells).expect("rows share length N")
    }

    /// Plain-text rendering, one row per line, `1` as `#`.
    pub fn render(&self) -> String {
        let mut out = String::new();
        for r in &self.rows {
            for &b in r.bits() {
                out.push(if b == 1 { '#' } else { '.' });
            }
            let _ = writeln!(out);
        }
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Regime {
    Ordered,
    Critical,
    Chaotic,
}

/// Absolute tolerance on `2kp(1-p) - 1` for the critical band.
pub const CRITICAL_TOLERANCE: f64 = 1e-12;

/// Compares the annealed sensitivity `2kp(1-p)` with 1.
pub fn classify_regime(k: usize, p: f64) -> Regime {
    let s = 2.0 * k as f64 * p * (1.0 - p);
    if (s - 1.0).abs() <= CRITICAL_TOLERANCE {
        Regime::Critical
    } else if s > 1.0 {
        Regime::Chaotic
    } else {
        Regime::Ordered
    }
}

/// Roots of `2kp(1-p) = 1`, low branch first.
pub fn theoretical_critical_p(k: usize) -> Result<(f64, f64)> {
    if k < 2 {
        return Err(Error::param("in_degree", "critical bias requires k >= 2"));
    }
    let d = (1.0 - 2.0 / k as f64).sqrt();
    Ok(((1.0 - d) / 2.0, (1.0 + d) / 2.0))
}
