//! Block Decomposition Method.
//!
//! An object is cut into non-overlapping blocks; each distinct block `r`
//! with multiplicity `n` contributes `CTM(r) + log2(n)` bits.

use std::collections::HashMap;

use super::ctm::{Block, BlockShape, CtmTable};
use crate::error::{Error, Result};
use crate::matrix::BitMatrix;

/// Treatment of the partial blocks left at the right/bottom edge.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Boundary {
    /// Drop partial blocks.
    #[default]
    Ignore,
    /// Pad partial blocks with zeros.
    PadZero,
}

impl std::str::FromStr for Boundary {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "ignore" => Ok(Boundary::Ignore),
            "pad" | "pad_zero" | "padzero" => Ok(Boundary::PadZero),
            other => Err(Error::param("boundary", format!("unknown boundary {other:?}"))),
        }
    }
}

impl std::fmt::Display for Boundary {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Boundary::Ignore => "ignore",
            Boundary::PadZero => "pad_zero",
        })
    }
}

/// Distinct blocks and their multiplicities, sorted by block.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlockDecomposition {
    pub pairs: Vec<(Block, u64)>,
}

impl BlockDecomposition {
    fn from_counts(counts: HashMap<Block, u64>) -> Self {
        let mut pairs: Vec<_> = counts.into_iter().collect();
        pairs.sort_unstable_by_key(|(b, _)| *b);
        Self { pairs }
    }

    pub fn distinct(&self) -> usize {
        self.pairs.len()
    }

    pub fn total_blocks(&self) -> u64 {
        self.pairs.iter().map(|(_, n)| n).sum()
    }

    /// `sum (CTM(r_i) + log2 n_i)`, summed in block order so the result is
    /// bit-reproducible.
    pub fn bdm(&self, table: &CtmTable) -> Result<f64> {
        self.pairs
            .iter()
            .try_fold(0.0, |acc, (b, n)| Ok(acc + table.lookup(b)? + (*n as f64).log2()))
    }
}

/// Cuts `matrix` into `side x side` blocks starting at the top-left corner.
pub fn decompose_matrix(matrix: &BitMatrix, side: usize, boundary: Boundary) -> Result<BlockDecomposition> {
    if matrix.is_empty() {
        return Err(Error::Empty("BDM matrix"));
    }
    if side == 0 || side * side > super::ctm::MAX_BLOCK_CELLS {
        return Err(Error::param("block_side", format!("{side} is outside 1..=8")));
    }
    let (block_rows, block_cols) = match boundary {
        Boundary::Ignore => (matrix.rows() / side, matrix.cols() / side),
        Boundary::PadZero => (matrix.rows().div_ceil(side), matrix.cols().div_ceil(side)),
    };
    if block_rows == 0 || block_cols == 0 {
        return Err(Error::Shape(format!(
            "{}x{} matrix holds no complete {side}x{side} block",
            matrix.rows(),
            matrix.cols()
        )));
    }
    let mut counts: HashMap<Block, u64> = HashMap::new();
    for br in 0..block_rows {
        for bc in 0..block_cols {
            let mut bits = 0u64;
            for r in br * side..(br + 1) * side {
                for c in bc * side..(bc + 1) * side {
                    let v = if r < matrix.rows() && c < matrix.cols() { matrix.get(r, c) } else { 0 };
                    bits = (bits << 1) | v as u64;
                }
            }
            *counts.entry(Block::from_packed(side * side, bits)).or_insert(0) += 1;
        }
    }
    Ok(BlockDecomposition::from_counts(counts))
}

/// Cuts `bits` into consecutive blocks of `block_len`.
pub fn decompose_string(bits: &[u8], block_len: usize, boundary: Boundary) -> Result<BlockDecomposition> {
    if bits.is_empty() {
        return Err(Error::Empty("BDM string"));
    }
    if block_len == 0 || block_len > super::ctm::MAX_BLOCK_CELLS {
        return Err(Error::param("block_len", format!("{block_len} is outside 1..=64")));
    }
    let mut counts: HashMap<Block, u64> = HashMap::new();
    for chunk in bits.chunks(block_len) {
        let block = if chunk.len() == block_len {
            Block::from_cells(chunk)?
        } else {
            match boundary {
                Boundary::Ignore => break,
                Boundary::PadZero => {
                    let mut padded = chunk.to_vec();
                    padded.resize(block_len, 0);
                    Block::from_cells(&padded)?
                }
            }
        };
        *counts.entry(block).or_insert(0) += 1;
    }
    if counts.is_empty() {
        return Err(Error::Shape(format!("string of {} bits holds no block of {block_len}", bits.len())));
    }
    Ok(BlockDecomposition::from_counts(counts))
}

/// Two-dimensional BDM; `table` must be a `Square(side)` table.
pub fn bdm(matrix: &BitMatrix, table: &CtmTable, side: usize, boundary: Boundary) -> Result<f64> {
    if table.shape() != (BlockShape::Square { side }) {
        return Err(Error::Shape(format!("BDM with {side}x{side} blocks needs a square {side} table")));
    }
    decompose_matrix(matrix, side, boundary)?.bdm(table)
}

/// One-dimensional BDM with a string table.
pub fn bdm_string(bits: &[u8], table: &CtmTable, block_len: usize, boundary: Boundary) -> Result<f64> {
    match table.shape() {
        BlockShape::String { max_len } if block_len <= max_len => {}
        other => {
            return Err(Error::Shape(format!("string BDM with blocks of {block_len} cannot use a {other} table")))
        }
    }
    decompose_string(bits, block_len, boundary)?.bdm(table)
}
