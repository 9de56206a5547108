//! Randomness measures on binary strings and matrices: Shannon entropy,
//! LZW compressibility and BDM.

pub mod bdm;
pub mod ctm;
pub mod entropy;
pub mod lzw;

pub use bdm::{bdm, bdm_string, decompose_matrix, decompose_string, BlockDecomposition, Boundary};
pub use ctm::{Block, BlockShape, CtmTable};
pub use entropy::shannon_entropy;
pub use lzw::{compressibility_rate, lzw_decode, lzw_encode, LzwEncoding};

use crate::error::Result;
use crate::matrix::BitMatrix;

/// Block geometry used for two-dimensional BDM.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BdmOptions {
    pub block_side: usize,
    pub boundary: Boundary,
}

impl Default for BdmOptions {
    fn default() -> Self {
        Self {
            block_side: 4,
            boundary: Boundary::Ignore,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RandomnessReport {
    /// Bits per symbol.
    pub entropy: f64,
    /// Encoded bits per input bit.
    pub lzw_rate: f64,
    /// Bits.
    pub bdm: f64,
}

/// Entropy and LZW rate of the row-major flattening, BDM of the matrix.
pub fn randomness_report(matrix: &BitMatrix, table: &CtmTable) -> Result<RandomnessReport> {
    randomness_report_with(matrix, table, BdmOptions::default())
}

pub fn randomness_report_with(matrix: &BitMatrix, table: &CtmTable, opts: BdmOptions) -> Result<RandomnessReport> {
    let flat = matrix.cells();
    Ok(RandomnessReport {
        entropy: shannon_entropy(flat)?,
        lzw_rate: compressibility_rate(flat)?,
        bdm: bdm(matrix, table, opts.block_side, opts.boundary)?,
    })
}
