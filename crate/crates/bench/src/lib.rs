//! Shared inputs for the benchmarks.

use rbnlab_core::turing::{build_frequency_distribution, ctm_from_frequency};
use rbnlab_core::{derive_stream, BitMatrix, CtmTable};

/// Square table derived from the two-state machines; cheap to build.
pub fn small_square_table() -> CtmTable {
    let strings = ctm_from_frequency(&build_frequency_distribution(2, 500).expect("enumeration")).expect("table");
    CtmTable::derive_square(&strings, 4).expect("square table")
}

pub fn random_matrix(rows: usize, cols: usize, seed: u64) -> BitMatrix {
    let mut rng = derive_stream(seed, 0);
    let cells = (0..rows * cols).map(|_| rng.below(2) as u8).collect();
    BitMatrix::from_cells(rows, cols, cells).expect("binary cells")
}
