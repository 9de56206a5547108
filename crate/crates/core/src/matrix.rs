//! Dense binary matrices.

use crate::error::{Error, Result};

/// Row-major matrix of 0/1 cells.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BitMatrix {
    rows: usize,
    cols: usize,
    cells: Vec<u8>,
}

impl BitMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            cells: vec![0; rows * cols],
        }
    }

    /// Builds a matrix from rows of 0/1 values. All rows must have equal length.
    pub fn from_rows<R: AsRef<[u8]>>(rows: &[R]) -> Result<Self> {
        let cols = rows.first().map_or(0, |r| r.as_ref().len());
        let mut cells = Vec::with_capacity(rows.len() * cols);
        for (i, r) in rows.iter().enumerate() {
            let r = r.as_ref();
            if r.len() != cols {
                return Err(Error::Shape(format!(
                    "row {i} has length {} but row 0 has {cols}",
                    r.len()
                )));
            }
            if let Some(&bad) = r.iter().find(|&&b| b > 1) {
                return Err(Error::Shape(format!("row {i} contains non-binary value {bad}")));
            }
            cells.extend_from_slice(r);
        }
        Ok(Self {
            rows: rows.len(),
            cols,
            cells,
        })
    }

    pub fn from_cells(rows: usize, cols: usize, cells: Vec<u8>) -> Result<Self> {
        if cells.len() != rows * cols {
            return Err(Error::Shape(format!(
                "{} cells cannot fill a {rows}x{cols} matrix",
                cells.len()
            )));
        }
        if cells.iter().any(|&b| b > 1) {
            return Err(Error::Shape("matrix cells must be 0 or 1".into()));
        }
        Ok(Self { rows, cols, cells })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> u8 {
        self.cells[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: bool) {
        self.cells[r * self.cols + c] = v as u8;
    }

    pub fn row(&self, r: usize) -> &[u8] {
        &self.cells[r * self.cols..(r + 1) * self.cols]
    }

    /// Row-major concatenation, top row first.
    pub fn cells(&self) -> &[u8] {
        &self.cells
    }

    pub fn count_ones(&self) -> usize {
        self.cells.iter().map(|&b| b as usize).sum()
    }

    /// Tiles the matrix `down` times vertically and `across` times horizontally.
    pub fn tile(&self, down: usize, across: usize) -> Self {
        let mut out = Self::zeros(self.rows * down, self.cols * across);
        for r in 0..out.rows {
            for c in 0..out.cols {
                out.cells[r * out.cols + c] = self.get(r % self.rows, c % self.cols);
            }
        }
        out
    }
}

/// Row-major concatenation of a matrix, top to bottom.
pub fn flatten(matrix: &BitMatrix) -> Vec<u8> {
    matrix.cells().to_vec()
}
