//! Coding-theorem complexity tables and their text format.
//!
//! ```text
//! ctm square 4
//! fallback 27.5
//! 0000000000000000 9.25
//! ...
//! ```
//!
//! The `fallback` line is optional; when absent the fallback is the
//! largest entry plus one bit.

use std::collections::HashMap;
use std::fmt;

use crate::error::{Error, Result};

/// Longest block a table can key, in cells.
pub const MAX_BLOCK_CELLS: usize = 64;

/// A binary block of up to 64 cells, packed big-endian (first cell is the
/// most significant of the `len` low bits).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Block {
    len: u8,
    bits: u64,
}

impl Block {
    pub fn from_cells(cells: &[u8]) -> Result<Self> {
        if cells.is_empty() || cells.len() > MAX_BLOCK_CELLS {
            return Err(Error::Shape(format!(
                "blocks must have 1..={MAX_BLOCK_CELLS} cells, got {}",
                cells.len()
            )));
        }
        let bits = cells.iter().fold(0u64, |acc, &b| (acc << 1) | (b & 1) as u64);
        Ok(Self {
            len: cells.len() as u8,
            bits,
        })
    }

    pub(crate) fn from_packed(len: usize, bits: u64) -> Self {
        debug_assert!((1..=MAX_BLOCK_CELLS).contains(&len));
        Self { len: len as u8, bits }
    }

    pub fn len(&self) -> usize {
        self.len as usize
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn packed(&self) -> u64 {
        self.bits
    }

    pub fn cell(&self, i: usize) -> u8 {
        ((self.bits >> (self.len as usize - 1 - i)) & 1) as u8
    }

    pub fn cells(&self) -> Vec<u8> {
        (0..self.len()).map(|i| self.cell(i)).collect()
    }

    pub fn complement(&self) -> Self {
        let mask = if self.len == 64 { u64::MAX } else { (1u64 << self.len) - 1 };
        Self {
            len: self.len,
            bits: !self.bits & mask,
        }
    }

    pub fn reverse(&self) -> Self {
        Self {
            len: self.len,
            bits: self.bits.reverse_bits() >> (64 - self.len as u32),
        }
    }
}

impl fmt::Display for Block {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.len() {
            f.write_str(if self.cell(i) == 1 { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl std::str::FromStr for Block {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let cells = s
            .chars()
            .map(|c| match c {
                '0' => Ok(0),
                '1' => Ok(1),
                other => Err(Error::Shape(format!("bad block character {other:?}"))),
            })
            .collect::<Result<Vec<u8>>>()?;
        Block::from_cells(&cells)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BlockShape {
    /// Strings of length `1..=max_len`.
    String { max_len: usize },
    /// `side x side` squares, serialized row-major.
    Square { side: usize },
}

impl BlockShape {
    fn admits(&self, block: &Block) -> bool {
        match *self {
            BlockShape::String { max_len } => block.len() <= max_len,
            BlockShape::Square { side } => block.len() == side * side,
        }
    }
}

impl fmt::Display for BlockShape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BlockShape::String { max_len } => write!(f, "string {max_len}"),
            BlockShape::Square { side } => write!(f, "square {side}"),
        }
    }
}

/// Map from block to complexity in bits, plus a value for blocks the table
/// has never seen.
#[derive(Debug, Clone, PartialEq)]
pub struct CtmTable {
    shape: BlockShape,
    entries: HashMap<Block, f64>,
    fallback: f64,
}

impl CtmTable {
    /// Builds a table with fallback = largest entry + 1 bit.
    pub fn new(shape: BlockShape, entries: HashMap<Block, f64>) -> Result<Self> {
        let max = entries.values().copied().fold(0.0f64, f64::max);
        Self::with_fallback(shape, entries, max + 1.0)
    }

    pub fn with_fallback(shape: BlockShape, entries: HashMap<Block, f64>, fallback: f64) -> Result<Self> {
        match shape {
            BlockShape::String { max_len } if max_len == 0 || max_len > MAX_BLOCK_CELLS => {
                return Err(Error::Shape(format!("string tables need max_len in 1..={MAX_BLOCK_CELLS}")))
            }
            BlockShape::Square { side } if side == 0 || side * side > MAX_BLOCK_CELLS => {
                return Err(Error::Shape("square tables need side in 1..=8".into()))
            }
            _ => {}
        }
        for (b, &v) in &entries {
            if !shape.admits(b) {
                return Err(Error::Shape(format!("block {b} does not fit a {shape} table")));
            }
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::param("ctm", format!("value {v} for block {b} must be positive")));
            }
        }
        let max = entries.values().copied().fold(0.0f64, f64::max);
        if !(fallback.is_finite() && fallback >= max && fallback > 0.0) {
            return Err(Error::param("fallback", format!("{fallback} is below the table maximum {max}")));
        }
        Ok(Self {
            shape,
            entries,
            fallback,
        })
    }

    pub fn shape(&self) -> BlockShape {
        self.shape
    }

    pub fn fallback(&self) -> f64 {
        self.fallback
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, block: &Block) -> Option<f64> {
        self.entries.get(block).copied()
    }

    /// Entries sorted by (length, packed bits).
    pub fn sorted_entries(&self) -> Vec<(Block, f64)> {
        let mut v: Vec<_> = self.entries.iter().map(|(b, v)| (*b, *v)).collect();
        v.sort_by_key(|(b, _)| *b);
        v
    }

    /// Entry value, or the fallback for blocks absent from the table.
    pub fn lookup(&self, block: &Block) -> Result<f64> {
        if !self.shape.admits(block) {
            return Err(Error::Shape(format!("block {block} does not fit a {} table", self.shape)));
        }
        Ok(self.entries.get(block).copied().unwrap_or(self.fallback))
    }

    /// Serializes to the text format, entries sorted, values with 17
    /// significant digits.
    pub fn to_text(&self) -> String {
        let mut out = format!("ctm {}\nfallback {}\n", self.shape, format_sig17(self.fallback));
        for (b, v) in self.sorted_entries() {
            out.push_str(&format!("{b} {}\n", format_sig17(v)));
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
        let (hl, header) = lines.next().ok_or(Error::Empty("CTM table file"))?;
        let parts: Vec<&str> = header.split_whitespace().collect();
        let bad_header = || Error::Parse {
            line: hl,
            reason: "header must be `ctm <string|square> <size>`".into(),
        };
        let [tag, kind, size] = parts[..] else {
            return Err(bad_header());
        };
        if tag != "ctm" {
            return Err(bad_header());
        }
        let size: usize = size.parse().map_err(|_| bad_header())?;
        let shape = match kind {
            "string" => BlockShape::String { max_len: size },
            "square" => BlockShape::Square { side: size },
            _ => return Err(bad_header()),
        };

        let mut entries = HashMap::new();
        let mut fallback = None;
        for (ln, line) in lines {
            let parse_err = |reason: String| Error::Parse { line: ln, reason };
            let mut it = line.split_whitespace();
            let (Some(key), Some(value), None) = (it.next(), it.next(), it.next()) else {
                return Err(parse_err("expected `<block> <value>`".into()));
            };
            let value: f64 = value
                .parse()
                .map_err(|_| parse_err(format!("bad value {value:?}")))?;
            if !(value.is_finite() && value > 0.0) {
                return Err(parse_err(format!("value {value} must be positive")));
            }
            if key == "fallback" {
                fallback = Some(value);
                continue;
            }
            let block: Block = key.parse().map_err(|e: Error| parse_err(e.to_string()))?;
            if !shape.admits(&block) {
                return Err(parse_err(format!("block {key} does not fit a {shape} table")));
            }
            if entries.insert(block, value).is_some() {
                return Err(parse_err(format!("duplicate block {key}")));
            }
        }
        let table = match fallback {
            Some(f) => Self::with_fallback(shape, entries, f),
            None => Self::new(shape, entries),
        };
        table.map_err(|e| Error::Parse { line: hl, reason: e.to_string() })
    }

    /// Square table over every `side x side` block, each valued by the
    /// cheaper of its row-wise and column-wise string decompositions:
    /// `sum over distinct lines (CTM(line) + log2 multiplicity)`.
    pub fn derive_square(strings: &CtmTable, side: usize) -> Result<Self> {
        let BlockShape::String { max_len } = strings.shape else {
            return Err(Error::Shape("square tables derive from string tables".into()));
        };
        if side == 0 || side > max_len || side > 4 {
            return Err(Error::Shape(format!(
                "derived square side must be in 1..=min(4, {max_len}), got {side}"
            )));
        }
        let cells = side * side;
        let line_value: Vec<f64> = (0..1u64 << side)
            .map(|bits| strings.lookup(&Block::from_packed(side, bits)))
            .collect::<Result<_>>()?;
        let decompose = |lines: &mut [u64]| -> f64 {
            lines.sort_unstable();
            let mut total = 0.0;
            let mut i = 0;
            while i < lines.len() {
                let mut j = i;
                while j < lines.len() && lines[j] == lines[i] {
                    j += 1;
                }
                total += line_value[lines[i] as usize] + ((j - i) as f64).log2();
                i = j;
            }
            total
        };
        let mut entries = HashMap::with_capacity(1 << cells);
        let mut rows = vec![0u64; side];
        let mut cols = vec![0u64; side];
        for bits in 0..1u64 << cells {
            let block = Block::from_packed(cells, bits);
            rows.iter_mut().for_each(|r| *r = 0);
            cols.iter_mut().for_each(|c| *c = 0);
            for r in 0..side {
                for c in 0..side {
                    let b = block.cell(r * side + c) as u64;
                    rows[r] = (rows[r] << 1) | b;
                    cols[c] = (cols[c] << 1) | b;
                }
            }
            let value = decompose(&mut rows).min(decompose(&mut cols));
            entries.insert(block, value);
        }
        Self::new(BlockShape::Square { side }, entries)
    }
}

/// Decimal with 17 significant digits, which round-trips any finite f64.
pub fn format_sig17(v: f64) -> String {
    if v == 0.0 || !v.is_finite() {
        return format!("{v}");
    }
    let magnitude = v.abs().log10().floor() as i32;
    let decimals = (16 - magnitude).max(0) as usize;
    format!("{v:.decimals$}")
}
