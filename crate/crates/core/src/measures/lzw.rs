//! LZW over the binary alphabet with variable-width code accounting.
//!
//! The dictionary starts as `"0" -> 0`, `"1" -> 1`. Each emitted code is
//! charged `ceil(log2(size))` bits, where `size` is the dictionary size
//! before the phrase triggered by that emission is inserted. The final code
//! (end of input) is charged at the final dictionary size.

use crate::error::{Error, Result};

const NONE: u32 = u32::MAX;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LzwEncoding {
    pub codes: Vec<u32>,
    pub total_bits: u64,
}

#[inline]
fn code_width(dict_size: usize) -> u64 {
    // ceil(log2(n)) for n >= 2
    (usize::BITS - (dict_size - 1).leading_zeros()) as u64
}

pub fn lzw_encode(bits: &[u8]) -> Result<LzwEncoding> {
    if bits.is_empty() {
        return Err(Error::Empty("LZW input"));
    }
    // trie: children[code][symbol] -> code of phrase + symbol
    let mut children: Vec<[u32; 2]> = vec![[NONE; 2]; 2];
    let mut codes = Vec::new();
    let mut total_bits = 0u64;

    let mut current = bits[0] as u32 & 1;
    for &b in &bits[1..] {
        let sym = (b & 1) as usize;
        let next = children[current as usize][sym];
        if next != NONE {
            current = next;
            continue;
        }
        total_bits += code_width(children.len());
        codes.push(current);
        children[current as usize][sym] = children.len() as u32;
        children.push([NONE; 2]);
        current = sym as u32;
    }
    total_bits += code_width(children.len());
    codes.push(current);
    Ok(LzwEncoding { codes, total_bits })
}

pub fn lzw_decode(codes: &[u32]) -> Result<Vec<u8>> {
    let Some((&first, rest)) = codes.split_first() else {
        return Err(Error::MalformedCodes("empty code stream".into()));
    };
    // phrase[c] = (prefix code, last symbol, first symbol); roots have no prefix
    let mut phrases: Vec<(u32, u8, u8)> = vec![(NONE, 0, 0), (NONE, 1, 1)];
    let expand = |phrases: &[(u32, u8, u8)], code: u32, out: &mut Vec<u8>| {
        let start = out.len();
        let mut c = code;
        while c != NONE {
            let (prefix, sym, _) = phrases[c as usize];
            out.push(sym);
            c = prefix;
        }
        out[start..].reverse();
    };

    if first > 1 {
        return Err(Error::MalformedCodes(format!("first code {first} is not a root symbol")));
    }
    let mut out = Vec::new();
    expand(&phrases, first, &mut out);
    let mut previous = first;
    for (i, &code) in rest.iter().enumerate() {
        let size = phrases.len() as u32;
        let first_sym = if code < size {
            phrases[code as usize].2
        } else if code == size {
            // phrase being defined by this very code: previous + previous[0]
            phrases[previous as usize].2
        } else {
            return Err(Error::MalformedCodes(format!(
                "code {code} at position {} exceeds dictionary size {size}",
                i + 1
            )));
        };
        let prev_first = phrases[previous as usize].2;
        phrases.push((previous, first_sym, prev_first));
        expand(&phrases, code, &mut out);
        previous = code;
    }
    Ok(out)
}

/// Encoded bits per input bit.
pub fn compressibility_rate(bits: &[u8]) -> Result<f64> {
    let enc = lzw_encode(bits)?;
    Ok(enc.total_bits as f64 / bits.len() as f64)
}
