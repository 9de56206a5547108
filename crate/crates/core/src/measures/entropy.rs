use crate::error::{Error, Result};

/// Binary Shannon entropy (bits per symbol) of the 0/1 frequencies in `bits`.
///
/// Only the symbol frequencies matter; ordering is ignored.
pub fn shannon_entropy(bits: &[u8]) -> Result<f64> {
    if bits.is_empty() {
        return Err(Error::Empty("entropy input"));
    }
    let ones = bits.iter().filter(|&&b| b != 0).count();
    let n = bits.len() as f64;
    // both frequencies from counts so that complementing is exact
    Ok(plogp(ones as f64 / n) + plogp((bits.len() - ones) as f64 / n))
}

fn plogp(x: f64) -> f64 {
    if x <= 0.0 {
        0.0
    } else {
        -x * x.log2()
    }
}

/// `-q log2 q - (1-q) log2 (1-q)` with `0 log 0 = 0`.
pub fn binary_entropy(q: f64) -> f64 {
    plogp(q) + plogp(1.0 - q)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn extremes() {
        assert_eq!(shannon_entropy(&[0; 32]).unwrap(), 0.0);
        assert_eq!(shannon_entropy(&[1; 5]).unwrap(), 0.0);
        assert_eq!(shannon_entropy(&[0, 1, 1, 0]).unwrap(), 1.0);
        assert!(shannon_entropy(&[]).is_err());
    }

    #[test]
    fn quarter_density() {
        // 0.25 * 2 + 0.75 * log2(4/3)
        let expected = 0.5 + 0.75 * (4.0f64 / 3.0).log2();
        let h = shannon_entropy(&[1, 0, 0, 0, 0, 1, 0, 0]).unwrap();
        assert!((h - expected).abs() < 1e-15);
        assert!((h - 0.811_278).abs() < 1e-6);
    }

    proptest! {
        #[test]
        fn complement_symmetry_and_bounds(bits in prop::collection::vec(0u8..2, 1..300)) {
            let h = shannon_entropy(&bits).unwrap();
            let flipped: Vec<u8> = bits.iter().map(|b| 1 - b).collect();
            prop_assert_eq!(h, shannon_entropy(&flipped).unwrap());
            prop_assert!((0.0..=1.0).contains(&h));
            let ones = bits.iter().filter(|&&b| b == 1).count();
            prop_assert_eq!(h == 1.0, 2 * ones == bits.len());
        }
    }
}
