use std::fmt;

use crate::error::{Error, Result};

/// A point of `{0,1}^n`. Position `i` (0-based) holds feature `f_{i+1}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Instance(Vec<bool>);

impl Instance {
    pub fn new(bits: Vec<bool>) -> Self {
        Instance(bits)
    }

    pub fn zeros(n: usize) -> Self {
        Instance(vec![false; n])
    }

    /// Instance whose `i`-th feature is bit `n-1-i` of `code`, so that
    /// counting `code` upwards walks `{0,1}^n` in lexicographic order.
    pub fn from_code(code: u64, n: usize) -> Self {
        debug_assert!(n <= 64);
        Instance((0..n).map(|i| (code >> (n - 1 - i)) & 1 == 1).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn bits(&self) -> &[bool] {
        &self.0
    }

    pub fn get(&self, i: usize) -> bool {
        self.0[i]
    }

    pub fn set(&mut self, i: usize, value: bool) {
        self.0[i] = value;
    }

    pub fn toggle(&mut self, i: usize) {
        self.0[i] = !self.0[i];
    }

    pub fn complement(&self) -> Instance {
        Instance(self.0.iter().map(|b| !b).collect())
    }

    pub fn ensure_len(&self, n: usize) -> Result<()> {
        if self.len() == n {
            Ok(())
        } else {
            Err(Error::DimensionMismatch {
                expected: n,
                found: self.len(),
            })
        }
    }
}

impl From<Vec<bool>> for Instance {
    fn from(bits: Vec<bool>) -> Self {
        Instance(bits)
    }
}

impl fmt::Display for Instance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in &self.0 {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

/// Number of positions where `x` and `y` differ.
pub fn hamming(x: &Instance, y: &Instance) -> Result<usize> {
    y.ensure_len(x.len())?;
    Ok(x.0.iter().zip(&y.0).filter(|(a, b)| a != b).count())
}

/// Complements every feature of `x` whose 0-based index is in `features`.
/// Indices listed twice cancel out.
pub fn flip(x: &Instance, features: &[usize]) -> Result<Instance> {
    let mut y = x.clone();
    for &i in features {
        if i >= x.len() {
            return Err(Error::IndexOutOfRange {
                index: i + 1,
                n: x.len(),
            });
        }
        y.toggle(i);
    }
    Ok(y)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn inst(s: &str) -> Instance {
        Instance(s.bytes().map(|b| b == b'1').collect())
    }

    #[test]
    fn hamming_examples() {
        assert_eq!(hamming(&inst("011"), &inst("000")).unwrap(), 2);
        assert_eq!(hamming(&inst("011"), &inst("011")).unwrap(), 0);
        assert_eq!(hamming(&inst("101"), &inst("001")).unwrap(), 1);
        assert!(matches!(
            hamming(&inst("01"), &inst("011")),
            Err(Error::DimensionMismatch { expected: 2, found: 3 })
        ));
    }

    #[test]
    fn flip_examples() {
        let x = inst("011");
        assert_eq!(flip(&x, &[1, 2]).unwrap(), inst("000"));
        assert_eq!(flip(&x, &[]).unwrap(), x);
        assert_eq!(flip(&flip(&x, &[0, 2]).unwrap(), &[0, 2]).unwrap(), x);
        assert_eq!(
            flip(&x, &[3]),
            Err(Error::IndexOutOfRange { index: 4, n: 3 })
        );
    }

    #[test]
    fn codes_enumerate_lexicographically() {
        let all: Vec<_> = (0..8).map(|c| Instance::from_code(c, 3)).collect();
        assert_eq!(all[0], inst("000"));
        assert_eq!(all[3], inst("011"));
        assert_eq!(all[4], inst("100"));
        assert!(all.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn display_is_bitstring() {
        assert_eq!(inst("0110").to_string(), "0110");
    }
}
