//! Bit-packed membership masks over the elements 0..n-1 of a finite group.

use crate::error::{Error, Result};
use std::fmt;

/// A subset of {0, .., len-1}, packed little-endian: bit i = element i.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Mask {
    len: usize,
    words: Vec<u64>,
}

impl Mask {
    pub fn empty(len: usize) -> Self {
        Mask {
            len,
            words: vec![0; len.div_ceil(64)],
        }
    }

    pub fn full(len: usize) -> Self {
        let mut m = Mask::empty(len);
        for i in 0..len {
            m.insert(i);
        }
        m
    }

    pub fn from_elements(len: usize, elems: &[usize]) -> Result<Self> {
        let mut m = Mask::empty(len);
        for &e in elems {
            if e >= len {
                return Err(Error::Input(format!("element {e} out of range 0..{len}")));
            }
            m.insert(e);
        }
        Ok(m)
    }

    pub fn singleton(len: usize, e: usize) -> Self {
        let mut m = Mask::empty(len);
        m.insert(e);
        m
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn insert(&mut self, i: usize) {
        debug_assert!(i < self.len);
        self.words[i / 64] |= 1 << (i % 64);
    }

    pub fn remove(&mut self, i: usize) {
        debug_assert!(i < self.len);
        self.words[i / 64] &= !(1 << (i % 64));
    }

    pub fn contains(&self, i: usize) -> bool {
        debug_assert!(i < self.len);
        self.words[i / 64] >> (i % 64) & 1 == 1
    }

    pub fn count(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.len).filter(move |&i| self.contains(i))
    }

    pub fn elements(&self) -> Vec<usize> {
        self.iter().collect()
    }

    pub fn union(&self, other: &Mask) -> Mask {
        self.zip(other, |a, b| a | b)
    }

    pub fn intersection(&self, other: &Mask) -> Mask {
        self.zip(other, |a, b| a & b)
    }

    pub fn difference(&self, other: &Mask) -> Mask {
        self.zip(other, |a, b| a & !b)
    }

    pub fn symmetric_difference(&self, other: &Mask) -> Mask {
        self.zip(other, |a, b| a ^ b)
    }

    pub fn complement(&self) -> Mask {
        let mut m = self.clone();
        for w in &mut m.words {
            *w = !*w;
        }
        m.trim();
        m
    }

    pub fn intersection_count(&self, other: &Mask) -> usize {
        debug_assert_eq!(self.len, other.len);
        self.words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| (a & b).count_ones() as usize)
            .sum()
    }

    pub fn is_subset_of(&self, other: &Mask) -> bool {
        self.words.iter().zip(&other.words).all(|(a, b)| a & !b == 0)
    }

    pub fn is_disjoint_from(&self, other: &Mask) -> bool {
        self.intersection_count(other) == 0
    }

    /// First (smallest-index) element, if any.
    pub fn first(&self) -> Option<usize> {
        for (k, &w) in self.words.iter().enumerate() {
            if w != 0 {
                return Some(k * 64 + w.trailing_zeros() as usize);
            }
        }
        None
    }

    fn zip(&self, other: &Mask, f: impl Fn(u64, u64) -> u64) -> Mask {
        debug_assert_eq!(self.len, other.len);
        Mask {
            len: self.len,
            words: self
                .words
                .iter()
                .zip(&other.words)
                .map(|(&a, &b)| f(a, b))
                .collect(),
        }
    }

    fn trim(&mut self) {
        let tail = self.len % 64;
        if tail != 0 {
            *self.words.last_mut().unwrap() &= (1u64 << tail) - 1;
        }
    }

    /// Hex rendering of the little-endian bit value, e.g. {0,1,3} -> "0xb".
    pub fn to_hex(&self) -> String {
        let mut s = String::new();
        let mut seen = false;
        for &w in self.words.iter().rev() {
            if seen {
                s.push_str(&format!("{w:016x}"));
            } else if w != 0 {
                s.push_str(&format!("{w:x}"));
                seen = true;
            }
        }
        if !seen {
            s.push('0');
        }
        format!("0x{s}")
    }

    pub fn from_hex(len: usize, hex: &str) -> Result<Self> {
        let digits = hex
            .strip_prefix("0x")
            .or_else(|| hex.strip_prefix("0X"))
            .unwrap_or(hex);
        let mut m = Mask::empty(len);
        let mut bit = 0usize;
        for c in digits.chars().rev() {
            let v = c
                .to_digit(16)
                .ok_or_else(|| Error::Input(format!("bad hex mask {hex:?}")))?;
            for k in 0..4 {
                if v >> k & 1 == 1 {
                    if bit + k >= len {
                        return Err(Error::Input(format!(
                            "mask {hex:?} has bits beyond group order {len}"
                        )));
                    }
                    m.insert(bit + k);
                }
            }
            bit += 4;
        }
        Ok(m)
    }
}

impl fmt::Debug for Mask {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (k, e) in self.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{e}")?;
        }
        write!(f, "}}")
    }
}
