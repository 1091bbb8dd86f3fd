//! Binary digit tables over Z_n.
//!
//! Every subset of Z_n (n a power of two) can be viewed as a table whose rows
//! are the binary expansions of its elements, least significant bit first.
//! The *pivots* of the table are the bit positions at which some pair of rows
//! first differs; equivalently, the 2-adic valuations of the pairwise
//! differences. A table is *conforming* when the set size equals 2^(number of
//! pivots), in which case the pivot digits of the rows run through every
//! possible bit tuple exactly once.

use crate::error::{Error, Result};

/// A set of distinct residues modulo a power-of-two `n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IndexSet {
    n: u64,
    elements: Vec<u64>,
}

impl IndexSet {
    /// Validates the modulus and elements. Input order is preserved.
    pub fn new(n: u64, elements: Vec<u64>) -> Result<Self> {
        if n == 0 || !n.is_power_of_two() {
            return Err(Error::UnsupportedModulus(n));
        }
        let mut seen = std::collections::HashSet::with_capacity(elements.len());
        for &e in &elements {
            if e >= n {
                return Err(Error::IndexOutOfRange { index: e, n });
            }
            if !seen.insert(e) {
                return Err(Error::DuplicateIndex(e));
            }
        }
        Ok(Self { n, elements })
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    /// log2 of the modulus; the number of digits per row.
    pub fn bit_width(&self) -> u32 {
        self.n.trailing_zeros()
    }

    pub fn elements(&self) -> &[u64] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }
}

/// Sorted set of pivot bit positions of a digit table.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct PivotSet {
    positions: Vec<u32>,
}

impl PivotSet {
    /// Builds from arbitrary positions; sorts and deduplicates.
    pub fn from_positions(mut positions: Vec<u32>) -> Self {
        positions.sort_unstable();
        positions.dedup();
        Self { positions }
    }

    /// Positions in ascending order (least significant first).
    pub fn positions(&self) -> &[u32] {
        &self.positions
    }

    pub fn len(&self) -> usize {
        self.positions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.positions.is_empty()
    }

    pub fn contains(&self, position: u32) -> bool {
        self.positions.binary_search(&position).is_ok()
    }

    /// The pivots as divisors of n, i.e. 2^d for each position d.
    pub fn divisors(&self) -> Vec<u64> {
        self.positions.iter().map(|&d| 1u64 << d).collect()
    }
}

/// Binary digits of `index` modulo `n`, least significant first.
///
/// Always returns exactly log2(n) digits.
pub fn digits_of(index: u64, n: u64) -> Result<Vec<u8>> {
    if n == 0 || !n.is_power_of_two() {
        return Err(Error::UnsupportedModulus(n));
    }
    if index >= n {
        return Err(Error::IndexOutOfRange { index, n });
    }
    let width = n.trailing_zeros();
    Ok((0..width).map(|b| ((index >> b) & 1) as u8).collect())
}

/// Pivot positions of the digit table of `s`: the set of 2-adic valuations of
/// all pairwise differences.
///
/// Both operands lie in [0, n), so the valuation of the plain integer
/// difference equals the valuation of the difference mod n.
pub fn pivots_of(s: &IndexSet) -> Result<PivotSet> {
    if s.is_empty() {
        return Err(Error::EmptyIndexSet);
    }
    let elems = s.elements();
    let mut positions = Vec::new();
    for (i, &a) in elems.iter().enumerate() {
        for &b in &elems[i + 1..] {
            let diff = a.abs_diff(b);
            let v = diff.trailing_zeros();
            if !positions.contains(&v) {
                positions.push(v);
            }
        }
    }
    Ok(PivotSet::from_positions(positions))
}

/// Whether the digit table of `s` is conforming: |s| = 2^(number of pivots).
pub fn is_conforming(s: &IndexSet) -> Result<bool> {
    let pivots = pivots_of(s)?;
    let expected = 1u64 << pivots.len();
    Ok(s.len() as u64 == expected)
}

/// The digits of `index` at the pivot positions, least significant pivot
/// first. Empty pivots give the empty tuple.
pub fn pivot_tuple(index: u64, pivots: &PivotSet) -> Vec<u8> {
    pivots
        .positions()
        .iter()
        .map(|&d| ((index >> d) & 1) as u8)
        .collect()
}
