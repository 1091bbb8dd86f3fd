//! Spectral supports, canonical time-sample sets and convolution idempotents.
//!
//! A frequency support J ⊆ Z_n is spectral exactly when its digit table is
//! conforming. This module validates supports, constructs the canonical
//! time-sample set I (non-pivot digits zero, pivot digits running through all
//! tuples), applies the two lexicographic pivot-digit sort orders, and builds
//! the idempotent h = F⁻¹1_J whose zero set governs which sample sets pair
//! unitarily with J.

use std::collections::BTreeSet;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::digit_table::{is_conforming, pivots_of, IndexSet, PivotSet};
use crate::error::{Error, Result};
use crate::math::{gcd, mul_mod, root_of_unity};

/// Magnitudes below this count as exact zeros of an idempotent. True zeros
/// are exact vanishing sums of roots of unity; the smallest nonzero values
/// observed at n ≤ 1024 sit more than six orders of magnitude above this.
pub const IDEMPOTENT_ZERO_TOL: f64 = 1e-9;

/// Scan direction for the lexicographic pivot-digit orders.
///
/// Rows of the transform (frequency side) compare the most significant pivot
/// digit first; columns (time side) compare the least significant pivot digit
/// first. The two orders are mutually bit-reversed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PivotScan {
    /// Most significant pivot digit decides first (row order).
    HighToLow,
    /// Least significant pivot digit decides first (column order).
    LowToHigh,
}

/// Rank of `index` under the pivot-digit sort; sorting by this key realizes
/// the lexicographic order. Non-pivot digits are ignored.
pub fn pivot_rank(index: u64, pivots: &PivotSet, scan: PivotScan) -> u64 {
    let r = pivots.len();
    let mut rank = 0u64;
    for (j, &d) in pivots.positions().iter().enumerate() {
        let bit = (index >> d) & 1;
        let shift = match scan {
            PivotScan::HighToLow => j,
            PivotScan::LowToHigh => r - 1 - j,
        };
        rank |= bit << shift;
    }
    rank
}

/// A validated spectral support in canonical row order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpectralSupport {
    n: u64,
    support: Vec<u64>,
    pivots: PivotSet,
    log_k: u32,
}

impl SpectralSupport {
    pub fn n(&self) -> u64 {
        self.n
    }

    /// Support elements in row order: sorted by pivot digits, most
    /// significant pivot first, all-zero tuple leading.
    pub fn row_order(&self) -> &[u64] {
        &self.support
    }

    pub fn pivots(&self) -> &PivotSet {
        &self.pivots
    }

    pub fn k(&self) -> usize {
        self.support.len()
    }

    pub fn log_k(&self) -> u32 {
        self.log_k
    }

    /// The canonical sample plan paired with this support.
    pub fn sample_plan(&self) -> SamplePlan {
        build_sample_plan(self)
    }

    pub fn as_index_set(&self) -> IndexSet {
        IndexSet::new(self.n, self.support.clone()).expect("validated support")
    }
}

/// Checks conformity and canonicalizes the row order. Input order is never
/// significant.
pub fn validate_support(raw: &IndexSet) -> Result<SpectralSupport> {
    if raw.is_empty() {
        return Err(Error::EmptyIndexSet);
    }
    let pivots = pivots_of(raw)?;
    if !is_conforming(raw)? {
        return Err(Error::NotSpectral {
            size: raw.len(),
            expected: 1u64 << pivots.len(),
            pivots: pivots.positions().to_vec(),
        });
    }
    let mut support = raw.elements().to_vec();
    support.sort_by_key(|&m| pivot_rank(m, &pivots, PivotScan::HighToLow));
    let log_k = (raw.len() as u64).trailing_zeros();
    Ok(SpectralSupport {
        n: raw.n(),
        support,
        pivots,
        log_k,
    })
}

/// Maps each pivot position d to log2(n) - 1 - d, the position of the
/// divisor n/(2·2^d). The result is again sorted ascending.
pub fn dual_pivots(pivots: &PivotSet, n: u64) -> Result<PivotSet> {
    if n == 0 || !n.is_power_of_two() {
        return Err(Error::UnsupportedModulus(n));
    }
    let width = n.trailing_zeros();
    for &d in pivots.positions() {
        if d >= width {
            return Err(Error::InvalidParameter(format!(
                "pivot position {d} out of range for modulus {n}"
            )));
        }
    }
    Ok(PivotSet::from_positions(
        pivots.positions().iter().map(|&d| width - 1 - d).collect(),
    ))
}

/// The canonical time-sample set for a support, in column order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SamplePlan {
    n: u64,
    samples: Vec<u64>,
    pivots: PivotSet,
    scale: u64,
}

impl SamplePlan {
    pub fn n(&self) -> u64 {
        self.n
    }

    /// Sample indices in column order: sorted by pivot digits, least
    /// significant pivot first. The first entry is always 0.
    pub fn column_order(&self) -> &[u64] {
        &self.samples
    }

    /// Pivots of the sample set (the duals of the support pivots).
    pub fn pivots(&self) -> &PivotSet {
        &self.pivots
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    /// k' = n/k, the scale factor of the recovery formula.
    pub fn scale(&self) -> u64 {
        self.scale
    }

    pub fn as_index_set(&self) -> IndexSet {
        IndexSet::new(self.n, self.samples.clone()).expect("constructed samples")
    }
}

/// Builds the canonical sample set: non-pivot digits zero, pivot digits (at
/// the dual positions) running through all tuples; i.e. all subset sums of
/// {2^d' : d' dual pivot}, sorted in column order.
pub fn build_sample_plan(support: &SpectralSupport) -> SamplePlan {
    let n = support.n();
    let dual = dual_pivots(support.pivots(), n).expect("validated pivots");
    let r = dual.len();
    let k = 1usize << r;
    let mut samples: Vec<u64> = (0..k as u64)
        .map(|mask| {
            dual.positions()
                .iter()
                .enumerate()
                .filter(|(j, _)| (mask >> j) & 1 == 1)
                .map(|(_, &d)| 1u64 << d)
                .sum()
        })
        .collect();
    samples.sort_by_key(|&i| pivot_rank(i, &dual, PivotScan::LowToHigh));
    debug_assert_eq!(samples[0], 0);
    SamplePlan {
        n,
        samples,
        pivots: dual,
        scale: n / k as u64,
    }
}

/// Generates a conforming support of size 2^r with exactly r pivots,
/// deterministically from the seed.
///
/// Construction: pick r pivot positions; every non-pivot digit at position p
/// is a shared random function of the pivot digits below p (a constant when
/// no pivot lies below). Any two rows then first differ at a pivot, and every
/// pivot is realized as a first difference.
pub fn random_spectral_support(n: u64, r: u32, seed: u64) -> Result<SpectralSupport> {
    if n == 0 || !n.is_power_of_two() {
        return Err(Error::UnsupportedModulus(n));
    }
    let width = n.trailing_zeros();
    if r > width {
        return Err(Error::InvalidParameter(format!(
            "pivot count {r} exceeds log2({n}) = {width}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut positions = rand::seq::index::sample(&mut rng, width as usize, r as usize)
        .into_iter()
        .map(|p| p as u32)
        .collect::<Vec<_>>();
    positions.sort_unstable();

    let k = 1usize << r;
    // Per non-pivot position: a lookup table over the pivot digits below it.
    let mut tables: Vec<Option<Vec<bool>>> = vec![None; width as usize];
    for p in 0..width {
        if positions.contains(&p) {
            continue;
        }
        let below = positions.iter().filter(|&&q| q < p).count();
        let table = (0..1usize << below).map(|_| rng.gen::<bool>()).collect();
        tables[p as usize] = Some(table);
    }

    let mut elements = Vec::with_capacity(k);
    for tuple in 0..k as u64 {
        let mut value = 0u64;
        let mut pivot_bits_seen = 0u32;
        for p in 0..width {
            let bit = match &tables[p as usize] {
                None => {
                    let b = (tuple >> pivot_bits_seen) & 1;
                    pivot_bits_seen += 1;
                    b == 1
                }
                Some(table) => {
                    let low = tuple & ((1u64 << pivot_bits_seen) - 1);
                    table[low as usize]
                }
            };
            if bit {
                value |= 1u64 << p;
            }
        }
        elements.push(value);
    }

    let support = validate_support(&IndexSet::new(n, elements)?)?;
    debug_assert_eq!(support.pivots().positions(), positions.as_slice());
    Ok(support)
}

/// The inverse transform of a support indicator, h = F⁻¹1_J, together with
/// the divisors of n classifying its zero set.
#[derive(Debug, Clone)]
pub struct Idempotent {
    n: u64,
    values: Vec<Complex64>,
    zero_divisors: BTreeSet<u64>,
}

impl Idempotent {
    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    /// Divisors d of n such that h vanishes at every index with
    /// gcd(index, n) = d.
    pub fn zero_divisors(&self) -> &BTreeSet<u64> {
        &self.zero_divisors
    }

    pub fn is_zero_at(&self, index: u64) -> bool {
        self.values[(index % self.n) as usize].norm() < IDEMPOTENT_ZERO_TOL
    }
}

/// Evaluates h(m) = (1/n) Σ_{j∈support} e^{2πi·jm/n} for all m and collects
/// the zero-set divisors {gcd(i, n) : h(i) ≈ 0}.
pub fn idempotent_of(support: &IndexSet) -> Idempotent {
    let n = support.n();
    let scale = 1.0 / n as f64;
    let mut values = Vec::with_capacity(n as usize);
    for m in 0..n {
        let mut acc = Complex64::new(0.0, 0.0);
        for &j in support.elements() {
            acc += root_of_unity(mul_mod(j, m, n), n);
        }
        values.push(acc * scale);
    }
    let mut zero_divisors = BTreeSet::new();
    for (i, v) in values.iter().enumerate() {
        if v.norm() < IDEMPOTENT_ZERO_TOL {
            zero_divisors.insert(gcd(i as u64, n));
        }
    }
    Idempotent {
        n,
        values,
        zero_divisors,
    }
}

/// Whether the forward-DFT submatrix with rows `support` and columns
/// `samples` is unitary up to scaling: h_support must vanish at every
/// nonzero pairwise difference of the samples.
pub fn check_unitary_pair(support: &IndexSet, samples: &IndexSet) -> Result<bool> {
    if support.len() != samples.len() {
        return Err(Error::InvalidParameter(format!(
            "support size {} != sample size {}",
            support.len(),
            samples.len()
        )));
    }
    if support.n() != samples.n() {
        return Err(Error::InvalidParameter(format!(
            "support modulus {} != sample modulus {}",
            support.n(),
            samples.n()
        )));
    }
    let n = support.n();
    let h = idempotent_of(support);
    let elems = samples.elements();
    for (a, &i1) in elems.iter().enumerate() {
        for &i2 in &elems[a + 1..] {
            let diff = (i1 + n - i2) % n;
            if !h.is_zero_at(diff) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}
