//! Independent reference implementations used for cross-validation and
//! benchmarks: direct kernel summation, naive synthesis, dense Vandermonde
//! recovery from consecutive samples, the aliasing fast path for consecutive
//! and periodic supports, and a standard radix-2 FFT.
//!
//! None of these share code with the butterfly executor, so agreement between
//! the paths is meaningful evidence of correctness.

use num_complex::Complex64;

use crate::butterfly::ExecStats;
use crate::digit_table::IndexSet;
use crate::error::{Error, Result};
use crate::math::{forward_kernel, inverse_kernel};
use crate::spectral::SpectralSupport;

/// Residual tolerance of [`vandermonde_recover`]; solutions whose backward
/// error exceeds this are rejected as ill-conditioned.
pub const VANDERMONDE_RESIDUAL_TOL: f64 = 1e-8;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// A dense time-domain signal of power-of-two length.
#[derive(Debug, Clone, PartialEq)]
pub struct FullSignal {
    values: Vec<Complex64>,
}

impl FullSignal {
    pub fn new(values: Vec<Complex64>) -> Result<Self> {
        let n = values.len() as u64;
        if n == 0 || !n.is_power_of_two() {
            return Err(Error::UnsupportedModulus(n));
        }
        Ok(Self { values })
    }

    pub fn from_fn<F: FnMut(u64) -> Complex64>(n: u64, mut f: F) -> Result<Self> {
        if n == 0 || !n.is_power_of_two() {
            return Err(Error::UnsupportedModulus(n));
        }
        Ok(Self {
            values: (0..n).map(&mut f).collect(),
        })
    }

    pub fn n(&self) -> u64 {
        self.values.len() as u64
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn value_at(&self, index: u64) -> Complex64 {
        self.values[(index % self.n()) as usize]
    }
}

/// Direct evaluation of the DFT at the support frequencies from samples at
/// `at`: scale · Σ_{i∈at} x(i) e^{−2πi·j·i/n} with scale = n/|at|.
///
/// With `at` = Z_n this is the plain O(nk) restriction of the DFT; with `at`
/// a unitary sample set of size k it evaluates the k' recovery formula in
/// O(k²). The caller guarantees the samples suffice. Output is aligned with
/// the listed order of `support`.
pub fn naive_sparse_dft(
    x_samples: &[Complex64],
    at: &IndexSet,
    support: &IndexSet,
) -> Result<Vec<Complex64>> {
    naive_sparse_dft_counted(x_samples, at, support).map(|(c, _)| c)
}

/// [`naive_sparse_dft`] with an exact tally of the kernel multiplications
/// and additions performed (final scalings excluded).
pub fn naive_sparse_dft_counted(
    x_samples: &[Complex64],
    at: &IndexSet,
    support: &IndexSet,
) -> Result<(Vec<Complex64>, ExecStats)> {
    if at.n() != support.n() {
        return Err(Error::InvalidParameter(format!(
            "sample modulus {} != support modulus {}",
            at.n(),
            support.n()
        )));
    }
    if at.len() < support.len() {
        return Err(Error::InvalidParameter(format!(
            "{} samples cannot determine {} coefficients",
            at.len(),
            support.len()
        )));
    }
    if x_samples.len() != at.len() {
        return Err(Error::InvalidParameter(format!(
            "expected {} sample values, got {}",
            at.len(),
            x_samples.len()
        )));
    }
    let n = at.n();
    let scale = n as f64 / at.len() as f64;
    let mut stats = ExecStats::default();
    let coefficients = support
        .elements()
        .iter()
        .map(|&j| {
            let mut acc = ZERO;
            for (&i, &x) in at.elements().iter().zip(x_samples) {
                acc += x * forward_kernel(j, i, n);
                stats.additions += 1;
                stats.multiplications += 1;
            }
            stats.additions -= 1; // k values need k−1 additions
            acc * scale
        })
        .collect();
    Ok((coefficients, stats))
}

/// [`naive_sparse_dft`] over an entire signal: Σ_t x(t) e^{−2πi·j·t/n}.
pub fn naive_sparse_dft_full(x: &FullSignal, support: &IndexSet) -> Result<Vec<Complex64>> {
    if support.n() != x.n() {
        return Err(Error::InvalidParameter(format!(
            "support modulus {} != signal length {}",
            support.n(),
            x.n()
        )));
    }
    let n = x.n();
    Ok(support
        .elements()
        .iter()
        .map(|&j| {
            x.values()
                .iter()
                .enumerate()
                .map(|(t, &v)| v * forward_kernel(j, t as u64, n))
                .sum()
        })
        .collect())
}

/// Naive inverse evaluation x(i) = (1/n) Σ_j c_j e^{+2πi·i·j/n} at each
/// requested index, with coefficients aligned to the row-ordered support.
pub fn synthesize(
    support: &SpectralSupport,
    coefficients: &[Complex64],
    at: &IndexSet,
) -> Result<Vec<Complex64>> {
    if coefficients.len() != support.k() {
        return Err(Error::InvalidParameter(format!(
            "expected {} coefficients, got {}",
            support.k(),
            coefficients.len()
        )));
    }
    if at.n() != support.n() {
        return Err(Error::InvalidParameter(format!(
            "index modulus {} != support modulus {}",
            at.n(),
            support.n()
        )));
    }
    let n = support.n();
    let scale = 1.0 / n as f64;
    Ok(at
        .elements()
        .iter()
        .map(|&i| {
            let sum: Complex64 = support
                .row_order()
                .iter()
                .zip(coefficients)
                .map(|(&j, &c)| c * inverse_kernel(i, j, n))
                .sum();
            sum * scale
        })
        .collect())
}

/// [`synthesize`] over all of Z_n.
pub fn synthesize_full(support: &SpectralSupport, coefficients: &[Complex64]) -> Result<FullSignal> {
    let n = support.n();
    let all = IndexSet::new(n, (0..n).collect())?;
    FullSignal::new(synthesize(support, coefficients, &all)?)
}

/// Recovers the coefficients from k samples at consecutive indices
/// offset, offset+1, …, offset+k−1 (mod n) by solving the k×k system
/// F⁻¹(I, J)·c = x_I with partially pivoted elimination.
///
/// The system is Vandermonde, hence invertible, but may be poorly
/// conditioned; solutions are validated against
/// [`VANDERMONDE_RESIDUAL_TOL`]. Output is aligned with the row-ordered
/// support.
pub fn vandermonde_recover(
    x_samples: &[Complex64],
    offset: u64,
    support: &SpectralSupport,
) -> Result<Vec<Complex64>> {
    vandermonde_recover_counted(x_samples, offset, support).map(|(c, _)| c)
}

/// [`vandermonde_recover`] with an exact operation tally (divisions counted
/// as multiplications; the residual check is not counted).
pub fn vandermonde_recover_counted(
    x_samples: &[Complex64],
    offset: u64,
    support: &SpectralSupport,
) -> Result<(Vec<Complex64>, ExecStats)> {
    let k = support.k();
    if x_samples.len() != k {
        return Err(Error::InvalidParameter(format!(
            "expected {k} samples, got {}",
            x_samples.len()
        )));
    }
    let n = support.n();
    if offset >= n {
        return Err(Error::InvalidParameter(format!(
            "offset {offset} out of range for modulus {n}"
        )));
    }
    let inv_n = 1.0 / n as f64;
    let matrix: Vec<Vec<Complex64>> = (0..k as u64)
        .map(|i| {
            support
                .row_order()
                .iter()
                .map(|&j| inverse_kernel((offset + i) % n, j, n) * inv_n)
                .collect()
        })
        .collect();
    let mut stats = ExecStats::default();
    let solution = lu_solve(matrix.clone(), x_samples.to_vec(), &mut stats)?;

    // backward-error check on the original system
    let mut residual = 0.0f64;
    let mut rhs_norm = 1.0f64;
    for (row, &b) in matrix.iter().zip(x_samples) {
        let ax: Complex64 = row.iter().zip(&solution).map(|(&a, &c)| a * c).sum();
        residual = residual.max((ax - b).norm());
        rhs_norm = rhs_norm.max(b.norm());
    }
    if residual / rhs_norm > VANDERMONDE_RESIDUAL_TOL {
        return Err(Error::IllConditioned(residual / rhs_norm));
    }
    Ok((solution, stats))
}

/// Gaussian elimination with partial pivoting on a dense complex system.
fn lu_solve(
    mut a: Vec<Vec<Complex64>>,
    mut b: Vec<Complex64>,
    stats: &mut ExecStats,
) -> Result<Vec<Complex64>> {
    let k = b.len();
    for col in 0..k {
        let pivot = (col..k)
            .max_by(|&p, &q| {
                a[p][col]
                    .norm_sqr()
                    .total_cmp(&a[q][col].norm_sqr())
            })
            .expect("non-empty pivot range");
        if a[pivot][col].norm_sqr() == 0.0 {
            return Err(Error::IllConditioned(f64::INFINITY));
        }
        a.swap(col, pivot);
        b.swap(col, pivot);
        for row in col + 1..k {
            let factor = a[row][col] / a[col][col];
            stats.multiplications += 1;
            for idx in col + 1..k {
                let scaled = factor * a[col][idx];
                a[row][idx] -= scaled;
                stats.multiplications += 1;
                stats.additions += 1;
            }
            let scaled = factor * b[col];
            b[row] -= scaled;
            stats.multiplications += 1;
            stats.additions += 1;
        }
    }
    let mut x = vec![ZERO; k];
    for col in (0..k).rev() {
        let mut acc = b[col];
        for idx in col + 1..k {
            acc -= a[col][idx] * x[idx];
            stats.multiplications += 1;
            stats.additions += 1;
        }
        x[col] = acc / a[col][col];
        stats.multiplications += 1;
    }
    Ok(x)
}

/// O(k log k) recovery for the two aliasing-friendly support shapes
/// (k must divide n):
///
/// - consecutive J = {0, 1, …, k−1}: downsample at stride k' = n/k, take a
///   k-point DFT, scale by k';
/// - periodic J = {0, k', 2k', …}: the signal is k-periodic, so transform
///   the first k samples and scale by k'.
///
/// Output is aligned with the ascending support order.
pub fn aliasing_recover(x: &FullSignal, support: &IndexSet) -> Result<Vec<Complex64>> {
    aliasing_recover_counted(x, support).map(|(c, _)| c)
}

/// [`aliasing_recover`] with the exact tally of the inner k-point FFT
/// (final scalings excluded).
pub fn aliasing_recover_counted(
    x: &FullSignal,
    support: &IndexSet,
) -> Result<(Vec<Complex64>, ExecStats)> {
    if support.n() != x.n() {
        return Err(Error::InvalidParameter(format!(
            "support modulus {} != signal length {}",
            support.n(),
            x.n()
        )));
    }
    let n = x.n();
    let k = support.len() as u64;
    if n % k != 0 {
        return Err(Error::InvalidParameter(format!(
            "support size {k} does not divide {n}"
        )));
    }
    let stride = n / k;
    let mut sorted = support.elements().to_vec();
    sorted.sort_unstable();
    let consecutive = sorted.iter().enumerate().all(|(m, &j)| j == m as u64);
    let periodic = sorted
        .iter()
        .enumerate()
        .all(|(m, &j)| j == m as u64 * stride);
    let samples = if consecutive {
        FullSignal::from_fn(k, |i| x.value_at(i * stride))?
    } else if periodic {
        FullSignal::from_fn(k, |i| x.value_at(i))?
    } else {
        return Err(Error::InvalidParameter(
            "support is neither consecutive {0..k−1} nor periodic {0, n/k, …}".into(),
        ));
    };
    let (mut spectrum, stats) = full_fft_counted(&samples);
    let scale = stride as f64;
    for v in &mut spectrum {
        *v *= scale;
    }
    Ok((spectrum, stats))
}

/// Standard iterative radix-2 decimation-in-time FFT, used as ground truth.
pub fn full_fft(x: &FullSignal) -> Vec<Complex64> {
    full_fft_counted(x).0
}

/// [`full_fft`] with an exact operation tally (multiplications by the
/// leading unit twiddle of each block are elided).
pub fn full_fft_counted(x: &FullSignal) -> (Vec<Complex64>, ExecStats) {
    let n = x.n() as usize;
    let mut stats = ExecStats::default();
    if n == 1 {
        return (x.values().to_vec(), stats);
    }
    let bits = x.n().trailing_zeros();
    let mut buf = vec![ZERO; n];
    for (i, &v) in x.values().iter().enumerate() {
        let rev = (i as u64).reverse_bits() >> (64 - bits);
        buf[rev as usize] = v;
    }
    let mut len = 2usize;
    while len <= n {
        let half = len / 2;
        let twiddles: Vec<Complex64> = (0..half)
            .map(|j| forward_kernel(j as u64, 1, len as u64))
            .collect();
        for base in (0..n).step_by(len) {
            for (j, &w) in twiddles.iter().enumerate() {
                let top = base + j;
                let bot = base + half + j;
                let t = if w == ONE {
                    buf[bot]
                } else {
                    stats.multiplications += 1;
                    w * buf[bot]
                };
                let v0 = buf[top];
                buf[top] = v0 + t;
                buf[bot] = v0 - t;
                stats.additions += 2;
            }
        }
        len *= 2;
    }
    (buf, stats)
}
