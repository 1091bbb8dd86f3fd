//! Planner and executor for the O(k log k) sparse transform.
//!
//! For a spectral support J with canonical sample set I, the forward-DFT
//! submatrix F(J, I) factors recursively into two half-size copies of one
//! shared block M and a diagonal of twiddle factors D:
//!
//! ```text
//!   F(J, I) = [ M   D·M ]     rows:    J split on its largest pivot digit
//!             [ M  −D·M ]     columns: I split on its smallest pivot digit
//! ```
//!
//! [`build_plan`] materializes the per-level twiddle vectors once;
//! [`ButterflyPlan::transform`] then evaluates k' · F(J, I) · x in at most
//! 2k·log2(k) complex operations with the familiar decimation-in-time
//! stage loop.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::math::forward_kernel;
use crate::spectral::{build_sample_plan, SamplePlan, SpectralSupport};

/// Largest k for which [`ButterflyPlan::submatrix`] will materialize the
/// dense k×k matrix.
pub const DEFAULT_SUBMATRIX_CAP: usize = 4096;

const UNIT: Complex64 = Complex64::new(1.0, 0.0);

/// Operation tally of one executor run: complex additions and complex
/// multiplications, excluding the final k scalings by k'.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct ExecStats {
    pub additions: u64,
    pub multiplications: u64,
}

impl ExecStats {
    pub fn total(&self) -> u64 {
        self.additions + self.multiplications
    }
}

/// Precomputed factorization of k' · F(J, I) for one support.
///
/// Immutable after construction; transforms on a shared plan allocate only
/// per-call scratch, so concurrent use is safe.
#[derive(Debug, Clone)]
pub struct ButterflyPlan {
    support: SpectralSupport,
    samples: SamplePlan,
    /// levels[l][j] = e^{−2πi · m_j · 2^{d_l} / n} with m_j the j-th
    /// row-ordered support element and d_l the l-th smallest sample pivot;
    /// level l holds k/2^{l+1} entries.
    levels: Vec<Vec<Complex64>>,
}

/// Builds the twiddle schedule for a validated support.
pub fn build_plan(support: &SpectralSupport) -> ButterflyPlan {
    let samples = build_sample_plan(support);
    let n = support.n();
    let rows = support.row_order();
    let duals = samples.pivots().positions();
    let levels = (0..support.log_k())
        .map(|l| {
            let half = rows.len() >> (l + 1);
            let offset = 1u64 << duals[l as usize];
            rows[..half]
                .iter()
                .map(|&m| forward_kernel(m, offset, n))
                .collect()
        })
        .collect();
    ButterflyPlan {
        support: support.clone(),
        samples,
        levels,
    }
}

impl ButterflyPlan {
    pub fn n(&self) -> u64 {
        self.support.n()
    }

    pub fn k(&self) -> usize {
        self.support.k()
    }

    pub fn support(&self) -> &SpectralSupport {
        &self.support
    }

    pub fn samples(&self) -> &SamplePlan {
        &self.samples
    }

    /// k' = n/k, applied once after the butterfly stages.
    pub fn scale(&self) -> u64 {
        self.samples.scale()
    }

    /// Twiddle vectors per level, outermost split first.
    pub fn levels(&self) -> &[Vec<Complex64>] {
        &self.levels
    }

    /// Reads the signal at the canonical sample indices, in column order,
    /// calling `fetch` exactly k times.
    pub fn gather_samples<F>(&self, mut fetch: F) -> Vec<Complex64>
    where
        F: FnMut(u64) -> Complex64,
    {
        self.samples.column_order().iter().map(|&i| fetch(i)).collect()
    }

    /// Computes the coefficients on J from samples in column order; output is
    /// aligned with the row-ordered support.
    pub fn transform(&self, x_samples: &[Complex64]) -> Result<Vec<Complex64>> {
        self.transform_with_stats(x_samples).map(|(out, _)| out)
    }

    /// [`transform`](Self::transform), also reporting the executed operation
    /// tally (which always equals [`operation_count`](Self::operation_count)).
    pub fn transform_with_stats(
        &self,
        x_samples: &[Complex64],
    ) -> Result<(Vec<Complex64>, ExecStats)> {
        let k = self.k();
        if x_samples.len() != k {
            return Err(Error::InvalidParameter(format!(
                "expected {k} samples, got {}",
                x_samples.len()
            )));
        }
        if let Some(bad) = x_samples.iter().position(|v| !v.is_finite()) {
            return Err(Error::InvalidInput(format!(
                "non-finite sample at position {bad}"
            )));
        }
        let mut buf = x_samples.to_vec();
        let mut stats = ExecStats::default();
        // Innermost combines first: level r−1 acts on blocks of size 2,
        // level 0 joins the two k/2 halves.
        for twiddles in self.levels.iter().rev() {
            let half = twiddles.len();
            let block = 2 * half;
            for base in (0..k).step_by(block) {
                for (j, &w) in twiddles.iter().enumerate() {
                    let v0 = buf[base + j];
                    let v1 = buf[base + half + j];
                    if w == UNIT {
                        buf[base + j] = v0 + v1;
                        buf[base + half + j] = v0 - v1;
                        stats.additions += 2;
                    } else {
                        buf[base + j] = v0 + w * v1;
                        buf[base + half + j] = v0 - w * v1;
                        stats.additions += 2;
                        stats.multiplications += 2;
                    }
                }
            }
        }
        let scale = self.scale() as f64;
        for v in &mut buf {
            *v *= scale;
        }
        Ok((buf, stats))
    }

    /// Exact number of complex additions plus multiplications one transform
    /// performs (final scalings excluded): 2k·log2(k) minus the
    /// multiplications elided for twiddles that are exactly 1.
    pub fn operation_count(&self) -> u64 {
        let mut count = 0u64;
        for (l, twiddles) in self.levels.iter().enumerate() {
            let blocks = 1u64 << l;
            for &w in twiddles {
                count += 2 * blocks;
                if w != UNIT {
                    count += 2 * blocks;
                }
            }
        }
        count
    }

    /// Materializes F(J, I) with rows in row order and columns in column
    /// order, refusing above [`DEFAULT_SUBMATRIX_CAP`].
    pub fn submatrix(&self) -> Result<Vec<Vec<Complex64>>> {
        self.submatrix_with_cap(DEFAULT_SUBMATRIX_CAP)
    }

    pub fn submatrix_with_cap(&self, cap: usize) -> Result<Vec<Vec<Complex64>>> {
        if self.k() > cap {
            return Err(Error::ResourceLimit {
                requested: self.k(),
                cap,
            });
        }
        dft_submatrix(
            self.n(),
            self.support.row_order(),
            self.samples.column_order(),
        )
    }
}

/// Dense forward-DFT submatrix with entry (j, i) = e^{−2πi·rows[j]·cols[i]/n},
/// rows and columns taken in the listed order.
pub fn dft_submatrix(n: u64, rows: &[u64], cols: &[u64]) -> Result<Vec<Vec<Complex64>>> {
    if n == 0 || !n.is_power_of_two() {
        return Err(Error::UnsupportedModulus(n));
    }
    for &v in rows.iter().chain(cols.iter()) {
        if v >= n {
            return Err(Error::IndexOutOfRange { index: v, n });
        }
    }
    Ok(rows
        .iter()
        .map(|&m| cols.iter().map(|&i| forward_kernel(m, i, n)).collect())
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::digit_table::IndexSet;
    use crate::spectral::{random_spectral_support, validate_support};
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn plan_for(n: u64, elems: &[u64]) -> ButterflyPlan {
        let support = validate_support(&IndexSet::new(n, elems.to_vec()).unwrap()).unwrap();
        build_plan(&support)
    }

    fn kernel(num: i64, den: u64) -> Complex64 {
        let angle = -2.0 * std::f64::consts::PI * num as f64 / den as f64;
        Complex64::new(angle.cos(), angle.sin())
    }

    fn matvec(m: &[Vec<Complex64>], x: &[Complex64]) -> Vec<Complex64> {
        m.iter()
            .map(|row| row.iter().zip(x).map(|(a, b)| a * b).sum())
            .collect()
    }

    fn close(a: &[Complex64], b: &[Complex64], tol: f64) -> bool {
        a.len() == b.len() && a.iter().zip(b).all(|(x, y)| (x - y).norm() <= tol)
    }

    #[test]
    fn two_point_plan() {
        let plan = plan_for(2, &[0, 1]);
        assert_eq!(plan.levels().len(), 1);
        assert_eq!(plan.levels()[0], vec![UNIT]);
        let m = plan.submatrix().unwrap();
        let one = Complex64::new(1.0, 0.0);
        assert!(close(&m[0], &[one, one], 1e-15));
        assert!(close(&m[1], &[one, -one], 1e-15));
    }

    #[test]
    fn full_group_twiddles_are_classical() {
        let plan = plan_for(8, &[0, 1, 2, 3, 4, 5, 6, 7]);
        for (m, w) in plan.levels()[0].iter().enumerate() {
            assert!((w - kernel(m as i64, 8)).norm() < 1e-15);
        }
        for (m, w) in plan.levels()[1].iter().enumerate() {
            assert!((w - kernel(2 * m as i64, 8)).norm() < 1e-15);
        }
        assert_eq!(plan.levels()[2], vec![UNIT]);
    }

    #[test]
    fn worked_example_twiddles() {
        let plan = plan_for(1024, &[161, 545, 636, 1020]);
        let level0 = &plan.levels()[0];
        assert!((level0[0] - kernel(636 * 4, 1024)).norm() < 1e-12);
        assert!((level0[1] - kernel(545 * 4, 1024)).norm() < 1e-12);
        // 636·512 ≡ 0 (mod 1024), so the top-level twiddle collapses to 1
        assert_eq!(plan.levels()[1], vec![UNIT]);
        for level in plan.levels() {
            for w in level {
                assert!((w.norm() - 1.0).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn dc_only_support_scales_by_n() {
        let plan = plan_for(16, &[0]);
        let c = Complex64::new(0.25, -1.5);
        let out = plan.transform(&[c]).unwrap();
        assert!(close(&out, &[c * 16.0], 1e-12));
        assert_eq!(plan.operation_count(), 0);
    }

    #[test]
    fn all_ones_four_point() {
        let plan = plan_for(4, &[0, 1, 2, 3]);
        assert_eq!(plan.samples().column_order(), &[0, 2, 1, 3]);
        let one = Complex64::new(1.0, 0.0);
        let out = plan.transform(&[one; 4]).unwrap();
        let zero = Complex64::new(0.0, 0.0);
        assert!(close(&out, &[one * 4.0, zero, zero, zero], 1e-12));
    }

    #[test]
    fn transform_matches_materialized_factorization() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for seed in 0..25 {
            let r = (seed % 6) as u32;
            let support = random_spectral_support(1024, r, seed).unwrap();
            let plan = build_plan(&support);
            let m = plan.submatrix().unwrap();
            let x: Vec<Complex64> = (0..plan.k())
                .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
                .collect();
            let direct: Vec<Complex64> = matvec(&m, &x)
                .into_iter()
                .map(|v| v * plan.scale() as f64)
                .collect();
            let fast = plan.transform(&x).unwrap();
            let worst = fast
                .iter()
                .zip(&direct)
                .map(|(a, b)| (a - b).norm())
                .fold(0.0, f64::max);
            assert!(worst < 1e-9 * plan.n() as f64, "support {:?}", support.row_order());
        }
    }

    #[test]
    fn operation_count_examples() {
        assert_eq!(plan_for(16, &[0]).operation_count(), 0);

        let two = plan_for(16, &[0, 3]);
        assert!(two.operation_count() <= 4);

        let eight = plan_for(8, &[0, 1, 2, 3, 4, 5, 6, 7]);
        // every level elides exactly its m = 0 twiddle: 48 − (2 + 4 + 8)
        assert_eq!(eight.operation_count(), 34);
        assert!(eight.operation_count() <= 2 * 8 * 3);
    }

    #[test]
    fn operation_count_matches_executed_stats() {
        for seed in 0..20 {
            let r = (seed % 7) as u32;
            let support = random_spectral_support(4096, r, 100 + seed).unwrap();
            let plan = build_plan(&support);
            let x = vec![Complex64::new(1.0, -1.0); plan.k()];
            let (_, stats) = plan.transform_with_stats(&x).unwrap();
            assert_eq!(stats.total(), plan.operation_count());
            assert!(plan.operation_count() <= 2 * plan.k() as u64 * support.log_k() as u64);
        }
    }

    #[test]
    fn gather_reads_each_sample_once() {
        let plan = plan_for(1024, &[161, 545, 636, 1020]);
        let mut reads = Vec::new();
        let gathered = plan.gather_samples(|i| {
            reads.push(i);
            Complex64::new(i as f64, 0.0)
        });
        assert_eq!(reads, vec![0, 512, 4, 516]);
        assert_eq!(gathered.len(), 4);
    }

    #[test]
    fn transform_rejects_bad_input() {
        let plan = plan_for(4, &[0, 1, 2, 3]);
        assert!(matches!(
            plan.transform(&[Complex64::new(1.0, 0.0)]),
            Err(Error::InvalidParameter(_))
        ));
        let mut x = vec![Complex64::new(1.0, 0.0); 4];
        x[2] = Complex64::new(f64::NAN, 0.0);
        assert!(matches!(plan.transform(&x), Err(Error::InvalidInput(_))));
    }

    #[test]
    fn submatrix_respects_cap() {
        let plan = plan_for(4, &[0, 1, 2, 3]);
        assert!(matches!(
            plan.submatrix_with_cap(2),
            Err(Error::ResourceLimit { requested: 4, cap: 2 })
        ));
        assert!(plan.submatrix_with_cap(4).is_ok());
    }

    #[test]
    fn dft_submatrix_reference_values() {
        let m = dft_submatrix(1024, &[1, 292, 641, 932], &[316, 384, 828, 896]).unwrap();
        // reference values are rounded to 2 decimals, so compare per component
        let d00 = m[0][0] - Complex64::new(-0.36, -0.93);
        assert!(d00.re.abs() < 0.005 && d00.im.abs() < 0.005);
        let d10 = m[1][0] - Complex64::new(0.77, -0.63);
        assert!(d10.re.abs() < 0.005 && d10.im.abs() < 0.005);
        assert!(close(
            &dft_submatrix(1024, &[0], &[0]).unwrap()[0],
            &[Complex64::new(1.0, 0.0)],
            1e-15
        ));
    }

    #[test]
    fn dft_submatrix_validates_inputs() {
        assert!(dft_submatrix(12, &[0], &[0]).is_err());
        assert!(dft_submatrix(8, &[8], &[0]).is_err());
    }

    proptest! {
        #[test]
        fn transform_is_linear(seed in 0u64..200) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let r = rng.gen_range(0..=5u32);
            let support = random_spectral_support(256, r, seed).unwrap();
            let plan = build_plan(&support);
            let k = plan.k();
            let rand_vec = |rng: &mut ChaCha8Rng| -> Vec<Complex64> {
                (0..k).map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect()
            };
            let x = rand_vec(&mut rng);
            let y = rand_vec(&mut rng);
            let a = Complex64::new(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0));
            let b = Complex64::new(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0));
            let mixed: Vec<Complex64> = x.iter().zip(&y).map(|(u, v)| a * u + b * v).collect();
            let lhs = plan.transform(&mixed).unwrap();
            let fx = plan.transform(&x).unwrap();
            let fy = plan.transform(&y).unwrap();
            let scale = plan.n() as f64;
            for ((l, u), v) in lhs.iter().zip(&fx).zip(&fy) {
                prop_assert!((l - (a * u + b * v)).norm() <= 1e-10 * scale);
            }
        }

        #[test]
        fn twiddles_are_unit_magnitude(seed in 0u64..200) {
            let r = (seed % 7) as u32;
            let support = random_spectral_support(1024, r, seed).unwrap();
            let plan = build_plan(&support);
            prop_assert_eq!(plan.levels().len(), r as usize);
            for (l, level) in plan.levels().iter().enumerate() {
                prop_assert_eq!(level.len(), plan.k() >> (l + 1));
                for w in level {
                    prop_assert!((w.norm() - 1.0).abs() < 1e-12);
                }
            }
        }
    }
}
