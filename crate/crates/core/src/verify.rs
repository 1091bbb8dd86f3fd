//! Structural verification suites.
//!
//! Each suite checks one family of identities behind the factorization —
//! quadrant structure, block unitarity, oracle agreement, operation counts,
//! idempotent zero sets, and the exhaustive small-modulus converse — over
//! seeded random instances. The `verify` subcommand runs the whole battery
//! and fails on any deviation.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::butterfly::build_plan;
use crate::digit_table::{is_conforming, IndexSet};
use crate::error::Result;
use crate::math::gcd;
use crate::oracles::{full_fft, naive_sparse_dft, synthesize, FullSignal};
use crate::spectral::{
    check_unitary_pair, idempotent_of, random_spectral_support, validate_support,
};

/// Tolerance for the exact quadrant identities of the factorization.
pub const BLOCK_IDENTITY_TOL: f64 = 1e-12;
/// Tolerance for E*E = size·Identity on recursive blocks.
pub const UNITARITY_TOL: f64 = 1e-9;

/// Parameters of one verification run.
#[derive(Debug, Clone)]
pub struct VerifyConfig {
    /// Moduli to draw random supports from.
    pub n_values: Vec<u64>,
    /// Random supports per modulus and suite.
    pub trials: u64,
    pub seed: u64,
    /// Relative tolerance for coefficient comparisons.
    pub tolerance: f64,
    /// Also run the exhaustive converse search at n = 8.
    pub exhaustive_small: bool,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        Self {
            n_values: vec![16, 64, 256, 1024],
            trials: 25,
            seed: 0,
            tolerance: 1e-10,
            exhaustive_small: true,
        }
    }
}

/// Outcome of one suite: number of cases checked and any failure messages.
#[derive(Debug, Clone)]
pub struct SuiteReport {
    pub name: &'static str,
    pub cases: u64,
    pub failures: Vec<String>,
}

impl SuiteReport {
    fn new(name: &'static str) -> Self {
        Self {
            name,
            cases: 0,
            failures: Vec::new(),
        }
    }

    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Runs every suite; the report order is fixed.
pub fn run_all(config: &VerifyConfig) -> Result<Vec<SuiteReport>> {
    let mut reports = vec![
        block_identity_suite(config)?,
        block_unitarity_suite(config)?,
        unitary_pairing_suite(config)?,
        oracle_equivalence_suite(config)?,
        fft_reduction_suite(config)?,
        operation_count_suite(config)?,
        idempotent_suite(config)?,
    ];
    if config.exhaustive_small {
        reports.push(exhaustive_converse_suite()?);
    }
    Ok(reports)
}

fn supports_for(
    config: &VerifyConfig,
    suite_salt: u64,
) -> Result<Vec<crate::spectral::SpectralSupport>> {
    let mut out = Vec::new();
    for (ni, &n) in config.n_values.iter().enumerate() {
        let width = n.trailing_zeros();
        for trial in 0..config.trials {
            let seed = config
                .seed
                .wrapping_add(suite_salt)
                .wrapping_add((ni as u64) << 32)
                .wrapping_add(trial);
            let r = (seed % (u64::from(width.min(6)) + 1)) as u32;
            out.push(random_spectral_support(n, r, seed)?);
        }
    }
    Ok(out)
}

/// Largest deviation from the recursive quadrant identities
/// [[M, D·M], [M, −D·M]], descending into the shared upper-left block with
/// the remaining twiddle levels.
pub fn block_identity_error(matrix: &[Vec<Complex64>], levels: &[Vec<Complex64>]) -> f64 {
    let k = matrix.len();
    if k <= 1 {
        return 0.0;
    }
    let half = k / 2;
    let twiddles = &levels[0];
    let mut worst = 0.0f64;
    for a in 0..half {
        for b in 0..half {
            let ul = matrix[a][b];
            let ur = matrix[a][b + half];
            let ll = matrix[a + half][b];
            let lr = matrix[a + half][b + half];
            worst = worst.max((ll - ul).norm());
            worst = worst.max((ur - twiddles[a] * ul).norm());
            worst = worst.max((lr + ur).norm());
        }
    }
    let sub: Vec<Vec<Complex64>> = matrix[..half].iter().map(|row| row[..half].to_vec()).collect();
    worst.max(block_identity_error(&sub, &levels[1..]))
}

/// Largest deviation of E*E from size·Identity (column inner products).
pub fn unitarity_error(matrix: &[Vec<Complex64>]) -> f64 {
    let k = matrix.len();
    let mut worst = 0.0f64;
    for c1 in 0..k {
        for c2 in 0..k {
            let mut acc = Complex64::new(0.0, 0.0);
            for row in matrix {
                acc += row[c1].conj() * row[c2];
            }
            let expected = if c1 == c2 { k as f64 } else { 0.0 };
            worst = worst.max((acc - expected).norm());
        }
    }
    worst
}

fn block_identity_suite(config: &VerifyConfig) -> Result<SuiteReport> {
    let mut report = SuiteReport::new("block-identities");
    for support in supports_for(config, 0x1000)? {
        let plan = build_plan(&support);
        let matrix = plan.submatrix()?;
        let err = block_identity_error(&matrix, plan.levels());
        report.cases += 1;
        if err > BLOCK_IDENTITY_TOL {
            report.failures.push(format!(
                "n={} J={:?}: quadrant deviation {err:.3e}",
                support.n(),
                support.row_order()
            ));
        }
    }
    Ok(report)
}

fn block_unitarity_suite(config: &VerifyConfig) -> Result<SuiteReport> {
    let mut report = SuiteReport::new("block-unitarity");
    for support in supports_for(config, 0x2000)? {
        let plan = build_plan(&support);
        let mut matrix = plan.submatrix()?;
        loop {
            let err = unitarity_error(&matrix);
            report.cases += 1;
            if err > UNITARITY_TOL {
                report.failures.push(format!(
                    "n={} J={:?} block size {}: unitarity deviation {err:.3e}",
                    support.n(),
                    support.row_order(),
                    matrix.len()
                ));
            }
            if matrix.len() <= 1 {
                break;
            }
            let half = matrix.len() / 2;
            matrix = matrix[..half].iter().map(|row| row[..half].to_vec()).collect();
        }
    }
    Ok(report)
}

fn unitary_pairing_suite(config: &VerifyConfig) -> Result<SuiteReport> {
    let mut report = SuiteReport::new("unitary-pairing");
    for support in supports_for(config, 0x3000)? {
        let samples = support.sample_plan();
        report.cases += 1;
        if !check_unitary_pair(&support.as_index_set(), &samples.as_index_set())? {
            report.failures.push(format!(
                "n={} J={:?}: constructed samples {:?} not unitary",
                support.n(),
                support.row_order(),
                samples.column_order()
            ));
        }
    }
    Ok(report)
}

fn oracle_equivalence_suite(config: &VerifyConfig) -> Result<SuiteReport> {
    let mut report = SuiteReport::new("oracle-equivalence");
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed ^ 0x4000);
    for support in supports_for(config, 0x4000)? {
        let plan = build_plan(&support);
        let coefficients: Vec<Complex64> = (0..plan.k())
            .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
            .collect();
        let sample_set = plan.samples().as_index_set();
        let observed = synthesize(&support, &coefficients, &sample_set)?;
        let fast = plan.transform(&observed)?;
        let naive = naive_sparse_dft(&observed, &sample_set, &support.as_index_set())?;
        let scale = support.n() as f64;
        let worst = fast
            .iter()
            .zip(&coefficients)
            .chain(fast.iter().zip(&naive))
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max);
        report.cases += 1;
        if worst > config.tolerance * scale {
            report.failures.push(format!(
                "n={} J={:?}: oracle disagreement {worst:.3e}",
                support.n(),
                support.row_order()
            ));
        }
    }
    Ok(report)
}

fn fft_reduction_suite(config: &VerifyConfig) -> Result<SuiteReport> {
    let mut report = SuiteReport::new("fft-reduction");
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed ^ 0x5000);
    for &n in &config.n_values {
        let support = validate_support(&IndexSet::new(n, (0..n).collect())?)?;
        let plan = build_plan(&support);
        let x = FullSignal::from_fn(n, |_| {
            Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
        })?;
        let samples = plan.gather_samples(|i| x.value_at(i));
        let fast = plan.transform(&samples)?;
        let reference = full_fft(&x);
        let worst = fast
            .iter()
            .zip(&reference)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max);
        report.cases += 1;
        if worst > config.tolerance * n as f64 {
            report.failures.push(format!(
                "n={n}: butterfly vs radix-2 FFT deviation {worst:.3e}"
            ));
        }
    }
    Ok(report)
}

fn operation_count_suite(config: &VerifyConfig) -> Result<SuiteReport> {
    let mut report = SuiteReport::new("operation-count");
    for support in supports_for(config, 0x6000)? {
        let plan = build_plan(&support);
        let x = vec![Complex64::new(0.5, -0.5); plan.k()];
        let (_, stats) = plan.transform_with_stats(&x)?;
        let bound = 2 * plan.k() as u64 * support.log_k() as u64;
        report.cases += 1;
        if stats.total() != plan.operation_count() || plan.operation_count() > bound {
            report.failures.push(format!(
                "n={} J={:?}: counted {} planned {} bound {bound}",
                support.n(),
                support.row_order(),
                stats.total(),
                plan.operation_count()
            ));
        }
    }
    Ok(report)
}

fn idempotent_suite(config: &VerifyConfig) -> Result<SuiteReport> {
    let mut report = SuiteReport::new("idempotent-structure");
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed ^ 0x7000);
    for &n in &config.n_values {
        if n > 256 {
            continue; // convolution check is O(n²) per instance
        }
        for _ in 0..config.trials {
            let elements: Vec<u64> = (0..n).filter(|_| rng.gen::<bool>()).collect();
            if elements.is_empty() {
                continue;
            }
            let support = IndexSet::new(n, elements)?;
            let h = idempotent_of(&support);
            report.cases += 1;

            // h ∗ h = h under circular convolution
            let mut conv_err = 0.0f64;
            for m in 0..n {
                let mut acc = Complex64::new(0.0, 0.0);
                for t in 0..n {
                    acc += h.values()[t as usize] * h.values()[((m + n - t) % n) as usize];
                }
                conv_err = conv_err.max((acc - h.values()[m as usize]).norm());
            }
            if conv_err > config.tolerance {
                report
                    .failures
                    .push(format!("n={n}: h∗h deviates from h by {conv_err:.3e}"));
            }

            // zero set is exactly the union of gcd classes of the divisors
            for i in 0..n {
                if h.is_zero_at(i) != h.zero_divisors().contains(&gcd(i, n)) {
                    report.failures.push(format!(
                        "n={n}: zero set of |J|={} not a union of gcd classes at {i}",
                        support.len()
                    ));
                    break;
                }
            }
        }
    }
    Ok(report)
}

/// Exhaustive converse at n = 8: non-conforming supports of size 2 or 4
/// admit no equal-size unitary sample set; conforming ones admit the
/// constructed set.
fn exhaustive_converse_suite() -> Result<SuiteReport> {
    let mut report = SuiteReport::new("exhaustive-converse-n8");
    let n = 8u64;
    let masks: Vec<u16> = (1u16..256).collect();
    for &j_mask in &masks {
        let size = j_mask.count_ones();
        if size != 2 && size != 4 {
            continue;
        }
        let j_elems: Vec<u64> = (0..n).filter(|&b| j_mask >> b & 1 == 1).collect();
        let j_set = IndexSet::new(n, j_elems)?;
        report.cases += 1;
        if is_conforming(&j_set)? {
            let support = validate_support(&j_set)?;
            let samples = support.sample_plan();
            if !check_unitary_pair(&j_set, &samples.as_index_set())? {
                report.failures.push(format!(
                    "conforming J={:?} rejects its constructed samples",
                    j_set.elements()
                ));
            }
        } else {
            for &i_mask in &masks {
                if i_mask.count_ones() != size {
                    continue;
                }
                let i_elems: Vec<u64> = (0..n).filter(|&b| i_mask >> b & 1 == 1).collect();
                let i_set = IndexSet::new(n, i_elems)?;
                if check_unitary_pair(&j_set, &i_set)? {
                    report.failures.push(format!(
                        "non-conforming J={:?} admits unitary I={:?}",
                        j_set.elements(),
                        i_set.elements()
                    ));
                }
            }
        }
    }
    Ok(report)
}
