//! Release acceptance battery: ten criteria, one test each, every test
//! printing a single pass line (failures panic with the criterion name).
//!
//! Tolerances are pinned here and must not be loosened without a matching
//! change in the library's documented guarantees.

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use spectral_fft::verify::{block_identity_error, unitarity_error};
use spectral_fft::{
    aliasing_recover, build_plan, check_unitary_pair, dft_submatrix, full_fft, idempotent_of,
    is_conforming, naive_sparse_dft_full, pivots_of, random_spectral_support, synthesize_full,
    validate_support, vandermonde_recover, FullSignal, IndexSet,
};

fn set(n: u64, elems: &[u64]) -> IndexSet {
    IndexSet::new(n, elems.to_vec()).unwrap()
}

fn random_coeffs(rng: &mut ChaCha8Rng, k: usize) -> Vec<Complex64> {
    (0..k)
        .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
        .collect()
}

fn max_err(a: &[Complex64], b: &[Complex64]) -> f64 {
    assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

fn inf_norm(a: &[Complex64]) -> f64 {
    a.iter().map(|v| v.norm()).fold(0.0, f64::max)
}

#[test]
fn criterion_01_golden_example_reproduction() {
    let start = Instant::now();
    let raw = set(1024, &[161, 545, 636, 1020]);
    let pivots = pivots_of(&raw).unwrap();
    assert_eq!(pivots.positions(), &[0, 7]);
    assert_eq!(pivots.divisors(), vec![1, 128]);

    let support = validate_support(&raw).unwrap();
    assert_eq!(support.row_order(), &[636, 545, 1020, 161]);

    let samples = support.sample_plan();
    assert_eq!(samples.column_order(), &[0, 512, 4, 516]);
    let ascending: BTreeSet<u64> = samples.column_order().iter().copied().collect();
    assert_eq!(ascending.into_iter().collect::<Vec<_>>(), vec![0, 4, 512, 516]);

    assert!(start.elapsed() < Duration::from_secs(1));
    println!("criterion 01 (golden example reproduction): pass");
}

#[test]
fn criterion_02_reference_matrix_reproduction() {
    let start = Instant::now();
    let matrix = dft_submatrix(1024, &[1, 292, 641, 932], &[316, 384, 828, 896]).unwrap();
    // reference values rounded to 2 decimals, row-major
    let reference = [
        [(-0.36, -0.93), (-0.71, -0.71), (0.36, 0.93), (0.71, 0.71)],
        [(0.77, -0.63), (-1.00, 0.00), (0.77, -0.63), (-1.00, 0.00)],
        [(0.36, 0.93), (-0.71, -0.71), (-0.36, -0.93), (0.71, 0.71)],
        [(-0.77, 0.63), (-1.00, 0.00), (-0.77, 0.63), (-1.00, 0.00)],
    ];
    for (row, expected_row) in matrix.iter().zip(&reference) {
        for (value, &(re, im)) in row.iter().zip(expected_row) {
            assert!(
                (value.re - re).abs() < 0.005 && (value.im - im).abs() < 0.005,
                "entry {value} vs reference ({re}, {im})"
            );
        }
    }
    assert!(unitarity_error(&matrix) < 1e-9);
    assert!(start.elapsed() < Duration::from_secs(1));
    println!("criterion 02 (reference matrix reproduction): pass");
}

#[test]
fn criterion_03_oracle_equivalence_at_scale() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut instances = 0u64;
    for n in [16u64, 64, 256, 1024] {
        let max_r = n.trailing_zeros().min(6);
        for r in 0..=max_r {
            for trial in 0..50u64 {
                let seed = (n << 20) ^ (u64::from(r) << 12) ^ trial;
                let support = random_spectral_support(n, r, seed).unwrap();
                let plan = build_plan(&support);
                let coefficients = random_coeffs(&mut rng, support.k());
                let signal = synthesize_full(&support, &coefficients).unwrap();
                let samples = plan.gather_samples(|i| signal.value_at(i));
                let fast = plan.transform(&samples).unwrap();
                let naive = naive_sparse_dft_full(&signal, &support.as_index_set()).unwrap();
                let scale = inf_norm(&coefficients).max(1e-6);
                assert!(
                    max_err(&fast, &coefficients) / scale <= 1e-10,
                    "n={n} J={:?}: recovery error",
                    support.row_order()
                );
                assert!(
                    max_err(&fast, &naive) / scale <= 1e-10,
                    "n={n} J={:?}: naive disagreement",
                    support.row_order()
                );
                instances += 1;
            }
        }
    }
    assert!(instances >= 4 * 5 * 50);
    assert!(start.elapsed() < Duration::from_secs(60));
    println!("criterion 03 (oracle equivalence, {instances} instances): pass");
}

#[test]
fn criterion_04_reduction_to_radix2_fft() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for log_n in 3u32..=10 {
        let n = 1u64 << log_n;
        let support = validate_support(&set(n, &(0..n).collect::<Vec<_>>())).unwrap();
        let plan = build_plan(&support);
        // canonical column order must be the bit-reversal permutation
        for (pos, &i) in plan.samples().column_order().iter().enumerate() {
            let reversed = (pos as u64).reverse_bits() >> (64 - log_n);
            assert_eq!(i, reversed, "n={n} position {pos}");
        }
        let x = FullSignal::from_fn(n, |_| {
            Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
        })
        .unwrap();
        let samples = plan.gather_samples(|i| x.value_at(i));
        let fast = plan.transform(&samples).unwrap();
        let reference = full_fft(&x);
        assert!(max_err(&fast, &reference) <= 1e-10 * n as f64, "n={n}");
    }
    println!("criterion 04 (reduction to radix-2 FFT): pass");
}

#[test]
fn criterion_05_complexity_recurrence() {
    // exact executed counts at every size, n-independence at fixed k
    for r in 0..=12u32 {
        let k = 1u64 << r;
        let n = k.max(4096);
        let consecutive = validate_support(&set(n, &(0..k).collect::<Vec<_>>())).unwrap();
        let random = random_spectral_support(n, r, 500 + u64::from(r)).unwrap();
        for support in [consecutive, random] {
            let plan = build_plan(&support);
            let x = vec![Complex64::new(0.5, 0.25); plan.k()];
            let (_, stats) = plan.transform_with_stats(&x).unwrap();
            assert_eq!(stats.total(), plan.operation_count(), "k={k}");
            assert!(
                plan.operation_count() <= 2 * k * u64::from(r),
                "k={k}: count above 2k log2 k"
            );
        }
    }
    let counts: Vec<u64> = [1u64 << 10, 1 << 14, 1 << 18]
        .into_iter()
        .map(|n| {
            let support = validate_support(&set(n, &(0..64).collect::<Vec<_>>())).unwrap();
            build_plan(&support).operation_count()
        })
        .collect();
    assert_eq!(counts[0], counts[1]);
    assert_eq!(counts[1], counts[2]);
    println!("criterion 05 (complexity recurrence, k=64 ops={}): pass", counts[0]);
}

#[test]
fn criterion_06_sample_complexity() {
    for (n, elems) in [
        (1024u64, vec![161u64, 545, 636, 1020]),
        (16, vec![5]),
        (8, (0..8).collect()),
        (256, vec![252]),
    ] {
        let support = validate_support(&set(n, &elems)).unwrap();
        let plan = build_plan(&support);
        let mut reads = 0u64;
        let samples = plan.gather_samples(|i| {
            reads += 1;
            Complex64::new(i as f64 / n as f64, 0.0)
        });
        let _ = plan.transform(&samples).unwrap();
        assert_eq!(reads, plan.k() as u64, "n={n}");
    }
    println!("criterion 06 (sample complexity k): pass");
}

#[test]
fn criterion_07_block_identities() {
    for trial in 0..200u64 {
        let n = 1u64 << (3 + trial % 8); // 8..=1024
        let r = (trial % (n.trailing_zeros() as u64 + 1)) as u32;
        let support = random_spectral_support(n, r, 7000 + trial).unwrap();
        let plan = build_plan(&support);
        let matrix = plan.submatrix().unwrap();
        let err = block_identity_error(&matrix, plan.levels());
        assert!(
            err <= 1e-12,
            "trial {trial} n={n} J={:?}: deviation {err:.3e}",
            support.row_order()
        );
    }
    println!("criterion 07 (recursive block identities, 200 supports): pass");
}

#[test]
fn criterion_08_exhaustive_converse_n8() {
    let start = Instant::now();
    let n = 8u64;
    let subsets = |size: u32| -> Vec<IndexSet> {
        (1u16..256)
            .filter(|mask| mask.count_ones() == size)
            .map(|mask| set(n, &(0..n).filter(|&b| mask >> b & 1 == 1).collect::<Vec<_>>()))
            .collect()
    };
    let mut conforming_count = 0u64;
    let mut rejected_count = 0u64;
    for size in [2u32, 4] {
        let candidates = subsets(size);
        for j_set in &candidates {
            if is_conforming(j_set).unwrap() {
                let support = validate_support(j_set).unwrap();
                let samples = support.sample_plan();
                assert!(
                    check_unitary_pair(j_set, &samples.as_index_set()).unwrap(),
                    "conforming J={:?} rejected its samples",
                    j_set.elements()
                );
                conforming_count += 1;
            } else {
                for i_set in &candidates {
                    assert!(
                        !check_unitary_pair(j_set, i_set).unwrap(),
                        "non-conforming J={:?} admits I={:?}",
                        j_set.elements(),
                        i_set.elements()
                    );
                }
                rejected_count += 1;
            }
        }
    }
    assert_eq!(conforming_count + rejected_count, 28 + 70);
    assert!(rejected_count > 0);
    assert!(start.elapsed() < Duration::from_secs(120));
    println!(
        "criterion 08 (exhaustive converse at n=8, {conforming_count} conforming, \
         {rejected_count} rejected): pass"
    );
}

#[test]
fn criterion_09_idempotent_structure() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for n in [16u64, 64, 256] {
        for _ in 0..100 {
            let elements: Vec<u64> = (0..n).filter(|_| rng.gen::<bool>()).collect();
            if elements.is_empty() {
                continue;
            }
            let support = set(n, &elements);
            let h = idempotent_of(&support);

            let mut conv_err = 0.0f64;
            for m in 0..n as usize {
                let mut acc = Complex64::new(0.0, 0.0);
                for t in 0..n as usize {
                    acc += h.values()[t] * h.values()[(m + n as usize - t) % n as usize];
                }
                conv_err = conv_err.max((acc - h.values()[m]).norm());
            }
            assert!(conv_err <= 1e-10, "n={n} |J|={}: h∗h≠h", support.len());

            let divisors: BTreeSet<u64> = h.zero_divisors().iter().copied().collect();
            for i in 0..n {
                let gcd_in = divisors.contains(&gcd(i, n));
                assert_eq!(
                    h.is_zero_at(i),
                    gcd_in,
                    "n={n} |J|={} index {i}",
                    support.len()
                );
            }
        }
    }
    println!("criterion 09 (idempotent structure): pass");
}

#[test]
fn criterion_10_cross_strategy_agreement() {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let consecutive_cases: &[(u64, u64)] =
        &[(1, 8), (2, 8), (2, 16), (4, 16), (4, 32), (8, 32), (8, 64)];
    let periodic_cases: &[(u64, u64)] = &[(2, 16), (4, 64), (8, 256), (16, 1024)];

    for &(k, n) in consecutive_cases {
        let elems: Vec<u64> = (0..k).collect();
        run_cross_strategy(&mut rng, n, &elems);
    }
    for &(k, n) in periodic_cases {
        let stride = n / k;
        let elems: Vec<u64> = (0..k).map(|m| m * stride).collect();
        run_cross_strategy(&mut rng, n, &elems);
    }
    println!("criterion 10 (cross-strategy agreement): pass");
}

fn run_cross_strategy(rng: &mut ChaCha8Rng, n: u64, elems: &[u64]) {
    let support = validate_support(&set(n, elems)).unwrap();
    let plan = build_plan(&support);
    let coefficients = random_coeffs(rng, support.k());
    let signal = synthesize_full(&support, &coefficients).unwrap();
    let scale = inf_norm(&coefficients).max(1e-6);

    let samples = plan.gather_samples(|i| signal.value_at(i));
    let fast = plan.transform(&samples).unwrap();
    assert!(
        max_err(&fast, &coefficients) / scale <= 1e-10,
        "n={n} J={elems:?}: butterfly"
    );

    // both supports here are ascending in row order, matching aliasing output
    let aliased = aliasing_recover(&signal, &support.as_index_set()).unwrap();
    assert!(
        max_err(&aliased, &fast) / scale <= 1e-10,
        "n={n} J={elems:?}: aliasing"
    );

    let consecutive_samples: Vec<Complex64> =
        (0..support.k() as u64).map(|i| signal.value_at(i)).collect();
    let solved = vandermonde_recover(&consecutive_samples, 0, &support).unwrap();
    assert!(
        max_err(&solved, &fast) / scale <= 1e-6,
        "n={n} J={elems:?}: vandermonde"
    );
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}
