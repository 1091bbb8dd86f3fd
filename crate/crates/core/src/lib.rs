//! Sparse DFT computation for signals with known spectral frequency support.
//!
//! When a length-n signal (n a power of two) is known to have its nonzero
//! DFT coefficients confined to a *spectral* set J of size k — one whose
//! binary digit table conforms to its pivot positions — those k
//! coefficients are determined by exactly k time samples, and the
//! restricted DFT operator factors like a radix-2 FFT. This crate builds
//! that factorization and everything around it:
//!
//! - [`digit_table`]: index sets over Z_n, digit expansions, pivots, and
//!   the conformity test.
//! - [`spectral`]: validated supports with their canonical row order, dual
//!   pivots, the derived sample plan (column order), idempotents, and the
//!   unitary-pair test.
//! - [`butterfly`]: the factored sub-operator — per-level twiddle tables
//!   and an in-place O(k log k) executor with exact operation accounting.
//! - [`oracles`]: independent reference paths (naive restricted DFT,
//!   synthesis, Vandermonde solve, aliasing, dense FFT) used to
//!   cross-check the fast path.
//! - [`verify`]: seeded self-check batteries over all of the above.
//! - [`cli`]: the `sfft` command-line front end.
//!
//! The forward kernel is e^{−2πi·mn/N}; recovered coefficients carry the
//! scale k' = n/k from the recovery identity (Fx)_J = k'·F(J,I)·x_I.

pub mod butterfly;
pub mod cli;
pub mod digit_table;
pub mod error;
mod math;
pub mod oracles;
pub mod spectral;
pub mod verify;

pub use butterfly::{build_plan, dft_submatrix, ButterflyPlan, ExecStats, DEFAULT_SUBMATRIX_CAP};
pub use digit_table::{digits_of, is_conforming, pivot_tuple, pivots_of, IndexSet, PivotSet};
pub use error::{Error, Result};
pub use oracles::{
    aliasing_recover, full_fft, naive_sparse_dft, naive_sparse_dft_full, synthesize,
    synthesize_full, vandermonde_recover, FullSignal,
};
pub use spectral::{
    build_sample_plan, check_unitary_pair, dual_pivots, idempotent_of, pivot_rank,
    random_spectral_support, validate_support, Idempotent, PivotScan, SamplePlan, SpectralSupport,
};
pub use verify::{run_all, SuiteReport, VerifyConfig};
