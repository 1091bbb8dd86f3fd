//! Command-line front end.
//!
//! Subcommands: `analyze` (pivots, conformity, sample plan, twiddles),
//! `generate` (seeded random spectral supports, optionally with synthesized
//! sample/coefficient files), `plan` (twiddle schedule), `transform` (samples
//! file → coefficients file), `verify` (the invariant battery) and `bench`
//! (wall time and exact operation counts of the four strategies).
//!
//! File formats: supports are JSON documents `{"n": N, "support": [..]}`;
//! samples and coefficients are delimited text with header `index,re,im` and
//! 17-significant-digit values. Exit codes: 0 success, 2 parse error,
//! 3 not-spectral, 4 numeric verification failure.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::butterfly::{build_plan, ButterflyPlan};
use crate::digit_table::{is_conforming, pivots_of, IndexSet};
use crate::error::Error;
use crate::oracles::{
    aliasing_recover_counted, naive_sparse_dft_counted, synthesize, synthesize_full,
    vandermonde_recover_counted,
};
use crate::spectral::{random_spectral_support, validate_support, SpectralSupport};
use crate::verify::{run_all, VerifyConfig};

pub const EXIT_OK: u8 = 0;
pub const EXIT_PARSE: u8 = 2;
pub const EXIT_NOT_SPECTRAL: u8 = 3;
pub const EXIT_NUMERIC: u8 = 4;

/// Sparse DFT computation for signals with known spectral frequency support.
#[derive(Debug, Parser)]
#[command(name = "sfft", version, about)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Text,
    Delimited,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Report pivots, conformity, sample plan and twiddles of a support
    Analyze {
        /// Support file {"n": N, "support": [..]}
        #[arg(long)]
        input: PathBuf,
        #[arg(long, value_enum, default_value = "text")]
        format: OutputFormat,
    },
    /// Generate a seeded random spectral support
    Generate {
        /// Signal length (power of 2)
        #[arg(long)]
        n: u64,
        /// Support size (power of 2); exclusive with --pivots
        #[arg(long, conflicts_with = "pivots")]
        k: Option<u64>,
        /// Number of pivots r (support size 2^r)
        #[arg(long)]
        pivots: Option<u32>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Where to write the support file
        #[arg(long)]
        output: PathBuf,
        /// Also synthesize a signal and write its canonical samples here
        #[arg(long)]
        samples_out: Option<PathBuf>,
        /// Write the coefficients behind --samples-out here
        #[arg(long)]
        coefficients_out: Option<PathBuf>,
    },
    /// Print the twiddle schedule and operation count of a support
    Plan {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, value_enum, default_value = "text")]
        format: OutputFormat,
        /// Write the schedule here instead of stdout
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Compute coefficients from a samples file
    Transform {
        /// Support file
        #[arg(long)]
        input: PathBuf,
        /// Samples at the canonical index set, column order, index-echoed
        #[arg(long)]
        samples: PathBuf,
        /// Coefficients file to write (natural frequency order)
        #[arg(long)]
        output: PathBuf,
    },
    /// Run the verification battery
    Verify(VerifyArgs),
    /// Benchmark the four computation strategies
    Bench {
        /// Support sizes, comma separated (each a power of 2)
        #[arg(long, value_delimiter = ',', default_value = "1,8,64")]
        k: Vec<u64>,
        /// Signal lengths, comma separated (each a power of 2)
        #[arg(long, value_delimiter = ',', default_value = "1024,4096")]
        n: Vec<u64>,
        /// Repetitions per timing
        #[arg(long, default_value_t = 3)]
        trials: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// Moduli to test, comma separated
    #[arg(long, value_delimiter = ',', default_value = "16,64,256,1024")]
    n: Vec<u64>,
    /// Random supports per modulus and suite
    #[arg(long, default_value_t = 25)]
    trials: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Relative tolerance for coefficient comparisons
    #[arg(long, default_value_t = 1e-10)]
    tolerance: f64,
    /// Skip the exhaustive n = 8 converse search
    #[arg(long)]
    skip_exhaustive: bool,
}

/// On-disk support document.
#[derive(Debug, Serialize, Deserialize)]
pub struct SupportFile {
    pub n: u64,
    pub support: Vec<u64>,
}

#[derive(Debug)]
enum CliError {
    Parse(String),
    NotSpectral(String),
    Numeric(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Parse(_) => EXIT_PARSE,
            CliError::NotSpectral(_) => EXIT_NOT_SPECTRAL,
            CliError::Numeric(_) => EXIT_NUMERIC,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Parse(m) | CliError::NotSpectral(m) | CliError::Numeric(m) => m,
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::NotSpectral { .. } => CliError::NotSpectral(e.to_string()),
            // non-finite data and failed residual checks are numeric failures,
            // everything else is a malformed input
            Error::InvalidInput(_) | Error::IllConditioned(_) => CliError::Numeric(e.to_string()),
            _ => CliError::Parse(e.to_string()),
        }
    }
}

/// Executes a parsed invocation, printing to stdout/stderr; returns the
/// process exit code.
pub fn run(cli: &Cli) -> u8 {
    let result = match &cli.command {
        Command::Analyze { input, format } => cmd_analyze(input, *format),
        Command::Generate {
            n,
            k,
            pivots,
            seed,
            output,
            samples_out,
            coefficients_out,
        } => cmd_generate(
            *n,
            *k,
            *pivots,
            *seed,
            output,
            samples_out.as_deref(),
            coefficients_out.as_deref(),
        ),
        Command::Plan {
            input,
            format,
            output,
        } => cmd_plan(input, *format, output.as_deref()),
        Command::Transform {
            input,
            samples,
            output,
        } => cmd_transform(input, samples, output),
        Command::Verify(args) => cmd_verify(args),
        Command::Bench { k, n, trials, seed } => cmd_bench(k, n, *trials, *seed),
    };
    match result {
        Ok(()) => EXIT_OK,
        Err(e) => {
            eprintln!("sfft: {}", e.message());
            e.exit_code()
        }
    }
}

fn read_support(path: &Path) -> Result<IndexSet, CliError> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::Parse(format!("{}: {e}", path.display())))?;
    let doc: SupportFile = serde_json::from_str(&text)
        .map_err(|e| CliError::Parse(format!("{}: {e}", path.display())))?;
    Ok(IndexSet::new(doc.n, doc.support)?)
}

fn write_text(path: &Path, text: &str) -> Result<(), CliError> {
    fs::write(path, text).map_err(|e| CliError::Parse(format!("{}: {e}", path.display())))
}

fn format_values(rows: &[(u64, Complex64)]) -> String {
    let mut out = String::from("index,re,im\n");
    for &(index, v) in rows {
        let _ = writeln!(out, "{index},{:.16e},{:.16e}", v.re, v.im);
    }
    out
}

fn parse_values(path: &Path) -> Result<Vec<(u64, Complex64)>, CliError> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::Parse(format!("{}: {e}", path.display())))?;
    let mut lines = text.lines().enumerate();
    match lines.next() {
        Some((_, header)) if header.trim() == "index,re,im" => {}
        _ => {
            return Err(CliError::Parse(format!(
                "{}: line 1: expected header \"index,re,im\"",
                path.display()
            )))
        }
    }
    let mut rows = Vec::new();
    for (lineno, line) in lines {
        if line.trim().is_empty() {
            continue;
        }
        let mut fields = line.split(',');
        let parsed = (|| {
            let index = fields.next()?.trim().parse::<u64>().ok()?;
            let re = fields.next()?.trim().parse::<f64>().ok()?;
            let im = fields.next()?.trim().parse::<f64>().ok()?;
            if fields.next().is_some() {
                return None;
            }
            Some((index, Complex64::new(re, im)))
        })();
        match parsed {
            Some(row) => rows.push(row),
            None => {
                return Err(CliError::Parse(format!(
                    "{}: line {}: expected \"index,re,im\" record, got {line:?}",
                    path.display(),
                    lineno + 1
                )))
            }
        }
    }
    Ok(rows)
}

fn describe_support(support: &SpectralSupport) -> String {
    let samples = support.sample_plan();
    let mut ascending = samples.column_order().to_vec();
    ascending.sort_unstable();
    let mut out = String::new();
    let _ = writeln!(out, "n = {}, log2 n = {}", support.n(), support.n().trailing_zeros());
    let _ = writeln!(out, "conforming: yes, k = {}", support.k());
    let _ = writeln!(
        out,
        "support pivots = {:?}, divisors = {:?}",
        support.pivots().positions(),
        support.pivots().divisors()
    );
    let _ = writeln!(
        out,
        "sample pivots = {:?}, divisors = {:?}",
        samples.pivots().positions(),
        samples.pivots().divisors()
    );
    let _ = writeln!(out, "row order (support) = {:?}", support.row_order());
    let _ = writeln!(out, "column order (samples) = {:?}", samples.column_order());
    let _ = writeln!(out, "sample set (ascending) = {ascending:?}");
    let _ = writeln!(out, "scale k' = {}", samples.scale());
    out
}

fn describe_twiddles(plan: &ButterflyPlan, format: OutputFormat) -> String {
    let duals = plan.samples().pivots().divisors();
    let mut out = String::new();
    match format {
        OutputFormat::Text => {
            let _ = writeln!(out, "twiddle levels: {}", plan.levels().len());
            for (l, level) in plan.levels().iter().enumerate() {
                let _ = write!(out, "  level {l} (offset {}):", duals[l]);
                for w in level {
                    let _ = write!(out, " ({:.6},{:.6})", w.re, w.im);
                }
                let _ = writeln!(out);
            }
            let _ = writeln!(out, "operation count = {}", plan.operation_count());
            let _ = writeln!(
                out,
                "operation bound 2k log2 k = {}",
                2 * plan.k() as u64 * plan.levels().len() as u64
            );
        }
        OutputFormat::Delimited => {
            let _ = writeln!(out, "level,index,re,im");
            for (l, level) in plan.levels().iter().enumerate() {
                for (j, w) in level.iter().enumerate() {
                    let _ = writeln!(out, "{l},{j},{:.16e},{:.16e}", w.re, w.im);
                }
            }
        }
    }
    out
}

fn cmd_analyze(input: &Path, format: OutputFormat) -> Result<(), CliError> {
    let raw = read_support(input)?;
    let pivots = pivots_of(&raw)?;
    if !is_conforming(&raw)? {
        return Err(CliError::NotSpectral(format!(
            "support of size {} is not spectral: pivots {:?} require size {}",
            raw.len(),
            pivots.positions(),
            1u64 << pivots.len()
        )));
    }
    let support = validate_support(&raw)?;
    let plan = build_plan(&support);
    match format {
        OutputFormat::Text => {
            print!("{}", describe_support(&support));
            print!("{}", describe_twiddles(&plan, format));
        }
        OutputFormat::Delimited => {
            for line in describe_support(&support).lines() {
                println!("# {line}");
            }
            print!("{}", describe_twiddles(&plan, format));
        }
    }
    Ok(())
}

fn cmd_generate(
    n: u64,
    k: Option<u64>,
    pivots: Option<u32>,
    seed: u64,
    output: &Path,
    samples_out: Option<&Path>,
    coefficients_out: Option<&Path>,
) -> Result<(), CliError> {
    let r = match (k, pivots) {
        (Some(k), None) => {
            if k == 0 || !k.is_power_of_two() {
                return Err(CliError::Parse(format!("--k {k} is not a power of 2")));
            }
            k.trailing_zeros()
        }
        (None, Some(r)) => r,
        (None, None) => return Err(CliError::Parse("one of --k or --pivots is required".into())),
        (Some(_), Some(_)) => unreachable!("clap rejects the combination"),
    };
    println!("# seed={seed} rng=chacha8");
    let support = random_spectral_support(n, r, seed)?;
    let doc = SupportFile {
        n,
        support: support.row_order().to_vec(),
    };
    let json = serde_json::to_string_pretty(&doc)
        .map_err(|e| CliError::Parse(e.to_string()))?;
    write_text(output, &(json + "\n"))?;
    println!(
        "wrote support n={n} k={} pivots={:?} to {}",
        support.k(),
        support.pivots().positions(),
        output.display()
    );

    if samples_out.is_none() && coefficients_out.is_none() {
        return Ok(());
    }
    // fresh draws from the same generator that placed the support digits
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed);
    let coefficients: Vec<Complex64> = (0..support.k())
        .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
        .collect();
    let plan = build_plan(&support);
    if let Some(path) = samples_out {
        let sample_set = plan.samples().as_index_set();
        let values = synthesize(&support, &coefficients, &sample_set)?;
        let rows: Vec<(u64, Complex64)> = plan
            .samples()
            .column_order()
            .iter()
            .copied()
            .zip(values)
            .collect();
        write_text(path, &format_values(&rows))?;
        println!("wrote {} samples to {}", rows.len(), path.display());
    }
    if let Some(path) = coefficients_out {
        let mut rows: Vec<(u64, Complex64)> = support
            .row_order()
            .iter()
            .copied()
            .zip(coefficients.iter().copied())
            .collect();
        rows.sort_by_key(|&(index, _)| index);
        write_text(path, &format_values(&rows))?;
        println!("wrote {} coefficients to {}", rows.len(), path.display());
    }
    Ok(())
}

fn cmd_plan(input: &Path, format: OutputFormat, output: Option<&Path>) -> Result<(), CliError> {
    let support = validate_support(&read_support(input)?)?;
    let plan = build_plan(&support);
    let mut text = String::new();
    if format == OutputFormat::Text {
        text.push_str(&describe_support(&support));
    }
    text.push_str(&describe_twiddles(&plan, format));
    match output {
        Some(path) => {
            write_text(path, &text)?;
            println!("wrote plan for k={} to {}", plan.k(), path.display());
        }
        None => print!("{text}"),
    }
    Ok(())
}

fn cmd_transform(input: &Path, samples: &Path, output: &Path) -> Result<(), CliError> {
    let support = validate_support(&read_support(input)?)?;
    let plan = build_plan(&support);
    let rows = parse_values(samples)?;
    let expected = plan.samples().column_order();
    let provided: Vec<u64> = rows.iter().map(|&(index, _)| index).collect();
    if provided != expected {
        return Err(CliError::Numeric(format!(
            "sample indices {provided:?} do not match the canonical index set \
             {expected:?} (column order)"
        )));
    }
    let values: Vec<Complex64> = rows.iter().map(|&(_, v)| v).collect();
    let coefficients = plan.transform(&values)?;
    let mut records: Vec<(u64, Complex64)> = support
        .row_order()
        .iter()
        .copied()
        .zip(coefficients)
        .collect();
    records.sort_by_key(|&(index, _)| index);
    write_text(output, &format_values(&records))?;
    println!(
        "wrote {} coefficients for n={} to {}",
        records.len(),
        support.n(),
        output.display()
    );
    Ok(())
}

fn cmd_verify(args: &VerifyArgs) -> Result<(), CliError> {
    let config = VerifyConfig {
        n_values: args.n.clone(),
        trials: args.trials,
        seed: args.seed,
        tolerance: args.tolerance,
        exhaustive_small: !args.skip_exhaustive,
    };
    println!("# seed={} rng=chacha8 trials={}", config.seed, config.trials);
    let reports = run_all(&config)?;
    let mut all_passed = true;
    for report in &reports {
        println!(
            "suite={} cases={} failures={} status={}",
            report.name,
            report.cases,
            report.failures.len(),
            if report.passed() { "pass" } else { "fail" }
        );
        for failure in &report.failures {
            eprintln!("  {}: {failure}", report.name);
        }
        all_passed &= report.passed();
    }
    println!("result={}", if all_passed { "pass" } else { "fail" });
    if all_passed {
        Ok(())
    } else {
        Err(CliError::Numeric("verification battery failed".into()))
    }
}

fn median_ns<F: FnMut()>(trials: u64, mut body: F) -> u128 {
    let mut times: Vec<u128> = (0..trials.max(1))
        .map(|_| {
            let start = Instant::now();
            body();
            start.elapsed().as_nanos()
        })
        .collect();
    times.sort_unstable();
    times[times.len() / 2]
}

fn cmd_bench(k_list: &[u64], n_list: &[u64], trials: u64, seed: u64) -> Result<(), CliError> {
    println!("# seed={seed} rng=chacha8 trials={trials}");
    println!("# consecutive support J = {{0..k−1}}, so all four strategies apply");
    println!("k,n,strategy,ops,median_ns");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut butterfly_ops: Vec<(u64, u64, u64)> = Vec::new();
    for &k in k_list {
        if k == 0 || !k.is_power_of_two() {
            return Err(CliError::Parse(format!("--k {k} is not a power of 2")));
        }
        for &n in n_list {
            if n == 0 || !n.is_power_of_two() || k > n {
                return Err(CliError::Parse(format!(
                    "--n {n} must be a power of 2 and at least k = {k}"
                )));
            }
            let support = validate_support(&IndexSet::new(n, (0..k).collect())?)?;
            let plan = build_plan(&support);
            let coefficients: Vec<Complex64> = (0..k)
                .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
                .collect();
            let signal = synthesize_full(&support, &coefficients)?;
            let canonical = plan.samples().as_index_set();
            let canonical_values = plan.gather_samples(|i| signal.value_at(i));
            let consecutive_values: Vec<Complex64> =
                (0..k).map(|i| signal.value_at(i)).collect();

            let ops = plan.operation_count();
            let ns = median_ns(trials, || {
                let _ = plan.transform(&canonical_values).unwrap();
            });
            println!("{k},{n},butterfly,{ops},{ns}");
            butterfly_ops.push((k, n, ops));

            let (_, stats) =
                naive_sparse_dft_counted(&canonical_values, &canonical, &support.as_index_set())?;
            let ns = median_ns(trials, || {
                let _ =
                    naive_sparse_dft_counted(&canonical_values, &canonical, &support.as_index_set())
                        .unwrap();
            });
            println!("{k},{n},naive,{},{ns}", stats.total());

            match vandermonde_recover_counted(&consecutive_values, 0, &support) {
                Ok((_, stats)) => {
                    let ns = median_ns(trials, || {
                        let _ =
                            vandermonde_recover_counted(&consecutive_values, 0, &support).unwrap();
                    });
                    println!("{k},{n},vandermonde,{},{ns}", stats.total());
                }
                Err(Error::IllConditioned(residual)) => {
                    println!("{k},{n},vandermonde,na,na");
                    eprintln!("# vandermonde k={k} n={n}: residual {residual:.3e} over tolerance");
                }
                Err(e) => return Err(e.into()),
            }

            let (_, stats) = aliasing_recover_counted(&signal, &support.as_index_set())?;
            let ns = median_ns(trials, || {
                let _ = aliasing_recover_counted(&signal, &support.as_index_set()).unwrap();
            });
            println!("{k},{n},aliasing,{},{ns}", stats.total());
        }
    }
    for &k in k_list {
        let counts: Vec<u64> = butterfly_ops
            .iter()
            .filter(|&&(bk, _, _)| bk == k)
            .map(|&(_, _, ops)| ops)
            .collect();
        let invariant = counts.windows(2).all(|w| w[0] == w[1]);
        println!(
            "# butterfly ops at k={k} identical across n: {}",
            if invariant { "yes" } else { "no" }
        );
    }
    Ok(())
}
