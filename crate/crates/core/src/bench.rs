//! Operand generators and a timing harness for the three adders.
//!
//! Each cell (algorithm, operand size, worker count) gets one untimed warm-up
//! run followed by `repetitions` timed runs. Operands are generated from the
//! seed before timing starts and are identical across algorithms for a given
//! size. Timed work covers the addition and rendering of the decimal result;
//! operand generation and parsing are excluded. The digit-wise oracle reads
//! strings directly, so its digit validation is part of its timed work.

use std::collections::TryReserveError;
use std::fmt;
use std::panic::{self, AssertUnwindSafe};
use std::str::FromStr;
use std::time::{Duration, Instant};

use rand::distributions::Uniform;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::limb::{parse_decimal, render_decimal, BigNumber};
use crate::oracle::add_digitwise_counted;
use crate::paradd::ParallelAdder;
use crate::seqadd::add_sequential;

/// Operand lengths, in decimal digits, of the four standard test cases.
pub const STANDARD_SIZES: [usize; 4] = [20_000, 100_000, 500_000, 1_000_000];

pub const DEFAULT_REPETITIONS: usize = 5;

pub const CSV_HEADER: [&str; 8] = [
    "algorithm",
    "digits",
    "workers",
    "repetitions",
    "mean_seconds",
    "basic_ops",
    "iterations",
    "carries",
];

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BenchError {
    #[error("no operand sizes given")]
    NoSizes,
    #[error("operand size must be at least one digit")]
    ZeroSize,
    #[error("no algorithms selected")]
    NoAlgorithms,
    #[error("repetitions must be at least 1")]
    ZeroRepetitions,
    #[error("parallel algorithm selected without worker counts")]
    NoWorkerCounts,
    #[error("worker count must be at least 1")]
    ZeroWorkers,
    #[error("unknown algorithm {0:?}")]
    UnknownAlgorithm(String),
    #[error("empty report")]
    EmptyReport,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Algorithm {
    Sequential,
    Parallel,
    Oracle,
}

impl Algorithm {
    pub const ALL: [Algorithm; 3] = [
        Algorithm::Sequential,
        Algorithm::Parallel,
        Algorithm::Oracle,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Algorithm::Sequential => "seq",
            Algorithm::Parallel => "par",
            Algorithm::Oracle => "oracle",
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Algorithm {
    type Err = BenchError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "seq" | "sequential" => Ok(Algorithm::Sequential),
            "par" | "parallel" => Ok(Algorithm::Parallel),
            "oracle" => Ok(Algorithm::Oracle),
            other => Err(BenchError::UnknownAlgorithm(other.to_owned())),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BenchConfig {
    pub sizes: Vec<usize>,
    pub algorithms: Vec<Algorithm>,
    /// Only used by the parallel algorithm.
    pub worker_counts: Vec<usize>,
    pub repetitions: usize,
    pub seed: u64,
}

impl Default for BenchConfig {
    fn default() -> Self {
        BenchConfig {
            sizes: STANDARD_SIZES.to_vec(),
            algorithms: Algorithm::ALL.to_vec(),
            worker_counts: vec![4],
            repetitions: DEFAULT_REPETITIONS,
            seed: 0,
        }
    }
}

impl BenchConfig {
    pub fn validate(&self) -> Result<(), BenchError> {
        if self.sizes.is_empty() {
            return Err(BenchError::NoSizes);
        }
        if self.sizes.contains(&0) {
            return Err(BenchError::ZeroSize);
        }
        if self.algorithms.is_empty() {
            return Err(BenchError::NoAlgorithms);
        }
        if self.repetitions == 0 {
            return Err(BenchError::ZeroRepetitions);
        }
        if self.algorithms.contains(&Algorithm::Parallel) {
            if self.worker_counts.is_empty() {
                return Err(BenchError::NoWorkerCounts);
            }
            if self.worker_counts.contains(&0) {
                return Err(BenchError::ZeroWorkers);
            }
        }
        Ok(())
    }
}

/// Counters reported for one addition.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct RunCounters {
    pub basic_ops: usize,
    pub iterations: usize,
    pub carries: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchRow {
    pub algorithm: Algorithm,
    pub digits: usize,
    pub workers: usize,
    pub repetitions: usize,
    /// `None` when the cell failed.
    pub mean_seconds: Option<f64>,
    /// Counters from the first timed repetition.
    pub counters: Option<RunCounters>,
    pub error: Option<String>,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct BenchReport {
    pub rows: Vec<BenchRow>,
}

impl BenchReport {
    pub fn row(&self, algorithm: Algorithm, digits: usize, workers: usize) -> Option<&BenchRow> {
        self.rows
            .iter()
            .find(|r| r.algorithm == algorithm && r.digits == digits && r.workers == workers)
    }

    /// `mean(slow) / mean(fast)` for one operand size, or `None` if either
    /// cell is missing or failed.
    pub fn speedup(
        &self,
        slow: (Algorithm, usize),
        fast: (Algorithm, usize),
        digits: usize,
    ) -> Option<f64> {
        let s = self.row(slow.0, digits, slow.1)?.mean_seconds?;
        let f = self.row(fast.0, digits, fast.1)?.mean_seconds?;
        Some(s / f)
    }
}

/// Uniformly random digit string of exactly `digits` digits with a nonzero
/// leading digit. Deterministic in `seed`.
pub fn gen_random_operand(digits: usize, seed: u64) -> String {
    try_gen_random_operand(digits, seed).expect("operand allocation failed")
}

pub fn try_gen_random_operand(digits: usize, seed: u64) -> Result<String, TryReserveError> {
    assert!(digits >= 1, "operand needs at least one digit");
    let mut buf = Vec::new();
    buf.try_reserve_exact(digits)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    buf.push(rng.gen_range(b'1'..=b'9'));
    buf.extend(
        rng.sample_iter(Uniform::new_inclusive(b'0', b'9'))
            .take(digits - 1),
    );
    Ok(String::from_utf8(buf).expect("ascii digits"))
}

/// `digits` nines plus one: every limb carries.
pub fn gen_worst_case(digits: usize) -> (String, String) {
    assert!(digits >= 1, "operand needs at least one digit");
    ("9".repeat(digits), "1".to_owned())
}

/// Mixes `seed` with further words into a new seed.
pub fn derive_seed(seed: u64, parts: &[u64]) -> u64 {
    parts
        .iter()
        .fold(splitmix64(seed), |h, &p| splitmix64(h ^ p))
}

fn splitmix64(x: u64) -> u64 {
    let mut z = x.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Operand pair for one repetition; repetition `u64::MAX` is the warm-up.
fn operand_pair(seed: u64, digits: usize, rep: u64) -> Result<(String, String), TryReserveError> {
    let a = try_gen_random_operand(digits, derive_seed(seed, &[digits as u64, rep, 0]))?;
    let b = try_gen_random_operand(digits, derive_seed(seed, &[digits as u64, rep, 1]))?;
    Ok((a, b))
}

struct Case {
    text: (String, String),
    parsed: (BigNumber, BigNumber),
}

impl Case {
    fn new(text: (String, String)) -> Case {
        let parsed = (
            parse_decimal(&text.0).expect("generated digits"),
            parse_decimal(&text.1).expect("generated digits"),
        );
        Case { text, parsed }
    }
}

fn run_once(
    algorithm: Algorithm,
    workers: usize,
    case: &Case,
) -> Result<(String, RunCounters), String> {
    match algorithm {
        Algorithm::Sequential => {
            let (sum, m) = add_sequential(&case.parsed.0, &case.parsed.1);
            let counters = RunCounters {
                basic_ops: m.basic_ops,
                iterations: m.basic_ops,
                carries: m.carries_generated,
            };
            Ok((render_decimal(&sum), counters))
        }
        Algorithm::Parallel => {
            let (text, trace) = ParallelAdder::new(workers)
                .add_to_decimal(&case.parsed.0, &case.parsed.1)
                .map_err(|e| e.to_string())?;
            let counters = RunCounters {
                basic_ops: trace.basic_ops(),
                iterations: trace.iterations,
                carries: trace.carries_set(),
            };
            Ok((text, counters))
        }
        Algorithm::Oracle => {
            let (text, m) =
                add_digitwise_counted(&case.text.0, &case.text.1).map_err(|e| e.to_string())?;
            let counters = RunCounters {
                basic_ops: m.digit_ops,
                iterations: m.digit_ops,
                carries: m.carries,
            };
            Ok((text, counters))
        }
    }
}

fn run_cell(
    algorithm: Algorithm,
    workers: usize,
    warmup: &Case,
    cases: &[Case],
) -> Result<(f64, RunCounters), String> {
    let body = || -> Result<(f64, RunCounters), String> {
        std::hint::black_box(run_once(algorithm, workers, warmup)?);
        let mut total = Duration::ZERO;
        let mut first = None;
        for case in cases {
            let start = Instant::now();
            let out = run_once(algorithm, workers, case)?;
            total += start.elapsed();
            let (text, counters) = std::hint::black_box(out);
            drop(text);
            first.get_or_insert(counters);
        }
        let mean = total.as_secs_f64() / cases.len() as f64;
        Ok((mean, first.expect("at least one repetition")))
    };
    match panic::catch_unwind(AssertUnwindSafe(body)) {
        Ok(r) => r,
        Err(_) => Err(format!("{algorithm} run panicked")),
    }
}

/// Runs every (size, algorithm, workers) cell in turn and collects one row
/// per cell.
pub fn run_benchmark(config: &BenchConfig) -> Result<BenchReport, BenchError> {
    config.validate()?;
    let mut report = BenchReport::default();

    for &digits in &config.sizes {
        let mut cells: Vec<(Algorithm, usize)> = Vec::new();
        for &alg in &config.algorithms {
            if alg == Algorithm::Parallel {
                cells.extend(config.worker_counts.iter().map(|&w| (alg, w)));
            } else {
                cells.push((alg, 1));
            }
        }

        let generated = (|| {
            let warmup = Case::new(operand_pair(config.seed, digits, u64::MAX)?);
            let cases = (0..config.repetitions as u64)
                .map(|rep| operand_pair(config.seed, digits, rep).map(Case::new))
                .collect::<Result<Vec<_>, _>>()?;
            Ok::<_, TryReserveError>((warmup, cases))
        })();

        for (algorithm, workers) in cells {
            let outcome = match &generated {
                Ok((warmup, cases)) => run_cell(algorithm, workers, warmup, cases),
                Err(e) => Err(format!("operand allocation failed: {e}")),
            };
            let (mean_seconds, counters, error) = match outcome {
                Ok((mean, c)) => (Some(mean), Some(c), None),
                Err(e) => (None, None, Some(e)),
            };
            report.rows.push(BenchRow {
                algorithm,
                digits,
                workers,
                repetitions: config.repetitions,
                mean_seconds,
                counters,
                error,
            });
        }
    }
    Ok(report)
}

/// Serializes the report as CSV with [`CSV_HEADER`]. Failed cells leave the
/// timing and counter fields empty.
pub fn report_to_csv(report: &BenchReport) -> Result<String, BenchError> {
    if report.rows.is_empty() {
        return Err(BenchError::EmptyReport);
    }
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(CSV_HEADER).expect("write to memory");
    for row in &report.rows {
        w.write_record(csv_fields(row)).expect("write to memory");
    }
    let bytes = w.into_inner().expect("flush to memory");
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

/// One CSV record (no header, no line terminator).
pub fn csv_line(row: &BenchRow) -> String {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new());
    w.write_record(csv_fields(row)).expect("write to memory");
    let mut line = String::from_utf8(w.into_inner().expect("flush to memory")).expect("utf-8");
    line.pop();
    line
}

/// Fields of one CSV row, in [`CSV_HEADER`] order.
pub fn csv_fields(row: &BenchRow) -> [String; 8] {
    let opt = |v: Option<usize>| v.map(|v| v.to_string()).unwrap_or_default();
    [
        row.algorithm.name().to_owned(),
        row.digits.to_string(),
        row.workers.to_string(),
        row.repetitions.to_string(),
        row.mean_seconds.map(format_seconds).unwrap_or_default(),
        opt(row.counters.map(|c| c.basic_ops)),
        opt(row.counters.map(|c| c.iterations)),
        opt(row.counters.map(|c| c.carries)),
    ]
}

/// Seconds in scientific notation with seven significant digits.
pub fn format_seconds(secs: f64) -> String {
    format!("{secs:.6e}")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn random_operand_contract() {
        let one = gen_random_operand(1, 3);
        assert_eq!(one.len(), 1);
        assert!(("1"..="9").contains(&one.as_str()));
        assert_eq!(gen_random_operand(20, 42), gen_random_operand(20, 42));
        assert_ne!(gen_random_operand(20, 42), gen_random_operand(20, 43));
        let big = gen_random_operand(100_000, 9);
        assert_eq!(big.len(), 100_000);
        assert!(big.bytes().all(|b| b.is_ascii_digit()));
        assert_ne!(big.as_bytes()[0], b'0');
    }

    #[test]
    fn worst_case_pairs() {
        assert_eq!(gen_worst_case(4), ("9999".to_owned(), "1".to_owned()));
        let (a, b) = gen_worst_case(18);
        let (sum, m) = add_sequential(&parse_decimal(&a).unwrap(), &parse_decimal(&b).unwrap());
        assert_eq!(m.result_limbs, 2);
        assert_eq!(sum.limb_count(), 2);

        let (a, b) = gen_worst_case(36);
        let (_, trace) = crate::paradd::add_parallel(
            &parse_decimal(&a).unwrap(),
            &parse_decimal(&b).unwrap(),
            2,
        )
        .unwrap();
        // Two iterations over the existing limbs, then the overflow limb.
        assert_eq!(trace.iterations - usize::from(trace.overflow_limb), 2);
        assert_eq!(trace.iterations, 3);
    }

    #[test]
    fn config_validation() {
        assert_eq!(BenchConfig::default().validate(), Ok(()));
        let mut c = BenchConfig::default();
        c.algorithms.clear();
        assert_eq!(c.validate(), Err(BenchError::NoAlgorithms));
        let with = |f: fn(&mut BenchConfig)| {
            let mut c = BenchConfig::default();
            f(&mut c);
            c.validate()
        };
        assert_eq!(
            with(|c| c.repetitions = 0),
            Err(BenchError::ZeroRepetitions)
        );
        assert_eq!(with(|c| c.sizes.clear()), Err(BenchError::NoSizes));
        assert_eq!(with(|c| c.sizes.push(0)), Err(BenchError::ZeroSize));
        assert_eq!(
            with(|c| c.worker_counts = vec![0]),
            Err(BenchError::ZeroWorkers)
        );
        assert_eq!(
            with(|c| c.worker_counts.clear()),
            Err(BenchError::NoWorkerCounts)
        );
        assert_eq!("par".parse::<Algorithm>(), Ok(Algorithm::Parallel));
        assert!("fast".parse::<Algorithm>().is_err());
    }

    #[test]
    fn row_per_cell_and_paired_counters() {
        let config = BenchConfig {
            sizes: vec![20, 40],
            algorithms: vec![
                Algorithm::Sequential,
                Algorithm::Parallel,
                Algorithm::Oracle,
            ],
            worker_counts: vec![1, 2],
            repetitions: 2,
            seed: 11,
        };
        let report = run_benchmark(&config).unwrap();
        assert_eq!(report.rows.len(), 8);
        for row in &report.rows {
            assert!(row.error.is_none());
            assert!(row.mean_seconds.unwrap() >= 0.0);
            assert_eq!(row.repetitions, 2);
        }
        // Same operands in every cell of a size: parallel carries match
        // sequential carries.
        let seq = report
            .row(Algorithm::Sequential, 40, 1)
            .unwrap()
            .counters
            .unwrap();
        let par = report
            .row(Algorithm::Parallel, 40, 2)
            .unwrap()
            .counters
            .unwrap();
        assert_eq!(seq.basic_ops, 3);
        assert_eq!(par.carries, seq.carries);
    }

    #[test]
    fn csv_layout() {
        let report = BenchReport {
            rows: vec![BenchRow {
                algorithm: Algorithm::Sequential,
                digits: 101,
                workers: 1,
                repetitions: 5,
                mean_seconds: Some(0.000_123_456_789),
                counters: Some(RunCounters {
                    basic_ops: 6,
                    iterations: 6,
                    carries: 2,
                }),
                error: None,
            }],
        };
        let csv = report_to_csv(&report).unwrap();
        let lines: Vec<_> = csv.lines().collect();
        assert_eq!(lines.len(), 2);
        assert_eq!(lines[0], CSV_HEADER.join(","));
        assert_eq!(lines[1], "seq,101,1,5,1.234568e-4,6,6,2");
        assert_eq!(csv_line(&report.rows[0]), lines[1]);
        assert_eq!(
            report_to_csv(&BenchReport::default()),
            Err(BenchError::EmptyReport)
        );
    }
}
