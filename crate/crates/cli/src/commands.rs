use std::fmt::Write as _;
use std::io::Write;
use std::time::Instant;

use limbadd::bench::{
    self, csv_line, derive_seed, gen_random_operand, gen_worst_case, report_to_csv, Algorithm,
    BenchConfig, BenchRow, RunCounters,
};
use limbadd::{
    add_digitwise, add_digitwise_counted, add_sequential, default_workers, parse_decimal,
    render_decimal, BigNumber, ParallelAdder, ParallelError, ParseError,
};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::args::{AddArgs, AlgoArg, BenchArgs, GenArgs, VerifyArgs};
use crate::io::{append_csv, read_operand, write_output, STDIO};
use crate::{CliError, Result};

/// Operands longer than this are written to files in mismatch reports.
const INLINE_OPERAND_LIMIT: usize = 200;

fn parse_operand(name: &str, text: &str) -> Result<BigNumber> {
    parse_decimal(text).map_err(|e| input_error(name, e))
}

fn input_error(name: &str, e: ParseError) -> CliError {
    CliError::Input(format!("operand {name}: {e}"))
}

pub fn add(args: &AddArgs) -> Result<()> {
    if args.workers.is_some() && args.algo != AlgoArg::Par {
        return Err(CliError::Usage(
            "--workers is only valid with --algo par".into(),
        ));
    }
    if args.a == STDIO && args.b == STDIO {
        return Err(CliError::Usage(
            "only one operand can be read from standard input".into(),
        ));
    }
    let a_text = read_operand(&args.a)?;
    let b_text = read_operand(&args.b)?;

    let workers = args.workers.unwrap_or_else(default_workers);
    if workers == 0 {
        return Err(CliError::Usage("--workers must be at least 1".into()));
    }
    let (sum, counters, workers, seconds) = match args.algo {
        AlgoArg::Seq => {
            let (a, b) = (parse_operand("a", &a_text)?, parse_operand("b", &b_text)?);
            let start = Instant::now();
            let (sum, m) = add_sequential(&a, &b);
            let text = render_decimal(&sum);
            let counters = RunCounters {
                basic_ops: m.basic_ops,
                iterations: m.basic_ops,
                carries: m.carries_generated,
            };
            (text, counters, 1, start.elapsed())
        }
        AlgoArg::Par => {
            let (a, b) = (parse_operand("a", &a_text)?, parse_operand("b", &b_text)?);
            let start = Instant::now();
            let (text, trace) = ParallelAdder::new(workers)
                .add_to_decimal(&a, &b)
                .map_err(|e| CliError::Input(e.to_string()))?;
            let counters = RunCounters {
                basic_ops: trace.basic_ops(),
                iterations: trace.iterations,
                carries: trace.carries_set(),
            };
            (text, counters, workers, start.elapsed())
        }
        AlgoArg::Oracle => {
            // Report which operand is malformed before timing anything.
            parse_operand("a", &a_text)?;
            parse_operand("b", &b_text)?;
            let start = Instant::now();
            let (text, m) = add_digitwise_counted(&a_text, &b_text)
                .map_err(|e| CliError::Input(e.to_string()))?;
            let counters = RunCounters {
                basic_ops: m.digit_ops,
                iterations: m.digit_ops,
                carries: m.carries,
            };
            (text, counters, 1, start.elapsed())
        }
    };

    write_output(&args.out, &format!("{sum}\n"))?;

    if let Some(path) = &args.metrics {
        let row = BenchRow {
            algorithm: args.algo.into(),
            digits: limbadd::canonicalize(&a_text)
                .len()
                .max(limbadd::canonicalize(&b_text).len()),
            workers,
            repetitions: 1,
            mean_seconds: Some(seconds.as_secs_f64()),
            counters: Some(counters),
            error: None,
        };
        append_csv(path, &bench::CSV_HEADER.join(","), &csv_line(&row))?;
    }
    Ok(())
}

/// The adders compared by `verify`; swappable so the mismatch path can be
/// exercised.
#[derive(Clone, Copy)]
pub struct Adders {
    pub sequential: fn(&BigNumber, &BigNumber) -> String,
    pub parallel: fn(&BigNumber, &BigNumber, usize) -> Result<String, ParallelError>,
    pub oracle: fn(&str, &str) -> Result<String, ParseError>,
}

impl Adders {
    pub fn standard() -> Adders {
        Adders {
            sequential: |a, b| render_decimal(&add_sequential(a, b).0),
            parallel: |a, b, m| ParallelAdder::new(m).add_to_decimal(a, b).map(|(s, _)| s),
            oracle: add_digitwise,
        }
    }
}

pub fn verify(args: &VerifyArgs, adders: &Adders, out: &mut dyn Write) -> Result<()> {
    if args.max_digits == 0 {
        return Err(CliError::Usage("--max-digits must be at least 1".into()));
    }
    if args.workers_list.contains(&0) {
        return Err(CliError::Usage(
            "--workers-list entries must be at least 1".into(),
        ));
    }
    let report_io = CliError::io("writing verification report");

    let mut rng = ChaCha8Rng::seed_from_u64(args.seed);
    for trial in 0..args.trials {
        let da = rng.gen_range(1..=args.max_digits);
        let db = rng.gen_range(1..=args.max_digits);
        let a = gen_random_operand(da, derive_seed(args.seed, &[trial as u64, 0]));
        let b = gen_random_operand(db, derive_seed(args.seed, &[trial as u64, 1]));
        let (x, y) = (parse_operand("a", &a)?, parse_operand("b", &b)?);

        let expected = (adders.oracle)(&a, &b).map_err(|e| CliError::Input(e.to_string()))?;
        let mut outputs = vec![("seq".to_owned(), (adders.sequential)(&x, &y))];
        for &m in &args.workers_list {
            let got = match (adders.parallel)(&x, &y, m) {
                Ok(s) => s,
                Err(e) => format!("<error: {e}>"),
            };
            outputs.push((format!("par({m})"), got));
        }

        let bad: Vec<_> = outputs.iter().filter(|(_, s)| *s != expected).collect();
        if !bad.is_empty() {
            let mut msg = String::new();
            let _ = writeln!(msg, "mismatch: seed {} trial {trial}", args.seed);
            let _ = writeln!(
                msg,
                "reproduce: limbadd verify --seed {} --trials {} --max-digits {}",
                args.seed,
                trial + 1,
                args.max_digits
            );
            for (name, text) in [("a", &a), ("b", &b)] {
                let shown = show_operand(args.seed, trial, name, text)?;
                let _ = writeln!(msg, "operand {name}: {shown}");
            }
            let _ = writeln!(msg, "oracle: {}", preview(&expected));
            for (name, got) in bad {
                let _ = writeln!(msg, "{name}: {}", preview(got));
            }
            out.write_all(msg.as_bytes()).map_err(report_io)?;
            return Err(CliError::Mismatch);
        }
    }
    writeln!(
        out,
        "ok: {} trials agree (seq, par {:?}, oracle)",
        args.trials, args.workers_list
    )
    .map_err(report_io)
}

fn show_operand(seed: u64, trial: usize, name: &str, text: &str) -> Result<String> {
    if text.len() <= INLINE_OPERAND_LIMIT {
        return Ok(text.to_owned());
    }
    let path = std::env::temp_dir().join(format!("limbadd-mismatch-{seed}-{trial}-{name}.txt"));
    std::fs::write(&path, text).map_err(CliError::io(format!("writing {}", path.display())))?;
    Ok(format!(
        "{} digits, saved to {}",
        text.len(),
        path.display()
    ))
}

fn preview(text: &str) -> String {
    if text.len() <= INLINE_OPERAND_LIMIT {
        text.to_owned()
    } else {
        format!(
            "{}... ({} digits)",
            &text[..INLINE_OPERAND_LIMIT],
            text.len()
        )
    }
}

pub fn gen(args: &GenArgs) -> Result<()> {
    if args.digits < 1 {
        return Err(CliError::Usage("--digits must be at least 1".into()));
    }
    let text = if args.worst_case {
        let (a, b) = gen_worst_case(args.digits);
        format!("{a}\n{b}\n")
    } else {
        format!("{}\n", gen_random_operand(args.digits, args.seed))
    };
    write_output(STDIO, &text)
}

pub fn bench(args: &BenchArgs) -> Result<()> {
    let config = BenchConfig {
        sizes: args.sizes.clone(),
        algorithms: args.algos.iter().map(|&a| Algorithm::from(a)).collect(),
        worker_counts: args.workers.clone(),
        repetitions: args.reps,
        seed: args.seed,
    };
    let report = bench::run_benchmark(&config).map_err(|e| CliError::Usage(e.to_string()))?;
    for row in &report.rows {
        if let Some(err) = &row.error {
            eprintln!("{} {} digits: {err}", row.algorithm, row.digits);
        }
    }
    let csv = report_to_csv(&report).map_err(|e| CliError::Usage(e.to_string()))?;
    write_output(&args.out, &csv)
}
