use limbadd::{add_sequential, render_decimal, BigNumber, ParallelError};
use limbadd_cli::args::VerifyArgs;
use limbadd_cli::commands::{verify, Adders};
use limbadd_cli::CliError;

fn args(trials: usize, max_digits: usize) -> VerifyArgs {
    VerifyArgs {
        trials,
        max_digits,
        seed: 7,
        workers_list: vec![1, 4],
    }
}

fn off_by_one_at_four(a: &BigNumber, b: &BigNumber, m: usize) -> Result<String, ParallelError> {
    let sum = render_decimal(&add_sequential(a, b).0);
    if m == 4 {
        let (x, _) = add_sequential(&sum.parse().unwrap(), &"1".parse().unwrap());
        Ok(render_decimal(&x))
    } else {
        Ok(sum)
    }
}

#[test]
fn standard_adders_agree() {
    let mut out = Vec::new();
    verify(&args(50, 300), &Adders::standard(), &mut out).unwrap();
    assert!(String::from_utf8(out).unwrap().starts_with("ok: 50 trials"));
}

#[test]
fn injected_fault_reports_seed_and_exit_code() {
    let adders = Adders {
        parallel: off_by_one_at_four,
        ..Adders::standard()
    };
    let mut out = Vec::new();
    let err = verify(&args(5, 50), &adders, &mut out).unwrap_err();
    assert!(matches!(err, CliError::Mismatch));
    assert_eq!(err.exit_code(), std::process::ExitCode::from(1));
    let text = String::from_utf8(out).unwrap();
    assert!(text.contains("mismatch: seed 7 trial 0"), "{text}");
    assert!(text.contains("--seed 7"), "{text}");
    assert!(text.contains("par(4):"), "{text}");
    assert!(!text.contains("par(1):"), "{text}");
}

#[test]
fn huge_operands_go_to_files() {
    let adders = Adders {
        oracle: |_, _| Ok("0".to_owned()),
        ..Adders::standard()
    };
    let mut out = Vec::new();
    let mut a = args(1, 5000);
    a.seed = 12345;
    verify(&a, &adders, &mut out).unwrap_err();
    let text = String::from_utf8(out).unwrap();
    for name in ["a", "b"] {
        let prefix = format!("operand {name}:");
        let line = text.lines().find(|l| l.starts_with(&prefix)).unwrap();
        let path = line.rsplit("saved to ").next().unwrap();
        let saved = std::fs::read_to_string(path).unwrap();
        assert!(saved.len() > 200, "{line}");
        assert!(line.contains(&format!("{} digits", saved.len())), "{line}");
        std::fs::remove_file(path).unwrap();
    }
}
