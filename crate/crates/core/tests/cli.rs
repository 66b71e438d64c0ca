//! The `krylov-or` binary: outputs, determinism and exit codes.

use std::path::Path;
use std::process::{Command, Output};

use krylov_or::experiments::read_csv;

fn run(args: &[&str], out: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_krylov-or"))
        .args(args)
        .arg("--out")
        .arg(out)
        .output()
        .expect("binary runs")
}

const SMALL: [(&str, &[&str]); 5] = [
    ("sign-compare", &["--n", "200", "--k-max", "20"]),
    ("spectrum-cdf", &["--k-max", "6"]),
    ("proxy-rational", &["--k-max", "20", "--quad-points", "8"]),
    (
        "squared-system",
        &[
            "--spectrum",
            "intervals",
            "1:10:400",
            "--k-max",
            "30",
            "--c",
            "0.05",
        ],
    ),
    (
        "restart-compare",
        &["--n", "300", "--k-max", "60", "--restart-lengths", "10,inf"],
    ),
];

#[test]
fn every_experiment_writes_identical_outputs_twice() {
    for (name, extra) in SMALL {
        let mut args = vec![name];
        args.extend_from_slice(extra);
        let first = tempfile::tempdir().unwrap();
        let second = tempfile::tempdir().unwrap();
        let a = run(&args, first.path());
        assert!(
            a.status.success(),
            "{name}: {}",
            String::from_utf8_lossy(&a.stderr)
        );
        let b = run(&args, second.path());
        assert!(b.status.success());
        let csv_a = std::fs::read(first.path().join(format!("{name}.csv"))).unwrap();
        let csv_b = std::fs::read(second.path().join(format!("{name}.csv"))).unwrap();
        assert_eq!(csv_a, csv_b, "{name} output differs between runs");
        assert!(csv_a.starts_with(b"method,k,matvecs,norm,error\n"));
        let reports = read_csv(&csv_a[..]).unwrap();
        assert!(!reports.is_empty());
        let svg = std::fs::read_to_string(first.path().join(format!("{name}.svg"))).unwrap();
        assert!(svg.starts_with("<svg") && svg.trim_end().ends_with("</svg>"));
    }
}

#[test]
fn seed_does_not_change_output() {
    let d1 = tempfile::tempdir().unwrap();
    let d2 = tempfile::tempdir().unwrap();
    let args = ["sign-compare", "--n", "100", "--k-max", "10"];
    assert!(run(&[&args[..], &["--seed", "1"]].concat(), d1.path())
        .status
        .success());
    assert!(run(&[&args[..], &["--seed", "99"]].concat(), d2.path())
        .status
        .success());
    assert_eq!(
        std::fs::read(d1.path().join("sign-compare.csv")).unwrap(),
        std::fs::read(d2.path().join("sign-compare.csv")).unwrap()
    );
}

#[test]
fn configuration_errors_exit_with_2() {
    let dir = tempfile::tempdir().unwrap();
    for args in [
        &["bogus"][..],
        &["sign-compare", "--rho", "2"],
        &["sign-compare", "--spectrum", "nonsense"],
        &["restart-compare", "--spectrum", "intervals", "-2:2:4"],
        &["proxy-rational", "--quad-points", "0"],
        &["restart-compare", "--restart-lengths", "10,x"],
    ] {
        let out = run(args, dir.path());
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert!(!out.stderr.is_empty());
    }
}

#[test]
fn numerical_failures_exit_with_3_and_name_the_operation() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(
        &[
            "squared-system",
            "--spectrum",
            "intervals",
            "-1:1:3",
            "--k-max",
            "3",
            "--c",
            "0",
        ],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(3));
    let msg = String::from_utf8_lossy(&out.stderr);
    assert!(msg.contains("numerical failure in squared-system"), "{msg}");
}

#[test]
fn spectrum_file_is_read() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("eigs.txt");
    let values: Vec<String> = (1..=50).map(|i| format!("{}", i as f64 * 0.2)).collect();
    std::fs::write(&file, values.join("\n")).unwrap();
    let out = run(
        &[
            "squared-system",
            "--spectrum",
            "file",
            file.to_str().unwrap(),
            "--k-max",
            "10",
        ],
        dir.path(),
    );
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let reports =
        read_csv(std::fs::File::open(dir.path().join("squared-system.csv")).unwrap()).unwrap();
    assert!(reports
        .iter()
        .all(|r| r.ks.last() == Some(&10) || r.method == "cg-squared"));
}
