//! Determinism acceptance: repeating any stochastic command with the
//! same seed reproduces the CSV artifact byte for byte, independent of
//! thread count; changing the seed changes the data. One ledger line
//! per check.

use std::fs;
use std::path::Path;
use std::process::Command;

fn run(dir: &Path, args: &[&str]) -> i32 {
    let out = Command::new(env!("CARGO_BIN_EXE_gchaos"))
        .current_dir(dir)
        .args(args)
        .output()
        .expect("binary runs");
    assert!(
        out.status.code() == Some(0) || out.status.code() == Some(2),
        "command failed: {args:?}\n{}",
        String::from_utf8_lossy(&out.stderr)
    );
    out.status.code().unwrap()
}

fn read(dir: &Path, name: &str) -> String {
    fs::read_to_string(dir.join(name)).expect("artifact exists")
}

fn ledger(pass: bool, name: &str, detail: &str) {
    let status = if pass { "PASS" } else { "FAIL" };
    println!("criterion 12 {status} {name}: {detail}");
    assert!(pass, "{name}: {detail}");
}

#[test]
fn criterion_12_seeded_csv_bodies_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    fs::write(
        d.join("f2.json"),
        r#"{"order": 2, "dim": 3, "symmetric": false, "entries": [
            {"idx": [1,2], "val": 0.7}, {"idx": [2,1], "val": -0.4},
            {"idx": [3,3], "val": 0.5}, {"idx": [1,1], "val": 0.2}
        ]}"#,
    )
    .unwrap();

    let sim = |out: &str, seed: &str, threads: &str| {
        run(
            d,
            &[
                "simulate",
                "--kernel",
                "f2.json",
                "--samples",
                "2e4",
                "--seed",
                seed,
                "--tail-grid",
                "0:0.5:8",
                "--out",
                out,
                "--threads",
                threads,
            ],
        );
        read(d, out)
    };
    let a = sim("a.csv", "42", "1");
    let b = sim("b.csv", "42", "1");
    let c = sim("c.csv", "42", "3");
    let other = sim("d.csv", "43", "1");
    ledger(
        a == b,
        "simulate repeat",
        &format!("{} bytes, same seed same bytes", a.len()),
    );
    ledger(
        a == c,
        "simulate threads",
        "thread count does not reorder the tail table",
    );
    ledger(
        a != other,
        "simulate reseed",
        "a different seed changes the data",
    );

    let lat = |out: &str, seed: &str, threads: &str| {
        run(
            d,
            &[
                "latala",
                "--generator",
                "sparse",
                "--dim",
                "5",
                "--M",
                "4,16",
                "--samples",
                "300",
                "--seed",
                seed,
                "--out",
                out,
                "--threads",
                threads,
            ],
        );
        read(d, out)
    };
    let a = lat("la.csv", "9", "1");
    let b = lat("lb.csv", "9", "1");
    let c = lat("lc.csv", "9", "4");
    let other = lat("ld.csv", "10", "1");
    ledger(
        a == b,
        "latala repeat",
        &format!("{} bytes, same seed same bytes", a.len()),
    );
    ledger(
        a == c,
        "latala threads",
        "per-sample streams are thread-count invariant",
    );
    ledger(a != other, "latala reseed", "a different seed changes the data");

    let nrm = |out: &str| {
        run(
            d,
            &[
                "norms", "--tensor", "f2.json", "--seed", "7", "--out", out,
            ],
        );
        read(d, out)
    };
    let a = nrm("p1.json");
    let b = nrm("p2.json");
    ledger(
        a == b,
        "norms repeat",
        "seeded restart directions reproduce the profile bytes",
    );
}
