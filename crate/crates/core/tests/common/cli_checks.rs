//! Golden-file and fuzz drivers for the command-line front end.

use std::io::Write;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::{Path, PathBuf};
use std::process::Command;

use rand::seq::SliceRandom;
use rand::Rng;
use serde::Deserialize;
use transdim::cli::run;

#[derive(Deserialize)]
pub struct Case {
    pub name: String,
    pub args: Vec<String>,
}

fn golden_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden")
}

pub fn cases() -> Vec<Case> {
    let text = std::fs::read_to_string(golden_dir().join("cases.json")).unwrap();
    serde_json::from_str(&text).unwrap()
}

pub fn invoke(args: &[String]) -> String {
    let data = golden_dir().join("data");
    let args: Vec<String> = args.iter().map(|a| a.replace("@DATA", data.to_str().unwrap())).collect();
    let out = Command::new(env!("CARGO_BIN_EXE_transdim")).args(&args).output().unwrap();
    assert!(out.stderr.is_empty(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    format!("exit: {}\n{}", out.status.code().unwrap(), String::from_utf8(out.stdout).unwrap())
}

/// Compares every case with its expected file, or rewrites the files when
/// `bless` is set. Returns the number of cases.
pub fn check_golden(bless: bool) -> Result<usize, String> {
    let cases = cases();
    if cases.len() < 25 {
        return Err(format!("only {} golden cases", cases.len()));
    }
    let mut failures = Vec::new();
    for case in &cases {
        let first = invoke(&case.args);
        if first != invoke(&case.args) {
            failures.push(format!("{} is not deterministic", case.name));
            continue;
        }
        let path = golden_dir().join(format!("{}.out", case.name));
        if bless {
            std::fs::write(&path, &first).map_err(|e| e.to_string())?;
            continue;
        }
        let expected = std::fs::read_to_string(&path).unwrap_or_default();
        if expected != first {
            failures.push(format!("{}:\n  expected {expected:?}\n  actual   {first:?}", case.name));
        }
    }
    if failures.is_empty() {
        Ok(cases.len())
    } else {
        Err(failures.join("\n"))
    }
}

const SEEDS: [&str; 12] = [
    "exp(x) + x^(11/1)",
    "Y*D2(Y) - D1(Y)^2",
    "D1(Y1) - Y2",
    "3*exp(2*x)",
    "log(log(x))^(1/2) + D(x^2)",
    "x^(-1) + x^(-1)*l1^(-1)",
    "exp(exp(x) - x) * x^(-1/2)",
    "prod(const 2, full 1)",
    "union(points {[x]} 1, zero {D1(Y)} 1)",
    "perm([2,1], prod(full 1, const 1))",
    "proj(zero {Y1*D1(Y2)} 2 at [0, x], 1)",
    "Y^2 - 2",
];

const NOISE: [&str; 24] = [
    "(",
    ")",
    "[",
    "]",
    "{",
    "}",
    "^",
    "*",
    "+",
    "-",
    "/",
    ",",
    ";",
    "exp",
    "log",
    "D",
    "D0",
    "Y0",
    "l",
    "0",
    "99999999999999999999",
    "^(1/0)",
    "é",
    "\u{0}",
];

fn mutate(r: &mut impl Rng, s: &str) -> String {
    let mut chars: Vec<String> = s.chars().map(String::from).collect();
    for _ in 0..r.gen_range(1..=4) {
        let pos = r.gen_range(0..=chars.len());
        match r.gen_range(0..5) {
            0 if !chars.is_empty() => {
                chars.remove(pos.min(chars.len() - 1));
            }
            1 => {
                let noise = NOISE.choose(r).unwrap().to_string();
                chars.insert(pos, noise);
            }
            2 => {
                let depth = r.gen_range(50..400);
                chars.insert(pos, "(".repeat(depth));
            }
            3 if pos < chars.len() => chars.truncate(pos),
            _ => chars.insert(pos, format!("^{}", r.gen_range(2..1_000_000))),
        }
    }
    chars.concat()
}

fn invocation(r: &mut impl Rng, data: &std::path::Path) -> Vec<String> {
    let (a, b) = (*SEEDS.choose(r).unwrap(), *SEEDS.choose(r).unwrap());
    let (expr, other) = (mutate(r, a), mutate(r, b));
    let args: Vec<&str> = match r.gen_range(0..13) {
        0 => vec!["ts-eval", "--f", &expr],
        1 => vec!["ts-compare", "--f", &expr, "--g", &other],
        2 => vec!["ts-lambda", "--f", &expr],
        3 => vec!["ts-omega", "--f", &expr],
        4 => vec!["dp-eval", "--P", &expr, "--point", &other],
        5 => vec!["dp-separant", "--P", &expr],
        6 => vec!["codim-rank", "--P", &expr, "--point", &other],
        7 => vec!["codim-strong-indep", "--P", &expr, "--P", &other, "--point", "x", "--point", "1"],
        8 => vec!["dim-eval", "--set", &expr],
        9 => vec!["rosenlicht-decide", "--F", &expr, "--G", &other],
        10 => vec!["rosenlicht-certify", "--F", &expr, "--G", &other],
        11 => vec!["coan-check", "--input", data.to_str().unwrap()],
        _ => vec![&expr, "--f", &other],
    };
    std::iter::once("transdim").chain(args).map(String::from).collect()
}

fn malformed_json(r: &mut impl Rng) -> String {
    let valid = r#"{"structure":{"size":3,"constants":[0,1]},"n":1,"set":[[0],[1],[2]],"certificate":{"e":2,"relations":[[[0,0],[0,1],[1,2]]],"dims":[]}}"#;
    let mut s: Vec<char> = valid.chars().collect();
    for _ in 0..r.gen_range(1..=3) {
        let pos = r.gen_range(0..s.len());
        match r.gen_range(0..3) {
            0 => {
                s.remove(pos);
            }
            1 => {
                let c = *['[', ']', '{', '9', '-', '"', ','].choose(r).unwrap();
                s.insert(pos, c);
            }
            _ => s[pos] = char::from(b'0' + r.gen_range(0..10u8)),
        }
    }
    s.into_iter().collect()
}

/// Runs `count` malformed invocations in process. Returns how many were
/// rejected with a structured error.
pub fn fuzz(seed: u64, count: usize) -> Result<usize, String> {
    let mut r = super::rng(seed);
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let data = dir.path().join("input.json");
    let mut errors = 0;
    for i in 0..count {
        if i % 20 == 0 {
            let mut f = std::fs::File::create(&data).map_err(|e| e.to_string())?;
            f.write_all(malformed_json(&mut r).as_bytes()).map_err(|e| e.to_string())?;
        }
        let args = invocation(&mut r, &data);
        let (code, out) =
            catch_unwind(AssertUnwindSafe(|| run(args.clone()))).map_err(|_| format!("crash on {args:?}"))?;
        let v: serde_json::Value = serde_json::from_str(&out).map_err(|e| format!("{args:?}: {e}: {out}"))?;
        match code {
            0 if v.get("error").is_none() => {}
            1 | 2 if v["error"].is_string() && v.get("detail").is_some() => errors += 1,
            _ => return Err(format!("{args:?} exited with {code}: {out}")),
        }
    }
    Ok(errors)
}
