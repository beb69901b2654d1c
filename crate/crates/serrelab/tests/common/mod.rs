#![allow(dead_code)]

use serde_json::Value;

pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

pub fn run(args: &[&str]) -> Outcome {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("serrelab").chain(args.iter().copied());
    let code = serrelab::run_with(argv, &mut out, &mut err);
    Outcome { code, stdout: String::from_utf8(out).unwrap(), stderr: String::from_utf8(err).unwrap() }
}

/// Parsed json lines.
pub fn records(stdout: &str) -> Vec<Value> {
    stdout.lines().map(|l| serde_json::from_str(l).unwrap()).collect()
}

pub fn payloads(stdout: &str) -> Vec<Value> {
    records(stdout).into_iter().map(|mut r| r["payload"].take()).collect()
}

/// Output with every `elapsed_ms` removed: json lines lose the key, csv rows
/// lose the last column.
pub fn without_timing(stdout: &str) -> String {
    let mut s = String::new();
    for line in stdout.lines() {
        if line.starts_with('{') {
            let mut v: Value = serde_json::from_str(line).unwrap();
            v.as_object_mut().unwrap().remove("elapsed_ms");
            s.push_str(&v.to_string());
        } else {
            s.push_str(line.rsplit_once(',').map_or(line, |(head, _)| head));
        }
        s.push('\n');
    }
    s
}
