mod common;

use std::fs;

use common::{payloads, records, run, without_timing};

fn code(args: &[&str]) -> i32 {
    run(args).code
}

fn usage(args: &[&str]) {
    let o = run(args);
    assert_eq!(o.code, 2, "{args:?}: {}", o.stderr);
    assert!(o.stdout.is_empty(), "{args:?} wrote {}", o.stdout);
    assert_eq!(o.stderr.trim_end().lines().count(), 1, "{args:?}: {}", o.stderr);
    assert!(o.stderr.starts_with("error"), "{}", o.stderr);
}

#[test]
fn ladder_exit_codes() {
    fn with<'a>(a: &[&'a str]) -> Vec<&'a str> {
        [&["--no-cache"][..], a].concat()
    }
    assert_eq!(code(&with(&["ladder", "cert", "251"])), 0);
    assert_eq!(code(&with(&["ladder", "cert", "3"])), 1);
    assert_eq!(code(&with(&["ladder", "cert", "2"])), 1);
    usage(&with(&["ladder", "cert", "10"]));
    usage(&with(&["ladder", "cert", "-4"]));
    assert_eq!(code(&with(&["ladder", "verify", "--from", "31", "--to", "5000"])), 0);
    assert_eq!(code(&with(&["ladder", "verify", "--from", "2", "--to", "40"])), 1);
    usage(&with(&["ladder", "verify", "--from", "50", "--to", "40"]));
    assert_eq!(code(&with(&["ladder", "chain", "--start", "31", "--limit", "10000"])), 0);
    usage(&with(&["ladder", "chain", "--start", "30", "--limit", "100"]));
    assert_eq!(code(&with(&["ladder", "paper-table"])), 0);
    assert_eq!(code(&with(&["ladder", "paper-table", "--strict"])), 1);
    usage(&with(&["--format", "csv", "ladder", "cert", "251"]));
}

#[test]
fn neben_exit_codes() {
    assert_eq!(code(&["neben", "--P", "263", "--pn", "251", "--k", "100"]), 0);
    assert_eq!(code(&["neben", "--P", "31", "--pn", "29", "--k", "32"]), 0);
    usage(&["neben", "--P", "263", "--pn", "251", "--k", "99"]);
    usage(&["neben", "--P", "263", "--pn", "251", "--k", "266"]);
    usage(&["neben", "--P", "251", "--pn", "263", "--k", "100"]);
    usage(&["neben", "--P", "264", "--pn", "251", "--k", "100"]);
    usage(&["neben", "--P", "263", "--pn", "251"]);
}

#[test]
fn cheb_exit_codes() {
    assert_eq!(code(&["--no-cache", "cheb", "pi", "--x", "100"]), 0);
    assert_eq!(code(&["--no-cache", "cheb", "audit", "--max", "1000"]), 1);
    assert_eq!(code(&["--no-cache", "cheb", "audit", "--max", "30"]), 0);
    assert_eq!(code(&["--no-cache", "cheb", "audit", "--max", "1000", "--B", "2"]), 0);
    usage(&["cheb", "audit", "--max", "1000", "--A", "nine"]);
    usage(&["cheb", "audit", "--max", "1000", "--B", "1/0"]);
    usage(&["cheb", "audit", "--max", "1000", "--B", "-1"]);
    usage(&["--sieve-limit", "500", "cheb", "audit", "--max", "1000"]);
    assert_eq!(code(&["cheb", "gaps", "--a", "44/30", "--lo", "31", "--hi", "100000"]), 0);
    assert_eq!(code(&["cheb", "gaps", "--a", "6/5", "--lo", "2", "--hi", "1000"]), 1);
    usage(&["cheb", "gaps", "--a", "44/30", "--lo", "100", "--hi", "31"]);
    usage(&["cheb", "gaps", "--a", "x", "--lo", "31", "--hi", "100"]);
}

#[test]
fn weights_and_census_exit_codes() {
    assert_eq!(code(&["weights", "twist", "--k", "8", "--p", "11", "--shape", "split"]), 0);
    assert_eq!(code(&["weights", "twist", "--k", "8", "--p", "11", "--shape", "irreducible"]), 0);
    usage(&["weights", "twist", "--k", "8", "--p", "11", "--shape", "round"]);
    usage(&["weights", "twist", "--k", "14", "--p", "11", "--shape", "split"]);
    usage(&["weights", "twist", "--k", "8", "--p", "12", "--shape", "split"]);
    assert_eq!(code(&["weights", "dihedral", "--p", "23"]), 0);
    assert_eq!(code(&["weights", "dihedral", "--p", "29"]), 0);
    usage(&["weights", "dihedral", "--p", "25"]);
    assert_eq!(code(&["--no-cache", "census", "--p", "7"]), 0);
    assert_eq!(code(&["--no-cache", "census", "--p", "3"]), 0);
    usage(&["census", "--p", "2"]);
    usage(&["census", "--p", "9"]);
    usage(&["census", "--p", "13", "--L", "3"]);
}

#[test]
fn global_usage_errors() {
    usage(&[]);
    usage(&["frobnicate"]);
    usage(&["cheb", "pi", "--x", "10", "--colour"]);
    usage(&["--threads", "0", "cheb", "pi", "--x", "10"]);
    usage(&["--format", "xml", "cheb", "pi", "--x", "10"]);
    let help = run(&["--help"]);
    assert_eq!(help.code, 0);
    assert!(help.stdout.contains("ladder"));
}

#[test]
fn every_line_carries_schema_version() {
    let o = run(&["--no-cache", "ladder", "verify", "--from", "2", "--to", "300"]);
    for r in records(&o.stdout) {
        assert_eq!(r["schema_version"], "1");
        assert_eq!(r["command"], "ladder verify");
        assert!(r["elapsed_ms"].is_u64());
    }
    let p = payloads(&o.stdout);
    let summary = p.last().unwrap();
    assert_eq!((summary["kind"].as_str(), summary["checked"].as_u64()), (Some("summary"), Some(62)));
    assert_eq!(summary["failures"], 2);
    let failed: Vec<u64> = p.iter().filter(|r| r["kind"] == "failure").map(|r| r["p_n"].as_u64().unwrap()).collect();
    assert_eq!(failed, [2, 3]);
}

#[test]
fn certificate_line_schema() {
    let o = run(&["ladder", "cert", "251"]);
    let line = o.stdout.lines().next().unwrap();
    let keys = [
        "\"kind\"", "\"p_n\"", "\"P\"", "\"ell\"", "\"r\"", "\"prime_power\"", "\"m\"", "\"s\"",
        "\"inequality_holds\"", "\"inequality_lhs\"", "\"inequality_rhs\"", "\"weights\"",
    ];
    let pos: Vec<usize> = keys.iter().map(|k| line.find(k).unwrap()).collect();
    assert!(pos.windows(2).all(|w| w[0] < w[1]), "key order in {line}");
    let c = &payloads(&o.stdout)[0];
    assert_eq!(c["inequality_lhs"], 66 * 263);
    assert_eq!(c["inequality_rhs"], 131 * 251 - 65);
}

#[test]
fn census_csv_row() {
    let o = run(&["--no-cache", "--format", "csv", "census", "--p", "7"]);
    assert_eq!(o.code, 0);
    let mut rdr = csv::Reader::from_reader(o.stdout.as_bytes());
    let header: Vec<String> = rdr.headers().unwrap().iter().map(String::from).collect();
    let rows: Vec<csv::StringRecord> = rdr.records().map(Result::unwrap).collect();
    assert_eq!(rows.len(), 1);
    let field = |name: &str| &rows[0][header.iter().position(|h| h == name).unwrap()];
    assert_eq!(field("schema_version"), "1");
    assert_eq!(field("p"), "7");
    assert_eq!(field("N_irred"), "0");
    assert_eq!(field("N_red"), "9");
    assert_eq!(field("N_total"), "9");
    assert_eq!(field("max_e"), "1");
}

#[test]
fn empty_reports() {
    let o = run(&["--no-cache", "--format", "csv", "cheb", "audit", "--max", "30"]);
    assert_eq!(o.code, 0);
    assert_eq!(o.stdout.lines().count(), 1);
    assert!(o.stdout.starts_with("schema_version,command,x,pi_x,"));
    let o = run(&["--no-cache", "cheb", "audit", "--max", "30"]);
    assert_eq!((o.code, o.stdout.as_str()), (0, ""));
}

#[test]
fn csv_quotes_command_with_space() {
    let o = run(&["--format", "csv", "weights", "dihedral", "--p", "29"]);
    let row = o.stdout.lines().nth(1).unwrap();
    assert!(row.starts_with("1,weights dihedral,29,false,,"), "{row}");
}

#[test]
fn cache_round_trip_poisoning_and_no_cache() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path().to_str().unwrap();
    let args = |extra: &[&'static str]| {
        let mut v = vec!["--cache-dir", d];
        v.extend_from_slice(extra);
        v
    };
    let census = ["census", "--p", "29"];
    let audit = ["cheb", "audit", "--max", "3000"];
    let cold: Vec<String> = [&census[..], &audit[..]].iter().map(|c| without_timing(&run(&args(c)).stdout)).collect();

    let mut entries = 0;
    for kind in fs::read_dir(dir.path()).unwrap() {
        for f in fs::read_dir(kind.unwrap().path()).unwrap() {
            let path = f.unwrap().path();
            let len = fs::metadata(&path).unwrap().len();
            fs::OpenOptions::new().write(true).open(&path).unwrap().set_len(len / 2).unwrap();
            entries += 1;
        }
    }
    assert!(entries >= 5, "only {entries} cache entries");

    for (c, expected) in [&census[..], &audit[..]].iter().zip(&cold) {
        assert_eq!(&without_timing(&run(&args(c)).stdout), expected, "poisoned {c:?}");
        assert_eq!(&without_timing(&run(&args(c)).stdout), expected, "rebuilt {c:?}");
        let mut nc = vec!["--no-cache"];
        nc.extend_from_slice(c);
        assert_eq!(&without_timing(&run(&nc).stdout), expected, "--no-cache {c:?}");
    }
}

#[test]
fn second_census_run_hits_cache() {
    use serrelab::cache::Cache;
    use serrelab::commands::census::parallel_census;
    use serrelab::commands::Ctx;
    use serrelab_core::census::CensusConfig;
    use std::sync::atomic::Ordering::Relaxed;

    let dir = tempfile::tempdir().unwrap();
    let ctx = || Ctx {
        cache: Cache::new(dir.path()),
        pool: rayon::ThreadPoolBuilder::new().num_threads(2).build().unwrap(),
        sieve: Default::default(),
        format: serrelab::args::Format::JsonLines,
    };
    let first = ctx();
    let a = parallel_census(&first, 37, &CensusConfig::default()).unwrap();
    assert_eq!(first.cache.stats.hits.load(Relaxed), 0);
    let misses = first.cache.stats.misses.load(Relaxed);
    assert!(misses > 0);
    let second = ctx();
    let b = parallel_census(&second, 37, &CensusConfig::default()).unwrap();
    assert_eq!(a, b);
    assert_eq!(second.cache.stats.misses.load(Relaxed), 0);
    assert_eq!(second.cache.stats.hits.load(Relaxed), misses);
}

#[test]
fn binary_honours_cache_env_var() {
    let dir = tempfile::tempdir().unwrap();
    let out = std::process::Command::new(env!("CARGO_BIN_EXE_serrelab"))
        .args(["census", "--p", "13"])
        .env("SERRELAB_CACHE_DIR", dir.path())
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert!(dir.path().join("basis-mod-p").read_dir().unwrap().next().is_some());

    let bad = std::process::Command::new(env!("CARGO_BIN_EXE_serrelab")).args(["ladder", "cert", "12"]).output().unwrap();
    assert_eq!(bad.status.code(), Some(2));
    assert!(bad.stdout.is_empty());
}

#[test]
fn thread_counts_agree() {
    for cmd in [
        &["ladder", "verify", "--from", "2", "--to", "20000"][..],
        &["cheb", "audit", "--max", "200000"],
        &["cheb", "gaps", "--a", "6/5", "--lo", "2", "--hi", "300000"],
        &["census", "--p", "31"],
    ] {
        let outs: Vec<String> = ["1", "3", "8"]
            .iter()
            .map(|t| without_timing(&run(&[&["--no-cache", "--threads", t][..], cmd].concat()).stdout))
            .collect();
        assert!(!outs[0].is_empty());
        assert!(outs.windows(2).all(|w| w[0] == w[1]), "{cmd:?}");
    }
}
