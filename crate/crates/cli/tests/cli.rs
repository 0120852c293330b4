use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};
use std::time::{Duration, Instant};

use mpfss::ddhfss::ShareFile;
use mpfss::encoding::ExponentCodec;
use mpfss::group::P256;
use mpfss::ddhfss::FssParams;
use mpfss_cli::histogram::{plaintext_histogram, private_histogram};
use rand_chacha::ChaCha20Rng;
use rand_core::SeedableRng;
use tempfile::TempDir;

fn mpfss(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mpfss")).args(args).output().expect("run mpfss")
}

fn ok(args: &[&str]) -> String {
    let out = mpfss(args);
    assert!(
        out.status.success(),
        "mpfss {args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

fn keygen(dir: &Path, extra: &[&str]) -> Vec<PathBuf> {
    let mut args = vec!["keygen", "--out", p(dir)];
    args.extend_from_slice(extra);
    ok(&args);
    let parties: usize = extra
        .iter()
        .position(|a| *a == "--parties")
        .map_or(3, |i| extra[i + 1].parse().unwrap());
    (0..parties).map(|i| dir.join(format!("key-{i}.mpfss"))).collect()
}

/// Evaluates every key over `range` and decodes; returns the `x,value` lines.
fn pipeline(dir: &Path, keys: &[PathBuf], range: &str) -> Vec<(u64, String)> {
    let mut shares = Vec::new();
    for (i, k) in keys.iter().enumerate() {
        let s = dir.join(format!("share-{i}"));
        ok(&["eval", "--key", p(k), "--range", range, "--out", p(&s)]);
        shares.push(s);
    }
    let mut args = vec!["decode"];
    args.extend(shares.iter().map(|s| p(s)));
    ok(&args)
        .lines()
        .map(|l| {
            let (x, v) = l.split_once(',').unwrap();
            (x.parse().unwrap(), v.to_string())
        })
        .collect()
}

#[test]
fn keygen_is_deterministic_under_a_seed() {
    let (a, b) = (TempDir::new().unwrap(), TempDir::new().unwrap());
    let args = ["--N", "1000", "--alpha", "123", "--beta", "7", "--parties", "5", "--corrupt", "2", "--seed", "9"];
    let ka = keygen(a.path(), &args);
    let kb = keygen(b.path(), &args);
    assert_eq!(ka.len(), 5);
    for (x, y) in ka.iter().zip(&kb) {
        assert_eq!(fs::read(x).unwrap(), fs::read(y).unwrap());
    }
    let c = TempDir::new().unwrap();
    let kc = keygen(c.path(), &["--N", "1000", "--alpha", "123", "--beta", "7", "--parties", "5", "--seed", "10"]);
    assert_ne!(fs::read(&ka[0]).unwrap(), fs::read(&kc[0]).unwrap());
}

#[test]
fn majority_violation_exits_with_2() {
    let d = TempDir::new().unwrap();
    let out = mpfss(&["keygen", "--N", "10", "--alpha", "1", "--parties", "4", "--corrupt", "2", "--out", p(d.path())]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("majority"));
}

#[test]
fn bad_arguments_exit_with_2() {
    let d = TempDir::new().unwrap();
    let out = mpfss(&["keygen", "--N", "10", "--alpha", "10", "--out", p(d.path())]);
    assert_eq!(out.status.code(), Some(2));
    let out = mpfss(&["keygen", "--N", "10", "--alpha", "1", "--beta", "16", "--bound", "16", "--out", p(d.path())]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(mpfss(&["keygen", "--bogus"]).status.code(), Some(2));
}

#[test]
fn dpf_pipeline_reproduces_point_function() {
    let d = TempDir::new().unwrap();
    let keys = keygen(d.path(), &["--N", "100", "--alpha", "42", "--beta", "7", "--parties", "5", "--prss", "--seed", "1"]);
    let out = pipeline(d.path(), &keys, "0..99");
    assert_eq!(out.len(), 100);
    for (x, v) in out {
        assert_eq!(v, if x == 42 { "7" } else { "0" }, "x={x}");
    }
}

#[test]
fn dcf_at_last_point_is_constant() {
    let d = TempDir::new().unwrap();
    let keys = keygen(
        d.path(),
        &["--scheme", "dcf", "--N", "64", "--alpha", "63", "--beta", "5", "--group", "test-curve", "--seed", "2"],
    );
    let out = pipeline(d.path(), &keys, "0..63");
    assert_eq!(out.len(), 64);
    assert!(out.iter().all(|(_, v)| v == "5"));
}

#[test]
fn dcf_pipeline_reproduces_comparison() {
    let d = TempDir::new().unwrap();
    let keys = keygen(d.path(), &["--scheme", "dcf", "--N", "50", "--alpha", "17", "--beta", "3", "--seed", "3"]);
    for (x, v) in pipeline(d.path(), &keys, "0..49") {
        assert_eq!(v, if x <= 17 { "3" } else { "0" }, "x={x}");
    }
}

#[test]
fn point_encoding_pipeline() {
    let d = TempDir::new().unwrap();
    let beta = "123456789012345";
    let keys = keygen(
        d.path(),
        &["--N", "30", "--alpha", "3", "--beta", beta, "--encoding", "point", "--parties", "5", "--seed", "4"],
    );
    for (x, v) in pipeline(d.path(), &keys, "0..29") {
        assert_eq!(v, if x == 3 { beta } else { "0" }, "x={x}");
    }
}

#[test]
fn zero_beta_decodes_to_zero_everywhere() {
    let d = TempDir::new().unwrap();
    let keys = keygen(d.path(), &["--N", "40", "--alpha", "7", "--beta", "0", "--seed", "5"]);
    assert!(pipeline(d.path(), &keys, "0..39").iter().all(|(_, v)| v == "0"));
}

#[test]
fn eval_is_deterministic_and_checks_the_domain() {
    let d = TempDir::new().unwrap();
    let keys = keygen(d.path(), &["--N", "20", "--alpha", "7", "--seed", "6"]);
    let (s1, s2) = (d.path().join("a"), d.path().join("b"));
    ok(&["eval", "--key", p(&keys[0]), "--x", "7", "--out", p(&s1)]);
    ok(&["eval", "--key", p(&keys[0]), "--x", "7", "--out", p(&s2)]);
    assert_eq!(fs::read(&s1).unwrap(), fs::read(&s2).unwrap());
    let file = ShareFile::<P256>::from_bytes(&fs::read(&s1).unwrap()).unwrap();
    assert_eq!(file.points.len(), 1);
    assert_eq!(file.points[0].0, 7);

    let out = mpfss(&["eval", "--key", p(&keys[0]), "--x", "20", "--out", p(&s1)]);
    assert_eq!(out.status.code(), Some(2));
    let out = mpfss(&["eval", "--key", p(&keys[0]), "--range", "5..3", "--out", p(&s1)]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn shares_from_different_invocations_are_rejected() {
    let (a, b) = (TempDir::new().unwrap(), TempDir::new().unwrap());
    let ka = keygen(a.path(), &["--N", "20", "--alpha", "3", "--seed", "7"]);
    let kb = keygen(b.path(), &["--N", "20", "--alpha", "3", "--seed", "8"]);
    let mut shares = Vec::new();
    for (i, k) in [&ka[0], &ka[1], &kb[2]].into_iter().enumerate() {
        let s = a.path().join(format!("s{i}"));
        ok(&["eval", "--key", p(k), "--x", "3", "--out", p(&s)]);
        shares.push(s);
    }
    let out = mpfss(&["decode", p(&shares[0]), p(&shares[1]), p(&shares[2])]);
    assert_eq!(out.status.code(), Some(1));
    let out = mpfss(&["decode", p(&shares[0]), p(&shares[1])]);
    assert_eq!(out.status.code(), Some(1));
    let out = mpfss(&["decode", p(&a.path().join("missing"))]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn full_domain_eval_is_fast() {
    let d = TempDir::new().unwrap();
    let keys = keygen(d.path(), &["--N", "1000", "--alpha", "500", "--parties", "5", "--seed", "9"]);
    let s = d.path().join("share");
    let start = Instant::now();
    ok(&["eval", "--key", p(&keys[0]), "--all", "--out", p(&s)]);
    assert!(start.elapsed() < Duration::from_secs(10));
    let file = ShareFile::<P256>::from_bytes(&fs::read(&s).unwrap()).unwrap();
    assert_eq!(file.points.len(), 1000);
}

#[test]
fn bench_emits_sorted_csv() {
    let d = TempDir::new().unwrap();
    let csv = d.path().join("bench.csv");
    ok(&["bench", "--sweep", "domain", "--max-measured-n", "10000", "--out", p(&csv)]);
    let text = fs::read_to_string(&csv).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some(mpfss::keysize::CSV_HEADER));
    let rows: Vec<Vec<&str>> = lines.map(|l| l.split(',').collect()).collect();
    assert!(rows.iter().any(|r| r[0] == "ours-dpf" && r[1] == "measured" && r[2] == "10000"));
    assert!(!rows.iter().any(|r| r[1] == "measured" && r[2] == "100000"));
    assert!(rows.iter().any(|r| r[0] == "trivial" && r[2] == "10000000000"));
    let keys: Vec<(&str, u64)> = rows.iter().map(|r| (r[0], r[2].parse().unwrap())).collect();
    assert!(keys.windows(2).all(|w| w[0] <= w[1]));

    let out = ok(&["bench", "--sweep", "moduli"]);
    assert!(out.lines().any(|l| l.starts_with("bunn-prg,analytic-crt,")));
}

#[test]
fn demo_histogram_matches() {
    let out = ok(&["demo-histogram", "--clients", "20", "--bins", "8", "--group", "test-curve", "--seed", "1"]);
    assert!(out.contains("matches plaintext: true"));
    let out = ok(&["demo-histogram", "--clients", "0", "--bins", "4", "--group", "test-curve"]);
    assert!(out.starts_with("bin,count\n0,0\n1,0\n2,0\n3,0\n"));
}

#[test]
fn histogram_accumulates_in_one_bin() {
    let mut rng = ChaCha20Rng::seed_from_u64(11);
    let params = FssParams::new(16, 3, 1).unwrap();
    let codec = ExponentCodec::<P256>::new(1 << 10).unwrap();
    let counts = private_histogram(&[5, 5], 16, &params, &codec, &mut rng).unwrap();
    assert_eq!(counts[5], 2);
    assert_eq!(counts, plaintext_histogram(&[5, 5], 16));
    // Overflowing the bound is reported.
    let tiny = ExponentCodec::<P256>::new(2).unwrap();
    assert!(private_histogram(&[1, 1, 1], 16, &params, &tiny, &mut rng).is_err());
}
