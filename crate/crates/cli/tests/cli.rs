//! Black-box tests of the `spectra` binary: report shapes, exit codes,
//! determinism, and the shipped fixture corpus.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use sha2::{Digest, Sha256};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_spectra"))
}

fn fixtures() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fixtures")
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn stderr(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).unwrap()
}

#[test]
fn spectrum_report_is_deterministic_and_exact() {
    let input = fixtures().join("rp1.scx");
    let arg = input.to_str().unwrap();
    let a = run(&["spectrum", arg]);
    let b = run(&["spectrum", arg]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout, "two runs differ");
    let text = stdout(&a);
    assert!(text.contains("# tol exact"));
    assert!(text.contains("caveat upper_bound 1"));
    assert!(text.contains("k 1 0.2"));
    assert!(text.contains("k 2 0.9"));
}

#[test]
fn json_mirrors_the_text_report() {
    let input = fixtures().join("rp2.scx");
    let arg = input.to_str().unwrap();
    let text = stdout(&run(&["spectrum", arg, "--k", "3"]));
    let json: serde_json::Value =
        serde_json::from_str(&stdout(&run(&["spectrum", arg, "--k", "3", "--json"]))).unwrap();
    assert_eq!(json["command"], "spectrum");
    assert_eq!(json["k"], 3);
    let values = json["values"].as_array().unwrap();
    assert_eq!(values.len(), 3);
    for v in values {
        let line = format!("k {} {}", v["k"], v["value"].as_str().unwrap());
        assert!(text.contains(&line), "text report missing '{}'", line);
    }
    let witness = json["witness"].as_array().unwrap();
    for e in witness {
        let e = e.as_array().unwrap();
        let line = format!("e {} {}", e[0], e[1]);
        assert!(text.contains(&line), "text report missing '{}'", line);
    }

    let sig_text = stdout(&run(&["significance", arg]));
    let sig: serde_json::Value =
        serde_json::from_str(&stdout(&run(&["significance", arg, "--json"]))).unwrap();
    for c in sig["candidates"].as_array().unwrap() {
        assert!(sig_text.contains(&format!("candidate {}", c.as_str().unwrap())));
    }
    for c in sig["certified"].as_array().unwrap() {
        let line = format!("certified {} {}", c["p"], c["level"].as_str().unwrap());
        assert!(sig_text.contains(&line));
    }
}

#[test]
fn tolerance_flag_is_recorded_and_applied() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("third.scx");
    std::fs::write(&path, "v 0 1/3\nv 1 1/3\nv 2 1/3\ns 0 1\ns 1 2\ns 0 2\nw 0 2 1\n").unwrap();
    let arg = path.to_str().unwrap();
    let exact = stdout(&run(&["spectrum", arg]));
    assert!(exact.contains("k 1 1/3"));
    let rounded = stdout(&run(&["spectrum", arg, "--tol", "4"]));
    assert!(rounded.contains("# tol 4"));
    assert!(rounded.contains("k 1 0.3333"));
}

#[test]
fn exit_codes_separate_domain_and_usage_errors() {
    let missing = run(&["spectrum", "missing.scx"]);
    assert_eq!(missing.status.code(), Some(1));
    assert!(stderr(&missing).contains("file not found"));

    let usage = run(&["frobnicate"]);
    assert_eq!(usage.status.code(), Some(2));

    let graph = fixtures().join("c4.graph");
    let no_mode = run(&["cheeger", graph.to_str().unwrap()]);
    assert_eq!(no_mode.status.code(), Some(2));
}

#[test]
fn parse_errors_name_the_line() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.scx");
    std::fs::write(&path, "v 0 1\nv 1 1\nw 0 1 1\n").unwrap();
    let out = run(&["spectrum", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("line 3: cocycle value on non-edge (0, 1)"));

    std::fs::write(&path, "# nothing\n").unwrap();
    let out = run(&["spectrum", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("no vertices"));
}

#[test]
fn verify_passes_the_shipped_certificate_and_fails_a_lowered_one() {
    let scx = fixtures().join("dyck.scx");
    let cert = fixtures().join("dyck_rp2.cert");
    let out = run(&["verify", scx.to_str().unwrap(), cert.to_str().unwrap()]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("containment pass"));
    assert!(text.contains("classification pass"));
    assert!(text.contains("essentiality pass"));
    assert!(text.contains("verdict pass"));

    // drop the claimed level below the witness's entry level
    let dir = tempfile::tempdir().unwrap();
    let lowered = dir.path().join("lowered.cert");
    let body = std::fs::read_to_string(&cert).unwrap().replace("level 1", "level 1/2");
    std::fs::write(&lowered, body).unwrap();
    let out = run(&["verify", scx.to_str().unwrap(), lowered.to_str().unwrap()]);
    assert!(out.status.success(), "a failed check is still a verdict");
    let text = stdout(&out);
    assert!(text.contains("containment fail"));
    assert!(text.contains("verdict fail"));
}

#[test]
fn cheeger_modes_agree_on_the_square() {
    let graph = fixtures().join("c4.graph");
    let arg = graph.to_str().unwrap();
    let brute = stdout(&run(&["cheeger", arg, "--brute"]));
    assert!(brute.contains("h 4"));

    let dir = tempfile::tempdir().unwrap();
    let fnfile = dir.path().join("split.fn");
    std::fs::write(&fnfile, "v 0 1\nv 1 1\nv 2 -1\nv 3 -1\n").unwrap();
    let compare = stdout(&run(&["cheeger", arg, "--compare", fnfile.to_str().unwrap()]));
    assert!(compare.contains("h 4"));
    assert!(compare.contains("energy 4"));
    assert!(compare.contains("ratio 4"));
    assert!(compare.contains("bound_holds 1"));

    let json: serde_json::Value = serde_json::from_str(&stdout(&run(&[
        "cheeger",
        arg,
        "--compare",
        fnfile.to_str().unwrap(),
        "--json",
    ])))
    .unwrap();
    assert_eq!(json["h"], "4");
    assert_eq!(json["bound_holds"], true);
}

#[test]
fn gen_rejects_conflicting_value_flags() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("x.scx");
    let r = run(&[
        "gen",
        "rp2",
        "--constant",
        "1",
        "--values",
        "1,2,3,4,5,6",
        "-o",
        out.to_str().unwrap(),
    ]);
    assert_eq!(r.status.code(), Some(1));
}

#[test]
fn shipped_fixtures_match_their_checksums_and_regenerate_identically() {
    let dir = fixtures();
    let sums = std::fs::read_to_string(dir.join("CHECKSUMS")).unwrap();
    for line in sums.lines() {
        let (hash, name) = line.split_once("  ").unwrap();
        let bytes = std::fs::read(dir.join(name)).unwrap();
        let got = hex_digest(&bytes);
        assert_eq!(got, hash, "checksum mismatch for {}", name);
    }

    // the generator reproduces the shipped bytes
    let tmp = tempfile::tempdir().unwrap();
    let out = tmp.path().join("rp1.scx");
    assert!(run(&[
        "gen",
        "rp1",
        "--values",
        "0.2,0.4,0.5,0.9",
        "-o",
        out.to_str().unwrap(),
    ])
    .status
    .success());
    assert_eq!(
        std::fs::read(&out).unwrap(),
        std::fs::read(dir.join("rp1.scx")).unwrap()
    );
    let out = tmp.path().join("dyck.scx");
    assert!(run(&["gen", "dyck", "-o", out.to_str().unwrap()]).status.success());
    assert_eq!(
        std::fs::read(&out).unwrap(),
        std::fs::read(dir.join("dyck.scx")).unwrap()
    );
    assert_eq!(
        std::fs::read(tmp.path().join("dyck_rp2.cert")).unwrap(),
        std::fs::read(dir.join("dyck_rp2.cert")).unwrap()
    );
}

fn hex_digest(bytes: &[u8]) -> String {
    let mut h = Sha256::new();
    h.update(bytes);
    let out = h.finalize();
    out.iter().map(|b| format!("{:02x}", b)).collect()
}
