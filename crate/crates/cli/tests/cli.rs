use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use grscrack::experiment::BenchRow;
use tempfile::TempDir;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_grscrack")).args(args).output().expect("binary runs")
}

fn ok(args: &[&str]) -> String {
    let out = run(args);
    assert!(out.status.success(), "{args:?} failed: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

struct Keys {
    dir: PathBuf,
}

impl Keys {
    fn public(&self) -> PathBuf {
        self.dir.join("public.json")
    }
    fn secret(&self) -> PathBuf {
        self.dir.join("secret.json")
    }
}

fn keygen(tmp: &TempDir, name: &str, args: &[&str]) -> Keys {
    let dir = tmp.path().join(name);
    let mut full = vec!["keygen", "--out", path(&dir)];
    full.extend_from_slice(args);
    ok(&full);
    Keys { dir }
}

const WIESCHEBRINK: &[&str] = &["--scheme", "wieschebrink", "--q", "31", "--n", "24", "--k", "6", "--r", "3", "--seed", "1"];
const BL: &[&str] = &["--scheme", "bl", "--q", "257", "--n", "80", "--k", "8", "--ell", "4", "--seed", "2"];
const BBCRS: &[&str] = &["--scheme", "bbcrs", "--p", "2", "--m", "4", "--n", "15", "--k", "6", "--seed", "3"];

fn encrypt(tmp: &TempDir, keys: &Keys, message: &str, seed: u64) -> PathBuf {
    let ct = tmp.path().join(format!("ct-{seed}.json"));
    let seed = seed.to_string();
    ok(&["encrypt", "--in", path(&keys.public()), "--message", message, "--seed", &seed, "--out", path(&ct)]);
    ct
}

fn message(json: &str) -> Vec<u32> {
    let v: serde_json::Value = serde_json::from_str(json).unwrap();
    serde_json::from_value(v["m"].clone()).unwrap()
}

#[test]
fn keygen_encrypt_decrypt_round_trip() {
    let tmp = TempDir::new().unwrap();
    for (name, args, msg) in [
        ("w", WIESCHEBRINK, "1,2,3,4,5,6"),
        ("bl", BL, "200"),
        ("bb", BBCRS, "0,1,15,7,3,9"),
    ] {
        let keys = keygen(&tmp, name, args);
        let ct = encrypt(&tmp, &keys, msg, 5);
        let out = ok(&["decrypt", "--key", path(&keys.secret()), "--in", path(&ct)]);
        let want: Vec<u32> = msg.split(',').map(|s| s.parse().unwrap()).collect();
        assert_eq!(message(&out), want, "{name}");
    }
}

#[test]
fn same_seed_gives_identical_key_files() {
    let tmp = TempDir::new().unwrap();
    for (i, args) in [WIESCHEBRINK, BL, BBCRS].into_iter().enumerate() {
        let a = keygen(&tmp, &format!("a{i}"), args);
        let b = keygen(&tmp, &format!("b{i}"), args);
        assert_eq!(std::fs::read(a.public()).unwrap(), std::fs::read(b.public()).unwrap());
        assert_eq!(std::fs::read(a.secret()).unwrap(), std::fs::read(b.secret()).unwrap());
    }
}

#[test]
fn truncated_key_exits_2_without_output() {
    let tmp = TempDir::new().unwrap();
    let keys = keygen(&tmp, "w", WIESCHEBRINK);
    let ct = encrypt(&tmp, &keys, "1,2,3,4,5,6", 1);
    for file in [keys.public(), keys.secret()] {
        let text = std::fs::read_to_string(&file).unwrap();
        std::fs::write(&file, &text[..text.len() / 2]).unwrap();
    }
    let out_path = tmp.path().join("never.json");
    let out = run(&["encrypt", "--in", path(&keys.public()), "--message", "1,2,3,4,5,6", "--seed", "1", "--out", path(&out_path)]);
    assert_eq!(out.status.code(), Some(2));
    assert!(!out_path.exists());
    let out = run(&["decrypt", "--key", path(&keys.secret()), "--in", path(&ct), "--out", path(&out_path)]);
    assert_eq!(out.status.code(), Some(2));
    assert!(out.stdout.is_empty());
    assert!(!out_path.exists());
}

#[test]
fn out_of_range_element_names_the_field() {
    let tmp = TempDir::new().unwrap();
    let keys = keygen(&tmp, "bl", BL);
    let bad = tmp.path().join("ct.json");
    std::fs::write(&bad, "{\"c\": [900]}").unwrap();
    let out = run(&["decrypt", "--key", path(&keys.secret()), "--in", path(&bad)]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("c:"));
}

#[test]
fn undecodable_ciphertext_exits_3() {
    let tmp = TempDir::new().unwrap();
    let keys = keygen(&tmp, "w", WIESCHEBRINK);
    let ct = tmp.path().join("noise.json");
    let c: Vec<u32> = (0..27).map(|i| (i * i * 7 + 3) % 31).collect();
    std::fs::write(&ct, serde_json::json!({ "c": c }).to_string()).unwrap();
    let out = run(&["decrypt", "--key", path(&keys.secret()), "--in", path(&ct)]);
    assert_eq!(out.status.code(), Some(3), "{}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn attack_then_crack_decrypt_matches_secret_key() {
    let tmp = TempDir::new().unwrap();
    for (name, args, msg) in [
        ("w", WIESCHEBRINK, "3,1,4,1,5,9"),
        ("bl", BL, "42"),
        ("bb", BBCRS, "2,7,1,8,2,8"),
    ] {
        let keys = keygen(&tmp, name, args);
        let crack = tmp.path().join(format!("{name}-crack.json"));
        let report = ok(&["attack", "--in", path(&keys.public()), "--seed", "7", "--out", path(&crack)]);
        assert!(report.contains("trials:") && report.contains("total:"), "{report}");
        for seed in 0..5 {
            let ct = encrypt(&tmp, &keys, msg, seed);
            let by_crack = ok(&["crack-decrypt", "--crack", path(&crack), "--key", path(&keys.public()), "--in", path(&ct)]);
            let by_key = ok(&["decrypt", "--key", path(&keys.secret()), "--in", path(&ct)]);
            assert_eq!(by_crack, by_key, "{name}");
        }
    }
}

#[test]
fn wieschebrink_report_counts_random_positions() {
    let tmp = TempDir::new().unwrap();
    let keys = keygen(&tmp, "w", WIESCHEBRINK);
    let crack = tmp.path().join("crack.json");
    let report = ok(&["attack", "--in", path(&keys.public()), "--scheme", "wieschebrink", "--seed", "1", "--out", path(&crack)]);
    assert!(report.contains("random positions: 3"), "{report}");
}

#[test]
fn bbcrs_dead_zone_exits_4() {
    let tmp = TempDir::new().unwrap();
    let keys = keygen(&tmp, "bb", &["--scheme", "bbcrs", "--q", "16", "--n", "15", "--k", "7", "--seed", "4"]);
    let out = run(&["attack", "--in", path(&keys.public()), "--seed", "1"]);
    assert_eq!(out.status.code(), Some(4));
    assert!(String::from_utf8_lossy(&out.stderr).contains("unsupported rate"));
    assert!(out.stdout.is_empty());
}

#[test]
fn trial_cap_exhaustion_exits_4_with_trial_count() {
    let tmp = TempDir::new().unwrap();
    let keys = keygen(&tmp, "bb", BBCRS);
    let out = run(&["attack", "--in", path(&keys.public()), "--seed", "1", "--trial-cap", "5"]);
    assert_eq!(out.status.code(), Some(4));
    assert!(String::from_utf8_lossy(&out.stderr).contains("5 trials"));
}

#[test]
fn distinguish_reports_grs_likeness() {
    let tmp = TempDir::new().unwrap();
    let grs = tmp.path().join("grs.json");
    let random = tmp.path().join("random.json");
    ok(&["gen-code", "--kind", "grs", "--q", "64", "--n", "40", "--k", "10", "--seed", "1", "--out", path(&grs)]);
    ok(&["gen-code", "--kind", "random", "--q", "64", "--n", "40", "--k", "10", "--seed", "1", "--out", path(&random)]);
    assert!(ok(&["distinguish", "--in", path(&grs)]).contains("grs_like: true"));
    assert!(ok(&["distinguish", "--in", path(&random)]).contains("grs_like: false"));

    let keys = keygen(&tmp, "bl", BL);
    let report = ok(&["distinguish", "--in", path(&keys.public())]);
    let field = |name: &str| -> usize {
        let line = report.lines().find(|l| l.starts_with(name)).unwrap();
        line.rsplit(": ").next().unwrap().parse().unwrap()
    };
    assert!(field("dim_square") < field("random_dim"), "{report}");
}

#[test]
fn grs_recover_accepts_grs_and_rejects_random() {
    let tmp = TempDir::new().unwrap();
    let grs = tmp.path().join("grs.json");
    let random = tmp.path().join("random.json");
    ok(&["gen-code", "--kind", "grs", "--q", "64", "--n", "40", "--k", "12", "--seed", "2", "--out", path(&grs)]);
    ok(&["gen-code", "--kind", "random", "--q", "64", "--n", "40", "--k", "12", "--seed", "2", "--out", path(&random)]);
    let spec: serde_json::Value = serde_json::from_str(&ok(&["grs-recover", "--in", path(&grs)])).unwrap();
    assert_eq!(spec["k"], 12);
    assert_eq!(spec["x"].as_array().unwrap().len(), 40);
    assert_eq!(run(&["grs-recover", "--in", path(&random)]).status.code(), Some(4));
}

#[test]
fn bench_csv_parses_back() {
    let tmp = TempDir::new().unwrap();
    let csv_path = tmp.path().join("bench.csv");
    let table = ok(&["bench", "--preset", "bbcrs-desk", "--trials", "2", "--seed", "1", "--out", path(&csv_path)]);
    assert!(table.contains("bbcrs"));
    let text = std::fs::read_to_string(&csv_path).unwrap();
    assert_eq!(text.lines().next().unwrap(), "q,n,k,r,trials,mean_seconds,success_rate");
    let rows: Vec<BenchRow> = csv::Reader::from_path(&csv_path).unwrap().deserialize().map(Result::unwrap).collect();
    assert_eq!(rows.len(), 1);
    assert_eq!((rows[0].q, rows[0].n, rows[0].k, rows[0].trials), (16, 15, 6, 2));
    assert_eq!(rows[0].success_rate, 1.0);

    // rows survive a write/read cycle unchanged
    let copy = tmp.path().join("copy.csv");
    let mut w = csv::Writer::from_path(&copy).unwrap();
    w.serialize(&rows[0]).unwrap();
    w.flush().unwrap();
    let again: Vec<BenchRow> = csv::Reader::from_path(&copy).unwrap().deserialize().map(Result::unwrap).collect();
    assert_eq!(again, rows);
}

#[test]
fn unknown_preset_exits_2() {
    assert_eq!(run(&["bench", "--preset", "nope", "--seed", "1"]).status.code(), Some(2));
}
