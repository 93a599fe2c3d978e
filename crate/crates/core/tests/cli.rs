use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn etacong(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_etacong"))
        .args(args)
        .env_remove("ETACONG_MEM_CEILING")
        .output()
        .expect("spawn etacong")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&out.stdout)))
}

fn claim_file(dir: &TempDir, name: &str, body: &str) -> PathBuf {
    let path = dir.path().join(name);
    std::fs::write(&path, body).unwrap();
    path
}

fn verify(body: &str) -> Output {
    let dir = TempDir::new().unwrap();
    let path = claim_file(&dir, "claim.json", body);
    etacong(&["verify", path.to_str().unwrap()])
}

#[test]
fn expand_eobar_to_eight() {
    let out = etacong(&["expand", "eobar", "-T", "8"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    let coeffs: Vec<&str> = v["coeffs"]
        .as_array()
        .unwrap()
        .iter()
        .map(|c| c.as_str().unwrap())
        .collect();
    assert_eq!(coeffs, ["1", "0", "2", "0", "2", "0", "4", "0", "5"]);
}

#[test]
fn oracle_eo_of_eight() {
    let out = etacong(&["oracle", "eo", "--n", "8"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["counts"][0]["count"], "12");
}

#[test]
fn cross_check_agrees() {
    for series in ["eo", "eobar", "eou", "eobar_even", "eou_even"] {
        let out = etacong(&["expand", series, "-T", "30", "--cross-check"]);
        assert_eq!(out.status.code(), Some(0), "{series}");
    }
}

#[test]
fn large_coefficients_are_strings() {
    let out = etacong(&["expand", "eou", "-T", "1500"]);
    let v = json(&out);
    let last = v["coeffs"][1500].as_str().unwrap();
    assert!(last.len() > 20, "{last}");
}

#[test]
fn mod4_claim_stops_at_delta_star() {
    // Conditions 3 and 4 of Δ* fail for this tuple, so the verifier refuses the
    // "for all n" verdict even though every checked coefficient vanishes.
    let out = verify(r#"{"kind":"radu","m":50,"M":8,"N":10,"r":{"2":2,"4":1},"t":18,"u":4}"#);
    assert_eq!(out.status.code(), Some(2));
    let v = json(&out);
    assert_eq!(v["verdict"], "precondition-failed");
    assert_eq!(v["delta_star"]["failed"], serde_json::json!(["3", "4"]));
    assert_eq!(v["nu"], "113/60");
    assert_eq!(v["checked"], serde_json::json!(["18", "48", "68", "98"]));
    assert!(v.get("witness").is_none());
}

#[test]
fn wrong_modulus_gives_counterexample() {
    let out = verify(r#"{"kind":"radu","m":50,"M":8,"N":10,"r":{"2":2,"4":1},"t":18,"u":8}"#);
    assert_eq!(out.status.code(), Some(1));
    let v = json(&out);
    assert_eq!(v["verdict"], "counterexample");
    assert_eq!(v["witness"]["t_prime"], "18");
    assert_eq!(v["witness"]["value"], "4");
}

#[test]
fn unsupported_level_is_precondition() {
    let out = verify(r#"{"kind":"radu","m":50,"M":8,"N":8,"r":{"2":2,"4":1},"t":18,"u":4}"#);
    assert_eq!(out.status.code(), Some(2));
    let failed = json(&out)["failed"].to_string();
    assert!(failed.contains("level"), "{failed}");
}

#[test]
fn trivial_modulus_verifies_with_spot_check() {
    let out = verify(r#"{"kind":"radu","m":5,"M":1,"N":5,"r":{"1":-1},"t":4,"u":1}"#);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["spot_check"]["status"], "ok");
}

#[test]
fn families_from_claim_files() {
    let out = verify(r#"{"kind":"thm1-family","primes":[5],"j":[1,2,3,4],"n_max":200}"#);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["verdict"], "verified");

    let out = verify(r#"{"kind":"thm2-family","primes":[73],"j":[1,2,3],"n_max":2}"#);
    assert_eq!(out.status.code(), Some(0));

    // 7 ≢ 1 (mod 24).
    let out = verify(r#"{"kind":"thm2-family","primes":[7],"j":[1],"n_max":0}"#);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("24"));
}

#[test]
fn malformed_claims_exit_two() {
    assert_eq!(verify("{").status.code(), Some(2));
    assert_eq!(verify(r#"{"kind":"radu","m":50}"#).status.code(), Some(2));
    assert_eq!(etacong(&["verify", "/nonexistent/claim.json"]).status.code(), Some(2));
}

#[test]
fn ceiling_is_enforced() {
    let out = Command::new(env!("CARGO_BIN_EXE_etacong"))
        .args(["expand", "eobar", "-T", "5000"])
        .env("ETACONG_MEM_CEILING", "1000")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("ceiling"));
}

#[test]
fn eligible_primes_below_5000() {
    let out = etacong(&["hecke", "eligible", "--limit", "5000"]);
    assert_eq!(out.status.code(), Some(0));
    let got: Vec<u64> = json(&out)["primes"]
        .as_array()
        .unwrap()
        .iter()
        .map(|p| p.as_str().unwrap().parse().unwrap())
        .collect();
    // Every prime ≡ 1 (mod 24) below 5000 passes the mod-8 test.
    let expected: Vec<u64> = (2..=5000u64)
        .filter(|&p| p % 24 == 1 && (2..p).take_while(|d| d * d <= p).all(|d| p % d != 0))
        .collect();
    assert_eq!(got.len(), 76);
    assert_eq!(got, expected);
}

#[test]
fn density_csv_fixture() {
    let out = etacong(&[
        "density",
        "--function",
        "eobar-8n6",
        "--horizon",
        "10000",
        "--checkpoints",
        "1000,10000",
        "--out",
        "csv",
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(
        String::from_utf8(out.stdout).unwrap(),
        "X,divisible,total,fraction\n1000,647,1001,647/1001\n10000,6971,10001,6971/10001\n"
    );
}

#[test]
fn bound_and_parity_scan() {
    let out = etacong(&["bound", "--r", "0", "--t", "1"]);
    assert_eq!(json(&out)["bound"], "746495");
    let out = etacong(&["parity-scan", "--r", "2", "--t", "4", "--limit", "1000"]);
    let v = json(&out);
    assert_eq!(v["odd_status"], "absent");
    assert_eq!(v["first_even_N"], "2");
}

#[test]
fn hecke_fj_structure() {
    let out = etacong(&["hecke", "fj", "-T", "2000"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["support"].as_array().unwrap().len(), 4);
    assert!(v["annihilated"].as_array().unwrap().iter().all(|a| a["ok"] == true));
}

#[test]
fn usage_errors() {
    assert_eq!(etacong(&[]).status.code(), Some(2));
    assert_eq!(etacong(&["expand"]).status.code(), Some(2));
    assert_eq!(etacong(&["expand", "eobar", "--out", "xml"]).status.code(), Some(2));
    assert_eq!(etacong(&["--help"]).status.code(), Some(0));
    assert_eq!(etacong(&["--version"]).status.code(), Some(0));
}
