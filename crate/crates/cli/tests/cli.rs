use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn evalrep<I, S>(args: I) -> Output
where
    I: IntoIterator<Item = S>,
    S: AsRef<std::ffi::OsStr>,
{
    Command::new(env!("CARGO_BIN_EXE_evalrep"))
        .args(args)
        .output()
        .expect("evalrep runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!(
            "stdout is not JSON ({e}):\n{}\nstderr:\n{}",
            String::from_utf8_lossy(&out.stdout),
            String::from_utf8_lossy(&out.stderr)
        )
    })
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

#[test]
fn verify_full_grid_passes() {
    let out = evalrep(["verify", "--n", "2", "--l", "3", "--lambda", "all"]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let r = json(&out);
    assert_eq!(r["summary"]["passed"], true);
    assert_eq!(r["results"].as_array().unwrap().len(), 9);
    for point in r["results"].as_array().unwrap() {
        let suites: Vec<&str> = point["suites"]
            .as_array()
            .unwrap()
            .iter()
            .map(|s| s["suite"].as_str().unwrap())
            .collect();
        assert_eq!(suites, ["finite", "affine", "affine", "nilpotent", "kernels"]);
    }
    assert_eq!(r["conventions"]["f0_b_subscript"], "b_{1,n-s+1}");
    assert_eq!(r["conventions"]["e_theta_lambda_term"], "without");
    assert_eq!(r["tool"]["version"], env!("CARGO_PKG_VERSION"));
}

#[test]
fn corrupted_action_fails_with_witness() {
    let out = evalrep(["verify", "--lambda", "1,1", "--suite", "finite", "--corrupt", "F2"]);
    assert_eq!(code(&out), 1);
    let r = json(&out);
    assert_eq!(r["summary"]["passed"], false);
    let failing: Vec<&Value> = r["results"][0]["suites"][0]["checks"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|c| c["status"] == "fail")
        .collect();
    assert!(!failing.is_empty());
    let w = &failing[0]["witness"];
    assert_eq!(w["basis"].as_array().unwrap().len(), 3);
    assert_ne!(w["lhs"], w["rhs"]);
}

#[test]
fn config_errors_exit_2_before_any_output() {
    for args in [
        vec!["verify", "--n", "2", "--l", "3", "--strict-gcd"],
        vec!["iso", "--n", "1", "--l", "3"],
        vec!["verify", "--n", "1", "--suite", "affine"],
        vec!["verify", "--l", "4"],
        vec!["verify", "--lambda", "3,0"],
        vec!["drinfeld", "--a", "0"],
        vec!["dump", "--generator", "E7"],
        vec!["iso", "--a-plus", "1"],
    ] {
        let out = evalrep(&args);
        assert_eq!(code(&out), 2, "{args:?}");
        assert!(out.stdout.is_empty(), "{args:?}");
        assert!(String::from_utf8_lossy(&out.stderr).contains("config"), "{args:?}");
    }
}

#[test]
fn strict_gcd_accepts_coprime_pairs() {
    let out = evalrep(["verify", "--n", "2", "--l", "5", "--lambda", "4,1", "--strict-gcd"]);
    assert_eq!(code(&out), 0);
    assert!(json(&out)["notes"].as_array().unwrap().is_empty());
}

#[test]
fn reports_are_byte_identical_across_runs() {
    let dir = TempDir::new().unwrap();
    let args = |name: &str| {
        vec![
            "iso".to_string(),
            "--sweep".into(),
            "--n".into(),
            "3".into(),
            "--lambda".into(),
            "random:3".into(),
            "--seed".into(),
            "17".into(),
            "--out".into(),
            dir.path().join(name).display().to_string(),
        ]
    };
    assert_eq!(code(&evalrep(args("one.json"))), 0);
    assert_eq!(code(&evalrep(args("two.json"))), 0);
    let one = fs::read(dir.path().join("one.json")).unwrap();
    assert_eq!(one, fs::read(dir.path().join("two.json")).unwrap());
    let r: Value = serde_json::from_slice(&one).unwrap();
    assert_eq!(r["config"]["seed"], 17);
    assert_eq!(r["config"]["lambda"], "random:3");
}

fn write(dir: &Path, name: &str, body: &str) -> String {
    let p = dir.join(name);
    fs::write(&p, body).unwrap();
    p.display().to_string()
}

#[test]
fn toml_json_and_flags_give_the_same_report() {
    let dir = TempDir::new().unwrap();
    let t = write(dir.path(), "c.toml", "n = 2\nl = 5\nlambda = [2, 3]\na = [\"eps^2\"]\nsigns = [\"-\"]\n");
    let j = write(dir.path(), "c.json", r#"{"n": 2, "l": 5, "lambda": [2, 3], "a": ["eps^2"], "signs": ["-"]}"#);
    let from_toml = evalrep(["drinfeld", "--config", &t]);
    let from_json = evalrep(["drinfeld", "--config", &j]);
    assert_eq!(code(&from_toml), 0);
    assert_eq!(from_toml.stdout, from_json.stdout);
    let flags = evalrep(["drinfeld", "--n", "2", "--l", "5", "--lambda", "2,3", "--a", "eps^2", "--sign", "-"]);
    assert_eq!(json(&flags)["results"], json(&from_toml)["results"]);
}

#[test]
fn flags_override_config_fields() {
    let dir = TempDir::new().unwrap();
    let c = write(dir.path(), "c.json", r#"{"n": 2, "l": 5, "lambda": [1, 0]}"#);
    let r = json(&evalrep(["dump", "--config", &c, "--l", "3", "--generator", "K1"]));
    assert_eq!(r["config"]["l"], 3);
    assert_eq!(r["results"][0]["dim"], 27);
}

#[test]
fn malformed_config_reports_the_location() {
    let dir = TempDir::new().unwrap();
    let c = write(dir.path(), "c.json", "{\n  \"n\": 2,\n  \"colour\": 1\n}\n");
    let out = evalrep(["verify", "--config", &c]);
    assert_eq!(code(&out), 2);
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("colour") && err.contains("line 3"), "{err}");
    let t = write(dir.path(), "c.toml", "n = 2\nl = \"three\"\n");
    let err = String::from_utf8_lossy(&evalrep(["verify", "--config", &t]).stderr).to_string();
    assert!(err.contains("line 2"), "{err}");
}

#[test]
fn drinfeld_at_the_coincidence_point() {
    let r = json(&evalrep(["drinfeld", "--lambda", "1,1", "--a", "1"]));
    let rows = r["results"].as_array().unwrap();
    assert_eq!(rows.len(), 2);
    for row in rows {
        assert_eq!(row["equal"], true);
        assert_eq!(row["P"], row["P_module"]);
        assert_eq!(row["P"].as_array().unwrap().len(), 2);
    }
    assert_eq!(rows[0]["sign"], "+");
    assert_eq!(rows[1]["sign"], "-");
}

#[test]
fn zero_weight_gives_constant_polynomials() {
    let r = json(&evalrep(["drinfeld", "--lambda", "0,0"]));
    for row in r["results"].as_array().unwrap() {
        assert_eq!(row["equal"], true);
        for p in row["P"].as_array().unwrap() {
            assert_eq!(p["coeffs"], serde_json::json!(["1"]));
            assert!(p.get("root").is_none());
        }
    }
}

#[test]
fn float_backend_tags_tolerance() {
    let out = evalrep(["drinfeld", "--backend", "float", "--lambda", "2,1", "--a", "0.7+0.2i"]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let r = json(&out);
    for row in r["results"].as_array().unwrap() {
        assert_eq!(row["equal"], true);
        assert_eq!(row["tolerance"], 1e-9);
        assert_eq!(row["P"][0]["coeffs"].as_array().unwrap().len(), 3);
    }
    assert!(r["notes"].as_array().unwrap().iter().any(|n| n.as_str().unwrap().contains("exp(2 pi i / l)")));
}

#[test]
fn iso_sweep_finds_the_coincidence() {
    let out = evalrep(["iso", "--sweep", "--n", "2", "--l", "3"]);
    assert_eq!(code(&out), 0);
    let r = json(&out);
    assert_eq!(r["sweep"]["agreement"], true);
    assert_eq!(r["sweep"]["coincidences"], serde_json::json!([[1, 1]]));
    assert_eq!(r["results"].as_array().unwrap().len(), 8);
}

#[test]
fn iso_single_pair_reports_three_methods() {
    let r = json(&evalrep(["iso", "--lambda", "1,1", "--a-plus", "1", "--a-minus", "1"]));
    let row = &r["results"][0];
    assert_eq!(row["verdict"], true);
    assert_eq!(row["agreement"], true);
    let methods: Vec<&str> = row["iso"].as_array().unwrap().iter().map(|d| d["method"].as_str().unwrap()).collect();
    assert_eq!(methods, ["direct", "explicit", "operator-witness"]);
    let r = json(&evalrep(["iso", "--lambda", "1,1", "--a-plus", "eps", "--a-minus", "1"]));
    assert_eq!(r["results"][0]["verdict"], false);
    assert_eq!(r["summary"]["passed"], true);
}

#[test]
fn dump_lists_every_nonzero_entry() {
    let r = json(&evalrep(["dump", "--lambda", "1,1", "--generator", "F0", "--sign", "-", "--a", "eps"]));
    let m = &r["results"][0];
    assert_eq!(m["generator"], "F_0");
    assert_eq!(m["sign"], "-");
    assert_eq!(m["entries"].as_array().unwrap().len() as u64, m["nnz"].as_u64().unwrap());
    assert!(m["nnz"].as_u64().unwrap() > 0);
}

#[test]
fn generic_parameters_on_the_float_backend() {
    let dir = TempDir::new().unwrap();
    let c = write(
        dir.path(),
        "g.toml",
        "n = 2\nl = 3\nbackend = \"float\"\nsuites = [\"finite\", \"nilpotent\"]\n\
         [params]\na = [\"2\", \"0.5+0.5i\", \"eps\"]\nb = [\"0.25\", \"0\", \"-1\"]\nlambda = [\"0.5\", \"1\"]\n",
    );
    let out = evalrep(["verify", "--config", &c]);
    let r = json(&out);
    let suites = r["results"][0]["suites"].as_array().unwrap();
    assert_eq!(suites[0]["suite"], "finite");
    assert_eq!(suites[0]["passed"], true);
    // K^l = 1 fails for a non-integer weight
    assert_eq!(suites[1]["passed"], false);
    assert_eq!(code(&out), 1);
}

#[test]
fn text_format_has_one_line_per_suite() {
    let out = evalrep(["verify", "--lambda", "2,0", "--suite", "finite", "--suite", "kernels", "--format", "text"]);
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert!(lines[0].starts_with("evalrep "));
    assert!(lines.contains(&"PASS lambda=(2,0) finite 21/21"));
    assert!(lines.contains(&"PASS lambda=(2,0) kernels 2/2"));
    assert_eq!(*lines.last().unwrap(), "summary: PASS (23 checks, 0 failures)");
}
