use serde_json::Value;
use std::path::PathBuf;
use std::process::{Command, Output};

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_hecke-kms"));
    c.env_remove("HECKE_KMS_SEED");
    c
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(args: &[&str]) -> String {
    let o = run(args);
    assert!(
        o.status.success(),
        "{args:?} exited {:?}: {}",
        o.status.code(),
        String::from_utf8_lossy(&o.stderr)
    );
    String::from_utf8(o.stdout).unwrap()
}

fn schema_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../schemas")
}

fn validate(schema: &str, args: &[&str]) {
    let path = schema_dir().join(format!("{schema}.schema.json"));
    let text = std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
    let schema_json: Value = serde_json::from_str(&text).unwrap();
    let validator = jsonschema::validator_for(&schema_json).expect("valid schema");
    let out: Value = serde_json::from_str(&stdout(args)).unwrap();
    let errors: Vec<String> = validator.iter_errors(&out).map(|e| e.to_string()).collect();
    assert!(errors.is_empty(), "{args:?} vs {schema}: {errors:?}");
}

#[test]
fn documented_examples() {
    assert_eq!(stdout(&["cosets", "index", "--a", "1", "--d", "12"]), "24\n");
    assert_eq!(stdout(&["zeta", "local", "--p", "2", "--beta", "1"]), "inf\n");
    assert_eq!(stdout(&["measure", "yf", "--beta", "3", "--primes", "2"]), "0.65625\n");
}

#[test]
fn parameter_errors_exit_2_with_one_line() {
    for args in [
        &["zeta", "local", "--p", "4", "--beta", "2"][..],
        &["cosets", "nf", "--matrix", "[[1,0],[0,-1]]"],
        &["measure", "cell", "--p", "2", "--beta", "0.5", "--k", "1", "--residue", "1,0,0,1"],
        &["damping", "--chi", "mod4", "--beta", "2", "--primes", "2"],
        &["hecke", "mul", "--lhs", "nonsense", "--rhs", "1:2"],
        &["cosets", "frobnicate"],
    ] {
        let o = run(args);
        assert_eq!(o.status.code(), Some(2), "{args:?}");
        let err = String::from_utf8(o.stderr).unwrap();
        assert!(err.starts_with("error:"), "{args:?}: {err}");
        if args[1] != "frobnicate" {
            assert_eq!(err.trim_end().lines().count(), 1, "{err}");
        }
    }
}

#[test]
fn failed_check_exits_1() {
    let o = run(&[
        "project", "check", "--p", "2", "--beta", "3", "--k", "1", "--det-bound", "4",
        "--tolerance", "1e-12",
    ]);
    assert_eq!(o.status.code(), Some(1));
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["pass"], false);
}

#[test]
fn csv_only_where_tabular() {
    let o = run(&["singular", "verify", "--p", "2", "--format", "csv"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn reruns_are_byte_identical() {
    for args in [
        &["measure", "sample", "--p", "3", "--beta", "2.5", "--k", "2", "--n", "50"][..],
        &["project", "check", "--p", "3", "--beta", "2.5", "--k", "1"],
        &["equidist", "trend", "--cosets", "1:2,1:3,1:5,2:2", "--format", "csv"],
        &["measure", "scan", "--beta", "1.5,2,3", "--cutoffs", "2,3,5", "--jobs", "2"],
    ] {
        assert_eq!(stdout(args), stdout(args), "{args:?}");
    }
}

#[test]
fn seed_from_environment() {
    let args = ["measure", "sample", "--p", "2", "--beta", "2", "--k", "2", "--n", "20"];
    let default = stdout(&args);
    let explicit0 = stdout(&[&args[..], &["--seed", "0"]].concat());
    assert_eq!(default, explicit0);
    let env = bin().args(args).env("HECKE_KMS_SEED", "7").output().unwrap();
    let seven = stdout(&[&args[..], &["--seed", "7"]].concat());
    assert_eq!(String::from_utf8(env.stdout).unwrap(), seven);
    assert_ne!(seven, default);
    let flag_wins = bin()
        .args(args)
        .args(["--seed", "0"])
        .env("HECKE_KMS_SEED", "7")
        .output()
        .unwrap();
    assert_eq!(String::from_utf8(flag_wins.stdout).unwrap(), default);
    let bad = bin().args(args).env("HECKE_KMS_SEED", "x").output().unwrap();
    assert_eq!(bad.status.code(), Some(2));
}

#[test]
fn csv_outputs_have_headers() {
    let cases: [(&[&str], &str); 5] = [
        (&["cosets", "reps", "--a", "1", "--d", "3"], "a,b,c,d"),
        (
            &["zeta", "brute", "--semigroup", "local:2", "--beta", "3", "--det-bound", "64"],
            "beta,closed_form,bruteforce,det_bound,abs_error",
        ),
        (
            &["measure", "sample", "--p", "2", "--beta", "2", "--k", "1", "--n", "3"],
            "a,b,x11,x12,x21,x22",
        ),
        (&["measure", "scan", "--beta", "3", "--cutoffs", "2"], "beta,prime_cutoff,mass_yf"),
        (&["equidist", "trend", "--cosets", "1:2"], "coset_r,coset_n,r_gamma,discrepancy"),
    ];
    for (args, header) in cases {
        let out = stdout(&[args, &["--format", "csv"]].concat());
        let mut lines = out.lines();
        assert_eq!(lines.next(), Some(header), "{args:?}");
        let cols = header.split(',').count();
        let rows: Vec<_> = lines.collect();
        assert!(!rows.is_empty());
        assert!(rows.iter().all(|r| r.split(',').count() == cols), "{out}");
    }
}

#[test]
fn exact_flag_prints_rationals() {
    let v: Value = serde_json::from_str(&stdout(&["singular", "roots", "--p", "3", "--exact"])).unwrap();
    assert_eq!(v["roots"], serde_json::json!(["1/3", "1/1"]));
    let v: Value = serde_json::from_str(&stdout(&["singular", "roots", "--p", "2"])).unwrap();
    assert_eq!(v["roots"], serde_json::json!([0.5, 1.0]));
}

#[test]
fn output_file() {
    let dir = std::env::temp_dir().join(format!("hecke-kms-test-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("reps.csv");
    let p = path.to_str().unwrap();
    assert_eq!(stdout(&["cosets", "reps", "--a", "1", "--d", "2", "--format", "csv", "--output", p]), "");
    let text = std::fs::read_to_string(&path).unwrap();
    assert_eq!(text.lines().count(), 4);
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn json_outputs_match_schemas() {
    let cases: &[(&str, &[&str])] = &[
        ("coset_nf", &["cosets", "nf", "--matrix", "[[2,1],[0,4]]"]),
        ("coset_reps", &["cosets", "reps", "--a", "2", "--d", "6"]),
        ("hecke_element", &["hecke", "mul", "--lhs", "1:2", "--rhs", "1:2"]),
        ("hecke_element", &["hecke", "star", "--element", "1:2"]),
        ("repcheck", &["hecke", "repcheck", "--lhs", "1:2", "--rhs", "1:3"]),
        ("zeta_brute", &["zeta", "brute", "--semigroup", "finite:2;3", "--beta", "3,4", "--det-bound", "64"]),
        ("measure_cell", &["measure", "cell", "--p", "2", "--beta", "2", "--k", "2", "--residue", "1,0,0,1"]),
        ("measure_cell", &["measure", "cell", "--p", "2", "--beta", "2", "--k", "1", "--residue", "0,0,0,0"]),
        ("measure_sample", &["measure", "sample", "--p", "3", "--beta", "2", "--k", "1", "--n", "5"]),
        ("phase_scan", &["measure", "scan", "--beta", "1.5,2", "--cutoffs", "2,3"]),
        ("lemma_report", &["singular", "verify", "--p", "5"]),
        ("singular_roots", &["singular", "roots", "--p", "3"]),
        ("singular_roots", &["singular", "roots", "--p", "3", "--exact"]),
        ("project_check", &["project", "check", "--p", "2", "--beta", "3", "--k", "1", "--function", "gl"]),
        ("damping", &["damping", "--chi", "legendre:5", "--beta", "2", "--prime-cutoff", "30"]),
        ("hecke_points", &["equidist", "points", "--a", "1", "--d", "3"]),
        ("equidist_trend", &["equidist", "trend", "--cosets", "1:2,1:3"]),
    ];
    for (schema, args) in cases {
        validate(schema, args);
    }
}

#[test]
fn schemas_accept_library_values() {
    let path = schema_dir().join("double_coset.schema.json");
    let schema: Value = serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap();
    let v = jsonschema::validator_for(&schema).unwrap();
    assert!(v.is_valid(&serde_json::json!({"r": "3/2", "n": 4})));
    assert!(!v.is_valid(&serde_json::json!({"r": "1.5", "n": 4})));
    assert!(!v.is_valid(&serde_json::json!({"r": "1/1", "n": 0})));
}
