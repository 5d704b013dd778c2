use std::process::{Command, Output};

fn wcirig(args: &[&str], db: Option<&std::path::Path>) -> Output {
    let mut c = Command::new(env!("CARGO_BIN_EXE_wcirig"));
    c.args(args).env_remove("WCIRIG_DB").env_remove("WCIRIG_CONDITIONS");
    if let Some(p) = db {
        c.env("WCIRIG_DB", p);
    }
    c.output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn classify_exit_codes() {
    let o = wcirig(&["classify", "--family", "57"], None);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("Verdict: NONRIGID_FANO X'_14 in P(1,2,3,7,2)"));
    let o = wcirig(&["classify", "--family", "14", "--format", "json"], None);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v[0]["verdict"], "RIGID");
    for c in v[0]["centers"].as_array().unwrap() {
        let value = c["value"].as_str().unwrap();
        assert!(value == "0" || value.starts_with('-'), "{value}");
    }
    assert_eq!(wcirig(&["classify", "--family", "86"], None).status.code(), Some(2));
    assert_eq!(wcirig(&["classify", "--format", "xml", "--family", "1"], None).status.code(), Some(2));
    assert_eq!(wcirig(&["classify", "--family", "33"], None).status.code(), Some(1));
}

#[test]
fn verify_and_mutation() {
    let o = wcirig(&["verify"], None);
    let text = stdout(&o);
    assert_eq!(o.status.code(), Some(1));
    assert!(text.contains("1 diffs; rigid set of size 19"), "{text}");
    assert!(text.contains("No.33 certificate p2,5"));

    let shipped = include_str!("../data/families.db");
    let line = "point 1,2,4 type 1/2(1,1,1) count 7 method TEST_CLASS(4,1)";
    assert!(shipped.contains(line));
    let mutated = shipped.replace(line, "point 1,2,4 type 1/2(1,1,1) count 7 method TEST_CLASS(4,2)");
    let path = std::env::temp_dir().join(format!("wcirig-mutated-{}.db", std::process::id()));
    std::fs::write(&path, mutated).unwrap();
    let m = wcirig(&["verify"], Some(&path));
    let _ = std::fs::remove_file(&path);
    let text = stdout(&m);
    assert_eq!(m.status.code(), Some(1));
    assert!(text.contains("2 diffs"), "{text}");
    assert!(text.contains("No.24 certificate p1,2,4 1/2(1,1,1) TEST_CLASS(4,2)"), "{text}");

    let missing = std::env::temp_dir().join("wcirig-no-such-file.db");
    assert_eq!(wcirig(&["verify"], Some(&missing)).status.code(), Some(2));
}

#[test]
fn table_is_byte_identical() {
    for format in ["json", "md", "csv"] {
        let a = wcirig(&["table", "--all", "--format", format], None);
        let b = wcirig(&["table", "--all", "--format", format], None);
        assert_eq!(a.stdout, b.stdout, "{format}");
        assert!(!a.stdout.is_empty());
    }
    let json = wcirig(&["table", "--all", "--format", "json"], None);
    let v: serde_json::Value = serde_json::from_slice(&json.stdout).unwrap();
    assert_eq!(v.as_array().unwrap().len(), 85);
    let v1 = wcirig(&["verify"], None);
    let v2 = wcirig(&["verify"], None);
    assert_eq!(v1.stdout, v2.stdout);
}

#[test]
fn symbolic_runs() {
    let o = wcirig(&["symbolic", "--family", "53", "--seeds", "5"], None);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).lines().filter(|l| l.contains(" EI seed ") && l.ends_with("PASS")).count(), 5);
    let o = wcirig(&["symbolic", "--family", "53", "--corrupt", "eqEI3"], None);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("FAIL eqEI3"));
}

#[test]
fn enumerate_flags() {
    let o = wcirig(&["enumerate", "--max-weight", "1", "--max-degree", "5"], None);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("X_{2,3} in P(1,1,1,1,1,1) KNOWN No.1"));
    assert_eq!(wcirig(&["enumerate", "--max-weight", "0", "--max-degree", "5"], None).status.code(), Some(2));
}
