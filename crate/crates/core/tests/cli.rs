use std::path::PathBuf;
use std::process::Command;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_waring"))
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("waring-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

fn run(args: &[&str]) -> (i32, String, String) {
    let out = bin().args(args).output().unwrap();
    (
        out.status.code().unwrap(),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

#[test]
fn kleppe_form_takes_five_terms() {
    let (code, out, err) = run(&["decompose", "-n", "3", "x0*x1^2 + x1*x2^2"]);
    assert_eq!(code, 0, "{err}");
    assert!(out.contains("terms: 5 (upper bound 5"), "{out}");
    assert!(out.contains("verified: pass"));
}

#[test]
fn bounds_three_three() {
    let (code, out, _) = run(&["bounds", "3", "3"]);
    assert_eq!(code, 0);
    assert!(out.contains("bbs 6\n"));
    assert!(out.contains("improved 5\n"));
}

#[test]
fn non_homogeneous_input_exits_two() {
    let (code, out, err) = run(&["decompose", "-n", "3", "x0^2 + x1^3"]);
    assert_eq!(code, 2);
    assert!(out.is_empty());
    assert!(err.contains("non-homogeneous"), "{err}");
}

#[test]
fn syntax_errors_exit_two() {
    let (code, _, err) = run(&["decompose", "x0^2 +* x1^2"]);
    assert_eq!(code, 2);
    assert!(err.starts_with("error:"), "{err}");
}

#[test]
fn structured_output_round_trips_through_verify() {
    let avoid = scratch("avoid.txt");
    std::fs::write(&avoid, "# forbid the coordinate hyperplanes\nl0\nl1\nl2\n").unwrap();
    for form in ["x0*x1^2 + x1*x2^2", "x0^2 + 3*x1^2 - x2^2", "x0^4 - 2*x0^2*x1^2 + x1*x2^3"] {
        let (code, json, err) = run(&["decompose", form, "--avoid", avoid.to_str().unwrap(), "--format", "structured"]);
        assert_eq!(code, 0, "{form}: {err}");
        let record = scratch("record.json");
        std::fs::write(&record, &json).unwrap();
        let (code, out, err) = run(&["verify", record.to_str().unwrap(), "--format", "structured"]);
        assert_eq!(code, 0, "{form}: {err}");
        let report: serde_json::Value = serde_json::from_str(&out).unwrap();
        assert_eq!(report["pass"], true);
    }
}

#[test]
fn tampered_record_fails_verification() {
    let (code, json, _) = run(&["decompose", "x0^3 + x1^3", "--format", "structured"]);
    assert_eq!(code, 0);
    let mut rec: serde_json::Value = serde_json::from_str(&json).unwrap();
    rec["terms"].as_array_mut().unwrap().pop();
    let path = scratch("tampered.json");
    std::fs::write(&path, rec.to_string()).unwrap();
    let (code, out, _) = run(&["verify", path.to_str().unwrap()]);
    assert_eq!(code, 1);
    assert!(out.contains("verified: FAIL"));
}

#[test]
fn same_seed_same_bytes() {
    let args = ["decompose", "x0^3 + 2*x1^3 - x2^3 + x0*x1*x2 + x3^3 + x0*x3^2", "--format", "structured", "--seed", "17"];
    let (c1, a, _) = run(&args);
    let (c2, b, _) = run(&args);
    assert_eq!((c1, c2), (0, 0));
    assert_eq!(a, b);
}

#[test]
fn form_from_file() {
    let path = scratch("form.txt");
    std::fs::write(&path, "x0*x1\n").unwrap();
    let (code, out, err) = run(&["decompose", "--form-file", path.to_str().unwrap()]);
    assert_eq!(code, 0, "{err}");
    assert!(out.contains("terms: 2"), "{out}");
}

#[test]
fn base_points_of_the_kleppe_form() {
    let (code, out, _) = run(&["base-points", "2", "x0*x1^2 + x1*x2^2"]);
    assert_eq!(code, 0);
    assert!(out.starts_with("base points 1\n"), "{out}");
}

#[test]
fn bench_csv() {
    let (code, out, _) = run(&["bench", "--n", "3", "--d", "3,4", "--trials", "2"]);
    assert_eq!(code, 0);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines.len(), 3);
    assert_eq!(lines[0], "n,d,trials,max_terms,mean_terms,bound,failures");
}

#[test]
fn low_precision_exits_two() {
    let (code, _, _) = run(&["decompose", "x0^2", "--precision", "16"]);
    assert_eq!(code, 2);
}
