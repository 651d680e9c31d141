use std::io::Write;
use std::path::PathBuf;
use std::process::{Command, Output, Stdio};

fn ruled(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ruled")).args(args).output().expect("binary runs")
}

fn ruled_with(args: &[&str], env: &[(&str, &str)], stdin: &str) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_ruled"))
        .args(args)
        .envs(env.iter().copied())
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("binary runs");
    child.stdin.take().unwrap().write_all(stdin.as_bytes()).unwrap();
    child.wait_with_output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exited normally")
}

fn value(o: &Output, key: &str) -> String {
    stdout(o)
        .lines()
        .find_map(|l| l.strip_prefix(&format!("{key},")).map(str::to_string))
        .unwrap_or_else(|| panic!("no `{key}` in\n{}", stdout(o)))
}

fn scratch(name: &str) -> PathBuf {
    let dir = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join("cli-tests");
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

#[test]
fn height_rows_and_exit_codes() {
    let o = ruled(&["height", "[2:4:6]", "--field", "q"]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o), "input,canonical,height\n[2:4:6],[1:2:3],3\n");
    let o = ruled(&["height", "[1+i:2]", "--field", "qi"]);
    assert_eq!(stdout(&o), "input,canonical,height\n[1+i:2],[1:1-i],2\n");
    assert_eq!(code(&ruled(&["height", "[0:0]"])), 3);
    assert_eq!(code(&ruled(&["height", "[0:0]", "--field", "qi"])), 3);
    assert_eq!(code(&ruled(&["height", "1:2"])), 2);
    assert_eq!(code(&ruled(&["height", "[1+i:2]", "--field", "q"])), 2);
    assert_eq!(code(&ruled(&["height", "[1:2]", "--field", "r"])), 2);
}

#[test]
fn count_examples() {
    let o = ruled(&["count", "pn:1", "--bound", "1", "--field", "q"]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o), "object,field,method,bound,count\npn:1,q,lattice,1,4\n");
    let o = ruled(&["count", "scroll:1,2", "--bound", "20", "--method", "both"]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o).lines().nth(1).unwrap(), "\"scroll:1,2\",q,20,3080,3080,MATCH");
}

#[test]
fn count_rows_are_sorted_and_methods_agree() {
    let o = ruled(&[
        "count",
        "pn:2",
        "cone:quadric",
        "pencil:2",
        "span=[1:2:3];[0:1:5]",
        "scroll:0,2",
        "--bound",
        "6,1,3",
        "--method",
        "both",
    ]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    let text = stdout(&o);
    let rows: Vec<&str> = text.lines().skip(1).collect();
    assert_eq!(rows.len(), 15);
    assert!(rows.iter().all(|r| r.ends_with(",MATCH")));
    let keys: Vec<(String, u64)> = rows
        .iter()
        .map(|r| {
            let f: Vec<&str> = r.rsplitn(6, ',').collect();
            (f[5].trim_matches('"').to_string(), f[3].parse().unwrap())
        })
        .collect();
    let mut sorted = keys.clone();
    sorted.sort();
    assert_eq!(keys, sorted);
}

#[test]
fn gaussian_counts_match() {
    let o = ruled(&["count", "pn:2", "scroll:1,1", "--bound", "1,3", "--field", "qi", "--method", "both"]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o).matches("MATCH").count(), 4);
}

#[test]
fn count_errors() {
    assert_eq!(code(&ruled(&["count", "plane:2", "--bound", "3"])), 2);
    assert_eq!(code(&ruled(&["count", "pn:2", "--bound", "0"])), 2);
    assert_eq!(code(&ruled(&["count", "pn:2"])), 2);
    assert_eq!(code(&ruled(&["count", "pn:2", "--bound", "3", "--method", "param"])), 2);
    assert_eq!(code(&ruled(&["count", "span=[1:2];[2:4]", "--bound", "3"])), 2);
    // A zero spanning vector makes the pair dependent, not a zero point.
    assert_eq!(code(&ruled(&["count", "span=[0:0];[1:0]", "--bound", "3"])), 2);
    let o = ruled(&["count", "pn:3", "--bound", "40", "--method", "brute", "--limit", "1000"]);
    assert_eq!(code(&o), 4);
}

#[test]
fn partial_rows_are_flushed_before_a_resource_failure() {
    let o = ruled(&["count", "pn:2", "--bound", "2,200", "--method", "brute", "--limit", "5000"]);
    assert_eq!(code(&o), 4);
    assert_eq!(stdout(&o), "object,field,method,bound,count\npn:2,q,brute,2,49\n");
}

#[test]
fn output_is_independent_of_worker_count() {
    let args = ["count", "pn:2", "scroll:1,2", "cone:quadric", "--bound", "1,2,4,8,16", "--method", "both"];
    let one = ruled_with(&args, &[("RULED_WORKERS", "1")], "");
    let four = ruled_with(&args, &[("RULED_WORKERS", "4")], "");
    assert_eq!(code(&one), 0);
    assert_eq!(one.stdout, four.stdout);
    assert_eq!(code(&ruled_with(&args, &[("RULED_WORKERS", "zero")], "")), 2);
}

#[test]
fn lines_from_stdin() {
    let corpus = "# two lines\nspan=[1:0:0];[0:1:0]\n\n[1:2:3];[0:1:5]\n";
    let o = ruled_with(&["count", "--corpus", "-", "--bound", "5", "--method", "param"], &[], corpus);
    assert_eq!(code(&o), 0);
    let text = stdout(&o);
    assert!(text.contains("span=[1:0:0];[0:1:0],q,param,5,"), "{text}");
    assert_eq!(text.lines().count(), 3);
    let o = ruled_with(&["count", "--corpus", "-", "--bound", "5"], &[], "[1:2];[2:4]\n");
    assert_eq!(code(&o), 2);
}

#[test]
fn json_mirrors_rows_with_meta() {
    let o = ruled(&["count", "pn:1", "--bound", "1,10", "--format", "json"]);
    let doc: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(doc["meta"]["bounds"], "1 10");
    assert_eq!(doc["rows"][1]["count"], 128);
    let o = ruled(&["height", "[2:4:6]", "--format", "json"]);
    let doc: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(doc["rows"][0]["canonical"], "[1:2:3]");
}

#[test]
fn verify_pencil_passes() {
    let o = ruled(&["verify", "pencil", "--field", "q", "n=2", "B=5"]);
    assert_eq!(code(&o), 0);
    assert_eq!(value(&o, "n2_B5"), "577/577");
    assert_eq!(value(&o, "status"), "PASS");
    let o = ruled(&["verify", "pencil", "--field", "qi", "--n", "2", "--bound", "1,4"]);
    assert_eq!(code(&o), 0);
}

#[test]
fn verify_det_lemma_on_p3_corpus() {
    let out = scratch("det.csv");
    let args = ["verify", "det-lemma", "n=3", "seed=42", "count=1000", "--out", out.to_str().unwrap()];
    let o = ruled(&args);
    assert_eq!(code(&o), 0);
    assert_eq!(value(&o, "failures"), "0");
    assert_eq!(value(&o, "n3_band_squared"), "\"[1,6]\"");
    let table = std::fs::read(&out).unwrap();
    assert_eq!(table.iter().filter(|&&b| b == b'\n').count(), 1001);
    let manifest: serde_json::Value =
        serde_json::from_slice(&std::fs::read(format!("{}.manifest.json", out.display())).unwrap()).unwrap();
    assert_eq!(manifest["status"], "PASS");
    assert_eq!(manifest["config"]["corpus"], "random(seed=42,n=3,E=20,count=1000)");
    // Same configuration twice gives byte-identical output.
    let again = ruled(&args);
    assert_eq!(again.stdout, o.stdout);
    assert_eq!(std::fs::read(&out).unwrap(), table);
}

#[test]
fn verify_theorem_main_on_a_small_stratified_corpus() {
    let o = ruled(&["verify", "theorem-main", "count=40", "B=10,100"]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    assert_eq!(value(&o, "lines"), "40");
    assert_eq!(value(&o, "bounded"), "true");
    assert!(value(&o, "sup_witness").starts_with("span="));
}

#[test]
fn failed_assertions_exit_one_and_still_write_the_table() {
    let cal = scratch("strict.toml");
    let frozen = include_str!("../../core/calibration.toml");
    std::fs::write(&cal, frozen.replace("c_max = \"5/2\"", "c_max = \"1/100\"")).unwrap();
    let out = scratch("strict.csv");
    let o = ruled(&[
        "verify",
        "theorem-main",
        "count=20",
        "B=10",
        "--calibration",
        cal.to_str().unwrap(),
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 1);
    assert_eq!(value(&o, "status"), "FAIL");
    assert_eq!(value(&o, "c_max"), "1/100");
    let table = std::fs::read_to_string(&out).unwrap();
    assert_eq!(table.lines().count(), 21);
}

#[test]
fn bundle_rejects_the_quadric_surface() {
    assert_eq!(code(&ruled(&["verify", "bundle", "a=1", "b=1"])), 2);
    assert_eq!(code(&ruled(&["verify", "bundle", "a=2", "b=1"])), 2);
    let o = ruled(&["verify", "bundle", "B=20,40"]);
    assert_eq!(code(&o), 0);
    assert_eq!(value(&o, "within_band"), "true");
}

#[test]
fn verify_epsilon_single_scroll() {
    let o = ruled(&["verify", "epsilon", "a=1", "b=2"]);
    assert_eq!(code(&o), 0);
    assert_eq!(value(&o, "\"scroll:1,2.epsilon_below_one\""), "true");
    let o = ruled(&["verify", "epsilon", "a=1", "b=1"]);
    assert_eq!(code(&o), 0);
    assert_eq!(value(&o, "\"scroll:1,1.epsilon_below_one\""), "false");
    assert_eq!(code(&ruled(&["verify", "epsilon", "B=100,1000"])), 2);
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(code(&ruled(&["verify", "nonsense"])), 2);
    assert_eq!(code(&ruled(&["verify", "pencil", "q=2"])), 2);
    assert_eq!(code(&ruled(&["verify", "pencil", "n2"])), 2);
    assert_eq!(code(&ruled(&[])), 2);
    assert_eq!(code(&ruled(&["--version"])), 0);
}
