use std::process::{Command, Output};

fn weilstats(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_weilstats"))
        .args(args)
        .env("WEILSTATS_THREADS", "1")
        .output()
        .expect("binary runs")
}

fn stdout(args: &[&str]) -> String {
    let out = weilstats(args);
    assert!(
        out.status.success(),
        "{args:?}: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

fn json(args: &[&str]) -> serde_json::Value {
    let mut full = args.to_vec();
    full.extend(["--format", "json"]);
    serde_json::from_str(&stdout(&full)).unwrap()
}

fn cell(v: &serde_json::Value, row: usize, col: &str) -> String {
    let i = v["columns"]
        .as_array()
        .unwrap()
        .iter()
        .position(|c| c == col)
        .unwrap();
    v["rows"][row][i].as_str().unwrap().to_string()
}

#[test]
fn moments_example() {
    assert!(stdout(&["moments", "--q", "2", "--a", "10"]).contains("| -23 |"));
    assert_eq!(
        cell(&json(&["moments", "--q", "2", "--a", "10"]), 0, "sigma"),
        "-23"
    );
}

#[test]
fn siegel2_example() {
    let v = json(&["siegel2", "--j", "0", "--k", "35", "--q", "2"]);
    assert_eq!(cell(&v, 0, "value"), "-25073418240");
    assert_eq!(cell(&v, 0, "kind"), "eigenvalue");
}

#[test]
fn genus_zero_bounds_are_q_plus_one() {
    let v = json(&["bounds", "--q", "2", "--g", "0"]);
    let rows = v["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 5);
    for r in rows {
        assert_eq!(r[1], "3");
    }
}

#[test]
fn harder_instance() {
    let args = [
        "harder",
        "--a",
        "20",
        "--b",
        "4",
        "--p",
        "37",
        "--ell",
        "367",
        "--pi",
        "260,44",
        "--d",
        "18209",
        "--lambda-f",
    ];
    let mut yes = args.to_vec();
    yes.push("-1845192652253792587940");
    assert!(stdout(&yes).contains("| congruence | true |"));
    let mut no = args.to_vec();
    no.push("-1845192652253792587941");
    assert!(stdout(&no).contains("| congruence | false |"));
}

#[test]
fn csv_output() {
    let text = stdout(&["trace", "--k", "12", "--n", "2", "--format", "csv"]);
    assert_eq!(text, "k,n,trace\n12,2,-24\n");
}

#[test]
fn exit_codes() {
    assert_eq!(
        weilstats(&["bounds", "--q", "6", "--g", "1"]).status.code(),
        Some(2)
    );
    assert_eq!(
        weilstats(&["siegel2", "--j", "0", "--k", "35", "--q", "13"])
            .status
            .code(),
        Some(3)
    );
    assert_eq!(weilstats(&["getzler", "--n", "20"]).status.code(), Some(3));
}

#[test]
fn ensemble_cache_is_transparent() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().to_str().unwrap();
    let args = [
        "siegel2", "--j", "6", "--k", "8", "--q", "3", "--cache", cache,
    ];
    let cold = stdout(&args);
    assert!(dir.path().join("genus2-q3.json").exists());
    let warm = stdout(&args);
    assert_eq!(cold, warm);
    assert!(cold.contains("| -27000 |"));
}

#[test]
fn ensemble_build_and_info() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("e5.json");
    let f = file.to_str().unwrap();
    let built = json(&["ensemble", "build", "--genus", "1", "--q", "5", "--out", f]);
    assert_eq!(cell(&built, 0, "mass"), "5");
    let info = stdout(&["ensemble", "info", f]);
    assert!(info.contains("| mass |  | 5 |"));
}

#[test]
fn tables_diff_has_no_violations() {
    let data = concat!(env!("CARGO_MANIFEST_DIR"), "/../core/data/nqg_p3.csv");
    let v = json(&["tables", "diff", "--file", data]);
    let rows = v["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 200);
    assert!(rows.iter().all(|r| r[5] == "SLACK"));
}

#[test]
fn zeta_from_model() {
    let v = json(&["zeta", "--q", "2", "--model", "0,0,1,1,0", "--ext", "2"]);
    assert_eq!(cell(&v, 1, "value"), "1 + 2t + 2t^2");
    assert_eq!(cell(&v, 3, "value"), "5");
}
