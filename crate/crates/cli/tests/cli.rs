use std::process::{Command, Output};

fn kcoal(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_kcoal")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn gen_writes_edge_list_and_reports_counts() {
    let dir = std::env::temp_dir().join(format!("kcoal-gen-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("g.txt");
    let o = kcoal(&["gen", "kcoal:p1=4,p2=3,k=1", "--out", path.to_str().unwrap()]);
    assert!(o.status.success());
    assert_eq!(stdout(&o), "n=6 m=9\n");
    let text = std::fs::read_to_string(&path).unwrap();
    assert!(text.starts_with("6 9\n"));

    // The written file is itself a valid source.
    let o = kcoal(&["resist", path.to_str().unwrap(), "--route", "oracle", "--format", "text"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).lines().count(), 6);
    let o = kcoal(&["resist", path.to_str().unwrap(), "--route", "closed"]);
    assert!(!o.status.success());
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn invalid_spec_fails_with_message() {
    let o = kcoal(&["gen", "windmill:n=1,t=2"]);
    assert!(!o.status.success());
    assert!(String::from_utf8_lossy(&o.stderr).contains("n > 1"));
    let o = kcoal(&["gen", "kcoal:p1=4,x=3"]);
    assert!(String::from_utf8_lossy(&o.stderr).contains("`x`"));
}

#[test]
fn resist_both_reports_deviation() {
    let o = kcoal(&["resist", "kite:p=3", "--route", "both"]);
    assert!(o.status.success());
    let err = String::from_utf8_lossy(&o.stderr);
    let dev: f64 = err.trim().strip_prefix("max_deviation=").unwrap().split(' ').next().unwrap().parse().unwrap();
    assert!(dev <= 1e-10);
}

#[test]
fn indices_for_windmill() {
    let o = kcoal(&["indices", "windmill:n=2,t=2", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v[0]["index"], "kirchhoff");
    assert!((v[0]["value"].as_f64().unwrap() - 28.0 / 3.0).abs() < 1e-10);
    assert!((v[1]["value"].as_f64().unwrap() - 4.0).abs() < 1e-10);
}

#[test]
fn mismatches_still_exit_zero() {
    let o = kcoal(&["verify", "pineapple", "kirchhoff", "--range", "p=2..6", "--range", "q=1..5"]);
    assert!(o.status.success());
    let text = stdout(&o);
    let rows: Vec<&str> = text.lines().skip(1).collect();
    assert_eq!(rows.len(), 25);
    assert!(rows.iter().all(|r| r.contains(",mismatch,")));
    assert!(String::from_utf8_lossy(&o.stderr).contains("mismatch=25"));
}

#[test]
fn unsupported_pair_is_an_error() {
    let o = kcoal(&["verify", "bistar", "kemeny"]);
    assert!(!o.status.success());
}

#[test]
fn verify_output_is_byte_identical_across_jobs() {
    let args = ["verify", "kcoal", "all", "--canonical", "--range", "p1=1..8"];
    let a = kcoal(&[&args[..], &["--jobs", "1"]].concat());
    let b = kcoal(&[&args[..], &["--jobs", "6"]].concat());
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn retable_csv_has_all_rows() {
    let o = kcoal(&["retable"]);
    let text = stdout(&o);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("row,p1,p2,k,RE_paper,RE_computed,diff"));
    assert_eq!(lines.count(), 46);
    assert!(text.contains("\n18,2,2,2,4.0,2.0,-2.0\n"), "{text}");
}
