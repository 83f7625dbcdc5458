use std::path::Path;
use std::process::{Command, Output};

fn rkt_lab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_rkt-lab")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

#[test]
fn mixed_volume_of_files() {
    let dir = tempfile::tempdir().unwrap();
    let t = write(dir.path(), "t.json", r#"{"dim":2,"vertices":[[0,0],[2,0],[0,1]]}"#);
    let sq = write(dir.path(), "sq.json", r#"{"dim":2,"vertices":[[0,0],[1,0],[0,1],[1,1]]}"#);
    let o = rkt_lab(&["mv", &t, &t]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "2");
    // T + Q = conv{(0,0),(3,0),(3,1),(1,2),(0,2)} has area 5, so
    // MV(T, Q) = 5 − 1 − 1.
    let o = rkt_lab(&["mv", &t, &sq]);
    assert_eq!(stdout(&o).trim(), "3");
}

#[test]
fn intersection_number_from_system() {
    let dir = tempfile::tempdir().unwrap();
    let sys = write(
        dir.path(),
        "sys.json",
        r#"{"dim":2,"divisors":{"A":{"dim":2,"vertices":[[0,0],[1,0],[0,1],[1,1]]},"H":{"dim":2,"vertices":[[0,0],[1,0],[0,1]]}}}"#,
    );
    let o = rkt_lab(&["mv", "--system", &sys, "--query", "A*H"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(stdout(&o).trim(), "2");
}

#[test]
fn rkt_campaign_is_deterministic() {
    let args = ["rkt-check", "--dim", "3", "--k", "1", "--count", "20", "--seed", "7"];
    let a = rkt_lab(&args);
    let b = rkt_lab(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let text = stdout(&a);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("name,n,k,lhs,rhs,slack,holds,strict,seed"));
    assert_eq!(lines.filter(|l| l.starts_with("rkt,3,1,")).count(), 20);
}

#[test]
fn campaign_writes_output_directory() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("run");
    let o = rkt_lab(&["fuzz", "--statement", "surface-eq", "--count", "10", "--seed", "1", "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let csv = std::fs::read_to_string(out.join("reports.csv")).unwrap();
    assert_eq!(csv.lines().count(), 11);
    assert!(out.join("summary.txt").exists());
}

#[test]
fn input_errors_exit_with_three() {
    assert_eq!(rkt_lab(&["fuzz", "--statement", "nope"]).status.code(), Some(3));
    assert_eq!(rkt_lab(&["bogus"]).status.code(), Some(3));
    assert_eq!(rkt_lab(&["rkt-check", "--dim", "3", "--k", "3"]).status.code(), Some(3));
    assert_eq!(rkt_lab(&["mv", "/nonexistent.json"]).status.code(), Some(3));
    assert_eq!(rkt_lab(&["dyndeg", "--matrix", "1,2;2,4"]).status.code(), Some(3));
}

#[test]
fn okounkov_body_and_convergence() {
    let dir = tempfile::tempdir().unwrap();
    let t = write(dir.path(), "t.json", r#"{"dim":2,"vertices":[[0,0],[2,0],[0,1]]}"#);
    let o = rkt_lab(&["okounkov", "--polytope", &t, "--flag-vertex", "0,0", "--flag-basis", "1,0;0,1", "--level", "8"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let text = stdout(&o);
    let mut lines = text.lines();
    let doc: serde_json::Value = serde_json::from_str(lines.next().unwrap()).unwrap();
    assert_eq!(doc["volume"], "1");
    assert_eq!(lines.next(), Some("m,volume"));
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows, ["1,1", "2,1", "4,1", "8,1"]);
}

#[test]
fn okounkov_rejects_non_smooth_flag() {
    let dir = tempfile::tempdir().unwrap();
    let t = write(dir.path(), "t.json", r#"{"dim":2,"vertices":[[0,0],[2,0],[0,1]]}"#);
    let o = rkt_lab(&["okounkov", "--polytope", &t, "--flag-vertex", "2,0", "--flag-basis", "1,0;0,1"]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn multipoint_convergence_is_monotone() {
    let dir = tempfile::tempdir().unwrap();
    let sq = write(dir.path(), "sq.json", r#"{"dim":2,"vertices":[[0,0],[3,0],[0,3],[3,3]]}"#);
    let mp = write(
        dir.path(),
        "mp.json",
        r#"{"level":8,"flags":[{"vertex":[0,0],"basis":[[1,0],[0,1]]},{"vertex":[3,3],"basis":[[-1,0],[0,-1]]}]}"#,
    );
    let o = rkt_lab(&["okounkov", "--polytope", &sq, "--multipoint", &mp]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let text = stdout(&o);
    let vols: Vec<f64> = text
        .lines()
        .skip(2)
        .map(|l| {
            let v = l.split(',').nth(1).unwrap();
            match v.split_once('/') {
                Some((p, q)) => p.parse::<f64>().unwrap() / q.parse::<f64>().unwrap(),
                None => v.parse().unwrap(),
            }
        })
        .collect();
    assert_eq!(vols.len(), 4);
    assert!(vols.windows(2).all(|w| w[0] <= w[1]), "{vols:?}");
    assert!(vols[3] <= 9.0);
}

#[test]
fn dyndeg_csv() {
    let o = rkt_lab(&["dyndeg", "--matrix", "2,0;0,2", "--iters", "2"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "t,i,degree\n1,0,1\n1,1,2\n1,2,4\n2,0,1\n2,1,4\n2,2,16\n");
    let o = rkt_lab(&["dyndeg", "--matrix", "1,-1;1,2", "--check", "repolarize"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("repolarize,2,1,"));
}

#[test]
fn surface_equality_case() {
    let dir = tempfile::tempdir().unwrap();
    let s = write(dir.path(), "s.json", r#"{"gram":[[0,1],[1,0]],"A":[2,3],"B":[1,0],"C":[0,1]}"#);
    let o = rkt_lab(&["surface-eq", &s]);
    assert_eq!(o.status.code(), Some(0));
    let doc: serde_json::Value = serde_json::from_str(stdout(&o).trim()).unwrap();
    assert_eq!(doc["numeric_equality"], true);
    assert_eq!(doc["backward"]["s"], "2");
    assert_eq!(doc["backward"]["t"], "3");
    assert_eq!(doc["consistent"], true);
}
