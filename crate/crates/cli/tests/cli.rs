use std::io::Write;
use std::process::{Command, Output, Stdio};

fn cams(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cams")).args(args).output().expect("binary runs")
}

fn stdout(args: &[&str]) -> String {
    let o = cams(args);
    assert!(o.status.success(), "{args:?}: {}", String::from_utf8_lossy(&o.stderr));
    String::from_utf8(o.stdout).unwrap()
}

#[test]
fn cost_table_rows() {
    let csv = stdout(&["cost-table", "--steps", "300", "--units", "30", "--stages", "2"]);
    assert_eq!(
        csv,
        "m,s,l,algorithm,recomputations\n\
         300,30,2,revolve,568\n\
         300,30,2,mrevolve,537\n\
         300,30,2,cams-sa,357\n\
         300,30,2,cams-gen,358\n"
    );
    let csv =
        stdout(&["cost-table", "-m", "10", "-u", "6", "-l", "2", "--algorithms", "revolve,cams-sa,cams-gen"]);
    let costs: Vec<&str> = csv.lines().skip(1).map(|r| r.rsplit(',').next().unwrap()).collect();
    assert_eq!(costs, ["12", "6", "8"]);
}

#[test]
fn cost_table_ranges_are_stable() {
    let args = ["cost-table", "-m", "1:40", "-u", "1:5", "-l", "3"];
    let a = stdout(&args);
    assert_eq!(a, stdout(&args));
    assert_eq!(a.lines().count(), 1 + 40 * 5 * 4);
    assert!(a.contains("\n2,1,3,mrevolve,inf\n"));
}

#[test]
fn usage_errors_exit_nonzero() {
    for args in [
        &["cost-table", "--steps", "0", "--units", "3"][..],
        &["schedule", "-m", "10", "-u", "0", "--variant", "revolve"],
        &["schedule", "-m", "10", "-u", "3", "--variant", "cams-sa"],
        &["crossover", "-u", "12"],
        &["adjoint-demo", "--problem", "nope"],
    ] {
        let o = cams(args);
        assert!(!o.status.success(), "{args:?}");
        let err = String::from_utf8_lossy(&o.stderr);
        assert!(!err.trim().is_empty());
    }
}

#[test]
fn schedule_text_and_json() {
    let text = stdout(&["schedule", "-m", "10", "-u", "3", "--variant", "revolve"]);
    let stores: Vec<&str> = text.lines().filter(|l| l.starts_with("store")).take(3).collect();
    assert_eq!(stores, ["store    S@0 [1u]", "store    S@4 [1u]", "store    S@7 [1u]"]);

    let json =
        stdout(&["schedule", "-m", "10", "-u", "6", "-l", "2", "--variant", "cams-gen", "--format", "json"]);
    let mut child = Command::new(env!("CARGO_BIN_EXE_cams"))
        .arg("simulate")
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(json.as_bytes()).unwrap();
    let o = child.wait_with_output().unwrap();
    let metrics: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(metrics["recomputations"], 8);
    assert_eq!(metrics["peak_units"], 6);
}

#[test]
fn crossover_points() {
    assert_eq!(stdout(&["crossover", "--units", "12", "--extra-stages", "1"]), "41\n");
    assert_eq!(stdout(&["crossover", "--units", "12", "--extra-stages", "2"]), "13\n");
    assert_eq!(stdout(&["crossover", "--units", "4", "--extra-stages", "1"]), "4\n");
    assert_eq!(stdout(&["crossover", "--units", "12", "--stages", "3"]), "13\n");
}

#[test]
fn adjoint_demo_reports() {
    let r = stdout(&[
        "adjoint-demo",
        "--problem",
        "linear-scalar",
        "--policy",
        "revolve",
        "--units",
        "1",
        "--steps",
        "30",
    ]);
    assert!(r.contains("recomputations  435 measured, 435 predicted"), "{r}");
    let r = stdout(&["adjoint-demo", "--policy", "full-storage", "--units", "200"]);
    assert!(r.contains("recomputations  0 measured"), "{r}");
    let r = stdout(&[
        "adjoint-demo",
        "--problem",
        "linear-2d",
        "--tableau",
        "heun-sa",
        "--policy",
        "cams-sa",
        "-u",
        "5",
    ]);
    assert!(r.contains("cams-sa with 5 units"), "{r}");
}
