use std::io::Write;
use std::process::{Command, Stdio};

use penergy_cli::{run, EXIT_OK, EXIT_USAGE, EXIT_VIOLATIONS};
use serde_json::Value;

fn invoke(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("penergy").chain(args.iter().copied());
    let code = run(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn json(args: &[&str]) -> Value {
    let (code, out, err) = invoke(args);
    assert_eq!(code, EXIT_OK, "{err}");
    serde_json::from_str(&out).unwrap()
}

#[test]
fn energy_of_triangle() {
    let v = json(&["energy", "--graph6", "Bw", "--p", "2"]);
    assert_eq!(v["schema"], "penergy/energy/v1");
    assert_eq!((&v["e_plus"], &v["e_minus"], &v["e_total"]), (&"4".into(), &"2".into(), &"6".into()));
    let v = json(&["energy", "--family", "path:4", "--p", "1"]);
    assert_eq!(v["e_total"], "4.472135955");
}

#[test]
fn spectrum_outputs() {
    let v = json(&["spectrum", "--family", "snn:3"]);
    assert_eq!(v["spectrum"]["values"][0], "3.56155281281");
    assert_eq!(v["negative"], 4);
    let (code, out, _) = invoke(&["spectrum", "--graph6", "Bg", "--csv"]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(out, "index,eigenvalue\n1,1.41421356237\n2,0\n3,-1.41421356237\n");
}

#[test]
fn bound_checks() {
    let v = json(&["bound", "--family", "cycle:4", "--edge", "0,1", "--p", "3", "--side", "plus"]);
    let check = &v["checks"][0];
    assert_eq!(check["actual"], "8");
    assert_eq!(v["verdicts"][0], "pass");
    let v = json(&["bound", "--graph6", "Bw", "--abiad"]);
    assert_eq!(v["checks"].as_array().unwrap().len(), 3 * 2 * 3);
    assert!(v["verdicts"].as_array().unwrap().iter().all(|x| x == "not_applicable"));
    let (code, _, err) = invoke(&["bound", "--graph6", "Bw", "--abiad", "--p", "3"]);
    assert_eq!(code, EXIT_USAGE, "{err}");
}

#[test]
fn family_and_closed_spectrum() {
    let v = json(&["family", "--kind", "snn_plus", "--n", "3", "--closed"]);
    assert_eq!(v["closed"]["entries"][0], "2+√3 (×1)");
    assert_eq!(v["order"], 6);
    let (code, _, _) = invoke(&["family", "--kind", "cycle", "--n", "5", "--closed"]);
    assert_eq!(code, EXIT_USAGE);
}

#[test]
fn gap_sweep_and_value() {
    let v = json(&["gap", "--p", "2", "--nmax", "100"]);
    assert_eq!(v["n0"], 5);
    assert_eq!(v["trace"].as_array().unwrap().len(), 98);
    let v = json(&["gap", "--p", "2", "--n", "5"]);
    assert_eq!(v["f"], "0.156349306236");
    let (code, out, _) = invoke(&["gap", "--p", "2", "--nmax", "4", "--csv"]);
    assert_eq!(code, EXIT_OK);
    assert!(out.starts_with("n,p,f,lambda1,lambda2,theta1,theta2,theta3\n3,2,-0.486914436827,"));
    let v = json(&["gap", "--p", "2.9", "--nmax", "50"]);
    assert_eq!(v["n0"], Value::Null);
}

#[test]
fn verify_internal_scans() {
    let (code, out, err) = invoke(&["verify", "--kind", "path_lower", "--n", "8", "--p", "2,2.5,3"]);
    assert_eq!(code, EXIT_OK);
    assert!(err.contains("checked 11117 graphs"));
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["graphs_checked"], 11117);
    assert_eq!(v["violations"].as_array().unwrap().len(), 0);
    assert_eq!(v["status"], "no counterexamples found at this scale");
    assert!(v.get("runtime").is_none());

    let (code, out, _) = invoke(&["verify", "--kind", "hong", "--n", "5", "--full"]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(out.lines().count(), 22);
    assert!(out.starts_with("graph6,p,edge,margin\n"));
}

#[test]
fn verify_reports_are_identical_across_job_counts() {
    let base = ["verify", "--kind", "sq_monotone", "--n", "7", "--p", "1,2"];
    let one = invoke(&[&base[..], &["--jobs", "1"]].concat());
    let four = invoke(&[&base[..], &["--jobs", "4"]].concat());
    assert_eq!(one.0, four.0);
    assert_eq!(one.1, four.1);
}

#[test]
fn verify_stream_from_file() {
    let dir = std::env::temp_dir().join(format!("penergy-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("snn.g6");
    let (_, g6, _) = invoke(&["encode", "--family", "snn:5", "--raw"]);
    let (_, odd, _) = invoke(&["encode", "--family", "double_star_complement:5,4", "--raw"]);
    std::fs::write(&path, format!(">>graph6<<{g6}{odd}")).unwrap();
    let (code, out, _) = invoke(&["verify", "--kind", "sq_monotone", "--p", "2", "--input", path.to_str().unwrap()]);
    assert_eq!(code, EXIT_VIOLATIONS);
    let v: Value = serde_json::from_str(&out).unwrap();
    let violations = v["violations"].as_array().unwrap();
    assert_eq!(violations.len(), 2);
    assert!(violations.iter().all(|x| x["edge"] == "0-1"));
    assert_eq!(v["spec"]["source"], "graph6-stream");

    let (code, out, _) = invoke(&["verify", "--kind", "sq_monotone", "--input", path.to_str().unwrap(), "--csv"]);
    assert_eq!(code, EXIT_VIOLATIONS);
    assert_eq!(out.lines().count(), 3);

    std::fs::write(&path, "Bw\nB\n").unwrap();
    let (code, _, err) = invoke(&["verify", "--kind", "hong", "--input", path.to_str().unwrap()]);
    assert_eq!(code, EXIT_USAGE);
    assert!(err.contains("line 2"), "{err}");
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn trees_report() {
    let v = json(&["trees", "--n", "4", "--p", "3"]);
    assert_eq!(v["t_p_min"], "8.94427191");
    assert_eq!(v["t_p_max"], "10.3923048454");
    assert_eq!(v["trees"], 2);
}

#[test]
fn encode_and_decode() {
    let (code, out, _) = invoke(&["encode", "--n", "3", "--edges", "0-1,1-2", "--raw"]);
    assert_eq!((code, out.as_str()), (EXIT_OK, "Bg\n"));
    let v = json(&["decode", "Bw", "?"]);
    assert_eq!(v["graphs"][0]["edges"], serde_json::json!(["0-1", "0-2", "1-2"]));
    assert_eq!(v["graphs"][1]["n"], 0);
    let (code, out, _) = invoke(&["decode", "Bg", "--csv"]);
    assert_eq!((code, out.as_str()), (EXIT_OK, "graph6,n,m,edges\nBg,3,2,0-1 1-2\n"));
}

#[test]
fn usage_errors_exit_two() {
    for args in [
        &["spectrum"][..],
        &["energy", "--graph6", "Bw"],
        &["energy", "--graph6", "Bw", "--family", "path:3", "--p", "2"],
        &["energy", "--graph6", "B!", "--p", "2"],
        &["verify", "--kind", "hong"],
        &["verify", "--kind", "nope", "--n", "4"],
        &["verify", "--kind", "hong", "--n", "4", "--p", "3"],
        &["verify", "--kind", "path_lower", "--n", "10"],
        &["trees", "--n", "11", "--p", "2"],
        &["decode"],
    ] {
        let (code, _, err) = invoke(args);
        assert_eq!(code, EXIT_USAGE, "{args:?}");
        assert!(!err.is_empty());
    }
    let (code, out, _) = invoke(&["--help"]);
    assert_eq!(code, EXIT_OK);
    assert!(out.contains("verify"));
}

#[test]
fn binary_reads_standard_input() {
    let mut child = Command::new(env!("CARGO_BIN_EXE_penergy"))
        .args(["verify", "--kind", "hong", "--input", "-"])
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(b"Bw\nBg\nCF\n").unwrap();
    let output = child.wait_with_output().unwrap();
    assert_eq!(output.status.code(), Some(0));
    let v: Value = serde_json::from_slice(&output.stdout).unwrap();
    assert_eq!(v["graphs_checked"], 3);
}
