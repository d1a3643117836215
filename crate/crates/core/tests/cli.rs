//! Runs the `ses` binary end to end.

use std::process::Command;

fn ses(args: &[&str]) -> (i32, Vec<u8>, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_ses"))
        .args(args)
        .output()
        .unwrap();
    (
        out.status.code().unwrap_or(-1),
        out.stdout,
        String::from_utf8_lossy(&out.stderr).into_owned(),
    )
}

fn json(bytes: &[u8]) -> serde_json::Value {
    serde_json::from_slice(bytes).unwrap()
}

#[test]
fn grover_run_256() {
    let (code, out, _) = ses(&[
        "grover-run",
        "--n",
        "256",
        "--marked",
        "17",
        "--g-mhz",
        "1.25",
        "--deps-mhz",
        "100",
    ]);
    assert_eq!(code, 0);
    let v = json(&out);
    assert!((v["success_probability"].as_f64().unwrap() - 0.99995).abs() < 1e-4);
    assert!((v["total_ns"].as_f64().unwrap() - 91.25).abs() < 1e-9);
    assert_eq!(v["iterations"], 12);
}

#[test]
fn grover_run_4_is_certain() {
    let (code, out, _) = ses(&[
        "grover-run",
        "--n",
        "4",
        "--marked",
        "2",
        "--g-mhz",
        "1.25",
        "--deps-mhz",
        "100",
    ]);
    assert_eq!(code, 0);
    assert!((json(&out)["success_probability"].as_f64().unwrap() - 1.0).abs() < 1e-10);
}

#[test]
fn schedule_document_imports() {
    let (code, out, _) = ses(&["grover-schedule", "--n", "8", "--marked", "3"]);
    assert_eq!(code, 0);
    let s = ses_core::schedule::import_schedule(std::str::from_utf8(&out).unwrap()).unwrap();
    assert_eq!(s.segments.len(), 1 + 2 * 2);
}

#[test]
fn leakage_sweep_csv() {
    let (code, out, _) = ses(&[
        "leakage-sweep",
        "--n",
        "3",
        "--ratios",
        "1e-3,1e-4",
        "--substeps",
        "4",
    ]);
    assert_eq!(code, 0);
    let text = String::from_utf8(out).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "ratio,max_leakage,final_fidelity");
    assert_eq!(lines.len(), 3);
    assert!(lines[1].starts_with("1e-3,"));
}

#[test]
fn spectrum_and_resources() {
    let (code, out, _) = ses(&[
        "spectrum-check",
        "--n",
        "16",
        "--g-mhz",
        "1.25",
        "--format",
        "json",
    ]);
    assert_eq!(code, 0);
    assert_eq!(json(&out)["passed"], true);

    let (code, out, _) = ses(&["compare-resources", "--n", "256"]);
    assert_eq!(code, 0);
    let table = String::from_utf8(out).unwrap();
    assert!(table.contains("158") && table.contains("1896") && table.contains("32640"));
}

#[test]
fn errors_exit_2() {
    let (code, _, err) = ses(&["grover-run", "--n", "4", "--unknown"]);
    assert_eq!(code, 2);
    assert!(err.contains("Usage"));
    let (code, _, err) = ses(&["grover-run", "--n", "4", "--marked", "5"]);
    assert_eq!(code, 2);
    assert!(err.contains("marked"));
    assert_eq!(ses(&["spectrum-check", "--n", "1"]).0, 2);
}
