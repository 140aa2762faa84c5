//! End-to-end tests of the binary: golden outputs, JSON round trips,
//! batch mode, and the documented exit codes.

use std::io::Write;
use std::process::{Command, Output};

fn fpl(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fpl"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout_of(args: &[&str]) -> String {
    let out = fpl(args);
    assert!(
        out.status.success(),
        "args {args:?}: status {:?}, stderr: {}",
        out.status,
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

fn exit_code(args: &[&str]) -> i32 {
    fpl(args).status.code().unwrap()
}

#[test]
fn expand_golden_11_40() {
    let out = stdout_of(&["--p", "5", "--l", "1", "--x", "11/40", "expand"]);
    assert_eq!(
        out,
        "classification: vertex\n\
         expansion: 1/0+ 5/1+ 1/2+ 1/1+ 1/2\n\
         convergents: 1/5 3/10 4/15 11/40\n\
         fins: 3/8 2/3 1/2 0/1\n"
    );
}

#[test]
fn expand_bset_and_general() {
    let out = stdout_of(&["--p", "5", "--l", "2", "--x", "1/5", "expand"]);
    assert!(out.starts_with("classification: b-set k=1 half=false\n"));
    assert!(out.contains("expansion: 1/0+ 25/4+ tail:+\n"));
    assert!(out.contains("expansion: 1/0+ 25/6+ tail:-\n"));

    let out = stdout_of(&["--p", "5", "--x", "7/27", "expand"]);
    assert!(out.contains("general-rational R1=13/50 R2=22/85 s1=10 s2=17 Nx=3"));
    assert!(out.contains("expansion: 1/0+ 5/1+ 1/3+ 1/2+ 1/1+ 1/3+ tail:-\n"));
    assert!(out.contains("expansion: 1/0+ 5/1+ 1/3+ 1/2+ 1/1+ 1/1+ tail:+\n"));
}

#[test]
fn expand_surd_truncates() {
    let out = stdout_of(&["--p", "5", "--x", "quad:0,1,2,1", "--max-terms", "10", "expand"]);
    assert!(out.contains("classification: irrational"));
    assert!(out.contains("note: truncated at 10 terms"));
    // ten terms after the N/b element
    let line = out.lines().find(|l| l.starts_with("expansion:")).unwrap();
    assert_eq!(line.split("+ ").count(), 12);
}

#[test]
fn enumerate_golden() {
    let out = stdout_of(&["--p", "5", "--x", "11/40", "enumerate"]);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines.len(), 8);
    let starred: Vec<&str> = lines.iter().filter(|l| l.starts_with("* ")).cloned().collect();
    assert_eq!(starred, ["* 1/0+ 5/1+ 1/2+ 1/1+ 1/2"]);

    let out = stdout_of(&["--p", "5", "--x", "3/10", "enumerate"]);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines.len(), 2);
    assert!(lines.iter().all(|l| l.starts_with("* ")));

    let out = stdout_of(&["--p", "5", "--x", "1/5", "enumerate"]);
    assert_eq!(out.lines().count(), 1);
}

#[test]
fn best_and_verify_golden() {
    let out = stdout_of(&["best", "--x", "7/27", "--p", "5"]);
    assert!(out.contains("best: 1/5 4/15 9/35 13/50\n"));

    let out = stdout_of(&["verify", "--x", "11/40", "--p", "5", "--v-max", "40"]);
    assert!(out.contains("best: 1/5 3/10 4/15 11/40\n"));
    assert!(out.contains("agreement: true\n"));

    let out = stdout_of(&["best", "--x", "1/5", "--p", "5", "--l", "2"]);
    assert!(out.contains("best: (none)\n"));
    assert!(out.contains("note: no best approximation\n"));
}

#[test]
fn best_of_one_over_pi() {
    let out = stdout_of(&[
        "best",
        "--p",
        "5",
        "--x",
        "dec:0.3183098861837906715377675267450287240689:1e-40",
        "--v-max",
        "355",
    ]);
    assert!(out.contains("best: 2/5 3/10 8/25 43/135 78/245 113/355\n"), "{out}");
}

#[test]
fn classify_and_decompose_golden() {
    let out = stdout_of(&["classify", "--x", "3/10", "--p", "5"]);
    assert_eq!(out, "classification: mediant-point t=1\n");

    let out = stdout_of(&["decompose", "--x", "7/27", "--p", "5"]);
    assert!(out.starts_with("R1=13/50 R2=22/85 Nx=3 adjacent=true"));

    let out = stdout_of(&["decompose", "--x", "1/5", "--p", "5", "--l", "2"]);
    assert!(out.starts_with("R1=4/25 R2=6/25 Nx=0 adjacent=false"));
}

#[test]
fn json_outputs_round_trip() {
    let out = stdout_of(&["--p", "5", "--x", "7/27", "--format", "json", "expand"]);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["classification"]["regime"], "general-rational");
    let exps = v["expansions"].as_array().unwrap();
    assert_eq!(exps.len(), 2);
    for e in exps {
        let back = fpl_core::expansion::CFExpansion::from_json(&e["expansion"]).unwrap();
        assert_eq!(back.to_text(), e["text"].as_str().unwrap());
        let reparsed: fpl_core::expansion::CFExpansion =
            e["text"].as_str().unwrap().parse().unwrap();
        assert_eq!(reparsed, back);
    }

    let out = stdout_of(&[
        "verify", "--x", "7/27", "--p", "5", "--v-max", "200", "--format", "json",
    ]);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["agreement"], true);
    assert_eq!(v["method"], "both");
    assert_eq!(v["best"].as_array().unwrap().len(), 4);
    assert_eq!(v["best"][3]["u"], serde_json::json!(13));
    assert_eq!(v["best"][3]["quality"], "1/27");
}

#[test]
fn batch_mode_processes_lines_independently() {
    let dir = std::env::temp_dir();
    let path = dir.join(format!("fpl-batch-{}.txt", std::process::id()));
    let mut f = std::fs::File::create(&path).unwrap();
    writeln!(f, "11/40").unwrap();
    writeln!(f, "not-a-number").unwrap();
    writeln!(f, "7/27").unwrap();
    drop(f);
    let out = fpl(&["--p", "5", "--batch", path.to_str().unwrap(), "classify"]);
    std::fs::remove_file(&path).ok();
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert!(stdout.contains("== 11/40\nclassification: vertex\n"));
    assert!(stdout.contains("== 7/27\nclassification: general-rational"));
    // the bad line fails without aborting the rest, and taints the exit code
    assert_eq!(out.status.code().unwrap(), 1);
}

#[test]
fn negative_literals_parse() {
    let out = stdout_of(&["decompose", "--x", "-7/27", "--p", "5", "--l", "2"]);
    assert!(out.starts_with("R1=-13/50 R2=-162/625 Nx=1"), "{out}");
    let out = stdout_of(&["verify", "--x", "-7/27", "--p", "5", "--l", "2"]);
    assert!(out.contains("best: -6/25 -13/50\n"));
    assert!(out.contains("agreement: true\n"));
}

#[test]
fn fuzz_subcommand() {
    let out = stdout_of(&["--p", "5", "--seed", "42", "fuzz", "--trials", "40", "--self-test"]);
    assert!(out.contains("failures: 0"));
    assert!(out.contains("injected violation caught"));
    let out = stdout_of(&[
        "--p", "3", "--l", "3", "--seed", "7", "--format", "json", "fuzz", "--trials", "25",
    ]);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["failures"].as_array().unwrap().len(), 0);
    assert_eq!(v["trials"], 25);
}

#[test]
fn documented_exit_codes() {
    // 1: unparsable input or usage problems
    assert_eq!(exit_code(&["--p", "5", "--x", "abc", "classify"]), 1);
    assert_eq!(exit_code(&["--p", "6", "--x", "1/2", "classify"]), 1);
    assert_eq!(exit_code(&["--p", "5", "classify"]), 1);
    assert_eq!(exit_code(&["--p", "5", "--x", "quad:0,1,2,1", "best"]), 1);
    assert_eq!(exit_code(&["--p", "5", "--x", "1/2", "--v-max", "3", "best"]), 1);
    assert_eq!(exit_code(&["--p", "5", "--batch", "/nonexistent", "classify"]), 1);
    // 2: insufficient precision
    assert_eq!(exit_code(&["--p", "5", "--x", "dec:0.5:0.2", "expand"]), 2);
    // 3: wrong regime for the operation
    assert_eq!(exit_code(&["--p", "5", "--x", "7/27", "enumerate"]), 3);
    assert_eq!(exit_code(&["--p", "5", "--x", "11/40", "decompose"]), 3);
    // 0 with help
    assert_eq!(exit_code(&["--help"]), 0);
}
