use std::process::Command;

use weylcalc::report::{from_json, Status};
use weylcalc::{emit, run_script, Format};

const POLAR: &str = include_str!("../scripts/polar.wc");
const GOLDEN: &str = include_str!("golden/polar.txt");

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_weylcalc"))
}

#[test]
fn polar_demo_matches_golden_file() {
    let r = run_script(POLAR);
    assert!(r.success());
    assert_eq!(String::from_utf8(emit(&r, Format::Text)).unwrap(), GOLDEN);
}

#[test]
fn polar_demo_contains_published_values() {
    for line in [
        "  p_x = c p_r - r^-1*s p_theta\n",
        "  p_y = s p_r + r^-1*c p_theta\n",
        "  p_x = c p_r - r^-1*s p_theta - h*r^-1*c\n",
        "  H = p_r p_r + r^-2 p_theta p_theta + h*r^-1 p_r\n",
        "  H^lr = p_r p_r + r^-2 p_theta p_theta\n",
        "  H^rl = p_r p_r + r^-2 p_theta p_theta\n",
        "check equal naive_left(), p_r^2 + r^-2*p_theta^2 - h*p_r*r^-1;\n  PASS\n",
    ] {
        assert!(GOLDEN.contains(line), "missing {line:?}");
    }
}

#[test]
fn run_text_and_json() {
    let script = concat!(env!("CARGO_MANIFEST_DIR"), "/scripts/polar.wc");
    let out = bin().args(["run", script]).output().unwrap();
    assert!(out.status.success());
    assert_eq!(String::from_utf8(out.stdout).unwrap(), GOLDEN);

    let out = bin().args(["run", script, "--format", "json"]).output().unwrap();
    assert!(out.status.success());
    let r = from_json(&out.stdout).unwrap();
    assert_eq!(r, run_script(POLAR));
}

#[test]
fn run_writes_out_file_and_signals_failure() {
    let dir = std::env::temp_dir().join(format!("weylcalc-test-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let script = dir.join("fail.wc");
    std::fs::write(&script, "algebra weyl n=1;\ncheck equal p*q, q*p;\n").unwrap();
    let out_file = dir.join("report.json");
    let out = bin().args(["run", script.to_str().unwrap(), "--format", "json", "--out", out_file.to_str().unwrap()]).output().unwrap();
    assert_eq!(out.status.code(), Some(1));
    assert!(out.stdout.is_empty());
    let r = from_json(&std::fs::read(&out_file).unwrap()).unwrap();
    assert_eq!(r.entries[1].status, Status::Fail);
    assert_eq!(r.entries[1].residuals[0].value, "h");

    std::fs::write(&script, "algebra weyl n=1; print 1/p;").unwrap();
    let out = bin().args(["run", script.to_str().unwrap()]).output().unwrap();
    assert_eq!(out.status.code(), Some(1));
    let missing = bin().args(["run", dir.join("nope.wc").to_str().unwrap()]).output().unwrap();
    assert_eq!(missing.status.code(), Some(2));
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn repl_evaluates_statement_by_statement() {
    use std::io::Write;
    let mut child = bin()
        .arg("repl")
        .stdin(std::process::Stdio::piped())
        .stdout(std::process::Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(b"algebra weyl n=1;\nlet H = p^2\n  * q;\nprint [p^2, q^2];\n").unwrap();
    let out = child.wait_with_output().unwrap();
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("[2:1] let H = p^2*q;\n  H = q p p + 2*h p\n"), "{text}");
    assert!(text.contains("[4:1] print [p^2, q^2];\n  4*h q p + 2*h^2\n"), "{text}");
}

#[test]
fn selftest_subcommand() {
    let out = bin().args(["selftest", "--scale", "5"]).output().unwrap();
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(out.status.success(), "{text}");
    assert_eq!(text.lines().filter(|l| l.starts_with("PASS")).count(), 11, "{text}");
}
