use std::path::Path;
use std::process::{Command, Output};

fn rbnlab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_rbnlab")).args(args).output().unwrap()
}

fn code(out: &Output) -> i32 {
    out.status.code().unwrap()
}

fn small_table(dir: &Path) -> String {
    let path = dir.join("s2.ctm");
    assert_eq!(code(&rbnlab(&["ctm-gen", "--states", "2", "--out", path.to_str().unwrap()])), 0);
    format!("ctm_table={}", path.display())
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("o").display().to_string();
    assert_eq!(code(&rbnlab(&["sweep", "--out", &out, "--set", "bias=1.5"])), 1);
    assert_eq!(code(&rbnlab(&["sweep", "--out", &out, "--set", "colour=red"])), 1);
    assert_eq!(code(&rbnlab(&["sweep", "--frobnicate"])), 1);
    assert_eq!(code(&rbnlab(&["perturb", "--out", &out, "--mode", "sideways"])), 1);
    assert_eq!(code(&rbnlab(&["evolve", "--config", "/nonexistent/cfg"])), 1);
    assert_eq!(code(&rbnlab(&["transition-graph", "--out", &out, "--set", "n_nodes=30"])), 1);
    assert_eq!(code(&rbnlab(&["ctm-gen", "--states", "2", "--out", "/proc/nope/t.ctm"])), 2);
    assert_eq!(code(&rbnlab(&["--help"])), 0);
}

#[test]
fn config_errors_name_key_and_line() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    std::fs::write(&cfg, "# sweep\nsteps=10\nbias=1.5\n").unwrap();
    let out = rbnlab(&["sweep", "--config", cfg.to_str().unwrap(), "--out", dir.path().to_str().unwrap()]);
    assert_eq!(code(&out), 1);
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("`bias`") && err.contains("line 3"), "{err}");
}

#[test]
fn evolve_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let table = small_table(dir.path());
    let out = dir.path().join("ev");
    let o = rbnlab(&[
        "evolve", "--out", out.to_str().unwrap(), "--set", &table, "--set", "n_nodes=30", "--set", "steps=12",
    ]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let pbm = std::fs::read_to_string(out.join("diagram.pbm")).unwrap();
    let mut lines = pbm.lines();
    assert_eq!(lines.next(), Some("P1"));
    assert_eq!(lines.next(), Some("30 12"));
    assert_eq!(lines.count(), 12);
    let measures = std::fs::read_to_string(out.join("measures.csv")).unwrap();
    assert!(measures.starts_with("object,entropy,lzw_rate,bdm\ntruth_tables,"));
    let manifest = std::fs::read_to_string(out.join("run-manifest")).unwrap();
    assert!(manifest.contains("n_nodes=30\n") && manifest.contains("steps=12\n"));
}

#[test]
fn fixture_network_graph() {
    let dir = tempfile::tempdir().unwrap();
    let fixture = dir.path().join("net.txt");
    std::fs::write(&fixture, "4 2\n1 2\n0 3\n3 0\n2 1\n0001\n0111\n0110\n1110\n").unwrap();
    let out = dir.path().join("tg");
    let o = rbnlab(&["transition-graph", "--network", fixture.to_str().unwrap(), "--out", out.to_str().unwrap()]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let succ = std::fs::read_to_string(out.join("successors.csv")).unwrap();
    assert_eq!(succ.lines().count(), 17);
    // 1110 is a fixed point
    assert!(succ.contains("\n14,14\n"));
    let report = std::fs::read_to_string(out.join("attractors.txt")).unwrap();
    assert!(report.contains("states 14\n"), "{report}");
    let prestige = std::fs::read_to_string(out.join("prestige.csv")).unwrap();
    assert!(prestige.starts_with("state,score\n0,"));
}

#[test]
fn perturb_header_and_rows() {
    let dir = tempfile::tempdir().unwrap();
    let table = small_table(dir.path());
    let out = dir.path().join("pt");
    let o = rbnlab(&["perturb", "--count", "3", "--set", &table, "--out", out.to_str().unwrap()]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let csv = std::fs::read_to_string(out.join("perturb.csv")).unwrap();
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines[0], "rank,state,prestige,entropy_rel,lzw_rel,bdm_rel,aid,classification");
    assert_eq!(lines.len(), 4);
    assert!(lines[1].starts_with("1,"));
}
