//! End-to-end tests of the command-line surface: exit codes, line formats,
//! and byte stability.

use std::path::PathBuf;
use std::process::{Command, Output, Stdio};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_bubblegraph"))
}

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name)
}

fn run_with_stdin(args: &[&str], stdin: &str) -> Output {
    let mut child = bin()
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("spawn bubblegraph");
    use std::io::Write;
    child.stdin.as_mut().unwrap().write_all(stdin.as_bytes()).unwrap();
    child.wait_with_output().unwrap()
}

#[test]
fn diamond_fixture_has_one_whole_block_superbubble() {
    let out = bin()
        .args(["superbubbles", "--input"])
        .arg(fixture("diamond.gfa"))
        .output()
        .unwrap();
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(String::from_utf8_lossy(&out.stdout), "SB: a d\n");
}

#[test]
fn tip_clique_expansion_counts_pairs() {
    let gen = bin().args(["gen", "tip-clique", "4"]).output().unwrap();
    assert!(gen.status.success());
    let out = run_with_stdin(
        &["snarls", "--expand", "--format", "bidirected-edge-list"],
        &String::from_utf8_lossy(&gen.stdout),
    );
    assert!(out.status.success());
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert_eq!(stdout.lines().count(), 6, "C(4,2) expanded pairs:\n{stdout}");
    assert!(stdout.lines().all(|l| l.starts_with("S: ")));
}

#[test]
fn snarl_representation_of_tip_clique_is_one_tip_list() {
    let gen = bin().args(["gen", "tip-clique", "5"]).output().unwrap();
    let out = run_with_stdin(
        &["snarls", "--format", "bidirected-edge-list"],
        &String::from_utf8_lossy(&gen.stdout),
    );
    assert!(out.status.success());
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert_eq!(stdout, "T1: t0- t1- t2- t3- t4-\n");
}

#[test]
fn feedback_edges_rejects_tips_with_exit_3() {
    let out = run_with_stdin(
        &["feedback-edges", "--format", "bidirected-edge-list"],
        "a + b -\n",
    );
    assert_eq!(out.status.code(), Some(3));
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("tip"), "stderr: {stderr}");
}

#[test]
fn non_digraphic_superbubble_input_exits_3_with_witness() {
    let out = run_with_stdin(
        &["superbubbles", "--format", "bidirected-edge-list"],
        "a + b +\n",
    );
    assert_eq!(out.status.code(), Some(3));
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("a+") && stderr.contains("b+"), "stderr: {stderr}");
}

#[test]
fn malformed_input_exits_2_with_line_number() {
    let out = run_with_stdin(
        &["snarls", "--format", "bidirected-edge-list"],
        "a + b -\nc * d -\n",
    );
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 2"));
}

#[test]
fn missing_format_on_stdin_is_a_usage_error() {
    let out = run_with_stdin(&["snarls"], "a + b -\n");
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn output_is_byte_stable_across_runs() {
    let run = || {
        bin()
            .args(["ultrabubbles", "--input"])
            .arg(fixture("toy_pangenome.gfa"))
            .output()
            .unwrap()
    };
    let a = run();
    let b = run();
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    assert!(!a.stdout.is_empty());
}

#[test]
fn generator_seeds_reproduce_byte_identical_graphs() {
    let run = || {
        bin()
            .args(["gen", "random-bidirected", "30", "60", "--seed", "17"])
            .output()
            .unwrap()
            .stdout
    };
    assert_eq!(run(), run());
}

#[test]
fn toy_pangenome_round_trips_through_edge_list() {
    let gfa = std::fs::read_to_string(fixture("toy_pangenome.gfa")).unwrap();
    let g = bubblegraph::io::parse_gfa(&gfa).unwrap();
    let ser = bubblegraph::io::serialize_bidirected(&g);
    let g2 = bubblegraph::io::parse_bidirected_edge_list(&ser).unwrap();
    assert_eq!(bubblegraph::io::serialize_bidirected(&g2), ser);
    assert_eq!(g2.edge_count(), g.edge_count());
}

#[test]
fn check_passes_on_small_fixture() {
    let out = bin()
        .args(["check", "--input"])
        .arg(fixture("toy_pangenome.gfa"))
        .output()
        .unwrap();
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(stdout.contains("check snarls: OK"));
    assert!(stdout.contains("check ultrabubbles: OK"));
}

#[test]
fn thread_count_does_not_change_output() {
    let base = bin()
        .args(["snarls", "--input"])
        .arg(fixture("toy_pangenome.gfa"))
        .output()
        .unwrap();
    let threaded = bin()
        .args(["snarls", "--threads", "3", "--input"])
        .arg(fixture("toy_pangenome.gfa"))
        .output()
        .unwrap();
    let via_env = bin()
        .args(["snarls", "--input"])
        .arg(fixture("toy_pangenome.gfa"))
        .env("BUBBLEGRAPH_THREADS", "2")
        .output()
        .unwrap();
    assert_eq!(base.stdout, threaded.stdout);
    assert_eq!(base.stdout, via_env.stdout);
}

#[test]
fn stats_go_to_stderr_and_stdout_stays_stable() {
    let plain = bin()
        .args(["snarls", "--input"])
        .arg(fixture("toy_pangenome.gfa"))
        .output()
        .unwrap();
    let stats = bin()
        .args(["snarls", "--stats", "--input"])
        .arg(fixture("toy_pangenome.gfa"))
        .output()
        .unwrap();
    assert_eq!(plain.stdout, stats.stdout);
    let stderr = String::from_utf8_lossy(&stats.stderr);
    assert!(stderr.contains("# vertices:"));
    assert!(stderr.contains("# spqr-nodes:"));
    assert!(stderr.contains("# wall-time-ms:"));
}

#[test]
fn feedback_arcs_reports_kind_line() {
    let out = run_with_stdin(
        &["feedback-arcs", "--format", "directed-edge-list"],
        "a b\nb c\nc a\n",
    );
    assert!(out.status.success());
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(stdout.starts_with("FK: single-source-of-cycles\n"));
    assert_eq!(stdout.lines().count(), 4);
}
