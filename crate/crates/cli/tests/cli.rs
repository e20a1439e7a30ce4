use std::path::PathBuf;
use std::process::{Command, Output};

fn tclean(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tclean")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("tclean-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

#[test]
fn build_then_count_gives_sixteen() {
    let path = scratch("g5.qc");
    let b = tclean(&["build", "--kind", "gidney-adder", "--n", "5", "--out", path.to_str().unwrap()]);
    assert!(b.status.success());
    assert!(b.stdout.is_empty());
    let c = tclean(&["count", "--in", path.to_str().unwrap()]);
    assert!(c.status.success());
    let report = stdout(&c);
    assert!(report.contains("t_count=16\n"), "{report}");
    assert!(report.contains("meas_depth=8\n"), "{report}");
}

#[test]
fn every_listed_kind_builds_and_parses() {
    for kind in ["gidney-adder", "cuccaro-adder", "controlled-adder", "out-of-place-adder", "and", "mcx", "hamming", "phase-gradient"]
    {
        let o = tclean(&["build", "--kind", kind, "--n", "3"]);
        assert!(o.status.success(), "{kind}");
        let c = tclean::circuit::from_text(&stdout(&o)).unwrap();
        tclean::circuit::validate(&c).unwrap();
    }
}

#[test]
fn crossover_defaults() {
    let o = tclean(&["crossover"]);
    assert_eq!(stdout(&o), "crossover=1920\nhybrid_cutoff=960\n");
    let o = tclean(&["crossover", "--t-volume", "960", "--idle-factor", "6"]);
    assert!(stdout(&o).ends_with("hybrid_cutoff=5760\n"));
}

#[test]
fn verify_is_deterministic() {
    let args = ["verify", "--kind", "gidney-adder", "--n", "3", "--seed", "7"];
    let (a, b) = (tclean(&args), tclean(&args));
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    assert!(stdout(&a).ends_with("status=pass\n"));
}

#[test]
fn rewrite_reports_saving() {
    let pair = scratch("pair.qc");
    let out = scratch("pair2.qc");
    tclean(&["build", "--kind", "toffoli-pair", "--out", pair.to_str().unwrap()]);
    let o = tclean(&["rewrite", "--in", pair.to_str().unwrap(), "--out", out.to_str().unwrap(), "--report"]);
    let text = stdout(&o);
    assert!(text.contains("paired4.t_count=8\n") && text.contains("after.t_count=4\n"), "{text}");
    let c = tclean(&["count", "--in", out.to_str().unwrap()]);
    assert!(stdout(&c).starts_with("t_count=4\n"));
}

#[test]
fn oracle_text_parses() {
    let o = tclean(&["oracle", "--expr", "x0 & (x1 | x2)", "--report"]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(text.contains("# t_count=8\n"));
    tclean::circuit::from_text(&text).unwrap();
}

#[test]
fn exit_codes() {
    assert_eq!(tclean(&["build", "--kind", "gidney-adder", "--n", "0"]).status.code(), Some(2));
    assert_eq!(tclean(&["build", "--kind", "gidney-adder", "--n", "2", "--frobnicate"]).status.code(), Some(2));
    assert_eq!(tclean(&["build", "--kind", "mcx", "--n", "3", "--carry-out"]).status.code(), Some(2));
    assert_eq!(tclean(&["count", "--in", "/nonexistent.qc"]).status.code(), Some(2));
    assert_eq!(tclean(&["oracle", "--expr", "x0 &"]).status.code(), Some(2));

    let corpus = scratch("corpus");
    let entry = corpus.join("bad");
    std::fs::create_dir_all(&entry).unwrap();
    let g = tclean::golden::GoldenEntry::generate(&tclean::golden::BuildCommand::parse("tclean build --kind gidney-adder --n 2").unwrap()).unwrap();
    g.write(&entry).unwrap();
    std::fs::write(entry.join("report.txt"), g.report.replace("t_count=4", "t_count=3")).unwrap();
    let o = tclean(&["verify", "--kind", "goldens", "--in", corpus.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("golden=bad status=fail"));
}
