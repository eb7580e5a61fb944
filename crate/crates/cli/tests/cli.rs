use std::io::Write;
use std::process::{Command, Output, Stdio};

fn wmgraph(args: &[&str], stdin: &str) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_wmgraph"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(stdin.as_bytes()).unwrap();
    child.wait_with_output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn ok(args: &[&str], stdin: &str) -> String {
    let o = wmgraph(args, stdin);
    assert!(o.status.success(), "{args:?}: {}", stderr(&o));
    stdout(&o)
}

#[test]
fn encode_decode_round_trip() {
    for key in ["1", "43", "1000", "18446744073709551615"] {
        let g = ok(&["encode", "--key", key], "");
        assert_eq!(ok(&["decode", "--oracle"], &g).trim(), key);
    }
}

#[test]
fn dot_output() {
    let dot = ok(&["encode", "--key", "43", "--dot"], "");
    assert!(dot.starts_with("digraph"));
    assert_eq!(dot.matches("->").count(), 27);
}

#[test]
fn recognize_accepts_and_rejects() {
    let g = ok(&["encode", "--key", "43"], "");
    let line = ok(&["recognize"], &g);
    assert!(line.starts_with("accept n=6 key=43"), "{line}");

    let spec = tempfile::NamedTempFile::new().unwrap();
    std::fs::write(spec.path(), "remove 6 8\n").unwrap();
    let damaged = ok(&["attack", "--spec", spec.path().to_str().unwrap()], &g);
    let o = wmgraph(&["recognize"], &damaged);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).starts_with("reject"));
    assert_eq!(wmgraph(&["decode"], &damaged).status.code(), Some(1));
}

#[test]
fn attack_then_recover() {
    let g = ok(&["encode", "--key", "43"], "");
    let spec = tempfile::NamedTempFile::new().unwrap();
    std::fs::write(spec.path(), "# two removals\nseed 7\nremove 5 4\nremove 3 6\n").unwrap();
    let damaged = ok(&["attack", "--spec", spec.path().to_str().unwrap()], &g);
    let o = wmgraph(&["recover", "--n", "6"], &damaged);
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(stderr(&o).contains("key 43"), "{}", stderr(&o));
    assert_eq!(stdout(&o), g);
}

#[test]
fn random_attacks_are_reproducible_and_recoverable() {
    let g = ok(&["encode", "--key", "1234"], "");
    for (kind, k) in [("removals", "2"), ("insertions", "1"), ("mixed", "2")] {
        let args = ["attack", "--random", k, "--kind", kind, "--seed", "5"];
        let a = ok(&args, &g);
        assert_eq!(a, ok(&args, &g));
        assert_ne!(a, g);
        assert_eq!(ok(&["recover", "--n", "11"], &a), g, "{kind}");
    }
}

#[test]
fn exit_codes() {
    let g = ok(&["encode", "--key", "43"], "");
    assert_eq!(wmgraph(&["frobnicate"], "").status.code(), Some(4));
    assert_eq!(wmgraph(&["recover", "--n", "5"], &g).status.code(), Some(4));
    assert_eq!(wmgraph(&["decode"], "not a graph").status.code(), Some(4));

    let three = ok(&["attack", "--random", "3", "--kind", "removals"], &g);
    let o = wmgraph(&["recover", "--n", "6"], &three);
    assert_eq!(o.status.code(), Some(3));
    assert!(stderr(&o).contains("k -3"), "{}", stderr(&o));

    let two = ok(&["encode", "--key", "2"], "");
    let spec = tempfile::NamedTempFile::new().unwrap();
    std::fs::write(spec.path(), "remove 1 5\nremove 4 5\n").unwrap();
    let damaged = ok(&["attack", "--spec", spec.path().to_str().unwrap()], &two);
    let o = wmgraph(&["recover", "--n", "2"], &damaged);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("ambiguous true"), "{}", stderr(&o));
}

#[test]
fn undamaged_input_recovers_to_itself() {
    let g = ok(&["encode", "--key", "77"], "");
    assert_eq!(ok(&["recover", "--n", "7"], &g), g);
}

#[test]
fn analysis_csv() {
    let c = ok(&["analyze", "collisions", "--n", "3..4", "--k", "2,3"], "");
    assert_eq!(c, "n,k,count,ratio\n3,2,0,0.000000\n3,3,2,0.500000\n4,2,0,0.000000\n4,3,2,0.250000\n");

    let r = ok(&["analyze", "recovery", "--n", "3", "--kind", "removals", "--k", "1,2"], "");
    let lines: Vec<&str> = r.lines().collect();
    assert_eq!(lines[0], "n,kind,attacks,failures");
    assert_eq!(lines.len(), 3);
    assert!(lines[1..].iter().all(|l| l.ends_with(",0")), "{r}");

    let b = ok(&["bench", "--n", "8,16", "--samples", "100"], "");
    let lines: Vec<&str> = b.lines().collect();
    assert_eq!(lines[0], "n,decoder,condition,mean_ns,samples");
    assert_eq!(lines.len(), 9);
    assert_eq!(wmgraph(&["bench", "--samples", "10"], "").status.code(), Some(4));
}
