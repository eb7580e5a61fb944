//! Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any fails.

use std::collections::BTreeSet;
use std::io::Write;
use std::process::{Command, ExitCode, Stdio};
use std::time::Instant;

use wmgraph::analysis::{
    collision_sets, keys_of_size, minimum_distance, timing_bench, verify_recovery_exhaustive, Condition, Decoder,
};
use wmgraph::attack::{enumerate_attacks, random_attack, AttackKind};
use wmgraph::codec::Key;
use wmgraph::invariants::violated_properties;
use wmgraph::recovery::forest::Forest;
use wmgraph::recovery::recover;
use wmgraph::{decode_fast, decode_via_permutation, encode, is_watermark, recognize, Digraph};

type Outcome = Result<String, String>;

fn round_trip() -> Outcome {
    for omega in 1u64..1 << 16 {
        let g = encode(omega).map_err(|e| e.to_string())?.to_digraph();
        let fast = decode_fast(&g).map_err(|e| format!("{omega}: {e}"))?;
        let slow = decode_via_permutation(&g).map_err(|e| format!("{omega}: {e}"))?;
        if fast != omega || slow != omega {
            return Err(format!("{omega} decoded as {fast} / {slow}"));
        }
    }
    Ok("65535 keys".into())
}

fn worked_example() -> Outcome {
    let key = Key::new(43).unwrap();
    let b = key.extended_binary();
    let digits: String = b.digits().iter().map(|d| char::from(b'0' + d)).collect();
    let pb = b.bitonic_permutation();
    let ps = pb.self_inverting();
    let w = encode(43).unwrap();
    let mut tree = w.tree_edges().to_vec();
    tree.sort_unstable();
    let expect_tree = vec![
        (1, 10), (2, 8), (3, 6), (4, 6), (5, 6), (6, 8), (7, 14),
        (8, 10), (9, 14), (10, 13), (11, 14), (12, 14), (13, 14),
    ];
    let checks = [
        ("B*", digits == "1111110101000"),
        ("Z0", b.zero_indices() == [7, 9, 11, 12, 13]),
        ("Z1", b.one_indices() == [1, 2, 3, 4, 5, 6, 8, 10]),
        ("Pb", pb.elems() == [7, 9, 11, 12, 13, 10, 8, 6, 5, 4, 3, 2, 1]),
        ("Ps", ps.elems() == [7, 9, 11, 12, 13, 10, 1, 8, 2, 6, 3, 4, 5]),
        ("f", ps.fixed() == 8),
        ("tree edges", tree == expect_tree),
    ];
    match checks.iter().find(|c| !c.1) {
        Some((what, _)) => Err(format!("{what} differs")),
        None => Ok("all artifacts match".into()),
    }
}

fn properties() -> Outcome {
    for omega in 1u64..1 << 12 {
        let bad = violated_properties(omega);
        if !bad.is_empty() {
            return Err(format!("{omega} violates {bad:?}"));
        }
    }
    Ok("4095 keys".into())
}

fn characterization() -> Outcome {
    let mut rejected = 0u64;
    let mut sampled = 0u64;
    for n in 3..=8 {
        for omega in keys_of_size(n) {
            let g = encode(omega).unwrap().to_digraph();
            let r = recognize(&g).map_err(|e| format!("{omega} rejected: {e}"))?;
            if decode_fast(&g.relabel(&r.labeling.sigma)) != Ok(omega) {
                return Err(format!("{omega} accepted with the wrong key"));
            }
            for k in 1..=2 {
                for kind in [AttackKind::Removals, AttackKind::Insertions, AttackKind::Mixed] {
                    for spec in enumerate_attacks(&g, k, kind).unwrap() {
                        let h = g.without_edges(&spec.removals).with_edges(&spec.insertions);
                        if is_watermark(&h) {
                            return Err(format!("{omega} {spec:?} accepted"));
                        }
                        rejected += 1;
                    }
                }
            }
        }
        let keys: Vec<u64> = keys_of_size(n).collect();
        let kinds = [AttackKind::Removals, AttackKind::Insertions, AttackKind::Mixed];
        for k in 3..=5 {
            for i in 0..10_000u64 {
                let omega = keys[i as usize % keys.len()];
                let g = encode(omega).unwrap().to_digraph();
                let spec = random_attack(&g, k, kinds[i as usize % 3], i).unwrap();
                let h = g.without_edges(&spec.removals).with_edges(&spec.insertions);
                if is_watermark(&h) {
                    return Err(format!("{omega} {spec:?} accepted"));
                }
                sampled += 1;
            }
        }
    }
    Ok(format!("{rejected} exhaustive and {sampled} sampled variants rejected"))
}

fn exhaustive_recovery() -> Outcome {
    let rows = verify_recovery_exhaustive(3..=7, &[(AttackKind::Removals, 1), (AttackKind::Removals, 2)]);
    let attacks: u64 = rows.iter().map(|r| r.attacks).sum();
    match rows.iter().find(|r| r.failures > 0) {
        Some(r) => Err(format!("n={} {}: {} failures, first {:?}", r.n, r.label(), r.failures, r.first_failure)),
        None => Ok(format!("{attacks} attacks")),
    }
}

fn tightness() -> Outcome {
    let minus = |omega, gone: &[(usize, usize)]| -> BTreeSet<(usize, usize)> {
        encode(omega).unwrap().edges().into_iter().filter(|e| !gone.contains(e)).collect()
    };
    let a = minus(8, &[(2, 3), (7, 8), (8, 9)]);
    let b = minus(9, &[(2, 4), (7, 9), (8, 10)]);
    if a != b || a.len() != encode(8).unwrap().edges().len() - 3 {
        return Err("edge sets differ".into());
    }
    for n in 3..=6 {
        if minimum_distance(n) != Some(3) {
            return Err(format!("minimum distance at n={n} is {:?}", minimum_distance(n)));
        }
    }
    Ok("witness exact, minimum 3 for n in 3..=6".into())
}

/// AHU canonical string of an unordered rooted tree.
fn ahu(f: &Forest, v: usize) -> String {
    let mut parts: Vec<String> = f.children(v).iter().map(|&c| ahu(f, c)).collect();
    parts.sort();
    format!("({})", parts.concat())
}

fn forest_form(f: &Forest) -> Vec<String> {
    let mut forms: Vec<String> = f.component_roots().iter().map(|&r| ahu(f, r)).collect();
    forms.sort();
    forms
}

fn run_recover(g: &Digraph, n: usize) -> Result<(Option<i32>, String), String> {
    let mut child = Command::new(env!("CARGO_BIN_EXE_wmgraph"))
        .args(["recover", "--n", &n.to_string()])
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .map_err(|e| e.to_string())?;
    child.stdin.take().unwrap().write_all(g.to_text().as_bytes()).map_err(|e| e.to_string())?;
    let out = child.wait_with_output().map_err(|e| e.to_string())?;
    Ok((out.status.code(), String::from_utf8_lossy(&out.stderr).into_owned()))
}

fn n2_exception() -> Outcome {
    let cases = [(2u64, [(1, 5), (4, 5)]), (3, [(1, 4), (4, 6)])];
    let mut forms = Vec::new();
    for (omega, gone) in cases {
        let w = encode(omega).unwrap();
        forms.push(forest_form(&Forest::from_tree(&w.representative_tree(), &gone)));
        let damaged = w.to_digraph().without_edges(&gone);
        let (code, stderr) = run_recover(&damaged, 2)?;
        if code != Some(2) {
            return Err(format!("key {omega}: exit {code:?}, stderr {stderr}"));
        }
        if !stderr.contains("alternatives 2 3") {
            return Err(format!("key {omega}: report lacks both keys: {stderr}"));
        }
    }
    if forms[0] != forms[1] {
        return Err(format!("damaged trees differ: {forms:?}"));
    }
    Ok("isomorphic, exit 2 for both".into())
}

fn insertion_recovery() -> Outcome {
    let mut total = 0;
    for n in 4..=6 {
        for omega in keys_of_size(n) {
            let g = encode(omega).unwrap().to_digraph();
            for (kind, k) in [(AttackKind::Insertions, 1), (AttackKind::Insertions, 2), (AttackKind::Mixed, 2)] {
                for (i, spec) in enumerate_attacks(&g, k, kind).unwrap().enumerate() {
                    let spec = spec.with_seed(i as u64);
                    let damaged = wmgraph::apply_attack(&g, &spec, true).unwrap().graph;
                    match recover(&damaged, n) {
                        Ok(r) if r.key == omega && !r.ambiguous() => total += 1,
                        other => return Err(format!("{omega} {spec:?}: {:?}", other.map(|r| r.alternatives))),
                    }
                }
            }
        }
    }
    Ok(format!("{total} attacks on all 56 keys"))
}

fn collisions() -> Outcome {
    let four = collision_sets(4, 3);
    if !four.members.contains(&8) || !four.members.contains(&9) {
        return Err(format!("Ω'4(3) = {:?}", four.members));
    }
    for n in 3..=8 {
        for k in 0..=2 {
            let s = collision_sets(n, k);
            if !s.members.is_empty() {
                return Err(format!("Ω'{n}({k}) = {:?}", s.members));
            }
        }
    }
    let ten = collision_sets(10, 3);
    if ten.ratio <= four.ratio {
        return Err(format!("ratio {} at n=10 vs {} at n=4", ten.ratio, four.ratio));
    }
    Ok(format!("ratio(10,3) = {:.4} > ratio(4,3) = {:.4}", ten.ratio, four.ratio))
}

fn scaling() -> Outcome {
    let rows = timing_bench(&[20, 40], 1000, 1).map_err(|e| e.to_string())?;
    let mean = |n| {
        rows.iter()
            .find(|r| r.n == n && r.decoder == Decoder::Fast && r.condition == Condition::Undamaged)
            .map(|r| r.mean_ns)
            .unwrap()
    };
    let ratio = mean(40) / mean(20);
    let msg = format!("{:.0} ns vs {:.0} ns, ratio {ratio:.2}", mean(40), mean(20));
    if (1.5..=3.0).contains(&ratio) {
        Ok(msg)
    } else {
        Err(msg)
    }
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 10] = [
        ("1 round trip", round_trip),
        ("2 worked example", worked_example),
        ("3 properties", properties),
        ("4 characterization", characterization),
        ("5 exhaustive removal recovery", exhaustive_recovery),
        ("6 tightness", tightness),
        ("7 n=2 exception", n2_exception),
        ("8 insertion and mixed recovery", insertion_recovery),
        ("9 collision sets", collisions),
        ("10 linear scaling", scaling),
    ];
    let mut failed = 0;
    for (name, check) in criteria {
        let t = Instant::now();
        match check() {
            Ok(msg) => println!("PASS {name}: {msg} ({:.1?})", t.elapsed()),
            Err(msg) => {
                failed += 1;
                println!("FAIL {name}: {msg} ({:.1?})", t.elapsed());
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failed} criteria failed");
        ExitCode::FAILURE
    }
}
