use std::path::PathBuf;
use std::process::{Command, Output};

fn bin(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bpm-dual")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn temp_file(name: &str, body: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("bpm-dual-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let p = dir.join(name);
    std::fs::write(&p, body).unwrap();
    p
}

#[test]
fn verify_two_reports_exact_counts() {
    let o = bin(&["verify", "--n", "2"]);
    assert_eq!(o.status.code(), Some(0));
    let s = stdout(&o);
    assert!(s.contains("16 coefficients checked"), "{s}");
    assert!(s.contains("16 evaluation points checked"), "{s}");
}

#[test]
fn verify_five_needs_huge() {
    let o = bin(&["verify", "--n", "5"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("4"));
}

#[test]
fn coeff_methods_agree() {
    let graphs = [
        ("k22.txt", "2\n11\n11\n", "1"),
        ("k33.txt", "3\n111\n111\n111\n", "1"),
        ("single.txt", "2\n10\n00\n", "0"),
        ("chain.txt", "3\n100\n110\n111\n", ""),
        ("k42.txt", "4\n1100\n1100\n1100\n1100\n", "3"),
    ];
    for (name, body, want) in graphs {
        let p = temp_file(name, body);
        let formula = stdout(&bin(&["coeff", "--graph", p.to_str().unwrap(), "--method", "formula"]));
        if !want.is_empty() {
            assert_eq!(formula.trim(), want, "{name}");
        }
        let mut applied = 0;
        for m in ["mobius", "chisum", "elemsum", "permitted"] {
            let o = bin(&["coeff", "--graph", p.to_str().unwrap(), "--method", m]);
            match o.status.code() {
                Some(0) => {
                    applied += 1;
                    assert_eq!(stdout(&o), formula, "{name} via {m}");
                }
                Some(2) => {}
                c => panic!("{name} via {m}: exit {c:?}"),
            }
        }
        assert!(applied >= 1, "{name}: no oracle applied");
    }
}

#[test]
fn count_two() {
    let o = bin(&["count", "--n", "2"]);
    assert_eq!(o.status.code(), Some(0));
    let s = stdout(&o);
    assert!(s.contains("monomial_count\t9"));
    assert!(s.contains("max_abs_coefficient\t1"));
    assert!(s.contains("count_bounds\tOK") && s.contains("magnitude_bounds\tOK"));
}

#[test]
fn poly_dump_round_trips_through_eval() {
    let dir = std::env::temp_dir().join(format!("bpm-dual-poly-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    for format in ["tsv", "json"] {
        let dump = dir.join(format!("p2.{format}"));
        let o = bin(&["poly", "--n", "2", "--format", format, "--out", dump.to_str().unwrap()]);
        assert_eq!(o.status.code(), Some(0));
        for (body, want) in [("2\n11\n11\n", "1"), ("2\n00\n00\n", "0"), ("2\n11\n00\n", "1"), ("2\n10\n01\n", "0")] {
            let g = temp_file("eval.txt", body);
            let o = bin(&["eval", "--graph", g.to_str().unwrap(), "--poly", dump.to_str().unwrap()]);
            assert_eq!(stdout(&o).trim(), want, "{format} at {body:?}");
        }
    }
}

#[test]
fn poly_tsv_shape() {
    let s = stdout(&bin(&["poly", "--n", "2"]));
    let lines: Vec<&str> = s.lines().collect();
    assert_eq!(lines.len(), 9);
    assert_eq!(lines[0], "1\t(1,1),(1,2)");
    assert_eq!(lines[8], "1\t(1,1),(1,2),(2,1),(2,2)");
}

#[test]
fn sens_json_lists_edges() {
    let o = bin(&["sens", "--n", "2", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["count"], 2);
    assert_eq!(v["input_edges"], serde_json::json!([[1, 1], [2, 1]]));
    assert_eq!(v["sensitive_edges"], serde_json::json!([[1, 2], [2, 2]]));
}

#[test]
fn apxdeg_reports() {
    let o = bin(&["apxdeg", "--n", "2", "--eps", "1/3", "--format", "json", "--assemble"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["epsilon_prime"], "1/196608");
    assert_eq!(v["threshold"], 3);
    assert_eq!(v["overall_bound"], 4);
    assert_eq!(v["assembled"]["degree"], 4);
    let o = bin(&["apxdeg", "--n", "2", "--eps", "0.3"]);
    assert_eq!(o.status.code(), Some(2));
    let o = bin(&["apxdeg", "--n", "2", "--eps", "1/2"]);
    assert_eq!(o.status.code(), Some(2));
    let o = bin(&["apxdeg", "--n", "4", "--eps", "1/3", "--assemble"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn bad_graph_file_is_a_usage_error() {
    let p = temp_file("ragged.txt", "2\n11\n1\n");
    let o = bin(&["coeff", "--graph", p.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    let o = bin(&["coeff", "--graph", "/nonexistent/graph.txt"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn help_lists_caps() {
    let o = bin(&["--help"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("Size caps"));
}
