use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use pruned_pivot::{Ranking, Seed};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_pivot-bench"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

/// First seed under which node 0 precedes node 1 on two nodes.
fn seed_ranking_zero_first() -> u64 {
    (0..)
        .find(|&s| Ranking::random_permutation(2, Seed(s)).unwrap().order()[0] == 0)
        .unwrap()
}

#[test]
fn replay_prints_query_answers() {
    let dir = tempfile::tempdir().unwrap();
    let graph = write(dir.path(), "g.txt", "n 2\n");
    let stream = write(dir.path(), "s.txt", "+ 0 1\n? 0\n");
    let seed = seed_ranking_zero_first().to_string();
    let o = run(&["dynamic", &graph, &stream, "--k", "3", "--seed", &seed]);
    assert!(o.status.success());
    assert_eq!(stdout(&o), "0 0\n");
}

#[test]
fn replay_audit_on_fresh_graph() {
    let dir = tempfile::tempdir().unwrap();
    let graph = write(dir.path(), "g.txt", "0 1\n1 2\n2 3\n3 0\n");
    let stream = write(dir.path(), "s.txt", "! \n- 0 1\n+ 0 2\n!\n");
    let o = run(&["dynamic", &graph, &stream, "--k", "2", "--audit-every", "1"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o), "ok\nok\n");
}

#[test]
fn replay_rejects_malformed_stream_before_running() {
    let dir = tempfile::tempdir().unwrap();
    let graph = write(dir.path(), "g.txt", "n 2\n");
    let stream = write(dir.path(), "s.txt", "? 0\n++ 0 1\n");
    let o = run(&["dynamic", &graph, &stream]);
    assert!(!o.status.success());
    assert_eq!(stdout(&o), "");
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 2"));
}

#[test]
fn replay_rejects_invalid_update() {
    let dir = tempfile::tempdir().unwrap();
    let graph = write(dir.path(), "g.txt", "n 3\n0 1\n");
    let stream = write(dir.path(), "s.txt", "+ 0 1\n");
    assert!(!run(&["dynamic", &graph, &stream]).status.success());
}

#[test]
fn cluster_outputs_every_node() {
    let dir = tempfile::tempdir().unwrap();
    let graph = write(dir.path(), "g.txt", "0 1\n1 2\n0 2\n3 4\n");
    for algo in ["pivot", "pruned", "rpivot", "narrow"] {
        let o = run(&["cluster", &graph, "--algo", algo, "--k", "3", "--seed", "4"]);
        assert!(o.status.success(), "{algo}");
        let out = stdout(&o);
        let lines: Vec<&str> = out.lines().collect();
        assert_eq!(lines[0], "node,cluster,unlucky");
        assert_eq!(lines.len(), 6);
        assert!(String::from_utf8_lossy(&o.stderr).starts_with("cost "));
    }
    let r = run(&[
        "cluster", &graph, "--algo", "pruned", "--r", "3", "--seed", "4",
    ]);
    let k = run(&[
        "cluster", &graph, "--algo", "pruned", "--k", "3", "--seed", "4",
    ]);
    assert_eq!(r.stdout, k.stdout);
}

#[test]
fn lca_prints_answers_and_audit() {
    let dir = tempfile::tempdir().unwrap();
    let graph = write(dir.path(), "g.txt", "0 1\n1 2\n2 3\n3 4\n4 0\n");
    let o = run(&["lca", &graph, "0", "3", "--k", "4", "--seed", "9"]);
    assert!(o.status.success());
    let out = stdout(&o);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines.len(), 3);
    assert!(lines[0].starts_with("0 "));
    assert!(lines[1].starts_with("3 "));
    assert_eq!(lines[1].split_whitespace().count(), 3);
    assert_eq!(lines[2], "audit ok");
}

#[test]
fn paths_csv() {
    let dir = tempfile::tempdir().unwrap();
    let graph = write(dir.path(), "g.txt", "0 1\n1 2\n2 3\n1 3\n");
    let o = run(&[
        "paths", &graph, "--trials", "4", "--seed", "2", "--edge", "1,2",
    ]);
    assert!(o.status.success());
    let out = stdout(&o);
    assert!(out.starts_with("trial,query_paths_ab,"));
    assert_eq!(out.lines().count(), 5);
    assert!(!run(&["paths", &graph, "--edge", "0,3"]).status.success());
}

#[test]
fn experiment_is_deterministic_across_jobs() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let common = [
        "experiment",
        "--parts",
        "2",
        "--part-size",
        "20",
        "--trials",
        "5",
        "--r-min",
        "2",
        "--r-max",
        "5",
        "--seed",
        "11",
    ];
    let outs: Vec<(String, String)> = ["1", "3"]
        .iter()
        .map(|jobs| {
            let raw = d.join(format!("raw{jobs}.csv"));
            let agg = d.join(format!("agg{jobs}.csv"));
            let mut args: Vec<&str> = common.to_vec();
            let (raw_s, agg_s) = (raw.to_str().unwrap(), agg.to_str().unwrap());
            args.extend(["--jobs", jobs, "--out-raw", raw_s, "--out-agg", agg_s]);
            assert!(run(&args).status.success());
            (
                fs::read_to_string(raw).unwrap(),
                fs::read_to_string(agg).unwrap(),
            )
        })
        .collect();
    assert_eq!(outs[0], outs[1]);
    assert!(outs[0].0.starts_with("algorithm,R,trial,cost\n"));
    assert!(outs[0].1.starts_with("algorithm,R,mean,std\n"));
    assert_eq!(outs[0].0.lines().count(), 1 + 4 * 4 * 5);
}

#[test]
fn config_file_with_command_line_override() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(
        dir.path(),
        "c.txt",
        "# small sweep\nparts = 2\npart_size = 10\ntrials = 2\nr_min = 3\nr_max = 4\nalgorithms = pivot\n",
    );
    let o = run(&["experiment", "--config", &cfg]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(stdout(&o).lines().count(), 1 + 2);

    let o = run(&["experiment", "--config", &cfg, "--r-max", "6"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let out = stdout(&o);
    assert_eq!(out.lines().count(), 1 + 4);
    assert!(out.lines().last().unwrap().starts_with("pivot,6,"));
}
