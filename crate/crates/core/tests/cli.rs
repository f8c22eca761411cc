use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;
use sublinear_lab::graph::generators::cycle;
use sublinear_lab::graph::io::{read_graph, to_text};
use sublinear_lab::kwise::Seed;
use sublinear_lab::rng::substream;
use sublinear_lab::testers::{kwise_seed_bits, BipartiteParams};

fn sublab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sublab")).args(args).output().unwrap()
}

fn json(out: &Output) -> Value {
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

fn write_cycle(dir: &Path, n: usize) -> String {
    let path = dir.join(format!("c{n}.txt"));
    std::fs::write(&path, to_text(&cycle(n, 3).unwrap())).unwrap();
    path.to_str().unwrap().to_string()
}

#[test]
fn usage_errors_exit_with_two() {
    let dir = tempfile::tempdir().unwrap();
    let missing = dir.path().join("nope.txt");
    let c = write_cycle(dir.path(), 20);
    let cases: Vec<Vec<&str>> = vec![
        vec!["test-bip", "--graph", missing.to_str().unwrap(), "--eps", "0.1"],
        vec!["test-exp", "--graph", &c, "--alpha", "0.3", "--mu", "0.3"],
        vec!["gen-pml", "--n", "16", "--m", "16", "--l", "3", "--c", "3"],
        vec!["verify-lb", "--kmax", "9"],
        vec!["bench", "--sizes", "x"],
        vec!["no-such-command"],
    ];
    for args in cases {
        let out = sublab(&args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert!(!out.stderr.is_empty());
    }
    assert_eq!(sublab(&["--help"]).status.code(), Some(0));
}

#[test]
fn gen_pml_writes_bounded_degree_graphs() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("pml");
    let args = ["gen-pml", "--n", "40", "--l", "2", "--c", "6", "--trials", "3", "--seed", "5", "--out", out.to_str().unwrap()];
    assert_eq!(sublab(&args).status.code(), Some(0));
    for t in 0..3 {
        let host = read_graph(&out.join(format!("pml-{t}-host.txt"))).unwrap();
        assert!(host.max_degree() <= 6);
        let induced = read_graph(&out.join(format!("pml-{t}-induced.txt"))).unwrap();
        assert_eq!(induced.n_vertices(), 40);
        assert!(induced.max_degree() <= 6);
    }
    let meta: Value = serde_json::from_slice(&std::fs::read(out.join("pml.json")).unwrap()).unwrap();
    assert_eq!(meta["trials"], 3);
}

#[test]
fn kwise_bipartite_runs_always_accept() {
    let dir = tempfile::tempdir().unwrap();
    let c100 = write_cycle(dir.path(), 100);
    let args = [
        "test-bip", "--graph", &c100, "--eps", "0.2", "--mode", "kwise", "--trials", "100", "--reps", "2", "--walks", "12",
        "--length", "20",
    ];
    let v = json(&sublab(&args));
    assert_eq!(v["aggregate"]["accepts"], 100);
    assert_eq!(v["results"].as_array().unwrap().len(), 100);
}

#[test]
fn fixed_kwise_seed_is_reproducible_across_master_seeds() {
    let dir = tempfile::tempdir().unwrap();
    let c = write_cycle(dir.path(), 31);
    let p = BipartiteParams::derive(31, 0.2, 3).unwrap().with_repetitions(1).with_walks(6).with_walk_length(40);
    let bits = kwise_seed_bits(p.walks, p.walk_length, p.degree_bound, p.k_indep, p.k_factor).unwrap();
    let hex = Seed::random(bits, &mut substream(8, 0)).to_hex();
    let run = |seed: &str| {
        let args = [
            "test-bip", "--graph", &c, "--eps", "0.2", "--mode", "kwise", "--kwise-seed", &hex, "--reps", "1", "--walks", "6",
            "--length", "40", "--seed", seed,
        ];
        let v = json(&sublab(&args));
        v["results"][0]["collisions"].clone()
    };
    assert_eq!(run("1"), run("2"));
}

#[test]
fn both_coin_modes_reject_an_odd_cycle() {
    let dir = tempfile::tempdir().unwrap();
    let c = write_cycle(dir.path(), 9);
    for mode in ["fully-random", "kwise"] {
        let args = [
            "test-bip", "--graph", &c, "--eps", "0.2", "--mode", mode, "--trials", "10", "--reps", "4", "--walks", "10",
            "--length", "30",
        ];
        let v = json(&sublab(&args));
        assert_eq!(v["aggregate"]["accepts"], 0, "{mode}");
    }
}

#[test]
fn csv_output_has_one_row_per_trial() {
    let dir = tempfile::tempdir().unwrap();
    let c = write_cycle(dir.path(), 20);
    let out = sublab(&["test-bip", "--graph", &c, "--eps", "0.3", "--trials", "4", "--walks", "5", "--length", "5", "--format", "csv"]);
    assert_eq!(out.status.code(), Some(0));
    let mut reader = csv::Reader::from_reader(out.stdout.as_slice());
    assert!(reader.headers().unwrap().iter().any(|h| h == "accept"));
    assert_eq!(reader.records().count(), 4);
}

#[test]
fn verify_lb_reports_passing_checks() {
    let v = json(&sublab(&["verify-lb", "--kmax", "3", "--samples", "5000"]));
    assert_eq!(v["aggregate"]["all_passed"], true);
}
