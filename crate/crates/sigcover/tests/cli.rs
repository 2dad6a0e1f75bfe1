use std::path::{Path, PathBuf};
use std::process::Command;

use sigcover::cli::run;
use sigcover_core::euler::build_euler_tree;
use sigcover_core::graph::SignedGraph;

fn data(name: &str) -> String {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("tests/data")
        .join(name)
        .display()
        .to_string()
}

struct Out {
    code: i32,
    stdout: String,
    stderr: String,
}

fn sigcover(args: &[&str], stdin: &str) -> Out {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("sigcover").chain(args.iter().copied());
    let code = run(argv, &mut stdin.as_bytes(), &mut out, &mut err);
    Out {
        code,
        stdout: String::from_utf8(out).unwrap(),
        stderr: String::from_utf8(err).unwrap(),
    }
}

fn field<'a>(text: &'a str, key: &str) -> &'a str {
    text.lines()
        .find_map(|l| l.strip_prefix(key).filter(|rest| rest.starts_with(' ')))
        .map(str::trim)
        .unwrap_or_else(|| panic!("no {key} in\n{text}"))
}

fn write(dir: &Path, name: &str, text: &str) -> PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p
}

#[test]
fn petersen_cover_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let g = data("petersen5.sg");
    let r = sigcover(&["cover", &g], "");
    assert_eq!(r.code, 0, "{}", r.stderr);
    assert!(field(&r.stdout, "achieved").parse::<usize>().unwrap() <= 46);
    assert_eq!(field(&r.stdout, "eps_n"), "3");
    assert_eq!(field(&r.stdout, "bound"), "50");
    let cert = write(dir.path(), "cert.txt", &r.stdout);
    let v = sigcover(&["verify", &g, cert.to_str().unwrap()], "");
    assert_eq!(v.code, 0, "{}", v.stdout);
    assert_eq!(field(&v.stdout, "valid"), "yes");

    let j = sigcover(&["--format", "json", "cover", &g], "");
    assert_eq!(j.code, 0);
    let rec: serde_json::Value = serde_json::from_str(j.stdout.trim()).unwrap();
    assert_eq!(rec["certified"], true);
    let cert = write(dir.path(), "cert.json", &j.stdout);
    assert_eq!(sigcover(&["verify", &g, cert.to_str().unwrap()], "").code, 0);
}

#[test]
fn tampered_covers_are_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let g = data("petersen5.sg");
    let cert = sigcover(&["cover", &g], "").stdout;
    // drop the last element line
    let mut lines: Vec<&str> = cert.lines().collect();
    let last = lines.iter().rposition(|l| l.starts_with("element ")).unwrap();
    lines.remove(last);
    let p = write(dir.path(), "short.txt", &lines.join("\n"));
    let v = sigcover(&["verify", &g, p.to_str().unwrap()], "");
    assert_eq!(v.code, 3);
    assert!(v.stdout.contains("violation"), "{}", v.stdout);

    // a bound the cover cannot meet
    let p = write(dir.path(), "cert.txt", &cert);
    let v = sigcover(&["verify", &g, p.to_str().unwrap(), "--max-length", "20"], "");
    assert_eq!(v.code, 3);
    assert!(v.stdout.contains("exceeds bound 20"), "{}", v.stdout);

    // an edge set that is not what it claims to be
    let p = write(dir.path(), "bad.txt", "element balanced-circuit 0 1 2\n");
    let v = sigcover(&["verify", &g, p.to_str().unwrap()], "");
    assert_eq!(v.code, 3);
    assert!(v.stdout.contains("invalid element 0"));

    let p = write(dir.path(), "junk.txt", "element balanced-circuit 0 99\n");
    assert_eq!(sigcover(&["verify", &g, p.to_str().unwrap()], "").code, 1);
}

#[test]
fn exit_codes() {
    let r = sigcover(&["cover", &data("oneloop.sg")], "");
    assert_eq!(r.code, 2);
    assert!(r.stderr.contains("not flow-admissible"));
    let r = sigcover(&["cover"], "");
    assert_eq!(r.code, 1);
    assert!(r.stderr.contains("line 1"), "{}", r.stderr);
    let r = sigcover(&["cover"], "2 1\n0 x +\n");
    assert_eq!(r.code, 1);
    assert!(r.stderr.contains("line 2"), "{}", r.stderr);
    assert_eq!(sigcover(&["cover", "/no/such/file"], "").code, 1);
    assert_eq!(sigcover(&["frobnicate"], "").code, 1);
    let h = sigcover(&["--help"], "");
    assert_eq!(h.code, 0);
    assert!(h.stdout.contains("Exit codes"));
    let r = sigcover(&["--format", "json", "cover", &data("oneloop.sg")], "");
    let rec: serde_json::Value = serde_json::from_str(r.stdout.trim()).unwrap();
    assert_eq!(rec["exit"], 2);
}

#[test]
fn admissibility_and_signature() {
    assert_eq!(sigcover(&["check-admissible", &data("petersen5.sg")], "").code, 0);
    let r = sigcover(&["check-admissible", &data("oneloop.sg")], "");
    assert_eq!(r.code, 2);
    assert!(r.stdout.contains("edge 0"));
    let r = sigcover(&["minimize-signature", &data("petersen5.sg")], "");
    assert_eq!(r.code, 0);
    assert_eq!(field(&r.stdout, "eps_n"), "3");
    let graph: String = r.stdout.lines().skip(3).map(|l| format!("{l}\n")).collect();
    let g = SignedGraph::parse(&graph).unwrap();
    assert_eq!(g.negative_count(&g.all_edges()), 3);
}

#[test]
fn oracle_on_petersen() {
    let r = sigcover(&["oracle", &data("petersen5.sg")], "");
    assert_eq!(r.code, 0);
    assert_eq!(field(&r.stdout, "length"), "25");
    let r = sigcover(&["--oracle-cap", "10", "oracle", &data("petersen5.sg")], "");
    assert_eq!(r.code, 3);
    assert!(r.stderr.contains("limit"));
}

#[test]
fn bounds_table() {
    let r = sigcover(&["bounds", &data("petersen5.sg")], "");
    assert_eq!(r.code, 0);
    let total = r.stdout.lines().find(|l| l.starts_with("total")).unwrap();
    assert!(total.split_whitespace().any(|t| t == "50"), "{total}");
    assert!(r.stdout.contains("certified main yes"));

    // two long barbells side by side plus an isolated vertex
    let text = "7 8\n0 0 -\n0 1 +\n1 2 +\n2 2 -\n3 3 -\n3 4 +\n4 5 +\n5 5 -\n";
    let r = sigcover(&["--format", "json", "bounds"], text);
    assert_eq!(r.code, 0);
    let rec: serde_json::Value = serde_json::from_str(r.stdout.trim()).unwrap();
    let rows = rec["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 4);
    // each barbell: 11/3·4 − 5/3·2 = 34/3
    assert_eq!(rows[0]["main"], "34/3");
    assert_eq!(rows[1]["main"], "34/3");
    assert_eq!(rows[2]["main"], "0");
    assert_eq!(rows[3]["main"], "68/3");
}

#[test]
fn generation_is_deterministic() {
    let args = [
        "--seed",
        "1",
        "gen",
        "--model",
        "random-multigraph",
        "-n",
        "6",
        "-m",
        "10",
    ];
    let a = sigcover(&args, "");
    let b = sigcover(&args, "");
    assert_eq!(a.code, 0);
    assert_eq!(a.stdout, b.stdout);
    assert!(a.stdout.starts_with("# model random-multigraph seed 1\n"));
    let c = sigcover(
        &[
            "--seed",
            "2",
            "gen",
            "--model",
            "random-multigraph",
            "-n",
            "6",
            "-m",
            "10",
        ],
        "",
    );
    assert_ne!(a.stdout, c.stdout);
    let g = SignedGraph::parse(&a.stdout).unwrap();
    assert!(g.is_connected(&g.all_edges()));

    let r = sigcover(&["gen", "--model", "tree-plus-chords", "-n", "6", "-m", "4"], "");
    assert_eq!(r.code, 1);
    assert!(r.stderr.contains("at least 5 edges"));

    for seed in 0..20 {
        let s = seed.to_string();
        let r = sigcover(&["--seed", &s, "gen", "--model", "euler-tree", "-m", "12"], "");
        let g = SignedGraph::parse(&r.stdout).unwrap();
        assert!(build_euler_tree(&g, &g.all_edges()).is_ok());
    }
}

#[test]
fn jobs_do_not_change_output() {
    let dir = tempfile::tempdir().unwrap();
    let mut files = Vec::new();
    for seed in 0..6 {
        let s = seed.to_string();
        let g = sigcover(
            &["--seed", &s, "gen", "--model", "tree-plus-chords", "-n", "6", "-m", "9"],
            "",
        );
        files.push(
            write(dir.path(), &format!("g{seed}.sg"), &g.stdout)
                .display()
                .to_string(),
        );
    }
    let mut args = vec!["cover"];
    args.extend(files.iter().map(String::as_str));
    let one = sigcover(&args, "");
    let mut par = vec!["--jobs", "4"];
    par.extend(&args);
    let four = sigcover(&par, "");
    assert_eq!(one.stdout, four.stdout);
    assert_eq!(one.stderr, four.stderr);
    assert_eq!(one.code, four.code);
    // inadmissible inputs report on stderr instead
    assert_eq!(one.stdout.matches("== ").count() + one.stderr.lines().count(), 6);
}

#[test]
fn environment_overrides() {
    let out = Command::new(env!("CARGO_BIN_EXE_sigcover"))
        .args(["cover", &data("long_barbell.sg")])
        .env("SIGCOVER_FORMAT", "json")
        .env("SIGCOVER_STRATEGY", "alt1")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let rec: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(rec["requested"], "alt1");
    assert_eq!(rec["achieved"], 8);
}
