use std::path::Path;
use std::process::{Command, Output};

fn qsvp(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qsvp"))
        .args(args)
        .output()
        .unwrap()
}

fn code(args: &[&str]) -> i32 {
    qsvp(args).status.code().unwrap()
}

fn read_sorted(dir: &Path) -> Vec<(String, String)> {
    let mut files: Vec<_> = std::fs::read_dir(dir)
        .unwrap()
        .map(|e| {
            let p = e.unwrap().path();
            (
                p.file_name().unwrap().to_string_lossy().into_owned(),
                std::fs::read_to_string(&p).unwrap(),
            )
        })
        .collect();
    files.sort();
    files
}

#[test]
fn exit_codes() {
    assert_eq!(code(&["example-2d", "--T", "5"]), 0);
    assert_eq!(code(&["example-2d", "--T", "2"]), 4);
    assert_eq!(code(&["dist", "--count", "0"]), 2);
    assert_eq!(code(&["dist", "--T", "-1"]), 2);
    assert_eq!(code(&["single-run", "--dim", "8", "--m", "30"]), 3);
    assert_eq!(code(&["kgrowth", "--dim", "11", "--count", "1"]), 3);
    assert_eq!(code(&["no-such-command"]), 2);
}

#[test]
fn bad_config_file_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("c.toml");
    std::fs::write(&cfg, "ensemble = 3\nunknown_key = 1\n").unwrap();
    assert_eq!(code(&["dist", "--config", cfg.to_str().unwrap()]), 2);
    std::fs::write(&cfg, "ensemble = [").unwrap();
    assert_eq!(code(&["dist", "--config", cfg.to_str().unwrap()]), 2);
}

#[test]
fn gen_then_oracle_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    assert_eq!(code(&["gen", "--dim", "3", "--seed", "7", "--out", out]), 0);
    for file in ["basis.txt", "basis.json"] {
        let path = dir.path().join(file);
        let o = qsvp(&["oracle", "--basis", path.to_str().unwrap()]);
        assert!(o.status.success());
        assert!(!o.stdout.is_empty());
    }
    let a = qsvp(&[
        "oracle",
        "--basis",
        dir.path().join("basis.txt").to_str().unwrap(),
    ]);
    let b = qsvp(&[
        "oracle",
        "--basis",
        dir.path().join("basis.json").to_str().unwrap(),
    ]);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn ensemble_output_independent_of_jobs() {
    let one = tempfile::tempdir().unwrap();
    let two = tempfile::tempdir().unwrap();
    for (dir, jobs) in [(&one, "1"), (&two, "2")] {
        let args = [
            "payoff",
            "--dim",
            "2",
            "--count",
            "4",
            "--T",
            "0.5,2",
            "--seed",
            "3",
            "--jobs",
            jobs,
            "--format",
            "csv,json,svg",
            "--out",
        ];
        let mut args = args.to_vec();
        args.push(dir.path().to_str().unwrap());
        assert_eq!(code(&args), 0);
    }
    let a = read_sorted(one.path());
    assert_eq!(a.len(), 3);
    assert_eq!(a, read_sorted(two.path()));
}
