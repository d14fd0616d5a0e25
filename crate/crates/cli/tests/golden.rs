//! Byte-identical CLI output for the command corpus in tests/golden/corpus.txt.
//! Set QMF_BLESS=1 to rewrite the expected files.

mod support;

use support::{corpus, mismatches, transcript};

#[test]
fn corpus_matches_golden_files() {
    let failed = mismatches(std::env::var_os("QMF_BLESS").is_some());
    assert!(failed.is_empty(), "outputs differ from golden files: {failed:?}");
}

#[test]
fn corpus_covers_every_subcommand() {
    let names: Vec<String> = corpus().into_iter().map(|(_, a)| a.into_iter().find(|x| !x.starts_with("--")).unwrap()).collect();
    for cmd in ["qexp", "info", "decompose", "bracket", "lvalue", "table", "check"] {
        assert!(names.iter().any(|n| n == cmd), "{cmd} missing from corpus");
    }
    assert_eq!(names.len(), 15);
}

#[test]
fn repeated_runs_are_identical() {
    let args: Vec<String> = ["--json", "lvalue", "Delta", "2"].iter().map(|s| s.to_string()).collect();
    assert_eq!(transcript(&args), transcript(&args));
}

#[test]
fn exit_codes() {
    let code = |args: &[&str]| {
        let out = std::process::Command::new(env!("CARGO_BIN_EXE_qmf")).args(args).output().unwrap();
        out.status.code().unwrap()
    };
    assert_eq!(code(&["qexp", "E4", "-n", "3"]), 0);
    assert_eq!(code(&["qexp", "E4 +"]), 1);
    assert_eq!(code(&["frobnicate"]), 1);
    assert_eq!(code(&["--prec", "7", "qexp", "E4"]), 1);
    assert_eq!(code(&["qexp", "E4/(E2)"]), 2);
    assert_eq!(code(&["check", "rc", "E4", "E6", "--n", "1", "--tol", "1"]), 0);
    assert_eq!(code(&["check", "hadamard", "--n", "2", "--prec", "64", "--tol", "1e-300"]), 3);
}

#[test]
fn config_file_is_overridden_by_flags() {
    let dir = std::env::temp_dir().join(format!("qmf-config-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let cfg = dir.join("qmf.conf");
    std::fs::write(&cfg, "prec = 64\nt0 = 1.2\n").unwrap();
    let t0 = |v: &serde_json::Value| v["t0"].as_str().unwrap().parse::<f64>().unwrap();
    let run = |extra: &[&str]| {
        let mut args = vec!["--json", "--config", cfg.to_str().unwrap()];
        args.extend_from_slice(extra);
        args.extend_from_slice(&["lvalue", "Delta", "6"]);
        let out = std::process::Command::new(env!("CARGO_BIN_EXE_qmf")).args(&args).output().unwrap();
        serde_json::from_slice::<serde_json::Value>(&out.stdout).unwrap()
    };
    let from_file = run(&[]);
    assert_eq!(from_file["prec"], 64);
    assert_eq!(t0(&from_file), 1.2);
    let flagged = run(&["--t0", "1.31"]);
    assert_eq!(flagged["prec"], 64);
    assert_eq!(t0(&flagged), 1.31);
    std::fs::remove_dir_all(&dir).ok();
}
