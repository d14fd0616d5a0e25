//! Golden-file corpus shared by the golden and acceptance targets.

use std::path::{Path, PathBuf};
use std::process::Command;

pub fn golden_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden")
}

/// (name, arguments) for every corpus line.
pub fn corpus() -> Vec<(String, Vec<String>)> {
    let text = std::fs::read_to_string(golden_dir().join("corpus.txt")).unwrap();
    text.lines()
        .filter(|l| !l.trim().is_empty() && !l.starts_with('#'))
        .map(|l| {
            let mut it = l.split('\t').map(str::to_string);
            (it.next().unwrap(), it.collect())
        })
        .collect()
}

/// Standard output, standard error and exit code in one transcript.
pub fn transcript(args: &[String]) -> String {
    let out = Command::new(env!("CARGO_BIN_EXE_qmf")).args(args).output().unwrap();
    format!(
        "$ qmf {}\n{}--- stderr\n{}--- exit {}\n",
        args.join(" "),
        String::from_utf8_lossy(&out.stdout),
        String::from_utf8_lossy(&out.stderr),
        out.status.code().unwrap_or(-1)
    )
}

/// Names of the corpus entries whose output differs from the stored transcript.
/// With `bless` the stored transcripts are rewritten instead.
pub fn mismatches(bless: bool) -> Vec<String> {
    let mut failed = Vec::new();
    for (name, args) in corpus() {
        let path = golden_dir().join(format!("{name}.out"));
        let got = transcript(&args);
        if bless {
            std::fs::write(&path, &got).unwrap();
        } else if std::fs::read_to_string(&path).unwrap_or_default() != got {
            failed.push(name);
        }
    }
    failed
}
