use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;

const BOWTIE: &str = "p 5 6\ne 1 2 1\ne 2 3 1\ne 1 3 1\ne 3 4 1\ne 4 5 1\ne 3 5 1\n";

fn logpath(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_logpath"))
        .args(args)
        .env_remove("LOGPATH_DEBUG")
        .output()
        .expect("binary runs")
}

fn write(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let path = dir.path().join(name);
    fs::write(&path, text).unwrap();
    path
}

fn arg(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn path_on_bowtie() {
    let dir = TempDir::new().unwrap();
    let file = write(&dir, "bowtie.txt", BOWTIE);
    let out = logpath(&["path", arg(&file), "1", "5", "--algo", "bounded"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out), "1 3 5\nweight 2\n");
    let meter = String::from_utf8(out.stderr).unwrap();
    assert!(meter.starts_with("n,highWater,steps,oracleCalls\n5,"));
}

#[test]
fn general_and_reference_report_equal_weights() {
    let dir = TempDir::new().unwrap();
    let gen = logpath(&[
        "gen", "--n", "30", "--delta", "3", "--k", "4", "--seed", "5",
    ]);
    let file = write(&dir, "g.txt", &stdout(&gen));
    let weight = |algo: &str| {
        let out = logpath(&["path", arg(&file), "2", "29", "--algo", algo]);
        assert_eq!(out.status.code(), Some(0), "{algo}");
        stdout(&out).lines().nth(1).unwrap().to_string()
    };
    let reference = weight("reference");
    assert_eq!(weight("general"), reference);
    assert_eq!(weight("bounded"), reference);
}

#[test]
fn exit_codes() {
    let dir = TempDir::new().unwrap();
    let split = write(&dir, "split.txt", "p 4 2\ne 1 2 1\ne 2 3 1\n");
    assert_eq!(
        logpath(&["path", arg(&split), "1", "4"]).status.code(),
        Some(2)
    );
    assert_eq!(
        logpath(&["path", arg(&split), "1", "4", "--algo", "general"])
            .status
            .code(),
        Some(2)
    );
    let negative = write(
        &dir,
        "neg.txt",
        "p 5 5\ne 1 2 1\ne 2 3 -3\ne 3 4 1\ne 2 4 1\ne 4 5 1\n",
    );
    for algo in ["general", "bounded", "reference"] {
        let out = logpath(&["path", arg(&negative), "1", "5", "--algo", algo]);
        assert_eq!(out.status.code(), Some(3), "{algo}");
    }
    let bad = write(&dir, "bad.txt", "p 2 1\ne 1 1 1\n");
    assert_eq!(
        logpath(&["path", arg(&bad), "1", "2"]).status.code(),
        Some(1)
    );
    let file = write(&dir, "bowtie.txt", BOWTIE);
    assert_eq!(
        logpath(&["path", arg(&file), "1", "9"]).status.code(),
        Some(1)
    );
    assert_eq!(logpath(&["path", arg(&file), "1"]).status.code(), Some(1));
    assert_eq!(logpath(&["nonsense"]).status.code(), Some(1));
    assert_eq!(logpath(&["--help"]).status.code(), Some(0));
    // Declared bounds the graph violates.
    assert_eq!(
        logpath(&["path", arg(&file), "1", "5", "--delta", "2"])
            .status
            .code(),
        Some(1)
    );
}

#[test]
fn parse_errors_name_the_line() {
    let dir = TempDir::new().unwrap();
    let file = write(&dir, "g.txt", "p 3 2\ne 1 2 1\ne 2 x 1\n");
    let out = logpath(&["blocks", arg(&file)]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8(out.stderr).unwrap().contains("line 3"));
}

#[test]
fn blocks_listing() {
    let dir = TempDir::new().unwrap();
    let file = write(&dir, "bowtie.txt", BOWTIE);
    let out = logpath(&["blocks", arg(&file)]);
    assert_eq!(
        stdout(&out),
        "c blocks=2 articulation=1\nb 1 2 3\nb 3 4 5\na 3\n"
    );
}

#[test]
fn gen_is_deterministic_and_canonical() {
    let args = [
        "gen", "--n", "200", "--delta", "3", "--k", "4", "--seed", "7",
    ];
    let a = logpath(&args);
    let b = logpath(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let text = stdout(&a);
    assert!(text.starts_with("c gen n=200 delta=3 k=4 seed=7\np 200 "));
    let dir = TempDir::new().unwrap();
    let out = dir.path().join("g.txt");
    let written = logpath(&[
        "gen",
        "--n",
        "200",
        "--delta",
        "3",
        "--k",
        "4",
        "--seed",
        "7",
        "-o",
        arg(&out),
    ]);
    assert_eq!(written.status.code(), Some(0));
    assert_eq!(fs::read_to_string(&out).unwrap(), text);
    assert_eq!(
        logpath(&["gen", "--n", "10", "--delta", "1"]).status.code(),
        Some(1)
    );
}

#[test]
fn path_output_is_byte_identical() {
    let dir = TempDir::new().unwrap();
    let file = write(
        &dir,
        "g.txt",
        &stdout(&logpath(&["gen", "--n", "60", "--seed", "2"])),
    );
    for algo in ["general", "bounded"] {
        let args = ["path", arg(&file), "3", "41", "--algo", algo];
        let (a, b) = (logpath(&args), logpath(&args));
        assert_eq!((a.stdout, a.stderr), (b.stdout, b.stderr));
    }
}

#[test]
fn walk_oracle_path() {
    let dir = TempDir::new().unwrap();
    let file = write(&dir, "bowtie.txt", BOWTIE);
    let out = logpath(&[
        "path",
        arg(&file),
        "1",
        "5",
        "--algo",
        "general",
        "--oracle",
        "walk",
        "--seed",
        "4",
    ]);
    assert_eq!(stdout(&out), "1 3 5\nweight 2\n");
    assert_eq!(
        logpath(&[
            "path",
            arg(&file),
            "1",
            "5",
            "--oracle",
            "walk",
            "--walk-budget",
            "0"
        ])
        .status
        .code(),
        Some(1)
    );
}

#[test]
fn verify_outcomes() {
    let ok = logpath(&["verify", "--exhaustive", "4", "--random", "10"]);
    assert_eq!(ok.status.code(), Some(0));
    assert!(stdout(&ok).ends_with("ok: 0 mismatches\n"));

    let empty = logpath(&["verify", "--exhaustive", "0", "--random", "0"]);
    assert_eq!(empty.status.code(), Some(1));

    let faulty = logpath(&[
        "verify",
        "--exhaustive",
        "3",
        "--random",
        "0",
        "--inject-fault",
    ]);
    assert_eq!(faulty.status.code(), Some(1));
    let text = stdout(&faulty);
    assert!(text.contains("mismatch: bounded"));
    let reproducer: String = text
        .lines()
        .skip_while(|l| !l.starts_with("p "))
        .map(|l| format!("{l}\n"))
        .collect();
    let dir = TempDir::new().unwrap();
    let file = write(&dir, "repro.txt", &reproducer);
    assert_eq!(logpath(&["blocks", arg(&file)]).status.code(), Some(0));
}

#[test]
fn bench_csv() {
    let dir = TempDir::new().unwrap();
    let csv = dir.path().join("bench.csv");
    let args = [
        "bench",
        "--sizes",
        "32,16",
        "--seeds",
        "1,2",
        "--algo",
        "bounded,general,reference",
        "--no-timing",
        "--csv",
        arg(&csv),
    ];
    let out = logpath(&args);
    assert_eq!(out.status.code(), Some(0));
    let text = fs::read_to_string(&csv).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(
        lines[0],
        "n,seed,algo,highWater,steps,oracleCalls,pathWeight,wallMillis"
    );
    assert_eq!(lines.len(), 1 + 2 * 2 * 3);
    assert!(lines[1].starts_with("16,1,general,"));
    assert!(lines[1..].iter().all(|l| l.ends_with(",0")));
    assert!(String::from_utf8(out.stderr).unwrap().contains("C="));
    let again = logpath(&args);
    assert_eq!(again.status.code(), Some(0));
    assert_eq!(fs::read_to_string(&csv).unwrap(), text);
}
