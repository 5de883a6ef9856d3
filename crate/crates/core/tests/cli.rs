use std::path::PathBuf;
use std::process::Command;

use cullis::linvar::ConstraintSystem;
use cullis::verify::parse_counterexamples;
use cullis::Mat;

fn write(name: &str, body: &str) -> PathBuf {
    let path = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join(name);
    std::fs::write(&path, body).unwrap();
    path
}

/// Runs the CLI in process, returning (exit code, stdout, stderr).
fn run(args: &[&str]) -> (i32, String, String) {
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let argv = std::iter::once("cullis").chain(args.iter().copied());
    let code = cullis::cli::run(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

#[test]
fn det_prints_every_algorithm() {
    let file = write("tall.mat", "3 2 Q\n1 0\n0 1\n0 0\n");
    let (code, out, _) = run(&["det", "--file", file.to_str().unwrap(), "--algo", "all"]);
    assert_eq!(code, 0);
    assert_eq!(out, "injection: 1\nminor: 1\nlaplace: 1\n");
}

#[test]
fn wide_matrix_is_a_usage_error() {
    let file = write("wide.mat", "2 3 F5\n1 2 3\n4 0 1\n");
    let out = Command::new(env!("CARGO_BIN_EXE_cullis")).args(["det", "--file"]).arg(&file).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("n >= k"));
}

#[test]
fn parse_errors_name_the_line() {
    let file = write("bad.mat", "2 2 Q\n1 2\n3 x\n");
    let (code, out, err) = run(&["det", "--file", file.to_str().unwrap()]);
    assert_eq!(code, 2);
    assert!(out.is_empty());
    assert!(err.contains("line 3"), "{err}");
}

#[test]
fn unknown_flags_are_rejected() {
    let (code, _, err) = run(&["det", "--file", "x.mat", "--frobnicate"]);
    assert_eq!(code, 2);
    assert!(!err.is_empty());
    assert_eq!(run(&["--version"]).0, 0);
}

#[test]
fn exhaustive_codim_bound_passes() {
    let (code, out, _) = run(&["verify", "codim-bound", "--n", "4", "--k", "2", "--q", "2", "--mode", "exhaustive"]);
    assert_eq!(code, 0);
    assert!(out.contains("cases: 511\n") && out.ends_with("result: pass\n"), "{out}");
}

#[test]
fn output_does_not_depend_on_jobs() {
    let base = ["verify", "codim-bound", "--n", "4", "--k", "2", "--q", "2", "--mode", "sampled", "--samples", "2000"];
    let one = run(&[&base[..], &["--jobs", "1"]].concat());
    let four = run(&[&base[..], &["--jobs", "4"]].concat());
    assert_eq!(one, four);
    let lemmas = |jobs| run(&["verify", "lemmas", "--only", "det-agreement,striking-out", "--jobs", jobs]);
    assert_eq!(lemmas("1"), lemmas("3"));
    let bench = |jobs| {
        let (code, out, _) = run(&["bench", "--grid", "4x2,5x3", "--reps", "1", "--jobs", jobs]);
        // timings vary; everything else must not
        let stable: Vec<String> = out
            .lines()
            .map(|l| {
                l.split(',')
                    .enumerate()
                    .filter(|(i, _)| *i != 5 && *i != 6)
                    .map(|(_, c)| c)
                    .collect::<Vec<_>>()
                    .join(",")
            })
            .collect();
        (code, stable)
    };
    assert_eq!(bench("1"), bench("2"));
}

#[test]
fn seed_determines_sampled_output() {
    let at = |seed| {
        run(&[
            "verify",
            "codim-bound",
            "--n",
            "4",
            "--k",
            "2",
            "--q",
            "2",
            "--mode",
            "sampled",
            "--samples",
            "500",
            "--seed",
            seed,
            "--format",
            "records",
        ])
    };
    assert_eq!(at("7"), at("7"));
    assert_eq!(at("7").0, 0);
}

#[test]
fn records_round_trip_through_replay() {
    let (code, out, _) = run(&["verify", "z-condition", "--n", "4", "--k", "2", "--q", "2", "--format", "records"]);
    assert_eq!(code, 0);
    assert!(parse_counterexamples(&out).unwrap().is_empty());
    let file = write("clean.jsonl", &out);
    assert_eq!(run(&["verify", "replay", "--file", file.to_str().unwrap()]).0, 0);
    // the all-ones relation at (3,1,2) annihilates, so a record claiming otherwise reproduces
    let wrong = r#"{"record":"counterexample","key":"z","description":"","replay":{"kind":"row-relation","n":3,"k":1,"q":2,"z":[1,1,1],"expected":false}}"#;
    let file = write("wrong.jsonl", wrong);
    let (code, out, _) = run(&["verify", "replay", "--file", file.to_str().unwrap()]);
    assert_eq!(code, 1, "{out}");
}

#[test]
fn printed_varieties_reparse() {
    let file = write("plane.var", "space 3\n1 3 Q\n1 1/2 -3\nb: 2\n");
    let (code, out, _) = run(&["variety", "--file", file.to_str().unwrap(), "slice", "--pin", "1=1"]);
    assert_eq!(code, 0);
    let sliced: ConstraintSystem = out.parse().unwrap();
    assert_eq!(sliced.matrix(), &Mat::parse("2 3 Q\n1 1/2 -3\n1 0 0\n").unwrap());
    assert_eq!(sliced.to_string(), out);
    let file = write("plane-sliced.var", &out);
    let (code, out, _) = run(&["variety", "--file", file.to_str().unwrap(), "codim"]);
    assert_eq!((code, out.as_str()), (0, "codim: 2\ndim: 1\n"));
}

#[test]
fn variety_queries() {
    let file = write("line.var", "space 2 1\n1 2 F3\n1 1\nb: 0\n");
    let path = file.to_str().unwrap();
    let (code, out, _) = run(&["variety", "--file", path, "codim"]);
    assert_eq!((code, out.as_str()), (0, "codim: 1\ndim: 1\n"));
    let (code, out, _) = run(&["variety", "--file", path, "points"]);
    assert_eq!(code, 0);
    assert_eq!(out.lines().count(), 3);
    // x1 + x2 = 0 leaves det_{2,1} = x1 - x2 = 2 x1 nonzero
    let (code, out, _) = run(&["variety", "--file", path, "annihilates"]);
    assert_eq!((code, out.trim()), (0, "annihilates: false"));
}

#[test]
fn matroid_and_enum_queries() {
    let file = write("cols.mat", "2 3 F2\n1 0 1\n0 1 1\n");
    let path = file.to_str().unwrap();
    let (code, out, _) = run(&["matroid", "--file", path, "bases"]);
    assert_eq!(code, 0);
    assert_eq!(out.lines().count(), 3, "{out}");
    let (code, out, _) = run(&["matroid", "--file", path, "--dual", "rank", "1,2,3"]);
    assert_eq!((code, out.trim().ends_with('1')), (0, true), "{out}");
    let (code, out, _) = run(&["enum", "--n", "4", "--c", "2", "--q", "2", "--count"]);
    assert_eq!(code, 0);
    assert!(out.contains("count: 35"), "{out}");
}
