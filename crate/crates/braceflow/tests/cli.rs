use std::path::{Path, PathBuf};
use std::process::{Command, Output};

const BIN: &str = env!("CARGO_BIN_EXE_braceflow");

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("fixtures")
        .join(name)
}

fn run(args: &[&str]) -> (i32, String, String) {
    let Output {
        status,
        stdout,
        stderr,
    } = Command::new(BIN).args(args).output().unwrap();
    (
        status.code().unwrap(),
        String::from_utf8(stdout).unwrap(),
        String::from_utf8(stderr).unwrap(),
    )
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn check_main_on_e1_passes() {
    let (code, out, _) = run(&["check-main", path_str(&fixture("e1.prelie"))]);
    assert_eq!(code, 0, "{out}");
    assert!(out.lines().any(|l| l == "CHECK theorem-main PASS"), "{out}");
    assert!(out.contains("A/ann(p^4) = Z/7^1"));
}

#[test]
fn corrupted_cayley_fails_with_witness() {
    let (code, out, _) = run(&["verify-brace", path_str(&fixture("z25_corrupt.brace"))]);
    assert_eq!(code, 1, "{out}");
    let fail = out
        .lines()
        .find(|l| l.contains(" FAIL "))
        .expect("a failing check");
    assert!(
        fail.contains("a=(") && fail.contains("b=(") && fail.contains("c=("),
        "{fail}"
    );
}

#[test]
fn intact_cayley_and_trivial_pass() {
    for f in ["z25.brace", "t0.brace"] {
        let (code, out, _) = run(&["verify-brace", path_str(&fixture(f))]);
        assert_eq!(code, 0, "{f}: {out}");
    }
}

/// Oracle values: alpha solves the unitriangular system by hand for p = 5,
/// giving (1, -2, 6, -21), and gamma (1, -2, 6, 0), reduced mod 125.
#[test]
fn coeffs_mod_125() {
    let (code, out, _) = run(&["coeffs", "alpha", "-p", "5", "-n", "3"]);
    assert_eq!(code, 0);
    assert!(
        out.starts_with("alpha_1 = 1\nalpha_2 = 123\nalpha_3 = 6\nalpha_4 = 104\n"),
        "{out}"
    );
    assert!(out.contains("CHECK alpha-1 PASS"));
    let (code, out, _) = run(&["coeffs", "gamma", "-p", "5", "-n", "3"]);
    assert_eq!(code, 0);
    assert!(
        out.starts_with("gamma_1 = 1\ngamma_2 = 123\ngamma_3 = 6\ngamma_4 = 0\n"),
        "{out}"
    );
}

#[test]
fn input_errors_exit_2() {
    let (code, _, err) = run(&[
        "verify-prelie",
        path_str(&fixture("order_too_large.prelie")),
    ]);
    assert_eq!(code, 2);
    assert!(err.contains("line 4") && err.contains("n < p - 1"), "{err}");
    let (code, _, err) = run(&["verify-brace", "/nonexistent/file.brace"]);
    assert_eq!(code, 2, "{err}");
    let (code, _, _) = run(&["no-such-command"]);
    assert_eq!(code, 2);
    let (code, _, _) = run(&["coeffs", "alpha", "-p", "4", "-n", "2"]);
    assert_eq!(code, 2);
    let (code, _, err) = run(&["verify-prelie", path_str(&fixture("t0.brace"))]);
    assert_eq!(code, 2, "{err}");
}

#[test]
fn non_nilpotent_is_rejected_by_flows() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("b.brace");
    let input = fixture("non_nilpotent.prelie");
    let (code, stdout, _) = run(&["flows", path_str(&input), "-o", path_str(&out)]);
    assert_eq!(code, 1);
    assert!(
        stdout.contains("CHECK input.left-nilpotent FAIL"),
        "{stdout}"
    );
    let (code, _, err) = run(&[
        "--no-verify",
        "flows",
        path_str(&input),
        "-o",
        path_str(&out),
    ]);
    assert_eq!(code, 2);
    assert!(err.contains("not left nilpotent"), "{err}");
    assert!(!out.exists());
}

#[test]
fn flows_derive_reconstruct_chain() {
    let dir = tempfile::tempdir().unwrap();
    let flows = dir.path().join("a1.brace");
    let derived = dir.path().join("a1.derived.prelie");
    let rec = dir.path().join("e1.rec.brace");
    let a1 = fixture("a1.prelie");
    assert_eq!(run(&["flows", path_str(&a1), "-o", path_str(&flows)]).0, 0);
    let text = std::fs::read_to_string(&flows).unwrap();
    assert_eq!(text, "brace v1\np 5\nfactors 3\nflows\nsc 1 1 -> 5 1\n");
    assert_eq!(run(&["verify-brace", path_str(&flows)]).0, 0);

    let (code, out, _) = run(&["derive", path_str(&flows), "-o", path_str(&derived)]);
    assert_eq!(code, 0, "{out}");
    // A/ann(25) = Z/5, where every derived product vanishes
    let text = std::fs::read_to_string(&derived).unwrap();
    assert!(text.ends_with("prelie v1\np 5\nfactors 1\n"), "{text}");
    assert_eq!(run(&["verify-prelie", path_str(&derived)]).0, 0);

    let (code, out, _) = run(&[
        "reconstruct",
        path_str(&fixture("e1.prelie")),
        "-o",
        path_str(&rec),
    ]);
    assert_eq!(code, 0, "{out}");
    let text = std::fs::read_to_string(&rec).unwrap();
    assert!(text.contains("factors 3\nflows\nsc 1 1 -> "), "{text}");
    assert_eq!(run(&["verify-brace", path_str(&rec)]).0, 0);
}

#[test]
fn summary_file_and_determinism() {
    let dir = tempfile::tempdir().unwrap();
    let s1 = dir.path().join("s1");
    let s2 = dir.path().join("s2");
    let m1 = fixture("m1.prelie");
    let args = |s: &Path| -> Vec<String> {
        [
            "--seed",
            "7",
            "--samples",
            "500",
            "-s",
            path_str(s),
            "quoted-identities",
            path_str(&m1),
        ]
        .map(String::from)
        .to_vec()
    };
    let a: Vec<String> = args(&s1);
    let b: Vec<String> = args(&s2);
    let (c1, o1, _) = run(&a.iter().map(String::as_str).collect::<Vec<_>>());
    let (c2, o2, _) = run(&b.iter().map(String::as_str).collect::<Vec<_>>());
    assert_eq!((c1, c2), (0, 0));
    assert_eq!(o1, o2);
    let summary = std::fs::read_to_string(&s1).unwrap();
    assert_eq!(summary, std::fs::read_to_string(&s2).unwrap());
    assert!(summary.lines().all(|l| l.ends_with("=PASS")));
    assert!(summary.contains("sum-expansion=PASS\n"));
    assert!(o1.contains("[500 samples]"));
}

#[test]
fn selftest_quick_passes() {
    let (code, out, _) = run(&["selftest", "--quick"]);
    assert_eq!(code, 0, "{out}");
    assert_eq!(out.lines().filter(|l| l.starts_with("ACCEPT ")).count(), 8);
}

#[test]
fn fixtures_command_reproduces_golden_files() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(run(&["fixtures", "-o", path_str(dir.path())]).0, 0);
    for entry in std::fs::read_dir(fixture("")).unwrap() {
        let entry = entry.unwrap();
        let fresh = std::fs::read_to_string(dir.path().join(entry.file_name())).unwrap();
        assert_eq!(fresh, std::fs::read_to_string(entry.path()).unwrap());
    }
    let (code, out, _) = run(&["fixtures", "e2"]);
    assert_eq!(code, 0);
    assert!(out.contains("sc 1 1 -> 49 1"));
}
