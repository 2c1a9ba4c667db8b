use std::path::Path;
use std::process::{Command, Output};

fn mdtree(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mdtree")).args(args).current_dir(dir).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn field(out: &str, key: &str) -> String {
    out.lines()
        .find_map(|l| l.strip_prefix(&format!("{key}\t")))
        .unwrap_or_else(|| panic!("no {key} in {out}"))
        .to_string()
}

#[test]
fn generate_then_analyse() {
    let dir = tempfile::tempdir().unwrap();
    let o = mdtree(
        &["generate", "--model", "pa", "--rho", "2", "--chi", "-1", "-n", "12", "--seed", "7", "--out", "t.txt"],
        dir.path(),
    );
    assert!(o.status.success(), "{o:?}");
    let md = mdtree(&["md", "t.txt", "--witness"], dir.path());
    assert!(md.status.success());
    let out = stdout(&md);
    assert_eq!(field(&out, "beta"), field(&out, "brute_force_beta"));
    let fr = mdtree(&["fringe", "t.txt", "--property", "pl", "--histogram"], dir.path());
    assert!(fr.status.success());
    // fringe leaves are the degree-one vertices other than a degree-one root
    let pl: usize = field(&stdout(&fr), "pl").parse().unwrap();
    let leaves: usize = field(&out, "leaves").parse().unwrap();
    assert!(pl == leaves || pl + 1 == leaves);
}

#[test]
fn generate_is_reproducible_and_respects_force() {
    let dir = tempfile::tempdir().unwrap();
    for model in ["gw", "uniform", "cmj"] {
        let mut args = vec!["generate", "--model", model, "-n", "30", "--seed", "3"];
        if model == "cmj" {
            args.extend(["--rho", "1", "--chi", "1"]);
        }
        let a = mdtree(&args, dir.path());
        let b = mdtree(&args, dir.path());
        assert!(a.status.success(), "{model}: {a:?}");
        assert_eq!(a.stdout, b.stdout);
        assert_eq!(stdout(&a).lines().next(), Some("30"));
    }
    let args = ["generate", "--model", "uniform", "-n", "5", "--seed", "1", "--out", "u.txt"];
    assert!(mdtree(&args, dir.path()).status.success());
    let again = mdtree(&args, dir.path());
    assert_eq!(again.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&again.stderr).contains("--force"));
    let mut forced = args.to_vec();
    forced.push("--force");
    assert!(mdtree(&forced, dir.path()).status.success());
}

#[test]
fn flags_are_validated() {
    let dir = tempfile::tempdir().unwrap();
    for args in [
        vec!["generate", "--model", "uniform", "-n", "5"],
        vec!["generate", "--model", "pa", "-n", "5", "--seed", "1"],
        vec!["generate", "--model", "uniform", "-n", "5", "--seed", "1", "--rho", "2"],
        vec!["md", "missing.txt"],
        vec!["constant", "--model", "mary"],
        vec!["constant", "--model", "general", "--rho", "2", "--chi", "0"],
        vec!["experiment", "--model", "uniform", "-n", "10", "--trials", "0", "--seed", "1"],
        vec![
            "experiment",
            "--model",
            "pa",
            "--rho",
            "3",
            "--chi",
            "0",
            "-n",
            "10",
            "--trials",
            "2",
            "--seed",
            "1",
            "--compare",
        ],
        vec!["verify", "nothing"],
        vec!["constant", "--model", "rrt", "--unknown"],
    ] {
        let o = mdtree(&args, dir.path());
        assert!(!o.status.success(), "{args:?} should fail");
        assert!(!o.stderr.is_empty());
    }
}

#[test]
fn constants_print_value_error_and_method() {
    let dir = tempfile::tempdir().unwrap();
    for (args, expected, method) in [
        (vec!["constant", "--model", "mary", "--m", "2"], 0.1096868681, "closed_form"),
        (vec!["constant", "--model", "rrt"], 0.263709059, "quadrature"),
        (vec!["constant", "--model", "rich", "--rho", "1"], 0.50120, "quadrature"),
        (vec!["constant", "--model", "general", "--rho", "3", "--chi", "-1"], 0.15812, "quadrature"),
        (vec!["constant", "--model", "gw"], 0.14076941, "closed_form"),
        (vec!["constant", "--model", "rich", "--rho", "0.1", "--tol", "1e-6"], 0.87501, "quadrature"),
    ] {
        let o = mdtree(&args, dir.path());
        assert!(o.status.success(), "{args:?}");
        let out = stdout(&o);
        let value: f64 = field(&out, "value").parse().unwrap();
        assert!((value - expected).abs() < 5e-5, "{args:?}: {value}");
        assert!(field(&out, "abs_error_estimate").parse::<f64>().unwrap() >= 0.0);
        assert_eq!(field(&out, "method"), method);
    }
}

#[test]
fn constant_reads_pmf_files() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("binary.pmf"), "# p0 p1 p2\n0.5 0 0.5\n").unwrap();
    let o = mdtree(&["constant", "--model", "gw", "--pmf", "binary.pmf"], dir.path());
    assert!(o.status.success());
    assert!((field(&stdout(&o), "value").parse::<f64>().unwrap() - 0.125).abs() < 1e-15);
}

#[test]
fn experiment_compare_sets_exit_code() {
    let dir = tempfile::tempdir().unwrap();
    let pass = mdtree(
        &[
            "experiment",
            "--model",
            "pa",
            "--rho",
            "2",
            "--chi",
            "-1",
            "-n",
            "500",
            "--trials",
            "100",
            "--seed",
            "1",
            "--compare",
            "--out",
            "bst.csv",
        ],
        dir.path(),
    );
    assert!(pass.status.success(), "{pass:?}");
    assert_eq!(field(&stdout(&pass), "compare"), "PASS");
    let csv = std::fs::read_to_string(dir.path().join("bst.csv")).unwrap();
    assert!(csv.starts_with("model,rho,chi,n,trials,seed,mean,stddev,stderr,ci_lo,ci_hi,constant,abs_diff\n"));
    assert!(csv.lines().nth(1).unwrap().starts_with("pa,2"));

    // four-vertex trees are far from the limit at this tolerance
    let fail = mdtree(
        &[
            "experiment",
            "--model",
            "pa",
            "--rho",
            "2",
            "--chi",
            "-1",
            "-n",
            "4",
            "--trials",
            "400",
            "--seed",
            "1",
            "--compare",
            "--tol",
            "0.001",
        ],
        dir.path(),
    );
    assert_eq!(fail.status.code(), Some(1));
    assert_eq!(field(&stdout(&fail), "compare"), "FAIL");
}

#[test]
fn thread_count_does_not_change_output() {
    let dir = tempfile::tempdir().unwrap();
    let base = ["experiment", "--model", "uniform", "-n", "200", "--trials", "300", "--seed", "5"];
    let one = mdtree(&[&base[..], &["--threads", "1"]].concat(), dir.path());
    let four = mdtree(&[&base[..], &["--threads", "4"]].concat(), dir.path());
    let env = Command::new(env!("CARGO_BIN_EXE_mdtree"))
        .args(base)
        .env("MDTREE_THREADS", "3")
        .current_dir(dir.path())
        .output()
        .unwrap();
    assert!(one.status.success());
    assert_eq!(one.stdout, four.stdout);
    assert_eq!(one.stdout, env.stdout);
}

#[test]
fn json_output_and_statistics() {
    let dir = tempfile::tempdir().unwrap();
    let o = mdtree(
        &[
            "experiment",
            "--model",
            "pa",
            "--rho",
            "2",
            "--chi",
            "-1",
            "-n",
            "2000",
            "--trials",
            "50",
            "--seed",
            "2",
            "--stat",
            "fringe",
            "--fringe-size",
            "1",
            "--out",
            "f.json",
            "--compare",
            "--tol",
            "0.01",
        ],
        dir.path(),
    );
    assert!(o.status.success(), "{o:?}");
    let json = std::fs::read_to_string(dir.path().join("f.json")).unwrap();
    assert!(json.trim_start().starts_with('[') && json.contains("\"model\": \"pa\""), "{json}");
    let missing = mdtree(
        &["experiment", "--model", "uniform", "-n", "20", "--trials", "5", "--seed", "2", "--stat", "fringe"],
        dir.path(),
    );
    assert!(!missing.status.success());
}

#[test]
fn verify_constants_suite_passes() {
    let dir = tempfile::tempdir().unwrap();
    let o = mdtree(&["verify", "constants"], dir.path());
    assert!(o.status.success(), "{}", stdout(&o));
    let out = stdout(&o);
    for id in 1..=3 {
        assert!(out.contains(&format!("criterion  {id} PASS")), "{out}");
    }
}

#[test]
fn help_lists_every_flag() {
    let dir = tempfile::tempdir().unwrap();
    for (sub, flags) in [
        ("generate", &["--model", "--rho", "--chi", "--pmf", "-n", "--seed", "--out", "--force"][..]),
        ("md", &["--witness", "--cap"][..]),
        ("fringe", &["--property", "--histogram"][..]),
        ("constant", &["--model", "--rho", "--chi", "--m", "--pmf", "--tol"][..]),
        (
            "experiment",
            &[
                "--model",
                "--rho",
                "--chi",
                "--pmf",
                "-n",
                "--trials",
                "--seed",
                "--threads",
                "--stat",
                "--fringe-size",
                "--out",
                "--format",
                "--compare",
                "--tol",
                "--force",
            ][..],
        ),
        ("verify", &["--seed"][..]),
    ] {
        let out = stdout(&mdtree(&[sub, "--help"], dir.path()));
        for f in flags {
            assert!(out.contains(f), "{sub} --help misses {f}");
        }
    }
}
