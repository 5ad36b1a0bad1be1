use std::path::Path;

use dualrisk::cli::{self, EXIT_OK, EXIT_USAGE, EXIT_VERIFY_FAILED};
use dualrisk::repro;

fn run(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let mut full = vec!["dualrisk"];
    full.extend_from_slice(args);
    let code = cli::run(full, &mut out, &mut err);
    (
        code,
        String::from_utf8(out).unwrap(),
        String::from_utf8(err).unwrap(),
    )
}

fn write(dir: &Path, name: &str, body: &str) -> String {
    let path = dir.join(name);
    std::fs::write(&path, body).unwrap();
    path.to_string_lossy().into_owned()
}

#[test]
fn golden_tables_match() {
    let golden = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden");
    for table in repro::all_tables().unwrap() {
        let expected = std::fs::read(golden.join(format!("{}.csv", table.name))).unwrap();
        let got = repro::to_csv(&table).unwrap();
        assert!(
            got == expected,
            "{}.csv differs from the golden copy:\n{}",
            table.name,
            String::from_utf8_lossy(&got)
        );
    }
}

#[test]
fn golden_tables_hold_the_worked_numbers() {
    let golden = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden");
    let read = |name: &str| std::fs::read_to_string(golden.join(name)).unwrap();
    let divergence = read("divergence.csv");
    assert!(divergence.contains("dual moment 2 A,25/12,"));
    assert!(divergence.contains("dual moment 2 B,23/12,"));
    let moments = read("moments.csv");
    assert!(moments.contains("order 3,central moment 2 D,31/18,"));
    assert!(moments.contains("order 3,central moment 2 C,3/2,"));
    let portfolio = read("portfolio.csv");
    for lottery in ["[2 2]", "[2 2 4 8]", "[4 4 6 6 10 10 12 12]"] {
        assert!(
            portfolio.contains(&format!("portfolio price lottery,{lottery},")),
            "{lottery}"
        );
    }
    assert!(read("protection.csv").contains("-3/8"));
}

#[test]
fn eval_prints_exact_values() {
    let dir = tempfile::tempdir().unwrap();
    let a = write(dir.path(), "a.txt", "0 1/6\n3 5/6\n");
    let (code, out, _) = run(&["eval", &a, "--weighting", "quadratic:beta=1"]);
    assert_eq!(code, EXIT_OK);
    assert!(
        out.lines()
            .any(|l| l.starts_with("V ") && l.contains("25/12")),
        "{out}"
    );

    let point = write(dir.path(), "p.txt", "7 1\n");
    let (_, out, _) = run(&["eval", &point, "-w", "dualpower:m=3"]);
    for k in 1..=4 {
        let line = out
            .lines()
            .find(|l| l.starts_with(&format!("dual moment {k}")))
            .unwrap();
        assert!(line.split_whitespace().nth(3) == Some("7"), "{line}");
    }
    assert!(out
        .lines()
        .filter(|l| l.starts_with("central moment"))
        .all(|l| l.contains(" 0 ")));
}

#[test]
fn parse_errors_report_lines_and_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let bad = write(dir.path(), "bad.txt", "1 1/2\n2 x\n");
    let (code, _, err) = run(&["eval", &bad]);
    assert_eq!(code, EXIT_USAGE);
    assert!(err.contains("line 2"), "{err}");
    let good = write(dir.path(), "good.txt", "1 1\n");
    let (code, _, err) = run(&["eval", &good, "-w", "nonsense"]);
    assert_eq!(code, EXIT_USAGE);
    assert!(err.contains("nonsense"), "{err}");
    let (code, _, _) = run(&["frobnicate"]);
    assert_eq!(code, EXIT_USAGE);
}

#[test]
fn dominance_reports() {
    let dir = tempfile::tempdir().unwrap();
    let a = write(dir.path(), "a.txt", "0 1/6\n3 5/6\n");
    let b = write(dir.path(), "b.txt", "1 1/6\n2 1/2\n4 1/3\n");
    let (code, out, _) = run(&["dominance", &a, &b, "--degree", "3", "--kind", "dual"]);
    assert_eq!(code, EXIT_OK);
    assert!(
        out.contains("fails") && out.contains("dual moment 2"),
        "{out}"
    );
    let (_, out, _) = run(&["dominance", &a, &b, "--degree", "3", "--kind", "primal"]);
    assert!(out.contains("holds"), "{out}");
    for degree in ["1", "2", "3", "4"] {
        let (_, out, _) = run(&["dominance", &a, &a, "--degree", degree]);
        assert!(out.contains("holds"), "{out}");
    }
}

#[test]
fn pairgen_regenerates_the_worked_pairs() {
    let dir = tempfile::tempdir().unwrap();
    let cases = [
        (
            "2",
            "1 1/2\n2 1/2\n",
            "2",
            "1/2 1/2\n5/2 1/2\n",
            "3/2 1/2\n3/2 1/2\n",
        ),
        (
            "3",
            "1 1/3\n2 1/3\n4 1/3\n",
            "6",
            "5/6 1/3\n7/3 1/3\n23/6 1/3\n",
            "7/6 1/3\n5/3 1/3\n25/6 1/3\n",
        ),
        (
            "4",
            "1 1/4\n2 1/4\n4 1/4\n7 1/4\n",
            "4",
            "3/4 1/4\n11/4 1/4\n13/4 1/4\n29/4 1/4\n",
            "5/4 1/4\n5/4 1/4\n19/4 1/4\n27/4 1/4\n",
        ),
    ];
    for (order, base, big_m, c, d) in cases {
        let base = write(dir.path(), &format!("base{order}.txt"), base);
        let out = dir.path().join(format!("order{order}"));
        let out_s = out.to_string_lossy().into_owned();
        let (code, _, err) = run(&[
            "pairgen", "--order", order, "--base", &base, "--M", big_m, "--out", &out_s,
        ]);
        assert_eq!(code, EXIT_OK, "{err}");
        assert_eq!(std::fs::read_to_string(out.join("C.txt")).unwrap(), c);
        assert_eq!(std::fs::read_to_string(out.join("D.txt")).unwrap(), d);
        let record = std::fs::read_to_string(out.join("provenance.json")).unwrap();
        let replayed = dualrisk::apportionment::Provenance::from_json(&record)
            .unwrap()
            .replay()
            .unwrap();
        assert_eq!(replayed.d_lottery().to_text(), d);
    }
}

#[test]
fn pairgen_random_is_deterministic_and_bad_m_is_explained() {
    let dir = tempfile::tempdir().unwrap();
    let mut bodies = Vec::new();
    for run_id in 0..2 {
        let out = dir.path().join(format!("r{run_id}"));
        let out_s = out.to_string_lossy().into_owned();
        let (code, _, _) = run(&[
            "pairgen", "--order", "5", "--random", "--seed", "17", "--out", &out_s,
        ]);
        assert_eq!(code, EXIT_OK);
        bodies.push(
            ["C.txt", "D.txt", "provenance.json"].map(|f| std::fs::read(out.join(f)).unwrap()),
        );
    }
    assert_eq!(bodies[0], bodies[1]);

    let out_s = dir.path().join("bad").to_string_lossy().into_owned();
    let (code, _, err) = run(&[
        "pairgen", "--order", "2", "--n", "2", "--M", "1", "--out", &out_s,
    ]);
    assert_eq!(code, EXIT_USAGE);
    assert!(err.contains("ranking") && err.contains("--M"), "{err}");
}

#[test]
fn verify_writes_replay_records() {
    let dir = tempfile::tempdir().unwrap();
    let out_s = dir.path().to_string_lossy().into_owned();
    let (code, out, _) = run(&[
        "verify",
        "--theorem",
        "5",
        "--order",
        "5",
        "--trials",
        "10",
        "--seed",
        "3",
        "--out",
        &out_s,
    ]);
    assert_eq!(code, EXIT_OK);
    assert!(out.contains("PASS"));
    assert!(dir.path().join("verify-theorem5-seed3.json").exists());

    let (code, out, _) = run(&[
        "verify",
        "--theorem",
        "2",
        "--trials",
        "3",
        "--weighting",
        "quadratic:beta=1/2",
        "--out",
        &out_s,
    ]);
    assert_eq!(code, EXIT_OK);
    assert!(out.contains("3 vacuous"), "{out}");

    let (code, _, _) = run(&["verify", "--theorem", "7", "--out", &out_s]);
    assert_eq!(code, EXIT_USAGE);
    assert_ne!(EXIT_VERIFY_FAILED, EXIT_OK);
}

#[test]
fn repro_honours_the_output_variable() {
    let dir = tempfile::tempdir().unwrap();
    let target = dir.path().join("from-env");
    std::env::set_var(cli::OUT_ENV, &target);
    let (code, _, _) = run(&["repro"]);
    std::env::remove_var(cli::OUT_ENV);
    assert_eq!(code, EXIT_OK);
    for name in ["divergence", "moments", "portfolio", "protection"] {
        assert!(target.join(format!("{name}.csv")).exists(), "{name}");
    }
}

#[test]
fn protect_and_portfolio_commands() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(
        dir.path(),
        "sp.cfg",
        "wealth = 20\nloss = 10\nepsilon = 2\neffort = power\np0 = 0.6\na = 0.5\ncalibrate = true\neffort_max = 5\nweighting = dualpower:m=3\n",
    );
    let (code, out, err) = run(&["protect", &cfg]);
    assert_eq!(code, EXIT_OK, "{err}");
    assert!(out.starts_with("section,quantity,exact,decimal\n"));
    assert!(out.contains("effect,direction,more effort,"));
    assert!(out.contains("-3/8"));

    let (code, out, _) = run(&["portfolio", "--order", "3", "--prices", "1,3,5,7"]);
    assert_eq!(code, EXIT_OK);
    assert!(
        out.contains("[2 2 4 8]") && out.contains("straddle at 4"),
        "{out}"
    );
}
