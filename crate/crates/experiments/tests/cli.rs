use std::path::Path;
use std::process::{Command, Output};

fn intvol(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_intvol")).args(args).current_dir(dir).output().unwrap()
}

fn write(dir: &Path, name: &str, text: &str) {
    std::fs::write(dir.join(name), text).unwrap();
}

fn bodies(dir: &Path) {
    write(dir, "sq.txt", "d 2\nn 4\n0 0\n1 0\n0 1\n1 1\n");
    write(dir, "plus.txt", "d 2\nn 8\n0 0\n1 0\n0 1\n1 1\n0.5 0.49\n0.5 0.51\n8.5 0.49\n8.5 0.51\n");
    write(dir, "cube.txt", "# unit cube\nd 3\nn 8\n0 0 0\n1 0 0\n0 1 0\n1 1 0\n0 0 1\n1 0 1\n0 1 1\n1 1 1\n");
    write(dir, "seg.txt", "d 3\nn 2\n0 0 0\n5 0 0\n");
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn summary(csv: &str, key: &str) -> f64 {
    let line = csv.lines().find(|l| l.starts_with(&format!("# {key}="))).unwrap();
    line.split('=').nth(1).unwrap().split_whitespace().next().unwrap().parse().unwrap()
}

#[test]
fn help_and_version_exit_zero() {
    let dir = tempfile::tempdir().unwrap();
    let o = intvol(&["--help"], dir.path());
    assert_eq!(o.status.code(), Some(0));
    for sub in ["metric", "intrinsic", "hausdorff", "thm1", "thm2", "thm3", "lemma", "validate", "fibers"] {
        assert!(stdout(&o).contains(sub), "{sub} missing from help");
    }
    assert_eq!(intvol(&["--version"], dir.path()).status.code(), Some(0));
}

#[test]
fn usage_errors_exit_three() {
    let dir = tempfile::tempdir().unwrap();
    bodies(dir.path());
    assert_eq!(intvol(&["frobnicate"], dir.path()).status.code(), Some(3));
    assert_eq!(intvol(&["thm1", "-d", "3"], dir.path()).status.code(), Some(3));
    let both = ["metric", "--body-a", "cube.txt", "--body-b", "seg.txt", "--empty", "-d", "3", "-j", "2"];
    assert_eq!(intvol(&both, dir.path()).status.code(), Some(3));
    let wrong_dim = ["metric", "--body-a", "cube.txt", "--empty", "-d", "2", "-j", "2"];
    assert_eq!(intvol(&wrong_dim, dir.path()).status.code(), Some(3));
    assert_eq!(intvol(&["thm2", "-d", "3", "-j", "3", "--out", "x.csv"], dir.path()).status.code(), Some(3));
    assert_eq!(intvol(&["thm1", "-d", "9", "-j", "2", "--out", "x.csv"], dir.path()).status.code(), Some(3));
    assert_eq!(intvol(&["thm1", "-d", "3", "-j", "2", "--steps", "13", "--out", "x.csv"], dir.path()).status.code(), Some(3));
    assert_eq!(intvol(&["thm3", "-d", "3", "-j", "2", "--a0", "lots", "--out", "x.csv"], dir.path()).status.code(), Some(3));
    assert_eq!(intvol(&["fibers", "--body-a", "sq.txt", "--body-b", "sq.txt", "--plane", "xy", "--grid", "3", "--out", "f.csv"], dir.path()).status.code(), Some(3));
}

#[test]
fn io_errors_exit_four() {
    let dir = tempfile::tempdir().unwrap();
    bodies(dir.path());
    let o = intvol(&["hausdorff", "--body-a", "missing.txt", "--body-b", "sq.txt"], dir.path());
    assert_eq!(o.status.code(), Some(4));
    assert!(String::from_utf8_lossy(&o.stderr).contains("missing.txt"));
    let o = intvol(&["thm1", "-d", "3", "-j", "2", "--steps", "2", "--out", "no/such/dir/t.csv"], dir.path());
    assert_eq!(o.status.code(), Some(4));
}

#[test]
fn malformed_body_is_a_config_error() {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "bad.txt", "d 2\nn 1\n0 0 0\n");
    let o = intvol(&["hausdorff", "--body-a", "bad.txt", "--body-b", "bad.txt"], dir.path());
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn hausdorff_prints_the_distance() {
    let dir = tempfile::tempdir().unwrap();
    bodies(dir.path());
    let o = intvol(&["hausdorff", "--body-a", "sq.txt", "--body-b", "plus.txt"], dir.path());
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim().parse::<f64>().unwrap(), 7.5);
}

#[test]
fn metric_and_intrinsic_agree_on_the_empty_operand() {
    let dir = tempfile::tempdir().unwrap();
    bodies(dir.path());
    let flags = ["-j", "2", "--subspaces", "300", "--points", "10", "--seed", "4"];
    let mut metric = vec!["metric", "--body-a", "cube.txt", "--empty", "-d", "3"];
    metric.extend(flags);
    let mut intrinsic = vec!["intrinsic", "--body", "cube.txt"];
    intrinsic.extend(flags);
    let a = intvol(&metric, dir.path());
    let b = intvol(&intrinsic, dir.path());
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(stdout(&a), stdout(&b));
    let row: Vec<String> = stdout(&a).lines().nth(1).unwrap().split(',').map(String::from).collect();
    let (v, se): (f64, f64) = (row[0].parse().unwrap(), row[1].parse().unwrap());
    assert!((v - 3.0).abs() < 4.0 * se, "{v} +- {se}");
}

#[test]
fn metric_modes() {
    let dir = tempfile::tempdir().unwrap();
    bodies(dir.path());
    let base = ["metric", "--body-a", "cube.txt", "--body-b", "seg.txt", "-d", "3", "-j", "3", "--subspaces", "1", "--points", "20000", "--seed", "2"];
    let mut mc = base.to_vec();
    mc.extend(["--mode", "mc"]);
    let o = intvol(&mc, dir.path());
    assert_eq!(o.status.code(), Some(0));
    // The segment has zero volume, so the distance is the cube's volume.
    let v: f64 = stdout(&o).lines().nth(1).unwrap().split(',').next().unwrap().parse().unwrap();
    assert!((v - 1.0).abs() < 0.05, "{v}");
    let mut exact = base.to_vec();
    exact.extend(["--mode", "exact"]);
    assert_eq!(intvol(&exact, dir.path()).status.code(), Some(3));
}

#[test]
fn thm_runs_write_tables_and_plots() {
    let dir = tempfile::tempdir().unwrap();
    for (cmd, rows) in [("thm1", 4), ("thm2", 4), ("thm3", 4)] {
        let csv = format!("{cmd}.csv");
        let svg = format!("{cmd}.svg");
        let o = intvol(
            &[cmd, "-d", "3", "-j", "2", "--steps", "4", "--seed", "9", "--subspaces", "400", "--points", "10", "--out", &csv, "--svg", &svg],
            dir.path(),
        );
        assert_eq!(o.status.code(), Some(0), "{cmd}: {}", String::from_utf8_lossy(&o.stderr));
        let text = std::fs::read_to_string(dir.path().join(&csv)).unwrap();
        assert_eq!(text.lines().filter(|l| !l.starts_with('#')).count(), rows + 1, "{cmd}");
        let plot = std::fs::read_to_string(dir.path().join(&svg)).unwrap();
        let doc = roxmltree::Document::parse(&plot).unwrap();
        assert_eq!(doc.root_element().attribute("width"), Some("800"));
    }
}

#[test]
fn thm3_accepts_an_explicit_a0() {
    let dir = tempfile::tempdir().unwrap();
    let o = intvol(&["thm3", "-d", "3", "-j", "2", "--steps", "3", "--a0", "1", "--subspaces", "200", "--out", "t.csv"], dir.path());
    assert_eq!(o.status.code(), Some(0));
    let text = std::fs::read_to_string(dir.path().join("t.csv")).unwrap();
    let first = text.lines().nth(1).unwrap();
    let claimed: f64 = first.split(',').nth(3).unwrap().parse().unwrap();
    assert!((claimed - 0.125).abs() < 1e-15);
}

#[test]
fn lemma_rows_match_sample_count() {
    let dir = tempfile::tempdir().unwrap();
    let o = intvol(&["lemma", "-d", "5", "-j", "3", "--samples", "250", "--seed", "1", "--out", "l.csv"], dir.path());
    assert_eq!(o.status.code(), Some(0));
    let text = std::fs::read_to_string(dir.path().join("l.csv")).unwrap();
    assert_eq!(text.lines().filter(|l| !l.starts_with('#')).count(), 251);
}

#[test]
fn lemma_is_worker_independent() {
    let dir = tempfile::tempdir().unwrap();
    for w in ["1", "8"] {
        let out = format!("l{w}.csv");
        let o = intvol(&["lemma", "-d", "4", "-j", "2", "--samples", "2000", "--seed", "6", "--workers", w, "--out", &out], dir.path());
        assert_eq!(o.status.code(), Some(0));
    }
    let a = std::fs::read(dir.path().join("l1.csv")).unwrap();
    let b = std::fs::read(dir.path().join("l8.csv")).unwrap();
    assert_eq!(a, b);
}

#[test]
fn validate_writes_its_table_and_reruns_identically() {
    let dir = tempfile::tempdir().unwrap();
    let a = intvol(&["validate", "--seed", "0", "--out", "a.csv"], dir.path());
    let b = intvol(&["validate", "--seed", "0", "--out", "b.csv", "--workers", "4"], dir.path());
    assert_eq!(a.status.code(), b.status.code());
    assert!(matches!(a.status.code(), Some(0) | Some(2)));
    let ta = std::fs::read(dir.path().join("a.csv")).unwrap();
    assert_eq!(ta, std::fs::read(dir.path().join("b.csv")).unwrap());
    let text = String::from_utf8(ta).unwrap();
    assert!(text.starts_with("check,value,reference,std_error,tolerance,pass"));
    assert!(text.contains("\"flag(3,2)\",2.0000000000000000e0"));
}

#[test]
fn fibers_identical_bodies_give_a_zero_profile() {
    let dir = tempfile::tempdir().unwrap();
    bodies(dir.path());
    let o = intvol(&["fibers", "--body-a", "sq.txt", "--body-b", "sq.txt", "--plane", "e1e2", "--grid", "50", "--out", "f.csv"], dir.path());
    assert_eq!(o.status.code(), Some(0));
    let text = std::fs::read_to_string(dir.path().join("f.csv")).unwrap();
    assert_eq!(summary(&text, "diff_mass"), 0.0);
    assert_eq!(summary(&text, "max_diff_length"), 0.0);
}

#[test]
fn fibers_report_mass_outside_the_tube() {
    let dir = tempfile::tempdir().unwrap();
    bodies(dir.path());
    let run = |grid: &str, out: &str| {
        let o = intvol(&["fibers", "--body-a", "plus.txt", "--body-b", "sq.txt", "--plane", "e1e2", "--grid", grid, "--out", out], dir.path());
        assert_eq!(o.status.code(), Some(0));
        std::fs::read_to_string(dir.path().join(out)).unwrap()
    };
    let coarse = run("100", "c.csv");
    let fine = run("1000", "f.csv");
    // Bridging trapezoid between the square and the needle tip, minus the tube strip.
    let expected = 7.5 * 1.02 / 2.0 - 7.5 * 0.02;
    for text in [&coarse, &fine] {
        assert!((summary(text, "out_of_tube_mass") - expected).abs() < 1e-3);
        assert!(summary(text, "max_diff_length") <= 8.0 + 2e-9);
    }
    for key in ["diff_mass", "out_of_tube_mass", "diff_measure", "tube_measure"] {
        let (a, b) = (summary(&coarse, key), summary(&fine, key));
        assert!((a - b).abs() <= 0.05 * b.abs(), "{key}: {a} vs {b}");
    }
}

#[test]
fn fibers_reject_a_base_body_that_sticks_out() {
    let dir = tempfile::tempdir().unwrap();
    bodies(dir.path());
    let o = intvol(&["fibers", "--body-a", "sq.txt", "--body-b", "plus.txt", "--plane", "e1e2", "--grid", "10", "--out", "f.csv"], dir.path());
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn fibers_on_a_random_plane_in_three_dimensions() {
    let dir = tempfile::tempdir().unwrap();
    bodies(dir.path());
    write(dir.path(), "cube_plus.txt", "d 3\nn 10\n0 0 0\n1 0 0\n0 1 0\n1 1 0\n0 0 1\n1 0 1\n0 1 1\n1 1 1\n6 0.5 0.5\n6 0.5 0.55\n");
    write(dir.path(), "needle.txt", "d 3\nn 3\n0.5 0.5 0.5\n6 0.5 0.5\n6 0.5 0.55\n");
    let o = intvol(
        &["fibers", "--body-a", "cube_plus.txt", "--body-b", "cube.txt", "--plane", "random:3", "--grid", "40", "--out", "f.csv", "--axis", "1,0,0", "--tube", "needle.txt"],
        dir.path(),
    );
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let text = std::fs::read_to_string(dir.path().join("f.csv")).unwrap();
    assert_eq!(text.lines().filter(|l| !l.starts_with('#')).count(), 41);
    assert!(summary(&text, "diff_mass") > 0.0);
}
