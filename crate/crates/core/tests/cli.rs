use std::path::Path;
use std::process::{Command, Output};

use korenblum::harness::VerificationReport;
use korenblum::io::{parse_values, read_samples, read_series, write_series};
use korenblum::{monomial_norm, TaylorSeries, WeightExponent};

fn run(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_korenblum"))
        .args(args)
        .current_dir(dir)
        .env("KORENBLUM_THREADS", "1")
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn norm_of_a_monomial() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("z3.csv"), "index,re,im\n3,1,0\n").unwrap();
    let o = run(&["norm", "z3.csv", "--mu", "1.5"], dir.path());
    assert!(o.status.success());
    let v: f64 = stdout(&o).trim().parse().unwrap();
    let exact = monomial_norm(3, WeightExponent::new(1.5).unwrap());
    assert!((v - exact).abs() <= 1e-9 * exact);
}

#[test]
fn project_and_transform_files() {
    let dir = tempfile::tempdir().unwrap();
    let f = TaylorSeries::from_real(&[1.0, -2.0, 0.5, 3.0, 0.25, -1.0]).unwrap();
    write_series(&dir.path().join("f.json"), &f).unwrap();

    let o = run(&["project", "f.json", "--n", "2"], dir.path());
    assert!(o.status.success());
    let p = parse_values(&stdout(&o)).unwrap();
    assert_eq!(TaylorSeries::new(p).unwrap(), f.truncated(2));

    assert!(run(&["transform", "f.json", "--out", "x.json"], dir.path()).status.success());
    let x = read_samples(&dir.path().join("x.json")).unwrap();
    assert_eq!(x.values().len(), 8);
    assert!(run(&["invtransform", "x.json", "--out", "g.json"], dir.path()).status.success());
    let g = read_series(&dir.path().join("g.json")).unwrap();
    for (a, b) in g.coeffs().iter().zip(f.coeffs()) {
        assert!((a - b).norm() < 1e-14);
    }
}

#[test]
fn corpus_directory() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(
        dir.path().join("corpus.toml"),
        "level_max = 4\nseed = 3\n\n[[families]]\nkind = \"BINOMIAL_POLE\"\nparams = [1.0]\n\n\
         [[families]]\nkind = \"MONOMIAL\"\nparams = [5.0]\n",
    )
    .unwrap();
    let o = run(&["corpus", "--spec", "corpus.toml", "--out", "out"], dir.path());
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let mut names: Vec<String> = std::fs::read_dir(dir.path().join("out"))
        .unwrap()
        .map(|e| e.unwrap().file_name().into_string().unwrap())
        .collect();
    names.sort();
    assert_eq!(names, ["000_BINOMIAL_POLE_1.json", "001_MONOMIAL_5.json"]);
    let geo = read_series(&dir.path().join("out").join(&names[0])).unwrap();
    assert_eq!(geo.degree(), 31);
}

#[test]
fn verify_reports_and_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("w.toml"), "[weights]\nj_max = 5000\nkothe_j_max = 100\n").unwrap();
    let o = run(
        &["verify", "--suite", "weights", "--config", "w.toml", "--report", "w.json"],
        dir.path(),
    );
    assert_eq!(o.status.code(), Some(0));
    let text = std::fs::read_to_string(dir.path().join("w.json")).unwrap();
    let report = VerificationReport::from_json(&text).unwrap();
    assert!(report.pass());
    assert_eq!(report.to_json().unwrap(), text);

    let o = run(
        &["verify", "--suite", "WEIGHTS", "--config", "w.toml", "--report", "w.csv", "--format", "csv"],
        dir.path(),
    );
    assert_eq!(o.status.code(), Some(0));
    let csv = std::fs::read_to_string(dir.path().join("w.csv")).unwrap();
    assert_eq!(csv.lines().count(), report.cases.len() + 1);

    std::fs::write(dir.path().join("strict.toml"), "[nuclearity]\nslope_tol = 1e-6\n").unwrap();
    let o = run(
        &["verify", "--suite", "NUCLEARITY", "--config", "strict.toml", "--report", "n.json"],
        dir.path(),
    );
    assert_eq!(o.status.code(), Some(1));

    let o = run(&["verify", "--suite", "NOPE", "--report", "x.json"], dir.path());
    assert_eq!(o.status.code(), Some(2));
    std::fs::write(dir.path().join("bad.toml"), "level_max = \"high\"\n").unwrap();
    let o = run(
        &["verify", "--suite", "WEIGHTS", "--config", "bad.toml", "--report", "x.json"],
        dir.path(),
    );
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn missing_file_names_the_path() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(&["norm", "absent.json", "--mu", "1"], dir.path());
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("absent.json"));
}
