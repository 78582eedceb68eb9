use magbound::spectral::CsrMatrix;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name)
}

fn magbound(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_magbound")).args(args).env_remove("MAGBOUNDS_JOBS").output().unwrap()
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn verify_writes_csv_and_plot() {
    let dir = tempfile::tempdir().unwrap();
    let (csv, svg) = (dir.path().join("out.csv"), dir.path().join("out.svg"));
    let cfg = fixture("verify_disc.json");
    let out = magbound(&["--config", s(&cfg), "--out", s(&csv), "--plot", s(&svg), "verify"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));

    let mut rdr = csv::Reader::from_path(&csv).unwrap();
    let header: Vec<String> = rdr.headers().unwrap().iter().map(str::to_string).collect();
    assert_eq!(header, magbound::harness::CSV_COLUMNS);
    let rows: Vec<csv::StringRecord> = rdr.records().collect::<Result<_, _>>().unwrap();
    assert!(rows.len() >= 8, "{} rows", rows.len());
    assert!(rows.iter().all(|r| &r[0] == "disc_b8"));

    let text = std::fs::read_to_string(&svg).unwrap();
    let doc = roxmltree::Document::parse(&text).unwrap();
    assert_eq!(doc.root_element().tag_name().name(), "svg");
    assert!(doc.descendants().any(|n| n.has_tag_name("polyline")));
}

#[test]
fn converge_reports_second_order() {
    let out = magbound(&["--config", s(&fixture("converge_disc.json")), "converge"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("case_id,bc,h,lambda1,order"));
    let orders: Vec<f64> =
        lines.filter_map(|l| l.split(',').nth(4)).filter_map(|o| o.parse().ok()).collect();
    assert!(!orders.is_empty());
    assert!(orders.iter().all(|o| (1.8..=2.2).contains(o)), "{orders:?}");
}

#[test]
fn solve_dumps_readable_matrices() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = fixture("verify_disc.json");
    let out = magbound(&["--config", s(&cfg), "--jobs", "1", "solve", "--count", "2", "--dump", s(dir.path())]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let line: serde_json::Value = serde_json::from_slice(out.stdout.split(|&b| b == b'\n').next().unwrap()).unwrap();
    assert_eq!(line["eigenvalues"].as_array().unwrap().len(), 2);

    let mut dumps: Vec<PathBuf> = std::fs::read_dir(dir.path()).unwrap().map(|e| e.unwrap().path()).collect();
    dumps.sort();
    assert_eq!(dumps.len(), 2);
    for p in &dumps {
        let m = CsrMatrix::read_binary(p).unwrap();
        assert!(m.dim() > 0);
        assert!(m.is_hermitian());
        let copy = dir.path().join("copy.bin");
        m.write_binary(&copy).unwrap();
        assert_eq!(std::fs::read(p).unwrap(), std::fs::read(&copy).unwrap());
    }
}

#[test]
fn invalid_configs_exit_with_two() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, r#"{"schema_version": 99, "cases": []}"#).unwrap();
    let out = magbound(&["--config", s(&bad), "verify"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("error"));

    let missing = magbound(&["--config", s(&dir.path().join("nope.json")), "verify"]);
    assert_eq!(missing.status.code(), Some(2));
}

#[test]
fn job_count_from_environment() {
    let cfg = fixture("verify_disc.json");
    let run = |jobs: &str| {
        Command::new(env!("CARGO_BIN_EXE_magbound"))
            .args(["--config", s(&cfg), "bounds"])
            .env("MAGBOUNDS_JOBS", jobs)
            .output()
            .unwrap()
    };
    let (a, b) = (run("1"), run("3"));
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(run("many").status.code(), Some(2));
}
