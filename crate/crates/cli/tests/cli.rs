use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use rankm_cli::commands::SCAN_HEADER;
use rankm_cli::instance::InstanceFile;

fn rankm(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_rankm")).args(args).env_remove("RANKM_THREADS").output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn golden(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(name)
}

fn scratch(name: &str, contents: &str) -> PathBuf {
    let path = Path::new(env!("CARGO_TARGET_TMPDIR")).join(name);
    std::fs::write(&path, contents).unwrap();
    path
}

fn toml_floats(text: &str, key: &str) -> Vec<f64> {
    let doc: toml::Table = text.parse().unwrap();
    doc[key].as_array().unwrap().iter().map(|x| x.as_float().unwrap()).collect()
}

#[test]
fn eig_golden_matches_quadratic_formula() {
    let path = golden("d2_rank1.toml");
    let nu1 = 101.0 + 9901f64.sqrt();
    for method in ["oracle", "secular"] {
        let o = rankm(&["eig", "--method", method, path.to_str().unwrap()]);
        assert!(o.status.success());
        let values = toml_floats(&stdout(&o), "eigenvalues");
        assert!((values[0] - nu1).abs() < 1e-12, "{method}: {}", values[0]);
        assert!((values[1] - (101.0 - 9901f64.sqrt())).abs() < 1e-12);
    }
}

#[test]
fn eig_unperturbed_prints_identity_and_round_trips() {
    let path = scratch("m0.toml", "dim = 3\nlambdas = [1e6, 2.5, 1]\n");
    let first = stdout(&rankm(&["eig", path.to_str().unwrap()]));
    let doc: toml::Table =
        first.lines().filter(|l| !l.starts_with('#')).collect::<Vec<_>>().join("\n").parse().unwrap();
    let vectors = doc["eigenvectors"].as_array().unwrap();
    for (k, v) in vectors.iter().enumerate() {
        let v: Vec<f64> = v.as_array().unwrap().iter().map(|x| x.as_float().unwrap()).collect();
        assert_eq!(v, (0..3).map(|j| if j == k { 1.0 } else { 0.0 }).collect::<Vec<_>>());
    }
    let values = toml_floats(&first, "eigenvalues");
    assert_eq!(values, vec![1e6, 2.5, 1.0]);

    let respun = scratch("m0_respun.toml", &format!("dim = 3\nlambdas = {}\n", rankm_cli::format::list(&values)));
    let second = stdout(&rankm(&["eig", respun.to_str().unwrap()]));
    assert_eq!(first, second);
    assert!(InstanceFile::load(&respun).is_ok());
}

#[test]
fn malformed_order_is_rejected_with_indices() {
    let path = scratch("bad_order.toml", "dim = 3\nlambdas = [\n  5.0,\n  1.0,\n  2.0,\n]\n");
    let o = rankm(&["eig", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("line 5") && err.contains("lambdas[1]") && err.contains("lambdas[2]"), "{err}");
}

#[test]
fn secular_method_requires_rank_one() {
    let path = scratch("rank2.toml", "dim = 2\nlambdas = [4, 1]\nvectors = [[1, 0], [0, 1]]\n");
    let o = rankm(&["eig", "--method", "secular", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(rankm(&["eig", path.to_str().unwrap()]).status.success());
}

#[test]
fn bounds_golden_passes_with_c1_640() {
    let o = rankm(&["bounds", golden("d2_rank1.toml").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let header = "i,j,observed,bound_rank1,bound_rank1_refined,bound_rankm,c_m,pass";
    let rows: Vec<&str> = text.lines().skip_while(|l| *l != header).skip(1).take_while(|l| !l.is_empty()).collect();
    assert_eq!(rows.len(), 4);
    for row in rows {
        let cols: Vec<&str> = row.split(',').collect();
        assert_eq!(cols[6], "640.0");
        assert_eq!(cols[7], "pass");
    }
    assert!(text.contains("# result: pass"));
}

#[test]
fn bounds_unperturbed_is_vacuous_pass() {
    let path = scratch("bounds_m0.toml", "dim = 4\nlambdas = [8, 4, 2, 1]\nvectors = []\n");
    let o = rankm(&["bounds", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(!stdout(&o).contains(",fail"));
}

#[test]
fn verify_smoke_and_fault_injection() {
    let ok = rankm(&["verify", "--d", "2", "--m", "1", "--seeds", "1"]);
    assert_eq!(ok.status.code(), Some(0));
    assert!(stdout(&ok).starts_with("5 instances, 0 failures"));

    let bad = rankm(&["verify", "--d", "2,5", "--m", "1,2", "--seeds", "2", "--perturb-bound", "0.9"]);
    assert_eq!(bad.status.code(), Some(1));
    let text = stdout(&bad);
    assert!(text.contains("failing seeds: 1,2"), "{text}");
    let repro = text.lines().find_map(|l| l.strip_prefix("reproduce: rankm ")).unwrap();
    let again = rankm(&repro.split(' ').collect::<Vec<_>>());
    assert_eq!(again.status.code(), Some(1));
}

#[test]
fn verify_output_is_thread_count_independent() {
    let args = ["verify", "--d", "3,10", "--m", "0,2,3", "--seeds", "3"];
    let one = rankm(&[&["--threads", "1"], &args[..]].concat());
    let four = rankm(&[&["--threads", "4"], &args[..]].concat());
    assert_eq!(stdout(&one), stdout(&four));
}

fn parse_csv(text: &str) -> (Vec<String>, Vec<Vec<String>>, Vec<String>) {
    let mut lines = text.lines();
    let header = lines.next().unwrap().split(',').map(String::from).collect();
    let (comments, rows): (Vec<&str>, Vec<&str>) = lines.partition(|l| l.starts_with('#'));
    let rows = rows.iter().map(|l| l.split(',').map(String::from).collect()).collect();
    (header, rows, comments.into_iter().map(String::from).collect())
}

#[test]
fn scan_csv_schema() {
    let o = rankm(&["scan", "--d", "2", "--m", "1", "--j", "2", "--lambda1", "1e2:1e8:7"]);
    assert!(o.status.success());
    let (header, rows, comments) = parse_csv(&stdout(&o));
    assert_eq!(header.join(","), SCAN_HEADER);
    assert_eq!(header, ["d", "m", "j", "lambda1", "ratio", "observed", "bound_rankm", "bound_rank1", "seed"]);
    assert_eq!(rows.len(), 7);
    for row in &rows {
        assert_eq!(row.len(), 9);
        for field in &row[3..8] {
            field.parse::<f64>().unwrap();
        }
    }
    let slope: f64 = comments[0].strip_prefix("# slope: ").unwrap().split(' ').next().unwrap().parse().unwrap();
    assert!((slope + 0.5).abs() < 0.05, "{slope}");
}

#[test]
fn scan_j_last_and_realizations() {
    let o = rankm(&["scan", "--d", "10", "--m", "2", "--j", "last", "--realizations", "3", "--seed", "4"]);
    let (_, rows, comments) = parse_csv(&stdout(&o));
    assert_eq!(rows.len(), 21);
    assert!(rows.iter().all(|r| r[2] == "10"));
    let seeds: Vec<&str> = rows.iter().map(|r| r[8].as_str()).collect();
    assert_eq!(&seeds[..7], ["4"; 7]);
    assert_eq!(&seeds[14..], ["6"; 7]);
    assert_eq!(comments.len(), 3);
}

#[test]
fn scan_two_point_grid_reports_insufficient_points() {
    let o = rankm(&["scan", "--d", "2", "--m", "1", "--lambda1", "1e2:1e8:2"]);
    assert_eq!(o.status.code(), Some(0));
    let (_, rows, comments) = parse_csv(&stdout(&o));
    assert_eq!(rows.len(), 2);
    assert_eq!(comments, ["# slope: insufficient points"]);
}

#[test]
fn scan_with_fixed_vectors() {
    let o = rankm(&["scan", "--fixed", golden("d2_rank1.toml").to_str().unwrap(), "--lambda1", "1e1:1e8:8"]);
    assert!(o.status.success());
    let (_, rows, _) = parse_csv(&stdout(&o));
    for row in rows {
        let l1: f64 = row[3].parse().unwrap();
        let observed: f64 = row[5].parse().unwrap();
        let s = l1.sqrt() * (1.0 - 1.0 / l1 - (1.0 - 1.0 / l1 + 1.0 / (l1 * l1)).sqrt());
        assert!((observed - s.abs() / (1.0 + s * s).sqrt()).abs() < 1e-12);
    }
}

#[test]
fn scan_rejects_unwritable_output() {
    let o = rankm(&["scan", "--d", "2", "--m", "1", "--out", "/nonexistent-dir/x.csv"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn scan_reproduces_archived_golden_csvs() {
    for (d, m) in [(2, 1), (5, 1), (10, 1), (5, 2), (10, 2)] {
        for j in ["2", "last"] {
            let archived = std::fs::read_to_string(golden(&format!("scan_d{d}_m{m}_j{j}.csv"))).unwrap();
            let o = rankm(&["scan", "--d", &d.to_string(), "--m", &m.to_string(), "--j", j, "--seed", "1"]);
            let (h1, r1, _) = parse_csv(&archived);
            let (h2, r2, _) = parse_csv(&stdout(&o));
            assert_eq!(h1, h2);
            assert_eq!(r1.len(), r2.len());
            for (a, b) in r1.iter().zip(&r2) {
                assert_eq!(a[..3], b[..3]);
                assert_eq!(a[8], b[8]);
                for k in 3..8 {
                    if a[k].is_empty() {
                        assert!(b[k].is_empty());
                        continue;
                    }
                    let (x, y): (f64, f64) = (a[k].parse().unwrap(), b[k].parse().unwrap());
                    assert!((x - y).abs() <= 1e-12 * x.abs().max(1e-300), "d={d} m={m} j={j}: {x} vs {y}");
                }
            }
        }
    }
}

mod schema {
    use clap::Parser;
    use proptest::prelude::*;
    use rankm_cli::args::{Cli, Command};
    use rankm_cli::commands::{scan_csv, SCAN_HEADER};

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn scan_csv_columns_are_stable(d in 2usize..12, m in 0usize..4, last in any::<bool>(), count in 1usize..6, seed in 0u64..1000) {
            let argv = ["rankm", "scan", "--d", &d.to_string(), "--m", &m.to_string(),
                "--j", if last { "last" } else { "2" }, "--lambda1", &format!("1:1e6:{count}"), "--seed", &seed.to_string()];
            let cli = Cli::try_parse_from(argv).unwrap();
            let Command::Scan(args) = cli.command else { unreachable!() };
            let csv = scan_csv(&args).unwrap();
            let mut lines = csv.lines();
            prop_assert_eq!(lines.next().unwrap(), SCAN_HEADER);
            let (comments, rows): (Vec<&str>, Vec<&str>) = lines.partition(|l| l.starts_with('#'));
            prop_assert_eq!(rows.len(), count);
            prop_assert_eq!(comments.len(), 1);
            prop_assert!(comments[0].starts_with("# slope: "));
            for row in rows {
                let cols: Vec<&str> = row.split(',').collect();
                prop_assert_eq!(cols.len(), 9);
                prop_assert_eq!(cols[0].parse::<usize>().unwrap(), d);
                prop_assert_eq!(cols[1].parse::<usize>().unwrap(), m);
                prop_assert_eq!(cols[2].parse::<usize>().unwrap(), if last { d } else { 2 });
                prop_assert_eq!(cols[7].is_empty(), m != 1);
                prop_assert_eq!(cols[8].parse::<u64>().unwrap(), seed);
                for c in &cols[3..7] {
                    prop_assert!(c.parse::<f64>().unwrap().is_finite());
                }
            }
        }
    }
}
