use std::process::Command;

use fraclap::cli::{parse_csv, run_with, Cell};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_fraclap"))
}

fn call(args: &[&str]) -> (i32, String, String) {
    let mut o = Vec::new();
    let mut e = Vec::new();
    let mut v = vec!["fraclap".to_string()];
    v.extend(args.iter().map(|s| s.to_string()));
    let c = run_with(v, &mut o, &mut e);
    (c, String::from_utf8(o).unwrap(), String::from_utf8(e).unwrap())
}

#[test]
fn binary_exit_codes() {
    let ok = bin().args(["constants", "--alpha", "1.5"]).output().unwrap();
    assert_eq!(ok.status.code(), Some(0));
    let bad = bin().args(["apply", "--rep", "standard", "--alpha", "2.5"]).output().unwrap();
    assert_eq!(bad.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&bad.stderr).contains("alpha"));
    let usage = bin().args(["nonsense"]).output().unwrap();
    assert_eq!(usage.status.code(), Some(2));
    let st = bin().args(["selftest"]).output().unwrap();
    assert_eq!(st.status.code(), Some(0));
    let fault = bin().args(["selftest", "--inject-fault", "flcore"]).output().unwrap();
    assert_eq!(fault.status.code(), Some(1));
    let text = String::from_utf8_lossy(&fault.stdout);
    assert!(text.lines().any(|l| l.starts_with("FAIL flcore/")));
    assert!(!text.lines().any(|l| l.starts_with("FAIL constants/")));
}

#[test]
fn selftest_filter() {
    let (c, o, _) = call(&["selftest", "--filter", "potentials"]);
    assert_eq!(c, 0);
    assert!(o.lines().filter(|l| l.starts_with("PASS")).all(|l| l.contains("potentials/")));
    assert_eq!(call(&["selftest", "--filter", "nothing-matches"]).0, 2);
}

#[test]
fn config_file_and_override() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    std::fs::write(&cfg, "# dispersion settings\ndelta = 1.05\na = 1.5\nkh_max = 2\nsamples = 5\nlimit = true\n").unwrap();
    let cfg = cfg.to_str().unwrap();
    let (c, o, e) = call(&["--config", cfg, "dispersion"]);
    assert_eq!(c, 0, "{e}");
    let t = parse_csv(&o).unwrap();
    assert_eq!(t.header, ["kh", "omega2", "omega2_limit"]);
    assert_eq!(t.rows.len(), 5);
    assert_eq!(t.rows[4][0], Cell::Num(2.0));
    // explicit flags win over the file
    let (c, o, _) = call(&["dispersion", "--config", cfg, "--samples", "3"]);
    assert_eq!(c, 0);
    assert_eq!(parse_csv(&o).unwrap().rows.len(), 3);
    let bad = dir.path().join("bad.cfg");
    std::fs::write(&bad, "delta = 1.05\na = 1.5\nwhatever = 3\n").unwrap();
    assert_eq!(call(&["--config", bad.to_str().unwrap(), "dispersion"]).0, 2);
}

#[test]
fn out_file_matches_stdout() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("eig.csv");
    let args = ["eig", "--alpha", "1.3", "--rep", "order-m", "--m", "2", "--samples", "3"];
    let (_, o, _) = call(&args);
    let mut with_out = args.to_vec();
    let p = path.to_str().unwrap();
    with_out.extend(["--out", p]);
    let (c, o2, _) = call(&with_out);
    assert_eq!(c, 0);
    assert!(o2.is_empty());
    assert_eq!(std::fs::read_to_string(&path).unwrap(), o);
}

#[test]
fn deterministic_output() {
    let args = ["apply", "--alpha", "0.8", "--samples", "4", "--rep", "order-m", "--m", "1"];
    let a = call(&args).1;
    let b = call(&args).1;
    assert_eq!(a, b);
    let t = parse_csv(&a).unwrap();
    for row in &t.rows {
        if let Cell::Num(d) = row[3] {
            assert!(d < 1e-9, "{a}");
        } else {
            panic!("missing oracle column");
        }
    }
}

#[test]
fn constants_columns() {
    let (_, o, _) = call(&["constants", "--n", "3", "--alpha", "2.5", "--m", "2"]);
    let t = parse_csv(&o).unwrap();
    assert_eq!(t.header, ["n", "alpha", "m", "U", "V", "A", "C_general", "C_standard", "A_delta", "regime"]);
    assert_eq!(t.rows[0][8], Cell::Empty);
    assert_eq!(t.rows[0][9], Cell::Text("fractional".into()));
    let (_, p, _) = call(&["--format", "pretty", "constants", "--n", "3", "--alpha", "2.5", "--m", "2"]);
    assert!(p.lines().nth(1).unwrap().starts_with('-'));
}

#[test]
fn stiffness_file_eigenvalues() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("v.csv");
    std::fs::write(&path, "1,-1\n").unwrap();
    let (c, o, e) = call(&["eig", "--alpha", "1", "--k-min", "1", "--k-max", "1", "--samples", "1", "--stiffness", path.to_str().unwrap()]);
    assert_eq!(c, 0, "{e}");
    let t = parse_csv(&o).unwrap();
    match t.rows[0][1] {
        Cell::Num(v) => assert!((v + std::f64::consts::PI).abs() < 1e-10),
        _ => panic!(),
    }
    std::fs::write(&path, "1,0\n0,1\n").unwrap();
    assert_eq!(call(&["eig", "--alpha", "1", "--stiffness", path.to_str().unwrap()]).0, 2);
}

#[test]
fn converge_table() {
    let (c, o, _) = call(&["converge", "--delta", "1.5", "--m", "2", "--a-values", "2,1.5,1.1"]);
    assert_eq!(c, 0);
    let t = parse_csv(&o).unwrap();
    assert_eq!(t.rows.len(), 3);
    assert_eq!(call(&["converge", "--delta", "1.5", "--a-values", "2,x"]).0, 2);
}
