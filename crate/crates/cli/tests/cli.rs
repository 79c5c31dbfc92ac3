use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_opinion-sim"))
}

fn run(args: &[&str], cwd: &Path) -> Output {
    bin().args(args).current_dir(cwd).output().expect("spawn opinion-sim")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

/// Every file under `dir`, relative path -> bytes, sorted by path.
fn snapshot(dir: &Path) -> Vec<(String, Vec<u8>)> {
    let mut out = Vec::new();
    let mut stack = vec![dir.to_path_buf()];
    while let Some(d) = stack.pop() {
        for entry in fs::read_dir(&d).unwrap() {
            let p = entry.unwrap().path();
            if p.is_dir() {
                stack.push(p);
            } else {
                let rel = p.strip_prefix(dir).unwrap().display().to_string();
                out.push((rel, fs::read(&p).unwrap()));
            }
        }
    }
    out.sort();
    out
}

const CONFIG: &str = "n_agents=100\ntolerance=0.5\ntv_fraction=0.4\nwise_fraction=0.6\nbase_seed=42\nturns=30\nreplications=4\n";

#[test]
fn run_writes_expected_files() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("cell.cfg"), CONFIG).unwrap();
    let o = run(&["run", "--config", "cell.cfg", "--out", "a", "--seed", "7"], dir.path());
    assert!(o.status.success(), "{o:?}");
    for f in ["timeseries.csv", "summary.json", "means.svg"] {
        assert!(dir.path().join("a").join(f).is_file(), "{f}");
    }
    let csv = fs::read_to_string(dir.path().join("a/timeseries.csv")).unwrap();
    assert!(csv.starts_with("# opinion-sim "));
    assert!(csv.lines().next().unwrap().contains("seed=7"));
    assert_eq!(csv.lines().filter(|l| !l.starts_with('#')).count(), 1 + 31);
    let json = fs::read_to_string(dir.path().join("a/summary.json")).unwrap();
    assert!(json.trim_start().starts_with('['));

    let o = run(&["run", "--config", "cell.cfg", "--out", "b", "--seed", "7", "--jobs", "3"], dir.path());
    assert!(o.status.success());
    assert_eq!(snapshot(&dir.path().join("a")), snapshot(&dir.path().join("b")));
}

#[test]
fn run_default_out_dir_uses_seed() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("cell.cfg"), CONFIG).unwrap();
    let o = run(&["run", "--config", "cell.cfg"], dir.path());
    assert!(o.status.success(), "{o:?}");
    assert!(dir.path().join("results/cell-42/summary.json").is_file());
}

#[test]
fn malformed_config_exits_2_without_outputs() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("bad.cfg"), "n_agents=100\ntolerance=1.5\n").unwrap();
    let o = run(&["run", "--config", "bad.cfg", "--out", "out"], dir.path());
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("tolerance"));
    assert!(!dir.path().join("out").exists());

    fs::write(dir.path().join("typo.cfg"), "tolerence=0.5\n").unwrap();
    let o = run(&["run", "--config", "typo.cfg", "--out", "out"], dir.path());
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("tolerence"));
    assert!(!dir.path().join("out").exists());
}

#[test]
fn missing_config_is_io_error() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(&["run", "--config", "nope.cfg", "--out", "out"], dir.path());
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn scenario_one_runs_nine_cells() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(&["scenario", "--id", "1", "--out", "s1", "--seed", "3", "--jobs", "4"], dir.path());
    assert!(o.status.success(), "{o:?}");
    let cells = fs::read_dir(dir.path().join("s1/cells")).unwrap().count();
    assert_eq!(cells, 9);
    let svgs = fs::read_dir(dir.path().join("s1"))
        .unwrap()
        .filter(|e| e.as_ref().unwrap().path().extension().is_some_and(|x| x == "svg"))
        .count();
    assert_eq!(svgs, 9);
    let json = fs::read_to_string(dir.path().join("s1/summary.json")).unwrap();
    assert_eq!(json.matches("\"scenario\"").count(), 9);
}

#[test]
fn scenario_four_deterministic_across_jobs() {
    let dir = tempfile::tempdir().unwrap();
    let a = run(&["scenario", "--id", "4", "--out", "j1", "--seed", "11", "--jobs", "1"], dir.path());
    let b = run(&["scenario", "--id", "4", "--out", "j6", "--seed", "11", "--jobs", "6"], dir.path());
    assert!(a.status.success() && b.status.success());
    let sa = snapshot(&dir.path().join("j1"));
    assert_eq!(sa.iter().filter(|(p, _)| p.starts_with("cells")).count(), 24);
    assert_eq!(sa.iter().filter(|(p, _)| p.ends_with(".svg")).count(), 3);
    assert_eq!(sa, snapshot(&dir.path().join("j6")));
}

#[test]
fn unknown_scenario_is_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(&["scenario", "--id", "5", "--out", "x"], dir.path());
    assert_eq!(o.status.code(), Some(2));
    assert!(!dir.path().join("x").exists());
}

#[test]
fn net_stats_reports_edges() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(&["net-stats", "--n", "1000", "--m", "2", "--edges", "edges.txt"], dir.path());
    assert!(o.status.success());
    let text = stdout(&o);
    // complete core of 3 nodes, then 997 nodes with 2 edges each
    assert!(text.contains("edges: 1997"), "{text}");
    assert!(text.contains("tail_exponent(k_min=5): "));
    let edges = fs::read_to_string(dir.path().join("edges.txt")).unwrap();
    let pairs: Vec<(usize, usize)> = edges
        .lines()
        .map(|l| {
            let mut it = l.split(' ').map(|x| x.parse().unwrap());
            (it.next().unwrap(), it.next().unwrap())
        })
        .collect();
    assert_eq!(pairs.len(), 1997);
    assert!(pairs.iter().all(|(u, v)| u < v));
    assert!(pairs.windows(2).all(|w| w[0] < w[1]));

    let o = run(&["net-stats", "--n", "4", "--m", "1"], dir.path());
    assert!(stdout(&o).contains("edges: 3"));

    let o = run(&["net-stats", "--n", "10", "--m", "0"], dir.path());
    assert_eq!(o.status.code(), Some(2));
    let o = run(&["net-stats", "--n", "3", "--m", "3"], dir.path());
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn plot_from_csv() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("cell.cfg"), CONFIG).unwrap();
    assert!(run(&["run", "--config", "cell.cfg", "--out", "r"], dir.path()).status.success());
    let o = run(&["plot", "--csv", "r/timeseries.csv", "--out", "chart.svg"], dir.path());
    assert!(o.status.success(), "{o:?}");
    let svg = fs::read_to_string(dir.path().join("chart.svg")).unwrap();
    assert_eq!(svg.matches("<polyline").count(), 2);

    fs::write(dir.path().join("junk.csv"), "a,b\n1,2\n").unwrap();
    let o = run(&["plot", "--csv", "junk.csv", "--out", "j.svg"], dir.path());
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn sweep_crosses_lists() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("cell.cfg"), "turns=10\nreplications=2\nbase_seed=5\n").unwrap();
    let o = run(
        &["sweep", "--config", "cell.cfg", "--tolerances", "0.2,0.8", "--tv-fractions", "0,0.5,1", "--out", "sw", "--jobs", "2"],
        dir.path(),
    );
    assert!(o.status.success(), "{o:?}");
    let csv = fs::read_to_string(dir.path().join("sw/timeseries.csv")).unwrap();
    assert_eq!(csv.lines().filter(|l| !l.starts_with('#')).count(), 1 + 6 * 11);
    assert!(dir.path().join("sw/tolerance_0.2.svg").is_file());
    assert!(dir.path().join("sw/tolerance_0.8.svg").is_file());

    let o = run(&["sweep", "--config", "cell.cfg", "--tolerances", "1.2", "--out", "bad"], dir.path());
    assert_eq!(o.status.code(), Some(2));
    assert!(!dir.path().join("bad").exists());
}
