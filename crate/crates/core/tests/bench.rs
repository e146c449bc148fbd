use std::path::PathBuf;

use pcw_core::attacks::LbaConfig;
use pcw_core::bench::{
    bench_collection, bench_csp, emit_report, lba_campaign, load_json, lba_trials, to_csv, to_json, BenchError,
    ExperimentConfig, ExperimentReport, LbaTrial, ReportFormat, CSV_HEADER,
};
use pcw_core::oracles::SearchBudget;
use pcw_core::platform::{heisenberg, unitriangular};
use pcw_core::protocols::aag::AagParams;

fn fixed(trials: usize, seed: u64) -> ExperimentConfig {
    let mut cfg = ExperimentConfig::new(trials, 1, 16, seed).unwrap();
    cfg.sequential = true;
    cfg.zero_timings = true;
    cfg
}

fn golden_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(name)
}

#[test]
fn config_validation() {
    assert!(matches!(ExperimentConfig::new(0, 1, 4, 0), Err(BenchError::BadConfig(_))));
    assert!(matches!(ExperimentConfig::new(3, 5, 4, 0), Err(BenchError::BadConfig(_))));
}

#[test]
fn single_trial_report() {
    let g = heisenberg();
    let rows = bench_collection("heisenberg", &g, &fixed(1, 0)).unwrap();
    assert!(!rows.is_empty());
    assert!(rows.iter().all(|r| r.trials == 1 && r.hirsch == 3 && r.group == "heisenberg"));
    let mut metrics: Vec<_> = rows.iter().map(|r| r.metric.as_str()).collect();
    let n = metrics.len();
    metrics.dedup();
    assert_eq!(metrics.len(), n);
    let mut report = ExperimentReport::new(0);
    report.rows = rows;
    let csv = to_csv(&report).unwrap();
    assert_eq!(csv.lines().count(), n + 1);
    assert!(csv.lines().skip(1).all(|l| l.split(',').count() == CSV_HEADER.len()));
}

#[test]
fn empty_report_is_header_only() {
    let csv = to_csv(&ExperimentReport::new(5)).unwrap();
    assert_eq!(csv, "group,hirsch,metric,value,unit,seed,trials\n");
}

fn golden_report() -> ExperimentReport {
    let g = heisenberg();
    let u = unitriangular(4).unwrap();
    let cfg = fixed(5, 17);
    let mut report = ExperimentReport::new(17);
    report.rows.extend(bench_collection("heisenberg", &g, &cfg).unwrap());
    report.rows.extend(bench_collection("ut4", &u, &cfg).unwrap());
    let budget = SearchBudget::new(10_000, 4).unwrap();
    report.rows.extend(bench_csp("heisenberg", &g, &cfg, &[0, 1, 2], 2, budget).unwrap());
    let attack = LbaConfig {
        max_iterations: 50,
        ..LbaConfig::default()
    };
    let groups = vec![("heisenberg".to_string(), g), ("ut4".to_string(), u)];
    let params = AagParams::new(3, 3, 1, 2, 2).unwrap();
    report.rows.extend(lba_campaign(&groups, params, &attack, &cfg).unwrap());
    report
}

#[test]
fn golden_csv() {
    let csv = to_csv(&golden_report()).unwrap();
    let path = golden_path("bench.csv");
    if std::env::var_os("PCW_BLESS").is_some() {
        std::fs::create_dir_all(path.parent().unwrap()).unwrap();
        std::fs::write(&path, &csv).unwrap();
    }
    let want = std::fs::read_to_string(&path).unwrap();
    assert_eq!(csv, want);
    // parallel runs give the same non-timing rows
    let mut cfg = fixed(5, 17);
    cfg.sequential = false;
    let g = heisenberg();
    assert_eq!(
        bench_collection("heisenberg", &g, &cfg).unwrap(),
        bench_collection("heisenberg", &g, &fixed(5, 17)).unwrap()
    );
}

#[test]
fn json_round_trip() {
    let report = golden_report();
    let json = to_json(&report).unwrap();
    let back = load_json(&json).unwrap();
    assert_eq!(back, report);
    assert_eq!(to_csv(&back).unwrap(), to_csv(&report).unwrap());
    let bumped = json.replacen("\"schema\": 1", "\"schema\": 99", 1);
    assert!(load_json(&bumped).is_err());

    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("r.json");
    emit_report(&report, ReportFormat::Json, &path).unwrap();
    assert_eq!(load_json(&std::fs::read_to_string(&path).unwrap()).unwrap(), report);
    let missing = dir.path().join("no/such/dir/r.csv");
    assert!(matches!(emit_report(&report, ReportFormat::Csv, &missing), Err(BenchError::IoFailure(_))));
    assert_eq!("csv".parse::<ReportFormat>().unwrap(), ReportFormat::Csv);
    assert!("xml".parse::<ReportFormat>().is_err());
}

#[test]
fn csp_bench_easy_cases() {
    let g = heisenberg();
    let u = unitriangular(6).unwrap();
    let budget = SearchBudget::new(100_000, 8).unwrap();
    // identity conjugator: solved at radius 0 on any group
    for (label, grp) in [("heisenberg", &g), ("ut6", &u)] {
        let gens: Vec<usize> = (0..grp.ngens()).collect();
        let mut report = ExperimentReport::new(1);
        report.rows = bench_csp(label, grp, &fixed(10, 1), &gens, 0, budget).unwrap();
        assert_eq!(report.value(label, "csp_solved"), Some("10"));
        assert_eq!(report.value(label, "csp_solution_length_mean"), Some("0.000000"));
    }
    let mut report = ExperimentReport::new(2);
    report.rows = bench_csp("heisenberg", &g, &fixed(20, 2), &[0, 1, 2], 2, budget).unwrap();
    assert_eq!(report.value("heisenberg", "csp_solved"), Some("20"));
    assert_eq!(report.value("heisenberg", "budget_nodes"), Some("100000"));
}

#[test]
fn lba_bench_edge_cases() {
    let g = heisenberg();
    let params = AagParams::new(5, 5, 2, 4, 4).unwrap();
    let zero = LbaConfig {
        max_iterations: 0,
        ..LbaConfig::default()
    };
    let trials = lba_trials(&g, params, &zero, &fixed(10, 3)).unwrap();
    assert!(trials.iter().all(|t| matches!(t, LbaTrial::Fail { iterations: 0 })));
    let mut report = ExperimentReport::new(3);
    report.rows = lba_campaign(&[("heisenberg".into(), g)], params, &zero, &fixed(10, 3)).unwrap();
    assert_eq!(report.value("heisenberg", "lba_success_rate"), Some("0.000000"));
    assert_eq!(report.value("heisenberg", "lba_fail"), Some("10"));
}

#[test]
fn lba_bench_planted_length_one_keys() {
    let g = unitriangular(4).unwrap();
    // L = 1: every private key is a single generator
    let params = AagParams::new(5, 5, 2, 4, 1).unwrap();
    let trials = lba_trials(&g, params, &LbaConfig::default(), &fixed(20, 4)).unwrap();
    let attempted = trials.iter().filter(|t| !matches!(t, LbaTrial::Skipped)).count();
    assert!(attempted > 0);
    assert!(trials
        .iter()
        .all(|t| matches!(t, LbaTrial::Success { iterations: 1 } | LbaTrial::Skipped)));
}
