use mdtree::experiments::*;
use mdtree::generators::{OffspringPmf, PAParams};

fn config(model: ModelSpec, n: usize, trials: usize, seed: u64) -> ExperimentConfig {
    ExperimentConfig::new(model, n, trials, seed)
}

#[test]
fn identical_configs_export_identical_files() {
    let dir = tempfile::tempdir().unwrap();
    let c = config(ModelSpec::Pa(PAParams::BST), 300, 600, 9);
    for format in [ExportFormat::Csv, ExportFormat::Json] {
        let a = dir.path().join("a");
        let b = dir.path().join("b");
        export(&[run_experiment(&c).unwrap()], format, &a).unwrap();
        export(&[run_experiment(&c).unwrap()], format, &b).unwrap();
        assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    }
}

#[test]
fn worker_count_does_not_change_results() {
    for model in [ModelSpec::Uniform, ModelSpec::Pa(PAParams::PLPA)] {
        let one = run_experiment(&ExperimentConfig {
            workers: 1,
            retain_values: true,
            ..config(model.clone(), 200, 1000, 3)
        })
        .unwrap();
        let eight =
            run_experiment(&ExperimentConfig { workers: 8, retain_values: true, ..config(model, 200, 1000, 3) })
                .unwrap();
        assert_eq!(one, eight);
        assert_eq!(one.values.as_ref().unwrap().len(), 1000);
    }
}

#[test]
fn trials_are_pure_functions_of_their_index() {
    let c = ExperimentConfig { retain_values: true, ..config(ModelSpec::Pa(PAParams::RRT), 100, 300, 5) };
    let s = run_experiment(&c).unwrap();
    let values = s.values.unwrap();
    for i in [0, 17, 255, 256, 299] {
        assert_eq!(values[i], c.trial(i).unwrap());
    }
    let shorter = run_experiment(&ExperimentConfig { trials: 100, ..c }).unwrap();
    assert_eq!(&shorter.values.unwrap()[..], &values[..100]);
}

#[test]
fn summary_fields_are_consistent() {
    let s = run_experiment(&config(ModelSpec::Pa(PAParams::BST), 200, 500, 1)).unwrap();
    assert!((0.0..=1.0).contains(&s.mean));
    assert!((s.ci_lo - (s.mean - 1.96 * s.stderr)).abs() < 1e-15);
    assert!((s.ci_hi - (s.mean + 1.96 * s.stderr)).abs() < 1e-15);
    assert!((s.stderr - s.stddev / 500f64.sqrt()).abs() < 1e-15);
    assert_eq!((s.model.as_str(), s.rho, s.chi), ("pa", Some(2.0), Some(-1)));
    assert!((s.abs_diff.unwrap() - (s.mean - s.constant.unwrap()).abs()).abs() < 1e-15);
}

#[test]
fn csv_and_json_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let summaries = vec![
        run_experiment(&config(ModelSpec::Pa(PAParams::BST), 100, 50, 1)).unwrap(),
        run_experiment(&config(ModelSpec::Uniform, 100, 50, 2)).unwrap(),
        run_experiment(&config(ModelSpec::Pa(PAParams::new(3.0, 0).unwrap()), 100, 50, 3)).unwrap(),
    ];
    let rows: Vec<SummaryRow> = summaries.iter().map(|s| s.row()).collect();
    for (format, name) in [(ExportFormat::Csv, "r.csv"), (ExportFormat::Json, "r.json")] {
        let path = dir.path().join(name);
        export(&summaries, format, &path).unwrap();
        assert_eq!(read_export(format, &path).unwrap(), rows, "{name}");
    }
    let text = std::fs::read_to_string(dir.path().join("r.csv")).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "model,rho,chi,n,trials,seed,mean,stddev,stderr,ci_lo,ci_hi,constant,abs_diff");
    assert_eq!(lines.len(), 4);
    assert!(lines[1].starts_with("pa,2.0,-1,100,50,1,") || lines[1].starts_with("pa,2,-1,100,50,1,"));
    assert!(lines[2].starts_with("uniform,,,100,50,2,"));
    assert!(lines[3].ends_with(",,"), "no constant for (3, 0): {}", lines[3]);
}

#[test]
fn normalized_dimension_approaches_the_limit() {
    // mean |beta/n - c| shrinks from n = 250 to n = 4000
    let spread = |n: usize| {
        let s = run_experiment(&ExperimentConfig {
            retain_values: true,
            ..config(ModelSpec::Pa(PAParams::BST), n, 200, 77)
        })
        .unwrap();
        let c = s.constant.unwrap();
        s.values.unwrap().iter().map(|v| (v - c).abs()).sum::<f64>() / 200.0
    };
    assert!(spread(4000) <= spread(250));
}

#[test]
fn other_statistics_match_their_limits() {
    for (model, stat) in [
        (ModelSpec::Pa(PAParams::BST), Statistic::PlFraction),
        (ModelSpec::Pa(PAParams::RRT), Statistic::PkFraction),
        (ModelSpec::Pa(PAParams::BST), Statistic::FringeFraction(3)),
        (ModelSpec::Gw(OffspringPmf::geometric(60).unwrap()), Statistic::PlFraction),
        (ModelSpec::Uniform, Statistic::PkFraction),
    ] {
        let s = run_experiment(&ExperimentConfig { statistic: stat, ..config(model, 2000, 200, 8) }).unwrap();
        let c = s.constant.unwrap();
        assert!((s.mean - c).abs() < 0.005, "{stat:?}: {} vs {c}", s.mean);
    }
}

#[test]
fn failing_trials_report_their_index() {
    let binary = OffspringPmf::new(vec![0.5, 0.0, 0.5]).unwrap();
    let err = run_experiment(&config(ModelSpec::Gw(binary), 10, 3, 0)).unwrap_err();
    assert!(matches!(err, ExperimentError::Trial { index: 0, .. }), "{err}");
}
