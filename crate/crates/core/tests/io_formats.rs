use rbnlab_core::experiments::{linspace, sweep_p, SweepConfig};
use rbnlab_core::io::{read_ctm_table, summary_csv, sweep_csv, write_ctm_table, SWEEP_HEADER};
use rbnlab_core::turing::{build_frequency_distribution, ctm_from_frequency};
use rbnlab_core::{parse_config, CtmTable, Error, RunConfig};

#[test]
fn ctm_file_roundtrip() {
    let dir = tempfile::tempdir().unwrap();
    let strings = ctm_from_frequency(&build_frequency_distribution(2, 500).unwrap()).unwrap();
    let square = CtmTable::derive_square(&strings, 3).unwrap();
    for (name, table) in [("s.ctm", &strings), ("q.ctm", &square)] {
        let path = dir.path().join(name);
        write_ctm_table(&path, table).unwrap();
        let back = read_ctm_table(&path).unwrap();
        assert_eq!(&back, table);
        assert_eq!(back.fallback().to_bits(), table.fallback().to_bits());
    }
}

#[test]
fn ctm_file_errors() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("neg.ctm");
    std::fs::write(&path, "ctm string 2\n0 1.5\n01 -2\n").unwrap();
    match read_ctm_table(&path) {
        Err(Error::Parse { line, .. }) => assert_eq!(line, 3),
        other => panic!("{other:?}"),
    }
    assert!(matches!(read_ctm_table(&dir.path().join("missing")), Err(Error::Io(_))));
}

#[test]
fn sweep_csv_layout() {
    let strings = ctm_from_frequency(&build_frequency_distribution(2, 500).unwrap()).unwrap();
    let table = CtmTable::derive_square(&strings, 4).unwrap();
    let cfg = SweepConfig {
        n_nodes: 40,
        in_degrees: vec![2],
        p_grid: linspace(0.0, 0.5, 3).unwrap(),
        steps: 20,
        samples: 1,
        ..Default::default()
    };
    let s = sweep_p(&cfg, &table).unwrap();
    let csv = sweep_csv(std::slice::from_ref(&s));
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines[0], SWEEP_HEADER);
    assert_eq!(lines.len(), 4);
    assert!(lines[1].starts_with("2,0,0,"));
    assert!(lines[3].starts_with("2,0.5,0,"));
    assert!(lines.iter().all(|l| l.split(',').count() == 9));

    let c = rbnlab_core::experiments::detect_critical_p(&s).unwrap();
    let summary = summary_csv(&[c]);
    assert!(summary.starts_with("k,detected_p,theoretical_p\n2,"));
    assert!(summary.trim_end().ends_with(",0.5"));
}

#[test]
fn manifest_reproduces_config() {
    let mut cfg = parse_config("steps=33\nin_degree=3,4\n").unwrap();
    cfg.apply_override("master_seed=99").unwrap();
    let manifest = rbnlab_core::io::run_manifest("sweep", &cfg);
    assert!(manifest.starts_with("# rbnlab sweep\n"));
    assert_eq!(parse_config(&manifest).unwrap(), cfg);
    assert_ne!(cfg, RunConfig::default());
}
