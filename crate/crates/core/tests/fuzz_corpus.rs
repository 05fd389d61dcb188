//! Replays the checked-in fuzz corpus through the same invariants the fuzz
//! targets assert, so the seeds stay meaningful without a fuzzing toolchain.

use std::fs;
use std::path::PathBuf;

use qtomo::config::{parse_f64_list, parse_u64_list, parse_vector3, Settings};
use qtomo::measurement::parse_raw_datasets;
use qtomo::report::{read_aggregate, read_repetitions, write_aggregate, write_repetitions};
use qtomo::ExperimentKind;

fn seeds(target: &str) -> Vec<(String, Vec<u8>)> {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../fuzz/corpus")
        .join(target);
    let mut out: Vec<_> = fs::read_dir(&dir)
        .unwrap_or_else(|e| panic!("{}: {e}", dir.display()))
        .map(|entry| {
            let path = entry.unwrap().path();
            (
                path.file_name().unwrap().to_string_lossy().into_owned(),
                fs::read(&path).unwrap(),
            )
        })
        .collect();
    out.sort();
    assert!(!out.is_empty(), "no seeds for {target}");
    out
}

#[test]
fn raw_datasets_seeds() {
    let mut parsed = 0;
    for (name, bytes) in seeds("raw_datasets") {
        let text = String::from_utf8(bytes).unwrap();
        if let Ok(sets) = parse_raw_datasets(&text) {
            let dump: String = sets.iter().map(|s| s.to_raw_dump()).collect();
            assert_eq!(parse_raw_datasets(&dump).unwrap(), sets, "{name}");
            parsed += 1;
        }
    }
    assert!(parsed >= 3);
}

#[test]
fn config_file_seeds() {
    let mut parsed = 0;
    for (_, bytes) in seeds("config_file") {
        if let Ok(settings) = Settings::parse(&String::from_utf8(bytes).unwrap()) {
            for kind in [
                ExperimentKind::SweepN,
                ExperimentKind::SweepLength,
                ExperimentKind::Single,
            ] {
                let _ = settings.experiment(kind);
            }
            let _ = settings.simulation_plan();
            parsed += 1;
        }
    }
    assert!(parsed >= 2);
}

#[test]
fn csv_seeds_round_trip() {
    for (name, bytes) in seeds("aggregate_csv") {
        let rows = read_aggregate(bytes.as_slice()).unwrap();
        let mut out = Vec::new();
        write_aggregate(&rows, &mut out).unwrap();
        assert_eq!(out, bytes, "{name}");
    }
    for (name, bytes) in seeds("repetitions_csv") {
        let rows = read_repetitions(bytes.as_slice()).unwrap();
        let mut out = Vec::new();
        write_repetitions(&rows, &mut out).unwrap();
        assert_eq!(out, bytes, "{name}");
    }
}

#[test]
fn value_list_seeds() {
    for (_, bytes) in seeds("value_lists") {
        let text = String::from_utf8(bytes).unwrap();
        if let Ok(v) = parse_vector3(&text) {
            assert!(v.is_finite());
        }
        if let Ok(list) = parse_f64_list(&text) {
            assert!(list.iter().all(|x| x.is_finite()));
        }
        let _ = parse_u64_list(&text);
    }
}
