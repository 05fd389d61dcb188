#![no_main]
use libfuzzer_sys::fuzz_target;

use qtomo::measurement::parse_raw_datasets;

fuzz_target!(|data: &str| {
    if let Ok(sets) = parse_raw_datasets(data) {
        let dump: String = sets.iter().map(|s| s.to_raw_dump()).collect();
        assert_eq!(parse_raw_datasets(&dump).unwrap(), sets);
    }
});
