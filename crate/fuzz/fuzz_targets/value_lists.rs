#![no_main]
use libfuzzer_sys::fuzz_target;

use qtomo::config::{parse_f64_list, parse_u64_list, parse_vector3};

fuzz_target!(|data: &str| {
    if let Ok(v) = parse_vector3(data) {
        assert!(v.is_finite());
    }
    if let Ok(list) = parse_f64_list(data) {
        assert!(!list.is_empty() && list.iter().all(|x| x.is_finite()));
    }
    if let Ok(list) = parse_u64_list(data) {
        assert!(!list.is_empty());
    }
});
