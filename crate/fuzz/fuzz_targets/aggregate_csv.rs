#![no_main]
use libfuzzer_sys::fuzz_target;

use qtomo::report::{read_aggregate, write_aggregate};

fuzz_target!(|data: &[u8]| {
    if let Ok(rows) = read_aggregate(data) {
        let mut out = Vec::new();
        write_aggregate(&rows, &mut out).unwrap();
        assert_eq!(read_aggregate(out.as_slice()).unwrap(), rows);
    }
});
