#![no_main]
use libfuzzer_sys::fuzz_target;

use qtomo::report::{read_repetitions, write_repetitions};

fuzz_target!(|data: &[u8]| {
    if let Ok(rows) = read_repetitions(data) {
        let mut out = Vec::new();
        write_repetitions(&rows, &mut out).unwrap();
        assert_eq!(read_repetitions(out.as_slice()).unwrap(), rows);
    }
});
