//! Report-file decoder on arbitrary bytes.

#![no_main]

use enneper::io::parse_report;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let _ = parse_report(data);
});
