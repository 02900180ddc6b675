//! CLI domain syntax parser on arbitrary input.

#![no_main]

use enneper::cli::parse_domain;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(text) = std::str::from_utf8(data) {
        let _ = parse_domain(text);
    }
});
