//! Surface-file decoder on arbitrary bytes: either a validated grid or a
//! structured error, never a panic.

#![no_main]

use enneper::io::parse_surface;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let _ = parse_surface(data);
});
