#![no_main]

use kronholm::ring::parse_m2;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    match parse_m2(text) {
        Ok(x) => assert_eq!(parse_m2(&x.to_string()), Ok(x)),
        Err(e) => assert!(e.offset <= text.len()),
    }
});
