#![no_main]

use kronholm::io::{parse_complex, serialize_complex};
use kronholm::pipeline::compute_partial;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let Ok(spec) = parse_complex(text) else { return };
    assert_eq!(parse_complex(&serialize_complex(&spec)).as_ref(), Ok(&spec));
    // Keep the pipeline run cheap: bound the number and size of cells.
    if spec.cells.len() <= 12 && spec.cells.iter().all(|c| c.deg.p <= 64) {
        let _ = compute_partial(&spec);
    }
});
