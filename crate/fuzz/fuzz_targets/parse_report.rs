#![no_main]

use kronholm::io::{module_from_documents, ReportDocument};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let Ok(report) = ReportDocument::from_json(text) else { return };
    assert_eq!(ReportDocument::from_json(&report.to_json()).as_ref(), Ok(&report));
    let _ = module_from_documents(&report.generators);
});
