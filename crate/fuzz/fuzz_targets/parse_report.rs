#![no_main]

use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(s) = std::str::from_utf8(data) {
        if let Ok(report) = gc_verify::report::parse_report(s) {
            let _ = gc_verify::explain(&report);
            let _ = report.to_csv();
        }
    }
});
