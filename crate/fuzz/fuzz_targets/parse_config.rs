#![no_main]

use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(s) = std::str::from_utf8(data) {
        // error rendering has its own string handling
        if let Err(e) = gc_verify::config::parse_config(s, "fuzz") {
            let _ = e.to_string();
        }
    }
});
