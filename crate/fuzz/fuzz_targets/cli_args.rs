#![no_main]

use libfuzzer_sys::fuzz_target;

// Arguments are NUL-separated. Only parsing is exercised; commands are not run.
fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    let args = std::iter::once("cornerforge").chain(text.split('\0'));
    let _ = cornerforge::cli::parse(args);
});
