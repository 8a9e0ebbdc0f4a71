#![no_main]

use cyclic_green::greenring::CacheFile;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(file) = CacheFile::from_json(text) {
        if file.order().is_ok() {
            let _ = file.entries();
        }
        let again = CacheFile::from_json(&file.to_json()).expect("re-encoded cache parses");
        assert_eq!(again.to_json(), file.to_json());
    }
});
