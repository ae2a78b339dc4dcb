#![no_main]

use libfuzzer_sys::fuzz_target;
use toroidal_bosons::fock::HalfInt;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    if let Ok(h) = s.parse::<HalfInt>() {
        assert_eq!(h.to_string().parse::<HalfInt>().unwrap(), h);
    }
});
