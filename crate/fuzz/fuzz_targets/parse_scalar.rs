#![no_main]

use libfuzzer_sys::fuzz_target;
use toroidal_bosons::exactnum::{QSqrt2, Rational};

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    if let Ok(r) = s.parse::<Rational>() {
        assert_eq!(r.to_string().parse::<Rational>().unwrap(), r);
    }
    if let Ok(x) = s.parse::<QSqrt2>() {
        let back: QSqrt2 = x.to_string().parse().expect("rendered scalar parses");
        assert_eq!(back, x);
    }
});
