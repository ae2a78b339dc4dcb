#![no_main]

use libfuzzer_sys::fuzz_target;
use toroidal_bosons::fields::{operator_table, FieldRef, TableVariant};
use toroidal_bosons::lattice::{build_type, Algebra};

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    let Ok(r) = s.parse::<FieldRef>() else { return };
    assert_eq!(r.to_string().parse::<FieldRef>().unwrap(), r);
    for (a, n) in [(Algebra::A, 3), (Algebra::B, 3), (Algebra::C, 2), (Algebra::D, 4)] {
        let td = build_type(a, n).unwrap();
        for v in [TableVariant::PaperLiteral, TableVariant::Systematic] {
            let _ = operator_table(&td, v).entry(&r);
        }
    }
});
