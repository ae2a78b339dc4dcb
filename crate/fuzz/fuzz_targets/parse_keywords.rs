#![no_main]

use libfuzzer_sys::fuzz_target;
use toroidal_bosons::config::{OutputFormat, VariantChoice};
use toroidal_bosons::fields::TableVariant;
use toroidal_bosons::fock::{FockModel, Sector};
use toroidal_bosons::lattice::Algebra;
use toroidal_bosons::verifier::Relation;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    if let Ok(r) = s.parse::<Relation>() {
        assert_eq!(r.to_string().parse::<Relation>().unwrap(), r);
    }
    if let Ok(a) = s.parse::<Algebra>() {
        assert_eq!(a.to_string().parse::<Algebra>().unwrap(), a);
    }
    if let Ok(x) = s.parse::<Sector>() {
        assert_eq!(x.to_string().parse::<Sector>().unwrap(), x);
    }
    if let Ok(m) = s.parse::<FockModel>() {
        assert_eq!(m.to_string().parse::<FockModel>().unwrap(), m);
    }
    if let Ok(v) = s.parse::<TableVariant>() {
        assert_eq!(v.to_string().parse::<TableVariant>().unwrap(), v);
    }
    let _ = s.parse::<VariantChoice>();
    let _ = s.parse::<OutputFormat>();
});
