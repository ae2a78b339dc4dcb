#![no_main]

use libfuzzer_sys::fuzz_target;
use toroidal_bosons::config::Overrides;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    let Ok(o) = Overrides::from_toml(s) else { return };
    let Ok(cfg) = o.resolve() else { return };
    // The echoed config reads back to the same settings.
    let echo = toml::to_string(&cfg).expect("config serializes");
    let mut again = Overrides::from_toml(&echo).expect("echo parses").resolve().expect("echo resolves");
    again.workers = cfg.workers;
    assert_eq!(again, cfg);
});
