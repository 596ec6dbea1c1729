#![no_main]

use hdapprox::parse::{parse_key_values, ConfigMap};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let Ok(cfg) = ConfigMap::parse(text) else { return };
    // Re-serializing and parsing again gives the same map.
    let again: String = cfg.entries.iter().map(|(k, v)| format!("{k} = {v}\n")).collect();
    let back = ConfigMap::parse(&again).expect("round trip parses");
    assert_eq!(back, cfg);
    let _ = parse_key_values(&again);
    let _ = cfg.usize("n", 1);
    let _ = cfg.list::<f64>("n", &[]);
});
