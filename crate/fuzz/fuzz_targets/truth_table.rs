#![no_main]

use hdapprox::monomc::boolean::boolean_fourier_transform;
use hdapprox::parse::parse_truth_table;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let Ok(table) = parse_truth_table(text) else { return };
    assert_eq!(parse_truth_table(&table.to_bits()).as_ref(), Ok(&table));
    if table.d <= 12 {
        let coeffs = boolean_fourier_transform(&table).expect("transform of a parsed table");
        let energy: f64 = coeffs.iter().map(|c| c * c).sum();
        assert!((energy - 1.0).abs() < 1e-9);
    }
});
