#![no_main]

use hdapprox::parse::parse_kernel_params;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(params) = parse_kernel_params(text) {
        // Accepted files must yield a usable kernel.
        let handle = params.to_handle().expect("accepted kernel file builds");
        assert_eq!(handle.d, params.d);
    }
});
