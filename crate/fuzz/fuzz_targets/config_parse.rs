#![no_main]

use libfuzzer_sys::fuzz_target;
use qcorr_cli::config::ConfigFile;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    let Ok(config) = ConfigFile::parse(text) else {
        return;
    };
    for key in config.keys() {
        assert!(config.raw(key).is_some());
        let _ = config.get::<f64>(key);
        let _ = config.get::<usize>(key);
        let _ = config.get::<qcorr_core::CorrelationVector>(key);
    }
});
