#![no_main]

use libfuzzer_sys::fuzz_target;
use qcorr_cli::table::Table;

fuzz_target!(|data: &[u8]| {
    let Ok(table) = Table::read(data) else {
        return;
    };
    for name in &table.headers {
        if let Ok(column) = table.column(name) {
            assert_eq!(column.len(), table.records.len());
        }
    }
});
