//! Rewrites scenario files in canonical form: `canonicalize FILE...`

use ictimpact_core::workbench::{parse_scenario, serialize_document, ParseMode};

fn main() {
    let mut failed = false;
    for path in std::env::args().skip(1) {
        let text = std::fs::read_to_string(&path).expect("readable file");
        match parse_scenario(&text, ParseMode::Lenient) {
            Ok(doc) => std::fs::write(&path, serialize_document(&doc)).expect("writable file"),
            Err(e) => {
                eprintln!("{path}: {e}");
                failed = true;
            }
        }
    }
    if failed {
        std::process::exit(1);
    }
}
