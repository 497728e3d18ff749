//! Runs a case file through the same path as the command-line tool.
//!
//! `cargo run --example run_case -- cases/ring_design.json`

use std::path::PathBuf;

use vlsikit::cli::run_case_file;

fn main() {
    let path: PathBuf = std::env::args()
        .nth(1)
        .map(Into::into)
        .unwrap_or_else(|| PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("cases/ring_design.json"));
    match run_case_file(&path) {
        Ok(report) => print!("{}", report.to_table()),
        Err(e) => {
            eprintln!("{e}");
            std::process::exit(1);
        }
    }
}
