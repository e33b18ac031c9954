//! Normalized sum-capacity curve over the interference ratio.
//!
//! Emits the W-shaped curve: full multi-user gain at beta = 1, and the
//! horizontal 2*beta / 1+beta caps when the weaker users cannot keep up.
//!
//!     cargo run --example gdof_curve

use imac::cli;

fn main() {
    let args: Vec<String> = [
        "gdof",
        "--alpha",
        "0,0.1,0.2,0.3,0.4,0.5,0.6,0.7,0.8,0.9,1,1.2,1.4,1.5,1.75,2,2.5",
        "--beta",
        "0.6,0.8,1.0",
    ]
    .iter()
    .map(|s| s.to_string())
    .collect();
    std::process::exit(cli::run(&args));
}
