//! Five-fold stratified cross-validation of the full and the lightweight
//! (no rule selection) variants.
//!
//! ```bash
//! cargo run --release --example cross_validation
//! ```

use fuzzyrb::pipeline;
use fuzzyrb::synthetic;
use fuzzyrb::{Config, Engine};

pub fn run_example() -> fuzzyrb::Result<()> {
    let data = synthetic::overlapping_mixture(5, 3, 21).sample(4_000, 8)?;
    let engine = Engine::new(0)?;
    for lightweight in [false, true] {
        let cfg = Config {
            lightweight,
            ..Config::default()
        };
        let report = pipeline::cross_validate(&engine, &data, &cfg, 5, 1, 4)?;
        println!("lightweight={lightweight}");
        print!("{}", report.to_text());
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> fuzzyrb::Result<()> {
    run_example()
}
