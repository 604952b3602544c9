//! Time induction and the whole pipeline over a small grid of thread counts
//! and data fractions, then derive speedup, sizeup and scaleup.
//!
//! ```bash
//! cargo run --release --example scalability
//! ```

use fuzzyrb::pipeline;
use fuzzyrb::synthetic;
use fuzzyrb::Config;

pub fn run_example() -> fuzzyrb::Result<()> {
    let data = synthetic::overlapping_mixture(8, 2, 3).sample(20_000, 5)?;
    let mut cfg = Config::default();
    cfg.chc.max_evaluations = 2_000;
    let report = pipeline::bench(&data, &cfg, &[1, 2, 4], &[0.25, 0.5, 1.0], 9)?;
    print!("{}", report.to_text());
    Ok(())
}

#[allow(dead_code)]
fn main() -> fuzzyrb::Result<()> {
    run_example()
}
