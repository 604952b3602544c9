//! The same data fitted with different partition and thread counts yields
//! byte-identical model files.
//!
//! ```bash
//! cargo run --release --example partition_independence
//! ```

use fuzzyrb::pipeline;
use fuzzyrb::synthetic;
use fuzzyrb::{Config, Engine};

pub fn run_example() -> fuzzyrb::Result<()> {
    let train = synthetic::overlapping_mixture(4, 3, 2).sample(3_000, 6)?;
    let mut cfg = Config::default();
    cfg.chc.max_evaluations = 2_000;
    let mut reference = None;
    for (threads, partitions) in [(1, 1), (2, 3), (4, 8), (8, 64)] {
        let engine = Engine::new(threads)?;
        let json = pipeline::fit(&engine, &train, &cfg, partitions, &mut ())?.model.to_file().to_json();
        let same = reference.get_or_insert_with(|| json.clone()) == &json;
        println!("threads {threads}, partitions {partitions}: {} bytes, identical {same}", json.len());
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> fuzzyrb::Result<()> {
    run_example()
}
