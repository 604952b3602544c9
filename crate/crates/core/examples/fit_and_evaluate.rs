//! Train a full model on a synthetic three-class problem, print its rules
//! and score it on held-out data.
//!
//! ```bash
//! cargo run --release --example fit_and_evaluate
//! ```

use std::time::Instant;

use fuzzyrb::pipeline;
use fuzzyrb::synthetic;
use fuzzyrb::{Config, Engine};

pub fn run_example() -> fuzzyrb::Result<()> {
    let mixture = synthetic::overlapping_mixture(8, 3, 42);
    let train = mixture.sample(10_000, 1)?;
    let test = mixture.sample(5_000, 2)?;

    let engine = Engine::new(0)?;
    let cfg = Config::default();
    let start = Instant::now();
    let fit = pipeline::fit(&engine, &train, &cfg, 8, &mut ())?;
    println!("fit in {:.2}s: {:?}", start.elapsed().as_secs_f64(), fit.timings);
    println!("induction trace: {:?}", fit.induction.trace);
    println!(
        "{} induced rules, {} selected after {} evaluations",
        fit.model.summary.induced_rules,
        fit.model.rule_base.len(),
        fit.model.summary.evaluations
    );
    print!("{}", fit.model.rule_base.render());

    let report = pipeline::evaluate(&fit.model, &test)?;
    print!("{}", report.to_text(test.schema().classes()));
    Ok(())
}

#[allow(dead_code)]
fn main() -> fuzzyrb::Result<()> {
    run_example()
}
