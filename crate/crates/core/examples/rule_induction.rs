//! Run only the induction stage and follow how many itemsets and rules
//! survive each step, for each rule-cap multiplier gamma.
//!
//! ```bash
//! cargo run --release --example rule_induction
//! ```

use fuzzyrb::dataset;
use fuzzyrb::induction::{self, InductionConfig};
use fuzzyrb::synthetic;
use fuzzyrb::transform;
use fuzzyrb::Engine;

pub fn run_example() -> fuzzyrb::Result<()> {
    let train = synthetic::overlapping_mixture(6, 3, 7).sample(5_000, 3)?;
    let qt = transform::compute_quantiles(&train, transform::default_quantiles(train.len()))?;
    let unit = transform::transform_dataset(&train, &qt)?;
    let engine = Engine::new(0)?;
    let data = dataset::partition(&unit, 4)?;

    for gamma in [2.0, 4.0, 8.0] {
        let cfg = InductionConfig {
            gamma,
            keep_itemsets: gamma == 2.0,
            ..InductionConfig::default()
        };
        let out = induction::induce(&engine, &data, &cfg)?;
        let t = &out.trace;
        println!(
            "gamma {gamma}: itemsets {} -> frequent {} -> promising {} -> candidates {} \
             -> weighted {} -> filtered {} -> capped {} -> rules {}",
            t.itemsets, t.frequent, t.promising, t.candidates, t.weighted, t.filtered, t.capped, t.rules
        );
        if let Some(itemsets) = &out.itemsets {
            let dump = induction::render_itemsets(itemsets, train.schema());
            println!("first counted itemsets:");
            dump.lines().take(3).for_each(|l| println!("  {l}"));
        }
        println!("  mean rule length {:.2}", out.rule_base.mean_rule_length());
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> fuzzyrb::Result<()> {
    run_example()
}
