//! Select a compact subset of induced rules with CHC, logging progress and
//! counting restarts through a custom observer.
//!
//! ```bash
//! cargo run --release --example rule_selection
//! ```

use fuzzyrb::chc::{self, ChcConfig, ChcObserver, Chromosome, GenerationStats, ProgressLog};
use fuzzyrb::dataset;
use fuzzyrb::induction::{self, InductionConfig};
use fuzzyrb::synthetic;
use fuzzyrb::transform;
use fuzzyrb::Engine;

#[derive(Default)]
struct Counting {
    log: ProgressLog,
    restarts: usize,
}

impl ChcObserver for Counting {
    fn on_generation(&mut self, stats: &GenerationStats, population: &[Chromosome]) {
        self.log.on_generation(stats, population);
    }

    fn on_restart(&mut self, best: &Chromosome, population: &[Chromosome]) {
        self.restarts += 1;
        self.log.on_restart(best, population);
    }
}

pub fn run_example() -> fuzzyrb::Result<()> {
    let train = synthetic::overlapping_mixture(6, 3, 11).sample(5_000, 4)?;
    let qt = transform::compute_quantiles(&train, transform::default_quantiles(train.len()))?;
    let unit = transform::transform_dataset(&train, &qt)?;
    let engine = Engine::new(0)?;
    let data = dataset::partition(&unit, 4)?;
    let induced = induction::induce(&engine, &data, &InductionConfig::default())?;

    let cfg = ChcConfig {
        seed: 3,
        ..ChcConfig::default()
    };
    let mut observer = Counting::default();
    let outcome = chc::run(&engine, &induced.rule_base, &data, &cfg, true, &mut observer)?;
    let lines: Vec<&str> = observer.log.text().lines().collect();
    println!("{}", lines[0]);
    println!("...");
    println!("{}", lines[lines.len() - 1]);
    println!(
        "{} -> {} rules, fitness {:.4}, {} evaluations, {} generations, {} restarts",
        induced.rule_base.len(),
        outcome.rule_base.len(),
        outcome.best.fitness,
        outcome.evaluations,
        outcome.generations,
        observer.restarts
    );
    print!("{}", outcome.rule_base.render());
    Ok(())
}

#[allow(dead_code)]
fn main() -> fuzzyrb::Result<()> {
    run_example()
}
