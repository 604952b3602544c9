//! On an imbalanced problem, compare training with and without class costs:
//! costs raise the minority class's rule weights and the selection optimizes
//! the geometric mean of per-class rates instead of plain accuracy.
//!
//! ```bash
//! cargo run --release --example cost_sensitive
//! ```

use fuzzyrb::pipeline;
use fuzzyrb::synthetic::GaussianMixture;
use fuzzyrb::{Config, Engine};

pub fn run_example() -> fuzzyrb::Result<()> {
    let mixture = GaussianMixture {
        means: vec![vec![0.0, 0.0, 0.0], vec![1.2, 1.2, 0.5]],
        std_dev: 1.0,
        priors: vec![0.95, 0.05],
    };
    let train = mixture.sample(8_000, 1)?;
    let test = mixture.sample(8_000, 2)?;
    let engine = Engine::new(0)?;

    for cost_sensitive in [false, true] {
        let mut cfg = Config::default();
        cfg.induction.cost_sensitive = cost_sensitive;
        let fit = pipeline::fit(&engine, &train, &cfg, 4, &mut ())?;
        let r = pipeline::evaluate(&fit.model, &test)?;
        println!(
            "cost_sensitive={cost_sensitive}: acc {:.4}  acc_class {:.4}  gm {:.4}  minority tpr {:.4}  rules {}",
            r.accuracy, r.acc_class, r.gm, r.tpr[1], r.rules
        );
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> fuzzyrb::Result<()> {
    run_example()
}
