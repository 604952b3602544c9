//! Map skewed numeric data onto `[0, 1]` with the quantile CDF, check that
//! the result is close to uniform, and show where the five triangular fuzzy
//! sets land in original units.
//!
//! ```bash
//! cargo run --release --example quantile_transform
//! ```

use fuzzyrb::dataset::{Attribute, Dataset, Schema};
use fuzzyrb::transform::{self, FuzzyPartition};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn run_example() -> fuzzyrb::Result<()> {
    // exponential-looking income column and a bounded age column
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let rows: Vec<Vec<f64>> = (0..4_000)
        .map(|_| {
            let income = -30_000.0 * (1.0 - rng.random::<f64>()).ln();
            let age = 18.0 + 60.0 * rng.random::<f64>().powi(2);
            vec![income, age]
        })
        .collect();
    let labels = (0..rows.len()).map(|i| i % 2).collect();
    let schema = Schema::new(vec![Attribute::numeric("income"), Attribute::numeric("age")], "y", ["a", "b"])?;
    let train = Dataset::new(schema, rows, labels)?;

    let qt = transform::compute_quantiles(&train, transform::default_quantiles(train.len()))?;
    let unit = transform::transform_dataset(&train, &qt)?;
    for var in 0..2 {
        let mut u: Vec<f64> = unit.column(var).collect();
        u.sort_by(f64::total_cmp);
        let n = u.len() as f64;
        let ks = u
            .iter()
            .enumerate()
            .map(|(i, &x)| (x - i as f64 / n).abs().max(((i + 1) as f64 / n - x).abs()))
            .fold(0.0, f64::max);
        println!("{}: KS distance to uniform {ks:.4}", train.schema().attribute(var).name);
    }

    let x = 45_000.0;
    let u = qt.cdf(0, x);
    println!("income {x} -> u = {u:.4} -> back to {:.1}", qt.inverse_cdf(0, u)?);

    let fp = FuzzyPartition::new(5)?;
    let sets = transform::materialize_original_space(&fp, &qt);
    for (l, t) in sets.variables[0].as_ref().expect("numeric").iter().enumerate() {
        println!(
            "income L{}: ({:.0}, {:.0}, {:.0}), membership of {x} = {:.3}",
            l + 1,
            t.left,
            t.center,
            t.right,
            fp.membership(l, u)
        );
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> fuzzyrb::Result<()> {
    run_example()
}
