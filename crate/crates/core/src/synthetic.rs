//! Seeded Gaussian class-mixture datasets for tests, examples and benches.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand::distr::weighted::WeightedIndex;
use rand_distr::{Distribution, Normal};

use crate::dataset::{Attribute, Dataset, Schema};
use crate::error::{Error, Result};

/// One isotropic Gaussian per class.
#[derive(Clone, Debug, PartialEq)]
pub struct GaussianMixture {
    pub means: Vec<Vec<f64>>,
    pub std_dev: f64,
    /// Class probabilities; need not be normalized.
    pub priors: Vec<f64>,
}

impl GaussianMixture {
    pub fn classes(&self) -> usize {
        self.means.len()
    }

    pub fn features(&self) -> usize {
        self.means.first().map_or(0, Vec::len)
    }

    pub fn schema(&self) -> Schema {
        let attributes = (0..self.features()).map(|f| Attribute::numeric(format!("x{f}"))).collect();
        let classes: Vec<String> = (0..self.classes()).map(|c| format!("c{c}")).collect();
        Schema::new(attributes, "class", classes).expect("generated schema is valid")
    }

    pub fn sample(&self, n: usize, seed: u64) -> Result<Dataset> {
        if self.means.is_empty() || self.means.iter().any(|m| m.len() != self.features()) {
            return Err(Error::InvalidArgument("class means must share one dimension".into()));
        }
        let noise = Normal::new(0.0, self.std_dev)
            .map_err(|e| Error::InvalidArgument(format!("standard deviation: {e}")))?;
        let pick = WeightedIndex::new(&self.priors)
            .map_err(|e| Error::InvalidArgument(format!("priors: {e}")))?;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut rows = Vec::with_capacity(n);
        let mut labels = Vec::with_capacity(n);
        for _ in 0..n {
            let c = pick.sample(&mut rng);
            rows.push(self.means[c].iter().map(|m| m + noise.sample(&mut rng)).collect());
            labels.push(c);
        }
        Dataset::new(self.schema(), rows, labels)
    }

    /// Log density of class `c` up to the shared normalizing constant.
    pub fn log_density(&self, c: usize, x: &[f64]) -> f64 {
        let d2: f64 = self.means[c].iter().zip(x).map(|(m, v)| (v - m) * (v - m)).sum();
        self.priors[c].ln() - d2 / (2.0 * self.std_dev * self.std_dev)
    }

    /// Class with the largest posterior.
    pub fn bayes_class(&self, x: &[f64]) -> usize {
        (0..self.classes())
            .max_by(|&a, &b| self.log_density(a, x).total_cmp(&self.log_density(b, x)).then(b.cmp(&a)))
            .expect("at least one class")
    }
}

/// Two classes with unit variance centred at `(-3, -3)` and `(3, 3)`.
pub fn two_gaussians() -> GaussianMixture {
    GaussianMixture {
        means: vec![vec![-3.0, -3.0], vec![3.0, 3.0]],
        std_dev: 1.0,
        priors: vec![0.5, 0.5],
    }
}

/// `classes` imbalanced classes in `features` dimensions; the means are drawn
/// from `[-2, 2]` with the given seed, so classes overlap moderately.
pub fn overlapping_mixture(features: usize, classes: usize, seed: u64) -> GaussianMixture {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed);
    let means = (0..classes)
        .map(|_| (0..features).map(|_| rng.random_range(-2.0..2.0)).collect())
        .collect();
    // priors halve from one class to the next
    let priors = (0..classes).map(|c| 0.5f64.powi(c as i32)).collect();
    GaussianMixture {
        means,
        std_dev: 1.0,
        priors,
    }
}
