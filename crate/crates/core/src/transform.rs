//! Quantile-based probability integral transform and uniform triangular
//! fuzzy partitions.
//!
//! Each numeric variable is mapped through a piecewise-linear empirical CDF
//! whose knots are the training q-quantiles `(Q_i, i/q)`. After the
//! transform every variable is roughly uniform on `[0, 1]`, so the same `L`
//! evenly spaced triangles serve all variables. The inverse CDF maps the
//! triangle vertices back to original units for reporting.

use serde::{Deserialize, Serialize};

use crate::dataset::Dataset;
use crate::error::{Error, Result};

/// Sorted training q-quantiles for each numeric variable.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct QuantileTable {
    q: usize,
    /// Indexed by attribute; `None` for nominal attributes.
    quantiles: Vec<Option<Vec<f64>>>,
}

/// Default quantile count for a training set of `n` examples.
pub fn default_quantiles(n: usize) -> usize {
    n.clamp(2, 1000)
}

/// Computes `Q_i = sorted[ceil(i*N/q) - 1]` for `i = 1..q-1` on every
/// numeric attribute of `train`.
pub fn compute_quantiles(train: &Dataset, q: usize) -> Result<QuantileTable> {
    if q < 2 {
        return Err(Error::InvalidArgument(format!("quantile count must be at least 2, got {q}")));
    }
    let schema = train.schema();
    if schema.numeric_indices().next().is_none() {
        return Err(Error::InvalidArgument(
            "quantiles need at least one numeric attribute".into(),
        ));
    }
    let n = train.len();
    let quantiles = (0..schema.num_attributes())
        .map(|f| {
            schema.is_numeric(f).then(|| {
                let mut sorted: Vec<f64> = train.column(f).collect();
                sorted.sort_unstable_by(f64::total_cmp);
                (1..q).map(|i| sorted[(i * n).div_ceil(q) - 1]).collect()
            })
        })
        .collect();
    Ok(QuantileTable { q, quantiles })
}

impl QuantileTable {
    /// Table built directly from known quantiles, mostly for tests. `knots`
    /// must hold `q - 1` non-decreasing values per numeric variable.
    pub fn from_knots(q: usize, quantiles: Vec<Option<Vec<f64>>>) -> Result<Self> {
        if q < 2 {
            return Err(Error::InvalidArgument(format!("quantile count must be at least 2, got {q}")));
        }
        for knots in quantiles.iter().flatten() {
            if knots.len() != q - 1 || knots.windows(2).any(|w| w[0].is_nan() || w[1].is_nan() || w[0] > w[1]) {
                return Err(Error::InvalidArgument(format!(
                    "expected {} non-decreasing quantiles",
                    q - 1
                )));
            }
        }
        Ok(QuantileTable { q, quantiles })
    }

    pub fn q(&self) -> usize {
        self.q
    }

    pub fn num_attributes(&self) -> usize {
        self.quantiles.len()
    }

    /// Quantiles of attribute `var`, or `None` if it is nominal.
    pub fn knots(&self, var: usize) -> Option<&[f64]> {
        self.quantiles.get(var)?.as_deref()
    }

    fn numeric_knots(&self, var: usize) -> &[f64] {
        self.knots(var)
            .unwrap_or_else(|| panic!("attribute {var} is not numeric"))
    }

    /// Empirical CDF of `x` for numeric attribute `var`.
    ///
    /// Below the first quantile the CDF is 0, above the last it is 1. A value
    /// equal to one or more knots gets the highest matching `i/q`.
    pub fn cdf(&self, var: usize, x: f64) -> f64 {
        let knots = self.numeric_knots(var);
        let q = self.q as f64;
        // number of knots <= x; knot k (1-based) is knots[k - 1]
        let below = knots.partition_point(|&k| k <= x);
        if below == 0 {
            return 0.0;
        }
        if knots[below - 1] == x {
            return below as f64 / q;
        }
        if below == knots.len() {
            return 1.0;
        }
        let (lo, hi) = (knots[below - 1], knots[below]);
        (below as f64 + (x - lo) / (hi - lo)) / q
    }

    /// Quantile function: inverse of [`QuantileTable::cdf`] on its strictly
    /// increasing segments, clamped to `[Q_1, Q_{q-1}]`.
    pub fn inverse_cdf(&self, var: usize, u: f64) -> Result<f64> {
        if !(0.0..=1.0).contains(&u) {
            return Err(Error::InvalidArgument(format!("probability {u} outside [0, 1]")));
        }
        let knots = self.numeric_knots(var);
        let scaled = u * self.q as f64;
        let last = knots.len();
        if scaled <= 1.0 {
            return Ok(knots[0]);
        }
        if scaled >= last as f64 {
            return Ok(knots[last - 1]);
        }
        let segment = (scaled.floor() as usize).clamp(1, last - 1);
        let (lo, hi) = (knots[segment - 1], knots[segment]);
        if lo == hi {
            return Ok(lo);
        }
        let frac = scaled - segment as f64;
        Ok((lo + frac * (hi - lo)).clamp(lo, hi))
    }
}

/// Replaces every numeric value of `ds` with its CDF value under `qt`.
/// Nominal values are copied unchanged.
pub fn transform_dataset(ds: &Dataset, qt: &QuantileTable) -> Result<Dataset> {
    let schema = ds.schema();
    if qt.num_attributes() != schema.num_attributes()
        || (0..schema.num_attributes()).any(|f| schema.is_numeric(f) != qt.knots(f).is_some())
    {
        return Err(Error::SchemaMismatch(
            "quantile table does not match the dataset's attributes".into(),
        ));
    }
    Ok(ds.map_values(|f, v| if schema.is_numeric(f) { qt.cdf(f, v) } else { v }))
}

/// A triangular membership function over `[0, 1]`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Triangle {
    pub left: f64,
    pub center: f64,
    pub right: f64,
}

/// `L` evenly spaced triangular fuzzy sets on `[0, 1]`: centers at
/// `l/(L-1)`, half-width `1/(L-1)`, and shoulders at both ends.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FuzzyPartition {
    sets: usize,
}

pub fn build_partition(sets: usize) -> Result<FuzzyPartition> {
    FuzzyPartition::new(sets)
}

impl FuzzyPartition {
    pub fn new(sets: usize) -> Result<Self> {
        if sets < 2 {
            return Err(Error::InvalidArgument(format!(
                "a fuzzy partition needs at least 2 sets, got {sets}"
            )));
        }
        Ok(FuzzyPartition { sets })
    }

    pub fn len(&self) -> usize {
        self.sets
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn center(&self, set: usize) -> f64 {
        set as f64 / (self.sets - 1) as f64
    }

    pub fn triangle(&self, set: usize) -> Triangle {
        let width = 1.0 / (self.sets - 1) as f64;
        let center = self.center(set);
        Triangle {
            left: if set == 0 { 0.0 } else { (center - width).max(0.0) },
            center,
            right: if set + 1 == self.sets { 1.0 } else { (center + width).min(1.0) },
        }
    }

    /// Membership of `u` (clamped to `[0, 1]`) in set `set` (0-based).
    pub fn membership(&self, set: usize, u: f64) -> f64 {
        let u = u.clamp(0.0, 1.0);
        let span = (self.sets - 1) as f64;
        (1.0 - (u * span - set as f64).abs()).max(0.0)
    }

    pub fn memberships(&self, u: f64) -> impl Iterator<Item = f64> + '_ {
        (0..self.sets).map(move |l| self.membership(l, u))
    }

    /// Set with the highest membership for `u`; the lower index wins ties.
    pub fn best_set(&self, u: f64) -> usize {
        let mut best = 0;
        let mut best_mu = f64::NEG_INFINITY;
        for (l, mu) in self.memberships(u).enumerate() {
            if mu > best_mu {
                best = l;
                best_mu = mu;
            }
        }
        best
    }
}

/// Triangle vertices of every numeric variable in original units.
#[derive(Clone, Debug, PartialEq)]
pub struct OriginalSpaceSets {
    /// Indexed by attribute; `None` for nominal attributes.
    pub variables: Vec<Option<Vec<Triangle>>>,
}

/// Maps each triangle vertex through the inverse CDF of each variable.
pub fn materialize_original_space(fp: &FuzzyPartition, qt: &QuantileTable) -> OriginalSpaceSets {
    let map = |var: usize, u: f64| qt.inverse_cdf(var, u).expect("vertices lie in [0, 1]");
    let variables = (0..qt.num_attributes())
        .map(|var| {
            qt.knots(var)?;
            Some(
                (0..fp.len())
                    .map(|set| {
                        let t = fp.triangle(set);
                        Triangle {
                            left: map(var, t.left),
                            center: map(var, t.center),
                            right: map(var, t.right),
                        }
                    })
                    .collect(),
            )
        })
        .collect();
    OriginalSpaceSets { variables }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dataset::{Attribute, Schema};
    use proptest::prelude::*;

    fn single(values: &[f64]) -> Dataset {
        let schema = Schema::new(vec![Attribute::numeric("x")], "y", ["a", "b"]).unwrap();
        let rows = values.iter().map(|&v| vec![v]).collect();
        Dataset::new(schema, rows, vec![0; values.len()]).unwrap()
    }

    fn table(q: usize, knots: &[f64]) -> QuantileTable {
        QuantileTable::from_knots(q, vec![Some(knots.to_vec())]).unwrap()
    }

    #[test]
    fn quantile_rank_convention() {
        // ranks ceil(i*4/4)-1 = 0, 1, 2
        let qt = compute_quantiles(&single(&[4.0, 2.0, 1.0, 3.0]), 4).unwrap();
        assert_eq!(qt.knots(0).unwrap(), &[1.0, 2.0, 3.0]);

        let qt = compute_quantiles(&single(&[5.0; 4]), 4).unwrap();
        assert_eq!(qt.knots(0).unwrap(), &[5.0, 5.0, 5.0]);

        // q = 2: a single median knot at rank ceil(5/2)-1 = 2
        let qt = compute_quantiles(&single(&[9.0, 1.0, 5.0, 3.0, 7.0]), 2).unwrap();
        assert_eq!(qt.knots(0).unwrap(), &[5.0]);

        assert!(compute_quantiles(&single(&[1.0]), 1).is_err());
    }

    #[test]
    fn quantiles_require_a_numeric_attribute() {
        let schema = Schema::new(vec![Attribute::nominal("c", ["a", "b"])], "y", ["p", "n"]).unwrap();
        let ds = Dataset::new(schema, vec![vec![0.0]], vec![0]).unwrap();
        assert!(compute_quantiles(&ds, 4).is_err());
    }

    #[test]
    fn cdf_interpolates_and_clamps() {
        let qt = table(4, &[1.0, 2.0, 3.0]);
        assert_eq!(qt.cdf(0, 1.5), 0.375);
        assert_eq!(qt.cdf(0, 0.5), 0.0);
        assert_eq!(qt.cdf(0, 2.0), 0.5);
        assert_eq!(qt.cdf(0, 1.0), 0.25);
        assert_eq!(qt.cdf(0, 3.0), 0.75);
        assert_eq!(qt.cdf(0, 3.5), 1.0);
    }

    #[test]
    fn cdf_is_right_continuous_on_ties() {
        let qt = table(5, &[1.0, 2.0, 2.0, 3.0]);
        assert_eq!(qt.cdf(0, 2.0), 0.6);
        assert_eq!(qt.inverse_cdf(0, 0.5).unwrap(), 2.0);
        assert_eq!(qt.inverse_cdf(0, 0.45).unwrap(), 2.0);
    }

    #[test]
    fn inverse_cdf_examples() {
        let qt = table(4, &[1.0, 2.0, 3.0]);
        assert_eq!(qt.inverse_cdf(0, 0.375).unwrap(), 1.5);
        assert_eq!(qt.inverse_cdf(0, 0.0).unwrap(), 1.0);
        assert_eq!(qt.inverse_cdf(0, 0.25).unwrap(), 1.0);
        assert_eq!(qt.inverse_cdf(0, 0.9).unwrap(), 3.0);
        assert_eq!(qt.inverse_cdf(0, 1.0).unwrap(), 3.0);
        assert!(qt.inverse_cdf(0, 1.5).is_err());
        assert!(qt.inverse_cdf(0, -0.1).is_err());
        assert!(qt.inverse_cdf(0, f64::NAN).is_err());
    }

    #[test]
    fn transform_leaves_nominal_untouched() {
        let schema = Schema::new(
            vec![Attribute::nominal("c", ["a", "b", "z"]), Attribute::numeric("x")],
            "y",
            ["p", "n"],
        )
        .unwrap();
        let rows = (0..20).map(|i| vec![(i % 3) as f64, i as f64 * 0.5]).collect();
        let ds = Dataset::new(schema, rows, vec![0; 20]).unwrap();
        let qt = compute_quantiles(&ds, 10).unwrap();
        let out = transform_dataset(&ds, &qt).unwrap();
        for i in 0..ds.len() {
            assert_eq!(out.value(i, 0).to_bits(), ds.value(i, 0).to_bits());
            assert!((0.0..=1.0).contains(&out.value(i, 1)));
        }
        assert_eq!(out.labels(), ds.labels());
    }

    #[test]
    fn transform_of_uniform_is_near_identity() {
        let values: Vec<f64> = (0..10_000).map(|i| (i as f64 + 0.5) / 10_000.0).collect();
        let ds = single(&values);
        let qt = compute_quantiles(&ds, 1000).unwrap();
        let out = transform_dataset(&ds, &qt).unwrap();
        for (i, &v) in values.iter().enumerate() {
            assert!((out.value(i, 0) - v).abs() <= 1.0 / 1000.0, "at {v}");
        }
    }

    #[test]
    fn transform_rejects_mismatched_table() {
        let ds = single(&[1.0, 2.0]);
        let qt = QuantileTable::from_knots(2, vec![None]).unwrap();
        assert!(transform_dataset(&ds, &qt).is_err());
    }

    #[test]
    fn partition_memberships() {
        let fp = build_partition(5).unwrap();
        let at_half: Vec<f64> = fp.memberships(0.5).collect();
        assert_eq!(at_half, vec![0.0, 0.0, 1.0, 0.0, 0.0]);
        let at_eighth: Vec<f64> = fp.memberships(0.125).collect();
        assert_eq!(at_eighth, vec![0.5, 0.5, 0.0, 0.0, 0.0]);
        assert_eq!(fp.best_set(0.125), 0);
        assert!(build_partition(1).is_err());
        assert_eq!(
            fp.triangle(0),
            Triangle { left: 0.0, center: 0.0, right: 0.25 }
        );
        assert_eq!(
            fp.triangle(4),
            Triangle { left: 0.75, center: 1.0, right: 1.0 }
        );
    }

    #[test]
    fn three_set_discretization() {
        let fp = build_partition(3).unwrap();
        let sets: Vec<usize> = [0.15, 0.82, 0.51].iter().map(|&u| fp.best_set(u)).collect();
        assert_eq!(sets, vec![0, 2, 1]);
    }

    #[test]
    fn original_space_vertices() {
        // uniform grid on [0, 10]: inverse CDF at 0, .25, .5, .75, 1
        let values: Vec<f64> = (0..=1000).map(|i| i as f64 / 100.0).collect();
        let qt = compute_quantiles(&single(&values), 1000).unwrap();
        let fp = build_partition(5).unwrap();
        let sets = materialize_original_space(&fp, &qt);
        let centers: Vec<f64> = sets.variables[0].as_ref().unwrap().iter().map(|t| t.center).collect();
        let expected: Vec<f64> = [0.0, 0.25, 0.5, 0.75, 1.0]
            .iter()
            .map(|&u| qt.inverse_cdf(0, u).unwrap())
            .collect();
        assert_eq!(centers, expected);
        for (c, want) in centers.iter().zip([0.0, 2.5, 5.0, 7.5, 10.0]) {
            assert!((c - want).abs() < 0.05, "{c} vs {want}");
        }
        assert_eq!(sets.variables[0].as_ref().unwrap()[0].left, qt.knots(0).unwrap()[0]);

        let constant = compute_quantiles(&single(&[3.0; 8]), 4).unwrap();
        let sets = materialize_original_space(&fp, &constant);
        for t in sets.variables[0].as_ref().unwrap() {
            assert_eq!([t.left, t.center, t.right], [3.0; 3]);
        }
    }

    proptest! {
        #[test]
        fn partition_of_unity(u in 0.0f64..=1.0, sets in 2usize..12) {
            let fp = build_partition(sets).unwrap();
            let total: f64 = fp.memberships(u).sum();
            prop_assert!((total - 1.0).abs() <= 1e-12);
        }

        #[test]
        fn cdf_and_inverse_are_monotone(
            mut values in proptest::collection::vec(-50.0f64..50.0, 2..60),
            q in 2usize..40,
            a in -60.0f64..60.0,
            b in -60.0f64..60.0,
            u in 0.0f64..=1.0,
            v in 0.0f64..=1.0,
        ) {
            values.iter_mut().for_each(|x| *x = (*x * 4.0).round() / 4.0);
            let qt = compute_quantiles(&single(&values), q).unwrap();
            let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
            prop_assert!(qt.cdf(0, lo) <= qt.cdf(0, hi));
            let (lo, hi) = if u <= v { (u, v) } else { (v, u) };
            prop_assert!(qt.inverse_cdf(0, lo).unwrap() <= qt.inverse_cdf(0, hi).unwrap());
        }

        #[test]
        fn inverse_round_trip(
            values in proptest::collection::vec(-1e3f64..1e3, 3..80),
            q in 3usize..30,
            t in 0.001f64..0.999,
        ) {
            let qt = compute_quantiles(&single(&values), q).unwrap();
            let knots = qt.knots(0).unwrap();
            for w in knots.windows(2) {
                if w[0] < w[1] {
                    let x = w[0] + t * (w[1] - w[0]);
                    if x > w[0] && x < w[1] {
                        let back = qt.inverse_cdf(0, qt.cdf(0, x)).unwrap();
                        prop_assert!((back - x).abs() <= 1e-9 * (1.0 + x.abs()), "{x} -> {back}");
                    }
                }
            }
        }
    }
}
