//! Brute-force reference computations shared by the integration tests. They
//! deliberately avoid the library's own helpers beyond data access.

#![allow(dead_code)]

use std::collections::BTreeMap;

use fuzzyrb::dataset::{Dataset, Schema};
use fuzzyrb::synthetic;
use fuzzyrb::RuleBase;

pub type Key = Vec<(usize, usize)>;

pub fn membership(set: usize, sets: usize, u: f64) -> f64 {
    let u = u.clamp(0.0, 1.0);
    (1.0 - (u * (sets - 1) as f64 - set as f64).abs()).max(0.0)
}

pub fn best_set(sets: usize, u: f64) -> usize {
    let mut best = 0;
    for l in 1..sets {
        if membership(l, sets, u) > membership(best, sets, u) {
            best = l;
        }
    }
    best
}

fn items_of(row: &[f64], schema: &Schema, sets: usize) -> Key {
    row.iter()
        .enumerate()
        .map(|(f, &x)| (f, if schema.is_numeric(f) { best_set(sets, x) } else { x as usize }))
        .collect()
}

/// Per-class occurrence counts of every itemset of up to `max_len` items.
pub fn itemset_counts(ds: &Dataset, sets: usize, max_len: usize) -> BTreeMap<Key, Vec<u64>> {
    let schema = ds.schema();
    let f = schema.num_attributes();
    let mut counts: BTreeMap<Key, Vec<u64>> = BTreeMap::new();
    for i in 0..ds.len() {
        let items = items_of(ds.row(i), schema, sets);
        for mask in 1u32..(1 << f) {
            if mask.count_ones() as usize > max_len {
                continue;
            }
            let key: Key = (0..f).filter(|b| mask & (1 << b) != 0).map(|b| items[b]).collect();
            counts.entry(key).or_insert_with(|| vec![0; schema.num_classes()])[ds.label(i)] += 1;
        }
    }
    counts
}

pub fn matching(antecedents: &[(usize, usize)], row: &[f64], schema: &Schema, sets: usize) -> f64 {
    antecedents
        .iter()
        .map(|&(var, value)| {
            if schema.is_numeric(var) {
                membership(value, sets, row[var])
            } else if row[var] as usize == value {
                1.0
            } else {
                0.0
            }
        })
        .product()
}

/// Plain left-to-right sums of matching degrees per class.
pub fn class_sums(ds: &Dataset, antecedents: &[(usize, usize)], sets: usize) -> Vec<f64> {
    let mut sums = vec![0.0; ds.schema().num_classes()];
    for i in 0..ds.len() {
        sums[ds.label(i)] += matching(antecedents, ds.row(i), ds.schema(), sets);
    }
    sums
}

pub fn costs(ds: &Dataset) -> Vec<f64> {
    let counts = ds.class_counts();
    let max = *counts.iter().max().unwrap() as f64;
    counts.iter().map(|&c| max / c as f64).collect()
}

/// Fitness of a chromosome by classifying every example directly with the
/// selected rules.
pub fn fitness(rb: &RuleBase, ds: &Dataset, genes: &[bool], cost_sensitive: bool, delta: f64) -> f64 {
    let selected = genes.iter().filter(|&&g| g).count();
    if selected == 0 {
        return f64::NEG_INFINITY;
    }
    let schema = ds.schema();
    let sets = rb.partition().len();
    let m = schema.num_classes();
    let mut hits = vec![0usize; m];
    let mut totals = vec![0usize; m];
    for i in 0..ds.len() {
        let mut winner: Option<(f64, usize)> = None;
        for (j, rule) in rb.rules().iter().enumerate() {
            if !genes[j] {
                continue;
            }
            let key: Key = rule.antecedents.iter().map(|it| (it.var(), it.value())).collect();
            let b = matching(&key, ds.row(i), schema, sets) * rule.weight;
            if b <= 0.0 {
                continue;
            }
            winner = match winner {
                Some((wb, wc)) if wb > b || (wb == b && wc <= rule.class) => Some((wb, wc)),
                _ => Some((b, rule.class)),
            };
        }
        let y = ds.label(i);
        totals[y] += 1;
        if winner.map(|w| w.1) == Some(y) {
            hits[y] += 1;
        }
    }
    let acc = if cost_sensitive {
        let product: f64 = hits.iter().zip(&totals).map(|(&h, &t)| h as f64 / t as f64).product();
        product.powf(1.0 / m as f64)
    } else {
        hits.iter().sum::<usize>() as f64 / ds.len() as f64
    };
    let nr = genes.len();
    acc - delta * nr as f64 / (nr - selected + 1) as f64
}

/// The 10,000-row, 8-feature, 3-class synthetic training set.
pub fn synthetic_train() -> Dataset {
    synthetic::overlapping_mixture(8, 3, 42).sample(10_000, 1).unwrap()
}

pub fn rel_close(a: f64, b: f64, tol: f64) -> bool {
    a == b || (a - b).abs() <= tol * a.abs().max(b.abs())
}
