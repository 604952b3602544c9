//! In-process partitioned map/reduce.
//!
//! Partition tasks are pure functions of one partition. Their partial results
//! are always returned in partition-index order and merged by a left fold in
//! that order, whatever order the worker threads finish in. Real-valued
//! accumulations that must not depend on where partition boundaries fall use
//! [`ExactSum`], whose result is the correctly rounded sum of its inputs.

use std::ops::Deref;
use std::sync::Arc;

use rayon::prelude::*;

use crate::dataset::{Partition, PartitionedDataset};
use crate::error::{Error, Result};

pub struct Engine {
    pool: rayon::ThreadPool,
}

impl Engine {
    /// Engine backed by `threads` worker threads (0 means one per CPU).
    pub fn new(threads: usize) -> Result<Self> {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .thread_name(|i| format!("fuzzyrb-worker-{i}"))
            .build()
            .map_err(|e| Error::InvalidArgument(format!("thread pool: {e}")))?;
        Ok(Engine { pool })
    }

    pub fn threads(&self) -> usize {
        self.pool.current_num_threads()
    }

    /// Runs `task` on every partition; `partials[i]` is the result for
    /// partition `i`.
    pub fn map_partitions<T, F>(&self, data: &PartitionedDataset<'_>, task: F) -> Vec<T>
    where
        T: Send,
        F: Fn(Partition) -> T + Sync + Send,
    {
        let partitions: Vec<Partition> = data.partitions().collect();
        self.pool
            .install(|| partitions.into_par_iter().map(&task).collect())
    }

    /// Runs `task(i)` for `i in 0..n`, results in index order. For state
    /// already split per partition, such as precomputed tables.
    pub fn map_indexed<T, F>(&self, n: usize, task: F) -> Vec<T>
    where
        T: Send,
        F: Fn(usize) -> T + Sync + Send,
    {
        self.pool.install(|| (0..n).into_par_iter().map(&task).collect())
    }

    /// Fallible [`Engine::map_partitions`]. The first failing partition (by
    /// index) aborts the plan and is named in the error.
    pub fn try_map_partitions<T, F>(&self, data: &PartitionedDataset<'_>, task: F) -> Result<Vec<T>>
    where
        T: Send,
        F: Fn(Partition) -> Result<T> + Sync + Send,
    {
        self.map_partitions(data, |p| {
            let index = p.index;
            task(p).map_err(|source| Error::Task {
                partition: index,
                source: Box::new(source),
            })
        })
        .into_iter()
        .collect()
    }

    /// Map then [`reduce_indexed`] with an identity element.
    pub fn map_reduce<T, F, C>(&self, data: &PartitionedDataset<'_>, task: F, identity: T, combine: C) -> T
    where
        T: Send,
        F: Fn(Partition) -> T + Sync + Send,
        C: FnMut(T, T) -> T,
    {
        let partials = self.map_partitions(data, task);
        reduce_indexed(partials, Some(identity), combine).expect("identity supplied")
    }
}

impl std::fmt::Debug for Engine {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Engine").field("threads", &self.threads()).finish()
    }
}

/// Left fold of `partials` in index order. With no partials the identity is
/// returned, and its absence is an error.
pub fn reduce_indexed<T>(
    partials: Vec<T>,
    identity: Option<T>,
    mut combine: impl FnMut(T, T) -> T,
) -> Result<T> {
    let mut iter = partials.into_iter();
    let first = match identity {
        Some(identity) => identity,
        None => iter.next().ok_or_else(|| {
            Error::InvalidArgument("reduce over zero partials needs an identity element".into())
        })?,
    };
    Ok(iter.fold(first, &mut combine))
}

/// Read-only snapshot shared with every partition task.
#[derive(Debug)]
pub struct Broadcast<T>(Arc<T>);

impl<T> Broadcast<T> {
    pub fn new(value: T) -> Self {
        Broadcast(Arc::new(value))
    }
}

impl<T> Clone for Broadcast<T> {
    fn clone(&self) -> Self {
        Broadcast(Arc::clone(&self.0))
    }
}

impl<T> Deref for Broadcast<T> {
    type Target = T;

    fn deref(&self) -> &T {
        &self.0
    }
}

pub fn broadcast<T>(value: T) -> Broadcast<T> {
    Broadcast::new(value)
}

/// Error-free floating-point accumulator.
///
/// Keeps the running sum as a list of non-overlapping partials, so no
/// rounding happens until [`ExactSum::value`], which returns the correctly
/// rounded sum. The result is therefore independent of the order in which
/// values are added or accumulators are merged.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct ExactSum {
    partials: Vec<f64>,
}

impl ExactSum {
    pub fn new() -> Self {
        ExactSum::default()
    }

    pub fn add(&mut self, mut x: f64) {
        let mut kept = 0;
        for j in 0..self.partials.len() {
            let mut y = self.partials[j];
            if x.abs() < y.abs() {
                std::mem::swap(&mut x, &mut y);
            }
            let hi = x + y;
            let lo = y - (hi - x);
            if lo != 0.0 {
                self.partials[kept] = lo;
                kept += 1;
            }
            x = hi;
        }
        self.partials.truncate(kept);
        self.partials.push(x);
    }

    pub fn merge(&mut self, other: &ExactSum) {
        for &p in &other.partials {
            self.add(p);
        }
    }

    pub fn value(&self) -> f64 {
        let p = &self.partials;
        let mut n = p.len();
        if n == 0 {
            return 0.0;
        }
        n -= 1;
        let mut hi = p[n];
        let mut lo = 0.0;
        while n > 0 {
            let x = hi;
            n -= 1;
            let y = p[n];
            hi = x + y;
            let yr = hi - x;
            lo = y - yr;
            if lo != 0.0 {
                break;
            }
        }
        // round-half-even correction when the remaining partials push the
        // tail past the halfway point
        if n > 0 && ((lo < 0.0 && p[n - 1] < 0.0) || (lo > 0.0 && p[n - 1] > 0.0)) {
            let y = lo * 2.0;
            let x = hi + y;
            if y == x - hi {
                hi = x;
            }
        }
        hi
    }
}

impl Extend<f64> for ExactSum {
    fn extend<I: IntoIterator<Item = f64>>(&mut self, iter: I) {
        iter.into_iter().for_each(|x| self.add(x));
    }
}

impl FromIterator<f64> for ExactSum {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut sum = ExactSum::new();
        sum.extend(iter);
        sum
    }
}
