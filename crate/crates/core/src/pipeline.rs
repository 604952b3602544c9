//! End-to-end training, evaluation, cross-validation and benchmarking.

use std::fmt::Write as _;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::chc::{self, ChcObserver};
use crate::config::Config;
use crate::dataset::{self, Dataset};
use crate::engine::Engine;
use crate::error::Result;
use crate::fuzzy::Prediction;
use crate::induction::{self, Induction};
use crate::metrics::{ConfusionMatrix, MetricReport, Scalability, TimingGrid};
use crate::model::{Model, TrainingSummary};
use crate::transform;

/// Wall-clock seconds per stage.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Timings {
    pub transform: f64,
    pub induction: f64,
    pub selection: f64,
    pub total: f64,
}

#[derive(Clone, Debug)]
pub struct Fit {
    pub model: Model,
    pub induction: Induction,
    pub timings: Timings,
}

/// Number of quantiles used for `n` training examples.
pub fn quantile_count(cfg: &Config, n: usize) -> usize {
    n.min(cfg.quantiles).max(2)
}

/// Partition count actually used for `n` examples.
fn partitions_for(requested: usize, n: usize) -> usize {
    requested.clamp(1, n.max(1))
}

/// Transform, induction and (unless lightweight) CHC selection.
pub fn fit(
    engine: &Engine,
    train: &Dataset,
    cfg: &Config,
    partitions: usize,
    observer: &mut dyn ChcObserver,
) -> Result<Fit> {
    cfg.validate()?;
    let start = Instant::now();
    let mut timings = Timings::default();

    let quantiles = transform::compute_quantiles(train, quantile_count(cfg, train.len()))?;
    let transformed = transform::transform_dataset(train, &quantiles)?;
    let data = dataset::partition(&transformed, partitions_for(partitions, train.len()))?;
    timings.transform = start.elapsed().as_secs_f64();

    let t = Instant::now();
    let induction = induction::induce(engine, &data, &cfg.induction)?;
    timings.induction = t.elapsed().as_secs_f64();

    let t = Instant::now();
    let (rule_base, evaluations) = if cfg.lightweight {
        (induction.rule_base.clone(), 0)
    } else {
        let outcome = chc::run(
            engine,
            &induction.rule_base,
            &data,
            &cfg.chc,
            cfg.induction.cost_sensitive,
            observer,
        )?;
        (outcome.rule_base, outcome.evaluations)
    };
    timings.selection = t.elapsed().as_secs_f64();
    timings.total = start.elapsed().as_secs_f64();

    let summary = TrainingSummary {
        examples: train.len(),
        induction: induction.trace.clone(),
        induced_rules: induction.rule_base.len(),
        evaluations,
    };
    Ok(Fit {
        model: Model {
            quantiles,
            rule_base,
            config: cfg.clone(),
            summary,
        },
        induction,
        timings,
    })
}

pub fn predict(model: &Model, data: &Dataset) -> Result<Vec<Prediction>> {
    model.predict(data)
}

pub fn confusion_matrix(model: &Model, data: &Dataset) -> Result<ConfusionMatrix> {
    let predictions = model.predict(data)?;
    Ok(ConfusionMatrix::from_predictions(
        data.labels(),
        &predictions,
        data.schema().num_classes(),
    ))
}

pub fn evaluate(model: &Model, data: &Dataset) -> Result<MetricReport> {
    let cm = confusion_matrix(model, data)?;
    let rb = &model.rule_base;
    MetricReport::new(&cm, rb.len(), rb.mean_rule_length(), rb.partition().len())
}

/// Quality and complexity of one fold, or their mean over folds.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CvRow {
    pub accuracy: f64,
    pub acc_class: f64,
    pub gm: f64,
    pub rules: f64,
    pub mean_rule_length: f64,
    pub total_rule_length: f64,
}

impl CvRow {
    fn from_report(r: &MetricReport) -> Self {
        CvRow {
            accuracy: r.accuracy,
            acc_class: r.acc_class,
            gm: r.gm,
            rules: r.rules as f64,
            mean_rule_length: r.mean_rule_length,
            total_rule_length: r.total_rule_length,
        }
    }

    fn mean(rows: &[CvRow]) -> Self {
        let n = rows.len() as f64;
        let avg = |f: fn(&CvRow) -> f64| rows.iter().map(f).sum::<f64>() / n;
        CvRow {
            accuracy: avg(|r| r.accuracy),
            acc_class: avg(|r| r.acc_class),
            gm: avg(|r| r.gm),
            rules: avg(|r| r.rules),
            mean_rule_length: avg(|r| r.mean_rule_length),
            total_rule_length: avg(|r| r.total_rule_length),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CvReport {
    pub folds: Vec<CvRow>,
    pub mean: CvRow,
}

impl CvReport {
    pub fn to_text(&self) -> String {
        let mut out = String::from("fold\tacc\tacc_class\tgm\trules\trl\ttrl\n");
        let rows = self
            .folds
            .iter()
            .enumerate()
            .map(|(k, r)| ((k + 1).to_string(), r))
            .chain(std::iter::once(("mean".to_string(), &self.mean)));
        for (label, r) in rows {
            writeln!(
                out,
                "{label}\t{:.6}\t{:.6}\t{:.6}\t{:.2}\t{:.4}\t{:.2}",
                r.accuracy, r.acc_class, r.gm, r.rules, r.mean_rule_length, r.total_rule_length
            )
            .unwrap();
        }
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

/// Stratified k-fold cross-validation: fit on each training part, evaluate
/// on the held-out fold.
pub fn cross_validate(
    engine: &Engine,
    data: &Dataset,
    cfg: &Config,
    k: usize,
    seed: u64,
    partitions: usize,
) -> Result<CvReport> {
    let folds = dataset::stratified_kfold(data, k, seed)?;
    let mut rows = Vec::with_capacity(k);
    for fold in &folds {
        let train = data.subset(&fold.train)?;
        let test = data.subset(&fold.test)?;
        let fit = fit(engine, &train, cfg, partitions, &mut ())?;
        rows.push(CvRow::from_report(&evaluate(&fit.model, &test)?));
    }
    let mean = CvRow::mean(&rows);
    Ok(CvReport { folds: rows, mean })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BenchReport {
    pub induction: TimingGrid,
    pub whole: TimingGrid,
    pub induction_scalability: Scalability,
    pub whole_scalability: Scalability,
    /// Cells where more data ran faster at the same core count.
    pub warnings: Vec<String>,
}

impl BenchReport {
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        writeln!(out, "rule induction runtime (s)\n{}", self.induction.render()).unwrap();
        writeln!(out, "whole learning runtime (s)\n{}", self.whole.render()).unwrap();
        writeln!(out, "rule induction scalability\n{}", self.induction_scalability.render()).unwrap();
        writeln!(out, "whole learning scalability\n{}", self.whole_scalability.render()).unwrap();
        for w in &self.warnings {
            writeln!(out, "warning: {w}").unwrap();
        }
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

/// Times induction and the whole pipeline for every (cores, fraction) cell.
/// Each fraction is a seeded class-preserving sample; the partition count
/// follows the core count.
pub fn bench(data: &Dataset, cfg: &Config, cores: &[usize], fractions: &[f64], seed: u64) -> Result<BenchReport> {
    let mut induction = TimingGrid::new();
    let mut whole = TimingGrid::new();
    let mut samples = Vec::with_capacity(fractions.len());
    for &f in fractions {
        samples.push((f, data.subset(&dataset::stratified_sample(data, f, seed)?)?));
    }
    for &c in cores {
        let engine = Engine::new(c)?;
        for (f, sample) in &samples {
            let fit = fit(&engine, sample, cfg, c, &mut ())?;
            // timer resolution floor keeps every cell positive
            induction.insert(c, *f, fit.timings.induction.max(1e-9))?;
            whole.insert(c, *f, fit.timings.total.max(1e-9))?;
        }
    }
    let mut warnings = Vec::new();
    for (name, grid) in [("induction", &induction), ("whole", &whole)] {
        for c in grid.cores() {
            let fractions = grid.fractions();
            for pair in fractions.windows(2) {
                let (a, b) = (grid.get(c, pair[0])?, grid.get(c, pair[1])?);
                if b < a {
                    warnings.push(format!(
                        "{name}: {c} cores ran {:.0}% of the data faster than {:.0}%",
                        pair[1] * 100.0,
                        pair[0] * 100.0
                    ));
                }
            }
        }
    }
    Ok(BenchReport {
        induction_scalability: induction.scalability()?,
        whole_scalability: whole.scalability()?,
        induction,
        whole,
        warnings,
    })
}
