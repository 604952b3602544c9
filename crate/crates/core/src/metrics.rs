//! Confusion matrices, classification measures and scalability quotients.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fuzzy::Prediction;

/// Rows are true classes; columns are predicted classes plus a final
/// no-cover column, which counts as an error everywhere.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConfusionMatrix {
    classes: usize,
    counts: Vec<u64>,
}

impl ConfusionMatrix {
    pub fn new(classes: usize) -> Self {
        ConfusionMatrix {
            classes,
            counts: vec![0; classes * (classes + 1)],
        }
    }

    /// Builds a matrix from rows of predicted counts, without no-cover.
    pub fn from_rows(rows: &[Vec<u64>]) -> Self {
        let mut cm = ConfusionMatrix::new(rows.len());
        for (actual, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), rows.len(), "square matrix expected");
            for (predicted, &n) in row.iter().enumerate() {
                cm.add(actual, Some(predicted), n);
            }
        }
        cm
    }

    pub fn from_predictions(labels: &[usize], predictions: &[Prediction], classes: usize) -> Self {
        let mut cm = ConfusionMatrix::new(classes);
        for (&y, p) in labels.iter().zip(predictions) {
            cm.record(y, p.class);
        }
        cm
    }

    fn column(&self, predicted: Option<usize>) -> usize {
        predicted.unwrap_or(self.classes)
    }

    pub fn record(&mut self, actual: usize, predicted: Option<usize>) {
        self.add(actual, predicted, 1);
    }

    pub fn add(&mut self, actual: usize, predicted: Option<usize>, n: u64) {
        let col = self.column(predicted);
        self.counts[actual * (self.classes + 1) + col] += n;
    }

    pub fn merge(&mut self, other: &ConfusionMatrix) {
        assert_eq!(self.classes, other.classes, "merging matrices of different shape");
        self.counts.iter_mut().zip(&other.counts).for_each(|(a, b)| *a += b);
    }

    pub fn classes(&self) -> usize {
        self.classes
    }

    pub fn get(&self, actual: usize, predicted: Option<usize>) -> u64 {
        self.counts[actual * (self.classes + 1) + self.column(predicted)]
    }

    pub fn no_cover(&self, actual: usize) -> u64 {
        self.get(actual, None)
    }

    pub fn total_no_cover(&self) -> u64 {
        (0..self.classes).map(|m| self.no_cover(m)).sum()
    }

    /// `N_m`, including no-cover examples.
    pub fn class_total(&self, actual: usize) -> u64 {
        let w = self.classes + 1;
        self.counts[actual * w..(actual + 1) * w].iter().sum()
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }

    pub fn correct(&self) -> u64 {
        (0..self.classes).map(|m| self.get(m, Some(m))).sum()
    }

    pub fn tpr(&self, class: usize) -> Result<f64> {
        let n = self.class_total(class);
        if n == 0 {
            return Err(Error::EmptyClass { class: format!("#{class}") });
        }
        Ok(self.get(class, Some(class)) as f64 / n as f64)
    }

    pub fn tprs(&self) -> Result<Vec<f64>> {
        (0..self.classes).map(|m| self.tpr(m)).collect()
    }

    pub fn accuracy(&self) -> Result<f64> {
        let n = self.total();
        if n == 0 {
            return Err(Error::NoExamples);
        }
        Ok(self.correct() as f64 / n as f64)
    }

    pub fn acc_class(&self) -> Result<f64> {
        let tprs = self.tprs()?;
        Ok(tprs.iter().sum::<f64>() / tprs.len() as f64)
    }

    /// Geometric mean of the true positive rates.
    pub fn gm(&self) -> Result<f64> {
        Ok(geometric_mean(&self.tprs()?))
    }

    pub fn render(&self, class_names: &[String]) -> String {
        let mut out = String::from("actual\\predicted");
        for name in class_names {
            write!(out, "\t{name}").unwrap();
        }
        out.push_str("\tNO_COVER\n");
        for (m, name) in class_names.iter().enumerate() {
            out.push_str(name);
            for p in 0..self.classes {
                write!(out, "\t{}", self.get(m, Some(p))).unwrap();
            }
            writeln!(out, "\t{}", self.no_cover(m)).unwrap();
        }
        out
    }
}

pub fn accuracy(cm: &ConfusionMatrix) -> Result<f64> {
    cm.accuracy()
}

pub fn acc_class(cm: &ConfusionMatrix) -> Result<f64> {
    cm.acc_class()
}

pub fn gm(cm: &ConfusionMatrix) -> Result<f64> {
    cm.gm()
}

/// M-th root of the product, in log space; exactly 0 when a factor is 0.
pub fn geometric_mean(values: &[f64]) -> f64 {
    if values.is_empty() || values.iter().any(|&v| v <= 0.0) {
        return 0.0;
    }
    let mean_log = values.iter().map(|v| v.ln()).sum::<f64>() / values.len() as f64;
    mean_log.exp()
}

/// Classification quality plus model complexity.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MetricReport {
    pub accuracy: f64,
    pub acc_class: f64,
    pub gm: f64,
    pub tpr: Vec<f64>,
    pub examples: u64,
    pub no_cover: u64,
    pub rules: usize,
    pub mean_rule_length: f64,
    pub fuzzy_sets: usize,
    /// `#rules * mean rule length * fuzzy sets per variable`.
    pub total_rule_length: f64,
}

impl MetricReport {
    pub fn new(cm: &ConfusionMatrix, rules: usize, mean_rule_length: f64, fuzzy_sets: usize) -> Result<Self> {
        Ok(MetricReport {
            accuracy: cm.accuracy()?,
            acc_class: cm.acc_class()?,
            gm: cm.gm()?,
            tpr: cm.tprs()?,
            examples: cm.total(),
            no_cover: cm.total_no_cover(),
            rules,
            mean_rule_length,
            fuzzy_sets,
            total_rule_length: rules as f64 * mean_rule_length * fuzzy_sets as f64,
        })
    }

    pub fn to_text(&self, class_names: &[String]) -> String {
        let mut out = String::new();
        writeln!(out, "examples\t{}", self.examples).unwrap();
        writeln!(out, "accuracy\t{:.6}", self.accuracy).unwrap();
        writeln!(out, "acc_class\t{:.6}", self.acc_class).unwrap();
        writeln!(out, "gm\t{:.6}", self.gm).unwrap();
        for (name, tpr) in class_names.iter().zip(&self.tpr) {
            writeln!(out, "tpr[{name}]\t{tpr:.6}").unwrap();
        }
        writeln!(out, "no_cover\t{}", self.no_cover).unwrap();
        writeln!(out, "rules\t{}", self.rules).unwrap();
        writeln!(out, "mean_rule_length\t{:.4}", self.mean_rule_length).unwrap();
        writeln!(out, "fuzzy_sets\t{}", self.fuzzy_sets).unwrap();
        writeln!(out, "total_rule_length\t{:.4}", self.total_rule_length).unwrap();
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TimingCell {
    pub cores: usize,
    pub fraction: f64,
    pub seconds: f64,
}

/// Wall-clock runtimes indexed by (cores, data fraction). The smallest
/// core count and the smallest fraction form the `m = 1` baseline.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct TimingGrid {
    cells: Vec<TimingCell>,
}

const FRACTION_TOLERANCE: f64 = 1e-9;

impl TimingGrid {
    pub fn new() -> Self {
        TimingGrid::default()
    }

    /// Records a runtime, replacing any earlier one for the same cell.
    pub fn insert(&mut self, cores: usize, fraction: f64, seconds: f64) -> Result<()> {
        if cores == 0 || !(fraction > 0.0 && fraction <= 1.0) {
            return Err(Error::InvalidArgument(format!(
                "grid cell needs cores >= 1 and a fraction in (0, 1], got ({cores}, {fraction})"
            )));
        }
        if !(seconds.is_finite() && seconds > 0.0) {
            return Err(Error::InvalidArgument(format!("runtimes must be positive, got {seconds}")));
        }
        match self.position(cores, fraction) {
            Some(k) => self.cells[k].seconds = seconds,
            None => self.cells.push(TimingCell { cores, fraction, seconds }),
        }
        Ok(())
    }

    fn position(&self, cores: usize, fraction: f64) -> Option<usize> {
        self.cells
            .iter()
            .position(|c| c.cores == cores && (c.fraction - fraction).abs() <= FRACTION_TOLERANCE)
    }

    pub fn cells(&self) -> &[TimingCell] {
        &self.cells
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn get(&self, cores: usize, fraction: f64) -> Result<f64> {
        self.position(cores, fraction)
            .map(|k| self.cells[k].seconds)
            .ok_or(Error::MissingCell { cores, fraction })
    }

    /// Distinct core counts, ascending.
    pub fn cores(&self) -> Vec<usize> {
        let mut cores: Vec<usize> = self.cells.iter().map(|c| c.cores).collect();
        cores.sort_unstable();
        cores.dedup();
        cores
    }

    /// Distinct fractions, ascending.
    pub fn fractions(&self) -> Vec<f64> {
        let mut fractions: Vec<f64> = self.cells.iter().map(|c| c.fraction).collect();
        fractions.sort_by(f64::total_cmp);
        fractions.dedup_by(|a, b| (*a - *b).abs() <= FRACTION_TOLERANCE);
        fractions
    }

    fn baseline(&self) -> Result<(usize, f64)> {
        let cores = self.cores();
        let fractions = self.fractions();
        match (cores.first(), fractions.first()) {
            (Some(&c), Some(&f)) => Ok((c, f)),
            _ => Err(Error::MissingCell { cores: 0, fraction: 0.0 }),
        }
    }

    /// Runtime on the baseline core count over runtime on `m` times as many
    /// cores, at a fixed data fraction.
    pub fn speedup(&self, m: usize, fraction: f64) -> Result<f64> {
        let (c0, _) = self.baseline()?;
        Ok(self.get(c0, fraction)? / self.get(c0 * m, fraction)?)
    }

    /// Runtime on `m` times the baseline data over runtime on the baseline
    /// data, at a fixed core count.
    pub fn sizeup(&self, m: usize, cores: usize) -> Result<f64> {
        let (_, f0) = self.baseline()?;
        Ok(self.get(cores, f0 * m as f64)? / self.get(cores, f0)?)
    }

    /// Baseline runtime over the runtime of an `m` times larger job on an
    /// `m` times larger system.
    pub fn scaleup(&self, m: usize) -> Result<f64> {
        let (c0, f0) = self.baseline()?;
        Ok(self.get(c0, f0)? / self.get(c0 * m, f0 * m as f64)?)
    }

    /// Speedup, sizeup and scaleup for every `m` the grid supports.
    pub fn scalability(&self) -> Result<Scalability> {
        let (c0, f0) = self.baseline()?;
        let mut out = Scalability::default();
        for &fraction in &self.fractions() {
            for &cores in &self.cores() {
                if cores % c0 == 0 && self.get(cores, fraction).is_ok() && self.get(c0, fraction).is_ok() {
                    let m = cores / c0;
                    out.speedup.push(ScalabilityPoint { m, cores, fraction, value: self.speedup(m, fraction)? });
                }
            }
        }
        for &cores in &self.cores() {
            for &fraction in &self.fractions() {
                let ratio = fraction / f0;
                let m = ratio.round() as usize;
                if (ratio - m as f64).abs() <= 1e-6 && self.get(cores, f0).is_ok() {
                    out.sizeup.push(ScalabilityPoint { m, cores, fraction, value: self.sizeup(m, cores)? });
                }
            }
        }
        for &cores in &self.cores() {
            let m = cores / c0;
            if cores % c0 == 0 {
                if let Ok(value) = self.scaleup(m) {
                    out.scaleup.push(ScalabilityPoint { m, cores, fraction: f0 * m as f64, value });
                }
            }
        }
        Ok(out)
    }

    pub fn render(&self) -> String {
        let fractions = self.fractions();
        let mut out = String::from("cores");
        for f in &fractions {
            write!(out, "\t{:.0}%", f * 100.0).unwrap();
        }
        out.push('\n');
        for cores in self.cores() {
            write!(out, "{cores}").unwrap();
            for &f in &fractions {
                match self.get(cores, f) {
                    Ok(s) => write!(out, "\t{s:.4}").unwrap(),
                    Err(_) => out.push_str("\t-"),
                }
            }
            out.push('\n');
        }
        out
    }
}

pub fn speedup(grid: &TimingGrid, m: usize, fraction: f64) -> Result<f64> {
    grid.speedup(m, fraction)
}

pub fn sizeup(grid: &TimingGrid, m: usize, cores: usize) -> Result<f64> {
    grid.sizeup(m, cores)
}

pub fn scaleup(grid: &TimingGrid, m: usize) -> Result<f64> {
    grid.scaleup(m)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScalabilityPoint {
    pub m: usize,
    pub cores: usize,
    pub fraction: f64,
    pub value: f64,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Scalability {
    pub speedup: Vec<ScalabilityPoint>,
    pub sizeup: Vec<ScalabilityPoint>,
    pub scaleup: Vec<ScalabilityPoint>,
}

impl Scalability {
    pub fn render(&self) -> String {
        let mut out = String::new();
        for (name, points) in [("speedup", &self.speedup), ("sizeup", &self.sizeup), ("scaleup", &self.scaleup)] {
            for p in points {
                writeln!(out, "{name}\tm={}\tcores={}\tfraction={}\t{:.4}", p.m, p.cores, p.fraction, p.value).unwrap();
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn hand_computed_matrix() {
        let cm = ConfusionMatrix::from_rows(&[vec![8, 2], vec![1, 9]]);
        assert_eq!(cm.accuracy().unwrap(), 0.85);
        assert!((cm.acc_class().unwrap() - 0.85).abs() < 1e-15);
        assert!((cm.gm().unwrap() - 0.72f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn perfect_and_dead_class() {
        let perfect = ConfusionMatrix::from_rows(&[vec![5, 0], vec![0, 7]]);
        assert_eq!(perfect.accuracy().unwrap(), 1.0);
        assert_eq!(perfect.acc_class().unwrap(), 1.0);
        assert_eq!(perfect.gm().unwrap(), 1.0);

        let dead = ConfusionMatrix::from_rows(&[vec![95, 0], vec![5, 0]]);
        assert_eq!(dead.gm().unwrap(), 0.0);
        assert_eq!(dead.accuracy().unwrap(), 0.95);
    }

    #[test]
    fn no_cover_is_an_error() {
        let mut cm = ConfusionMatrix::new(2);
        cm.record(0, Some(0));
        cm.record(0, None);
        cm.record(1, Some(1));
        cm.record(1, Some(1));
        assert_eq!(cm.total(), 4);
        assert_eq!(cm.class_total(0), 2);
        assert_eq!(cm.tpr(0).unwrap(), 0.5);
        assert_eq!(cm.accuracy().unwrap(), 0.75);
        assert_eq!(cm.total_no_cover(), 1);
    }

    #[test]
    fn empty_class_is_rejected() {
        let cm = ConfusionMatrix::from_rows(&[vec![3, 1], vec![0, 0]]);
        assert!(matches!(cm.gm(), Err(Error::EmptyClass { .. })));
        assert!(cm.acc_class().is_err());
    }

    #[test]
    fn merge_adds_elementwise() {
        let mut a = ConfusionMatrix::from_rows(&[vec![1, 2], vec![3, 4]]);
        a.merge(&ConfusionMatrix::from_rows(&[vec![10, 0], vec![0, 10]]));
        assert_eq!(a, ConfusionMatrix::from_rows(&[vec![11, 2], vec![3, 14]]));
    }

    #[test]
    fn report_totals() {
        let cm = ConfusionMatrix::from_rows(&[vec![8, 2], vec![1, 9]]);
        let report = MetricReport::new(&cm, 10, 2.5, 5).unwrap();
        assert_eq!(report.total_rule_length, 125.0);
        let json: MetricReport = serde_json::from_str(&report.to_json()).unwrap();
        assert_eq!(json, report);
        assert!(report.to_text(&["a".into(), "b".into()]).contains("tpr[b]\t0.900000"));
    }

    #[test]
    fn scalability_quotients() {
        let mut grid = TimingGrid::new();
        grid.insert(1, 1.0, 100.0).unwrap();
        grid.insert(4, 1.0, 25.0).unwrap();
        assert_eq!(grid.speedup(4, 1.0).unwrap(), 4.0);

        let mut grid = TimingGrid::new();
        grid.insert(2, 0.25, 10.0).unwrap();
        grid.insert(2, 1.0, 40.0).unwrap();
        assert_eq!(grid.sizeup(4, 2).unwrap(), 4.0);

        let mut grid = TimingGrid::new();
        grid.insert(1, 0.25, 50.0).unwrap();
        grid.insert(4, 1.0, 60.0).unwrap();
        assert!((grid.scaleup(4).unwrap() - 50.0 / 60.0).abs() < 1e-15);
        assert!(matches!(grid.speedup(4, 0.25), Err(Error::MissingCell { cores: 4, .. })));
    }

    #[test]
    fn single_cell_grid_is_one() {
        let mut grid = TimingGrid::new();
        grid.insert(1, 1.0, 3.5).unwrap();
        assert_eq!(grid.speedup(1, 1.0).unwrap(), 1.0);
        assert_eq!(grid.sizeup(1, 1).unwrap(), 1.0);
        assert_eq!(grid.scaleup(1).unwrap(), 1.0);
        assert!(grid.insert(1, 0.5, 0.0).is_err());
        assert!(grid.insert(0, 0.5, 1.0).is_err());
    }

    #[test]
    fn full_grid_tables() {
        let mut grid = TimingGrid::new();
        for (c, f, s) in [(1, 0.5, 4.0), (1, 1.0, 8.0), (2, 0.5, 2.5), (2, 1.0, 5.0)] {
            grid.insert(c, f, s).unwrap();
        }
        let table = grid.scalability().unwrap();
        assert_eq!(table.speedup.len(), 4);
        assert_eq!(table.sizeup.len(), 4);
        assert_eq!(table.scaleup.len(), 2);
        assert_eq!(table.scaleup[1].value, 4.0 / 5.0);
        assert!(table.speedup.iter().chain(&table.sizeup).chain(&table.scaleup).filter(|p| p.m == 1).all(|p| p.value == 1.0));
        assert!(grid.render().starts_with("cores\t50%\t100%"));
    }

    proptest! {
        #[test]
        fn gm_never_exceeds_acc_class(rows in proptest::collection::vec(proptest::collection::vec(0u64..50, 3), 3)) {
            let mut rows = rows;
            for (m, row) in rows.iter_mut().enumerate() {
                row[m] += 1;
            }
            let cm = ConfusionMatrix::from_rows(&rows);
            let gm = cm.gm().unwrap();
            let ac = cm.acc_class().unwrap();
            prop_assert!(gm <= ac + 1e-12);
            // accuracy equals the class-weighted sum of TPRs
            let weighted: f64 = (0..3).map(|m| cm.tpr(m).unwrap() * cm.class_total(m) as f64).sum::<f64>() / cm.total() as f64;
            prop_assert!((weighted - cm.accuracy().unwrap()).abs() < 1e-12);
        }
    }
}
