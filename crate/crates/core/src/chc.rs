//! CHC rule selection.
//!
//! A chromosome is one bit per rule of the induced base. Fitness trades the
//! training accuracy (or geometric mean, when cost-sensitive) of the selected
//! rules against how many were kept. Evaluation is distributed: every
//! example's positive association degrees are computed once, sorted, and
//! stored next to its partition, so classifying under a chromosome is a scan
//! for the first selected rule. Partial confusion matrices are merged in
//! partition order. All randomness is drawn on the driver from one seeded
//! stream.

use std::cmp::Ordering;
use std::fmt::Write as _;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::dataset::PartitionedDataset;
use crate::engine::Engine;
use crate::error::{Error, Result};
use crate::fuzzy::RuleBase;
use crate::metrics::ConfusionMatrix;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ChcConfig {
    pub population: usize,
    pub max_evaluations: usize,
    pub max_restarts: usize,
    /// Weight of the rule-count penalty.
    pub delta: f64,
    /// Probability that a restart re-randomizes a gene.
    pub restart_gamma: f64,
    /// Fraction of the initial incest threshold removed per stagnant
    /// generation.
    pub phi: f64,
    pub seed: u64,
}

impl Default for ChcConfig {
    fn default() -> Self {
        ChcConfig {
            population: 50,
            max_evaluations: 10_000,
            max_restarts: 3,
            delta: 0.15,
            restart_gamma: 0.35,
            phi: 0.01,
            seed: 0,
        }
    }
}

impl ChcConfig {
    pub fn validate(&self) -> Result<()> {
        let fail = |m: String| Err(Error::Config(m));
        if self.population < 2 {
            return fail(format!("population must be at least 2, got {}", self.population));
        }
        if self.max_evaluations == 0 {
            return fail("evaluations must be positive".into());
        }
        if self.max_restarts == 0 {
            return fail("max_restarts must be positive".into());
        }
        for (name, v) in [("delta", self.delta), ("restart_gamma", self.restart_gamma), ("phi", self.phi)] {
            if !(v > 0.0 && v < 1.0) {
                return fail(format!("{name} must be in (0, 1), got {v}"));
            }
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Chromosome {
    pub genes: Vec<bool>,
    pub fitness: f64,
}

impl Chromosome {
    pub fn selected(&self) -> usize {
        count_selected(&self.genes)
    }

    /// Survival order: higher fitness, then fewer rules, then the smaller
    /// gene vector.
    pub fn survival_cmp(&self, other: &Chromosome) -> Ordering {
        other
            .fitness
            .total_cmp(&self.fitness)
            .then_with(|| self.selected().cmp(&other.selected()))
            .then_with(|| self.genes.cmp(&other.genes))
    }
}

fn count_selected(genes: &[bool]) -> usize {
    genes.iter().filter(|&&g| g).count()
}

pub fn hamming(a: &[bool], b: &[bool]) -> usize {
    a.iter().zip(b).filter(|(x, y)| x != y).count()
}

/// One positive association degree of a rule with an example.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Association {
    pub rule: u32,
    pub class: u32,
    pub degree: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct TablePartition {
    pub labels: Vec<usize>,
    /// Per example: associations sorted by degree (descending), then class,
    /// then rule, so the first selected entry is the winning rule.
    pub entries: Vec<Vec<Association>>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct AssociationTable {
    partitions: Vec<TablePartition>,
    rules: usize,
    classes: usize,
}

impl AssociationTable {
    pub fn partitions(&self) -> &[TablePartition] {
        &self.partitions
    }

    pub fn rules(&self) -> usize {
        self.rules
    }

    pub fn classes(&self) -> usize {
        self.classes
    }

    pub fn examples(&self) -> usize {
        self.partitions.iter().map(|p| p.labels.len()).sum()
    }

    /// Winning class of example `i` of partition `p` under `genes`.
    pub fn predict(&self, p: usize, i: usize, genes: &[bool]) -> Option<usize> {
        first_selected(&self.partitions[p].entries[i], genes)
    }
}

fn first_selected(entries: &[Association], genes: &[bool]) -> Option<usize> {
    entries
        .iter()
        .find(|e| genes[e.rule as usize])
        .map(|e| e.class as usize)
}

/// Computes `mu * RW` for every rule and (transformed) example, keeping the
/// positive ones.
pub fn precompute_table(engine: &Engine, rb: &RuleBase, data: &PartitionedDataset<'_>) -> AssociationTable {
    let ds = data.dataset();
    let partitions = engine.map_partitions(data, |p| {
        let mut labels = Vec::with_capacity(p.range.len());
        let mut entries = Vec::with_capacity(p.range.len());
        for i in p.range {
            let row = ds.row(i);
            let mut list: Vec<Association> = rb
                .rules()
                .iter()
                .enumerate()
                .filter_map(|(j, rule)| {
                    let degree = rb.matching_degree(j, row) * rule.weight;
                    (degree > 0.0).then_some(Association {
                        rule: j as u32,
                        class: rule.class as u32,
                        degree,
                    })
                })
                .collect();
            list.sort_by(|a, b| {
                b.degree
                    .total_cmp(&a.degree)
                    .then(a.class.cmp(&b.class))
                    .then(a.rule.cmp(&b.rule))
            });
            labels.push(ds.label(i));
            entries.push(list);
        }
        TablePartition { labels, entries }
    });
    AssociationTable {
        partitions,
        rules: rb.len(),
        classes: rb.schema().num_classes(),
    }
}

/// `acc - delta * NR_initial / (NR_initial - NR + 1)`; the empty selection
/// scores negative infinity.
pub fn fitness_value(acc: f64, selected: usize, initial: usize, delta: f64) -> f64 {
    if selected == 0 {
        return f64::NEG_INFINITY;
    }
    acc - delta * initial as f64 / (initial - selected + 1) as f64
}

/// Training confusion matrices of a batch of chromosomes.
pub fn confusion_matrices(engine: &Engine, table: &AssociationTable, batch: &[Vec<bool>]) -> Vec<ConfusionMatrix> {
    let partials = engine.map_indexed(table.partitions.len(), |p| {
        let part = &table.partitions[p];
        let mut cms = vec![ConfusionMatrix::new(table.classes); batch.len()];
        for (entries, &label) in part.entries.iter().zip(&part.labels) {
            for (cm, genes) in cms.iter_mut().zip(batch) {
                cm.record(label, first_selected(entries, genes));
            }
        }
        cms
    });
    let mut merged = vec![ConfusionMatrix::new(table.classes); batch.len()];
    for partial in partials {
        for (acc, cm) in merged.iter_mut().zip(&partial) {
            acc.merge(cm);
        }
    }
    merged
}

/// Accuracy measure used by the fitness: GM when cost-sensitive, Acc
/// otherwise.
pub fn objective(cm: &ConfusionMatrix, cost_sensitive: bool) -> Result<f64> {
    if cost_sensitive {
        cm.gm()
    } else {
        cm.accuracy()
    }
}

pub fn evaluate(
    engine: &Engine,
    table: &AssociationTable,
    batch: &[Vec<bool>],
    cost_sensitive: bool,
    delta: f64,
) -> Result<Vec<f64>> {
    for genes in batch {
        if genes.len() != table.rules {
            return Err(Error::InvalidArgument(format!(
                "chromosome has {} genes for {} rules",
                genes.len(),
                table.rules
            )));
        }
    }
    confusion_matrices(engine, table, batch)
        .iter()
        .zip(batch)
        .map(|(cm, genes)| {
            let acc = objective(cm, cost_sensitive)?;
            Ok(fitness_value(acc, count_selected(genes), table.rules, delta))
        })
        .collect()
}

/// Half-uniform crossover: swaps a random half (rounded down) of the
/// positions where the parents differ.
pub fn hux<R: Rng + ?Sized>(a: &[bool], b: &[bool], rng: &mut R) -> (Vec<bool>, Vec<bool>) {
    assert_eq!(a.len(), b.len(), "parents differ in length");
    let diff: Vec<usize> = (0..a.len()).filter(|&k| a[k] != b[k]).collect();
    let mut c1 = a.to_vec();
    let mut c2 = b.to_vec();
    for k in rand::seq::index::sample(rng, diff.len(), diff.len() / 2) {
        let pos = diff[k];
        c1[pos] = b[pos];
        c2[pos] = a[pos];
    }
    (c1, c2)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct GenerationStats {
    pub generation: usize,
    pub evaluations: usize,
    pub best_fitness: f64,
    pub best_rules: usize,
    pub threshold: f64,
}

/// Hooks into the evolutionary loop. Every method has an empty default.
pub trait ChcObserver {
    /// After the initial pool (generation 0) and after each survival step.
    fn on_generation(&mut self, _stats: &GenerationStats, _population: &[Chromosome]) {}
    fn on_evaluated(&mut self, _batch: &[Chromosome]) {}
    /// After a restart has rebuilt and evaluated the population.
    fn on_restart(&mut self, _best: &Chromosome, _population: &[Chromosome]) {}
}

impl ChcObserver for () {}

/// Plain-text progress log, one line per generation.
#[derive(Clone, Debug, Default)]
pub struct ProgressLog {
    text: String,
}

impl ProgressLog {
    pub fn text(&self) -> &str {
        &self.text
    }
}

impl ChcObserver for ProgressLog {
    fn on_generation(&mut self, s: &GenerationStats, _population: &[Chromosome]) {
        writeln!(
            self.text,
            "generation={} evaluations={} best_fitness={:.6} best_rules={} threshold={:.4}",
            s.generation, s.evaluations, s.best_fitness, s.best_rules, s.threshold
        )
        .unwrap();
    }

    fn on_restart(&mut self, best: &Chromosome, _population: &[Chromosome]) {
        writeln!(self.text, "restart best_fitness={:.6} best_rules={}", best.fitness, best.selected()).unwrap();
    }
}

#[derive(Clone, Debug)]
pub struct ChcOutcome {
    pub best: Chromosome,
    pub rule_base: RuleBase,
    pub evaluations: usize,
    pub generations: usize,
    pub restarts: usize,
}

struct Search<'a> {
    engine: &'a Engine,
    table: &'a AssociationTable,
    cfg: &'a ChcConfig,
    cost_sensitive: bool,
    evaluations: usize,
}

impl Search<'_> {
    fn evaluate(&mut self, batch: Vec<Vec<bool>>, observer: &mut dyn ChcObserver) -> Result<Vec<Chromosome>> {
        let fitness = evaluate(self.engine, self.table, &batch, self.cost_sensitive, self.cfg.delta)?;
        self.evaluations += batch.len();
        let evaluated: Vec<Chromosome> = batch
            .into_iter()
            .zip(fitness)
            .map(|(genes, fitness)| Chromosome { genes, fitness })
            .collect();
        observer.on_evaluated(&evaluated);
        Ok(evaluated)
    }
}

/// Selects a subset of `rb` with CHC; `data` must be the transformed
/// training set the rules were induced from.
pub fn run(
    engine: &Engine,
    rb: &RuleBase,
    data: &PartitionedDataset<'_>,
    cfg: &ChcConfig,
    cost_sensitive: bool,
    observer: &mut dyn ChcObserver,
) -> Result<ChcOutcome> {
    cfg.validate()?;
    if rb.is_empty() {
        return Err(Error::NoRules);
    }
    if cost_sensitive {
        let ds = data.dataset();
        if let Some(class) = ds.class_counts().iter().position(|&n| n == 0) {
            return Err(Error::EmptyClass {
                class: ds.schema().classes()[class].clone(),
            });
        }
    }
    let table = precompute_table(engine, rb, data);
    run_on_table(engine, rb, &table, cfg, cost_sensitive, observer)
}

/// [`run`] with a table computed beforehand.
pub fn run_on_table(
    engine: &Engine,
    rb: &RuleBase,
    table: &AssociationTable,
    cfg: &ChcConfig,
    cost_sensitive: bool,
    observer: &mut dyn ChcObserver,
) -> Result<ChcOutcome> {
    let genes = rb.len();
    let p = cfg.population;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut search = Search {
        engine,
        table,
        cfg,
        cost_sensitive,
        evaluations: 0,
    };

    let mut pool = vec![vec![true; genes]];
    while pool.len() < p {
        pool.push((0..genes).map(|_| rng.random_bool(0.5)).collect());
    }
    let mut population = search.evaluate(pool, observer)?;
    population.sort_by(Chromosome::survival_cmp);
    let mut best = population[0].clone();

    let initial_threshold = genes as f64 / 4.0;
    let mut threshold = initial_threshold;
    let mut generation = 0;
    let mut restarts = 0;
    let mut stagnant_restarts = 0;
    let mut best_at_restart = best.fitness;
    let stats = |generation, evaluations, best: &Chromosome, threshold| GenerationStats {
        generation,
        evaluations,
        best_fitness: best.fitness,
        best_rules: best.selected(),
        threshold,
    };
    observer.on_generation(&stats(0, search.evaluations, &best, threshold), &population);

    while search.evaluations < cfg.max_evaluations {
        generation += 1;
        let mut order: Vec<usize> = (0..p).collect();
        order.shuffle(&mut rng);
        let mut children = Vec::new();
        for pair in order.chunks_exact(2) {
            let (a, b) = (&population[pair[0]].genes, &population[pair[1]].genes);
            if hamming(a, b) as f64 / 2.0 > threshold {
                let (c1, c2) = hux(a, b, &mut rng);
                children.push(c1);
                children.push(c2);
            }
        }

        let offspring = search.evaluate(children, observer)?;
        let parents = population.len();
        let mut merged: Vec<(bool, Chromosome)> = population
            .into_iter()
            .map(|c| (false, c))
            .chain(offspring.into_iter().map(|c| (true, c)))
            .collect();
        // stable sort: among equal chromosomes, parents keep their places
        merged.sort_by(|a, b| a.1.survival_cmp(&b.1));
        merged.truncate(parents);
        let entered = merged.iter().any(|(child, _)| *child);
        population = merged.into_iter().map(|(_, c)| c).collect();
        if !entered {
            threshold -= cfg.phi * initial_threshold;
        }
        if population[0].survival_cmp(&best) == Ordering::Less {
            best = population[0].clone();
        }
        observer.on_generation(&stats(generation, search.evaluations, &best, threshold), &population);

        if threshold < 0.0 {
            if best.fitness > best_at_restart {
                stagnant_restarts = 0;
            } else {
                stagnant_restarts += 1;
            }
            best_at_restart = best.fitness;
            if stagnant_restarts >= cfg.max_restarts || search.evaluations >= cfg.max_evaluations {
                break;
            }
            let mut fresh = Vec::with_capacity(p - 1);
            for _ in 1..p {
                let mut genes = best.genes.clone();
                for g in genes.iter_mut() {
                    if rng.random_bool(cfg.restart_gamma) {
                        *g = rng.random_bool(0.5);
                    }
                }
                fresh.push(genes);
            }
            population = vec![best.clone()];
            population.extend(search.evaluate(fresh, observer)?);
            population.sort_by(Chromosome::survival_cmp);
            if population[0].survival_cmp(&best) == Ordering::Less {
                best = population[0].clone();
            }
            threshold = initial_threshold;
            restarts += 1;
            observer.on_restart(&best, &population);
        }
    }

    Ok(ChcOutcome {
        rule_base: rb.select(&best.genes),
        best,
        evaluations: search.evaluations,
        generations: generation,
        restarts,
    })
}
