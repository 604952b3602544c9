//! Two-phase rule induction.
//!
//! Phase one discretizes every example into its best-matching items, counts
//! every itemset of up to `max_len` items (weighted by class cost), keeps the
//! frequent ones and then the most confident ones. Phase two turns the
//! surviving itemsets into candidate rules, computes their fuzzy matching
//! sums in one pass over the data, resolves conflicts by rule weight,
//! filters by fuzzy support and confidence, caps the number of rules per
//! class and length, and prunes rules subsumed by shorter, more confident
//! ones.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::dataset::{Dataset, PartitionedDataset, Schema};
use crate::engine::{broadcast, Broadcast, Engine, ExactSum};
use crate::error::{Error, Result};
use crate::fuzzy::{self, matching_degree, ClassCosts, FuzzyRule, RuleBase};
use crate::transform::FuzzyPartition;

pub use crate::fuzzy::Item;

/// Base of the crisp support threshold `0.025 / (|I| M)`.
pub const CRISP_SUPPORT_BASE: f64 = 0.025;
/// Base of the fuzzy support threshold `0.05 / (len M)`.
pub const FUZZY_SUPPORT_BASE: f64 = 0.05;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InductionConfig {
    pub fuzzy_sets: usize,
    pub max_len: usize,
    pub prop: Vec<f64>,
    pub min_conf_crisp: f64,
    pub min_conf_fuzzy: f64,
    pub gamma: f64,
    pub cost_sensitive: bool,
    /// Keep every counted itemset in the output for debugging dumps.
    #[serde(skip)]
    pub keep_itemsets: bool,
}

impl Default for InductionConfig {
    fn default() -> Self {
        InductionConfig {
            fuzzy_sets: 5,
            max_len: 3,
            prop: vec![0.2, 0.3, 0.5],
            min_conf_crisp: 0.7,
            min_conf_fuzzy: 0.6,
            gamma: 4.0,
            cost_sensitive: true,
            keep_itemsets: false,
        }
    }
}

impl InductionConfig {
    pub fn validate(&self) -> Result<()> {
        let fail = |m: String| Err(Error::Config(m));
        if self.fuzzy_sets < 2 {
            return fail(format!("fuzzy_sets must be at least 2, got {}", self.fuzzy_sets));
        }
        if self.max_len == 0 {
            return fail("max_len must be at least 1".into());
        }
        if self.prop.len() != self.max_len {
            return fail(format!(
                "prop has {} entries but max_len is {}",
                self.prop.len(),
                self.max_len
            ));
        }
        if self.prop.iter().any(|p| !(p.is_finite() && *p >= 0.0)) {
            return fail("prop entries must be non-negative".into());
        }
        let total: f64 = self.prop.iter().sum();
        if (total - 1.0).abs() > 1e-9 {
            return fail(format!("prop entries must sum to 1, got {total}"));
        }
        for (name, v) in [("min_conf_crisp", self.min_conf_crisp), ("min_conf_fuzzy", self.min_conf_fuzzy)] {
            if !(0.0..=1.0).contains(&v) {
                return fail(format!("{name} must be in [0, 1], got {v}"));
            }
        }
        if !(self.gamma.is_finite() && self.gamma > 0.0) {
            return fail(format!("gamma must be positive, got {}", self.gamma));
        }
        Ok(())
    }
}

pub fn min_support_crisp(len: usize, classes: usize) -> f64 {
    CRISP_SUPPORT_BASE / (len as f64 * classes as f64)
}

pub fn min_support_fuzzy(len: usize, classes: usize) -> f64 {
    FUZZY_SUPPORT_BASE / (len as f64 * classes as f64)
}

/// Number of rules kept per group of length `len` (1-based):
/// `ceil(L F prop_len gamma)`, times `M` when rules are grouped by length only.
pub fn rule_cap(cfg: &InductionConfig, len: usize, attributes: usize, classes: usize) -> usize {
    let mut cap = cfg.fuzzy_sets as f64 * attributes as f64 * cfg.prop[len - 1] * cfg.gamma;
    if !cfg.cost_sensitive {
        cap *= classes as f64;
    }
    // products like 5 * 14 * 0.3 land a few ulps above an integer
    let nearest = cap.round();
    if (cap - nearest).abs() <= 1e-9 * nearest.max(1.0) {
        nearest as usize
    } else {
        cap.ceil() as usize
    }
}

/// Cost-weighted occurrence statistics of one itemset.
#[derive(Clone, Debug, PartialEq)]
pub struct ItemsetStats {
    pub itemset: Vec<Item>,
    /// Raw occurrence count per class.
    pub class_counts: Vec<u64>,
    /// Cost-weighted occurrence count per class.
    pub per_class: Vec<f64>,
    /// Sum of `per_class`.
    pub weighted_count: f64,
}

impl ItemsetStats {
    fn from_counts(itemset: Vec<Item>, class_counts: Vec<u64>, costs: &ClassCosts) -> Self {
        let per_class: Vec<f64> = class_counts
            .iter()
            .enumerate()
            .map(|(m, &c)| c as f64 * costs.cost(m))
            .collect();
        let weighted_count = per_class.iter().sum();
        ItemsetStats {
            itemset,
            class_counts,
            per_class,
            weighted_count,
        }
    }

    pub fn len(&self) -> usize {
        self.itemset.len()
    }

    pub fn is_empty(&self) -> bool {
        self.itemset.is_empty()
    }

    /// Class with the largest weighted count (lower index on ties).
    pub fn majority_class(&self) -> usize {
        let mut best = 0;
        for (m, &w) in self.per_class.iter().enumerate() {
            if w > self.per_class[best] {
                best = m;
            }
        }
        best
    }

    pub fn support(&self, total_weight: f64) -> f64 {
        self.weighted_count / total_weight
    }

    pub fn confidence(&self) -> f64 {
        self.per_class[self.majority_class()] / self.weighted_count
    }

    /// Classes under which the itemset was observed.
    pub fn observed_classes(&self) -> impl Iterator<Item = usize> + '_ {
        self.class_counts
            .iter()
            .enumerate()
            .filter(|(_, &c)| c > 0)
            .map(|(m, _)| m)
    }

    pub fn render(&self, schema: &Schema) -> String {
        let mut out = render_items(&self.itemset, schema);
        write!(out, "\tweighted={}\tcounts={:?}", self.weighted_count, self.class_counts).unwrap();
        out
    }
}

fn render_items(items: &[Item], schema: &Schema) -> String {
    let parts: Vec<String> = items
        .iter()
        .map(|item| {
            let name = &schema.attribute(item.var()).name;
            match schema.nominal_value(item.var(), item.value()) {
                Some(v) => format!("{name}={v}"),
                None => format!("{name}=L{}", item.value + 1),
            }
        })
        .collect();
    parts.join(" ")
}

/// Canonical itemset order: shorter first, then lexicographic by variable
/// and value.
pub fn canonical_itemset_cmp(a: &[Item], b: &[Item]) -> Ordering {
    a.len().cmp(&b.len()).then_with(|| a.cmp(b))
}

/// All counted itemsets plus the cost-weighted example total.
#[derive(Clone, Debug, PartialEq)]
pub struct ItemsetCounts {
    pub stats: Vec<ItemsetStats>,
    pub total_weight: f64,
}

/// One item per attribute: the best-matching fuzzy set for numeric values
/// (lower index on ties), the value itself for nominal ones.
pub fn discretize_example(example: &[f64], schema: &Schema, fp: &FuzzyPartition) -> Vec<Item> {
    example
        .iter()
        .enumerate()
        .map(|(f, &x)| {
            if schema.is_numeric(f) {
                Item::new(f, fp.best_set(x))
            } else {
                Item::new(f, x as usize)
            }
        })
        .collect()
}

/// Calls `visit` with every subset of `items` of size `1..=max_len`, by
/// size and then lexicographically by position. `items` must be sorted by
/// variable, so every subset is too.
pub fn for_each_itemset(items: &[Item], max_len: usize, mut visit: impl FnMut(&[Item])) {
    let mut current = Vec::with_capacity(max_len);
    for size in 1..=max_len.min(items.len()) {
        combinations(items, size, 0, &mut current, &mut visit);
    }
}

fn combinations(
    items: &[Item],
    size: usize,
    start: usize,
    current: &mut Vec<Item>,
    visit: &mut impl FnMut(&[Item]),
) {
    if current.len() == size {
        visit(current);
        return;
    }
    let needed = size - current.len();
    for k in start..=items.len() - needed {
        current.push(items[k]);
        combinations(items, size, k + 1, current, visit);
        current.pop();
    }
}

pub fn enumerate_itemsets(items: &[Item], max_len: usize) -> Vec<Vec<Item>> {
    let mut out = Vec::new();
    for_each_itemset(items, max_len, |s| out.push(s.to_vec()));
    out
}

/// Counts every itemset of every (transformed) example, per class.
pub fn count_itemsets(
    engine: &Engine,
    data: &PartitionedDataset<'_>,
    fp: &FuzzyPartition,
    costs: &ClassCosts,
    cfg: &InductionConfig,
) -> ItemsetCounts {
    let ds = data.dataset();
    let schema = ds.schema();
    let classes = schema.num_classes();
    let partials = engine.map_partitions(data, |p| {
        let mut counts: HashMap<Vec<Item>, Vec<u64>> = HashMap::new();
        for i in p.range {
            let items = discretize_example(ds.row(i), schema, fp);
            let label = ds.label(i);
            for_each_itemset(&items, cfg.max_len, |subset| {
                if let Some(c) = counts.get_mut(subset) {
                    c[label] += 1;
                } else {
                    let mut c = vec![0; classes];
                    c[label] = 1;
                    counts.insert(subset.to_vec(), c);
                }
            });
        }
        counts
    });

    let mut merged: HashMap<Vec<Item>, Vec<u64>> = HashMap::new();
    for partial in partials {
        if merged.is_empty() {
            merged = partial;
            continue;
        }
        for (itemset, counts) in partial {
            let entry = merged.entry(itemset).or_insert_with(|| vec![0; classes]);
            entry.iter_mut().zip(&counts).for_each(|(a, b)| *a += b);
        }
    }

    let mut stats: Vec<ItemsetStats> = merged
        .into_iter()
        .map(|(itemset, counts)| ItemsetStats::from_counts(itemset, counts, costs))
        .collect();
    stats.sort_by(|a, b| canonical_itemset_cmp(&a.itemset, &b.itemset));
    ItemsetCounts {
        stats,
        total_weight: total_weight(ds, costs),
    }
}

/// `sum_i cost(y_i)`, computed per class.
pub fn total_weight(ds: &Dataset, costs: &ClassCosts) -> f64 {
    ds.class_counts()
        .iter()
        .enumerate()
        .map(|(m, &n)| n as f64 * costs.cost(m))
        .sum()
}

/// Keeps itemsets whose crisp support reaches `0.025 / (|I| M)`. No
/// downward-closure pruning: an itemset may be frequent while a subset of it
/// is not.
pub fn filter_frequent(stats: Vec<ItemsetStats>, classes: usize, total_weight: f64) -> Vec<ItemsetStats> {
    stats
        .into_iter()
        .filter(|s| s.support(total_weight) >= min_support_crisp(s.len(), classes))
        .collect()
}

/// Keeps the most confident itemsets.
///
/// Itemsets are grouped by majority class (one global group when not
/// cost-sensitive). In a group where more than half of the itemsets reach
/// `min_conf`, the rest are dropped; otherwise only the more confident half
/// (rounded up) is kept. Survivors are then dropped when a proper subset
/// that also survived is strictly more confident.
pub fn select_confident(frequent: Vec<ItemsetStats>, min_conf: f64, cost_sensitive: bool) -> Vec<ItemsetStats> {
    let mut groups: Vec<Vec<(usize, f64)>> = Vec::new();
    for (k, s) in frequent.iter().enumerate() {
        let group = if cost_sensitive { s.majority_class() } else { 0 };
        if groups.len() <= group {
            groups.resize_with(group + 1, Vec::new);
        }
        groups[group].push((k, s.confidence()));
    }

    let mut keep = vec![false; frequent.len()];
    for mut group in groups {
        let passing = group.iter().filter(|(_, conf)| *conf >= min_conf).count();
        if passing * 2 > group.len() {
            for (k, conf) in group {
                keep[k] = conf >= min_conf;
            }
        } else {
            // indices follow canonical order, so they break confidence ties
            group.sort_by(|a, b| b.1.total_cmp(&a.1).then(a.0.cmp(&b.0)));
            let kept = group.len().div_ceil(2);
            for &(k, _) in &group[..kept] {
                keep[k] = true;
            }
        }
    }

    let survivors: HashMap<&[Item], f64> = frequent
        .iter()
        .zip(&keep)
        .filter(|(_, &k)| k)
        .map(|(s, _)| (s.itemset.as_slice(), s.confidence()))
        .collect();
    let dominated: Vec<bool> = frequent
        .iter()
        .zip(&keep)
        .map(|(s, &k)| {
            k && has_dominating_subset(&s.itemset, s.confidence(), |sub| survivors.get(sub).copied())
        })
        .collect();

    frequent
        .into_iter()
        .zip(keep.into_iter().zip(dominated))
        .filter(|(_, (k, d))| *k && !d)
        .map(|(s, _)| s)
        .collect()
}

/// Whether some proper, non-empty subset of `items` has a recorded
/// confidence strictly greater than `conf`.
fn has_dominating_subset(items: &[Item], conf: f64, lookup: impl Fn(&[Item]) -> Option<f64>) -> bool {
    let n = items.len();
    let mut subset = Vec::with_capacity(n);
    for mask in 1..(1u32 << n) - 1 {
        subset.clear();
        subset.extend((0..n).filter(|b| mask & (1 << b) != 0).map(|b| items[b]));
        if lookup(&subset).is_some_and(|c| c > conf) {
            return true;
        }
    }
    false
}

/// Candidate rules sharing one antecedent, one per observed class.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CandidateGroup {
    pub antecedents: Vec<Item>,
    pub classes: Vec<usize>,
}

pub fn itemsets_to_candidates(promising: &[ItemsetStats]) -> Vec<CandidateGroup> {
    promising
        .iter()
        .map(|s| CandidateGroup {
            antecedents: s.itemset.clone(),
            classes: s.observed_classes().collect(),
        })
        .collect()
}

pub fn candidate_count(groups: &[CandidateGroup]) -> usize {
    groups.iter().map(|g| g.classes.len()).sum()
}

#[derive(Clone, Debug, PartialEq)]
pub struct CandidateRuleStats {
    pub antecedents: Vec<Item>,
    pub class: usize,
    pub match_class: f64,
    pub match_not_class: f64,
}

impl CandidateRuleStats {
    pub fn len(&self) -> usize {
        self.antecedents.len()
    }

    pub fn is_empty(&self) -> bool {
        self.antecedents.is_empty()
    }

    pub fn weight(&self) -> Option<f64> {
        fuzzy::rule_weight(self.match_class, self.match_not_class)
    }

    pub fn support(&self, total_weight: f64) -> f64 {
        (self.match_class + self.match_not_class) / total_weight
    }

    pub fn confidence(&self) -> f64 {
        self.match_class / (self.match_class + self.match_not_class)
    }
}

/// Matching sums of every candidate of one antecedent group.
#[derive(Clone, Debug, PartialEq)]
pub struct GroupStats {
    /// `sum mu(x_i)` over the examples of each class, before costs.
    pub class_matching: Vec<f64>,
    pub candidates: Vec<CandidateRuleStats>,
}

/// One pass over the data computing, for every candidate antecedent, the
/// per-class sums of matching degrees; the cost-weighted `matchClass` and
/// `matchNotClass` of each candidate follow from them.
pub fn compute_rule_stats(
    engine: &Engine,
    data: &PartitionedDataset<'_>,
    candidates: &Broadcast<Vec<CandidateGroup>>,
    fp: &FuzzyPartition,
    costs: &ClassCosts,
) -> Vec<GroupStats> {
    let ds = data.dataset();
    let schema = ds.schema();
    let classes = schema.num_classes();
    let partials = engine.map_partitions(data, |p| {
        let groups = candidates.clone();
        let mut sums = vec![ExactSum::new(); groups.len() * classes];
        for i in p.range {
            let row = ds.row(i);
            let label = ds.label(i);
            for (g, group) in groups.iter().enumerate() {
                let mu = matching_degree(&group.antecedents, row, schema, fp);
                if mu > 0.0 {
                    sums[g * classes + label].add(mu);
                }
            }
        }
        sums
    });

    let mut merged = vec![ExactSum::new(); candidates.len() * classes];
    for partial in partials {
        for (acc, part) in merged.iter_mut().zip(&partial) {
            acc.merge(part);
        }
    }

    candidates
        .iter()
        .zip(merged.chunks_exact(classes))
        .map(|(group, sums)| {
            let class_matching: Vec<f64> = sums.iter().map(ExactSum::value).collect();
            let weighted: Vec<f64> = class_matching
                .iter()
                .enumerate()
                .map(|(m, s)| s * costs.cost(m))
                .collect();
            let candidates = group
                .classes
                .iter()
                .map(|&class| CandidateRuleStats {
                    antecedents: group.antecedents.clone(),
                    class,
                    match_class: weighted[class],
                    match_not_class: weighted
                        .iter()
                        .enumerate()
                        .filter(|&(m, _)| m != class)
                        .map(|(_, w)| w)
                        .sum(),
                })
                .collect();
            GroupStats {
                class_matching,
                candidates,
            }
        })
        .collect()
}

/// Candidate that won its antecedent group, with its rule weight.
#[derive(Clone, Debug, PartialEq)]
pub struct WeightedRule {
    pub stats: CandidateRuleStats,
    pub weight: f64,
}

impl WeightedRule {
    pub fn len(&self) -> usize {
        self.stats.len()
    }

    pub fn is_empty(&self) -> bool {
        self.stats.is_empty()
    }

    pub fn confidence(&self) -> f64 {
        self.stats.confidence()
    }

    pub fn antecedents(&self) -> &[Item] {
        &self.stats.antecedents
    }
}

/// Keeps, per antecedent group, the candidate with the largest rule weight
/// (lower class on ties). Uncovered candidates are dropped, and so is the
/// whole group when the winning weight is not positive.
pub fn resolve_conflicts(groups: Vec<GroupStats>) -> Vec<WeightedRule> {
    groups
        .into_iter()
        .filter_map(|group| {
            let mut best: Option<WeightedRule> = None;
            for stats in group.candidates {
                let Some(weight) = stats.weight() else { continue };
                let better = match &best {
                    None => true,
                    Some(b) => weight > b.weight || (weight == b.weight && stats.class < b.stats.class),
                };
                if better {
                    best = Some(WeightedRule { stats, weight });
                }
            }
            best.filter(|b| b.weight > 0.0)
        })
        .collect()
}

/// Keeps rules with fuzzy support `>= 0.05 / (len M)` and fuzzy confidence
/// `>= min_conf_fuzzy`.
pub fn filter_rules(
    rules: Vec<WeightedRule>,
    cfg: &InductionConfig,
    classes: usize,
    total_weight: f64,
) -> Vec<WeightedRule> {
    rules
        .into_iter()
        .filter(|r| {
            r.stats.support(total_weight) >= min_support_fuzzy(r.len(), classes)
                && r.confidence() >= cfg.min_conf_fuzzy
        })
        .collect()
}

/// Keeps the most confident rules of each (class, length) group, or of each
/// length group when not cost-sensitive, up to [`rule_cap`].
pub fn select_top_rules(
    rules: Vec<WeightedRule>,
    cfg: &InductionConfig,
    attributes: usize,
    classes: usize,
) -> Vec<WeightedRule> {
    let mut groups: HashMap<(usize, usize), Vec<WeightedRule>> = HashMap::new();
    for rule in rules {
        let class = if cfg.cost_sensitive { rule.stats.class } else { 0 };
        groups.entry((class, rule.len())).or_default().push(rule);
    }
    let mut keys: Vec<(usize, usize)> = groups.keys().copied().collect();
    keys.sort_unstable();

    let mut kept = Vec::new();
    for key in keys {
        let mut group = groups.remove(&key).expect("key present");
        group.sort_by(|a, b| {
            b.confidence()
                .total_cmp(&a.confidence())
                .then_with(|| a.antecedents().cmp(b.antecedents()))
        });
        group.truncate(rule_cap(cfg, key.1, attributes, classes));
        kept.extend(group);
    }
    kept
}

/// Removes every rule whose antecedents strictly contain those of a shorter,
/// strictly more confident surviving rule. Rules are visited shortest first.
pub fn prune_subsumed(mut rules: Vec<WeightedRule>) -> Vec<WeightedRule> {
    rules.sort_by(|a, b| {
        canonical_itemset_cmp(a.antecedents(), b.antecedents()).then(a.stats.class.cmp(&b.stats.class))
    });
    let mut survivors: HashMap<Vec<Item>, f64> = HashMap::new();
    let mut kept = Vec::with_capacity(rules.len());
    for rule in rules {
        let conf = rule.confidence();
        if has_dominating_subset(rule.antecedents(), conf, |sub| survivors.get(sub).copied()) {
            continue;
        }
        // one rule per antecedent set after conflict resolution
        survivors.insert(rule.antecedents().to_vec(), conf);
        kept.push(rule);
    }
    kept
}

/// Number of itemsets, candidates and rules left after each step.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct InductionTrace {
    pub itemsets: usize,
    pub frequent: usize,
    pub promising: usize,
    pub candidates: usize,
    pub weighted: usize,
    pub filtered: usize,
    pub capped: usize,
    pub rules: usize,
}

#[derive(Clone, Debug)]
pub struct Induction {
    pub rule_base: RuleBase,
    pub costs: ClassCosts,
    pub total_weight: f64,
    pub trace: InductionTrace,
    /// Every counted itemset, when [`InductionConfig::keep_itemsets`] is set.
    pub itemsets: Option<Vec<ItemsetStats>>,
}

/// Runs the full induction on a transformed training set.
pub fn induce(engine: &Engine, data: &PartitionedDataset<'_>, cfg: &InductionConfig) -> Result<Induction> {
    cfg.validate()?;
    let ds = data.dataset();
    let schema = ds.schema();
    let classes = schema.num_classes();
    let fp = FuzzyPartition::new(cfg.fuzzy_sets)?;
    let costs = fuzzy::class_costs(ds, cfg.cost_sensitive)?;
    let mut trace = InductionTrace::default();

    let counts = count_itemsets(engine, data, &fp, &costs, cfg);
    trace.itemsets = counts.stats.len();
    let itemsets = cfg.keep_itemsets.then(|| counts.stats.clone());
    let total_weight = counts.total_weight;

    let frequent = filter_frequent(counts.stats, classes, total_weight);
    trace.frequent = frequent.len();
    let promising = select_confident(frequent, cfg.min_conf_crisp, cfg.cost_sensitive);
    trace.promising = promising.len();

    let candidates = broadcast(itemsets_to_candidates(&promising));
    trace.candidates = candidate_count(&candidates);
    let stats = compute_rule_stats(engine, data, &candidates, &fp, &costs);
    let weighted = resolve_conflicts(stats);
    trace.weighted = weighted.len();

    let filtered = filter_rules(weighted, cfg, classes, total_weight);
    trace.filtered = filtered.len();
    let capped = select_top_rules(filtered, cfg, schema.num_attributes(), classes);
    trace.capped = capped.len();
    let pruned = prune_subsumed(capped);
    trace.rules = pruned.len();
    if pruned.is_empty() {
        return Err(Error::NoRules);
    }

    let rules = pruned
        .into_iter()
        .map(|r| {
            let support = r.stats.support(total_weight);
            let confidence = r.confidence();
            FuzzyRule::new(r.stats.antecedents, r.stats.class, r.weight).with_stats(support, confidence)
        })
        .collect();
    Ok(Induction {
        rule_base: RuleBase::new(schema.clone(), fp, rules)?,
        costs,
        total_weight,
        trace,
        itemsets,
    })
}

/// Text dump of itemset statistics, one canonical itemset per line.
pub fn render_itemsets(stats: &[ItemsetStats], schema: &Schema) -> String {
    let mut out = String::new();
    for s in stats {
        writeln!(out, "{}", s.render(schema)).unwrap();
    }
    out
}
