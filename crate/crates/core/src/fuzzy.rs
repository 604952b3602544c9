//! Fuzzy rules, rule bases and the winning-rule reasoning method.

use std::cmp::Ordering;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::dataset::{Dataset, Schema};
use crate::error::{Error, Result};
use crate::transform::FuzzyPartition;

/// A `(variable, value)` pair. For numeric variables the value is a fuzzy
/// set index; for nominal ones it is the index of the nominal value.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Item {
    pub var: u32,
    pub value: u32,
}

impl Item {
    pub fn new(var: usize, value: usize) -> Self {
        Item {
            var: var as u32,
            value: value as u32,
        }
    }

    pub fn var(&self) -> usize {
        self.var as usize
    }

    pub fn value(&self) -> usize {
        self.value as usize
    }

    /// Membership of the (transformed) value `x` in this item.
    #[inline]
    pub fn membership(&self, x: f64, schema: &Schema, fp: &FuzzyPartition) -> f64 {
        if schema.is_numeric(self.var()) {
            fp.membership(self.value(), x)
        } else if x as u32 == self.value {
            1.0
        } else {
            0.0
        }
    }
}

/// Product of the memberships of the example's values in the rule's
/// antecedents; variables without an antecedent contribute 1.
pub fn matching_degree(antecedents: &[Item], example: &[f64], schema: &Schema, fp: &FuzzyPartition) -> f64 {
    let mut mu = 1.0;
    for item in antecedents {
        mu *= item.membership(example[item.var()], schema, fp);
        if mu == 0.0 {
            break;
        }
    }
    mu
}

/// Canonical antecedent comparison: item-wise by variable, then value.
pub fn compare_antecedents(a: &[Item], b: &[Item]) -> Ordering {
    a.cmp(b)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FuzzyRule {
    pub antecedents: Vec<Item>,
    pub class: usize,
    pub weight: f64,
    /// Cost-weighted fuzzy support.
    #[serde(default)]
    pub support: f64,
    /// Cost-weighted fuzzy confidence.
    #[serde(default)]
    pub confidence: f64,
}

impl FuzzyRule {
    pub fn new(mut antecedents: Vec<Item>, class: usize, weight: f64) -> Self {
        antecedents.sort_unstable();
        FuzzyRule {
            antecedents,
            class,
            weight,
            support: 0.0,
            confidence: 0.0,
        }
    }

    pub fn with_stats(mut self, support: f64, confidence: f64) -> Self {
        self.support = support;
        self.confidence = confidence;
        self
    }

    pub fn len(&self) -> usize {
        self.antecedents.len()
    }

    pub fn is_empty(&self) -> bool {
        self.antecedents.is_empty()
    }

    /// Canonical rule order: length, class, then antecedents.
    pub fn canonical_cmp(&self, other: &FuzzyRule) -> Ordering {
        self.len()
            .cmp(&other.len())
            .then(self.class.cmp(&other.class))
            .then_with(|| compare_antecedents(&self.antecedents, &other.antecedents))
    }

    pub fn render(&self, schema: &Schema) -> String {
        let mut out = String::from("IF ");
        for (k, item) in self.antecedents.iter().enumerate() {
            if k > 0 {
                out.push_str(" AND ");
            }
            let attribute = schema.attribute(item.var());
            match schema.nominal_value(item.var(), item.value()) {
                Some(value) => write!(out, "{} IS {}", attribute.name, value),
                None => write!(out, "{} IS L{}", attribute.name, item.value + 1),
            }
            .unwrap();
        }
        write!(
            out,
            " THEN {} (RW={:.4}, supp={:.4}, conf={:.4})",
            schema.classes()[self.class],
            self.weight,
            self.support,
            self.confidence
        )
        .unwrap();
        out
    }
}

/// Outcome of classifying one example.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Prediction {
    /// Predicted class, or `None` when no rule has a positive association
    /// degree with the example.
    pub class: Option<usize>,
    /// Association degree of the winning rule (0 when uncovered).
    pub degree: f64,
    /// Position of the winning rule in the rule base.
    pub rule: Option<usize>,
}

impl Prediction {
    pub const NO_COVER: Prediction = Prediction {
        class: None,
        degree: 0.0,
        rule: None,
    };
}

/// Rules plus the database (schema and fuzzy partition) they refer to.
#[derive(Clone, Debug, PartialEq)]
pub struct RuleBase {
    schema: Schema,
    partition: FuzzyPartition,
    rules: Vec<FuzzyRule>,
}

impl RuleBase {
    /// Builds a rule base in canonical order. Rules must be non-empty, have
    /// at most one antecedent per variable, values within range and finite
    /// weights; two rules may not share an antecedent set.
    pub fn new(schema: Schema, partition: FuzzyPartition, mut rules: Vec<FuzzyRule>) -> Result<Self> {
        for rule in &mut rules {
            rule.antecedents.sort_unstable();
            validate_rule(rule, &schema, &partition)?;
        }
        rules.sort_by(FuzzyRule::canonical_cmp);
        let mut keys: Vec<&[Item]> = rules.iter().map(|r| r.antecedents.as_slice()).collect();
        keys.sort_unstable();
        if let Some(pair) = keys.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::InvalidArgument(format!(
                "two rules share the antecedent set {:?}",
                pair[0]
            )));
        }
        Ok(RuleBase {
            schema,
            partition,
            rules,
        })
    }

    pub fn schema(&self) -> &Schema {
        &self.schema
    }

    pub fn partition(&self) -> &FuzzyPartition {
        &self.partition
    }

    pub fn rules(&self) -> &[FuzzyRule] {
        &self.rules
    }

    pub fn len(&self) -> usize {
        self.rules.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rules.is_empty()
    }

    pub fn matching_degree(&self, rule: usize, example: &[f64]) -> f64 {
        matching_degree(&self.rules[rule].antecedents, example, &self.schema, &self.partition)
    }

    /// Winning-rule classification of a transformed example.
    ///
    /// The rule with the largest positive association degree `mu * RW` wins;
    /// ties go to the lower class index, then to the earlier rule.
    pub fn classify(&self, example: &[f64]) -> Prediction {
        let mut best = Prediction::NO_COVER;
        for (j, rule) in self.rules.iter().enumerate() {
            let b = self.matching_degree(j, example) * rule.weight;
            if b <= 0.0 {
                continue;
            }
            let better = match best.class {
                None => true,
                Some(class) => b > best.degree || (b == best.degree && rule.class < class),
            };
            if better {
                best = Prediction {
                    class: Some(rule.class),
                    degree: b,
                    rule: Some(j),
                };
            }
        }
        best
    }

    /// Rule base keeping only the rules whose flag is set, in order.
    pub fn select(&self, keep: &[bool]) -> RuleBase {
        assert_eq!(keep.len(), self.rules.len(), "selection length mismatch");
        RuleBase {
            schema: self.schema.clone(),
            partition: self.partition,
            rules: self
                .rules
                .iter()
                .zip(keep)
                .filter(|(_, &k)| k)
                .map(|(r, _)| r.clone())
                .collect(),
        }
    }

    pub fn mean_rule_length(&self) -> f64 {
        if self.rules.is_empty() {
            return 0.0;
        }
        self.rules.iter().map(FuzzyRule::len).sum::<usize>() as f64 / self.rules.len() as f64
    }

    /// Total rule length: rules x mean rule length x fuzzy sets per variable.
    pub fn total_rule_length(&self) -> f64 {
        self.rules.len() as f64 * self.mean_rule_length() * self.partition.len() as f64
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        for (j, rule) in self.rules.iter().enumerate() {
            writeln!(out, "R{}: {}", j + 1, rule.render(&self.schema)).unwrap();
        }
        out
    }
}

fn validate_rule(rule: &FuzzyRule, schema: &Schema, fp: &FuzzyPartition) -> Result<()> {
    let bad = |m: String| Err(Error::InvalidArgument(m));
    if rule.antecedents.is_empty() {
        return bad("rule without antecedents".into());
    }
    if rule.class >= schema.num_classes() {
        return bad(format!("rule class {} out of range", rule.class));
    }
    if !rule.weight.is_finite() {
        return bad(format!("rule weight {} is not finite", rule.weight));
    }
    for (k, item) in rule.antecedents.iter().enumerate() {
        if item.var() >= schema.num_attributes() {
            return bad(format!("antecedent variable {} out of range", item.var));
        }
        if k > 0 && rule.antecedents[k - 1].var == item.var {
            return bad(format!("two antecedents on variable {}", item.var));
        }
        let limit = schema.nominal_count(item.var()).unwrap_or(fp.len());
        if item.value() >= limit {
            return bad(format!(
                "antecedent value {} out of range on variable {}",
                item.value, item.var
            ));
        }
    }
    Ok(())
}

/// Per-class misclassification costs.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClassCosts(Vec<f64>);

impl ClassCosts {
    pub fn uniform(classes: usize) -> Self {
        ClassCosts(vec![1.0; classes])
    }

    /// `cost(m) = max_k count(k) / count(m)`.
    pub fn from_counts(counts: &[usize], schema: &Schema) -> Result<Self> {
        if let Some(m) = counts.iter().position(|&c| c == 0) {
            return Err(Error::EmptyClass {
                class: schema.classes()[m].clone(),
            });
        }
        let max = *counts.iter().max().expect("at least two classes") as f64;
        Ok(ClassCosts(counts.iter().map(|&c| max / c as f64).collect()))
    }

    pub fn cost(&self, class: usize) -> f64 {
        self.0[class]
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn scaled(&self, factor: f64) -> Self {
        ClassCosts(self.0.iter().map(|c| c * factor).collect())
    }
}

/// Class costs for a training set. Every class must be present, also when
/// the costs are uniform.
pub fn class_costs(train: &Dataset, cost_sensitive: bool) -> Result<ClassCosts> {
    let costs = ClassCosts::from_counts(&train.class_counts(), train.schema())?;
    Ok(if cost_sensitive {
        costs
    } else {
        ClassCosts::uniform(costs.0.len())
    })
}

/// Penalized certainty factor `(mc - mnc) / (mc + mnc)`; `None` when the
/// rule covers nothing.
pub fn rule_weight(match_class: f64, match_not_class: f64) -> Option<f64> {
    let total = match_class + match_not_class;
    (total > 0.0).then(|| (match_class - match_not_class) / total)
}
