//! Trained models and their self-contained JSON file format.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::config::Config;
use crate::dataset::{Dataset, Schema};
use crate::error::{Error, Result};
use crate::fuzzy::{FuzzyRule, Prediction, RuleBase};
use crate::induction::InductionTrace;
use crate::transform::{self, FuzzyPartition, QuantileTable};

pub const FORMAT: &str = "fuzzyrb-model";
pub const VERSION: u32 = 1;

/// What happened during training, kept for reporting.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct TrainingSummary {
    pub examples: usize,
    pub induction: InductionTrace,
    /// Rules before selection.
    pub induced_rules: usize,
    /// Fitness evaluations spent by rule selection (0 when skipped).
    pub evaluations: usize,
}

/// A fitted classifier: the quantile table that maps raw values onto
/// `[0, 1]` and the rule base that classifies transformed examples.
#[derive(Clone, Debug, PartialEq)]
pub struct Model {
    pub quantiles: QuantileTable,
    pub rule_base: RuleBase,
    pub config: Config,
    pub summary: TrainingSummary,
}

impl Model {
    pub fn schema(&self) -> &Schema {
        self.rule_base.schema()
    }

    /// Maps one raw example onto the unit interval.
    pub fn transform_row(&self, raw: &[f64]) -> Vec<f64> {
        let schema = self.schema();
        raw.iter()
            .enumerate()
            .map(|(f, &x)| if schema.is_numeric(f) { self.quantiles.cdf(f, x) } else { x })
            .collect()
    }

    pub fn classify(&self, raw: &[f64]) -> Prediction {
        self.rule_base.classify(&self.transform_row(raw))
    }

    /// Classifies every example of a raw dataset with a matching schema.
    pub fn predict(&self, data: &Dataset) -> Result<Vec<Prediction>> {
        if data.schema() != self.schema() {
            return Err(Error::SchemaMismatch(
                "data schema differs from the model's".into(),
            ));
        }
        let transformed = transform::transform_dataset(data, &self.quantiles)?;
        Ok(transformed.rows().map(|row| self.rule_base.classify(row)).collect())
    }

    pub fn to_file(&self) -> ModelFile {
        ModelFile {
            format: FORMAT.into(),
            version: VERSION,
            schema: self.schema().clone(),
            quantiles: self.quantiles.clone(),
            fuzzy_sets: self.rule_base.partition().len(),
            rules: self.rule_base.rules().to_vec(),
            config: self.config.clone(),
            summary: self.summary.clone(),
        }
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        self.to_file().save(path)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Model> {
        ModelFile::load(path)?.into_model()
    }
}

/// On-disk form of a [`Model`]. Reals are written as shortest round-trip
/// decimals, so loading and saving again reproduces the file exactly.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ModelFile {
    pub format: String,
    pub version: u32,
    pub schema: Schema,
    pub quantiles: QuantileTable,
    pub fuzzy_sets: usize,
    pub rules: Vec<FuzzyRule>,
    pub config: Config,
    pub summary: TrainingSummary,
}

impl ModelFile {
    pub fn to_json(&self) -> String {
        let mut text = serde_json::to_string_pretty(self).expect("model serializes");
        text.push('\n');
        text
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: ModelFile =
            serde_json::from_str(text).map_err(|e| Error::Model(e.to_string()))?;
        if file.format != FORMAT {
            return Err(Error::Model(format!("unexpected format tag {:?}", file.format)));
        }
        if file.version != VERSION {
            return Err(Error::Model(format!("unsupported version {}", file.version)));
        }
        Ok(file)
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        std::fs::write(path, self.to_json()).map_err(|e| Error::io(path, e))
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        ModelFile::from_json(&text)
    }

    pub fn into_model(self) -> Result<Model> {
        if self.quantiles.num_attributes() != self.schema.num_attributes() {
            return Err(Error::Model("quantile table does not match the schema".into()));
        }
        let partition = FuzzyPartition::new(self.fuzzy_sets)?;
        let rule_base = RuleBase::new(self.schema, partition, self.rules)
            .map_err(|e| Error::Model(e.to_string()))?;
        Ok(Model {
            quantiles: self.quantiles,
            rule_base,
            config: self.config,
            summary: self.summary,
        })
    }
}
