//! Schemas, in-memory datasets, CSV ingestion, stratified folds and
//! contiguous partitioning.

use std::collections::HashSet;
use std::fmt::Write as _;
use std::fs::File;
use std::io::{Read, Write};
use std::ops::Range;
use std::path::Path;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum AttributeKind {
    Numeric,
    Nominal { values: Vec<String> },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Attribute {
    pub name: String,
    #[serde(flatten)]
    pub kind: AttributeKind,
}

impl Attribute {
    pub fn numeric(name: impl Into<String>) -> Self {
        Attribute {
            name: name.into(),
            kind: AttributeKind::Numeric,
        }
    }

    pub fn nominal<S: Into<String>>(name: impl Into<String>, values: impl IntoIterator<Item = S>) -> Self {
        Attribute {
            name: name.into(),
            kind: AttributeKind::Nominal {
                values: values.into_iter().map(Into::into).collect(),
            },
        }
    }

    pub fn is_numeric(&self) -> bool {
        matches!(self.kind, AttributeKind::Numeric)
    }
}

/// Ordered attribute list plus the class attribute and its labels.
///
/// The class column is always the last field of a data row.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Schema {
    attributes: Vec<Attribute>,
    class_name: String,
    classes: Vec<String>,
}

impl Schema {
    pub fn new<S: Into<String>>(
        attributes: Vec<Attribute>,
        class_name: impl Into<String>,
        classes: impl IntoIterator<Item = S>,
    ) -> Result<Self> {
        let schema = Schema {
            attributes,
            class_name: class_name.into(),
            classes: classes.into_iter().map(Into::into).collect(),
        };
        schema.validate()?;
        Ok(schema)
    }

    fn validate(&self) -> Result<()> {
        let invalid = |message: String| Error::Schema { line: 0, message };
        if self.attributes.is_empty() {
            return Err(invalid("at least one attribute is required".into()));
        }
        let mut names = HashSet::new();
        for attribute in &self.attributes {
            if attribute.name.is_empty() {
                return Err(invalid("empty attribute name".into()));
            }
            if !names.insert(attribute.name.as_str()) {
                return Err(invalid(format!("duplicate attribute name {:?}", attribute.name)));
            }
            if let AttributeKind::Nominal { values } = &attribute.kind {
                check_labels(values).map_err(|m| invalid(format!("attribute {:?}: {m}", attribute.name)))?;
            }
        }
        if self.classes.len() < 2 {
            return Err(invalid("at least two class labels are required".into()));
        }
        check_labels(&self.classes).map_err(|m| invalid(format!("class attribute: {m}")))
    }

    /// Parses the plain-text schema format: one `name:numeric` or
    /// `name:nominal:v1|v2|...` line per attribute and a final
    /// `class:label1|label2|...` line. Blank lines and `#` comments are
    /// ignored.
    pub fn parse(text: &str) -> Result<Self> {
        let lines: Vec<(usize, &str)> = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
            .collect();
        let Some((&(class_line, class_text), attribute_lines)) = lines.split_last() else {
            return Err(Error::Schema {
                line: 0,
                message: "empty schema".into(),
            });
        };

        let mut attributes = Vec::with_capacity(attribute_lines.len());
        for &(line, text) in attribute_lines {
            let err = |message: String| Error::Schema { line, message };
            let mut parts = text.splitn(3, ':');
            let name = parts.next().unwrap_or_default().trim();
            let kind = parts.next().map(str::trim);
            let rest = parts.next();
            let attribute = match (kind, rest) {
                (Some("numeric"), None) => Attribute::numeric(name),
                (Some("nominal"), Some(values)) => {
                    Attribute::nominal(name, values.split('|').map(str::trim))
                }
                _ => {
                    return Err(err(format!(
                        "expected `name:numeric` or `name:nominal:v1|v2|...`, found {text:?}"
                    )))
                }
            };
            attributes.push(attribute);
        }

        let Some((class_name, labels)) = class_text.split_once(':') else {
            return Err(Error::Schema {
                line: class_line,
                message: format!("expected `class:label1|label2|...`, found {class_text:?}"),
            });
        };
        Schema::new(
            attributes,
            class_name.trim(),
            labels.split('|').map(str::trim),
        )
        .map_err(|e| match e {
            Error::Schema { message, .. } => Error::Schema {
                line: class_line,
                message,
            },
            other => other,
        })
    }

    pub fn from_file(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Schema::parse(&text)
    }

    /// Renders the schema in the format accepted by [`Schema::parse`].
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for attribute in &self.attributes {
            match &attribute.kind {
                AttributeKind::Numeric => writeln!(out, "{}:numeric", attribute.name),
                AttributeKind::Nominal { values } => {
                    writeln!(out, "{}:nominal:{}", attribute.name, values.join("|"))
                }
            }
            .unwrap();
        }
        writeln!(out, "{}:{}", self.class_name, self.classes.join("|")).unwrap();
        out
    }

    pub fn attributes(&self) -> &[Attribute] {
        &self.attributes
    }

    pub fn attribute(&self, index: usize) -> &Attribute {
        &self.attributes[index]
    }

    pub fn num_attributes(&self) -> usize {
        self.attributes.len()
    }

    pub fn is_numeric(&self, index: usize) -> bool {
        self.attributes[index].is_numeric()
    }

    pub fn numeric_indices(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.attributes.len()).filter(|&f| self.is_numeric(f))
    }

    pub fn class_name(&self) -> &str {
        &self.class_name
    }

    pub fn classes(&self) -> &[String] {
        &self.classes
    }

    pub fn num_classes(&self) -> usize {
        self.classes.len()
    }

    pub fn class_index(&self, label: &str) -> Option<usize> {
        self.classes.iter().position(|c| c == label)
    }

    /// Index of `value` in the value list of nominal attribute `attribute`.
    pub fn nominal_index(&self, attribute: usize, value: &str) -> Option<usize> {
        match &self.attributes[attribute].kind {
            AttributeKind::Nominal { values } => values.iter().position(|v| v == value),
            AttributeKind::Numeric => None,
        }
    }

    /// Number of values of a nominal attribute.
    pub fn nominal_count(&self, attribute: usize) -> Option<usize> {
        match &self.attributes[attribute].kind {
            AttributeKind::Nominal { values } => Some(values.len()),
            AttributeKind::Numeric => None,
        }
    }

    pub fn nominal_value(&self, attribute: usize, index: usize) -> Option<&str> {
        match &self.attributes[attribute].kind {
            AttributeKind::Nominal { values } => values.get(index).map(String::as_str),
            AttributeKind::Numeric => None,
        }
    }
}

fn check_labels(labels: &[String]) -> std::result::Result<(), String> {
    if labels.is_empty() {
        return Err("empty value list".into());
    }
    let mut seen = HashSet::new();
    for label in labels {
        if label.is_empty() {
            return Err("empty value".into());
        }
        if !seen.insert(label.as_str()) {
            return Err(format!("duplicate value {label:?}"));
        }
    }
    Ok(())
}

/// Labeled examples stored row-major. Nominal values are held as the index
/// of the value in the schema's value list.
#[derive(Clone, Debug, PartialEq)]
pub struct Dataset {
    schema: Schema,
    values: Vec<f64>,
    labels: Vec<usize>,
}

impl Dataset {
    pub fn new(schema: Schema, rows: Vec<Vec<f64>>, labels: Vec<usize>) -> Result<Self> {
        if rows.len() != labels.len() {
            return Err(Error::InvalidArgument(format!(
                "{} rows but {} labels",
                rows.len(),
                labels.len()
            )));
        }
        let width = schema.num_attributes();
        let mut values = Vec::with_capacity(rows.len() * width);
        for (i, row) in rows.into_iter().enumerate() {
            if row.len() != width {
                return Err(Error::RowWidth {
                    line: i + 1,
                    expected: width,
                    found: row.len(),
                });
            }
            values.extend(row);
        }
        Dataset::from_parts(schema, values, labels)
    }

    pub(crate) fn from_parts(schema: Schema, values: Vec<f64>, labels: Vec<usize>) -> Result<Self> {
        if labels.is_empty() {
            return Err(Error::NoExamples);
        }
        let width = schema.num_attributes();
        debug_assert_eq!(values.len(), labels.len() * width);
        for (i, row) in values.chunks_exact(width).enumerate() {
            for (f, &v) in row.iter().enumerate() {
                let attribute = schema.attribute(f);
                let ok = match &attribute.kind {
                    AttributeKind::Numeric => v.is_finite(),
                    AttributeKind::Nominal { values } => {
                        v >= 0.0 && v.fract() == 0.0 && (v as usize) < values.len()
                    }
                };
                if !ok {
                    return Err(Error::InvalidArgument(format!(
                        "example {i}, attribute {:?}: invalid value {v}",
                        attribute.name
                    )));
                }
            }
        }
        if let Some(i) = labels.iter().position(|&l| l >= schema.num_classes()) {
            return Err(Error::InvalidArgument(format!(
                "example {i}: class index {} out of range",
                labels[i]
            )));
        }
        Ok(Dataset {
            schema,
            values,
            labels,
        })
    }

    pub fn schema(&self) -> &Schema {
        &self.schema
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn num_attributes(&self) -> usize {
        self.schema.num_attributes()
    }

    pub fn row(&self, index: usize) -> &[f64] {
        let width = self.schema.num_attributes();
        &self.values[index * width..(index + 1) * width]
    }

    pub fn rows(&self) -> impl ExactSizeIterator<Item = &[f64]> + '_ {
        self.values.chunks_exact(self.schema.num_attributes())
    }

    pub fn value(&self, index: usize, attribute: usize) -> f64 {
        self.values[index * self.schema.num_attributes() + attribute]
    }

    pub fn column(&self, attribute: usize) -> impl Iterator<Item = f64> + '_ {
        self.rows().map(move |row| row[attribute])
    }

    pub fn label(&self, index: usize) -> usize {
        self.labels[index]
    }

    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    pub fn class_counts(&self) -> Vec<usize> {
        let mut counts = vec![0; self.schema.num_classes()];
        for &label in &self.labels {
            counts[label] += 1;
        }
        counts
    }

    /// New dataset holding the given examples in the given order.
    pub fn subset(&self, indices: &[usize]) -> Result<Dataset> {
        let width = self.schema.num_attributes();
        let mut values = Vec::with_capacity(indices.len() * width);
        let mut labels = Vec::with_capacity(indices.len());
        for &i in indices {
            values.extend_from_slice(self.row(i));
            labels.push(self.labels[i]);
        }
        Dataset::from_parts(self.schema.clone(), values, labels)
    }

    /// Replaces every value with `f(attribute, value)`, leaving labels as is.
    pub(crate) fn map_values(&self, mut f: impl FnMut(usize, f64) -> f64) -> Dataset {
        let width = self.schema.num_attributes();
        let values = self
            .values
            .iter()
            .enumerate()
            .map(|(k, &v)| f(k % width, v))
            .collect();
        Dataset {
            schema: self.schema.clone(),
            values,
            labels: self.labels.clone(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CsvOptions {
    pub delimiter: u8,
    pub header: bool,
}

impl Default for CsvOptions {
    fn default() -> Self {
        CsvOptions {
            delimiter: b',',
            header: false,
        }
    }
}

pub fn load_csv(path: impl AsRef<Path>, schema: &Schema, options: CsvOptions) -> Result<Dataset> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    read_csv(file, schema, options)
}

/// Like [`read_csv`] but accepts zero data rows.
pub fn read_csv_allow_empty<R: Read>(
    reader: R,
    schema: &Schema,
    options: CsvOptions,
) -> Result<Option<Dataset>> {
    match read_csv(reader, schema, options) {
        Ok(ds) => Ok(Some(ds)),
        Err(Error::NoExamples) => Ok(None),
        Err(e) => Err(e),
    }
}

pub fn read_csv<R: Read>(reader: R, schema: &Schema, options: CsvOptions) -> Result<Dataset> {
    let mut reader = csv::ReaderBuilder::new()
        .delimiter(options.delimiter)
        .has_headers(options.header)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(reader);

    let width = schema.num_attributes();
    let mut values = Vec::new();
    let mut labels = Vec::new();
    let mut record = csv::StringRecord::new();
    loop {
        let more = reader.read_record(&mut record).map_err(|e| Error::Csv {
            line: e.position().map_or(0, |p| p.line() as usize),
            message: e.to_string(),
        })?;
        if !more {
            break;
        }
        let line = record.position().map_or(0, |p| p.line() as usize);
        if record.len() == 1 && record[0].is_empty() {
            continue;
        }
        if record.len() != width + 1 {
            return Err(Error::RowWidth {
                line,
                expected: width + 1,
                found: record.len(),
            });
        }
        for (f, field) in record.iter().take(width).enumerate() {
            let attribute = schema.attribute(f);
            let value = match &attribute.kind {
                AttributeKind::Numeric => {
                    let v: f64 = field.parse().map_err(|_| Error::MalformedNumber {
                        line,
                        attribute: f + 1,
                        name: attribute.name.clone(),
                        value: field.to_string(),
                    })?;
                    if !v.is_finite() {
                        return Err(Error::NonFinite {
                            line,
                            attribute: f + 1,
                            name: attribute.name.clone(),
                            value: field.to_string(),
                        });
                    }
                    v
                }
                AttributeKind::Nominal { .. } => {
                    schema.nominal_index(f, field).ok_or_else(|| Error::UnknownNominal {
                        line,
                        attribute: f + 1,
                        name: attribute.name.clone(),
                        value: field.to_string(),
                    })? as f64
                }
            };
            values.push(value);
        }
        let label = &record[width];
        labels.push(schema.class_index(label).ok_or_else(|| Error::UnknownClass {
            line,
            label: label.to_string(),
        })?);
    }
    Dataset::from_parts(schema.clone(), values, labels)
}

/// Writes `dataset` in the format read by [`read_csv`]. Numeric values use
/// the shortest representation that parses back to the same `f64`.
pub fn write_csv<W: Write>(dataset: &Dataset, writer: W, options: CsvOptions) -> Result<()> {
    let mut writer = csv::WriterBuilder::new()
        .delimiter(options.delimiter)
        .from_writer(writer);
    let schema = dataset.schema();
    let csv_err = |e: csv::Error| Error::Csv {
        line: 0,
        message: e.to_string(),
    };
    if options.header {
        let mut header: Vec<&str> = schema.attributes().iter().map(|a| a.name.as_str()).collect();
        header.push(schema.class_name());
        writer.write_record(&header).map_err(csv_err)?;
    }
    let mut fields = Vec::with_capacity(schema.num_attributes() + 1);
    for (i, row) in dataset.rows().enumerate() {
        fields.clear();
        for (f, &v) in row.iter().enumerate() {
            fields.push(match schema.nominal_value(f, v as usize) {
                Some(name) => name.to_string(),
                None => format!("{v:?}"),
            });
        }
        fields.push(schema.classes()[dataset.label(i)].clone());
        writer.write_record(&fields).map_err(csv_err)?;
    }
    writer.flush().map_err(|e| Error::io("<csv output>", e))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Fold {
    pub train: Vec<usize>,
    pub test: Vec<usize>,
}

/// Stratified k-fold split. Each class's indices are shuffled with a
/// generator seeded from `seed` and dealt round-robin into the folds; the
/// dealing position carries over from one class to the next so that overall
/// fold sizes stay balanced too.
pub fn stratified_kfold(dataset: &Dataset, k: usize, seed: u64) -> Result<Vec<Fold>> {
    if k < 2 {
        return Err(Error::InvalidArgument(format!(
            "k must be at least 2 for cross-validation, got {k}"
        )));
    }
    let schema = dataset.schema();
    let by_class = indices_by_class(dataset);
    for (class, members) in by_class.iter().enumerate() {
        if members.len() < k {
            return Err(Error::TooFewExamples {
                class: schema.classes()[class].clone(),
                count: members.len(),
                required: k,
            });
        }
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut fold_of = vec![0usize; dataset.len()];
    let mut next = 0;
    for mut members in by_class {
        members.shuffle(&mut rng);
        for i in members {
            fold_of[i] = next;
            next = (next + 1) % k;
        }
    }

    Ok((0..k)
        .map(|fold| {
            let (test, train) = (0..dataset.len()).partition(|&i| fold_of[i] == fold);
            Fold { train, test }
        })
        .collect())
}

/// Seeded class-preserving subsample: keeps `round(fraction * count)` (at
/// least one) examples of each class. Returned indices are ascending.
pub fn stratified_sample(dataset: &Dataset, fraction: f64, seed: u64) -> Result<Vec<usize>> {
    if !(fraction > 0.0 && fraction <= 1.0) {
        return Err(Error::InvalidArgument(format!(
            "sample fraction must be in (0, 1], got {fraction}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut chosen = Vec::new();
    for mut members in indices_by_class(dataset) {
        if members.is_empty() {
            continue;
        }
        let take = ((members.len() as f64 * fraction).round() as usize).clamp(1, members.len());
        members.shuffle(&mut rng);
        chosen.extend_from_slice(&members[..take]);
    }
    chosen.sort_unstable();
    Ok(chosen)
}

fn indices_by_class(dataset: &Dataset) -> Vec<Vec<usize>> {
    let mut by_class = vec![Vec::new(); dataset.schema().num_classes()];
    for (i, &label) in dataset.labels().iter().enumerate() {
        by_class[label].push(i);
    }
    by_class
}

/// A dataset split into contiguous, ordered example-index ranges.
#[derive(Clone, Debug)]
pub struct PartitionedDataset<'a> {
    dataset: &'a Dataset,
    ranges: Vec<Range<usize>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Partition {
    pub index: usize,
    pub range: Range<usize>,
}

/// Splits `dataset` into `n` contiguous ranges; the first `N mod n` ranges
/// hold `ceil(N/n)` examples, the rest `floor(N/n)`.
pub fn partition(dataset: &Dataset, n: usize) -> Result<PartitionedDataset<'_>> {
    let len = dataset.len();
    if n == 0 || n > len {
        return Err(Error::InvalidArgument(format!(
            "partition count must be in 1..={len}, got {n}"
        )));
    }
    let (base, extra) = (len / n, len % n);
    let mut start = 0;
    let ranges = (0..n)
        .map(|p| {
            let size = base + usize::from(p < extra);
            let range = start..start + size;
            start += size;
            range
        })
        .collect();
    Ok(PartitionedDataset { dataset, ranges })
}

impl<'a> PartitionedDataset<'a> {
    pub fn dataset(&self) -> &'a Dataset {
        self.dataset
    }

    pub fn partition_count(&self) -> usize {
        self.ranges.len()
    }

    pub fn ranges(&self) -> &[Range<usize>] {
        &self.ranges
    }

    pub fn partitions(&self) -> impl ExactSizeIterator<Item = Partition> + '_ {
        self.ranges.iter().cloned().enumerate().map(|(index, range)| Partition { index, range })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn toy_schema() -> Schema {
        Schema::new(
            vec![Attribute::numeric("x"), Attribute::nominal("c", ["a", "b"])],
            "class",
            ["pos", "neg"],
        )
        .unwrap()
    }

    #[test]
    fn three_line_file() {
        let ds = read_csv("1.0,a,pos\n2.0,b,neg\n3.0,a,pos\n".as_bytes(), &toy_schema(), CsvOptions::default())
            .unwrap();
        assert_eq!(ds.len(), 3);
        assert_eq!(ds.labels(), &[0, 1, 0]);
        assert_eq!(ds.row(1), &[2.0, 1.0]);
    }

    #[test]
    fn empty_file_has_no_examples() {
        let err = read_csv("".as_bytes(), &toy_schema(), CsvOptions::default()).unwrap_err();
        assert!(matches!(err, Error::NoExamples));
        assert_eq!(err.to_string(), "no examples");
    }

    #[test]
    fn malformed_numeric_names_line_and_attribute() {
        let err = read_csv("x,a,pos\n".as_bytes(), &toy_schema(), CsvOptions::default()).unwrap_err();
        match err {
            Error::MalformedNumber { line, attribute, .. } => assert_eq!((line, attribute), (1, 1)),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn rejects_unknown_values_and_non_finite() {
        let schema = toy_schema();
        let opts = CsvOptions::default();
        assert!(matches!(
            read_csv("1,z,pos\n".as_bytes(), &schema, opts),
            Err(Error::UnknownNominal { line: 1, attribute: 2, .. })
        ));
        assert!(matches!(
            read_csv("1,a,pos\n1,a,maybe\n".as_bytes(), &schema, opts),
            Err(Error::UnknownClass { line: 2, .. })
        ));
        assert!(matches!(
            read_csv("NaN,a,pos\n".as_bytes(), &schema, opts),
            Err(Error::NonFinite { line: 1, .. })
        ));
        assert!(matches!(
            read_csv("1,a\n".as_bytes(), &schema, opts),
            Err(Error::RowWidth { line: 1, expected: 3, found: 2 })
        ));
        // missing values are not supported
        assert!(matches!(
            read_csv(",a,pos\n".as_bytes(), &schema, opts),
            Err(Error::MalformedNumber { .. })
        ));
    }

    #[test]
    fn header_and_delimiter() {
        let opts = CsvOptions {
            delimiter: b';',
            header: true,
        };
        let ds = read_csv("x;c;class\n0.5;b;neg\n".as_bytes(), &toy_schema(), opts).unwrap();
        assert_eq!(ds.labels(), &[1]);
        let mut out = Vec::new();
        write_csv(&ds, &mut out, opts).unwrap();
        assert_eq!(String::from_utf8(out).unwrap(), "x;c;class\n0.5;b;neg\n");
    }

    #[test]
    fn schema_text_format() {
        let text = "# toy\nx:numeric\nc:nominal:a|b\n\nclass:pos|neg\n";
        let schema = Schema::parse(text).unwrap();
        assert_eq!(schema, toy_schema());
        assert_eq!(Schema::parse(&schema.to_text()).unwrap(), schema);

        assert!(Schema::parse("x:numeric\nx:numeric\nclass:a|b\n").is_err());
        assert!(Schema::parse("x:numeric\nclass:a\n").is_err());
        assert!(Schema::parse("x:nominal:a|a\nclass:a|b\n").is_err());
        assert!(matches!(
            Schema::parse("x:real\nclass:a|b\n"),
            Err(Error::Schema { line: 1, .. })
        ));
    }

    fn labeled(labels: Vec<usize>) -> Dataset {
        let schema = Schema::new(vec![Attribute::numeric("x")], "y", ["a", "b"]).unwrap();
        let rows = (0..labels.len()).map(|i| vec![i as f64]).collect();
        Dataset::new(schema, rows, labels).unwrap()
    }

    #[test]
    fn kfold_exact_divisibility() {
        let ds = labeled((0..10).map(|i| i % 2).collect());
        let folds = stratified_kfold(&ds, 5, 7).unwrap();
        assert_eq!(folds.len(), 5);
        for fold in &folds {
            let mut counts = [0; 2];
            for &i in &fold.test {
                counts[ds.label(i)] += 1;
            }
            assert_eq!(counts, [1, 1]);
            assert_eq!(fold.train.len() + fold.test.len(), 10);
        }
    }

    #[test]
    fn kfold_rejects_degenerate_inputs() {
        let ds = labeled((0..10).map(|i| i % 2).collect());
        assert!(matches!(stratified_kfold(&ds, 1, 0), Err(Error::InvalidArgument(_))));
        assert!(matches!(
            stratified_kfold(&ds, 6, 0),
            Err(Error::TooFewExamples { count: 5, required: 6, .. })
        ));
    }

    #[test]
    fn kfold_uneven_classes() {
        // (7, 3) counts over 3 folds: class 0 lands 2 or 3 per fold, class 1 once.
        let mut labels = vec![0; 7];
        labels.extend([1; 3]);
        let ds = labeled(labels);
        for seed in 0..20 {
            let folds = stratified_kfold(&ds, 3, seed).unwrap();
            let mut seen = vec![0usize; ds.len()];
            for fold in &folds {
                let c0 = fold.test.iter().filter(|&&i| ds.label(i) == 0).count();
                let c1 = fold.test.len() - c0;
                assert!((2..=3).contains(&c0), "class 0 count {c0}");
                assert_eq!(c1, 1, "class 1 count");
                for &i in &fold.test {
                    seen[i] += 1;
                }
            }
            assert!(seen.iter().all(|&s| s == 1));
        }
    }

    #[test]
    fn kfold_is_deterministic_and_counts_are_seed_independent() {
        let ds = labeled((0..23).map(|i| usize::from(i % 3 == 0)).collect());
        let a = stratified_kfold(&ds, 4, 11).unwrap();
        assert_eq!(a, stratified_kfold(&ds, 4, 11).unwrap());
        let b = stratified_kfold(&ds, 4, 12).unwrap();
        assert_ne!(a, b);
        let per_class = |folds: &[Fold]| -> Vec<[usize; 2]> {
            folds
                .iter()
                .map(|f| {
                    let mut c = [0; 2];
                    f.test.iter().for_each(|&i| c[ds.label(i)] += 1);
                    c
                })
                .collect()
        };
        assert_eq!(per_class(&a), per_class(&b));
    }

    #[test]
    fn partition_ranges() {
        let ds = labeled(vec![0; 10]);
        assert_eq!(partition(&ds, 3).unwrap().ranges(), &[0..4, 4..7, 7..10]);
        assert_eq!(partition(&ds, 1).unwrap().ranges().first(), Some(&(0..10)));
        assert_eq!(partition(&ds, 1).unwrap().ranges().len(), 1);
        let five = labeled(vec![1; 5]);
        assert_eq!(
            partition(&five, 5).unwrap().ranges(),
            &[0..1, 1..2, 2..3, 3..4, 4..5]
        );
        assert!(partition(&ds, 11).is_err());
        assert!(partition(&ds, 0).is_err());
    }

    #[test]
    fn stratified_sample_preserves_classes() {
        let ds = labeled((0..100).map(|i| usize::from(i < 20)).collect());
        let half = stratified_sample(&ds, 0.5, 3).unwrap();
        assert_eq!(half.len(), 50);
        assert_eq!(half.iter().filter(|&&i| ds.label(i) == 1).count(), 10);
        assert_eq!(stratified_sample(&ds, 1.0, 3).unwrap(), (0..100).collect::<Vec<_>>());
        assert!(stratified_sample(&ds, 0.0, 3).is_err());
    }
}
