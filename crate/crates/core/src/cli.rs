//! Command line front end: `fit`, `predict`, `evaluate`, `cv` and `bench`.
//!
//! Each `cmd_*` function does the work of one subcommand and returns the text
//! it would print, so the commands can be driven from code as well as from
//! the `fuzzyrb` binary. Exit codes: 0 success, 1 usage or configuration
//! error, 2 data error, 3 no rules induced.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use crate::chc::ProgressLog;
use crate::config::Config;
use crate::dataset::{self, CsvOptions, Schema};
use crate::engine::Engine;
use crate::error::{Error, Result};
use crate::fuzzy::Prediction;
use crate::induction;
use crate::model::Model;
use crate::pipeline;

#[derive(Debug, Parser)]
#[command(name = "fuzzyrb", version, about = "Compact fuzzy rule-based classification")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Train a model and write it with a readable `.rules` listing.
    Fit(FitArgs),
    /// Classify a CSV file with a trained model.
    Predict(PredictArgs),
    /// Report Acc, Acc_Class and GM of a model on labelled data.
    Evaluate(EvaluateArgs),
    /// Stratified k-fold cross-validation.
    Cv(CvArgs),
    /// Runtime grid over core counts and data fractions.
    Bench(BenchArgs),
}

#[derive(Debug, Clone, Args)]
pub struct CsvArgs {
    /// Field delimiter.
    #[arg(long, default_value = ",")]
    pub delimiter: char,
    /// The first line of each CSV file is a header.
    #[arg(long)]
    pub header: bool,
}

impl CsvArgs {
    fn options(&self) -> Result<CsvOptions> {
        if !self.delimiter.is_ascii() {
            return Err(Error::InvalidArgument(format!(
                "delimiter must be a single ASCII character, got {:?}",
                self.delimiter
            )));
        }
        Ok(CsvOptions {
            delimiter: self.delimiter as u8,
            header: self.header,
        })
    }
}

#[derive(Debug, Clone, Args)]
pub struct EngineArgs {
    /// Worker threads (0 means one per CPU).
    #[arg(long, default_value_t = 0)]
    pub threads: usize,
    /// Data partitions; results do not depend on it.
    #[arg(long, default_value_t = 8)]
    pub partitions: usize,
}

impl EngineArgs {
    fn engine(&self) -> Result<Engine> {
        Engine::new(self.threads)
    }
}

#[derive(Debug, Clone, Args)]
pub struct TrainArgs {
    /// Dataset schema file.
    #[arg(long)]
    pub schema: PathBuf,
    /// key=value configuration file.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Skip CHC rule selection.
    #[arg(long)]
    pub lightweight: bool,
    /// Rule cap multiplier.
    #[arg(long, value_parser = ["2", "4", "8"])]
    pub gamma: Option<String>,
    #[arg(long = "cost-sensitive", value_parser = ["on", "off"])]
    pub cost_sensitive: Option<String>,
}

impl TrainArgs {
    pub fn load_config(&self) -> Result<Config> {
        let mut cfg = match &self.config {
            Some(path) => Config::from_file(path)?,
            None => Config::default(),
        };
        if let Some(seed) = self.seed {
            cfg.chc.seed = seed;
        }
        if self.lightweight {
            cfg.lightweight = true;
        }
        if let Some(gamma) = &self.gamma {
            cfg.set("gamma", gamma)?;
        }
        if let Some(cs) = &self.cost_sensitive {
            cfg.set("cost_sensitive", cs)?;
        }
        cfg.validate()?;
        Ok(cfg)
    }
}

#[derive(Debug, Clone, Args)]
pub struct FitArgs {
    /// Training CSV, class label in the last column.
    pub train: PathBuf,
    #[command(flatten)]
    pub train_args: TrainArgs,
    /// Output model file.
    #[arg(long)]
    pub out: PathBuf,
    /// Also dump every counted itemset next to the model.
    #[arg(long = "debug-itemsets")]
    pub debug_itemsets: bool,
    /// Write the per-generation CHC progress log here.
    #[arg(long = "chc-log")]
    pub chc_log: Option<PathBuf>,
    #[command(flatten)]
    pub engine: EngineArgs,
    #[command(flatten)]
    pub csv: CsvArgs,
}

#[derive(Debug, Clone, Args)]
pub struct PredictArgs {
    pub data: PathBuf,
    #[arg(long)]
    pub model: PathBuf,
    /// Predictions CSV.
    #[arg(long)]
    pub out: PathBuf,
    #[command(flatten)]
    pub csv: CsvArgs,
}

#[derive(Debug, Clone, Args)]
pub struct EvaluateArgs {
    pub data: PathBuf,
    #[arg(long)]
    pub model: PathBuf,
    /// Print JSON instead of text.
    #[arg(long)]
    pub json: bool,
    #[command(flatten)]
    pub csv: CsvArgs,
}

#[derive(Debug, Clone, Args)]
pub struct CvArgs {
    pub data: PathBuf,
    #[command(flatten)]
    pub train_args: TrainArgs,
    #[arg(long, default_value_t = 5)]
    pub k: usize,
    #[arg(long)]
    pub json: bool,
    #[command(flatten)]
    pub engine: EngineArgs,
    #[command(flatten)]
    pub csv: CsvArgs,
}

#[derive(Debug, Clone, Args)]
pub struct BenchArgs {
    pub data: PathBuf,
    #[command(flatten)]
    pub train_args: TrainArgs,
    /// Comma-separated core counts.
    #[arg(long, value_delimiter = ',', default_value = "1,2")]
    pub cores: Vec<usize>,
    /// Comma-separated data fractions in (0, 1].
    #[arg(long, value_delimiter = ',', default_value = "0.5,1")]
    pub fractions: Vec<f64>,
    #[arg(long)]
    pub json: bool,
    #[command(flatten)]
    pub csv: CsvArgs,
}

fn rules_path(model: &Path) -> PathBuf {
    model.with_extension("rules")
}

fn itemsets_path(model: &Path) -> PathBuf {
    model.with_extension("itemsets.txt")
}

fn write_text(path: &Path, text: &str) -> Result<()> {
    std::fs::write(path, text).map_err(|e| Error::io(path, e))
}

pub fn cmd_fit(args: &FitArgs) -> Result<String> {
    let mut cfg = args.train_args.load_config()?;
    cfg.induction.keep_itemsets |= args.debug_itemsets;
    let schema = Schema::from_file(&args.train_args.schema)?;
    let train = dataset::load_csv(&args.train, &schema, args.csv.options()?)?;
    let engine = args.engine.engine()?;
    let mut log = ProgressLog::default();
    let fit = pipeline::fit(&engine, &train, &cfg, args.engine.partitions, &mut log)?;

    fit.model.save(&args.out)?;
    write_text(&rules_path(&args.out), &fit.model.rule_base.render())?;
    if let Some(itemsets) = &fit.induction.itemsets {
        write_text(&itemsets_path(&args.out), &induction::render_itemsets(itemsets, &schema))?;
    }
    if let Some(path) = &args.chc_log {
        write_text(path, log.text())?;
    }

    let rb = &fit.model.rule_base;
    let mut out = String::new();
    writeln!(out, "examples\t{}", train.len()).unwrap();
    writeln!(out, "induced_rules\t{}", fit.induction.rule_base.len()).unwrap();
    writeln!(out, "rules\t{}", rb.len()).unwrap();
    writeln!(out, "mean_rule_length\t{:.4}", rb.mean_rule_length()).unwrap();
    writeln!(out, "total_rule_length\t{:.2}", rb.total_rule_length()).unwrap();
    writeln!(out, "evaluations\t{}", fit.model.summary.evaluations).unwrap();
    writeln!(out, "seconds\t{:.3}", fit.timings.total).unwrap();
    Ok(out)
}

/// Writes `row_index,predicted_label,association_degree` (with a header
/// line); uncovered rows are labelled `NO_COVER`.
pub fn write_predictions(out: impl Write, predictions: &[Prediction], model: &Model) -> std::io::Result<()> {
    let mut w = BufWriter::new(out);
    writeln!(w, "row_index,predicted_label,association_degree")?;
    let classes = model.schema().classes();
    for (i, p) in predictions.iter().enumerate() {
        let label = p.class.map_or("NO_COVER", |c| classes[c].as_str());
        writeln!(w, "{i},{label},{:?}", p.degree)?;
    }
    w.flush()
}

pub fn cmd_predict(args: &PredictArgs) -> Result<String> {
    let model = Model::load(&args.model)?;
    let file = File::open(&args.data).map_err(|e| Error::io(&args.data, e))?;
    let predictions = match dataset::read_csv_allow_empty(file, model.schema(), args.csv.options()?)? {
        Some(data) => model.predict(&data)?,
        None => Vec::new(),
    };
    let out = File::create(&args.out).map_err(|e| Error::io(&args.out, e))?;
    write_predictions(out, &predictions, &model).map_err(|e| Error::io(&args.out, e))?;
    let uncovered = predictions.iter().filter(|p| p.class.is_none()).count();
    Ok(format!("predicted\t{}\nno_cover\t{uncovered}\n", predictions.len()))
}

pub fn cmd_evaluate(args: &EvaluateArgs) -> Result<String> {
    let model = Model::load(&args.model)?;
    let data = dataset::load_csv(&args.data, model.schema(), args.csv.options()?)?;
    let report = pipeline::evaluate(&model, &data)?;
    Ok(if args.json {
        report.to_json() + "\n"
    } else {
        report.to_text(model.schema().classes())
    })
}

pub fn cmd_cv(args: &CvArgs) -> Result<String> {
    let cfg = args.train_args.load_config()?;
    let schema = Schema::from_file(&args.train_args.schema)?;
    let data = dataset::load_csv(&args.data, &schema, args.csv.options()?)?;
    let engine = args.engine.engine()?;
    let report = pipeline::cross_validate(&engine, &data, &cfg, args.k, cfg.seed(), args.engine.partitions)?;
    Ok(if args.json { report.to_json() + "\n" } else { report.to_text() })
}

pub fn cmd_bench(args: &BenchArgs) -> Result<String> {
    let cfg = args.train_args.load_config()?;
    let schema = Schema::from_file(&args.train_args.schema)?;
    let data = dataset::load_csv(&args.data, &schema, args.csv.options()?)?;
    if args.cores.is_empty() || args.fractions.is_empty() || args.cores.contains(&0) {
        return Err(Error::InvalidArgument("bench needs positive core counts and fractions".into()));
    }
    let report = pipeline::bench(&data, &cfg, &args.cores, &args.fractions, cfg.seed())?;
    Ok(if args.json { report.to_json() + "\n" } else { report.to_text() })
}

pub fn execute(cli: &Cli) -> Result<String> {
    match &cli.command {
        Command::Fit(a) => cmd_fit(a),
        Command::Predict(a) => cmd_predict(a),
        Command::Evaluate(a) => cmd_evaluate(a),
        Command::Cv(a) => cmd_cv(a),
        Command::Bench(a) => cmd_bench(a),
    }
}

/// Parses `args` (program name first), runs the command, prints its output
/// and returns the process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match execute(&cli) {
        Ok(text) => {
            print!("{text}");
            0
        }
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
