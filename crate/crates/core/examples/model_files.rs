//! Drive the command line front end from code: write a CSV and schema,
//! fit a model file, predict and evaluate with it, and check that loading
//! and saving the model reproduces it byte for byte.
//!
//! ```bash
//! cargo run --release --example model_files
//! ```

use std::fs;

use fuzzyrb::cli;
use fuzzyrb::dataset::{self, CsvOptions};
use fuzzyrb::model::ModelFile;
use fuzzyrb::synthetic;

pub fn run_example() -> fuzzyrb::Result<()> {
    let dir = std::env::temp_dir().join(format!("fuzzyrb-model-files-{}", std::process::id()));
    fs::create_dir_all(&dir).map_err(|e| fuzzyrb::Error::InvalidArgument(e.to_string()))?;
    let path = |name: &str| dir.join(name).to_string_lossy().into_owned();

    let mixture = synthetic::two_gaussians();
    let train = mixture.sample(2_000, 1)?;
    let test = mixture.sample(1_000, 2)?;
    fs::write(path("data.schema"), train.schema().to_text()).expect("write schema");
    for (name, ds) in [("train.csv", &train), ("test.csv", &test)] {
        let file = fs::File::create(path(name)).expect("create csv");
        dataset::write_csv(ds, file, CsvOptions::default())?;
    }

    let run = |args: &[&str]| {
        let code = cli::main_with_args(std::iter::once("fuzzyrb").chain(args.iter().copied()));
        assert_eq!(code, 0, "fuzzyrb {args:?} failed");
    };
    let (schema, model) = (path("data.schema"), path("model.json"));
    run(&["fit", &path("train.csv"), "--schema", &schema, "--out", &model, "--gamma", "2"]);
    run(&["predict", &path("test.csv"), "--model", &model, "--out", &path("predictions.csv")]);
    run(&["evaluate", &path("test.csv"), "--model", &model]);

    let text = fs::read_to_string(&model).expect("model written");
    let again = ModelFile::from_json(&text)?.into_model()?.to_file().to_json();
    println!("round trip identical: {}", again == text);
    println!("rules file:\n{}", fs::read_to_string(path("model.rules")).expect("rules written"));
    let predictions = fs::read_to_string(path("predictions.csv")).expect("predictions written");
    predictions.lines().take(4).for_each(|l| println!("{l}"));
    fs::remove_dir_all(&dir).ok();
    Ok(())
}

#[allow(dead_code)]
fn main() -> fuzzyrb::Result<()> {
    run_example()
}
