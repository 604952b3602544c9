//! End-to-end runs of the `fuzzyrb` binary.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use fuzzyrb::dataset::{self, CsvOptions};
use fuzzyrb::{synthetic, Dataset};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use tempfile::TempDir;

struct Workspace {
    dir: TempDir,
}

impl Workspace {
    fn new() -> Self {
        Workspace {
            dir: tempfile::tempdir().unwrap(),
        }
    }

    fn path(&self, name: &str) -> PathBuf {
        self.dir.path().join(name)
    }

    fn write_data(&self, name: &str, ds: &Dataset) -> PathBuf {
        let path = self.path(name);
        dataset::write_csv(ds, fs::File::create(&path).unwrap(), CsvOptions::default()).unwrap();
        let schema = self.path("data.schema");
        if !schema.exists() {
            fs::write(&schema, ds.schema().to_text()).unwrap();
        }
        path
    }

    fn write(&self, name: &str, text: &str) -> PathBuf {
        let path = self.path(name);
        fs::write(&path, text).unwrap();
        path
    }
}

fn fuzzyrb(args: &[&dyn AsRef<std::ffi::OsStr>]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fuzzyrb"))
        .args(args.iter().map(|a| a.as_ref()))
        .output()
        .unwrap()
}

fn stdout(out: &Output) -> String {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn field(text: &str, key: &str) -> f64 {
    text.lines()
        .find_map(|l| l.strip_prefix(key)?.strip_prefix('\t'))
        .unwrap_or_else(|| panic!("no {key} in {text}"))
        .parse()
        .unwrap()
}

fn mixture_data(ws: &Workspace) -> PathBuf {
    let ds = synthetic::overlapping_mixture(4, 3, 3).sample(1_500, 4).unwrap();
    ws.write_data("train.csv", &ds)
}

fn fit(ws: &Workspace, train: &Path, out: &str, extra: &[&str]) -> String {
    let model = ws.path(out);
    let schema = ws.path("data.schema");
    let mut args: Vec<&dyn AsRef<std::ffi::OsStr>> = vec![&"fit", &train, &"--schema", &schema, &"--out", &model];
    args.extend(extra.iter().map(|e| e as &dyn AsRef<std::ffi::OsStr>));
    stdout(&fuzzyrb(&args))
}

#[test]
fn fit_writes_model_rules_itemsets_and_log() {
    let ws = Workspace::new();
    let train = mixture_data(&ws);
    let log = ws.path("chc.log");
    let text = fit(&ws, &train, "m.json", &["--debug-itemsets", "--chc-log", log.to_str().unwrap()]);
    assert!(field(&text, "rules") >= 1.0);
    assert!(field(&text, "induced_rules") >= field(&text, "rules"));
    let rules = fs::read_to_string(ws.path("m.rules")).unwrap();
    assert_eq!(rules.lines().filter(|l| l.contains(": IF ")).count() as f64, field(&text, "rules"), "{rules}");
    assert!(!fs::read_to_string(ws.path("m.itemsets.txt")).unwrap().is_empty());
    let log = fs::read_to_string(log).unwrap();
    assert!(log.starts_with("generation=0 "), "{log}");
}

#[test]
fn same_seed_same_model_file() {
    let ws = Workspace::new();
    let train = mixture_data(&ws);
    fit(&ws, &train, "a.json", &["--seed", "5", "--partitions", "3", "--threads", "1"]);
    fit(&ws, &train, "b.json", &["--seed", "5", "--partitions", "7", "--threads", "2"]);
    let a = fs::read(ws.path("a.json")).unwrap();
    assert_eq!(a, fs::read(ws.path("b.json")).unwrap());
}

#[test]
fn lightweight_and_gamma_orderings() {
    let ws = Workspace::new();
    let train = mixture_data(&ws);
    let counts: Vec<f64> = ["2", "4", "8"]
        .iter()
        .map(|g| field(&fit(&ws, &train, &format!("g{g}.json"), &["--lightweight", "--gamma", g]), "rules"))
        .collect();
    assert!(counts.windows(2).all(|w| w[0] <= w[1]), "{counts:?}");
    let full = field(&fit(&ws, &train, "full.json", &[]), "rules");
    assert!(full <= counts[1], "{full} > {}", counts[1]);
}

#[test]
fn predict_agrees_with_evaluate() {
    let ws = Workspace::new();
    let train = mixture_data(&ws);
    fit(&ws, &train, "m.json", &[]);
    let model = ws.path("m.json");
    let preds = ws.path("p.csv");
    let summary = stdout(&fuzzyrb(&[&"predict", &train, &"--model", &model, &"--out", &preds]));
    assert_eq!(field(&summary, "predicted"), 1_500.0);

    let truth: Vec<String> = fs::read_to_string(&train)
        .unwrap()
        .lines()
        .map(|l| l.rsplit(',').next().unwrap().to_string())
        .collect();
    let text = fs::read_to_string(&preds).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("row_index,predicted_label,association_degree"));
    let mut correct = 0;
    for (i, line) in lines.enumerate() {
        let cols: Vec<&str> = line.split(',').collect();
        assert_eq!(cols[0], i.to_string());
        let degree: f64 = cols[2].parse().unwrap();
        if cols[1] == "NO_COVER" {
            assert_eq!(degree, 0.0);
        } else {
            assert!(degree > 0.0);
        }
        correct += usize::from(cols[1] == truth[i]);
    }
    let report: serde_json::Value =
        serde_json::from_str(&stdout(&fuzzyrb(&[&"evaluate", &train, &"--model", &model, &"--json"]))).unwrap();
    assert_eq!(report["accuracy"].as_f64().unwrap(), correct as f64 / 1_500.0);
    assert_eq!(report["examples"].as_u64(), Some(1_500));
}

#[test]
fn predict_on_empty_input_writes_header_only() {
    let ws = Workspace::new();
    let train = mixture_data(&ws);
    fit(&ws, &train, "m.json", &["--lightweight"]);
    let empty = ws.write("empty.csv", "");
    let preds = ws.path("p.csv");
    let summary = stdout(&fuzzyrb(&[&"predict", &empty, &"--model", &ws.path("m.json"), &"--out", &preds]));
    assert_eq!(field(&summary, "predicted"), 0.0);
    assert_eq!(fs::read_to_string(preds).unwrap(), "row_index,predicted_label,association_degree\n");
}

#[test]
fn cv_and_bench_emit_json() {
    let ws = Workspace::new();
    let train = mixture_data(&ws);
    let schema = ws.path("data.schema");
    let config = ws.write("fast.cfg", "# short searches\nevaluations=300\n");
    let cv = stdout(&fuzzyrb(&[&"cv", &train, &"--schema", &schema, &"--config", &config, &"--k", &"3", &"--json"]));
    let cv: serde_json::Value = serde_json::from_str(&cv).unwrap();
    assert_eq!(cv["folds"].as_array().unwrap().len(), 3);
    assert!(cv["mean"]["accuracy"].as_f64().unwrap() > 0.5);

    let bench = fuzzyrb(&[
        &"bench", &train, &"--schema", &schema, &"--config", &config, &"--cores", &"1,2", &"--fractions", &"0.5,1",
        &"--json",
    ]);
    let bench: serde_json::Value = serde_json::from_str(&stdout(&bench)).unwrap();
    assert_eq!(bench["whole"]["cells"].as_array().unwrap().len(), 4);
}

#[test]
fn exit_codes() {
    let ws = Workspace::new();
    let train = mixture_data(&ws);
    let schema = ws.path("data.schema");
    let model = ws.path("m.json");
    let code = |args: &[&dyn AsRef<std::ffi::OsStr>]| fuzzyrb(args).status.code().unwrap();

    assert_eq!(code(&[&"--help"]), 0);
    // usage and configuration errors
    assert_eq!(code(&[&"fit"]), 1);
    assert_eq!(code(&[&"fit", &train, &"--schema", &schema, &"--out", &model, &"--gamma", &"3"]), 1);
    let bad = ws.write("bad.cfg", "gamma=4\nnot_a_key=1\n");
    assert_eq!(code(&[&"fit", &train, &"--schema", &schema, &"--out", &model, &"--config", &bad]), 1);
    // data errors
    assert_eq!(code(&[&"fit", &ws.path("missing.csv"), &"--schema", &schema, &"--out", &model]), 2);
    let broken = ws.write("broken.csv", "0.1,0.2,0.3,0.4,c0\n0.1,oops,0.3,0.4,c1\n");
    assert_eq!(code(&[&"fit", &broken, &"--schema", &schema, &"--out", &model]), 2);
    assert_eq!(code(&[&"predict", &train, &"--model", &ws.path("none.json"), &"--out", &ws.path("p.csv")]), 2);

    // labels independent of the features leave no confident rule
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let g = synthetic::two_gaussians();
    let ds = g.sample(400, 2).unwrap();
    let labels = (0..400).map(|_| rng.random_range(0..2)).collect();
    let noise = Dataset::new(ds.schema().clone(), ds.rows().map(<[f64]>::to_vec).collect(), labels).unwrap();
    let ws2 = Workspace::new();
    let noise_csv = ws2.write_data("noise.csv", &noise);
    let strict = ws2.write("strict.cfg", "min_conf_fuzzy=0.95\n");
    let out = ws2.path("m.json");
    assert_eq!(
        code(&[&"fit", &noise_csv, &"--schema", &ws2.path("data.schema"), &"--out", &out, &"--config", &strict]),
        3
    );
}
