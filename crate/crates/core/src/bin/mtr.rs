//! Command-line front end: batch experiments, single-model train/predict,
//! standalone rank statistics, and dataset inspection.

use std::fmt::Write as _;
use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use mtr::data::{load_feature_rows, split_holdout};
use mtr::diagram::CdDiagram;
use mtr::eval::{evaluate_holdout, evaluate_kfold, FoldPooling};
use mtr::experiment::{
    load_dataset, run_experiment, write_outputs, DatasetSpec, ExperimentConfig,
};
use mtr::model::{train_method, MethodKind, MtrModel};
use mtr::stats::{analyze, ScoreMatrix, StatsOptions};
use mtr::{Error, Result};

#[derive(Parser)]
#[command(name = "mtr", version, about = "Multi-target regression toolkit")]
struct Cli {
    /// Worker threads for training (default: all cores). Results do not
    /// depend on this.
    #[arg(long, global = true)]
    jobs: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Machine,
    Svg,
}

#[derive(Subcommand)]
enum Command {
    /// Run a config-driven grid of method x dataset evaluations.
    Experiment {
        /// Experiment description (TOML).
        #[arg(long)]
        config: PathBuf,
        /// Report directory.
        #[arg(long, default_value = "out")]
        out: PathBuf,
        /// Override the config's seed.
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Train one method on one dataset and write the model to a file.
    Train(TrainArgs),
    /// Apply a saved model to feature rows (CSV); prints one prediction
    /// row per input row.
    Predict {
        #[arg(long)]
        model: PathBuf,
        /// CSV with a header; feature columns first, extra columns ignored.
        #[arg(long)]
        data: PathBuf,
        /// Write predictions here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Rank statistics over a scores CSV (rows = cases, columns = methods).
    Stats {
        /// Score matrix CSV, as written by `experiment` (scores.csv).
        #[arg(long)]
        scores: PathBuf,
        #[arg(long, default_value = "0.05")]
        alpha: f64,
        /// Method pair for a Wilcoxon signed-ranks test, as `A,B`
        /// (repeatable).
        #[arg(long, value_parser = parse_pair)]
        wilcoxon: Vec<(String, String)>,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
        /// Output file; required for --format svg, optional otherwise.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Describe datasets: rows, features by kind, targets.
    DatasetsInfo {
        /// Dataset files (ARFF or CSV).
        #[arg(required = true)]
        data: Vec<PathBuf>,
        /// Trailing target count applied to every file.
        #[arg(long)]
        targets: usize,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
}

#[derive(Args)]
struct TrainArgs {
    /// Training data (ARFF or CSV).
    #[arg(long)]
    data: PathBuf,
    /// One of: mean, st, mts, mtsc, rc, rcc, erc, ercc.
    #[arg(long)]
    method: String,
    /// Trailing target count.
    #[arg(long)]
    targets: usize,
    /// Model output path.
    #[arg(long)]
    out: PathBuf,
    #[arg(long, default_value = "1")]
    seed: u64,
    /// Bagged trees per learner.
    #[arg(long, default_value = "100")]
    trees: usize,
    /// Internal folds for the corrected variants.
    #[arg(long, default_value = "10")]
    internal_folds: usize,
    /// Chain count for the chain ensembles (capped at m!).
    #[arg(long, default_value = "10")]
    chains: usize,
    /// Also report an evaluation: `holdout:<fraction>` or `cv:<folds>`.
    #[arg(long)]
    evaluate: Option<String>,
}

fn parse_pair(s: &str) -> std::result::Result<(String, String), String> {
    match s.split_once(',') {
        Some((a, b)) if !a.is_empty() && !b.is_empty() => {
            Ok((a.trim().to_string(), b.trim().to_string()))
        }
        _ => Err(format!("expected `A,B`, got `{s}`")),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(jobs) = cli.jobs {
        if rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build_global()
            .is_err()
        {
            eprintln!("error: could not configure {jobs} worker threads");
            return ExitCode::from(1);
        }
    }
    match run(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}

fn run(command: Command) -> Result<ExitCode> {
    match command {
        Command::Experiment {
            config,
            out,
            seed,
            format,
        } => cmd_experiment(&config, &out, seed, format),
        Command::Train(args) => cmd_train(args),
        Command::Predict { model, data, out } => cmd_predict(&model, &data, out.as_deref()),
        Command::Stats {
            scores,
            alpha,
            wilcoxon,
            format,
            out,
        } => cmd_stats(&scores, alpha, wilcoxon, format, out.as_deref()),
        Command::DatasetsInfo {
            data,
            targets,
            format,
        } => cmd_datasets_info(&data, targets, format),
    }
}

fn cmd_experiment(
    config_path: &std::path::Path,
    out: &std::path::Path,
    seed: Option<u64>,
    format: Format,
) -> Result<ExitCode> {
    if format == Format::Svg {
        return Err(Error::InvalidArgument(
            "`experiment` writes SVG into the report directory; use --format text|machine".into(),
        ));
    }
    let mut config = ExperimentConfig::load(config_path)?;
    if let Some(seed) = seed {
        config.seed = seed;
    }
    let outcome = run_experiment(&config)?;
    let written = write_outputs(&config, &outcome, out)?;
    match format {
        Format::Machine => {
            let report = serde_json::json!({
                "cells": outcome.records.len(),
                "failures": outcome.failures,
                "outputs": written,
            });
            println!("{}", serde_json::to_string_pretty(&report).unwrap());
        }
        _ => {
            println!(
                "{} cells evaluated, {} failed; reports in {}",
                outcome.records.len(),
                outcome.failures.len(),
                out.display()
            );
            for f in &outcome.failures {
                println!("  FAILED {}/{}: {}", f.dataset, f.method, f.message);
            }
            if let Some(matrix) = &outcome.arrmse_matrix {
                let path = out.join("summary.txt");
                let _ = matrix; // summary content already on disk
                println!("{}", fs::read_to_string(path).unwrap_or_default());
            }
            if let Some(stats) = &outcome.stats {
                let diagram = CdDiagram::new(
                    &stats.method_labels,
                    &stats.avg_ranks,
                    stats.nemenyi_cd,
                    stats.alpha,
                )?;
                println!("{}", diagram.render_text());
            }
        }
    }
    Ok(if outcome.failures.is_empty() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(2)
    })
}

fn cmd_train(args: TrainArgs) -> Result<ExitCode> {
    let kind = MethodKind::parse(&args.method)?;
    let spec = DatasetSpec {
        name: args
            .data
            .file_stem()
            .and_then(|s| s.to_str())
            .unwrap_or("dataset")
            .to_string(),
        path: args.data.clone(),
        targets: Some(args.targets),
        target_names: None,
        holdout_fraction: None,
    };
    let dataset = load_dataset(&spec)?;
    let config = mtr::methods::MethodConfig {
        base: mtr::tree::BaggingConfig {
            trees: args.trees,
            ..mtr::tree::BaggingConfig::default()
        },
        folds: args.internal_folds,
        chains: args.chains,
        seed: args.seed,
    };
    if let Some(protocol) = &args.evaluate {
        let report = match protocol.split_once(':') {
            Some(("holdout", f)) => {
                let fraction: f64 = f
                    .parse()
                    .map_err(|_| Error::InvalidArgument(format!("bad fraction `{f}`")))?;
                let (train, test) = split_holdout(&dataset, fraction)?;
                evaluate_holdout(kind, &config, &train, &test)?
            }
            Some(("cv", k)) => {
                let folds: usize = k
                    .parse()
                    .map_err(|_| Error::InvalidArgument(format!("bad fold count `{k}`")))?;
                evaluate_kfold(kind, &config, &dataset, folds, args.seed, FoldPooling::Micro)?
            }
            _ => {
                return Err(Error::InvalidArgument(format!(
                    "--evaluate expects `holdout:<fraction>` or `cv:<folds>`, got `{protocol}`"
                )))
            }
        };
        for ts in &report.per_target {
            match ts.rrmse.scaled() {
                Some(v) => println!("RRMSE {} = {:.4}", ts.target_name, v),
                None => println!("RRMSE {} undefined (constant target)", ts.target_name),
            }
        }
        if let Some(a) = report.arrmse {
            println!("aRRMSE = {a:.4}");
        }
    }
    let model = train_method(kind, &dataset, &config)?;
    model.save(&args.out)?;
    println!(
        "trained {} on {} ({} rows, {} features, {} targets) -> {}",
        kind.name(),
        spec.name,
        dataset.n(),
        dataset.d(),
        dataset.m(),
        args.out.display()
    );
    Ok(ExitCode::SUCCESS)
}

fn cmd_predict(
    model_path: &std::path::Path,
    data: &std::path::Path,
    out: Option<&std::path::Path>,
) -> Result<ExitCode> {
    let model = MtrModel::load(model_path)?;
    let rows = load_feature_rows(data, &model.feature_descriptors)?;
    let mut text = model.target_names.join(",");
    text.push('\n');
    for row in rows.iter_rows() {
        let prediction = model.predict_checked(row)?;
        let line: Vec<String> = prediction.iter().map(|v| format!("{v}")).collect();
        text.push_str(&line.join(","));
        text.push('\n');
    }
    match out {
        Some(path) => fs::write(path, text).map_err(|e| Error::io(path, e))?,
        None => print!("{text}"),
    }
    Ok(ExitCode::SUCCESS)
}

/// Parse a scores CSV written by `experiment` (or compatible): header
/// `case,<method>...`, then one numeric row per case.
fn read_score_matrix(path: &std::path::Path) -> Result<ScoreMatrix> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let mut lines = text.lines().filter(|l| !l.trim().is_empty());
    let header = lines
        .next()
        .ok_or_else(|| Error::parse(path, 0, "missing header row"))?;
    let mut columns = header.split(',');
    columns.next(); // case-label column
    let method_labels: Vec<String> = columns.map(|s| s.trim().to_string()).collect();
    if method_labels.len() < 2 {
        return Err(Error::parse(path, 1, "need at least two method columns"));
    }
    let mut case_labels = Vec::new();
    let mut scores = Vec::new();
    for (lineno, line) in lines.enumerate() {
        let mut fields = line.split(',');
        case_labels.push(fields.next().unwrap_or("").trim().to_string());
        let row: Vec<f64> = fields
            .map(|f| {
                f.trim()
                    .parse::<f64>()
                    .map_err(|_| Error::parse(path, lineno + 2, format!("bad number `{f}`")))
            })
            .collect::<Result<_>>()?;
        if row.len() != method_labels.len() {
            return Err(Error::parse(
                path,
                lineno + 2,
                format!(
                    "row has {} scores, expected {}",
                    row.len(),
                    method_labels.len()
                ),
            ));
        }
        scores.push(row);
    }
    ScoreMatrix::new(case_labels, method_labels, scores)
}

fn cmd_stats(
    scores: &std::path::Path,
    alpha: f64,
    wilcoxon: Vec<(String, String)>,
    format: Format,
    out: Option<&std::path::Path>,
) -> Result<ExitCode> {
    let matrix = read_score_matrix(scores)?;
    let options = StatsOptions {
        alpha,
        wilcoxon_pairs: wilcoxon,
        wilcoxon_exact: None,
    };
    let stats = analyze(&matrix, &options)?;
    let rendered = match format {
        Format::Machine => serde_json::to_string_pretty(&stats).unwrap() + "\n",
        Format::Svg => CdDiagram::new(
            &stats.method_labels,
            &stats.avg_ranks,
            stats.nemenyi_cd,
            stats.alpha,
        )?
        .render_svg(),
        Format::Text => {
            let mut s = String::new();
            let mut order: Vec<usize> = (0..stats.method_labels.len()).collect();
            order.sort_by(|&a, &b| stats.avg_ranks[a].total_cmp(&stats.avg_ranks[b]));
            let _ = writeln!(s, "average ranks over {} cases:", matrix.n());
            for i in order {
                let _ = writeln!(s, "  {:<8} {:.4}", stats.method_labels[i], stats.avg_ranks[i]);
            }
            let _ = writeln!(
                s,
                "Friedman chi^2 = {:.4} (p = {:.5})",
                stats.friedman_chi2, stats.friedman_p
            );
            let _ = writeln!(
                s,
                "Iman-Davenport F = {:.4} (p = {:.5})",
                stats.iman_davenport_f, stats.iman_davenport_p
            );
            for w in &stats.wilcoxon {
                let _ = writeln!(
                    s,
                    "Wilcoxon {} vs {}: p = {:.4} ({})",
                    w.method_a,
                    w.method_b,
                    w.p_two_sided,
                    if w.exact { "exact" } else { "approx" }
                );
            }
            s.push('\n');
            s.push_str(
                &CdDiagram::new(
                    &stats.method_labels,
                    &stats.avg_ranks,
                    stats.nemenyi_cd,
                    stats.alpha,
                )?
                .render_text(),
            );
            s
        }
    };
    match out {
        Some(path) => fs::write(path, rendered).map_err(|e| Error::io(path, e))?,
        None => print!("{rendered}"),
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_datasets_info(paths: &[PathBuf], targets: usize, format: Format) -> Result<ExitCode> {
    let mut infos = Vec::new();
    for path in paths {
        let spec = DatasetSpec {
            name: path
                .file_stem()
                .and_then(|s| s.to_str())
                .unwrap_or("dataset")
                .to_string(),
            path: path.clone(),
            targets: Some(targets),
            target_names: None,
            holdout_fraction: None,
        };
        let ds = load_dataset(&spec)?;
        let nominal = ds
            .feature_descriptors
            .iter()
            .filter(|f| !matches!(f.kind, mtr::data::FeatureKind::Numeric))
            .count();
        infos.push(serde_json::json!({
            "name": spec.name,
            "path": path,
            "rows": ds.n(),
            "features": ds.d(),
            "numeric_features": ds.d() - nominal,
            "nominal_features": nominal,
            "targets": ds.m(),
            "target_names": ds.target_names,
        }));
    }
    match format {
        Format::Machine => println!(
            "{}",
            serde_json::to_string_pretty(&serde_json::Value::Array(infos)).unwrap()
        ),
        _ => {
            println!(
                "{:<12} {:>6} {:>9} {:>8}  names",
                "name", "rows", "features", "targets"
            );
            for info in &infos {
                println!(
                    "{:<12} {:>6} {:>9} {:>8}  {}",
                    info["name"].as_str().unwrap(),
                    info["rows"].as_u64().unwrap(),
                    info["features"].as_u64().unwrap(),
                    info["targets"].as_u64().unwrap(),
                    info["target_names"]
                        .as_array()
                        .unwrap()
                        .iter()
                        .map(|v| v.as_str().unwrap())
                        .collect::<Vec<_>>()
                        .join(",")
                );
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}
