//! Batch experiments: a TOML config names datasets, methods and an
//! evaluation protocol; the runner fills the method-by-dataset score grid
//! and hands the result to the rank statistics and diagram code.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::data::{load_arff, load_csv, split_holdout, MultiTargetDataset, TargetSpec};
use crate::diagram::CdDiagram;
use crate::error::{Error, Result};
use crate::eval::{evaluate_holdout, evaluate_kfold, EvaluationReport, FoldPooling};
use crate::methods::MethodConfig;
use crate::model::MethodKind;
use crate::stats::{analyze, ScoreMatrix, StatsOptions, StatsResult};
use crate::tree::{BaggingConfig, TreeConfig};

fn default_seed() -> u64 {
    1
}
fn default_folds() -> usize {
    10
}
fn default_trees() -> usize {
    100
}
fn default_min_leaf() -> usize {
    5
}
fn default_internal_folds() -> usize {
    10
}
fn default_chains() -> usize {
    10
}
fn default_alpha() -> f64 {
    0.05
}
fn default_methods() -> Vec<String> {
    ["st", "mts", "mtsc", "rc", "rcc", "erc", "ercc"]
        .iter()
        .map(|s| s.to_string())
        .collect()
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ExperimentConfig {
    #[serde(default = "default_seed")]
    pub seed: u64,
    /// Outer cross-validation folds; a dataset can opt into a holdout
    /// split instead.
    #[serde(default = "default_folds")]
    pub folds: usize,
    #[serde(default = "default_methods")]
    pub methods: Vec<String>,
    #[serde(default)]
    pub learner: LearnerConfig,
    pub datasets: Vec<DatasetSpec>,
    #[serde(default)]
    pub analysis: AnalysisConfig,
    /// Extra score columns from outside this run (e.g. published numbers
    /// for a method we do not implement); they join the aRRMSE ranking.
    #[serde(default)]
    pub imported: Vec<ImportedColumn>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LearnerConfig {
    #[serde(default = "default_trees")]
    pub trees: usize,
    #[serde(default = "default_min_leaf")]
    pub min_leaf: usize,
    /// Internal folds used by the corrected stacking/chaining variants.
    #[serde(default = "default_internal_folds")]
    pub internal_folds: usize,
    /// Requested ensemble-of-chains size (capped at m! per dataset).
    #[serde(default = "default_chains")]
    pub chains: usize,
}

impl Default for LearnerConfig {
    fn default() -> Self {
        LearnerConfig {
            trees: default_trees(),
            min_leaf: default_min_leaf(),
            internal_folds: default_internal_folds(),
            chains: default_chains(),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DatasetSpec {
    pub name: String,
    pub path: PathBuf,
    /// Trailing target count; ignored when `target_names` is given.
    #[serde(default)]
    pub targets: Option<usize>,
    #[serde(default)]
    pub target_names: Option<Vec<String>>,
    /// Train on the first `fraction` of rows and test on the rest,
    /// instead of the outer cross-validation.
    #[serde(default)]
    pub holdout_fraction: Option<f64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AnalysisConfig {
    #[serde(default = "default_alpha")]
    pub alpha: f64,
    /// Method-name pairs for Wilcoxon signed-ranks tests over the
    /// aRRMSE columns.
    #[serde(default)]
    pub wilcoxon: Vec<(String, String)>,
    /// Also rank methods on every (dataset, target) row separately.
    #[serde(default)]
    pub per_target: bool,
}

impl Default for AnalysisConfig {
    fn default() -> Self {
        AnalysisConfig {
            alpha: default_alpha(),
            wilcoxon: Vec::new(),
            per_target: false,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ImportedColumn {
    pub name: String,
    /// aRRMSE (reporting scale) per dataset name; must cover every dataset.
    pub scores: std::collections::BTreeMap<String, f64>,
}

impl ExperimentConfig {
    pub fn from_toml_str(text: &str) -> Result<ExperimentConfig> {
        let mut config: ExperimentConfig =
            toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        config.validate()?;
        // canonical upper-case method labels everywhere downstream
        for name in &mut config.methods {
            *name = MethodKind::parse(name)?.name().to_string();
        }
        for (a, b) in &mut config.analysis.wilcoxon {
            if let Ok(kind) = MethodKind::parse(a) {
                *a = kind.name().to_string();
            }
            if let Ok(kind) = MethodKind::parse(b) {
                *b = kind.name().to_string();
            }
        }
        Ok(config)
    }

    /// Load from a file; dataset paths are taken relative to its directory.
    pub fn load(path: impl AsRef<Path>) -> Result<ExperimentConfig> {
        let path = path.as_ref();
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let mut config = Self::from_toml_str(&text)?;
        if let Some(dir) = path.parent() {
            for ds in &mut config.datasets {
                if ds.path.is_relative() {
                    ds.path = dir.join(&ds.path);
                }
            }
        }
        Ok(config)
    }

    fn validate(&self) -> Result<()> {
        if self.datasets.is_empty() {
            return Err(Error::Config("no datasets configured".into()));
        }
        if self.methods.is_empty() {
            return Err(Error::Config("no methods configured".into()));
        }
        for name in &self.methods {
            MethodKind::parse(name)?;
        }
        let mut names: Vec<&str> = self.datasets.iter().map(|d| d.name.as_str()).collect();
        names.sort_unstable();
        names.dedup();
        if names.len() != self.datasets.len() {
            return Err(Error::Config("duplicate dataset names".into()));
        }
        for ds in &self.datasets {
            if ds.targets.is_none() && ds.target_names.is_none() {
                return Err(Error::Config(format!(
                    "dataset `{}` needs `targets` or `target_names`",
                    ds.name
                )));
            }
            if let Some(f) = ds.holdout_fraction {
                if !(f > 0.0 && f < 1.0) {
                    return Err(Error::Config(format!(
                        "dataset `{}`: holdout_fraction must be in (0, 1)",
                        ds.name
                    )));
                }
            }
        }
        for col in &self.imported {
            for ds in &self.datasets {
                if !col.scores.contains_key(&ds.name) {
                    return Err(Error::Config(format!(
                        "imported column `{}` has no score for dataset `{}`",
                        col.name, ds.name
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn method_kinds(&self) -> Vec<MethodKind> {
        self.methods
            .iter()
            .map(|s| MethodKind::parse(s).expect("validated"))
            .collect()
    }

    pub fn method_config(&self) -> MethodConfig {
        MethodConfig {
            base: BaggingConfig {
                trees: self.learner.trees,
                bootstrap: true,
                tree: TreeConfig {
                    min_leaf: self.learner.min_leaf,
                    ..TreeConfig::default()
                },
            },
            folds: self.learner.internal_folds,
            chains: self.learner.chains,
            seed: self.seed,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct CellRecord {
    pub dataset: String,
    pub method: String,
    pub report: EvaluationReport,
}

#[derive(Debug, Clone, Serialize)]
pub struct CellFailure {
    pub dataset: String,
    pub method: String,
    pub message: String,
}

#[derive(Debug, Serialize)]
pub struct ExperimentOutcome {
    pub records: Vec<CellRecord>,
    pub failures: Vec<CellFailure>,
    pub arrmse_matrix: Option<ScoreMatrix>,
    pub per_target_matrix: Option<ScoreMatrix>,
    pub stats: Option<StatsResult>,
    pub per_target_stats: Option<StatsResult>,
}

pub fn load_dataset(spec: &DatasetSpec) -> Result<MultiTargetDataset> {
    let target_spec = match (&spec.target_names, spec.targets) {
        (Some(names), _) => TargetSpec::Names(names.clone()),
        (None, Some(m)) => TargetSpec::TrailingCount(m),
        (None, None) => {
            return Err(Error::Config(format!(
                "dataset `{}` has no target specification",
                spec.name
            )))
        }
    };
    let ext = spec
        .path
        .extension()
        .and_then(|e| e.to_str())
        .unwrap_or("")
        .to_ascii_lowercase();
    match ext.as_str() {
        "csv" => match target_spec {
            TargetSpec::TrailingCount(m) => load_csv(&spec.path, m),
            TargetSpec::Names(_) => Err(Error::Config(format!(
                "dataset `{}`: CSV input selects targets by trailing count",
                spec.name
            ))),
        },
        _ => load_arff(&spec.path, &target_spec),
    }
}

/// Run every (dataset, method) cell. Individual cell errors are collected
/// rather than aborting the run; the rank analysis only happens when the
/// full grid succeeded.
pub fn run_experiment(config: &ExperimentConfig) -> Result<ExperimentOutcome> {
    let kinds = config.method_kinds();
    let method_config = config.method_config();
    let mut records = Vec::new();
    let mut failures = Vec::new();

    for spec in &config.datasets {
        let dataset = match load_dataset(spec) {
            Ok(d) => d,
            Err(e) => {
                for kind in &kinds {
                    failures.push(CellFailure {
                        dataset: spec.name.clone(),
                        method: kind.name().to_string(),
                        message: e.to_string(),
                    });
                }
                continue;
            }
        };
        let holdout = spec
            .holdout_fraction
            .map(|f| split_holdout(&dataset, f))
            .transpose()?;
        for &kind in &kinds {
            let result = match &holdout {
                Some((train, test)) => evaluate_holdout(kind, &method_config, train, test),
                None => evaluate_kfold(
                    kind,
                    &method_config,
                    &dataset,
                    config.folds,
                    config.seed,
                    FoldPooling::Micro,
                ),
            };
            match result {
                Ok(report) => records.push(CellRecord {
                    dataset: spec.name.clone(),
                    method: kind.name().to_string(),
                    report,
                }),
                Err(e) => failures.push(CellFailure {
                    dataset: spec.name.clone(),
                    method: kind.name().to_string(),
                    message: e.to_string(),
                }),
            }
        }
    }

    let mut outcome = ExperimentOutcome {
        records,
        failures,
        arrmse_matrix: None,
        per_target_matrix: None,
        stats: None,
        per_target_stats: None,
    };
    if outcome.failures.is_empty() {
        build_matrices(config, &mut outcome)?;
        if let Some(matrix) = &outcome.arrmse_matrix {
            if matrix.n() >= 2 {
                let options = StatsOptions {
                    alpha: config.analysis.alpha,
                    wilcoxon_pairs: config.analysis.wilcoxon.clone(),
                    wilcoxon_exact: None,
                };
                outcome.stats = Some(analyze(matrix, &options)?);
            }
        }
        if let Some(matrix) = &outcome.per_target_matrix {
            if matrix.n() >= 2 {
                let options = StatsOptions {
                    alpha: config.analysis.alpha,
                    wilcoxon_pairs: config.analysis.wilcoxon.clone(),
                    wilcoxon_exact: None,
                };
                outcome.per_target_stats = Some(analyze(matrix, &options)?);
            }
        }
    }
    Ok(outcome)
}

fn cell<'a>(
    records: &'a [CellRecord],
    dataset: &str,
    method: &str,
) -> Option<&'a EvaluationReport> {
    records
        .iter()
        .find(|r| r.dataset == dataset && r.method == method)
        .map(|r| &r.report)
}

fn build_matrices(config: &ExperimentConfig, outcome: &mut ExperimentOutcome) -> Result<()> {
    let mut method_labels: Vec<String> = config.methods.clone();
    for col in &config.imported {
        method_labels.push(col.name.clone());
    }

    let mut rows = Vec::new();
    for spec in &config.datasets {
        let mut row = Vec::with_capacity(method_labels.len());
        for method in &config.methods {
            let report = cell(&outcome.records, &spec.name, method)
                .ok_or_else(|| Error::Config(format!("missing cell {}/{method}", spec.name)))?;
            let score = report.arrmse.ok_or_else(|| {
                Error::InvalidArgument(format!(
                    "aRRMSE undefined for {}/{method}; cannot rank",
                    spec.name
                ))
            })?;
            row.push(score);
        }
        for col in &config.imported {
            row.push(col.scores[&spec.name]);
        }
        rows.push(row);
    }
    let case_labels = config.datasets.iter().map(|d| d.name.clone()).collect();
    outcome.arrmse_matrix = Some(ScoreMatrix::new(case_labels, method_labels, rows)?);

    if config.analysis.per_target && config.imported.is_empty() {
        let mut labels = Vec::new();
        let mut rows = Vec::new();
        for spec in &config.datasets {
            let first = cell(&outcome.records, &spec.name, &config.methods[0]).unwrap();
            for (t, ts) in first.per_target.iter().enumerate() {
                let mut row = Vec::with_capacity(config.methods.len());
                for method in &config.methods {
                    let report = cell(&outcome.records, &spec.name, method).unwrap();
                    match report.per_target[t].rrmse.scaled() {
                        Some(v) => row.push(v),
                        None => {
                            return Err(Error::InvalidArgument(format!(
                                "RRMSE undefined for {}:{} under {method}",
                                spec.name, ts.target_name
                            )))
                        }
                    }
                }
                labels.push(format!("{}:{}", spec.name, ts.target_name));
                rows.push(row);
            }
        }
        outcome.per_target_matrix = Some(ScoreMatrix::new(
            labels,
            config.methods.clone(),
            rows,
        )?);
    }
    Ok(())
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

fn matrix_csv(matrix: &ScoreMatrix) -> String {
    let mut out = String::from("case");
    for label in &matrix.method_labels {
        out.push(',');
        out.push_str(&csv_field(label));
    }
    out.push('\n');
    for (label, row) in matrix.case_labels.iter().zip(&matrix.scores) {
        out.push_str(&csv_field(label));
        for v in row {
            let _ = write!(out, ",{v:.4}");
        }
        out.push('\n');
    }
    out
}

/// Scores-by-dataset table with the per-row minimum starred.
fn summary_table(matrix: &ScoreMatrix) -> String {
    let name_w = matrix
        .case_labels
        .iter()
        .map(|l| l.len())
        .chain(std::iter::once("dataset".len()))
        .max()
        .unwrap();
    let col_w = matrix
        .method_labels
        .iter()
        .map(|l| l.len().max(8))
        .collect::<Vec<_>>();
    let mut out = format!("{:<name_w$}", "dataset");
    for (label, w) in matrix.method_labels.iter().zip(&col_w) {
        let _ = write!(out, "  {label:>w$}");
    }
    out.push('\n');
    for (label, row) in matrix.case_labels.iter().zip(&matrix.scores) {
        let best = row.iter().copied().fold(f64::INFINITY, f64::min);
        let _ = write!(out, "{label:<name_w$}");
        for (v, w) in row.iter().zip(&col_w) {
            let mark = if *v == best { "*" } else { "" };
            let text = format!("{v:.2}{mark}");
            let _ = write!(out, "  {text:>w$}");
        }
        out.push('\n');
    }
    out
}

fn stats_text(stats: &StatsResult) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "average ranks (lower is better):");
    let mut order: Vec<usize> = (0..stats.method_labels.len()).collect();
    order.sort_by(|&a, &b| stats.avg_ranks[a].total_cmp(&stats.avg_ranks[b]));
    for i in order {
        let _ = writeln!(
            out,
            "  {:<8} {:.4}",
            stats.method_labels[i], stats.avg_ranks[i]
        );
    }
    let _ = writeln!(
        out,
        "Friedman chi^2 = {:.4} (p = {:.5}); Iman-Davenport F = {:.4} (p = {:.5})",
        stats.friedman_chi2, stats.friedman_p, stats.iman_davenport_f, stats.iman_davenport_p
    );
    let _ = writeln!(
        out,
        "Nemenyi CD = {:.4} at alpha = {}",
        stats.nemenyi_cd, stats.alpha
    );
    if stats.significant_pairs.is_empty() {
        let _ = writeln!(out, "no pairwise rank differences exceed the CD");
    } else {
        let _ = writeln!(out, "pairs whose rank gap exceeds the CD:");
        for &(i, j) in &stats.significant_pairs {
            let _ = writeln!(
                out,
                "  {} vs {} (gap {:.4})",
                stats.method_labels[i],
                stats.method_labels[j],
                (stats.avg_ranks[i] - stats.avg_ranks[j]).abs()
            );
        }
    }
    for w in &stats.wilcoxon {
        let kind = if w.exact { "exact" } else { "approx" };
        let _ = writeln!(
            out,
            "Wilcoxon {} vs {}: W+ = {}, W- = {}, p = {:.4} ({kind}, {} zeros dropped)",
            w.method_a, w.method_b, w.w_plus, w.w_minus, w.p_two_sided, w.dropped_zeros
        );
    }
    out
}

/// Write the report bundle. Returns the files written.
pub fn write_outputs(
    config: &ExperimentConfig,
    outcome: &ExperimentOutcome,
    dir: impl AsRef<Path>,
) -> Result<Vec<PathBuf>> {
    let dir = dir.as_ref();
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let mut written = Vec::new();
    let mut emit = |name: &str, contents: String| -> Result<()> {
        let path = dir.join(name);
        fs::write(&path, contents).map_err(|e| Error::io(&path, e))?;
        written.push(path);
        Ok(())
    };

    let records = serde_json::json!({
        "records": outcome.records,
        "failures": outcome.failures,
    });
    emit(
        "records.json",
        serde_json::to_string_pretty(&records).expect("serializable") + "\n",
    )?;
    emit(
        "config_resolved.toml",
        toml::to_string_pretty(config).map_err(|e| Error::Config(e.to_string()))?,
    )?;
    if let Some(matrix) = &outcome.arrmse_matrix {
        emit("scores.csv", matrix_csv(matrix))?;
        emit("summary.txt", summary_table(matrix))?;
    }
    if let Some(matrix) = &outcome.per_target_matrix {
        emit("per_target_scores.csv", matrix_csv(matrix))?;
    }
    for (stats, prefix) in [
        (&outcome.stats, ""),
        (&outcome.per_target_stats, "per_target_"),
    ] {
        if let Some(stats) = stats {
            emit(
                &format!("{prefix}stats.json"),
                serde_json::to_string_pretty(stats).expect("serializable") + "\n",
            )?;
            emit(&format!("{prefix}stats.txt"), stats_text(stats))?;
            let diagram = CdDiagram::new(
                &stats.method_labels,
                &stats.avg_ranks,
                stats.nemenyi_cd,
                stats.alpha,
            )?;
            emit(&format!("{prefix}cd_diagram.txt"), diagram.render_text())?;
            emit(&format!("{prefix}cd_diagram.svg"), diagram.render_svg())?;
        }
    }
    Ok(written)
}
