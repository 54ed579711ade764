//! RRMSE computation and the hold-out / k-fold evaluation harness.
//!
//! RRMSE for a target is the RMSE of the model divided by the RMSE of
//! predicting the training-set mean of that target. Reported values are
//! scaled by 100 to match the usual tabulation; internal computation is
//! unscaled.

use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::data::{make_kfold, MultiTargetDataset};
use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::methods::MethodConfig;
use crate::model::{train_method, MethodKind, MtrModel};

/// A per-target score. `Undefined` flags a degenerate denominator (all test
/// values equal the train mean); it is never silently 0 or infinity.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Rrmse {
    Value(f64),
    Undefined,
}

impl Rrmse {
    pub fn value(self) -> Option<f64> {
        match self {
            Rrmse::Value(v) => Some(v),
            Rrmse::Undefined => None,
        }
    }

    /// Reporting scale (x100).
    pub fn scaled(self) -> Option<f64> {
        self.value().map(|v| v * 100.0)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TargetScore {
    pub target_name: String,
    pub rrmse: Rrmse,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum ProtocolSpec {
    Holdout,
    KFold { folds: usize, seed: u64 },
}

/// How per-fold errors are combined in k-fold evaluation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum FoldPooling {
    /// Sum squared-error numerators and denominators across folds before the
    /// final square root.
    #[default]
    Micro,
    /// Average the per-fold RRMSE values.
    Macro,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvaluationReport {
    pub method: String,
    pub dataset: String,
    pub protocol: ProtocolSpec,
    pub pooling: FoldPooling,
    pub per_target: Vec<TargetScore>,
    /// Mean of the defined per-target RRMSE values (reporting scale).
    pub arrmse: Option<f64>,
    pub warnings: Vec<String>,
    /// Seconds; excluded from byte-stable machine outputs.
    #[serde(skip)]
    pub wall_time: f64,
}

/// Per-target RRMSE of a prediction matrix against actuals, with the given
/// train-set target means as the baseline (unscaled; multiply by 100 for
/// reporting).
pub fn rrmse(predictions: &Matrix, actuals: &Matrix, train_means: &[f64]) -> Result<Vec<Rrmse>> {
    if predictions.rows() != actuals.rows()
        || predictions.cols() != actuals.cols()
        || train_means.len() != actuals.cols()
    {
        return Err(Error::DimensionMismatch(
            "predictions, actuals and train means disagree".into(),
        ));
    }
    if actuals.rows() == 0 {
        return Err(Error::InvalidArgument("empty test set".into()));
    }
    let mut out = Vec::with_capacity(actuals.cols());
    for j in 0..actuals.cols() {
        let mut num = 0.0;
        let mut den = 0.0;
        for i in 0..actuals.rows() {
            let y = actuals.get(i, j);
            num += (predictions.get(i, j) - y).powi(2);
            den += (train_means[j] - y).powi(2);
        }
        out.push(if den == 0.0 {
            Rrmse::Undefined
        } else {
            Rrmse::Value((num / den).sqrt())
        });
    }
    Ok(out)
}

fn scores_to_report(
    method: String,
    dataset: String,
    protocol: ProtocolSpec,
    pooling: FoldPooling,
    target_names: &[String],
    scores: Vec<Rrmse>,
    wall_time: f64,
) -> EvaluationReport {
    let mut warnings = Vec::new();
    let per_target: Vec<TargetScore> = target_names
        .iter()
        .zip(&scores)
        .map(|(name, &score)| {
            if score == Rrmse::Undefined {
                warnings.push(format!(
                    "target `{name}`: degenerate denominator, excluded from aRRMSE"
                ));
            }
            TargetScore {
                target_name: name.clone(),
                rrmse: score,
            }
        })
        .collect();
    let defined: Vec<f64> = scores.iter().filter_map(|s| s.scaled()).collect();
    let arrmse = if defined.is_empty() {
        None
    } else {
        Some(defined.iter().sum::<f64>() / defined.len() as f64)
    };
    EvaluationReport {
        method,
        dataset,
        protocol,
        pooling,
        per_target,
        arrmse,
        warnings,
        wall_time,
    }
}

fn predict_all(model: &MtrModel, features: &Matrix) -> Matrix {
    let rows: Vec<Vec<f64>> = features.iter_rows().map(|x| model.predict(x)).collect();
    Matrix::from_rows(&rows).expect("model outputs are fixed-width")
}

/// Train on the train split, score on the test split with train-split target
/// means as the RRMSE baseline.
pub fn evaluate_holdout(
    kind: MethodKind,
    config: &MethodConfig,
    train: &MultiTargetDataset,
    test: &MultiTargetDataset,
) -> Result<EvaluationReport> {
    if !train.schema_matches(test) {
        return Err(Error::SchemaMismatch(
            "train and test schemas differ".into(),
        ));
    }
    let start = Instant::now();
    let model = train_method(kind, train, config)?;
    let predictions = predict_all(&model, &test.features);
    let scores = rrmse(&predictions, &test.targets, &train.train_target_means())?;
    Ok(scores_to_report(
        kind.name().to_string(),
        String::new(),
        ProtocolSpec::Holdout,
        FoldPooling::Micro,
        &train.target_names,
        scores,
        start.elapsed().as_secs_f64(),
    ))
}

/// Outer k-fold cross-validation. Each fold trains on the complement (train
/// means computed on that complement) and predicts the held-out rows; fold
/// errors are combined per `pooling`.
pub fn evaluate_kfold(
    kind: MethodKind,
    config: &MethodConfig,
    dataset: &MultiTargetDataset,
    folds: usize,
    seed: u64,
    pooling: FoldPooling,
) -> Result<EvaluationReport> {
    let start = Instant::now();
    let assignment = make_kfold(dataset.n(), folds, seed)?;
    let m = dataset.m();
    let mut num = vec![0.0f64; m];
    let mut den = vec![0.0f64; m];
    let mut fold_scores: Vec<Vec<Rrmse>> = Vec::with_capacity(folds);
    for fold in 0..folds {
        let train = dataset.select_rows(&assignment.complement_rows(fold));
        let test = dataset.select_rows(&assignment.fold_rows(fold));
        let model = train_method(kind, &train, config)?;
        let predictions = predict_all(&model, &test.features);
        let means = train.train_target_means();
        match pooling {
            FoldPooling::Micro => {
                for j in 0..m {
                    for i in 0..test.n() {
                        let y = test.targets.get(i, j);
                        num[j] += (predictions.get(i, j) - y).powi(2);
                        den[j] += (means[j] - y).powi(2);
                    }
                }
            }
            FoldPooling::Macro => {
                fold_scores.push(rrmse(&predictions, &test.targets, &means)?);
            }
        }
    }
    let scores: Vec<Rrmse> = match pooling {
        FoldPooling::Micro => (0..m)
            .map(|j| {
                if den[j] == 0.0 {
                    Rrmse::Undefined
                } else {
                    Rrmse::Value((num[j] / den[j]).sqrt())
                }
            })
            .collect(),
        FoldPooling::Macro => (0..m)
            .map(|j| {
                let vals: Vec<f64> = fold_scores.iter().filter_map(|f| f[j].value()).collect();
                if vals.len() < folds {
                    Rrmse::Undefined
                } else {
                    Rrmse::Value(vals.iter().sum::<f64>() / vals.len() as f64)
                }
            })
            .collect(),
    };
    Ok(scores_to_report(
        kind.name().to_string(),
        String::new(),
        ProtocolSpec::KFold { folds, seed },
        pooling,
        &dataset.target_names,
        scores,
        start.elapsed().as_secs_f64(),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::data::FeatureDescriptor;

    fn mat(rows: &[&[f64]]) -> Matrix {
        Matrix::from_rows(&rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>()).unwrap()
    }

    #[test]
    fn constant_mean_predictor_scores_one() {
        // predictions equal the train mean: numerator == denominator
        let preds = mat(&[&[2.0], &[2.0]]);
        let actual = mat(&[&[2.0], &[4.0]]);
        let scores = rrmse(&preds, &actual, &[2.0]).unwrap();
        assert_eq!(scores[0].scaled().unwrap(), 100.0);
    }

    #[test]
    fn perfect_predictor_scores_zero() {
        let actual = mat(&[&[1.0], &[5.0]]);
        let scores = rrmse(&actual, &actual, &[3.0]).unwrap();
        assert_eq!(scores[0].scaled().unwrap(), 0.0);
    }

    #[test]
    fn hand_computed_example() {
        // train y = {1,2,3} (mean 2), test y = {2,4}, predictions {3,3}
        // sqrt(((3-2)^2 + (3-4)^2) / ((2-2)^2 + (2-4)^2)) = sqrt(2/4)
        let preds = mat(&[&[3.0], &[3.0]]);
        let actual = mat(&[&[2.0], &[4.0]]);
        let scores = rrmse(&preds, &actual, &[2.0]).unwrap();
        assert!((scores[0].scaled().unwrap() - 70.71067811865476).abs() < 1e-9);
    }

    #[test]
    fn degenerate_denominator_is_flagged() {
        let preds = mat(&[&[1.0], &[2.0]]);
        let actual = mat(&[&[3.0], &[3.0]]);
        let scores = rrmse(&preds, &actual, &[3.0]).unwrap();
        assert_eq!(scores[0], Rrmse::Undefined);
    }

    #[test]
    fn rrmse_affine_invariance() {
        let preds = mat(&[&[3.0], &[1.5]]);
        let actual = mat(&[&[2.0], &[4.0]]);
        let base = rrmse(&preds, &actual, &[2.5]).unwrap()[0].value().unwrap();
        let (a, b) = (3.5, -7.0);
        let preds2 = mat(&[&[3.0 * a + b], &[1.5 * a + b]]);
        let actual2 = mat(&[&[2.0 * a + b], &[4.0 * a + b]]);
        let got = rrmse(&preds2, &actual2, &[2.5 * a + b]).unwrap()[0]
            .value()
            .unwrap();
        assert!((got - base).abs() < 1e-12);
    }

    fn tiny_dataset(n: usize) -> MultiTargetDataset {
        let features =
            Matrix::from_rows(&(0..n).map(|i| vec![i as f64]).collect::<Vec<_>>()).unwrap();
        let targets = Matrix::from_rows(
            &(0..n)
                .map(|i| vec![(i % 3) as f64, (i % 2) as f64])
                .collect::<Vec<_>>(),
        )
        .unwrap();
        MultiTargetDataset::new(
            features,
            targets,
            vec![FeatureDescriptor::numeric("x")],
            vec!["t0".into(), "t1".into()],
        )
        .unwrap()
    }

    #[test]
    fn dummy_mean_scores_exactly_100_under_kfold() {
        let ds = tiny_dataset(12);
        let report = evaluate_kfold(
            MethodKind::MeanBaseline,
            &MethodConfig::default(),
            &ds,
            4,
            9,
            FoldPooling::Micro,
        )
        .unwrap();
        for score in &report.per_target {
            assert_eq!(score.rrmse.scaled().unwrap(), 100.0);
        }
        assert_eq!(report.arrmse.unwrap(), 100.0);
    }

    #[test]
    fn dummy_mean_scores_exactly_100_under_holdout() {
        let ds = tiny_dataset(12);
        let (train, test) = crate::data::split_holdout(&ds, 0.5).unwrap();
        let report = evaluate_holdout(
            MethodKind::MeanBaseline,
            &MethodConfig::default(),
            &train,
            &test,
        )
        .unwrap();
        // holdout means differ from test values; 100.00 holds by the
        // numerator == denominator identity
        for score in &report.per_target {
            assert_eq!(score.rrmse.scaled().unwrap(), 100.0);
        }
    }

    #[test]
    fn two_fold_hand_pooled() {
        // 4-row symmetric fixture evaluated with the mean baseline and f=2;
        // pooled numerator equals pooled denominator target-by-target by
        // construction, but check against a direct hand computation too.
        let features = mat(&[&[0.0], &[1.0], &[2.0], &[3.0]]);
        let targets = mat(&[&[0.0], &[2.0], &[0.0], &[2.0]]);
        let ds = MultiTargetDataset::new(
            features,
            targets,
            vec![FeatureDescriptor::numeric("x")],
            vec!["t".into()],
        )
        .unwrap();
        let report = evaluate_kfold(
            MethodKind::MeanBaseline,
            &MethodConfig::default(),
            &ds,
            2,
            3,
            FoldPooling::Micro,
        )
        .unwrap();
        // folds of size 2 with train targets {0,2}: train mean 1, every
        // squared residual is 1; pooled sqrt(4/4) = 1 -> 100.00. If fold
        // target sums are asymmetric the numbers still match because the
        // dummy predicts exactly the per-fold train mean.
        assert!((report.per_target[0].rrmse.scaled().unwrap() - 100.0).abs() < 1e-9);
    }

    #[test]
    fn kfold_deterministic_per_seed() {
        let ds = tiny_dataset(12);
        let config = MethodConfig {
            base: crate::tree::BaggingConfig {
                trees: 3,
                ..Default::default()
            },
            ..Default::default()
        };
        let a = evaluate_kfold(MethodKind::St, &config, &ds, 3, 5, FoldPooling::Micro).unwrap();
        let b = evaluate_kfold(MethodKind::St, &config, &ds, 3, 5, FoldPooling::Micro).unwrap();
        assert_eq!(a.per_target, b.per_target);
        let c = evaluate_kfold(MethodKind::St, &config, &ds, 3, 6, FoldPooling::Micro).unwrap();
        assert_eq!(c.per_target.len(), 2);
    }

    #[test]
    fn pooled_single_fold_matches_holdout_path() {
        // feeding the same split through rrmse() and through the micro
        // pooling accumulation gives identical numbers
        let preds = mat(&[&[3.0], &[3.0]]);
        let actual = mat(&[&[2.0], &[4.0]]);
        let direct = rrmse(&preds, &actual, &[2.0]).unwrap()[0].value().unwrap();
        let num = (3.0f64 - 2.0).powi(2) + (3.0f64 - 4.0).powi(2);
        let den = (2.0f64 - 2.0).powi(2) + (2.0f64 - 4.0).powi(2);
        assert!(((num / den).sqrt() - direct).abs() < 1e-15);
    }
}
