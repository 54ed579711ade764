//! Dataset representation, ingestion and deterministic splitting.

mod arff;
mod csv;

pub use arff::{load_arff, load_target_sidecar, write_arff};
pub use csv::{load_csv, load_feature_rows};

use rand::seq::SliceRandom;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::rng;

/// Kind of an input attribute.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum FeatureKind {
    Numeric,
    /// Categorical attribute; values are stored as integer codes indexing
    /// this list.
    Nominal(Vec<String>),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FeatureDescriptor {
    pub name: String,
    pub kind: FeatureKind,
}

impl FeatureDescriptor {
    pub fn numeric(name: impl Into<String>) -> Self {
        FeatureDescriptor {
            name: name.into(),
            kind: FeatureKind::Numeric,
        }
    }

    pub fn nominal(name: impl Into<String>, values: Vec<String>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::InvalidArgument(
                "nominal attribute with empty value list".into(),
            ));
        }
        let mut seen = std::collections::HashSet::new();
        if !values.iter().all(|v| seen.insert(v.clone())) {
            return Err(Error::InvalidArgument(
                "nominal attribute with duplicate values".into(),
            ));
        }
        Ok(FeatureDescriptor {
            name: name.into(),
            kind: FeatureKind::Nominal(values),
        })
    }

    pub fn is_nominal(&self) -> bool {
        matches!(self.kind, FeatureKind::Nominal(_))
    }
}

/// How target attributes are designated when loading a file.
#[derive(Debug, Clone)]
pub enum TargetSpec {
    /// The trailing `m` attributes are targets.
    TrailingCount(usize),
    /// Attributes with these names are targets.
    Names(Vec<String>),
}

/// An n x d feature matrix plus an n x m target matrix with per-column
/// metadata. Immutable after construction; no missing values (imputation
/// happens at load time).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MultiTargetDataset {
    pub features: Matrix,
    pub targets: Matrix,
    pub feature_descriptors: Vec<FeatureDescriptor>,
    pub target_names: Vec<String>,
}

impl MultiTargetDataset {
    pub fn new(
        features: Matrix,
        targets: Matrix,
        feature_descriptors: Vec<FeatureDescriptor>,
        target_names: Vec<String>,
    ) -> Result<Self> {
        if features.rows() == 0 || features.cols() == 0 || targets.cols() == 0 {
            return Err(Error::InvalidArgument(
                "dataset needs n >= 1, d >= 1, m >= 1".into(),
            ));
        }
        if features.rows() != targets.rows() {
            return Err(Error::DimensionMismatch(
                "feature and target row counts differ".into(),
            ));
        }
        if feature_descriptors.len() != features.cols() || target_names.len() != targets.cols() {
            return Err(Error::DimensionMismatch(
                "metadata length does not match matrix width".into(),
            ));
        }
        for (j, desc) in feature_descriptors.iter().enumerate() {
            if let FeatureKind::Nominal(values) = &desc.kind {
                for i in 0..features.rows() {
                    let code = features.get(i, j);
                    if code < 0.0 || code.fract() != 0.0 || code as usize >= values.len() {
                        return Err(Error::InvalidArgument(format!(
                            "row {i}: nominal code {code} out of range for attribute `{}`",
                            desc.name
                        )));
                    }
                }
            }
        }
        Ok(MultiTargetDataset {
            features,
            targets,
            feature_descriptors,
            target_names,
        })
    }

    pub fn n(&self) -> usize {
        self.features.rows()
    }

    pub fn d(&self) -> usize {
        self.features.cols()
    }

    pub fn m(&self) -> usize {
        self.targets.cols()
    }

    pub fn target_column(&self, j: usize) -> Vec<f64> {
        self.targets.column(j)
    }

    /// Row subset, preserving metadata.
    pub fn select_rows(&self, indices: &[usize]) -> MultiTargetDataset {
        MultiTargetDataset {
            features: self.features.select_rows(indices),
            targets: self.targets.select_rows(indices),
            feature_descriptors: self.feature_descriptors.clone(),
            target_names: self.target_names.clone(),
        }
    }

    /// True when two datasets share attribute metadata (names and kinds).
    pub fn schema_matches(&self, other: &MultiTargetDataset) -> bool {
        self.feature_descriptors == other.feature_descriptors
            && self.target_names == other.target_names
    }

    pub fn train_target_means(&self) -> Vec<f64> {
        (0..self.m())
            .map(|j| {
                let col = self.target_column(j);
                col.iter().sum::<f64>() / col.len() as f64
            })
            .collect()
    }
}

/// Assignment of every row to one of `folds` cross-validation folds.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FoldAssignment {
    pub fold_of: Vec<usize>,
    pub folds: usize,
}

impl FoldAssignment {
    pub fn fold_rows(&self, fold: usize) -> Vec<usize> {
        (0..self.fold_of.len())
            .filter(|&i| self.fold_of[i] == fold)
            .collect()
    }

    pub fn complement_rows(&self, fold: usize) -> Vec<usize> {
        (0..self.fold_of.len())
            .filter(|&i| self.fold_of[i] != fold)
            .collect()
    }
}

/// Deterministic k-fold assignment: seeded uniform shuffle of the row
/// indices, then round-robin slicing, so fold sizes differ by at most one.
pub fn make_kfold(n: usize, folds: usize, seed: u64) -> Result<FoldAssignment> {
    if folds < 2 || folds > n {
        return Err(Error::InvalidFolds { folds, rows: n });
    }
    let mut perm: Vec<usize> = (0..n).collect();
    let mut rng = rng::rng_from(rng::derive(seed, &[n as u64, folds as u64]));
    perm.shuffle(&mut rng);
    let mut fold_of = vec![0usize; n];
    for (pos, &row) in perm.iter().enumerate() {
        fold_of[row] = pos % folds;
    }
    Ok(FoldAssignment { fold_of, folds })
}

/// Holdout split specification.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub enum SplitSpec {
    /// Train on the first `ceil(fraction * n)` rows (row order as given; the
    /// time-ordered datasets use a temporal prefix).
    Fraction(f64),
    /// Explicit pre-split train/test datasets.
    Explicit,
}

/// Prefix holdout split. The fraction variant never shuffles.
pub fn split_holdout(
    dataset: &MultiTargetDataset,
    fraction: f64,
) -> Result<(MultiTargetDataset, MultiTargetDataset)> {
    if !(fraction > 0.0 && fraction < 1.0) {
        return Err(Error::InvalidArgument(format!(
            "train fraction {fraction} outside (0, 1)"
        )));
    }
    let n = dataset.n();
    let train_n = (fraction * n as f64).ceil() as usize;
    if train_n == 0 || train_n >= n {
        return Err(Error::InvalidArgument(format!(
            "fraction {fraction} leaves an empty split for n={n}"
        )));
    }
    let train_rows: Vec<usize> = (0..train_n).collect();
    let test_rows: Vec<usize> = (train_n..n).collect();
    Ok((
        dataset.select_rows(&train_rows),
        dataset.select_rows(&test_rows),
    ))
}

/// Pair two pre-split files after checking schema equality.
pub fn pair_explicit(
    train: MultiTargetDataset,
    test: MultiTargetDataset,
) -> Result<(MultiTargetDataset, MultiTargetDataset)> {
    if !train.schema_matches(&test) {
        return Err(Error::SchemaMismatch(
            "train and test files declare different attributes".into(),
        ));
    }
    Ok((train, test))
}

/// Mean-impute numeric columns and mode-impute nominal columns in place.
/// `NaN` marks a missing cell. Observed values are never changed.
pub(crate) fn impute(matrix: &mut Matrix, descriptors: &[FeatureDescriptor]) -> Result<()> {
    for j in 0..matrix.cols() {
        let col = matrix.column(j);
        let observed: Vec<f64> = col.iter().copied().filter(|v| !v.is_nan()).collect();
        if observed.len() == col.len() {
            continue;
        }
        if observed.is_empty() {
            return Err(Error::InvalidArgument(format!(
                "column {j} has no observed values to impute from"
            )));
        }
        let fill = match &descriptors[j].kind {
            FeatureKind::Numeric => observed.iter().sum::<f64>() / observed.len() as f64,
            FeatureKind::Nominal(values) => {
                let mut counts = vec![0usize; values.len()];
                for &v in &observed {
                    counts[v as usize] += 1;
                }
                // mode; first category wins ties
                let best = counts
                    .iter()
                    .enumerate()
                    .max_by(|a, b| a.1.cmp(b.1).then(b.0.cmp(&a.0)))
                    .map(|(c, _)| c)
                    .unwrap();
                best as f64
            }
        };
        for i in 0..matrix.rows() {
            if matrix.get(i, j).is_nan() {
                matrix.set(i, j, fill);
            }
        }
    }
    Ok(())
}

/// Split a parsed attribute table into features and targets.
pub(crate) fn partition_targets(
    values: Matrix,
    descriptors: Vec<FeatureDescriptor>,
    targets: &TargetSpec,
) -> Result<MultiTargetDataset> {
    let total = descriptors.len();
    let target_idx: Vec<usize> = match targets {
        TargetSpec::TrailingCount(m) => {
            if *m == 0 || *m >= total {
                return Err(Error::InvalidArgument(format!(
                    "target count {m} out of range for {total} attributes"
                )));
            }
            (total - m..total).collect()
        }
        TargetSpec::Names(names) => {
            let mut idx = Vec::with_capacity(names.len());
            for name in names {
                let found = descriptors
                    .iter()
                    .position(|d| d.name == *name)
                    .ok_or_else(|| Error::TargetNotFound(name.clone()))?;
                idx.push(found);
            }
            if idx.is_empty() || idx.len() >= total {
                return Err(Error::InvalidArgument(
                    "targets must leave at least one feature".into(),
                ));
            }
            idx
        }
    };
    for &j in &target_idx {
        if descriptors[j].is_nominal() {
            return Err(Error::NonNumericTarget(descriptors[j].name.clone()));
        }
    }
    let is_target = {
        let mut mask = vec![false; total];
        for &j in &target_idx {
            mask[j] = true;
        }
        mask
    };
    let n = values.rows();
    let d = total - target_idx.len();
    let mut features = Matrix::zeros(n, d);
    let mut target_matrix = Matrix::zeros(n, target_idx.len());
    for i in 0..n {
        let mut fj = 0;
        for j in 0..total {
            if !is_target[j] {
                features.set(i, fj, values.get(i, j));
                fj += 1;
            }
        }
        for (tj, &j) in target_idx.iter().enumerate() {
            target_matrix.set(i, tj, values.get(i, j));
        }
    }
    let feature_descriptors: Vec<FeatureDescriptor> = descriptors
        .iter()
        .enumerate()
        .filter(|(j, _)| !is_target[*j])
        .map(|(_, d)| d.clone())
        .collect();
    let target_names = target_idx
        .iter()
        .map(|&j| descriptors[j].name.clone())
        .collect();
    MultiTargetDataset::new(features, target_matrix, feature_descriptors, target_names)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kfold_single_item_folds() {
        let fa = make_kfold(10, 10, 42).unwrap();
        for f in 0..10 {
            assert_eq!(fa.fold_rows(f).len(), 1);
        }
    }

    #[test]
    fn kfold_sizes_differ_by_at_most_one() {
        let fa = make_kfold(12, 10, 0).unwrap();
        let sizes: Vec<usize> = (0..10).map(|f| fa.fold_rows(f).len()).collect();
        assert_eq!(sizes.iter().filter(|&&s| s == 2).count(), 2);
        assert_eq!(sizes.iter().filter(|&&s| s == 1).count(), 8);
    }

    #[test]
    fn kfold_deterministic_per_seed() {
        let a = make_kfold(1060, 10, 1).unwrap();
        let b = make_kfold(1060, 10, 1).unwrap();
        let c = make_kfold(1060, 10, 2).unwrap();
        assert_eq!(a, b);
        assert_ne!(a.fold_of, c.fold_of);
        let profile = |fa: &FoldAssignment| {
            let mut sizes: Vec<usize> = (0..10).map(|f| fa.fold_rows(f).len()).collect();
            sizes.sort_unstable();
            sizes
        };
        assert_eq!(profile(&a), profile(&c));
    }

    #[test]
    fn kfold_rejects_bad_fold_counts() {
        assert!(make_kfold(5, 6, 0).is_err());
        assert!(make_kfold(5, 1, 0).is_err());
    }

    #[test]
    fn holdout_prefix_split() {
        let features = Matrix::from_rows(&(0..10).map(|i| vec![i as f64]).collect::<Vec<_>>()).unwrap();
        let targets = features.clone();
        let ds = MultiTargetDataset::new(
            features,
            targets,
            vec![FeatureDescriptor::numeric("x")],
            vec!["y".into()],
        )
        .unwrap();
        let (train, test) = split_holdout(&ds, 0.4).unwrap();
        assert_eq!(train.n(), 4);
        assert_eq!(test.n(), 6);
        assert_eq!(train.features.get(0, 0), 0.0);
        assert_eq!(train.features.get(3, 0), 3.0);
        assert_eq!(test.features.get(0, 0), 4.0);
    }

    #[test]
    fn imputation_mean_of_observed() {
        let mut m = Matrix::from_rows(&[vec![2.0], vec![f64::NAN], vec![4.0]]).unwrap();
        impute(&mut m, &[FeatureDescriptor::numeric("a")]).unwrap();
        assert_eq!(m.get(1, 0), 3.0);
        assert_eq!(m.get(0, 0), 2.0);
        assert_eq!(m.get(2, 0), 4.0);
    }

    #[test]
    fn nominal_descriptor_rejects_duplicates() {
        assert!(FeatureDescriptor::nominal("c", vec!["a".into(), "a".into()]).is_err());
        assert!(FeatureDescriptor::nominal("c", vec![]).is_err());
    }
}
