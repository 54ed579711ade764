//! Multi-target meta-learners: ST, MTS/MTSC, RC/RCC and the chain ensembles
//! ERC/ERCC.
//!
//! The "corrected" variants (MTSC, RCC) generate training-time meta-features
//! through internal f-fold cross-validation so that the model producing a
//! row's meta-feature never saw that row during training. Prediction-time
//! models are always the full-data models; fold models are discarded after
//! meta-feature generation.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::data::{make_kfold, FeatureDescriptor, FoldAssignment, MultiTargetDataset};
use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::rng::{self, Role};
use crate::tree::{train_bagging, BaggedEnsemble, BaggingConfig, Regressor};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MethodConfig {
    pub base: BaggingConfig,
    /// Internal cross-validation folds for the corrected variants.
    pub folds: usize,
    /// Requested chain count for ERC/ERCC (capped at m!).
    pub chains: usize,
    pub seed: u64,
}

impl Default for MethodConfig {
    fn default() -> Self {
        MethodConfig {
            base: BaggingConfig::default(),
            folds: 10,
            chains: 10,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum StackingVariant {
    /// Meta-features are the first-stage models' in-sample predictions.
    InSample,
    /// Meta-features are out-of-fold predictions from f-fold models.
    Corrected { folds: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ChainVariant {
    /// Links train on true values of earlier chain targets.
    Plain,
    /// Links train on out-of-fold estimates of earlier chain targets.
    Corrected { folds: usize },
}

/// m independent single-target learners.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StModel<M = BaggedEnsemble> {
    pub learners: Vec<M>,
}

/// Two-stage stacking model. Second-stage learner j consumes
/// `[x, estimates of the other m-1 targets]` (own target excluded).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MtsModel<M = BaggedEnsemble> {
    pub first_stage: StModel<M>,
    pub second_stage: Vec<M>,
    pub variant: StackingVariant,
}

/// One regressor chain. Link at position p consumes
/// `[x, estimates of chain[0..p]]` in chain order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RcModel<M = BaggedEnsemble> {
    pub chain: Vec<usize>,
    pub links: Vec<M>,
    pub variant: ChainVariant,
}

/// Ensemble of regressor chains over pairwise-distinct chains; members are
/// trained on the full training set (no bootstrap sampling of members).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ErcModel<M = BaggedEnsemble> {
    pub members: Vec<RcModel<M>>,
}

/// Training-time record of where every meta-feature value came from.
/// `producers[p].cells` lists the (row, meta column) cells whose value was
/// produced by a model trained on exactly `producers[p].train_rows`.
#[derive(Debug, Clone, Default)]
pub struct TrainTrace {
    pub producers: Vec<MetaProducer>,
    /// Meta columns as they were fed to downstream learners: for stacking,
    /// column l holds the estimates of target l; for a chain, column p holds
    /// the column appended after chain position p.
    pub meta_columns: Vec<Vec<f64>>,
}

#[derive(Debug, Clone)]
pub struct MetaProducer {
    pub train_rows: Vec<usize>,
    pub cells: Vec<(usize, usize)>,
}

impl TrainTrace {
    /// Rows whose meta-feature producer was trained on a set including the
    /// row itself.
    pub fn leaky_rows(&self) -> std::collections::BTreeSet<usize> {
        let mut rows = std::collections::BTreeSet::new();
        for p in &self.producers {
            for &(row, _) in &p.cells {
                if p.train_rows.contains(&row) {
                    rows.insert(row);
                }
            }
        }
        rows
    }

    /// Rows covered by at least one meta cell.
    pub fn audited_rows(&self) -> std::collections::BTreeSet<usize> {
        self.producers
            .iter()
            .flat_map(|p| p.cells.iter().map(|&(row, _)| row))
            .collect()
    }
}

fn numeric_meta_descriptor(name: String) -> FeatureDescriptor {
    FeatureDescriptor::numeric(name)
}

fn augmented_descriptors(
    base: &[FeatureDescriptor],
    meta_names: impl IntoIterator<Item = String>,
) -> Vec<FeatureDescriptor> {
    let mut out = base.to_vec();
    out.extend(meta_names.into_iter().map(numeric_meta_descriptor));
    out
}

fn train_base(
    x: &Matrix,
    y: &[f64],
    descriptors: &[FeatureDescriptor],
    config: &MethodConfig,
    seed: u64,
) -> Result<BaggedEnsemble> {
    train_bagging(x, y, &config.base, descriptors, seed)
}

// ---------------------------------------------------------------------------
// ST

pub fn train_st(dataset: &MultiTargetDataset, config: &MethodConfig) -> Result<StModel> {
    let learners: Result<Vec<BaggedEnsemble>> = (0..dataset.m())
        .into_par_iter()
        .map(|j| {
            let y = dataset.target_column(j);
            train_base(
                &dataset.features,
                &y,
                &dataset.feature_descriptors,
                config,
                rng::learner_seed(config.seed, Role::FirstStage, j as u64, 0, 0),
            )
        })
        .collect();
    Ok(StModel {
        learners: learners?,
    })
}

pub fn predict_st<M: Regressor>(model: &StModel<M>, x: &[f64]) -> Vec<f64> {
    model.learners.iter().map(|h| h.predict(x)).collect()
}

// ---------------------------------------------------------------------------
// MTS / MTSC

/// In-sample stacking: meta-features are the full first-stage models'
/// predictions on their own training rows.
pub fn train_mts(dataset: &MultiTargetDataset, config: &MethodConfig) -> Result<MtsModel> {
    let (model, _) = train_mts_traced(dataset, config)?;
    Ok(model)
}

pub fn train_mts_traced(
    dataset: &MultiTargetDataset,
    config: &MethodConfig,
) -> Result<(MtsModel, TrainTrace)> {
    let first_stage = train_st(dataset, config)?;
    let n = dataset.n();
    let m = dataset.m();
    if m == 1 {
        return Ok(degenerate_mts(first_stage, StackingVariant::InSample));
    }
    let all_rows: Vec<usize> = (0..n).collect();
    let meta_columns: Vec<Vec<f64>> = first_stage
        .learners
        .iter()
        .map(|h| (0..n).map(|i| h.predict(dataset.features.row(i))).collect())
        .collect();
    let trace = TrainTrace {
        producers: (0..m)
            .map(|l| MetaProducer {
                train_rows: all_rows.clone(),
                cells: (0..n).map(|i| (i, l)).collect(),
            })
            .collect(),
        meta_columns: meta_columns.clone(),
    };
    let second_stage = train_second_stage(dataset, config, &meta_columns)?;
    Ok((
        MtsModel {
            first_stage,
            second_stage,
            variant: StackingVariant::InSample,
        },
        trace,
    ))
}

/// Corrected stacking: one shared fold partition; the meta-feature of a row
/// comes from the fold model that never saw that row. Full-data first-stage
/// models are kept for prediction time.
pub fn train_mtsc(dataset: &MultiTargetDataset, config: &MethodConfig) -> Result<MtsModel> {
    let (model, _) = train_mtsc_traced(dataset, config)?;
    Ok(model)
}

pub fn train_mtsc_traced(
    dataset: &MultiTargetDataset,
    config: &MethodConfig,
) -> Result<(MtsModel, TrainTrace)> {
    let first_stage = train_st(dataset, config)?;
    let n = dataset.n();
    let m = dataset.m();
    if m == 1 {
        return Ok(degenerate_mts(
            first_stage,
            StackingVariant::Corrected {
                folds: config.folds,
            },
        ));
    }
    let folds = make_kfold(n, config.folds, rng::derive(config.seed, &[Role::FoldSplit as u64]))?;
    let mut meta_columns = vec![vec![0.0f64; n]; m];
    let mut producers = Vec::with_capacity(m * folds.folds);
    // fold models over (target, fold) are independent
    let results: Result<Vec<(usize, usize, Vec<usize>, Vec<(usize, f64)>)>> = (0..m * folds.folds)
        .into_par_iter()
        .map(|idx| {
            let l = idx / folds.folds;
            let fold = idx % folds.folds;
            let train_rows = folds.complement_rows(fold);
            let held_out = folds.fold_rows(fold);
            let x = dataset.features.select_rows(&train_rows);
            let y_full = dataset.target_column(l);
            let y: Vec<f64> = train_rows.iter().map(|&i| y_full[i]).collect();
            let model = train_base(
                &x,
                &y,
                &dataset.feature_descriptors,
                config,
                rng::learner_seed(config.seed, Role::FoldModel, l as u64, fold as u64, 0),
            )?;
            let preds: Vec<(usize, f64)> = held_out
                .iter()
                .map(|&i| (i, model.predict(dataset.features.row(i))))
                .collect();
            Ok((l, fold, train_rows, preds))
        })
        .collect();
    for (l, _fold, train_rows, preds) in results? {
        let mut cells = Vec::with_capacity(preds.len());
        for (i, v) in preds {
            meta_columns[l][i] = v;
            cells.push((i, l));
        }
        producers.push(MetaProducer { train_rows, cells });
    }
    let second_stage = train_second_stage(dataset, config, &meta_columns)?;
    Ok((
        MtsModel {
            first_stage,
            second_stage,
            variant: StackingVariant::Corrected {
                folds: config.folds,
            },
        },
        TrainTrace {
            producers,
            meta_columns,
        },
    ))
}

/// Second-stage learner j trains on `[X | meta columns except j]` against
/// target j.
fn train_second_stage(
    dataset: &MultiTargetDataset,
    config: &MethodConfig,
    meta_columns: &[Vec<f64>],
) -> Result<Vec<BaggedEnsemble>> {
    let m = dataset.m();
    (0..m)
        .into_par_iter()
        .map(|j| {
            let extras: Vec<Vec<f64>> = (0..m)
                .filter(|&l| l != j)
                .map(|l| meta_columns[l].clone())
                .collect();
            let x = dataset.features.with_columns(&extras)?;
            let descs = augmented_descriptors(
                &dataset.feature_descriptors,
                (0..m)
                    .filter(|&l| l != j)
                    .map(|l| format!("est_{}", dataset.target_names[l])),
            );
            let y = dataset.target_column(j);
            train_base(
                &x,
                &y,
                &descs,
                config,
                rng::learner_seed(config.seed, Role::SecondStage, j as u64, 0, 0),
            )
        })
        .collect()
}

/// With a single target the stacked model degrades to ST: the second stage
/// is the first-stage model itself, so all methods coincide bitwise.
fn degenerate_mts(first_stage: StModel, variant: StackingVariant) -> (MtsModel, TrainTrace) {
    let second_stage = first_stage.learners.clone();
    (
        MtsModel {
            first_stage,
            second_stage,
            variant,
        },
        TrainTrace::default(),
    )
}

/// Two-pass prediction: first-stage estimates, then each second-stage model
/// on `[x, estimates with its own component removed]`.
pub fn predict_mts<M: Regressor>(model: &MtsModel<M>, x: &[f64]) -> Vec<f64> {
    let first: Vec<f64> = predict_st(&model.first_stage, x);
    let m = model.second_stage.len();
    (0..m)
        .map(|j| {
            let mut augmented = Vec::with_capacity(x.len() + m.saturating_sub(1));
            augmented.extend_from_slice(x);
            if m > 1 {
                for (l, &est) in first.iter().enumerate() {
                    if l != j {
                        augmented.push(est);
                    }
                }
            }
            model.second_stage[j].predict(&augmented)
        })
        .collect()
}

// ---------------------------------------------------------------------------
// RC / RCC

fn validate_chain(chain: &[usize], m: usize) -> Result<()> {
    if chain.len() != m {
        return Err(Error::InvalidChain);
    }
    let mut seen = vec![false; m];
    for &j in chain {
        if j >= m || seen[j] {
            return Err(Error::InvalidChain);
        }
        seen[j] = true;
    }
    Ok(())
}

/// Plain chain: each link trains on the true values of all earlier chain
/// targets.
pub fn train_rc(
    dataset: &MultiTargetDataset,
    chain: &[usize],
    config: &MethodConfig,
) -> Result<RcModel> {
    let (model, _) = train_rc_traced(dataset, chain, config, 0)?;
    Ok(model)
}

pub fn train_rc_traced(
    dataset: &MultiTargetDataset,
    chain: &[usize],
    config: &MethodConfig,
    member: u64,
) -> Result<(RcModel, TrainTrace)> {
    let m = dataset.m();
    validate_chain(chain, m)?;
    if m == 1 {
        let st = train_st(dataset, config)?;
        return Ok((
            RcModel {
                chain: vec![0],
                links: st.learners,
                variant: ChainVariant::Plain,
            },
            TrainTrace::default(),
        ));
    }
    let n = dataset.n();
    let mut x = dataset.features.clone();
    let mut descs = dataset.feature_descriptors.clone();
    let mut links = Vec::with_capacity(m);
    let mut trace = TrainTrace::default();
    for (pos, &j) in chain.iter().enumerate() {
        let y = dataset.target_column(j);
        links.push(train_base(
            &x,
            &y,
            &descs,
            config,
            rng::learner_seed(config.seed, Role::ChainLink, pos as u64, 0, member),
        )?);
        if pos + 1 < m {
            // true target values become the next meta column
            trace.meta_columns.push(y.clone());
            trace.producers.push(MetaProducer {
                train_rows: (0..n).collect(),
                cells: (0..n).map(|i| (i, pos)).collect(),
            });
            x = x.with_column(&y)?;
            descs.push(numeric_meta_descriptor(format!(
                "est_{}",
                dataset.target_names[j]
            )));
        }
    }
    Ok((
        RcModel {
            chain: chain.to_vec(),
            links,
            variant: ChainVariant::Plain,
        },
        trace,
    ))
}

/// Corrected chain: the appended column at each position holds out-of-fold
/// estimates, themselves produced by fold links that consumed earlier
/// out-of-fold estimates. One fold partition per member, reused at every
/// position.
pub fn train_rcc(
    dataset: &MultiTargetDataset,
    chain: &[usize],
    config: &MethodConfig,
) -> Result<RcModel> {
    let (model, _) = train_rcc_traced(dataset, chain, config, 0)?;
    Ok(model)
}

pub fn train_rcc_traced(
    dataset: &MultiTargetDataset,
    chain: &[usize],
    config: &MethodConfig,
    member: u64,
) -> Result<(RcModel, TrainTrace)> {
    let m = dataset.m();
    validate_chain(chain, m)?;
    if m == 1 {
        let st = train_st(dataset, config)?;
        return Ok((
            RcModel {
                chain: vec![0],
                links: st.learners,
                variant: ChainVariant::Corrected {
                    folds: config.folds,
                },
            },
            TrainTrace::default(),
        ));
    }
    let n = dataset.n();
    let folds: FoldAssignment = make_kfold(
        n,
        config.folds,
        rng::derive(config.seed, &[Role::FoldSplit as u64, member]),
    )?;
    let mut x = dataset.features.clone();
    let mut descs = dataset.feature_descriptors.clone();
    let mut links = Vec::with_capacity(m);
    let mut trace = TrainTrace::default();
    for (pos, &j) in chain.iter().enumerate() {
        let y = dataset.target_column(j);
        links.push(train_base(
            &x,
            &y,
            &descs,
            config,
            rng::learner_seed(config.seed, Role::ChainLink, pos as u64, 0, member),
        )?);
        if pos + 1 < m {
            let mut oof = vec![0.0f64; n];
            let fold_results: Result<Vec<(Vec<usize>, Vec<(usize, f64)>)>> = (0..folds.folds)
                .into_par_iter()
                .map(|fold| {
                    let train_rows = folds.complement_rows(fold);
                    let held_out = folds.fold_rows(fold);
                    let xf = x.select_rows(&train_rows);
                    let yf: Vec<f64> = train_rows.iter().map(|&i| y[i]).collect();
                    let model = train_base(
                        &xf,
                        &yf,
                        &descs,
                        config,
                        rng::learner_seed(
                            config.seed,
                            Role::FoldModel,
                            pos as u64,
                            fold as u64,
                            member,
                        ),
                    )?;
                    let preds: Vec<(usize, f64)> = held_out
                        .iter()
                        .map(|&i| (i, model.predict(x.row(i))))
                        .collect();
                    Ok((train_rows, preds))
                })
                .collect();
            for (train_rows, preds) in fold_results? {
                let mut cells = Vec::with_capacity(preds.len());
                for (i, v) in preds {
                    oof[i] = v;
                    cells.push((i, pos));
                }
                trace.producers.push(MetaProducer { train_rows, cells });
            }
            trace.meta_columns.push(oof.clone());
            x = x.with_column(&oof)?;
            descs.push(numeric_meta_descriptor(format!(
                "est_{}",
                dataset.target_names[j]
            )));
        }
    }
    Ok((
        RcModel {
            chain: chain.to_vec(),
            links,
            variant: ChainVariant::Corrected {
                folds: config.folds,
            },
        },
        trace,
    ))
}

/// Sequential chain prediction; the output is reordered from chain order
/// back to canonical target order.
pub fn predict_rc<M: Regressor>(model: &RcModel<M>, x: &[f64]) -> Vec<f64> {
    let m = model.links.len();
    let mut augmented = x.to_vec();
    let mut out = vec![0.0f64; m];
    for (pos, link) in model.links.iter().enumerate() {
        let estimate = link.predict(&augmented);
        out[model.chain[pos]] = estimate;
        if pos + 1 < m {
            augmented.push(estimate);
        }
    }
    out
}

// ---------------------------------------------------------------------------
// ERC / ERCC

/// Number of permutations of m items, saturating.
fn factorial_capped(m: usize, cap: usize) -> usize {
    let mut f: usize = 1;
    for i in 2..=m {
        f = f.saturating_mul(i);
        if f >= cap {
            return cap;
        }
    }
    f
}

/// Draw `k` pairwise-distinct chains. When m! <= k the full permutation set
/// is enumerated in lexicographic order; otherwise seeded shuffles with
/// duplicate rejection.
pub fn sample_distinct_chains(m: usize, k: usize, seed: u64) -> Vec<Vec<usize>> {
    let total = factorial_capped(m, k.saturating_add(1));
    if total <= k {
        let mut chains = Vec::with_capacity(total);
        let mut current: Vec<usize> = (0..m).collect();
        loop {
            chains.push(current.clone());
            if !next_permutation(&mut current) {
                break;
            }
        }
        return chains;
    }
    use rand::seq::SliceRandom;
    let mut rng = rng::rng_from(rng::derive(seed, &[Role::ChainSample as u64]));
    let mut seen = std::collections::HashSet::new();
    let mut chains = Vec::with_capacity(k);
    while chains.len() < k {
        let mut chain: Vec<usize> = (0..m).collect();
        chain.shuffle(&mut rng);
        if seen.insert(chain.clone()) {
            chains.push(chain);
        }
    }
    chains
}

fn next_permutation(v: &mut [usize]) -> bool {
    let n = v.len();
    if n < 2 {
        return false;
    }
    let Some(i) = (0..n - 1).rev().find(|&i| v[i] < v[i + 1]) else {
        return false;
    };
    let j = (i + 1..n).rev().find(|&j| v[j] > v[i]).unwrap();
    v.swap(i, j);
    v[i + 1..].reverse();
    true
}

pub fn train_erc(
    dataset: &MultiTargetDataset,
    config: &MethodConfig,
    corrected: bool,
) -> Result<ErcModel> {
    let m = dataset.m();
    if m == 1 {
        let st = train_st(dataset, config)?;
        let variant = if corrected {
            ChainVariant::Corrected {
                folds: config.folds,
            }
        } else {
            ChainVariant::Plain
        };
        return Ok(ErcModel {
            members: vec![RcModel {
                chain: vec![0],
                links: st.learners,
                variant,
            }],
        });
    }
    let chains = sample_distinct_chains(m, config.chains, config.seed);
    let members: Result<Vec<RcModel>> = chains
        .iter()
        .enumerate()
        .map(|(t, chain)| {
            let member_seed = rng::learner_seed(config.seed, Role::Member, 0, 0, t as u64);
            let member_config = MethodConfig {
                seed: member_seed,
                ..config.clone()
            };
            if corrected {
                train_rcc(dataset, chain, &member_config)
            } else {
                train_rc(dataset, chain, &member_config)
            }
        })
        .collect();
    Ok(ErcModel { members: members? })
}

/// Per-target arithmetic mean over the member chains (each member's output
/// already reordered to canonical target order).
pub fn predict_erc<M: Regressor>(model: &ErcModel<M>, x: &[f64]) -> Vec<f64> {
    let k = model.members.len();
    let m = model.members[0].links.len();
    let mut acc = vec![0.0f64; m];
    for member in &model.members {
        for (j, v) in predict_rc(member, x).into_iter().enumerate() {
            acc[j] += v;
        }
    }
    for v in &mut acc {
        *v /= k as f64;
    }
    acc
}
