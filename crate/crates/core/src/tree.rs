//! Single-target base learner: a variance-reduction regression tree and a
//! bootstrap-bagging ensemble around it.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::data::{FeatureDescriptor, FeatureKind};
use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::rng::{self, Role};

/// Anything that maps a feature vector to a real value.
pub trait Regressor: Send + Sync {
    fn predict(&self, x: &[f64]) -> f64;
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TreeConfig {
    /// Minimum number of training rows in a leaf.
    pub min_leaf: usize,
    /// Stop splitting once node variance falls below this fraction of the
    /// root variance.
    pub min_variance_fraction: f64,
    /// Depth limit; `None` is unlimited.
    pub max_depth: Option<usize>,
}

impl Default for TreeConfig {
    fn default() -> Self {
        TreeConfig {
            min_leaf: 5,
            min_variance_fraction: 1e-3,
            max_depth: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum Split {
    /// `value <= threshold` goes left.
    Numeric { feature: usize, threshold: f64 },
    /// One-category-vs-rest: `value == category` goes left. `known` is the
    /// sorted set of category codes observed at this node during training.
    Nominal {
        feature: usize,
        category: u32,
        known: Vec<u32>,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum NodeKind {
    Leaf { prediction: f64 },
    Internal { split: Split, left: u32, right: u32 },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Node {
    pub kind: NodeKind,
    pub support: u32,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegressionTree {
    nodes: Vec<Node>,
    dims: usize,
}

impl RegressionTree {
    pub fn dims(&self) -> usize {
        self.dims
    }

    pub fn nodes(&self) -> &[Node] {
        &self.nodes
    }

    pub fn leaf_count(&self) -> usize {
        self.nodes
            .iter()
            .filter(|n| matches!(n.kind, NodeKind::Leaf { .. }))
            .count()
    }
}

impl Regressor for RegressionTree {
    fn predict(&self, x: &[f64]) -> f64 {
        predict_tree(self, x)
    }
}

struct Builder<'a> {
    /// Target value per sample index (one entry per distinct training row).
    ys: &'a [f64],
    /// Bootstrap multiplicity per sample index. Duplicated resample rows are
    /// collapsed into integer weights, so every loop below runs over the
    /// ~63% distinct rows of a bootstrap rather than the full multiset; the
    /// weighted statistics are mathematically identical.
    ws: &'a [f64],
    descriptors: &'a [FeatureDescriptor],
    config: &'a TreeConfig,
    min_variance: f64,
    nodes: Vec<Node>,
    /// Sample indices in dataset order; every node owns a contiguous range
    /// of this array (and of each per-feature array below).
    positions: Vec<u32>,
    /// Per-feature value-sorted views of the sample, as parallel arrays
    /// (sample index, feature value, weight * target). Sorted once up front
    /// and kept sorted through every stable partition, so split search is a
    /// single sequential scan and no node ever re-sorts.
    pos: Vec<Vec<u32>>,
    val: Vec<Vec<f64>>,
    wy: Vec<Vec<f64>>,
    /// `inv[i] = 1/i`, so the split scan needs no divisions.
    inv: Vec<f64>,
    /// Goes-left flag per sample index; only in-node entries are valid.
    mask: Vec<bool>,
    /// Stable-partition buffers.
    scratch_p: Vec<u32>,
    scratch_v: Vec<f64>,
    scratch_y: Vec<f64>,
}

/// Weighted row count, weighted sum and weighted SSE over a slice of sample
/// indices.
fn weighted_moments(ys: &[f64], ws: &[f64], positions: &[u32]) -> (f64, f64, f64) {
    let mut wn = 0.0;
    let mut sum = 0.0;
    let mut sumsq = 0.0;
    for &p in positions {
        let w = ws[p as usize];
        let y = ys[p as usize];
        let wy = w * y;
        wn += w;
        sum += wy;
        sumsq += wy * y;
    }
    let sse = (sumsq - sum * sum / wn).max(0.0);
    (wn, sum, sse)
}

impl<'a> Builder<'a> {
    fn build(&mut self, start: usize, end: usize, depth: usize) -> u32 {
        let n = end - start;
        let (wn, sum, sse) = weighted_moments(self.ys, self.ws, &self.positions[start..end]);
        let prediction = sum / wn;
        let at_depth_limit = self.config.max_depth.is_some_and(|d| depth >= d);
        let variance = sse / wn;
        let rows = wn as usize; // weights are integers

        let mut chosen: Option<Split> = None;
        if rows >= 2 * self.config.min_leaf && variance >= self.min_variance && !at_depth_limit {
            chosen = self.best_split(start, end, sum, rows);
        }

        let idx = self.nodes.len() as u32;
        self.nodes.push(Node {
            kind: NodeKind::Leaf { prediction },
            support: wn as u32,
        });
        if let Some(best) = chosen {
            let mid = self.partition(start, end, &best);
            // a valid split leaves at least one distinct row on each side
            debug_assert!(mid > 0 && mid < n);
            let left = self.build(start, start + mid, depth + 1);
            let right = self.build(start + mid, end, depth + 1);
            self.nodes[idx as usize].kind = NodeKind::Internal {
                split: best,
                left,
                right,
            };
        }
        idx
    }

    /// Candidate enumeration: numeric thresholds at midpoints of consecutive
    /// distinct sorted values, nominal one-category-vs-rest. Ties in variance
    /// reduction keep the earliest candidate (lower feature index, then lower
    /// threshold/category).
    fn best_split(
        &mut self,
        start: usize,
        end: usize,
        total_sum: f64,
        total_rows: usize,
    ) -> Option<Split> {
        let n = end - start;
        let min_leaf = self.config.min_leaf as f64;
        let total_w = total_rows as f64;
        let inv = &self.inv[..total_rows + 1];
        let ws = self.ws;
        // A candidate's gain is `sum_left^2/n_left + sum_right^2/n_right`
        // over weighted sums and counts; the sum-of-squares terms cancel
        // between the two children, so maximizing it maximizes the variance
        // reduction `SSE(parent) - SSE(left) - SSE(right)`. A candidate must
        // strictly beat the unsplit node's gain, which is exactly
        // `reduction > 0`.
        let mut best: Option<Split> = None;
        let mut best_gain = total_sum * total_sum * inv[total_rows];

        for (feature, desc) in self.descriptors.iter().enumerate() {
            match &desc.kind {
                FeatureKind::Numeric => {
                    let pos = &self.pos[feature][start..end];
                    let val = &self.val[feature][start..end];
                    let wy = &self.wy[feature][start..end];
                    let mut left_w = 0.0;
                    let mut left_sum = 0.0;
                    let mut v_prev = val[0];
                    for i in 1..n {
                        left_w += ws[pos[i - 1] as usize];
                        left_sum += wy[i - 1];
                        let v = val[i];
                        if v > v_prev && left_w >= min_leaf && total_w - left_w >= min_leaf {
                            let right_sum = total_sum - left_sum;
                            let li = left_w as usize;
                            let gain = left_sum * left_sum * inv[li]
                                + right_sum * right_sum * inv[total_rows - li];
                            if gain > best_gain {
                                best_gain = gain;
                                best = Some(Split::Numeric {
                                    feature,
                                    threshold: v_prev + (v - v_prev) / 2.0,
                                });
                            }
                        }
                        v_prev = v;
                    }
                }
                FeatureKind::Nominal(values) => {
                    let k = values.len();
                    let mut cnt = vec![0.0f64; k];
                    let mut sum = vec![0.0f64; k];
                    let pos = &self.pos[feature][start..end];
                    let val = &self.val[feature][start..end];
                    let wy = &self.wy[feature][start..end];
                    for i in 0..n {
                        let c = val[i] as usize;
                        cnt[c] += ws[pos[i] as usize];
                        sum[c] += wy[i];
                    }
                    for c in 0..k {
                        if cnt[c] < min_leaf || total_w - cnt[c] < min_leaf || cnt[c] == 0.0 {
                            continue;
                        }
                        let right_sum = total_sum - sum[c];
                        let ci = cnt[c] as usize;
                        let gain = sum[c] * sum[c] * inv[ci]
                            + right_sum * right_sum * inv[total_rows - ci];
                        if gain > best_gain {
                            best_gain = gain;
                            let known: Vec<u32> = (0..k as u32)
                                .filter(|&cc| cnt[cc as usize] > 0.0)
                                .collect();
                            best = Some(Split::Nominal {
                                feature,
                                category: c as u32,
                                known,
                            });
                        }
                    }
                }
            }
        }
        best
    }

    /// Stable in-place partition of the node's range in `positions` and in
    /// every per-feature (pos, val, wy) triple, so each value-sorted view
    /// stays sorted within both children. Returns the left-side length in
    /// distinct rows.
    fn partition(&mut self, start: usize, end: usize, split: &Split) -> usize {
        // the split feature's own sorted view yields the goes-left flags
        // with one sequential scan
        match split {
            Split::Numeric { feature, threshold } => {
                let pos = &self.pos[*feature];
                let val = &self.val[*feature];
                for i in start..end {
                    self.mask[pos[i] as usize] = val[i] <= *threshold;
                }
            }
            Split::Nominal {
                feature, category, ..
            } => {
                let pos = &self.pos[*feature];
                let val = &self.val[*feature];
                for i in start..end {
                    self.mask[pos[i] as usize] = val[i] as u32 == *category;
                }
            }
        }
        let mask = &self.mask;
        let n = end - start;
        let mid;
        {
            // branchless stable partition: write to both sides every
            // iteration, advance only the matching cursor (goes-left flags
            // are data-dependent, so a conditional branch here mispredicts
            // half the time)
            let range = &mut self.positions[start..end];
            let scratch = &mut self.scratch_p[..n];
            let mut w = 0;
            let mut s = 0;
            for i in 0..n {
                let p = range[i];
                let left = mask[p as usize] as usize;
                range[w] = p;
                scratch[s] = p;
                w += left;
                s += 1 - left;
            }
            range[w..].copy_from_slice(&scratch[..s]);
            mid = w;
        }
        for f in 0..self.pos.len() {
            let pos = &mut self.pos[f][start..end];
            let val = &mut self.val[f][start..end];
            let wy = &mut self.wy[f][start..end];
            let sp = &mut self.scratch_p[..n];
            let sv = &mut self.scratch_v[..n];
            let sy = &mut self.scratch_y[..n];
            let mut w = 0;
            let mut s = 0;
            for i in 0..n {
                let p = pos[i];
                let v = val[i];
                let yi = wy[i];
                let left = mask[p as usize] as usize;
                pos[w] = p;
                val[w] = v;
                wy[w] = yi;
                sp[s] = p;
                sv[s] = v;
                sy[s] = yi;
                w += left;
                s += 1 - left;
            }
            pos[w..].copy_from_slice(&sp[..s]);
            val[w..].copy_from_slice(&sv[..s]);
            wy[w..].copy_from_slice(&sy[..s]);
            debug_assert_eq!(w, mid);
        }
        mid
    }
}

/// Greedy top-down induction maximizing variance reduction
/// `SSE(parent) - SSE(left) - SSE(right)`.
pub fn train_tree(
    x: &Matrix,
    y: &[f64],
    config: &TreeConfig,
    descriptors: &[FeatureDescriptor],
) -> Result<RegressionTree> {
    train_tree_on_rows(x, y, config, descriptors, &(0..x.rows()).collect::<Vec<_>>())
}

fn train_tree_on_rows(
    x: &Matrix,
    y: &[f64],
    config: &TreeConfig,
    descriptors: &[FeatureDescriptor],
    rows: &[usize],
) -> Result<RegressionTree> {
    validate_training_input(x, y, descriptors)?;
    let columns: Vec<Vec<f64>> = (0..x.cols()).map(|j| x.column(j)).collect();
    let dataset_order = sorted_row_order(&columns, x.rows());
    train_tree_on_columns(&columns, y, config, descriptors, rows, &dataset_order)
}

/// Dataset row indices sorted by feature value, one ordering per feature.
/// Stable on ties so the result is deterministic. Computed once per
/// ensemble; member trees derive their per-sample orderings from it in
/// linear time instead of re-sorting.
fn sorted_row_order(columns: &[Vec<f64>], nrows: usize) -> Vec<Vec<u32>> {
    columns
        .iter()
        .map(|col| {
            let mut idx: Vec<u32> = (0..nrows as u32).collect();
            idx.sort_by(|&a, &b| col[a as usize].total_cmp(&col[b as usize]));
            idx
        })
        .collect()
}

fn validate_training_input(
    x: &Matrix,
    y: &[f64],
    descriptors: &[FeatureDescriptor],
) -> Result<()> {
    if x.rows() != y.len() {
        return Err(Error::DimensionMismatch(format!(
            "{} feature rows vs {} target values",
            x.rows(),
            y.len()
        )));
    }
    if descriptors.len() != x.cols() {
        return Err(Error::DimensionMismatch(
            "descriptor count does not match feature width".into(),
        ));
    }
    Ok(())
}

fn train_tree_on_columns(
    columns: &[Vec<f64>],
    y: &[f64],
    config: &TreeConfig,
    descriptors: &[FeatureDescriptor],
    rows: &[usize],
    dataset_order: &[Vec<u32>],
) -> Result<RegressionTree> {
    if rows.is_empty() {
        return Err(Error::InvalidArgument("empty training sample".into()));
    }
    let n = rows.len();
    let nrows = y.len();
    // Collapse the (possibly resampled) sample into distinct dataset rows
    // with integer multiplicities, numbered by dataset order.
    let mut weight = vec![0u32; nrows];
    for &r in rows {
        weight[r] += 1;
    }
    let mut sidx = vec![0u32; nrows];
    let mut n_d = 0usize;
    let mut ys: Vec<f64> = Vec::new();
    let mut ws: Vec<f64> = Vec::new();
    for r in 0..nrows {
        if weight[r] > 0 {
            sidx[r] = n_d as u32;
            n_d += 1;
            ys.push(y[r]);
            ws.push(weight[r] as f64);
        }
    }
    // Expand each presorted dataset ordering into the sample's value-sorted
    // parallel arrays, skipping rows outside the sample; nothing re-sorts.
    let d = columns.len();
    let mut pos: Vec<Vec<u32>> = Vec::with_capacity(d);
    let mut val: Vec<Vec<f64>> = Vec::with_capacity(d);
    let mut wy: Vec<Vec<f64>> = Vec::with_capacity(d);
    for f in 0..d {
        let col = &columns[f];
        let mut pf = Vec::with_capacity(n_d);
        let mut vf = Vec::with_capacity(n_d);
        let mut wyf = Vec::with_capacity(n_d);
        for &r in &dataset_order[f] {
            let r = r as usize;
            let w = weight[r];
            if w > 0 {
                pf.push(sidx[r]);
                vf.push(col[r]);
                wyf.push(w as f64 * y[r]);
            }
        }
        pos.push(pf);
        val.push(vf);
        wy.push(wyf);
    }
    let positions: Vec<u32> = (0..n_d as u32).collect();
    let (root_w, _, root_sse) = weighted_moments(&ys, &ws, &positions);
    let root_variance = root_sse / root_w;
    let mut builder = Builder {
        ys: &ys,
        ws: &ws,
        descriptors,
        config,
        min_variance: config.min_variance_fraction * root_variance,
        nodes: Vec::new(),
        positions,
        pos,
        val,
        wy,
        inv: (0..=n).map(|i| 1.0 / i as f64).collect(),
        mask: vec![false; n_d],
        scratch_p: vec![0; n_d],
        scratch_v: vec![0.0; n_d],
        scratch_y: vec![0.0; n_d],
    };
    builder.build(0, n_d, 0);
    Ok(RegressionTree {
        nodes: builder.nodes,
        dims: d,
    })
}

/// Root-to-leaf routing. A nominal code never observed at a node routes to
/// the child with larger training support (ties go left).
pub fn predict_tree(tree: &RegressionTree, x: &[f64]) -> f64 {
    let mut idx = 0usize;
    loop {
        let node = &tree.nodes[idx];
        match &node.kind {
            NodeKind::Leaf { prediction } => return *prediction,
            NodeKind::Internal { split, left, right } => {
                let go_left = match split {
                    Split::Numeric { feature, threshold } => x[*feature] <= *threshold,
                    Split::Nominal {
                        feature,
                        category,
                        known,
                    } => {
                        let code = x[*feature] as u32;
                        if known.binary_search(&code).is_err() {
                            let ls = tree.nodes[*left as usize].support;
                            let rs = tree.nodes[*right as usize].support;
                            ls >= rs
                        } else {
                            code == *category
                        }
                    }
                };
                idx = if go_left { *left as usize } else { *right as usize };
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BaggingConfig {
    /// Ensemble size T.
    pub trees: usize,
    /// With-replacement resampling of size n per tree. Disabled only by
    /// tests that need degenerate oracles.
    pub bootstrap: bool,
    pub tree: TreeConfig,
}

impl Default for BaggingConfig {
    fn default() -> Self {
        BaggingConfig {
            trees: 100,
            bootstrap: true,
            tree: TreeConfig::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BaggedEnsemble {
    pub trees: Vec<RegressionTree>,
    pub seed: u64,
}

impl Regressor for BaggedEnsemble {
    fn predict(&self, x: &[f64]) -> f64 {
        predict_bagging(self, x)
    }
}

/// Train T trees, tree t on a bootstrap resample drawn deterministically
/// from (seed, t). Parallel and serial training produce identical models.
pub fn train_bagging(
    x: &Matrix,
    y: &[f64],
    config: &BaggingConfig,
    descriptors: &[FeatureDescriptor],
    seed: u64,
) -> Result<BaggedEnsemble> {
    if config.trees < 1 {
        return Err(Error::InvalidArgument("ensemble size must be >= 1".into()));
    }
    validate_training_input(x, y, descriptors)?;
    let n = x.rows();
    // transpose and presort once; every member tree reads the same column
    // store and derives its orderings from the same presorted indices
    let columns: Vec<Vec<f64>> = (0..x.cols()).map(|j| x.column(j)).collect();
    let dataset_order = sorted_row_order(&columns, n);
    let trees: Result<Vec<RegressionTree>> = (0..config.trees)
        .into_par_iter()
        .map(|t| {
            let rows: Vec<usize> = if config.bootstrap {
                let mut rng = rng::rng_from(rng::learner_seed(
                    seed,
                    Role::Bootstrap,
                    t as u64,
                    0,
                    0,
                ));
                use rand::Rng;
                (0..n).map(|_| rng.random_range(0..n)).collect()
            } else {
                (0..n).collect()
            };
            train_tree_on_columns(&columns, y, &config.tree, descriptors, &rows, &dataset_order)
        })
        .collect();
    Ok(BaggedEnsemble {
        trees: trees?,
        seed,
    })
}

/// Arithmetic mean of the member tree predictions.
pub fn predict_bagging(ensemble: &BaggedEnsemble, x: &[f64]) -> f64 {
    let sum: f64 = ensemble.trees.iter().map(|t| predict_tree(t, x)).sum();
    sum / ensemble.trees.len() as f64
}
