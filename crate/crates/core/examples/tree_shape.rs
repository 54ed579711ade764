//! Prints induced-tree shape statistics for a bundled dataset; used to
//! sanity-check training cost models.

use mtr::data::load_arff;
use mtr::tree::{train_bagging, BaggingConfig, NodeKind};

fn main() {
    let ds = load_arff("datasets/wq.arff", &mtr::data::TargetSpec::TrailingCount(14)).unwrap();
    let x = &ds.features;
    let y: Vec<f64> = ds.target_column(0);
    let cfg = BaggingConfig { trees: 10, ..Default::default() };
    let ens = train_bagging(x, &y, &cfg, &ds.feature_descriptors, 1).unwrap();
    for tree in &ens.trees {
        let nodes = tree.nodes();
        // depth per node by walking from the root
        let mut depth = vec![0usize; nodes.len()];
        let mut stack = vec![0usize];
        let mut size_sum = 0usize;
        let mut leaves = 0usize;
        let mut max_depth = 0usize;
        let mut leaf_depth_sum = 0usize;
        while let Some(i) = stack.pop() {
            size_sum += nodes[i].support as usize;
            max_depth = max_depth.max(depth[i]);
            match nodes[i].kind {
                NodeKind::Leaf { .. } => {
                    leaves += 1;
                    leaf_depth_sum += depth[i];
                }
                NodeKind::Internal { left, right, .. } => {
                    depth[left as usize] = depth[i] + 1;
                    depth[right as usize] = depth[i] + 1;
                    stack.push(left as usize);
                    stack.push(right as usize);
                }
            }
        }
        println!(
            "nodes {:4} leaves {:4} max_depth {:2} mean_leaf_depth {:.1} size_sum {}",
            nodes.len(), leaves, max_depth,
            leaf_depth_sum as f64 / leaves as f64, size_sum
        );
    }
}
