//! Regenerates the bundled benchmark stand-ins under `datasets/`.
//!
//! The widely used multi-target benchmark files are not redistributable
//! here, so these are synthetic datasets with the same shapes
//! (rows x features x targets) as four of the common benchmarks. Targets
//! share latent structure plus independent noise, so methods that pool
//! information across targets have something to gain.
//!
//! Run with: cargo run --example make_datasets

use std::fs;
use std::path::Path;

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use mtr::data::{write_arff, FeatureDescriptor, MultiTargetDataset};
use mtr::matrix::Matrix;
use mtr::rng::rng_from;

struct Shape {
    name: &'static str,
    rows: usize,
    features: usize,
    targets: usize,
    noise: f64,
    /// Map targets onto a small ordinal scale (used for the 2-target set).
    discrete: bool,
    seed: u64,
}

const SHAPES: &[Shape] = &[
    Shape { name: "edm", rows: 154, features: 16, targets: 2, noise: 0.25, discrete: true, seed: 11 },
    Shape { name: "sf1", rows: 323, features: 10, targets: 3, noise: 0.45, discrete: false, seed: 12 },
    Shape { name: "sf2", rows: 1066, features: 10, targets: 3, noise: 0.45, discrete: false, seed: 13 },
    Shape { name: "wq", rows: 1060, features: 16, targets: 14, noise: 0.6, discrete: false, seed: 14 },
];

fn round4(v: f64) -> f64 {
    (v * 1e4).round() / 1e4
}

fn generate(shape: &Shape) -> MultiTargetDataset {
    let mut rng: ChaCha8Rng = rng_from(shape.seed);
    let d = shape.features;
    let m = shape.targets;

    // latent weights: each target mixes three shared nonlinear components
    let latent_w: Vec<Vec<f64>> = (0..3)
        .map(|_| (0..d).map(|_| rng.random_range(-1.0..1.0)).collect())
        .collect();
    let target_mix: Vec<[f64; 3]> = (0..m)
        .map(|_| {
            [
                rng.random_range(0.5..1.5),
                rng.random_range(-1.0..1.0),
                rng.random_range(-0.5..0.5),
            ]
        })
        .collect();
    let target_scale: Vec<f64> = (0..m).map(|_| rng.random_range(0.5..3.0)).collect();
    let target_shift: Vec<f64> = (0..m).map(|_| rng.random_range(-2.0..2.0)).collect();

    let mut features = Matrix::zeros(shape.rows, d);
    let mut targets = Matrix::zeros(shape.rows, m);
    for i in 0..shape.rows {
        let x: Vec<f64> = (0..d).map(|_| round4(rng.random_range(-2.0..2.0))).collect();
        for (j, v) in x.iter().enumerate() {
            features.set(i, j, *v);
        }
        let z: Vec<f64> = latent_w
            .iter()
            .map(|w| {
                let lin: f64 = w.iter().zip(&x).map(|(a, b)| a * b).sum();
                (lin * 0.6).sin() + 0.3 * lin
            })
            .collect();
        for j in 0..m {
            let core = target_mix[j][0] * z[0] + target_mix[j][1] * z[1] + target_mix[j][2] * z[2];
            let noisy = core + shape.noise * rng.random_range(-1.0..1.0);
            let y = if shape.discrete {
                // three-level ordinal outcome
                if noisy < -0.4 {
                    -1.0
                } else if noisy > 0.4 {
                    1.0
                } else {
                    0.0
                }
            } else {
                round4(target_scale[j] * noisy + target_shift[j])
            };
            targets.set(i, j, y);
        }
    }

    let descriptors = (0..d)
        .map(|j| FeatureDescriptor::numeric(&format!("x{}", j + 1)))
        .collect();
    let names = (0..m).map(|j| format!("y{}", j + 1)).collect();
    MultiTargetDataset::new(features, targets, descriptors, names).unwrap()
}

fn main() {
    let dir = Path::new("datasets");
    fs::create_dir_all(dir).unwrap();
    for shape in SHAPES {
        let dataset = generate(shape);
        let path = dir.join(format!("{}.arff", shape.name));
        fs::write(&path, write_arff(&dataset, shape.name)).unwrap();
        println!(
            "{}: {} rows, {} features, {} targets",
            path.display(),
            dataset.n(),
            dataset.d(),
            dataset.m()
        );
    }
}
