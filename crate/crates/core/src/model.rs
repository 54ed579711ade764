//! Trained multi-target model container with versioned serialization.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::data::{FeatureDescriptor, MultiTargetDataset};
use crate::error::{Error, Result};
use crate::methods::{
    predict_erc, predict_mts, predict_rc, predict_st, train_erc, train_mts, train_mtsc, train_rc,
    train_rcc, train_st, ErcModel, MethodConfig, MtsModel, RcModel, StModel,
};

const FORMAT_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MethodKind {
    /// Predicts the training-set target means; calibration baseline.
    MeanBaseline,
    St,
    Mts,
    Mtsc,
    Rc,
    Rcc,
    Erc,
    Ercc,
}

impl MethodKind {
    pub fn name(self) -> &'static str {
        match self {
            MethodKind::MeanBaseline => "MEAN",
            MethodKind::St => "ST",
            MethodKind::Mts => "MTS",
            MethodKind::Mtsc => "MTSC",
            MethodKind::Rc => "RC",
            MethodKind::Rcc => "RCC",
            MethodKind::Erc => "ERC",
            MethodKind::Ercc => "ERCC",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "mean" => Ok(MethodKind::MeanBaseline),
            "st" => Ok(MethodKind::St),
            "mts" => Ok(MethodKind::Mts),
            "mtsc" => Ok(MethodKind::Mtsc),
            "rc" => Ok(MethodKind::Rc),
            "rcc" => Ok(MethodKind::Rcc),
            "erc" => Ok(MethodKind::Erc),
            "ercc" => Ok(MethodKind::Ercc),
            other => Err(Error::InvalidArgument(format!("unknown method `{other}`"))),
        }
    }

    pub fn all() -> [MethodKind; 8] {
        [
            MethodKind::MeanBaseline,
            MethodKind::St,
            MethodKind::Mts,
            MethodKind::Mtsc,
            MethodKind::Rc,
            MethodKind::Rcc,
            MethodKind::Erc,
            MethodKind::Ercc,
        ]
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum TrainedVariant {
    Mean(Vec<f64>),
    St(StModel),
    Mts(MtsModel),
    Rc(RcModel),
    Erc(ErcModel),
}

/// A trained multi-target predictor plus everything needed to validate
/// prediction inputs and reproduce the run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MtrModel {
    pub version: u32,
    pub method: MethodKind,
    pub config: MethodConfig,
    pub feature_descriptors: Vec<FeatureDescriptor>,
    pub target_names: Vec<String>,
    pub variant: TrainedVariant,
}

pub fn train_method(
    kind: MethodKind,
    dataset: &MultiTargetDataset,
    config: &MethodConfig,
) -> Result<MtrModel> {
    let variant = match kind {
        MethodKind::MeanBaseline => TrainedVariant::Mean(dataset.train_target_means()),
        MethodKind::St => TrainedVariant::St(train_st(dataset, config)?),
        MethodKind::Mts => TrainedVariant::Mts(train_mts(dataset, config)?),
        MethodKind::Mtsc => TrainedVariant::Mts(train_mtsc(dataset, config)?),
        MethodKind::Rc => {
            let chain: Vec<usize> = (0..dataset.m()).collect();
            TrainedVariant::Rc(train_rc(dataset, &chain, config)?)
        }
        MethodKind::Rcc => {
            let chain: Vec<usize> = (0..dataset.m()).collect();
            TrainedVariant::Rc(train_rcc(dataset, &chain, config)?)
        }
        MethodKind::Erc => TrainedVariant::Erc(train_erc(dataset, config, false)?),
        MethodKind::Ercc => TrainedVariant::Erc(train_erc(dataset, config, true)?),
    };
    Ok(MtrModel {
        version: FORMAT_VERSION,
        method: kind,
        config: config.clone(),
        feature_descriptors: dataset.feature_descriptors.clone(),
        target_names: dataset.target_names.clone(),
        variant,
    })
}

impl MtrModel {
    pub fn d(&self) -> usize {
        self.feature_descriptors.len()
    }

    pub fn m(&self) -> usize {
        self.target_names.len()
    }

    pub fn predict(&self, x: &[f64]) -> Vec<f64> {
        match &self.variant {
            TrainedVariant::Mean(means) => means.clone(),
            TrainedVariant::St(model) => predict_st(model, x),
            TrainedVariant::Mts(model) => predict_mts(model, x),
            TrainedVariant::Rc(model) => predict_rc(model, x),
            TrainedVariant::Erc(model) => predict_erc(model, x),
        }
    }

    pub fn predict_checked(&self, x: &[f64]) -> Result<Vec<f64>> {
        if x.len() != self.d() {
            return Err(Error::SchemaMismatch(format!(
                "model expects {} features, input row has {}",
                self.d(),
                x.len()
            )));
        }
        Ok(self.predict(x))
    }

    /// JSON round-trips f64 node parameters exactly (shortest round-trip
    /// formatting).
    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        let data = serde_json::to_string(self)
            .map_err(|e| Error::ModelFormat(e.to_string()))?;
        fs::write(path, data).map_err(|e| Error::io(path, e))
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let data = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let model: MtrModel =
            serde_json::from_str(&data).map_err(|e| Error::ModelFormat(e.to_string()))?;
        if model.version != FORMAT_VERSION {
            return Err(Error::ModelFormat(format!(
                "unsupported model format version {}",
                model.version
            )));
        }
        Ok(model)
    }
}
