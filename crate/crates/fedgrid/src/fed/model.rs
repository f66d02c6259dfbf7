//! Linear model state and client-side datasets.
//!
//! The model is linear regression under squared-error loss. A weight
//! vector of dimension F carries the bias as its last entry; dataset rows
//! built by the forecast pipeline append a constant 1.0 feature so that
//! training code treats every weight uniformly.

use serde::{Deserialize, Serialize};

use super::FedError;

/// Weight vector plus the sample count that produced it; the only object
/// that ever crosses the client/server boundary.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelState {
    pub weights: Vec<f64>,
    pub sample_count: u64,
}

impl ModelState {
    pub fn zeros(dim: usize) -> Self {
        ModelState { weights: vec![0.0; dim], sample_count: 0 }
    }

    pub fn dim(&self) -> usize {
        self.weights.len()
    }

    pub fn is_finite(&self) -> bool {
        self.weights.iter().all(|w| w.is_finite())
    }
}

/// Local training data: feature rows and kWh targets, one row per sample.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct ClientDataset {
    pub features: Vec<Vec<f64>>,
    pub targets: Vec<f64>,
}

impl ClientDataset {
    pub fn new(features: Vec<Vec<f64>>, targets: Vec<f64>) -> Result<Self, FedError> {
        if features.len() != targets.len() {
            return Err(FedError::DimensionMismatch {
                expected: features.len(),
                got: targets.len(),
            });
        }
        if let Some(first) = features.first() {
            let dim = first.len();
            if let Some(bad) = features.iter().find(|row| row.len() != dim) {
                return Err(FedError::DimensionMismatch { expected: dim, got: bad.len() });
            }
        }
        let finite = features.iter().flatten().all(|v| v.is_finite())
            && targets.iter().all(|v| v.is_finite());
        if !finite {
            return Err(FedError::NonFiniteData);
        }
        Ok(ClientDataset { features, targets })
    }

    pub fn len(&self) -> usize {
        self.targets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.targets.is_empty()
    }

    /// Feature dimension, which must equal the model dimension.
    pub fn dim(&self) -> usize {
        self.features.first().map_or(0, Vec::len)
    }
}

pub(crate) fn dot(weights: &[f64], row: &[f64]) -> f64 {
    weights.iter().zip(row).map(|(w, x)| w * x).sum()
}

/// Forecast a kWh quantity from domain features (without the bias entry).
/// The last weight is the bias; output is clamped at zero for reporting.
pub fn predict(model: &ModelState, features: &[f64]) -> Result<f64, FedError> {
    if features.len() + 1 != model.dim() {
        return Err(FedError::DimensionMismatch {
            expected: model.dim().saturating_sub(1),
            got: features.len(),
        });
    }
    let raw = dot(&model.weights[..features.len()], features) + model.weights[features.len()];
    Ok(raw.max(0.0))
}

/// Mean squared error of a weight vector over one dataset.
pub fn dataset_mse(weights: &[f64], data: &ClientDataset) -> f64 {
    if data.is_empty() {
        return 0.0;
    }
    let sse: f64 = data
        .features
        .iter()
        .zip(&data.targets)
        .map(|(row, y)| {
            let r = dot(weights, row) - y;
            r * r
        })
        .sum();
    sse / data.len() as f64
}

/// Mean squared error over the union of several datasets, weighted by
/// their sizes (the loss a centralized trainer would see).
pub fn pooled_mse(weights: &[f64], datasets: &[ClientDataset]) -> f64 {
    let total: usize = datasets.iter().map(ClientDataset::len).sum();
    if total == 0 {
        return 0.0;
    }
    let sse: f64 = datasets
        .iter()
        .map(|d| dataset_mse(weights, d) * d.len() as f64)
        .sum();
    sse / total as f64
}
