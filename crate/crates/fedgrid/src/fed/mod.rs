//! Federated training of the regional demand and production models.

mod forecast;
mod model;
mod training;

pub use forecast::{
    build_client_datasets, forecast_next_year, month_features, ForecastPoint, TargetKind,
    FEATURE_DIM,
};
pub use model::{dataset_mse, pooled_mse, predict, ClientDataset, ModelState};
pub use training::{
    aggregate, client_update, global_round_time, run_rounds, select_clients, write_trace_jsonl,
    FedConfig, RoundTiming, RoundTrace, RunOutcome,
};

/// Federated training failure.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum FedError {
    #[error("client dataset is empty")]
    EmptyDataset,
    #[error("client {client} has an empty dataset and must not be sampled")]
    EmptyClientDataset { client: usize },
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("dataset contains non-finite values")]
    NonFiniteData,
    #[error("cannot aggregate an empty update list")]
    EmptyAggregation,
    #[error("aggregation weights sum to zero samples")]
    ZeroSampleCount,
    #[error("invalid federated config: {field}: {reason}")]
    InvalidConfig { field: String, reason: String },
    #[error("weights became non-finite at round {round}; aborting")]
    NonFiniteWeights { round: u32 },
    #[error("expected {expected} client datasets, got {got}")]
    ClientCount { expected: usize, got: usize },
    #[error("need at least two monthly ticks to build lagged features, got {ticks}")]
    InsufficientHistory { ticks: usize },
}
