//! The federated training loop: local gradient descent on each client,
//! participation-rate sampling, and sample-weighted averaging at the
//! server.
//!
//! Every round the server broadcasts the current global weights, each
//! selected client runs `local_epochs` of mini-batch gradient descent on
//! its own readings, and the server replaces the global model with the
//! n_j/N-weighted mean of the returned weights. Raw readings never leave
//! the client; only weight vectors, sample counts, and scalar losses
//! travel.

use std::io::Write;

use serde::{Deserialize, Serialize};

use super::model::{dot, pooled_mse, ClientDataset, ModelState};
use super::FedError;
use crate::rng::SimRng;

/// Hyperparameters and timing model for one federated run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FedConfig {
    /// Total client pool size J.
    pub total_clients: usize,
    /// Fraction of clients sampled each round, in [0, 1].
    pub participation_rate: f64,
    /// Number of global rounds T.
    pub rounds: u32,
    /// Local epochs per round.
    pub local_epochs: u32,
    /// Mini-batch size; the last batch of an epoch may be smaller.
    pub batch_size: usize,
    pub learning_rate: f64,
    /// Communication delay multiplier applied to the server time.
    pub round_delay: f64,
    /// Server aggregation time per round, seconds.
    pub server_seconds: f64,
    /// Modeled client time per local round, seconds. Kept in the config
    /// (not measured) so emitted timings are deterministic.
    pub local_seconds: f64,
}

impl Default for FedConfig {
    fn default() -> Self {
        FedConfig {
            total_clients: 1,
            participation_rate: 1.0,
            rounds: 100,
            local_epochs: 1,
            batch_size: usize::MAX,
            learning_rate: 0.1,
            round_delay: 2.0,
            server_seconds: 5.0,
            local_seconds: 3.0,
        }
    }
}

impl FedConfig {
    pub fn validate(&self) -> Result<(), FedError> {
        let bad = |field: &str, reason: &str| {
            Err(FedError::InvalidConfig { field: field.into(), reason: reason.into() })
        };
        if self.total_clients < 1 {
            return bad("total_clients", "must be >= 1");
        }
        if !(0.0..=1.0).contains(&self.participation_rate) {
            return bad("participation_rate", "must lie in [0, 1]");
        }
        if self.rounds < 1 {
            return bad("rounds", "must be >= 1");
        }
        if self.local_epochs < 1 {
            return bad("local_epochs", "must be >= 1");
        }
        if self.batch_size < 1 {
            return bad("batch_size", "must be >= 1");
        }
        if !(self.learning_rate > 0.0) || !self.learning_rate.is_finite() {
            return bad("learning_rate", "must be positive and finite");
        }
        if !(self.round_delay >= 0.0) || !(self.server_seconds >= 0.0) || !(self.local_seconds >= 0.0)
        {
            return bad("round_delay/server_seconds/local_seconds", "must be >= 0");
        }
        Ok(())
    }
}

/// Simulated duration of one global round.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RoundTiming {
    pub local_seconds: f64,
    pub server_seconds: f64,
    pub delay_factor: f64,
    /// `delay_factor * server_seconds + local_seconds`.
    pub global_seconds: f64,
}

/// One complete global round: the communication-delayed server pass plus
/// the local training pass.
pub fn global_round_time(delay_factor: f64, server_seconds: f64, local_seconds: f64) -> f64 {
    debug_assert!(delay_factor >= 0.0 && server_seconds >= 0.0 && local_seconds >= 0.0);
    delay_factor * server_seconds + local_seconds
}

/// Server-visible record of one round; the unit of the trace export.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RoundTrace {
    pub round: u32,
    pub selected_clients: Vec<usize>,
    pub global_loss: f64,
    pub t_global_seconds: f64,
}

/// Result of a federated run.
#[derive(Debug, Clone, PartialEq)]
pub struct RunOutcome {
    pub model: ModelState,
    pub timings: Vec<RoundTiming>,
    pub trace: Vec<RoundTrace>,
}

/// One client's local pass: `local_epochs` epochs of mini-batch gradient
/// descent on mean squared error, batches taken in row order with the
/// last batch ragged. Returns fresh weights with `sample_count` set to
/// the client's row count; the input state is untouched.
pub fn client_update(
    start: &ModelState,
    data: &ClientDataset,
    cfg: &FedConfig,
) -> Result<ModelState, FedError> {
    if data.is_empty() {
        return Err(FedError::EmptyDataset);
    }
    if data.dim() != start.dim() {
        return Err(FedError::DimensionMismatch { expected: start.dim(), got: data.dim() });
    }
    let dim = start.dim();
    let mut weights = start.weights.clone();
    let mut grad = vec![0.0f64; dim];
    for _ in 0..cfg.local_epochs {
        let mut offset = 0;
        while offset < data.len() {
            let end = (offset + cfg.batch_size.max(1)).min(data.len());
            let batch = offset..end;
            let scale = 2.0 / batch.len() as f64;
            grad.fill(0.0);
            for i in batch.clone() {
                let residual = dot(&weights, &data.features[i]) - data.targets[i];
                for (g, x) in grad.iter_mut().zip(&data.features[i]) {
                    *g += scale * residual * x;
                }
            }
            for (w, g) in weights.iter_mut().zip(&grad) {
                *w -= cfg.learning_rate * g;
            }
            offset = end;
        }
    }
    let state = ModelState { weights, sample_count: data.len() as u64 };
    if !state.is_finite() {
        return Err(FedError::NonFiniteWeights { round: 0 });
    }
    Ok(state)
}

/// Sample the active client set for one round: a uniformly random subset
/// of size `max(ceil(rate * total), 1)`, returned in ascending id order.
pub fn select_clients(total: usize, rate: f64, rng: &mut SimRng) -> Vec<usize> {
    debug_assert!(total >= 1);
    debug_assert!((0.0..=1.0).contains(&rate));
    let m = ((rate * total as f64).ceil() as usize).clamp(1, total);
    // Partial Fisher-Yates: the first m slots end up a uniform sample.
    let mut ids: Vec<usize> = (0..total).collect();
    for i in 0..m {
        let j = i + rng.gen_below((total - i) as u64) as usize;
        ids.swap(i, j);
    }
    ids.truncate(m);
    ids.sort_unstable();
    ids
}

/// Sample-weighted federated averaging: `w = sum_j (n_j / N) w_j` with
/// `N = sum_j n_j`; the result carries `N` as its sample count.
pub fn aggregate(updates: &[ModelState]) -> Result<ModelState, FedError> {
    let first = updates.first().ok_or(FedError::EmptyAggregation)?;
    let dim = first.dim();
    if let Some(bad) = updates.iter().find(|u| u.dim() != dim) {
        return Err(FedError::DimensionMismatch { expected: dim, got: bad.dim() });
    }
    let total: u64 = updates.iter().map(|u| u.sample_count).sum();
    if total == 0 {
        return Err(FedError::ZeroSampleCount);
    }
    let mut weights = vec![0.0f64; dim];
    for update in updates {
        let share = update.sample_count as f64 / total as f64;
        for (w, u) in weights.iter_mut().zip(&update.weights) {
            *w += share * u;
        }
    }
    Ok(ModelState { weights, sample_count: total })
}

/// Run the full server loop: weights start at zero, and each round
/// samples clients, collects their local updates, and aggregates. The
/// returned trace carries only model-level scalars.
pub fn run_rounds(
    cfg: &FedConfig,
    datasets: &[ClientDataset],
    rng: &mut SimRng,
) -> Result<RunOutcome, FedError> {
    cfg.validate()?;
    if datasets.len() != cfg.total_clients {
        return Err(FedError::ClientCount { expected: cfg.total_clients, got: datasets.len() });
    }
    if let Some(idx) = datasets.iter().position(ClientDataset::is_empty) {
        return Err(FedError::EmptyClientDataset { client: idx });
    }
    let dim = datasets[0].dim();
    if let Some(bad) = datasets.iter().find(|d| d.dim() != dim) {
        return Err(FedError::DimensionMismatch { expected: dim, got: bad.dim() });
    }

    let mut global = ModelState::zeros(dim);
    global.sample_count = 0;
    let mut timings = Vec::with_capacity(cfg.rounds as usize);
    let mut trace = Vec::with_capacity(cfg.rounds as usize);
    for round in 1..=cfg.rounds {
        let selected = select_clients(cfg.total_clients, cfg.participation_rate, rng);
        let mut updates = Vec::with_capacity(selected.len());
        for &client in &selected {
            updates.push(client_update(&global, &datasets[client], cfg)?);
        }
        global = aggregate(&updates)?;
        if !global.is_finite() {
            return Err(FedError::NonFiniteWeights { round });
        }
        let timing = RoundTiming {
            local_seconds: cfg.local_seconds,
            server_seconds: cfg.server_seconds,
            delay_factor: cfg.round_delay,
            global_seconds: global_round_time(cfg.round_delay, cfg.server_seconds, cfg.local_seconds),
        };
        timings.push(timing);
        trace.push(RoundTrace {
            round,
            selected_clients: selected,
            global_loss: pooled_mse(&global.weights, datasets),
            t_global_seconds: timing.global_seconds,
        });
    }
    Ok(RunOutcome { model: global, timings, trace })
}

/// Write a training trace as JSON lines, one record per round.
pub fn write_trace_jsonl<W: Write>(out: &mut W, trace: &[RoundTrace]) -> std::io::Result<()> {
    for record in trace {
        let line = serde_json::to_string(record).expect("trace record serializes");
        writeln!(out, "{line}")?;
    }
    Ok(())
}
