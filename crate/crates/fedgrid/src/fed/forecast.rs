//! Feature engineering and the regional demand/production forecast.
//!
//! Each client group trains on per-house monthly rows. A row for month m
//! is `[sin(2*pi*m/12), cos(2*pi*m/12), previous value in MWh, 1.0]` with
//! the current kWh value as target; the constant column carries the bias
//! weight. The lag is stored in MWh to keep the feature scale near the
//! harmonic features, which keeps plain gradient descent well
//! conditioned. Two independent models are trained from the same layout:
//! one on consumption (demand) and one on production.

use serde::{Deserialize, Serialize};

use super::model::{predict, ClientDataset, ModelState};
use super::FedError;
use crate::grid::{calendar_month, GroupId, MeterReading, Scenario};

/// Which meter channel a model learns.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TargetKind {
    Demand,
    Production,
}

/// Model dimension: two month harmonics, one lag, one bias.
pub const FEATURE_DIM: usize = 4;

fn harmonics(month: u8) -> (f64, f64) {
    let angle = std::f64::consts::TAU * month as f64 / 12.0;
    (angle.sin(), angle.cos())
}

/// Domain features for one month given the previous month's kWh value
/// (bias column excluded; this is the shape [`predict`] expects).
pub fn month_features(month: u8, lag_kwh: f64) -> Vec<f64> {
    let (s, c) = harmonics(month);
    vec![s, c, lag_kwh / 1000.0]
}

fn channel(reading: &MeterReading, target: TargetKind) -> f64 {
    match target {
        TargetKind::Demand => reading.consumed.as_kwh(),
        TargetKind::Production => reading.produced.as_kwh(),
    }
}

/// Build one training dataset per client group from a run of monthly
/// readings (`readings_by_tick[t]` holds tick t+1). The first tick has no
/// lag and only seeds the second, so at least two ticks are required.
pub fn build_client_datasets(
    scenario: &Scenario,
    readings_by_tick: &[Vec<MeterReading>],
    target: TargetKind,
) -> Result<Vec<ClientDataset>, FedError> {
    if readings_by_tick.len() < 2 {
        return Err(FedError::InsufficientHistory { ticks: readings_by_tick.len() });
    }
    let group_of = |house_id: u64| -> GroupId {
        scenario.houses[(house_id - 1) as usize].group
    };
    let mut per_group: Vec<(Vec<Vec<f64>>, Vec<f64>)> =
        scenario.groups.iter().map(|_| (Vec::new(), Vec::new())).collect();
    let index_of = |id: GroupId| scenario.groups.iter().position(|g| g.id == id).unwrap();

    for t in 1..readings_by_tick.len() {
        let month = calendar_month(t as u32 + 1);
        let previous = &readings_by_tick[t - 1];
        for (reading, prev) in readings_by_tick[t].iter().zip(previous) {
            debug_assert_eq!(reading.house_id, prev.house_id);
            let mut row = month_features(month, channel(prev, target));
            row.push(1.0);
            let slot = &mut per_group[index_of(group_of(reading.house_id))];
            slot.0.push(row);
            slot.1.push(channel(reading, target));
        }
    }
    per_group
        .into_iter()
        .map(|(features, targets)| ClientDataset::new(features, targets))
        .collect()
}

/// One group's last observed per-house value, the seed of the recursive
/// forecast.
fn last_mean_kwh(scenario: &Scenario, last: &[MeterReading], id: GroupId, target: TargetKind) -> f64 {
    let group = scenario.group(id).expect("group exists");
    let sum: f64 = last
        .iter()
        .filter(|r| scenario.houses[(r.house_id - 1) as usize].group == id)
        .map(|r| channel(r, target))
        .sum();
    sum / group.house_count as f64
}

/// Regional forecast for one month, labeled by calendar month.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ForecastPoint {
    pub month: u8,
    pub kwh: f64,
}

/// Roll the global model forward twelve months past the end of the run.
/// Per group the lag feature is fed recursively from the model's own
/// predictions; the regional value is the house-count weighted sum.
pub fn forecast_next_year(
    model: &ModelState,
    scenario: &Scenario,
    last_tick: u32,
    last_readings: &[MeterReading],
    target: TargetKind,
) -> Result<Vec<ForecastPoint>, FedError> {
    let mut lags: Vec<f64> = scenario
        .groups
        .iter()
        .map(|g| last_mean_kwh(scenario, last_readings, g.id, target))
        .collect();
    let mut points = Vec::with_capacity(12);
    for step in 1..=12u32 {
        let month = calendar_month(last_tick + step);
        let mut regional = 0.0;
        for (group, lag) in scenario.groups.iter().zip(lags.iter_mut()) {
            let per_house = predict(model, &month_features(month, *lag))?;
            regional += per_house * group.house_count as f64;
            *lag = per_house;
        }
        points.push(ForecastPoint { month, kwh: regional });
    }
    Ok(points)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::{build_scenario, generate_readings, ScenarioConfig};

    fn small_scenario() -> Scenario {
        let mut cfg = ScenarioConfig::default();
        for g in &mut cfg.groups {
            g.house_count = 2;
        }
        build_scenario(&cfg).unwrap()
    }

    fn year_of_readings(scenario: &Scenario) -> Vec<Vec<MeterReading>> {
        (1..=12).map(|m| generate_readings(scenario, m)).collect()
    }

    #[test]
    fn datasets_have_lagged_rows() {
        let scn = small_scenario();
        let readings = year_of_readings(&scn);
        let datasets = build_client_datasets(&scn, &readings, TargetKind::Demand).unwrap();
        assert_eq!(datasets.len(), scn.groups.len());
        for (group, data) in scn.groups.iter().zip(&datasets) {
            // Eleven lagged months per house.
            assert_eq!(data.len(), group.house_count as usize * 11);
            assert_eq!(data.dim(), FEATURE_DIM);
            // Bias column is constant 1.
            assert!(data.features.iter().all(|row| row[3] == 1.0));
        }
    }

    #[test]
    fn demand_rows_carry_consumption() {
        let scn = small_scenario();
        let readings = year_of_readings(&scn);
        let datasets = build_client_datasets(&scn, &readings, TargetKind::Demand).unwrap();
        // Group A (first in scenario order) consumes 500 kWh scaled by the
        // seasonal factor; February's target is the February consumption.
        let a = &datasets[0];
        let feb = crate::grid::SEASONAL_CONSUMPTION[1] * 500_000.0;
        let expected = (feb.round() as i64) as f64 / 1000.0;
        assert!((a.targets[0] - expected).abs() < 1e-9);
        // Its lag feature is January's value in MWh.
        let jan = (crate::grid::SEASONAL_CONSUMPTION[0] * 500_000.0).round() / 1e6;
        assert!((a.features[0][2] - jan).abs() < 1e-9);
    }

    #[test]
    fn one_tick_is_not_enough() {
        let scn = small_scenario();
        let readings = vec![generate_readings(&scn, 1)];
        assert!(matches!(
            build_client_datasets(&scn, &readings, TargetKind::Demand),
            Err(FedError::InsufficientHistory { ticks: 1 })
        ));
    }

    #[test]
    fn forecast_wraps_the_calendar_and_stays_non_negative() {
        let scn = small_scenario();
        let readings = year_of_readings(&scn);
        let model = ModelState { weights: vec![0.0, 0.0, 0.0, 100.0], sample_count: 1 };
        let points =
            forecast_next_year(&model, &scn, 12, readings.last().unwrap(), TargetKind::Demand)
                .unwrap();
        assert_eq!(points.len(), 12);
        assert_eq!(points[0].month, 1);
        assert_eq!(points[11].month, 12);
        let houses: f64 = scn.groups.iter().map(|g| g.house_count as f64).sum();
        for p in &points {
            // Constant model: every house forecasts the bias.
            assert!((p.kwh - 100.0 * houses).abs() < 1e-9);
        }
    }
}
