//! Region model: client groups, houses, and the scenario configuration.
//!
//! A scenario is built from a JSON config describing up to five client
//! groups (A through E). The default config bundles the reference region
//! survey: five groups of flat-roofed houses with published rooftop areas,
//! per-house monthly PV potentials and consumptions.

use std::collections::BTreeSet;
use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::units::WattHours;

/// Client group identifier. A scenario holds at most one group per id.
#[derive(
    Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize,
)]
pub enum GroupId {
    A,
    B,
    C,
    D,
    E,
}

impl GroupId {
    pub const ALL: [GroupId; 5] = [GroupId::A, GroupId::B, GroupId::C, GroupId::D, GroupId::E];
}

impl fmt::Display for GroupId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            GroupId::A => "A",
            GroupId::B => "B",
            GroupId::C => "C",
            GroupId::D => "D",
            GroupId::E => "E",
        };
        f.write_str(s)
    }
}

/// A class of identical houses: same covered area, same PV allocation,
/// same per-house monthly consumption and production potential.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClientGroup {
    pub id: GroupId,
    pub house_size_m2: f64,
    pub house_count: u32,
    pub avg_pv_area_m2: f64,
    /// Per-house monthly PV potential at peak irradiance.
    pub monthly_potential: WattHours,
    /// Per-house baseline monthly consumption.
    pub monthly_consumption: WattHours,
}

/// One simulated house. House ids start at 1; id 0 is reserved for the
/// regional grid account on the ledger.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct House {
    pub id: u64,
    pub group: GroupId,
    pub pv_area_m2: f64,
    pub base_consumption: WattHours,
    pub base_potential: WattHours,
}

/// Fully validated region model, ready for reading generation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Scenario {
    /// Groups sorted by id.
    pub groups: Vec<ClientGroup>,
    /// Houses enumerated 1..=N in group-id order.
    pub houses: Vec<House>,
    /// Monthly PV output scaling, peak-normalized. Maximum in May,
    /// minimum in January.
    pub irradiance_profile: [f64; 12],
    /// Flat price per kWh, used for both sale and purchase settlements.
    pub unit_price: f64,
    pub seed: u64,
    /// Multiplicative production noise amplitude (`0.05` means +-5%).
    pub noise_amplitude: f64,
}

/// JSON schema for a scenario. Field names are the on-disk contract.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScenarioConfig {
    pub groups: Vec<GroupConfig>,
    pub irradiance_profile: Vec<f64>,
    pub unit_price: f64,
    #[serde(default = "default_seed")]
    pub seed: u64,
    #[serde(default = "default_noise")]
    pub noise_amplitude: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GroupConfig {
    pub id: GroupId,
    pub house_size_m2: f64,
    pub house_count: u32,
    pub avg_pv_area_m2: f64,
    pub monthly_potential_kwh: f64,
    pub monthly_consumption_kwh: f64,
}

fn default_seed() -> u64 {
    42
}

fn default_noise() -> f64 {
    0.05
}

/// Config validation failure, naming the offending field.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("invalid scenario config: {field}: {reason}")]
pub struct ConfigError {
    pub field: String,
    pub reason: String,
}

impl ConfigError {
    fn new(field: impl Into<String>, reason: impl Into<String>) -> Self {
        ConfigError { field: field.into(), reason: reason.into() }
    }
}

/// Default irradiance profile for the bundled region: peak in May,
/// minimum in January, with a monsoon dip from June to August.
pub const DEFAULT_IRRADIANCE: [f64; 12] =
    [0.78, 0.88, 0.95, 0.98, 1.00, 0.90, 0.84, 0.82, 0.85, 0.88, 0.84, 0.80];

/// Default flat unit price in currency per kWh.
pub const DEFAULT_UNIT_PRICE: f64 = 20.0;

impl Default for ScenarioConfig {
    /// The bundled reference region: house counts and sizes, rooftop PV
    /// areas, and per-house monthly estimates from the region survey.
    /// Group E (commercial and school rooftops) has no surveyed
    /// consumption, so its houses are modeled as pure producers.
    fn default() -> Self {
        let g = |id, size, count, pv, pot, con| GroupConfig {
            id,
            house_size_m2: size,
            house_count: count,
            avg_pv_area_m2: pv,
            monthly_potential_kwh: pot,
            monthly_consumption_kwh: con,
        };
        ScenarioConfig {
            groups: vec![
                g(GroupId::D, 126.47, 600, 17.0, 1187.0, 188.0),
                g(GroupId::C, 177.05, 400, 28.0, 1930.0, 270.0),
                g(GroupId::B, 252.93, 350, 30.0, 2112.0, 310.0),
                g(GroupId::A, 505.86, 100, 36.0, 11909.0, 500.0),
                g(GroupId::E, 1011.0, 6, 56.0, 57_265.0 / 6.0, 0.0),
            ],
            irradiance_profile: DEFAULT_IRRADIANCE.to_vec(),
            unit_price: DEFAULT_UNIT_PRICE,
            seed: default_seed(),
            noise_amplitude: default_noise(),
        }
    }
}

impl ScenarioConfig {
    pub fn from_json(text: &str) -> Result<Self, ConfigError> {
        serde_json::from_str(text)
            .map_err(|e| ConfigError::new("<config>", format!("JSON parse error: {e}")))
    }

    pub fn from_path(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| ConfigError::new("<config>", format!("{}: {e}", path.display())))?;
        Self::from_json(&text)
    }
}

/// Validate a config and build the scenario: groups sorted by id, houses
/// enumerated deterministically (ids 1..=N in group-id order).
pub fn build_scenario(config: &ScenarioConfig) -> Result<Scenario, ConfigError> {
    if config.groups.is_empty() {
        return Err(ConfigError::new("groups", "at least one group is required"));
    }
    let mut seen = BTreeSet::new();
    for gc in &config.groups {
        let field = |name: &str| format!("groups[{}].{}", gc.id, name);
        if !seen.insert(gc.id) {
            return Err(ConfigError::new("groups", format!("duplicate group id {}", gc.id)));
        }
        if gc.house_count < 1 {
            return Err(ConfigError::new(field("house_count"), "must be >= 1"));
        }
        if !(gc.house_size_m2 > 0.0) {
            return Err(ConfigError::new(field("house_size_m2"), "must be > 0"));
        }
        if !(gc.avg_pv_area_m2 >= 0.0) {
            return Err(ConfigError::new(field("avg_pv_area_m2"), "must be >= 0"));
        }
        if gc.avg_pv_area_m2 > gc.house_size_m2 {
            return Err(ConfigError::new(
                field("avg_pv_area_m2"),
                "PV area cannot exceed the house size",
            ));
        }
        if !(gc.monthly_potential_kwh >= 0.0) {
            return Err(ConfigError::new(field("monthly_potential_kwh"), "must be >= 0"));
        }
        if !(gc.monthly_consumption_kwh >= 0.0) {
            return Err(ConfigError::new(field("monthly_consumption_kwh"), "must be >= 0"));
        }
    }
    if config.irradiance_profile.len() != 12 {
        return Err(ConfigError::new(
            "irradiance_profile",
            format!("expected 12 entries, got {}", config.irradiance_profile.len()),
        ));
    }
    let mut profile = [0.0f64; 12];
    profile.copy_from_slice(&config.irradiance_profile);
    for (i, &v) in profile.iter().enumerate() {
        if !(v > 0.0 && v <= 1.0) {
            return Err(ConfigError::new(
                format!("irradiance_profile[{i}]"),
                "entries must lie in (0, 1]",
            ));
        }
    }
    let max = profile.iter().cloned().fold(f64::MIN, f64::max);
    let min = profile.iter().cloned().fold(f64::MAX, f64::min);
    if profile[4] != max {
        return Err(ConfigError::new(
            "irradiance_profile",
            "peak month must be May (entry 5)",
        ));
    }
    if profile[0] != min {
        return Err(ConfigError::new(
            "irradiance_profile",
            "minimum month must be January (entry 1)",
        ));
    }
    if !(config.unit_price >= 0.0) {
        return Err(ConfigError::new("unit_price", "must be >= 0"));
    }
    if !(config.noise_amplitude >= 0.0 && config.noise_amplitude < 1.0) {
        return Err(ConfigError::new("noise_amplitude", "must lie in [0, 1)"));
    }

    let mut groups: Vec<ClientGroup> = config
        .groups
        .iter()
        .map(|gc| ClientGroup {
            id: gc.id,
            house_size_m2: gc.house_size_m2,
            house_count: gc.house_count,
            avg_pv_area_m2: gc.avg_pv_area_m2,
            monthly_potential: WattHours::from_kwh(gc.monthly_potential_kwh),
            monthly_consumption: WattHours::from_kwh(gc.monthly_consumption_kwh),
        })
        .collect();
    groups.sort_by_key(|g| g.id);

    let mut houses = Vec::new();
    let mut next_id = 1u64;
    for group in &groups {
        for _ in 0..group.house_count {
            houses.push(House {
                id: next_id,
                group: group.id,
                pv_area_m2: group.avg_pv_area_m2,
                base_consumption: group.monthly_consumption,
                base_potential: group.monthly_potential,
            });
            next_id += 1;
        }
    }

    Ok(Scenario {
        groups,
        houses,
        irradiance_profile: profile,
        unit_price: config.unit_price,
        seed: config.seed,
        noise_amplitude: config.noise_amplitude,
    })
}

impl Scenario {
    pub fn group(&self, id: GroupId) -> Option<&ClientGroup> {
        self.groups.iter().find(|g| g.id == id)
    }

    pub fn house_count(&self) -> usize {
        self.houses.len()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_scenario_matches_survey() {
        let scn = build_scenario(&ScenarioConfig::default()).unwrap();
        assert_eq!(scn.groups.len(), 5);
        let counts: Vec<u32> = GroupId::ALL
            .iter()
            .map(|&id| scn.group(id).unwrap().house_count)
            .collect();
        // A, B, C, D, E
        assert_eq!(counts, vec![100, 350, 400, 600, 6]);
        let d = scn.group(GroupId::D).unwrap();
        assert_eq!(d.avg_pv_area_m2, 17.0);
        assert_eq!(d.avg_pv_area_m2 * d.house_count as f64, 10_200.0);
        assert_eq!(d.monthly_potential, WattHours(1_187_000));
        assert_eq!(d.monthly_consumption, WattHours(188_000));
        assert_eq!(scn.house_count(), 1456);
    }

    #[test]
    fn houses_are_enumerated_from_one_in_group_order() {
        let scn = build_scenario(&ScenarioConfig::default()).unwrap();
        assert_eq!(scn.houses[0].id, 1);
        assert_eq!(scn.houses[0].group, GroupId::A);
        assert_eq!(scn.houses.last().unwrap().id, 1456);
        assert_eq!(scn.houses.last().unwrap().group, GroupId::E);
        for (i, h) in scn.houses.iter().enumerate() {
            assert_eq!(h.id, i as u64 + 1);
        }
    }

    #[test]
    fn zero_house_group_is_rejected() {
        let mut cfg = ScenarioConfig::default();
        cfg.groups[0].house_count = 0;
        let err = build_scenario(&cfg).unwrap_err();
        assert!(err.field.contains("house_count"), "field was {}", err.field);
    }

    #[test]
    fn duplicate_group_ids_are_rejected() {
        let mut cfg = ScenarioConfig::default();
        cfg.groups[1].id = cfg.groups[0].id;
        assert!(build_scenario(&cfg).is_err());
    }

    #[test]
    fn profile_shape_is_enforced() {
        let mut cfg = ScenarioConfig::default();
        cfg.irradiance_profile[0] = 1.0; // January may not exceed May
        cfg.irradiance_profile[4] = 0.9;
        let err = build_scenario(&cfg).unwrap_err();
        assert_eq!(err.field, "irradiance_profile");

        let mut cfg = ScenarioConfig::default();
        cfg.irradiance_profile.pop();
        assert!(build_scenario(&cfg).is_err());

        let mut cfg = ScenarioConfig::default();
        cfg.irradiance_profile[3] = 1.5;
        assert!(build_scenario(&cfg).is_err());
    }

    #[test]
    fn flat_profile_is_allowed() {
        // Non-strict extremes: a flat profile (used by exactness tests)
        // still has its max in May and its min in January.
        let mut cfg = ScenarioConfig::default();
        cfg.irradiance_profile = vec![1.0; 12];
        assert!(build_scenario(&cfg).is_ok());
    }

    #[test]
    fn pv_area_bounded_by_house_size() {
        let mut cfg = ScenarioConfig::default();
        cfg.groups[0].avg_pv_area_m2 = cfg.groups[0].house_size_m2 + 1.0;
        assert!(build_scenario(&cfg).is_err());
    }

    #[test]
    fn config_json_roundtrip() {
        let cfg = ScenarioConfig::default();
        let json = serde_json::to_string_pretty(&cfg).unwrap();
        let back = ScenarioConfig::from_json(&json).unwrap();
        assert_eq!(cfg, back);
    }
}
