//! Region model, meter readings, and billing arithmetic.

mod billing;
mod readings;
mod scenario;

pub use billing::{billing_cost, classify_role, monthly_watt_hours, units_consumed, Role};
pub use readings::{
    calendar_month, generate_readings, read_readings_csv, write_readings_csv, CsvError,
    MeterReading, READINGS_CSV_HEADER, SEASONAL_CONSUMPTION,
};
pub use scenario::{
    build_scenario, ClientGroup, ConfigError, GroupConfig, GroupId, House, Scenario,
    ScenarioConfig, DEFAULT_IRRADIANCE, DEFAULT_UNIT_PRICE,
};
