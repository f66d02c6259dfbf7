//! Billing arithmetic and prosumer/consumer classification.
//!
//! One unit is one kilowatt-hour; a monthly bill is `units * unit_price`.
//! A participant whose production exceeds its demand is a prosumer and
//! offers the surplus for sale; one whose production falls short is a
//! consumer and places a demand request.

use serde::{Deserialize, Serialize};

use super::readings::MeterReading;

/// Role of a participant for one metering period.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Role {
    /// Produced more than consumed; sells the surplus.
    Prosumer,
    /// Produced less than consumed; requests the shortfall.
    Consumer,
    /// Produced exactly as much as consumed; triggers no transaction.
    Balanced,
}

/// Total watt-hours for a steady load: `load_watts * hours_per_day * days`.
pub fn monthly_watt_hours(load_watts: f64, hours_per_day: f64, days: f64) -> f64 {
    debug_assert!(load_watts >= 0.0 && hours_per_day >= 0.0 && days >= 0.0);
    load_watts * hours_per_day * days
}

/// Convert watt-hours to billing units (kWh).
pub fn units_consumed(total_watt_hours: f64) -> f64 {
    debug_assert!(total_watt_hours >= 0.0);
    total_watt_hours / 1000.0
}

/// Total cost of `units` kWh at `unit_price` currency per kWh.
pub fn billing_cost(units: f64, unit_price: f64) -> f64 {
    debug_assert!(units >= 0.0 && unit_price >= 0.0);
    units * unit_price
}

/// Classify a reading by comparing production against demand.
pub fn classify_role(reading: &MeterReading) -> Role {
    use std::cmp::Ordering;
    match reading.produced.cmp(&reading.consumed) {
        Ordering::Greater => Role::Prosumer,
        Ordering::Less => Role::Consumer,
        Ordering::Equal => Role::Balanced,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::units::WattHours;

    fn reading(produced: i64, consumed: i64) -> MeterReading {
        MeterReading {
            house_id: 1,
            period: 1,
            consumed: WattHours(consumed),
            produced: WattHours(produced),
        }
    }

    #[test]
    fn steady_one_kilowatt_load() {
        // 1000 W around the clock for a 30-day month.
        assert_eq!(monthly_watt_hours(1000.0, 24.0, 30.0), 720_000.0);
        assert_eq!(monthly_watt_hours(0.0, 24.0, 30.0), 0.0);
        assert_eq!(monthly_watt_hours(500.0, 12.0, 30.0), 180_000.0);
    }

    #[test]
    fn units_are_kilowatt_hours() {
        assert_eq!(units_consumed(720_000.0), 720.0);
        assert_eq!(units_consumed(0.0), 0.0);
        assert_eq!(units_consumed(1500.0), 1.5);
    }

    #[test]
    fn cost_is_units_times_price() {
        assert_eq!(billing_cost(720.0, 20.0), 14_400.0);
        assert_eq!(billing_cost(123.0, 0.0), 0.0);
        assert_eq!(billing_cost(0.0, 55.0), 0.0);
    }

    #[test]
    fn roles_follow_the_strict_inequalities() {
        assert_eq!(classify_role(&reading(10, 7)), Role::Prosumer);
        assert_eq!(classify_role(&reading(5, 7)), Role::Consumer);
        // Equality satisfies neither contract condition.
        assert_eq!(classify_role(&reading(7, 7)), Role::Balanced);
    }
}
