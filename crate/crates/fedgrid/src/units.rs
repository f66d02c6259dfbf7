//! Energy and money units.
//!
//! All internal energy arithmetic runs on integer watt-hours so that
//! conservation checks in the ledger are exact. Kilowatt-hours appear only
//! at I/O boundaries (configs, CSV files, report text). Money follows the
//! same scheme: prices are integer milli-currency per kWh and cash flows
//! integer micro-currency, so `watt_hours * price_milli` is an exact cash
//! amount in micro-currency.

use std::fmt;
use std::iter::Sum;
use std::ops::{Add, AddAssign, Neg, Sub, SubAssign};

use serde::{Deserialize, Serialize};

/// Integer watt-hours. One unit (kWh) equals 1000 of these.
#[derive(
    Debug, Default, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize,
)]
#[serde(transparent)]
pub struct WattHours(pub i64);

impl WattHours {
    pub const ZERO: WattHours = WattHours(0);

    /// Convert a kWh quantity to watt-hours, rounding to the nearest
    /// integer watt-hour.
    pub fn from_kwh(kwh: f64) -> Self {
        WattHours((kwh * 1000.0).round() as i64)
    }

    pub fn as_kwh(self) -> f64 {
        self.0 as f64 / 1000.0
    }

    pub fn is_negative(self) -> bool {
        self.0 < 0
    }

    /// Render as decimal kWh with exactly three fractional digits.
    /// Exact: one watt-hour is one thousandth of a kWh.
    pub fn format_kwh(self) -> String {
        let sign = if self.0 < 0 { "-" } else { "" };
        let abs = self.0.unsigned_abs();
        format!("{}{}.{:03}", sign, abs / 1000, abs % 1000)
    }

    /// Parse a decimal kWh string (as written by [`format_kwh`]) back to
    /// integer watt-hours. Accepts up to three fractional digits.
    ///
    /// [`format_kwh`]: WattHours::format_kwh
    pub fn parse_kwh(text: &str) -> Result<Self, UnitParseError> {
        let text = text.trim();
        let (sign, digits) = match text.strip_prefix('-') {
            Some(rest) => (-1i64, rest),
            None => (1i64, text),
        };
        let (whole, frac) = match digits.split_once('.') {
            Some((w, f)) => (w, f),
            None => (digits, ""),
        };
        if whole.is_empty() && frac.is_empty() {
            return Err(UnitParseError::new(text));
        }
        if frac.len() > 3 {
            return Err(UnitParseError::new(text));
        }
        let whole: i64 = if whole.is_empty() {
            0
        } else {
            whole.parse().map_err(|_| UnitParseError::new(text))?
        };
        let mut milli: i64 = 0;
        if !frac.is_empty() {
            milli = frac.parse().map_err(|_| UnitParseError::new(text))?;
            for _ in frac.len()..3 {
                milli *= 10;
            }
        }
        Ok(WattHours(sign * (whole * 1000 + milli)))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("invalid kWh value: {text:?}")]
pub struct UnitParseError {
    pub text: String,
}

impl UnitParseError {
    fn new(text: &str) -> Self {
        UnitParseError { text: text.to_string() }
    }
}

impl Add for WattHours {
    type Output = WattHours;
    fn add(self, rhs: WattHours) -> WattHours {
        WattHours(self.0 + rhs.0)
    }
}

impl Sub for WattHours {
    type Output = WattHours;
    fn sub(self, rhs: WattHours) -> WattHours {
        WattHours(self.0 - rhs.0)
    }
}

impl Neg for WattHours {
    type Output = WattHours;
    fn neg(self) -> WattHours {
        WattHours(-self.0)
    }
}

impl AddAssign for WattHours {
    fn add_assign(&mut self, rhs: WattHours) {
        self.0 += rhs.0;
    }
}

impl SubAssign for WattHours {
    fn sub_assign(&mut self, rhs: WattHours) {
        self.0 -= rhs.0;
    }
}

impl Sum for WattHours {
    fn sum<I: Iterator<Item = WattHours>>(iter: I) -> WattHours {
        WattHours(iter.map(|wh| wh.0).sum())
    }
}

impl fmt::Display for WattHours {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} Wh", self.0)
    }
}

/// Convert a currency-per-kWh price to integer milli-currency per kWh.
pub fn price_to_milli(unit_price: f64) -> u64 {
    (unit_price * 1000.0).round() as u64
}

/// Exact cash flow for an energy amount at a milli-currency price:
/// `Wh * (milli-currency / kWh)` lands in micro-currency.
pub fn cash_micro(amount: WattHours, price_milli: u64) -> i64 {
    amount.0 * price_milli as i64
}

/// Render a micro-currency amount as a decimal currency string.
pub fn format_micro(cash: i64) -> String {
    let sign = if cash < 0 { "-" } else { "" };
    let abs = cash.unsigned_abs();
    format!("{}{}.{:06}", sign, abs / 1_000_000, abs % 1_000_000)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kwh_roundtrip_is_exact() {
        for wh in [0i64, 1, 999, 1000, 1500, 720_000, 3_867_502_000] {
            let v = WattHours(wh);
            assert_eq!(WattHours::parse_kwh(&v.format_kwh()).unwrap(), v);
        }
    }

    #[test]
    fn format_kwh_three_digits() {
        assert_eq!(WattHours(1500).format_kwh(), "1.500");
        assert_eq!(WattHours(720_000).format_kwh(), "720.000");
        assert_eq!(WattHours(7).format_kwh(), "0.007");
        assert_eq!(WattHours(-2500).format_kwh(), "-2.500");
    }

    #[test]
    fn parse_kwh_accepts_short_fractions() {
        assert_eq!(WattHours::parse_kwh("1.5").unwrap(), WattHours(1500));
        assert_eq!(WattHours::parse_kwh("2").unwrap(), WattHours(2000));
        assert_eq!(WattHours::parse_kwh("0.007").unwrap(), WattHours(7));
    }

    #[test]
    fn parse_kwh_rejects_garbage() {
        assert!(WattHours::parse_kwh("").is_err());
        assert!(WattHours::parse_kwh("1.2345").is_err());
        assert!(WattHours::parse_kwh("x").is_err());
        assert!(WattHours::parse_kwh("1.x").is_err());
    }

    #[test]
    fn cash_is_exact() {
        // 1.5 kWh at 20 currency/kWh = 30 currency.
        assert_eq!(cash_micro(WattHours(1500), 20_000), 30_000_000);
        assert_eq!(format_micro(30_000_000), "30.000000");
    }
}
