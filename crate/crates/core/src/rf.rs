//! Link-budget arithmetic and the MCS rate table.
//!
//! The channel between UAVs is free space with a constant noise floor:
//!
//! ```text
//! SNR = P_T - FSPL(d) - P_N
//! FSPL(d) = 20 log10(d) + 20 log10(f) + 20 log10(4π / c)
//! ```
//!
//! Inverting for `d` at a target SNR gives the radius of the sphere around a
//! FAP inside which the gateway must sit.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Shipped 802.11ac table (160 MHz, 1 SS, 800 ns GI).
const DEFAULT_MCS_CSV: &str = include_str!("../data/mcs_vht160_1ss_lgi.csv");

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RadioConfigRepr", into = "RadioConfigRepr")]
pub struct RadioConfig {
    pub carrier_frequency_hz: f64,
    pub noise_floor_dbm: f64,
    pub max_tx_power_dbm: f64,
    pub speed_of_light: f64,
    pub max_channel_capacity_bps: f64,
}

#[derive(Serialize, Deserialize)]
struct RadioConfigRepr {
    carrier_frequency_hz: f64,
    noise_floor_dbm: f64,
    max_tx_power_dbm: f64,
    speed_of_light: f64,
    max_channel_capacity_bps: f64,
}

impl TryFrom<RadioConfigRepr> for RadioConfig {
    type Error = Error;
    fn try_from(r: RadioConfigRepr) -> Result<Self> {
        let cfg = RadioConfig {
            carrier_frequency_hz: r.carrier_frequency_hz,
            noise_floor_dbm: r.noise_floor_dbm,
            max_tx_power_dbm: r.max_tx_power_dbm,
            speed_of_light: r.speed_of_light,
            max_channel_capacity_bps: r.max_channel_capacity_bps,
        };
        cfg.validate()?;
        Ok(cfg)
    }
}

impl From<RadioConfig> for RadioConfigRepr {
    fn from(c: RadioConfig) -> Self {
        RadioConfigRepr {
            carrier_frequency_hz: c.carrier_frequency_hz,
            noise_floor_dbm: c.noise_floor_dbm,
            max_tx_power_dbm: c.max_tx_power_dbm,
            speed_of_light: c.speed_of_light,
            max_channel_capacity_bps: c.max_channel_capacity_bps,
        }
    }
}

impl Default for RadioConfig {
    /// Channel 50 (5250 MHz), -85 dBm noise floor, c = 3e8 m/s, 780 Mbit/s
    /// top PHY rate, 30 dBm transmit power cap.
    fn default() -> Self {
        RadioConfig {
            carrier_frequency_hz: 5250e6,
            noise_floor_dbm: -85.0,
            max_tx_power_dbm: 30.0,
            speed_of_light: 3e8,
            max_channel_capacity_bps: 780e6,
        }
    }
}

impl RadioConfig {
    pub fn validate(&self) -> Result<()> {
        let finite = [
            self.carrier_frequency_hz,
            self.noise_floor_dbm,
            self.max_tx_power_dbm,
            self.speed_of_light,
            self.max_channel_capacity_bps,
        ]
        .iter()
        .all(|v| v.is_finite());
        if !finite {
            return Err(Error::domain("radio parameters must be finite"));
        }
        if self.carrier_frequency_hz <= 0.0 {
            return Err(Error::domain("carrier frequency must be positive"));
        }
        if self.max_tx_power_dbm < 0.0 {
            return Err(Error::domain("maximum transmission power must be >= 0 dBm"));
        }
        if self.speed_of_light <= 0.0 {
            return Err(Error::domain("speed of light must be positive"));
        }
        if self.max_channel_capacity_bps <= 0.0 {
            return Err(Error::domain("maximum channel capacity must be positive"));
        }
        Ok(())
    }

    /// The distance-independent part of the link budget,
    /// `K = -20 log10(f) - 20 log10(4π/c) - P_N`, so that
    /// `SNR(d) = P_T + K - 20 log10(d)`.
    pub fn link_constant_db(&self) -> f64 {
        -self.frequency_term_db() - self.noise_floor_dbm
    }

    fn frequency_term_db(&self) -> f64 {
        20.0 * self.carrier_frequency_hz.log10()
            + 20.0 * (4.0 * std::f64::consts::PI / self.speed_of_light).log10()
    }
}

/// Free-space path loss in dB at `distance_m`.
pub fn fspl_db(distance_m: f64, config: &RadioConfig) -> Result<f64> {
    if !(distance_m > 0.0) || !distance_m.is_finite() {
        return Err(Error::domain(format!(
            "path loss needs a positive distance, got {distance_m} m"
        )));
    }
    Ok(20.0 * distance_m.log10() + config.frequency_term_db())
}

pub fn snr_db(tx_power_dbm: f64, distance_m: f64, config: &RadioConfig) -> Result<f64> {
    Ok(tx_power_dbm - fspl_db(distance_m, config)? - config.noise_floor_dbm)
}

/// Largest distance at which `min_snr_db` is still met. Exact inverse of
/// [`snr_db`]; the result is not clamped to any venue.
pub fn max_distance(tx_power_dbm: f64, min_snr_db: f64, config: &RadioConfig) -> f64 {
    10f64.powf((config.link_constant_db() + tx_power_dbm - min_snr_db) / 20.0)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct McsEntry {
    pub index: u8,
    pub data_rate_bps: f64,
    pub min_snr_db: f64,
}

/// MCS rows ordered so that index, data rate and SNR threshold all increase
/// together.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<McsEntry>", into = "Vec<McsEntry>")]
pub struct McsTable {
    entries: Vec<McsEntry>,
}

impl TryFrom<Vec<McsEntry>> for McsTable {
    type Error = Error;
    fn try_from(entries: Vec<McsEntry>) -> Result<Self> {
        McsTable::new(entries)
    }
}

impl From<McsTable> for Vec<McsEntry> {
    fn from(t: McsTable) -> Self {
        t.entries
    }
}

impl Default for McsTable {
    fn default() -> Self {
        McsTable::from_csv_str(DEFAULT_MCS_CSV).expect("shipped MCS table is valid")
    }
}

impl McsTable {
    pub fn new(entries: Vec<McsEntry>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::invalid("MCS table is empty"));
        }
        for e in &entries {
            if !(e.data_rate_bps > 0.0) || !e.data_rate_bps.is_finite() {
                return Err(Error::invalid(format!(
                    "MCS {} has non-positive data rate",
                    e.index
                )));
            }
            if !e.min_snr_db.is_finite() {
                return Err(Error::invalid(format!("MCS {} has non-finite SNR", e.index)));
            }
        }
        for w in entries.windows(2) {
            let (a, b) = (&w[0], &w[1]);
            if !(b.index > a.index && b.data_rate_bps > a.data_rate_bps && b.min_snr_db > a.min_snr_db)
            {
                return Err(Error::invalid(format!(
                    "MCS table not jointly increasing between index {} and {}",
                    a.index, b.index
                )));
            }
        }
        Ok(McsTable { entries })
    }

    /// Parses `index,data_rate_bps,min_snr_db` rows. Blank lines, `#`
    /// comments and a header row are skipped.
    pub fn from_csv_str(text: &str) -> Result<Self> {
        let mut entries = Vec::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() || line.starts_with("index") {
                continue;
            }
            let fields: Vec<&str> = line.split(',').map(str::trim).collect();
            let parse_err = |message: String| Error::Parse {
                line: lineno + 1,
                message,
            };
            if fields.len() != 3 {
                return Err(parse_err(format!("expected 3 columns, found {}", fields.len())));
            }
            let index = fields[0]
                .parse::<u8>()
                .map_err(|e| parse_err(format!("bad index {:?}: {e}", fields[0])))?;
            let data_rate_bps = fields[1]
                .parse::<f64>()
                .map_err(|e| parse_err(format!("bad data rate {:?}: {e}", fields[1])))?;
            let min_snr_db = fields[2]
                .parse::<f64>()
                .map_err(|e| parse_err(format!("bad SNR {:?}: {e}", fields[2])))?;
            entries.push(McsEntry {
                index,
                data_rate_bps,
                min_snr_db,
            });
        }
        McsTable::new(entries)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        McsTable::from_csv_str(&std::fs::read_to_string(path)?)
    }

    pub fn to_csv_string(&self) -> String {
        let mut out = String::from("index,data_rate_bps,min_snr_db\n");
        for e in &self.entries {
            out.push_str(&format!("{},{},{}\n", e.index, e.data_rate_bps, e.min_snr_db));
        }
        out
    }

    pub fn entries(&self) -> &[McsEntry] {
        &self.entries
    }

    pub fn max_rate_bps(&self) -> f64 {
        self.entries.last().map(|e| e.data_rate_bps).unwrap_or(0.0)
    }

    /// Lowest MCS whose data rate carries `demand_bps`.
    pub fn min_mcs_for_demand(&self, demand_bps: f64) -> Result<McsEntry> {
        if !(demand_bps > 0.0) {
            return Err(Error::domain(format!("demand must be positive, got {demand_bps}")));
        }
        self.entries
            .iter()
            .find(|e| e.data_rate_bps >= demand_bps)
            .copied()
            .ok_or(Error::DemandUnsatisfiable {
                demand_bps,
                max_rate_bps: self.max_rate_bps(),
            })
    }

    /// Highest MCS whose threshold is met, or `None` when the link is down.
    pub fn rate_for_snr(&self, snr_db: f64) -> Option<McsEntry> {
        self.entries
            .iter()
            .rev()
            .find(|e| e.min_snr_db <= snr_db)
            .copied()
    }
}
