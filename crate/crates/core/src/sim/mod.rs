//! Event-driven simulation of FAP-to-gateway traffic over one shared channel.
//!
//! Every flow has its own CoDel queue. The medium carries one frame at a time;
//! when it goes idle it serves a backlogged, linked queue chosen uniformly at
//! random. Link rates follow the MCS table and are refreshed on the scenario's
//! position sampling grid. Flows are queued the same way whichever direction
//! they travel.

mod codel;

use std::io::Write;
use std::path::Path;

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp};
use serde::{Deserialize, Serialize};

use crate::analysis::percentile;
use crate::error::{Error, Result};
use crate::placement::NodeId;
use crate::rf::snr_db;
use crate::scenario::Scenario;
use crate::seed;
use crate::trajectory::Trajectory;

pub use codel::{CodelConfig, CodelQueue, DropCounts};

const ARRIVAL_STREAM: u64 = 0x464C;
const MEDIUM_STREAM: u64 = 0x4D45;
/// Distances below this are treated as this, to keep the path loss finite.
const MIN_LINK_DISTANCE: f64 = 1e-3;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Packet {
    pub source: NodeId,
    pub generation_time: f64,
    pub size_bits: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SimConfig {
    pub packet_size_bits: u64,
    /// Metrics ignore everything delivered before this time, s.
    pub warmup: f64,
    pub duration: f64,
    pub codel: CodelConfig,
    pub seed: u64,
    /// Fixed airtime added to every frame, s.
    pub frame_overhead: f64,
    /// Transmission power of every link; the radio maximum when unset.
    pub tx_power_dbm: Option<f64>,
}

impl Default for SimConfig {
    fn default() -> Self {
        SimConfig {
            packet_size_bits: 1400 * 8,
            warmup: 30.0,
            duration: 130.0,
            codel: CodelConfig::default(),
            seed: 10,
            frame_overhead: 0.0,
            tx_power_dbm: None,
        }
    }
}

impl SimConfig {
    pub fn validate(&self) -> Result<()> {
        if self.packet_size_bits == 0 {
            return Err(Error::Config("packet size must be positive".into()));
        }
        if !(self.warmup >= 0.0 && self.warmup < self.duration && self.duration.is_finite()) {
            return Err(Error::Config(format!(
                "need 0 <= warmup < duration, got warmup {} and duration {}",
                self.warmup, self.duration
            )));
        }
        if !(self.frame_overhead >= 0.0 && self.frame_overhead.is_finite()) {
            return Err(Error::Config("frame overhead must be non-negative".into()));
        }
        if self.tx_power_dbm.is_some_and(|p| !p.is_finite()) {
            return Err(Error::Config("transmission power must be finite".into()));
        }
        self.codel.validate()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FlowStats {
    pub source: NodeId,
    pub offered_rate_bps: f64,
    /// Delivered bits per second over the measurement window.
    pub received_rate_bps: f64,
    pub generated: u64,
    pub delivered: u64,
    pub codel_drops: u64,
    pub tail_drops: u64,
    /// Packets still held at the end, including a frame on air.
    pub in_queue: u64,
}

impl FlowStats {
    pub fn is_conserved(&self) -> bool {
        self.generated == self.delivered + self.codel_drops + self.tail_drops + self.in_queue
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimResult {
    pub warmup: f64,
    pub duration: f64,
    /// Bits received by the gateway in each second `[warmup + k, warmup + k + 1)`.
    pub throughput_bps: Vec<f64>,
    /// End-to-end delay of every packet delivered after warmup, s.
    pub delays: Vec<f64>,
    pub flows: Vec<FlowStats>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SimSummary {
    pub mean_throughput_bps: f64,
    pub throughput_p50_bps: Option<f64>,
    pub throughput_p90_bps: Option<f64>,
    pub mean_delay_s: Option<f64>,
    pub delay_p50_s: Option<f64>,
    pub delay_p90_s: Option<f64>,
    pub flows: Vec<FlowStats>,
}

impl SimResult {
    pub fn mean_throughput_bps(&self) -> f64 {
        if self.throughput_bps.is_empty() {
            return 0.0;
        }
        self.throughput_bps.iter().sum::<f64>() / self.throughput_bps.len() as f64
    }

    pub fn mean_delay_s(&self) -> Option<f64> {
        if self.delays.is_empty() {
            return None;
        }
        Some(self.delays.iter().sum::<f64>() / self.delays.len() as f64)
    }

    pub fn delivered_bits(&self) -> f64 {
        self.throughput_bps.iter().sum()
    }

    pub fn summary(&self) -> SimSummary {
        let pct = |xs: &[f64], p| percentile(xs, p).ok();
        SimSummary {
            mean_throughput_bps: self.mean_throughput_bps(),
            throughput_p50_bps: pct(&self.throughput_bps, 0.5),
            throughput_p90_bps: pct(&self.throughput_bps, 0.9),
            mean_delay_s: self.mean_delay_s(),
            delay_p50_s: pct(&self.delays, 0.5),
            delay_p90_s: pct(&self.delays, 0.9),
            flows: self.flows.clone(),
        }
    }

    pub fn write_throughput_csv(&self, mut w: impl Write) -> Result<()> {
        writeln!(w, "t_s,R_bps")?;
        for (k, r) in self.throughput_bps.iter().enumerate() {
            writeln!(w, "{},{}", self.warmup + k as f64, r)?;
        }
        Ok(())
    }

    pub fn write_delay_csv(&self, mut w: impl Write) -> Result<()> {
        writeln!(w, "delay_s")?;
        for d in &self.delays {
            writeln!(w, "{d}")?;
        }
        Ok(())
    }

    /// Writes `throughput.csv`, `delay.csv` and `summary.json` into `dir`.
    pub fn save(&self, dir: impl AsRef<Path>) -> Result<()> {
        let dir = dir.as_ref();
        std::fs::create_dir_all(dir)?;
        let mut buf = Vec::new();
        self.write_throughput_csv(&mut buf)?;
        std::fs::write(dir.join("throughput.csv"), &buf)?;
        buf.clear();
        self.write_delay_csv(&mut buf)?;
        std::fs::write(dir.join("delay.csv"), &buf)?;
        std::fs::write(
            dir.join("summary.json"),
            serde_json::to_string_pretty(&self.summary())?,
        )?;
        Ok(())
    }
}

struct Source {
    id: NodeId,
    offered_rate_bps: f64,
    trajectory: Trajectory,
    queue: CodelQueue,
    rng: ChaCha8Rng,
    interarrival: Option<Exp<f64>>,
    next_arrival: f64,
    rate_bps: Option<f64>,
    generated: u64,
    delivered: u64,
    window_bits: u64,
}

struct InFlight {
    source: usize,
    packet: Packet,
    end: f64,
}

/// Runs one simulation of `scenario` with the gateway following `gw_track`.
pub fn run_sim(scenario: &Scenario, gw_track: &Trajectory, config: &SimConfig) -> Result<SimResult> {
    config.validate()?;
    // Only what the simulator relies on; an idle FAP is allowed here.
    scenario.radio.validate()?;
    if !(scenario.sample_period > 0.0) {
        return Err(Error::Config("sample period must be positive".into()));
    }
    if let Some(f) = scenario
        .faps
        .iter()
        .find(|f| !(f.offered_rate_bps >= 0.0 && f.offered_rate_bps.is_finite()))
    {
        return Err(Error::Config(format!(
            "FAP {} has offered rate {}",
            f.id(),
            f.offered_rate_bps
        )));
    }
    if !gw_track.covers(0.0, config.duration) {
        return Err(Error::Config(format!(
            "gateway track spans [{}, {}] s but the simulation needs [0, {}] s",
            gw_track.start_time(),
            gw_track.end_time(),
            config.duration
        )));
    }
    if let Some(f) = scenario
        .faps
        .iter()
        .find(|f| !f.trajectory.covers(0.0, config.duration))
    {
        return Err(Error::Config(format!(
            "trajectory of FAP {} does not cover [0, {}] s",
            f.id(),
            config.duration
        )));
    }

    let tx_power = config.tx_power_dbm.unwrap_or(scenario.radio.max_tx_power_dbm);
    let packet_bits = config.packet_size_bits as f64;
    let mut sources: Vec<Source> = scenario
        .faps
        .iter()
        .map(|f| {
            let id = f.id();
            let mut rng = seed::stream(config.seed, &[ARRIVAL_STREAM, u64::from(id.0)]);
            let pps = f.offered_rate_bps / packet_bits;
            let interarrival = (pps > 0.0).then(|| Exp::new(pps).expect("positive rate"));
            let next_arrival = interarrival.map_or(f64::INFINITY, |d| d.sample(&mut rng));
            Source {
                id,
                offered_rate_bps: f.offered_rate_bps,
                trajectory: f.trajectory.clone(),
                queue: CodelQueue::new(config.codel),
                rng,
                interarrival,
                next_arrival,
                rate_bps: None,
                generated: 0,
                delivered: 0,
                window_bits: 0,
            }
        })
        .collect();
    let mut medium_rng = seed::stream(config.seed, &[MEDIUM_STREAM]);

    let n_bins = (config.duration - config.warmup).floor() as usize;
    let mut bins = vec![0u64; n_bins];
    let mut delays = Vec::new();
    let mut in_flight: Option<InFlight> = None;
    let mut refresh_index: u64 = 0;
    let mut candidates = Vec::with_capacity(sources.len());

    loop {
        let next_refresh = refresh_index as f64 * scenario.sample_period;
        let (arrival_idx, next_arrival) = sources
            .iter()
            .enumerate()
            .map(|(i, s)| (i, s.next_arrival))
            .fold((usize::MAX, f64::INFINITY), |a, b| if b.1 < a.1 { b } else { a });
        let completion = in_flight.as_ref().map_or(f64::INFINITY, |f| f.end);
        let now = completion.min(next_refresh).min(next_arrival);
        if now >= config.duration {
            break;
        }

        // Ties resolve as completion, then refresh, then arrival.
        if completion == now {
            let f = in_flight.take().expect("completion implies a frame");
            let src = &mut sources[f.source];
            src.delivered += 1;
            if now >= config.warmup {
                // a fractional last second has no bin
                let bin = (now - config.warmup).floor() as usize;
                if bin < n_bins {
                    bins[bin] += f.packet.size_bits;
                }
                src.window_bits += f.packet.size_bits;
                delays.push(now - f.packet.generation_time);
            }
        } else if next_refresh == now {
            let gw = gw_track.position_at(now);
            for s in &mut sources {
                let d = s.trajectory.position_at(now).distance(&gw).max(MIN_LINK_DISTANCE);
                let snr = snr_db(tx_power, d, &scenario.radio)?;
                s.rate_bps = scenario.mcs_table.rate_for_snr(snr).map(|m| m.data_rate_bps);
            }
            refresh_index += 1;
        } else {
            let s = &mut sources[arrival_idx];
            s.generated += 1;
            s.queue.enqueue(Packet {
                source: s.id,
                generation_time: now,
                size_bits: config.packet_size_bits,
            });
            let gap = s.interarrival.expect("arrivals need a rate").sample(&mut s.rng);
            s.next_arrival = now + gap;
        }

        // Work conservation: never idle while a linked queue holds packets.
        while in_flight.is_none() {
            candidates.clear();
            candidates.extend(
                sources
                    .iter()
                    .enumerate()
                    .filter(|(_, s)| s.rate_bps.is_some() && !s.queue.is_empty())
                    .map(|(i, _)| i),
            );
            if candidates.is_empty() {
                break;
            }
            let pick = candidates[medium_rng.random_range(0..candidates.len())];
            let s = &mut sources[pick];
            if let Some(packet) = s.queue.dequeue(now) {
                let rate = s.rate_bps.expect("candidate is linked");
                in_flight = Some(InFlight {
                    source: pick,
                    end: now + packet.size_bits as f64 / rate + config.frame_overhead,
                    packet,
                });
            }
        }
    }

    let window = config.duration - config.warmup;
    let flows = sources
        .iter()
        .enumerate()
        .map(|(i, s)| {
            let drops = s.queue.drops();
            let on_air = in_flight.as_ref().is_some_and(|f| f.source == i);
            FlowStats {
                source: s.id,
                offered_rate_bps: s.offered_rate_bps,
                received_rate_bps: s.window_bits as f64 / window,
                generated: s.generated,
                delivered: s.delivered,
                codel_drops: drops.codel,
                tail_drops: drops.tail,
                in_queue: s.queue.len() as u64 + u64::from(on_air),
            }
        })
        .collect();
    Ok(SimResult {
        warmup: config.warmup,
        duration: config.duration,
        throughput_bps: bins.into_iter().map(|b| b as f64).collect(),
        delays,
        flows,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OracleEstimate {
    pub throughput_bps: f64,
    /// `None` when the link is saturated and delay is set by the queue limit.
    pub mean_delay_s: Option<f64>,
}

/// M/D/1 throughput and mean delay of a single Poisson flow on a fixed link.
pub fn analytic_single_link_oracle(link_rate_bps: f64, offered_bps: f64, packet_size_bits: f64) -> OracleEstimate {
    if offered_bps >= link_rate_bps {
        return OracleEstimate {
            throughput_bps: link_rate_bps,
            mean_delay_s: None,
        };
    }
    let s = packet_size_bits / link_rate_bps;
    let rho = offered_bps / link_rate_bps;
    OracleEstimate {
        throughput_bps: offered_bps,
        mean_delay_s: Some(s + rho * s / (2.0 * (1.0 - rho))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{Cuboid, Point3};
    use crate::rf::RadioConfig;
    use crate::scenario::{DemandMapping, FapSpec, FlowDirection, FORMAT_VERSION};
    use crate::rf::McsTable;
    use crate::baselines::GATEWAY_NODE;

    const PKT: f64 = 11_200.0;

    /// Distance at which the default radio at 30 dBm lands mid-way inside
    /// the SNR band of MCS `index`.
    fn distance_for_mcs(index: usize) -> f64 {
        let table = McsTable::default();
        let e = table.entries();
        let lo = e[index].min_snr_db;
        let hi = e.get(index + 1).map_or(lo + 2.0, |n| n.min_snr_db);
        crate::rf::max_distance(30.0, 0.5 * (lo + hi), &RadioConfig::default())
    }

    fn static_scenario(links: &[(f64, usize)], duration: f64) -> (Scenario, Trajectory) {
        let gw = Point3::new(2000.0, 2000.0, 50.0);
        let faps = links
            .iter()
            .enumerate()
            .map(|(i, &(rate, mcs))| {
                let pos = gw + Point3::new(distance_for_mcs(mcs), 0.0, 0.0) * if i % 2 == 0 { 1.0 } else { -1.0 };
                FapSpec {
                    trajectory: Trajectory::stationary(NodeId(i as u32 + 1), pos, duration).unwrap(),
                    offered_rate_bps: rate,
                    direction: FlowDirection::Uplink,
                }
            })
            .collect();
        let s = Scenario {
            format_version: FORMAT_VERSION,
            name: "test".into(),
            bounds: Cuboid::from_dims(4000.0, 4000.0, 100.0).unwrap(),
            faps,
            duration,
            update_period: duration,
            sample_period: 1.0,
            radio: RadioConfig::default(),
            mcs_table: McsTable::default(),
            demand_mapping: DemandMapping::Identity,
            candidates: vec![],
        };
        let track = Trajectory::stationary(GATEWAY_NODE, gw, duration).unwrap();
        (s, track)
    }

    fn cfg(duration: f64, warmup: f64, seed: u64) -> SimConfig {
        SimConfig {
            duration,
            warmup,
            seed,
            ..SimConfig::default()
        }
    }

    #[test]
    fn oracle_values() {
        let o = analytic_single_link_oracle(702e6, 100e6, PKT);
        let s = PKT / 702e6;
        assert!((s - 15.954e-6).abs() < 1e-9);
        assert!((o.mean_delay_s.unwrap() - 1.72795e-5).abs() < 1e-9);
        assert_eq!(o.throughput_bps, 100e6);
        let half = analytic_single_link_oracle(702e6, 351e6, PKT);
        assert!((half.mean_delay_s.unwrap() - 1.5 * s).abs() < 1e-18);
        let tiny = analytic_single_link_oracle(702e6, 1e-9, PKT);
        assert!((tiny.mean_delay_s.unwrap() - s).abs() < 1e-15);
        let sat = analytic_single_link_oracle(702e6, 800e6, PKT);
        assert_eq!(sat.throughput_bps, 702e6);
        assert!(sat.mean_delay_s.is_none());
    }

    #[test]
    fn mcs_helper_distances_hit_their_band() {
        for i in 0..10 {
            let snr = snr_db(30.0, distance_for_mcs(i), &RadioConfig::default()).unwrap();
            assert_eq!(McsTable::default().rate_for_snr(snr).unwrap().index as usize, i);
        }
    }

    #[test]
    fn single_link_matches_md1() {
        let (s, gw) = static_scenario(&[(100e6, 8)], 30.0);
        let r = run_sim(&s, &gw, &cfg(30.0, 2.0, 1)).unwrap();
        let o = analytic_single_link_oracle(702e6, 100e6, PKT);
        let thr = r.mean_throughput_bps();
        assert!((thr / o.throughput_bps - 1.0).abs() < 0.01, "throughput {thr}");
        let d = r.mean_delay_s().unwrap();
        assert!((d / o.mean_delay_s.unwrap() - 1.0).abs() < 0.05, "delay {d}");
        assert!(r.flows[0].is_conserved());
        assert_eq!(r.flows[0].codel_drops + r.flows[0].tail_drops, 0);
    }

    #[test]
    fn two_saturated_links_alternate() {
        let (s, gw) = static_scenario(&[(800e6, 8), (800e6, 3)], 6.0);
        let r = run_sim(&s, &gw, &cfg(6.0, 1.0, 3)).unwrap();
        let thr = r.mean_throughput_bps();
        assert!((thr / 351e6 - 1.0).abs() < 0.02, "throughput {thr}");
        assert!(r.flows.iter().all(FlowStats::is_conserved));
    }

    #[test]
    fn zero_traffic() {
        let (s, gw) = static_scenario(&[(0.0, 8)], 5.0);
        let r = run_sim(&s, &gw, &cfg(5.0, 1.0, 3)).unwrap();
        assert!(r.throughput_bps.iter().all(|&x| x == 0.0));
        assert_eq!(r.throughput_bps.len(), 4);
        assert!(r.delays.is_empty());
        assert_eq!(r.flows[0].generated, 0);
    }

    #[test]
    fn unlinked_fap_only_fills_its_queue() {
        let (mut s, gw) = static_scenario(&[(50e6, 8), (50e6, 8)], 5.0);
        // beyond the MCS 0 range at 30 dBm
        s.faps[1].trajectory =
            Trajectory::stationary(NodeId(2), Point3::new(2000.0, 3500.0, 50.0), 5.0).unwrap();
        let r = run_sim(&s, &gw, &cfg(5.0, 1.0, 3)).unwrap();
        let f = &r.flows[1];
        assert_eq!(f.delivered, 0);
        assert!(f.tail_drops > 0);
        assert_eq!(f.in_queue, 1000);
        assert!(f.is_conserved());
        assert!((r.flows[0].received_rate_bps / 50e6 - 1.0).abs() < 0.03);
    }

    #[test]
    fn deterministic_per_seed() {
        let (s, gw) = static_scenario(&[(300e6, 8), (200e6, 3), (80e6, 5)], 4.0);
        let a = run_sim(&s, &gw, &cfg(4.0, 1.0, 9)).unwrap();
        let b = run_sim(&s, &gw, &cfg(4.0, 1.0, 9)).unwrap();
        assert_eq!(a, b);
        let c = run_sim(&s, &gw, &cfg(4.0, 1.0, 10)).unwrap();
        assert_ne!(a, c);
        assert!(a.flows.iter().all(FlowStats::is_conserved));
    }

    #[test]
    fn adding_a_flow_keeps_other_arrivals() {
        // Idle links, so generation counts depend only on the arrival streams.
        let (s1, gw) = static_scenario(&[(10e6, 8)], 3.0);
        let (s2, _) = static_scenario(&[(10e6, 8), (10e6, 2)], 3.0);
        let a = run_sim(&s1, &gw, &cfg(3.0, 1.0, 5)).unwrap();
        let b = run_sim(&s2, &gw, &cfg(3.0, 1.0, 5)).unwrap();
        assert_eq!(a.flows[0].generated, b.flows[0].generated);
    }

    #[test]
    fn delays_at_least_transmission_time() {
        let (s, gw) = static_scenario(&[(300e6, 9), (300e6, 2)], 4.0);
        let r = run_sim(&s, &gw, &cfg(4.0, 1.0, 2)).unwrap();
        let min_service = PKT / 780e6;
        assert!(r.delays.iter().all(|&d| d >= min_service * (1.0 - 1e-12)));
    }

    #[test]
    fn codel_bounds_sojourn_under_overload() {
        // offered twice the 234 Mbit/s link
        let (s, gw) = static_scenario(&[(468e6, 3)], 20.0);
        let r = run_sim(&s, &gw, &cfg(20.0, 10.0, 4)).unwrap();
        let mean = r.mean_delay_s().unwrap();
        assert!(mean < 10.0 * 5e-3, "mean delay after 10 s = {mean}");
        let f = &r.flows[0];
        assert!(f.codel_drops > 0);
        assert!(f.is_conserved());
    }

    #[test]
    fn short_track_rejected() {
        let (s, _) = static_scenario(&[(1e6, 8)], 10.0);
        let gw = Trajectory::stationary(GATEWAY_NODE, Point3::new(2000.0, 2000.0, 50.0), 5.0).unwrap();
        assert!(matches!(run_sim(&s, &gw, &cfg(10.0, 1.0, 1)), Err(Error::Config(_))));
    }

    #[test]
    fn export_formats() {
        let (s, gw) = static_scenario(&[(50e6, 8)], 3.0);
        let r = run_sim(&s, &gw, &cfg(3.0, 1.0, 1)).unwrap();
        let mut buf = Vec::new();
        r.write_throughput_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "t_s,R_bps");
        assert!(lines[1].starts_with("1,"));
        assert_eq!(lines.len(), 3);
        let dir = tempfile::tempdir().unwrap();
        r.save(dir.path()).unwrap();
        let summary: serde_json::Value =
            serde_json::from_str(&std::fs::read_to_string(dir.path().join("summary.json")).unwrap()).unwrap();
        assert_eq!(summary["flows"][0]["generated"], r.flows[0].generated);
    }
}
