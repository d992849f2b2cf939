//! CoDel queue following the reference pseudocode of RFC 8289.

use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

use super::Packet;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct CodelConfig {
    /// Acceptable standing sojourn time, s.
    pub target_sojourn: f64,
    /// Window over which sojourn must stay above target before dropping, s.
    pub interval: f64,
    /// Tail-drop limit, packets.
    pub queue_limit: usize,
    /// A queue holding at most this many bits is never considered standing.
    pub mtu_bits: u64,
}

impl Default for CodelConfig {
    fn default() -> Self {
        CodelConfig {
            target_sojourn: 5e-3,
            interval: 100e-3,
            queue_limit: 1000,
            mtu_bits: 1500 * 8,
        }
    }
}

impl CodelConfig {
    pub fn validate(&self) -> Result<()> {
        let ok = self.target_sojourn > 0.0
            && self.target_sojourn.is_finite()
            && self.interval > 0.0
            && self.interval.is_finite()
            && self.queue_limit > 0;
        if !ok {
            return Err(Error::Config(format!("invalid CoDel parameters {self:?}")));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct DropCounts {
    pub codel: u64,
    pub tail: u64,
}

#[derive(Debug, Clone)]
pub struct CodelQueue {
    config: CodelConfig,
    packets: VecDeque<Packet>,
    bits: u64,
    first_above_time: Option<f64>,
    drop_next: f64,
    count: u32,
    last_count: u32,
    dropping: bool,
    drops: DropCounts,
}

impl CodelQueue {
    pub fn new(config: CodelConfig) -> Self {
        CodelQueue {
            config,
            packets: VecDeque::new(),
            bits: 0,
            first_above_time: None,
            drop_next: 0.0,
            count: 0,
            last_count: 0,
            dropping: false,
            drops: DropCounts::default(),
        }
    }

    pub fn len(&self) -> usize {
        self.packets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.packets.is_empty()
    }

    pub fn drops(&self) -> DropCounts {
        self.drops
    }

    /// Returns false when the packet was tail-dropped.
    pub fn enqueue(&mut self, packet: Packet) -> bool {
        if self.packets.len() >= self.config.queue_limit {
            self.drops.tail += 1;
            return false;
        }
        self.bits += packet.size_bits;
        self.packets.push_back(packet);
        true
    }

    fn control_law(&self, t: f64) -> f64 {
        t + self.config.interval / f64::from(self.count).sqrt()
    }

    // `enqueue_time` is the generation time: packets enter the queue as they
    // are created.
    fn do_dequeue(&mut self, now: f64) -> (Option<Packet>, bool) {
        let Some(p) = self.packets.pop_front() else {
            self.first_above_time = None;
            return (None, false);
        };
        self.bits -= p.size_bits;
        let sojourn = now - p.generation_time;
        let mut ok_to_drop = false;
        if sojourn < self.config.target_sojourn || self.bits <= self.config.mtu_bits {
            self.first_above_time = None;
        } else {
            match self.first_above_time {
                None => self.first_above_time = Some(now + self.config.interval),
                Some(t) if now >= t => ok_to_drop = true,
                Some(_) => {}
            }
        }
        (Some(p), ok_to_drop)
    }

    pub fn dequeue(&mut self, now: f64) -> Option<Packet> {
        let (mut packet, mut ok_to_drop) = self.do_dequeue(now);
        if packet.is_none() {
            self.dropping = false;
            return None;
        }
        if self.dropping {
            if !ok_to_drop {
                self.dropping = false;
            }
            while self.dropping && now >= self.drop_next {
                self.drops.codel += 1;
                self.count += 1;
                (packet, ok_to_drop) = self.do_dequeue(now);
                if !ok_to_drop {
                    self.dropping = false;
                } else {
                    self.drop_next = self.control_law(self.drop_next);
                }
            }
        } else if ok_to_drop {
            self.drops.codel += 1;
            (packet, _) = self.do_dequeue(now);
            self.dropping = true;
            let delta = self.count.saturating_sub(self.last_count);
            self.count = if delta > 1 && now - self.drop_next < 16.0 * self.config.interval {
                delta
            } else {
                1
            };
            self.drop_next = self.control_law(now);
            self.last_count = self.count;
        }
        packet
    }
}
