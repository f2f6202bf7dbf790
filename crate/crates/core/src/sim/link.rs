use std::time::Duration;

use crate::seed::{self, TAG_LINK};
use crate::{Error, PeerId, Result};

/// Normally distributed per-link latency and bandwidth. Draws are fixed per
/// peer pair and seed, so sweeping a mean moves every link the same way.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinkModel {
    pub latency_mean_ms: f64,
    /// Variance of the latency, in ms².
    pub latency_variance: f64,
    pub bandwidth_mean_kbps: f64,
    /// Variance of the bandwidth, in kbps².
    pub bandwidth_variance: f64,
    /// Zero latency and unlimited bandwidth on every link.
    pub instant: bool,
}

impl Default for LinkModel {
    fn default() -> Self {
        Self {
            latency_mean_ms: 200.0,
            latency_variance: 100.0,
            bandwidth_mean_kbps: 56.0,
            bandwidth_variance: 32.0,
            instant: false,
        }
    }
}

/// One drawn link.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Link {
    pub latency: Duration,
    /// Bits per second; infinite for instant links.
    pub bandwidth_bps: f64,
}

impl Link {
    /// `latency + 8·bytes / bandwidth`.
    pub fn transfer_time(&self, bytes: usize) -> Duration {
        self.latency + self.serialization(bytes)
    }

    pub fn serialization(&self, bytes: usize) -> Duration {
        if self.bandwidth_bps.is_infinite() {
            Duration::ZERO
        } else {
            Duration::from_secs_f64(8.0 * bytes as f64 / self.bandwidth_bps)
        }
    }
}

/// Positive draw from `Normal(mean, sd)`: non-positive values are redrawn.
fn positive_normal(seed: u64, parts: [u64; 4], mean: f64, sd: f64) -> f64 {
    for attempt in 0u64.. {
        let z = seed::std_normal(seed::mix(
            seed,
            &[parts[0], parts[1], parts[2], parts[3], attempt],
        ));
        let v = mean + sd * z;
        if v > 0.0 {
            return v;
        }
    }
    unreachable!()
}

impl LinkModel {
    pub fn instant() -> Self {
        Self {
            instant: true,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        let ok = |v: f64| v.is_finite() && v >= 0.0;
        if !(ok(self.latency_mean_ms) && ok(self.latency_variance) && ok(self.bandwidth_variance)) {
            return Err(Error::InvalidSimConfig(
                "link latency and variances must be finite and >= 0".into(),
            ));
        }
        if !(self.bandwidth_mean_kbps.is_finite() && self.bandwidth_mean_kbps > 0.0) {
            return Err(Error::InvalidSimConfig(
                "bandwidth mean must be positive".into(),
            ));
        }
        Ok(())
    }

    /// The link between `u` and `v`; symmetric in its endpoints.
    pub fn link(&self, seed: u64, u: PeerId, v: PeerId) -> Link {
        if self.instant {
            return Link {
                latency: Duration::ZERO,
                bandwidth_bps: f64::INFINITY,
            };
        }
        let (a, b) = (u.min(v) as u64, u.max(v) as u64);
        let latency_ms = if self.latency_mean_ms > 0.0 {
            positive_normal(
                seed,
                [TAG_LINK, a, b, 0],
                self.latency_mean_ms,
                self.latency_variance.sqrt(),
            )
        } else {
            0.0
        };
        let kbps = positive_normal(
            seed,
            [TAG_LINK, a, b, 1],
            self.bandwidth_mean_kbps,
            self.bandwidth_variance.sqrt(),
        );
        Link {
            latency: Duration::from_secs_f64(latency_ms / 1000.0),
            bandwidth_bps: kbps * 1000.0,
        }
    }
}
