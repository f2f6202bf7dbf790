use std::time::Duration;

use rand::Rng;
use rand_distr::{Distribution, Exp};

use crate::seed::{self, TAG_CHURN};
use crate::{Error, PeerId, Result};

/// When peers leave during a query. Departures are permanent; nobody joins.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub enum ChurnModel {
    #[default]
    None,
    /// Remaining lifetime exponential with the given mean.
    Exponential { mean_lifetime: Duration },
    /// Every peer lives exactly `lifetime`, at a uniformly random point of
    /// which the query starts.
    Fixed { lifetime: Duration },
}

impl ChurnModel {
    pub fn exponential_minutes(minutes: f64) -> Self {
        ChurnModel::Exponential {
            mean_lifetime: Duration::from_secs_f64(minutes * 60.0),
        }
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            ChurnModel::None => Ok(()),
            ChurnModel::Exponential { mean_lifetime: l } | ChurnModel::Fixed { lifetime: l }
                if l > Duration::ZERO =>
            {
                Ok(())
            }
            _ => Err(Error::InvalidSimConfig(
                "peer lifetime must be positive".into(),
            )),
        }
    }

    /// Departure time of `peer`, measured from query issue; `None` if it
    /// stays. The originator always stays.
    pub fn departure(
        &self,
        seed: u64,
        query: u32,
        peer: PeerId,
        origin: PeerId,
    ) -> Option<Duration> {
        if peer == origin {
            return None;
        }
        let mut rng = seed::rng(seed, &[TAG_CHURN, query as u64, peer as u64]);
        match *self {
            ChurnModel::None => None,
            ChurnModel::Exponential { mean_lifetime } => {
                let exp = Exp::new(1.0 / mean_lifetime.as_secs_f64()).ok()?;
                Some(Duration::from_secs_f64(exp.sample(&mut rng)))
            }
            ChurnModel::Fixed { lifetime } => Some(lifetime.mul_f64(rng.random::<f64>())),
        }
    }
}
