use std::fmt;
use std::str::FromStr;

use crate::datastore::ScoringSpec;
use crate::PeerId;

/// Originator id plus the originator's query counter.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct QueryId {
    pub originator: PeerId,
    pub counter: u32,
}

/// Forwarding strategy.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum Strategy {
    /// Send to every neighbour except the parent.
    #[default]
    Basic,
    /// Wait a random λ, then skip neighbours that already sent the query.
    Strategy1,
    /// Strategy 1, plus skip peers named in the sender's attached list.
    Strategy1And2,
}

impl Strategy {
    pub fn delays_forwarding(self) -> bool {
        !matches!(self, Strategy::Basic)
    }

    pub fn attaches_peers(self) -> bool {
        matches!(self, Strategy::Strategy1And2)
    }
}

/// Neighbour-selection heuristic driven by per-neighbour statistics.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum HeuristicConfig {
    /// Skip neighbours none of whose scores survived last time.
    ExcludeZeroHit,
    /// Keep neighbours for which at least fraction `x` of their scores survived.
    MinHitFraction { x: f64 },
    /// Keep neighbours whose best surviving score ranked within `z × n`,
    /// `n` being the length of the merged list.
    PositionThreshold { z: f64 },
}

impl HeuristicConfig {
    pub fn validate(&self) -> Result<(), String> {
        let (name, v) = match *self {
            HeuristicConfig::ExcludeZeroHit => return Ok(()),
            HeuristicConfig::MinHitFraction { x } => ("x", x),
            HeuristicConfig::PositionThreshold { z } => ("z", z),
        };
        if (0.0..=1.0).contains(&v) {
            Ok(())
        } else {
            Err(format!(
                "heuristic parameter {name} must lie in [0, 1], got {v}"
            ))
        }
    }
}

/// A top-k query as carried by forward messages.
#[derive(Debug, Clone, PartialEq)]
pub struct QueryDescriptor {
    pub qid: QueryId,
    /// Number of answers requested (after any inflation).
    pub k: u32,
    /// Remaining hops as written in the message; the receiver decrements it.
    pub ttl: u32,
    pub originator: PeerId,
    pub scoring: ScoringSpec,
    pub strategy: Strategy,
    pub heuristics: Option<HeuristicConfig>,
    /// Relay late and orphaned score-lists as urgent lists instead of
    /// dropping them.
    pub recovery: bool,
    /// Sender id plus sender's neighbours; present iff Strategy 1+2.
    pub attached: Option<Vec<PeerId>>,
}

impl QueryDescriptor {
    pub fn new(originator: PeerId, counter: u32, k: u32, ttl: u32, strategy: Strategy) -> Self {
        Self {
            qid: QueryId {
                originator,
                counter,
            },
            k,
            ttl,
            originator,
            scoring: ScoringSpec::default(),
            strategy,
            heuristics: None,
            recovery: false,
            attached: None,
        }
    }

    pub fn is_well_formed(&self) -> bool {
        self.k >= 1
            && self.qid.originator == self.originator
            && self.attached.is_some() == self.strategy.attaches_peers()
    }
}

/// The protocol variants run by the simulator.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Algorithm {
    FdBasic,
    FdStr1,
    FdStr12,
    /// Basic forwarding with urgent score-lists and parent-loss rerouting.
    FdDynamic,
    /// Strategy 1+2 with the configured statistics heuristic.
    FdStr12Heuristic,
    Cn,
    CnStar,
}

impl Algorithm {
    pub const ALL: [Algorithm; 7] = [
        Algorithm::FdBasic,
        Algorithm::FdStr1,
        Algorithm::FdStr12,
        Algorithm::FdDynamic,
        Algorithm::FdStr12Heuristic,
        Algorithm::Cn,
        Algorithm::CnStar,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Algorithm::FdBasic => "fd-basic",
            Algorithm::FdStr1 => "fd-str1",
            Algorithm::FdStr12 => "fd-str12",
            Algorithm::FdDynamic => "fd-dynamic",
            Algorithm::FdStr12Heuristic => "fd-str12-h",
            Algorithm::Cn => "cn",
            Algorithm::CnStar => "cnstar",
        }
    }

    pub fn is_central(self) -> bool {
        matches!(self, Algorithm::Cn | Algorithm::CnStar)
    }

    pub fn strategy(self) -> Strategy {
        match self {
            Algorithm::FdStr1 => Strategy::Strategy1,
            Algorithm::FdStr12 | Algorithm::FdStr12Heuristic => Strategy::Strategy1And2,
            _ => Strategy::Basic,
        }
    }

    pub fn recovery(self) -> bool {
        matches!(self, Algorithm::FdDynamic)
    }

    pub fn uses_heuristics(self) -> bool {
        matches!(self, Algorithm::FdStr12Heuristic)
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Algorithm {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Algorithm::ALL
            .into_iter()
            .find(|a| a.name() == s)
            .ok_or_else(|| {
                let known: Vec<_> = Algorithm::ALL.iter().map(|a| a.name()).collect();
                format!("unknown algorithm `{s}` (known: {})", known.join(", "))
            })
    }
}
