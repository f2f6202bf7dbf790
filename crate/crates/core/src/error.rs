use crate::PeerId;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid topology config: {0}")]
    InvalidTopology(String),
    #[error("graph is disconnected: {unreachable} peer(s) unreachable from {origin}")]
    Disconnected { origin: PeerId, unreachable: usize },
    #[error("peer set is empty")]
    EmptyPeerSet,
    #[error("unknown peer {0}")]
    UnknownPeer(PeerId),
    #[error("invalid data generation config: {0}")]
    InvalidDataConfig(String),
    #[error("wait time needs an outgoing ttl >= 1, got {0}")]
    InvalidTtl(u32),
    #[error("inaccessibility probability must lie in [0, 1), got {0}")]
    InvalidProbability(f64),
    #[error("graph text, line {line}: {msg}")]
    GraphParse { line: usize, msg: String },
    #[error("invalid simulation config: {0}")]
    InvalidSimConfig(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}
