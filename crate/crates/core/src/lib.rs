//! Fully distributed top-k query processing for unstructured P2P overlays.
//!
//! The crate bundles the per-peer protocol (query forward, local execution,
//! merge-and-backward, data retrieval), its traffic-reduction strategies and
//! churn extensions, the centralized baselines it is compared against, and a
//! deterministic discrete-event simulator with byte-exact message accounting.
//!
//! Most users start from [`sim::Network`]:
//!
//! ```
//! use fd_topk::datastore::DataGenConfig;
//! use fd_topk::sim::{Algorithm, Network, SimConfig};
//! use fd_topk::topology::{generate_topology, TopologyConfig};
//!
//! let graph = generate_topology(&TopologyConfig::new(200, 2, 7)).unwrap();
//! let data = DataGenConfig { seed: 7, ..DataGenConfig::default() };
//! let mut net = Network::build(graph, &data).unwrap();
//! let outcome = net.run_query(&SimConfig::new(Algorithm::FdBasic, 7)).unwrap();
//! assert_eq!(outcome.report.ac_q, 1.0);
//! ```

pub mod baselines;
pub mod datastore;
mod error;
pub mod experiment;
pub mod metrics;
pub mod protocol;
mod seed;
pub mod sim;
pub mod topology;

pub use error::{Error, Result};

/// Dense peer identifier, `0..node_count`.
pub type PeerId = u32;
