//! Deterministic discrete-event simulation of one query over an overlay.
//!
//! Messages travel over per-pair links (latency plus serialization). Each
//! peer receives one message at a time, so answers converging on one peer
//! queue up behind each other. Peers may leave mid-query according to a
//! [`ChurnModel`]; a send to a departed peer fails and is reported back to
//! the sender.

mod churn;
mod event;
mod link;

use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::time::Duration;

use rayon::prelude::*;

pub use crate::protocol::Algorithm;
pub use churn::ChurnModel;
pub use event::replay_counters;
pub use link::{Link, LinkModel};

use event::{timer_kind, EventQueue, Payload};

use crate::baselines::{BaselineKind, CentralPeer};
use crate::datastore::{generate_database, DataGenConfig, PeerContent};
use crate::metrics::{accuracy, top_k_over, Counters, MetricsReport};
use crate::protocol::{
    forward_bytes, inflate_k, score_list_bytes, Action, HeuristicConfig, Message, PeerEnv,
    PeerState, QueryDescriptor, ResultItem, ScoreEntry, StatisticsStore, WaitTimeParams,
};
use crate::seed::{self, TAG_LAMBDA, TAG_ORIGIN};
use crate::topology::{coverage_ttl, reachable_set, TopologyGraph};
use crate::{Error, PeerId, Result};

/// Rows per peer kept resident by [`Network::build`]; bounds the largest
/// answerable `k`.
pub const CONTENT_CAP: usize = 64;

/// How peers size their wait for neighbours' score-lists.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum WaitPolicy {
    /// Bounds computed from the actual links: slowest latency, slowest
    /// bandwidth, and a receiver queue of `queue_slots` messages (the
    /// largest degree when `None`).
    Derived {
        queue_slots: Option<u32>,
    },
    Fixed(WaitTimeParams),
}

impl Default for WaitPolicy {
    fn default() -> Self {
        WaitPolicy::Derived { queue_slots: None }
    }
}

/// Everything that varies between simulated queries on one network.
#[derive(Debug, Clone, PartialEq)]
pub struct SimConfig {
    pub algorithm: Algorithm,
    pub seed: u64,
    pub k: u32,
    /// `None` means the origin's coverage TTL.
    pub ttl: Option<u32>,
    /// `None` picks a peer from the seed.
    pub origin: Option<PeerId>,
    pub link: LinkModel,
    pub churn: ChurnModel,
    /// Used by [`Algorithm::FdStr12Heuristic`] only.
    pub heuristic: HeuristicConfig,
    pub lambda_max: Duration,
    /// Local execution cost per stored row.
    pub exec_per_row: Duration,
    pub merge_time: Duration,
    pub wait: WaitPolicy,
    /// Probability that a result item is inaccessible; `k` is inflated to
    /// compensate.
    pub inaccessibility: f64,
    /// Distinguishes repeated executions of the same query.
    pub query_counter: u32,
    pub trace: bool,
}

impl SimConfig {
    pub fn new(algorithm: Algorithm, seed: u64) -> Self {
        Self {
            algorithm,
            seed,
            k: 20,
            ttl: None,
            origin: None,
            link: LinkModel::default(),
            churn: ChurnModel::None,
            heuristic: HeuristicConfig::PositionThreshold { z: 0.8 },
            lambda_max: Duration::from_millis(20),
            exec_per_row: Duration::from_micros(5),
            merge_time: Duration::from_millis(1),
            wait: WaitPolicy::default(),
            inaccessibility: 0.0,
            query_counter: 0,
            trace: false,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.k == 0 {
            return Err(Error::InvalidSimConfig("k must be at least 1".into()));
        }
        self.link.validate()?;
        self.churn.validate()?;
        self.heuristic.validate().map_err(Error::InvalidSimConfig)?;
        inflate_k(self.k, self.inaccessibility)?;
        Ok(())
    }
}

/// What one simulated query produced.
#[derive(Debug, Clone, PartialEq)]
pub struct SimOutcome {
    /// Items delivered to the user, best first.
    pub result: Vec<ResultItem>,
    pub report: MetricsReport,
    pub origin: PeerId,
    pub ttl: u32,
    /// `k` as carried by the query, after inflation.
    pub k_effective: u32,
    /// Peers that received the query, the origin included.
    pub reached: BTreeSet<PeerId>,
    /// Top-k over the peers the answer should cover: every peer within
    /// `ttl` hops except those that left before receiving the query.
    pub expected: Vec<ScoreEntry>,
    /// Score-lists and item batches delivered to the origin.
    pub origin_answers: u64,
    pub completed: bool,
    pub trace: Option<String>,
}

impl SimOutcome {
    pub fn result_entries(&self) -> Vec<ScoreEntry> {
        self.result
            .iter()
            .map(|i| ScoreEntry::new(i.owner, i.score))
            .collect()
    }
}

/// An overlay with its peers' data and their persistent statistics.
#[derive(Debug, Clone)]
pub struct Network {
    graph: TopologyGraph,
    contents: Vec<PeerContent>,
    stats: Vec<StatisticsStore>,
}

impl Network {
    /// Generates every peer's database and keeps its best
    /// [`CONTENT_CAP`] rows.
    pub fn build(graph: TopologyGraph, data: &DataGenConfig) -> Result<Self> {
        Self::with_content_cap(graph, data, CONTENT_CAP)
    }

    pub fn with_content_cap(
        graph: TopologyGraph,
        data: &DataGenConfig,
        cap: usize,
    ) -> Result<Self> {
        data.validate()?;
        let contents = (0..graph.node_count() as PeerId)
            .into_par_iter()
            .map(|p| generate_database(p, data).map(|db| PeerContent::summarize(&db, cap)))
            .collect::<Result<Vec<_>>>()?;
        Self::from_contents(graph, contents)
    }

    pub fn from_contents(graph: TopologyGraph, contents: Vec<PeerContent>) -> Result<Self> {
        if contents.len() != graph.node_count() {
            return Err(Error::InvalidSimConfig(format!(
                "{} peer contents for {} peers",
                contents.len(),
                graph.node_count()
            )));
        }
        if graph.node_count() == 0 {
            return Err(Error::EmptyPeerSet);
        }
        let stats = vec![StatisticsStore::default(); graph.node_count()];
        Ok(Self {
            graph,
            contents,
            stats,
        })
    }

    pub fn graph(&self) -> &TopologyGraph {
        &self.graph
    }

    pub fn contents(&self) -> &[PeerContent] {
        &self.contents
    }

    pub fn statistics(&self, peer: PeerId) -> &StatisticsStore {
        &self.stats[peer as usize]
    }

    pub fn reset_statistics(&mut self) {
        self.stats.iter_mut().for_each(StatisticsStore::clear);
    }

    /// The origin `config` resolves to.
    pub fn origin_for(&self, config: &SimConfig) -> PeerId {
        config.origin.unwrap_or_else(|| {
            (seed::mix(config.seed, &[TAG_ORIGIN]) % self.graph.node_count() as u64) as PeerId
        })
    }

    /// Scores of `peer`'s best rows, best first.
    pub fn scores(&self, peer: PeerId) -> impl Iterator<Item = f64> + '_ {
        self.contents[peer as usize]
            .top
            .iter()
            .map(|(h, _)| h.score)
    }

    /// Wait bounds under `config` for a query carrying `k` entries.
    pub fn wait_params(&self, config: &SimConfig, k: u32) -> WaitTimeParams {
        let max_rows = self.contents.iter().map(|c| c.row_count).max().unwrap_or(0);
        let t_exec = config.exec_per_row * max_rows;
        let d = match config.wait {
            WaitPolicy::Fixed(p) => return p,
            WaitPolicy::Derived { queue_slots } => {
                queue_slots.unwrap_or(self.graph.max_degree() as u32)
            }
        };
        let mut max_latency = Duration::ZERO;
        let mut min_bw = f64::INFINITY;
        for (u, v) in self.graph.edges() {
            let l = config.link.link(config.seed, u, v);
            max_latency = max_latency.max(l.latency);
            min_bw = min_bw.min(l.bandwidth_bps);
        }
        let slowest = Link {
            latency: Duration::ZERO,
            bandwidth_bps: min_bw,
        };
        let strategy = config.algorithm.strategy();
        let attached = if strategy.attaches_peers() {
            1 + self.graph.max_degree()
        } else {
            0
        };
        let fwd = slowest.serialization(forward_bytes(attached));
        let list = slowest.serialization(score_list_bytes(k as usize));
        let lambda = if strategy.delays_forwarding() {
            config.lambda_max
        } else {
            Duration::ZERO
        };
        WaitTimeParams {
            t_q_snd: max_latency + fwd * d + lambda,
            t_exec,
            t_sl_snd: max_latency + (fwd + list) * d,
            t_merge: config.merge_time,
        }
    }

    pub fn run_query(&mut self, config: &SimConfig) -> Result<SimOutcome> {
        config.validate()?;
        let origin = self.origin_for(config);
        if !self.graph.contains(origin) {
            return Err(Error::UnknownPeer(origin));
        }
        let ttl = match config.ttl {
            Some(t) => t,
            None => coverage_ttl(&self.graph, origin)?,
        };
        let k_eff = inflate_k(config.k, config.inaccessibility)?;
        if let Some(p) = self
            .contents
            .iter()
            .position(|c| c.top_k(k_eff as usize).is_none())
        {
            return Err(Error::InvalidSimConfig(format!(
                "peer {p} keeps too few rows resident to answer k = {k_eff}"
            )));
        }
        let wait = self.wait_params(config, k_eff);
        let n = self.graph.node_count();
        let departures: Vec<Option<Duration>> = (0..n as PeerId)
            .map(|p| {
                config
                    .churn
                    .departure(config.seed, config.query_counter, p, origin)
            })
            .collect();

        let mut query = QueryDescriptor::new(
            origin,
            config.query_counter,
            k_eff,
            ttl,
            config.algorithm.strategy(),
        );
        query.recovery = config.algorithm.recovery();
        if config.algorithm.uses_heuristics() {
            query.heuristics = Some(config.heuristic);
        }
        if query.strategy.attaches_peers() {
            query.attached = Some(Vec::new());
        }

        let mut kernel = Kernel {
            config,
            graph: &self.graph,
            contents: &self.contents,
            stats: &mut self.stats,
            wait,
            departures,
            origin,
            queue: EventQueue::default(),
            now: Duration::ZERO,
            rx_free: vec![Duration::ZERO; n],
            nodes: (0..n).map(|_| None).collect(),
            counters: Counters::default(),
            trace: config.trace.then(String::new),
            reached: BTreeSet::from([origin]),
            origin_answers: 0,
            completion: None,
            current_seq: 0,
        };
        kernel.run(query, config.k as usize);

        let Kernel {
            counters,
            trace,
            reached,
            origin_answers,
            completion,
            now,
            departures,
            ..
        } = kernel;
        let completed = completion.is_some();
        let (end, result) = completion.unwrap_or((now, Vec::new()));
        // Peers the answer should cover: those the query reached, plus those
        // in range it could have reached (skipped by a heuristic) that were
        // still online at the end.
        let mut covered = reachable_set(&self.graph, origin, ttl)?;
        covered.retain(|p| reached.contains(p) || departures[*p as usize].is_none_or(|d| d > end));
        let expected = top_k_over(covered, config.k as usize, |p| {
            self.scores(p).collect::<Vec<_>>()
        });
        let entries: Vec<ScoreEntry> = result
            .iter()
            .map(|i| ScoreEntry::new(i.owner, i.score))
            .collect();
        let mut report =
            MetricsReport::new(config.seed, config.algorithm, n, config.k, ttl, &counters);
        report.response_time_ms = end.as_secs_f64() * 1000.0;
        report.ac_q = accuracy(&expected, &entries);
        Ok(SimOutcome {
            result,
            report,
            origin,
            ttl,
            k_effective: k_eff,
            reached,
            expected,
            origin_answers,
            completed,
            trace,
        })
    }
}

enum Node {
    Fd(PeerState),
    Central(CentralPeer),
}

struct Kernel<'a> {
    config: &'a SimConfig,
    graph: &'a TopologyGraph,
    contents: &'a [PeerContent],
    stats: &'a mut [StatisticsStore],
    wait: WaitTimeParams,
    departures: Vec<Option<Duration>>,
    origin: PeerId,
    queue: EventQueue,
    now: Duration,
    rx_free: Vec<Duration>,
    nodes: Vec<Option<Node>>,
    counters: Counters,
    trace: Option<String>,
    reached: BTreeSet<PeerId>,
    origin_answers: u64,
    completion: Option<(Duration, Vec<ResultItem>)>,
    current_seq: u64,
}

impl Kernel<'_> {
    fn departed(&self, peer: PeerId, at: Duration) -> bool {
        self.departures[peer as usize].is_some_and(|d| d <= at)
    }

    fn lambda(&self, peer: PeerId) -> Duration {
        let h = seed::mix(
            self.config.seed,
            &[TAG_LAMBDA, self.config.query_counter as u64, peer as u64],
        );
        self.config.lambda_max.mul_f64(seed::unit(h))
    }

    /// Runs `f` on `peer`'s state, creating the state on first use.
    fn invoke<F>(&mut self, peer: PeerId, f: F) -> Vec<Action>
    where
        F: FnOnce(&mut Node, &mut PeerEnv<'_>) -> Vec<Action>,
    {
        let p = peer as usize;
        let lambda = self.lambda(peer);
        let content = &self.contents[p];
        let node = self.nodes[p].get_or_insert_with(|| {
            let neighbors = self.graph.neighbors(peer).to_vec();
            match self.config.algorithm {
                Algorithm::Cn => Node::Central(CentralPeer::new(peer, neighbors, BaselineKind::Cn)),
                Algorithm::CnStar => {
                    Node::Central(CentralPeer::new(peer, neighbors, BaselineKind::CnStar))
                }
                _ => Node::Fd(PeerState::new(peer, neighbors)),
            }
        });
        let mut env = PeerEnv {
            now: self.now,
            wait: &self.wait,
            exec_time: self.config.exec_per_row * content.row_count,
            merge_time: self.config.merge_time,
            lambda,
            content,
            stats: &mut self.stats[p],
        };
        f(node, &mut env)
    }

    fn log(&mut self, target: PeerId, kind: &str, bytes: usize) {
        if let Some(t) = &mut self.trace {
            let _ = writeln!(
                t,
                "{}\t{}\t{}\t{}\t{}",
                self.now.as_nanos(),
                self.current_seq,
                target,
                kind,
                bytes
            );
        }
    }

    fn run(&mut self, query: QueryDescriptor, k_user: usize) {
        let origin = self.origin;
        // Baselines never wait on neighbours, and their end is defined by
        // quiescence, so only FD peers hear about departures.
        if !self.config.algorithm.is_central() {
            for p in self.graph.peers() {
                let Some(at) = self.departures[p as usize] else {
                    continue;
                };
                for &q in self.graph.neighbors(p) {
                    let latency = self.config.link.link(self.config.seed, p, q).latency;
                    self.queue.push(at + latency, q, Payload::NeighborLeft(p));
                }
            }
        }
        let actions = self.invoke(origin, |node, env| match node {
            Node::Fd(s) => s.start_query(env, query, k_user),
            Node::Central(c) => c.start_query(env, query, k_user),
        });
        self.apply(origin, actions);

        loop {
            while let Some(ev) = self.queue.pop() {
                debug_assert!(ev.time >= self.now);
                self.now = ev.time;
                self.current_seq = ev.seq;
                self.dispatch(ev.target, ev.payload);
            }
            // Baselines: the originator finishes once the network is quiet.
            let finish = match &self.nodes[origin as usize] {
                Some(Node::Central(c)) => !c.is_finished(),
                _ => false,
            };
            if !finish {
                break;
            }
            let actions = self.invoke(origin, |node, env| match node {
                Node::Central(c) => c.finish(env),
                Node::Fd(_) => Vec::new(),
            });
            self.apply(origin, actions);
        }
    }

    fn dispatch(&mut self, target: PeerId, payload: Payload) {
        match payload {
            Payload::Timer(timer) => {
                if self.departed(target, self.now) {
                    return;
                }
                self.log(target, timer_kind(timer), 0);
                let actions = self.invoke(target, |node, env| match node {
                    Node::Fd(s) => s.handle_timer(env, timer),
                    Node::Central(c) => c.handle_timer(env, timer),
                });
                self.apply(target, actions);
            }
            Payload::NeighborLeft(peer) => {
                // Peers the query has not reached yet have nothing to wait for.
                if self.departed(target, self.now) || self.nodes[target as usize].is_none() {
                    return;
                }
                self.log(target, "NEIGHBOR-LEFT", 0);
                let actions = self.invoke(target, |node, env| match node {
                    Node::Fd(s) => s.on_neighbor_left(env, peer),
                    Node::Central(_) => Vec::new(),
                });
                self.apply(target, actions);
            }
            Payload::Deliver { from, msg } => {
                if self.departed(target, self.now) {
                    // The receiver left while the message was in flight.
                    if !self.departed(from, self.now) {
                        self.fail(from, target, msg);
                    }
                    return;
                }
                self.counters.record(&msg);
                self.log(target, msg.kind_name(), msg.accounted_bytes());
                match &msg {
                    Message::Forward(_) => {
                        self.reached.insert(target);
                    }
                    Message::ScoreList { .. } | Message::ItemResponse { .. }
                        if target == self.origin =>
                    {
                        self.origin_answers += 1;
                    }
                    _ => {}
                }
                let actions = self.invoke(target, |node, env| match node {
                    Node::Fd(s) => s.handle_message(env, from, msg),
                    Node::Central(c) => c.handle_message(env, from, msg),
                });
                self.apply(target, actions);
            }
        }
    }

    fn fail(&mut self, sender: PeerId, to: PeerId, msg: Message) {
        let actions = self.invoke(sender, |node, env| match node {
            Node::Fd(s) => s.on_send_failed(env, to, msg),
            Node::Central(c) => c.on_send_failed(to, &msg),
        });
        self.apply(sender, actions);
    }

    fn apply(&mut self, peer: PeerId, actions: Vec<Action>) {
        for action in actions {
            match action {
                Action::Send { to, msg, delay } => {
                    let sent = self.now + delay;
                    if self.departed(to, sent) {
                        self.fail(peer, to, msg);
                        continue;
                    }
                    let link = self.config.link.link(self.config.seed, peer, to);
                    let bytes = msg.accounted_bytes();
                    let start = (sent + link.latency).max(self.rx_free[to as usize]);
                    let arrival = start + link.serialization(bytes);
                    self.rx_free[to as usize] = arrival;
                    self.queue
                        .push(arrival, to, Payload::Deliver { from: peer, msg });
                }
                Action::Schedule { after, timer } => {
                    self.queue
                        .push(self.now + after, peer, Payload::Timer(timer));
                }
                Action::Dropped { .. } => {
                    self.counters.lost_lists += 1;
                    self.log(peer, "LOST", 0);
                }
                Action::Complete { items } => {
                    if self.completion.is_none() {
                        let at = match &self.nodes[peer as usize] {
                            Some(Node::Central(c)) if self.config.algorithm == Algorithm::Cn => {
                                c.last_arrival()
                            }
                            _ => self.now,
                        };
                        self.completion = Some((at, items));
                    }
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::datastore::LocalHit;
    use crate::metrics::{exact_mfw_basic, oracle_top_k, predict_bbw_default};
    use crate::topology::fixtures::*;
    use crate::topology::{generate_topology, TopologyConfig};

    fn small_net(n: usize, seed: u64) -> Network {
        let g = generate_topology(&TopologyConfig::new(n, 2, seed)).unwrap();
        let data = DataGenConfig {
            seed,
            tuple_count_min: 50,
            tuple_count_max: 200,
            ..Default::default()
        };
        Network::build(g, &data).unwrap()
    }

    fn content(scores: &[f64]) -> PeerContent {
        PeerContent {
            row_count: scores.len() as u32,
            top: scores
                .iter()
                .enumerate()
                .map(|(i, &s)| {
                    (
                        LocalHit {
                            row: i as u32,
                            score: s,
                        },
                        1000,
                    )
                })
                .collect(),
        }
    }

    #[test]
    fn single_peer_answers_locally_for_free() {
        for algo in Algorithm::ALL {
            let g = TopologyGraph::from_edges(1, []).unwrap();
            let mut net = Network::from_contents(g, vec![content(&[0.9, 0.5, 0.3])]).unwrap();
            let mut cfg = SimConfig::new(algo, 1);
            cfg.k = 2;
            let out = net.run_query(&cfg).unwrap();
            assert!(out.completed, "{algo}");
            assert_eq!(
                out.result.iter().map(|i| i.score).collect::<Vec<_>>(),
                vec![0.9, 0.5],
                "{algo}"
            );
            assert_eq!(out.report.total_bytes, 0, "{algo}");
            assert_eq!(out.report.m_fw + out.report.m_bw + out.report.m_rt, 0);
        }
    }

    #[test]
    fn every_algorithm_matches_oracle_on_static_network() {
        let mut net = small_net(150, 3);
        for algo in Algorithm::ALL {
            let out = net.run_query(&SimConfig::new(algo, 3)).unwrap();
            let oracle = oracle_top_k(net.graph(), out.origin, out.ttl, 20, |p| {
                net.scores(p).collect::<Vec<_>>()
            })
            .unwrap();
            if algo != Algorithm::FdStr12Heuristic {
                assert_eq!(out.result_entries(), oracle, "{algo}");
                assert_eq!(out.report.ac_q, 1.0);
            }
            assert!(out.report.m_rt <= 40);
        }
    }

    #[test]
    fn basic_counters_follow_the_graph() {
        let mut net = small_net(200, 5);
        let mut cfg = SimConfig::new(Algorithm::FdBasic, 5);
        let origin = net.origin_for(&cfg);
        let ttl = coverage_ttl(net.graph(), origin).unwrap() + 1;
        cfg.ttl = Some(ttl);
        let out = net.run_query(&cfg).unwrap();
        assert_eq!(out.reached.len(), 200);
        assert_eq!(
            out.report.m_fw,
            exact_mfw_basic(net.graph(), origin, ttl).unwrap()
        );
        assert_eq!(out.report.m_bw, 199);
        assert_eq!(out.report.b_bw, predict_bbw_default(20, 200));
    }

    #[test]
    fn repeat_runs_are_identical() {
        let mut a = small_net(120, 9);
        let mut b = small_net(120, 9);
        for algo in Algorithm::ALL {
            let mut cfg = SimConfig::new(algo, 9);
            cfg.trace = true;
            cfg.churn = ChurnModel::exponential_minutes(0.2);
            let x = a.run_query(&cfg).unwrap();
            let y = b.run_query(&cfg).unwrap();
            assert_eq!(x.report.to_csv_row(), y.report.to_csv_row());
            assert_eq!(x.trace, y.trace);
        }
    }

    #[test]
    fn trace_replays_to_same_counters() {
        let mut net = small_net(100, 2);
        for algo in Algorithm::ALL {
            let mut cfg = SimConfig::new(algo, 2);
            cfg.trace = true;
            cfg.churn = ChurnModel::exponential_minutes(0.1);
            let out = net.run_query(&cfg).unwrap();
            let c = replay_counters(out.trace.as_deref().unwrap()).unwrap();
            assert_eq!(c.m_fw, out.report.m_fw);
            assert_eq!(c.m_bw, out.report.m_bw);
            assert_eq!(c.m_rt, out.report.m_rt);
            assert_eq!(c.b_bw, out.report.b_bw);
            assert_eq!(c.total_bytes, out.report.total_bytes);
            assert_eq!(c.lost_lists, out.report.lost_lists);
            assert_eq!(c.urgent_lists_sent, out.report.urgent_lists_sent);
            let times: Vec<u128> = out
                .trace
                .unwrap()
                .lines()
                .map(|l| l.split('\t').next().unwrap().parse().unwrap())
                .collect();
            assert!(times.windows(2).all(|w| w[0] <= w[1]));
        }
    }

    #[test]
    fn triangle_strategy_counts() {
        let g = complete(3);
        let contents = vec![content(&[0.1]), content(&[0.2]), content(&[0.3])];
        let mut net = Network::from_contents(g, contents).unwrap();
        for (algo, want) in [
            (Algorithm::FdStr1, 3),
            (Algorithm::FdStr12, 2),
            (Algorithm::FdBasic, 4),
        ] {
            let mut cfg = SimConfig::new(algo, 1);
            cfg.k = 1;
            cfg.origin = Some(0);
            cfg.ttl = Some(3);
            cfg.link = LinkModel::instant();
            let out = net.run_query(&cfg).unwrap();
            assert_eq!(out.report.m_fw, want, "{algo}");
            assert_eq!(out.result[0].score, 0.3);
        }
    }

    #[test]
    fn inflated_k_is_carried_and_result_truncated() {
        let mut net = small_net(60, 4);
        let mut cfg = SimConfig::new(Algorithm::FdBasic, 4);
        cfg.inaccessibility = 0.5;
        let out = net.run_query(&cfg).unwrap();
        assert_eq!(out.k_effective, 40);
        assert_eq!(out.result.len(), 20);
        cfg.inaccessibility = 1.0;
        assert!(net.run_query(&cfg).is_err());
    }

    #[test]
    fn rejects_bad_configs() {
        let mut net = small_net(30, 1);
        let mut cfg = SimConfig::new(Algorithm::FdBasic, 1);
        cfg.k = 0;
        assert!(net.run_query(&cfg).is_err());
        cfg.k = 65;
        assert!(net.run_query(&cfg).is_err());
        cfg.k = 5;
        cfg.origin = Some(30);
        assert!(matches!(net.run_query(&cfg), Err(Error::UnknownPeer(30))));
        let g = TopologyGraph::from_edges(3, [(0, 1)]).unwrap();
        let mut split = Network::from_contents(g, vec![content(&[0.1]); 3]).unwrap();
        let mut cfg = SimConfig::new(Algorithm::FdBasic, 1);
        cfg.origin = Some(0);
        assert!(matches!(
            split.run_query(&cfg),
            Err(Error::Disconnected { .. })
        ));
    }
}
