//! The per-peer state machine. Handlers never block: they return a list of
//! [`Action`]s (sends, timers, completion) that the event kernel executes.

use std::collections::{BTreeMap, BTreeSet};
use std::time::Duration;

use super::build_retrieval_plan;
use super::message::{ListKind, Message, ResultItem};
use super::query::{QueryDescriptor, QueryId};
use super::scorelist::{entry_order, merge_score_lists, ScoreEntry, ScoreList};
use super::stats::{select_neighbors_heuristic, update_statistics, StatisticsStore, TemplateKey};
use super::wait::{compute_wait_time, WaitTimeParams};
use crate::datastore::PeerContent;
use crate::PeerId;

/// Urgent lists that bounce around this many hops go straight to the
/// originator instead.
pub const MAX_URGENT_HOPS: u32 = 32;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Timer {
    /// End of the Strategy 1 delay λ.
    Flush,
    ExecDone,
    WaitExpired,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum DropReason {
    /// A regular list arrived after the receiver had already sent its own.
    LateList,
    /// Parent unreachable and recovery disabled.
    ParentUnreachable,
    OriginatorUnreachable,
    /// Urgent list reached the originator during data retrieval.
    AfterRetrieval,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Action {
    Send {
        to: PeerId,
        msg: Message,
        delay: Duration,
    },
    Schedule {
        after: Duration,
        timer: Timer,
    },
    /// A score-list was discarded.
    Dropped {
        reason: DropReason,
    },
    /// The originator holds its final answer.
    Complete {
        items: Vec<ResultItem>,
    },
}

fn send(to: PeerId, msg: Message) -> Action {
    Action::Send {
        to,
        msg,
        delay: Duration::ZERO,
    }
}

/// What a handler may look at besides the peer's own state.
pub struct PeerEnv<'a> {
    pub now: Duration,
    pub wait: &'a WaitTimeParams,
    /// Time this peer needs to run the query locally.
    pub exec_time: Duration,
    pub merge_time: Duration,
    /// This peer's Strategy 1 delay.
    pub lambda: Duration,
    pub content: &'a PeerContent,
    pub stats: &'a mut StatisticsStore,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Phase {
    Idle,
    Collecting,
    /// Merged list sent (relay) or answer delivered (originator).
    Done,
    /// Originator only: final list built, items being fetched.
    Retrieval,
}

/// The originator's data-retrieval bookkeeping.
#[derive(Debug, Clone, PartialEq)]
pub struct Retrieval {
    outstanding: BTreeSet<PeerId>,
    items: Vec<ResultItem>,
    k_user: usize,
}

impl Retrieval {
    /// Asks every owner in `final_list` for as many items as it has entries.
    /// Items the originator owns itself are taken locally.
    pub fn start(
        me: PeerId,
        qid: QueryId,
        final_list: &ScoreList,
        content: &PeerContent,
        k_user: usize,
        delay: Duration,
    ) -> (Self, Vec<Action>) {
        let mut r = Retrieval {
            outstanding: BTreeSet::new(),
            items: Vec::new(),
            k_user,
        };
        let mut actions = Vec::new();
        for (owner, count) in build_retrieval_plan(final_list) {
            if owner == me {
                r.items.extend(answer_retrieval(me, content, count));
            } else {
                r.outstanding.insert(owner);
                actions.push(Action::Send {
                    to: owner,
                    msg: Message::RetrieveRequest { qid, count },
                    delay,
                });
            }
        }
        if let Some(done) = r.finish_if_done() {
            actions.push(done);
        }
        (r, actions)
    }

    pub fn on_response(&mut self, from: PeerId, items: Vec<ResultItem>) -> Option<Action> {
        if self.outstanding.remove(&from) {
            self.items.extend(items);
        }
        self.finish_if_done()
    }

    pub fn on_unreachable(&mut self, owner: PeerId) -> Option<Action> {
        self.outstanding.remove(&owner);
        self.finish_if_done()
    }

    fn finish_if_done(&mut self) -> Option<Action> {
        if !self.outstanding.is_empty() {
            return None;
        }
        let mut items = std::mem::take(&mut self.items);
        items.sort_by(|a, b| {
            entry_order(
                &ScoreEntry::new(a.owner, a.score),
                &ScoreEntry::new(b.owner, b.score),
            )
            .then(a.row.cmp(&b.row))
        });
        items.truncate(self.k_user);
        // Only one completion per retrieval.
        self.outstanding.insert(PeerId::MAX);
        Some(Action::Complete { items })
    }
}

/// A peer's `count` best items, as shipped in a retrieval response.
pub fn answer_retrieval(me: PeerId, content: &PeerContent, count: u32) -> Vec<ResultItem> {
    content
        .top
        .iter()
        .take(count as usize)
        .map(|&(hit, payload_bytes)| ResultItem {
            owner: me,
            row: hit.row,
            score: hit.score,
            payload_bytes,
        })
        .collect()
}

/// A peer's local top-k as a score-list.
pub fn local_score_list(me: PeerId, content: &PeerContent, k: usize) -> ScoreList {
    ScoreList::from_entries(
        content
            .top
            .iter()
            .take(k)
            .map(|(h, _)| ScoreEntry::new(me, h.score))
            .collect(),
    )
}

/// Per-query protocol state of one peer.
#[derive(Debug, Clone)]
pub struct PeerState {
    id: PeerId,
    neighbors: Vec<PeerId>,
    query: Option<QueryDescriptor>,
    is_originator: bool,
    k_user: usize,
    parent: Option<PeerId>,
    ttl_out: u32,
    /// Neighbours that sent us the query, the parent included. None of them
    /// can be our child.
    received_from: BTreeSet<PeerId>,
    /// Union of attached lists seen before forwarding (Strategy 2).
    excluded: BTreeSet<PeerId>,
    flushed: bool,
    pending: BTreeSet<PeerId>,
    wait_deadline: Option<Duration>,
    deadline_passed: bool,
    exec_done: bool,
    local_top: ScoreList,
    child_lists: BTreeMap<PeerId, ScoreList>,
    extra_lists: Vec<ScoreList>,
    phase: Phase,
    merged_sent: bool,
    reroute_tried: BTreeSet<PeerId>,
    retrieval: Option<Retrieval>,
}

impl PeerState {
    pub fn new(id: PeerId, neighbors: Vec<PeerId>) -> Self {
        Self {
            id,
            neighbors,
            query: None,
            is_originator: false,
            k_user: 0,
            parent: None,
            ttl_out: 0,
            received_from: BTreeSet::new(),
            excluded: BTreeSet::new(),
            flushed: false,
            pending: BTreeSet::new(),
            wait_deadline: None,
            deadline_passed: false,
            exec_done: false,
            local_top: ScoreList::new(),
            child_lists: BTreeMap::new(),
            extra_lists: Vec::new(),
            phase: Phase::Idle,
            merged_sent: false,
            reroute_tried: BTreeSet::new(),
            retrieval: None,
        }
    }

    pub fn id(&self) -> PeerId {
        self.id
    }
    pub fn parent(&self) -> Option<PeerId> {
        self.parent
    }
    pub fn phase(&self) -> Phase {
        self.phase
    }
    pub fn merged_sent(&self) -> bool {
        self.merged_sent
    }
    pub fn pending(&self) -> &BTreeSet<PeerId> {
        &self.pending
    }
    pub fn wait_deadline(&self) -> Option<Duration> {
        self.wait_deadline
    }
    pub fn outgoing_ttl(&self) -> u32 {
        self.ttl_out
    }
    pub fn has_seen_query(&self) -> bool {
        self.phase != Phase::Idle
    }
    pub fn is_originator(&self) -> bool {
        self.is_originator
    }

    fn template(&self) -> Option<TemplateKey> {
        self.query.as_ref().map(|q| TemplateKey {
            scoring: q.scoring,
            k: q.k,
        })
    }

    fn k(&self) -> usize {
        self.query.as_ref().map_or(0, |q| q.k as usize)
    }

    fn recovery(&self) -> bool {
        self.query.as_ref().is_some_and(|q| q.recovery)
    }

    /// Issues `query` at this peer. `k_user` is the number of items the user
    /// asked for before any inflation of `query.k`.
    pub fn start_query(
        &mut self,
        env: &mut PeerEnv<'_>,
        query: QueryDescriptor,
        k_user: usize,
    ) -> Vec<Action> {
        debug_assert!(query.is_well_formed());
        self.is_originator = true;
        self.k_user = k_user;
        self.ttl_out = query.ttl;
        self.local_top = local_score_list(self.id, env.content, query.k as usize);
        self.query = Some(query);
        self.phase = Phase::Collecting;
        let mut actions = vec![Action::Schedule {
            after: env.exec_time,
            timer: Timer::ExecDone,
        }];
        if self.ttl_out == 0 {
            self.flushed = true;
        } else {
            actions.extend(self.flush(env));
        }
        actions
    }

    /// Query forward phase.
    pub fn handle_forward(
        &mut self,
        env: &mut PeerEnv<'_>,
        msg: &QueryDescriptor,
        sender: PeerId,
    ) -> Vec<Action> {
        if self.phase != Phase::Idle {
            // Duplicate: discard, but remember who already has the query.
            self.received_from.insert(sender);
            if !self.flushed {
                if let Some(list) = &msg.attached {
                    self.excluded.extend(list.iter().copied());
                }
                return Vec::new();
            }
            // A neighbour that forwards Q to us did not get it from us first.
            if self.pending.remove(&sender) {
                return self.try_complete(env);
            }
            return Vec::new();
        }

        self.parent = Some(sender);
        self.received_from.insert(sender);
        self.ttl_out = msg.ttl.saturating_sub(1);
        self.local_top = local_score_list(self.id, env.content, msg.k as usize);
        if let Some(list) = &msg.attached {
            self.excluded.extend(list.iter().copied());
        }
        let mut query = msg.clone();
        query.attached = None;
        self.query = Some(query);
        self.phase = Phase::Collecting;

        let mut actions = vec![Action::Schedule {
            after: env.exec_time,
            timer: Timer::ExecDone,
        }];
        if self.ttl_out == 0 {
            self.flushed = true;
        } else if msg.strategy.delays_forwarding() {
            actions.push(Action::Schedule {
                after: env.lambda,
                timer: Timer::Flush,
            });
        } else {
            actions.extend(self.flush(env));
        }
        actions
    }

    /// Neighbours the query would be sent to right now.
    pub fn forward_targets(&self, stats: &StatisticsStore) -> Vec<PeerId> {
        let Some(q) = &self.query else {
            return Vec::new();
        };
        let candidates: Vec<PeerId> = self
            .neighbors
            .iter()
            .copied()
            .filter(|n| Some(*n) != self.parent && !self.received_from.contains(n))
            .filter(|n| !q.strategy.attaches_peers() || !self.excluded.contains(n))
            .collect();
        match (&q.heuristics, self.template()) {
            (Some(h), Some(t)) => select_neighbors_heuristic(stats, t, &candidates, h),
            _ => candidates,
        }
    }

    fn flush(&mut self, env: &mut PeerEnv<'_>) -> Vec<Action> {
        self.flushed = true;
        let targets = self.forward_targets(env.stats);
        let Some(q) = &self.query else {
            return Vec::new();
        };
        let mut out = q.clone();
        out.ttl = self.ttl_out;
        if q.strategy.attaches_peers() {
            let mut list = Vec::with_capacity(self.neighbors.len() + 1);
            list.push(self.id);
            list.extend(self.neighbors.iter().copied());
            out.attached = Some(list);
        }
        let mut actions: Vec<Action> = targets
            .iter()
            .map(|&t| send(t, Message::Forward(out.clone())))
            .collect();
        self.pending = targets.into_iter().collect();
        if !self.pending.is_empty() {
            let wait = compute_wait_time(self.ttl_out, env.wait).unwrap_or_default();
            self.wait_deadline = Some(env.now + wait);
            actions.push(Action::Schedule {
                after: wait,
                timer: Timer::WaitExpired,
            });
        }
        actions.extend(self.try_complete(env));
        actions
    }

    pub fn handle_timer(&mut self, env: &mut PeerEnv<'_>, timer: Timer) -> Vec<Action> {
        match timer {
            Timer::Flush if !self.flushed => self.flush(env),
            Timer::Flush => Vec::new(),
            Timer::ExecDone => {
                self.exec_done = true;
                self.try_complete(env)
            }
            Timer::WaitExpired => {
                self.deadline_passed = true;
                self.try_complete(env)
            }
        }
    }

    fn try_complete(&mut self, env: &mut PeerEnv<'_>) -> Vec<Action> {
        let ready = self.phase == Phase::Collecting
            && self.exec_done
            && self.flushed
            && (self.pending.is_empty() || self.deadline_passed);
        if ready {
            self.on_wait_expired(env)
        } else {
            Vec::new()
        }
    }

    /// Merge-and-backward: merge the local top scores with every list
    /// received so far and send the result to the parent. At the originator
    /// this builds the final list and starts data retrieval instead.
    pub fn on_wait_expired(&mut self, env: &mut PeerEnv<'_>) -> Vec<Action> {
        if self.phase != Phase::Collecting {
            return Vec::new();
        }
        let k = self.k();
        let merged = merge_score_lists(
            std::iter::once(&self.local_top)
                .chain(self.child_lists.values())
                .chain(self.extra_lists.iter()),
            k,
        );
        if let Some(t) = self.template() {
            update_statistics(env.stats, t, &merged, &self.child_lists);
        }
        let merged_anything = !self.child_lists.is_empty() || !self.extra_lists.is_empty();
        let delay = if merged_anything {
            env.merge_time
        } else {
            Duration::ZERO
        };
        let qid = self
            .query
            .as_ref()
            .map(|q| q.qid)
            .expect("collecting implies a query");

        if self.is_originator {
            self.phase = Phase::Retrieval;
            let (retrieval, actions) =
                Retrieval::start(self.id, qid, &merged, env.content, self.k_user, delay);
            self.retrieval = Some(retrieval);
            return self.absorb_completion(actions);
        }
        self.phase = Phase::Done;
        self.merged_sent = true;
        let parent = self.parent.expect("relay peers have a parent");
        vec![Action::Send {
            to: parent,
            msg: Message::ScoreList {
                qid,
                list: merged,
                kind: ListKind::Backward,
            },
            delay,
        }]
    }

    fn absorb_completion(&mut self, actions: Vec<Action>) -> Vec<Action> {
        if actions.iter().any(|a| matches!(a, Action::Complete { .. })) {
            self.phase = Phase::Done;
        }
        actions
    }

    /// Any score-list message addressed to this peer.
    pub fn handle_score_list(
        &mut self,
        env: &mut PeerEnv<'_>,
        from: PeerId,
        qid: QueryId,
        list: ScoreList,
        kind: ListKind,
    ) -> Vec<Action> {
        match kind {
            ListKind::Backward => {
                if self.phase == Phase::Collecting {
                    self.pending.remove(&from);
                    self.child_lists.insert(from, list);
                    self.try_complete(env)
                } else if self.recovery() && !self.is_originator {
                    self.relay_urgent(qid, list, 1)
                } else {
                    vec![Action::Dropped {
                        reason: DropReason::LateList,
                    }]
                }
            }
            ListKind::Urgent { hops } => self.handle_urgent_scorelist(env, qid, list, hops),
            ListKind::Direct => {
                if self.is_originator && self.phase == Phase::Collecting {
                    self.extra_lists.push(list);
                    Vec::new()
                } else {
                    vec![Action::Dropped {
                        reason: DropReason::AfterRetrieval,
                    }]
                }
            }
        }
    }

    /// Urgent lists climb without waiting until they reach a peer that is
    /// still collecting.
    pub fn handle_urgent_scorelist(
        &mut self,
        _env: &mut PeerEnv<'_>,
        qid: QueryId,
        list: ScoreList,
        hops: u32,
    ) -> Vec<Action> {
        if self.is_originator {
            if self.phase == Phase::Collecting {
                self.extra_lists.push(list);
                return Vec::new();
            }
            return vec![Action::Dropped {
                reason: DropReason::AfterRetrieval,
            }];
        }
        match self.phase {
            Phase::Collecting => {
                self.extra_lists.push(list);
                Vec::new()
            }
            Phase::Idle => vec![send(
                qid.originator,
                Message::ScoreList {
                    qid,
                    list,
                    kind: ListKind::Direct,
                },
            )],
            _ => self.relay_urgent(qid, list, hops + 1),
        }
    }

    fn relay_urgent(&mut self, qid: QueryId, list: ScoreList, hops: u32) -> Vec<Action> {
        if hops > MAX_URGENT_HOPS {
            return vec![send(
                qid.originator,
                Message::ScoreList {
                    qid,
                    list,
                    kind: ListKind::Direct,
                },
            )];
        }
        match self.parent {
            Some(p) if !self.reroute_tried.contains(&p) => {
                vec![send(
                    p,
                    Message::ScoreList {
                        qid,
                        list,
                        kind: ListKind::Urgent { hops },
                    },
                )]
            }
            _ => self.route_on_parent_loss(qid, list, hops),
        }
    }

    /// The parent is gone: hand the list to the smallest known non-child
    /// neighbour as an urgent list, or to the originator if none is left.
    pub fn route_on_parent_loss(
        &mut self,
        qid: QueryId,
        list: ScoreList,
        hops: u32,
    ) -> Vec<Action> {
        let candidate = self
            .received_from
            .iter()
            .copied()
            .find(|n| Some(*n) != self.parent && !self.reroute_tried.contains(n));
        match candidate {
            Some(n) => {
                self.reroute_tried.insert(n);
                vec![send(
                    n,
                    Message::ScoreList {
                        qid,
                        list,
                        kind: ListKind::Urgent { hops: hops + 1 },
                    },
                )]
            }
            None => vec![send(
                qid.originator,
                Message::ScoreList {
                    qid,
                    list,
                    kind: ListKind::Direct,
                },
            )],
        }
    }

    /// The connection to `neighbor` dropped: it left the overlay. Its
    /// score-list will never come, so stop waiting for it.
    pub fn on_neighbor_left(&mut self, env: &mut PeerEnv<'_>, neighbor: PeerId) -> Vec<Action> {
        if self.pending.remove(&neighbor) {
            self.try_complete(env)
        } else {
            Vec::new()
        }
    }

    /// The kernel reports that a send failed because `to` has left.
    pub fn on_send_failed(
        &mut self,
        env: &mut PeerEnv<'_>,
        to: PeerId,
        msg: Message,
    ) -> Vec<Action> {
        match msg {
            Message::Forward(_) => {
                if self.pending.remove(&to) {
                    self.try_complete(env)
                } else {
                    Vec::new()
                }
            }
            Message::ScoreList { qid, list, kind } => {
                if kind == ListKind::Direct {
                    return vec![Action::Dropped {
                        reason: DropReason::OriginatorUnreachable,
                    }];
                }
                if !self.recovery() {
                    return vec![Action::Dropped {
                        reason: DropReason::ParentUnreachable,
                    }];
                }
                self.reroute_tried.insert(to);
                let hops = match kind {
                    ListKind::Urgent { hops } => hops,
                    _ => 0,
                };
                self.route_on_parent_loss(qid, list, hops)
            }
            Message::RetrieveRequest { .. } => {
                let actions: Vec<Action> = self
                    .retrieval
                    .as_mut()
                    .and_then(|r| r.on_unreachable(to))
                    .into_iter()
                    .collect();
                self.absorb_completion(actions)
            }
            Message::RetrieveResponse { .. } | Message::ItemResponse { .. } => Vec::new(),
        }
    }

    pub fn handle_retrieve_request(
        &mut self,
        env: &PeerEnv<'_>,
        from: PeerId,
        qid: QueryId,
        count: u32,
    ) -> Vec<Action> {
        let items = answer_retrieval(self.id, env.content, count);
        vec![send(from, Message::RetrieveResponse { qid, items })]
    }

    pub fn handle_retrieve_response(
        &mut self,
        from: PeerId,
        items: Vec<ResultItem>,
    ) -> Vec<Action> {
        let actions: Vec<Action> = self
            .retrieval
            .as_mut()
            .and_then(|r| r.on_response(from, items))
            .into_iter()
            .collect();
        self.absorb_completion(actions)
    }

    /// Dispatches a delivered message.
    pub fn handle_message(
        &mut self,
        env: &mut PeerEnv<'_>,
        from: PeerId,
        msg: Message,
    ) -> Vec<Action> {
        match msg {
            Message::Forward(q) => self.handle_forward(env, &q, from),
            Message::ScoreList { qid, list, kind } => {
                self.handle_score_list(env, from, qid, list, kind)
            }
            Message::RetrieveRequest { qid, count } => {
                self.handle_retrieve_request(env, from, qid, count)
            }
            Message::RetrieveResponse { items, .. } => self.handle_retrieve_response(from, items),
            Message::ItemResponse { .. } => Vec::new(),
        }
    }
}
