//! Centralized baselines. Both flood the query exactly like FD-Basic; every
//! peer then answers the originator directly, CN with its top items, CN*
//! with its score-list only (the originator then runs the same retrieval as
//! FD).
//!
//! The originator cannot tell when the last answer has arrived, so the
//! simulator finishes a baseline query by calling [`CentralPeer::finish`]
//! once no more events are pending.

use std::time::Duration;

use crate::protocol::{
    answer_retrieval, entry_order, local_score_list, merge_score_lists, Action, ListKind, Message,
    PeerEnv, QueryDescriptor, QueryId, ResultItem, Retrieval, ScoreEntry, ScoreList, Timer,
};
use crate::PeerId;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BaselineKind {
    /// Peers ship their top items to the originator.
    Cn,
    /// Peers ship score-lists; the originator fetches the winners.
    CnStar,
}

/// Per-query state of one peer running a baseline.
#[derive(Debug, Clone)]
pub struct CentralPeer {
    id: PeerId,
    neighbors: Vec<PeerId>,
    kind: BaselineKind,
    query: Option<QueryDescriptor>,
    is_originator: bool,
    k_user: usize,
    parent: Option<PeerId>,
    // Originator only.
    items: Vec<ResultItem>,
    list: ScoreList,
    last_arrival: Duration,
    retrieval: Option<Retrieval>,
    finished: bool,
}

fn item_order(a: &ResultItem, b: &ResultItem) -> std::cmp::Ordering {
    entry_order(
        &ScoreEntry::new(a.owner, a.score),
        &ScoreEntry::new(b.owner, b.score),
    )
    .then(a.row.cmp(&b.row))
}

impl CentralPeer {
    pub fn new(id: PeerId, neighbors: Vec<PeerId>, kind: BaselineKind) -> Self {
        Self {
            id,
            neighbors,
            kind,
            query: None,
            is_originator: false,
            k_user: 0,
            parent: None,
            items: Vec::new(),
            list: ScoreList::new(),
            last_arrival: Duration::ZERO,
            retrieval: None,
            finished: false,
        }
    }

    pub fn has_seen_query(&self) -> bool {
        self.query.is_some()
    }

    pub fn parent(&self) -> Option<PeerId> {
        self.parent
    }

    /// When the originator last received an answer (or finished its own
    /// local execution).
    pub fn last_arrival(&self) -> Duration {
        self.last_arrival
    }

    pub fn is_finished(&self) -> bool {
        self.finished
    }

    fn k(&self) -> usize {
        self.query.as_ref().map_or(0, |q| q.k as usize)
    }

    fn flood(&self, ttl_out: u32) -> Vec<Action> {
        let Some(q) = &self.query else {
            return Vec::new();
        };
        if ttl_out == 0 {
            return Vec::new();
        }
        let mut out = q.clone();
        out.ttl = ttl_out;
        out.attached = None;
        self.neighbors
            .iter()
            .filter(|&&n| Some(n) != self.parent)
            .map(|&n| Action::Send {
                to: n,
                msg: Message::Forward(out.clone()),
                delay: Duration::ZERO,
            })
            .collect()
    }

    pub fn start_query(
        &mut self,
        env: &mut PeerEnv<'_>,
        query: QueryDescriptor,
        k_user: usize,
    ) -> Vec<Action> {
        let ttl = query.ttl;
        self.is_originator = true;
        self.k_user = k_user;
        self.query = Some(query);
        let mut actions = self.flood(ttl);
        actions.push(Action::Schedule {
            after: env.exec_time,
            timer: Timer::ExecDone,
        });
        actions
    }

    pub fn handle_message(
        &mut self,
        env: &mut PeerEnv<'_>,
        from: PeerId,
        msg: Message,
    ) -> Vec<Action> {
        match msg {
            Message::Forward(q) => {
                if self.query.is_some() {
                    return Vec::new();
                }
                self.parent = Some(from);
                let ttl_out = q.ttl.saturating_sub(1);
                self.query = Some(q);
                let mut actions = self.flood(ttl_out);
                actions.push(Action::Schedule {
                    after: env.exec_time,
                    timer: Timer::ExecDone,
                });
                actions
            }
            Message::ItemResponse { items, .. } if self.is_originator && !self.finished => {
                self.last_arrival = env.now;
                self.absorb_items(items);
                Vec::new()
            }
            Message::ScoreList { list, .. } if self.is_originator && !self.finished => {
                self.last_arrival = env.now;
                self.list = merge_score_lists([&self.list, &list], self.k());
                Vec::new()
            }
            Message::RetrieveRequest { qid, count } => {
                let items = answer_retrieval(self.id, env.content, count);
                vec![Action::Send {
                    to: from,
                    msg: Message::RetrieveResponse { qid, items },
                    delay: Duration::ZERO,
                }]
            }
            Message::RetrieveResponse { items, .. } => self
                .retrieval
                .as_mut()
                .and_then(|r| r.on_response(from, items))
                .into_iter()
                .collect(),
            _ => Vec::new(),
        }
    }

    /// Keeps only the best `k` items seen so far.
    fn absorb_items(&mut self, mut items: Vec<ResultItem>) {
        self.items.append(&mut items);
        self.items.sort_by(item_order);
        self.items.truncate(self.k());
    }

    pub fn handle_timer(&mut self, env: &mut PeerEnv<'_>, timer: Timer) -> Vec<Action> {
        if timer != Timer::ExecDone {
            return Vec::new();
        }
        let Some(q) = &self.query else {
            return Vec::new();
        };
        let qid = q.qid;
        let k = q.k;
        if self.is_originator {
            self.last_arrival = self.last_arrival.max(env.now);
            match self.kind {
                BaselineKind::Cn => self.absorb_items(answer_retrieval(self.id, env.content, k)),
                BaselineKind::CnStar => {
                    let own = local_score_list(self.id, env.content, k as usize);
                    self.list = merge_score_lists([&self.list, &own], k as usize);
                }
            }
            return Vec::new();
        }
        vec![Action::Send {
            to: qid.originator,
            msg: self.answer(env, qid, k),
            delay: Duration::ZERO,
        }]
    }

    fn answer(&self, env: &PeerEnv<'_>, qid: QueryId, k: u32) -> Message {
        match self.kind {
            BaselineKind::Cn => Message::ItemResponse {
                qid,
                items: answer_retrieval(self.id, env.content, k),
            },
            BaselineKind::CnStar => Message::ScoreList {
                qid,
                list: local_score_list(self.id, env.content, k as usize),
                kind: ListKind::Backward,
            },
        }
    }

    /// Called on the originator once the network is quiet. CN completes at
    /// once; CN* starts data retrieval.
    pub fn finish(&mut self, env: &mut PeerEnv<'_>) -> Vec<Action> {
        if !self.is_originator || self.finished {
            return Vec::new();
        }
        self.finished = true;
        let qid = self
            .query
            .as_ref()
            .map(|q| q.qid)
            .expect("originator holds the query");
        match self.kind {
            BaselineKind::Cn => {
                let mut items = std::mem::take(&mut self.items);
                items.truncate(self.k_user);
                vec![Action::Complete { items }]
            }
            BaselineKind::CnStar => {
                let (r, actions) = Retrieval::start(
                    self.id,
                    qid,
                    &self.list,
                    env.content,
                    self.k_user,
                    env.merge_time,
                );
                self.retrieval = Some(r);
                actions
            }
        }
    }

    /// A send failed because `to` has left.
    pub fn on_send_failed(&mut self, to: PeerId, msg: &Message) -> Vec<Action> {
        match msg {
            Message::RetrieveRequest { .. } => self
                .retrieval
                .as_mut()
                .and_then(|r| r.on_unreachable(to))
                .into_iter()
                .collect(),
            _ => Vec::new(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::datastore::{LocalHit, PeerContent};
    use crate::protocol::{StatisticsStore, Strategy, WaitTimeParams};

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
                        100,
                    )
                })
                .collect(),
        }
    }

    #[test]
    fn lone_originator_answers_locally() {
        for kind in [BaselineKind::Cn, BaselineKind::CnStar] {
            let c = content(&[0.9, 0.5, 0.1]);
            let wait = WaitTimeParams::default();
            let mut stats = StatisticsStore::default();
            let mut env = PeerEnv {
                now: Duration::ZERO,
                wait: &wait,
                exec_time: Duration::from_millis(1),
                merge_time: Duration::ZERO,
                lambda: Duration::ZERO,
                content: &c,
                stats: &mut stats,
            };
            let mut p = CentralPeer::new(0, vec![], kind);
            let a = p.start_query(
                &mut env,
                QueryDescriptor::new(0, 0, 2, 3, Strategy::Basic),
                2,
            );
            assert_eq!(a.len(), 1);
            assert!(p.handle_timer(&mut env, Timer::ExecDone).is_empty());
            let done = p.finish(&mut env);
            match &done[..] {
                [Action::Complete { items }] => {
                    assert_eq!(
                        items.iter().map(|i| i.score).collect::<Vec<_>>(),
                        vec![0.9, 0.5]
                    );
                }
                other => panic!("{other:?}"),
            }
        }
    }

    #[test]
    fn relay_answers_originator_directly() {
        let c = content(&[0.7, 0.6]);
        let wait = WaitTimeParams::default();
        let mut stats = StatisticsStore::default();
        let mut env = PeerEnv {
            now: Duration::ZERO,
            wait: &wait,
            exec_time: Duration::ZERO,
            merge_time: Duration::ZERO,
            lambda: Duration::ZERO,
            content: &c,
            stats: &mut stats,
        };
        let mut p = CentralPeer::new(5, vec![3, 4, 9], BaselineKind::CnStar);
        let q = QueryDescriptor::new(1, 0, 2, 2, Strategy::Basic);
        let a = p.handle_message(&mut env, 3, Message::Forward(q.clone()));
        let targets: Vec<PeerId> = a
            .iter()
            .filter_map(|a| match a {
                Action::Send { to, .. } => Some(*to),
                _ => None,
            })
            .collect();
        assert_eq!(targets, vec![4, 9]);
        assert!(p
            .handle_message(&mut env, 4, Message::Forward(q))
            .is_empty());
        match &p.handle_timer(&mut env, Timer::ExecDone)[..] {
            [Action::Send {
                to: 1,
                msg:
                    Message::ScoreList {
                        list,
                        kind: ListKind::Backward,
                        ..
                    },
                ..
            }] => {
                assert_eq!(list.len(), 2)
            }
            other => panic!("{other:?}"),
        }
    }
}
