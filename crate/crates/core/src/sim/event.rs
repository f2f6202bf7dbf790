use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::time::Duration;

use crate::metrics::Counters;
use crate::protocol::{Message, Timer};
use crate::PeerId;

#[derive(Debug, Clone)]
pub(crate) enum Payload {
    Deliver {
        from: PeerId,
        msg: Message,
    },
    Timer(Timer),
    /// The connection to this overlay neighbour dropped.
    NeighborLeft(PeerId),
}

#[derive(Debug, Clone)]
pub(crate) struct Event {
    pub time: Duration,
    pub seq: u64,
    pub target: PeerId,
    pub payload: Payload,
}

impl PartialEq for Event {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}
impl Eq for Event {}
impl PartialOrd for Event {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Event {
    // Reversed: the heap pops the earliest (time, seq) first.
    fn cmp(&self, other: &Self) -> Ordering {
        other.time.cmp(&self.time).then(other.seq.cmp(&self.seq))
    }
}

/// Pending events in `(time, sequence)` order. Sequence numbers are handed
/// out at insertion, so simultaneous events fire in scheduling order.
#[derive(Debug, Default)]
pub(crate) struct EventQueue {
    heap: BinaryHeap<Event>,
    next_seq: u64,
}

impl EventQueue {
    pub fn push(&mut self, time: Duration, target: PeerId, payload: Payload) {
        let seq = self.next_seq;
        self.next_seq += 1;
        self.heap.push(Event {
            time,
            seq,
            target,
            payload,
        });
    }

    pub fn pop(&mut self) -> Option<Event> {
        self.heap.pop()
    }
}

pub(crate) fn timer_kind(t: Timer) -> &'static str {
    match t {
        Timer::Flush => "TIMER-FLUSH",
        Timer::ExecDone => "TIMER-EXEC",
        Timer::WaitExpired => "TIMER-WAIT",
    }
}

/// Recomputes the traffic counters from an event trace
/// (`time  seq  target  kind  bytes`, tab-separated).
pub fn replay_counters(trace: &str) -> Result<Counters, String> {
    let mut c = Counters::default();
    for (i, line) in trace.lines().enumerate() {
        if line.is_empty() {
            continue;
        }
        let f: Vec<&str> = line.split('\t').collect();
        if f.len() != 5 {
            return Err(format!("line {}: expected 5 fields", i + 1));
        }
        let bytes: u64 = f[4]
            .parse()
            .map_err(|_| format!("line {}: bad byte count", i + 1))?;
        c.record_kind(f[3], bytes);
    }
    Ok(c)
}
