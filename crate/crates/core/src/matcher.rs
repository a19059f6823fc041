//! Order-divisibility matchings between a group and the cyclic group of the
//! same order.
//!
//! We look for a bijection `f: G -> C_n` with `o(x) | o(f(x))`. Only the
//! number of elements per order matters, so the search is a transportation
//! problem: order class `d` supplies `A(d)` elements, the slot class of
//! order `e` in `C_n` holds `phi(e)` elements, and `d` may feed `e` iff
//! `d | e`. A maximum flow saturating every supply gives the bijection; a
//! saturated minimum cut gives a Hall-condition violation.

use std::collections::{BTreeMap, VecDeque};

use serde::{Deserialize, Serialize};

use crate::numtheory::{divisors, totient};
use crate::stats::OrderProfile;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MatchStatus {
    Found,
    Violated,
}

/// A set of element orders whose elements cannot all be placed.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HallViolation {
    pub orders: Vec<u64>,
    /// Number of elements whose order lies in `orders`.
    pub demand: u64,
    /// Slot orders divisible by some member of `orders`.
    pub slots: Vec<u64>,
    /// Number of elements of `C_n` in those slots.
    pub capacity: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DivisibilityMatching {
    pub status: MatchStatus,
    /// `assignment[d][e]` elements of order `d` are sent to elements of order
    /// `e` in `C_n`.
    pub assignment: BTreeMap<u64, BTreeMap<u64, u64>>,
    pub violator: Option<HallViolation>,
}

struct FlowNetwork {
    cap: Vec<Vec<u64>>,
}

impl FlowNetwork {
    fn new(nodes: usize) -> Self {
        FlowNetwork { cap: vec![vec![0; nodes]; nodes] }
    }

    /// Edmonds-Karp. Leaves residual capacities in `self.cap`.
    fn max_flow(&mut self, source: usize, sink: usize) -> u64 {
        let n = self.cap.len();
        let mut total = 0;
        loop {
            let mut prev = vec![usize::MAX; n];
            prev[source] = source;
            let mut queue = VecDeque::from([source]);
            while let Some(v) = queue.pop_front() {
                if v == sink {
                    break;
                }
                for w in 0..n {
                    if prev[w] == usize::MAX && self.cap[v][w] > 0 {
                        prev[w] = v;
                        queue.push_back(w);
                    }
                }
            }
            if prev[sink] == usize::MAX {
                return total;
            }
            let mut bottleneck = u64::MAX;
            let mut w = sink;
            while w != source {
                let v = prev[w];
                bottleneck = bottleneck.min(self.cap[v][w]);
                w = v;
            }
            let mut w = sink;
            while w != source {
                let v = prev[w];
                self.cap[v][w] -= bottleneck;
                self.cap[w][v] += bottleneck;
                w = v;
            }
            total += bottleneck;
        }
    }

    fn reachable_from(&self, source: usize) -> Vec<bool> {
        let n = self.cap.len();
        let mut seen = vec![false; n];
        seen[source] = true;
        let mut queue = VecDeque::from([source]);
        while let Some(v) = queue.pop_front() {
            for w in 0..n {
                if !seen[w] && self.cap[v][w] > 0 {
                    seen[w] = true;
                    queue.push_back(w);
                }
            }
        }
        seen
    }
}

fn neighbourhood(orders: &[u64], slots: &[u64]) -> Vec<u64> {
    slots.iter().copied().filter(|e| orders.iter().any(|d| e % d == 0)).collect()
}

fn deficiency(p: &OrderProfile, orders: &[u64], slots: &[u64]) -> (u64, Vec<u64>, u64) {
    let demand = orders.iter().map(|&d| p.count(d)).sum();
    let reach = neighbourhood(orders, slots);
    let capacity = reach.iter().map(|&e| totient(e).expect("positive")).sum();
    (demand, reach, capacity)
}

pub fn find_divisibility_matching(p: &OrderProfile) -> DivisibilityMatching {
    let n = p.group_order();
    let supplies: Vec<(u64, u64)> = p.counts().iter().map(|(&d, &a)| (d, a)).collect();
    let slots: Vec<u64> = divisors(n).expect("group order is positive");
    let source = 0;
    let sink = 1;
    let supply_node = |i: usize| 2 + i;
    let slot_node = |j: usize| 2 + supplies.len() + j;
    let mut net = FlowNetwork::new(2 + supplies.len() + slots.len());
    for (i, &(d, a)) in supplies.iter().enumerate() {
        net.cap[source][supply_node(i)] = a;
        for (j, &e) in slots.iter().enumerate() {
            if e % d == 0 {
                net.cap[supply_node(i)][slot_node(j)] = a;
            }
        }
    }
    for (j, &e) in slots.iter().enumerate() {
        net.cap[slot_node(j)][sink] = totient(e).expect("positive");
    }
    let original = net.cap.clone();
    let flow = net.max_flow(source, sink);

    let mut assignment: BTreeMap<u64, BTreeMap<u64, u64>> = BTreeMap::new();
    for (i, &(d, _)) in supplies.iter().enumerate() {
        let row = assignment.entry(d).or_default();
        for (j, &e) in slots.iter().enumerate() {
            let (u, v) = (supply_node(i), slot_node(j));
            if original[u][v] > 0 {
                let used = original[u][v] - net.cap[u][v];
                if used > 0 {
                    row.insert(e, used);
                }
            }
        }
    }

    if flow == n {
        return DivisibilityMatching { status: MatchStatus::Found, assignment, violator: None };
    }

    // Supplies on the source side of the minimum cut form a deficient set;
    // shrink it greedily to an inclusion-minimal one.
    let reach = net.reachable_from(source);
    let mut orders: Vec<u64> = supplies
        .iter()
        .enumerate()
        .filter(|(i, _)| reach[supply_node(*i)])
        .map(|(_, &(d, _))| d)
        .collect();
    let mut k = 0;
    while k < orders.len() {
        let mut trial = orders.clone();
        trial.remove(k);
        let (demand, _, capacity) = deficiency(p, &trial, &slots);
        if demand > capacity {
            orders = trial;
        } else {
            k += 1;
        }
    }
    let (demand, reach_slots, capacity) = deficiency(p, &orders, &slots);
    debug_assert!(demand > capacity);
    DivisibilityMatching {
        status: MatchStatus::Violated,
        assignment,
        violator: Some(HallViolation { orders, demand, slots: reach_slots, capacity }),
    }
}

/// Re-checks a claimed matching from scratch: supplies exhausted, slot
/// capacities met exactly, and only divisibility edges used.
pub fn verify_matching(p: &OrderProfile, m: &DivisibilityMatching) -> bool {
    if m.status != MatchStatus::Found {
        return false;
    }
    let n = p.group_order();
    let mut filled: BTreeMap<u64, u64> = BTreeMap::new();
    for (&d, row) in &m.assignment {
        let mut sent = 0u64;
        for (&e, &c) in row {
            if c == 0 {
                continue;
            }
            if d == 0 || e == 0 || e % d != 0 || n % e != 0 {
                return false;
            }
            sent += c;
            *filled.entry(e).or_insert(0) += c;
        }
        if sent != p.count(d) {
            return false;
        }
    }
    for (&d, &a) in p.counts() {
        if a > 0 && !m.assignment.contains_key(&d) {
            return false;
        }
    }
    let Ok(slots) = divisors(n) else { return false };
    if filled.keys().any(|e| !slots.contains(e)) {
        return false;
    }
    slots
        .iter()
        .all(|&e| filled.get(&e).copied().unwrap_or(0) == totient(e).expect("positive"))
}

/// Checks that a reported violator really is deficient.
pub fn verify_hall_violation(p: &OrderProfile, v: &HallViolation) -> bool {
    let Ok(slots) = divisors(p.group_order()) else { return false };
    let (demand, reach, capacity) = deficiency(p, &v.orders, &slots);
    demand == v.demand && capacity == v.capacity && reach == v.slots && demand > capacity
}
