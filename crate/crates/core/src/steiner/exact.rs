//! Exact minimum Steiner arborescence by dynamic programming over terminal
//! subsets.

use std::cmp::Ordering;
use std::collections::{BTreeSet, BinaryHeap};

use super::tree::MulticastTree;
use super::SteinerInstance;
use crate::error::{Error, Result};
use crate::topology::NodeId;

/// Largest `|{source} ∪ terminals|` accepted by [`exact_steiner`].
pub const EXACT_MAX_TERMINALS: usize = 12;

#[derive(Debug, Clone, Copy, PartialEq)]
enum Back {
    None,
    Base,
    Merge(usize),
    Edge(NodeId),
}

#[derive(PartialEq)]
struct Item(f64, NodeId);

impl Eq for Item {}

impl Ord for Item {
    fn cmp(&self, other: &Self) -> Ordering {
        other.0.total_cmp(&self.0).then(other.1.cmp(&self.1))
    }
}

impl PartialOrd for Item {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Minimum-cost tree rooted at the source that reaches every terminal.
/// Edges are costed in the `parent -> child` direction.
pub fn exact_steiner(instance: &SteinerInstance<'_>) -> Result<MulticastTree> {
    let terms = instance.terminals;
    let total = terms.len() + 1;
    if total > EXACT_MAX_TERMINALS {
        return Err(Error::InstanceTooLarge {
            terminals: total,
            max: EXACT_MAX_TERMINALS,
        });
    }
    let w = instance.weights;
    let n = w.node_count();
    let full = (1usize << terms.len()) - 1;
    let mut cost = vec![vec![f64::INFINITY; n]; full + 1];
    let mut back = vec![vec![Back::None; n]; full + 1];

    for mask in 1..=full {
        if mask.is_power_of_two() {
            let t = terms[mask.trailing_zeros() as usize];
            cost[mask][t.idx()] = 0.0;
            back[mask][t.idx()] = Back::Base;
        } else {
            for v in 0..n {
                let mut sub = (mask - 1) & mask;
                while sub > 0 {
                    // Visit each unordered split once.
                    if sub < (mask ^ sub) {
                        let c = cost[sub][v] + cost[mask ^ sub][v];
                        if c < cost[mask][v] {
                            cost[mask][v] = c;
                            back[mask][v] = Back::Merge(sub);
                        }
                    }
                    sub = (sub - 1) & mask;
                }
            }
        }
        // Pull subtrees rooted at v up through incoming links u -> v.
        let mut heap: BinaryHeap<Item> = (0..n)
            .filter(|&v| cost[mask][v].is_finite())
            .map(|v| Item(cost[mask][v], NodeId(v)))
            .collect();
        while let Some(Item(c, v)) = heap.pop() {
            if c > cost[mask][v.idx()] {
                continue;
            }
            for &(u, wt) in w.inc(v) {
                let nc = c + wt;
                if nc < cost[mask][u.idx()] {
                    cost[mask][u.idx()] = nc;
                    back[mask][u.idx()] = Back::Edge(v);
                    heap.push(Item(nc, u));
                }
            }
        }
    }

    if !cost[full][instance.source.idx()].is_finite() {
        return Err(Error::DisconnectedTerminals);
    }
    let mut edges = Vec::new();
    let mut stack = vec![(full, instance.source)];
    while let Some((mask, v)) = stack.pop() {
        match back[mask][v.idx()] {
            Back::Base => {}
            Back::Merge(sub) => {
                stack.push((sub, v));
                stack.push((mask ^ sub, v));
            }
            Back::Edge(child) => {
                edges.push((v, child));
                stack.push((mask, child));
            }
            Back::None => return Err(Error::CorruptTree("missing back-pointer".into())),
        }
    }
    edges.sort();
    edges.dedup();
    let keep: BTreeSet<NodeId> = terms.iter().copied().collect();
    Ok(MulticastTree::from_directed_edges(instance.source, &edges).prune(&keep))
}
