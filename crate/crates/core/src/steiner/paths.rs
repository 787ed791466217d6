//! A* shortest paths with deterministic tie-breaking.
//!
//! `shortest_path` searches backwards from the target so that, once the
//! source is settled, every node on a shortest path carries its exact
//! distance-to-target. The path is then read forwards choosing the lowest
//! admissible next hop, which yields the lexicographically smallest node
//! sequence among the fewest-hop shortest paths.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use super::{EdgeWeights, WeightKind};
use crate::error::{Error, Result};
use crate::topology::{distance, NodeId, Topology};

#[derive(Debug, Clone, Copy)]
pub enum Heuristic<'a> {
    /// Uniform-cost search; admissible for any weighting.
    Zero,
    /// Straight-line distance scaled by `min weight / max link length`.
    /// Only valid for delay weights.
    Euclidean(&'a Topology),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Path {
    pub nodes: Vec<NodeId>,
    pub weight: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
struct Label {
    g: f64,
    hops: u32,
}

impl Label {
    fn better_than(self, other: Option<Label>) -> bool {
        match other {
            None => true,
            Some(o) => self.g < o.g || (self.g == o.g && self.hops < o.hops),
        }
    }
}

#[derive(Debug, PartialEq)]
struct Entry {
    f: f64,
    hops: u32,
    node: NodeId,
}

impl Eq for Entry {}

impl Ord for Entry {
    fn cmp(&self, other: &Self) -> Ordering {
        // Reversed for a min-heap.
        other
            .f
            .total_cmp(&self.f)
            .then(other.hops.cmp(&self.hops))
            .then(other.node.cmp(&self.node))
    }
}

impl PartialOrd for Entry {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

fn tolerance(x: f64) -> f64 {
    1e-9 * x.abs().max(1.0)
}

fn heuristic_fn<'a>(
    weights: &EdgeWeights,
    heuristic: Heuristic<'a>,
    toward: NodeId,
) -> Result<Box<dyn Fn(NodeId) -> f64 + 'a>> {
    match heuristic {
        Heuristic::Zero => Ok(Box::new(|_| 0.0)),
        Heuristic::Euclidean(topology) => {
            if weights.kind() != WeightKind::Delay {
                return Err(Error::HeuristicUnsupported);
            }
            let mut min_w = f64::INFINITY;
            let mut max_len: f64 = 0.0;
            for u in 0..weights.node_count() {
                for &(v, w) in weights.out(NodeId(u)) {
                    min_w = min_w.min(w);
                    max_len =
                        max_len.max(distance(topology.position(NodeId(u)), topology.position(v)));
                }
            }
            let scale = if max_len > 0.0 && min_w.is_finite() {
                min_w / max_len
            } else {
                0.0
            };
            let target = topology.position(toward);
            Ok(Box::new(move |v| {
                distance(topology.position(v), target) * scale
            }))
        }
    }
}

/// Minimum-weight path from `from` to `to`.
pub fn shortest_path(
    weights: &EdgeWeights,
    from: NodeId,
    to: NodeId,
    heuristic: Heuristic<'_>,
) -> Result<Path> {
    let n = weights.node_count();
    for id in [from, to] {
        if id.idx() >= n {
            return Err(Error::UnknownNode(id));
        }
    }
    if from == to {
        return Ok(Path {
            nodes: vec![from],
            weight: 0.0,
        });
    }
    let h = heuristic_fn(weights, heuristic, from)?;

    let mut labels: Vec<Option<Label>> = vec![None; n];
    labels[to.idx()] = Some(Label { g: 0.0, hops: 0 });
    let mut heap = BinaryHeap::from([Entry {
        f: h(to),
        hops: 0,
        node: to,
    }]);
    let mut settled_source: Option<f64> = None;
    while let Some(Entry { f, hops, node }) = heap.pop() {
        let label = labels[node.idx()].expect("queued nodes are labelled");
        if label.hops != hops || label.g + h(node) != f {
            continue;
        }
        if let Some(d) = settled_source {
            if f > d + tolerance(d) {
                break;
            }
        }
        if node == from && settled_source.is_none() {
            settled_source = Some(label.g);
        }
        for &(v, w) in weights.inc(node) {
            let cand = Label {
                g: label.g + w,
                hops: label.hops + 1,
            };
            if cand.better_than(labels[v.idx()]) {
                labels[v.idx()] = Some(cand);
                heap.push(Entry {
                    f: cand.g + h(v),
                    hops: cand.hops,
                    node: v,
                });
            }
        }
    }
    let Some(start) = labels[from.idx()] else {
        return Err(Error::NoPath { from, to });
    };

    let mut nodes = vec![from];
    let mut cur = from;
    let mut cur_label = start;
    let mut weight = 0.0;
    while cur != to {
        let (next, w, next_label) = weights
            .out(cur)
            .iter()
            .find_map(|&(v, w)| {
                let l = labels[v.idx()]?;
                (l.hops + 1 == cur_label.hops
                    && (l.g + w - cur_label.g).abs() <= tolerance(cur_label.g))
                .then_some((v, w, l))
            })
            .expect("a settled node always has a successor on a shortest path");
        nodes.push(next);
        weight += w;
        cur = next;
        cur_label = next_label;
    }
    Ok(Path { nodes, weight })
}

/// Single-source shortest-path distances and a parent tree.
#[derive(Debug, Clone, PartialEq)]
pub struct ShortestPathTree {
    pub source: NodeId,
    pub dist: Vec<Option<f64>>,
    /// Lowest-id predecessor among tied fewest-hop shortest paths.
    pub parent: Vec<Option<NodeId>>,
}

impl ShortestPathTree {
    pub fn path_to(&self, v: NodeId) -> Option<Vec<NodeId>> {
        self.dist[v.idx()]?;
        let mut path = vec![v];
        let mut cur = v;
        while let Some(p) = self.parent[cur.idx()] {
            path.push(p);
            cur = p;
        }
        path.reverse();
        Some(path)
    }
}

/// Forward Dijkstra from `source` over every reachable node.
pub fn shortest_path_tree(weights: &EdgeWeights, source: NodeId) -> Result<ShortestPathTree> {
    let n = weights.node_count();
    if source.idx() >= n {
        return Err(Error::UnknownNode(source));
    }
    let mut labels: Vec<Option<Label>> = vec![None; n];
    labels[source.idx()] = Some(Label { g: 0.0, hops: 0 });
    let mut heap = BinaryHeap::from([Entry {
        f: 0.0,
        hops: 0,
        node: source,
    }]);
    while let Some(Entry { f, hops, node }) = heap.pop() {
        let label = labels[node.idx()].expect("labelled");
        if label.hops != hops || label.g != f {
            continue;
        }
        for &(v, w) in weights.out(node) {
            let cand = Label {
                g: label.g + w,
                hops: label.hops + 1,
            };
            if cand.better_than(labels[v.idx()]) {
                labels[v.idx()] = Some(cand);
                heap.push(Entry {
                    f: cand.g,
                    hops: cand.hops,
                    node: v,
                });
            }
        }
    }
    let parent = (0..n)
        .map(|v| {
            let l = labels[v]?;
            if l.hops == 0 {
                return None;
            }
            weights.inc(NodeId(v)).iter().find_map(|&(u, w)| {
                let lu = labels[u.idx()]?;
                (lu.hops + 1 == l.hops && (lu.g + w - l.g).abs() <= tolerance(l.g)).then_some(u)
            })
        })
        .collect();
    Ok(ShortestPathTree {
        source,
        dist: labels.iter().map(|l| l.map(|l| l.g)).collect(),
        parent,
    })
}
