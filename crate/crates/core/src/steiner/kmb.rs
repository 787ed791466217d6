//! The KMB Steiner approximation and its geographically weighted variant.

use std::collections::{BTreeMap, BTreeSet};

use super::closure::metric_closure;
use super::paths::Heuristic;
use super::tree::{tree_cost, MulticastTree};
use super::{EdgeWeights, SteinerInstance};
use crate::error::Result;
use crate::topology::{LinkStatus, NodeId, Topology};

struct DisjointSet {
    parent: Vec<usize>,
}

impl DisjointSet {
    fn new(n: usize) -> Self {
        Self {
            parent: (0..n).collect(),
        }
    }

    fn find(&mut self, x: usize) -> usize {
        let mut root = x;
        while self.parent[root] != root {
            root = self.parent[root];
        }
        let mut cur = x;
        while self.parent[cur] != root {
            let next = self.parent[cur];
            self.parent[cur] = root;
            cur = next;
        }
        root
    }

    fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        self.parent[ra.max(rb)] = ra.min(rb);
        true
    }
}

/// Kruskal over `(weight, min id, max id)` ordering.
fn kruskal(n: usize, mut edges: Vec<(f64, NodeId, NodeId)>) -> Vec<(NodeId, NodeId)> {
    edges.sort_by(|x, y| x.0.total_cmp(&y.0).then(x.1.cmp(&y.1)).then(x.2.cmp(&y.2)));
    let mut dsu = DisjointSet::new(n);
    edges
        .into_iter()
        .filter(|&(_, a, b)| dsu.union(a.idx(), b.idx()))
        .map(|(_, a, b)| (a, b))
        .collect()
}

/// KMB with uniform-cost shortest paths.
pub fn kmb(instance: &SteinerInstance<'_>) -> Result<MulticastTree> {
    kmb_with(instance, Heuristic::Zero)
}

/// Closure, MST of the closure, witness expansion, MST of the expansion,
/// then pruning of non-terminal leaves.
pub fn kmb_with(instance: &SteinerInstance<'_>, heuristic: Heuristic<'_>) -> Result<MulticastTree> {
    let weights = instance.weights;
    let terminals = instance.terminal_set();
    let closure = metric_closure(weights, &terminals, heuristic)?;

    let closure_edges = closure.edges.iter().map(|e| (e.weight, e.u, e.v)).collect();
    let chosen: BTreeSet<(NodeId, NodeId)> = kruskal(weights.node_count(), closure_edges)
        .into_iter()
        .collect();

    let mut expanded: BTreeMap<(NodeId, NodeId), f64> = BTreeMap::new();
    for e in closure
        .edges
        .iter()
        .filter(|e| chosen.contains(&(e.u, e.v)))
    {
        for hop in e.path.windows(2) {
            let w = weights
                .get(hop[0], hop[1])
                .expect("witness paths use existing links");
            let key = (hop[0].min(hop[1]), hop[0].max(hop[1]));
            expanded
                .entry(key)
                .and_modify(|x| *x = x.min(w))
                .or_insert(w);
        }
    }
    let spanning = kruskal(
        weights.node_count(),
        expanded.into_iter().map(|((a, b), w)| (w, a, b)).collect(),
    );
    let tree = MulticastTree::from_edges(instance.source, &spanning)?;
    Ok(tree.prune(&terminals.into_iter().collect()))
}

#[derive(Debug, Clone, PartialEq)]
pub struct MkmbResult {
    pub tree: MulticastTree,
    /// Cost of `tree` under the original delay weights.
    pub delay_cost: f64,
    /// The composite weighting the tree was built under.
    pub geo_weights: EdgeWeights,
}

/// KMB under the composite geographic weights toward `dests`; the
/// resulting tree is costed under plain link delay.
pub fn mkmb(
    topology: &Topology,
    status: Option<&LinkStatus>,
    source: NodeId,
    dests: &[NodeId],
    a_coef: f64,
    b_coef: f64,
) -> Result<MkmbResult> {
    let geo_weights = EdgeWeights::geo_f(topology, status, dests, a_coef, b_coef)?;
    let instance = SteinerInstance::new(source, dests, &geo_weights)?;
    let tree = kmb(&instance)?;
    let delay = EdgeWeights::delay(topology, status);
    let delay_cost = tree_cost(&tree, &delay)?;
    Ok(MkmbResult {
        tree,
        delay_cost,
        geo_weights,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::steiner::{tree_cost, WeightKind};

    fn n(i: usize) -> NodeId {
        NodeId(i)
    }

    #[test]
    fn spanning_a_tree_graph_returns_it() {
        let edges = [
            (n(0), n(1), 2.0),
            (n(1), n(2), 1.0),
            (n(1), n(3), 4.0),
            (n(3), n(4), 1.0),
        ];
        let w = EdgeWeights::from_undirected(5, WeightKind::Delay, edges).unwrap();
        let terms = [n(1), n(2), n(3), n(4)];
        let t = kmb(&SteinerInstance::new(n(0), &terms, &w).unwrap()).unwrap();
        assert_eq!(t.len(), 5);
        assert_eq!(tree_cost(&t, &w).unwrap(), 8.0);
    }

    #[test]
    fn unit_triangle_costs_two() {
        let w = EdgeWeights::from_undirected(
            3,
            WeightKind::Delay,
            [(n(0), n(1), 1.0), (n(1), n(2), 1.0), (n(0), n(2), 1.0)],
        )
        .unwrap();
        let terms = [n(1), n(2)];
        let t = kmb(&SteinerInstance::new(n(0), &terms, &w).unwrap()).unwrap();
        assert_eq!(tree_cost(&t, &w).unwrap(), 2.0);
        // Tie-break prefers the (0,1) then (0,2) closure edges.
        assert_eq!(t.edges(), vec![(n(0), n(1)), (n(0), n(2))]);
    }

    #[test]
    fn non_terminal_leaves_are_pruned() {
        // Star centred on 1, source 0, terminal 2; leaf 3 must vanish.
        let w = EdgeWeights::from_undirected(
            4,
            WeightKind::Delay,
            [(n(0), n(1), 1.0), (n(1), n(2), 1.0), (n(1), n(3), 0.5)],
        )
        .unwrap();
        let terms = [n(2)];
        let t = kmb(&SteinerInstance::new(n(0), &terms, &w).unwrap()).unwrap();
        assert_eq!(t.members(), vec![n(0), n(1), n(2)]);
        assert!(t.leaves().iter().all(|l| terms.contains(l)));
    }
}
