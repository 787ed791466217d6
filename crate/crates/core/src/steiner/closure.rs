use super::paths::{shortest_path, Heuristic};
use super::EdgeWeights;
use crate::error::{Error, Result};
use crate::topology::NodeId;

/// Closure edge between `u < v`. `path` runs from `path[0]` to the other
/// endpoint in the direction whose weight was taken.
#[derive(Debug, Clone, PartialEq)]
pub struct ClosureEdge {
    pub u: NodeId,
    pub v: NodeId,
    pub weight: f64,
    pub path: Vec<NodeId>,
}

/// Complete graph over a node set, weighted by shortest-path distance.
#[derive(Debug, Clone, PartialEq)]
pub struct MetricClosure {
    pub nodes: Vec<NodeId>,
    pub edges: Vec<ClosureEdge>,
}

impl MetricClosure {
    pub fn weight(&self, a: NodeId, b: NodeId) -> Option<f64> {
        let (u, v) = (a.min(b), a.max(b));
        self.edges
            .iter()
            .find(|e| e.u == u && e.v == v)
            .map(|e| e.weight)
    }
}

/// Pairwise shortest paths over `s_set`. For asymmetric weights each pair
/// takes the cheaper orientation (ties to `u -> v`).
pub fn metric_closure(
    weights: &EdgeWeights,
    s_set: &[NodeId],
    heuristic: Heuristic<'_>,
) -> Result<MetricClosure> {
    let mut nodes = s_set.to_vec();
    nodes.sort();
    nodes.dedup();
    if nodes.len() < 2 {
        return Err(Error::InvalidInstance(
            "closure needs at least two nodes".into(),
        ));
    }
    let symmetric = weights.is_symmetric();
    let mut edges = Vec::with_capacity(nodes.len() * (nodes.len() - 1) / 2);
    for (i, &u) in nodes.iter().enumerate() {
        for &v in &nodes[i + 1..] {
            let forward = shortest_path(weights, u, v, heuristic);
            let backward = if symmetric {
                None
            } else {
                Some(shortest_path(weights, v, u, heuristic))
            };
            let best = match (forward, backward) {
                (Ok(f), Some(Ok(b))) => {
                    if b.weight < f.weight {
                        b
                    } else {
                        f
                    }
                }
                (Ok(f), _) => f,
                (Err(_), Some(Ok(b))) => b,
                (Err(Error::NoPath { .. }), _) => return Err(Error::DisconnectedTerminals),
                (Err(e), _) => return Err(e),
            };
            edges.push(ClosureEdge {
                u,
                v,
                weight: best.weight,
                path: best.nodes,
            });
        }
    }
    Ok(MetricClosure { nodes, edges })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::steiner::WeightKind;
    use proptest::prelude::*;

    fn n(i: usize) -> NodeId {
        NodeId(i)
    }

    #[test]
    fn path_graph_closure() {
        let w = EdgeWeights::from_undirected(
            3,
            WeightKind::Delay,
            [(n(0), n(1), 1.0), (n(1), n(2), 1.0)],
        )
        .unwrap();
        let c = metric_closure(&w, &[n(0), n(2)], Heuristic::Zero).unwrap();
        assert_eq!(c.edges.len(), 1);
        assert_eq!(c.edges[0].weight, 2.0);
        assert_eq!(c.edges[0].path, vec![n(0), n(1), n(2)]);
    }

    #[test]
    fn disconnected_pair_is_an_error() {
        let w = EdgeWeights::from_undirected(3, WeightKind::Delay, [(n(0), n(1), 1.0)]).unwrap();
        assert_eq!(
            metric_closure(&w, &[n(0), n(2)], Heuristic::Zero),
            Err(Error::DisconnectedTerminals)
        );
    }

    #[test]
    fn asymmetric_takes_cheaper_direction() {
        let w =
            EdgeWeights::from_directed(2, WeightKind::GeoF, [(n(0), n(1), 4.0), (n(1), n(0), 1.5)])
                .unwrap();
        let c = metric_closure(&w, &[n(0), n(1)], Heuristic::Zero).unwrap();
        assert_eq!(c.edges[0].weight, 1.5);
        assert_eq!(c.edges[0].path, vec![n(1), n(0)]);
    }

    proptest! {
        #[test]
        fn closure_satisfies_triangle_inequality(
            raw in proptest::collection::vec((0usize..8, 0usize..8, 0.1f64..10.0), 8..24),
        ) {
            let mut seen = std::collections::BTreeSet::new();
            let mut edges: Vec<_> = (0..7).map(|i| (n(i), n(i + 1), 5.0)).collect();
            for &(a, b, _) in &edges { seen.insert((a, b)); }
            for (a, b, w) in raw {
                if a != b && seen.insert((n(a.min(b)), n(a.max(b)))) {
                    edges.push((n(a.min(b)), n(a.max(b)), w));
                }
            }
            let w = EdgeWeights::from_undirected(8, WeightKind::Delay, edges).unwrap();
            let all: Vec<_> = (0..8).map(n).collect();
            let c = metric_closure(&w, &all, Heuristic::Zero).unwrap();
            for &a in &all { for &b in &all { for &x in &all {
                if a != b && b != x && a != x {
                    let ab = c.weight(a, b).unwrap();
                    prop_assert!(ab <= c.weight(a, x).unwrap() + c.weight(x, b).unwrap() + 1e-9);
                }
            }}}
        }
    }
}
