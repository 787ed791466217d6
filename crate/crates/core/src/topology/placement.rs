//! Minimum wireless-router placement under a PLC hop bound: choose the
//! fewest locations such that every node is within `k` hops of a chosen
//! router, then assign each node to one router.

use std::collections::{BTreeMap, VecDeque};

use serde::{Deserialize, Serialize};

use super::NodeId;
use crate::error::{Error, Result};

/// Largest node count the exact solver accepts (cover sets are `u128`).
pub const EXACT_PLACEMENT_MAX_NODES: usize = 128;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PlacementMode {
    Exact,
    Greedy,
}

/// Unweighted undirected graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HopGraph {
    adjacency: Vec<Vec<NodeId>>,
}

impl HopGraph {
    pub fn new(mut adjacency: Vec<Vec<NodeId>>) -> Self {
        for adj in adjacency.iter_mut() {
            adj.sort();
            adj.dedup();
        }
        Self { adjacency }
    }

    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Self {
        let mut adjacency = vec![Vec::new(); n];
        for &(a, b) in edges {
            adjacency[a].push(NodeId(b));
            adjacency[b].push(NodeId(a));
        }
        Self::new(adjacency)
    }

    pub fn len(&self) -> usize {
        self.adjacency.len()
    }

    pub fn is_empty(&self) -> bool {
        self.adjacency.is_empty()
    }

    pub fn neighbors(&self, v: NodeId) -> &[NodeId] {
        &self.adjacency[v.idx()]
    }

    /// Hop distances from `src`, `None` where unreachable.
    pub fn hops_from(&self, src: NodeId) -> Vec<Option<u32>> {
        let mut dist = vec![None; self.len()];
        dist[src.idx()] = Some(0);
        let mut queue = VecDeque::from([src]);
        while let Some(u) = queue.pop_front() {
            let du = dist[u.idx()].unwrap();
            for &v in self.neighbors(u) {
                if dist[v.idx()].is_none() {
                    dist[v.idx()] = Some(du + 1);
                    queue.push_back(v);
                }
            }
        }
        dist
    }

    /// Nodes within `k` hops of `src` (including `src`), ascending.
    pub fn within(&self, src: NodeId, k: u32) -> Vec<NodeId> {
        self.hops_from(src)
            .iter()
            .enumerate()
            .filter(|(_, d)| matches!(d, Some(d) if *d <= k))
            .map(|(i, _)| NodeId(i))
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PlacementSolution {
    /// Locations that receive a router, ascending.
    pub selected_routers: Vec<NodeId>,
    /// Every node mapped to its hop-nearest selected router.
    pub assignment: BTreeMap<NodeId, NodeId>,
    pub hop_bound: u32,
    /// Number of candidate locations considered.
    pub location_count: usize,
}

/// Solves the placement with every node as a candidate location.
pub fn solve_placement(graph: &HopGraph, k: u32, mode: PlacementMode) -> Result<PlacementSolution> {
    let locations: Vec<NodeId> = (0..graph.len()).map(NodeId).collect();
    solve_placement_at(graph, &locations, k, mode)
}

/// Solves the placement restricted to `locations`.
pub fn solve_placement_at(
    graph: &HopGraph,
    locations: &[NodeId],
    k: u32,
    mode: PlacementMode,
) -> Result<PlacementSolution> {
    let n = graph.len();
    let mut locations = locations.to_vec();
    locations.sort();
    locations.dedup();
    let covers: Vec<Vec<NodeId>> = locations.iter().map(|&r| graph.within(r, k)).collect();

    let mut covered = vec![false; n];
    for c in &covers {
        for v in c {
            covered[v.idx()] = true;
        }
    }
    if let Some(v) = covered.iter().position(|c| !c) {
        return Err(Error::PlacementInfeasible(NodeId(v)));
    }

    let chosen = match mode {
        PlacementMode::Greedy => greedy_cover(n, &covers),
        PlacementMode::Exact => {
            if n > EXACT_PLACEMENT_MAX_NODES {
                return Err(Error::PlacementTooLarge {
                    max: EXACT_PLACEMENT_MAX_NODES,
                    got: n,
                });
            }
            exact_cover(n, &covers)
        }
    };
    let mut selected_routers: Vec<NodeId> = chosen.into_iter().map(|i| locations[i]).collect();
    selected_routers.sort();

    let mut best: Vec<Option<(u32, NodeId)>> = vec![None; n];
    for &r in &selected_routers {
        for (v, d) in graph.hops_from(r).into_iter().enumerate() {
            if let Some(d) = d {
                // Routers are visited in ascending id, so strict `<` keeps the lowest id on ties.
                if best[v].is_none_or(|(bd, _)| d < bd) {
                    best[v] = Some((d, r));
                }
            }
        }
    }
    let assignment = best
        .into_iter()
        .enumerate()
        .map(|(v, b)| {
            let (d, r) = b.expect("cover is feasible");
            debug_assert!(d <= k);
            (NodeId(v), r)
        })
        .collect();

    Ok(PlacementSolution {
        selected_routers,
        assignment,
        hop_bound: k,
        location_count: locations.len(),
    })
}

/// Classic greedy set cover; ties go to the lowest location index.
fn greedy_cover(n: usize, covers: &[Vec<NodeId>]) -> Vec<usize> {
    let mut uncovered = vec![true; n];
    let mut remaining = n;
    let mut chosen = Vec::new();
    while remaining > 0 {
        let (best, gain) = covers
            .iter()
            .enumerate()
            .map(|(i, c)| (i, c.iter().filter(|v| uncovered[v.idx()]).count()))
            .fold(
                (usize::MAX, 0),
                |acc, (i, g)| if g > acc.1 { (i, g) } else { acc },
            );
        debug_assert!(gain > 0);
        for v in &covers[best] {
            if uncovered[v.idx()] {
                uncovered[v.idx()] = false;
                remaining -= 1;
            }
        }
        chosen.push(best);
    }
    chosen
}

/// Branch and bound over the most constrained uncovered node.
fn exact_cover(n: usize, covers: &[Vec<NodeId>]) -> Vec<usize> {
    let masks: Vec<u128> = covers
        .iter()
        .map(|c| c.iter().fold(0u128, |m, v| m | (1u128 << v.idx())))
        .collect();
    let mut covering: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (i, c) in covers.iter().enumerate() {
        for v in c {
            covering[v.idx()].push(i);
        }
    }
    let full: u128 = if n == 128 {
        u128::MAX
    } else {
        (1u128 << n) - 1
    };

    struct Search<'a> {
        masks: &'a [u128],
        covering: &'a [Vec<usize>],
        best: Vec<usize>,
        chosen: Vec<usize>,
    }

    impl Search<'_> {
        fn run(&mut self, uncovered: u128) {
            if uncovered == 0 {
                if self.chosen.len() < self.best.len() {
                    self.best = self.chosen.clone();
                }
                return;
            }
            let left = uncovered.count_ones() as usize;
            let max_gain = self
                .masks
                .iter()
                .map(|m| (m & uncovered).count_ones() as usize)
                .max()
                .unwrap_or(0);
            if max_gain == 0 {
                return;
            }
            let bound = self.chosen.len() + left.div_ceil(max_gain);
            if bound >= self.best.len() {
                return;
            }
            let element = (0..128)
                .filter(|&v| uncovered & (1u128 << v) != 0)
                .min_by_key(|&v| (self.covering[v].len(), v))
                .expect("uncovered is nonempty");
            let mut options = self.covering[element].clone();
            options.sort_by_key(|&r| {
                (
                    std::cmp::Reverse((self.masks[r] & uncovered).count_ones()),
                    r,
                )
            });
            for r in options {
                self.chosen.push(r);
                self.run(uncovered & !self.masks[r]);
                self.chosen.pop();
            }
        }
    }

    // The greedy cover seeds the incumbent; the search only replaces it
    // with strictly smaller covers.
    let mut search = Search {
        masks: &masks,
        covering: &covering,
        best: greedy_cover(n, covers),
        chosen: Vec::new(),
    };
    search.run(full);
    search.best
}

#[cfg(test)]
mod tests {
    use super::*;

    fn path(n: usize) -> HopGraph {
        let edges: Vec<_> = (0..n - 1).map(|i| (i, i + 1)).collect();
        HopGraph::from_edges(n, &edges)
    }

    #[test]
    fn single_node_covers_itself() {
        let g = HopGraph::new(vec![vec![]]);
        let s = solve_placement(&g, 1, PlacementMode::Exact).unwrap();
        assert_eq!(s.selected_routers, vec![NodeId(0)]);
        assert_eq!(s.assignment[&NodeId(0)], NodeId(0));
    }

    #[test]
    fn path_of_five_needs_two_routers() {
        let s = solve_placement(&path(5), 1, PlacementMode::Exact).unwrap();
        assert_eq!(s.selected_routers.len(), 2);
        for (v, r) in &s.assignment {
            assert!(v.idx().abs_diff(r.idx()) <= 1);
        }
    }

    #[test]
    fn star_hub_covers_everything() {
        let g = HopGraph::from_edges(5, &[(0, 1), (0, 2), (0, 3), (0, 4)]);
        let s = solve_placement(&g, 1, PlacementMode::Exact).unwrap();
        assert_eq!(s.selected_routers, vec![NodeId(0)]);
        let s = solve_placement(&g, 1, PlacementMode::Greedy).unwrap();
        assert_eq!(s.selected_routers, vec![NodeId(0)]);
    }

    #[test]
    fn infeasible_when_locations_are_too_far() {
        let g = path(5);
        let err = solve_placement_at(&g, &[NodeId(0)], 2, PlacementMode::Greedy).unwrap_err();
        assert_eq!(err, Error::PlacementInfeasible(NodeId(3)));
    }

    #[test]
    fn assignment_prefers_lowest_router_on_ties() {
        let g = path(3);
        let s = solve_placement_at(&g, &[NodeId(0), NodeId(2)], 1, PlacementMode::Greedy).unwrap();
        assert_eq!(s.selected_routers, vec![NodeId(0), NodeId(2)]);
        assert_eq!(s.assignment[&NodeId(1)], NodeId(0));
    }

    #[test]
    fn spider_needs_one_router_per_leg() {
        let g = HopGraph::from_edges(7, &[(0, 1), (1, 2), (0, 3), (3, 4), (0, 5), (5, 6)]);
        let exact = solve_placement(&g, 1, PlacementMode::Exact).unwrap();
        let greedy = solve_placement(&g, 1, PlacementMode::Greedy).unwrap();
        assert_eq!(exact.selected_routers.len(), 3);
        assert!(greedy.selected_routers.len() >= exact.selected_routers.len());
        let two_hops = solve_placement(&g, 2, PlacementMode::Exact).unwrap();
        assert_eq!(two_hops.selected_routers, vec![NodeId(0)]);
    }
}
