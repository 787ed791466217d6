//! Geographic core-based tree: a core chosen by cumulative distance to the
//! group and a fixed shared shortest-path tree rooted at it.

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::steiner::{
    shortest_path, shortest_path_tree, tree_cost, EdgeWeights, Heuristic, MulticastTree, Path,
};
use crate::topology::{cumulative_distance, LinkStatus, NodeId, Topology};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CoreSelection {
    pub core: NodeId,
    pub shared_tree: MulticastTree,
    pub members: BTreeSet<NodeId>,
}

/// Wireless node with the smallest cumulative distance to `members`.
pub fn select_core(topology: &Topology, members: &BTreeSet<NodeId>) -> Result<NodeId> {
    let positions: Vec<_> = members.iter().map(|&m| topology.position(m)).collect();
    let mut best: Option<(f64, NodeId)> = None;
    for v in topology.wireless_nodes() {
        let cd = cumulative_distance(topology.position(v), &positions);
        if best.is_none_or(|(b, _)| cd < b) {
            best = Some((cd, v));
        }
    }
    best.map(|(_, v)| v).ok_or(Error::NoWirelessNodes)
}

/// Shortest-path tree from `core` restricted to the paths reaching `members`.
pub fn build_shared_tree(
    weights: &EdgeWeights,
    core: NodeId,
    members: &BTreeSet<NodeId>,
) -> Result<MulticastTree> {
    let spt = shortest_path_tree(weights, core)?;
    let mut parent = BTreeMap::new();
    for &m in members {
        let path = spt.path_to(m).ok_or(Error::MemberUnreachable(m))?;
        for hop in path.windows(2) {
            parent.insert(hop[1], hop[0]);
        }
    }
    MulticastTree::from_parent_map(core, parent)
}

/// Core plus shared tree over nominal delay weights.
pub fn select(topology: &Topology, members: &BTreeSet<NodeId>) -> Result<CoreSelection> {
    let core = select_core(topology, members)?;
    let weights = EdgeWeights::delay(topology, None);
    let shared_tree = build_shared_tree(&weights, core, members)?;
    Ok(CoreSelection {
        core,
        shared_tree,
        members: members.clone(),
    })
}

/// Per-member delay: direct shortest path source -> core, then the tree.
pub fn gcbt_deliver(
    weights: &EdgeWeights,
    source: NodeId,
    selection: &CoreSelection,
) -> Result<BTreeMap<NodeId, f64>> {
    let to_core = shortest_path(weights, source, selection.core, Heuristic::Zero)?;
    selection
        .members
        .iter()
        .map(|&m| {
            Ok((
                m,
                to_core.weight + selection.shared_tree.path_weight(m, weights)?,
            ))
        })
        .collect()
}

/// A complete GCBT evaluation against one link status snapshot. The routes
/// are fixed on the nominal topology; `delivered` lists the members whose
/// whole route happens to be up.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GcbtOutcome {
    pub selection: CoreSelection,
    pub source_path: Vec<NodeId>,
    pub delivery_delay: BTreeMap<NodeId, f64>,
    pub delivered: BTreeSet<NodeId>,
    pub cost: f64,
}

pub fn run_gcbt(
    topology: &Topology,
    source: NodeId,
    members: &BTreeSet<NodeId>,
    status: &LinkStatus,
) -> Result<GcbtOutcome> {
    let selection = select(topology, members)?;
    let weights = EdgeWeights::delay(topology, None);
    let Path {
        nodes: source_path,
        weight: source_weight,
    } = shortest_path(&weights, source, selection.core, Heuristic::Zero)?;
    let delivery_delay = gcbt_deliver(&weights, source, &selection)?;
    let cost = source_weight + tree_cost(&selection.shared_tree, &weights)?;

    let hop_up =
        |a: NodeId, b: NodeId| topology.link_between(a, b).is_some_and(|l| status.is_up(l));
    let source_up = source_path.windows(2).all(|h| hop_up(h[0], h[1]));
    let delivered = members
        .iter()
        .copied()
        .filter(|&m| {
            source_up
                && selection
                    .shared_tree
                    .path_from_root(m)
                    .is_some_and(|p| p.windows(2).all(|h| hop_up(h[0], h[1])))
        })
        .collect();
    Ok(GcbtOutcome {
        selection,
        source_path,
        delivery_delay,
        delivered,
        cost,
    })
}
