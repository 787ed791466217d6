//! Evaluation metrics over plans and trees.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::multihop::MulticastPlan;
use crate::steiner::{tree_cost, EdgeWeights};
use crate::topology::{NodeId, NodeKind, Topology};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ScenarioMetrics {
    pub tree_cost: f64,
    pub end_to_end_delay: f64,
    pub avg_reliability: f64,
    pub coverage_fraction: f64,
    pub candidate_count: usize,
    pub full_coverage_count: usize,
}

/// Distribution tree cost plus every area tree's cost. A link used by two
/// area trees is paid by each of them.
pub fn plan_cost(plan: &MulticastPlan, weights: &EdgeWeights) -> Result<f64> {
    let mut total = tree_cost(&plan.distribution_tree, weights)?;
    for tree in plan.area_trees.values() {
        total += tree_cost(tree, weights)?;
    }
    Ok(total)
}

/// Latest arrival over the delivered nodes.
pub fn end_to_end_delay(delivery: &BTreeMap<NodeId, f64>) -> Result<f64> {
    delivery
        .values()
        .copied()
        .max_by(f64::total_cmp)
        .ok_or(Error::NothingDelivered)
}

/// Mean reliability of the selected candidates.
pub fn avg_reliability(plan: &MulticastPlan, topology: &Topology) -> Result<f64> {
    mean_reliability(topology, &plan.selected)
}

pub fn mean_reliability(topology: &Topology, nodes: &[NodeId]) -> Result<f64> {
    if nodes.is_empty() {
        return Err(Error::EmptySelection);
    }
    Ok(nodes
        .iter()
        .map(|&v| topology.node(v).reliability)
        .sum::<f64>()
        / nodes.len() as f64)
}

/// Mean reliability over the wireless members of `nodes`.
pub fn wireless_reliability(topology: &Topology, nodes: &[NodeId]) -> Result<f64> {
    let wireless: Vec<NodeId> = nodes
        .iter()
        .copied()
        .filter(|&v| topology.node(v).kind == NodeKind::Wireless)
        .collect();
    mean_reliability(topology, &wireless)
}

/// `delivered / area_size`; an empty area counts as fully covered.
pub fn coverage_fraction(delivered: usize, area_size: usize) -> f64 {
    if area_size == 0 {
        1.0
    } else {
        delivered as f64 / area_size as f64
    }
}

pub fn plan_coverage(plan: &MulticastPlan) -> f64 {
    coverage_fraction(plan.delivery_delay.len(), plan.area.len())
}

pub fn plan_metrics(plan: &MulticastPlan, topology: &Topology) -> Result<ScenarioMetrics> {
    let weights = EdgeWeights::delay(topology, None);
    Ok(ScenarioMetrics {
        tree_cost: plan_cost(plan, &weights)?,
        end_to_end_delay: end_to_end_delay(&plan.delivery_delay)?,
        avg_reliability: avg_reliability(plan, topology)?,
        coverage_fraction: plan_coverage(plan),
        candidate_count: plan.candidates.len(),
        full_coverage_count: plan.full_coverage_count(),
    })
}
