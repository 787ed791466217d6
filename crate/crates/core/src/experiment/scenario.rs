use std::collections::{BTreeSet, VecDeque};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::config::{Algorithm, ExperimentConfig, SourcePolicy};
use crate::error::{Error, Result};
use crate::format::{derive_seed, quantize};
use crate::gcbt::{run_gcbt, GcbtOutcome};
use crate::metrics::{coverage_fraction, plan_metrics, wireless_reliability, ScenarioMetrics};
use crate::multihop::{
    flood, hybrid_plan, identify_candidates, multiple_plan, MulticastPlan, PlanAlgorithm,
    PlanOptions,
};
use crate::steiner::{
    exact_steiner, kmb_with, mkmb, tree_cost, EdgeWeights, Heuristic, MulticastTree,
    SteinerInstance, EXACT_MAX_TERMINALS,
};
use crate::topology::{
    distance, generate_topology, sample_plc_status, DestinationArea, LinkStatus, NodeId, Position,
    Topology,
};

/// One cell of a sweep: topology, area, source and link status snapshot.
#[derive(Debug, Clone)]
pub struct Scenario {
    pub sweep_index: usize,
    pub replicate: usize,
    pub seed: u64,
    pub topology: Topology,
    pub area: DestinationArea,
    pub source: NodeId,
    pub status: LinkStatus,
    pub area_nodes: Vec<NodeId>,
    /// Area nodes reachable from the source over up links, source excluded.
    pub destinations: Vec<NodeId>,
    pub candidate_count: usize,
    pub full_coverage_count: usize,
}

pub fn build_scenario(
    config: &ExperimentConfig,
    sweep_index: usize,
    replicate: usize,
) -> Result<Scenario> {
    let seed = derive_seed(config.master_seed, &[sweep_index as u64, replicate as u64]);
    let params = config.params_at(sweep_index);
    let topology = generate_topology(&params, derive_seed(seed, &[1]))?;

    let side = params.area_side;
    let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(seed, &[2]));
    let cx = quantize(side * (0.25 + 0.5 * rng.random::<f64>()));
    let cy = quantize(side * (0.25 + 0.5 * rng.random::<f64>()));
    let area = DestinationArea::new(Position::new(cx, cy), config.radius_at(sweep_index))?;

    let source = match config.source_policy {
        SourcePolicy::FixedId(id) => {
            topology.check(id)?;
            id
        }
        SourcePolicy::FarthestFromArea => {
            let mut best: Option<(f64, NodeId)> = None;
            for w in topology.wireless_nodes() {
                let d = distance(topology.position(w), area.center);
                if best.is_none_or(|(b, _)| d > b) {
                    best = Some((d, w));
                }
            }
            best.ok_or(Error::NoWirelessNodes)?.1
        }
    };
    let status = sample_plc_status(&topology, derive_seed(seed, &[3]));
    let area_nodes = topology.nodes_in_area(&area);

    let mut reachable = vec![false; topology.len()];
    reachable[source.idx()] = true;
    let mut queue = VecDeque::from([source]);
    while let Some(u) = queue.pop_front() {
        for &(v, l) in topology.neighbors(u) {
            if status.is_up(l) && !reachable[v.idx()] {
                reachable[v.idx()] = true;
                queue.push_back(v);
            }
        }
    }
    let destinations = area_nodes
        .iter()
        .copied()
        .filter(|&v| v != source && reachable[v.idx()])
        .collect();

    let candidates = identify_candidates(&topology, &area);
    let full_coverage_count = candidates
        .iter()
        .map(|&c| flood(&topology, &area_nodes, c, &status).map(|i| i.full_coverage))
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .filter(|&f| f)
        .count();

    Ok(Scenario {
        sweep_index,
        replicate,
        seed,
        topology,
        area,
        source,
        status,
        area_nodes,
        destinations,
        candidate_count: candidates.len(),
        full_coverage_count,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum RowStatus {
    Ok,
    /// Hybrid found fewer than two fully covering candidates and ran Multiple.
    Fallback,
    /// Hybrid served the area with its only candidate.
    Degenerate,
    Skipped,
}

impl RowStatus {
    pub fn name(self) -> &'static str {
        match self {
            RowStatus::Ok => "ok",
            RowStatus::Fallback => "fallback",
            RowStatus::Degenerate => "degenerate",
            RowStatus::Skipped => "skipped",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AlgorithmRow {
    pub algorithm: Algorithm,
    pub status: RowStatus,
    pub metrics: Option<ScenarioMetrics>,
    /// Why the row was skipped.
    pub reason: Option<String>,
}

/// What an algorithm built, kept for scenario dumps.
#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Artifact {
    Tree(MulticastTree),
    Plan(Box<MulticastPlan>),
    Gcbt(Box<GcbtOutcome>),
}

fn steiner_metrics(
    scenario: &Scenario,
    tree: &MulticastTree,
    weights: &EdgeWeights,
) -> Result<ScenarioMetrics> {
    let mut e2e: f64 = 0.0;
    for &d in &scenario.destinations {
        e2e = e2e.max(tree.path_weight(d, weights)?);
    }
    Ok(ScenarioMetrics {
        tree_cost: tree_cost(tree, weights)?,
        end_to_end_delay: e2e,
        avg_reliability: wireless_reliability(&scenario.topology, &tree.members())?,
        coverage_fraction: coverage_fraction(
            scenario.destinations.len(),
            scenario.area_nodes.len(),
        ),
        candidate_count: scenario.candidate_count,
        full_coverage_count: scenario.full_coverage_count,
    })
}

/// Runs one algorithm and returns its metrics together with the structure
/// it built.
pub fn run_algorithm(
    config: &ExperimentConfig,
    scenario: &Scenario,
    algorithm: Algorithm,
) -> Result<(RowStatus, ScenarioMetrics, Artifact)> {
    let t = &scenario.topology;
    let status = &scenario.status;
    let dests = &scenario.destinations;
    if dests.is_empty() {
        return Err(Error::InvalidInstance(
            "no reachable destination in the area".into(),
        ));
    }
    let delay = EdgeWeights::delay(t, Some(status));
    match algorithm {
        Algorithm::Kmb | Algorithm::Exact => {
            let inst = SteinerInstance::new(scenario.source, dests, &delay)?;
            let tree = if algorithm == Algorithm::Kmb {
                kmb_with(&inst, Heuristic::Euclidean(t))?
            } else {
                if dests.len() + 1 > EXACT_MAX_TERMINALS {
                    return Err(Error::InstanceTooLarge {
                        terminals: dests.len() + 1,
                        max: EXACT_MAX_TERMINALS,
                    });
                }
                exact_steiner(&inst)?
            };
            let m = steiner_metrics(scenario, &tree, &delay)?;
            Ok((RowStatus::Ok, m, Artifact::Tree(tree)))
        }
        Algorithm::Mkmb => {
            let out = mkmb(
                t,
                Some(status),
                scenario.source,
                dests,
                config.a_coef,
                config.b_coef,
            )?;
            let m = steiner_metrics(scenario, &out.tree, &delay)?;
            debug_assert_eq!(m.tree_cost, out.delay_cost);
            Ok((RowStatus::Ok, m, Artifact::Tree(out.tree)))
        }
        Algorithm::Gcbt => {
            let members: BTreeSet<NodeId> = dests.iter().copied().collect();
            let out = run_gcbt(t, scenario.source, &members, status)?;
            let mut involved: Vec<NodeId> = out.selection.shared_tree.members();
            involved.extend(&out.source_path);
            involved.sort();
            involved.dedup();
            let m = ScenarioMetrics {
                tree_cost: out.cost,
                end_to_end_delay: out.delivery_delay.values().copied().fold(0.0, f64::max),
                avg_reliability: wireless_reliability(t, &involved)?,
                coverage_fraction: coverage_fraction(
                    out.delivered.len(),
                    scenario.area_nodes.len(),
                ),
                candidate_count: scenario.candidate_count,
                full_coverage_count: scenario.full_coverage_count,
            };
            Ok((RowStatus::Ok, m, Artifact::Gcbt(Box::new(out))))
        }
        Algorithm::Hybrid | Algorithm::Multiple => {
            let options = PlanOptions {
                responsibles: config.responsibles,
            };
            let plan = if algorithm == Algorithm::Hybrid {
                hybrid_plan(t, &scenario.area, scenario.source, status, options)?
            } else {
                multiple_plan(t, &scenario.area, scenario.source, status, options)?
            };
            let row_status = match (algorithm, plan.algorithm) {
                (Algorithm::Hybrid, PlanAlgorithm::Multiple) => RowStatus::Fallback,
                (_, PlanAlgorithm::HybridDegenerate) => RowStatus::Degenerate,
                _ => RowStatus::Ok,
            };
            let m = plan_metrics(&plan, t)?;
            Ok((row_status, m, Artifact::Plan(Box::new(plan))))
        }
    }
}

/// Like [`run_algorithm`] but never fails: infeasible cells become
/// skipped rows.
pub fn evaluate(
    config: &ExperimentConfig,
    scenario: &Scenario,
    algorithm: Algorithm,
) -> AlgorithmRow {
    match run_algorithm(config, scenario, algorithm) {
        Ok((status, metrics, _)) => AlgorithmRow {
            algorithm,
            status,
            metrics: Some(metrics),
            reason: None,
        },
        Err(e) => AlgorithmRow {
            algorithm,
            status: RowStatus::Skipped,
            metrics: None,
            reason: Some(e.to_string()),
        },
    }
}
