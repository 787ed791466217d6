use std::collections::{BTreeMap, BTreeSet, VecDeque};

use log::warn;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::flood::{build_area_tree, flood, identify_candidates, CandidateInfo};
use crate::error::{Error, Result};
use crate::steiner::{kmb, shortest_path_tree, EdgeWeights, MulticastTree, SteinerInstance};
use crate::topology::{DestinationArea, LinkMedium, LinkStatus, NodeId, Topology};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PlanAlgorithm {
    Hybrid,
    Multiple,
    /// A single candidate serves the whole area.
    HybridDegenerate,
}

/// Which subgraph carried the source-to-candidates tree.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DistributionTier {
    /// Wireless-to-wireless links only.
    Wireless,
    /// Up links, avoiding area nodes that are not selected candidates.
    AvoidArea,
    /// Every up link.
    AllUp,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct PlanOptions {
    /// Responsibles per area node under the Multiple algorithm.
    pub responsibles: usize,
}

impl Default for PlanOptions {
    fn default() -> Self {
        Self { responsibles: 2 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MulticastPlan {
    pub algorithm: PlanAlgorithm,
    pub source: NodeId,
    pub area: Vec<NodeId>,
    pub candidates: Vec<CandidateInfo>,
    pub selected: Vec<NodeId>,
    pub area_trees: BTreeMap<NodeId, MulticastTree>,
    pub distribution_tree: MulticastTree,
    pub distribution_tier: DistributionTier,
    pub responsibles: BTreeMap<NodeId, Vec<NodeId>>,
    #[serde(serialize_with = "crate::format::ser_sig9_map")]
    pub delivery_delay: BTreeMap<NodeId, f64>,
}

impl MulticastPlan {
    pub fn candidate(&self, id: NodeId) -> Option<&CandidateInfo> {
        self.candidates.iter().find(|c| c.id == id)
    }

    pub fn full_coverage_count(&self) -> usize {
        self.candidates.iter().filter(|c| c.full_coverage).count()
    }

    /// Smallest flood depth of `v` over its responsibles.
    pub fn best_depth(&self, v: NodeId) -> Option<u32> {
        self.responsibles
            .get(&v)?
            .iter()
            .filter_map(|&c| self.candidate(c)?.depth.get(&v).copied())
            .min()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("plan serializes")
    }
}

struct Survey {
    area: Vec<NodeId>,
    candidates: Vec<CandidateInfo>,
    /// Nodes reachable from the source over up links.
    reachable: BTreeSet<NodeId>,
}

fn survey(
    topology: &Topology,
    area: &DestinationArea,
    source: NodeId,
    status: &LinkStatus,
) -> Result<Survey> {
    topology.check(source)?;
    let area_array = topology.nodes_in_area(area);
    let ids = identify_candidates(topology, area);
    if ids.is_empty() {
        return Err(Error::AreaUnreachable);
    }
    let candidates = ids
        .par_iter()
        .map(|&c| flood(topology, &area_array, c, status))
        .collect::<Result<Vec<_>>>()?;

    let mut reachable = BTreeSet::from([source]);
    let mut queue = VecDeque::from([source]);
    while let Some(u) = queue.pop_front() {
        for &(v, l) in topology.neighbors(u) {
            if status.is_up(l) && reachable.insert(v) {
                queue.push_back(v);
            }
        }
    }
    Ok(Survey {
        area: area_array,
        candidates,
        reachable,
    })
}

/// KMB over delay weights from `source` to `targets`, on the first tier in
/// which every target is reachable.
fn distribution(
    topology: &Topology,
    status: &LinkStatus,
    area: &[NodeId],
    source: NodeId,
    targets: &[NodeId],
) -> Result<(MulticastTree, DistributionTier)> {
    let target_set: BTreeSet<_> = targets.iter().copied().collect();
    let blocked = |v: NodeId| area.binary_search(&v).is_ok() && !target_set.contains(&v);
    let terminals: Vec<NodeId> = target_set
        .iter()
        .copied()
        .filter(|&t| t != source)
        .collect();
    for tier in [
        DistributionTier::Wireless,
        DistributionTier::AvoidArea,
        DistributionTier::AllUp,
    ] {
        let weights = EdgeWeights::delay_where(topology, |id| {
            let l = topology.link(id);
            status.is_up(id)
                && match tier {
                    DistributionTier::Wireless => l.medium == LinkMedium::WirelessWireless,
                    DistributionTier::AvoidArea => !blocked(l.a) && !blocked(l.b),
                    DistributionTier::AllUp => true,
                }
        });
        let spt = shortest_path_tree(&weights, source)?;
        if terminals.iter().any(|t| spt.dist[t.idx()].is_none()) {
            continue;
        }
        if terminals.is_empty() {
            return Ok((MulticastTree::singleton(source), tier));
        }
        let tree = kmb(&SteinerInstance::new(source, &terminals, &weights)?)?;
        return Ok((tree, tier));
    }
    Err(Error::DisconnectedTerminals)
}

#[allow(clippy::too_many_arguments)]
fn assemble(
    topology: &Topology,
    status: &LinkStatus,
    source: NodeId,
    algorithm: PlanAlgorithm,
    survey: Survey,
    selected: Vec<NodeId>,
    area_trees: BTreeMap<NodeId, MulticastTree>,
    responsibles: BTreeMap<NodeId, Vec<NodeId>>,
) -> Result<MulticastPlan> {
    let (distribution_tree, distribution_tier) =
        distribution(topology, status, &survey.area, source, &selected)?;
    let mut plan = MulticastPlan {
        algorithm,
        source,
        area: survey.area,
        candidates: survey.candidates,
        selected,
        area_trees,
        distribution_tree,
        distribution_tier,
        responsibles,
        delivery_delay: BTreeMap::new(),
    };
    plan.delivery_delay = deliver(&plan, &EdgeWeights::delay(topology, Some(status)));
    Ok(plan)
}

/// Two most reliable fully covering candidates, each serving the whole
/// area. Falls back to [`multiple_plan`] when fewer than two qualify,
/// except for an area with a single candidate in total.
pub fn hybrid_plan(
    topology: &Topology,
    area: &DestinationArea,
    source: NodeId,
    status: &LinkStatus,
    options: PlanOptions,
) -> Result<MulticastPlan> {
    let s = survey(topology, area, source, status)?;
    let mut eligible: Vec<&CandidateInfo> = s
        .candidates
        .iter()
        .filter(|c| c.full_coverage && s.reachable.contains(&c.id))
        .collect();
    eligible.sort_by(|a, b| {
        b.reliability
            .total_cmp(&a.reliability)
            .then(a.id.cmp(&b.id))
    });

    let algorithm = match (eligible.len(), s.candidates.len()) {
        (0, _) => return multiple_from(topology, status, source, s, options),
        (1, 1) => PlanAlgorithm::HybridDegenerate,
        (1, n) => {
            warn!("one fully covering candidate among {n}; using the multiple algorithm");
            return multiple_from(topology, status, source, s, options);
        }
        _ => PlanAlgorithm::Hybrid,
    };
    let take = if algorithm == PlanAlgorithm::Hybrid {
        2
    } else {
        1
    };
    let selected: Vec<NodeId> = eligible[..take].iter().map(|c| c.id).collect();
    let area_trees = eligible[..take]
        .iter()
        .map(|c| Ok((c.id, build_area_tree(&c.parent_array)?)))
        .collect::<Result<BTreeMap<_, _>>>()?;
    let responsibles = s.area.iter().map(|&v| (v, selected.clone())).collect();
    if algorithm == PlanAlgorithm::HybridDegenerate {
        warn!("area served by a single candidate {}", selected[0]);
    }
    assemble(
        topology,
        status,
        source,
        algorithm,
        s,
        selected,
        area_trees,
        responsibles,
    )
}

/// Every area node picks the candidates that reach it in the fewest hops
/// (ties to higher reliability, then lower id), up to
/// `options.responsibles` of them.
pub fn multiple_plan(
    topology: &Topology,
    area: &DestinationArea,
    source: NodeId,
    status: &LinkStatus,
    options: PlanOptions,
) -> Result<MulticastPlan> {
    let s = survey(topology, area, source, status)?;
    multiple_from(topology, status, source, s, options)
}

fn multiple_from(
    topology: &Topology,
    status: &LinkStatus,
    source: NodeId,
    s: Survey,
    options: PlanOptions,
) -> Result<MulticastPlan> {
    if options.responsibles == 0 {
        return Err(Error::InvalidParams(
            "responsibles must be at least 1".into(),
        ));
    }
    let usable: Vec<&CandidateInfo> = s
        .candidates
        .iter()
        .filter(|c| s.reachable.contains(&c.id))
        .collect();
    if usable.is_empty() {
        return Err(Error::AreaUnreachable);
    }
    let mut responsibles = BTreeMap::new();
    let mut chosen_by: BTreeMap<NodeId, BTreeSet<NodeId>> = BTreeMap::new();
    for &v in &s.area {
        let mut options_for_v: Vec<(u32, &CandidateInfo)> = usable
            .iter()
            .filter_map(|c| Some((*c.depth.get(&v)?, *c)))
            .collect();
        options_for_v.sort_by(|(da, a), (db, b)| {
            da.cmp(db)
                .then(b.reliability.total_cmp(&a.reliability))
                .then(a.id.cmp(&b.id))
        });
        let picks: Vec<NodeId> = options_for_v
            .iter()
            .take(options.responsibles)
            .map(|(_, c)| c.id)
            .collect();
        for &c in &picks {
            chosen_by.entry(c).or_default().insert(v);
        }
        responsibles.insert(v, picks);
    }
    let selected: Vec<NodeId> = chosen_by.keys().copied().collect();
    let mut area_trees = BTreeMap::new();
    for (&c, nodes) in &chosen_by {
        let info = usable
            .iter()
            .find(|i| i.id == c)
            .expect("chosen from usable");
        area_trees.insert(c, build_area_tree(&info.parent_array)?.restrict_to(nodes));
    }
    if selected.is_empty() {
        // Nothing in the area is reachable; keep the source-only tree.
        let (distribution_tree, distribution_tier) =
            (MulticastTree::singleton(source), DistributionTier::Wireless);
        return Ok(MulticastPlan {
            algorithm: PlanAlgorithm::Multiple,
            source,
            area: s.area,
            candidates: s.candidates,
            selected,
            area_trees,
            distribution_tree,
            distribution_tier,
            responsibles,
            delivery_delay: BTreeMap::new(),
        });
    }
    assemble(
        topology,
        status,
        source,
        PlanAlgorithm::Multiple,
        s,
        selected,
        area_trees,
        responsibles,
    )
}

/// First-arrival delay per area node: the best responsible's distribution
/// path plus its area-tree path. Nodes without a usable route are absent.
pub fn deliver(plan: &MulticastPlan, weights: &EdgeWeights) -> BTreeMap<NodeId, f64> {
    let mut out = BTreeMap::new();
    for (&v, resp) in &plan.responsibles {
        let best = resp
            .iter()
            .filter_map(|c| {
                let head = plan.distribution_tree.path_weight(*c, weights).ok()?;
                let tail = plan.area_trees.get(c)?.path_weight(v, weights).ok()?;
                Some(head + tail)
            })
            .min_by(f64::total_cmp);
        if let Some(d) = best {
            out.insert(v, d);
        }
    }
    out
}
