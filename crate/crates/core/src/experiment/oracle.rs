//! Brute-force cross-checks of the solvers on small random instances.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::format::{derive_seed, quantize};
use crate::multihop::{flood, identify_candidates};
use crate::steiner::{exact_steiner, kmb, tree_cost, EdgeWeights, SteinerInstance, WeightKind};
use crate::topology::{
    generate_topology, sample_plc_status, solve_placement, DestinationArea, HopGraph, NodeId,
    PlacementMode, Position, TopologyParams,
};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct OracleBounds {
    pub seed: u64,
    /// Exact solver against subgraph enumeration (n <= 8, |D| <= 4).
    pub exact_cases: usize,
    /// KMB within twice the optimum (n <= 20, |D| <= 5).
    pub kmb_cases: usize,
    /// Flooding against an independent breadth-first search.
    pub flood_cases: usize,
    /// Placement against exhaustive set cover (n <= 12).
    pub placement_cases: usize,
    /// Scales the enumeration weights so the exact check must fail.
    pub perturb: bool,
}

impl Default for OracleBounds {
    fn default() -> Self {
        Self {
            seed: 7,
            exact_cases: 200,
            kmb_cases: 100,
            flood_cases: 200,
            placement_cases: 100,
            perturb: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OracleCheck {
    pub name: String,
    pub cases: usize,
    pub failures: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OracleReport {
    pub checks: Vec<OracleCheck>,
}

impl OracleReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.failures == 0)
    }
}

/// Random connected graph: a random spanning tree plus extra edges.
fn random_graph(rng: &mut ChaCha8Rng, n: usize, extra: usize) -> Vec<(usize, usize, f64)> {
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);
    let mut seen = BTreeSet::new();
    let mut edges = Vec::new();
    let mut push = |a: usize, b: usize, rng: &mut ChaCha8Rng| {
        let key = (a.min(b), a.max(b));
        if a != b && seen.insert(key) {
            edges.push((key.0, key.1, quantize(1.0 + 19.0 * rng.random::<f64>())));
        }
    };
    for i in 1..n {
        let j = order[rng.random_range(0..i)];
        push(order[i], j, rng);
    }
    for _ in 0..extra {
        let (a, b) = (rng.random_range(0..n), rng.random_range(0..n));
        push(a, b, rng);
    }
    edges
}

fn weights_of(n: usize, edges: &[(usize, usize, f64)], scale: f64) -> EdgeWeights {
    EdgeWeights::from_undirected(
        n,
        WeightKind::Delay,
        edges
            .iter()
            .map(|&(a, b, w)| (NodeId(a), NodeId(b), w * scale)),
    )
    .expect("valid random graph")
}

/// Minimum over node sets containing `terms` of the induced MST weight.
fn enumerate_steiner(
    n: usize,
    edges: &[(usize, usize, f64)],
    terms: &[usize],
    scale: f64,
) -> Option<f64> {
    let must: u32 = terms.iter().map(|&t| 1u32 << t).sum();
    let mut sorted = edges.to_vec();
    sorted.sort_by(|x, y| x.2.total_cmp(&y.2));
    let mut best: Option<f64> = None;
    for set in 0u32..(1 << n) {
        if set & must != must {
            continue;
        }
        let mut comp: Vec<usize> = (0..n).collect();
        let find = |c: &mut Vec<usize>, mut x: usize| {
            while c[x] != x {
                x = c[x];
            }
            x
        };
        let (mut total, mut joined) = (0.0, 0);
        for &(a, b, w) in &sorted {
            if set >> a & 1 == 1 && set >> b & 1 == 1 {
                let (ra, rb) = (find(&mut comp, a), find(&mut comp, b));
                if ra != rb {
                    comp[ra] = rb;
                    total += w * scale;
                    joined += 1;
                }
            }
        }
        if joined + 1 == set.count_ones() && best.is_none_or(|b| total < b) {
            best = Some(total);
        }
    }
    best
}

fn random_terminals(rng: &mut ChaCha8Rng, n: usize, max: usize) -> (usize, Vec<usize>) {
    let mut ids: Vec<usize> = (0..n).collect();
    ids.shuffle(rng);
    let k = rng.random_range(1..=max.min(n - 1));
    let mut terms = ids[1..=k].to_vec();
    terms.sort();
    (ids[0], terms)
}

fn check_exact(b: &OracleBounds) -> OracleCheck {
    let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(b.seed, &[1]));
    let scale = if b.perturb { 1.01 } else { 1.0 };
    let mut failures = 0;
    for _ in 0..b.exact_cases {
        let n = rng.random_range(2..=8);
        let extra = rng.random_range(0..=n * 2);
        let edges = random_graph(&mut rng, n, extra);
        let (src, terms) = random_terminals(&mut rng, n, 4);
        let w = weights_of(n, &edges, 1.0);
        let tn: Vec<NodeId> = terms.iter().map(|&t| NodeId(t)).collect();
        let got = SteinerInstance::new(NodeId(src), &tn, &w)
            .and_then(|i| exact_steiner(&i))
            .and_then(|t| tree_cost(&t, &w));
        let mut all = terms.clone();
        all.push(src);
        let want = enumerate_steiner(n, &edges, &all, scale);
        let ok =
            matches!((got, want), (Ok(g), Some(x)) if (g - x).abs() <= 1e-9 * x.abs().max(1.0));
        failures += usize::from(!ok);
    }
    OracleCheck {
        name: "exact_vs_enumeration".into(),
        cases: b.exact_cases,
        failures,
    }
}

fn check_kmb(b: &OracleBounds) -> OracleCheck {
    let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(b.seed, &[2]));
    let mut failures = 0;
    for _ in 0..b.kmb_cases {
        let n = rng.random_range(6..=20);
        let extra = rng.random_range(0..=n * 2);
        let edges = random_graph(&mut rng, n, extra);
        let (src, terms) = random_terminals(&mut rng, n, 5);
        let w = weights_of(n, &edges, 1.0);
        let tn: Vec<NodeId> = terms.iter().map(|&t| NodeId(t)).collect();
        let ok = SteinerInstance::new(NodeId(src), &tn, &w)
            .and_then(|i| {
                Ok((
                    tree_cost(&kmb(&i)?, &w)?,
                    tree_cost(&exact_steiner(&i)?, &w)?,
                ))
            })
            .is_ok_and(|(approx, opt)| approx + 1e-9 >= opt && approx <= 2.0 * opt + 1e-9);
        failures += usize::from(!ok);
    }
    OracleCheck {
        name: "kmb_within_twice_optimum".into(),
        cases: b.kmb_cases,
        failures,
    }
}

fn check_flood(b: &OracleBounds) -> OracleCheck {
    let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(b.seed, &[3]));
    let params = TopologyParams {
        plc_up_probability: 0.7,
        ..TopologyParams::with_nodes(30)
    };
    let mut failures = 0;
    for case in 0..b.flood_cases {
        let Ok(t) = generate_topology(&params, derive_seed(b.seed, &[3, case as u64])) else {
            failures += 1;
            continue;
        };
        let side = params.area_side;
        let center = Position::new(side * rng.random::<f64>(), side * rng.random::<f64>());
        let area = DestinationArea::new(center, 10.0 + 20.0 * rng.random::<f64>())
            .expect("positive radius");
        let status = sample_plc_status(&t, case as u64);
        let area_nodes = t.nodes_in_area(&area);
        let in_area: BTreeSet<NodeId> = area_nodes.iter().copied().collect();
        for c in identify_candidates(&t, &area) {
            let Ok(info) = flood(&t, &area_nodes, c, &status) else {
                failures += 1;
                continue;
            };
            // Multi-source BFS from the attachment points.
            let mut depth: BTreeMap<NodeId, u32> = BTreeMap::new();
            let mut queue = VecDeque::new();
            if in_area.contains(&c) {
                depth.insert(c, 0);
                queue.push_back(c);
            } else {
                for &(v, l) in t.neighbors(c) {
                    if status.is_up(l) && in_area.contains(&v) {
                        depth.insert(v, 0);
                        queue.push_back(v);
                    }
                }
            }
            while let Some(u) = queue.pop_front() {
                for &(v, l) in t.neighbors(u) {
                    if status.is_up(l) && in_area.contains(&v) && !depth.contains_key(&v) {
                        depth.insert(v, depth[&u] + 1);
                        queue.push_back(v);
                    }
                }
            }
            let full = depth.len() == area_nodes.len();
            if info.depth != depth || info.full_coverage != full {
                failures += 1;
            }
        }
    }
    OracleCheck {
        name: "flood_vs_bfs".into(),
        cases: b.flood_cases,
        failures,
    }
}

fn check_placement(b: &OracleBounds) -> OracleCheck {
    let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(b.seed, &[4]));
    let mut failures = 0;
    for _ in 0..b.placement_cases {
        let n = rng.random_range(2..=12);
        let extra = rng.random_range(0..=n);
        let edges = random_graph(&mut rng, n, extra);
        let pairs: Vec<(usize, usize)> = edges.iter().map(|&(a, b, _)| (a, b)).collect();
        let g = HopGraph::from_edges(n, &pairs);
        let k = rng.random_range(1..=3);
        let covers: Vec<u32> = (0..n)
            .map(|r| g.within(NodeId(r), k).iter().map(|v| 1u32 << v.idx()).sum())
            .collect();
        let all = (1u32 << n) - 1;
        let optimum = (1u32..(1 << n))
            .filter(|set| {
                (0..n)
                    .filter(|r| set >> r & 1 == 1)
                    .fold(0, |acc, r| acc | covers[r])
                    == all
            })
            .map(|set| set.count_ones() as usize)
            .min()
            .expect("all locations always cover");
        let exact = solve_placement(&g, k, PlacementMode::Exact);
        let greedy = solve_placement(&g, k, PlacementMode::Greedy);
        let ok = match (exact, greedy) {
            (Ok(e), Ok(gr)) => {
                let covered = e
                    .selected_routers
                    .iter()
                    .fold(0, |acc, r| acc | covers[r.idx()]);
                covered == all
                    && e.selected_routers.len() == optimum
                    && gr.selected_routers.len() >= optimum
            }
            _ => false,
        };
        failures += usize::from(!ok);
    }
    OracleCheck {
        name: "placement_vs_exhaustive".into(),
        cases: b.placement_cases,
        failures,
    }
}

/// Runs every cross-check and reports per-check failure counts.
pub fn oracle_check(bounds: &OracleBounds) -> OracleReport {
    OracleReport {
        checks: vec![
            check_exact(bounds),
            check_kmb(bounds),
            check_flood(bounds),
            check_placement(bounds),
        ],
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn quick(perturb: bool) -> OracleBounds {
        OracleBounds {
            exact_cases: 30,
            kmb_cases: 10,
            flood_cases: 10,
            placement_cases: 20,
            perturb,
            ..Default::default()
        }
    }

    #[test]
    fn passes_and_counts_cases() {
        let r = oracle_check(&quick(false));
        assert!(r.passed(), "{r:?}");
        assert_eq!(
            r.checks.iter().map(|c| c.cases).collect::<Vec<_>>(),
            vec![30, 10, 10, 20]
        );
    }

    #[test]
    fn perturbation_is_caught() {
        let r = oracle_check(&quick(true));
        assert!(!r.passed());
        assert_eq!(r.checks[0].failures, 30);
    }
}
