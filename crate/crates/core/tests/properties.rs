use std::collections::BTreeMap;

use proptest::prelude::*;

use geocast_core::experiment::{
    build_scenario, run_single, Algorithm, Artifact, ExperimentConfig, Sweep,
};
use geocast_core::metrics::{end_to_end_delay, plan_cost};
use geocast_core::multihop::{deliver, hybrid_plan, multiple_plan, PlanOptions};
use geocast_core::steiner::{kmb, tree_cost};
use geocast_core::{EdgeWeights, LinkId, LinkStatus, NodeId, SteinerInstance, Topology};

fn config(seed: u64, radius: f64) -> ExperimentConfig {
    ExperimentConfig {
        master_seed: seed,
        replicates: 1,
        sweep: Sweep::Radius(vec![radius]),
        ..Default::default()
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn plan_cost_is_additive(seed in 0u64..10_000, radius in 12.0f64..35.0) {
        let cfg = config(seed, radius);
        let Ok(s) = build_scenario(&cfg, 0, 0) else { return Ok(()) };
        let Ok(plan) = multiple_plan(&s.topology, &s.area, s.source, &s.status, PlanOptions::default()) else {
            return Ok(());
        };
        let w = EdgeWeights::delay(&s.topology, None);
        let total = plan_cost(&plan, &w).unwrap();
        for (c, tree) in &plan.area_trees {
            let mut without = plan.clone();
            without.area_trees.remove(c);
            let reduced = plan_cost(&without, &w).unwrap();
            prop_assert!((total - reduced - tree_cost(tree, &w).unwrap()).abs() < 1e-9);
        }
    }

    #[test]
    fn delivery_matches_a_path_walk(seed in 0u64..10_000, radius in 12.0f64..35.0) {
        let cfg = config(seed, radius);
        let Ok(s) = build_scenario(&cfg, 0, 0) else { return Ok(()) };
        let Ok(plan) = hybrid_plan(&s.topology, &s.area, s.source, &s.status, PlanOptions::default()) else {
            return Ok(());
        };
        let delay_of = |a: NodeId, b: NodeId| {
            let l = s.topology.link_between(a, b).expect("tree edge is a link");
            prop_assert!(s.status.is_up(l));
            Ok(s.topology.link(l).delay)
        };
        let walk = |path: &[NodeId]| -> Result<f64, TestCaseError> {
            let mut d = 0.0;
            for hop in path.windows(2) {
                d += delay_of(hop[0], hop[1])?;
            }
            Ok(d)
        };
        let mut expected = BTreeMap::new();
        for (v, resp) in &plan.responsibles {
            let mut best: Option<f64> = None;
            for c in resp {
                let (Some(head), Some(tail)) = (
                    plan.distribution_tree.path_from_root(*c),
                    plan.area_trees.get(c).and_then(|t| t.path_from_root(*v)),
                ) else {
                    continue;
                };
                let d = walk(&head)? + walk(&tail)?;
                best = Some(best.map_or(d, |b: f64| b.min(d)));
            }
            if let Some(b) = best {
                expected.insert(*v, b);
            }
        }
        prop_assert_eq!(expected.len(), plan.delivery_delay.len());
        for (v, d) in &expected {
            prop_assert!((plan.delivery_delay[v] - d).abs() < 1e-9);
        }
        let again = deliver(&plan, &EdgeWeights::delay(&s.topology, Some(&s.status)));
        prop_assert_eq!(&again, &plan.delivery_delay);
    }

    #[test]
    fn end_to_end_delay_is_monotone(delays in prop::collection::vec(0.0f64..500.0, 1..20), extra in 0.0f64..500.0) {
        let mut map: BTreeMap<NodeId, f64> =
            delays.iter().enumerate().map(|(i, &d)| (NodeId(i), d)).collect();
        let before = end_to_end_delay(&map).unwrap();
        map.insert(NodeId(delays.len()), extra);
        prop_assert!(end_to_end_delay(&map).unwrap() >= before);
    }

    #[test]
    fn kmb_spans_every_destination(seed in 0u64..10_000, radius in 10.0f64..40.0) {
        let cfg = config(seed, radius);
        let Ok(s) = build_scenario(&cfg, 0, 0) else { return Ok(()) };
        if s.destinations.is_empty() {
            return Ok(());
        }
        let w = EdgeWeights::delay(&s.topology, Some(&s.status));
        let tree = kmb(&SteinerInstance::new(s.source, &s.destinations, &w).unwrap()).unwrap();
        prop_assert_eq!(tree.root(), s.source);
        for d in &s.destinations {
            prop_assert!(tree.contains(*d));
        }
        for leaf in tree.leaves() {
            prop_assert!(s.destinations.contains(&leaf));
        }
    }
}

#[test]
fn topology_and_status_round_trip_through_a_dump() {
    let cfg = ExperimentConfig {
        replicates: 3,
        sweep: Sweep::Radius(vec![20.0, 30.0]),
        algorithms: vec![Algorithm::Hybrid, Algorithm::Multiple],
        ..Default::default()
    };
    for (i, r) in [(0, 0), (1, 2)] {
        let dump = run_single(&cfg, i, r).unwrap();
        let text = serde_json::to_string(&dump.topology).unwrap();
        let topology = Topology::from_json(&text).unwrap();
        let status = LinkStatus::from_flags(dump.link_up.clone());
        for entry in &dump.results {
            let Some(Artifact::Plan(saved)) = &entry.artifact else {
                continue;
            };
            let options = PlanOptions {
                responsibles: cfg.responsibles,
            };
            let rebuilt = match entry.row.algorithm {
                Algorithm::Hybrid => {
                    hybrid_plan(&topology, &dump.area, dump.source, &status, options)
                }
                _ => multiple_plan(&topology, &dump.area, dump.source, &status, options),
            }
            .unwrap();
            assert_eq!(rebuilt.to_json(), saved.to_json());
        }
        assert_eq!(status.len(), topology.links().len());
        assert!((0..status.len()).all(|l| status.is_up(LinkId(l)) == dump.link_up[l]));
    }
}

#[test]
fn area_node_count_grows_with_radius() {
    let cfg = ExperimentConfig {
        replicates: 30,
        ..Default::default()
    };
    let means: Vec<f64> = (0..cfg.sweep.len())
        .map(|i| {
            let counts: Vec<f64> = (0..cfg.replicates)
                .filter_map(|r| build_scenario(&cfg, i, r).ok())
                .map(|s| s.area_nodes.len() as f64)
                .collect();
            counts.iter().sum::<f64>() / counts.len() as f64
        })
        .collect();
    assert!(means.windows(2).all(|w| w[0] <= w[1]), "{means:?}");
}
