use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::placement::solve_placement;
use super::{
    distance, HopGraph, Link, LinkMedium, Node, NodeId, NodeKind, Position, Topology,
    TopologyParams,
};
use crate::error::{Error, Result};
use crate::format::{derive_seed, quantize};

/// Position resamples before giving up on a connected layout.
pub const MAX_GENERATION_ATTEMPTS: u32 = 1000;

/// Uniform positions on the square, unit-disk links at the radio range,
/// and the router placement deciding which nodes are wireless.
///
/// The layout is resampled with derived sub-seeds until the unit-disk graph
/// is connected. Identical `(params, seed)` give bit-identical topologies.
pub fn generate_topology(params: &TopologyParams, seed: u64) -> Result<Topology> {
    params.validate()?;
    let n = params.n_nodes;
    for attempt in 0..MAX_GENERATION_ATTEMPTS {
        let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(seed, &[attempt as u64, 0]));
        let positions: Vec<Position> = (0..n)
            .map(|_| {
                let x = quantize(rng.random::<f64>() * params.area_side);
                let y = quantize(rng.random::<f64>() * params.area_side);
                Position::new(x, y)
            })
            .collect();

        let mut pairs = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                if distance(positions[i], positions[j]) <= params.radio_range {
                    pairs.push((i, j));
                }
            }
        }
        let graph = HopGraph::from_edges(n, &pairs);
        if graph.hops_from(NodeId(0)).iter().any(|d| d.is_none()) {
            continue;
        }

        let placement = solve_placement(&graph, params.max_plc_hops, params.placement_mode)?;
        let mut kinds = vec![NodeKind::Plc; n];
        for r in &placement.selected_routers {
            kinds[r.idx()] = NodeKind::Wireless;
        }

        let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(seed, &[attempt as u64, 1]));
        let nodes: Vec<Node> = (0..n)
            .map(|i| Node {
                id: NodeId(i),
                pos: positions[i],
                kind: kinds[i],
                reliability: quantize(rng.random::<f64>()),
            })
            .collect();
        let links = pairs
            .iter()
            .map(|&(a, b)| {
                let medium = LinkMedium::between(kinds[a], kinds[b]);
                let ([lo, hi], up_probability) = if medium.is_plc() {
                    (params.plc_delay_range, params.plc_up_probability)
                } else {
                    (params.wireless_delay_range, 1.0)
                };
                let delay = quantize(lo + rng.random::<f64>() * (hi - lo)).max(lo);
                Link {
                    a: NodeId(a),
                    b: NodeId(b),
                    medium,
                    delay,
                    up_probability,
                }
            })
            .collect();
        return Topology::from_parts(params.clone(), seed, nodes, links);
    }
    Err(Error::GenerationFailed {
        attempts: MAX_GENERATION_ATTEMPTS,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_nodes_in_range() {
        let params = TopologyParams {
            n_nodes: 2,
            area_side: 10.0,
            radio_range: 20.0,
            ..Default::default()
        };
        let t = generate_topology(&params, 9).unwrap();
        assert_eq!(t.len(), 2);
        assert_eq!(t.links().len(), 1);
        assert!(t.wireless_nodes().count() >= 1);
    }

    #[test]
    fn same_seed_same_topology() {
        let params = TopologyParams::default();
        let a = generate_topology(&params, 42).unwrap();
        let b = generate_topology(&params, 42).unwrap();
        assert_eq!(a, b);
        let c = generate_topology(&params, 43).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn sparse_layout_fails() {
        // Far below the connectivity threshold for 50 nodes on 100 m.
        let params = TopologyParams {
            radio_range: 2.0,
            ..Default::default()
        };
        assert_eq!(
            generate_topology(&params, 1),
            Err(Error::GenerationFailed {
                attempts: MAX_GENERATION_ATTEMPTS
            })
        );
    }

    #[test]
    fn invalid_params_are_rejected() {
        let params = TopologyParams {
            n_nodes: 1,
            ..Default::default()
        };
        assert!(matches!(
            generate_topology(&params, 1),
            Err(Error::InvalidParams(_))
        ));
    }
}
