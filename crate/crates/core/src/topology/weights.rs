//! Geographic link weights: directed cumulative progress turned into a
//! nonnegative cost, then blended with scaled delay.

use super::geometry::cumulative_progress;
use super::{LinkId, NodeId, Position, Topology};
use crate::error::{Error, Result};

/// Directed NewCP values for every link of a topology with respect to one
/// destination set. `forward[i]` is the value for `a -> b` of link `i`.
#[derive(Debug, Clone, PartialEq)]
pub struct NewCp {
    forward: Vec<f64>,
    backward: Vec<f64>,
    max_cp: f64,
}

impl NewCp {
    pub fn max_cp(&self) -> f64 {
        self.max_cp
    }

    /// Largest NewCP over all directed links.
    pub fn max_value(&self) -> f64 {
        self.forward
            .iter()
            .chain(&self.backward)
            .copied()
            .fold(0.0, f64::max)
    }

    pub fn directed(&self, topology: &Topology, link: LinkId, from: NodeId) -> f64 {
        if topology.link(link).a == from {
            self.forward[link.0]
        } else {
            self.backward[link.0]
        }
    }

    pub fn get(&self, topology: &Topology, from: NodeId, to: NodeId) -> Option<f64> {
        topology
            .link_between(from, to)
            .map(|l| self.directed(topology, l, from))
    }
}

/// Computes `NewCP = max - cp` over both orientations of every link, where
/// `max` is the largest directed cumulative progress in the topology.
pub fn new_cp_weights(topology: &Topology, dests: &[NodeId]) -> Result<NewCp> {
    if topology.links().is_empty() {
        return Err(Error::NoLinks);
    }
    for &d in dests {
        topology.check(d)?;
    }
    let dest_pos: Vec<Position> = dests.iter().map(|&d| topology.position(d)).collect();
    let cp: Vec<f64> = topology
        .links()
        .iter()
        .map(|l| cumulative_progress(topology.position(l.a), topology.position(l.b), &dest_pos))
        .collect();
    // Progress is antisymmetric, so the reverse orientation is -cp.
    let max_cp = cp.iter().map(|c| c.abs()).fold(f64::NEG_INFINITY, f64::max);
    Ok(NewCp {
        forward: cp.iter().map(|&c| max_cp - c).collect(),
        backward: cp.iter().map(|&c| max_cp + c).collect(),
        max_cp,
    })
}

/// Min–max normalization of link delays onto `[0, target_max]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DelayScale {
    pub min_delay: f64,
    pub max_delay: f64,
    pub target_max: f64,
}

impl DelayScale {
    pub fn new(min_delay: f64, max_delay: f64, target_max: f64) -> Self {
        Self {
            min_delay,
            max_delay,
            target_max,
        }
    }

    /// Scale covering every link delay of `topology`.
    pub fn for_topology(topology: &Topology, target_max: f64) -> Self {
        let (lo, hi) = topology
            .links()
            .iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), l| {
                (lo.min(l.delay), hi.max(l.delay))
            });
        Self::new(lo, hi, target_max)
    }

    /// Degenerate ranges (all delays equal) scale to zero.
    pub fn apply(&self, delay: f64) -> f64 {
        let span = self.max_delay - self.min_delay;
        if span.is_nan() || span <= 0.0 {
            return 0.0;
        }
        ((delay - self.min_delay) / span).clamp(0.0, 1.0) * self.target_max
    }
}

/// Composite geographic weight `A·NewCP + B·scaled(delay)`.
pub fn edge_weight_f(new_cp: f64, delay: f64, a_coef: f64, b_coef: f64, scale: &DelayScale) -> f64 {
    a_coef * new_cp + b_coef * scale.apply(delay)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::topology::{Link, LinkMedium, Node, NodeKind, TopologyParams};

    fn collinear() -> Topology {
        let node = |i, x| Node {
            id: NodeId(i),
            pos: Position::new(x, 0.0),
            kind: NodeKind::Wireless,
            reliability: 0.5,
        };
        let link = |a, b, delay| Link {
            a: NodeId(a),
            b: NodeId(b),
            medium: LinkMedium::WirelessWireless,
            delay,
            up_probability: 1.0,
        };
        Topology::from_parts(
            TopologyParams::default(),
            0,
            vec![node(0, 0.0), node(1, 10.0), node(2, 15.0)],
            vec![link(0, 1, 1.0), link(1, 2, 3.0)],
        )
        .unwrap()
    }

    #[test]
    fn collinear_path_toward_single_destination() {
        // cp(0->1) = 15 - 5 = 10, cp(1->2) = 5 - 0 = 5, so max = 10.
        let t = collinear();
        let w = new_cp_weights(&t, &[NodeId(2)]).unwrap();
        assert_eq!(w.max_cp(), 10.0);
        assert_eq!(w.get(&t, NodeId(0), NodeId(1)), Some(0.0));
        assert_eq!(w.get(&t, NodeId(1), NodeId(2)), Some(5.0));
        assert_eq!(w.get(&t, NodeId(1), NodeId(0)), Some(20.0));
        assert_eq!(w.get(&t, NodeId(2), NodeId(1)), Some(15.0));
        assert_eq!(w.max_value(), 20.0);
    }

    #[test]
    fn negative_progress_is_shifted_by_max() {
        let scale = DelayScale::new(1.0, 1.0, 0.0);
        assert_eq!(edge_weight_f(-(-3.0) + 10.0, 1.0, 1.0, 0.0, &scale), 13.0);
    }

    #[test]
    fn no_links_is_an_error() {
        let t = Topology::from_parts(
            TopologyParams::default(),
            0,
            vec![Node {
                id: NodeId(0),
                pos: Position::new(0.0, 0.0),
                kind: NodeKind::Plc,
                reliability: 0.0,
            }],
            vec![],
        )
        .unwrap();
        assert_eq!(new_cp_weights(&t, &[NodeId(0)]), Err(Error::NoLinks));
    }

    #[test]
    fn composite_weight_examples() {
        let scale = DelayScale::new(1.0, 5.0, 12.0);
        assert_eq!(edge_weight_f(0.0, 1.0, 1.0, 1.0, &scale), 0.0);
        assert_eq!(edge_weight_f(7.5, 4.0, 1.0, 0.0, &scale), 7.5);
        // delay 3 sits halfway through [1,5], scaled to 6.
        assert_eq!(edge_weight_f(4.0, 3.0, 1.0, 1.0, &scale), 10.0);
        let flat = DelayScale::new(2.0, 2.0, 12.0);
        assert_eq!(flat.apply(2.0), 0.0);
    }

    #[test]
    fn composite_weight_is_monotone() {
        let scale = DelayScale::new(1.0, 20.0, 30.0);
        let mut prev = f64::NEG_INFINITY;
        for i in 0..50 {
            let d = 1.0 + i as f64 * 0.4;
            let w = edge_weight_f(3.0, d, 1.0, 1.0, &scale);
            assert!(w >= prev);
            prev = w;
            assert!(
                edge_weight_f(3.0 + i as f64, 5.0, 1.0, 1.0, &scale)
                    >= edge_weight_f(3.0, 5.0, 1.0, 1.0, &scale)
            );
        }
    }
}
