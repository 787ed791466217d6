use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{LinkId, Topology};
use crate::format::derive_seed;

/// Up/down state of every link for one routing round.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LinkStatus {
    pub round_seed: Option<u64>,
    up: Vec<bool>,
}

impl LinkStatus {
    pub fn all_up(topology: &Topology) -> Self {
        Self {
            round_seed: None,
            up: vec![true; topology.links().len()],
        }
    }

    pub fn from_flags(up: Vec<bool>) -> Self {
        Self {
            round_seed: None,
            up,
        }
    }

    pub fn is_up(&self, link: LinkId) -> bool {
        self.up[link.0]
    }

    pub fn set(&mut self, link: LinkId, up: bool) {
        self.up[link.0] = up;
    }

    pub fn up_count(&self) -> usize {
        self.up.iter().filter(|u| **u).count()
    }

    pub fn len(&self) -> usize {
        self.up.len()
    }

    pub fn is_empty(&self) -> bool {
        self.up.is_empty()
    }
}

/// Samples an independent Bernoulli state for every PLC-incident link;
/// wireless links are always up. Pure in `(topology.seed(), round_seed)`.
pub fn sample_plc_status(topology: &Topology, round_seed: u64) -> LinkStatus {
    let mut rng =
        ChaCha8Rng::seed_from_u64(derive_seed(topology.seed(), &[0x5747_4154, round_seed]));
    let up = topology
        .links()
        .iter()
        .map(|l| !l.medium.is_plc() || rng.random::<f64>() < l.up_probability)
        .collect();
    LinkStatus {
        round_seed: Some(round_seed),
        up,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::topology::{Link, LinkMedium, Node, NodeId, NodeKind, Position, TopologyParams};

    fn pair(up_probability: f64, seed: u64) -> Topology {
        let node = |i, kind| Node {
            id: NodeId(i),
            pos: Position::new(i as f64, 0.0),
            kind,
            reliability: 0.5,
        };
        Topology::from_parts(
            TopologyParams::default(),
            seed,
            vec![
                node(0, NodeKind::Wireless),
                node(1, NodeKind::Plc),
                node(2, NodeKind::Wireless),
            ],
            vec![
                Link {
                    a: NodeId(0),
                    b: NodeId(1),
                    medium: LinkMedium::PlcWireless,
                    delay: 5.0,
                    up_probability,
                },
                Link {
                    a: NodeId(0),
                    b: NodeId(2),
                    medium: LinkMedium::WirelessWireless,
                    delay: 1.0,
                    up_probability: 1.0,
                },
            ],
        )
        .unwrap()
    }

    #[test]
    fn certain_links() {
        let always = pair(1.0, 3);
        let never = pair(0.0, 3);
        for round in 0..100 {
            assert_eq!(sample_plc_status(&always, round).up_count(), 2);
            let s = sample_plc_status(&never, round);
            assert!(!s.is_up(LinkId(0)));
            assert!(s.is_up(LinkId(1)));
        }
    }

    #[test]
    fn half_probability_matches_monte_carlo_bound() {
        // 3 sigma for 10000 Bernoulli(0.5) draws is 0.015.
        let t = pair(0.5, 11);
        let ups = (0..10_000)
            .filter(|&r| sample_plc_status(&t, r).is_up(LinkId(0)))
            .count();
        let frac = ups as f64 / 10_000.0;
        assert!((frac - 0.5).abs() <= 0.02, "{frac}");
    }

    #[test]
    fn sampling_is_deterministic() {
        let t = pair(0.5, 5);
        for r in 0..20 {
            assert_eq!(sample_plc_status(&t, r), sample_plc_status(&t, r));
        }
    }
}
