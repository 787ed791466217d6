//! Heterogeneous smart-grid topologies: typed nodes on the plane, unit-disk
//! links, per-link delay and PLC availability.

mod generate;
mod geometry;
mod placement;
mod status;
mod weights;

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use generate::{generate_topology, MAX_GENERATION_ATTEMPTS};
pub use geometry::{cumulative_distance, cumulative_progress, distance};
pub use placement::{
    solve_placement, solve_placement_at, HopGraph, PlacementMode, PlacementSolution,
    EXACT_PLACEMENT_MAX_NODES,
};
pub use status::{sample_plc_status, LinkStatus};
pub use weights::{edge_weight_f, new_cp_weights, DelayScale, NewCp};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct NodeId(pub usize);

impl NodeId {
    #[inline]
    pub fn idx(self) -> usize {
        self.0
    }
}

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Index into [`Topology::links`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct LinkId(pub usize);

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Position {
    pub x: f64,
    pub y: f64,
}

impl Position {
    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NodeKind {
    Wireless,
    Plc,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Node {
    pub id: NodeId,
    #[serde(flatten)]
    pub pos: Position,
    pub kind: NodeKind,
    /// Only consulted when ranking wireless candidates.
    pub reliability: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LinkMedium {
    WirelessWireless,
    PlcPlc,
    PlcWireless,
}

impl LinkMedium {
    pub fn between(a: NodeKind, b: NodeKind) -> Self {
        match (a, b) {
            (NodeKind::Wireless, NodeKind::Wireless) => LinkMedium::WirelessWireless,
            (NodeKind::Plc, NodeKind::Plc) => LinkMedium::PlcPlc,
            _ => LinkMedium::PlcWireless,
        }
    }

    pub fn is_plc(self) -> bool {
        self != LinkMedium::WirelessWireless
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Link {
    pub a: NodeId,
    pub b: NodeId,
    pub medium: LinkMedium,
    /// Propagation delay in milliseconds.
    pub delay: f64,
    pub up_probability: f64,
}

impl Link {
    pub fn other(&self, end: NodeId) -> NodeId {
        if end == self.a {
            self.b
        } else {
            self.a
        }
    }
}

/// Generation parameters. Every field has a documented default; see
/// [`TopologyParams::default`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct TopologyParams {
    pub n_nodes: usize,
    /// Side of the square deployment area in meters.
    pub area_side: f64,
    /// Radio range in meters; shared by every node.
    pub radio_range: f64,
    /// Maximum hop distance from any PLC node to a wireless node.
    pub max_plc_hops: u32,
    pub wireless_delay_range: [f64; 2],
    pub plc_delay_range: [f64; 2],
    pub plc_up_probability: f64,
    pub placement_mode: PlacementMode,
}

impl Default for TopologyParams {
    /// 50 nodes on a 100 m square, 18 m range, one PLC hop, wireless links
    /// U[1,5] ms, PLC links U[5,20] ms and up 90% of the time.
    fn default() -> Self {
        Self {
            n_nodes: 50,
            area_side: 100.0,
            radio_range: 18.0,
            max_plc_hops: 1,
            wireless_delay_range: [1.0, 5.0],
            plc_delay_range: [5.0, 20.0],
            plc_up_probability: 0.9,
            placement_mode: PlacementMode::Greedy,
        }
    }
}

impl TopologyParams {
    /// Default parameters for `n` nodes with the area side scaled as
    /// `100·sqrt(n/50)` so node density stays constant.
    pub fn with_nodes(n: usize) -> Self {
        Self {
            n_nodes: n,
            area_side: Self::side_for(n),
            ..Self::default()
        }
    }

    pub fn side_for(n: usize) -> f64 {
        100.0 * (n as f64 / 50.0).sqrt()
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::InvalidParams(m.to_string()));
        if self.n_nodes < 2 {
            return bad("n_nodes must be at least 2");
        }
        if !(self.area_side > 0.0 && self.area_side.is_finite()) {
            return bad("area_side must be positive");
        }
        if !(self.radio_range > 0.0 && self.radio_range.is_finite()) {
            return bad("radio_range must be positive");
        }
        if self.max_plc_hops < 1 {
            return bad("max_plc_hops must be at least 1");
        }
        for (name, [lo, hi]) in [
            ("wireless_delay_range", self.wireless_delay_range),
            ("plc_delay_range", self.plc_delay_range),
        ] {
            if !(lo > 0.0 && lo <= hi && hi.is_finite()) {
                return Err(Error::InvalidParams(format!(
                    "{name} must satisfy 0 < lo <= hi"
                )));
            }
        }
        if !(0.0..=1.0).contains(&self.plc_up_probability) {
            return bad("plc_up_probability must lie in [0,1]");
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DestinationArea {
    pub center: Position,
    pub radius: f64,
}

impl DestinationArea {
    pub fn new(center: Position, radius: f64) -> Result<Self> {
        if !(radius > 0.0 && radius.is_finite()) {
            return Err(Error::InvalidParams("area radius must be positive".into()));
        }
        Ok(Self { center, radius })
    }

    /// Boundary inclusive.
    pub fn contains(&self, p: Position) -> bool {
        distance(p, self.center) <= self.radius
    }
}

/// Immutable geometric graph of typed nodes.
#[derive(Debug, Clone, PartialEq)]
pub struct Topology {
    params: TopologyParams,
    seed: u64,
    nodes: Vec<Node>,
    links: Vec<Link>,
    /// Per node: `(neighbor, link)` sorted by neighbor id.
    adjacency: Vec<Vec<(NodeId, LinkId)>>,
}

impl Topology {
    /// Assembles a topology from explicit parts. Links are re-sorted by
    /// `(a, b)`; structural invariants are checked.
    pub fn from_parts(
        params: TopologyParams,
        seed: u64,
        nodes: Vec<Node>,
        mut links: Vec<Link>,
    ) -> Result<Self> {
        for (i, n) in nodes.iter().enumerate() {
            if n.id.idx() != i {
                return Err(Error::Malformed(format!(
                    "node ids must be dense, found {} at {i}",
                    n.id
                )));
            }
            if !(n.pos.x.is_finite() && n.pos.y.is_finite()) {
                return Err(Error::Malformed(format!(
                    "node {} has non-finite position",
                    n.id
                )));
            }
            if !(0.0..=1.0).contains(&n.reliability) {
                return Err(Error::Malformed(format!(
                    "node {} reliability out of range",
                    n.id
                )));
            }
        }
        for l in links.iter_mut() {
            if l.a > l.b {
                std::mem::swap(&mut l.a, &mut l.b);
            }
        }
        links.sort_by_key(|l| (l.a, l.b));
        let mut adjacency = vec![Vec::new(); nodes.len()];
        for (i, l) in links.iter().enumerate() {
            if l.a == l.b {
                return Err(Error::Malformed(format!("self loop at {}", l.a)));
            }
            if l.b.idx() >= nodes.len() {
                return Err(Error::UnknownNode(l.b));
            }
            if i > 0 && (links[i - 1].a, links[i - 1].b) == (l.a, l.b) {
                return Err(Error::Malformed(format!("duplicate link {}-{}", l.a, l.b)));
            }
            if !(l.delay > 0.0 && l.delay.is_finite()) {
                return Err(Error::Malformed(format!(
                    "link {}-{} has invalid delay",
                    l.a, l.b
                )));
            }
            if !(0.0..=1.0).contains(&l.up_probability) {
                return Err(Error::Malformed(format!(
                    "link {}-{} has invalid up probability",
                    l.a, l.b
                )));
            }
            if l.medium != LinkMedium::between(nodes[l.a.idx()].kind, nodes[l.b.idx()].kind) {
                return Err(Error::Malformed(format!(
                    "link {}-{} medium disagrees with node kinds",
                    l.a, l.b
                )));
            }
            adjacency[l.a.idx()].push((l.b, LinkId(i)));
            adjacency[l.b.idx()].push((l.a, LinkId(i)));
        }
        for adj in adjacency.iter_mut() {
            adj.sort();
        }
        Ok(Self {
            params,
            seed,
            nodes,
            links,
            adjacency,
        })
    }

    pub fn params(&self) -> &TopologyParams {
        &self.params
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn radio_range(&self) -> f64 {
        self.params.radio_range
    }

    pub fn nodes(&self) -> &[Node] {
        &self.nodes
    }

    pub fn node(&self, id: NodeId) -> &Node {
        &self.nodes[id.idx()]
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn contains(&self, id: NodeId) -> bool {
        id.idx() < self.nodes.len()
    }

    pub fn check(&self, id: NodeId) -> Result<()> {
        if self.contains(id) {
            Ok(())
        } else {
            Err(Error::UnknownNode(id))
        }
    }

    pub fn position(&self, id: NodeId) -> Position {
        self.nodes[id.idx()].pos
    }

    pub fn links(&self) -> &[Link] {
        &self.links
    }

    pub fn link(&self, id: LinkId) -> &Link {
        &self.links[id.0]
    }

    pub fn neighbors(&self, id: NodeId) -> &[(NodeId, LinkId)] {
        &self.adjacency[id.idx()]
    }

    pub fn link_between(&self, a: NodeId, b: NodeId) -> Option<LinkId> {
        let adj = &self.adjacency[a.idx()];
        adj.binary_search_by_key(&b, |&(n, _)| n)
            .ok()
            .map(|i| adj[i].1)
    }

    pub fn wireless_nodes(&self) -> impl Iterator<Item = NodeId> + '_ {
        self.nodes
            .iter()
            .filter(|n| n.kind == NodeKind::Wireless)
            .map(|n| n.id)
    }

    /// Ids of nodes inside `area`, ascending. This is the protocol's area array.
    pub fn nodes_in_area(&self, area: &DestinationArea) -> Vec<NodeId> {
        self.nodes
            .iter()
            .filter(|n| area.contains(n.pos))
            .map(|n| n.id)
            .collect()
    }

    pub fn is_connected(&self) -> bool {
        if self.nodes.is_empty() {
            return true;
        }
        let mut seen = vec![false; self.nodes.len()];
        let mut stack = vec![NodeId(0)];
        seen[0] = true;
        let mut count = 1;
        while let Some(u) = stack.pop() {
            for &(v, _) in self.neighbors(u) {
                if !seen[v.idx()] {
                    seen[v.idx()] = true;
                    count += 1;
                    stack.push(v);
                }
            }
        }
        count == self.nodes.len()
    }

    /// Unweighted hop graph over every link.
    pub fn hop_graph(&self) -> HopGraph {
        HopGraph::new(
            self.adjacency
                .iter()
                .map(|adj| adj.iter().map(|&(v, _)| v).collect())
                .collect(),
        )
    }

    pub fn to_document(&self) -> TopologyDocument {
        TopologyDocument {
            params: self.params.clone(),
            seed: self.seed,
            nodes: self.nodes.clone(),
            links: self.links.clone(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_document()).expect("topology serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let doc: TopologyDocument =
            serde_json::from_str(text).map_err(|e| Error::Malformed(e.to_string()))?;
        Self::from_parts(doc.params, doc.seed, doc.nodes, doc.links)
    }
}

/// Serialized form of a [`Topology`].
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TopologyDocument {
    pub params: TopologyParams,
    pub seed: u64,
    pub nodes: Vec<Node>,
    pub links: Vec<Link>,
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tiny() -> Topology {
        let node = |i, x, y, kind| Node {
            id: NodeId(i),
            pos: Position::new(x, y),
            kind,
            reliability: 0.5,
        };
        let nodes = vec![
            node(0, 0.0, 0.0, NodeKind::Wireless),
            node(1, 5.0, 0.0, NodeKind::Plc),
            node(2, 10.0, 0.0, NodeKind::Plc),
        ];
        let link = |a, b, medium| Link {
            a: NodeId(a),
            b: NodeId(b),
            medium,
            delay: 2.0,
            up_probability: 0.9,
        };
        Topology::from_parts(
            TopologyParams::default(),
            1,
            nodes,
            vec![
                link(2, 1, LinkMedium::PlcPlc),
                link(0, 1, LinkMedium::PlcWireless),
            ],
        )
        .unwrap()
    }

    #[test]
    fn area_membership_is_boundary_inclusive() {
        let t = tiny();
        let at_center = DestinationArea::new(Position::new(0.0, 0.0), 0.5).unwrap();
        assert_eq!(t.nodes_in_area(&at_center), vec![NodeId(0)]);
        let exact = DestinationArea::new(Position::new(0.0, 0.0), 5.0).unwrap();
        assert_eq!(t.nodes_in_area(&exact), vec![NodeId(0), NodeId(1)]);
        let empty = DestinationArea::new(Position::new(50.0, 50.0), 1.0).unwrap();
        assert!(t.nodes_in_area(&empty).is_empty());
    }

    #[test]
    fn links_are_normalized_and_indexed() {
        let t = tiny();
        assert_eq!((t.links()[1].a, t.links()[1].b), (NodeId(1), NodeId(2)));
        assert_eq!(t.link_between(NodeId(2), NodeId(1)), Some(LinkId(1)));
        assert_eq!(t.link_between(NodeId(0), NodeId(2)), None);
        assert!(t.is_connected());
    }

    #[test]
    fn rejects_inconsistent_medium() {
        let mut doc = tiny().to_document();
        doc.links[0].medium = LinkMedium::WirelessWireless;
        assert!(Topology::from_parts(doc.params, doc.seed, doc.nodes, doc.links).is_err());
    }

    #[test]
    fn rejects_non_positive_radius() {
        assert!(DestinationArea::new(Position::new(0.0, 0.0), 0.0).is_err());
    }
}
