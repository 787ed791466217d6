use std::collections::BTreeMap;

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::steiner::MulticastTree;
use crate::topology::{DestinationArea, LinkStatus, NodeId, NodeKind, Topology};

/// One slot of a parent array. On the wire `Unset` is `-1`, `Root` is `-2`
/// and a parent is its node id.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ParentEntry {
    Unset,
    Root,
    Parent(NodeId),
}

impl ParentEntry {
    pub fn wire(self) -> i64 {
        match self {
            ParentEntry::Unset => -1,
            ParentEntry::Root => -2,
            ParentEntry::Parent(p) => p.idx() as i64,
        }
    }

    pub fn from_wire(value: i64) -> Result<Self> {
        match value {
            -1 => Ok(ParentEntry::Unset),
            -2 => Ok(ParentEntry::Root),
            v if v >= 0 => Ok(ParentEntry::Parent(NodeId(v as usize))),
            v => Err(Error::CorruptParentArray(format!("invalid wire value {v}"))),
        }
    }
}

impl Serialize for ParentEntry {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_i64(self.wire())
    }
}

impl<'de> Deserialize<'de> for ParentEntry {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        ParentEntry::from_wire(i64::deserialize(d)?).map_err(D::Error::custom)
    }
}

/// Parent pointers recorded by one candidate's flood, indexed like `area`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ParentArray {
    pub candidate: NodeId,
    pub area: Vec<NodeId>,
    pub entries: Vec<ParentEntry>,
}

impl ParentArray {
    pub fn unset(candidate: NodeId, area: Vec<NodeId>) -> Self {
        let entries = vec![ParentEntry::Unset; area.len()];
        Self {
            candidate,
            area,
            entries,
        }
    }

    fn slot(&self, v: NodeId) -> Option<usize> {
        self.area.binary_search(&v).ok()
    }

    pub fn get(&self, v: NodeId) -> Option<ParentEntry> {
        self.slot(v).map(|i| self.entries[i])
    }

    pub fn is_full(&self) -> bool {
        !self.entries.contains(&ParentEntry::Unset)
    }

    /// Checks lengths, ordering, parent references and acyclicity.
    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::CorruptParentArray(m));
        if self.entries.len() != self.area.len() {
            return bad("entries and area differ in length".into());
        }
        if self.area.windows(2).any(|w| w[0] >= w[1]) {
            return bad("area must be strictly ascending".into());
        }
        for (&v, &e) in self.area.iter().zip(&self.entries) {
            if let ParentEntry::Parent(p) = e {
                if p != self.candidate && self.slot(p).is_none() {
                    return bad(format!("parent {p} of {v} is outside the area"));
                }
                if p == v {
                    return bad(format!("{v} is its own parent"));
                }
            }
        }
        for start in 0..self.area.len() {
            let mut cur = self.entries[start];
            let mut steps = 0;
            while let ParentEntry::Parent(p) = cur {
                if p == self.candidate {
                    break;
                }
                steps += 1;
                if steps > self.area.len() {
                    return bad(format!("cycle through {}", self.area[start]));
                }
                cur = self.entries[self.slot(p).expect("checked above")];
                if cur == ParentEntry::Unset {
                    return bad(format!("{p} is a parent but unset"));
                }
            }
        }
        Ok(())
    }
}

/// Flood result for one candidate.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CandidateInfo {
    pub id: NodeId,
    pub reliability: f64,
    pub parent_array: ParentArray,
    /// Hop count from the nearest attachment point; attachment nodes are 0.
    pub depth: BTreeMap<NodeId, u32>,
    pub full_coverage: bool,
}

/// Wire form of the packet a candidate floods into the area.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RoutingPacket {
    pub candidate_id: NodeId,
    pub center_x: f64,
    pub center_y: f64,
    pub radius: f64,
    pub area: Vec<NodeId>,
    pub parents: Vec<ParentEntry>,
}

impl RoutingPacket {
    pub fn new(area: &DestinationArea, parents: &ParentArray) -> Self {
        Self {
            candidate_id: parents.candidate,
            center_x: area.center.x,
            center_y: area.center.y,
            radius: area.radius,
            area: parents.area.clone(),
            parents: parents.entries.clone(),
        }
    }

    pub fn parent_array(&self) -> Result<ParentArray> {
        let pa = ParentArray {
            candidate: self.candidate_id,
            area: self.area.clone(),
            entries: self.parents.clone(),
        };
        pa.validate()?;
        Ok(pa)
    }
}

/// Wireless nodes inside the area or with any link into it, ascending.
/// Link status is not consulted.
pub fn identify_candidates(topology: &Topology, area: &DestinationArea) -> Vec<NodeId> {
    let inside = |v: NodeId| area.contains(topology.position(v));
    topology
        .wireless_nodes()
        .filter(|&w| inside(w) || topology.neighbors(w).iter().any(|&(v, _)| inside(v)))
        .collect()
}

fn is_candidate(topology: &Topology, area_array: &[NodeId], c: NodeId) -> bool {
    topology.contains(c)
        && topology.node(c).kind == NodeKind::Wireless
        && (area_array.binary_search(&c).is_ok()
            || topology
                .neighbors(c)
                .iter()
                .any(|&(v, _)| area_array.binary_search(&v).is_ok()))
}

/// Level-synchronous BFS over up links, confined to `area_array`, seeded
/// at the candidate (when inside) or at its in-area neighbours. Within a
/// level lower ids expand first, so the lowest-id predecessor wins.
pub fn flood(
    topology: &Topology,
    area_array: &[NodeId],
    candidate: NodeId,
    status: &LinkStatus,
) -> Result<CandidateInfo> {
    if area_array.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidParams(
            "area array must be strictly ascending".into(),
        ));
    }
    if !is_candidate(topology, area_array, candidate) {
        return Err(Error::NotACandidate(candidate));
    }
    let mut pa = ParentArray::unset(candidate, area_array.to_vec());
    let mut depth = BTreeMap::new();
    let mut frontier: Vec<NodeId> = if pa.slot(candidate).is_some() {
        vec![candidate]
    } else {
        topology
            .neighbors(candidate)
            .iter()
            .filter(|&&(v, l)| status.is_up(l) && pa.slot(v).is_some())
            .map(|&(v, _)| v)
            .collect()
    };
    for &v in &frontier {
        let i = pa.slot(v).expect("in area");
        pa.entries[i] = ParentEntry::Root;
        depth.insert(v, 0);
    }
    let mut level = 0;
    while !frontier.is_empty() {
        level += 1;
        let mut next = Vec::new();
        for &u in &frontier {
            for &(v, l) in topology.neighbors(u) {
                if !status.is_up(l) {
                    continue;
                }
                if let Some(i) = pa.slot(v) {
                    if pa.entries[i] == ParentEntry::Unset {
                        pa.entries[i] = ParentEntry::Parent(u);
                        depth.insert(v, level);
                        next.push(v);
                    }
                }
            }
        }
        next.sort();
        frontier = next;
    }
    let full_coverage = pa.is_full();
    Ok(CandidateInfo {
        id: candidate,
        reliability: topology.node(candidate).reliability,
        parent_array: pa,
        depth,
        full_coverage,
    })
}

/// Tree rooted at the candidate: `Root` entries hang off the candidate,
/// `Parent` entries off their predecessor; `Unset` entries are left out.
pub fn build_area_tree(parent_array: &ParentArray) -> Result<MulticastTree> {
    parent_array.validate()?;
    let c = parent_array.candidate;
    let mut parent = BTreeMap::new();
    for (&v, &e) in parent_array.area.iter().zip(&parent_array.entries) {
        match e {
            ParentEntry::Unset => {}
            ParentEntry::Root if v == c => {}
            ParentEntry::Root => {
                parent.insert(v, c);
            }
            ParentEntry::Parent(p) => {
                parent.insert(v, p);
            }
        }
    }
    MulticastTree::from_parent_map(c, parent).map_err(|e| Error::CorruptParentArray(e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::multihop::fixtures::build;
    use crate::topology::Position;

    use NodeKind::{Plc, Wireless};

    fn area() -> DestinationArea {
        DestinationArea::new(Position::new(0.0, 0.0), 10.0).unwrap()
    }

    /// Chain a(1)-b(2)-c(3) inside the area, candidate 0 outside, attached to a.
    fn chain() -> Topology {
        build(
            &[
                (20.0, 0.0, Wireless),
                (5.0, 0.0, Plc),
                (0.0, 0.0, Plc),
                (-5.0, 0.0, Plc),
                (40.0, 0.0, Wireless),
            ],
            &[(0, 1), (1, 2), (2, 3), (0, 4)],
        )
    }

    #[test]
    fn wire_values() {
        assert_eq!(ParentEntry::Unset.wire(), -1);
        assert_eq!(ParentEntry::Root.wire(), -2);
        assert_eq!(ParentEntry::Parent(NodeId(6)).wire(), 6);
        assert_eq!(ParentEntry::from_wire(-2).unwrap(), ParentEntry::Root);
        assert!(ParentEntry::from_wire(-3).is_err());
        assert_eq!(
            serde_json::to_string(&vec![ParentEntry::Root, ParentEntry::Unset]).unwrap(),
            "[-2,-1]"
        );
    }

    #[test]
    fn candidates() {
        let t = chain();
        assert_eq!(identify_candidates(&t, &area()), vec![NodeId(0)]);
        let inside = build(
            &[
                (0.0, 0.0, Wireless),
                (50.0, 0.0, Wireless),
                (90.0, 0.0, Wireless),
            ],
            &[(0, 1), (1, 2)],
        );
        assert_eq!(
            identify_candidates(&inside, &area()),
            vec![NodeId(0), NodeId(1)]
        );
    }

    #[test]
    fn chain_flood() {
        let t = chain();
        let a = t.nodes_in_area(&area());
        let info = flood(&t, &a, NodeId(0), &LinkStatus::all_up(&t)).unwrap();
        use ParentEntry::*;
        assert_eq!(
            info.parent_array.entries,
            vec![Root, Parent(NodeId(1)), Parent(NodeId(2))]
        );
        assert_eq!(
            info.depth.values().copied().collect::<Vec<_>>(),
            vec![0, 1, 2]
        );
        assert!(info.full_coverage);
        let tree = build_area_tree(&info.parent_array).unwrap();
        assert_eq!(
            tree.path_from_root(NodeId(3)).unwrap(),
            vec![NodeId(0), NodeId(1), NodeId(2), NodeId(3)]
        );
    }

    #[test]
    fn down_link_leaves_unset() {
        let t = chain();
        let a = t.nodes_in_area(&area());
        let mut s = LinkStatus::all_up(&t);
        s.set(t.link_between(NodeId(1), NodeId(2)).unwrap(), false);
        let info = flood(&t, &a, NodeId(0), &s).unwrap();
        assert_eq!(
            info.parent_array.entries[1..],
            [ParentEntry::Unset, ParentEntry::Unset]
        );
        assert!(!info.full_coverage);
        assert_eq!(build_area_tree(&info.parent_array).unwrap().len(), 2);
    }

    #[test]
    fn diamond_prefers_lower_id() {
        // 0 outside; 1 root; 2 and 3 both at depth 1; 4 reachable from both.
        let t = build(
            &[
                (20.0, 0.0, Wireless),
                (5.0, 0.0, Plc),
                (0.0, 3.0, Plc),
                (0.0, -3.0, Plc),
                (-5.0, 0.0, Plc),
            ],
            &[(0, 1), (1, 2), (1, 3), (2, 4), (3, 4)],
        );
        let a = t.nodes_in_area(&area());
        let info = flood(&t, &a, NodeId(0), &LinkStatus::all_up(&t)).unwrap();
        assert_eq!(
            info.parent_array.get(NodeId(4)),
            Some(ParentEntry::Parent(NodeId(2)))
        );
    }

    #[test]
    fn in_area_candidate_is_root() {
        let t = build(
            &[(0.0, 0.0, Wireless), (3.0, 0.0, Plc), (50.0, 0.0, Wireless)],
            &[(0, 1), (0, 2)],
        );
        let a = t.nodes_in_area(&area());
        let info = flood(&t, &a, NodeId(0), &LinkStatus::all_up(&t)).unwrap();
        assert_eq!(
            info.parent_array.entries,
            vec![ParentEntry::Root, ParentEntry::Parent(NodeId(0))]
        );
        assert_eq!(build_area_tree(&info.parent_array).unwrap().len(), 2);
        assert_eq!(
            flood(&t, &a, NodeId(1), &LinkStatus::all_up(&t)),
            Err(Error::NotACandidate(NodeId(1)))
        );
    }

    #[test]
    fn corrupt_arrays_are_rejected() {
        use ParentEntry::*;
        let cyc = ParentArray {
            candidate: NodeId(9),
            area: vec![NodeId(1), NodeId(2)],
            entries: vec![Parent(NodeId(2)), Parent(NodeId(1))],
        };
        assert!(matches!(
            build_area_tree(&cyc),
            Err(Error::CorruptParentArray(_))
        ));
        let outside = ParentArray {
            candidate: NodeId(9),
            area: vec![NodeId(1)],
            entries: vec![Parent(NodeId(5))],
        };
        assert!(outside.validate().is_err());
        let empty = ParentArray::unset(NodeId(9), vec![NodeId(1), NodeId(2)]);
        assert_eq!(build_area_tree(&empty).unwrap().len(), 1);
    }

    #[test]
    fn packet_round_trip() {
        let t = chain();
        let a = t.nodes_in_area(&area());
        let info = flood(&t, &a, NodeId(0), &LinkStatus::all_up(&t)).unwrap();
        let p = RoutingPacket::new(&area(), &info.parent_array);
        let json = serde_json::to_string(&p).unwrap();
        assert_eq!(
            json,
            r#"{"candidate_id":0,"center_x":0.0,"center_y":0.0,"radius":10.0,"area":[1,2,3],"parents":[-2,1,2]}"#
        );
        let back: RoutingPacket = serde_json::from_str(&json).unwrap();
        assert_eq!(back.parent_array().unwrap(), info.parent_array);
    }
}
