//! Multicast trees and Steiner-tree construction.
//!
//! Weights are always directed: a [`WeightKind::Delay`] weighting is
//! symmetric, a [`WeightKind::GeoF`] weighting generally is not. Trees are
//! rooted at the multicast source and their cost sums the weight of every
//! `parent -> child` link.

mod closure;
mod exact;
mod ilp;
mod kmb;
mod paths;
mod tree;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::topology::{new_cp_weights, DelayScale, LinkStatus, NodeId, Topology};

pub use closure::{metric_closure, ClosureEdge, MetricClosure};
pub use exact::{exact_steiner, EXACT_MAX_TERMINALS};
pub use ilp::{emit_ilp, Constraint, Family, IlpModel, Sense};
pub use kmb::{kmb, kmb_with, mkmb, MkmbResult};
pub use paths::{shortest_path, shortest_path_tree, Heuristic, Path, ShortestPathTree};
pub use tree::{tree_cost, MulticastTree, TreeDocument};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WeightKind {
    Delay,
    GeoF,
}

/// Directed nonnegative link weights over the usable links of a graph.
/// A link absent from the weighting (for instance a PLC link that is down)
/// cannot be traversed.
#[derive(Debug, Clone, PartialEq)]
pub struct EdgeWeights {
    kind: WeightKind,
    out: Vec<Vec<(NodeId, f64)>>,
    inc: Vec<Vec<(NodeId, f64)>>,
}

impl EdgeWeights {
    pub fn from_directed(
        n: usize,
        kind: WeightKind,
        edges: impl IntoIterator<Item = (NodeId, NodeId, f64)>,
    ) -> Result<Self> {
        let mut out = vec![Vec::new(); n];
        let mut inc = vec![Vec::new(); n];
        for (u, v, w) in edges {
            if u.idx() >= n {
                return Err(Error::UnknownNode(u));
            }
            if v.idx() >= n {
                return Err(Error::UnknownNode(v));
            }
            if u == v || !(w >= 0.0 && w.is_finite()) {
                return Err(Error::InvalidInstance(format!("bad edge {u}->{v} ({w})")));
            }
            out[u.idx()].push((v, w));
            inc[v.idx()].push((u, w));
        }
        for list in out.iter_mut().chain(inc.iter_mut()) {
            list.sort_by_key(|&(v, _)| v);
            if list.windows(2).any(|p| p[0].0 == p[1].0) {
                return Err(Error::InvalidInstance("duplicate directed edge".into()));
            }
        }
        Ok(Self { kind, out, inc })
    }

    /// Both orientations of every `(a, b, w)`.
    pub fn from_undirected(
        n: usize,
        kind: WeightKind,
        edges: impl IntoIterator<Item = (NodeId, NodeId, f64)>,
    ) -> Result<Self> {
        let both: Vec<_> = edges
            .into_iter()
            .flat_map(|(a, b, w)| [(a, b, w), (b, a, w)])
            .collect();
        Self::from_directed(n, kind, both)
    }

    /// Link delays over the links that are up in `status` (all links when
    /// `status` is `None`).
    pub fn delay(topology: &Topology, status: Option<&LinkStatus>) -> Self {
        Self::delay_where(topology, |id| status.is_none_or(|s| s.is_up(id)))
    }

    pub fn delay_where(
        topology: &Topology,
        keep: impl Fn(crate::topology::LinkId) -> bool,
    ) -> Self {
        let edges = topology
            .links()
            .iter()
            .enumerate()
            .filter(|(i, _)| keep(crate::topology::LinkId(*i)))
            .map(|(_, l)| (l.a, l.b, l.delay));
        Self::from_undirected(topology.len(), WeightKind::Delay, edges)
            .expect("topology links are valid")
    }

    /// Composite geographic weights toward `dests`: directed NewCP blended
    /// with the link delay min–max scaled onto `[0, max NewCP]`.
    pub fn geo_f(
        topology: &Topology,
        status: Option<&LinkStatus>,
        dests: &[NodeId],
        a_coef: f64,
        b_coef: f64,
    ) -> Result<Self> {
        if !(a_coef >= 0.0 && b_coef >= 0.0) {
            return Err(Error::InvalidParams(
                "weight coefficients must be nonnegative".into(),
            ));
        }
        let cp = new_cp_weights(topology, dests)?;
        let scale = DelayScale::for_topology(topology, cp.max_value());
        let mut edges = Vec::new();
        for (i, l) in topology.links().iter().enumerate() {
            let id = crate::topology::LinkId(i);
            if status.is_some_and(|s| !s.is_up(id)) {
                continue;
            }
            let delay = scale.apply(l.delay);
            edges.push((
                l.a,
                l.b,
                a_coef * cp.directed(topology, id, l.a) + b_coef * delay,
            ));
            edges.push((
                l.b,
                l.a,
                a_coef * cp.directed(topology, id, l.b) + b_coef * delay,
            ));
        }
        Self::from_directed(topology.len(), WeightKind::GeoF, edges)
    }

    pub fn kind(&self) -> WeightKind {
        self.kind
    }

    pub fn node_count(&self) -> usize {
        self.out.len()
    }

    pub fn get(&self, u: NodeId, v: NodeId) -> Option<f64> {
        let list = self.out.get(u.idx())?;
        list.binary_search_by_key(&v, |&(n, _)| n)
            .ok()
            .map(|i| list[i].1)
    }

    /// Outgoing `(head, weight)` pairs sorted by head id.
    pub fn out(&self, u: NodeId) -> &[(NodeId, f64)] {
        &self.out[u.idx()]
    }

    /// Incoming `(tail, weight)` pairs sorted by tail id.
    pub fn inc(&self, v: NodeId) -> &[(NodeId, f64)] {
        &self.inc[v.idx()]
    }

    pub fn is_symmetric(&self) -> bool {
        self.out
            .iter()
            .enumerate()
            .all(|(u, list)| list.iter().all(|&(v, w)| self.get(v, NodeId(u)) == Some(w)))
    }

    /// Unordered pairs `(a, b)`, `a < b`, joined in at least one direction.
    pub fn undirected_links(&self) -> Vec<(NodeId, NodeId)> {
        let mut pairs: Vec<_> = self
            .out
            .iter()
            .enumerate()
            .flat_map(|(u, list)| {
                list.iter()
                    .map(move |&(v, _)| (NodeId(u).min(v), NodeId(u).max(v)))
            })
            .collect();
        pairs.sort();
        pairs.dedup();
        pairs
    }

    /// Smaller of the two orientations of an undirected link.
    pub fn undirected(&self, a: NodeId, b: NodeId) -> Option<f64> {
        match (self.get(a, b), self.get(b, a)) {
            (Some(x), Some(y)) => Some(x.min(y)),
            (x, y) => x.or(y),
        }
    }
}

/// A source and its destination set over a weighting.
#[derive(Debug, Clone, Copy)]
pub struct SteinerInstance<'a> {
    pub source: NodeId,
    pub terminals: &'a [NodeId],
    pub weights: &'a EdgeWeights,
}

impl<'a> SteinerInstance<'a> {
    /// `terminals` must be sorted, nonempty, valid and exclude `source`.
    pub fn new(source: NodeId, terminals: &'a [NodeId], weights: &'a EdgeWeights) -> Result<Self> {
        let n = weights.node_count();
        if source.idx() >= n {
            return Err(Error::UnknownNode(source));
        }
        if terminals.is_empty() {
            return Err(Error::InvalidInstance("no terminals".into()));
        }
        if terminals.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidInstance(
                "terminals must be strictly ascending".into(),
            ));
        }
        if let Some(&t) = terminals.iter().find(|t| t.idx() >= n) {
            return Err(Error::UnknownNode(t));
        }
        if terminals.contains(&source) {
            return Err(Error::InvalidInstance("source among terminals".into()));
        }
        Ok(Self {
            source,
            terminals,
            weights,
        })
    }

    /// `{source} ∪ terminals`, ascending.
    pub fn terminal_set(&self) -> Vec<NodeId> {
        let mut s: Vec<_> = self.terminals.to_vec();
        s.push(self.source);
        s.sort();
        s
    }
}
