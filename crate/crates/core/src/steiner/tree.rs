use std::collections::{BTreeMap, BTreeSet, VecDeque};

use serde::{Deserialize, Serialize};

use super::EdgeWeights;
use crate::error::{Error, Result};
use crate::topology::NodeId;

/// Rooted tree stored as a parent map; the root has no entry.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MulticastTree {
    root: NodeId,
    parent: BTreeMap<NodeId, NodeId>,
}

impl MulticastTree {
    pub fn singleton(root: NodeId) -> Self {
        Self {
            root,
            parent: BTreeMap::new(),
        }
    }

    /// Validates that every parent chain terminates at `root`.
    pub fn from_parent_map(root: NodeId, parent: BTreeMap<NodeId, NodeId>) -> Result<Self> {
        if parent.contains_key(&root) {
            return Err(Error::CorruptTree(format!("root {root} has a parent")));
        }
        let tree = Self { root, parent };
        let mut settled: BTreeSet<NodeId> = BTreeSet::from([root]);
        for &start in tree.parent.keys() {
            let mut chain = Vec::new();
            let mut cur = start;
            while !settled.contains(&cur) {
                if chain.len() > tree.parent.len() {
                    return Err(Error::CorruptTree(format!("cycle through {start}")));
                }
                chain.push(cur);
                cur = *tree.parent.get(&cur).ok_or_else(|| {
                    Error::CorruptTree(format!("{cur} is detached from the root"))
                })?;
            }
            settled.extend(chain);
        }
        Ok(tree)
    }

    /// Orients an undirected acyclic edge set away from `root`.
    pub fn from_edges(root: NodeId, edges: &[(NodeId, NodeId)]) -> Result<Self> {
        let mut adj: BTreeMap<NodeId, Vec<NodeId>> = BTreeMap::new();
        for &(a, b) in edges {
            adj.entry(a).or_default().push(b);
            adj.entry(b).or_default().push(a);
        }
        let tree = Self::search(root, |u| adj.get(&u).cloned().unwrap_or_default());
        let nodes: BTreeSet<_> = edges.iter().flat_map(|&(a, b)| [a, b]).collect();
        if tree.parent.len() != edges.len() || nodes.iter().any(|v| !tree.contains(*v)) {
            return Err(Error::CorruptTree(
                "edge set is not a tree containing the root".into(),
            ));
        }
        Ok(tree)
    }

    /// BFS over directed edges from `root`; each node keeps its first
    /// discovered parent (neighbors visited in ascending order).
    pub fn from_directed_edges(root: NodeId, edges: &[(NodeId, NodeId)]) -> Self {
        let mut adj: BTreeMap<NodeId, Vec<NodeId>> = BTreeMap::new();
        for &(a, b) in edges {
            adj.entry(a).or_default().push(b);
        }
        Self::search(root, |u| adj.get(&u).cloned().unwrap_or_default())
    }

    fn search(root: NodeId, next: impl Fn(NodeId) -> Vec<NodeId>) -> Self {
        let mut parent = BTreeMap::new();
        let mut seen = BTreeSet::from([root]);
        let mut queue = VecDeque::from([root]);
        while let Some(u) = queue.pop_front() {
            let mut nbrs = next(u);
            nbrs.sort();
            for v in nbrs {
                if seen.insert(v) {
                    parent.insert(v, u);
                    queue.push_back(v);
                }
            }
        }
        Self { root, parent }
    }

    pub fn root(&self) -> NodeId {
        self.root
    }

    pub fn parent(&self, v: NodeId) -> Option<NodeId> {
        self.parent.get(&v).copied()
    }

    pub fn parents(&self) -> &BTreeMap<NodeId, NodeId> {
        &self.parent
    }

    pub fn contains(&self, v: NodeId) -> bool {
        v == self.root || self.parent.contains_key(&v)
    }

    /// Number of nodes including the root.
    pub fn len(&self) -> usize {
        self.parent.len() + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn members(&self) -> Vec<NodeId> {
        let mut m: Vec<_> = self.parent.keys().copied().collect();
        m.push(self.root);
        m.sort();
        m
    }

    /// Directed `(parent, child)` links, ordered by child.
    pub fn edges(&self) -> Vec<(NodeId, NodeId)> {
        self.parent.iter().map(|(&c, &p)| (p, c)).collect()
    }

    /// Root-to-`v` node sequence.
    pub fn path_from_root(&self, v: NodeId) -> Option<Vec<NodeId>> {
        if !self.contains(v) {
            return None;
        }
        let mut path = vec![v];
        let mut cur = v;
        while let Some(p) = self.parent(cur) {
            path.push(p);
            cur = p;
        }
        path.reverse();
        Some(path)
    }

    pub fn depth(&self, v: NodeId) -> Option<usize> {
        self.path_from_root(v).map(|p| p.len() - 1)
    }

    /// Weight of the root-to-`v` path.
    pub fn path_weight(&self, v: NodeId, weights: &EdgeWeights) -> Result<f64> {
        let path = self.path_from_root(v).ok_or(Error::UnknownNode(v))?;
        path.windows(2)
            .map(|p| {
                weights
                    .get(p[0], p[1])
                    .ok_or(Error::MissingEdge(p[0], p[1]))
            })
            .sum()
    }

    /// Non-root nodes without children, ascending.
    pub fn leaves(&self) -> Vec<NodeId> {
        let inner: BTreeSet<NodeId> = self.parent.values().copied().collect();
        self.parent
            .keys()
            .copied()
            .filter(|v| !inner.contains(v))
            .collect()
    }

    /// Repeatedly removes leaves outside `keep`.
    pub fn prune(&self, keep: &BTreeSet<NodeId>) -> Self {
        let mut parent = self.parent.clone();
        let mut children: BTreeMap<NodeId, usize> = BTreeMap::new();
        for &p in parent.values() {
            *children.entry(p).or_default() += 1;
        }
        let mut stack: Vec<NodeId> = parent
            .keys()
            .copied()
            .filter(|v| !children.contains_key(v) && !keep.contains(v))
            .collect();
        while let Some(v) = stack.pop() {
            let p = parent.remove(&v).expect("leaf has a parent");
            let c = children.get_mut(&p).expect("parent counted");
            *c -= 1;
            if *c == 0 {
                children.remove(&p);
                if p != self.root && !keep.contains(&p) {
                    stack.push(p);
                }
            }
        }
        Self {
            root: self.root,
            parent,
        }
    }

    /// Keeps only the paths from the root to `targets`.
    pub fn restrict_to(&self, targets: &BTreeSet<NodeId>) -> Self {
        let mut parent = BTreeMap::new();
        for &t in targets {
            let mut cur = t;
            while let Some(p) = self.parent(cur) {
                if parent.insert(cur, p).is_some() {
                    break;
                }
                cur = p;
            }
        }
        Self {
            root: self.root,
            parent,
        }
    }

    pub fn to_document(&self, cost: f64) -> TreeDocument {
        TreeDocument {
            root: self.root,
            parents: self.parent.clone(),
            cost,
        }
    }
}

/// Serialized tree: `{root, parents: {child: parent}, cost}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TreeDocument {
    pub root: NodeId,
    pub parents: BTreeMap<NodeId, NodeId>,
    #[serde(serialize_with = "crate::format::ser_sig9")]
    pub cost: f64,
}

impl TreeDocument {
    pub fn into_tree(self) -> Result<MulticastTree> {
        MulticastTree::from_parent_map(self.root, self.parents)
    }
}

/// Sum of `parent -> child` weights over the tree.
pub fn tree_cost(tree: &MulticastTree, weights: &EdgeWeights) -> Result<f64> {
    tree.edges()
        .into_iter()
        .map(|(p, c)| weights.get(p, c).ok_or(Error::MissingEdge(p, c)))
        .sum()
}
