use thiserror::Error;

use crate::topology::NodeId;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("no links")]
    NoLinks,
    #[error("generation failed after {attempts} attempts")]
    GenerationFailed { attempts: u32 },
    #[error("placement infeasible: node {0} is beyond the hop bound of every location")]
    PlacementInfeasible(NodeId),
    #[error("exact placement supports at most {max} nodes, got {got}")]
    PlacementTooLarge { max: usize, got: usize },
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("unknown node {0}")]
    UnknownNode(NodeId),
    #[error("no path from {from} to {to}")]
    NoPath { from: NodeId, to: NodeId },
    #[error("disconnected terminal set")]
    DisconnectedTerminals,
    #[error("instance too large for exact solver ({terminals} terminals, max {max})")]
    InstanceTooLarge { terminals: usize, max: usize },
    #[error("invalid instance: {0}")]
    InvalidInstance(String),
    #[error("euclidean heuristic requires delay weights")]
    HeuristicUnsupported,
    #[error("tree edge {0}->{1} missing from weights")]
    MissingEdge(NodeId, NodeId),
    #[error("corrupt tree: {0}")]
    CorruptTree(String),
    #[error("corrupt parent array: {0}")]
    CorruptParentArray(String),
    #[error("no wireless nodes")]
    NoWirelessNodes,
    #[error("member {0} unreachable")]
    MemberUnreachable(NodeId),
    #[error("area unreachable: no candidate nodes")]
    AreaUnreachable,
    #[error("node {0} is not a candidate")]
    NotACandidate(NodeId),
    #[error("nothing delivered")]
    NothingDelivered,
    #[error("plan has no selected candidates")]
    EmptySelection,
    #[error("invalid config: {0}")]
    InvalidConfig(String),
    #[error("malformed document: {0}")]
    Malformed(String),
}
