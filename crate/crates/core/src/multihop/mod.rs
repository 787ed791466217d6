//! Multihop geocast inside the destination area.
//!
//! Candidates (wireless nodes touching the area) flood a routing packet
//! over the up links of the area; each flood leaves a parent array that
//! doubles as a delivery tree. [`hybrid_plan`] serves the area with the two
//! most reliable fully covering candidates, [`multiple_plan`] with every
//! candidate that is closest to some node.

mod flood;
mod plan;

pub use flood::{
    build_area_tree, flood, identify_candidates, CandidateInfo, ParentArray, ParentEntry,
    RoutingPacket,
};
pub use plan::{
    deliver, hybrid_plan, multiple_plan, DistributionTier, MulticastPlan, PlanAlgorithm,
    PlanOptions,
};
