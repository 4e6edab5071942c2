//! Competitive location of production and distribution points on a
//! transportation network.
//!
//! Owners each pick a price, a production vertex and a distribution vertex.
//! Demand points buy from the distribution point where price plus travel is
//! cheapest, and each owner earns revenue minus transport, fixed and
//! raw-material costs. Over the full table of joint placements the crate
//! finds pure Nash equilibria and the min-max-regret compromise set.
//!
//! The pipeline is
//! [`all_pairs_shortest_paths`](network::all_pairs_shortest_paths) →
//! [`payoff_tensor`](market::payoff_tensor) →
//! [`find_nash`](solvers::find_nash) / [`compromise_set`](solvers::compromise_set).

pub mod cli;
pub mod market;
pub mod network;
pub mod report;
pub mod scenario;
pub mod solvers;

pub use market::{
    allocate_demand, owner_payoff, payoff_tensor, payoff_tensor_par, profile_payoffs,
    resolve_conflicts, Allocation, MarketRule, PayoffBreakdown, PayoffTensor,
};
pub use network::{
    all_pairs_shortest_paths, DistanceOracle, Edge, Money, Network, NetworkError, VertexId,
};
pub use scenario::{
    joint_profiles, load_scenario, strategy_space, CandidateSite, DemandPoint, JointProfile,
    RawPoint, Scenario, ScenarioError, Strategy,
};
pub use solvers::{
    compromise_set, find_nash, ideal_vector, IdealVector, SolutionKind, SolutionReport,
};
