//! Demand allocation and owner net income.
//!
//! An owner's net income for a joint profile is
//!
//! ```text
//! net = price * served - (transport + distribution_cost + production_cost + raw_cost)
//! ```
//!
//! where `transport` is the route cost raw point -> production site ->
//! distribution site, paid once per route rather than per unit.

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::network::{DistanceOracle, Money, VertexId};
use crate::scenario::{joint_profiles, JointProfile, Scenario};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MarketError {
    #[error("NoOpenSite: every owner is blocked, no distribution site is open")]
    NoOpenSite,
}

/// Which distribution sites demand points may buy from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Hash)]
pub enum MarketRule {
    /// Every candidate distribution site competes for demand. A site run by
    /// an active owner posts that owner's price; any other candidate site
    /// posts the lowest menu price, and demand it attracts goes unserved.
    /// This is the rule that reproduces the published eight-vertex tables,
    /// where an owner's income does not depend on whether the rival site is
    /// actually occupied.
    #[default]
    AllCandidates,
    /// Only the sites of active owners are open; all demand is served.
    OpenSites,
}

/// Marks which owners keep their placement.
///
/// Owners are scanned in order. An owner is blocked when its production
/// vertex matches the production vertex of an earlier active owner, or its
/// distribution vertex matches an earlier active owner's distribution
/// vertex. Blocked owners earn nothing and pay nothing.
pub fn resolve_conflicts(sc: &Scenario, profile: &JointProfile) -> Vec<bool> {
    let mut active = Vec::with_capacity(profile.strategies.len());
    for (i, s) in profile.strategies.iter().enumerate() {
        let m = sc.production(s).vertex;
        let w = sc.distribution(s).vertex;
        let clash = profile.strategies[..i]
            .iter()
            .zip(&active)
            .filter(|(_, &a)| a)
            .any(|(t, _)| sc.production(t).vertex == m || sc.distribution(t).vertex == w);
        active.push(!clash);
    }
    active
}

/// Where one demand point buys.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct DemandAssignment {
    /// Index into `distribution_sites`.
    pub site: usize,
    /// Operating owner, or `None` when the site has no active operator and
    /// the demand is lost.
    pub owner: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Allocation {
    pub active: Vec<bool>,
    /// One entry per demand point.
    pub assignment: Vec<DemandAssignment>,
    /// Units served per owner.
    pub served_quantity: Vec<Money>,
    /// Units drawn to candidate sites nobody operates.
    pub lost_quantity: Money,
}

/// Assigns every demand point to the site minimizing
/// `price * quantity + dist(demand vertex, site vertex)`.
///
/// Ties go to the lowest site vertex id, then the lowest owner index.
pub fn allocate_demand(
    sc: &Scenario,
    oracle: &DistanceOracle,
    profile: &JointProfile,
    rule: MarketRule,
) -> Result<Allocation, MarketError> {
    let active = resolve_conflicts(sc, profile);
    let floor_price = sc.prices.iter().copied().min().expect("validated menu");

    // (vertex, owner, site, price) for every site demand may go to
    let mut offers: Vec<(VertexId, Option<usize>, usize, Money)> = Vec::new();
    for (o, s) in profile.strategies.iter().enumerate() {
        if active[o] {
            offers.push((
                sc.distribution(s).vertex,
                Some(o),
                s.distribution_site,
                sc.price(s),
            ));
        }
    }
    if rule == MarketRule::AllCandidates {
        for (idx, site) in sc.distribution_sites.iter().enumerate() {
            if !offers.iter().any(|&(_, _, i, _)| i == idx) {
                offers.push((site.vertex, None, idx, floor_price));
            }
        }
    }
    if offers.is_empty() {
        return Err(MarketError::NoOpenSite);
    }
    offers.sort_by_key(|&(v, o, _, _)| (v, o.unwrap_or(usize::MAX)));

    let mut served = vec![0; profile.strategies.len()];
    let mut lost = 0;
    let assignment = sc
        .demand_points
        .iter()
        .map(|d| {
            let &(_, owner, site, _) = offers
                .iter()
                .min_by_key(|&&(v, _, _, price)| price * d.quantity + oracle.dist(d.vertex, v))
                .expect("nonempty offers");
            match owner {
                Some(o) => served[o] += d.quantity,
                None => lost += d.quantity,
            }
            DemandAssignment { site, owner }
        })
        .collect();

    Ok(Allocation {
        active,
        assignment,
        served_quantity: served,
        lost_quantity: lost,
    })
}

/// Per-owner income statement for one profile.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct PayoffBreakdown {
    pub served: Money,
    pub revenue: Money,
    pub transport: Money,
    pub distribution_cost: Money,
    pub production_cost: Money,
    pub raw_cost: Money,
    /// Raw point chosen to supply the production site, if any.
    pub raw_vertex: Option<VertexId>,
}

impl PayoffBreakdown {
    pub fn total_cost(&self) -> Money {
        self.transport + self.distribution_cost + self.production_cost + self.raw_cost
    }

    pub fn net(&self) -> Money {
        self.revenue - self.total_cost()
    }
}

/// Net income of `owner` under `profile`, given its allocation.
///
/// The raw point is the one minimizing purchase plus haul to the
/// production site, ties to the lowest vertex id.
pub fn owner_payoff(
    sc: &Scenario,
    oracle: &DistanceOracle,
    profile: &JointProfile,
    allocation: &Allocation,
    owner: usize,
) -> PayoffBreakdown {
    if !allocation.active[owner] {
        return PayoffBreakdown::default();
    }
    let s = &profile.strategies[owner];
    let served = allocation.served_quantity[owner];
    let m = sc.production(s);
    let w = sc.distribution(s);

    let raw = sc
        .raw_points
        .iter()
        .min_by_key(|r| {
            (
                r.unit_price * served + oracle.dist(r.vertex, m.vertex),
                r.vertex,
            )
        })
        .expect("validated scenario has raw points");

    PayoffBreakdown {
        served,
        revenue: sc.price(s) * served,
        transport: oracle.dist(raw.vertex, m.vertex) + oracle.dist(m.vertex, w.vertex),
        distribution_cost: w.fixed_cost,
        production_cost: m.fixed_cost,
        raw_cost: raw.unit_price * served,
        raw_vertex: Some(raw.vertex),
    }
}

/// Breakdowns for every owner under one profile.
pub fn profile_payoffs(
    sc: &Scenario,
    oracle: &DistanceOracle,
    profile: &JointProfile,
    rule: MarketRule,
) -> (Allocation, Vec<PayoffBreakdown>) {
    // owner 1 is never blocked, so some site is always open
    let allocation = allocate_demand(sc, oracle, profile, rule).expect("owner 1 is always active");
    let payoffs = (0..profile.strategies.len())
        .map(|o| owner_payoff(sc, oracle, profile, &allocation, o))
        .collect();
    (allocation, payoffs)
}

/// Net incomes for every joint profile, flattened row-major.
///
/// Profile `p` is the one at position `p` of [`joint_profiles`]; owner
/// strategy indices are its mixed-radix digits with owner 1 most
/// significant.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PayoffTensor {
    shape: Vec<usize>,
    payoffs: Vec<Money>,
}

impl PayoffTensor {
    /// `shape[i]` is owner `i`'s strategy count; `payoffs` holds one vector
    /// of `shape.len()` entries per profile.
    pub fn new(shape: Vec<usize>, payoffs: Vec<Money>) -> Self {
        assert!(!shape.is_empty(), "at least one owner");
        let profiles: usize = shape.iter().product();
        assert_eq!(
            payoffs.len(),
            profiles * shape.len(),
            "payoff count does not match shape"
        );
        PayoffTensor { shape, payoffs }
    }

    pub fn owner_count(&self) -> usize {
        self.shape.len()
    }

    pub fn shape(&self) -> &[usize] {
        &self.shape
    }

    pub fn profile_count(&self) -> usize {
        self.payoffs.len() / self.shape.len()
    }

    pub fn payoffs(&self, profile: usize) -> &[Money] {
        let n = self.shape.len();
        &self.payoffs[profile * n..(profile + 1) * n]
    }

    pub fn payoff(&self, profile: usize, owner: usize) -> Money {
        self.payoffs[profile * self.shape.len() + owner]
    }

    /// Strategy index of each owner at `profile`.
    pub fn strategies_of(&self, mut profile: usize) -> Vec<usize> {
        let mut out = vec![0; self.shape.len()];
        for (slot, &radix) in out.iter_mut().zip(&self.shape).rev() {
            *slot = profile % radix;
            profile /= radix;
        }
        out
    }

    pub fn index_of(&self, strategies: &[usize]) -> usize {
        strategies
            .iter()
            .zip(&self.shape)
            .fold(0, |acc, (&s, &radix)| acc * radix + s)
    }

    /// Distance between consecutive strategies of `owner` in profile index
    /// space.
    pub(crate) fn stride(&self, owner: usize) -> usize {
        self.shape[owner + 1..].iter().product()
    }
}

/// Builds the full payoff tensor sequentially.
pub fn payoff_tensor(sc: &Scenario, oracle: &DistanceOracle, rule: MarketRule) -> PayoffTensor {
    let shape = vec![sc.strategy_count(); sc.owner_count];
    let mut payoffs = Vec::with_capacity(shape.iter().product::<usize>() * sc.owner_count);
    for profile in joint_profiles(sc) {
        let (_, b) = profile_payoffs(sc, oracle, &profile, rule);
        payoffs.extend(b.iter().map(PayoffBreakdown::net));
    }
    PayoffTensor::new(shape, payoffs)
}

/// Same as [`payoff_tensor`], with profiles evaluated on the rayon pool.
/// The result does not depend on the number of workers.
pub fn payoff_tensor_par(sc: &Scenario, oracle: &DistanceOracle, rule: MarketRule) -> PayoffTensor {
    let shape = vec![sc.strategy_count(); sc.owner_count];
    let count: usize = shape.iter().product();
    let profiles = joint_profiles(sc);
    let payoffs = (0..count)
        .into_par_iter()
        .flat_map_iter(|i| {
            let (_, b) = profile_payoffs(sc, oracle, &profiles.profile_at(i), rule);
            b.into_iter().map(|x| x.net())
        })
        .collect();
    PayoffTensor::new(shape, payoffs)
}
