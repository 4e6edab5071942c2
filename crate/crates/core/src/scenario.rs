//! Problem instances: the network plus raw-material points, demand points,
//! candidate sites, the price menu and the number of owners.

use std::collections::HashSet;
use std::io::Read;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::network::{Edge, Money, Network, NetworkError, VertexId};

#[derive(Debug, Error)]
pub enum ScenarioError {
    #[error("failed to read scenario: {0}")]
    Io(#[from] std::io::Error),
    #[error("ParseError at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("ValidationError ({invariant}): {detail}")]
    Validation {
        invariant: &'static str,
        detail: String,
    },
    #[error(transparent)]
    Network(#[from] NetworkError),
}

impl ScenarioError {
    fn invalid(invariant: &'static str, detail: impl Into<String>) -> Self {
        ScenarioError::Validation {
            invariant,
            detail: detail.into(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RawPoint {
    pub vertex: VertexId,
    pub unit_price: Money,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DemandPoint {
    pub vertex: VertexId,
    pub quantity: Money,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SiteKind {
    Production,
    Distribution,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CandidateSite {
    pub vertex: VertexId,
    pub kind: SiteKind,
    pub fixed_cost: Money,
}

impl CandidateSite {
    pub fn production(vertex: VertexId, fixed_cost: Money) -> Self {
        CandidateSite {
            vertex,
            kind: SiteKind::Production,
            fixed_cost,
        }
    }

    pub fn distribution(vertex: VertexId, fixed_cost: Money) -> Self {
        CandidateSite {
            vertex,
            kind: SiteKind::Distribution,
            fixed_cost,
        }
    }
}

/// A complete problem instance.
///
/// All owners share the candidate sites and the price menu.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Scenario {
    pub network: Network,
    pub raw_points: Vec<RawPoint>,
    pub demand_points: Vec<DemandPoint>,
    pub production_sites: Vec<CandidateSite>,
    pub distribution_sites: Vec<CandidateSite>,
    pub prices: Vec<Money>,
    pub owner_count: usize,
}

/// One owner's choice. Every field is an index into the scenario's lists.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Strategy {
    pub price_index: usize,
    pub production_site: usize,
    pub distribution_site: usize,
}

/// One strategy per owner, in owner order.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct JointProfile {
    pub strategies: Vec<Strategy>,
}

impl Scenario {
    pub fn validate(&self) -> Result<(), ScenarioError> {
        self.network.validate()?;
        let net = &self.network;

        if self.owner_count == 0 {
            return Err(ScenarioError::invalid(
                "owners",
                "owner count must be positive",
            ));
        }
        if self.raw_points.is_empty() {
            return Err(ScenarioError::invalid(
                "raw_points",
                "at least one raw point is required",
            ));
        }
        if self.demand_points.is_empty() {
            return Err(ScenarioError::invalid(
                "demand_points",
                "at least one demand point is required",
            ));
        }
        if self.prices.is_empty() {
            return Err(ScenarioError::invalid("prices", "the price menu is empty"));
        }
        if let Some(p) = self.prices.iter().find(|&&p| p < 0) {
            return Err(ScenarioError::invalid(
                "prices",
                format!("negative price {p}"),
            ));
        }

        for r in &self.raw_points {
            check_vertex(net, "raw_points", r.vertex)?;
            if r.unit_price < 0 {
                return Err(ScenarioError::invalid(
                    "raw_points",
                    format!(
                        "raw point at vertex {} has negative unit price {}",
                        r.vertex, r.unit_price
                    ),
                ));
            }
        }
        for d in &self.demand_points {
            check_vertex(net, "demand_points", d.vertex)?;
            if d.quantity <= 0 {
                return Err(ScenarioError::invalid(
                    "demand_points",
                    format!(
                        "demand point at vertex {} has non-positive quantity {}",
                        d.vertex, d.quantity
                    ),
                ));
            }
        }
        check_sites(
            net,
            "production_sites",
            SiteKind::Production,
            &self.production_sites,
            self.owner_count,
        )?;
        check_sites(
            net,
            "distribution_sites",
            SiteKind::Distribution,
            &self.distribution_sites,
            self.owner_count,
        )?;
        Ok(())
    }

    pub fn strategy_count(&self) -> usize {
        self.prices.len() * self.production_sites.len() * self.distribution_sites.len()
    }

    /// Number of joint profiles, or `None` if it does not fit in `usize`.
    pub fn profile_count(&self) -> Option<usize> {
        let s = self.strategy_count();
        (0..self.owner_count).try_fold(1usize, |acc, _| acc.checked_mul(s))
    }

    pub fn price(&self, s: &Strategy) -> Money {
        self.prices[s.price_index]
    }

    pub fn production(&self, s: &Strategy) -> &CandidateSite {
        &self.production_sites[s.production_site]
    }

    pub fn distribution(&self, s: &Strategy) -> &CandidateSite {
        &self.distribution_sites[s.distribution_site]
    }

    pub fn total_demand(&self) -> Money {
        self.demand_points.iter().map(|d| d.quantity).sum()
    }

    /// Parses and validates a scenario document.
    pub fn from_json_str(s: &str) -> Result<Self, ScenarioError> {
        let file: ScenarioFile = serde_json::from_str(s).map_err(|e| ScenarioError::Parse {
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        })?;
        let sc = file.into_scenario();
        sc.validate()?;
        Ok(sc)
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(&ScenarioFile::from(self)).expect("scenario serializes")
    }
}

fn check_vertex(net: &Network, field: &'static str, v: VertexId) -> Result<(), ScenarioError> {
    if net.contains(v) {
        Ok(())
    } else {
        Err(ScenarioError::invalid(
            field,
            format!("vertex {v} is not in 1..={}", net.vertex_count),
        ))
    }
}

fn check_sites(
    net: &Network,
    field: &'static str,
    kind: SiteKind,
    sites: &[CandidateSite],
    owners: usize,
) -> Result<(), ScenarioError> {
    if sites.len() < owners.max(1) {
        return Err(ScenarioError::invalid(
            field,
            format!("{} candidate sites for {owners} owners", sites.len()),
        ));
    }
    let mut seen = HashSet::new();
    for s in sites {
        check_vertex(net, field, s.vertex)?;
        if s.kind != kind {
            return Err(ScenarioError::invalid(
                field,
                format!("site at vertex {} has kind {:?}", s.vertex, s.kind),
            ));
        }
        if s.fixed_cost < 0 {
            return Err(ScenarioError::invalid(
                field,
                format!(
                    "site at vertex {} has negative fixed cost {}",
                    s.vertex, s.fixed_cost
                ),
            ));
        }
        if !seen.insert(s.vertex) {
            return Err(ScenarioError::invalid(
                field,
                format!("vertex {} listed twice", s.vertex),
            ));
        }
    }
    Ok(())
}

/// Reads a scenario document from `source` and validates it.
pub fn load_scenario<R: Read>(mut source: R) -> Result<Scenario, ScenarioError> {
    let mut buf = String::new();
    source.read_to_string(&mut buf)?;
    Scenario::from_json_str(&buf)
}

/// Every strategy of one owner, ordered by (price, production, distribution).
pub fn strategy_space(sc: &Scenario) -> Vec<Strategy> {
    let mut out = Vec::with_capacity(sc.strategy_count());
    for price_index in 0..sc.prices.len() {
        for production_site in 0..sc.production_sites.len() {
            for distribution_site in 0..sc.distribution_sites.len() {
                out.push(Strategy {
                    price_index,
                    production_site,
                    distribution_site,
                });
            }
        }
    }
    out
}

/// Streams the Cartesian product of the strategy space, one factor per
/// owner. Owner 1 varies slowest.
pub fn joint_profiles(sc: &Scenario) -> JointProfiles {
    JointProfiles::new(strategy_space(sc), sc.owner_count)
}

/// Restartable iterator over joint profiles.
///
/// Internally a mixed-radix counter over strategy indices, so any profile
/// can also be addressed directly by its position.
#[derive(Debug, Clone)]
pub struct JointProfiles {
    strategies: Vec<Strategy>,
    owners: usize,
    digits: Vec<usize>,
    done: bool,
}

impl JointProfiles {
    pub fn new(strategies: Vec<Strategy>, owners: usize) -> Self {
        let done = strategies.is_empty() && owners > 0;
        JointProfiles {
            strategies,
            owners,
            digits: vec![0; owners],
            done,
        }
    }

    /// The profile at `index` in enumeration order.
    pub fn profile_at(&self, mut index: usize) -> JointProfile {
        let s = self.strategies.len();
        let mut strategies = vec![self.strategies[0]; self.owners];
        for slot in strategies.iter_mut().rev() {
            *slot = self.strategies[index % s];
            index /= s;
        }
        JointProfile { strategies }
    }
}

impl Iterator for JointProfiles {
    type Item = JointProfile;

    fn next(&mut self) -> Option<JointProfile> {
        if self.done {
            return None;
        }
        let profile = JointProfile {
            strategies: self.digits.iter().map(|&d| self.strategies[d]).collect(),
        };
        // advance, least significant digit last
        self.done = true;
        for d in self.digits.iter_mut().rev() {
            *d += 1;
            if *d < self.strategies.len() {
                self.done = false;
                break;
            }
            *d = 0;
        }
        Some(profile)
    }
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ScenarioFile {
    network: NetworkFile,
    raw_points: Vec<(VertexId, Money)>,
    demand_points: Vec<(VertexId, Money)>,
    production_sites: Vec<(VertexId, Money)>,
    distribution_sites: Vec<(VertexId, Money)>,
    prices: Vec<Money>,
    owners: usize,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct NetworkFile {
    vertices: usize,
    edges: Vec<EdgeEntry>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(untagged)]
enum EdgeEntry {
    Plain(VertexId, VertexId, Money),
    WithCapacity(VertexId, VertexId, Money, u64),
}

impl ScenarioFile {
    fn into_scenario(self) -> Scenario {
        let edges = self
            .network
            .edges
            .into_iter()
            .map(|e| match e {
                EdgeEntry::Plain(u, v, c) => Edge::new(u, v, c),
                EdgeEntry::WithCapacity(u, v, c, k) => Edge::new(u, v, c).with_capacity(k),
            })
            .collect();
        Scenario {
            network: Network {
                vertex_count: self.network.vertices,
                edges,
            },
            raw_points: self
                .raw_points
                .into_iter()
                .map(|(vertex, unit_price)| RawPoint { vertex, unit_price })
                .collect(),
            demand_points: self
                .demand_points
                .into_iter()
                .map(|(vertex, quantity)| DemandPoint { vertex, quantity })
                .collect(),
            production_sites: self
                .production_sites
                .into_iter()
                .map(|(v, c)| CandidateSite::production(v, c))
                .collect(),
            distribution_sites: self
                .distribution_sites
                .into_iter()
                .map(|(v, c)| CandidateSite::distribution(v, c))
                .collect(),
            prices: self.prices,
            owner_count: self.owners,
        }
    }
}

impl From<&Scenario> for ScenarioFile {
    fn from(sc: &Scenario) -> Self {
        ScenarioFile {
            network: NetworkFile {
                vertices: sc.network.vertex_count,
                edges: sc
                    .network
                    .edges
                    .iter()
                    .map(|e| match e.capacity {
                        None => EdgeEntry::Plain(e.u, e.v, e.cost),
                        Some(k) => EdgeEntry::WithCapacity(e.u, e.v, e.cost, k),
                    })
                    .collect(),
            },
            raw_points: sc
                .raw_points
                .iter()
                .map(|r| (r.vertex, r.unit_price))
                .collect(),
            demand_points: sc
                .demand_points
                .iter()
                .map(|d| (d.vertex, d.quantity))
                .collect(),
            production_sites: sc
                .production_sites
                .iter()
                .map(|s| (s.vertex, s.fixed_cost))
                .collect(),
            distribution_sites: sc
                .distribution_sites
                .iter()
                .map(|s| (s.vertex, s.fixed_cost))
                .collect(),
            prices: sc.prices.clone(),
            owners: sc.owner_count,
        }
    }
}
