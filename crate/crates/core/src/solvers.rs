//! Optimality principles over a payoff tensor.

use serde::Serialize;

use crate::market::PayoffTensor;
use crate::network::Money;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SolutionKind {
    Nash,
    Compromise,
}

impl SolutionKind {
    pub fn as_str(self) -> &'static str {
        match self {
            SolutionKind::Nash => "nash",
            SolutionKind::Compromise => "compromise",
        }
    }
}

/// One selected joint profile.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SolutionEntry {
    /// Position in profile enumeration order.
    pub profile: usize,
    /// Strategy index of each owner.
    pub strategies: Vec<usize>,
    pub payoffs: Vec<Money>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SolutionReport {
    pub kind: SolutionKind,
    pub entries: Vec<SolutionEntry>,
    /// Achieved min-max residual; compromise reports only.
    pub objective: Option<Money>,
}

impl SolutionReport {
    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn profiles(&self) -> Vec<usize> {
        self.entries.iter().map(|e| e.profile).collect()
    }
}

fn entry(tensor: &PayoffTensor, profile: usize) -> SolutionEntry {
    SolutionEntry {
        profile,
        strategies: tensor.strategies_of(profile),
        payoffs: tensor.payoffs(profile).to_vec(),
    }
}

/// Best payoff owner `owner` can reach from `profile` by changing only its
/// own strategy.
fn best_deviation(tensor: &PayoffTensor, profile: usize, owner: usize) -> Money {
    let stride = tensor.stride(owner);
    let radix = tensor.shape()[owner];
    let own = (profile / stride) % radix;
    let base = profile - own * stride;
    (0..radix)
        .map(|s| tensor.payoff(base + s * stride, owner))
        .max()
        .expect("every owner has a strategy")
}

/// All pure Nash equilibria, in profile order.
///
/// A profile qualifies when every owner's payoff equals the best it could
/// get by deviating alone. With two owners this is the intersection of the
/// row maxima of owner 1 and the column maxima of owner 2.
pub fn find_nash(tensor: &PayoffTensor) -> SolutionReport {
    let entries = (0..tensor.profile_count())
        .filter(|&p| {
            (0..tensor.owner_count()).all(|o| tensor.payoff(p, o) >= best_deviation(tensor, p, o))
        })
        .map(|p| entry(tensor, p))
        .collect();
    SolutionReport {
        kind: SolutionKind::Nash,
        entries,
        objective: None,
    }
}

/// Per-owner maximum payoff over all profiles.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IdealVector(pub Vec<Money>);

pub fn ideal_vector(tensor: &PayoffTensor) -> IdealVector {
    let mut best = tensor.payoffs(0).to_vec();
    for p in 1..tensor.profile_count() {
        for (b, &x) in best.iter_mut().zip(tensor.payoffs(p)) {
            *b = (*b).max(x);
        }
    }
    IdealVector(best)
}

/// Shortfall of each owner at `profile` relative to the ideal vector.
pub fn residuals(tensor: &PayoffTensor, ideal: &IdealVector, profile: usize) -> Vec<Money> {
    ideal
        .0
        .iter()
        .zip(tensor.payoffs(profile))
        .map(|(m, x)| m - x)
        .collect()
}

/// Profiles minimizing the largest residual, with the minimum as objective.
pub fn compromise_set(tensor: &PayoffTensor) -> SolutionReport {
    let ideal = ideal_vector(tensor);
    let worst: Vec<Money> = (0..tensor.profile_count())
        .map(|p| {
            residuals(tensor, &ideal, p)
                .into_iter()
                .max()
                .expect("at least one owner")
        })
        .collect();
    let best = *worst.iter().min().expect("tensor has profiles");
    let entries = worst
        .iter()
        .enumerate()
        .filter(|&(_, &g)| g == best)
        .map(|(p, _)| entry(tensor, p))
        .collect();
    SolutionReport {
        kind: SolutionKind::Compromise,
        entries,
        objective: Some(best),
    }
}
