//! Independent oracles and generators shared by the integration suites.
//!
//! Nothing here calls the crate's algorithms; only its plain data types are
//! used, so every comparison pits two separate code paths against each
//! other.

#![allow(dead_code)]

use std::collections::VecDeque;

use facloc::{CandidateSite, DemandPoint, Edge, MarketRule, Money, Network, RawPoint, Scenario};
use proptest::prelude::*;
use proptest::sample::subsequence;

pub const EXAMPLE: &str = include_str!("../../scenarios/eight_vertex_example.json");

pub fn example() -> Scenario {
    Scenario::from_json_str(EXAMPLE).unwrap()
}

/// Single-source shortest paths by FIFO label correcting. `None` marks an
/// unreachable vertex. Index 0 is unused.
pub fn label_correcting(n: usize, edges: &[Edge], src: usize) -> Vec<Option<Money>> {
    let mut adj = vec![Vec::new(); n + 1];
    for e in edges {
        adj[e.u].push((e.v, e.cost));
        adj[e.v].push((e.u, e.cost));
    }
    let mut dist = vec![None; n + 1];
    let mut queued = vec![false; n + 1];
    let mut queue = VecDeque::from([src]);
    dist[src] = Some(0);
    queued[src] = true;
    while let Some(x) = queue.pop_front() {
        queued[x] = false;
        let dx = dist[x].unwrap();
        for &(y, c) in &adj[x] {
            if dist[y].is_none_or(|dy| dx + c < dy) {
                dist[y] = Some(dx + c);
                if !queued[y] {
                    queued[y] = true;
                    queue.push_back(y);
                }
            }
        }
    }
    dist
}

/// Full distance matrix, 1-based on both axes.
pub fn oracle_matrix(n: usize, edges: &[Edge]) -> Vec<Vec<Money>> {
    let mut m = vec![vec![0; n + 1]; n + 1];
    for (u, row) in m.iter_mut().enumerate().skip(1) {
        let d = label_correcting(n, edges, u);
        for v in 1..=n {
            row[v] = d[v].expect("connected");
        }
    }
    m
}

/// Decodes a flat profile index into per-owner strategy indices, owner 0
/// most significant.
pub fn decode(shape: &[usize], mut p: usize) -> Vec<usize> {
    let mut out = vec![0; shape.len()];
    for i in (0..shape.len()).rev() {
        out[i] = p % shape[i];
        p /= shape[i];
    }
    out
}

pub fn encode(shape: &[usize], s: &[usize]) -> usize {
    let mut p = 0;
    for i in 0..shape.len() {
        p = p * shape[i] + s[i];
    }
    p
}

/// Flat row-major tensor: `payoffs[p * owners + i]`.
#[derive(Debug, Clone)]
pub struct RawTensor {
    pub shape: Vec<usize>,
    pub payoffs: Vec<Money>,
}

impl RawTensor {
    pub fn owners(&self) -> usize {
        self.shape.len()
    }

    pub fn profiles(&self) -> usize {
        self.shape.iter().product()
    }

    pub fn get(&self, p: usize, i: usize) -> Money {
        self.payoffs[p * self.owners() + i]
    }
}

/// Profiles where no owner gains strictly by a unilateral switch.
pub fn brute_nash(t: &RawTensor) -> Vec<usize> {
    let mut out = Vec::new();
    for p in 0..t.profiles() {
        let s = decode(&t.shape, p);
        let mut stable = true;
        for i in 0..t.owners() {
            for alt in 0..t.shape[i] {
                let mut d = s.clone();
                d[i] = alt;
                if t.get(encode(&t.shape, &d), i) > t.get(p, i) {
                    stable = false;
                }
            }
        }
        if stable {
            out.push(p);
        }
    }
    out
}

/// Exhaustive min-max-regret scan: (minimizers, objective).
pub fn brute_compromise(t: &RawTensor) -> (Vec<usize>, Money) {
    let ideal: Vec<Money> = (0..t.owners())
        .map(|i| (0..t.profiles()).map(|p| t.get(p, i)).max().unwrap())
        .collect();
    let gamma: Vec<Money> = (0..t.profiles())
        .map(|p| {
            (0..t.owners())
                .map(|i| ideal[i] - t.get(p, i))
                .max()
                .unwrap()
        })
        .collect();
    let best = *gamma.iter().min().unwrap();
    let set = (0..t.profiles()).filter(|&p| gamma[p] == best).collect();
    (set, best)
}

/// Straight-line net-income evaluation for every joint profile.
///
/// Returns the flat tensor in the same layout as [`RawTensor`].
pub fn naive_payoffs(sc: &Scenario, rule: MarketRule) -> RawTensor {
    let n = sc.network.vertex_count;
    let d = oracle_matrix(n, &sc.network.edges);
    let np = sc.prices.len();
    let nm = sc.production_sites.len();
    let nw = sc.distribution_sites.len();
    let s = np * nm * nw;
    let owners = sc.owner_count;
    let shape = vec![s; owners];
    let profiles: usize = shape.iter().product();
    let floor = *sc.prices.iter().min().unwrap();

    let mut payoffs = Vec::new();
    for p in 0..profiles {
        // strategy index -> (price, m, w) with distribution varying fastest
        let picks: Vec<(usize, usize, usize)> = decode(&shape, p)
            .into_iter()
            .map(|k| (k / (nm * nw), (k / nw) % nm, k % nw))
            .collect();

        let mut active = vec![true; owners];
        for i in 0..owners {
            for j in 0..i {
                if active[j]
                    && (sc.production_sites[picks[i].1].vertex
                        == sc.production_sites[picks[j].1].vertex
                        || sc.distribution_sites[picks[i].2].vertex
                            == sc.distribution_sites[picks[j].2].vertex)
                {
                    active[i] = false;
                }
            }
        }

        // (site vertex, operator, price)
        let mut sites: Vec<(usize, Option<usize>, Money)> = Vec::new();
        for w in 0..nw {
            let op = (0..owners).find(|&i| active[i] && picks[i].2 == w);
            match (op, rule) {
                (Some(i), _) => sites.push((
                    sc.distribution_sites[w].vertex,
                    Some(i),
                    sc.prices[picks[i].0],
                )),
                (None, MarketRule::AllCandidates) => {
                    sites.push((sc.distribution_sites[w].vertex, None, floor))
                }
                (None, MarketRule::OpenSites) => {}
            }
        }

        let mut served = vec![0; owners];
        for k in &sc.demand_points {
            let mut best: Option<(Money, usize, Option<usize>)> = None;
            for &(v, op, price) in &sites {
                let cost = price * k.quantity + d[k.vertex][v];
                let better = match best {
                    None => true,
                    Some((bc, bv, _)) => cost < bc || (cost == bc && v < bv),
                };
                if better {
                    best = Some((cost, v, op));
                }
            }
            if let Some((_, _, Some(i))) = best {
                served[i] += k.quantity;
            }
        }

        for i in 0..owners {
            if !active[i] {
                payoffs.push(0);
                continue;
            }
            let (pi, mi, wi) = picks[i];
            let m = sc.production_sites[mi];
            let w = sc.distribution_sites[wi];
            let q = served[i];
            let mut best_raw: Option<(Money, usize, Money)> = None;
            for r in &sc.raw_points {
                let c = r.unit_price * q + d[r.vertex][m.vertex];
                if best_raw.is_none_or(|(bc, bv, _)| c < bc || (c == bc && r.vertex < bv)) {
                    best_raw = Some((c, r.vertex, r.unit_price));
                }
            }
            let (_, lv, unit) = best_raw.unwrap();
            let revenue = sc.prices[pi] * q;
            let costs =
                d[lv][m.vertex] + d[m.vertex][w.vertex] + w.fixed_cost + m.fixed_cost + unit * q;
            payoffs.push(revenue - costs);
        }
    }
    RawTensor { shape, payoffs }
}

prop_compose! {
    /// Connected undirected graph with `1..=max_n` vertices, integer costs
    /// in `0..=max_cost`: a random spanning tree plus extra edges.
    pub fn arb_network(max_n: usize, max_cost: Money)
        (n in 1..=max_n)
        (parents in (2..=n).map(|v| 1..v).collect::<Vec<_>>(),
         tree_costs in proptest::collection::vec(0..=max_cost, n - 1),
         extra in proptest::collection::vec((1..=n, 1..=n, 0..=max_cost), 0..=n),
         n in Just(n))
        -> Network
    {
        let mut edges: Vec<Edge> = parents
            .iter()
            .zip(2..)
            .zip(&tree_costs)
            .map(|((&p, v), &c)| Edge::new(p, v, c))
            .collect();
        for (u, v, c) in extra {
            let dup = edges.iter().any(|e| (e.u == u && e.v == v) || (e.u == v && e.v == u));
            if u != v && !dup {
                edges.push(Edge::new(u, v, c));
            }
        }
        Network::new(n, edges).expect("generator builds connected graphs")
    }
}

pub fn arb_tensor(max_strategies: usize, max_owners: usize) -> impl Strategy<Value = RawTensor> {
    proptest::collection::vec(1..=max_strategies, 1..=max_owners).prop_flat_map(|shape| {
        let len = shape.iter().product::<usize>() * shape.len();
        proptest::collection::vec(-6i64..=6, len).prop_map(move |payoffs| RawTensor {
            shape: shape.clone(),
            payoffs,
        })
    })
}

/// Random valid scenario whose joint profile count is at most
/// `max_profiles`.
pub fn arb_scenario(
    max_n: usize,
    max_owners: usize,
    max_profiles: usize,
) -> impl Strategy<Value = Scenario> {
    arb_network(max_n, 9).prop_flat_map(move |net| {
        let n = net.vertex_count;
        let vertices: Vec<usize> = (1..=n).collect();
        (
            Just(net),
            proptest::collection::vec((1..=n, 0..=5i64), 1..=2),
            proptest::collection::vec((1..=n, 1..=20i64), 1..=4),
            subsequence(vertices.clone(), 1..=n.min(3)),
            proptest::collection::vec(0..=60i64, 3),
            subsequence(vertices, 1..=n.min(3)),
            proptest::collection::vec(0..=30i64, 3),
            proptest::collection::vec(0..=15i64, 1..=2),
            1..=max_owners,
        )
            .prop_map(
                move |(net, raw, demand, mut prod, pm, mut dist, pw, mut prices, owners)| {
                    let mut owners = owners.min(prod.len()).min(dist.len());
                    loop {
                        let s = prices.len() * prod.len() * dist.len();
                        if s.checked_pow(owners as u32)
                            .is_some_and(|c| c <= max_profiles)
                        {
                            break;
                        }
                        if prices.len() > 1 {
                            prices.pop();
                        } else if prod.len() > owners {
                            prod.pop();
                        } else if dist.len() > owners {
                            dist.pop();
                        } else {
                            owners -= 1;
                        }
                    }
                    let sc = Scenario {
                        network: net,
                        raw_points: raw
                            .into_iter()
                            .map(|(vertex, unit_price)| RawPoint { vertex, unit_price })
                            .collect(),
                        demand_points: demand
                            .into_iter()
                            .map(|(vertex, quantity)| DemandPoint { vertex, quantity })
                            .collect(),
                        production_sites: prod
                            .iter()
                            .zip(&pm)
                            .map(|(&v, &c)| CandidateSite::production(v, c))
                            .collect(),
                        distribution_sites: dist
                            .iter()
                            .zip(&pw)
                            .map(|(&v, &c)| CandidateSite::distribution(v, c))
                            .collect(),
                        prices,
                        owner_count: owners,
                    };
                    sc.validate().expect("generator builds valid scenarios");
                    sc
                },
            )
    })
}
