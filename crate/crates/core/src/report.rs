//! Rendering of solver results and intermediate tables.
//!
//! Every number is printed as an exact integer. Vertex labels are the
//! 1-based ids from the scenario file.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::market::{Allocation, PayoffBreakdown};
use crate::network::{DistanceOracle, Money, VertexId};
use crate::scenario::{Scenario, Strategy};
use crate::solvers::SolutionReport;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Table,
    Json,
    Csv,
}

/// An owner's placement in report form.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct OwnerChoice {
    pub price: Money,
    pub production_vertex: VertexId,
    pub distribution_vertex: VertexId,
}

impl OwnerChoice {
    pub fn of(sc: &Scenario, s: &Strategy) -> Self {
        OwnerChoice {
            price: sc.price(s),
            production_vertex: sc.production(s).vertex,
            distribution_vertex: sc.distribution(s).vertex,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProfileReport {
    pub owners: Vec<OwnerChoice>,
    pub payoffs: Vec<Money>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub objective: Option<Money>,
}

/// Machine-readable form of a [`SolutionReport`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SolutionDocument {
    pub solver: String,
    pub profiles: Vec<ProfileReport>,
}

impl SolutionDocument {
    pub fn new(sc: &Scenario, strategies: &[Strategy], report: &SolutionReport) -> Self {
        let profiles = report
            .entries
            .iter()
            .map(|e| ProfileReport {
                owners: e
                    .strategies
                    .iter()
                    .map(|&i| OwnerChoice::of(sc, &strategies[i]))
                    .collect(),
                payoffs: e.payoffs.clone(),
                objective: report.objective,
            })
            .collect();
        SolutionDocument {
            solver: report.kind.as_str().to_string(),
            profiles,
        }
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => {
                let mut s = serde_json::to_string_pretty(self).expect("report serializes");
                s.push('\n');
                s
            }
            Format::Csv => self.to_csv(),
            Format::Table => self.to_table(),
        }
    }

    fn to_table(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "solver: {}", self.solver);
        if self.profiles.is_empty() {
            let _ = writeln!(out, "no pure equilibrium");
        }
        if let Some(obj) = self.profiles.first().and_then(|p| p.objective) {
            let _ = writeln!(out, "objective: {obj}");
        }
        for p in &self.profiles {
            let owners: Vec<String> = p
                .owners
                .iter()
                .enumerate()
                .map(|(i, o)| {
                    format!(
                        "R{}: price {}, production@{}, distribution@{}",
                        i + 1,
                        o.price,
                        o.production_vertex,
                        o.distribution_vertex
                    )
                })
                .collect();
            let _ = writeln!(out, "{}; payoffs ({})", owners.join("; "), join(&p.payoffs));
        }
        out
    }

    fn to_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record([
            "solver",
            "profile",
            "owner",
            "price",
            "production_vertex",
            "distribution_vertex",
            "payoff",
            "objective",
        ])
        .expect("in-memory write");
        for (i, p) in self.profiles.iter().enumerate() {
            for (o, (choice, pay)) in p.owners.iter().zip(&p.payoffs).enumerate() {
                w.write_record([
                    self.solver.clone(),
                    (i + 1).to_string(),
                    (o + 1).to_string(),
                    choice.price.to_string(),
                    choice.production_vertex.to_string(),
                    choice.distribution_vertex.to_string(),
                    pay.to_string(),
                    p.objective.map(|x| x.to_string()).unwrap_or_default(),
                ])
                .expect("in-memory write");
            }
        }
        finish_csv(w)
    }
}

/// Demand-by-site distances plus the full distance matrix.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DistanceDocument {
    pub demand_vertices: Vec<VertexId>,
    pub distribution_vertices: Vec<VertexId>,
    pub demand_distribution: Vec<Vec<Money>>,
    pub all_pairs: Vec<Vec<Money>>,
}

impl DistanceDocument {
    pub fn new(sc: &Scenario, oracle: &DistanceOracle) -> Self {
        let demand_vertices: Vec<_> = sc.demand_points.iter().map(|d| d.vertex).collect();
        let distribution_vertices: Vec<_> =
            sc.distribution_sites.iter().map(|w| w.vertex).collect();
        let demand_distribution = demand_vertices
            .iter()
            .map(|&k| {
                distribution_vertices
                    .iter()
                    .map(|&w| oracle.dist(k, w))
                    .collect()
            })
            .collect();
        DistanceDocument {
            demand_vertices,
            distribution_vertices,
            demand_distribution,
            all_pairs: oracle.matrix(),
        }
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => {
                let mut s = serde_json::to_string_pretty(self).expect("report serializes");
                s.push('\n');
                s
            }
            Format::Csv => {
                let mut w = csv::Writer::from_writer(Vec::new());
                w.write_record(["table", "from", "to", "distance"])
                    .expect("in-memory write");
                for (k, row) in self.demand_vertices.iter().zip(&self.demand_distribution) {
                    for (wv, d) in self.distribution_vertices.iter().zip(row) {
                        w.write_record([
                            "demand_distribution",
                            &k.to_string(),
                            &wv.to_string(),
                            &d.to_string(),
                        ])
                        .expect("in-memory write");
                    }
                }
                for (u, row) in self.all_pairs.iter().enumerate() {
                    for (v, d) in row.iter().enumerate() {
                        w.write_record([
                            "all_pairs",
                            &(u + 1).to_string(),
                            &(v + 1).to_string(),
                            &d.to_string(),
                        ])
                        .expect("in-memory write");
                    }
                }
                finish_csv(w)
            }
            Format::Table => {
                let mut out = String::from("demand x distribution\n");
                let header: Vec<String> = self
                    .distribution_vertices
                    .iter()
                    .map(|w| format!("w@{w}"))
                    .collect();
                let _ = writeln!(out, "{:>6} {}", "", pad(&header));
                for (k, row) in self.demand_vertices.iter().zip(&self.demand_distribution) {
                    let cells: Vec<String> = row.iter().map(|d| d.to_string()).collect();
                    let _ = writeln!(out, "{:>6} {}", format!("k@{k}"), pad(&cells));
                }
                out.push_str("\nall pairs\n");
                let header: Vec<String> =
                    (1..=self.all_pairs.len()).map(|v| v.to_string()).collect();
                let _ = writeln!(out, "{:>6} {}", "", pad(&header));
                for (u, row) in self.all_pairs.iter().enumerate() {
                    let cells: Vec<String> = row.iter().map(|d| d.to_string()).collect();
                    let _ = writeln!(out, "{:>6} {}", u + 1, pad(&cells));
                }
                out
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OwnerBreakdown {
    #[serde(flatten)]
    pub choice: OwnerChoice,
    pub active: bool,
    pub served: Money,
    pub revenue: Money,
    pub transport: Money,
    pub distribution_cost: Money,
    pub production_cost: Money,
    pub raw_cost: Money,
    pub net: Money,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PayoffRow {
    pub profile: usize,
    pub owners: Vec<OwnerBreakdown>,
}

impl PayoffRow {
    pub fn new(
        sc: &Scenario,
        profile: usize,
        strategies: &[Strategy],
        allocation: &Allocation,
        breakdown: &[PayoffBreakdown],
    ) -> Self {
        let owners = strategies
            .iter()
            .zip(breakdown)
            .zip(&allocation.active)
            .map(|((s, b), &active)| OwnerBreakdown {
                choice: OwnerChoice::of(sc, s),
                active,
                served: b.served,
                revenue: b.revenue,
                transport: b.transport,
                distribution_cost: b.distribution_cost,
                production_cost: b.production_cost,
                raw_cost: b.raw_cost,
                net: b.net(),
            })
            .collect();
        PayoffRow { profile, owners }
    }
}

pub fn render_payoffs(rows: &[PayoffRow], format: Format) -> String {
    match format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(&serde_json::json!({ "profiles": rows }))
                .expect("report serializes");
            s.push('\n');
            s
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record([
                "profile",
                "owner",
                "price",
                "production_vertex",
                "distribution_vertex",
                "active",
                "served",
                "revenue",
                "transport",
                "distribution_cost",
                "production_cost",
                "raw_cost",
                "net",
            ])
            .expect("in-memory write");
            for r in rows {
                for (o, b) in r.owners.iter().enumerate() {
                    w.write_record([
                        (r.profile + 1).to_string(),
                        (o + 1).to_string(),
                        b.choice.price.to_string(),
                        b.choice.production_vertex.to_string(),
                        b.choice.distribution_vertex.to_string(),
                        b.active.to_string(),
                        b.served.to_string(),
                        b.revenue.to_string(),
                        b.transport.to_string(),
                        b.distribution_cost.to_string(),
                        b.production_cost.to_string(),
                        b.raw_cost.to_string(),
                        b.net.to_string(),
                    ])
                    .expect("in-memory write");
                }
            }
            finish_csv(w)
        }
        Format::Table => {
            let mut out = String::new();
            for r in rows {
                let nets: Vec<Money> = r.owners.iter().map(|b| b.net).collect();
                let _ = writeln!(out, "profile {}: payoffs ({})", r.profile + 1, join(&nets));
                for (o, b) in r.owners.iter().enumerate() {
                    if !b.active {
                        let _ = writeln!(
                            out,
                            "  R{} price {} m@{} w@{}: blocked",
                            o + 1,
                            b.choice.price,
                            b.choice.production_vertex,
                            b.choice.distribution_vertex
                        );
                        continue;
                    }
                    let _ = writeln!(
                        out,
                        "  R{} price {} m@{} w@{}: served {} revenue {} transport {} fixed {} raw {} net {}",
                        o + 1,
                        b.choice.price,
                        b.choice.production_vertex,
                        b.choice.distribution_vertex,
                        b.served,
                        b.revenue,
                        b.transport,
                        b.distribution_cost + b.production_cost,
                        b.raw_cost,
                        b.net
                    );
                }
            }
            out
        }
    }
}

/// Where each demand point buys under one profile.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AllocationRow {
    pub profile: usize,
    pub owners: Vec<OwnerChoice>,
    pub demand: Vec<DemandRow>,
    pub served: Vec<Money>,
    pub lost: Money,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DemandRow {
    pub vertex: VertexId,
    pub quantity: Money,
    pub distribution_vertex: VertexId,
    /// 1-based owner, absent when the demand is lost.
    pub owner: Option<usize>,
}

impl AllocationRow {
    pub fn new(sc: &Scenario, profile: usize, strategies: &[Strategy], a: &Allocation) -> Self {
        AllocationRow {
            profile,
            owners: strategies.iter().map(|s| OwnerChoice::of(sc, s)).collect(),
            demand: sc
                .demand_points
                .iter()
                .zip(&a.assignment)
                .map(|(d, x)| DemandRow {
                    vertex: d.vertex,
                    quantity: d.quantity,
                    distribution_vertex: sc.distribution_sites[x.site].vertex,
                    owner: x.owner.map(|o| o + 1),
                })
                .collect(),
            served: a.served_quantity.clone(),
            lost: a.lost_quantity,
        }
    }
}

pub fn render_allocations(rows: &[AllocationRow], format: Format) -> String {
    match format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(&serde_json::json!({ "profiles": rows }))
                .expect("report serializes");
            s.push('\n');
            s
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record([
                "profile",
                "demand_vertex",
                "quantity",
                "distribution_vertex",
                "owner",
            ])
            .expect("in-memory write");
            for r in rows {
                for d in &r.demand {
                    w.write_record([
                        (r.profile + 1).to_string(),
                        d.vertex.to_string(),
                        d.quantity.to_string(),
                        d.distribution_vertex.to_string(),
                        d.owner.map(|o| o.to_string()).unwrap_or_default(),
                    ])
                    .expect("in-memory write");
                }
            }
            finish_csv(w)
        }
        Format::Table => {
            let mut out = String::new();
            for r in rows {
                let places: Vec<String> = r
                    .owners
                    .iter()
                    .enumerate()
                    .map(|(i, o)| {
                        format!(
                            "R{}=(p {}, m@{}, w@{})",
                            i + 1,
                            o.price,
                            o.production_vertex,
                            o.distribution_vertex
                        )
                    })
                    .collect();
                let _ = writeln!(out, "profile {}: {}", r.profile + 1, places.join(" "));
                for d in &r.demand {
                    let who = match d.owner {
                        Some(o) => format!("R{o}"),
                        None => "unserved".to_string(),
                    };
                    let _ = writeln!(
                        out,
                        "  k@{} ({}) -> w@{} {}",
                        d.vertex, d.quantity, d.distribution_vertex, who
                    );
                }
                let _ = writeln!(out, "  served ({}) lost {}", join(&r.served), r.lost);
            }
            out
        }
    }
}

fn join(xs: &[Money]) -> String {
    xs.iter()
        .map(|x| x.to_string())
        .collect::<Vec<_>>()
        .join(", ")
}

fn pad(cells: &[String]) -> String {
    cells
        .iter()
        .map(|c| format!("{c:>6}"))
        .collect::<Vec<_>>()
        .join(" ")
}

fn finish_csv(w: csv::Writer<Vec<u8>>) -> String {
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("csv output is utf-8")
}
