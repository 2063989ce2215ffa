//! Bipartite flow networks built from an exchange instance.

use serde::Serialize;

use crate::error::Result;
use crate::flow::{Capacity, FlowNetwork, SINK, SOURCE};
use crate::instance::Instance;
use crate::matching::{GedClass, GedDecomposition};
use crate::rational::int;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Model {
    Divisible,
    Indivisible,
}

/// What a demand-side node stands for.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", content = "of", rename_all = "snake_case")]
pub enum DemandRole {
    /// `b_j` in the doubled network, or `c_j` for a perfectly matched or over-demanded agent.
    Mirror(usize),
    /// `c'_j` for an over-demanded agent receiving from its under-demanded neighbours.
    OverDemanded(usize),
    /// Capacity node of an odd component with at least two members.
    Component(usize),
}

/// Origin of each arc.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ArcTag {
    Supply { agent: usize },
    Demand { node: usize },
    /// Arc carrying exchange along base edge `edge` from agent `from` to agent `to`.
    Exchange { edge: usize, from: usize, to: usize },
    Mirror { agent: usize },
    Internal { agent: usize, component: usize },
}

#[derive(Clone, Debug)]
pub struct BipartiteConstruction {
    pub model: Model,
    pub net: FlowNetwork,
    /// Network node of each agent's supply copy, indexed like the instance's nodes.
    pub a_nodes: Vec<usize>,
    /// `σ -> a_i` arcs.
    pub supply_arcs: Vec<usize>,
    pub peaks: Vec<u32>,
    pub ids: Vec<String>,
    /// Demand-side nodes with their roles and `-> τ` arcs.
    pub b_nodes: Vec<(usize, DemandRole)>,
    pub demand_arcs: Vec<usize>,
    pub tags: Vec<ArcTag>,
}

impl BipartiteConstruction {
    fn empty(model: Model, inst: &Instance) -> Self {
        let mut net = FlowNetwork::new();
        let mut a_nodes = Vec::new();
        let mut supply_arcs = Vec::new();
        let mut tags = Vec::new();
        for (i, node) in inst.nodes().iter().enumerate() {
            let a = net.add_node(format!("a:{}", node.id));
            a_nodes.push(a);
            supply_arcs.push(
                net.add_arc(SOURCE, a, Capacity::Finite(int(node.peak as i128)))
                    .expect("supply arc is valid"),
            );
            tags.push(ArcTag::Supply { agent: i });
        }
        BipartiteConstruction {
            model,
            net,
            a_nodes,
            supply_arcs,
            peaks: inst.peaks(),
            ids: inst.ids(),
            b_nodes: Vec::new(),
            demand_arcs: Vec::new(),
            tags,
        }
    }

    fn add_demand(&mut self, label: String, role: DemandRole, cap: u32) -> usize {
        let b = self.net.add_node(label);
        let arc = self
            .net
            .add_arc(b, SINK, Capacity::Finite(int(cap as i128)))
            .expect("demand arc is valid");
        self.tags.push(ArcTag::Demand { node: self.b_nodes.len() });
        self.b_nodes.push((b, role));
        self.demand_arcs.push(arc);
        b
    }

    fn add_internal(&mut self, from: usize, to: usize, cap: Capacity, tag: ArcTag) -> Result<usize> {
        let arc = self.net.add_arc(from, to, cap)?;
        self.tags.push(tag);
        Ok(arc)
    }

    /// Arcs with the given tag predicate, in insertion order.
    pub fn arcs_where(&self, pred: impl Fn(&ArcTag) -> bool) -> Vec<usize> {
        (0..self.tags.len()).filter(|&k| pred(&self.tags[k])).collect()
    }

    pub fn cross_arc_count(&self) -> usize {
        self.tags
            .iter()
            .filter(|t| !matches!(t, ArcTag::Supply { .. } | ArcTag::Demand { .. }))
            .count()
    }
}

/// The doubled network: every agent appears once as a supplier and once as a demander, with one
/// arc per direction of every link. Finite link capacities go on both arcs.
pub fn build_divisible(inst: &Instance) -> BipartiteConstruction {
    let mut c = BipartiteConstruction::empty(Model::Divisible, inst);
    let b_nodes: Vec<usize> = inst
        .nodes()
        .iter()
        .enumerate()
        .map(|(j, n)| c.add_demand(format!("b:{}", n.id), DemandRole::Mirror(j), n.peak))
        .collect();
    for (k, e) in inst.edges().iter().enumerate() {
        let cap = e.cap.map_or(Capacity::Unbounded, |u| Capacity::Finite(int(u as i128)));
        for (from, to) in [(e.u, e.v), (e.v, e.u)] {
            c.add_internal(c.a_nodes[from], b_nodes[to], cap, ArcTag::Exchange { edge: k, from, to })
                .expect("cross arc is valid");
        }
    }
    c
}

/// The network of the indivisible mechanism, shaped by the Gallai-Edmonds classes.
pub fn build_indivisible(inst: &Instance, ged: &GedDecomposition) -> Result<BipartiteConstruction> {
    inst.require_uncapacitated()?;
    let mut c = BipartiteConstruction::empty(Model::Indivisible, inst);

    for i in 0..inst.len() {
        if ged.class(i) != GedClass::Under {
            let b = c.add_demand(format!("c:{}", inst.id(i)), DemandRole::Mirror(i), inst.peak(i));
            c.add_internal(c.a_nodes[i], b, Capacity::Unbounded, ArcTag::Mirror { agent: i })?;
        }
    }
    let mut over_node = vec![None; inst.len()];
    for &j in &ged.over {
        over_node[j] =
            Some(c.add_demand(format!("c':{}", inst.id(j)), DemandRole::OverDemanded(j), inst.peak(j)));
    }
    for &i in &ged.under {
        for &k in inst.incident(i) {
            let j = inst.edges()[k].other(i);
            if let Some(b) = over_node[j] {
                c.add_internal(
                    c.a_nodes[i],
                    b,
                    Capacity::Unbounded,
                    ArcTag::Exchange { edge: k, from: i, to: j },
                )?;
            }
        }
    }
    for (k, comp) in ged.components.iter().enumerate() {
        if let Some(cap) = ged.internal_caps[k] {
            let b = c.add_demand(format!("B:{}", k + 1), DemandRole::Component(k), cap);
            for &i in comp {
                c.add_internal(
                    c.a_nodes[i],
                    b,
                    Capacity::Unbounded,
                    ArcTag::Internal { agent: i, component: k },
                )?;
            }
        }
    }
    Ok(c)
}
