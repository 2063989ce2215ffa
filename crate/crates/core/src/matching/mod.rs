//! Matchings, b-matchings and their Gallai-Edmonds structure.
//!
//! Every b-matching computation goes through node expansion and a single blossom kernel: node
//! `i` becomes `b_i` unit copies, a maximum matching of the copies is found, and matched copy
//! pairs are folded back into edge multiplicities.

mod blossom;
pub mod ged;

pub use ged::{ged_decompose, GedClass, GedDecomposition};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::instance::{Expansion, Instance, UtilityProfile};

pub(crate) use blossom::Blossom;

/// A matching of a unit-peak graph, as a mate table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matching {
    mate: Vec<Option<usize>>,
}

impl Matching {
    pub fn empty(n: usize) -> Self {
        Matching { mate: vec![None; n] }
    }

    /// Builds a matching from a list of vertex pairs. Fails if a vertex is used twice.
    pub fn from_pairs(n: usize, pairs: &[(usize, usize)]) -> Result<Self> {
        let mut mate = vec![None; n];
        for &(a, b) in pairs {
            if a == b || a >= n || b >= n || mate[a].is_some() || mate[b].is_some() {
                return Err(Error::InvalidInput(format!("pair ({a}, {b}) is not a matching edge")));
            }
            mate[a] = Some(b);
            mate[b] = Some(a);
        }
        Ok(Matching { mate })
    }

    pub fn mates(&self) -> &[Option<usize>] {
        &self.mate
    }

    pub fn mate(&self, v: usize) -> Option<usize> {
        self.mate[v]
    }

    pub fn size(&self) -> usize {
        self.mate.iter().filter(|m| m.is_some()).count() / 2
    }

    pub fn pairs(&self) -> Vec<(usize, usize)> {
        self.mate
            .iter()
            .enumerate()
            .filter_map(|(a, m)| m.filter(|&b| a < b).map(|b| (a, b)))
            .collect()
    }
}

/// Maximum-cardinality matching of a unit-peak instance.
pub fn max_matching(inst: &Instance) -> Result<Matching> {
    if let Some(n) = inst.nodes().iter().find(|n| n.peak != 1) {
        return Err(Error::NonUnitPeak { id: n.id.clone(), peak: n.peak });
    }
    let mut adj = vec![Vec::new(); inst.len()];
    for e in inst.edges() {
        adj[e.u].push(e.v);
        adj[e.v].push(e.u);
    }
    let mut solver = Blossom::new(&adj);
    solver.solve();
    Ok(Matching { mate: solver.into_mates() })
}

/// Integral edge multiplicities over an instance's edge list.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BMatching {
    mult: Vec<u32>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MatchedEdge {
    pub u: String,
    pub v: String,
    pub mult: u32,
}

impl BMatching {
    pub fn zero(edge_count: usize) -> Self {
        BMatching { mult: vec![0; edge_count] }
    }

    pub fn from_multiplicities(mult: Vec<u32>) -> Self {
        BMatching { mult }
    }

    pub fn multiplicities(&self) -> &[u32] {
        &self.mult
    }

    pub fn multiplicity(&self, edge: usize) -> u32 {
        self.mult[edge]
    }

    /// `x_i`: total multiplicity on edges incident to each node.
    pub fn utilities(&self, inst: &Instance) -> Vec<u32> {
        let mut x = vec![0u32; inst.len()];
        for (e, &m) in inst.edges().iter().zip(&self.mult) {
            x[e.u] += m;
            x[e.v] += m;
        }
        x
    }

    pub fn total_utility(&self) -> u64 {
        2 * self.mult.iter().map(|&m| m as u64).sum::<u64>()
    }

    pub fn profile(&self, inst: &Instance) -> UtilityProfile {
        UtilityProfile::integral(inst, &self.utilities(inst))
            .unwrap_or_else(|_| panic!("b-matching exceeds a peak"))
    }

    /// Degree bounds `x_i <= b_i` and edge capacities.
    pub fn is_feasible(&self, inst: &Instance) -> bool {
        self.mult.len() == inst.edges().len()
            && inst
                .edges()
                .iter()
                .zip(&self.mult)
                .all(|(e, &m)| e.cap.is_none_or(|c| m <= c))
            && self
                .utilities(inst)
                .iter()
                .zip(inst.nodes())
                .all(|(&x, n)| x <= n.peak)
    }

    pub fn add_assign(&mut self, other: &BMatching) {
        for (a, b) in self.mult.iter_mut().zip(&other.mult) {
            *a += *b;
        }
    }

    pub fn edges(&self, inst: &Instance) -> Vec<MatchedEdge> {
        inst.edges()
            .iter()
            .zip(&self.mult)
            .filter(|(_, &m)| m > 0)
            .map(|(e, &m)| MatchedEdge {
                u: inst.id(e.u).to_string(),
                v: inst.id(e.v).to_string(),
                mult: m,
            })
            .collect()
    }
}

/// Maximum b-matching on `edges` over nodes `0..n`, with possibly-zero peaks.
pub(crate) fn max_bmatching_raw(n: usize, edges: &[(usize, usize)], peaks: &[u32]) -> Vec<u32> {
    let expansion = Expansion::new(n, edges, peaks);
    let adj = expansion.adjacency();
    let mut solver = Blossom::new(&adj);
    solver.solve();
    expansion.contract(edges.len(), solver.mates())
}

/// Maximum b-matching: expand, match, contract.
pub fn max_bmatching(inst: &Instance) -> Result<BMatching> {
    inst.require_uncapacitated()?;
    Ok(BMatching::from_multiplicities(max_bmatching_raw(
        inst.len(),
        &inst.endpoints(),
        &inst.peaks(),
    )))
}

/// Realizes exact utilities `targets[k]` for `nodes[k]` using only edges inside `nodes`.
/// Returns multiplicities over the full edge list, or `None` when no b-matching hits the targets.
pub(crate) fn realize_within(inst: &Instance, nodes: &[usize], targets: &[u32]) -> Option<Vec<u32>> {
    let mut local = vec![usize::MAX; inst.len()];
    for (k, &i) in nodes.iter().enumerate() {
        local[i] = k;
    }
    let mut sub_edges = Vec::new();
    let mut back = Vec::new();
    for (k, e) in inst.edges().iter().enumerate() {
        if local[e.u] != usize::MAX && local[e.v] != usize::MAX {
            sub_edges.push((local[e.u], local[e.v]));
            back.push(k);
        }
    }
    let sub = max_bmatching_raw(nodes.len(), &sub_edges, targets);
    let achieved: u64 = 2 * sub.iter().map(|&m| m as u64).sum::<u64>();
    let wanted: u64 = targets.iter().map(|&t| t as u64).sum();
    if achieved != wanted {
        return None;
    }
    let mut mult = vec![0u32; inst.edges().len()];
    for (k, m) in sub.into_iter().enumerate() {
        mult[back[k]] = m;
    }
    Some(mult)
}

/// Finds a b-matching whose utilities equal `targets` exactly, or `Ok(None)` if none exists.
pub fn realize_targets(inst: &Instance, targets: &[u32]) -> Result<Option<BMatching>> {
    inst.require_uncapacitated()?;
    if targets.len() != inst.len() {
        return Err(Error::MismatchedAgents);
    }
    for (i, &t) in targets.iter().enumerate() {
        if t > inst.peak(i) {
            return Err(Error::InvalidInput(format!(
                "target {t} for `{}` exceeds its peak {}",
                inst.id(i),
                inst.peak(i)
            )));
        }
    }
    let all: Vec<usize> = (0..inst.len()).collect();
    Ok(realize_within(inst, &all, targets).map(BMatching::from_multiplicities))
}
