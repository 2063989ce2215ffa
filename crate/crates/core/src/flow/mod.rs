//! Exact-rational maximum flow and minimum cut on source/sink networks.

mod decompose;

pub use decompose::{decompose_max_flow, ConvexCombination};

use std::collections::VecDeque;

use num_traits::Zero;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::rational::{self, Exact, Rational};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Capacity {
    Finite(Rational),
    Unbounded,
}

impl Capacity {
    pub fn finite(&self) -> Option<Rational> {
        match self {
            Capacity::Finite(c) => Some(*c),
            Capacity::Unbounded => None,
        }
    }

    fn admits(&self, amount: &Rational) -> bool {
        match self {
            Capacity::Finite(c) => amount <= c,
            Capacity::Unbounded => true,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Arc {
    pub from: usize,
    pub to: usize,
    pub cap: Capacity,
}

/// Directed network with a distinguished source (node 0) and sink (node 1).
#[derive(Clone, Debug)]
pub struct FlowNetwork {
    labels: Vec<String>,
    arcs: Vec<Arc>,
    /// Arc indices leaving / entering each node.
    out: Vec<Vec<usize>>,
    into: Vec<Vec<usize>>,
}

pub const SOURCE: usize = 0;
pub const SINK: usize = 1;

impl Default for FlowNetwork {
    fn default() -> Self {
        Self::new()
    }
}

impl FlowNetwork {
    pub fn new() -> Self {
        FlowNetwork {
            labels: vec!["source".into(), "sink".into()],
            arcs: Vec::new(),
            out: vec![Vec::new(), Vec::new()],
            into: vec![Vec::new(), Vec::new()],
        }
    }

    pub fn source(&self) -> usize {
        SOURCE
    }

    pub fn sink(&self) -> usize {
        SINK
    }

    pub fn add_node(&mut self, label: impl Into<String>) -> usize {
        self.labels.push(label.into());
        self.out.push(Vec::new());
        self.into.push(Vec::new());
        self.labels.len() - 1
    }

    pub fn add_arc(&mut self, from: usize, to: usize, cap: Capacity) -> Result<usize> {
        let n = self.labels.len();
        if from >= n || to >= n || from == to {
            return Err(Error::InvalidNetwork(format!("bad arc {from} -> {to}")));
        }
        if to == SOURCE || from == SINK {
            return Err(Error::InvalidNetwork("arcs may not enter the source or leave the sink".into()));
        }
        match cap {
            Capacity::Finite(c) if c < rational::zero() => {
                return Err(Error::InvalidNetwork("negative capacity".into()))
            }
            Capacity::Unbounded if from == SOURCE || to == SINK => {
                return Err(Error::InvalidNetwork(
                    "source and sink arcs need finite capacities".into(),
                ))
            }
            _ => {}
        }
        self.arcs.push(Arc { from, to, cap });
        self.out[from].push(self.arcs.len() - 1);
        self.into[to].push(self.arcs.len() - 1);
        Ok(self.arcs.len() - 1)
    }

    /// Replaces the capacity of a source or sink arc.
    pub fn set_capacity(&mut self, arc: usize, cap: Rational) {
        assert!(cap >= rational::zero());
        self.arcs[arc].cap = Capacity::Finite(cap);
    }

    pub fn node_count(&self) -> usize {
        self.labels.len()
    }

    pub fn arcs(&self) -> &[Arc] {
        &self.arcs
    }

    pub fn arc(&self, k: usize) -> &Arc {
        &self.arcs[k]
    }

    pub fn label(&self, v: usize) -> &str {
        &self.labels[v]
    }

    pub fn out_arcs(&self, v: usize) -> &[usize] {
        &self.out[v]
    }

    pub fn in_arcs(&self, v: usize) -> &[usize] {
        &self.into[v]
    }

    /// Capacity of the arcs leaving `side` (nodes with `side[v] == true`).
    pub fn cut_capacity(&self, side: &[bool]) -> Capacity {
        let mut total = rational::zero();
        for a in &self.arcs {
            if side[a.from] && !side[a.to] {
                match a.cap {
                    Capacity::Finite(c) => total += c,
                    Capacity::Unbounded => return Capacity::Unbounded,
                }
            }
        }
        Capacity::Finite(total)
    }

    pub fn has_integral_capacities(&self) -> bool {
        self.arcs.iter().all(|a| match a.cap {
            Capacity::Finite(c) => rational::is_integral(&c),
            Capacity::Unbounded => true,
        })
    }
}

/// Arc-wise flow amounts and the net value out of the source.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Flow {
    pub amounts: Vec<Rational>,
    pub value: Rational,
}

#[derive(Serialize)]
struct ArcFlow {
    from: String,
    to: String,
    amount: Exact,
}

impl Flow {
    pub fn zero(net: &FlowNetwork) -> Self {
        Flow {
            amounts: vec![rational::zero(); net.arcs().len()],
            value: rational::zero(),
        }
    }

    /// Builds a flow from arc amounts, computing its value.
    pub fn from_amounts(net: &FlowNetwork, amounts: Vec<Rational>) -> Self {
        let value = net.out_arcs(SOURCE).iter().map(|&k| amounts[k]).sum();
        Flow { amounts, value }
    }

    pub fn is_integral(&self) -> bool {
        self.amounts.iter().all(rational::is_integral)
    }

    /// Bounds, conservation and value.
    pub fn check_feasible(&self, net: &FlowNetwork) -> Result<()> {
        if self.amounts.len() != net.arcs().len() {
            return Err(Error::InvalidInput("flow has the wrong number of arcs".into()));
        }
        for (k, (a, f)) in net.arcs().iter().zip(&self.amounts).enumerate() {
            if *f < rational::zero() || !a.cap.admits(f) {
                return Err(Error::InvalidInput(format!("arc {k} carries {} outside its bounds", Exact(*f))));
            }
        }
        for v in 0..net.node_count() {
            if v == SOURCE || v == SINK {
                continue;
            }
            let inflow: Rational = net.in_arcs(v).iter().map(|&k| self.amounts[k]).sum();
            let outflow: Rational = net.out_arcs(v).iter().map(|&k| self.amounts[k]).sum();
            if inflow != outflow {
                return Err(Error::InvalidInput(format!(
                    "conservation fails at `{}`",
                    net.label(v)
                )));
            }
        }
        let value: Rational = net.out_arcs(SOURCE).iter().map(|&k| self.amounts[k]).sum();
        if value != self.value {
            return Err(Error::InvalidInput("stated value differs from source outflow".into()));
        }
        Ok(())
    }

    pub fn to_json(&self, net: &FlowNetwork) -> serde_json::Value {
        let arcs: Vec<ArcFlow> = net
            .arcs()
            .iter()
            .zip(&self.amounts)
            .filter(|(_, f)| !f.is_zero())
            .map(|(a, f)| ArcFlow {
                from: net.label(a.from).to_string(),
                to: net.label(a.to).to_string(),
                amount: Exact(*f),
            })
            .collect();
        serde_json::json!({ "value": Exact(self.value), "arcs": arcs })
    }
}

/// Residual capacity of arc `k` traversed forward (`true`) or backward. `None` is infinite.
fn residual(net: &FlowNetwork, flow: &Flow, k: usize, forward: bool) -> Option<Rational> {
    if forward {
        net.arcs[k].cap.finite().map(|c| c - flow.amounts[k])
    } else {
        Some(flow.amounts[k])
    }
}

fn positive(r: &Option<Rational>) -> bool {
    r.is_none_or(|x| x > rational::zero())
}

/// Nodes reachable from the source in the residual network.
pub fn residual_reachable_from_source(net: &FlowNetwork, flow: &Flow) -> Vec<bool> {
    let mut seen = vec![false; net.node_count()];
    seen[SOURCE] = true;
    let mut queue = VecDeque::from([SOURCE]);
    while let Some(v) = queue.pop_front() {
        let steps = net.out[v]
            .iter()
            .map(|&k| (k, true, net.arcs[k].to))
            .chain(net.into[v].iter().map(|&k| (k, false, net.arcs[k].from)));
        for (k, fwd, w) in steps {
            if !seen[w] && positive(&residual(net, flow, k, fwd)) {
                seen[w] = true;
                queue.push_back(w);
            }
        }
    }
    seen
}

/// Nodes that can still reach the sink in the residual network.
pub fn residual_reaching_sink(net: &FlowNetwork, flow: &Flow) -> Vec<bool> {
    let mut seen = vec![false; net.node_count()];
    seen[SINK] = true;
    let mut queue = VecDeque::from([SINK]);
    while let Some(w) = queue.pop_front() {
        // A residual step v -> w exists via a forward arc v->w or a backward arc w->v.
        let steps = net.into[w]
            .iter()
            .map(|&k| (k, true, net.arcs[k].from))
            .chain(net.out[w].iter().map(|&k| (k, false, net.arcs[k].to)));
        for (k, fwd, v) in steps {
            if !seen[v] && positive(&residual(net, flow, k, fwd)) {
                seen[v] = true;
                queue.push_back(v);
            }
        }
    }
    seen
}

/// Continues augmenting along shortest residual paths from a feasible starting flow.
pub fn augment_from(net: &FlowNetwork, mut flow: Flow) -> Flow {
    loop {
        let mut pred: Vec<Option<(usize, bool)>> = vec![None; net.node_count()];
        let mut seen = vec![false; net.node_count()];
        seen[SOURCE] = true;
        let mut queue = VecDeque::from([SOURCE]);
        while let Some(v) = queue.pop_front() {
            if v == SINK {
                break;
            }
            let steps = net.out[v]
                .iter()
                .map(|&k| (k, true, net.arcs[k].to))
                .chain(net.into[v].iter().map(|&k| (k, false, net.arcs[k].from)));
            for (k, fwd, w) in steps {
                if !seen[w] && positive(&residual(net, &flow, k, fwd)) {
                    seen[w] = true;
                    pred[w] = Some((k, fwd));
                    queue.push_back(w);
                }
            }
        }
        if !seen[SINK] {
            return flow;
        }
        let mut path = Vec::new();
        let mut v = SINK;
        while v != SOURCE {
            let (k, fwd) = pred[v].expect("path reaches the source");
            path.push((k, fwd));
            v = if fwd { net.arcs[k].from } else { net.arcs[k].to };
        }
        let delta = path
            .iter()
            .filter_map(|&(k, fwd)| residual(net, &flow, k, fwd))
            .min()
            .expect("source arcs are finite");
        for &(k, fwd) in &path {
            if fwd {
                flow.amounts[k] += delta;
            } else {
                flow.amounts[k] -= delta;
            }
        }
        flow.value += delta;
    }
}

/// Maximum flow by shortest augmenting paths. Integral capacities give an integral flow.
pub fn max_flow(net: &FlowNetwork) -> Flow {
    augment_from(net, Flow::zero(net))
}

pub fn is_maximum(net: &FlowNetwork, flow: &Flow) -> bool {
    flow.check_feasible(net).is_ok() && !residual_reachable_from_source(net, flow)[SINK]
}

/// Source side of the minimum cut certified by `flow` (the smallest one).
pub fn min_cut(net: &FlowNetwork, flow: &Flow) -> Result<Vec<usize>> {
    flow.check_feasible(net)?;
    let side = residual_reachable_from_source(net, flow);
    certify(net, flow, &side)?;
    Ok((0..net.node_count()).filter(|&v| side[v]).collect())
}

/// Source side of the largest minimum cut: everything that cannot reach the sink.
pub fn maximal_min_cut(net: &FlowNetwork, flow: &Flow) -> Result<Vec<bool>> {
    flow.check_feasible(net)?;
    let reach = residual_reaching_sink(net, flow);
    let side: Vec<bool> = reach.iter().map(|r| !r).collect();
    certify(net, flow, &side)?;
    Ok(side)
}

fn certify(net: &FlowNetwork, flow: &Flow, side: &[bool]) -> Result<()> {
    if !side[SOURCE] || side[SINK] {
        return Err(Error::NotMaximum("an augmenting path remains".into()));
    }
    match net.cut_capacity(side) {
        Capacity::Finite(c) if c == flow.value => Ok(()),
        Capacity::Finite(c) => Err(Error::NotMaximum(format!(
            "cut capacity {} differs from flow value {}",
            Exact(c),
            Exact(flow.value)
        ))),
        Capacity::Unbounded => Err(Error::NotMaximum("cut is unbounded".into())),
    }
}
