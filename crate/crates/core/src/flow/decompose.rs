use num_traits::Zero;

use super::{is_maximum, Flow, FlowNetwork};
use crate::error::{Error, Result};
use crate::rational::{self, Rational};

/// Weighted integral maximum flows whose weighted sum is a given fractional maximum flow.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConvexCombination {
    pub members: Vec<(Flow, Rational)>,
}

impl ConvexCombination {
    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// Arc-wise weighted sum of the members.
    pub fn combined(&self, arc_count: usize) -> Vec<Rational> {
        let mut sum = vec![rational::zero(); arc_count];
        for (g, w) in &self.members {
            for (s, a) in sum.iter_mut().zip(&g.amounts) {
                *s += *w * *a;
            }
        }
        sum
    }

    /// Checks weights, integrality, maximality and the exact reconstruction of `target`.
    pub fn verify(&self, net: &FlowNetwork, target: &Flow) -> Result<()> {
        let total: Rational = self.members.iter().map(|(_, w)| *w).sum();
        if total != rational::one() {
            return Err(Error::Inconsistency("weights do not sum to 1".into()));
        }
        for (g, w) in &self.members {
            if *w <= rational::zero() || *w > rational::one() {
                return Err(Error::Inconsistency("weight outside (0, 1]".into()));
            }
            if !g.is_integral() || !is_maximum(net, g) {
                return Err(Error::Inconsistency("member is not an integral maximum flow".into()));
            }
        }
        if self.combined(net.arcs().len()) != target.amounts {
            return Err(Error::Inconsistency("weighted sum differs from the flow".into()));
        }
        Ok(())
    }
}

/// Writes a fractional maximum flow as a convex combination of integral maximum flows.
///
/// Each round picks an integral flow `g` of the same value inside the box
/// `floor(f) <= g <= ceil(f)` and peels off the largest multiple of it that keeps the residual
/// `(f - t g) / (1 - t)` inside the same box. At least one fractional arc becomes integral per
/// round.
pub fn decompose_max_flow(net: &FlowNetwork, f: &Flow) -> Result<ConvexCombination> {
    if !net.has_integral_capacities() {
        return Err(Error::InvalidInput("capacities must be integral".into()));
    }
    f.check_feasible(net)?;
    if !is_maximum(net, f) {
        return Err(Error::InvalidInput("flow is not maximum".into()));
    }

    let mut members = Vec::new();
    let mut remaining = rational::one();
    let mut cur = f.clone();
    while !cur.is_integral() {
        let g = round_in_box(net, &cur);
        let mut theta = rational::one();
        for (fe, ge) in cur.amounts.iter().zip(&g) {
            if rational::is_integral(fe) {
                continue;
            }
            let part = fe - fe.floor();
            let bound = if *ge == fe.ceil() { part } else { rational::one() - part };
            theta = theta.min(bound);
        }
        debug_assert!(theta > rational::zero() && theta < rational::one());
        let scale = rational::one() - theta;
        for (fe, ge) in cur.amounts.iter_mut().zip(&g) {
            *fe = (*fe - theta * *ge) / scale;
        }
        members.push((Flow::from_amounts(net, g), remaining * theta));
        remaining *= scale;
    }
    members.push((cur, remaining));

    let combo = ConvexCombination { members };
    combo.verify(net, f)?;
    Ok(combo)
}

/// An integral flow of the same value within `[floor(f), ceil(f)]`, found by pushing around
/// cycles of fractional arcs until none remain.
fn round_in_box(net: &FlowNetwork, f: &Flow) -> Vec<Rational> {
    let mut g = f.amounts.clone();
    let n = net.node_count();
    loop {
        let fractional: Vec<usize> = (0..g.len()).filter(|&k| !rational::is_integral(&g[k])).collect();
        let Some(&start) = fractional.first() else {
            return g;
        };
        let mut incident: Vec<Vec<usize>> = vec![Vec::new(); n];
        for &k in &fractional {
            let a = net.arc(k);
            incident[a.from].push(k);
            incident[a.to].push(k);
        }
        // Walk without immediately reusing an arc; every node has 0 or at least 2 fractional
        // arcs because flow values at every node are integral.
        let mut position = vec![usize::MAX; n];
        let mut walk: Vec<(usize, bool)> = Vec::new();
        let mut v = net.arc(start).from;
        let mut last = usize::MAX;
        position[v] = 0;
        let cycle = loop {
            let k = *incident[v]
                .iter()
                .find(|&&k| k != last)
                .expect("fractional arcs form cycles");
            let a = net.arc(k);
            let forward = a.from == v;
            walk.push((k, forward));
            v = if forward { a.to } else { a.from };
            last = k;
            if position[v] != usize::MAX {
                break walk.split_off(position[v]);
            }
            position[v] = walk.len();
        };
        let mut delta: Option<Rational> = None;
        for &(k, forward) in &cycle {
            let room = if forward { g[k].ceil() - g[k] } else { g[k] - g[k].floor() };
            delta = Some(delta.map_or(room, |d: Rational| d.min(room)));
        }
        let delta = delta.expect("cycle is nonempty");
        debug_assert!(!delta.is_zero());
        for &(k, forward) in &cycle {
            if forward {
                g[k] += delta;
            } else {
                g[k] -= delta;
            }
        }
        debug_assert!(cycle.iter().any(|&(k, _)| rational::is_integral(&g[k])));
    }
}
