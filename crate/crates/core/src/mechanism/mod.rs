//! Egalitarian exchange mechanisms.
//!
//! Both models reduce the exchange problem to a bipartite flow network ([`construction`]) and
//! egalitarize the supply side ([`waterfill`], cross-checked by [`lp`]). The indivisible model
//! additionally realizes its fractional profile as a lottery over maximum b-matchings
//! ([`lottery`]).

pub mod construction;
pub mod lottery;
pub mod lp;
pub mod waterfill;

pub use construction::{build_divisible, build_indivisible, ArcTag, BipartiteConstruction, DemandRole, Model};
pub use lottery::{build_lottery, probabilistic_marginals, sample_lottery, sample_many, Lottery, Marginal};
pub use waterfill::{water_fill, Breakpoint, BreakpointKind, WaterFill};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::flow::{max_flow, Capacity, Flow, FlowNetwork, SINK, SOURCE};
use crate::instance::{Instance, UtilityProfile};
use crate::matching::{ged_decompose, GedDecomposition};
use crate::rational::{self, int, Exact, Rational};

fn peaks_of(c: &BipartiteConstruction) -> Vec<Rational> {
    c.peaks.iter().map(|&p| int(p as i128)).collect()
}

/// Water-filling on the supply side of a construction.
pub fn egalitarian_profile(c: &BipartiteConstruction) -> (UtilityProfile, WaterFill) {
    let w = water_fill(&c.net, &c.supply_arcs, &peaks_of(c));
    (UtilityProfile::new(c.ids.clone(), w.values.clone()), w)
}

/// The same allocation computed round by round over the rank polymatroid.
pub fn egalitarian_lp(c: &BipartiteConstruction) -> UtilityProfile {
    let x = lp::egalitarian_lp(&c.net, &c.supply_arcs, &peaks_of(c));
    UtilityProfile::new(c.ids.clone(), x)
}

#[derive(Clone, Debug)]
pub struct IndivisibleSolution {
    pub ged: GedDecomposition,
    pub construction: BipartiteConstruction,
    pub profile: UtilityProfile,
    pub fill: WaterFill,
}

pub fn solve_indivisible(inst: &Instance) -> Result<IndivisibleSolution> {
    let ged = ged_decompose(inst)?;
    let construction = build_indivisible(inst, &ged)?;
    let (profile, fill) = egalitarian_profile(&construction);
    Ok(IndivisibleSolution { ged, construction, profile, fill })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EdgeExchange {
    pub u: String,
    pub v: String,
    pub amount: Exact,
}

#[derive(Clone, Debug)]
pub struct DivisibleSolution {
    pub construction: BipartiteConstruction,
    pub profile: UtilityProfile,
    /// Symmetric exchange per base edge.
    pub exchange: Vec<Rational>,
    /// Flow on the doubled network with both sides of every agent at its utility.
    pub flow: Flow,
}

impl DivisibleSolution {
    pub fn exchange_json(&self, inst: &Instance) -> Vec<EdgeExchange> {
        inst.edges()
            .iter()
            .zip(&self.exchange)
            .map(|(e, a)| EdgeExchange {
                u: inst.id(e.u).to_string(),
                v: inst.id(e.v).to_string(),
                amount: Exact(*a),
            })
            .collect()
    }
}

/// Divisible model: egalitarian supplies on the doubled network, then a flow that also delivers
/// exactly `x_j` to every demand copy, averaged over the two directions of each link.
pub fn egalitarian_divisible(inst: &Instance) -> Result<DivisibleSolution> {
    let construction = build_divisible(inst);
    let (profile, _) = egalitarian_profile(&construction);
    let x = profile.values();

    let mut net = construction.net.clone();
    for (i, &xi) in x.iter().enumerate() {
        net.set_capacity(construction.supply_arcs[i], xi);
        net.set_capacity(construction.demand_arcs[i], xi);
    }
    let flow = max_flow(&net);
    if flow.value != profile.total() {
        return Err(Error::Inconsistency("divisible profile is not symmetric-realizable".into()));
    }
    let mut exchange = vec![rational::zero(); inst.edges().len()];
    for (k, tag) in construction.tags.iter().enumerate() {
        if let ArcTag::Exchange { edge, .. } = tag {
            exchange[*edge] += flow.amounts[k] / int(2);
        }
    }
    let mut got = vec![rational::zero(); inst.len()];
    for (e, a) in inst.edges().iter().zip(&exchange) {
        got[e.u] += a;
        got[e.v] += a;
    }
    if got != x {
        return Err(Error::Inconsistency("exchange does not reproduce the profile".into()));
    }
    Ok(DivisibleSolution { construction, profile, exchange, flow })
}

/// Probabilistic egalitarian rule applied directly to a bipartite instance: each colour class is
/// egalitarized as suppliers facing the other class as demanders.
pub fn bipartite_egalitarian(inst: &Instance) -> Result<UtilityProfile> {
    inst.require_uncapacitated()?;
    let side = two_colouring(inst)
        .ok_or_else(|| Error::InvalidInput("instance is not bipartite".into()))?;
    let mut values = vec![rational::zero(); inst.len()];
    for colour in [false, true] {
        let mut net = FlowNetwork::new();
        let nodes: Vec<usize> = (0..inst.len()).map(|i| net.add_node(inst.id(i))).collect();
        let mut supply = Vec::new();
        let mut suppliers = Vec::new();
        for i in 0..inst.len() {
            let cap = Capacity::Finite(int(inst.peak(i) as i128));
            if side[i] == colour {
                supply.push(net.add_arc(SOURCE, nodes[i], cap)?);
                suppliers.push(i);
            } else {
                net.add_arc(nodes[i], SINK, cap)?;
            }
        }
        for e in inst.edges() {
            let (s, d) = if side[e.u] == colour { (e.u, e.v) } else { (e.v, e.u) };
            net.add_arc(nodes[s], nodes[d], Capacity::Unbounded)?;
        }
        let peaks: Vec<Rational> = suppliers.iter().map(|&i| int(inst.peak(i) as i128)).collect();
        let w = water_fill(&net, &supply, &peaks);
        for (k, &i) in suppliers.iter().enumerate() {
            values[i] = w.values[k];
        }
    }
    UtilityProfile::for_instance(inst, values)
}

/// Side assignment of a bipartite graph (first node of each component on side `false`).
pub fn two_colouring(inst: &Instance) -> Option<Vec<bool>> {
    let mut colour: Vec<Option<bool>> = vec![None; inst.len()];
    for start in 0..inst.len() {
        if colour[start].is_some() {
            continue;
        }
        colour[start] = Some(false);
        let mut stack = vec![start];
        while let Some(v) = stack.pop() {
            let c = colour[v].expect("coloured");
            for w in inst.neighbors(v) {
                match colour[w] {
                    None => {
                        colour[w] = Some(!c);
                        stack.push(w);
                    }
                    Some(d) if d == c => return None,
                    _ => {}
                }
            }
        }
    }
    Some(colour.into_iter().map(|c| c.expect("coloured")).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::rational::frac;

    fn values(p: &UtilityProfile) -> Vec<Rational> {
        p.values().to_vec()
    }

    #[test]
    fn fifteen_agent_profile() {
        let inst = fixtures::fifteen_agent();
        let sol = solve_indivisible(&inst).unwrap();
        let get = |id: &str| sol.profile.get(id).unwrap();
        for id in ["s2", "s4", "s5"] {
            assert_eq!(get(id), frac(7, 3), "{id}");
        }
        for id in ["s1", "s3", "s8"] {
            assert_eq!(get(id), int(2), "{id}");
        }
        for &i in sol.ged.over.iter().chain(&sol.ged.perfect) {
            assert_eq!(sol.profile.values()[i], int(inst.peak(i) as i128));
        }
        assert_eq!(sol.profile.total(), int(34));
        assert_eq!(egalitarian_lp(&sol.construction), sol.profile);
    }

    #[test]
    fn seven_path_profile() {
        let sol = solve_indivisible(&fixtures::path7()).unwrap();
        let q = frac(3, 4);
        let one = int(1);
        assert_eq!(values(&sol.profile), vec![q, one, q, one, q, one, q]);
        let bottleneck = sol
            .fill
            .breakpoints
            .iter()
            .find(|b| b.kind == BreakpointKind::Bottleneck)
            .unwrap();
        assert_eq!(bottleneck.lambda, Exact(q));
        assert_eq!(bottleneck.suppliers, vec![0, 2, 4, 6]);
    }

    #[test]
    fn triangle_profiles() {
        let tri = fixtures::triangle();
        let sol = solve_indivisible(&tri).unwrap();
        assert_eq!(values(&sol.profile), vec![frac(2, 3); 3]);
        assert_eq!(values(&egalitarian_lp(&sol.construction)), vec![frac(2, 3); 3]);
        let div = egalitarian_divisible(&tri).unwrap();
        assert_eq!(values(&div.profile), vec![int(1); 3]);
        assert_eq!(div.exchange, vec![frac(1, 2); 3]);
    }

    #[test]
    fn four_agent_divisible_profile() {
        let div = egalitarian_divisible(&fixtures::four_agent()).unwrap();
        assert_eq!(values(&div.profile), vec![int(2), int(3), int(3), int(2)]);
    }

    #[test]
    fn divisible_star() {
        let star = Instance::uncapacitated("star", &[("c", 1), ("x", 1), ("y", 1)], &[("c", "x"), ("c", "y")])
            .unwrap();
        let div = egalitarian_divisible(&star).unwrap();
        assert_eq!(values(&div.profile), vec![int(1), frac(1, 2), frac(1, 2)]);
    }

    #[test]
    fn isolated_agents_get_nothing() {
        let inst = Instance::uncapacitated("pair", &[("a", 1), ("b", 2)], &[]).unwrap();
        let div = egalitarian_divisible(&inst).unwrap();
        assert_eq!(values(&div.profile), vec![int(0), int(0)]);
        let sol = solve_indivisible(&inst).unwrap();
        assert_eq!(values(&sol.profile), vec![int(0), int(0)]);
    }

    #[test]
    fn big_star_centre_serves_every_leaf() {
        let inst = Instance::uncapacitated(
            "star",
            &[("c", 9), ("x", 1), ("y", 2), ("z", 3)],
            &[("c", "x"), ("c", "y"), ("c", "z")],
        )
        .unwrap();
        let sol = solve_indivisible(&inst).unwrap();
        assert_eq!(values(&sol.profile), vec![int(6), int(1), int(2), int(3)]);
    }

    #[test]
    fn bipartite_rule_on_a_path() {
        let inst = fixtures::path7();
        let direct = bipartite_egalitarian(&inst).unwrap();
        let sol = solve_indivisible(&inst).unwrap();
        assert_eq!(direct, sol.profile);
        assert!(bipartite_egalitarian(&fixtures::triangle()).is_err());
    }
}
