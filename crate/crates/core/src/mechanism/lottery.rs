//! Lotteries over maximum b-matchings realizing a fractional egalitarian profile.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::construction::{ArcTag, DemandRole};
use super::IndivisibleSolution;
use crate::error::{Error, Result};
use crate::flow::{decompose_max_flow, ConvexCombination, Flow};
use crate::instance::{Instance, UtilityProfile};
use crate::matching::{max_bmatching, realize_within, BMatching, MatchedEdge};
use crate::rational::{self, int, Exact, Rational};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Lottery {
    pub entries: Vec<(BMatching, Rational)>,
    pub expected: UtilityProfile,
}

#[derive(Serialize)]
struct EntryJson {
    prob: Exact,
    matching: Vec<MatchedEdge>,
}

impl Lottery {
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn to_json(&self, inst: &Instance) -> serde_json::Value {
        let entries: Vec<EntryJson> = self
            .entries
            .iter()
            .map(|(m, p)| EntryJson { prob: Exact(*p), matching: m.edges(inst) })
            .collect();
        serde_json::to_value(entries).expect("lottery serializes")
    }

    /// Probability-weighted utilities of the entries.
    pub fn expectation(inst: &Instance, entries: &[(BMatching, Rational)]) -> Vec<Rational> {
        let mut x = vec![rational::zero(); inst.len()];
        for (m, p) in entries {
            for (xi, u) in x.iter_mut().zip(m.utilities(inst)) {
                *xi += *p * int(u as i128);
            }
        }
        x
    }
}

/// Per-agent distribution of the realized utility.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Marginal {
    pub id: String,
    pub outcomes: Vec<(u32, Exact)>,
}

pub fn probabilistic_marginals(profile: &UtilityProfile) -> Vec<Marginal> {
    profile
        .iter()
        .map(|(id, x)| {
            let low = rational::floor_int(x) as u32;
            let up = *x - x.floor();
            let outcomes = if up == rational::zero() {
                vec![(low, Exact(rational::one()))]
            } else {
                vec![(low, Exact(rational::one() - up)), (low + 1, Exact(up))]
            };
            Marginal { id: id.to_string(), outcomes }
        })
        .collect()
}

/// Maps one integral maximum flow of the indivisible construction to a b-matching.
fn flow_to_matching(
    inst: &Instance,
    sol: &IndivisibleSolution,
    g: &Flow,
    perfect: &[u32],
) -> Result<BMatching> {
    let c = &sol.construction;
    let mut mult = perfect.to_vec();
    let mut targets: Vec<Vec<u32>> = sol.ged.components.iter().map(|comp| vec![0; comp.len()]).collect();
    for (k, tag) in c.tags.iter().enumerate() {
        let amount = g.amounts[k].to_integer() as u32;
        match *tag {
            ArcTag::Exchange { edge, .. } => mult[edge] += amount,
            ArcTag::Internal { agent, component } => {
                let pos = sol.ged.components[component]
                    .iter()
                    .position(|&i| i == agent)
                    .expect("agent belongs to its component");
                targets[component][pos] = amount;
            }
            _ => {}
        }
    }
    for (b, role) in &c.b_nodes {
        if let DemandRole::Component(k) = role {
            let comp = &sol.ged.components[*k];
            let inside = realize_within(inst, comp, &targets[*k]).ok_or_else(|| {
                Error::Inconsistency(format!("component of `{}` cannot absorb its flow", c.net.label(*b)))
            })?;
            for (m, add) in mult.iter_mut().zip(inside) {
                *m += add;
            }
        }
    }
    Ok(BMatching::from_multiplicities(mult))
}

/// Decomposes the egalitarian flow and maps every integral member to a maximum b-matching.
/// Identical matchings are merged.
pub fn build_lottery(inst: &Instance, sol: &IndivisibleSolution) -> Result<(Lottery, ConvexCombination)> {
    let combo = decompose_max_flow(&sol.construction.net, &sol.fill.flow)?;
    let perfect_targets: Vec<u32> = sol.ged.perfect.iter().map(|&i| inst.peak(i)).collect();
    let perfect = realize_within(inst, &sol.ged.perfect, &perfect_targets)
        .ok_or_else(|| Error::Inconsistency("perfectly matched agents have no perfect b-matching".into()))?;
    let best = max_bmatching(inst)?.total_utility();

    let mut entries: Vec<(BMatching, Rational)> = Vec::new();
    for (g, w) in &combo.members {
        let m = flow_to_matching(inst, sol, g, &perfect)?;
        if !m.is_feasible(inst) || m.total_utility() != best {
            return Err(Error::Inconsistency("lottery entry is not a maximum b-matching".into()));
        }
        match entries.iter_mut().find(|(e, _)| *e == m) {
            Some((_, p)) => *p += w,
            None => entries.push((m, *w)),
        }
    }
    if Lottery::expectation(inst, &entries) != sol.profile.values() {
        return Err(Error::Inconsistency("lottery expectation differs from the profile".into()));
    }
    let lottery = Lottery { entries, expected: sol.profile.clone() };
    Ok((lottery, combo))
}

fn draw(lottery: &Lottery, rng: &mut ChaCha8Rng, scale: i128) -> BMatching {
    let ticket = rng.random_range(0..scale);
    let mut acc = 0i128;
    for (m, p) in &lottery.entries {
        acc += (p * int(scale)).to_integer();
        if ticket < acc {
            return m.clone();
        }
    }
    unreachable!("probabilities sum to one")
}

/// One draw, deterministic in `seed`.
pub fn sample_lottery(lottery: &Lottery, seed: u64) -> BMatching {
    sample_many(lottery, seed, 1).pop().expect("one sample")
}

/// `count` independent draws from a single seeded stream.
pub fn sample_many(lottery: &Lottery, seed: u64, count: usize) -> Vec<BMatching> {
    let scale = rational::common_denominator(lottery.entries.iter().map(|(_, p)| p));
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count).map(|_| draw(lottery, &mut rng, scale)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::mechanism::solve_indivisible;
    use crate::rational::frac;

    fn lottery(inst: &Instance) -> Lottery {
        let sol = solve_indivisible(inst).unwrap();
        build_lottery(inst, &sol).unwrap().0
    }

    #[test]
    fn marginals() {
        let p = UtilityProfile::new(
            vec!["a".into(), "b".into(), "c".into()],
            vec![frac(7, 3), int(2), frac(2, 3)],
        );
        let m = probabilistic_marginals(&p);
        assert_eq!(m[0].outcomes, vec![(2, Exact(frac(2, 3))), (3, Exact(frac(1, 3)))]);
        assert_eq!(m[1].outcomes, vec![(2, Exact(int(1)))]);
        assert_eq!(m[2].outcomes, vec![(0, Exact(frac(1, 3))), (1, Exact(frac(2, 3)))]);
    }

    #[test]
    fn triangle_lottery_picks_each_edge() {
        let tri = fixtures::triangle();
        let l = lottery(&tri);
        assert_eq!(l.len(), 3);
        let mut seen = vec![0; 3];
        for (m, p) in &l.entries {
            assert_eq!(*p, frac(1, 3));
            assert_eq!(m.total_utility(), 2);
            let e = m.multiplicities().iter().position(|&x| x == 1).unwrap();
            seen[e] += 1;
        }
        assert_eq!(seen, vec![1, 1, 1]);
    }

    #[test]
    fn fifteen_agent_lottery() {
        let inst = fixtures::fifteen_agent();
        let l = lottery(&inst);
        assert_eq!(l.len(), 3);
        assert!(l.entries.iter().all(|(_, p)| *p == frac(1, 3)));
        let lucky: Vec<String> = l
            .entries
            .iter()
            .map(|(m, _)| {
                let u = m.utilities(&inst);
                ["s2", "s4", "s5"]
                    .into_iter()
                    .find(|id| u[inst.index_of(id).unwrap()] == 3)
                    .unwrap()
                    .to_string()
            })
            .collect();
        let mut sorted = lucky.clone();
        sorted.sort();
        assert_eq!(sorted, ["s2", "s4", "s5"]);
    }

    #[test]
    fn integral_profile_gives_a_single_entry() {
        let inst = Instance::uncapacitated("edge", &[("a", 2), ("b", 2)], &[("a", "b")]).unwrap();
        let l = lottery(&inst);
        assert_eq!(l.len(), 1);
        assert_eq!(l.entries[0].1, int(1));
        assert_eq!(sample_lottery(&l, 42), l.entries[0].0);
    }

    #[test]
    fn empty_graph_samples_zero_matching() {
        let inst = Instance::uncapacitated("pair", &[("a", 1), ("b", 1)], &[]).unwrap();
        let l = lottery(&inst);
        assert_eq!(sample_lottery(&l, 7), BMatching::zero(0));
    }

    #[test]
    fn sampling_frequencies_concentrate() {
        let tri = fixtures::triangle();
        let l = lottery(&tri);
        let mut counts = vec![0usize; 3];
        for seed in 0..3000u64 {
            let m = sample_lottery(&l, seed);
            counts[m.multiplicities().iter().position(|&x| x == 1).unwrap()] += 1;
        }
        assert!(counts.iter().all(|&c| (900..=1100).contains(&c)), "{counts:?}");
        assert_eq!(sample_many(&l, 5, 10), sample_many(&l, 5, 10));
    }
}
