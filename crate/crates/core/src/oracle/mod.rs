//! Brute-force ground truth for small instances.

pub mod generate;
pub mod manipulation;

pub use manipulation::{link_manipulation_search, manipulation_experiment, Deviation, ManipulationReport, SearchSummary, Verdict};

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::instance::{Instance, UtilityProfile};
use crate::matching::BMatching;

/// Default bound on the number of expanded nodes for exhaustive enumeration.
pub const DEFAULT_LIMIT: u64 = 14;

/// Largest number of utility vectors the profile search will track.
const PROFILE_STATE_LIMIT: u64 = 1 << 20;

/// The enumeration bound, overridable through `FAIRMATCH_ORACLE_LIMIT`.
pub fn limit_from_env() -> u64 {
    std::env::var("FAIRMATCH_ORACLE_LIMIT")
        .ok()
        .and_then(|v| v.trim().parse().ok())
        .unwrap_or(DEFAULT_LIMIT)
}

/// Every feasible b-matching, each exactly once.
pub fn enumerate_bmatchings(inst: &Instance, limit: u64) -> Result<Vec<BMatching>> {
    let expanded = inst.total_peak();
    if expanded > limit {
        return Err(Error::TooLarge { expanded, limit });
    }
    fn go(inst: &Instance, k: usize, room: &mut [u32], mult: &mut Vec<u32>, out: &mut Vec<BMatching>) {
        if k == inst.edges().len() {
            out.push(BMatching::from_multiplicities(mult.clone()));
            return;
        }
        let e = &inst.edges()[k];
        let top = room[e.u].min(room[e.v]).min(e.cap.unwrap_or(u32::MAX));
        for m in 0..=top {
            room[e.u] -= m;
            room[e.v] -= m;
            mult.push(m);
            go(inst, k + 1, room, mult, out);
            mult.pop();
            room[e.u] += m;
            room[e.v] += m;
        }
    }
    let mut out = Vec::new();
    go(inst, 0, &mut inst.peaks(), &mut Vec::new(), &mut out);
    Ok(out)
}

/// Every achievable integral utility vector with one b-matching realizing it, built edge by edge.
pub fn feasible_profiles(inst: &Instance) -> Result<BTreeMap<Vec<u32>, BMatching>> {
    let m = inst.edges().len();
    let mut layer: BTreeMap<Vec<u32>, Vec<u32>> = BTreeMap::new();
    layer.insert(vec![0; inst.len()], Vec::with_capacity(m));
    for e in inst.edges() {
        let mut next = BTreeMap::new();
        for (x, mult) in &layer {
            let top = (inst.peak(e.u) - x[e.u])
                .min(inst.peak(e.v) - x[e.v])
                .min(e.cap.unwrap_or(u32::MAX));
            for k in 0..=top {
                let mut y = x.clone();
                y[e.u] += k;
                y[e.v] += k;
                next.entry(y).or_insert_with(|| {
                    let mut mm = mult.clone();
                    mm.push(k);
                    mm
                });
            }
        }
        if next.len() as u64 > PROFILE_STATE_LIMIT {
            return Err(Error::TooLarge { expanded: next.len() as u64, limit: PROFILE_STATE_LIMIT });
        }
        layer = next;
    }
    Ok(layer
        .into_iter()
        .map(|(x, mult)| (x, BMatching::from_multiplicities(mult)))
        .collect())
}

/// Profiles of maximum b-matchings.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParetoSet {
    pub total: u64,
    pub profiles: Vec<Vec<u32>>,
    pub matchings: Vec<BMatching>,
}

pub fn pareto_profiles(inst: &Instance) -> Result<ParetoSet> {
    let all = feasible_profiles(inst)?;
    let total = all
        .keys()
        .map(|x| x.iter().map(|&v| v as u64).sum::<u64>())
        .max()
        .unwrap_or(0);
    let (profiles, matchings) = all
        .into_iter()
        .filter(|(x, _)| x.iter().map(|&v| v as u64).sum::<u64>() == total)
        .unzip();
    Ok(ParetoSet { total, profiles, matchings })
}

/// Vectors not weakly dominated (with one strict improvement) by another in the set.
pub fn non_dominated(profiles: &[Vec<u32>]) -> Vec<Vec<u32>> {
    let dominates = |a: &Vec<u32>, b: &Vec<u32>| a.iter().zip(b).all(|(x, y)| x >= y) && a != b;
    profiles
        .iter()
        .filter(|&p| !profiles.iter().any(|q| dominates(q, p)))
        .cloned()
        .collect()
}

/// Maximum total utility from exchanges among `nodes` only.
pub fn max_internal_utility(inst: &Instance, nodes: &[usize]) -> Result<u64> {
    let sub = Instance::build(
        inst.name(),
        nodes.iter().map(|&i| (inst.id(i).to_string(), inst.peak(i) as i64)),
        inst.edges()
            .iter()
            .filter(|e| nodes.contains(&e.u) && nodes.contains(&e.v))
            .map(|e| (inst.id(e.u).to_string(), inst.id(e.v).to_string(), e.cap.map(i64::from))),
    )?;
    Ok(pareto_profiles(&sub)?.total)
}

/// `z` Lorenz-dominates `w` when every prefix sum of ascending `z` is at least that of `w`.
pub fn lorenz_dominates(z: &UtilityProfile, w: &UtilityProfile) -> Result<bool> {
    if z.ids() != w.ids() {
        return Err(Error::MismatchedAgents);
    }
    let mut a = z.values().to_vec();
    let mut b = w.values().to_vec();
    a.sort();
    b.sort();
    let (mut sa, mut sb) = (crate::rational::zero(), crate::rational::zero());
    for (x, y) in a.iter().zip(&b) {
        sa += x;
        sb += y;
        if sa < sb {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::rational::int;

    fn profile(v: &[i128]) -> UtilityProfile {
        UtilityProfile::new(
            (0..v.len()).map(|k| format!("n{k}")).collect(),
            v.iter().map(|&x| int(x)).collect(),
        )
    }

    #[test]
    fn enumeration_counts() {
        assert_eq!(enumerate_bmatchings(&fixtures::triangle(), 14).unwrap().len(), 4);
        let edge = Instance::uncapacitated("e", &[("a", 2), ("b", 2)], &[("a", "b")]).unwrap();
        assert_eq!(enumerate_bmatchings(&edge, 14).unwrap().len(), 3);
        let square = Instance::uncapacitated(
            "c4",
            &[("a", 1), ("b", 1), ("c", 1), ("d", 1)],
            &[("a", "b"), ("b", "c"), ("c", "d"), ("d", "a")],
        )
        .unwrap();
        assert_eq!(enumerate_bmatchings(&square, 14).unwrap().len(), 7);
        assert!(matches!(
            enumerate_bmatchings(&fixtures::fifteen_agent(), 14),
            Err(Error::TooLarge { expanded: 40, limit: 14 })
        ));
    }

    #[test]
    fn pareto_sets() {
        let p = pareto_profiles(&fixtures::triangle()).unwrap();
        assert_eq!(p.profiles, vec![vec![0, 1, 1], vec![1, 0, 1], vec![1, 1, 0]]);
        let pair = Instance::uncapacitated("pair", &[("a", 1), ("b", 1)], &[]).unwrap();
        assert_eq!(pareto_profiles(&pair).unwrap().profiles, vec![vec![0, 0]]);
        assert_eq!(pareto_profiles(&fixtures::path7()).unwrap().profiles.len(), 4);
    }

    #[test]
    fn profile_search_matches_enumeration() {
        let inst = fixtures::four_agent();
        let from_enum: std::collections::BTreeSet<Vec<u32>> = enumerate_bmatchings(&inst, 14)
            .unwrap()
            .iter()
            .map(|m| m.utilities(&inst))
            .collect();
        let from_dp: std::collections::BTreeSet<Vec<u32>> =
            feasible_profiles(&inst).unwrap().into_keys().collect();
        assert_eq!(from_enum, from_dp);
    }

    #[test]
    fn lorenz_examples() {
        let z = profile(&[2, 3, 3, 2]);
        assert!(lorenz_dominates(&z, &z).unwrap());
        assert!(lorenz_dominates(&z, &profile(&[1, 4, 3, 2])).unwrap());
        let (a, b) = (profile(&[0, 3]), profile(&[1, 1]));
        assert!(!lorenz_dominates(&a, &b).unwrap());
        assert!(!lorenz_dominates(&b, &a).unwrap());
        assert!(lorenz_dominates(&a, &profile(&[1])).is_err());
    }

    #[test]
    fn internal_maximum_of_triangle() {
        let inst = fixtures::fifteen_agent();
        let comp: Vec<usize> = ["s1", "s2", "s3"].iter().map(|id| inst.index_of(id).unwrap()).collect();
        assert_eq!(max_internal_utility(&inst, &comp).unwrap(), 6);
    }
}
