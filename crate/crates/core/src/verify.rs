//! Invariant checks for one instance, optionally against the brute-force oracle.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::error::Result;
use crate::flow::{is_maximum, max_flow, min_cut, Capacity};
use crate::instance::{Instance, UtilityProfile};
use crate::matching::{max_bmatching, GedClass};
use crate::mechanism::{build_lottery, egalitarian_divisible, egalitarian_lp, solve_indivisible};
use crate::oracle::{self, generate::automorphisms};
use crate::rational::int;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    #[serde(skip_serializing_if = "String::is_empty")]
    pub detail: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct VerifyReport {
    pub checks: Vec<Check>,
}

impl VerifyReport {
    fn record(&mut self, name: &'static str, passed: bool, detail: impl Into<String>) {
        let detail = if passed { String::new() } else { detail.into() };
        self.checks.push(Check { name, passed, detail });
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> Vec<&Check> {
        self.checks.iter().filter(|c| !c.passed).collect()
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "passed": self.passed(),
            "checks": self.checks,
        })
    }
}

/// Mechanism invariants that need no enumeration.
pub fn verify_instance(inst: &Instance) -> Result<VerifyReport> {
    let mut r = VerifyReport::default();
    let sol = solve_indivisible(inst)?;
    let ged = &sol.ged;
    let net = &sol.construction.net;

    let partition = ged.under.len() + ged.over.len() + ged.perfect.len() == inst.len();
    let over_ok = ged
        .over
        .iter()
        .all(|&j| inst.neighbors(j).any(|w| ged.class(w) == GedClass::Under));
    let perfect_ok = ged
        .perfect
        .iter()
        .all(|&j| inst.neighbors(j).all(|w| ged.class(w) != GedClass::Under));
    r.record("ged_structure", partition && over_ok && perfect_ok, "classes violate the decomposition rules");

    let f = max_flow(net);
    let cut_ok = min_cut(net, &f).is_ok_and(|side| {
        let mut mark = vec![false; net.node_count()];
        side.iter().for_each(|&v| mark[v] = true);
        net.cut_capacity(&mark) == Capacity::Finite(f.value)
    });
    r.record("max_flow_equals_min_cut", cut_ok, "cut capacity differs from flow value");

    let best = max_bmatching(inst)?;
    let total = int(best.total_utility() as i128);
    r.record(
        "efficiency",
        sol.profile.total() == total && f.value == total,
        format!("profile total {} vs maximum {}", sol.profile.total(), total),
    );
    let x = best.utilities(inst);
    r.record(
        "over_demanded_saturated",
        ged.over.iter().all(|&j| x[j] == inst.peak(j)),
        "an over-demanded agent is unsaturated",
    );
    r.record(
        "water_filling_matches_lp",
        egalitarian_lp(&sol.construction) == sol.profile,
        "the two egalitarian computations disagree",
    );

    match build_lottery(inst, &sol) {
        Ok((lottery, combo)) => {
            r.record(
                "decomposition_exact",
                combo.verify(net, &sol.fill.flow).is_ok()
                    && combo.members.iter().all(|(g, _)| g.is_integral() && is_maximum(net, g)),
                "decomposition does not reproduce the flow",
            );
            let expected = crate::mechanism::Lottery::expectation(inst, &lottery.entries);
            r.record(
                "lottery_expectation",
                expected == sol.profile.values(),
                "lottery expectation differs from the profile",
            );
            r.record(
                "lottery_entries_maximum",
                lottery.entries.iter().all(|(m, _)| {
                    m.is_feasible(inst)
                        && m.total_utility() == best.total_utility()
                        && ged.over.iter().all(|&j| m.utilities(inst)[j] == inst.peak(j))
                }),
                "a lottery entry is not a maximum b-matching",
            );
        }
        Err(e) => r.record("lottery", false, e.to_string()),
    }

    match egalitarian_divisible(inst) {
        Ok(div) => r.record(
            "divisible_feasible",
            div.profile.values().iter().enumerate().all(|(i, v)| *v <= int(inst.peak(i) as i128)),
            "divisible utilities exceed a peak",
        ),
        Err(e) => r.record("divisible_feasible", false, e.to_string()),
    }
    Ok(r)
}

/// Everything in [`verify_instance`] plus comparisons against exhaustive search.
pub fn verify_with_oracle(inst: &Instance) -> Result<VerifyReport> {
    let mut r = verify_instance(inst)?;
    let sol = solve_indivisible(inst)?;
    let all = oracle::feasible_profiles(inst)?;
    let pareto = oracle::pareto_profiles(inst)?;

    let feasible: Vec<Vec<u32>> = all.keys().cloned().collect();
    let undominated: BTreeSet<Vec<u32>> = oracle::non_dominated(&feasible).into_iter().collect();
    let maximum: BTreeSet<Vec<u32>> = pareto.profiles.iter().cloned().collect();
    r.record(
        "pareto_equals_maximum",
        undominated == maximum,
        format!("{} undominated vs {} maximum profiles", undominated.len(), maximum.len()),
    );
    r.record(
        "oracle_total",
        sol.profile.total() == int(pareto.total as i128),
        format!("oracle maximum {}", pareto.total),
    );

    let mut comp_ok = true;
    for (k, comp) in sol.ged.components.iter().enumerate() {
        if let Some(cap) = sol.ged.internal_caps[k] {
            comp_ok &= oracle::max_internal_utility(inst, comp)? == cap as u64;
        }
    }
    r.record("odd_component_bound", comp_ok, "an odd component's internal maximum is not sum - 1");

    let mut lorenz_ok = true;
    for p in &pareto.profiles {
        let w = UtilityProfile::integral(inst, p)?;
        lorenz_ok &= oracle::lorenz_dominates(&sol.profile, &w)?;
    }
    r.record("lorenz_dominates_pareto", lorenz_ok, "a Pareto profile is not Lorenz-dominated");

    if inst.len() <= 8 {
        let x = sol.profile.values();
        let ete = automorphisms(inst)
            .iter()
            .all(|perm| (0..inst.len()).all(|i| x[i] == x[perm[i]]));
        r.record("equal_treatment", ete, "symmetric agents receive different utilities");
    }
    Ok(r)
}
