//! JSON documents shared by the command line and the browser demo.

use serde_json::{json, Value};

use crate::error::Result;
use crate::instance::Instance;
use crate::matching::ged_decompose;
use crate::mechanism::{
    build_lottery, egalitarian_divisible, probabilistic_marginals, sample_many, solve_indivisible, BreakpointKind,
    IndivisibleSolution, Model,
};
use crate::rational::Exact;

pub fn ged_report(inst: &Instance) -> Result<Value> {
    Ok(ged_decompose(inst)?.to_json(inst))
}

fn breakpoints_json(inst: &Instance, sol: &IndivisibleSolution) -> Value {
    let c = &sol.construction;
    let items: Vec<Value> = sol
        .fill
        .breakpoints
        .iter()
        .map(|b| {
            let mut item = json!({
                "lambda": b.lambda,
                "kind": b.kind,
                "suppliers": b.suppliers.iter().map(|&i| inst.id(i)).collect::<Vec<_>>(),
            });
            if b.kind == BreakpointKind::Bottleneck {
                item["image"] = json!(b.image.iter().map(|&v| c.net.label(v)).collect::<Vec<_>>());
            }
            item
        })
        .collect();
    Value::Array(items)
}

pub fn solve_report(inst: &Instance, model: Model) -> Result<Value> {
    match model {
        Model::Divisible => {
            let sol = egalitarian_divisible(inst)?;
            Ok(json!({
                "model": model,
                "profile": sol.profile.to_json(),
                "total": Exact(sol.profile.total()),
                "exchange": sol.exchange_json(inst),
            }))
        }
        Model::Indivisible => {
            let sol = solve_indivisible(inst)?;
            let marginals: serde_json::Map<String, Value> = probabilistic_marginals(&sol.profile)
                .into_iter()
                .map(|m| {
                    let outcomes: Vec<Value> =
                        m.outcomes.iter().map(|(v, p)| json!({"utility": v, "prob": p})).collect();
                    (m.id, Value::Array(outcomes))
                })
                .collect();
            Ok(json!({
                "model": model,
                "profile": sol.profile.to_json(),
                "total": Exact(sol.profile.total()),
                "marginals": marginals,
                "ged": sol.ged.to_json(inst),
                "breakpoints": breakpoints_json(inst, &sol),
            }))
        }
    }
}

/// Flow on the construction used by `solve`, for inspection.
pub fn flow_report(inst: &Instance, model: Model) -> Result<Value> {
    match model {
        Model::Divisible => {
            let sol = egalitarian_divisible(inst)?;
            Ok(sol.flow.to_json(&sol.construction.net))
        }
        Model::Indivisible => {
            let sol = solve_indivisible(inst)?;
            Ok(sol.fill.flow.to_json(&sol.construction.net))
        }
    }
}

pub fn lottery_report(inst: &Instance) -> Result<Value> {
    let sol = solve_indivisible(inst)?;
    let (lottery, _) = build_lottery(inst, &sol)?;
    Ok(lottery.to_json(inst))
}

pub fn sample_report(inst: &Instance, samples: usize, seed: u64) -> Result<Value> {
    let sol = solve_indivisible(inst)?;
    let (lottery, _) = build_lottery(inst, &sol)?;
    let draws: Vec<Value> = sample_many(&lottery, seed, samples)
        .iter()
        .map(|m| json!(m.edges(inst)))
        .collect();
    Ok(json!({ "seed": seed, "samples": draws }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn indivisible_report_has_exact_strings() {
        let r = solve_report(&fixtures::fifteen_agent(), Model::Indivisible).unwrap();
        assert_eq!(r["profile"]["s2"], "7/3");
        assert_eq!(r["total"], "34/1");
        assert_eq!(r["marginals"]["s4"][1]["prob"], "1/3");
    }

    #[test]
    fn divisible_triangle_report() {
        let r = solve_report(&fixtures::triangle(), Model::Divisible).unwrap();
        assert_eq!(r["profile"]["a"], "1/1");
        assert_eq!(r["exchange"][0]["amount"], "1/2");
    }

    #[test]
    fn lottery_and_samples() {
        let tri = fixtures::triangle();
        let l = lottery_report(&tri).unwrap();
        assert_eq!(l.as_array().unwrap().len(), 3);
        assert_eq!(l[0]["prob"], "1/3");
        let s = sample_report(&tri, 4, 9).unwrap();
        assert_eq!(s["samples"].as_array().unwrap().len(), 4);
        assert_eq!(s, sample_report(&tri, 4, 9).unwrap());
    }
}
