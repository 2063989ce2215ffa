//! Misreporting experiments against the indivisible mechanism.

use rand::seq::IteratorRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::generate::random_connected;
use crate::error::{Error, Result};
use crate::instance::{Instance, UtilityProfile};
use crate::mechanism::solve_indivisible;
use crate::rational::{self, int, Exact, Rational};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Deviation {
    /// Coalition members report these peaks instead of their true ones.
    ReportPeaks { peaks: Vec<(String, u32)> },
    /// Links with at least one endpoint in the coalition are hidden.
    HideLinks { links: Vec<(String, String)> },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Profitable,
    Unprofitable,
    Mixed,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DeviatorOutcome {
    pub id: String,
    pub peak: u32,
    pub truthful: Exact,
    pub manipulated: Exact,
    /// Reduction in distance to the true peak; positive means better.
    pub delta: Exact,
    /// Whether some single-peaked preference with this peak strictly prefers the manipulated
    /// outcome.
    pub better_for_some_preference: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ManipulationReport {
    pub coalition: Vec<String>,
    pub deviations: Vec<Deviation>,
    pub truthful: UtilityProfile,
    pub manipulated: UtilityProfile,
    pub deviators: Vec<DeviatorOutcome>,
    /// From the distance-to-peak deltas.
    pub verdict: Verdict,
    pub profitable_for_some_preference: bool,
    pub every_deviator_strictly_gains: bool,
}

impl ManipulationReport {
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "coalition": self.coalition,
            "deviations": self.deviations,
            "truthful": self.truthful.to_json(),
            "manipulated": self.manipulated.to_json(),
            "deviators": self.deviators,
            "verdict": self.verdict,
            "profitable_for_some_preference": self.profitable_for_some_preference,
            "every_deviator_strictly_gains": self.every_deviator_strictly_gains,
        })
    }
}

fn apply(inst: &Instance, coalition: &[usize], deviations: &[Deviation]) -> Result<Instance> {
    let mut reported = inst.clone();
    for d in deviations {
        match d {
            Deviation::ReportPeaks { peaks } => {
                let mut changes = Vec::new();
                for (id, p) in peaks {
                    let i = inst.index_of(id).ok_or_else(|| Error::UnknownNode(id.clone()))?;
                    if !coalition.contains(&i) {
                        return Err(Error::OutsideCoalition(id.clone()));
                    }
                    if *p == 0 {
                        return Err(Error::NonPositivePeak { id: id.clone(), peak: 0 });
                    }
                    changes.push((i, *p));
                }
                reported = reported.with_peaks(&changes)?;
            }
            Deviation::HideLinks { links } => {
                let mut removed = Vec::new();
                for (u, v) in links {
                    let a = reported.index_of(u).ok_or_else(|| Error::UnknownNode(u.clone()))?;
                    let b = reported.index_of(v).ok_or_else(|| Error::UnknownNode(v.clone()))?;
                    if !coalition.contains(&a) && !coalition.contains(&b) {
                        return Err(Error::OutsideCoalition(format!("{u}-{v}")));
                    }
                    let k = reported
                        .edge_between(a, b)
                        .ok_or_else(|| Error::InvalidInput(format!("no link between `{u}` and `{v}`")))?;
                    removed.push(k);
                }
                reported = reported.without_edges(&removed)?;
            }
        }
    }
    Ok(reported)
}

fn distance(x: Rational, peak: Rational) -> Rational {
    rational::abs(&(x - peak))
}

/// Some single-peaked preference with peak `b` strictly prefers `new` over `old`.
fn better_for_some(old: Rational, new: Rational, b: Rational) -> bool {
    if old == new {
        return false;
    }
    let opposite = (old < b && new > b) || (old > b && new < b);
    opposite || distance(new, b) < distance(old, b)
}

/// Runs the mechanism on the truthful and the reported instance and compares the coalition's
/// expected utilities against their true peaks.
pub fn manipulation_experiment(
    inst: &Instance,
    coalition: &[String],
    deviations: &[Deviation],
) -> Result<ManipulationReport> {
    let members: Vec<usize> = coalition
        .iter()
        .map(|id| inst.index_of(id).ok_or_else(|| Error::UnknownNode(id.clone())))
        .collect::<Result<_>>()?;
    let reported = apply(inst, &members, deviations)?;
    let truthful = solve_indivisible(inst)?.profile;
    let manipulated = solve_indivisible(&reported)?.profile;

    let mut deviators = Vec::new();
    for &i in &members {
        let b = int(inst.peak(i) as i128);
        let (old, new) = (truthful.values()[i], manipulated.values()[i]);
        deviators.push(DeviatorOutcome {
            id: inst.id(i).to_string(),
            peak: inst.peak(i),
            truthful: Exact(old),
            manipulated: Exact(new),
            delta: Exact(distance(old, b) - distance(new, b)),
            better_for_some_preference: better_for_some(old, new, b),
        });
    }
    let gains = deviators.iter().filter(|d| d.delta.0 > rational::zero()).count();
    let losses = deviators.iter().filter(|d| d.delta.0 < rational::zero()).count();
    let verdict = match (gains, losses) {
        (0, _) => Verdict::Unprofitable,
        (_, 0) => Verdict::Profitable,
        _ => Verdict::Mixed,
    };
    Ok(ManipulationReport {
        coalition: coalition.to_vec(),
        deviations: deviations.to_vec(),
        profitable_for_some_preference: deviators.iter().any(|d| d.better_for_some_preference),
        every_deviator_strictly_gains: !deviators.is_empty() && gains == deviators.len(),
        truthful,
        manipulated,
        deviators,
        verdict,
    })
}

#[derive(Clone, Debug, Default)]
pub struct SearchSummary {
    pub trials: usize,
    /// Reports in which every deviator strictly gained by hiding links.
    pub violations: Vec<ManipulationReport>,
}

/// Random link-hiding coalitions on random connected instances.
pub fn link_manipulation_search(trials: usize, seed: u64, max_nodes: usize, max_peak: u32) -> Result<SearchSummary> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut summary = SearchSummary::default();
    while summary.trials < trials {
        let n = rng.random_range(2..=max_nodes);
        let inst = random_connected(&mut rng, n, max_peak, 0.4);
        let size = rng.random_range(1..=n.min(3));
        let members: Vec<usize> = (0..n).choose_multiple(&mut rng, size);
        let candidates: Vec<usize> = (0..inst.edges().len())
            .filter(|&k| members.contains(&inst.edges()[k].u) || members.contains(&inst.edges()[k].v))
            .collect();
        if candidates.is_empty() {
            continue;
        }
        let hide = rng.random_range(1..=candidates.len().min(3));
        let links: Vec<(String, String)> = candidates
            .into_iter()
            .choose_multiple(&mut rng, hide)
            .into_iter()
            .map(|k| {
                let e = &inst.edges()[k];
                (inst.id(e.u).to_string(), inst.id(e.v).to_string())
            })
            .collect();
        let coalition: Vec<String> = members.iter().map(|&i| inst.id(i).to_string()).collect();
        let report = manipulation_experiment(&inst, &coalition, &[Deviation::HideLinks { links }])?;
        if report.every_deviator_strictly_gains {
            summary.violations.push(report);
        }
        summary.trials += 1;
    }
    Ok(summary)
}
