//! Acceptance criteria, one line each. Run with `cargo test --test acceptance`.

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use fairmatch::fixtures;
use fairmatch::flow::decompose_max_flow;
use fairmatch::mechanism::{
    bipartite_egalitarian, build_lottery, egalitarian_divisible, egalitarian_lp, solve_indivisible,
};
use fairmatch::oracle::generate::{all_small_instances, random_bipartite, random_connected};
use fairmatch::oracle::{self, link_manipulation_search, manipulation_experiment, Deviation, Verdict};
use fairmatch::rational::{frac, int, Rational};
use fairmatch::{ged_decompose, Instance, UtilityProfile};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<(), String>;

fn ensure(cond: bool, msg: impl Into<String>) -> Outcome {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn ids(inst: &Instance, v: &[usize]) -> Vec<String> {
    v.iter().map(|&i| inst.id(i).to_string()).collect()
}

fn triangle_indivisible() -> Outcome {
    let tri = fixtures::triangle();
    let sol = solve_indivisible(&tri).map_err(|e| e.to_string())?;
    ensure(sol.profile.values() == [frac(2, 3); 3], format!("profile {:?}", sol.profile.values()))?;
    let (lottery, _) = build_lottery(&tri, &sol).map_err(|e| e.to_string())?;
    ensure(lottery.len() == 3, format!("{} entries", lottery.len()))?;
    let mut edges = BTreeSet::new();
    for (m, p) in &lottery.entries {
        ensure(*p == frac(1, 3), "probability is not 1/3")?;
        let used: Vec<usize> = (0..3).filter(|&k| m.multiplicity(k) > 0).collect();
        ensure(used.len() == 1 && m.multiplicity(used[0]) == 1, "entry is not a single edge")?;
        edges.insert(used[0]);
    }
    ensure(edges.len() == 3, "entries repeat an edge")
}

fn triangle_divisible() -> Outcome {
    let div = egalitarian_divisible(&fixtures::triangle()).map_err(|e| e.to_string())?;
    ensure(div.profile.values() == [int(1); 3], "profile is not (1,1,1)")?;
    ensure(div.exchange == vec![frac(1, 2); 3], "exchange is not 1/2 per edge")
}

fn fifteen_agents() -> Outcome {
    let inst = fixtures::fifteen_agent();
    let ged = ged_decompose(&inst).map_err(|e| e.to_string())?;
    ensure(ids(&inst, &ged.over) == ["s6", "s7"], "over-demanded class")?;
    ensure(ids(&inst, &ged.under) == ["s1", "s2", "s3", "s4", "s5", "s8"], "under-demanded class")?;
    let perfect: Vec<String> = (9..=15).map(|k| format!("s{k}")).collect();
    ensure(ids(&inst, &ged.perfect) == perfect, "perfectly matched class")?;

    let sol = solve_indivisible(&inst).map_err(|e| e.to_string())?;
    let x = |id: &str| sol.profile.get(id).unwrap();
    ensure(["s2", "s4", "s5"].iter().all(|id| x(id) == frac(7, 3)), "s2, s4, s5 are not 7/3")?;
    ensure(["s1", "s3", "s8"].iter().all(|id| x(id) == int(2)), "s1, s3, s8 are not 2")?;
    ensure(
        ged.over.iter().chain(&ged.perfect).all(|&i| sol.profile.values()[i] == int(inst.peak(i) as i128)),
        "an over-demanded or perfectly matched agent is below its peak",
    )?;

    let (lottery, _) = build_lottery(&inst, &sol).map_err(|e| e.to_string())?;
    ensure(lottery.len() == 3, format!("{} entries", lottery.len()))?;
    let mut lucky = BTreeSet::new();
    for (m, p) in &lottery.entries {
        ensure(*p == frac(1, 3), "probability is not 1/3")?;
        // Exactly one of s2, s4, s5 reaches 3 in each entry; the other two stay at 2.
        let u = m.utilities(&inst);
        let extra: Vec<&str> =
            ["s2", "s4", "s5"].into_iter().filter(|id| u[inst.index_of(id).unwrap()] == 3).collect();
        ensure(extra.len() == 1, "entry does not single out one recipient")?;
        lucky.insert(extra[0]);
    }
    ensure(lucky.len() == 3, "entries do not differ in the recipient of the extra unit")
}

fn seven_path() -> Outcome {
    let inst = fixtures::path7();
    let sol = solve_indivisible(&inst).map_err(|e| e.to_string())?;
    let (q, one) = (frac(3, 4), int(1));
    ensure(sol.profile.values() == [q, one, q, one, q, one, q], "profile")?;
    let r = manipulation_experiment(
        &inst,
        &["s4".into(), "s7".into()],
        &[Deviation::HideLinks { links: vec![("s3".into(), "s4".into())] }],
    )
    .map_err(|e| e.to_string())?;
    ensure(r.manipulated.get("s7") == Some(one), "s7 does not rise to 1")?;
    ensure(r.deviators.iter().all(|d| d.delta.0 >= int(0)), "a deviator loses")?;
    ensure(r.verdict == Verdict::Profitable, "verdict is not profitable")
}

fn peak_manipulation() -> Outcome {
    let r = manipulation_experiment(
        &fixtures::triangle(),
        &["a".into()],
        &[Deviation::ReportPeaks { peaks: vec![("a".into(), 2)] }],
    )
    .map_err(|e| e.to_string())?;
    ensure(r.manipulated.values() == [int(2), int(1), int(1)], "allocation is not (2,1,1)")?;
    ensure(r.profitable_for_some_preference, "not flagged as profitable for some preference")
}

#[derive(Default)]
struct SuiteStats {
    instances: usize,
    decompositions: usize,
}

/// Criteria (a)-(e) on one instance, plus the exact decomposition check.
fn oracle_checks(inst: &Instance, stats: &mut SuiteStats) -> Outcome {
    let err = |e: fairmatch::Error| format!("{}: {e}", inst.name());
    let sol = solve_indivisible(inst).map_err(err)?;
    let all = oracle::feasible_profiles(inst).map_err(err)?;
    let pareto = oracle::pareto_profiles(inst).map_err(err)?;

    let feasible: Vec<Vec<u32>> = all.keys().cloned().collect();
    let undominated: BTreeSet<_> = oracle::non_dominated(&feasible).into_iter().collect();
    let maximum: BTreeSet<_> = pareto.profiles.iter().cloned().collect();
    ensure(undominated == maximum, format!("{}: (a) Pareto set differs", inst.name()))?;
    ensure(
        sol.profile.total() == int(pareto.total as i128),
        format!("{}: total differs from oracle", inst.name()),
    )?;

    for (k, comp) in sol.ged.components.iter().enumerate() {
        if let Some(cap) = sol.ged.internal_caps[k] {
            let best = oracle::max_internal_utility(inst, comp).map_err(err)?;
            ensure(best == cap as u64, format!("{}: (b) component maximum {best} != {cap}", inst.name()))?;
        }
    }

    for p in &pareto.profiles {
        let w = UtilityProfile::integral(inst, p).map_err(err)?;
        ensure(
            oracle::lorenz_dominates(&sol.profile, &w).map_err(err)?,
            format!("{}: (c) not Lorenz-dominant over {p:?}", inst.name()),
        )?;
    }

    let (lottery, combo) = build_lottery(inst, &sol).map_err(err)?;
    let expected = fairmatch::mechanism::Lottery::expectation(inst, &lottery.entries);
    ensure(expected == sol.profile.values(), format!("{}: (d) lottery expectation", inst.name()))?;
    let total: Rational = lottery.entries.iter().map(|(_, p)| *p).sum();
    ensure(total == int(1), format!("{}: (d) probabilities", inst.name()))?;

    ensure(
        egalitarian_lp(&sol.construction) == sol.profile,
        format!("{}: (e) water-filling differs from LP rounds", inst.name()),
    )?;

    combo.verify(&sol.construction.net, &sol.fill.flow).map_err(err)?;
    stats.decompositions += 1;
    stats.instances += 1;
    Ok(())
}

fn oracle_suite(stats: &mut SuiteStats) -> Outcome {
    for inst in all_small_instances(5, 2) {
        oracle_checks(&inst, stats)?;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(20240601);
    for _ in 0..200 {
        let n = rng.random_range(1..=6);
        let inst = random_connected(&mut rng, n, 3, 0.35);
        oracle_checks(&inst, stats)?;
    }
    Ok(())
}

fn extension() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for trial in 0..50 {
        let left = rng.random_range(1..=4);
        let right = rng.random_range(1..=4);
        let inst = random_bipartite(&mut rng, left, right, 3, 0.5);
        let direct = bipartite_egalitarian(&inst).map_err(|e| e.to_string())?;
        let pipeline = solve_indivisible(&inst).map_err(|e| e.to_string())?.profile;
        ensure(
            direct == pipeline,
            format!("trial {trial}: direct {:?} vs pipeline {:?}", direct.values(), pipeline.values()),
        )?;
    }
    Ok(())
}

fn decompositions(stats: &SuiteStats) -> Outcome {
    let mut count = stats.decompositions;
    for (_, text) in fixtures::all() {
        let inst = fairmatch::parse_instance(text).map_err(|e| e.to_string())?;
        let sol = solve_indivisible(&inst).map_err(|e| e.to_string())?;
        let combo = decompose_max_flow(&sol.construction.net, &sol.fill.flow).map_err(|e| e.to_string())?;
        combo.verify(&sol.construction.net, &sol.fill.flow).map_err(|e| e.to_string())?;
        count += 1;
    }
    ensure(count == stats.instances + fixtures::all().len(), "some instance was not decomposed")
}

fn weak_link_search() -> Outcome {
    let summary = link_manipulation_search(1000, 99, 6, 3).map_err(|e| e.to_string())?;
    ensure(summary.trials == 1000, "fewer trials than requested")?;
    match summary.violations.first() {
        None => Ok(()),
        Some(r) => Err(format!(
            "{} coalitions where every deviator strictly gains, e.g. {}",
            summary.violations.len(),
            r.to_json()
        )),
    }
}

struct Line {
    id: &'static str,
    title: &'static str,
    outcome: Outcome,
    elapsed: Duration,
    budget: Option<Duration>,
    /// A failure here is expected and analysed in the decisions ledger.
    known_red: bool,
}

fn timed(id: &'static str, title: &'static str, budget: Option<u64>, f: impl FnOnce() -> Outcome) -> Line {
    let start = Instant::now();
    let outcome = f();
    Line { id, title, outcome, elapsed: start.elapsed(), budget: budget.map(Duration::from_secs), known_red: false }
}

fn main() {
    let mut stats = SuiteStats::default();
    let mut lines = vec![
        timed("1", "triangle, indivisible: 2/3 each, three 1/3 single-edge entries", Some(1), triangle_indivisible),
        timed("2", "triangle, divisible: 1 each, 1/2 per edge", Some(1), triangle_divisible),
        timed("3", "fifteen-agent network: classes, 7/3 profile, 3-entry lottery", Some(5), fifteen_agents),
        timed("4", "seven-node path: 3/4 and 1; hiding s3-s4 lifts s7 to 1", Some(1), seven_path),
        timed("5", "triangle peak report 2 gives (2,1,1), flagged profitable", Some(1), peak_manipulation),
    ];
    lines.push(timed("6", "oracle equivalence suite (a)-(e)", Some(60), || oracle_suite(&mut stats)));
    lines.push(timed("7", "extension: bipartite rule equals pipeline on 50 instances", Some(30), extension));
    lines.push(timed("8", "flow decompositions exact, members maximum", None, || decompositions(&stats)));
    let mut gsp = timed("GSP", "1000 random link-hiding coalitions, none strictly all-gain", None, weak_link_search);
    gsp.known_red = true;
    lines.push(gsp);

    let (mut failed, mut unexpected) = (0, 0);
    for l in &lines {
        let over = l.budget.is_some_and(|b| l.elapsed > b);
        let ok = l.outcome.is_ok() && !over;
        failed += usize::from(!ok);
        unexpected += usize::from(!ok && !l.known_red);
        let mark = if ok { "PASS" } else { "FAIL" };
        let note = if !ok && l.known_red { "  [known counterexample]" } else { "" };
        println!("[{mark}] {:>3}  {}  ({:.2?}){note}", l.id, l.title, l.elapsed);
        if let Err(e) = &l.outcome {
            println!("         {e}");
        }
        if over {
            println!("         exceeded the {:?} budget", l.budget.unwrap());
        }
    }
    println!(
        "oracle suite covered {} instances; {}/{} criteria passed",
        stats.instances,
        lines.len() - failed,
        lines.len()
    );
    if unexpected > 0 {
        std::process::exit(1);
    }
}
