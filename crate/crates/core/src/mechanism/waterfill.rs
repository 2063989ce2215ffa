//! Parametric water-filling on the supply side of a flow network.

use serde::Serialize;

use crate::flow::{max_flow, maximal_min_cut, residual_reachable_from_source, Flow, FlowNetwork, SOURCE};
use crate::rational::{self, Exact, Rational};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum BreakpointKind {
    /// Some supplier reached its peak.
    PeakReached,
    /// A supplier set saturates everything it can reach.
    Bottleneck,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Breakpoint {
    pub lambda: Exact,
    pub kind: BreakpointKind,
    /// Suppliers frozen here (the largest bottleneck set, or those at their peak).
    pub suppliers: Vec<usize>,
    /// Network nodes on the source side of the maximal minimum cut, excluding suppliers.
    pub image: Vec<usize>,
}

#[derive(Clone, Debug)]
pub struct WaterFill {
    pub values: Vec<Rational>,
    /// A maximum flow of the original network whose supply arcs carry `values`.
    pub flow: Flow,
    pub breakpoints: Vec<Breakpoint>,
}

fn with_supply(net: &FlowNetwork, supply: &[usize], caps: &[Rational]) -> FlowNetwork {
    let mut n = net.clone();
    for (&arc, cap) in supply.iter().zip(caps) {
        n.set_capacity(arc, *cap);
    }
    n
}

/// Largest `l` with `sum_k min(l, peaks_k) = target`, assuming `0 <= target < sum peaks`.
fn solve_level(peaks: &[Rational], target: Rational) -> Rational {
    let mut sorted = peaks.to_vec();
    sorted.sort();
    let mut below = rational::zero();
    for (k, p) in sorted.iter().enumerate() {
        let above = (sorted.len() - k) as i128;
        // With l in [previous peak, p], the sum is below + above * l.
        let level = (target - below) / rational::int(above);
        if level <= *p {
            return level;
        }
        below += p;
    }
    unreachable!("target is below the total of the peaks")
}

/// Egalitarian supply values for the arcs `supply` (with peaks `peaks`) of `net`.
///
/// A common level `λ` caps every unfrozen supplier at `λ ∧ s_i`. The first `λ` at which some
/// set of suppliers becomes a bottleneck is found by Newton steps on minimum cuts; the largest
/// bottleneck set is frozen and the rest of the suppliers continue.
pub fn water_fill(net: &FlowNetwork, supply: &[usize], peaks: &[Rational]) -> WaterFill {
    let n = supply.len();
    let tail: Vec<usize> = supply.iter().map(|&k| net.arc(k).to).collect();
    let mut frozen: Vec<Option<Rational>> = vec![None; n];
    let mut breakpoints = Vec::new();

    let caps_at = |frozen: &[Option<Rational>], lambda: Rational| -> Vec<Rational> {
        (0..n)
            .map(|i| frozen[i].unwrap_or_else(|| rational::min(lambda, peaks[i])))
            .collect()
    };

    while frozen.iter().any(Option::is_none) {
        let unfrozen: Vec<usize> = (0..n).filter(|&i| frozen[i].is_none()).collect();
        let mut lambda = unfrozen.iter().map(|&i| peaks[i]).max().expect("nonempty");
        let mut bottleneck = false;
        loop {
            let caps = caps_at(&frozen, lambda);
            let reduced = with_supply(net, supply, &caps);
            let f = max_flow(&reduced);
            let wanted: Rational = caps.iter().copied().sum();
            if f.value == wanted {
                break;
            }
            bottleneck = true;
            let side = residual_reachable_from_source(&reduced, &f);
            let in_side: Vec<usize> = (0..n).filter(|&i| side[tail[i]]).collect();
            let outgoing: Rational = reduced
                .arcs()
                .iter()
                .filter(|a| a.from != SOURCE && side[a.from] && !side[a.to])
                .map(|a| a.cap.finite().expect("minimum cut is finite"))
                .sum();
            let fixed: Rational = in_side.iter().filter_map(|&i| frozen[i]).sum();
            let open: Vec<Rational> = in_side
                .iter()
                .filter(|&&i| frozen[i].is_none())
                .map(|&i| peaks[i])
                .collect();
            let next = solve_level(&open, outgoing - fixed);
            debug_assert!(next < lambda);
            lambda = next;
        }

        let caps = caps_at(&frozen, lambda);
        if !bottleneck {
            let mut at_peak: Vec<(Rational, usize)> = unfrozen.iter().map(|&i| (peaks[i], i)).collect();
            at_peak.sort();
            for &(p, i) in &at_peak {
                frozen[i] = Some(p);
                match breakpoints.last_mut() {
                    Some(Breakpoint { lambda, kind: BreakpointKind::PeakReached, suppliers, .. })
                        if lambda.0 == p =>
                    {
                        suppliers.push(i)
                    }
                    _ => breakpoints.push(Breakpoint {
                        lambda: Exact(p),
                        kind: BreakpointKind::PeakReached,
                        suppliers: vec![i],
                        image: Vec::new(),
                    }),
                }
            }
            break;
        }

        let reduced = with_supply(net, supply, &caps);
        let f = max_flow(&reduced);
        let side = maximal_min_cut(&reduced, &f).expect("flow is maximum");
        let set: Vec<usize> = unfrozen.iter().copied().filter(|&i| side[tail[i]]).collect();
        assert!(!set.is_empty(), "a bottleneck was detected");
        for &i in &set {
            frozen[i] = Some(caps[i]);
        }
        let image = (0..net.node_count())
            .filter(|&v| v != SOURCE && side[v] && !tail.contains(&v))
            .collect();
        breakpoints.push(Breakpoint { lambda: Exact(lambda), kind: BreakpointKind::Bottleneck, suppliers: set, image });
    }

    let values: Vec<Rational> = frozen.into_iter().map(|x| x.expect("all frozen")).collect();
    let reduced = with_supply(net, supply, &values);
    let f = max_flow(&reduced);
    debug_assert_eq!(f.value, values.iter().copied().sum::<Rational>());
    WaterFill { values, flow: f, breakpoints }
}
