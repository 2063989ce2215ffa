//! Round-by-round egalitarian allocation over the rank polymatroid of a supply network.
//!
//! Round `k` maximizes a common value `λ_k` for all unfrozen suppliers subject to
//! `x(S) <= rank(S)`, then freezes every supplier that cannot individually exceed `λ_k`.
//! `rank(S)` is the maximum flow that only the suppliers in `S` can send at their peaks.

use crate::flow::{augment_from, max_flow, residual_reachable_from_source, FlowNetwork};
use crate::rational::{self, Rational};

fn restricted(net: &FlowNetwork, supply: &[usize], caps: &[Rational]) -> FlowNetwork {
    let mut n = net.clone();
    for (&arc, &cap) in supply.iter().zip(caps) {
        n.set_capacity(arc, cap);
    }
    n
}

fn rank(net: &FlowNetwork, supply: &[usize], peaks: &[Rational], members: &[usize]) -> Rational {
    let caps: Vec<Rational> = (0..supply.len())
        .map(|i| if members.contains(&i) { peaks[i] } else { rational::zero() })
        .collect();
    max_flow(&restricted(net, supply, &caps)).value
}

pub fn egalitarian_lp(net: &FlowNetwork, supply: &[usize], peaks: &[Rational]) -> Vec<Rational> {
    let n = supply.len();
    let tail: Vec<usize> = supply.iter().map(|&k| net.arc(k).to).collect();
    let mut x: Vec<Option<Rational>> = vec![None; n];

    while x.iter().any(Option::is_none) {
        let open: Vec<usize> = (0..n).filter(|&i| x[i].is_none()).collect();
        let alloc = |lambda: Rational| -> Vec<Rational> {
            (0..n).map(|i| x[i].unwrap_or(lambda)).collect()
        };

        // Dinkelbach iteration on the most violated cut.
        let mut lambda = open.iter().map(|&i| peaks[i]).min().expect("nonempty");
        loop {
            let caps = alloc(lambda);
            let test = restricted(net, supply, &caps);
            let f = max_flow(&test);
            if f.value == caps.iter().copied().sum::<Rational>() {
                break;
            }
            let side = residual_reachable_from_source(&test, &f);
            let set: Vec<usize> = (0..n).filter(|&i| side[tail[i]]).collect();
            let fixed: Rational = set.iter().filter_map(|&i| x[i]).sum();
            let free = set.iter().filter(|&&i| x[i].is_none()).count() as i128;
            lambda = (rank(net, supply, peaks, &set) - fixed) / rational::int(free);
        }

        let caps = alloc(lambda);
        let mut tight = Vec::new();
        for &v in &open {
            let mut probe = caps.clone();
            probe[v] = rational::zero();
            let mut test = restricted(net, supply, &probe);
            let base = max_flow(&test);
            test.set_capacity(supply[v], peaks[v]);
            let raised = augment_from(&test, base);
            if raised.amounts[supply[v]] == lambda {
                tight.push(v);
            }
        }
        assert!(!tight.is_empty(), "some supplier is tight at the optimum");
        for v in tight {
            x[v] = Some(lambda);
        }
    }
    x.into_iter().map(|v| v.expect("all frozen")).collect()
}
