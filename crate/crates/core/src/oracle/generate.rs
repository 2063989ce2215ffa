//! Small test graphs: exhaustive non-isomorphic families and seeded random samples.

use std::collections::BTreeSet;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::instance::Instance;

pub type EdgeList = Vec<(usize, usize)>;

fn pairs(n: usize) -> Vec<(usize, usize)> {
    (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b))).collect()
}

fn connected(n: usize, edges: &[(usize, usize)]) -> bool {
    if n == 0 {
        return true;
    }
    let mut seen = vec![false; n];
    let mut stack = vec![0];
    seen[0] = true;
    while let Some(v) = stack.pop() {
        for &(a, b) in edges {
            let w = if a == v { b } else if b == v { a } else { continue };
            if !seen[w] {
                seen[w] = true;
                stack.push(w);
            }
        }
    }
    seen.into_iter().all(|s| s)
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    fn go(prefix: &mut Vec<usize>, used: &mut Vec<bool>, out: &mut Vec<Vec<usize>>) {
        if prefix.len() == used.len() {
            out.push(prefix.clone());
            return;
        }
        for v in 0..used.len() {
            if !used[v] {
                used[v] = true;
                prefix.push(v);
                go(prefix, used, out);
                prefix.pop();
                used[v] = false;
            }
        }
    }
    let mut out = Vec::new();
    go(&mut Vec::new(), &mut vec![false; n], &mut out);
    out
}

fn relabel(edges: &[(usize, usize)], perm: &[usize]) -> EdgeList {
    let mut e: EdgeList = edges
        .iter()
        .map(|&(a, b)| {
            let (x, y) = (perm[a], perm[b]);
            (x.min(y), x.max(y))
        })
        .collect();
    e.sort();
    e
}

/// One representative of every isomorphism class of connected graphs on `n` vertices.
pub fn connected_graphs(n: usize) -> Vec<EdgeList> {
    let all = pairs(n);
    let perms = permutations(n);
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for mask in 0u64..(1 << all.len()) {
        let edges: EdgeList = (0..all.len()).filter(|&k| mask >> k & 1 == 1).map(|k| all[k]).collect();
        if !connected(n, &edges) {
            continue;
        }
        let canonical = perms.iter().map(|p| relabel(&edges, p)).min().expect("at least one permutation");
        if seen.insert(canonical) {
            out.push(edges);
        }
    }
    out
}

fn node_name(k: usize) -> String {
    format!("v{}", k + 1)
}

pub fn instance_from(name: &str, peaks: &[u32], edges: &[(usize, usize)]) -> Instance {
    Instance::build(
        name,
        peaks.iter().enumerate().map(|(k, &p)| (node_name(k), p as i64)),
        edges.iter().map(|&(a, b)| (node_name(a), node_name(b), None)),
    )
    .expect("generated instances are valid")
}

/// Every connected graph on at most `max_nodes` vertices (up to isomorphism) with every peak
/// assignment in `1..=max_peak`.
pub fn all_small_instances(max_nodes: usize, max_peak: u32) -> Vec<Instance> {
    let mut out = Vec::new();
    for n in 1..=max_nodes {
        for (g, edges) in connected_graphs(n).into_iter().enumerate() {
            let mut peaks = vec![1u32; n];
            loop {
                out.push(instance_from(&format!("n{n}-g{g}-{peaks:?}"), &peaks, &edges));
                let Some(k) = (0..n).find(|&k| peaks[k] < max_peak) else { break };
                peaks[k] += 1;
                for p in &mut peaks[..k] {
                    *p = 1;
                }
            }
        }
    }
    out
}

/// A random connected graph: random spanning tree plus each other pair with probability `density`.
pub fn random_connected(rng: &mut impl Rng, n: usize, max_peak: u32, density: f64) -> Instance {
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);
    let mut edges = BTreeSet::new();
    for k in 1..n {
        let parent = order[rng.random_range(0..k)];
        let (a, b) = (order[k].min(parent), order[k].max(parent));
        edges.insert((a, b));
    }
    for (a, b) in pairs(n) {
        if !edges.contains(&(a, b)) && rng.random_bool(density) {
            edges.insert((a, b));
        }
    }
    let peaks: Vec<u32> = (0..n).map(|_| rng.random_range(1..=max_peak)).collect();
    let edges: EdgeList = edges.into_iter().collect();
    instance_from("random", &peaks, &edges)
}

/// A random bipartite graph with `left + right` nodes; left nodes come first.
pub fn random_bipartite(rng: &mut impl Rng, left: usize, right: usize, max_peak: u32, density: f64) -> Instance {
    let mut edges = Vec::new();
    for a in 0..left {
        for b in left..left + right {
            if rng.random_bool(density) {
                edges.push((a, b));
            }
        }
    }
    let peaks: Vec<u32> = (0..left + right).map(|_| rng.random_range(1..=max_peak)).collect();
    instance_from("bipartite", &peaks, &edges)
}

/// Node permutations preserving adjacency and peaks.
pub fn automorphisms(inst: &Instance) -> Vec<Vec<usize>> {
    let n = inst.len();
    let mut adj = vec![vec![false; n]; n];
    for e in inst.edges() {
        adj[e.u][e.v] = true;
        adj[e.v][e.u] = true;
    }
    let mut out = Vec::new();
    let mut perm = Vec::with_capacity(n);
    let mut used = vec![false; n];
    fn go(inst: &Instance, adj: &[Vec<bool>], perm: &mut Vec<usize>, used: &mut Vec<bool>, out: &mut Vec<Vec<usize>>) {
        let v = perm.len();
        if v == adj.len() {
            out.push(perm.clone());
            return;
        }
        for w in 0..adj.len() {
            if used[w] || inst.peak(v) != inst.peak(w) {
                continue;
            }
            if (0..v).any(|u| adj[u][v] != adj[perm[u]][w]) {
                continue;
            }
            used[w] = true;
            perm.push(w);
            go(inst, adj, perm, used, out);
            perm.pop();
            used[w] = false;
        }
    }
    go(inst, &adj, &mut perm, &mut used, &mut out);
    out
}
