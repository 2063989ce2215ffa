//! Edmonds' blossom algorithm for maximum-cardinality matching in general graphs.
//!
//! Each search grows an alternating tree from a single exposed root, contracting odd cycles by
//! relabelling their base. When a search from `root` fails on a maximum matching, the vertices it
//! marked as outer are exactly those reachable from `root` by an even alternating path; the union
//! over all exposed roots is the Gallai-Edmonds `D` set.

use std::collections::VecDeque;

pub(crate) struct Blossom<'a> {
    adj: &'a [Vec<usize>],
    mate: Vec<Option<usize>>,
    parent: Vec<Option<usize>>,
    base: Vec<usize>,
    outer: Vec<bool>,
    in_blossom: Vec<bool>,
    queue: VecDeque<usize>,
}

impl<'a> Blossom<'a> {
    pub fn new(adj: &'a [Vec<usize>]) -> Self {
        let n = adj.len();
        Blossom {
            adj,
            mate: vec![None; n],
            parent: vec![None; n],
            base: (0..n).collect(),
            outer: vec![false; n],
            in_blossom: vec![false; n],
            queue: VecDeque::new(),
        }
    }

    pub fn mates(&self) -> &[Option<usize>] {
        &self.mate
    }

    pub fn into_mates(self) -> Vec<Option<usize>> {
        self.mate
    }

    /// Runs to a maximum matching.
    pub fn solve(&mut self) {
        let n = self.adj.len();
        // Greedy start; any matching works as a seed.
        for v in 0..n {
            if self.mate[v].is_none() {
                if let Some(&w) = self.adj[v].iter().find(|&&w| self.mate[w].is_none() && w != v) {
                    self.mate[v] = Some(w);
                    self.mate[w] = Some(v);
                }
            }
        }
        for root in 0..n {
            if self.mate[root].is_none() {
                if let Some(end) = self.search(root) {
                    self.augment(end);
                }
            }
        }
    }

    /// Outer vertices of a (failed) search from `root`.
    pub fn even_reachable(&mut self, root: usize) -> Vec<usize> {
        debug_assert!(self.mate[root].is_none());
        let found = self.search(root);
        assert!(found.is_none(), "matching is not maximum");
        (0..self.adj.len()).filter(|&v| self.outer[v]).collect()
    }

    fn augment(&mut self, mut v: usize) {
        loop {
            let pv = self.parent[v].expect("augmenting path has parents");
            let next = self.mate[pv];
            self.mate[v] = Some(pv);
            self.mate[pv] = Some(v);
            match next {
                Some(w) => v = w,
                None => break,
            }
        }
    }

    fn lca(&self, mut a: usize, mut b: usize) -> usize {
        let mut seen = vec![false; self.adj.len()];
        loop {
            a = self.base[a];
            seen[a] = true;
            match self.mate[a] {
                Some(m) => a = self.parent[m].expect("outer vertex has a tree parent"),
                None => break,
            }
        }
        loop {
            b = self.base[b];
            if seen[b] {
                return b;
            }
            let m = self.mate[b].expect("walk stays below the root");
            b = self.parent[m].expect("outer vertex has a tree parent");
        }
    }

    fn mark_path(&mut self, mut v: usize, b: usize, mut child: usize) {
        while self.base[v] != b {
            let m = self.mate[v].expect("blossom vertex is matched");
            self.in_blossom[self.base[v]] = true;
            self.in_blossom[self.base[m]] = true;
            self.parent[v] = Some(child);
            child = m;
            v = self.parent[m].expect("outer vertex has a tree parent");
        }
    }

    /// Returns the exposed endpoint of an augmenting path from `root`, if one exists.
    fn search(&mut self, root: usize) -> Option<usize> {
        let n = self.adj.len();
        self.outer.iter_mut().for_each(|x| *x = false);
        self.parent.iter_mut().for_each(|x| *x = None);
        for (i, b) in self.base.iter_mut().enumerate() {
            *b = i;
        }
        self.queue.clear();
        self.outer[root] = true;
        self.queue.push_back(root);
        while let Some(v) = self.queue.pop_front() {
            for k in 0..self.adj[v].len() {
                let to = self.adj[v][k];
                if self.base[v] == self.base[to] || self.mate[v] == Some(to) {
                    continue;
                }
                let to_is_outer = to == root
                    || self.mate[to].is_some_and(|m| self.parent[m].is_some());
                if to_is_outer {
                    let cur = self.lca(v, to);
                    self.in_blossom.iter_mut().for_each(|x| *x = false);
                    self.mark_path(v, cur, to);
                    self.mark_path(to, cur, v);
                    for i in 0..n {
                        if self.in_blossom[self.base[i]] {
                            self.base[i] = cur;
                            if !self.outer[i] {
                                self.outer[i] = true;
                                self.queue.push_back(i);
                            }
                        }
                    }
                } else if self.parent[to].is_none() {
                    self.parent[to] = Some(v);
                    match self.mate[to] {
                        None => return Some(to),
                        Some(m) => {
                            self.outer[m] = true;
                            self.queue.push_back(m);
                        }
                    }
                }
            }
        }
        None
    }
}
