//! Exchange instances: agents with peaks connected by (optionally capacitated) links.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matching::{BMatching, Matching};
use crate::rational::{self, Exact, Rational};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Node {
    pub id: String,
    pub peak: u32,
}

/// Undirected link, stored with the lexicographically smaller id in `u`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Edge {
    pub u: usize,
    pub v: usize,
    /// `None` means unbounded.
    pub cap: Option<u32>,
}

impl Edge {
    pub fn other(&self, x: usize) -> usize {
        if self.u == x {
            self.v
        } else {
            self.u
        }
    }
}

/// A validated exchange problem. Immutable once built.
#[derive(Clone, Debug)]
pub struct Instance {
    name: String,
    nodes: Vec<Node>,
    edges: Vec<Edge>,
    index: HashMap<String, usize>,
    edge_index: HashMap<(usize, usize), usize>,
    adjacency: Vec<Vec<usize>>,
}

impl PartialEq for Instance {
    fn eq(&self, other: &Self) -> bool {
        self.name == other.name && self.nodes == other.nodes && self.edges == other.edges
    }
}

impl Instance {
    /// Builds and validates an instance. Peaks and capacities arrive as raw integers so that
    /// nonpositive values are reported instead of wrapping.
    pub fn build<N, E, S, T, U>(name: impl Into<String>, nodes: N, edges: E) -> Result<Self>
    where
        N: IntoIterator<Item = (S, i64)>,
        E: IntoIterator<Item = (T, U, Option<i64>)>,
        S: Into<String>,
        T: Into<String>,
        U: Into<String>,
    {
        let mut out = Instance {
            name: name.into(),
            nodes: Vec::new(),
            edges: Vec::new(),
            index: HashMap::new(),
            edge_index: HashMap::new(),
            adjacency: Vec::new(),
        };
        for (id, peak) in nodes {
            let id = id.into();
            if peak < 1 || peak > u32::MAX as i64 {
                return Err(Error::NonPositivePeak { id, peak });
            }
            if out.index.contains_key(&id) {
                return Err(Error::DuplicateNode(id));
            }
            out.index.insert(id.clone(), out.nodes.len());
            out.nodes.push(Node { id, peak: peak as u32 });
            out.adjacency.push(Vec::new());
        }
        for (a, b, cap) in edges {
            let (a, b) = (a.into(), b.into());
            let ia = *out.index.get(&a).ok_or_else(|| Error::UnknownNode(a.clone()))?;
            let ib = *out.index.get(&b).ok_or_else(|| Error::UnknownNode(b.clone()))?;
            if ia == ib {
                return Err(Error::SelfLoop(a));
            }
            let cap = match cap {
                None => None,
                Some(c) if c >= 1 && c <= u32::MAX as i64 => Some(c as u32),
                Some(c) => return Err(Error::NonPositiveCapacity { u: a, v: b, cap: c }),
            };
            let (u, v) = if out.nodes[ia].id <= out.nodes[ib].id {
                (ia, ib)
            } else {
                (ib, ia)
            };
            let key = (u.min(v), u.max(v));
            if out.edge_index.contains_key(&key) {
                return Err(Error::DuplicateEdge(
                    out.nodes[u].id.clone(),
                    out.nodes[v].id.clone(),
                ));
            }
            out.edge_index.insert(key, out.edges.len());
            out.adjacency[u].push(out.edges.len());
            out.adjacency[v].push(out.edges.len());
            out.edges.push(Edge { u, v, cap });
        }
        Ok(out)
    }

    /// Convenience constructor for uncapacitated instances.
    pub fn uncapacitated(name: &str, nodes: &[(&str, u32)], edges: &[(&str, &str)]) -> Result<Self> {
        Instance::build(
            name,
            nodes.iter().map(|&(id, p)| (id, p as i64)),
            edges.iter().map(|&(u, v)| (u, v, None)),
        )
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn nodes(&self) -> &[Node] {
        &self.nodes
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn id(&self, i: usize) -> &str {
        &self.nodes[i].id
    }

    pub fn ids(&self) -> Vec<String> {
        self.nodes.iter().map(|n| n.id.clone()).collect()
    }

    pub fn peak(&self, i: usize) -> u32 {
        self.nodes[i].peak
    }

    pub fn peaks(&self) -> Vec<u32> {
        self.nodes.iter().map(|n| n.peak).collect()
    }

    pub fn total_peak(&self) -> u64 {
        self.nodes.iter().map(|n| n.peak as u64).sum()
    }

    pub fn index_of(&self, id: &str) -> Option<usize> {
        self.index.get(id).copied()
    }

    pub fn edge_between(&self, a: usize, b: usize) -> Option<usize> {
        self.edge_index.get(&(a.min(b), a.max(b))).copied()
    }

    /// Indices of edges incident to `i`.
    pub fn incident(&self, i: usize) -> &[usize] {
        &self.adjacency[i]
    }

    pub fn neighbors(&self, i: usize) -> impl Iterator<Item = usize> + '_ {
        self.adjacency[i].iter().map(move |&e| self.edges[e].other(i))
    }

    pub fn is_uncapacitated(&self) -> bool {
        self.edges.iter().all(|e| e.cap.is_none())
    }

    pub fn endpoints(&self) -> Vec<(usize, usize)> {
        self.edges.iter().map(|e| (e.u, e.v)).collect()
    }

    /// Fails with the first capacitated edge, if any.
    pub fn require_uncapacitated(&self) -> Result<()> {
        match self.edges.iter().find(|e| e.cap.is_some()) {
            Some(e) => Err(Error::UnsupportedForExpansion(
                self.id(e.u).to_string(),
                self.id(e.v).to_string(),
            )),
            None => Ok(()),
        }
    }

    /// Same graph with some peaks replaced.
    pub fn with_peaks(&self, peaks: &[(usize, u32)]) -> Result<Instance> {
        let mut p = self.peaks();
        for &(i, b) in peaks {
            p[i] = b;
        }
        Instance::build(
            self.name.clone(),
            self.nodes.iter().zip(p).map(|(n, b)| (n.id.clone(), b as i64)),
            self.edge_triples(),
        )
    }

    /// Same instance with the given edge indices removed.
    pub fn without_edges(&self, removed: &[usize]) -> Result<Instance> {
        Instance::build(
            self.name.clone(),
            self.nodes.iter().map(|n| (n.id.clone(), n.peak as i64)),
            self.edge_triples()
                .into_iter()
                .enumerate()
                .filter(|(k, _)| !removed.contains(k))
                .map(|(_, t)| t),
        )
    }

    fn edge_triples(&self) -> Vec<(String, String, Option<i64>)> {
        self.edges
            .iter()
            .map(|e| {
                (
                    self.id(e.u).to_string(),
                    self.id(e.v).to_string(),
                    e.cap.map(|c| c as i64),
                )
            })
            .collect()
    }

    /// Connected components, each sorted, ordered by smallest member.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let all: Vec<usize> = (0..self.len()).collect();
        components_within(self, &all)
    }

    pub fn is_connected(&self) -> bool {
        self.components().len() <= 1
    }

    pub fn to_file(&self) -> InstanceFile {
        InstanceFile {
            name: self.name.clone(),
            nodes: self
                .nodes
                .iter()
                .map(|n| NodeRecord { id: n.id.clone(), peak: n.peak as i64 })
                .collect(),
            edges: self
                .edges
                .iter()
                .map(|e| EdgeRecord {
                    u: self.id(e.u).to_string(),
                    v: self.id(e.v).to_string(),
                    cap: e.cap.map(|c| c as i64),
                })
                .collect(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_file()).expect("instance serializes")
    }
}

/// Connected components of the subgraph induced on `subset`.
pub fn components_within(inst: &Instance, subset: &[usize]) -> Vec<Vec<usize>> {
    let mut inside = vec![false; inst.len()];
    for &i in subset {
        inside[i] = true;
    }
    let mut seen = vec![false; inst.len()];
    let mut order: Vec<usize> = subset.to_vec();
    order.sort_unstable();
    let mut out = Vec::new();
    for &start in &order {
        if seen[start] {
            continue;
        }
        seen[start] = true;
        let mut comp = vec![start];
        let mut stack = vec![start];
        while let Some(x) = stack.pop() {
            for y in inst.neighbors(x) {
                if inside[y] && !seen[y] {
                    seen[y] = true;
                    comp.push(y);
                    stack.push(y);
                }
            }
        }
        comp.sort_unstable();
        out.push(comp);
    }
    out
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceFile {
    #[serde(default)]
    pub name: String,
    pub nodes: Vec<NodeRecord>,
    #[serde(default)]
    pub edges: Vec<EdgeRecord>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NodeRecord {
    pub id: String,
    pub peak: i64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EdgeRecord {
    pub u: String,
    pub v: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cap: Option<i64>,
}

/// Parses an instance file (`{"name", "nodes": [{"id","peak"}], "edges": [{"u","v","cap"}]}`).
pub fn parse_instance(text: &str) -> Result<Instance> {
    let file: InstanceFile = serde_json::from_str(text).map_err(|e| Error::Syntax {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    Instance::build(
        file.name,
        file.nodes.into_iter().map(|n| (n.id, n.peak)),
        file.edges.into_iter().map(|e| (e.u, e.v, e.cap)),
    )
}

/// Unit-peak copies of every node, wired to copies of every neighbour.
#[derive(Clone, Debug)]
pub(crate) struct Expansion {
    pub owner: Vec<usize>,
    pub copies: Vec<Vec<usize>>,
    pub edges: Vec<(usize, usize)>,
    /// Base edge index for each expanded edge.
    pub origin: Vec<usize>,
}

impl Expansion {
    /// `peaks` may contain zeros; such nodes get no copies.
    pub fn new(node_count: usize, base_edges: &[(usize, usize)], peaks: &[u32]) -> Self {
        let mut owner = Vec::new();
        let mut copies = vec![Vec::new(); node_count];
        for (i, &b) in peaks.iter().enumerate() {
            for _ in 0..b {
                copies[i].push(owner.len());
                owner.push(i);
            }
        }
        let mut edges = Vec::new();
        let mut origin = Vec::new();
        for (k, &(u, v)) in base_edges.iter().enumerate() {
            for &cu in &copies[u] {
                for &cv in &copies[v] {
                    edges.push((cu, cv));
                    origin.push(k);
                }
            }
        }
        Expansion { owner, copies, edges, origin }
    }

    pub fn len(&self) -> usize {
        self.owner.len()
    }

    pub fn adjacency(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.len()];
        for &(a, b) in &self.edges {
            adj[a].push(b);
            adj[b].push(a);
        }
        adj
    }

    /// Multiplicity per base edge induced by a matching of the expanded graph.
    pub fn contract(&self, base_edge_count: usize, mate: &[Option<usize>]) -> Vec<u32> {
        let mut lookup: HashMap<(usize, usize), usize> = HashMap::new();
        for (k, &(a, b)) in self.edges.iter().enumerate() {
            lookup.insert((a.min(b), a.max(b)), self.origin[k]);
        }
        let mut mult = vec![0u32; base_edge_count];
        for (a, m) in mate.iter().enumerate() {
            if let Some(b) = *m {
                if a < b {
                    let k = lookup[&(a, b)];
                    mult[k] += 1;
                }
            }
        }
        mult
    }
}

/// The unit-peak instance obtained by duplicating each node `b_i` times.
#[derive(Clone, Debug)]
pub struct ExpandedInstance {
    base: Instance,
    expansion: Expansion,
    unit: Instance,
}

impl ExpandedInstance {
    pub fn base(&self) -> &Instance {
        &self.base
    }

    /// The expanded graph as a unit-peak instance; copy `k` of node `i` is named `i#k`.
    pub fn unit_instance(&self) -> &Instance {
        &self.unit
    }

    pub fn copies(&self, node: usize) -> &[usize] {
        &self.expansion.copies[node]
    }

    pub fn copy_id(&self, copy: usize) -> &str {
        self.unit.id(copy)
    }

    pub fn owner(&self, copy: usize) -> usize {
        self.expansion.owner[copy]
    }

    pub fn len(&self) -> usize {
        self.expansion.len()
    }

    pub fn is_empty(&self) -> bool {
        self.expansion.len() == 0
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.expansion.edges
    }
}

pub fn expand_nodes(inst: &Instance) -> Result<ExpandedInstance> {
    inst.require_uncapacitated()?;
    let expansion = Expansion::new(inst.len(), &inst.endpoints(), &inst.peaks());
    let mut ids = Vec::with_capacity(expansion.len());
    for (i, cs) in expansion.copies.iter().enumerate() {
        for k in 1..=cs.len() {
            ids.push(format!("{}#{}", inst.id(i), k));
        }
    }
    let unit = Instance::build(
        format!("{} (expanded)", inst.name()),
        ids.iter().map(|id| (id.clone(), 1)),
        expansion
            .edges
            .iter()
            .map(|&(a, b)| (ids[a].clone(), ids[b].clone(), None)),
    )?;
    Ok(ExpandedInstance { base: inst.clone(), expansion, unit })
}

/// Collapses a matching of the expanded graph to edge multiplicities on the base instance.
pub fn contract_matching(expanded: &ExpandedInstance, m: &Matching) -> BMatching {
    let mult = expanded
        .expansion
        .contract(expanded.base.edges().len(), m.mates());
    BMatching::from_multiplicities(mult)
}

/// A matching of the expanded graph contracting to `m`: each unit on edge `ij` takes the next
/// free copy of `i` and of `j`.
pub fn lift_bmatching(expanded: &ExpandedInstance, m: &BMatching) -> Result<Matching> {
    let base = &expanded.base;
    if !m.is_feasible(base) {
        return Err(Error::InvalidInput("b-matching exceeds a peak".into()));
    }
    let mut used = vec![0usize; base.len()];
    let mut pairs = Vec::new();
    for (e, &k) in base.edges().iter().zip(m.multiplicities()) {
        for _ in 0..k {
            pairs.push((expanded.copies(e.u)[used[e.u]], expanded.copies(e.v)[used[e.v]]));
            used[e.u] += 1;
            used[e.v] += 1;
        }
    }
    Matching::from_pairs(expanded.len(), &pairs)
}

/// Per-agent utilities, indexed like the instance's nodes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UtilityProfile {
    ids: Vec<String>,
    values: Vec<Rational>,
}

impl UtilityProfile {
    pub fn new(ids: Vec<String>, values: Vec<Rational>) -> Self {
        assert_eq!(ids.len(), values.len());
        UtilityProfile { ids, values }
    }

    /// Builds a profile and checks `0 <= x_i <= b_i`.
    pub fn for_instance(inst: &Instance, values: Vec<Rational>) -> Result<Self> {
        if values.len() != inst.len() {
            return Err(Error::MismatchedAgents);
        }
        for (i, x) in values.iter().enumerate() {
            if *x < rational::zero() || *x > rational::int(inst.peak(i) as i128) {
                return Err(Error::InvalidInput(format!(
                    "utility {} of `{}` outside [0, {}]",
                    Exact(*x),
                    inst.id(i),
                    inst.peak(i)
                )));
            }
        }
        Ok(UtilityProfile { ids: inst.ids(), values })
    }

    pub fn integral(inst: &Instance, values: &[u32]) -> Result<Self> {
        Self::for_instance(inst, values.iter().map(|&v| rational::int(v as i128)).collect())
    }

    pub fn ids(&self) -> &[String] {
        &self.ids
    }

    pub fn values(&self) -> &[Rational] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn get(&self, id: &str) -> Option<Rational> {
        self.ids.iter().position(|x| x == id).map(|k| self.values[k])
    }

    pub fn total(&self) -> Rational {
        self.values.iter().copied().sum()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &Rational)> {
        self.ids.iter().map(String::as_str).zip(self.values.iter())
    }

    pub fn to_json(&self) -> serde_json::Value {
        let mut map = serde_json::Map::new();
        for (id, v) in self.iter() {
            map.insert(id.to_string(), serde_json::Value::String(rational::format_ratio(v)));
        }
        serde_json::Value::Object(map)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matching::{max_bmatching, max_matching};
    use crate::fixtures;

    #[test]
    fn parses_triangle() {
        let inst = parse_instance(fixtures::TRIANGLE_JSON).unwrap();
        assert_eq!(inst.len(), 3);
        assert_eq!(inst.edges().len(), 3);
        assert!(inst.is_uncapacitated());
    }

    #[test]
    fn parses_fifteen_agent() {
        let inst = parse_instance(fixtures::FIFTEEN_AGENT_JSON).unwrap();
        assert_eq!(inst.len(), 15);
        assert_eq!(inst.peaks(), vec![2, 3, 2, 4, 4, 5, 2, 4, 2, 2, 2, 2, 2, 2, 2]);
    }

    #[test]
    fn rejects_bad_input() {
        let self_loop = r#"{"name":"x","nodes":[{"id":"a","peak":1}],"edges":[{"u":"a","v":"a"}]}"#;
        assert_eq!(parse_instance(self_loop), Err(Error::SelfLoop("a".into())));
        let dup = r#"{"nodes":[{"id":"a","peak":1},{"id":"a","peak":2}]}"#;
        assert_eq!(parse_instance(dup), Err(Error::DuplicateNode("a".into())));
        let zero = r#"{"nodes":[{"id":"a","peak":0}]}"#;
        assert!(matches!(parse_instance(zero), Err(Error::NonPositivePeak { .. })));
        let unknown = r#"{"nodes":[{"id":"a","peak":1}],"edges":[{"u":"a","v":"b"}]}"#;
        assert_eq!(parse_instance(unknown), Err(Error::UnknownNode("b".into())));
        let dup_edge = r#"{"nodes":[{"id":"a","peak":1},{"id":"b","peak":1}],
            "edges":[{"u":"a","v":"b"},{"u":"b","v":"a"}]}"#;
        assert!(matches!(parse_instance(dup_edge), Err(Error::DuplicateEdge(..))));
        let cap0 = r#"{"nodes":[{"id":"a","peak":1},{"id":"b","peak":1}],
            "edges":[{"u":"a","v":"b","cap":0}]}"#;
        assert!(matches!(parse_instance(cap0), Err(Error::NonPositiveCapacity { .. })));
    }

    #[test]
    fn syntax_error_reports_position() {
        let err = parse_instance("{\n  \"nodes\": [ {\"id\": \"a\", \"peak\": }\n]}").unwrap_err();
        match err {
            Error::Syntax { line, .. } => assert_eq!(line, 2),
            other => panic!("unexpected {other:?}"),
        }
        let missing = parse_instance(r#"{"nodes":[{"id":"a"}]}"#).unwrap_err();
        assert!(matches!(missing, Error::Syntax { ref message, .. } if message.contains("peak")));
    }

    #[test]
    fn edges_are_canonical() {
        let inst = Instance::uncapacitated("t", &[("b", 1), ("a", 1)], &[("b", "a")]).unwrap();
        let e = inst.edges()[0];
        assert_eq!((inst.id(e.u), inst.id(e.v)), ("a", "b"));
    }

    #[test]
    fn json_round_trip() {
        let inst = parse_instance(fixtures::FIFTEEN_AGENT_JSON).unwrap();
        let again = parse_instance(&inst.to_json()).unwrap();
        assert_eq!(inst, again);
    }

    #[test]
    fn expansion_of_unit_instance_is_identity() {
        let inst = fixtures::triangle();
        let exp = expand_nodes(&inst).unwrap();
        assert_eq!(exp.len(), 3);
        assert_eq!(exp.edges().len(), 3);
    }

    #[test]
    fn expansion_of_single_edge() {
        let inst = Instance::uncapacitated("e", &[("a", 2), ("b", 1)], &[("a", "b")]).unwrap();
        let exp = expand_nodes(&inst).unwrap();
        let ids: Vec<&str> = (0..exp.len()).map(|c| exp.copy_id(c)).collect();
        assert_eq!(ids, vec!["a#1", "a#2", "b#1"]);
        let mut named: Vec<(String, String)> = exp
            .edges()
            .iter()
            .map(|&(x, y)| (exp.copy_id(x).to_string(), exp.copy_id(y).to_string()))
            .collect();
        named.sort();
        assert_eq!(
            named,
            vec![("a#1".into(), "b#1".into()), ("a#2".into(), "b#1".into())]
        );
    }

    #[test]
    fn expansion_size_of_fifteen_agent() {
        let exp = expand_nodes(&fixtures::fifteen_agent()).unwrap();
        assert_eq!(exp.len(), 40);
        for i in 0..exp.base().len() {
            assert_eq!(exp.copies(i).len() as u32, exp.base().peak(i));
        }
        // No edges between copies of the same node.
        assert!(exp.edges().iter().all(|&(a, b)| exp.owner(a) != exp.owner(b)));
    }

    #[test]
    fn expansion_rejects_capacities() {
        let inst = Instance::build("c", [("a", 1), ("b", 1)], [("a", "b", Some(1))]).unwrap();
        assert!(matches!(expand_nodes(&inst), Err(Error::UnsupportedForExpansion(..))));
    }

    #[test]
    fn contraction_examples() {
        let inst = Instance::uncapacitated("p", &[("a", 2), ("b", 2)], &[("a", "b")]).unwrap();
        let exp = expand_nodes(&inst).unwrap();
        let empty = Matching::empty(exp.len());
        assert_eq!(contract_matching(&exp, &empty).multiplicities(), &[0]);
        let m = max_matching(exp.unit_instance()).unwrap();
        assert_eq!(m.size(), 2);
        assert_eq!(contract_matching(&exp, &m).multiplicities(), &[2]);
    }

    #[test]
    fn contraction_of_fifteen_agent_maximum() {
        let inst = fixtures::fifteen_agent();
        let exp = expand_nodes(&inst).unwrap();
        let m = max_matching(exp.unit_instance()).unwrap();
        let b = contract_matching(&exp, &m);
        assert!(b.is_feasible(&inst));
        assert_eq!(b.total_utility(), 34);
        assert_eq!(max_bmatching(&inst).unwrap().total_utility(), 34);
    }

    #[test]
    fn profile_bounds() {
        let inst = fixtures::triangle();
        assert!(UtilityProfile::integral(&inst, &[1, 1, 0]).is_ok());
        assert!(UtilityProfile::integral(&inst, &[2, 0, 0]).is_err());
        assert!(UtilityProfile::integral(&inst, &[1, 1]).is_err());
    }
}
