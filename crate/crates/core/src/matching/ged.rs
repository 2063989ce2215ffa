//! Gallai-Edmonds decomposition for arbitrary peaks.
//!
//! Computed on the expanded unit graph: `D` (copies exposed by some maximum matching) maps to
//! the under-demanded class, `A = N(D) \ D` to the over-demanded class and the remainder to the
//! perfectly matched class. Copies of one node are twins, so they always share a class.

use serde::Serialize;

use super::Blossom;
use crate::error::{Error, Result};
use crate::instance::{components_within, Expansion, Instance};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum GedClass {
    Under,
    Over,
    Perfect,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GedDecomposition {
    pub under: Vec<usize>,
    pub over: Vec<usize>,
    pub perfect: Vec<usize>,
    /// Connected components of the subgraph induced on `under`.
    pub components: Vec<Vec<usize>>,
    /// `sum of peaks - 1` for components with at least two members.
    pub internal_caps: Vec<Option<u32>>,
    class: Vec<GedClass>,
    component_of: Vec<Option<usize>>,
}

#[derive(Serialize)]
struct GedReport {
    under: Vec<String>,
    over: Vec<String>,
    perfect: Vec<String>,
    components: Vec<Vec<String>>,
}

impl GedDecomposition {
    pub fn class(&self, node: usize) -> GedClass {
        self.class[node]
    }

    pub fn component_of(&self, node: usize) -> Option<usize> {
        self.component_of[node]
    }

    pub fn classes(&self) -> &[GedClass] {
        &self.class
    }

    pub fn to_json(&self, inst: &Instance) -> serde_json::Value {
        let names = |v: &[usize]| v.iter().map(|&i| inst.id(i).to_string()).collect::<Vec<_>>();
        serde_json::to_value(GedReport {
            under: names(&self.under),
            over: names(&self.over),
            perfect: names(&self.perfect),
            components: self.components.iter().map(|c| names(c)).collect(),
        })
        .expect("report serializes")
    }
}

pub fn ged_decompose(inst: &Instance) -> Result<GedDecomposition> {
    inst.require_uncapacitated()?;
    let expansion = Expansion::new(inst.len(), &inst.endpoints(), &inst.peaks());
    let adj = expansion.adjacency();
    let mut solver = Blossom::new(&adj);
    solver.solve();

    let mut in_d = vec![false; expansion.len()];
    let exposed: Vec<usize> = (0..expansion.len())
        .filter(|&c| solver.mates()[c].is_none())
        .collect();
    for root in exposed {
        for v in solver.even_reachable(root) {
            in_d[v] = true;
        }
    }
    let mut in_a = vec![false; expansion.len()];
    for v in 0..expansion.len() {
        if in_d[v] {
            for &w in &adj[v] {
                if !in_d[w] {
                    in_a[w] = true;
                }
            }
        }
    }

    let mut class = Vec::with_capacity(inst.len());
    for i in 0..inst.len() {
        let copy_class = |c: usize| {
            if in_d[c] {
                GedClass::Under
            } else if in_a[c] {
                GedClass::Over
            } else {
                GedClass::Perfect
            }
        };
        let copies = &expansion.copies[i];
        let first = copy_class(copies[0]);
        if copies.iter().any(|&c| copy_class(c) != first) {
            return Err(Error::Inconsistency(format!(
                "copies of `{}` fall into different decomposition classes",
                inst.id(i)
            )));
        }
        class.push(first);
    }

    let pick = |k: GedClass| (0..inst.len()).filter(|&i| class[i] == k).collect::<Vec<_>>();
    let under = pick(GedClass::Under);
    let over = pick(GedClass::Over);
    let perfect = pick(GedClass::Perfect);
    let components = components_within(inst, &under);
    let mut component_of = vec![None; inst.len()];
    let mut internal_caps = Vec::with_capacity(components.len());
    for (k, comp) in components.iter().enumerate() {
        for &i in comp {
            component_of[i] = Some(k);
        }
        internal_caps.push(if comp.len() >= 2 {
            Some(comp.iter().map(|&i| inst.peak(i)).sum::<u32>() - 1)
        } else {
            None
        });
    }
    Ok(GedDecomposition {
        under,
        over,
        perfect,
        components,
        internal_caps,
        class,
        component_of,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn named(inst: &Instance, v: &[usize]) -> Vec<String> {
        v.iter().map(|&i| inst.id(i).to_string()).collect()
    }

    #[test]
    fn fifteen_agent_classes() {
        let inst = fixtures::fifteen_agent();
        let ged = ged_decompose(&inst).unwrap();
        assert_eq!(named(&inst, &ged.over), ["s6", "s7"]);
        assert_eq!(named(&inst, &ged.under), ["s1", "s2", "s3", "s4", "s5", "s8"]);
        assert_eq!(
            named(&inst, &ged.perfect),
            ["s9", "s10", "s11", "s12", "s13", "s14", "s15"]
        );
        assert_eq!(ged.components.len(), 4);
        assert_eq!(named(&inst, &ged.components[0]), ["s1", "s2", "s3"]);
        assert_eq!(ged.internal_caps[0], Some(6));
        assert_eq!(ged.internal_caps[1], None);
    }

    #[test]
    fn seven_path_classes() {
        let inst = fixtures::path7();
        let ged = ged_decompose(&inst).unwrap();
        assert_eq!(named(&inst, &ged.under), ["s1", "s3", "s5", "s7"]);
        assert_eq!(named(&inst, &ged.over), ["s2", "s4", "s6"]);
        assert!(ged.perfect.is_empty());
    }

    #[test]
    fn triangle_is_one_odd_component() {
        let inst = fixtures::triangle();
        let ged = ged_decompose(&inst).unwrap();
        assert_eq!(ged.under, vec![0, 1, 2]);
        assert!(ged.over.is_empty() && ged.perfect.is_empty());
        assert_eq!(ged.components, vec![vec![0, 1, 2]]);
        assert_eq!(ged.internal_caps, vec![Some(2)]);
    }

    #[test]
    fn report_shape() {
        let inst = fixtures::path7();
        let json = ged_decompose(&inst).unwrap().to_json(&inst);
        assert_eq!(json["over"], serde_json::json!(["s2", "s4", "s6"]));
        assert_eq!(json["components"][0], serde_json::json!(["s1"]));
    }
}
