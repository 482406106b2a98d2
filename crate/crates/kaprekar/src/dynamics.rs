//! The functional graph of the class map: trees hanging off attractor
//! cycles, depths and numeric lifts of the cycles.

use std::collections::{BTreeMap, HashMap, VecDeque};
use std::fmt::Write;

use rayon::prelude::*;
use serde::Serialize;

use crate::digits::{kaprekar_step, params, DigitNumber};
use crate::params::{apply_f, enumerate_classes, ParamVector};
use crate::symbolic::total_k;

/// An attractor: classes permuted cyclically by the class map. Fixed
/// classes are cycles of length 1.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Cycle {
    /// Rotated to start at the largest member.
    pub members: Vec<ParamVector>,
    /// `numeric_members[i]` is the image of the class before `members[i]`.
    pub numeric_members: Vec<DigitNumber>,
}

impl Cycle {
    fn from_members(mut members: Vec<ParamVector>) -> Self {
        let start = (0..members.len())
            .max_by(|&a, &b| members[a].cmp(&members[b]))
            .unwrap_or(0);
        members.rotate_left(start);
        let numeric_members = numeric_cycle_of(&members);
        Self {
            members,
            numeric_members,
        }
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, alpha: &ParamVector) -> bool {
        self.members.contains(alpha)
    }

    /// True when `seq` lists the members in cycle order from some start.
    pub fn matches_cyclically(&self, seq: &[ParamVector]) -> bool {
        let n = self.len();
        seq.len() == n && (0..n).any(|r| (0..n).all(|i| self.members[(r + i) % n] == seq[i]))
    }
}

fn numeric_cycle_of(members: &[ParamVector]) -> Vec<DigitNumber> {
    let n = members.len();
    (0..n).map(|i| apply_f(&members[(i + n - 1) % n])).collect()
}

/// The numbers `n_ci = f(α_c(i-1))`, checked to step into one another and to
/// carry the parameters of their class.
pub fn numeric_cycle(c: &Cycle) -> Vec<DigitNumber> {
    let nums = numeric_cycle_of(&c.members);
    let n = nums.len();
    for i in 0..n {
        assert_eq!(kaprekar_step(&nums[i]), nums[(i + 1) % n], "cycle lift does not step");
        assert_eq!(params(&nums[i]), c.members[i], "cycle lift has the wrong class");
    }
    nums
}

/// A connected component: one attractor and the trees feeding it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Component {
    /// "tree A", "tree B", … in component order.
    pub name: String,
    /// Node indices in canonical class order.
    pub nodes: Vec<usize>,
    pub cycle: Cycle,
}

impl Component {
    pub fn size(&self) -> usize {
        self.nodes.len()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassGraph {
    pub width: usize,
    /// Every class, in canonical (descending) order.
    pub nodes: Vec<ParamVector>,
    pub succ: Vec<usize>,
    /// Ordered by decreasing size, then by smallest attractor member.
    pub components: Vec<Component>,
    pub component_of: Vec<usize>,
    /// Steps to reach the attractor.
    pub depth: Vec<usize>,
    index: HashMap<ParamVector, usize>,
}

fn component_name(i: usize) -> String {
    match i {
        0..=25 => format!("tree {}", (b'A' + i as u8) as char),
        _ => format!("tree {}", i + 1),
    }
}

pub fn build_graph(w: usize) -> ClassGraph {
    build_graph_with(w, true)
}

pub fn build_graph_with(w: usize, parallel: bool) -> ClassGraph {
    let nodes = enumerate_classes(w);
    let index: HashMap<ParamVector, usize> = nodes.iter().cloned().enumerate().map(|(i, a)| (a, i)).collect();
    let image = |a: &ParamVector| index[&total_k(a)];
    let succ: Vec<usize> = if parallel {
        nodes.par_iter().map(image).collect()
    } else {
        nodes.iter().map(image).collect()
    };
    let n = nodes.len();

    // colour 0 = unseen, 1 = on the current walk, 2 = done
    let mut colour = vec![0u8; n];
    let mut cycles: Vec<Vec<usize>> = Vec::new();
    for start in 0..n {
        let mut walk = Vec::new();
        let mut v = start;
        while colour[v] == 0 {
            colour[v] = 1;
            walk.push(v);
            v = succ[v];
        }
        if colour[v] == 1 {
            let pos = walk.iter().position(|&x| x == v).expect("v is on the walk");
            cycles.push(walk[pos..].to_vec());
        }
        for x in walk {
            colour[x] = 2;
        }
    }

    let mut preds = vec![Vec::new(); n];
    for (v, &s) in succ.iter().enumerate() {
        preds[s].push(v);
    }
    let mut raw_comp = vec![usize::MAX; n];
    let mut depth = vec![0usize; n];
    let mut queue = VecDeque::new();
    for (c, cyc) in cycles.iter().enumerate() {
        for &v in cyc {
            raw_comp[v] = c;
            queue.push_back(v);
        }
    }
    while let Some(v) = queue.pop_front() {
        for &p in &preds[v] {
            if raw_comp[p] == usize::MAX {
                raw_comp[p] = raw_comp[v];
                depth[p] = depth[v] + 1;
                queue.push_back(p);
            }
        }
    }

    let mut order: Vec<usize> = (0..cycles.len()).collect();
    let sizes: Vec<usize> = (0..cycles.len())
        .map(|c| raw_comp.iter().filter(|&&x| x == c).count())
        .collect();
    let smallest = |c: usize| {
        cycles[c]
            .iter()
            .map(|&v| nodes[v].clone())
            .min()
            .expect("cycles are non-empty")
    };
    order.sort_by(|&a, &b| sizes[b].cmp(&sizes[a]).then_with(|| smallest(a).cmp(&smallest(b))));
    let mut rank = vec![0; cycles.len()];
    for (r, &c) in order.iter().enumerate() {
        rank[c] = r;
    }
    let component_of: Vec<usize> = raw_comp.iter().map(|&c| rank[c]).collect();
    let components = order
        .iter()
        .enumerate()
        .map(|(r, &c)| Component {
            name: component_name(r),
            nodes: (0..n).filter(|&v| component_of[v] == r).collect(),
            cycle: Cycle::from_members(cycles[c].iter().map(|&v| nodes[v].clone()).collect()),
        })
        .collect();

    ClassGraph {
        width: w,
        nodes,
        succ,
        components,
        component_of,
        depth,
        index,
    }
}

impl ClassGraph {
    pub fn index_of(&self, alpha: &ParamVector) -> Option<usize> {
        self.index.get(alpha).copied()
    }

    pub fn next(&self, alpha: &ParamVector) -> Option<&ParamVector> {
        self.index_of(alpha).map(|i| &self.nodes[self.succ[i]])
    }

    pub fn component(&self, alpha: &ParamVector) -> Option<&Component> {
        self.index_of(alpha).map(|i| &self.components[self.component_of[i]])
    }

    pub fn to_export(&self) -> GraphExport {
        GraphExport {
            width: self.width,
            classes: self.nodes.iter().map(|a| a.to_string()).collect(),
            edges: (0..self.nodes.len())
                .map(|v| [self.nodes[v].to_string(), self.nodes[self.succ[v]].to_string()])
                .collect(),
            components: self
                .components
                .iter()
                .map(|c| ComponentExport {
                    name: c.name.clone(),
                    size: c.size(),
                    cycle: c.cycle.members.iter().map(|a| a.to_string()).collect(),
                    numeric_cycle: c.cycle.numeric_members.iter().map(|n| n.to_string()).collect(),
                    depths: c
                        .nodes
                        .iter()
                        .map(|&v| (self.nodes[v].to_string(), self.depth[v]))
                        .collect(),
                })
                .collect(),
        }
    }
}

pub fn cycles(w: usize) -> Vec<Cycle> {
    build_graph(w).components.into_iter().map(|c| c.cycle).collect()
}

/// Steps from `alpha` to its attractor.
pub fn distance(g: &ClassGraph, alpha: &ParamVector) -> Option<usize> {
    g.index_of(alpha).map(|i| g.depth[i])
}

/// The least number of steps taking `alpha` to `target`, if it gets there.
pub fn distance_to(g: &ClassGraph, alpha: &ParamVector, target: &ParamVector) -> Option<usize> {
    let mut v = g.index_of(alpha)?;
    let t = g.index_of(target)?;
    for steps in 0..=2 * g.nodes.len() {
        if v == t {
            return Some(steps);
        }
        v = g.succ[v];
    }
    None
}

/// Graphviz rendering: one cluster per component, attractor edges in bold.
pub fn export_dot(g: &ClassGraph) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "digraph classes_w{} {{", g.width);
    let _ = writeln!(out, "  rankdir=LR;");
    let _ = writeln!(out, "  node [shape=box, fontname=\"monospace\"];");
    for (ci, c) in g.components.iter().enumerate() {
        let _ = writeln!(out, "  subgraph cluster_{ci} {{");
        let _ = writeln!(
            out,
            "    label=\"{}: {} classes, cycle of {}\";",
            c.name,
            c.size(),
            c.cycle.len()
        );
        for &v in &c.nodes {
            let a = &g.nodes[v];
            if c.cycle.contains(a) {
                let _ = writeln!(out, "    \"{a}\" [style=bold];");
            } else {
                let _ = writeln!(out, "    \"{a}\";");
            }
        }
        let _ = writeln!(out, "  }}");
    }
    for v in 0..g.nodes.len() {
        let (a, b) = (&g.nodes[v], &g.nodes[g.succ[v]]);
        if g.depth[v] == 0 {
            let _ = writeln!(out, "  \"{a}\" -> \"{b}\" [color=red, penwidth=2];");
        } else {
            let _ = writeln!(out, "  \"{a}\" -> \"{b}\";");
        }
    }
    out.push_str("}\n");
    out
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ComponentExport {
    pub name: String,
    pub size: usize,
    pub cycle: Vec<String>,
    pub numeric_cycle: Vec<String>,
    pub depths: BTreeMap<String, usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GraphExport {
    pub width: usize,
    pub classes: Vec<String>,
    pub edges: Vec<[String; 2]>,
    pub components: Vec<ComponentExport>,
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pv(s: &str, w: usize) -> ParamVector {
        ParamVector::parse(s, w).unwrap()
    }

    fn strs(v: &[ParamVector]) -> Vec<String> {
        v.iter().map(|a| a.to_string()).collect()
    }

    #[test]
    fn width_6_components() {
        let g = build_graph(6);
        let sizes: Vec<usize> = g.components.iter().map(|c| c.size()).collect();
        assert_eq!(sizes, [201, 17, 1]);
        assert_eq!(
            strs(&g.components[0].cycle.members),
            ["863", "643", "421", "852", "751", "841", "861"]
        );
        assert_eq!(strs(&g.components[1].cycle.members), ["632"]);
        assert_eq!(strs(&g.components[2].cycle.members), ["550"]);
    }

    #[test]
    fn small_widths() {
        let c = cycles(2);
        assert_eq!(c.len(), 1);
        assert_eq!(strs(&c[0].members), ["9", "7", "3", "5", "1"]);
        let g = build_graph(3);
        assert_eq!(g.components.len(), 1);
        assert_eq!(strs(&g.components[0].cycle.members), ["5"]);
        let mut lens: Vec<usize> = cycles(5).iter().map(|c| c.len()).collect();
        lens.sort();
        assert_eq!(lens, [2, 4, 4]);
    }

    #[test]
    fn distances() {
        let g = build_graph(6);
        assert_eq!(distance_to(&g, &pv("661", 6), &pv("861", 6)), Some(14));
        assert_eq!(distance_to(&g, &pv("430", 6), &pv("861", 6)), Some(7));
        assert_eq!(distance(&g, &pv("861", 6)), Some(0));
        assert_eq!(distance_to(&g, &pv("550", 6), &pv("861", 6)), None);
    }

    #[test]
    fn dot_shape() {
        let dot = export_dot(&build_graph(3));
        assert_eq!(dot.matches(" -> ").count(), 9);
        assert!(dot.contains("\"6\" -> \"5\";"));
        assert!(dot.contains("\"5\" -> \"5\" [color=red, penwidth=2];"));
        let dot = export_dot(&build_graph(6));
        assert_eq!(dot.matches("subgraph cluster_").count(), 3);
    }
}
