//! Order-`r` equivalences: two numbers are equivalent when their `r`-th
//! images coincide. At class level this is equality of `(r-1)`-step
//! parameter images.

pub(crate) mod expr;
mod higher;
mod maps;
mod product;

use std::collections::{BTreeMap, HashMap};

use serde::Serialize;

use crate::digits::{iterate, DigitNumber};
use crate::dynamics::{build_graph, ClassGraph};
use crate::error::{Error, Result};
use crate::params::ParamVector;

pub use higher::{higher_equiv_examples, HigherFact};
pub use maps::{catalog_r2, verify_catalog, CatalogReport, EquivMap, EquivMapExport, UncoveredBlock};
pub use product::{
    group_classify, product, set_members, EquivSet, GroupKind, ProductCell, ProductResult, ProductTable,
};

/// `m R_r n`: the `r`-th images coincide.
pub fn r_equiv(m: &DigitNumber, n: &DigitNumber, r: usize) -> Result<bool> {
    if m.width() != n.width() {
        return Err(Error::WidthMismatch {
            left: m.width(),
            right: n.width(),
        });
    }
    Ok(iterate(m, r) == iterate(n, r))
}

/// Classes grouped by their `(order-1)`-step image.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Partition {
    pub width: usize,
    pub order: usize,
    /// Each block in canonical class order; blocks ordered by first member.
    pub blocks: Vec<Vec<ParamVector>>,
    /// The common `(order-1)`-step image of each block.
    pub images: Vec<ParamVector>,
    block_of: HashMap<ParamVector, usize>,
}

impl Partition {
    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    pub fn block_of(&self, alpha: &ParamVector) -> Option<usize> {
        self.block_of.get(alpha).copied()
    }

    pub fn block_containing(&self, alpha: &ParamVector) -> Option<&[ParamVector]> {
        self.block_of(alpha).map(|b| self.blocks[b].as_slice())
    }

    pub fn same_block(&self, a: &ParamVector, b: &ParamVector) -> bool {
        matches!((self.block_of(a), self.block_of(b)), (Some(x), Some(y)) if x == y)
    }

    /// True when every block of `finer` sits inside one block of `self`.
    pub fn is_coarsening_of(&self, finer: &Partition) -> bool {
        finer.blocks.iter().all(|b| {
            let first = self.block_of(&b[0]);
            first.is_some() && b.iter().all(|a| self.block_of(a) == first)
        })
    }

    /// Blocks of `self` formed by merging two or more blocks of `prev`: the
    /// equivalences that are new at this order.
    pub fn merges_since(&self, prev: &Partition) -> Vec<Vec<usize>> {
        let mut parts: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for (i, b) in prev.blocks.iter().enumerate() {
            if let Some(j) = self.block_of(&b[0]) {
                parts.entry(j).or_default().push(i);
            }
        }
        parts.into_values().filter(|p| p.len() > 1).collect()
    }

    pub fn to_export(&self) -> PartitionExport {
        PartitionExport {
            width: self.width,
            order: self.order,
            blocks: self
                .blocks
                .iter()
                .map(|b| b.iter().map(|a| a.to_string()).collect())
                .collect(),
            images: self.images.iter().map(|a| a.to_string()).collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PartitionExport {
    pub width: usize,
    pub order: usize,
    pub blocks: Vec<Vec<String>>,
    pub images: Vec<String>,
}

/// The order-`r` partition of every class of width `w`.
pub fn partition(w: usize, r: usize) -> Partition {
    let g = build_graph(w);
    let all: Vec<usize> = (0..g.nodes.len()).collect();
    partition_in(&g, r, &all)
}

/// The order-`r` partition restricted to the given node indices.
pub fn partition_in(g: &ClassGraph, r: usize, nodes: &[usize]) -> Partition {
    assert!(r >= 1, "order must be at least 1");
    let mut groups: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    let mut key_of: HashMap<usize, usize> = HashMap::new();
    let mut order_seen = Vec::new();
    for &v in nodes {
        let mut x = v;
        for _ in 0..r - 1 {
            x = g.succ[x];
        }
        if let std::collections::hash_map::Entry::Vacant(e) = key_of.entry(x) {
            e.insert(order_seen.len());
            order_seen.push(x);
        }
        groups.entry(key_of[&x]).or_default().push(v);
    }
    let mut blocks = Vec::new();
    let mut images = Vec::new();
    for (k, mut members) in groups {
        members.sort_unstable();
        blocks.push(members.iter().map(|&v| g.nodes[v].clone()).collect::<Vec<_>>());
        images.push(g.nodes[order_seen[k]].clone());
    }
    let mut idx: Vec<usize> = (0..blocks.len()).collect();
    idx.sort_by(|&a, &b| blocks[b][0].cmp(&blocks[a][0]));
    let blocks: Vec<Vec<ParamVector>> = idx.iter().map(|&i| blocks[i].clone()).collect();
    let images: Vec<ParamVector> = idx.iter().map(|&i| images[i].clone()).collect();
    let block_of = blocks
        .iter()
        .enumerate()
        .flat_map(|(i, b)| b.iter().map(move |a| (a.clone(), i)))
        .collect();
    Partition {
        width: g.width,
        order: r,
        blocks,
        images,
        block_of,
    }
}

/// The least `u` with `C_u = C_(u+1)`, and that partition.
pub fn stabilize(w: usize) -> (usize, Partition) {
    let g = build_graph(w);
    let all: Vec<usize> = (0..g.nodes.len()).collect();
    stabilize_in(&g, &all)
}

pub fn stabilize_in(g: &ClassGraph, nodes: &[usize]) -> (usize, Partition) {
    let mut cur = partition_in(g, 1, nodes);
    let mut u = 1;
    loop {
        let next = partition_in(g, u + 1, nodes);
        if next.blocks == cur.blocks {
            return (u, cur);
        }
        cur = next;
        u += 1;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pv(s: &str) -> ParamVector {
        ParamVector::parse(s, 6).unwrap()
    }

    #[test]
    fn number_relation() {
        let m = DigitNumber::parse("5068069").unwrap();
        let n = DigitNumber::parse("3071934").unwrap();
        assert!(r_equiv(&m, &n, 4).unwrap());
        assert!(!r_equiv(&m, &n, 3).unwrap());
        assert!(!r_equiv(&m, &n, 0).unwrap());
        assert!(r_equiv(&m, &m, 0).unwrap());
        let short = DigitNumber::parse("6174").unwrap();
        assert_eq!(r_equiv(&m, &short, 1), Err(Error::WidthMismatch { left: 7, right: 4 }));
    }

    #[test]
    fn second_order_blocks() {
        let p = partition(6, 2);
        assert_eq!(p.len(), 82);
        let b: Vec<String> = p
            .block_containing(&pv("863"))
            .unwrap()
            .iter()
            .map(|a| a.to_string())
            .collect();
        assert_eq!(b, ["863", "833", "762", "732", "332"]);
        assert_eq!(p.images[p.block_of(&pv("863")).unwrap()], pv("643"));
        assert_eq!(partition(6, 1).len(), 219);
    }

    #[test]
    fn stabilization() {
        let (_, p) = stabilize(6);
        assert_eq!(p.len(), 9);
        let (_, p) = stabilize(4);
        assert_eq!(p.len(), 1);
    }

    #[test]
    fn merges_are_new_equivalences() {
        let p1 = partition(6, 1);
        let p2 = partition(6, 2);
        let merged = p2.merges_since(&p1);
        assert_eq!(merged.iter().map(|m| m.len() - 1).sum::<usize>(), 219 - 82);
        assert!(p2.is_coarsening_of(&p1));
    }
}
