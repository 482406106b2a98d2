//! Products of equivalence maps and the tables they form.

use std::fmt;
use std::str::FromStr;

use serde::{Serialize, Serializer};

use super::maps::{catalog_r2, identity, EquivMap};
use crate::affine::compose_maps;
use crate::error::{Error, Result};

/// `(f × g)(α) = f(g(α))`: `g` applies first. The domain is the part of
/// `g`'s domain that `g` maps into `f`'s.
pub fn product(f: &EquivMap, g: &EquivMap) -> EquivMap {
    let mut domain = g.domain.clone();
    domain.extend(f.domain.constraints().iter().map(|c| c.substitute(&g.transform)));
    EquivMap {
        id: format!("{} x {}", f.id, g.id),
        order: f.order.max(g.order),
        width: g.width,
        nonzero: g.nonzero,
        transform: compose_maps(&f.transform, &g.transform),
        domain,
        valid: f.valid && g.valid,
        origin: "product".into(),
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ProductResult {
    Element(String),
    Outside,
}

impl fmt::Display for ProductResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ProductResult::Element(id) => f.write_str(id),
            ProductResult::Outside => f.write_str("outside"),
        }
    }
}

impl Serialize for ProductResult {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ProductCell {
    pub result: ProductResult,
    /// The composed domain holds no class.
    pub vacuous: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum GroupKind {
    Trivial,
    Z2,
    Klein,
    Other,
}

impl fmt::Display for GroupKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            GroupKind::Trivial => "trivial",
            GroupKind::Z2 => "Z2",
            GroupKind::Klein => "Klein",
            GroupKind::Other => "other",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ProductTable {
    pub width: usize,
    pub elements: Vec<String>,
    /// `cells[i][j]` is `elements[i] × elements[j]`.
    pub cells: Vec<Vec<ProductCell>>,
    /// Every product is a valid element of the set.
    pub closed: bool,
    pub abelian: bool,
    pub identity: Option<String>,
    pub group: Option<GroupKind>,
}

impl ProductTable {
    pub fn get(&self, f: &str, g: &str) -> Option<&ProductCell> {
        let i = self.elements.iter().position(|e| e == f)?;
        let j = self.elements.iter().position(|e| e == g)?;
        Some(&self.cells[i][j])
    }

    /// Rows `f`, columns `g`, as in a printed product table.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("f\\g");
        for e in &self.elements {
            out.push(',');
            out.push_str(e);
        }
        out.push('\n');
        for (e, row) in self.elements.iter().zip(&self.cells) {
            out.push_str(e);
            for c in row {
                out.push(',');
                out.push_str(&c.result.to_string());
            }
            out.push('\n');
        }
        out
    }
}

/// Matches a composed map against the set: equal transforms first, then
/// equal values at every point of a non-empty composed domain.
fn identify(p: &EquivMap, set: &[EquivMap]) -> ProductCell {
    let points = p.domain.feasible_points();
    let vacuous = points.is_empty();
    let result = set
        .iter()
        .find(|e| e.transform == p.transform)
        .or_else(|| {
            if vacuous {
                return None;
            }
            set.iter().find(|e| {
                points
                    .iter()
                    .all(|a| e.apply_raw(a).is_some() && e.apply_raw(a) == p.apply_raw(a))
            })
        })
        .map_or(ProductResult::Outside, |e| ProductResult::Element(e.id.clone()));
    ProductCell { result, vacuous }
}

/// The full product table of `set` with closure, identity, inverse and
/// commutativity checks, and the group it is isomorphic to when closed.
pub fn group_classify(set: &[EquivMap]) -> ProductTable {
    let n = set.len();
    let cells: Vec<Vec<ProductCell>> = set
        .iter()
        .map(|f| set.iter().map(|g| identify(&product(f, g), set)).collect())
        .collect();
    let idx = |c: &ProductCell| match &c.result {
        ProductResult::Element(id) => set.iter().position(|e| &e.id == id),
        ProductResult::Outside => None,
    };
    let closed = cells.iter().flatten().all(|c| idx(c).is_some_and(|i| set[i].valid));
    let abelian = (0..n).all(|i| (0..n).all(|j| cells[i][j].result == cells[j][i].result));
    let identity = (0..n).find(|&e| (0..n).all(|x| idx(&cells[e][x]) == Some(x) && idx(&cells[x][e]) == Some(x)));
    let group = match identity {
        Some(e) if closed => {
            let inverses = (0..n).all(|x| (0..n).any(|y| idx(&cells[x][y]) == Some(e) && idx(&cells[y][x]) == Some(e)));
            let involutive = (0..n).all(|x| idx(&cells[x][x]) == Some(e));
            inverses.then_some(match n {
                1 => GroupKind::Trivial,
                2 => GroupKind::Z2,
                4 if involutive && abelian => GroupKind::Klein,
                _ => GroupKind::Other,
            })
        }
        _ => None,
    };
    ProductTable {
        width: set.first().map_or(0, |e| e.width),
        elements: set.iter().map(|e| e.id.clone()).collect(),
        cells,
        closed,
        abelian,
        identity: identity.map(|e| set[e].id.clone()),
        group,
    }
}

/// The three transposition sets over one, two and three nonzero
/// parameters.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum EquivSet {
    I,
    II,
    III,
}

impl FromStr for EquivSet {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "I" | "1" => Ok(EquivSet::I),
            "II" | "2" => Ok(EquivSet::II),
            "III" | "3" => Ok(EquivSet::III),
            _ => Err(Error::UnknownSet { name: s.to_string() }),
        }
    }
}

impl fmt::Display for EquivSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            EquivSet::I => "I",
            EquivSet::II => "II",
            EquivSet::III => "III",
        })
    }
}

/// The identity followed by the set's entries, at width 6 or 7.
pub fn set_members(set: EquivSet, w: usize) -> Result<Vec<EquivMap>> {
    if !(6..=7).contains(&w) {
        return Err(Error::UnsupportedWidth {
            what: format!("set {set}"),
            width: w,
        });
    }
    let (k, ids): (usize, &[&str]) = match set {
        EquivSet::I => (3, &["e2-1", "e2-2", "e2-3", "e2-4", "e2-5", "n2-6", "n2-7"]),
        EquivSet::II => (2, &["e2-8", "e2-9", "e2-10"]),
        EquivSet::III => (1, &["e2-11"]),
    };
    let catalog = catalog_r2(w);
    let mut out = vec![identity(w, k)];
    for id in ids {
        out.push(
            catalog
                .iter()
                .find(|e| e.id == *id)
                .cloned()
                .expect("set entries are catalogued"),
        );
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn klein_and_z2() {
        let t = group_classify(&set_members(EquivSet::II, 6).unwrap());
        assert_eq!(t.group, Some(GroupKind::Klein));
        assert_eq!(
            t.get("e2-8", "e2-9").unwrap().result,
            ProductResult::Element("e2-10".into())
        );
        let t = group_classify(&set_members(EquivSet::III, 7).unwrap());
        assert_eq!(t.group, Some(GroupKind::Z2));
    }

    #[test]
    fn set_one_is_not_closed() {
        let t = group_classify(&set_members(EquivSet::I, 6).unwrap());
        assert!(!t.closed);
        assert_eq!(t.group, None);
        let c = t.get("e2-2", "e2-3").unwrap();
        assert_eq!(c.result, ProductResult::Element("n2-6".into()));
        assert!(c.vacuous);
    }

    #[test]
    fn unknown_sets_and_widths() {
        assert!("IV".parse::<EquivSet>().is_err());
        assert!(set_members(EquivSet::I, 8).is_err());
    }
}
