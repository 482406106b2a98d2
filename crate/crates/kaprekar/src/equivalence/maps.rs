//! Second-order equivalence maps: affine transforms `e(α)` with a domain on
//! which `α` and `e(α)` share their next image.

use std::collections::{BTreeMap, HashMap, HashSet};

use rayon::prelude::*;
use serde::Serialize;

use super::expr::{parse_constraints, parse_map};
use super::partition;
use crate::affine::{compose_maps, LinearConstraint, ParamDomain};
use crate::params::{half_width, ParamVector, Parity};
use crate::symbolic::{derive_k_functions, total_k, Catalog, SymbolicKFn};
use crate::{RatConstraint, RatDomain, RatExpr, Rational};

/// A transform certifying `α R_r e(α)` on its domain.
#[derive(Debug, Clone, PartialEq)]
pub struct EquivMap {
    pub id: String,
    pub order: usize,
    pub width: usize,
    /// Nonzero parameter count of the inputs.
    pub nonzero: usize,
    pub transform: Vec<RatExpr>,
    /// Listed constraints, the input family, and the conditions making
    /// `e(α)` a parameter vector.
    pub domain: RatDomain,
    /// False for transpositions kept only for product tables.
    pub valid: bool,
    pub origin: String,
}

fn rat_domain(d: &ParamDomain<i64>) -> RatDomain {
    d.map(|&c| Rational::from(c))
}

fn rat_exprs(es: &[crate::IntExpr]) -> Vec<RatExpr> {
    es.iter().map(|e| e.map(|&c| Rational::from(c))).collect()
}

impl EquivMap {
    pub fn new(
        id: impl Into<String>,
        width: usize,
        nonzero: usize,
        transform: Vec<RatExpr>,
        listed: impl IntoIterator<Item = RatConstraint>,
        valid: bool,
        origin: impl Into<String>,
    ) -> Self {
        let mut domain = ParamDomain::family(width, nonzero);
        domain.extend(listed);
        domain.extend(transform_validity(width, &transform));
        Self {
            id: id.into(),
            order: 2,
            width,
            nonzero,
            transform,
            domain,
            valid,
            origin: origin.into(),
        }
    }

    pub fn h(&self) -> usize {
        half_width(self.width)
    }

    pub fn in_domain(&self, alpha: &ParamVector) -> bool {
        self.domain.contains(alpha)
    }

    /// The transform at `alpha` when it yields a parameter vector, whether
    /// or not `alpha` lies in the domain.
    pub fn apply_raw(&self, alpha: &ParamVector) -> Option<ParamVector> {
        let vals = self
            .transform
            .iter()
            .map(|e| {
                let v = e.eval_at(alpha);
                v.is_integer().then(|| v.to_integer())
            })
            .collect::<Option<Vec<i64>>>()?;
        let digits = vals
            .into_iter()
            .map(|v| u8::try_from(v).ok())
            .collect::<Option<Vec<u8>>>()?;
        ParamVector::new(digits, self.width).ok()
    }

    /// `e(α)` for `α` in the domain.
    pub fn apply(&self, alpha: &ParamVector) -> Option<ParamVector> {
        if self.in_domain(alpha) {
            self.apply_raw(alpha)
        } else {
            None
        }
    }

    /// True when `from` is in the domain and maps to `to`.
    pub fn maps(&self, from: &ParamVector, to: &ParamVector) -> bool {
        self.apply(from).as_ref() == Some(to)
    }

    /// Every `(α, e(α))` over the domain.
    pub fn pairs(&self) -> Vec<(ParamVector, ParamVector)> {
        self.domain
            .feasible_points()
            .into_iter()
            .filter_map(|a| self.apply_raw(&a).map(|b| (a, b)))
            .collect()
    }

    pub fn to_export(&self) -> EquivMapExport {
        EquivMapExport {
            id: self.id.clone(),
            width: self.width,
            nonzero: self.nonzero,
            transform: self.transform.iter().map(|e| e.to_string()).collect(),
            domain: self.domain.constraints().iter().map(|c| c.to_string()).collect(),
            valid: self.valid,
            origin: self.origin.clone(),
            pairs: self
                .pairs()
                .into_iter()
                .map(|(a, b)| [a.to_string(), b.to_string()])
                .collect(),
        }
    }

    pub fn transform_text(&self) -> String {
        let parts: Vec<String> = self.transform.iter().map(|e| e.to_string()).collect();
        format!("({})", parts.join(", "))
    }
}

/// The structural constraints evaluated at `e(α)`, plus integrality of
/// every non-integral component.
pub(crate) fn transform_validity(width: usize, transform: &[RatExpr]) -> Vec<RatConstraint> {
    let mut out: Vec<RatConstraint> = ParamDomain::<Rational>::structural(width)
        .constraints()
        .iter()
        .map(|c| c.substitute(transform))
        .collect();
    out.extend(transform.iter().cloned().map(LinearConstraint::integral));
    out
}

struct Row {
    id: &'static str,
    widths: &'static [usize],
    nonzero: usize,
    transform: &'static str,
    constraints: &'static str,
    valid: bool,
    origin: &'static str,
}

const fn row(
    id: &'static str,
    widths: &'static [usize],
    nonzero: usize,
    transform: &'static str,
    constraints: &'static str,
    valid: bool,
    origin: &'static str,
) -> Row {
    Row {
        id,
        widths,
        nonzero,
        transform,
        constraints,
        valid,
        origin,
    }
}

const W67: &[usize] = &[6, 7];
const W6: &[usize] = &[6];

const NAMED: &[Row] = &[
    row("e2-1", W67, 3, "10-a, b, c", "a+b <= 10", true, "set I"),
    row("e2-2", W67, 3, "a, 9-b, c", "a+b >= 9, b+c <= 9", true, "set I"),
    row("e2-3", W67, 3, "a, b, 10-c", "b+c >= 10", true, "set I"),
    row("e2-4", W67, 3, "10-a, 9-b, c", "a <= b+1, b+c <= 9", true, "set I"),
    row("e2-5", W67, 3, "10-a, b, 10-c", "a = b = c = 5", true, "set I"),
    row("n2-6", W67, 3, "a, 9-b, 10-c", "a+b >= 9, c >= b+1", false, "set I"),
    row("n2-7", W67, 3, "10-a, 9-b, 10-c", "a <= b+1, c >= b+1", false, "set I"),
    row("e2-8", W67, 2, "10-a, b, 0", "a+b <= 10", true, "set II"),
    row("e2-9", W67, 2, "a, 10-b, 0", "a+b >= 10", true, "set II"),
    row("e2-10", W67, 2, "10-a, 10-b, 0", "a = b", true, "set II"),
    row("e2-11", W67, 1, "11-a, 0, 0", "a >= 2", true, "set III"),
    row(
        "e2-12",
        W6,
        3,
        "10-c, 9-b, 10-a",
        "b <= 8, c <= 8, a >= b+1",
        true,
        "set IV",
    ),
    row(
        "e2-1x12",
        W6,
        3,
        "c, 9-b, 10-a",
        "a >= b+1, b+c >= 9",
        true,
        "e2-1 x e2-12",
    ),
    row(
        "e2-2x12",
        W6,
        3,
        "10-c, b, 10-a",
        "a+b >= 10, b+c <= 10",
        true,
        "e2-2 x e2-12",
    ),
    row("e2-3x12", W6, 3, "10-c, 9-b, a", "a+b <= 9", true, "e2-3 x e2-12"),
    row("e2-4x12", W6, 3, "c, b, 10-a", "a+b >= 10, b = c", true, "e2-4 x e2-12"),
    row("n2-6x12", W6, 3, "10-c, b, a", "a = b, b+c <= 10", true, "n2-6 x e2-12"),
    row("n2-7x12", W6, 3, "c, b, a", "a = b = c", true, "n2-7 x e2-12"),
    row(
        "r2-51",
        W6,
        1,
        "(a+9)/2, (19-a)/2, 5",
        "",
        true,
        "K31 image matched with K1",
    ),
    row(
        "r2-52",
        W6,
        1,
        "10-a/2, 4+a/2, 5",
        "",
        true,
        "K32 image matched with K1",
    ),
];

/// Maps whose domain is the set where `K_i(α) = K_j(e(α))`.
const MATCHED: &[(&str, usize, &str, &str, &str)] = &[
    ("e2-61", 7, "a, (b+c)/2, 10-b", "K1", "K7"),
    ("e2-62", 7, "(a+b+1)/2, b+c-a+2, 11-a", "K1", "K4"),
    ("e2-63", 7, "a, 10-c, 11-b", "K4", "K13"),
    ("e2-64", 7, "a, 10-c, b+2", "K5", "K13"),
    ("e2-65", 7, "11-b, a+b-3, 21-2a-b", "K27", "K1"),
    ("e2-66", 7, "11-b, 9-a/2, 13-a-b", "K27", "K7"),
    ("e2-67", 7, "a+b, 18-2a-b, b", "K27", "K6"),
    ("e2-68", 7, "20-2a-b, 10-a-b, b", "K27", "K11"),
    ("e2-69", 7, "11-b, a+b-3, 12-a", "K26", "K1"),
    ("e2-70", 7, "a, 19-a-b, a+2b-10", "K25", "K1"),
    ("e2-71", 7, "b+1, a-4, b-a+3", "K23", "K12"),
    ("e2-72", 7, "(a+9)/2, 20-2b, 10-b", "K23", "K4"),
    ("e2-73", 7, "5+b/2, 21-a-b, 11-a", "K22", "K4"),
    ("e2-5-a5", 5, "(a+b+1)/2, 11-a", "K1", "K17"),
    ("e2-6-a5", 5, "(11-a)/2, a", "K26", "K14"),
    ("e2-7-a5", 5, "11-a, 2a-3", "K26", "K1"),
];

fn from_row(r: &Row, w: usize) -> EquivMap {
    let h = half_width(w);
    EquivMap::new(
        r.id,
        w,
        r.nonzero,
        parse_map(r.transform, h),
        parse_constraints(r.constraints, h),
        r.valid,
        r.origin,
    )
}

/// `α ∈ Dom(K_i)`, `e(α) ∈ Dom(K_j)` and `K_i(α) = K_j(e(α))`.
fn matched(id: &str, w: usize, transform: Vec<RatExpr>, ki: &SymbolicKFn, kj: &SymbolicKFn) -> EquivMap {
    let mut cs: Vec<RatConstraint> = rat_domain(&ki.domain).constraints().to_vec();
    cs.extend(
        rat_domain(&kj.domain)
            .constraints()
            .iter()
            .map(|c| c.substitute(&transform)),
    );
    let lhs = rat_exprs(&ki.output);
    let rhs = compose_maps(&rat_exprs(&kj.output), &transform);
    cs.extend(lhs.into_iter().zip(rhs).map(|(l, r)| LinearConstraint::eq(l, r)));
    EquivMap::new(
        id,
        w,
        ki.family.nonzero_count(),
        transform,
        cs,
        true,
        format!("{} image matched with {}", ki.name(), kj.name()),
    )
}

fn reflect(h: usize, c: i64, s: usize) -> RatExpr {
    RatExpr::reflect(h, Rational::from(c), s)
}

fn var(h: usize, s: usize) -> RatExpr {
    RatExpr::var(h, s)
}

fn cst(h: usize, c: i64) -> RatExpr {
    RatExpr::constant(h, Rational::from(c))
}

/// The width-independent families, instantiated for every nonzero count.
fn general(w: usize) -> Vec<EquivMap> {
    let h = half_width(w);
    let ge = |l: RatExpr, r: RatExpr| LinearConstraint::ge(l, r);
    let eq = |l: RatExpr, r: RatExpr| LinearConstraint::eq(l, r);
    let mut out = Vec::new();
    let ident = |k: usize| -> Vec<RatExpr> { (0..h).map(|s| if s < k { var(h, s) } else { cst(h, 0) }).collect() };
    // x^s + x^t
    let sum = |s: usize, t: usize| var(h, s) + var(h, t);
    let equal_block =
        |from: usize, to: usize| -> Vec<RatConstraint> { (from..to).map(|s| eq(var(h, s), var(h, s + 1))).collect() };
    for k in 1..=h {
        if k == 1 {
            let mut t = ident(1);
            t[0] = reflect(h, 11, 0);
            out.push(EquivMap::new(
                "r2-3",
                w,
                1,
                t,
                [ge(var(h, 0), cst(h, 2))],
                true,
                "extreme digits of the one-parameter image",
            ));
            continue;
        }
        let tag = format!("k{k}");
        let mut t = ident(k);
        t[0] = reflect(h, 10, 0);
        out.push(EquivMap::new(
            format!("r2-11:{tag}"),
            w,
            k,
            t,
            [ge(cst(h, 10), sum(0, 1))],
            true,
            "first and last digit",
        ));
        for s in 1..k - 1 {
            let mut t = ident(k);
            t[s] = reflect(h, 9, s);
            out.push(EquivMap::new(
                format!("r2-12:{tag}:s{}", s + 1),
                w,
                k,
                t,
                [ge(sum(s - 1, s), cst(h, 9)), ge(cst(h, 9), sum(s, s + 1))],
                true,
                "symmetric middle digits",
            ));
        }
        let mut t = ident(k);
        t[k - 1] = reflect(h, 10, k - 1);
        out.push(EquivMap::new(
            format!("r2-13:{tag}"),
            w,
            k,
            t,
            [ge(sum(k - 2, k - 1), cst(h, 10))],
            true,
            "innermost digits",
        ));
        if k >= 3 {
            let mut t = ident(k);
            t[0] = reflect(h, 10, 0);
            t[k - 1] = reflect(h, 10, k - 1);
            let cs: Vec<_> = (0..k).map(|s| eq(var(h, s), cst(h, 5))).collect();
            out.push(EquivMap::new(format!("r2-14:{tag}"), w, k, t, cs, true, "both ends"));
        }
        for s in 1..k {
            for r in 1..k {
                if s + r > k - 2 {
                    break;
                }
                let mut t = ident(k);
                for (i, e) in t.iter_mut().enumerate().take(s + r + 1).skip(s) {
                    *e = reflect(h, 9, i);
                }
                let mut cs = equal_block(s, s + r);
                cs.push(ge(sum(s - 1, s), cst(h, 9)));
                cs.push(ge(cst(h, 9), sum(s + r, s + r + 1)));
                out.push(EquivMap::new(
                    format!("r2-15:{tag}:s{}:r{r}", s + 1),
                    w,
                    k,
                    t,
                    cs,
                    true,
                    "block of middle digits",
                ));
            }
        }
        for r in 3..k {
            let mut t = ident(k);
            t[0] = reflect(h, 10, 0);
            for (i, e) in t.iter_mut().enumerate().take(r).skip(2) {
                *e = reflect(h, 9, i);
            }
            let cs: Vec<_> = (0..r).map(|s| eq(var(h, s), cst(h, 5))).collect();
            out.push(EquivMap::new(
                format!("r2-16:{tag}:r{r}"),
                w,
                k,
                t,
                cs,
                true,
                "first digit with a block of fives",
            ));
        }
        for r in 2..k {
            let mut t = ident(k);
            t[0] = reflect(h, 10, 0);
            for (i, e) in t.iter_mut().enumerate().take(r).skip(1) {
                *e = reflect(h, 9, i);
            }
            let mut cs = equal_block(1, r - 1);
            cs.push(ge(var(h, 1) + cst(h, 1), var(h, 0)));
            out.push(EquivMap::new(
                format!("r2-17:{tag}:r{r}"),
                w,
                k,
                t,
                cs,
                true,
                "first digit with a leading block",
            ));
        }
    }
    if Parity::of(w) == Parity::Even && h >= 2 {
        let mut t: Vec<RatExpr> = (0..h).map(|i| reflect(h, 9, h - 1 - i)).collect();
        t[0] = reflect(h, 10, h - 1);
        t[h - 1] = reflect(h, 10, 0);
        out.push(EquivMap::new(
            "r2-4",
            w,
            h,
            t,
            [ge(var(h, 0), var(h, 1) + cst(h, 1))],
            true,
            "reversed complement",
        ));
    }
    out
}

/// The second-order catalog at width `w`: named entries for the widths
/// they belong to, then the general families not already covered by a
/// named entry with the same transform.
pub fn catalog_r2(w: usize) -> Vec<EquivMap> {
    let mut out: Vec<EquivMap> = NAMED
        .iter()
        .filter(|r| r.widths.contains(&w))
        .map(|r| from_row(r, w))
        .collect();
    let matched_rows: Vec<_> = MATCHED.iter().filter(|m| m.1 == w).collect();
    if !matched_rows.is_empty() {
        let cat = derive_k_functions(w);
        let h = half_width(w);
        for &&(id, _, t, ki, kj) in &matched_rows {
            let (fi, fj) = (lookup(&cat, ki), lookup(&cat, kj));
            out.push(matched(id, w, parse_map(t, h), fi, fj));
        }
    }
    let named_pairs: Vec<(Vec<RatExpr>, HashSet<Pair>)> = out
        .iter()
        .map(|m| (m.transform.clone(), m.pairs().into_iter().collect()))
        .collect();
    for g in general(w) {
        let gp: HashSet<_> = g.pairs().into_iter().collect();
        let covered = named_pairs.iter().any(|(t, p)| *t == g.transform && gp.is_subset(p));
        if !covered {
            out.push(g);
        }
    }
    out
}

fn lookup<'a>(cat: &'a Catalog, name: &str) -> &'a SymbolicKFn {
    cat.get(name)
        .unwrap_or_else(|| panic!("{name} has no derived function"))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EquivMapExport {
    pub id: String,
    pub width: usize,
    pub nonzero: usize,
    pub transform: Vec<String>,
    pub domain: Vec<String>,
    pub valid: bool,
    pub origin: String,
    pub pairs: Vec<[String; 2]>,
}

type Pair = (ParamVector, ParamVector);

/// A block of the second-order partition that the catalog leaves split.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct UncoveredBlock {
    pub image: ParamVector,
    /// The pieces the catalog connects, each in canonical order.
    pub pieces: Vec<Vec<ParamVector>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CatalogReport {
    pub width: usize,
    pub entries: usize,
    pub valid_entries: usize,
    pub pairs: usize,
    /// Valid entries whose domain holds no class.
    pub vacuous: Vec<String>,
    /// `(entry, α)` where `α` and `e(α)` have different images.
    pub unsound: Vec<(String, ParamVector)>,
    /// Invalid entries whose domain is not empty.
    pub invalid_inhabited: Vec<String>,
    pub blocks: usize,
    pub uncovered: Vec<UncoveredBlock>,
}

impl CatalogReport {
    pub fn is_sound(&self) -> bool {
        self.unsound.is_empty()
    }

    pub fn is_complete(&self) -> bool {
        self.uncovered.is_empty()
    }
}

/// Checks every entry against the numeric oracle and the catalog as a
/// whole against the second-order partition, closing pairs under
/// transitivity.
pub fn verify_catalog(w: usize) -> CatalogReport {
    let catalog = catalog_r2(w);
    let per_entry: Vec<_> = catalog
        .par_iter()
        .map(|m| {
            let pairs = m.pairs();
            let bad = if m.valid {
                pairs
                    .iter()
                    .filter(|(a, b)| total_k(a) != total_k(b))
                    .map(|(a, _)| (m.id.clone(), a.clone()))
                    .collect()
            } else {
                Vec::new()
            };
            (pairs, bad)
        })
        .collect();

    let part = partition(w, 2);
    let classes: Vec<ParamVector> = part.blocks.iter().flatten().cloned().collect();
    let index: HashMap<&ParamVector, usize> = classes.iter().enumerate().map(|(i, a)| (a, i)).collect();
    let mut parent: Vec<usize> = (0..classes.len()).collect();
    fn find(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    let mut pairs = 0;
    let mut vacuous = Vec::new();
    let mut invalid_inhabited = Vec::new();
    let mut unsound = Vec::new();
    for (m, (ps, bad)) in catalog.iter().zip(per_entry) {
        unsound.extend(bad);
        if !m.valid {
            if !ps.is_empty() {
                invalid_inhabited.push(m.id.clone());
            }
            continue;
        }
        if ps.is_empty() {
            vacuous.push(m.id.clone());
        }
        pairs += ps.len();
        for (a, b) in &ps {
            let (x, y) = (find(&mut parent, index[a]), find(&mut parent, index[b]));
            if x != y {
                parent[x.max(y)] = x.min(y);
            }
        }
    }
    let mut uncovered = Vec::new();
    for (block, image) in part.blocks.iter().zip(&part.images) {
        let mut pieces: BTreeMap<usize, Vec<ParamVector>> = BTreeMap::new();
        for a in block {
            let root = find(&mut parent, index[a]);
            pieces.entry(root).or_default().push(a.clone());
        }
        if pieces.len() > 1 {
            uncovered.push(UncoveredBlock {
                image: image.clone(),
                pieces: pieces.into_values().collect(),
            });
        }
    }
    CatalogReport {
        width: w,
        entries: catalog.len(),
        valid_entries: catalog.iter().filter(|m| m.valid).count(),
        pairs,
        vacuous,
        unsound,
        invalid_inhabited,
        blocks: part.len(),
        uncovered,
    }
}

/// The identity on the classes with `k` nonzero parameters.
pub(crate) fn identity(w: usize, k: usize) -> EquivMap {
    let h = half_width(w);
    let t = (0..h).map(|s| if s < k { var(h, s) } else { cst(h, 0) }).collect();
    EquivMap::new("e2-0", w, k, t, [], true, "identity")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pv(s: &str, w: usize) -> ParamVector {
        ParamVector::parse(s, w).unwrap()
    }

    fn entry(cat: &[EquivMap], id: &str) -> EquivMap {
        cat.iter()
            .find(|m| m.id == id)
            .cloned()
            .unwrap_or_else(|| panic!("missing {id}"))
    }

    #[test]
    fn named_examples() {
        let c6 = catalog_r2(6);
        assert!(entry(&c6, "e2-11").maps(&pv("300", 6), &pv("800", 6)));
        assert!(entry(&c6, "r2-51").maps(&pv("500", 6), &pv("775", 6)));
        assert!(entry(&c6, "r2-52").maps(&pv("200", 6), &pv("955", 6)));
        assert!(entry(&c6, "e2-3x12").maps(&pv("221", 6), &pv("972", 6)));
        let c7 = catalog_r2(7);
        assert!(entry(&c7, "e2-63").maps(&pv("981", 7), &pv("993", 7)));
        assert!(entry(&c7, "e2-73").maps(&pv("960", 7), &pv("862", 7)));
        let c10 = catalog_r2(10);
        assert!(entry(&c10, "r2-4").maps(&pv("76641", 10), &pv("95333", 10)));
    }

    #[test]
    fn transpositions_outside_the_relation_are_empty() {
        let c6 = catalog_r2(6);
        for id in ["n2-6", "n2-7"] {
            assert!(entry(&c6, id).pairs().is_empty());
        }
    }

    #[test]
    fn identity_has_the_family_domain() {
        assert_eq!(identity(6, 2).pairs().len(), 45);
    }
}
