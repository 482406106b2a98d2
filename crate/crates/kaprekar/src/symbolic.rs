//! Piecewise-affine parametric functions: derivation of the K catalog from
//! digit orderings of the symbolic image, evaluation, composition and fixed
//! points.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::Serialize;

use crate::affine::{compose_maps, identity_map, AffineExpr, LinearConstraint, ParamDomain};
use crate::digits::{kaprekar_step, params, DigitNumber};
use crate::error::{Error, Result};
use crate::params::{apply_f, classify, enumerate_classes, half_width, FamilyTag, ParamVector};

type IntExpr = AffineExpr<i64>;

/// A descending ordering of the variable digit slots of a symbolic image,
/// as 1-based slot indices.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation(pub Vec<usize>);

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sep = if self.0.len() > 9 { "." } else { "" };
        let parts: Vec<String> = self.0.iter().map(|i| i.to_string()).collect();
        f.write_str(&parts.join(sep))
    }
}

impl FromStr for Permutation {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::BadPermutation {
            perm: s.to_string(),
            width: 0,
        };
        let slots: Vec<usize> = if s.contains('.') {
            s.split('.')
                .map(|p| p.parse().map_err(|_| bad()))
                .collect::<Result<_>>()?
        } else {
            s.chars()
                .map(|c| c.to_digit(10).map(|d| d as usize).ok_or_else(bad))
                .collect::<Result<_>>()?
        };
        let mut sorted = slots.clone();
        sorted.sort_unstable();
        if sorted != (1..=slots.len()).collect::<Vec<_>>() {
            return Err(bad());
        }
        Ok(Permutation(slots))
    }
}

impl Serialize for Permutation {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// The `w` digit slots of the image of a class in family `tag`, as affine
/// expressions of the parameters.
pub fn symbolic_image(tag: &FamilyTag) -> Vec<IntExpr> {
    let w = tag.width;
    let h = half_width(w);
    let k = tag.nonzero_count();
    let c = |v| IntExpr::constant(h, v);
    let mut out = Vec::with_capacity(w);
    for s in 0..k - 1 {
        out.push(IntExpr::var(h, s));
    }
    out.push(IntExpr::shifted(h, k - 1, -1));
    out.extend(std::iter::repeat_n(c(9), w - 2 * k));
    for s in (1..k).rev() {
        out.push(IntExpr::reflect(h, 9, s));
    }
    out.push(IntExpr::reflect(h, 10, 0));
    out
}

/// One derived function: an affine map valid on an integer-linear domain.
#[derive(Debug, Clone)]
pub struct SymbolicKFn {
    pub id: String,
    pub aliases: Vec<String>,
    pub family: FamilyTag,
    pub permutation: Permutation,
    /// Other orderings with the same domain and values, merged into this one.
    pub variants: Vec<Permutation>,
    pub output: Vec<IntExpr>,
    pub domain: ParamDomain<i64>,
    pub feasible_count: usize,
    points: Vec<ParamVector>,
}

impl SymbolicKFn {
    /// Builds the function read off one ordering of the variable slots of
    /// the family with `k` nonzero parameters.
    pub fn from_ordering(width: usize, k: usize, perm: &Permutation) -> Result<Self> {
        let family = FamilyTag::for_nonzero_count(width, k);
        let image = symbolic_image(&family);
        let var = variable_slots(&image);
        if perm.0.len() != var.len() {
            return Err(Error::BadPermutation {
                perm: perm.to_string(),
                width,
            });
        }
        let order: Vec<usize> = perm.0.iter().map(|i| i - 1).collect();
        let (output, domain) = build_from_order(width, k, &image, &var, &order);
        let points = domain.feasible_points();
        Ok(Self {
            id: format!("{}:{}", family.short(), perm),
            aliases: Vec::new(),
            family,
            permutation: perm.clone(),
            variants: Vec::new(),
            output,
            domain,
            feasible_count: points.len(),
            points,
        })
    }

    /// The classes in the domain, in canonical order.
    pub fn feasible_points(&self) -> &[ParamVector] {
        &self.points
    }

    pub fn width(&self) -> usize {
        self.family.width
    }

    pub fn contains(&self, alpha: &ParamVector) -> bool {
        self.domain.contains(alpha)
    }

    /// The output map evaluated without a domain check.
    pub fn eval_raw(&self, alpha: &ParamVector) -> Vec<i64> {
        self.output.iter().map(|e| e.eval_at(alpha)).collect()
    }

    pub fn name(&self) -> &str {
        self.aliases.first().map(String::as_str).unwrap_or(&self.id)
    }
}

/// Evaluates `f` at `alpha`, failing with the first violated constraint.
pub fn eval_k(f: &SymbolicKFn, alpha: &ParamVector) -> Result<ParamVector> {
    if let Some(c) = f.domain.first_violation(alpha) {
        return Err(Error::OutOfDomain {
            function: f.name().to_string(),
            point: alpha.to_string(),
            constraint: c.to_string(),
        });
    }
    let values = f.eval_raw(alpha);
    let alphas = values
        .iter()
        .map(|&v| {
            u8::try_from(v).map_err(|_| Error::InvalidParams {
                reason: format!("{values:?}"),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    ParamVector::new(alphas, f.width())
}

/// The parameter image of a class, computed numerically.
pub fn total_k(alpha: &ParamVector) -> ParamVector {
    params(&apply_f(alpha))
}

pub fn total_k_iter(alpha: &ParamVector, r: usize) -> ParamVector {
    let mut cur = alpha.clone();
    for _ in 0..r {
        cur = total_k(&cur);
    }
    cur
}

fn variable_slots(image: &[IntExpr]) -> Vec<usize> {
    (0..image.len()).filter(|&i| !image[i].is_constant()).collect()
}

fn build_from_order(
    width: usize,
    k: usize,
    image: &[IntExpr],
    var: &[usize],
    order: &[usize],
) -> (Vec<IntExpr>, ParamDomain<i64>) {
    let h = half_width(width);
    let fixed = image.len() - var.len();
    let sorted: Vec<IntExpr> = std::iter::repeat_n(IntExpr::constant(h, 9), fixed)
        .chain(order.iter().map(|&o| image[var[o]].clone()))
        .collect();
    let output = (0..h)
        .map(|s| sorted[s].clone() - sorted[width - 1 - s].clone())
        .collect();
    let mut domain = ParamDomain::family(width, k);
    for pair in order.windows(2) {
        domain.push(LinearConstraint::ge(
            image[var[pair[0]]].clone(),
            image[var[pair[1]]].clone(),
        ));
    }
    (output, domain)
}

/// The classes of one family with the numeric values of the variable slots.
struct FamilySpace {
    width: usize,
    image: Vec<IntExpr>,
    var: Vec<usize>,
    points: Vec<ParamVector>,
    vals: Vec<Vec<i8>>,
    /// `pred[j]`: bitmask of slots that must precede slot `j`.
    pred: Vec<u32>,
}

impl FamilySpace {
    fn new(width: usize, k: usize, prune: bool) -> Self {
        let family = FamilyTag::for_nonzero_count(width, k);
        let image = symbolic_image(&family);
        let var = variable_slots(&image);
        let points: Vec<ParamVector> = enumerate_classes(width)
            .into_iter()
            .filter(|a| a.nonzero_count() == k)
            .collect();
        let vals: Vec<Vec<i8>> = points
            .iter()
            .map(|a| var.iter().map(|&i| image[i].eval_at(a) as i8).collect())
            .collect();
        let n = var.len();
        let mut pred = vec![0u32; n];
        if prune {
            let dom = |i: usize, j: usize| vals.iter().all(|v| v[i] >= v[j]);
            for i in 0..n {
                for (j, p) in pred.iter_mut().enumerate() {
                    if i != j && dom(i, j) && (!dom(j, i) || i < j) {
                        *p |= 1 << i;
                    }
                }
            }
        }
        Self {
            width,
            image,
            var,
            points,
            vals,
            pred,
        }
    }

    fn dfs(&self, order: &mut Vec<usize>, used: u32, pts: &[u32], out: &mut Vec<(Vec<usize>, Vec<u32>)>) {
        let n = self.var.len();
        if order.len() == n {
            out.push((order.clone(), pts.to_vec()));
            return;
        }
        for s in 0..n {
            if used & (1 << s) != 0 || self.pred[s] & !used != 0 {
                continue;
            }
            let next: Vec<u32> = match order.last() {
                None => pts.to_vec(),
                Some(&last) => pts
                    .iter()
                    .copied()
                    .filter(|&p| self.vals[p as usize][last] >= self.vals[p as usize][s])
                    .collect(),
            };
            if next.is_empty() {
                continue;
            }
            order.push(s);
            self.dfs(order, used | (1 << s), &next, out);
            order.pop();
        }
    }

    /// Every ordering with a non-empty domain, with its feasible points, in
    /// lexicographic order.
    fn orderings(&self, parallel: bool) -> Vec<(Vec<usize>, Vec<u32>)> {
        let all: Vec<u32> = (0..self.points.len() as u32).collect();
        let n = self.var.len();
        let branch = |s: usize| {
            let mut out = Vec::new();
            if self.pred[s] == 0 {
                let mut order = vec![s];
                self.dfs(&mut order, 1 << s, &all, &mut out);
            }
            out
        };
        if parallel {
            (0..n).into_par_iter().map(branch).collect::<Vec<_>>().concat()
        } else {
            (0..n).map(branch).collect::<Vec<_>>().concat()
        }
    }

    fn output_values(&self, order: &[usize], pts: &[u32]) -> Vec<i8> {
        let w = self.width;
        let h = half_width(w);
        let fixed = w - self.var.len();
        let mut out = Vec::with_capacity(pts.len() * h);
        let mut sorted = vec![9i8; w];
        for &p in pts {
            let v = &self.vals[p as usize];
            for (slot, &o) in order.iter().enumerate() {
                sorted[fixed + slot] = v[o];
            }
            out.extend((0..h).map(|s| sorted[s] - sorted[w - 1 - s]));
        }
        out
    }

    fn signature(&self, order: &[usize]) -> (Vec<u32>, Vec<i8>) {
        let pts: Vec<u32> = (0..self.points.len() as u32)
            .filter(|&p| {
                order
                    .windows(2)
                    .all(|q| self.vals[p as usize][q[0]] >= self.vals[p as usize][q[1]])
            })
            .collect();
        let values = self.output_values(order, &pts);
        (pts, values)
    }
}

fn to_perm(order: &[usize]) -> Permutation {
    Permutation(order.iter().map(|o| o + 1).collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DeriveOptions {
    /// Discard orderings that contradict a slot order forced at every class.
    pub prune: bool,
    pub parallel: bool,
}

impl Default for DeriveOptions {
    fn default() -> Self {
        Self {
            prune: true,
            parallel: true,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FamilyCount {
    pub family: String,
    pub nonzero: usize,
    pub classes: usize,
    /// Orderings with a non-empty domain before merging.
    pub raw_orderings: usize,
    /// Catalog entries after merging orderings with equal domain and values.
    pub entries: usize,
}

#[derive(Debug, Clone)]
pub struct Catalog {
    pub width: usize,
    pub functions: Vec<SymbolicKFn>,
    pub counts: Vec<FamilyCount>,
}

/// Names for a few functions at small widths: (width, alias, nonzero count,
/// ordering).
const ALIASES: &[(usize, &str, usize, &str)] = &[
    (2, "K1", 1, "12"),
    (2, "K2", 1, "21"),
    (3, "K1", 1, "12"),
    (3, "K2", 1, "21"),
    (4, "K1", 2, "1234"),
    (4, "K2", 2, "3412"),
    (4, "K3", 2, "3142"),
    (5, "K1", 2, "1234"),
    (5, "K14", 2, "4312"),
    (5, "K17", 2, "1342"),
    (5, "K26", 1, "21"),
    (6, "K1", 3, "123456"),
    (6, "K2", 3, "456123"),
    (6, "K3", 3, "415623"),
    (6, "K4", 3, "142563"),
    (6, "K5", 3, "145263"),
    (6, "K6", 3, "412563"),
    (6, "K7", 3, "124536"),
    (6, "K8", 3, "124563"),
    (6, "K9", 3, "612453"),
    (6, "K22", 2, "1234"),
    (6, "K24", 2, "1423"),
    (6, "K31", 1, "12"),
    (6, "K32", 1, "21"),
    (7, "K1", 3, "123456"),
    (7, "K2", 3, "456123"),
    (7, "K4", 3, "142563"),
    (7, "K5", 3, "145263"),
    (7, "K6", 3, "412563"),
    (7, "K7", 3, "124536"),
    (7, "K10", 3, "123465"),
    (7, "K11", 3, "451623"),
    (7, "K12", 3, "145236"),
    (7, "K13", 3, "124365"),
    (7, "K22", 2, "1234"),
    (7, "K23", 2, "1243"),
    (7, "K25", 2, "1324"),
    (7, "K26", 2, "1342"),
    (7, "K27", 2, "3142"),
    (7, "K31", 1, "12"),
    (7, "K32", 1, "21"),
];

/// The curated names at `width` with their family size and ordering.
pub fn aliases_for(width: usize) -> impl Iterator<Item = (&'static str, usize, Permutation)> {
    ALIASES
        .iter()
        .filter(move |a| a.0 == width)
        .map(|&(_, name, k, perm)| (name, k, perm.parse().expect("curated orderings are valid")))
}

pub fn derive_k_functions(w: usize) -> Catalog {
    derive_with(w, DeriveOptions::default())
}

pub fn derive_with(w: usize, opts: DeriveOptions) -> Catalog {
    assert!(w >= 2, "width must be at least 2");
    let h = half_width(w);
    let mut functions = Vec::new();
    let mut counts = Vec::new();
    for k in 1..=h {
        let space = FamilySpace::new(w, k, opts.prune);
        let raw = space.orderings(opts.parallel);
        // Keyed by (feasible point indices, output values).
        let mut groups: BTreeMap<_, Vec<Vec<usize>>> = BTreeMap::new();
        for (order, pts) in &raw {
            let values = space.output_values(order, pts);
            groups.entry((pts.clone(), values)).or_default().push(order.clone());
        }
        let mut entries: Vec<SymbolicKFn> = groups
            .into_iter()
            .map(|((pts, _), mut orders)| {
                orders.sort();
                let (output, domain) = build_from_order(w, k, &space.image, &space.var, &orders[0]);
                let family = FamilyTag::for_nonzero_count(w, k);
                let permutation = to_perm(&orders[0]);
                SymbolicKFn {
                    id: format!("{}:{}", family.short(), permutation),
                    aliases: Vec::new(),
                    family,
                    permutation,
                    variants: orders[1..].iter().map(|o| to_perm(o)).collect(),
                    output,
                    domain,
                    feasible_count: pts.len(),
                    points: pts.iter().map(|&p| space.points[p as usize].clone()).collect(),
                }
            })
            .collect();
        entries.sort_by(|a, b| a.permutation.cmp(&b.permutation));
        for (name, kk, perm) in aliases_for(w) {
            if kk != k {
                continue;
            }
            let order: Vec<usize> = perm.0.iter().map(|i| i - 1).collect();
            let sig = space.signature(&order);
            if let Some(e) = entries.iter_mut().find(|e| {
                e.permutation == perm
                    || e.variants.contains(&perm)
                    || space.signature(&e.permutation.0.iter().map(|i| i - 1).collect::<Vec<_>>()) == sig
            }) {
                e.aliases.push(name.to_string());
            }
        }
        counts.push(FamilyCount {
            family: FamilyTag::for_nonzero_count(w, k).to_string(),
            nonzero: k,
            classes: space.points.len(),
            raw_orderings: raw.len(),
            entries: entries.len(),
        });
        functions.extend(entries);
    }
    Catalog {
        width: w,
        functions,
        counts,
    }
}

/// Outcome of checking a catalog against the numeric oracle.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct CoverReport {
    pub classes: usize,
    pub uncovered: Vec<ParamVector>,
    pub unsound: Vec<(String, ParamVector)>,
}

impl CoverReport {
    pub fn is_ok(&self) -> bool {
        self.uncovered.is_empty() && self.unsound.is_empty()
    }
}

impl Catalog {
    pub fn get(&self, name: &str) -> Option<&SymbolicKFn> {
        self.functions
            .iter()
            .find(|f| f.id == name || f.aliases.iter().any(|a| a == name))
    }

    /// The first function whose domain contains `alpha`.
    pub fn find(&self, alpha: &ParamVector) -> Option<&SymbolicKFn> {
        self.functions.iter().find(|f| f.contains(alpha))
    }

    pub fn containing<'a>(&'a self, alpha: &'a ParamVector) -> impl Iterator<Item = &'a SymbolicKFn> + 'a {
        self.functions.iter().filter(move |f| f.contains(alpha))
    }

    pub fn to_export(&self) -> CatalogExport {
        CatalogExport {
            width: self.width,
            total: self.functions.len(),
            counts: self.counts.clone(),
            functions: self
                .functions
                .iter()
                .map(|f| FunctionExport {
                    id: f.id.clone(),
                    aliases: f.aliases.clone(),
                    family: f.family.short(),
                    permutation: f.permutation.to_string(),
                    variants: f.variants.iter().map(|p| p.to_string()).collect(),
                    output: f.output.iter().map(|e| e.to_string()).collect(),
                    domain: f.domain.constraints().iter().map(|c| c.to_string()).collect(),
                    feasible_count: f.feasible_count,
                })
                .collect(),
        }
    }

    pub fn total_raw_orderings(&self) -> usize {
        self.counts.iter().map(|c| c.raw_orderings).sum()
    }

    /// Every class must lie in some domain and every containing function
    /// must agree with the oracle there.
    pub fn check_against_oracle(&self) -> CoverReport {
        let classes = enumerate_classes(self.width);
        let mut report = CoverReport {
            classes: classes.len(),
            ..Default::default()
        };
        let mut covered = std::collections::HashSet::new();
        for f in &self.functions {
            for a in f.feasible_points() {
                covered.insert(a.clone());
                if f.eval_raw(a) != total_k(a).as_i64() {
                    report.unsound.push((f.id.clone(), a.clone()));
                }
            }
        }
        report.uncovered = classes.into_iter().filter(|a| !covered.contains(a)).collect();
        report
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FunctionExport {
    pub id: String,
    pub aliases: Vec<String>,
    pub family: String,
    pub permutation: String,
    pub variants: Vec<String>,
    pub output: Vec<String>,
    pub domain: Vec<String>,
    pub feasible_count: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CatalogExport {
    pub width: usize,
    pub total: usize,
    pub counts: Vec<FamilyCount>,
    pub functions: Vec<FunctionExport>,
}

/// A class mapped to itself, with its numeric constant.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FixedPoint {
    pub alpha_e: ParamVector,
    pub n_e: DigitNumber,
    pub witness_fn: String,
}

/// All fixed classes, found as `{α ∈ domain : output(α) = α}` over the
/// catalog; sorted in canonical class order.
pub fn solve_fixed_points(w: usize) -> Vec<FixedPoint> {
    fixed_points_of(&derive_k_functions(w))
}

pub fn fixed_points_of(catalog: &Catalog) -> Vec<FixedPoint> {
    let mut found: BTreeMap<ParamVector, String> = BTreeMap::new();
    for f in &catalog.functions {
        for a in f.feasible_points() {
            if f.eval_raw(a) == a.as_i64() {
                found.entry(a.clone()).or_insert_with(|| f.id.clone());
            }
        }
    }
    found
        .into_iter()
        .rev()
        .map(|(a, witness_fn)| FixedPoint {
            n_e: apply_f(&a),
            alpha_e: a,
            witness_fn,
        })
        .collect()
}

/// The ordering that sorts the image of `alpha`, ties kept in slot order.
pub fn ordering_of(alpha: &ParamVector) -> SymbolicKFn {
    let tag = classify(alpha);
    let image = symbolic_image(&tag);
    let var = variable_slots(&image);
    let mut order: Vec<usize> = (0..var.len()).collect();
    order.sort_by_key(|&o| std::cmp::Reverse(image[var[o]].eval_at(alpha)));
    SymbolicKFn::from_ordering(alpha.width(), tag.nonzero_count(), &to_perm(&order))
        .expect("ordering length matches the image")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum ConstantFamily {
    /// `α = (6, 3, …, 3, 2)` at width `2h`.
    Even,
    /// `α = (8, 6, 4, 3, …, 3, 2)` at width `2h + 1`.
    Odd,
}

impl ConstantFamily {
    pub fn min_h(self) -> usize {
        match self {
            ConstantFamily::Even => 2,
            ConstantFamily::Odd => 4,
        }
    }

    pub fn member(self, h: usize) -> Result<ParamVector> {
        if h < self.min_h() {
            return Err(Error::HalfWidthTooSmall { h, min: self.min_h() });
        }
        let (head, width): (&[u8], usize) = match self {
            ConstantFamily::Even => (&[6], 2 * h),
            ConstantFamily::Odd => (&[8, 6, 4], 2 * h + 1),
        };
        let mut alphas = head.to_vec();
        alphas.resize(h - 1, 3);
        alphas.push(2);
        ParamVector::new(alphas, width)
    }
}

/// Builds the family member at half-width `h` and checks it is fixed.
pub fn verify_constant_family(kind: ConstantFamily, h: usize) -> Result<FixedPoint> {
    let alpha = kind.member(h)?;
    let n_e = apply_f(&alpha);
    let image = kaprekar_step(&n_e);
    if image != n_e {
        return Err(Error::NotAFixedPoint {
            number: n_e.to_string(),
            image: image.to_string(),
        });
    }
    Ok(FixedPoint {
        witness_fn: ordering_of(&alpha).id,
        alpha_e: alpha,
        n_e,
    })
}

/// Composes the output maps along `path`, first element applied first.
pub fn compose(path: &[&SymbolicKFn]) -> Vec<IntExpr> {
    assert!(!path.is_empty(), "compose needs a non-empty path");
    let h = half_width(path[0].width());
    path.iter()
        .fold(identity_map(h), |acc, f| compose_maps(&f.output, &acc))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pv(s: &str, w: usize) -> ParamVector {
        ParamVector::parse(s, w).unwrap()
    }

    fn show(image: &[IntExpr]) -> Vec<String> {
        image.iter().map(|e| e.to_string()).collect()
    }

    #[test]
    fn images() {
        let t = FamilyTag::for_nonzero_count(4, 2);
        assert_eq!(show(&symbolic_image(&t)), ["a1", "a2 - 1", "-a2 + 9", "-a1 + 10"]);
        let t = FamilyTag::for_nonzero_count(7, 3);
        assert_eq!(
            show(&symbolic_image(&t)),
            ["a1", "a2", "a3 - 1", "9", "-a3 + 9", "-a2 + 9", "-a1 + 10"]
        );
        let t = FamilyTag::for_nonzero_count(8, 1);
        assert_eq!(
            show(&symbolic_image(&t)),
            ["a1 - 1", "9", "9", "9", "9", "9", "9", "-a1 + 10"]
        );
    }

    #[test]
    fn permutation_text() {
        let p: Permutation = "412563".parse().unwrap();
        assert_eq!(p.to_string(), "412563");
        let p: Permutation = "6.1.7.2.3.8.9.10.4.5".parse().unwrap();
        assert_eq!(p.0.len(), 10);
        assert_eq!(p.to_string(), "6.1.7.2.3.8.9.10.4.5");
        assert!("1134".parse::<Permutation>().is_err());
    }

    #[test]
    fn small_catalogs() {
        let c = derive_k_functions(3);
        assert_eq!(c.functions.len(), 2);
        let k1 = c.get("K1").unwrap();
        assert_eq!(eval_k(k1, &pv("7", 3)).unwrap().to_string(), "6");
        let k2 = c.get("K2").unwrap();
        assert_eq!(eval_k(k2, &pv("3", 3)).unwrap().to_string(), "7");
        assert_eq!(derive_k_functions(2).functions.len(), 2);
    }

    #[test]
    fn f3_domains_at_width_6() {
        let c = derive_k_functions(6);
        let k31 = c.get("K31").unwrap();
        let k32 = c.get("K32").unwrap();
        let d31: Vec<String> = k31.domain.feasible_points().iter().map(|a| a.to_string()).collect();
        let d32: Vec<String> = k32.domain.feasible_points().iter().map(|a| a.to_string()).collect();
        assert_eq!(d31, ["900", "800", "700", "600"]);
        assert_eq!(d32, ["500", "400", "300", "200", "100"]);
    }

    #[test]
    fn out_of_domain_names_the_constraint() {
        let c = derive_k_functions(6);
        let k31 = c.get("K31").unwrap();
        let err = eval_k(k31, &pv("300", 6)).unwrap_err();
        match err {
            Error::OutOfDomain {
                function, constraint, ..
            } => {
                assert_eq!(function, "K31");
                assert!(constraint.contains(">= 0"));
            }
            e => panic!("unexpected {e}"),
        }
    }

    #[test]
    fn fixed_points() {
        let names = |w| -> Vec<String> { solve_fixed_points(w).iter().map(|f| f.n_e.to_string()).collect() };
        assert!(names(2).is_empty());
        assert_eq!(names(3), ["495"]);
        assert_eq!(names(4), ["6174"]);
        assert_eq!(names(6), ["631764", "549945"]);
    }

    #[test]
    fn constant_families() {
        let f = verify_constant_family(ConstantFamily::Even, 4).unwrap();
        assert_eq!(f.alpha_e.to_string(), "6332");
        assert_eq!(f.n_e.to_string(), "63317664");
        let f = verify_constant_family(ConstantFamily::Odd, 4).unwrap();
        assert_eq!(f.n_e.to_string(), "864197532");
        let f = verify_constant_family(ConstantFamily::Odd, 7).unwrap();
        assert_eq!(f.n_e.to_string(), "864333197666532");
        assert!(matches!(
            verify_constant_family(ConstantFamily::Odd, 3),
            Err(Error::HalfWidthTooSmall { .. })
        ));
    }

    #[test]
    fn seven_cycle_composition_fixes_its_start() {
        let cat = derive_k_functions(6);
        let start = pv("861", 6);
        let mut x = start.clone();
        let mut path = Vec::new();
        for _ in 0..7 {
            let f = cat.find(&x).unwrap();
            x = eval_k(f, &x).unwrap();
            path.push(f);
        }
        assert_eq!(x, start);
        let c = compose(&path);
        assert_eq!(c.iter().map(|e| e.eval_at(&start)).collect::<Vec<_>>(), [8, 6, 1]);
    }

    #[test]
    fn odd_family_member_at_fifteen_digits() {
        let a = ConstantFamily::Odd.member(7).unwrap();
        assert_eq!(a.to_string(), "8643332");
        assert_eq!(total_k(&a), a);
        let n = DigitNumber::parse("8643332").unwrap();
        assert_ne!(kaprekar_step(&n), n);
    }

    #[test]
    fn single_compose_is_identity_on_the_map() {
        let c = derive_k_functions(6);
        let f = c.get("K4").unwrap();
        assert_eq!(compose(&[f]), f.output);
    }
}
